"""clonelab: a desk-scale workbench for clones of finitary operations.

Subpackages cover the substrate (finite universes, operation tables,
relations), arity-bounded clone generation and the polymorphism/invariant
connection, pointwise and cover-based interpolation closures,
near-unanimity interpolant construction, structural detectors, finite
support permutations, and an exact finite-field recovery pipeline, all
glued together by a certificate-emitting command line tool.
"""

__version__ = "0.1.0"
