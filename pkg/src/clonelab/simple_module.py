"""Exact linear algebra over small finite fields and the cover-to-ring
recovery pipeline.

The pipeline takes a linear map f that agrees with given ring elements
r_0, ..., r_{m-1} on subspaces whose union is the whole space, and
rebuilds f inside the ring span:

  1. enlarge each agreement set to the kernel of f - r_i (still a cover),
  2. translate by r_0 so the first interpolant is zero,
  3. form t as a sum of maps s_i r_i, where each s_i carries the image of
     r_i isomorphically onto a chosen independent target subspace; the
     kernel of t is then contained in the kernel of f,
  4. factor f = u t through t,
  5. re-express u inside the ring span by solving a linear system on a
     basis of t's image.

The final identity f = u t + r_0 is checked by exact matrix arithmetic.
Every computation is over GF(q) with q at most 9; there is nothing
approximate anywhere.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .finite_core import ResourceCapExceeded

DESK_FIELD_CAP = 9
DEFAULT_VECTOR_CAP = 4096


class PipelineError(Exception):
    """A recovery stage failed; carries the stage tag and a witness."""

    def __init__(self, stage: str, message: str, witness=None):
        super().__init__(f"[{stage}] {message}")
        self.stage = stage
        self.witness = witness


def _factor_prime(q: int) -> tuple[int, int]:
    for p in (2, 3, 5, 7):
        if q % p == 0:
            k = 0
            n = q
            while n % p == 0:
                n //= p
                k += 1
            if n == 1:
                return p, k
            break
    raise ValueError(f"{q} is not a prime power")


# reduction rules x^k -> lower-degree polynomial, little-endian coefficients
_REDUCTIONS = {
    4: (1, 1),      # x^2 = 1 + x      over GF(2)
    8: (1, 1, 0),   # x^3 = 1 + x      over GF(2)
    9: (2, 0),      # x^2 = 2          over GF(3)
}


class FiniteField:
    """GF(q) for q a prime power at most 9, with explicit operation tables.

    Elements are the integers 0..q-1; for prime powers the base-p digits
    of an element are the coefficients of its polynomial representative.
    The field axioms are verified exhaustively at construction, so a bad
    reduction rule cannot slip through.
    """

    def __init__(self, order: int):
        if order < 2 or order > DESK_FIELD_CAP:
            raise ValueError(
                f"field order must be between 2 and {DESK_FIELD_CAP}, got {order}"
            )
        p, k = _factor_prime(order)
        self.order = order
        self.char = p
        self.degree = k
        if k == 1:
            self.add_table = tuple(
                tuple((a + b) % p for b in range(p)) for a in range(p)
            )
            self.mul_table = tuple(
                tuple((a * b) % p for b in range(p)) for a in range(p)
            )
        else:
            reduction = _REDUCTIONS[order]
            self.add_table = tuple(
                tuple(self._poly_add(a, b) for b in range(order))
                for a in range(order)
            )
            self.mul_table = tuple(
                tuple(self._poly_mul(a, b, reduction) for b in range(order))
                for a in range(order)
            )
        self.neg_table = tuple(self._find_neg(a) for a in range(order))
        self.inv_table = (None,) + tuple(self._find_inv(a) for a in range(1, order))
        self._verify_axioms()

    # -- digit/polynomial helpers --

    def _digits(self, a: int) -> list[int]:
        out = []
        for _ in range(self.degree):
            out.append(a % self.char)
            a //= self.char
        return out

    def _undigits(self, digits) -> int:
        out = 0
        for d in reversed(digits):
            out = out * self.char + d
        return out

    def _poly_add(self, a: int, b: int) -> int:
        da, db = self._digits(a), self._digits(b)
        return self._undigits([(x + y) % self.char for x, y in zip(da, db)])

    def _poly_mul(self, a: int, b: int, reduction) -> int:
        da, db = self._digits(a), self._digits(b)
        conv = [0] * (2 * self.degree - 1)
        for i, x in enumerate(da):
            for j, y in enumerate(db):
                conv[i + j] = (conv[i + j] + x * y) % self.char
        # fold degrees >= k down through the reduction rule
        for deg in range(len(conv) - 1, self.degree - 1, -1):
            c = conv[deg]
            if c:
                conv[deg] = 0
                for i, r in enumerate(reduction):
                    conv[deg - self.degree + i] = (
                        conv[deg - self.degree + i] + c * r
                    ) % self.char
        return self._undigits(conv[: self.degree])

    def _find_neg(self, a: int) -> int:
        for b in range(self.order):
            if self.add_table[a][b] == 0:
                return b
        raise ValueError(f"no additive inverse for {a}")

    def _find_inv(self, a: int) -> int:
        for b in range(self.order):
            if self.mul_table[a][b] == 1:
                return b
        raise ValueError(f"no multiplicative inverse for {a}")

    def _verify_axioms(self):
        q = self.order
        rng = range(q)
        for a in rng:
            if self.add_table[a][0] != a or self.mul_table[a][1] != a:
                raise ValueError("identity axioms fail")
            for b in rng:
                if self.add_table[a][b] != self.add_table[b][a]:
                    raise ValueError("addition not commutative")
                if self.mul_table[a][b] != self.mul_table[b][a]:
                    raise ValueError("multiplication not commutative")
                for c in rng:
                    if self.add_table[self.add_table[a][b]][c] != self.add_table[a][self.add_table[b][c]]:
                        raise ValueError("addition not associative")
                    if self.mul_table[self.mul_table[a][b]][c] != self.mul_table[a][self.mul_table[b][c]]:
                        raise ValueError("multiplication not associative")
                    if self.mul_table[a][self.add_table[b][c]] != self.add_table[self.mul_table[a][b]][self.mul_table[a][c]]:
                        raise ValueError("distributivity fails")

    # -- arithmetic --

    def add(self, a: int, b: int) -> int:
        return self.add_table[a][b]

    def sub(self, a: int, b: int) -> int:
        return self.add_table[a][self.neg_table[b]]

    def neg(self, a: int) -> int:
        return self.neg_table[a]

    def mul(self, a: int, b: int) -> int:
        return self.mul_table[a][b]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("no inverse of zero")
        return self.inv_table[a]

    def __eq__(self, other):
        return isinstance(other, FiniteField) and self.order == other.order

    def __hash__(self):
        return hash(("FiniteField", self.order))

    def __repr__(self):
        return f"FiniteField({self.order})"


_FIELD_CACHE: dict[int, FiniteField] = {}


def field_of_order(q: int) -> FiniteField:
    if q not in _FIELD_CACHE:
        _FIELD_CACHE[q] = FiniteField(q)
    return _FIELD_CACHE[q]


# --- vectors and matrices ----------------------------------------------------

def vec_add(F: FiniteField, u, v):
    return tuple(F.add(a, b) for a, b in zip(u, v))


def vec_sub(F: FiniteField, u, v):
    return tuple(F.sub(a, b) for a, b in zip(u, v))


def vec_scale(F: FiniteField, c, u):
    return tuple(F.mul(c, a) for a in u)


def zero_vector(dim: int):
    return (0,) * dim


def standard_basis(dim: int):
    return [tuple(1 if j == i else 0 for j in range(dim)) for i in range(dim)]


@dataclass(frozen=True)
class LinearMap:
    """A square matrix over GF(q) acting on column vectors from the left."""

    field: FiniteField
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        dim = len(self.rows)
        for row in self.rows:
            if len(row) != dim:
                raise ValueError("matrix must be square")
            for entry in row:
                if not 0 <= entry < self.field.order:
                    raise ValueError(f"entry {entry} outside the field")

    @property
    def dim(self) -> int:
        return len(self.rows)

    def apply(self, v):
        F = self.field
        out = []
        for row in self.rows:
            acc = 0
            for a, x in zip(row, v):
                acc = F.add(acc, F.mul(a, x))
            out.append(acc)
        return tuple(out)

    def compose(self, other: "LinearMap") -> "LinearMap":
        """Matrix product: self after other."""
        F = self.field
        n = self.dim
        rows = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = 0
                for l in range(n):
                    acc = F.add(acc, F.mul(self.rows[i][l], other.rows[l][j]))
                row.append(acc)
            rows.append(tuple(row))
        return LinearMap(F, tuple(rows))

    def __add__(self, other: "LinearMap") -> "LinearMap":
        F = self.field
        return LinearMap(
            F,
            tuple(
                tuple(F.add(a, b) for a, b in zip(r1, r2))
                for r1, r2 in zip(self.rows, other.rows)
            ),
        )

    def __sub__(self, other: "LinearMap") -> "LinearMap":
        F = self.field
        return LinearMap(
            F,
            tuple(
                tuple(F.sub(a, b) for a, b in zip(r1, r2))
                for r1, r2 in zip(self.rows, other.rows)
            ),
        )

    def is_zero(self) -> bool:
        return all(all(e == 0 for e in row) for row in self.rows)

    def scale(self, c: int) -> "LinearMap":
        F = self.field
        return LinearMap(F, tuple(tuple(F.mul(c, e) for e in row) for row in self.rows))


def zero_map(F: FiniteField, dim: int) -> LinearMap:
    return LinearMap(F, tuple((0,) * dim for _ in range(dim)))


def identity_map(F: FiniteField, dim: int) -> LinearMap:
    return LinearMap(
        F, tuple(tuple(1 if i == j else 0 for j in range(dim)) for i in range(dim))
    )


def rref(F: FiniteField, rows):
    """Reduced row echelon form; returns (rows, pivot_columns)."""
    rows = [list(r) for r in rows]
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = None
        for i in range(r, nrows):
            if rows[i][c] != 0:
                pivot = i
                break
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = F.inv(rows[r][c])
        rows[r] = [F.mul(inv, x) for x in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][c] != 0:
                factor = rows[i][c]
                rows[i] = [F.sub(x, F.mul(factor, y)) for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return [tuple(row) for row in rows], pivots


def rank_of_vectors(F: FiniteField, vectors) -> int:
    vectors = [v for v in vectors]
    if not vectors:
        return 0
    _, pivots = rref(F, vectors)
    return len(pivots)


def independent_subset(F: FiniteField, vectors):
    """Greedy choice of a basis from the given vectors, in order."""
    chosen = []
    for v in vectors:
        if any(x != 0 for x in v) and rank_of_vectors(F, chosen + [v]) > len(chosen):
            chosen.append(tuple(v))
    return chosen


def kernel_basis(t: LinearMap):
    """Basis of the null space, from the RREF free columns."""
    F = t.field
    n = t.dim
    reduced, pivots = rref(F, t.rows)
    pivot_set = set(pivots)
    free = [c for c in range(n) if c not in pivot_set]
    basis = []
    for fc in free:
        v = [0] * n
        v[fc] = 1
        for r, pc in enumerate(pivots):
            v[pc] = F.neg(reduced[r][fc])
        basis.append(tuple(v))
    return basis


def image_basis(t: LinearMap):
    """Basis of the column space, as a greedy independent subset of the
    columns (so each basis vector is an actual image t(e_j))."""
    F = t.field
    n = t.dim
    cols = [tuple(t.rows[i][j] for i in range(n)) for j in range(n)]
    return independent_subset(F, cols)


def solve(F: FiniteField, rows, rhs):
    """One solution of the linear system rows * x = rhs, or None."""
    if not rows:
        return ()
    ncols = len(rows[0])
    augmented = [list(r) + [b] for r, b in zip(rows, rhs)]
    reduced, pivots = rref(F, augmented)
    if ncols in pivots:
        return None
    x = [0] * ncols
    for r, pc in enumerate(pivots):
        x[pc] = reduced[r][ncols]
    return tuple(x)


def invert_matrix(F: FiniteField, rows):
    """Inverse of a square matrix, or None if singular."""
    n = len(rows)
    augmented = [list(r) + [1 if i == j else 0 for j in range(n)] for i, r in enumerate(rows)]
    reduced, pivots = rref(F, augmented)
    if pivots[:n] != list(range(n)):
        return None
    return tuple(tuple(reduced[i][n:]) for i in range(n))


def map_from_basis_images(F: FiniteField, basis, images, dim: int) -> LinearMap:
    """The unique linear map sending each basis vector to its image and
    determined by those values (basis must have full length dim)."""
    if len(basis) != dim:
        raise ValueError("need a full basis to determine a map")
    P = tuple(tuple(basis[j][i] for j in range(dim)) for i in range(dim))
    P_inv = invert_matrix(F, P)
    if P_inv is None:
        raise ValueError("basis vectors are dependent")
    Q = tuple(tuple(images[j][i] for j in range(dim)) for i in range(dim))
    return LinearMap(F, Q).compose(LinearMap(F, P_inv))


def extend_to_basis(F: FiniteField, vectors, dim: int):
    """Extend an independent family by standard vectors to a full basis."""
    basis = list(vectors)
    for e in standard_basis(dim):
        if len(basis) == dim:
            break
        if rank_of_vectors(F, basis + [e]) > len(basis):
            basis.append(e)
    if len(basis) != dim:
        raise ValueError("could not extend to a basis")
    return basis


def all_vectors(F: FiniteField, dim: int, cap: int = DEFAULT_VECTOR_CAP):
    total = F.order ** dim
    if total > cap:
        raise ResourceCapExceeded(f"{total} vectors exceed cap {cap}")
    return [tuple(v) for v in itertools.product(range(F.order), repeat=dim)]


# --- the cover instance and pipeline stages -----------------------------------

@dataclass(frozen=True)
class SubspaceCoverInstance:
    """A target map, interpolant maps, and agreement subspaces (bases).

    Construction checks shapes and the agreement of f with r_i on each
    block's basis (exact for the whole subspace, by linearity). Whether
    the blocks cover the full space is checked by the pipeline stages
    that rely on it, by exhaustive vector enumeration.
    """

    field: FiniteField
    dim: int
    f: LinearMap
    interpolants: tuple[LinearMap, ...]
    blocks: tuple[tuple[tuple[int, ...], ...], ...]

    def __post_init__(self):
        if not self.interpolants:
            raise ValueError("need at least one interpolant")
        if len(self.interpolants) != len(self.blocks):
            raise ValueError("one block per interpolant required")
        for mat in (self.f,) + self.interpolants:
            if mat.field != self.field or mat.dim != self.dim:
                raise ValueError("matrix shape or field mismatch")
        for r_i, block in zip(self.interpolants, self.blocks):
            for v in block:
                if len(v) != self.dim:
                    raise ValueError("block vector of wrong dimension")
                if self.f.apply(v) != r_i.apply(v):
                    raise ValueError(
                        f"target disagrees with its interpolant at block vector {v}"
                    )


def enlarge_to_kernels(
    inst: SubspaceCoverInstance, vector_cap: int = DEFAULT_VECTOR_CAP
) -> SubspaceCoverInstance:
    """Replace each block by the kernel of f - r_i and confirm the kernels
    cover the space; a vector matched by no interpolant is reported."""
    kernels = [kernel_basis(inst.f - r_i) for r_i in inst.interpolants]
    diffs = [inst.f - r_i for r_i in inst.interpolants]
    for v in all_vectors(inst.field, inst.dim, cap=vector_cap):
        if not any(d.apply(v) == zero_vector(inst.dim) for d in diffs):
            raise PipelineError(
                "enlarge",
                f"vector {v} is matched by no interpolant; kernels do not cover",
                witness=v,
            )
    return SubspaceCoverInstance(
        inst.field,
        inst.dim,
        inst.f,
        inst.interpolants,
        tuple(tuple(b) for b in kernels),
    )


def normalize(inst: SubspaceCoverInstance) -> SubspaceCoverInstance:
    """Translate everything by the first interpolant, making it zero.
    Agreement sets are unchanged."""
    r0 = inst.interpolants[0]
    return SubspaceCoverInstance(
        inst.field,
        inst.dim,
        inst.f - r0,
        tuple(r_i - r0 for r_i in inst.interpolants),
        inst.blocks,
    )


@dataclass(frozen=True)
class TargetAssignment:
    """Chosen independent target subspaces and carrier maps: s_i maps the
    image of r_i isomorphically onto the span of targets[i] and kills a
    complement of that image."""

    targets: tuple[tuple[tuple[int, ...], ...], ...]
    carriers: tuple[LinearMap, ...]


def choose_targets(inst: SubspaceCoverInstance) -> TargetAssignment:
    """Assign pairwise independent target subspaces spanned by fresh
    standard basis vectors, one block of dimension rank(r_i) per
    interpolant; fails when the ranks do not fit into the space."""
    F = inst.field
    dim = inst.dim
    image_bases = [image_basis(r_i) for r_i in inst.interpolants]
    total = sum(len(b) for b in image_bases)
    if total > dim:
        raise PipelineError(
            "targets",
            f"interpolant image dimensions sum to {total} > {dim}; "
            "no room for independent targets",
        )
    basis_pool = standard_basis(dim)
    cursor = 0
    targets = []
    carriers = []
    for r_i, w_basis in zip(inst.interpolants, image_bases):
        v_basis = basis_pool[cursor:cursor + len(w_basis)]
        cursor += len(w_basis)
        targets.append(tuple(v_basis))
        full = extend_to_basis(F, w_basis, dim)
        images = list(v_basis) + [zero_vector(dim)] * (dim - len(w_basis))
        carriers.append(map_from_basis_images(F, full, images, dim))
    return TargetAssignment(tuple(targets), tuple(carriers))


@dataclass(frozen=True)
class BuiltSum:
    t: LinearMap
    kernel_vectors: tuple[tuple[int, ...], ...]


def build_t(
    inst: SubspaceCoverInstance, targets, carriers
) -> BuiltSum:
    """Form t as the sum of the carried interpolants and verify the
    kernel containment ker(t) <= ker(f) on a kernel basis.

    Preconditions checked here: target spans are pairwise independent
    with the right dimensions, and each carrier restricts to a bijection
    from the image of r_i onto its target span. The caller must have
    established the cover property (enlarge_to_kernels does), which the
    containment proof relies on.
    """
    F = inst.field
    dim = inst.dim
    flat_targets = [v for block in targets for v in block]
    if sum(len(b) for b in targets) > dim:
        raise PipelineError("build_t", "target dimensions overflow the space")
    if rank_of_vectors(F, flat_targets) != len(flat_targets):
        raise PipelineError("build_t", "target subspaces are not independent")
    t = zero_map(F, dim)
    for r_i, v_block, s_i in zip(inst.interpolants, targets, carriers):
        w_basis = image_basis(r_i)
        if len(w_basis) != len(v_block):
            raise PipelineError(
                "build_t", "target dimension differs from interpolant image rank"
            )
        carried = [s_i.apply(w) for w in w_basis]
        if rank_of_vectors(F, carried) != len(carried):
            raise PipelineError(
                "build_t", "carrier is not injective on the interpolant image"
            )
        for w in carried:
            if rank_of_vectors(F, list(v_block) + [w]) != len(v_block):
                raise PipelineError(
                    "build_t", "carrier image leaves the assigned target span"
                )
        t = t + s_i.compose(r_i)
    kernel = kernel_basis(t)
    for v in kernel:
        if inst.f.apply(v) != zero_vector(dim):
            raise PipelineError(
                "build_t",
                f"kernel containment fails at {v}: t kills it but f does not",
                witness=v,
            )
    return BuiltSum(t, tuple(kernel))


def factor_through(t: LinearMap, f: LinearMap) -> LinearMap:
    """A map u with u t = f, given ker(t) <= ker(f).

    u is pinned on a basis of t's image by u(t(e_j)) = f(e_j) and
    extended by zero on a complement; the identity u t = f is verified
    exactly before returning.
    """
    F = t.field
    dim = t.dim
    for v in kernel_basis(t):
        if f.apply(v) != zero_vector(dim):
            raise PipelineError(
                "factor", f"kernel containment violated at {v}", witness=v
            )
    image_vecs = []
    values = []
    for e in standard_basis(dim):
        w = t.apply(e)
        if rank_of_vectors(F, image_vecs + [w]) > len(image_vecs):
            image_vecs.append(w)
            values.append(f.apply(e))
    full = extend_to_basis(F, image_vecs, dim)
    images = values + [zero_vector(dim)] * (dim - len(values))
    u = map_from_basis_images(F, full, images, dim)
    if u.compose(t).rows != f.rows:
        raise PipelineError("factor", "constructed factor does not satisfy u t = f")
    return u


@dataclass(frozen=True)
class DensityResult:
    coefficients: tuple[int, ...]
    combination: LinearMap


def density_interpolate(target: LinearMap, points, ring_span) -> DensityResult | None:
    """Solve for a span combination agreeing with the target on the given
    vectors. Absence of a solution is a value, not an error."""
    F = target.field
    dim = target.dim
    span = list(ring_span)
    rows = []
    rhs = []
    for v in points:
        images = [M.apply(v) for M in span]
        for i in range(dim):
            rows.append([img[i] for img in images])
            rhs.append(target.apply(v)[i])
    if not rows:
        coeffs = tuple([0] * len(span))
        return DensityResult(coeffs, zero_map(F, dim))
    solution = solve(F, rows, rhs)
    if solution is None:
        return None
    combo = zero_map(F, dim)
    for c, M in zip(solution, span):
        if c:
            combo = combo + M.scale(c)
    return DensityResult(tuple(solution), combo)


def matrix_unit_span(F: FiniteField, dim: int) -> list[LinearMap]:
    """The standard basis of the full matrix ring."""
    out = []
    for i in range(dim):
        for j in range(dim):
            rows = [[0] * dim for _ in range(dim)]
            rows[i][j] = 1
            out.append(LinearMap(F, tuple(tuple(r) for r in rows)))
    return out


@dataclass(frozen=True)
class RecoveryResult:
    r0: LinearMap
    t: LinearMap
    u: LinearMap
    u_coefficients: tuple[int, ...]
    recovered: LinearMap


def recover(inst: SubspaceCoverInstance, ring_span=None) -> RecoveryResult:
    """Full pipeline; the result's recovered matrix equals the instance's
    target exactly or a PipelineError identifies the failing stage."""
    F = inst.field
    dim = inst.dim
    if ring_span is None:
        ring_span = matrix_unit_span(F, dim)
    r0 = inst.interpolants[0]

    enlarged = enlarge_to_kernels(inst)
    normalized = normalize(enlarged)
    assignment = choose_targets(normalized)
    built = build_t(normalized, assignment.targets, assignment.carriers)
    u_raw = factor_through(built.t, normalized.f)
    density = density_interpolate(u_raw, image_basis(built.t), ring_span)
    if density is None:
        raise PipelineError(
            "density", "factor map is not interpolable inside the ring span"
        )
    u = density.combination
    recovered = u.compose(built.t) + r0
    if recovered.rows != inst.f.rows:
        raise PipelineError("recover", "reassembled map differs from the target")
    return RecoveryResult(r0, built.t, u, density.coefficients, recovered)


# --- randomized instances ------------------------------------------------------

def random_instance(F: FiniteField, dim: int, rng) -> SubspaceCoverInstance:
    """A valid random instance built from a pencil of hyperplanes.

    Two independent functionals define q+1 hyperplanes that cover the
    space. The target is a random translate (by r_0) of a rank-one map
    vanishing on the first hyperplane; the other interpolants extend the
    target's restriction to their hyperplane by zero. The construction
    keeps the interpolant image ranks summing below the dimension, as the
    target-assignment stage requires.
    """
    q = F.order
    if dim < max(2, q):
        raise ValueError(f"need dim >= {max(2, q)} for a covering pencil over GF({q})")

    def random_matrix():
        return LinearMap(
            F,
            tuple(
                tuple(rng.randrange(q) for _ in range(dim)) for _ in range(dim)
            ),
        )

    while True:
        phi1 = tuple(rng.randrange(q) for _ in range(dim))
        phi2 = tuple(rng.randrange(q) for _ in range(dim))
        if rank_of_vectors(F, [phi1, phi2]) == 2:
            break
    # representatives of the pencil: phi1 + c*phi2 for c in F, then phi2
    functionals = [
        tuple(F.add(a, F.mul(c, b)) for a, b in zip(phi1, phi2)) for c in range(q)
    ] + [phi2]
    hyperplanes = [
        kernel_basis(LinearMap(F, (func,) + tuple(zero_vector(dim) for _ in range(dim - 1))))
        for func in functionals
    ]

    w = tuple(rng.randrange(q) for _ in range(dim))
    f_prime = LinearMap(
        F, tuple(tuple(F.mul(w[i], phi1[j]) for j in range(dim)) for i in range(dim))
    )
    r0 = random_matrix()
    f = f_prime + r0

    interpolants = [r0]
    for basis in hyperplanes[1:]:
        full = extend_to_basis(F, basis, dim)
        images = [f_prime.apply(v) for v in basis] + [zero_vector(dim)] * (dim - len(basis))
        r_prime = map_from_basis_images(F, full, images, dim)
        interpolants.append(r_prime + r0)
    return SubspaceCoverInstance(
        F, dim, f, tuple(interpolants), tuple(tuple(b) for b in hyperplanes)
    )


# --- JSON interchange ------------------------------------------------------------

def matrix_to_json(mat: LinearMap) -> list:
    return [list(row) for row in mat.rows]


def matrix_from_json(F: FiniteField, data) -> LinearMap:
    return LinearMap(F, tuple(tuple(int(x) for x in row) for row in data))


def instance_to_json(inst: SubspaceCoverInstance) -> dict:
    return {
        "field": inst.field.order,
        "dim": inst.dim,
        "f": matrix_to_json(inst.f),
        "interpolants": [matrix_to_json(r) for r in inst.interpolants],
        "blocks": [[list(v) for v in block] for block in inst.blocks],
    }


def instance_from_json(data: dict) -> SubspaceCoverInstance:
    F = field_of_order(int(data["field"]))
    dim = int(data["dim"])
    f = matrix_from_json(F, data["f"])
    interpolants = tuple(matrix_from_json(F, r) for r in data["interpolants"])
    blocks = tuple(
        tuple(tuple(int(x) for x in v) for v in block) for block in data["blocks"]
    )
    return SubspaceCoverInstance(F, dim, f, interpolants, blocks)
