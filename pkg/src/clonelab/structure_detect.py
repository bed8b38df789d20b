"""Structural decision procedures: essential unarity, primitive positive
formula evaluation, product-operation and product-clone detection, module
compatibility, and principal-ideal clone membership.

All detectors are pure functions over immutable inputs.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .clone_engine import CloneFragment, contains, fragments_equal
from .finite_core import (
    Operation,
    PreservationWitness,
    Relation,
    Universe,
    graph,
    operation_from_callable,
    preservation_witness,
    preserves,
    rho3,
)
from .interpolation import local_closure_fragment
from .ultralocal import ultra_closure_fragment


# --- primitive positive formulas -------------------------------------------

@dataclass(frozen=True)
class PPFormula:
    """Existentially quantified conjunction of relational atoms.

    atoms are (relation name, variable tuple) pairs; names resolve in the
    environment supplied at evaluation time.
    """

    free_vars: tuple[str, ...]
    bound_vars: tuple[str, ...]
    atoms: tuple[tuple[str, tuple[str, ...]], ...]

    def __post_init__(self):
        names = set(self.free_vars) | set(self.bound_vars)
        if len(names) != len(self.free_vars) + len(self.bound_vars):
            raise ValueError("variable names must be distinct")
        for _, vars_ in self.atoms:
            for v in vars_:
                if v not in names:
                    raise ValueError(f"atom uses undeclared variable {v!r}")


def eval_pp_formula(
    formula: PPFormula, env: dict[str, Relation], universe: Universe
) -> Relation:
    """Evaluate by joining the atoms' tuple sets one by one, then
    projecting onto the free variables. No constraint propagation; the
    universes here are tiny."""
    # rows: assignments to the ordered variable list seen so far
    bound_order: list[str] = []
    rows: set[tuple[int, ...]] = {()}
    for name, vars_ in formula.atoms:
        if name not in env:
            raise ValueError(f"unresolved relation name {name!r}")
        rel = env[name]
        if rel.arity != len(vars_):
            raise ValueError(
                f"atom {name}{vars_} has {len(vars_)} variables, relation has arity {rel.arity}"
            )
        fresh = []
        for v in vars_:
            if v not in bound_order and v not in fresh:
                fresh.append(v)
        new_rows = set()
        for row in rows:
            for tup in rel.tuples:
                assignment = dict(zip(bound_order, row))
                consistent = True
                for v, value in zip(vars_, tup):
                    if v in assignment and assignment[v] != value:
                        consistent = False
                        break
                    assignment[v] = value
                if consistent:
                    new_rows.add(row + tuple(assignment[v] for v in fresh))
        bound_order.extend(fresh)
        rows = new_rows
    # Free variables never mentioned in an atom range over the whole universe.
    missing = [v for v in formula.free_vars if v not in bound_order]
    if missing:
        expanded = set()
        for row in rows:
            for values in universe.tuples(len(missing)):
                expanded.add(row + values)
        bound_order.extend(missing)
        rows = expanded
    positions = {v: i for i, v in enumerate(bound_order)}
    out = frozenset(
        tuple(row[positions[v]] for v in formula.free_vars) for row in rows
    )
    return Relation(universe, len(formula.free_vars), out)


def psi_formula() -> PPFormula:
    """exists y (rho3(x0,x1,y) and rho3(y,x2,x3))."""
    return PPFormula(
        free_vars=("x0", "x1", "x2", "x3"),
        bound_vars=("y",),
        atoms=(("rho3", ("x0", "x1", "y")), ("rho3", ("y", "x2", "x3"))),
    )


def phi_formula() -> PPFormula:
    """Conjunction of psi(x0,x1,x2,x3) and psi(x1,x0,x2,x3); defines the
    4-ary relation {a=b or c=d}."""
    return PPFormula(
        free_vars=("x0", "x1", "x2", "x3"),
        bound_vars=("y0", "y1"),
        atoms=(
            ("rho3", ("x0", "x1", "y0")),
            ("rho3", ("y0", "x2", "x3")),
            ("rho3", ("x1", "x0", "y1")),
            ("rho3", ("y1", "x2", "x3")),
        ),
    )


def is_essentially_unary(op: Operation) -> bool:
    """Relational characterization of dependence on at most one variable."""
    return preserves(op, rho3(op.universe))


# --- product universes ------------------------------------------------------

@dataclass(frozen=True)
class ProductUniverse:
    """A universe presented as a product, with the row-major pairing
    a*|right| + b fixed once and referenced by every product certificate."""

    left: Universe
    right: Universe

    @property
    def paired(self) -> Universe:
        return Universe(self.left.size * self.right.size)

    def pair(self, a: int, b: int) -> int:
        return a * self.right.size + b

    def unpair(self, u: int) -> tuple[int, int]:
        return divmod(u, self.right.size)


def star_operation(pu: ProductUniverse) -> Operation:
    """The rectangular band operation: (a1,b1) * (a2,b2) = (a1,b2)."""
    def star(u, v):
        a, _ = pu.unpair(u)
        _, b = pu.unpair(v)
        return pu.pair(a, b)

    return operation_from_callable(pu.paired, 2, star)


def gamma_star(pu: ProductUniverse) -> Relation:
    return graph(star_operation(pu))


def product_operation(pu: ProductUniverse, g: Operation, h: Operation) -> Operation:
    """Coordinatewise action of g on the left factor and h on the right."""
    if g.universe != pu.left or h.universe != pu.right:
        raise ValueError("factor operations must live on the product's factors")
    if g.arity != h.arity:
        raise ValueError("factor operations must share one arity")

    def combined(*args):
        pairs = [pu.unpair(u) for u in args]
        a = g.table[g.index_of(tuple(p[0] for p in pairs))]
        b = h.table[h.index_of(tuple(p[1] for p in pairs))]
        return pu.pair(a, b)

    return operation_from_callable(pu.paired, g.arity, combined)


@dataclass(frozen=True)
class DecompositionResult:
    factor_left: Operation | None
    factor_right: Operation | None
    witness: PreservationWitness | None

    def __bool__(self) -> bool:
        return self.factor_left is not None


def decompose_product(pu: ProductUniverse, f: Operation) -> DecompositionResult:
    """Try to split f into factor operations.

    The left factor is read off by freezing the right coordinates to the
    first element of the right factor (and symmetrically); the candidate
    product is then compared against f on the whole table rather than
    trusting well-definedness. On failure the witness is the first
    violation of the rectangular band operation's graph.
    """
    if f.universe != pu.paired:
        raise ValueError("operation does not live on the paired universe")
    n = f.arity

    def left_part(*avec):
        u = tuple(pu.pair(a, 0) for a in avec)
        return pu.unpair(f.table[f.index_of(u)])[0]

    def right_part(*bvec):
        u = tuple(pu.pair(0, b) for b in bvec)
        return pu.unpair(f.table[f.index_of(u)])[1]

    f_a = operation_from_callable(pu.left, n, left_part)
    f_b = operation_from_callable(pu.right, n, right_part)
    if product_operation(pu, f_a, f_b).table == f.table:
        return DecompositionResult(f_a, f_b, None)
    return DecompositionResult(None, None, preservation_witness(f, gamma_star(pu)))


@dataclass(frozen=True)
class ProductCloneResult:
    is_product: bool
    factor_left: CloneFragment | None
    factor_right: CloneFragment | None
    failing_member: Operation | None

    def __bool__(self) -> bool:
        return self.is_product


def is_product_clone(fragment: CloneFragment, pu: ProductUniverse) -> ProductCloneResult:
    """A fragment is a product exactly when every member splits and the
    rectangular band operation is a member."""
    if fragment.universe != pu.paired:
        raise ValueError("fragment does not live on the paired universe")
    if fragment.arity_bound < 2:
        raise ValueError("product detection needs arity bound >= 2")
    left_members: dict[int, list[Operation]] = {}
    right_members: dict[int, list[Operation]] = {}
    for j in sorted(fragment.members):
        left_members[j] = []
        right_members[j] = []
        seen_left, seen_right = set(), set()
        for op in fragment.members[j]:
            split = decompose_product(pu, op)
            if not split:
                return ProductCloneResult(False, None, None, op)
            if split.factor_left.table not in seen_left:
                seen_left.add(split.factor_left.table)
                left_members[j].append(split.factor_left)
            if split.factor_right.table not in seen_right:
                seen_right.add(split.factor_right.table)
                right_members[j].append(split.factor_right)
    if not contains(fragment, star_operation(pu)):
        return ProductCloneResult(False, None, None, None)
    bound = fragment.arity_bound
    left = CloneFragment(
        pu.left, bound,
        tuple(op for j in sorted(left_members) for op in left_members[j]),
        {j: tuple(ops) for j, ops in left_members.items()},
    )
    right = CloneFragment(
        pu.right, bound,
        tuple(op for j in sorted(right_members) for op in right_members[j]),
        {j: tuple(ops) for j, ops in right_members.items()},
    )
    return ProductCloneResult(True, left, right, None)


def product_clone(
    P: CloneFragment, Q: CloneFragment, arity_bound: int
) -> CloneFragment:
    """The fragment of the product clone: arity-n members are exactly the
    products of an arity-n member of P with one of Q."""
    if arity_bound > min(P.arity_bound, Q.arity_bound):
        raise ValueError("arity bound exceeds a factor's bound")
    pu = ProductUniverse(P.universe, Q.universe)
    members = {}
    for j in range(1, arity_bound + 1):
        members[j] = tuple(
            product_operation(pu, g, h)
            for g, h in itertools.product(P.members[j], Q.members[j])
        )
    flat = tuple(op for ops in members.values() for op in ops)
    return CloneFragment(pu.paired, arity_bound, flat, members)


def closure_commutation_check(
    P: CloneFragment,
    Q: CloneFragment,
    kappa,
    arity_bound: int,
    closure: str = "ultra",
) -> bool:
    """Compare closing the product against the product of the closures,
    as an exact fragment equality at the given arity bound."""
    if closure == "ultra":
        close = ultra_closure_fragment
    elif closure == "local":
        close = local_closure_fragment
    else:
        raise ValueError(f"unknown closure kind {closure!r}")
    product = product_clone(P, Q, arity_bound)
    left_side = close(product, kappa, arity_bound)
    right_side = product_clone(
        close(P, kappa, arity_bound), close(Q, kappa, arity_bound), arity_bound
    )
    return fragments_equal(left_side, right_side)


# --- module compatibility ----------------------------------------------------

@dataclass(frozen=True)
class AbelianGroup:
    """An abelian group presented by tables; validated on construction."""

    universe: Universe
    add: Operation
    neg: Operation
    zero: int

    def __post_init__(self):
        m = self.universe.size
        if self.add.universe != self.universe or self.add.arity != 2:
            raise ValueError("addition must be a binary operation on the universe")
        if self.neg.universe != self.universe or self.neg.arity != 1:
            raise ValueError("negation must be unary on the universe")
        if not 0 <= self.zero < m:
            raise ValueError("zero element outside universe")
        plus = lambda a, b: self.add.table[self.add.index_of((a, b))]
        for a in range(m):
            if plus(a, self.zero) != a:
                raise ValueError("zero is not a neutral element")
            if plus(a, self.neg.table[a]) != self.zero:
                raise ValueError("negation is not an inverse")
            for b in range(m):
                if plus(a, b) != plus(b, a):
                    raise ValueError("addition is not commutative")
                for c in range(m):
                    if plus(plus(a, b), c) != plus(a, plus(b, c)):
                        raise ValueError("addition is not associative")


def gamma_plus(group: AbelianGroup) -> Relation:
    """Graph of the group addition, {(a, b, a+b)}."""
    return graph(group.add)


def module_compatible(f: Operation, group: AbelianGroup) -> bool:
    """Whether f is a term operation candidate of a module over the given
    abelian group: preservation of the addition graph."""
    if f.universe != group.universe:
        raise ValueError("operation and group universes differ")
    return preserves(f, gamma_plus(group))


# --- principal-ideal clones ---------------------------------------------------

def goldstern_shelah_member(f: Operation, a: int) -> bool:
    """Membership in the clone attached to the principal maximal ideal of
    sets avoiding the point a: every diagonal image f(S,...,S) of a set S
    avoiding a must again avoid a."""
    universe = f.universe
    if not 0 <= a < universe.size:
        raise ValueError("ideal point outside universe")
    others = [x for x in universe.elements() if x != a]
    for size in range(len(others) + 1):
        for subset in itertools.combinations(others, size):
            for args in itertools.product(subset, repeat=f.arity):
                if f.table[f.index_of(args)] == a:
                    return False
    return True
