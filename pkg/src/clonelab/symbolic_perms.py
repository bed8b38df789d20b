"""Finite-support permutations of the natural numbers.

The base set is all of the naturals; a permutation stores only its moved
points, so membership checks (evenness, support bounds) are finite even
though the ambient set is not. Cover witnesses and interpolability checks
are carried out inside an explicit finite window [0, N) and every claim
they back is window-relative.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass


class FinSuppPermutation:
    """A bijection of the naturals moving finitely many points.

    Only non-fixed points are stored; the stored map must be a bijection
    of its key set onto itself.
    """

    __slots__ = ("moved",)

    def __init__(self, moved: dict[int, int]):
        cleaned = {}
        for k, v in moved.items():
            k, v = int(k), int(v)
            if k < 0 or v < 0:
                raise ValueError("permutations act on the naturals")
            if k != v:
                cleaned[k] = v
        if len(set(cleaned.values())) != len(cleaned):
            raise ValueError("moved map is not injective")
        if set(cleaned.keys()) != set(cleaned.values()):
            raise ValueError("moved map does not close up: domain != range")
        self.moved = cleaned

    def __call__(self, x: int) -> int:
        return self.moved.get(x, x)

    def __eq__(self, other) -> bool:
        return isinstance(other, FinSuppPermutation) and self.moved == other.moved

    def __hash__(self) -> int:
        return hash(frozenset(self.moved.items()))

    def __repr__(self) -> str:
        if not self.moved:
            return "FinSuppPermutation(identity)"
        cyc = "".join(
            "(" + " ".join(map(str, c)) + ")" for c in self.cycles()
        )
        return f"FinSuppPermutation({cyc})"

    @property
    def support(self) -> frozenset[int]:
        return frozenset(self.moved)

    def cycles(self) -> list[tuple[int, ...]]:
        """Nontrivial cycles, each rotated to start at its least point,
        sorted by that point."""
        seen = set()
        out = []
        for start in sorted(self.moved):
            if start in seen:
                continue
            cycle = [start]
            seen.add(start)
            nxt = self.moved[start]
            while nxt != start:
                cycle.append(nxt)
                seen.add(nxt)
                nxt = self.moved[nxt]
            out.append(tuple(cycle))
        return out

    def is_even(self) -> bool:
        return sum(len(c) - 1 for c in self.cycles()) % 2 == 0


def identity() -> FinSuppPermutation:
    return FinSuppPermutation({})


def transposition(a: int, b: int) -> FinSuppPermutation:
    if a == b:
        raise ValueError("a transposition needs two distinct points")
    return FinSuppPermutation({a: b, b: a})


def from_cycles(cycles) -> FinSuppPermutation:
    moved: dict[int, int] = {}
    for cycle in cycles:
        cycle = tuple(cycle)
        if len(set(cycle)) != len(cycle):
            raise ValueError(f"cycle {cycle} repeats a point")
        for point in cycle:
            if point in moved:
                raise ValueError("cycles are not disjoint")
        for i, point in enumerate(cycle):
            moved[point] = cycle[(i + 1) % len(cycle)]
    return FinSuppPermutation(moved)


def compose(p: FinSuppPermutation, q: FinSuppPermutation) -> FinSuppPermutation:
    """(p after q): x maps to p(q(x))."""
    points = set(p.moved) | set(q.moved)
    return FinSuppPermutation({x: p(q(x)) for x in points})


def inverse(p: FinSuppPermutation) -> FinSuppPermutation:
    return FinSuppPermutation({v: k for k, v in p.moved.items()})


def parity(p: FinSuppPermutation) -> str:
    """Transposition-count parity from the cycle decomposition."""
    return "even" if p.is_even() else "odd"


def in_alt(p: FinSuppPermutation) -> bool:
    return p.is_even()


def in_alt_B(p: FinSuppPermutation, support_bound) -> bool:
    return p.is_even() and p.support <= frozenset(support_bound)


@dataclass(frozen=True)
class FinSuppInjection:
    """An injective self-map of the naturals that is the identity outside
    the finite set support_bound. With a finite bound such a map is
    forced to permute the bound, but the type keeps the intended reading."""

    support_bound: frozenset[int]
    moved: tuple[tuple[int, int], ...]

    def __post_init__(self):
        mapping = dict(self.moved)
        if len(mapping) != len(self.moved):
            raise ValueError("duplicate keys in moved map")
        if len(set(mapping.values())) != len(mapping):
            raise ValueError("moved map is not injective")
        for k, v in mapping.items():
            if k == v:
                raise ValueError("fixed points must not be stored")
            if k not in self.support_bound:
                raise ValueError(f"moved point {k} outside the support bound")
            if v not in self.support_bound:
                # identity off the bound makes v a second preimage of itself
                raise ValueError(f"value {v} outside the support bound breaks injectivity")

    def __call__(self, x: int) -> int:
        return dict(self.moved).get(x, x)

    @classmethod
    def from_mapping(cls, support_bound, mapping: dict[int, int]) -> "FinSuppInjection":
        moved = tuple(sorted((k, v) for k, v in mapping.items() if k != v))
        return cls(frozenset(support_bound), moved)


def in_inj_B(f: FinSuppInjection, support_bound) -> bool:
    bound = frozenset(support_bound)
    mapping = dict(f.moved)
    if len(set(mapping.values())) != len(mapping):
        return False
    return all(k in bound and v in bound for k, v in mapping.items())


def compose_injections(f: FinSuppInjection, g: FinSuppInjection) -> FinSuppInjection:
    bound = f.support_bound | g.support_bound
    mapping = {x: f(g(x)) for x in bound}
    return FinSuppInjection.from_mapping(bound, mapping)


# --- cover witnesses inside a window ----------------------------------------

@dataclass(frozen=True)
class SymbolicCover:
    """A partition of the window [0, N); queries outside the window are
    rejected by the operations using it."""

    window: int
    blocks: tuple[frozenset[int], ...]

    def __post_init__(self):
        seen: set[int] = set()
        for block in self.blocks:
            if not block:
                raise ValueError("empty blocks are rejected")
            if block & seen:
                raise ValueError("blocks must be disjoint")
            seen |= block
        if seen != set(range(self.window)):
            raise ValueError("blocks must partition the window")


@dataclass(frozen=True)
class AltCoverWitness:
    k: int
    a: int
    b: int
    cover: SymbolicCover
    interpolants: dict[frozenset[int], FinSuppPermutation]


def alt_cover_witness(k: int, a: int, b: int, window: int) -> AltCoverWitness:
    """Window partition witnessing that the transposition (a b) agrees
    with an even permutation on every union of at most k blocks.

    The partition puts a and b into the first block and uses consecutive
    runs of equal size (the last block absorbs the remainder), so every
    block has at least two points. For a subfamily containing the first
    block the witnessing permutation is (a b)(c d) with c, d drawn from
    the lowest-index block outside the subfamily; otherwise the identity
    already agrees.
    """
    if a == b:
        raise ValueError("need two distinct moved points")
    if a >= window or b >= window or a < 0 or b < 0:
        raise ValueError("moved points must lie inside the window")
    nblocks = k + 1
    size = window // nblocks
    if size < 2:
        raise ValueError(
            f"window {window} too small for {nblocks} blocks of size >= 2"
        )
    order = [a, b] + sorted(set(range(window)) - {a, b})
    blocks = []
    for i in range(nblocks):
        if i < nblocks - 1:
            blocks.append(frozenset(order[i * size:(i + 1) * size]))
        else:
            blocks.append(frozenset(order[i * size:]))
    cover = SymbolicCover(window, tuple(blocks))

    target = transposition(a, b)
    interpolants: dict[frozenset[int], FinSuppPermutation] = {}
    for r in range(min(k, nblocks) + 1):
        for combo in itertools.combinations(range(nblocks), r):
            key = frozenset(combo)
            if 0 not in key:
                interpolant = identity()
            else:
                outside = min(i for i in range(nblocks) if i not in key)
                c, d = sorted(blocks[outside])[:2]
                interpolant = compose(target, transposition(c, d))
            union = set().union(*(blocks[i] for i in key)) if key else set()
            for point in union:
                if interpolant(point) != target(point):
                    raise AssertionError(
                        f"constructed interpolant disagrees at {point}"
                    )
            interpolants[key] = interpolant
    return AltCoverWitness(k, a, b, cover, interpolants)


def verify_alt_cover(witness: AltCoverWitness) -> bool:
    """Recheck a cover witness from scratch."""
    try:
        cover = SymbolicCover(witness.cover.window, witness.cover.blocks)
    except ValueError:
        return False
    nblocks = len(cover.blocks)
    if witness.a == witness.b:
        return False
    first = cover.blocks[0] if nblocks else frozenset()
    if witness.a not in first or witness.b not in first:
        return False
    if any(len(block) < 2 for block in cover.blocks):
        return False
    expected_keys = {
        frozenset(combo)
        for r in range(min(witness.k, nblocks) + 1)
        for combo in itertools.combinations(range(nblocks), r)
    }
    if set(witness.interpolants.keys()) != expected_keys:
        return False
    target = transposition(witness.a, witness.b)
    for key, interpolant in witness.interpolants.items():
        if not interpolant.is_even():
            return False
        for i in key:
            for point in cover.blocks[i]:
                if interpolant(point) != target(point):
                    return False
    return True


@dataclass(frozen=True)
class AltSeparationVerdict:
    """The two facts separating pointwise interpolability from membership:
    whether the permutation is even, and whether each single window point
    is matched by some even permutation."""

    is_member: bool
    window: int
    interpolable_on_window: bool
    interpolants: dict[int, FinSuppPermutation]


def alt_not_locally_interpolable(
    f: FinSuppPermutation, window: int
) -> AltSeparationVerdict:
    """For each point x in the window, exhibit an even permutation sending
    x where f does (a 3-cycle through a spare point when f moves x), and
    report evenness of f itself."""
    if window < 3:
        raise ValueError("window must contain at least three points")
    interpolants: dict[int, FinSuppPermutation] = {}
    ok = True
    for x in range(window):
        y = f(x)
        if y == x:
            interpolants[x] = identity()
            continue
        spares = [z for z in range(max(window, y + 1)) if z not in (x, y)]
        t = from_cycles([(x, y, spares[0])])
        if not t.is_even() or t(x) != y:
            ok = False
            continue
        interpolants[x] = t
    return AltSeparationVerdict(f.is_even(), window, ok, interpolants)


def even_permutations_of(points) -> list[FinSuppPermutation]:
    """All even permutations whose support lies in the given point set."""
    points = sorted(set(points))
    out = []
    for image in itertools.permutations(points):
        p = FinSuppPermutation(dict(zip(points, image)))
        if p.is_even():
            out.append(p)
    return out


def alt_B_locally_closed_check(f, support_bound, probe_points) -> bool:
    """Pointwise-interpolability test against the group of even
    permutations supported inside support_bound.

    f may be a FinSuppPermutation or a plain dict read as a total map
    (identity off its keys). For every probe point a the map must agree
    with some even permutation of the bound on support_bound + {a}; such
    a permutation fixes a, so candidates moving any probe are rejected,
    and agreement on the bound pins a single permutation.
    """
    bound = sorted(set(support_bound))
    apply = f if isinstance(f, FinSuppPermutation) else (
        lambda x, _m=dict(f): _m.get(x, x)
    )
    candidates = even_permutations_of(bound)
    for a in probe_points:
        if a in bound:
            raise ValueError(f"probe point {a} lies inside the support bound")
        matched = False
        for p in candidates:
            if p(a) == apply(a) and all(p(x) == apply(x) for x in bound):
                matched = True
                break
        if not matched:
            return False
    return True


# --- JSON interchange ---------------------------------------------------------

def permutation_to_json(p: FinSuppPermutation) -> dict:
    return {"moved": {str(k): v for k, v in sorted(p.moved.items())}}


def permutation_from_json(data: dict) -> FinSuppPermutation:
    return FinSuppPermutation({int(k): int(v) for k, v in data["moved"].items()})
