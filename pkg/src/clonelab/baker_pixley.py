"""Constructive interpolation along a cover through a near-unanimity term.

Given base interpolants for every subfamily of at most d-1 cover blocks,
induction over subfamily size builds interpolants for arbitrarily large
subfamilies: for a subfamily B of size m >= d, drop one block at a time to
get m child subfamilies, and feed the first d child interpolants into the
near-unanimity operation. At any point of the union of B at most one child
interpolant disagrees with the target, so the near-unanimity identities
force agreement. The full-cover interpolant therefore equals the target
everywhere.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .clone_engine import CloneFragment, inv
from .finite_core import Operation, is_near_unanimity, preserves, superpose
from .ultralocal import Cover, ultra_closure_fragment


@dataclass(frozen=True)
class InterpolantNode:
    """Node of the interpolant construction tree: either a supplied base
    interpolant or a near-unanimity composition of child nodes."""

    blocks: tuple[int, ...]
    base: bool
    children: tuple["InterpolantNode", ...] = ()

    def to_json(self) -> dict:
        if self.base:
            return {"blocks": list(self.blocks), "base": True}
        return {
            "blocks": list(self.blocks),
            "op": "h",
            "children": [c.to_json() for c in self.children],
        }


@dataclass(frozen=True)
class BPInstance:
    f: Operation
    h: Operation
    cover: Cover
    base_interpolants: dict[frozenset[int], Operation]

    def __post_init__(self):
        if self.h.universe != self.f.universe:
            raise ValueError("target and near-unanimity operation universes differ")
        if not is_near_unanimity(self.h):
            raise ValueError("h does not satisfy the near-unanimity identities")
        if self.cover.universe != self.f.universe or self.cover.domain_arity != self.f.arity:
            raise ValueError("cover does not match the target's domain")
        d = self.h.arity
        nblocks = len(self.cover.blocks)
        for size in range(min(d - 1, nblocks) + 1):
            for combo in itertools.combinations(range(nblocks), size):
                key = frozenset(combo)
                if key not in self.base_interpolants:
                    raise ValueError(f"missing base interpolant for blocks {sorted(key)}")
        for key, t in self.base_interpolants.items():
            if t.universe != self.f.universe or t.arity != self.f.arity:
                raise ValueError("base interpolant shape mismatch")
            for b in key:
                for point in self.cover.blocks[b]:
                    if t.table[t.index_of(point)] != self.f.table[self.f.index_of(point)]:
                        raise ValueError(
                            f"base interpolant for blocks {sorted(key)} disagrees at {point}"
                        )


@dataclass(frozen=True)
class BPResult:
    operation: Operation
    tree: InterpolantNode


def bp_interpolate(inst: BPInstance) -> BPResult:
    """Build the full-cover interpolant bottom-up, memoizing one
    interpolant per subfamily per level."""
    d = inst.h.arity
    nblocks = len(inst.cover.blocks)
    memo: dict[frozenset[int], tuple[Operation, InterpolantNode]] = {}
    for key, t in inst.base_interpolants.items():
        memo[key] = (t, InterpolantNode(tuple(sorted(key)), base=True))

    full = frozenset(range(nblocks))
    if nblocks <= d - 1:
        op, node = memo[full]
        return BPResult(op, node)

    for m in range(d, nblocks + 1):
        for combo in itertools.combinations(range(nblocks), m):
            key = frozenset(combo)
            ordered = sorted(combo)
            # Drop one block at a time; the first d children feed h.
            children = [key - {ordered[i]} for i in range(d)]
            ops, nodes = zip(*(memo[c] for c in children))
            op = superpose(inst.h, list(ops))
            memo[key] = (op, InterpolantNode(tuple(ordered), base=False, children=nodes))
    op, node = memo[full]
    return BPResult(op, node)


@dataclass(frozen=True)
class NUClosureReport:
    holds: bool
    nu_op: Operation
    extras: tuple[Operation, ...]  # closure members missing from the fragment
    checked: int

    def __bool__(self) -> bool:
        return self.holds


def find_near_unanimity(fragment: CloneFragment) -> Operation | None:
    """First near-unanimity operation among generators then members, in
    order; generators are scanned because they may exceed the fragment's
    arity bound."""
    candidates = list(fragment.generators)
    for j in sorted(fragment.members):
        candidates.extend(fragment.members[j])
    for op in candidates:
        if op.arity >= 3 and is_near_unanimity(op):
            return op
    return None


def nu_ultraclosure_check(
    fragment: CloneFragment, arity_bound: int | None = None
) -> NUClosureReport:
    """Verify that the cover-condition closure at level d (the arity of a
    near-unanimity member) adds nothing to the fragment."""
    h = find_near_unanimity(fragment)
    if h is None:
        raise ValueError("no near-unanimity member found in the fragment")
    bound = fragment.arity_bound if arity_bound is None else arity_bound
    closure = ultra_closure_fragment(fragment, h.arity, bound)
    extras = tuple(
        op
        for j in range(1, bound + 1)
        for op in closure.members[j]
        if op.table not in fragment.tables(j)
    )
    checked = closure.member_count()
    return NUClosureReport(not extras, h, extras, checked)


def classical_bp_membership(f: Operation, fragment: CloneFragment, d: int) -> bool:
    """Membership test via invariant relations: does f preserve every
    invariant relation of arity < d of the fragment?

    On a finite universe, for a fragment containing a d-ary
    near-unanimity operation, this agrees with table membership in a
    sufficiently generated fragment; the test suite compares both sides.
    """
    if d < 3:
        raise ValueError("near-unanimity arity must be >= 3")
    h = find_near_unanimity(fragment)
    if h is None or h.arity != d:
        raise ValueError(f"fragment has no near-unanimity member of arity {d}")
    relations = inv(fragment, d - 1)
    return all(preserves(f, rel) for rel in relations)
