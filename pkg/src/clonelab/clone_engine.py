"""Arity-bounded clone generation, membership, and the Pol-Inv connection.

Full clones are infinite objects; this module materializes only the part
of arity <= k. For each arity j the fixpoint "seed with the j-ary
projections, close under applying one generator to a tuple of current
j-ary members" is complete for the j-ary fragment of the generated clone:
any term of arity j normalizes, by structural induction, to an iterated
single-generator application over j-ary terms.

Operations are canonical by their tables; deduplication ignores how a
member was produced.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .finite_core import (
    Operation,
    Relation,
    ResourceCapExceeded,
    Universe,
    all_operations,
    all_relations,
    preserves,
    projection,
)

DEFAULT_MEMBER_CAP = 200_000


@dataclass(frozen=True)
class CloneFragment:
    """The arity-<=k part of a generated clone.

    members maps each arity 1..arity_bound to the tuple of that arity's
    members in insertion order (projections first, then closure rounds).
    """

    universe: Universe
    arity_bound: int
    generators: tuple[Operation, ...]
    members: dict[int, tuple[Operation, ...]]
    _tables: dict[int, frozenset[tuple[int, ...]]] = field(
        default=None, repr=False, compare=False
    )

    def __post_init__(self):
        if self._tables is None:
            tables = {
                j: frozenset(op.table for op in ops) for j, ops in self.members.items()
            }
            object.__setattr__(self, "_tables", tables)

    def tables(self, arity: int) -> frozenset[tuple[int, ...]]:
        return self._tables[arity]

    def member_count(self) -> int:
        return sum(len(ops) for ops in self.members.values())


def projections(universe: Universe, arity: int) -> list[Operation]:
    return [projection(universe, arity, i) for i in range(arity)]


def generate(
    generators,
    arity_bound: int,
    universe: Universe | None = None,
    member_cap: int = DEFAULT_MEMBER_CAP,
) -> CloneFragment:
    """Least fixpoint closure of the generators, one arity at a time.

    An empty generator set (with an explicit universe) yields the clone of
    projections. Raises ResourceCapExceeded if a fragment would exceed
    member_cap; a capped run never returns a truncated fragment.
    """
    generators = tuple(generators)
    if arity_bound < 1:
        raise ValueError("arity bound must be >= 1")
    if universe is None:
        if not generators:
            raise ValueError("generate() with no generators needs an explicit universe")
        universe = generators[0].universe
    for g in generators:
        if g.universe != universe:
            raise ValueError("generators live on different universes")

    members: dict[int, tuple[Operation, ...]] = {}
    for j in range(1, arity_bound + 1):
        members[j] = _close_arity(universe, generators, j, member_cap)
    return CloneFragment(universe, arity_bound, generators, members)


def projection_fragment(universe: Universe, arity_bound: int) -> CloneFragment:
    """The fragment of the clone generated by the empty set: projections only."""
    members = {j: tuple(projections(universe, j)) for j in range(1, arity_bound + 1)}
    return CloneFragment(universe, arity_bound, (), members)


def _close_arity(universe, generators, j, member_cap):
    ops = list(projections(universe, j))
    seen = {op.table for op in ops}
    m = universe.size
    size = m ** j
    frontier_tables = set(seen)
    while frontier_tables:
        new_ops = []
        for g in generators:
            # Only candidate tuples touching the frontier can give new tables.
            for rows in itertools.product(ops, repeat=g.arity):
                if not any(r.table in frontier_tables for r in rows):
                    continue
                table = tuple(
                    g.table[_fold_index(rows, idx, m)] for idx in range(size)
                )
                if table not in seen:
                    seen.add(table)
                    new_ops.append(Operation(universe, j, table))
                    if len(seen) > member_cap:
                        raise ResourceCapExceeded(
                            f"arity-{j} fragment exceeded member cap {member_cap}"
                        )
        ops.extend(new_ops)
        frontier_tables = {op.table for op in new_ops}
    return tuple(ops)


def _fold_index(rows, idx, m):
    out = 0
    for r in rows:
        out = out * m + r.table[idx]
    return out


def contains(fragment: CloneFragment, op: Operation) -> bool:
    """Table-level membership in the fragment."""
    if op.universe != fragment.universe:
        raise ValueError("operation lives on a different universe")
    if op.arity > fragment.arity_bound:
        raise ValueError(
            f"arity {op.arity} above fragment bound {fragment.arity_bound}"
        )
    return op.table in fragment.tables(op.arity)


def pol(
    relations,
    arity_bound: int,
    universe: Universe | None = None,
    op_cap: int = 1 << 20,
) -> CloneFragment:
    """All operations of arity <= arity_bound preserving every relation.

    Returned as a fragment whose generator set is its full member list.
    """
    relations = tuple(relations)
    if universe is None:
        if not relations:
            raise ValueError("pol() with no relations needs an explicit universe")
        universe = relations[0].universe
    for rel in relations:
        if rel.universe != universe:
            raise ValueError("relations live on different universes")

    members: dict[int, tuple[Operation, ...]] = {}
    for j in range(1, arity_bound + 1):
        kept = tuple(
            op
            for op in all_operations(universe, j, cap=op_cap)
            if all(preserves(op, rel) for rel in relations)
        )
        members[j] = kept
    flat = tuple(op for ops in members.values() for op in ops)
    return CloneFragment(universe, arity_bound, flat, members)


def inv(
    fragment: CloneFragment,
    max_arity: int,
    rel_cap: int = 1 << 16,
) -> tuple[Relation, ...]:
    """All relations of arity <= max_arity preserved by every member.

    A relation is invariant under the whole generated clone exactly when
    the generators preserve it, so only generators are checked (for
    fragments whose generator list is the member list this is the full
    check).
    """
    if max_arity < 1:
        raise ValueError("max arity must be >= 1")
    checkers = fragment.generators
    if not checkers:
        # Projection clone: every relation is invariant.
        checkers = ()
    out = []
    for r in range(1, max_arity + 1):
        for rel in all_relations(fragment.universe, r, cap=rel_cap):
            if all(preserves(g, rel) for g in checkers):
                out.append(rel)
    return tuple(out)


def fragments_equal(a: CloneFragment, b: CloneFragment) -> bool:
    """Arity-wise table-set equality of two fragments."""
    if a.universe != b.universe or a.arity_bound != b.arity_bound:
        return False
    return all(
        a.tables(j) == b.tables(j) for j in range(1, a.arity_bound + 1)
    )


# --- JSON interchange -----------------------------------------------------
#
# fragment {"universe": {...}, "arity_bound": k,
#           "members": {"1": [[table ints]], ...},
#           "generators": [{"arity": n, "table": [...]}, ...]}

def fragment_to_json(fragment: CloneFragment) -> dict:
    return {
        "universe": {"size": fragment.universe.size},
        "arity_bound": fragment.arity_bound,
        "members": {
            str(j): [list(op.table) for op in ops]
            for j, ops in sorted(fragment.members.items())
        },
        "generators": [
            {"arity": g.arity, "table": list(g.table)} for g in fragment.generators
        ],
    }


def fragment_from_json(data: dict) -> CloneFragment:
    from .finite_core import universe_from_json

    universe = universe_from_json(data["universe"])
    bound = int(data["arity_bound"])
    members = {}
    for key, tables in data["members"].items():
        j = int(key)
        members[j] = tuple(
            Operation(universe, j, tuple(int(x) for x in t)) for t in tables
        )
    for j in range(1, bound + 1):
        if j not in members:
            raise ValueError(f"fragment JSON missing members of arity {j}")
    generators = tuple(
        Operation(universe, int(g["arity"]), tuple(int(x) for x in g["table"]))
        for g in data.get("generators", [])
    )
    if not generators:
        generators = tuple(op for j in sorted(members) for op in members[j])
    return CloneFragment(universe, bound, generators, members)
