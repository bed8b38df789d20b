"""Finite universes, operation tables, relations, and preservation checks.

Everything downstream works over an explicit finite universe {0, ..., m-1}.
An operation of arity n is a flat lookup table of length m**n in
lexicographic argument order with the last argument varying fastest; this
indexing is load-bearing because certificates serialize table indices.
Relations are explicit tuple sets.

All values are immutable after construction and safe to share across
threads.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass


class ResourceCapExceeded(Exception):
    """An enumeration would exceed its configured cap.

    Deliberately distinct from ValueError: a capped run is inconclusive
    and must never be mistaken for a mathematical verdict.
    """


@dataclass(frozen=True)
class Universe:
    """A finite base set {0, ..., size-1} with optional display labels."""

    size: int
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.size < 1:
            raise ValueError(f"universe size must be >= 1, got {self.size}")
        if self.labels is not None:
            if len(self.labels) != self.size:
                raise ValueError("labels must match universe size")
            if len(set(self.labels)) != self.size:
                raise ValueError("labels must be pairwise distinct")

    def elements(self) -> range:
        return range(self.size)

    def tuples(self, arity: int):
        """All arity-tuples over the universe, in lexicographic order."""
        return itertools.product(self.elements(), repeat=arity)


@dataclass(frozen=True)
class Operation:
    """A total function universe**arity -> universe stored as a flat table.

    Nullary operations are excluded; model constants as arity-1 constant
    tables.
    """

    universe: Universe
    arity: int
    table: tuple[int, ...]

    def __post_init__(self):
        if self.arity < 1:
            raise ValueError(f"operation arity must be >= 1, got {self.arity}")
        expected = self.universe.size ** self.arity
        if len(self.table) != expected:
            raise ValueError(
                f"table length {len(self.table)} != {self.universe.size}^{self.arity}"
            )
        for entry in self.table:
            if not 0 <= entry < self.universe.size:
                raise ValueError(f"table entry {entry} outside universe")

    def index_of(self, args: tuple[int, ...]) -> int:
        """Lexicographic index of an argument tuple (last coordinate fastest)."""
        idx = 0
        for a in args:
            idx = idx * self.universe.size + a
        return idx

    def __call__(self, *args: int) -> int:
        return apply(self, args)


@dataclass(frozen=True)
class Relation:
    """A finitary relation: a set of arity-tuples over the universe."""

    universe: Universe
    arity: int
    tuples: frozenset[tuple[int, ...]]

    def __post_init__(self):
        if self.arity < 1:
            raise ValueError(f"relation arity must be >= 1, got {self.arity}")
        for tup in self.tuples:
            if len(tup) != self.arity:
                raise ValueError(f"tuple {tup} has wrong length for arity {self.arity}")
            for entry in tup:
                if not 0 <= entry < self.universe.size:
                    raise ValueError(f"tuple entry {entry} outside universe")

    def sorted_tuples(self) -> list[tuple[int, ...]]:
        return sorted(self.tuples)


@dataclass(frozen=True)
class PreservationWitness:
    """A failed preservation check: rows are relation tuples (one per
    operation argument), image is their row-wise application and lies
    outside the relation."""

    rows: tuple[tuple[int, ...], ...]
    image: tuple[int, ...]


def apply(op: Operation, args: tuple[int, ...]) -> int:
    """Evaluate an operation table at an argument tuple."""
    if len(args) != op.arity:
        raise ValueError(f"expected {op.arity} arguments, got {len(args)}")
    for a in args:
        if not 0 <= a < op.universe.size:
            raise ValueError(f"argument {a} outside universe")
    return op.table[op.index_of(args)]


def operation_from_callable(universe: Universe, arity: int, fn) -> Operation:
    """Tabulate a Python callable into an Operation."""
    table = tuple(fn(*args) for args in universe.tuples(arity))
    return Operation(universe, arity, table)


def projection(universe: Universe, arity: int, index: int) -> Operation:
    """The projection of the given arity onto coordinate `index` (0-based)."""
    if not 0 <= index < arity:
        raise ValueError(f"projection index {index} out of range for arity {arity}")
    return operation_from_callable(universe, arity, lambda *args: args[index])


def constant_op(universe: Universe, arity: int, value: int) -> Operation:
    if not 0 <= value < universe.size:
        raise ValueError(f"constant {value} outside universe")
    return Operation(universe, arity, (value,) * universe.size ** arity)


def superpose(outer: Operation, inners: list[Operation]) -> Operation:
    """Compose outer(inner_1(x), ..., inner_n(x)) into a single table.

    All inner operations must share one universe and one arity; the result
    has that common arity.
    """
    if len(inners) != outer.arity:
        raise ValueError(f"outer arity {outer.arity} needs {outer.arity} inner operations")
    if not inners:
        raise ValueError("superposition needs at least one inner operation")
    k = inners[0].arity
    for inner in inners:
        if inner.universe != outer.universe:
            raise ValueError("universe mismatch in superposition")
        if inner.arity != k:
            raise ValueError("inner operations must share one arity")
    m = outer.universe.size
    table = []
    for idx in range(m ** k):
        table.append(outer.table[_compose_index(outer, inners, idx, m)])
    return Operation(outer.universe, k, tuple(table))


def _compose_index(outer, inners, idx, m):
    # Fold the inner tables' values at position idx into outer's table index.
    out = 0
    for inner in inners:
        out = out * m + inner.table[idx]
    return out


def _find_preservation_violation(op: Operation, rel: Relation) -> PreservationWitness | None:
    if op.universe != rel.universe:
        raise ValueError("operation and relation live on different universes")
    tuples = rel.sorted_tuples()
    for rows in itertools.product(tuples, repeat=op.arity):
        image = tuple(
            op.table[op.index_of(tuple(row[j] for row in rows))]
            for j in range(rel.arity)
        )
        if image not in rel.tuples:
            return PreservationWitness(rows=rows, image=image)
    return None


def preserves(op: Operation, rel: Relation) -> bool:
    """True iff every row-wise application of op to relation tuples lands
    back in the relation."""
    return _find_preservation_violation(op, rel) is None


def preservation_witness(op: Operation, rel: Relation) -> PreservationWitness | None:
    """The first violating tuple matrix in deterministic order, or None."""
    return _find_preservation_violation(op, rel)


def rho3(universe: Universe) -> Relation:
    """Ternary relation {(a,b,c) : a=b or b=c}; preserving it is equivalent
    to depending on at most one variable."""
    tuples = frozenset(
        (a, b, c)
        for a, b, c in universe.tuples(3)
        if a == b or b == c
    )
    return Relation(universe, 3, tuples)


def pi4(universe: Universe) -> Relation:
    """4-ary relation {(a,b,c,d) : a=b or c=d}."""
    tuples = frozenset(
        (a, b, c, d)
        for a, b, c, d in universe.tuples(4)
        if a == b or c == d
    )
    return Relation(universe, 4, tuples)


def neq(universe: Universe) -> Relation:
    """Binary inequality relation."""
    tuples = frozenset((a, b) for a, b in universe.tuples(2) if a != b)
    return Relation(universe, 2, tuples)


def graph(op: Operation) -> Relation:
    """Graph of a unary or binary operation as an (arity+1)-ary relation."""
    if op.arity > 2:
        raise ValueError("graph builder supports arity <= 2 only")
    tuples = frozenset(
        args + (op.table[op.index_of(args)],)
        for args in op.universe.tuples(op.arity)
    )
    return Relation(op.universe, op.arity + 1, tuples)


def is_near_unanimity(op: Operation) -> bool:
    """Check the near-unanimity identities h(a,..,b,..,a) = a over all
    positions for b and all pairs a, b."""
    if op.arity < 3:
        raise ValueError("near-unanimity requires arity >= 3")
    m = op.universe.size
    for i in range(op.arity):
        for a in range(m):
            for b in range(m):
                args = [a] * op.arity
                args[i] = b
                if op.table[op.index_of(tuple(args))] != a:
                    return False
    return True


def is_conservative(op: Operation) -> bool:
    """Every output value occurs among the inputs."""
    for args in op.universe.tuples(op.arity):
        if op.table[op.index_of(args)] not in args:
            return False
    return True


def depends_on(op: Operation, i: int) -> bool:
    """True iff some pair of inputs differing only at coordinate i gives
    different outputs."""
    if not 0 <= i < op.arity:
        raise ValueError(f"coordinate {i} out of range")
    m = op.universe.size
    for args in op.universe.tuples(op.arity):
        base = op.table[op.index_of(args)]
        for v in range(m):
            if v == args[i]:
                continue
            changed = args[:i] + (v,) + args[i + 1:]
            if op.table[op.index_of(changed)] != base:
                return True
    return False


def is_essentially_unary_direct(op: Operation) -> bool:
    """At most one coordinate is essential, decided by direct table scan."""
    essential = sum(1 for i in range(op.arity) if depends_on(op, i))
    return essential <= 1


def all_operations(universe: Universe, arity: int, cap: int = 1 << 20):
    """Yield every operation of the given arity, in table-lexicographic
    order. Raises ResourceCapExceeded when there are more than `cap`."""
    m = universe.size
    count = m ** (m ** arity)
    if count > cap:
        raise ResourceCapExceeded(
            f"{count} operations of arity {arity} on {m} elements exceeds cap {cap}"
        )
    for table in itertools.product(range(m), repeat=m ** arity):
        yield Operation(universe, arity, table)


def all_relations(universe: Universe, arity: int, cap: int = 1 << 16):
    """Yield every relation of the given arity (including the empty one),
    in deterministic order."""
    points = list(universe.tuples(arity))
    count = 1 << len(points)
    if count > cap:
        raise ResourceCapExceeded(
            f"2^{len(points)} relations of arity {arity} exceeds cap {cap}"
        )
    for bits in range(count):
        tuples = frozenset(p for i, p in enumerate(points) if bits >> i & 1)
        yield Relation(universe, arity, tuples)


# --- JSON interchange -----------------------------------------------------
#
# universe  {"size": m, "labels": [...]?}
# operation {"arity": n, "table": [int]}         (universe inferable)
# relation  {"arity": r, "tuples": [[int]]}

def universe_to_json(universe: Universe) -> dict:
    out: dict = {"size": universe.size}
    if universe.labels is not None:
        out["labels"] = list(universe.labels)
    return out


def universe_from_json(data: dict) -> Universe:
    labels = tuple(data["labels"]) if "labels" in data else None
    return Universe(int(data["size"]), labels)


def operation_to_json(op: Operation) -> dict:
    return {"arity": op.arity, "table": list(op.table)}


def _infer_size(table_len: int, arity: int) -> int:
    m = round(table_len ** (1.0 / arity))
    for candidate in (m - 1, m, m + 1):
        if candidate >= 1 and candidate ** arity == table_len:
            return candidate
    raise ValueError(f"table length {table_len} is not a perfect {arity}-th power")


def operation_from_json(data: dict, universe: Universe | None = None) -> Operation:
    arity = int(data["arity"])
    table = tuple(int(x) for x in data["table"])
    if universe is None:
        if "universe" in data:
            universe = universe_from_json(data["universe"])
        else:
            universe = Universe(_infer_size(len(table), arity))
    return Operation(universe, arity, table)


def relation_to_json(rel: Relation) -> dict:
    return {"arity": rel.arity, "tuples": [list(t) for t in rel.sorted_tuples()]}


def relation_from_json(data: dict, universe: Universe | None = None) -> Relation:
    arity = int(data["arity"])
    tuples = frozenset(tuple(int(x) for x in t) for t in data["tuples"])
    if universe is None:
        if "universe" in data:
            universe = universe_from_json(data["universe"])
        else:
            size = max((max(t) for t in tuples if t), default=0) + 1
            universe = Universe(size)
    return Relation(universe, arity, tuples)
