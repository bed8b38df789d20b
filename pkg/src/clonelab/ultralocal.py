"""Finite-cover interpolation certificates and the induced closure.

The central object is a certificate pairing a finite cover of an
operation's domain with one fragment member per small subfamily of the
cover: for every set B of at most lam blocks there is a member agreeing
with the target on the union of B. Existence of such a certificate is
decided exactly here, at finite scale, by searching set partitions of the
domain; partitions suffice because any witnessing cover can be refined to
the atoms of the Boolean algebra its blocks generate, and those atoms
form a partition.

The dual formulation tracks, for each member t, the set of lam-column
matrices over the domain on which t agrees with the target columnwise.
The certificate exists exactly when finitely many of those matrix sets
cover everything, i.e. when their complements fail the finite
intersection property. Both routes are implemented independently and
cross-checked in the test suite.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .clone_engine import CloneFragment, contains
from .finite_core import Operation, ResourceCapExceeded, Universe, all_operations
from .interpolation import _max_lambda, agreement_mask

DEFAULT_MATRIX_CAP = 4096


@dataclass(frozen=True)
class Cover:
    """A finite cover of universe**domain_arity by nonempty point sets."""

    universe: Universe
    domain_arity: int
    blocks: tuple[frozenset[tuple[int, ...]], ...]

    def __post_init__(self):
        if not self.blocks:
            raise ValueError("cover needs at least one block")
        union = set()
        for block in self.blocks:
            if not block:
                raise ValueError("empty cover blocks are rejected")
            for point in block:
                if len(point) != self.domain_arity:
                    raise ValueError(f"point {point} has wrong arity")
                if any(not 0 <= x < self.universe.size for x in point):
                    raise ValueError(f"point {point} outside universe")
            union |= block
        if len(union) != self.universe.size ** self.domain_arity:
            raise ValueError("blocks do not cover the whole domain")

    def is_partition(self) -> bool:
        total = sum(len(b) for b in self.blocks)
        return total == self.universe.size ** self.domain_arity


@dataclass(frozen=True)
class DaggerCertificate:
    """Proof object for the cover condition at level lam.

    interpolants maps each subfamily B (a frozenset of block indices,
    |B| <= min(lam, #blocks)) to a fragment member agreeing with the
    target on the union of B's blocks.
    """

    cover: Cover
    lam: int
    interpolants: dict[frozenset[int], Operation]


@dataclass(frozen=True)
class DaggerFailure:
    """A subfamily of cover blocks admitting no single interpolant."""

    cover: Cover
    lam: int
    failing_blocks: frozenset[int]


@dataclass(frozen=True)
class DaggerSearchOutcome:
    certificate: DaggerCertificate | None
    disproof: bool
    strategy: str

    def __bool__(self) -> bool:
        return self.certificate is not None


def domain_points(universe: Universe, arity: int) -> list[tuple[int, ...]]:
    return list(universe.tuples(arity))


def point_index(universe: Universe, point: tuple[int, ...]) -> int:
    idx = 0
    for x in point:
        idx = idx * universe.size + x
    return idx


def _block_mask(universe: Universe, block) -> int:
    mask = 0
    for point in block:
        mask |= 1 << point_index(universe, point)
    return mask


def _members_and_masks(f: Operation, fragment: CloneFragment):
    if f.universe != fragment.universe:
        raise ValueError("target and fragment universes differ")
    if f.arity > fragment.arity_bound:
        raise ValueError("target arity above fragment arity bound")
    members = fragment.members[f.arity]
    return members, [agreement_mask(f, t) for t in members]


def check_dagger(
    f: Operation,
    fragment: CloneFragment,
    lam: int,
    cover: Cover,
) -> DaggerCertificate | DaggerFailure:
    """Check one candidate cover. Every subfamily of at most lam blocks
    must admit a member agreeing with f on its union; the first member in
    fragment order is recorded."""
    if cover.universe != f.universe or cover.domain_arity != f.arity:
        raise ValueError("cover does not match the target's domain")
    if lam < 0:
        raise ValueError("lam must be >= 0")
    members, masks = _members_and_masks(f, fragment)
    block_masks = [_block_mask(f.universe, b) for b in cover.blocks]
    found = _assign_interpolants(members, masks, block_masks, lam)
    if isinstance(found, frozenset):
        return DaggerFailure(cover, lam, found)
    return DaggerCertificate(cover, lam, found)


def _assign_interpolants(members, masks, block_masks, lam):
    """Map every block subfamily of size <= lam to an agreeing member;
    returns the first failing subfamily (as a frozenset) on failure."""
    interpolants: dict[frozenset[int], Operation] = {}
    nblocks = len(block_masks)
    for size in range(min(lam, nblocks) + 1):
        for combo in itertools.combinations(range(nblocks), size):
            union = 0
            for b in combo:
                union |= block_masks[b]
            chosen = None
            for t, mask in zip(members, masks):
                if union & ~mask == 0:
                    chosen = t
                    break
            if chosen is None:
                return frozenset(combo)
            interpolants[frozenset(combo)] = chosen
    return interpolants


def restricted_growth_strings(n: int, max_blocks: int):
    """All partitions of range(n) encoded as restricted growth strings,
    in lexicographic order, using at most max_blocks blocks."""
    if n == 0:
        return
    rgs = [0] * n

    def rec(i: int, current_max: int):
        if i == n:
            yield tuple(rgs)
            return
        top = min(current_max + 1, max_blocks - 1)
        for v in range(top + 1):
            rgs[i] = v
            yield from rec(i + 1, max(current_max, v))

    yield from rec(1, 0)


def _partition_masks(rgs: tuple[int, ...]):
    nblocks = max(rgs) + 1
    masks = [0] * nblocks
    for idx, b in enumerate(rgs):
        masks[b] |= 1 << idx
    return masks


def _cover_from_masks(universe, arity, domain, masks) -> Cover:
    blocks = tuple(
        frozenset(domain[i] for i in range(len(domain)) if mask >> i & 1)
        for mask in masks
    )
    return Cover(universe, arity, blocks)


def search_dagger(
    f: Operation,
    fragment: CloneFragment,
    lam: int,
    strategy: str = "exhaustive_partitions",
    max_blocks: int | None = None,
) -> DaggerSearchOutcome:
    """Search for a certificate under the chosen strategy.

    singletons            the all-singletons cover only.
    equalizer_atoms       the partition grouping domain points by which
                          members agree with f there (the atoms of the
                          Boolean algebra the agreement sets generate).
    exhaustive_partitions all set partitions with at most max_blocks
                          blocks, in restricted-growth-string order,
                          returning the first passing one.

    Exhaustion is a disproof only for exhaustive_partitions with
    max_blocks = |domain| (complete for partition covers, which suffice);
    other strategies report "no certificate found" without deciding.
    """
    members, masks = _members_and_masks(f, fragment)
    n = f.arity
    domain = domain_points(f.universe, n)
    npoints = len(domain)
    if lam < 0:
        raise ValueError("lam must be >= 0")

    if strategy == "singletons":
        block_masks = [1 << i for i in range(npoints)]
        found = _assign_interpolants(members, masks, block_masks, lam)
        if isinstance(found, frozenset):
            return DaggerSearchOutcome(None, False, strategy)
        cover = _cover_from_masks(f.universe, n, domain, block_masks)
        return DaggerSearchOutcome(
            DaggerCertificate(cover, lam, found), False, strategy
        )

    if strategy == "equalizer_atoms":
        signatures: dict[tuple[bool, ...], int] = {}
        for i in range(npoints):
            sig = tuple(bool(mask >> i & 1) for mask in masks)
            signatures.setdefault(sig, 0)
            signatures[sig] |= 1 << i
        block_masks = sorted(signatures.values(), key=lambda m: m & -m)
        found = _assign_interpolants(members, masks, block_masks, lam)
        if isinstance(found, frozenset):
            return DaggerSearchOutcome(None, False, strategy)
        cover = _cover_from_masks(f.universe, n, domain, block_masks)
        return DaggerSearchOutcome(
            DaggerCertificate(cover, lam, found), False, strategy
        )

    if strategy == "exhaustive_partitions":
        if max_blocks is None:
            max_blocks = npoints
        if max_blocks < 1:
            raise ValueError("max_blocks must be >= 1")
        for rgs in restricted_growth_strings(npoints, max_blocks):
            block_masks = _partition_masks(rgs)
            found = _assign_interpolants(members, masks, block_masks, lam)
            if not isinstance(found, frozenset):
                cover = _cover_from_masks(f.universe, n, domain, block_masks)
                return DaggerSearchOutcome(
                    DaggerCertificate(cover, lam, found), False, strategy
                )
        return DaggerSearchOutcome(None, max_blocks >= npoints, strategy)

    raise ValueError(f"unknown strategy {strategy!r}")


def verify_dagger_certificate(
    cert: DaggerCertificate, f: Operation, fragment: CloneFragment
) -> bool:
    """Recheck a certificate from scratch: cover validity, exact subfamily
    key set, membership of every interpolant, and pointwise agreement."""
    try:
        cover = Cover(cert.cover.universe, cert.cover.domain_arity, cert.cover.blocks)
    except ValueError:
        return False
    if cert.lam < 0:
        return False
    if cover.universe != f.universe or cover.domain_arity != f.arity:
        return False
    if f.arity > fragment.arity_bound:
        return False
    nblocks = len(cover.blocks)
    expected_keys = {
        frozenset(combo)
        for size in range(min(cert.lam, nblocks) + 1)
        for combo in itertools.combinations(range(nblocks), size)
    }
    if set(cert.interpolants.keys()) != expected_keys:
        return False
    member_tables = fragment.tables(f.arity)
    for key, t in cert.interpolants.items():
        if t.universe != f.universe or t.arity != f.arity:
            return False
        if t.table not in member_tables:
            return False
        for b in key:
            for point in cover.blocks[b]:
                if f.table[f.index_of(point)] != t.table[t.index_of(point)]:
                    return False
    return True


# --- equalizer formulation -------------------------------------------------

@dataclass(frozen=True)
class EqualizerFamily:
    """For each member t, the lam-column matrices (tuples of domain
    points) on which t agrees with the target in every column."""

    lam: int
    domain_size: int
    entries: dict[Operation, frozenset[tuple[tuple[int, ...], ...]]]

    def matrix_space_size(self) -> int:
        return self.domain_size ** self.lam


def equalizer_family(
    f: Operation,
    fragment: CloneFragment,
    lam: int,
    cap: int = DEFAULT_MATRIX_CAP,
) -> EqualizerFamily:
    """Materialize the agreement-matrix sets. Each set is the lam-th
    power of the pointwise agreement set, so it is built directly from
    that product."""
    if lam < 1:
        raise ValueError("equalizer family needs lam >= 1")
    members, masks = _members_and_masks(f, fragment)
    domain = domain_points(f.universe, f.arity)
    total = len(domain) ** lam
    if total > cap:
        raise ResourceCapExceeded(
            f"{total} matrices exceed the materialization cap {cap}"
        )
    entries = {}
    for t, mask in zip(members, masks):
        agree = [p for i, p in enumerate(domain) if mask >> i & 1]
        entries[t] = frozenset(itertools.product(agree, repeat=lam))
    return EqualizerFamily(lam, len(domain), entries)


def fip_holds(family: EqualizerFamily) -> bool:
    """Whether the complements of the agreement-matrix sets have the
    finite intersection property.

    The family is finite, so this reduces to: the union of all agreement
    sets does not exhaust the matrix space.
    """
    covered = set()
    for matrices in family.entries.values():
        covered |= matrices
    return len(covered) != family.matrix_space_size()


def fip_holds_lazy(f: Operation, fragment: CloneFragment, lam: int) -> bool:
    """Streaming variant for matrix spaces above the materialization cap:
    scan matrices one by one for a witness avoiding every agreement set."""
    if lam < 1:
        raise ValueError("lam must be >= 1")
    members, masks = _members_and_masks(f, fragment)
    domain = domain_points(f.universe, f.arity)
    for matrix_indices in itertools.product(range(len(domain)), repeat=lam):
        matrix_mask = 0
        for i in matrix_indices:
            matrix_mask |= 1 << i
        if not any(matrix_mask & ~mask == 0 for mask in masks):
            return True
    return False


def ultra_membership(f: Operation, fragment: CloneFragment, kappa) -> bool:
    """Whether f satisfies the cover condition for every lam < kappa.

    The condition is antitone in lam (a witnessing cover for lam also
    witnesses every smaller level), so only the largest level is searched;
    "omega" saturates at |domain| on a finite universe. At the saturated
    level any witnessing cover has a subfamily of size <= |domain| whose
    union is the whole domain, so the condition degenerates to table
    membership and is decided without a partition search.
    """
    npoints = f.universe.size ** f.arity
    lam = _max_lambda(kappa, npoints)
    if lam >= npoints:
        return contains(fragment, f)
    return bool(search_dagger(f, fragment, lam, "exhaustive_partitions"))


def ultra_closure_fragment(
    fragment: CloneFragment,
    kappa,
    arity_bound: int,
    op_cap: int = 1 << 20,
) -> CloneFragment:
    """All operations of arity <= arity_bound passing the cover condition
    for every lam < kappa, packaged as a fragment."""
    if arity_bound > fragment.arity_bound:
        raise ValueError(
            "closure fragment bound exceeds the input fragment's arity bound"
        )
    members: dict[int, tuple[Operation, ...]] = {}
    for j in range(1, arity_bound + 1):
        members[j] = tuple(
            op
            for op in all_operations(fragment.universe, j, cap=op_cap)
            if ultra_membership(op, fragment, kappa)
        )
    flat = tuple(op for ops in members.values() for op in ops)
    return CloneFragment(fragment.universe, arity_bound, flat, members)


# --- JSON interchange -------------------------------------------------------
#
# dagger payload {"lambda": l, "arity": n, "universe_size": m,
#                 "cover": [[point index]],
#                 "interpolants": {"0,2": [table ints], "": [...]}}
# Point indices are lexicographic domain positions; subfamily keys are
# comma-joined sorted block indices, "" for the empty subfamily.

def dagger_to_json(cert: DaggerCertificate) -> dict:
    universe = cert.cover.universe
    cover_json = [
        sorted(point_index(universe, p) for p in block)
        for block in cert.cover.blocks
    ]
    interpolants = {
        ",".join(str(b) for b in sorted(key)): list(op.table)
        for key, op in cert.interpolants.items()
    }
    return {
        "lambda": cert.lam,
        "arity": cert.cover.domain_arity,
        "universe_size": universe.size,
        "cover": cover_json,
        "interpolants": interpolants,
    }


def dagger_from_json(data: dict) -> DaggerCertificate:
    m = int(data["universe_size"])
    n = int(data["arity"])
    universe = Universe(m)
    domain = domain_points(universe, n)
    blocks = tuple(
        frozenset(domain[int(i)] for i in block) for block in data["cover"]
    )
    cover = Cover(universe, n, blocks)
    interpolants = {}
    for key, table in data["interpolants"].items():
        indices = frozenset(int(b) for b in key.split(",")) if key else frozenset()
        interpolants[indices] = Operation(universe, n, tuple(int(x) for x in table))
    return DaggerCertificate(cover, int(data["lambda"]), interpolants)
