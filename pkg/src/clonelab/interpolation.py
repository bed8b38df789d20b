"""Pointwise interpolation and the induced closure at finite scale.

An operation f is s-interpolable by a fragment when every subset S of its
domain with |S| <= s admits a member agreeing with f on S. Enumerating
only subsets of maximal size min(s, |domain|) is sound: agreement on a
set restricts to agreement on its subsets.

Closure membership for a bound kappa quantifies over all s < kappa. Since
interpolability is antitone in s, checking the single largest s decides
the whole range; "omega" on a finite universe saturates at s = |domain|,
where interpolation degenerates to table equality.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .clone_engine import CloneFragment
from .finite_core import Operation, all_operations

OMEGA = "omega"


@dataclass(frozen=True)
class InterpolationQuery:
    target: Operation
    fragment: CloneFragment
    lam: int

    def __post_init__(self):
        if self.target.universe != self.fragment.universe:
            raise ValueError("target and fragment universes differ")
        if self.target.arity > self.fragment.arity_bound:
            raise ValueError("target arity above fragment arity bound")
        if self.lam < 0:
            raise ValueError("subset size must be >= 0")


@dataclass(frozen=True)
class InterpolationVerdict:
    holds: bool
    witness: tuple[tuple[int, ...], ...] | None  # failing point set, if any

    def __bool__(self) -> bool:
        return self.holds


def agreement_mask(f: Operation, t: Operation) -> int:
    """Bitmask over domain indices where the two tables agree."""
    mask = 0
    for idx, (a, b) in enumerate(zip(f.table, t.table)):
        if a == b:
            mask |= 1 << idx
    return mask


def is_lambda_interpolable(query: InterpolationQuery) -> InterpolationVerdict:
    """Decide interpolability on all subsets of size min(lam, |domain|).

    The witness, when present, is the lexicographically least failing
    subset of domain points.
    """
    target = query.target
    n = target.arity
    domain = list(target.universe.tuples(n))
    size = min(query.lam, len(domain))
    if size == 0:
        return InterpolationVerdict(True, None)
    masks = [
        agreement_mask(target, t) for t in query.fragment.members[n]
    ]
    for combo in itertools.combinations(range(len(domain)), size):
        s_mask = 0
        for idx in combo:
            s_mask |= 1 << idx
        if not any(s_mask & ~m == 0 for m in masks):
            return InterpolationVerdict(
                False, tuple(domain[idx] for idx in combo)
            )
    return InterpolationVerdict(True, None)


def _max_lambda(kappa, domain_size: int) -> int:
    if kappa == OMEGA:
        return domain_size
    if not isinstance(kappa, int) or kappa < 1:
        raise ValueError(f"closure bound must be a positive integer or 'omega', got {kappa!r}")
    return min(kappa - 1, domain_size)


def local_closure_membership(f: Operation, fragment: CloneFragment, kappa) -> bool:
    """True iff f is s-interpolable for every s < kappa.

    Antitone in s, so only the largest s is checked.
    """
    lam = _max_lambda(kappa, fragment.universe.size ** f.arity)
    return is_lambda_interpolable(InterpolationQuery(f, fragment, lam)).holds


def local_closure_fragment(
    fragment: CloneFragment,
    kappa,
    arity_bound: int,
    op_cap: int = 1 << 20,
) -> CloneFragment:
    """All operations of arity <= arity_bound in the kappa-closure,
    packaged as a fragment (its generator set is its member list)."""
    if arity_bound > fragment.arity_bound:
        raise ValueError(
            "closure fragment bound exceeds the input fragment's arity bound"
        )
    members: dict[int, tuple[Operation, ...]] = {}
    for j in range(1, arity_bound + 1):
        members[j] = tuple(
            op
            for op in all_operations(fragment.universe, j, cap=op_cap)
            if local_closure_membership(op, fragment, kappa)
        )
    flat = tuple(op for ops in members.values() for op in ops)
    return CloneFragment(fragment.universe, arity_bound, flat, members)
