import random

import pytest

from clonelab.symbolic_perms import (
    AltCoverWitness,
    FinSuppInjection,
    FinSuppPermutation,
    alt_B_locally_closed_check,
    alt_cover_witness,
    alt_not_locally_interpolable,
    compose,
    compose_injections,
    even_permutations_of,
    from_cycles,
    identity,
    in_alt,
    in_alt_B,
    in_inj_B,
    inverse,
    parity,
    permutation_from_json,
    permutation_to_json,
    transposition,
    verify_alt_cover,
)


def random_perm(rng, window):
    points = list(range(window))
    rng.shuffle(points)
    return FinSuppPermutation(dict(zip(range(window), points)))


def test_parity_examples():
    assert parity(identity()) == "even"
    assert parity(transposition(0, 1)) == "odd"
    assert parity(from_cycles([(0, 1), (2, 3)])) == "even"
    assert parity(from_cycles([(0, 1, 2)])) == "even"


def test_validation():
    with pytest.raises(ValueError):
        FinSuppPermutation({0: 1})  # range does not close up
    with pytest.raises(ValueError):
        FinSuppPermutation({0: 1, 2: 1})  # not injective
    # self-maps are dropped rather than stored
    assert FinSuppPermutation({3: 3}).moved == {}


def test_cycle_decomposition():
    p = from_cycles([(0, 1, 2), (5, 6)])
    assert p.cycles() == [(0, 1, 2), (5, 6)]
    assert p.support == frozenset({0, 1, 2, 5, 6})


def test_group_laws_random():
    rng = random.Random(23)
    for _ in range(50):
        p, q = random_perm(rng, 9), random_perm(rng, 9)
        assert compose(p, inverse(p)) == identity()
        assert inverse(inverse(p)) == p
        # parity is a homomorphism
        same = parity(p) == parity(q)
        assert (parity(compose(p, q)) == "even") == same


def test_compose_application_order():
    p = transposition(0, 1)
    q = from_cycles([(1, 2, 3)])
    assert compose(p, q)(1) == p(q(1))
    assert compose(p, q)(1) == 2


def test_alt_membership_examples():
    assert in_alt(from_cycles([(0, 1, 2)]))
    assert not in_alt_B(transposition(0, 1), {0, 1, 2})
    assert not in_alt_B(from_cycles([(0, 1, 2)]), {0, 1})
    assert in_alt_B(from_cycles([(0, 1, 2)]), {0, 1, 2})


def test_composition_of_odd_permutations_is_even():
    rng = random.Random(31)
    for _ in range(30):
        p, q = random_perm(rng, 8), random_perm(rng, 8)
        if parity(p) == parity(q) == "odd":
            assert parity(compose(p, q)) == "even"


def test_injection_type():
    f = FinSuppInjection.from_mapping({0, 1, 2}, {0: 1, 1: 2, 2: 0})
    assert in_inj_B(f, {0, 1, 2})
    assert not in_inj_B(f, {0, 1})
    with pytest.raises(ValueError):
        FinSuppInjection.from_mapping({0, 1}, {0: 5})  # escapes the bound
    with pytest.raises(ValueError):
        FinSuppInjection.from_mapping({0, 1, 5}, {0: 5, 1: 5})


def test_injection_composition_support():
    f = FinSuppInjection.from_mapping({0, 1}, {0: 1, 1: 0})
    g = FinSuppInjection.from_mapping({2, 3}, {2: 3, 3: 2})
    both = compose_injections(f, g)
    assert both.support_bound == frozenset({0, 1, 2, 3})
    assert in_inj_B(both, {0, 1, 2, 3})


def test_alt_cover_witness_frozen_example():
    w = alt_cover_witness(2, 0, 1, 6)
    assert [sorted(b) for b in w.cover.blocks] == [[0, 1], [2, 3], [4, 5]]
    assert w.interpolants[frozenset({0, 1})] == from_cycles([(0, 1), (4, 5)])
    assert w.interpolants[frozenset({1, 2})] == identity()
    assert verify_alt_cover(w)


def test_alt_cover_witness_small():
    w = alt_cover_witness(1, 0, 1, 4)
    assert [sorted(b) for b in w.cover.blocks] == [[0, 1], [2, 3]]
    assert w.interpolants[frozenset({0})] == from_cycles([(0, 1), (2, 3)])
    assert w.interpolants[frozenset({1})] == identity()


@pytest.mark.parametrize("k", range(1, 7))
def test_alt_cover_witness_family(k):
    w = alt_cover_witness(k, 0, 1, 2 * (k + 1))
    assert verify_alt_cover(w)
    target = transposition(0, 1)
    for key, p in w.interpolants.items():
        assert in_alt(p)
        # identity interpolants occur exactly when the first block is absent
        assert (p == identity()) == (0 not in key)
        for i in key:
            for point in w.cover.blocks[i]:
                assert p(point) == target(point)


@pytest.mark.parametrize("k", range(1, 7))
def test_witness_pieces_recover_the_transposition(k):
    # every non-identity interpolant is the target transposition times a
    # disjoint one, so composing with that piece recovers the target
    w = alt_cover_witness(k, 0, 1, 2 * (k + 1))
    target = transposition(0, 1)
    for p in w.interpolants.values():
        if p == identity():
            continue
        extra = [c for c in p.cycles() if set(c) != {0, 1}]
        assert len(extra) == 1 and len(extra[0]) == 2
        assert compose(p, transposition(*extra[0])) == target


def test_alt_cover_witness_errors():
    with pytest.raises(ValueError):
        alt_cover_witness(2, 0, 1, 5)  # window too small
    with pytest.raises(ValueError):
        alt_cover_witness(2, 0, 0, 6)


def test_verify_rejects_tampered_witness():
    w = alt_cover_witness(2, 0, 1, 6)
    bad = dict(w.interpolants)
    bad[frozenset({0})] = transposition(0, 1)  # odd interpolant
    assert not verify_alt_cover(AltCoverWitness(w.k, w.a, w.b, w.cover, bad))
    missing = dict(w.interpolants)
    missing.pop(frozenset({0}))
    assert not verify_alt_cover(AltCoverWitness(w.k, w.a, w.b, w.cover, missing))


def test_separation_of_transposition():
    verdict = alt_not_locally_interpolable(transposition(0, 1), 8)
    assert not verdict.is_member
    assert verdict.interpolable_on_window
    for x, p in verdict.interpolants.items():
        assert in_alt(p)
        assert p(x) == transposition(0, 1)(x)


def test_separation_of_members():
    assert alt_not_locally_interpolable(identity(), 6).is_member
    v = alt_not_locally_interpolable(from_cycles([(0, 1, 2)]), 6)
    assert v.is_member and v.interpolable_on_window


def test_even_permutations_of():
    perms = even_permutations_of([0, 1, 2, 3])
    assert len(perms) == 12
    assert all(p.is_even() and p.support <= {0, 1, 2, 3} for p in perms)


def test_alt_B_check_examples():
    B = [0, 1, 2, 3]
    probes = [x for x in range(12) if x not in B]
    assert alt_B_locally_closed_check(from_cycles([(0, 1, 2)]), B, probes)
    assert alt_B_locally_closed_check(identity(), B, probes)
    # moving a probe point is caught by interpolation on bound + probe
    assert not alt_B_locally_closed_check(transposition(0, 5), B, probes)
    # odd permutations of the bound have no even match
    assert not alt_B_locally_closed_check(transposition(0, 1), B, probes)
    with pytest.raises(ValueError):
        alt_B_locally_closed_check(identity(), B, [0])


def test_alt_B_check_accepts_plain_mappings():
    B = [0, 1, 2, 3]
    probes = [x for x in range(12) if x not in B]
    assert alt_B_locally_closed_check({0: 1, 1: 2, 2: 0}, B, probes)
    assert not alt_B_locally_closed_check({4: 4, 5: 6}, B, probes)
    assert not alt_B_locally_closed_check({0: 0, 1: 1, 2: 3}, B, probes)


def test_json_round_trip():
    p = from_cycles([(0, 1), (4, 5, 6)])
    assert permutation_from_json(permutation_to_json(p)) == p
