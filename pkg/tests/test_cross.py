import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from satlab.cross import (
    ClaimViolation,
    check_saturated_bounds,
    check_theorem_cross,
    compute_G,
    cross_saturate,
    eq1_identity_check,
    find_transversal,
    is_cross_dependant,
    is_cross_saturated,
    transversal_bits,
)
from satlab.family import FamilySequence, SetFamily, family_complement, is_increasing, saturate
from satlab.fuzz import random_cross_saturated, trial_rng

from conftest import all_families, oracle_cross_saturated, oracle_has_transversal

E1 = SetFamily.from_sets(1, [{1}])
PAIR = FamilySequence.of(E1, E1)


def test_examples():
    assert is_cross_saturated(PAIR)
    empty_p_p = FamilySequence.of(SetFamily.empty(2), SetFamily.power_set(2), SetFamily.power_set(2))
    assert is_cross_saturated(empty_p_p)
    rep = is_cross_dependant(FamilySequence.of(SetFamily.from_sets(2, [{1}]), SetFamily.from_sets(2, [{2}])))
    assert not rep and rep.witness == (1, 2)
    rep = is_cross_saturated(FamilySequence.of(SetFamily.empty(1), SetFamily.empty(1)))
    assert rep.reason == "not_maximal" and rep.index == 0


def test_exhaustive_against_oracle():
    fams = list(all_families(1)) + list(all_families(2))
    by_n = {1: [f for f in fams if f.n == 1], 2: [f for f in fams if f.n == 2]}
    for n, fs in by_n.items():
        for a in fs:
            for b in fs:
                seq = FamilySequence.of(a, b)
                assert bool(is_cross_saturated(seq)) == oracle_cross_saturated([a, b])
    for a in by_n[1]:
        for b in by_n[1]:
            for c in by_n[1]:
                assert bool(is_cross_saturated(FamilySequence.of(a, b, c))) == oracle_cross_saturated([a, b, c])


def test_transversals_against_oracle():
    rng = random.Random(3)
    for _ in range(200):
        n = rng.randint(1, 3)
        fams = [SetFamily(n, rng.getrandbits(1 << n)) for _ in range(rng.randint(1, 3))]
        within = rng.randrange(1 << n)
        got = find_transversal(fams, within)
        assert (got is not None) == oracle_has_transversal(fams, within)
        assert (transversal_bits(n, fams) >> within & 1) == (got is not None)
        if got is not None:
            used = 0
            for f, m in zip(fams, got):
                assert m in f and m & used == 0 and m & ~within == 0
                used |= m


@settings(max_examples=60)
@given(st.integers(1, 5), st.integers(2, 4), st.integers(0, 2**32))
def test_cross_saturate_outputs(n, s, seed):
    seq = random_cross_saturated(n, s, random.Random(seed))
    assert is_cross_saturated(seq)
    assert all(is_increasing(f) for f in seq)
    assert check_theorem_cross(seq).holds
    assert all(r.holds for r in eq1_identity_check(seq))
    g = compute_G(seq)
    assert g.total <= 1 << n
    assert g.comp_sizes == tuple(family_complement(f).size() for f in seq)


def test_cross_saturate_rejects_dependent_failure():
    bad = FamilySequence.of(SetFamily.from_sets(2, [{1}]), SetFamily.from_sets(2, [{2}]))
    with pytest.raises(ValueError):
        cross_saturate(bad)


def test_cross_saturate_keeps_input():
    start = FamilySequence.of(SetFamily.from_sets(3, [{1}]), SetFamily.empty(3), SetFamily.empty(3))
    out = cross_saturate(start)
    assert start[0].issubset(out[0]) and is_cross_saturated(out)


def test_eq1_and_G_examples():
    assert [r.holds for r in eq1_identity_check(PAIR)] == [True, True]
    g = compute_G(PAIR)
    assert [f.sets() for f in g.families] == [[()], [(1,)]]
    assert g.total == 2


def test_s2_identity_fold_gives_self_duality():
    # for s = 2, the identity reads dual(F_1) = F_2
    for n in (2, 3):
        f = saturate(SetFamily.empty(n), 2)
        assert eq1_identity_check(FamilySequence.of(f, f))[0].holds


def test_compute_G_rejects_non_saturated():
    with pytest.raises(ValueError):
        compute_G(FamilySequence.of(SetFamily.empty(1), SetFamily.empty(1)))
    assert issubclass(ClaimViolation, AssertionError)


def test_bounds_report():
    f = saturate(SetFamily.empty(3), 3)
    rep = check_saturated_bounds(f, 3)
    assert rep.thm_bound == Fraction(16, 3) and rep.conj_bound == 6
    assert rep.meets_thm and rep.meets_conj
    assert rep.as_dict()["thm_bound"] == "16/3"
    with pytest.raises(ValueError):
        check_saturated_bounds(SetFamily.empty(3), 3)


def test_fuzz_rng_is_keyed():
    a = trial_rng(7, "cross", 3).random()
    assert a == trial_rng(7, "cross", 3).random()
    assert a != trial_rng(7, "cross", 4).random()
