import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from freymod.curves import CurveOverKRecord
from freymod.errors import InvariantViolation, RejectedInput
from freymod.frey import SolutionContext
from freymod.symplectic import (DensityReport, compute_ni, density_set, eliminate_symplectic, jacobi,
                                lemma16_test)
from tests.oracles import legendre, primes_below

SMALL_PRIMES = primes_below(3000)[1:]


def test_jacobi_examples():
    assert jacobi(2, 7) == 1
    assert jacobi(3, 7) == -1
    assert jacobi(0, 5) == 0
    for bad in (0, -3, 8):
        with pytest.raises(RejectedInput):
            jacobi(1, bad)


def test_jacobi_against_euler():
    for p in SMALL_PRIMES[:200]:
        for a in range(-20, 21):
            assert jacobi(a, p) == legendre(a, p)


def test_jacobi_composite_is_multiplicative():
    for n in range(1, 300, 2):
        for a in (-7, 2, 3, 10, 77):
            expect = 1
            m = n
            for p in SMALL_PRIMES:
                while m % p == 0:
                    expect *= legendre(a, p)
                    m //= p
            assert jacobi(a, n) == expect


def test_lemma16_examples():
    assert lemma16_test(1, 2, 2, 1, 7)
    assert not lemma16_test(1, 1, 1, 3, 7)
    assert lemma16_test(-8, 4, 1, 1, 11)
    with pytest.raises(RejectedInput):
        lemma16_test(7, 1, 1, 1, 7)


@settings(max_examples=80, deadline=None)
@given(st.sampled_from(SMALL_PRIMES[:60]), st.lists(st.integers(-50, 50), min_size=5, max_size=5))
def test_lemma16_invariances(p, vals):
    v1, v2, w1, w2, u = vals
    if any(x % p == 0 for x in (v1, v2, w1, w2, u)):
        return
    base = lemma16_test(v1, v2, w1, w2, p)
    assert lemma16_test(w1, w2, v1, v2, p) == base
    assert lemma16_test(v1 * u * u, v2, w1, w2, p) == base


def test_compute_ni_examples():
    assert compute_ni("1a", 1, (1, 2)).value == -4
    assert compute_ni("2", 1, (1, 1), r=5).value == -10
    assert compute_ni("1b", 1, (1, 1)).value == -1
    with pytest.raises(RejectedInput):
        compute_ni("1a", 1, (0, 2))
    with pytest.raises(RejectedInput):
        compute_ni("3", 1, (1, 1))


def test_ni_guard_trips_on_even_or_r_divisible_d():
    with pytest.raises(InvariantViolation):
        compute_ni("1a", 1, (1, 1), d_two_adic=2)
    with pytest.raises(InvariantViolation):
        compute_ni("2", 1, (1, 1), r=5, d_r_adic=2)


@pytest.mark.parametrize("ns,modulus,residues,density", [
    ([-6], 24, (23,), Fraction(1, 8)),
    ([-1], 8, (7,), Fraction(1, 4)),
    ([-4], 8, (7,), Fraction(1, 4)),
    ([-6, -1], 24, (23,), Fraction(1, 8)),
    ([-4, -10], 40, (31, 39), Fraction(1, 8)),
])
def test_density_examples(ns, modulus, residues, density):
    rep = density_set(ns, verified_bound=20000)
    assert (rep.modulus, tuple(rep.residues), rep.density) == (modulus, residues, density)
    for p in primes_below(20000):
        if p > 2 and rep.contains(p):
            assert all(legendre(n, p) == -1 for n in ns)
            assert p % 8 == 7


def test_density_round_trip():
    rep = density_set([-6, -1], verified_bound=5000)
    assert DensityReport.from_dict(rep.to_dict()) == rep


def test_density_errors():
    with pytest.raises(RejectedInput):
        density_set([])
    with pytest.raises(InvariantViolation):
        density_set([-3, 2])


def test_residues_coprime_to_modulus():
    rep = density_set([-30, -7], verified_bound=1000)
    assert all(math.gcd(u, rep.modulus) == 1 and u % 8 == 7 for u in rep.residues)
    assert rep.density > 0


def test_eliminate_synthetic_curve(K5):
    # scaled so neither claim can be checked: v_q2 = 1, v_3 = 2 gives n = -4
    E = CurveOverKRecord.from_roots("syn", K5, [0, 36, -36],
                                    {"(2, [1, 1, 1])": 1, "(3, [2, 1, 1])": 2})
    ctx = SolutionContext(5, d=3)
    rep = eliminate_symplectic(ctx, "even-sum", [E], verified_bound=5000)
    assert [e.ni.value for e in rep.entries] == [-4]
    assert (rep.density.modulus, tuple(rep.density.residues), rep.density.density) == (8, (7,), Fraction(1, 4))
    assert rep.assumptions["trusted_minimal_valuations"] == ["syn"]


def test_eliminate_vacuous():
    rep = eliminate_symplectic(SolutionContext(5, d=3), "even-sum", [], verified_bound=1000)
    assert rep.vacuous and rep.k == 0 and tuple(rep.density.residues) == (7,)


def test_eliminate_sample(sample_curves):
    rep = eliminate_symplectic(SolutionContext(5, d=3), "even-sum", sample_curves, verified_bound=5000)
    skipped = {lab for lab, _ in rep.skipped}
    assert "leg-m1-48" in skipped and "unit-z" in skipped
    assert rep.primes_certified > 0
    for e in rep.entries:
        assert e.ni.value < 0
    # every certified class makes every n a non-residue
    for p in primes_below(5000):
        if p > 2 and rep.density.contains(p):
            assert all(legendre(e.ni.value, p) == -1 for e in rep.entries)


def test_eliminate_r_sum_variants(sample_curves):
    ctx = SolutionContext(5, d=3)
    lemma = eliminate_symplectic(ctx, "r-sum", sample_curves, verified_bound=2000)
    printed = eliminate_symplectic(ctx, "r-sum", sample_curves, case2_variant="printed", verified_bound=2000)
    by_label = {e.label: e for e in lemma.entries}
    for e in printed.entries:
        other = by_label[e.label]
        if other.printed_variant is not None:
            assert other.printed_variant == e.ni.value
    with pytest.raises(RejectedInput):
        eliminate_symplectic(ctx, "r-sum", sample_curves, case2_variant="other")


def test_eliminate_rejects_mixed_fields(K7):
    E = CurveOverKRecord.from_roots("k7", K7, [0, 1, -1])
    with pytest.raises(RejectedInput):
        eliminate_symplectic(SolutionContext(5, d=3), "even-sum", [E])
