import math
import random

import pytest

from freymod.errors import RejectedInput
from freymod.search import (SearchWindow, SolutionRecord, find_solutions, is_perfect_power,
                            verify_cyclotomic_identities)


def nontrivial(sols):
    return [(s.a, s.b, s.c) for s in sols if s.primitive and not s.trivial]


def test_search_examples():
    assert (1, 1, 1) in nontrivial(find_solutions(SearchWindow(5, 2, 7, 3)))
    assert (2, 1, 1) in nontrivial(find_solutions(SearchWindow(5, 33, 7, 5)))
    assert nontrivial(find_solutions(SearchWindow(5, 3, 7, 50))) == []


def test_search_matches_plain_loop():
    r, d, p, H = 3, 9, 3, 12
    got = {(s.a, s.b, s.c) for s in find_solutions(SearchWindow(r, d, p, H))}
    expect = set()
    for a in range(-H, H + 1):
        for b in range(-H, H + 1):
            if (a, b) == (0, 0):
                continue
            s = a ** r + b ** r
            for c in range(-40, 41):
                if d * c ** p == s:
                    x, y, z = (a, b, c) if c >= 0 else (-a, -b, -c)
                    expect.add((max(x, y), min(x, y), z))
    assert got == expect


def test_records_are_checked():
    with pytest.raises(RejectedInput):
        SolutionRecord(1, 1, 2, True, False, d=2, r=5, p=7)


def test_window_rejects():
    for args in [(5, 3, 7, 0), (4, 3, 7, 5), (5, 3, 2, 5), (5, 0, 7, 5)]:
        with pytest.raises(RejectedInput):
            SearchWindow(*args)


def test_perfect_power_against_root_extraction():
    rng = random.Random(11)
    for _ in range(100000):
        k = rng.choice((2, 3, 5, 7))
        if rng.random() < 0.3:
            base = rng.randint(-300, 300)
            n = base ** k
        else:
            n = rng.randint(-10 ** 12, 10 ** 12)
        root = is_perfect_power(n, k)
        # oracle: float estimate then exact check of neighbours
        est = round(abs(n) ** (1.0 / k)) if n else 0
        cands = [c for c in range(max(est - 2, 0), est + 3) if c ** k == abs(n)]
        if n < 0 and k % 2 == 0:
            cands = []
        expect = None if not cands else (cands[0] if n >= 0 else -cands[0])
        assert root == expect


def test_identity_examples():
    rep = verify_cyclotomic_identities(2, 1, 5)
    assert rep.phi_value == 11 and rep.ok
    rep = verify_cyclotomic_identities(4, 1, 5)
    assert (rep.phi_value, rep.gcd_value) == (205, 5) and rep.r_valuation_ok
    assert [q for q, _ in rep.prime_divisor_classes] == [5, 41]
    rep = verify_cyclotomic_identities(1, 0, 5)
    assert (rep.phi_value, rep.gcd_value) == (1, 1)
    with pytest.raises(RejectedInput):
        verify_cyclotomic_identities(3, -3, 5)
    with pytest.raises(RejectedInput):
        verify_cyclotomic_identities(2, 4, 5)


def vr(n, r):
    v = 0
    while n % r == 0:
        n //= r
        v += 1
    return v


@pytest.mark.parametrize("r", [5, 7])
def test_r_adic_valuation_of_sum(r):
    for a in range(-200, 201):
        for b in range(-200, 201):
            if (a + b) % r or a + b == 0 or math.gcd(a, b) != 1:
                continue
            assert vr(a ** r + b ** r, r) == vr(a + b, r) + 1


def test_identities_random():
    rng = random.Random(5)
    for _ in range(60):
        r = rng.choice((5, 7, 11))
        a, b = rng.randint(-60, 60), rng.randint(-60, 60)
        if a + b == 0 or math.gcd(a, b) != 1:
            continue
        assert verify_cyclotomic_identities(a, b, r).ok
