"""Brute-force search for x^r + y^r = d z^p and the cyclotomic identities.

Ground truth for everything else: the search knows nothing about Frey curves.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

from sympy import factorint, integer_nthroot, isprime

from ._parallel import ordered_map
from .cyclotomic import cyclotomic_form, quadratic_factor, real_cyclotomic_field
from .errors import RejectedInput

__all__ = [
    "SearchWindow",
    "SolutionRecord",
    "IdentityReport",
    "find_solutions",
    "is_perfect_power",
    "verify_cyclotomic_identities",
]


@dataclass(frozen=True)
class SearchWindow:
    r: int
    d: int
    p: int
    H: int

    def __post_init__(self):
        if self.H < 1:
            raise RejectedInput(f"height bound must be >= 1, got {self.H}")
        if not isprime(self.r) or self.r < 3:
            raise RejectedInput(f"r must be an odd prime, got {self.r}")
        if not isprime(self.p) or self.p == 2:
            raise RejectedInput(f"p must be an odd prime, got {self.p}")
        if self.d < 1:
            raise RejectedInput(f"d must be positive, got {self.d}")


@dataclass(frozen=True, order=True)
class SolutionRecord:
    a: int
    b: int
    c: int
    primitive: bool
    trivial: bool
    d: int = dc_field(default=1, compare=False)
    r: int = dc_field(default=5, compare=False)
    p: int = dc_field(default=7, compare=False)

    def __post_init__(self):
        if self.a ** self.r + self.b ** self.r != self.d * self.c ** self.p:
            raise RejectedInput(f"({self.a}, {self.b}, {self.c}) does not satisfy the equation")

    def to_dict(self) -> dict:
        return {"a": self.a, "b": self.b, "c": self.c,
                "primitive": self.primitive, "trivial": self.trivial}


def is_perfect_power(n: int, k: int) -> int | None:
    """The integer c with c^k = n, or None.  Negative n only for odd k."""
    if k < 1:
        raise RejectedInput("exponent must be positive")
    if n < 0:
        if k % 2 == 0:
            return None
        root = is_perfect_power(-n, k)
        return None if root is None else -root
    root, exact = integer_nthroot(n, k)
    return int(root) if exact else None


def _sieve_moduli(p: int, count: int = 3, limit: int = 2000) -> list[tuple[int, frozenset[int]]]:
    """Primes l = 1 (mod p) with their p-th power residues; a p-th power must land there."""
    out = []
    l = 2 * p + 1
    while len(out) < count and l < limit:
        if isprime(l):
            out.append((l, frozenset(pow(x, p, l) for x in range(l))))
        l += 2 * p
    return out


def _canonical(a: int, b: int, c: int) -> tuple[int, int, int]:
    # odd r and p: (a, b, c) -> (-a, -b, -c) is a symmetry, so make c >= 0,
    # then order a >= b
    if c < 0:
        a, b, c = -a, -b, -c
    if a < b:
        a, b = b, a
    return a, b, c


def find_solutions(w: SearchWindow) -> list[SolutionRecord]:
    """Every (a, b, c) with |a|, |b| <= H solving a^r + b^r = d c^p, up to symmetry."""
    r, d, p, H = w.r, w.d, w.p, w.H
    sieve = _sieve_moduli(p)
    rpow = {x: x ** r for x in range(-H, H + 1)}

    def row(a: int) -> list[tuple[int, int, int]]:
        found = []
        ar = rpow[a]
        for b in range(-H, a + 1):
            if a == 0 and b == 0:
                continue
            s = ar + rpow[b]
            if s % d:
                continue
            t = s // d
            if any(t % l not in powers for l, powers in sieve):
                continue
            c = is_perfect_power(t, p)
            if c is not None:
                found.append(_canonical(a, b, c))
        return found

    seen = set()
    for chunk in ordered_map(row, range(-H, H + 1)):
        seen.update(chunk)
    return [SolutionRecord(a, b, c, primitive=math.gcd(a, b, c) == 1, trivial=a * b * c == 0,
                           d=d, r=r, p=p)
            for a, b, c in sorted(seen)]


@dataclass(frozen=True)
class IdentityReport:
    a: int
    b: int
    r: int
    phi_value: int
    gcd_value: int
    factor_product_ok: bool
    prime_divisor_classes: tuple[tuple[int, int], ...]
    r_valuation_ok: bool
    divisor_classes_ok: bool

    def __post_init__(self):
        assert self.phi_value * (self.a + self.b) == self.a ** self.r + self.b ** self.r

    @property
    def ok(self) -> bool:
        return (self.factor_product_ok and self.r_valuation_ok and self.divisor_classes_ok
                and self.gcd_value in (1, self.r))

    def to_dict(self) -> dict:
        return {
            "a": self.a, "b": self.b, "r": self.r,
            "phi_value": self.phi_value,
            "gcd_value": self.gcd_value,
            "factor_product_ok": self.factor_product_ok,
            "r_valuation_ok": self.r_valuation_ok,
            "divisor_classes_ok": self.divisor_classes_ok,
            "prime_divisor_classes": [list(t) for t in self.prime_divisor_classes],
        }


def verify_cyclotomic_identities(a: int, b: int, r: int) -> IdentityReport:
    if not isprime(r) or r < 3:
        raise RejectedInput(f"r must be an odd prime, got {r}")
    if a + b == 0:
        raise RejectedInput("a + b = 0: Phi_r(a, b) is not (a^r + b^r)/(a + b)")
    if math.gcd(a, b) != 1:
        raise RejectedInput(f"a, b must be coprime, got gcd {math.gcd(a, b)}")
    s = a ** r + b ** r
    if s % (a + b):
        raise AssertionError("a + b does not divide a^r + b^r")
    phi = s // (a + b)
    assert phi == cyclotomic_form(a, b, r)
    g = math.gcd(a + b, phi)

    K = real_cyclotomic_field(r)
    prod = K.one
    for j in range(1, K.m + 1):
        prod = prod * quadratic_factor(j, a, b, K)
    product_ok = prod == K.constant(phi)

    fac = factorint(abs(phi))
    v_r = fac.get(r, 0)
    r_ok = (v_r == 1) if (a + b) % r == 0 else (v_r == 0)
    classes = tuple((q, q % r) for q in sorted(fac))
    classes_ok = all(q == r or q % r == 1 for q in fac)
    return IdentityReport(a, b, r, phi, g, product_ok, classes, r_ok, classes_ok)
