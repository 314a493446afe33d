"""Symplectic elimination: square tests on discriminant valuations, density sets of exponents.

For a putative solution with 2 | a+b or r | a+b, the Frey curve and each
isogeny-class representative E_i share multiplicative primes.  The product of
the four discriminant valuations must be a square mod p; the integers n_i
collect that product modulo squares.  Exponents p = 7 (mod 8) with (q/p) = 1
for every odd q | prod n_i make every n_i a non-square, eliminating all E_i.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Iterable, Sequence

from sympy import factorint, isprime, primerange, totient

from ._parallel import ordered_map
from .curves import CurveOverKRecord
from .errors import InvariantViolation, RejectedInput
from .frey import SolutionContext, normalize_scenario
from .ideals import PrimeIdeal, factor_prime

__all__ = [
    "DEFAULT_VERIFIED_BOUND",
    "CASES",
    "jacobi",
    "lemma16_test",
    "NiValue",
    "frey_classes",
    "compute_ni",
    "DensityReport",
    "density_set",
    "CurveElimination",
    "SymplecticReport",
    "eliminate_symplectic",
]

DEFAULT_VERIFIED_BOUND = 10 ** 5
CASES = ("1a", "1b", "2")


def jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a/n) for odd positive n, by binary reciprocity."""
    if n <= 0 or n % 2 == 0:
        raise RejectedInput(f"Jacobi symbol needs an odd positive modulus, got {n}")
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def lemma16_test(v1: int, v2: int, w1: int, w2: int, p: int) -> bool:
    """True iff v1 v2 w1 w2 is a nonzero square mod p.

    False certifies that E[p] and E'[p] cannot be isomorphic in the way the
    lemma describes, given multiplicative reduction at both primes.
    """
    if p < 3 or not isprime(p):
        raise RejectedInput(f"p must be an odd prime, got {p}")
    if any(v % p == 0 for v in (v1, v2, w1, w2)):
        raise RejectedInput(f"p = {p} divides one of the discriminant valuations")
    return jacobi(v1 * v2 * w1 * w2, p) == 1


@dataclass(frozen=True)
class NiValue:
    case_tag: str
    primes: tuple[str, str]
    value: int
    frey_classes: tuple[int, int]
    curve_valuations: tuple[int, int]

    def __post_init__(self):
        if self.value >= 0:
            raise InvariantViolation(f"n_i = {self.value} is not negative")


def frey_classes(case_tag: str, d_valuation: int, r: int | None = None,
                 d_two_adic: int = 0, d_r_adic: int = 0) -> tuple[int, int]:
    """Frey-curve discriminant valuations mod p at the two primes of the case.

    With d odd and prime to r these are (-8, 4 v_q(d0)), (-8, 2 v_q(d1')) and
    (-2r, 4 v_q(d)).  The extra 2-adic and r-adic valuations of d model the
    situation the sign argument excludes.
    """
    if case_tag in ("1a", "1b"):
        two = -8 + 4 * d_two_adic
        return (two, 4 * d_valuation if case_tag == "1a" else 2 * d_valuation)
    if case_tag == "2":
        if r is None:
            raise RejectedInput("case 2 needs r")
        return (-2 * r + 2 * (r - 1) * d_r_adic, 4 * d_valuation)
    raise RejectedInput(f"unknown case {case_tag!r}; expected one of {CASES}")


# squares dividing the Frey product that the printed n_i drop
_SQUARE_PART = {"1a": 16, "1b": 16, "2": 4}


def compute_ni(case_tag: str, d_valuation: int, curve_valuations: Sequence[int],
               r: int | None = None, primes: tuple[str, str] = ("", ""),
               d_two_adic: int = 0, d_r_adic: int = 0) -> NiValue:
    """n_i for one curve: Frey classes times the curve's two valuations, mod squares.

    1a: -2 v_q(d0) v_q2(E) v_q(E);  1b: -v_q(d1') v_q2(E) v_q(E);
    2:  -2 v_q(d) r v_q(E) v_pr(E).
    """
    vals = tuple(int(v) for v in curve_valuations)
    if len(vals) != 2:
        raise RejectedInput("need exactly two curve valuations")
    if d_valuation <= 0 or min(vals) <= 0:
        raise RejectedInput("all valuation inputs must be strictly positive")
    classes = frey_classes(case_tag, d_valuation, r, d_two_adic, d_r_adic)
    raw = classes[0] * classes[1] * vals[0] * vals[1]
    square = _SQUARE_PART[case_tag]
    value = raw // square if raw % square == 0 else raw
    if value >= 0:
        raise InvariantViolation(
            f"n_i = {value} >= 0: the sign argument needs d odd and prime to r")
    return NiValue(case_tag, tuple(primes), value, classes, vals)


# -- density sets --------------------------------------------------------------

@dataclass(frozen=True)
class DensityReport:
    modulus: int
    residues: tuple[int, ...]
    density: Fraction
    k: int
    verified_bound: int
    n_values: tuple[int, ...] = ()
    odd_primes: tuple[int, ...] = ()
    nonsquare_bound: Fraction = Fraction(1)
    primes_checked: int = 0

    def __post_init__(self):
        assert self.density > 0
        assert all(math.gcd(x, self.modulus) == 1 and x % 8 == 7 for x in self.residues)

    def contains(self, p: int) -> bool:
        return p % self.modulus in self.residues

    def to_dict(self) -> dict:
        return {
            "modulus": self.modulus,
            "residues": list(self.residues),
            "density": str(self.density),
            "k": self.k,
            "verified_bound": self.verified_bound,
            "n_values": list(self.n_values),
            "odd_primes": list(self.odd_primes),
            "nonsquare_bound": str(self.nonsquare_bound),
            "primes_checked": self.primes_checked,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "DensityReport":
        return cls(
            modulus=int(data["modulus"]),
            residues=tuple(int(x) for x in data["residues"]),
            density=Fraction(data["density"]),
            k=int(data["k"]),
            verified_bound=int(data["verified_bound"]),
            n_values=tuple(int(x) for x in data.get("n_values", ())),
            odd_primes=tuple(int(x) for x in data.get("odd_primes", ())),
            nonsquare_bound=Fraction(data.get("nonsquare_bound", "1")),
            primes_checked=int(data.get("primes_checked", 0)),
        )


def _crt(x: int, m: int, y: int, n: int) -> tuple[int, int] | None:
    g = math.gcd(m, n)
    if (y - x) % g:
        return None
    lcm = m // g * n
    t = (y - x) // g * pow(m // g, -1, n // g) % (n // g)
    return (x + m * t) % lcm, lcm


def _reciprocity_classes(q: int) -> list[int]:
    """Classes x mod 4q, x = 3 (mod 4), with (q/p) = 1 for primes p = x."""
    # for p = 3 (mod 4): (q/p) = (p/q) if q = 1 (mod 4), else -(p/q)
    sign = 1 if q % 4 == 1 else -1
    return [x for x in range(3, 4 * q, 4) if x % q and sign * jacobi(x % q, q) == 1]


def density_set(n_values: Iterable[int], aux: Iterable[int] = (),
                verified_bound: int = DEFAULT_VERIFIED_BOUND) -> DensityReport:
    """Residue classes of p on which every n_i is a non-square mod p."""
    ns = tuple(int(n) for n in n_values)
    if not ns:
        raise RejectedInput("density_set needs at least one n_i")
    if any(n >= 0 for n in ns):
        raise InvariantViolation(f"all n_i must be negative, got {ns}")
    odd = set()
    for n in ns:
        odd.update(q for q in factorint(-n) if q != 2)
    for q in aux:
        if q == 2:
            continue
        if not isprime(abs(q)):
            raise RejectedInput(f"auxiliary modulus {q} is not a prime")
        odd.add(abs(q))
    odd_primes = tuple(sorted(odd))

    residues, modulus = [7], 8
    for q in odd_primes:
        classes = _reciprocity_classes(q)
        combined, new_mod = [], None
        for x in residues:
            for y in classes:
                hit = _crt(x, modulus, y, 4 * q)
                if hit is not None:
                    combined.append(hit[0])
                    new_mod = hit[1]
        residues, modulus = combined, new_mod
    residues = tuple(sorted(set(residues)))
    density = Fraction(len(residues), int(totient(modulus)))

    lookup = set(residues)
    checked = 0
    for p in primerange(3, verified_bound):
        if p % modulus in lookup:
            checked += 1
            for n in ns:
                if jacobi(n, p) != -1:
                    raise InvariantViolation(f"n = {n} is a square mod p = {p} inside the classes")
    return DensityReport(modulus, residues, density, len(ns), verified_bound, ns,
                         odd_primes, Fraction(1, 2 ** len(ns)), checked)


# -- the elimination engine ----------------------------------------------------

@dataclass(frozen=True)
class CurveElimination:
    label: str
    ni: NiValue
    valuation_status: tuple[str, str]
    printed_variant: int | None = None


@dataclass(frozen=True)
class SymplecticReport:
    r: int
    d: int
    scenario: str
    entries: tuple[CurveElimination, ...]
    skipped: tuple[tuple[str, str], ...]
    density: DensityReport
    vacuous: bool
    primes_certified: int
    sample_primes: tuple[int, ...]
    assumptions: dict = dc_field(default_factory=dict)

    @property
    def k(self) -> int:
        return len(self.entries)

    def to_dict(self) -> dict:
        return {
            "r": self.r,
            "d": self.d,
            "scenario": self.scenario,
            "k": self.k,
            "vacuous": self.vacuous,
            "n_table": [
                {"label": e.label, "case": e.ni.case_tag, "primes": list(e.ni.primes),
                 "frey_classes": list(e.ni.frey_classes),
                 "curve_valuations": list(e.ni.curve_valuations),
                 "valuation_status": list(e.valuation_status),
                 "n": e.ni.value, "n_printed_variant": e.printed_variant}
                for e in self.entries
            ],
            "skipped": [{"label": lab, "reason": why} for lab, why in self.skipped],
            "modulus": self.density.modulus,
            "residues": list(self.density.residues),
            "density": str(self.density.density),
            "nonsquare_bound": str(self.density.nonsquare_bound),
            "verified_bound": self.density.verified_bound,
            "primes_checked": self.density.primes_checked,
            "primes_certified": self.primes_certified,
            "sample_primes": list(self.sample_primes),
            "assumptions": dict(self.assumptions),
        }


def _positive(curve: CurveOverKRecord, P: PrimeIdeal):
    mv = curve.minimal_valuation(P)
    if mv.value is not None and mv.value > 0:
        return mv
    return None


def _pick_pair(curve: CurveOverKRecord, firsts: Sequence[PrimeIdeal], seconds: Sequence[PrimeIdeal]):
    for P1 in firsts:
        m1 = _positive(curve, P1)
        if m1 is None:
            continue
        for P2 in seconds:
            m2 = _positive(curve, P2)
            if m2 is not None:
                return P1, m1, P2, m2
    return None


def eliminate_symplectic(ctx: SolutionContext, scenario: str,
                         curves: Sequence[CurveOverKRecord],
                         case2_variant: str = "lemma",
                         verified_bound: int = DEFAULT_VERIFIED_BOUND) -> SymplecticReport:
    """Compute n_i for every curve and the exponent classes eliminating all of them.

    Curves lacking positive minimal valuations at a usable prime pair are
    skipped with a reason; no elimination is claimed for them.
    """
    flags = normalize_scenario(scenario)
    if len(flags) != 1:
        raise RejectedInput(f"choose exactly one scenario from {('even-sum', 'r-sum')}")
    (scen,) = flags
    if case2_variant not in ("lemma", "printed"):
        raise RejectedInput("case2_variant must be 'lemma' or 'printed'")
    if ctx.d is None:
        raise RejectedInput("eliminate needs d")
    K, r = ctx.field, ctx.r
    for c in curves:
        if c.r != r:
            raise RejectedInput(f"curve {c.label} is over r = {c.r}, context has r = {r}")
    dfac = ctx.d_factorization
    d0_primes = sorted(q for q in dfac if q % r != 1)
    d1_primes = sorted(q for q in dfac if q % r == 1)
    above = {q: factor_prime(q, K) for q in dfac}
    two = factor_prime(2, K)
    (pr,) = factor_prime(r, K)

    def run(curve: CurveOverKRecord):
        if not curve.full_two_torsion:
            return None, "curve lacks full 2-torsion"
        if scen == "even-sum":
            for tag, qs in (("1a", d0_primes), ("1b", d1_primes)):
                for q in qs:
                    pick = _pick_pair(curve, two, above[q])
                    if pick is None:
                        continue
                    P2, m2, Pq, mq = pick
                    ni = compute_ni(tag, dfac[q], (m2.value, mq.value),
                                    primes=(P2.descriptor, Pq.descriptor))
                    return CurveElimination(curve.label, ni, (m2.status, mq.status)), None
            return None, "no positive minimal valuations at a prime above 2 and a prime above d"
        # r-sum: square test at p_r and q | d
        mr = _positive(curve, pr)
        if mr is None:
            return None, "no positive minimal valuation at p_r"
        for q in d0_primes + d1_primes:
            for Pq in above[q]:
                mq = _positive(curve, Pq)
                if mq is None:
                    continue
                lemma = compute_ni("2", dfac[q], (mq.value, mr.value), r=r,
                                   primes=(Pq.descriptor, pr.descriptor))
                two_pick = next(((P, m) for P in two if (m := _positive(curve, P))), None)
                printed = None
                if two_pick is not None:
                    P2, m2 = two_pick
                    printed = compute_ni("2", dfac[q], (m2.value, mr.value), r=r,
                                         primes=(P2.descriptor, pr.descriptor))
                if case2_variant == "lemma":
                    other = printed.value if printed and printed.value != lemma.value else None
                    return CurveElimination(curve.label, lemma, (mq.status, mr.status), other), None
                if printed is None:
                    return None, "printed variant needs a positive valuation above 2"
                other = lemma.value if lemma.value != printed.value else None
                return CurveElimination(curve.label, printed, (m2.status, mr.status), other), None
        return None, "no positive minimal valuation at a prime above d"

    results = ordered_map(run, sorted(curves, key=lambda c: c.label))
    labels = sorted(c.label for c in curves)
    entries = tuple(e for e, _ in results if e is not None)
    skipped = tuple((lab, why) for lab, (e, why) in zip(labels, results) if e is None)

    aux = set()
    for q, e in dfac.items():
        aux.update(factorint(e))
    aux.discard(2)
    vacuous = not entries
    if vacuous:
        density = DensityReport(8, (7,), Fraction(1, 4), 0, verified_bound)
    else:
        density = density_set([e.ni.value for e in entries], sorted(aux), verified_bound)

    certified, sample = 0, []
    if not vacuous:
        for p in primerange(max(ctx.p_min, 3), verified_bound):
            if not density.contains(p):
                continue
            args = [(e.ni.frey_classes + e.ni.curve_valuations) for e in entries]
            if any(v % p == 0 for a in args for v in a):
                continue
            for a in args:
                if lemma16_test(*a, p):
                    raise InvariantViolation(f"square test passes at p = {p}")
            certified += 1
            if len(sample) < 10:
                sample.append(p)

    trusted = sorted({e.label for e in entries if "trusted" in e.valuation_status})
    assumptions = {
        "p_min": ctx.p_min,
        "unsafe_p_min": ctx.unsafe,
        "case2_variant": case2_variant,
        "trusted_minimal_valuations": trusted,
        "modularity_and_level_lowering": "assumed for p >= p_min",
    }
    return SymplecticReport(r, ctx.d, scen, entries, skipped, density, vacuous,
                            certified, tuple(sample), assumptions)
