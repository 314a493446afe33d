"""The Frey curve F_{a,b}: Y^2 = X (X - A)(X + B) over K, and its local data.

A = alpha (a+b)^2, B = beta f_1(a, b), C = A + B = gamma f_2(a, b).
Minimalization at p_r and at primes above 2 is done on valuation triples:
one scaling step subtracts (4, 6, 12) from (v(c4), v(c6), v(disc)).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field as dc_field

from sympy import factorint, integer_nthroot, isprime

from .curves import weierstrass_invariants
from .cyclotomic import (
    RealCyclotomicField,
    RingElement,
    cyclotomic_form,
    frey_constants,
    quadratic_factor,
    real_cyclotomic_field,
)
from .errors import DegenerateCurve, InvariantViolation, RejectedInput
from .ideals import (
    PrimeIdeal,
    factor_prime,
    ideal_lattice,
    radical_outside,
    residue_representatives,
    valuation,
)

__all__ = [
    "DEFAULT_P_MIN",
    "SCENARIOS",
    "SolutionContext",
    "FreyCurve",
    "LocalReductionType",
    "Prop4Result",
    "ConductorShape",
    "SerreLevel",
    "SerreLevelSet",
    "build_frey",
    "classify_local",
    "prop4_nonminimality_check",
    "conductor_shape",
    "serre_level_set",
    "disc_val_mod_p",
    "normalize_scenario",
]

DEFAULT_P_MIN = 17
SCENARIOS = ("even-sum", "r-sum")


def normalize_scenario(scenario) -> frozenset[str]:
    if scenario is None:
        return frozenset()
    if isinstance(scenario, str):
        scenario = [s for s in scenario.replace(",", " ").split()]
    out = frozenset(scenario)
    unknown = out - set(SCENARIOS)
    if unknown:
        raise RejectedInput(f"unknown scenario {sorted(unknown)}; choose from {SCENARIOS}")
    return out


@dataclass(frozen=True)
class SolutionContext:
    """Parameters of a (putative) solution of x^r + y^r = d z^p.

    Only r is mandatory; the invariants are checked on the fields present.
    """

    r: int
    d: int | None = None
    p: int | None = None
    a: int | None = None
    b: int | None = None
    c: int | None = None
    p_min: int = DEFAULT_P_MIN
    unsafe: bool = False

    def __post_init__(self):
        r, d, p = self.r, self.d, self.p
        if not isinstance(r, int) or r < 5 or not isprime(r):
            raise RejectedInput(f"r must be a prime >= 5, got {r!r}")
        if self.p_min < DEFAULT_P_MIN and not self.unsafe:
            raise RejectedInput(f"p_min = {self.p_min} < {DEFAULT_P_MIN} needs the unsafe override")
        if d is not None:
            if d < 1 or d % 2 == 0:
                raise RejectedInput(f"d must be a positive odd integer, got {d}")
            if d % r == 0:
                raise RejectedInput(f"r = {r} divides d = {d}")
            if integer_nthroot(d, r)[1]:
                raise RejectedInput(f"d = {d} is an r-th power")
        if p is not None:
            if p < 5 or not isprime(p):
                raise RejectedInput(f"p must be a prime > 3, got {p}")
            if d is not None and d % p == 0:
                raise RejectedInput(f"p = {p} divides d = {d}")
        if (self.a is None) != (self.b is None):
            raise RejectedInput("a and b must be given together")
        if self.a is not None:
            if self.a + self.b == 0:
                raise DegenerateCurve("a + b = 0 gives a singular Frey curve")
            if math.gcd(self.a, self.b) != 1:
                raise RejectedInput(f"gcd(a, b) = {math.gcd(self.a, self.b)} != 1")
        if self.c is not None:
            if None in (self.a, d, p):
                raise RejectedInput("c requires a, b, d and p")
            if self.a ** r + self.b ** r != d * self.c ** p:
                raise RejectedInput("a^r + b^r != d c^p")

    @property
    def field(self) -> RealCyclotomicField:
        return real_cyclotomic_field(self.r)

    @property
    def s(self) -> int:
        """a + b."""
        if self.a is None:
            raise RejectedInput("no (a, b) in this context")
        return self.a + self.b

    def _require_d(self) -> int:
        if self.d is None:
            raise RejectedInput("this operation needs d")
        return self.d

    @property
    def d_factorization(self) -> dict[int, int]:
        return {int(q): int(e) for q, e in factorint(self._require_d()).items()}

    @property
    def d0(self) -> int:
        return math.prod(q ** e for q, e in self.d_factorization.items() if q % self.r != 1)

    @property
    def d1(self) -> int:
        return math.prod(q ** e for q, e in self.d_factorization.items() if q % self.r == 1)

    @property
    def p_meets_floor(self) -> bool | None:
        return None if self.p is None else self.p >= self.p_min

    def assumptions(self) -> dict:
        return {"p_min": self.p_min, "unsafe_p_min": self.unsafe,
                "p_meets_floor": self.p_meets_floor}


@dataclass(frozen=True)
class FreyCurve:
    context: SolutionContext
    A: RingElement
    B: RingElement
    C: RingElement
    c4: RingElement
    c6: RingElement
    disc: RingElement

    @property
    def field(self) -> RealCyclotomicField:
        return self.A.field

    @property
    def a_invariants(self) -> tuple[RingElement, ...]:
        K = self.field
        return (K.zero, self.B - self.A, K.zero, -(self.A * self.B), K.zero)


def build_frey(ctx: SolutionContext) -> FreyCurve:
    if ctx.a is None:
        raise RejectedInput("build_frey needs a and b")
    a, b = ctx.a, ctx.b
    if a + b == 0:
        raise DegenerateCurve("a + b = 0 gives a singular Frey curve")
    if math.gcd(a, b) != 1:
        raise RejectedInput("gcd(a, b) != 1")
    K = ctx.field
    alpha, beta, gamma = frey_constants(K)
    A = alpha * ((a + b) ** 2)
    B = beta * quadratic_factor(2, a, b, K)
    C = A + B
    if C != gamma * quadratic_factor(1, a, b, K):
        raise InvariantViolation("A + B != gamma f_2(a, b)")
    c4 = 16 * (A * A + A * B + B * B)
    c6 = 32 * (2 * A * A * A + 3 * A * A * B - 3 * A * B * B - 2 * B * B * B)
    disc = 16 * (A * B * C) ** 2
    if not disc:
        raise DegenerateCurve("Frey discriminant vanishes")
    inv = weierstrass_invariants(K.zero, B - A, K.zero, -(A * B), K.zero)
    if (inv.c4, inv.c6, inv.disc) != (c4, c6, disc):
        raise InvariantViolation("closed-form invariants disagree with the b-invariants")
    return FreyCurve(ctx, A, B, C, c4, c6, disc)


# -- local reduction ----------------------------------------------------------

GOOD = "good"
MULTIPLICATIVE = "multiplicative"
OUTSIDE = "outside-paper-case"


@dataclass(frozen=True)
class Prop4Result:
    """Non-minimality test at a prime above 2 (Tate case >= 8 criterion)."""

    passed: bool
    part_a: bool
    witness: RingElement | None

    def __bool__(self):
        return self.passed


@dataclass(frozen=True)
class LocalReductionType:
    P: PrimeIdeal
    kind: str
    conductor_exponent: int | None
    min_disc_valuation: int | None
    disc_val_mod_p: int | None = None
    model_valuations: tuple[int, int, int] | None = None  # (c4, c6, disc) of F itself
    witness: RingElement | None = None
    note: str = ""

    def __post_init__(self):
        if self.kind == MULTIPLICATIVE:
            assert self.conductor_exponent == 1 and self.min_disc_valuation > 0
        if self.kind == GOOD:
            assert self.min_disc_valuation == 0

    @property
    def min_valuations(self) -> tuple[int, int, int] | None:
        """(c4, c6, disc) valuations of a locally minimal model, where known."""
        if self.model_valuations is None or self.kind != MULTIPLICATIVE:
            return None
        shift = self.model_valuations[2] - self.min_disc_valuation
        k = shift // 12
        v4, v6, vd = self.model_valuations
        return (v4 - 4 * k, v6 - 6 * k, vd - 12 * k)


def _val_or_inf(x: RingElement, P: PrimeIdeal) -> int | float:
    return valuation(x, P) if x else math.inf


def _triple(F: FreyCurve, P: PrimeIdeal) -> tuple[int, int, int]:
    return (valuation(F.c4, P), _val_or_inf(F.c6, P), valuation(F.disc, P))


def _mod_p(F: FreyCurve, value: int | None) -> int | None:
    p = F.context.p
    return None if p is None or value is None else value % p


def prop4_nonminimality_check(F: FreyCurve, P: PrimeIdeal) -> Prop4Result:
    """Decide Tate case >= 8 at P | 2 with the shift r = 0.

    (a) b8 + 3 r b6 + 3 r^2 b4 + r^3 b2 + 3 r^4 = b8 = -(AB)^2 in P^5.
    (b) some s has a2 + 3r - s a1 - s^2 = (B - A) - s^2 in P^2; s is found by
        exhaustive search over O_K / P^2.
    """
    if P.q != 2 or P.is_ramified:
        raise RejectedInput("the non-minimality check applies at primes above 2, which are unramified in K")
    if P.r != F.field.r:
        raise RejectedInput("prime of a different field")
    s = F.context.s
    if s % 8:
        raise RejectedInput(f"8 must divide a + b = {s}")
    a1, a2, a3, a4, a6 = F.a_invariants
    b8 = weierstrass_invariants(*F.a_invariants).b8
    part_a = (not b8) or b8 in ideal_lattice(P, 5)
    if not part_a:
        return Prop4Result(False, False, None)
    square_lattice = ideal_lattice(P, 2)
    for cand in residue_representatives(P, 2):
        if (a2 - cand * a1 - cand * cand) in square_lattice:
            return Prop4Result(True, True, cand)
    return Prop4Result(False, True, None)


def classify_local(F: FreyCurve, P: PrimeIdeal) -> LocalReductionType:
    ctx = F.context
    r, s = ctx.r, ctx.s
    if P.r != r:
        raise RejectedInput("prime of a different field")

    if P.q not in (2, r):
        vd = valuation(F.disc, P)
        if vd == 0:
            return LocalReductionType(P, GOOD, 0, 0, _mod_p(F, 0))
        v4, v6, _ = _triple(F, P)
        if v4 == 0:
            return LocalReductionType(P, MULTIPLICATIVE, 1, vd, _mod_p(F, vd), (v4, v6, vd))
        return LocalReductionType(P, OUTSIDE, None, None, None, (v4, v6, vd),
                                  note="v(disc) > 0 and v(c4) > 0")

    if P.q == r:
        if s % r:
            return LocalReductionType(P, OUTSIDE, None, None, None,
                                      note=f"r = {r} does not divide a + b")
        v = valuation(s, P)
        v4, v6, vd = _triple(F, P)
        if (v4, v6, vd) != (4, 6, 10 + 4 * v):
            raise InvariantViolation(
                f"p_r valuations {(v4, v6, vd)} differ from (4, 6, {10 + 4 * v})")
        md = vd - 12
        return LocalReductionType(P, MULTIPLICATIVE, 1, md, _mod_p(F, md), (v4, v6, vd))

    # P | 2
    if s % 2:
        return LocalReductionType(P, OUTSIDE, None, None, None, note="a + b is odd")
    if s % 8:
        raise RejectedInput(f"8 must divide a + b = {s} at primes above 2")
    v = valuation(s, P)
    v4, v6, vd = _triple(F, P)
    if (v4, v6, vd) != (4, 6, 4 + 4 * v):
        raise InvariantViolation(
            f"2-adic valuations {(v4, v6, vd)} differ from (4, 6, {4 + 4 * v})")
    check = prop4_nonminimality_check(F, P)
    if not check:
        raise InvariantViolation("B is not a square mod P^2 although 8 | a + b")
    md = vd - 12
    return LocalReductionType(P, MULTIPLICATIVE, 1, md, _mod_p(F, md), (v4, v6, vd),
                              witness=check.witness)


# -- conductor and Serre level ------------------------------------------------

@dataclass(frozen=True)
class ConductorShape:
    """N_F = 2^s p_r^t c Rad_2r(a+b); None marks an exponent left open."""

    two_part: int | None
    r_part: int | None
    c_part: tuple[PrimeIdeal, ...]
    rad_part: tuple[PrimeIdeal, ...]
    local: tuple[LocalReductionType, ...] = dc_field(default=())

    def __post_init__(self):
        assert not set(self.c_part) & set(self.rad_part)
        assert len(set(self.c_part)) == len(self.c_part)
        assert len(set(self.rad_part)) == len(self.rad_part)


def conductor_shape(F: FreyCurve) -> ConductorShape:
    ctx = F.context
    K, r, s = F.field, ctx.r, ctx.s
    local = []

    two = [classify_local(F, P) for P in factor_prime(2, K)]
    local.extend(two)
    two_part = 1 if s % 2 == 0 and all(t.kind == MULTIPLICATIVE for t in two) else None

    (pr,) = factor_prime(r, K)
    at_r = classify_local(F, pr)
    local.append(at_r)
    r_part = 1 if at_r.kind == MULTIPLICATIVE else None

    rad = radical_outside(s, 2 * r, K)
    for P in rad:
        t = classify_local(F, P)
        if t.kind != MULTIPLICATIVE:
            raise InvariantViolation(f"{P} divides a + b but is not multiplicative")
        local.append(t)

    c_part = []
    phi = cyclotomic_form(ctx.a, ctx.b, r)
    BC = F.B * F.C
    for q in sorted(factorint(abs(phi))):
        if q in (2, r):
            continue
        for P in factor_prime(q, K):
            if P in rad or valuation(BC, P) == 0:
                continue
            t = classify_local(F, P)
            local.append(t)
            if t.kind == MULTIPLICATIVE:
                c_part.append(P)
    return ConductorShape(two_part, r_part, tuple(c_part), tuple(rad), tuple(local))


@dataclass(frozen=True)
class SerreLevel:
    """Formal level 2^s p_r^t Rad_2r(d0 d1')."""

    two_part: int | None
    r_part: int | None
    d1_prime: int
    primes: tuple[PrimeIdeal, ...]


@dataclass(frozen=True)
class SerreLevelSet:
    candidates: tuple[SerreLevel, ...]

    def __post_init__(self):
        assert self.candidates


def serre_level_set(ctx: SolutionContext, scenario=None) -> SerreLevelSet:
    """All candidate levels as d1' runs over unitary divisors of d1."""
    if ctx.d is None:
        raise RejectedInput("serre_level_set needs d")
    flags = normalize_scenario(scenario)
    if not flags and ctx.a is not None:
        flags = frozenset(
            name for name, mod in (("even-sum", 2), ("r-sum", ctx.r)) if ctx.s % mod == 0)
    two_part = 1 if "even-sum" in flags else None
    r_part = 1 if "r-sum" in flags else None
    K, d0 = ctx.field, ctx.d0
    d1_powers = [q ** e for q, e in sorted(ctx.d_factorization.items()) if q % ctx.r == 1]
    out = []
    for size in range(len(d1_powers) + 1):
        for combo in itertools.combinations(d1_powers, size):
            d1p = math.prod(combo)
            primes = radical_outside(d0 * d1p, 2 * ctx.r, K)
            out.append(SerreLevel(two_part, r_part, d1p, tuple(primes)))
    return SerreLevelSet(tuple(out))


def disc_val_mod_p(F: FreyCurve, P: PrimeIdeal) -> int:
    """Class mod p of the minimal v_P(disc) forced by the solution shape.

    -8 above 2, -2r at p_r, 4 v_P(d0) at P | a+b, and 2(v_P(B) + v_P(C)) at the
    primes dividing c.
    """
    ctx = F.context
    p = ctx.p
    if p is None:
        raise RejectedInput("disc_val_mod_p needs the exponent p")
    local = classify_local(F, P)
    if local.kind != MULTIPLICATIVE:
        raise RejectedInput(f"{P} is not a multiplicative prime of F ({local.kind})")
    if P.q == 2:
        return -8 % p
    if P.q == ctx.r:
        return -2 * ctx.r % p
    if valuation(ctx.s, P) > 0:
        if ctx.d is None:
            raise RejectedInput("disc_val_mod_p at P | a+b needs d")
        return 4 * valuation(ctx.d0, P) % p
    return 2 * (valuation(F.B, P) + valuation(F.C, P)) % p
