"""The p | a+b obstruction for p = +-1 (mod r).

Such p split completely in K.  At each P | p the Frey curve is multiplicative
while E_f is good, which forces a_P(E_f) = +-1 (mod p); with the Weil bound
this leaves a_P odd for p >= 7.  Full 2-torsion makes a_P even.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from typing import Sequence

from sympy import isprime

from ._parallel import ordered_map
from .curves import CurveOverKRecord
from .errors import InvariantViolation, RejectedInput
from .frey import SolutionContext
from .ideals import PrimeIdeal, factor_prime, reduce_mod, splitting_type

__all__ = [
    "FrobeniusTrace",
    "PadicEliminationResult",
    "trace_of_frobenius",
    "parity_check",
    "weil_forcing",
    "eliminate_p_case",
    "ELIMINATED",
    "NOT_FORCED",
    "BAD_REDUCTION",
]

ELIMINATED = "eliminated"
NOT_FORCED = "not-forced"
BAD_REDUCTION = "bad-reduction-skip"


@dataclass(frozen=True)
class FrobeniusTrace:
    P: PrimeIdeal
    a_P: int
    point_count: int

    def __post_init__(self):
        q = self.P.norm
        if self.a_P * self.a_P > 4 * q:
            raise InvariantViolation(f"|a_P| = {abs(self.a_P)} violates the Weil bound at q = {q}")
        assert self.a_P == q + 1 - self.point_count


def _residue_ints(curve: CurveOverKRecord, P: PrimeIdeal) -> list[int]:
    return [reduce_mod(a, P)[0] for a in curve.a_invariants]


def _count_points(a1: int, a2: int, a3: int, a4: int, a6: int, q: int) -> int:
    """Projective points of the reduced Weierstrass cubic over F_q, q prime."""
    if q == 2:
        affine = sum(1 for x in range(2) for y in range(2)
                     if (y * y + a1 * x * y + a3 * y - x ** 3 - a2 * x * x - a4 * x - a6) % 2 == 0)
        return affine + 1
    squares = [0] * q
    for y in range(1, (q + 1) // 2):
        squares[y * y % q] = 1
    # (2y + a1 x + a3)^2 = 4x^3 + b2 x^2 + 2 b4 x + b6
    b2 = (a1 * a1 + 4 * a2) % q
    b4 = (2 * a4 + a1 * a3) % q
    b6 = (a3 * a3 + 4 * a6) % q
    affine = 0
    for x in range(q):
        rhs = (((4 * x + b2) * x + 2 * b4) * x + b6) % q
        affine += 1 if rhs == 0 else 2 * squares[rhs]
    return affine + 1


def trace_of_frobenius(curve: CurveOverKRecord, P: PrimeIdeal) -> FrobeniusTrace:
    if P.r != curve.r:
        raise RejectedInput("prime of a different field")
    if P.f != 1:
        raise RejectedInput(f"{P} has residue degree {P.f}; only degree-1 primes are supported")
    if reduce_mod(curve.disc, P) == (0,):
        raise RejectedInput(f"{curve.label} has bad reduction at {P}")
    count = _count_points(*_residue_ints(curve, P), P.q)
    return FrobeniusTrace(P, P.q + 1 - count, count)


def parity_check(curve: CurveOverKRecord, P: PrimeIdeal) -> bool:
    """a_P is even, as full 2-torsion demands at odd good primes."""
    if not curve.full_two_torsion:
        raise RejectedInput(f"{curve.label} is not flagged full 2-torsion")
    if P.q == 2:
        raise RejectedInput("parity check needs odd residue characteristic")
    return trace_of_frobenius(curve, P).a_P % 2 == 0


def weil_forcing(p: int) -> tuple[int, ...]:
    """All a = +-1 + k p with a^2 <= 4p, sorted."""
    if not isprime(p):
        raise RejectedInput(f"p must be prime, got {p}")
    bound = math.isqrt(4 * p)
    kmax = bound // p + 1
    out = {e + k * p for e in (1, -1) for k in range(-kmax, kmax + 1)}
    return tuple(sorted(a for a in out if a * a <= 4 * p))


@dataclass(frozen=True)
class CurveVerdict:
    label: str
    verdict: str
    traces: tuple[FrobeniusTrace, ...] = ()
    note: str = ""


@dataclass(frozen=True)
class PadicEliminationResult:
    p: int
    split_ok: bool
    threshold_ok: bool
    forced: tuple[int, ...]
    per_curve: tuple[CurveVerdict, ...]
    assumptions: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        if any(v.verdict == ELIMINATED for v in self.per_curve):
            assert self.split_ok and self.threshold_ok

    def verdicts(self) -> dict[str, str]:
        return {v.label: v.verdict for v in self.per_curve}

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "split_ok": self.split_ok,
            "threshold_ok": self.threshold_ok,
            "forced_values": list(self.forced),
            "per_curve": [
                {"label": v.label, "verdict": v.verdict, "note": v.note,
                 "traces": [{"prime": t.P.descriptor, "a_P": t.a_P} for t in v.traces]}
                for v in self.per_curve
            ],
            "assumptions": dict(self.assumptions),
        }


def eliminate_p_case(ctx: SolutionContext, curves: Sequence[CurveOverKRecord], p: int) -> PadicEliminationResult:
    r = ctx.r
    if not isprime(p):
        raise RejectedInput(f"p must be prime, got {p}")
    if p % r not in (1, r - 1):
        raise RejectedInput(f"p ≢ ±1 (mod r): p = {p}, r = {r}")
    bad = 2 * r * (ctx.d or 1)
    if bad % p == 0:
        raise RejectedInput(f"p = {p} divides 2rd = {bad}")
    if p < ctx.p_min:
        raise RejectedInput(f"p = {p} is below the exponent floor p_min = {ctx.p_min}")
    for c in curves:
        if c.r != r:
            raise RejectedInput(f"curve {c.label} is over r = {c.r}, context has r = {r}")
    K = ctx.field
    split_ok = splitting_type(p, K).completely_split
    threshold_ok = p >= 7
    forced = weil_forcing(p)
    primes = factor_prime(p, K)
    forced_odd = all(a % 2 for a in forced)

    def judge(curve: CurveOverKRecord) -> CurveVerdict:
        bad_at = [P for P in primes if reduce_mod(curve.disc, P) == (0,)]
        if bad_at:
            return CurveVerdict(curve.label, BAD_REDUCTION,
                                note="bad reduction at " + ", ".join(P.descriptor for P in bad_at))
        traces = tuple(trace_of_frobenius(curve, P) for P in primes)
        even = all(t.a_P % 2 == 0 for t in traces)
        if split_ok and threshold_ok and forced_odd and even:
            return CurveVerdict(curve.label, ELIMINATED, traces)
        note = "odd trace" if not even else "forcing does not exclude even traces"
        return CurveVerdict(curve.label, NOT_FORCED, traces, note)

    verdicts = ordered_map(judge, sorted(curves, key=lambda c: c.label))
    assumptions = {
        "p_min": ctx.p_min,
        "unsafe_p_min": ctx.unsafe,
        "frobenius_congruence": "a_P = +-1 (mod p) taken as proven",
        "supplied_models_minimal_above_p": True,
    }
    return PadicEliminationResult(p, split_ok, threshold_ok, forced, tuple(verdicts), assumptions)
