"""Randomised property checks, runnable from the command line.

Each check returns a PropertyResult; nothing here raises on a failed property.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Callable

from .cyclotomic import cyclotomic_form, real_cyclotomic_field
from .errors import InvariantViolation
from .ideals import factor_prime, valuation
from .symplectic import compute_ni

__all__ = ["PropertyResult", "PROPERTIES", "run_properties"]

RS = (5, 7, 11, 13)


@dataclass(frozen=True)
class PropertyResult:
    name: str
    passed: bool
    trials: int
    detail: str = ""

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "trials": self.trials, "detail": self.detail}


def _element(rng: random.Random, K, bound: int = 20):
    return K.element([rng.randint(-bound, bound) for _ in range(K.m)])


def ring_axioms(rng: random.Random, trials: int) -> PropertyResult:
    for _ in range(trials):
        K = real_cyclotomic_field(rng.choice(RS))
        x, y, w = (_element(rng, K) for _ in range(3))
        checks = [
            (x * y) * w == x * (y * w),
            x * y == y * x,
            x * (y + w) == x * y + x * w,
            x + K.zero == x and x * K.one == x,
            x - x == K.zero,
        ]
        if not all(checks):
            return PropertyResult("ring_axioms", False, trials, f"failed for {x}, {y}, {w} (r = {K.r})")
    return PropertyResult("ring_axioms", True, trials)


def norm_multiplicative(rng: random.Random, trials: int) -> PropertyResult:
    for _ in range(trials):
        K = real_cyclotomic_field(rng.choice(RS))
        x, y = _element(rng, K), _element(rng, K)
        if (x * y).norm() != x.norm() * y.norm():
            return PropertyResult("norm_multiplicative", False, trials, f"N({x} * {y}) (r = {K.r})")
    return PropertyResult("norm_multiplicative", True, trials)


def valuation_additive(rng: random.Random, trials: int) -> PropertyResult:
    done = 0
    while done < trials:
        K = real_cyclotomic_field(rng.choice((5, 7)))
        x, y = _element(rng, K, 50), _element(rng, K, 50)
        if not x or not y:
            continue
        q = rng.choice((2, 3, 5, 7, 11, 13, 29))
        for P in factor_prime(q, K):
            if valuation(x * y, P) != valuation(x, P) + valuation(y, P):
                return PropertyResult("valuation_additive", False, trials, f"{x}, {y} at {P}")
        done += 1
    return PropertyResult("valuation_additive", True, trials)


def gcd_sum_phi(rng: random.Random, trials: int) -> PropertyResult:
    done = 0
    while done < trials:
        r = rng.choice(RS)
        a, b = rng.randint(-500, 500), rng.randint(-500, 500)
        if math.gcd(a, b) != 1 or a + b == 0:
            continue
        g = math.gcd(a + b, cyclotomic_form(a, b, r))
        if g not in (1, r):
            return PropertyResult("gcd_sum_phi", False, trials, f"gcd = {g} for ({a}, {b}), r = {r}")
        done += 1
    return PropertyResult("gcd_sum_phi", True, trials)


def ni_negativity_guard(rng: random.Random, trials: int) -> PropertyResult:
    """Fixtures modelling an even d must trip the sign guard; odd d must not."""
    for _ in range(trials):
        v = (rng.randint(1, 6), rng.randint(1, 6))
        dv = rng.randint(1, 3)
        try:
            compute_ni("1a", dv, v, d_two_adic=2)
        except InvariantViolation:
            pass
        else:
            return PropertyResult("ni_negativity_guard", False, trials, "even-d fixture accepted")
        try:
            compute_ni("1a", dv, v)
        except InvariantViolation as exc:
            return PropertyResult("ni_negativity_guard", False, trials, f"odd-d fixture rejected: {exc}")
    return PropertyResult("ni_negativity_guard", True, trials)


PROPERTIES: dict[str, Callable[[random.Random, int], PropertyResult]] = {
    "ring_axioms": ring_axioms,
    "norm_multiplicative": norm_multiplicative,
    "valuation_additive": valuation_additive,
    "gcd_sum_phi": gcd_sum_phi,
    "ni_negativity_guard": ni_negativity_guard,
}


def run_properties(seed: int = 0, trials: int = 50, names=None) -> list[PropertyResult]:
    names = list(PROPERTIES) if names is None else list(names)
    out = []
    for name in names:
        # one generator per property keeps results independent of selection
        rng = random.Random(f"{seed}:{name}")
        out.append(PROPERTIES[name](rng, trials))
    return out
