"""Elliptic curves over O_K given by integral Weierstrass models.

Also owns the curve-list file format shared by the elimination engines:

    {"r": 5,
     "curves": [
        {"label": "...",
         "r": 5,
         "a_invariants": [[a1 coords], [a2 coords], [a3], [a4], [a6]],
         "two_torsion_roots": [[e1], [e2], [e3]],          (optional)
         "minimal_valuations": {"(2, [1, 1, 1])": 2, ...},  (optional)
         "full_two_torsion": true}]}

Coordinates are in the basis 1, z, ..., z^(m-1); a bare integer is accepted
for a rational coefficient.  Prime descriptors are "(q, [g0, ..., 1])" with
the monic second generator g listed low degree first.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field as dc_field
from pathlib import Path
from typing import Any, Sequence

from .cyclotomic import RealCyclotomicField, RingElement, real_cyclotomic_field
from .errors import RejectedInput
from .ideals import PrimeIdeal, find_prime, parse_descriptor, valuation

__all__ = [
    "WeierstrassInvariants",
    "weierstrass_invariants",
    "CurveOverKRecord",
    "MinimalValuation",
    "load_curves",
    "dump_curves",
    "curves_to_document",
    "curves_from_document",
    "load_sample_curves",
    "sample_curves_path",
]


@dataclass(frozen=True)
class WeierstrassInvariants:
    b2: RingElement
    b4: RingElement
    b6: RingElement
    b8: RingElement
    c4: RingElement
    c6: RingElement
    disc: RingElement


def weierstrass_invariants(a1, a2, a3, a4, a6) -> WeierstrassInvariants:
    b2 = a1 * a1 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3 * a3 + 4 * a6
    b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    c4 = b2 * b2 - 24 * b4
    c6 = -(b2 * b2 * b2) + 36 * b2 * b4 - 216 * b6
    disc = -(b2 * b2 * b8) - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6
    return WeierstrassInvariants(b2, b4, b6, b8, c4, c6, disc)


@dataclass(frozen=True)
class MinimalValuation:
    """A minimal discriminant valuation together with how it was obtained."""

    value: int | None
    status: str  # verified / trusted / mismatch / unknown
    note: str = ""


def _as_element(K: RealCyclotomicField, raw) -> RingElement:
    if isinstance(raw, RingElement):
        return K.coerce(raw)
    if isinstance(raw, int):
        return K.constant(raw)
    coeffs = list(raw)
    if len(coeffs) > K.m:
        raise RejectedInput(f"coordinate vector {coeffs} longer than m = {K.m}")
    return K.element(coeffs)


@dataclass(frozen=True)
class CurveOverKRecord:
    """Isogeny-class representative over K, supplied as input data."""

    label: str
    field: RealCyclotomicField
    a_invariants: tuple[RingElement, ...]
    disc: RingElement
    minimal_valuations: dict[str, int] = dc_field(default_factory=dict)
    full_two_torsion: bool = False
    two_torsion_roots: tuple[RingElement, ...] | None = None

    def __post_init__(self):
        if len(self.a_invariants) != 5:
            raise RejectedInput(f"{self.label}: need five a-invariants")
        if not self.disc:
            raise RejectedInput(f"{self.label}: singular model (disc = 0)")
        if self.invariants.disc != self.disc:
            raise RejectedInput(f"{self.label}: supplied disc does not match the a-invariants")
        if self.full_two_torsion:
            self._check_two_torsion()
        for key in self.minimal_valuations:
            find_prime(self.field, *parse_descriptor(key))

    @classmethod
    def build(cls, label: str, field: RealCyclotomicField, a_invariants: Sequence,
              minimal_valuations: dict[str, int] | None = None,
              full_two_torsion: bool = False, two_torsion_roots=None,
              disc=None) -> "CurveOverKRecord":
        ainv = tuple(_as_element(field, a) for a in a_invariants)
        computed = weierstrass_invariants(*ainv).disc
        roots = None
        if two_torsion_roots is not None:
            roots = tuple(_as_element(field, e) for e in two_torsion_roots)
        return cls(label=label, field=field, a_invariants=ainv,
                   disc=computed if disc is None else _as_element(field, disc),
                   minimal_valuations=dict(minimal_valuations or {}),
                   full_two_torsion=full_two_torsion, two_torsion_roots=roots)

    @classmethod
    def from_roots(cls, label: str, field: RealCyclotomicField, roots: Sequence,
                   minimal_valuations: dict[str, int] | None = None) -> "CurveOverKRecord":
        """y^2 = (x - e1)(x - e2)(x - e3)."""
        e1, e2, e3 = (_as_element(field, e) for e in roots)
        a2 = -(e1 + e2 + e3)
        a4 = e1 * e2 + e1 * e3 + e2 * e3
        a6 = -(e1 * e2 * e3)
        return cls.build(label, field, [0, a2, 0, a4, a6], minimal_valuations,
                         full_two_torsion=True, two_torsion_roots=[e1, e2, e3])

    @property
    def r(self) -> int:
        return self.field.r

    @property
    def invariants(self) -> WeierstrassInvariants:
        return weierstrass_invariants(*self.a_invariants)

    def _check_two_torsion(self):
        a1, a2, a3, a4, a6 = self.a_invariants
        if a1 or a3:
            raise RejectedInput(f"{self.label}: full 2-torsion model must have a1 = a3 = 0")
        if self.two_torsion_roots is not None:
            e1, e2, e3 = self.two_torsion_roots
            ok = (-(e1 + e2 + e3) == a2 and e1 * e2 + e1 * e3 + e2 * e3 == a4
                  and -(e1 * e2 * e3) == a6)
            if not ok:
                raise RejectedInput(f"{self.label}: supplied 2-torsion roots do not split the cubic")
            return
        if not all(c.is_rational for c in (a2, a4, a6)):
            raise RejectedInput(f"{self.label}: two_torsion_roots required for non-rational models")
        if not _rational_cubic_splits(a2.coeffs[0], a4.coeffs[0], a6.coeffs[0]):
            raise RejectedInput(f"{self.label}: cubic does not split over Z")

    def minimal_valuation(self, P: PrimeIdeal) -> MinimalValuation:
        """Minimal discriminant valuation at P, verified where the model allows."""
        inv = self.invariants
        vd = valuation(inv.disc, P)
        v4 = valuation(inv.c4, P) if inv.c4 else None
        claim = self.minimal_valuations.get(P.descriptor)
        minimal = vd < 12 or (v4 is not None and v4 < 4)
        if minimal:
            if claim is not None and claim != vd:
                return MinimalValuation(None, "mismatch",
                                        f"claimed {claim} but minimal model has {vd}")
            return MinimalValuation(vd, "verified")
        if claim is not None:
            return MinimalValuation(claim, "trusted", "model not certifiably minimal")
        return MinimalValuation(None, "unknown", "model not certifiably minimal, no claim")

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "label": self.label,
            "r": self.r,
            "a_invariants": [list(a.coeffs) for a in self.a_invariants],
            "full_two_torsion": self.full_two_torsion,
        }
        if self.two_torsion_roots is not None:
            out["two_torsion_roots"] = [list(e.coeffs) for e in self.two_torsion_roots]
        if self.minimal_valuations:
            out["minimal_valuations"] = dict(sorted(self.minimal_valuations.items()))
        return out

    @classmethod
    def from_dict(cls, data: dict[str, Any], r: int | None = None) -> "CurveOverKRecord":
        try:
            rr = int(data.get("r", r))
            field = real_cyclotomic_field(rr)
            return cls.build(
                label=str(data["label"]),
                field=field,
                a_invariants=data["a_invariants"],
                minimal_valuations={str(k): int(v) for k, v in data.get("minimal_valuations", {}).items()},
                full_two_torsion=bool(data.get("full_two_torsion", False)),
                two_torsion_roots=data.get("two_torsion_roots"),
                disc=data.get("disc"),
            )
        except (KeyError, TypeError) as exc:
            raise RejectedInput(f"malformed curve record: {exc}") from exc


def _rational_cubic_splits(a2: int, a4: int, a6: int) -> bool:
    """Root search for x^3 + a2 x^2 + a4 x + a6 among divisors of a6."""
    def cubic(x):
        return x ** 3 + a2 * x ** 2 + a4 * x + a6

    if a6 == 0:
        root = 0
    else:
        n = abs(a6)
        candidates = [d for i in range(1, math.isqrt(n) + 1) if n % i == 0 for d in (i, n // i)]
        root = next((s * d for d in sorted(set(candidates)) for s in (1, -1) if cubic(s * d) == 0), None)
        if root is None:
            return False
    # x^2 + (a2 + root) x + (a4 + root (a2 + root))
    b, c = a2 + root, a4 + root * (a2 + root)
    disc = b * b - 4 * c
    if disc < 0:
        return False
    s = math.isqrt(disc)
    return s * s == disc


def curves_to_document(curves: Sequence[CurveOverKRecord]) -> dict[str, Any]:
    rs = {c.r for c in curves}
    doc: dict[str, Any] = {"curves": [c.to_dict() for c in curves]}
    if len(rs) == 1:
        doc["r"] = rs.pop()
    return doc


def curves_from_document(doc: dict[str, Any]) -> list[CurveOverKRecord]:
    if isinstance(doc, list):
        records = doc
        default_r = None
    else:
        records = doc.get("curves")
        default_r = doc.get("r")
    if not isinstance(records, list):
        raise RejectedInput("curve file must hold a list of curve records")
    curves = [CurveOverKRecord.from_dict(rec, default_r) for rec in records]
    labels = [c.label for c in curves]
    if len(set(labels)) != len(labels):
        raise RejectedInput("curve labels must be unique")
    return curves


def load_curves(path: str | Path) -> list[CurveOverKRecord]:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise RejectedInput(f"{path}: not valid JSON ({exc})") from exc
    except OSError as exc:
        raise RejectedInput(f"{path}: {exc.strerror}") from exc
    return curves_from_document(doc)


def dump_curves(curves: Sequence[CurveOverKRecord], path: str | Path) -> None:
    Path(path).write_text(json.dumps(curves_to_document(curves), indent=2, sort_keys=True) + "\n")


def sample_curves_path() -> Path:
    return Path(__file__).with_name("data") / "sample_r5.json"


def load_sample_curves() -> list[CurveOverKRecord]:
    """The shipped r = 5 dataset of full 2-torsion curves."""
    return load_curves(sample_curves_path())
