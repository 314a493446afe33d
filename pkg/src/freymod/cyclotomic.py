"""Exact arithmetic in O_K = Z[z] for K = Q(zeta_r)^+, z = zeta_r + zeta_r^-1.

Elements are integer coordinate vectors in the power basis 1, z, ..., z^(m-1)
with m = (r - 1)/2.  Everything is exact; there is no floating point here.
"""

from __future__ import annotations

import functools
import math
from typing import Iterable, Mapping, Sequence

from sympy import isprime

from .errors import RejectedInput

__all__ = [
    "RealCyclotomicField",
    "RingElement",
    "real_cyclotomic_field",
    "min_poly",
    "half_trace",
    "mul",
    "norm",
    "frey_constants",
    "galois_conjugate",
    "bareiss_det",
    "cyclotomic_form",
    "quadratic_factor",
]


# -- integer polynomials, coefficient lists low degree first -----------------

def _trim(p: list[int]) -> list[int]:
    while p and p[-1] == 0:
        p.pop()
    return p


def _padd(p: Sequence[int], q: Sequence[int]) -> list[int]:
    n = max(len(p), len(q))
    return _trim([(p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)])


def _pscale(p: Sequence[int], c: int) -> list[int]:
    return _trim([c * x for x in p])


def _pmul(p: Sequence[int], q: Sequence[int]) -> list[int]:
    if not p or not q:
        return []
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return _trim(out)


def _chebyshev_folds(m: int) -> list[list[int]]:
    """T_0..T_m in w with x^k + x^-k = T_k(x + 1/x)."""
    t = [[2], [0, 1]]
    for _ in range(2, m + 1):
        t.append(_padd(_pmul([0, 1], t[-1]), _pscale(t[-2], -1)))
    return t[: m + 1]


def min_poly(r: int) -> tuple[int, ...]:
    """Minimal polynomial of 2cos(2 pi / r), low-degree coefficients first.

    Phi_r(x) / x^m = 1 + sum_{k=1..m} (x^k + x^-k) folds to 1 + sum T_k(w).
    """
    if not isinstance(r, int) or r < 5 or not isprime(r):
        raise RejectedInput(f"r must be a prime >= 5, got {r!r}")
    m = (r - 1) // 2
    folds = _chebyshev_folds(m)
    psi = [1]
    for k in range(1, m + 1):
        psi = _padd(psi, folds[k])
    psi = tuple(psi)
    assert len(psi) == m + 1 and psi[-1] == 1
    return psi


def bareiss_det(matrix: Sequence[Sequence[int]]) -> int:
    """Fraction-free determinant of a square integer matrix."""
    a = [list(row) for row in matrix]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


class RealCyclotomicField:
    """The field Q(zeta_r)^+ together with its monogenic order Z[z]."""

    def __init__(self, r: int):
        self.psi = min_poly(r)
        self.r = r
        self.m = (r - 1) // 2

    def __repr__(self):
        return f"RealCyclotomicField(r={self.r})"

    def __eq__(self, other):
        return isinstance(other, RealCyclotomicField) and other.r == self.r

    def __hash__(self):
        return hash(("RealCyclotomicField", self.r))

    def __reduce__(self):
        return (real_cyclotomic_field, (self.r,))

    # construction helpers
    def reduce(self, poly: Sequence[int]) -> tuple[int, ...]:
        """Reduce an integer polynomial in z modulo psi to m coordinates."""
        p = list(poly)
        m, psi = self.m, self.psi
        for deg in range(len(p) - 1, m - 1, -1):
            c = p[deg]
            if c:
                base = deg - m
                for i in range(m):
                    p[base + i] -= c * psi[i]
                p[deg] = 0
        p = p[:m]
        return tuple(p) + (0,) * (m - len(p))

    def element(self, coeffs: Iterable[int]) -> "RingElement":
        coeffs = [int(c) for c in coeffs]
        return RingElement(self, self.reduce(coeffs))

    def constant(self, n: int) -> "RingElement":
        return RingElement(self, (int(n),) + (0,) * (self.m - 1))

    @property
    def zero(self) -> "RingElement":
        return self.constant(0)

    @property
    def one(self) -> "RingElement":
        return self.constant(1)

    @property
    def z(self) -> "RingElement":
        return self.element([0, 1])

    def coerce(self, x) -> "RingElement":
        if isinstance(x, RingElement):
            if x.field != self:
                raise RejectedInput(f"element of {x.field} used in {self}")
            return x
        if isinstance(x, int):
            return self.constant(x)
        raise TypeError(f"cannot coerce {type(x).__name__} into {self}")

    def half_trace(self, k: int) -> "RingElement":
        return _half_trace_cached(self.r, k % self.r)

    def from_zeta_powers(self, terms: Mapping[int, int]) -> "RingElement":
        """Element sum c_k zeta^k; the exponent vector must be symmetric mod r."""
        folded: dict[int, int] = {}
        for k, c in terms.items():
            folded[k % self.r] = folded.get(k % self.r, 0) + c
        for k in range(1, self.r):
            if folded.get(k, 0) != folded.get(self.r - k, 0):
                raise RejectedInput("zeta expression is not fixed by complex conjugation")
        out = self.constant(folded.get(0, 0))
        for k in range(1, self.m + 1):
            c = folded.get(k, 0)
            if c:
                out = out + c * self.half_trace(k)
        return out

    def frey_constants(self) -> tuple["RingElement", "RingElement", "RingElement"]:
        return frey_constants(self)


@functools.lru_cache(maxsize=None)
def real_cyclotomic_field(r: int) -> RealCyclotomicField:
    """Shared, cached field instance for r."""
    return RealCyclotomicField(r)


@functools.lru_cache(maxsize=None)
def _half_trace_cached(r: int, k: int) -> "RingElement":
    K = real_cyclotomic_field(r)
    if k > K.m:
        k = r - k
    prev, cur = K.constant(2), K.z
    if k == 0:
        return prev
    for _ in range(k - 1):
        prev, cur = cur, K.z * cur - prev
    return cur


class RingElement:
    """Immutable element of Z[z] with exact integer coordinates."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: RealCyclotomicField, coeffs: tuple[int, ...]):
        if len(coeffs) != field.m:
            raise RejectedInput(f"expected {field.m} coordinates, got {len(coeffs)}")
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "coeffs", tuple(coeffs))

    def __setattr__(self, name, value):
        raise AttributeError("RingElement is immutable")

    def __reduce__(self):
        return (RingElement, (self.field, self.coeffs))

    def __repr__(self):
        return f"RingElement(r={self.field.r}, {self})"

    def __str__(self):
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if i == 0 else ("z" if i == 1 else f"z^{i}")
            if i == 0:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}{mono}")
        if not parts:
            return "0"
        return " + ".join(parts).replace("+ -", "- ")

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.field.constant(other)
        if not isinstance(other, RingElement):
            return NotImplemented
        return self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.field.r, self.coeffs))

    def __bool__(self):
        return any(self.coeffs)

    def _other(self, other) -> "RingElement":
        return self.field.coerce(other)

    def __add__(self, other):
        other = self._other(other)
        return RingElement(self.field, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return RingElement(self.field, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        return self + (-self._other(other))

    def __rsub__(self, other):
        return self._other(other) - self

    def __mul__(self, other):
        if isinstance(other, int):
            return RingElement(self.field, tuple(other * a for a in self.coeffs))
        other = self._other(other)
        return RingElement(self.field, self.field.reduce(_pmul(self.coeffs, other.coeffs)))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise RejectedInput("negative powers are not defined in O_K")
        result, base = self.field.one, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    @property
    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def multiplication_matrix(self) -> list[list[int]]:
        """Rows are the coordinates of x * z^j, j = 0..m-1."""
        rows = []
        cur = self
        for _ in range(self.field.m):
            rows.append(list(cur.coeffs))
            cur = cur * self.field.z
        return rows

    def norm(self) -> int:
        return norm(self)

    def substitute(self, value: "RingElement") -> "RingElement":
        """Evaluate the coordinate polynomial of self at value (Horner)."""
        out = value.field.zero
        for c in reversed(self.coeffs):
            out = out * value + c
        return out


def half_trace(k: int, field: RealCyclotomicField) -> RingElement:
    """t_k = zeta^k + zeta^-k in the z-basis."""
    return field.half_trace(k)


def mul(x: RingElement, y: RingElement) -> RingElement:
    if x.field != y.field:
        raise RejectedInput(f"field mismatch: r={x.field.r} vs r={y.field.r}")
    return x * y


def norm(x: RingElement) -> int:
    """N_{K/Q}(x) = Res(psi, x(z)), the determinant of multiplication by x."""
    return bareiss_det(x.multiplication_matrix())


def frey_constants(field: RealCyclotomicField) -> tuple[RingElement, RingElement, RingElement]:
    """(alpha, beta, gamma) with alpha + beta = gamma.

    alpha = zeta (1 - zeta)(1 - zeta^-3), beta = (1 - zeta)(1 - zeta^-1),
    gamma = (1 - zeta^2)(1 - zeta^-2).
    """
    return _frey_constants_cached(field.r)


def _zeta_product(*factors: Mapping[int, int]) -> dict[int, int]:
    out = {0: 1}
    for f in factors:
        nxt: dict[int, int] = {}
        for i, a in out.items():
            for j, b in f.items():
                nxt[i + j] = nxt.get(i + j, 0) + a * b
        out = nxt
    return out


@functools.lru_cache(maxsize=None)
def _frey_constants_cached(r: int):
    K = real_cyclotomic_field(r)
    alpha = K.from_zeta_powers(_zeta_product({1: 1}, {0: 1, 1: -1}, {0: 1, -3: -1}))
    beta = K.from_zeta_powers(_zeta_product({0: 1, 1: -1}, {0: 1, -1: -1}))
    gamma = K.from_zeta_powers(_zeta_product({0: 1, 2: -1}, {0: 1, -2: -1}))
    assert alpha + beta == gamma
    return alpha, beta, gamma


def galois_conjugate(x: RingElement, j: int) -> RingElement:
    """Image of x under z -> zeta^j + zeta^-j."""
    r = x.field.r
    if math.gcd(j, r) != 1:
        raise RejectedInput(f"gcd({j}, {r}) != 1 does not define an automorphism")
    return x.substitute(x.field.half_trace(j))


def cyclotomic_form(a: int, b: int, r: int) -> int:
    """Homogeneous Phi_r(a, b) = sum_{i<r} a^(r-1-i) (-b)^i."""
    return sum(a ** (r - 1 - i) * (-b) ** i for i in range(r))


def quadratic_factor(j: int, a: int, b: int, field: RealCyclotomicField) -> RingElement:
    """a^2 + t_j a b + b^2.  The Frey curve uses f_1 = j=2 and f_2 = j=1."""
    return a * a + field.half_trace(j) * (a * b) + b * b
