"""Prime ideals of O_K, ideal lattices in Hermite normal form, valuations.

O_K = Z[z] is monogenic, so Dedekind's criterion factors every rational
prime q from the factorization of psi mod q.  Ideal powers P^k are kept as
m x m upper-triangular HNF bases; valuations come from membership tests.
"""

from __future__ import annotations

import functools
import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from sympy import factorint, isprime
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_factor

from .cyclotomic import RealCyclotomicField, RingElement, real_cyclotomic_field
from .errors import RejectedInput, UndefinedValuation

__all__ = [
    "PrimeIdeal",
    "IdealLattice",
    "SplittingType",
    "hermite_normal_form",
    "factor_prime",
    "ideal_lattice",
    "valuation",
    "reduce_mod",
    "residue_representatives",
    "radical_outside",
    "splitting_type",
    "primes_above",
    "parse_descriptor",
]


@dataclass(frozen=True, order=True)
class PrimeIdeal:
    """The prime (q, g(z)) of K; g is monic, irreducible mod q, low degree first."""

    r: int
    q: int
    g: tuple[int, ...]
    e: int
    f: int

    @property
    def field(self) -> RealCyclotomicField:
        return real_cyclotomic_field(self.r)

    @property
    def norm(self) -> int:
        return self.q ** self.f

    @property
    def is_ramified(self) -> bool:
        return self.e > 1

    @property
    def descriptor(self) -> str:
        return f"({self.q}, [{', '.join(str(c) for c in self.g)}])"

    def generator(self) -> RingElement:
        """g(z) as an element of O_K."""
        return self.field.element(self.g)

    def __str__(self):
        return self.descriptor


_DESCRIPTOR = re.compile(r"^\s*\(\s*(\d+)\s*,\s*\[([^\]]*)\]\s*\)\s*$")


def parse_descriptor(text: str) -> tuple[int, tuple[int, ...]]:
    """Parse "(q, [g0, g1, ..., 1])" into (q, g)."""
    match = _DESCRIPTOR.match(text)
    if not match:
        raise RejectedInput(f"malformed prime descriptor {text!r}")
    q = int(match.group(1))
    body = match.group(2).strip()
    g = tuple(int(c) for c in body.split(",")) if body else ()
    return q, g


# -- Hermite normal form -------------------------------------------------------

def hermite_normal_form(rows: Iterable[Sequence[int]], ncols: int,
                        modulus: int | None = None) -> tuple[tuple[int, ...], ...]:
    """Row HNF of a full-rank integer lattice.

    Returns an upper-triangular basis with positive pivots and entries above
    each pivot reduced into [0, pivot).  When modulus*Z^n is known to lie in
    the lattice, pass it: the multiples modulus*e_j are appended and entries
    are kept reduced, which bounds coefficient growth.
    """
    work = [list(r) for r in rows]
    if modulus is not None:
        for j in range(ncols):
            work.append([modulus if i == j else 0 for i in range(ncols)])
    work = [r for r in work if any(r)]
    basis: list[list[int]] = []
    for col in range(ncols):
        active = [r for r in work if r[col] != 0]
        rest = [r for r in work if r[col] == 0]
        if not active:
            raise RejectedInput("lattice is not of full rank")
        while len(active) > 1:
            active.sort(key=lambda r: abs(r[col]))
            pivot = active[0]
            survivors = [pivot]
            for row in active[1:]:
                t = row[col] // pivot[col]
                row = [x - t * y for x, y in zip(row, pivot)]
                (survivors if row[col] else rest).append(row)
            active = survivors
        pivot = active[0]
        if pivot[col] < 0:
            pivot = [-x for x in pivot]
        if modulus is not None:
            # modulus*e_j for j > col are still among `rest`
            for row in rest:
                for j in range(col + 1, ncols):
                    row[j] %= modulus
            rest.extend([modulus if i == j else 0 for i in range(ncols)]
                        for j in range(col + 1, ncols))
        basis.append(pivot)
        work = [r for r in rest if any(r)]
    for i in range(ncols):
        for k in range(i):
            t = basis[k][i] // basis[i][i]
            if t:
                basis[k] = [x - t * y for x, y in zip(basis[k], basis[i])]
    return tuple(tuple(r) for r in basis)


def _hnf_contains(basis: Sequence[Sequence[int]], vec: Sequence[int]) -> bool:
    v = list(vec)
    for i, row in enumerate(basis):
        if v[i] % row[i]:
            return False
        t = v[i] // row[i]
        if t:
            v = [a - t * b for a, b in zip(v, row)]
    return not any(v)


@dataclass(frozen=True)
class IdealLattice:
    """P^k as a sublattice of O_K = Z^m, HNF basis rows."""

    P: PrimeIdeal
    k: int
    basis: tuple[tuple[int, ...], ...]

    @property
    def index(self) -> int:
        d = 1
        for i, row in enumerate(self.basis):
            d *= row[i]
        return d

    def __contains__(self, x: RingElement) -> bool:
        return _hnf_contains(self.basis, x.coeffs)

    def elements(self) -> list[RingElement]:
        K = self.P.field
        return [RingElement(K, tuple(row)) for row in self.basis]


@functools.lru_cache(maxsize=4096)
def ideal_lattice(P: PrimeIdeal, k: int) -> IdealLattice:
    """HNF lattice of P^k; P^2j = P^j P^j and P^(j+1) = P^j P."""
    K = P.field
    m = K.m
    if k < 0:
        raise RejectedInput("negative ideal power")
    if k == 0:
        ident = tuple(tuple(1 if i == j else 0 for j in range(m)) for i in range(m))
        return IdealLattice(P, 0, ident)
    if k == 1:
        gens = [K.constant(P.q), P.generator()]
        rows = []
        for g in gens:
            cur = g
            for _ in range(m):
                rows.append(cur.coeffs)
                cur = cur * K.z
        basis = hermite_normal_form(rows, m, modulus=P.norm)
    else:
        left = ideal_lattice(P, k // 2)
        right = ideal_lattice(P, k - k // 2)
        lb = left.elements()
        rb = right.elements() if right.k != 1 else [K.constant(P.q), P.generator()]
        rows = [(a * b).coeffs for a in lb for b in rb]
        basis = hermite_normal_form(rows, m, modulus=P.norm ** k)
    lattice = IdealLattice(P, k, basis)
    assert lattice.index == P.norm ** k
    return lattice


# -- factorization of rational primes -----------------------------------------

def factor_prime(q: int, field: RealCyclotomicField) -> list[PrimeIdeal]:
    """Dedekind factorization of q O_K from psi mod q."""
    if not isinstance(q, int) or not isprime(q):
        raise RejectedInput(f"q must be prime, got {q!r}")
    return list(_factor_prime_cached(q, field.r))


@functools.lru_cache(maxsize=None)
def _factor_prime_cached(q: int, r: int) -> tuple[PrimeIdeal, ...]:
    K = real_cyclotomic_field(r)
    high_first = [ZZ(c % q) for c in reversed(K.psi)]
    _, factors = gf_factor(high_first, q, ZZ)
    out = []
    for poly, e in factors:
        g = tuple(int(c) for c in reversed(poly))
        out.append(PrimeIdeal(r=r, q=q, g=g, e=int(e), f=len(g) - 1))
    out.sort()
    assert sum(P.e * P.f for P in out) == K.m
    return tuple(out)


def primes_above(q: int, field: RealCyclotomicField) -> list[PrimeIdeal]:
    return factor_prime(q, field)


def find_prime(field: RealCyclotomicField, q: int, g: Sequence[int]) -> PrimeIdeal:
    """The prime above q whose second generator is g."""
    g = tuple(int(c) % q for c in g)
    for P in factor_prime(q, field):
        if P.g == g:
            return P
    raise RejectedInput(f"({q}, {list(g)}) is not a prime of Q(zeta_{field.r})^+")


@dataclass(frozen=True)
class SplittingType:
    q: int
    e: int
    f: int
    g_count: int
    completely_split: bool
    kind: str  # split / inert / ramified / mixed


def splitting_type(q: int, field: RealCyclotomicField) -> SplittingType:
    primes = factor_prime(q, field)
    es = {P.e for P in primes}
    fs = {P.f for P in primes}
    complete = es == {1} and fs == {1}
    if complete:
        kind = "split"
    elif len(primes) == 1 and primes[0].f == field.m:
        kind = "inert"
    elif len(primes) == 1 and primes[0].e == field.m:
        kind = "ramified"
    else:
        kind = "mixed"
    # K/Q is Galois: e and f are constant across the factorization
    return SplittingType(q=q, e=max(es), f=max(fs), g_count=len(primes),
                         completely_split=complete, kind=kind)


# -- valuations and residues --------------------------------------------------

def _q_adic(n: int, q: int) -> int:
    n = abs(n)
    v = 0
    while n and n % q == 0:
        n //= q
        v += 1
    return v


def valuation(x: RingElement | int, P: PrimeIdeal) -> int:
    """Largest k with x in P^k, by doubling then bisecting over HNF membership."""
    x = P.field.coerce(x)
    if not x:
        raise UndefinedValuation("valuation of 0 is undefined")
    bound = _q_adic(x.norm(), P.q) // P.f
    if bound == 0:
        return 0
    lo, k = 0, 1
    while k <= bound and x in ideal_lattice(P, k):
        lo = k
        k *= 2
    hi = min(k, bound + 1)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if x in ideal_lattice(P, mid):
            lo = mid
        else:
            hi = mid
    return lo


def _poly_mod(poly: list[int], g: Sequence[int], q: int) -> list[int]:
    p = [c % q for c in poly]
    dg = len(g) - 1
    for deg in range(len(p) - 1, dg - 1, -1):
        c = p[deg]
        if c:
            base = deg - dg
            for i in range(dg):
                p[base + i] = (p[base + i] - c * g[i]) % q
            p[deg] = 0
    p = p[:dg]
    return p + [0] * (dg - len(p))


def reduce_mod(x: RingElement | int, P: PrimeIdeal) -> tuple[int, ...]:
    """Image of x in O_K/P = F_q[x]/(g), as f coordinates mod q."""
    x = P.field.coerce(x)
    return tuple(_poly_mod(list(x.coeffs), P.g, P.q))


def residue_representatives(P: PrimeIdeal, k: int) -> list[RingElement]:
    """A complete residue system of O_K / P^k (box spanned by the HNF pivots)."""
    lattice = ideal_lattice(P, k)
    K = P.field
    pivots = [lattice.basis[i][i] for i in range(K.m)]
    reps = [()]
    for d in pivots:
        reps = [t + (c,) for t in reps for c in range(d)]
    return [RingElement(K, t) for t in reps]


def radical_outside(x: RingElement | int, n: int, field: RealCyclotomicField) -> list[PrimeIdeal]:
    """Primes P of K with v_P(x) > 0 and P not dividing n."""
    x = field.coerce(x)
    if not x:
        raise RejectedInput("radical of 0 is undefined")
    out = []
    for q in sorted(factorint(abs(x.norm()))):
        if n % q == 0:
            continue
        out.extend(P for P in factor_prime(q, field) if valuation(x, P) > 0)
    return out
