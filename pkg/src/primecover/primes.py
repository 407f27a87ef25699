"""Prime generation and prime-derived arithmetic functions.

Covers the prime sets P_eta = {p prime : p < eta*q} viewed as residues mod q,
the factor-counting functions Omega(n) (with multiplicity) and nu(n)
(distinct), and z-roughness (no prime factor below z).  A single smallest-
prime-factor sieve is shared per run and grown on demand, since Omega/nu
lookups are hot in the z^Omega(n) partial sums.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .modular import isqrt_floor, modulus_value
from .residues import ResidueSet


@dataclass(frozen=True)
class PrimeList:
    """The primes up to `limit`, sorted ascending."""

    limit: int
    primes: np.ndarray

    def __len__(self) -> int:
        return len(self.primes)

    def __iter__(self):
        return iter(int(p) for p in self.primes)


_sieve_lock = threading.Lock()
_prime_cache: PrimeList | None = None


def primes_below(x: int) -> PrimeList:
    """Exactly the primes p <= x (boolean Eratosthenes sieve, cached)."""
    global _prime_cache
    if x < 2:
        raise ValueError("primes_below expects x >= 2")
    with _sieve_lock:
        if _prime_cache is None or _prime_cache.limit < x:
            mask = np.ones(x + 1, dtype=bool)
            mask[:2] = False
            for p in range(2, isqrt_floor(x, 2) + 1):
                if mask[p]:
                    mask[p * p :: p] = False
            _prime_cache = PrimeList(x, np.flatnonzero(mask).astype(np.int64))
        cache = _prime_cache
    if cache.limit == x:
        return cache
    cut = int(np.searchsorted(cache.primes, x, side="right"))
    return PrimeList(x, cache.primes[:cut])


@dataclass(frozen=True)
class Eta:
    """The prime-range parameter eta, kept exact for threshold comparisons.

    Two forms: a literal rational value, or an exact power exponent meaning
    eta = q^exponent.  The membership test "p < eta*q" is then an exact
    integer comparison in both cases, so boundary primes are never
    misclassified when eta*q lands near an integer.
    """

    value: Fraction | None = None
    exponent: Fraction | None = None

    def __post_init__(self) -> None:
        if (self.value is None) == (self.exponent is None):
            raise ValueError("exactly one of value / exponent must be given")
        if self.value is not None and not 0 < self.value <= 1:
            raise ValueError(f"eta value must lie in (0, 1], got {self.value}")
        if self.exponent is not None and not -1 < self.exponent <= 0:
            raise ValueError(f"eta exponent must lie in (-1, 0], got {self.exponent}")

    @classmethod
    def literal(cls, v: float | Fraction | int) -> Eta:
        return cls(value=Fraction(v))

    @classmethod
    def power(cls, a: float | Fraction | str) -> Eta:
        return cls(exponent=Fraction(a))

    @classmethod
    def parse(cls, text: str) -> Eta:
        """Parse "0.75", "3/4" or the exponent form "q^-1/4" / "q^(-1/4)"."""
        s = text.strip()
        if s.startswith(("q^", "Q^")):
            expo = s[2:].strip()
            if expo.startswith("(") and expo.endswith(")"):
                expo = expo[1:-1]
            return cls.power(Fraction(expo))
        return cls.literal(Fraction(s))

    @classmethod
    def coerce(cls, eta: Eta | float | Fraction | int | str) -> Eta:
        if isinstance(eta, Eta):
            return eta
        if isinstance(eta, str):
            return cls.parse(eta)
        return cls.literal(Fraction(eta))

    def value_at(self, q: int) -> float:
        """eta as a float (for reporting; membership tests stay exact)."""
        if self.value is not None:
            return float(self.value)
        return float(q) ** float(self.exponent)

    def limit_at(self, q: int) -> float:
        """eta*q as a float."""
        return self.value_at(q) * q

    def largest_admitted(self, q: int) -> int:
        """The largest integer m with m < eta*q, computed exactly."""
        if self.value is not None:
            t = self.value * q
            m = t.numerator // t.denominator
            return m - 1 if t.denominator == 1 else m
        # eta = q^(a/b): m < q^(1+a/b)  <=>  m^b < q^(b+a)
        a, b = self.exponent.numerator, self.exponent.denominator
        if b + a <= 0:
            return 0
        return isqrt_floor(q ** (b + a) - 1, b)

    def label(self) -> str:
        if self.value is not None:
            return f"{float(self.value):.12g}"
        return f"q^{self.exponent}"


def prime_residues(q: int, eta: Eta | float | Fraction | int | str = 1) -> ResidueSet:
    """Residues mod q of all primes p < eta*q.

    Primes below q need no reduction, so there are no collisions; an empty
    result (eta*q < 3) is valid.
    """
    qv = modulus_value(q)
    e = Eta.coerce(eta)
    top = min(e.largest_admitted(qv), qv - 1)
    if top < 2:
        return ResidueSet.empty(qv)
    bits = 0
    for p in primes_below(top).primes:
        bits |= 1 << int(p)
    return ResidueSet(qv, bits)


class FactorSieve:
    """Smallest-prime-factor table for [2, limit] plus derived Omega/nu."""

    def __init__(self, limit: int):
        if limit < 2:
            raise ValueError("FactorSieve needs limit >= 2")
        self.limit = limit
        spf = np.zeros(limit + 1, dtype=np.int64)
        for p in range(2, isqrt_floor(limit, 2) + 1):
            if spf[p] == 0:
                block = spf[p * p :: p]
                block[block == 0] = p
        rest = np.flatnonzero(spf == 0)[2:]  # untouched entries >= 2 are prime
        spf[rest] = rest
        self.spf = spf
        self._omega: np.ndarray | None = None
        self._nu: np.ndarray | None = None

    def _check_range(self, n: int) -> None:
        if not 1 <= n <= self.limit:
            raise ValueError(f"n={n} outside sieve range [1, {self.limit}]")

    @property
    def omega_values(self) -> np.ndarray:
        """Omega(n) for all n <= limit (Omega(1) = 0)."""
        if self._omega is None:
            self._omega = self._count(distinct=False)
        return self._omega

    @property
    def nu_values(self) -> np.ndarray:
        """nu(n) for all n <= limit (nu(1) = 0)."""
        if self._nu is None:
            self._nu = self._count(distinct=True)
        return self._nu

    def _count(self, distinct: bool) -> np.ndarray:
        # Peel prime factors in vectorized passes; depth is max Omega ~ log2(limit).
        counts = np.zeros(self.limit + 1, dtype=np.int8)
        cur = np.arange(self.limit + 1, dtype=np.int64)
        cur[:2] = 1
        active = np.flatnonzero(cur > 1)
        while active.size:
            vals = cur[active]
            ps = self.spf[vals]
            if distinct:
                nxt = vals // ps
                strip = nxt % ps == 0
                while np.any(strip):
                    nxt[strip] //= ps[strip]
                    strip = nxt % ps == 0
                counts[active] += 1
                cur[active] = nxt
            else:
                counts[active] += 1
                cur[active] = vals // ps
            active = active[cur[active] > 1]
        return counts

    def big_omega(self, n: int) -> int:
        self._check_range(n)
        return int(self.omega_values[n])

    def nu(self, n: int) -> int:
        self._check_range(n)
        return int(self.nu_values[n])

    def is_squarefree(self, n: int) -> bool:
        self._check_range(n)
        return bool(self.omega_values[n] == self.nu_values[n])

    def rough_mask(self, z: float) -> np.ndarray:
        """Boolean mask over [0, limit]: True where n has no prime factor < z.

        n = 1 is rough (empty factorization); index 0 is False.
        """
        if z < 2:
            raise ValueError("roughness threshold z must be >= 2")
        mask = self.spf >= z
        mask[0] = False
        mask[1] = True
        return mask

    def is_rough(self, n: int, z: float) -> bool:
        self._check_range(n)
        if n == 1:
            return True
        return bool(self.spf[n] >= z)


_factor_lock = threading.Lock()
_factor_cache: FactorSieve | None = None


def factor_sieve(limit: int) -> FactorSieve:
    """Shared FactorSieve, grown to the largest limit requested so far."""
    global _factor_cache
    with _factor_lock:
        if _factor_cache is None or _factor_cache.limit < limit:
            _factor_cache = FactorSieve(limit)
        return _factor_cache


def big_omega(n: int, limit: int | None = None) -> int:
    """Omega(n): prime factors counted with multiplicity."""
    if n < 1:
        raise ValueError("big_omega expects n >= 1")
    return factor_sieve(max(limit or 0, n, 2)).big_omega(n)


def nu(n: int, limit: int | None = None) -> int:
    """nu(n): distinct prime factors."""
    if n < 1:
        raise ValueError("nu expects n >= 1")
    return factor_sieve(max(limit or 0, n, 2)).nu(n)


def rough_indicator(x: int, z: float) -> np.ndarray:
    """Mask over [0, x]: True at n whose least prime factor is >= z."""
    sieve = factor_sieve(max(x, 2))
    return sieve.rough_mask(z)[: x + 1]
