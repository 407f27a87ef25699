"""Exact arithmetic in (Z/qZ)^x for prime q.

Primality is a deterministic Miller-Rabin test (fixed witness set, valid for
all 64-bit inputs), so nothing downstream is probabilistic.  Discrete logs
are built by one pass of repeated multiplication by the least primitive
root: O(q) time and memory, which is fine at desk scale (q up to ~10^6 for
character work).  Characters are evaluated lazily from the discrete-log
table and a precomputed table of (q-1)-th roots of unity.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from .residues import ResidueSet

# Deterministic Miller-Rabin witnesses for every n < 3.3 * 10^24 (covers 64-bit).
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic primality test for 64-bit integers."""
    if n < 2:
        return False
    for p in _MR_WITNESSES:
        if n % p == 0:
            return n == p
    d = n - 1
    s = (d & -d).bit_length() - 1
    d >>= s
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class Modulus:
    """An odd prime modulus q >= 3."""

    q: int

    def __post_init__(self) -> None:
        if self.q < 3 or self.q % 2 == 0 or not is_prime(self.q):
            raise ValueError(f"modulus must be an odd prime >= 3, got {self.q}")


def modulus_value(q: int | Modulus) -> int:
    """Validate and unwrap a modulus given as an int or a Modulus."""
    if isinstance(q, Modulus):
        return q.q
    return Modulus(int(q)).q


def mod_inverse(a: int, q: int | Modulus) -> int:
    """Multiplicative inverse of a mod q; rejects a = 0 (mod q)."""
    qv = modulus_value(q)
    if a % qv == 0:
        raise ValueError(f"{a} is 0 mod {qv}, not invertible")
    return pow(a, -1, qv)


def factorize(n: int) -> dict[int, int]:
    """Prime factorization by trial division (desk scale: n up to ~10^12)."""
    if n < 1:
        raise ValueError("factorize expects n >= 1")
    out: dict[int, int] = {}
    for p in (2, 3):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    f = 5
    while f * f <= n:
        for p in (f, f + 2):
            while n % p == 0:
                out[p] = out.get(p, 0) + 1
                n //= p
        f += 6
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def divisors(n: int) -> list[int]:
    """All divisors of n, sorted ascending."""
    ds = [1]
    for p, e in factorize(n).items():
        ds = [d * p**k for d in ds for k in range(e + 1)]
    return sorted(ds)


def primitive_root(q: int | Modulus) -> int:
    """Least primitive root of the prime q."""
    qv = modulus_value(q)
    if qv == 3:
        return 2
    order_factors = list(factorize(qv - 1))
    for g in range(2, qv):
        if all(pow(g, (qv - 1) // p, qv) != 1 for p in order_factors):
            return g
    raise AssertionError(f"no primitive root found for prime {qv}")


class CharacterTable:
    """Primitive root, discrete logs and character evaluator for (Z/qZ)^x.

    Character j (0 <= j <= q-2) sends g^t to e(j*t/(q-1)); j = 0 is the
    principal character.
    """

    __slots__ = ("q", "g", "order", "dlog", "pow_g", "_roots")

    def __init__(self, q: int | Modulus):
        qv = modulus_value(q)
        self.q = qv
        self.g = primitive_root(qv)
        self.order = qv - 1
        # baby-step/giant-step power table: pow_g[i*B + j] = g^(i*B) * g^j,
        # vectorized since entries stay below q^2 < 2^63 at desk scale
        n = qv - 1
        block = min(n, 1024)
        baby = np.empty(block, dtype=np.int64)
        v = 1
        for j in range(block):
            baby[j] = v
            v = v * self.g % qv
        stride_count = -(-n // block)
        giants = np.empty(stride_count, dtype=np.int64)
        w = 1
        for i in range(stride_count):
            giants[i] = w
            w = w * v % qv
        pow_g = (giants[:, None] * baby[None, :] % qv).reshape(-1)[:n]
        dlog = np.full(qv, -1, dtype=np.int64)
        dlog[pow_g] = np.arange(n)
        self.dlog = dlog
        self.pow_g = pow_g
        self._roots: np.ndarray | None = None

    @property
    def roots(self) -> np.ndarray:
        """roots[k] = e(k/(q-1)), built on first character evaluation."""
        if self._roots is None:
            n = self.order
            self._roots = np.exp(2j * np.pi * np.arange(n) / n)
        return self._roots

    def value(self, j: int, a: int) -> complex:
        """chi_j(a) as a complex root of unity."""
        if not 0 <= j <= self.order - 1:
            raise ValueError(f"character index {j} outside [0, {self.order - 1}]")
        r = a % self.q
        if r == 0:
            raise ValueError("characters are not defined at 0")
        return complex(self.roots[(j * int(self.dlog[r])) % self.order])

    def character_values(self, j: int) -> np.ndarray:
        """chi_j on all of Z/qZ as an array indexed by residue; entry 0 is 0."""
        if not 0 <= j <= self.order - 1:
            raise ValueError(f"character index {j} outside [0, {self.order - 1}]")
        out = np.zeros(self.q, dtype=np.complex128)
        out[1:] = self.roots[(j * self.dlog[1:]) % self.order]
        return out

    def conj_index(self, j: int) -> int:
        """Index of the conjugate character of chi_j."""
        return (-j) % self.order


@functools.lru_cache(maxsize=8)
def character_table(q: int) -> CharacterTable:
    """Shared per-modulus CharacterTable (tables are immutable)."""
    return CharacterTable(q)


def character_value(table: CharacterTable, j: int, a: int) -> complex:
    return table.value(j, a)


@dataclass(frozen=True)
class Subgroup:
    """The index-m subgroup of (Z/qZ)^x, i.e. the m-th powers."""

    q: int
    index: int
    elements: ResidueSet

    def __post_init__(self) -> None:
        if (self.q - 1) % self.index != 0:
            raise ValueError(f"index {self.index} does not divide {self.q - 1}")


def subgroup_of_index(q: int | Modulus, m: int) -> Subgroup:
    """Subgroup {x : x^((q-1)/m) = 1} = <g^m>, of order (q-1)/m."""
    table = character_table(modulus_value(q))
    if (table.order) % m != 0:
        raise ValueError(f"{m} does not divide the group order {table.order}")
    bits = 0
    for v in table.pow_g[::m]:
        bits |= 1 << int(v)
    return Subgroup(table.q, m, ResidueSet(table.q, bits))


def subgroups(q: int | Modulus) -> list[Subgroup]:
    """One Subgroup per divisor of q-1, ascending by index.

    Index 1 is the full group; index q-1 is the trivial subgroup {1}.
    """
    qv = modulus_value(q)
    return [subgroup_of_index(qv, m) for m in divisors(qv - 1)]


def inverse_table(q: int | Modulus) -> np.ndarray:
    """inv[a] = a^(-1) mod q for a in [1, q-1]; inv[0] = 0.

    Built by the standard O(q) recurrence inv[i] = -(q // i) * inv[q % i].
    """
    qv = modulus_value(q)
    inv = np.zeros(qv, dtype=np.int64)
    inv[1] = 1
    for i in range(2, qv):
        inv[i] = (qv - qv // i) * inv[qv % i] % qv
    return inv


@functools.lru_cache(maxsize=8)
def cached_inverse_table(q: int) -> np.ndarray:
    return inverse_table(q)


def order_of(a: int, q: int | Modulus) -> int:
    """Multiplicative order of a mod q, by checking divisors of q-1."""
    qv = modulus_value(q)
    if a % qv == 0:
        raise ValueError("0 has no multiplicative order")
    for d in divisors(qv - 1):
        if pow(a, d, qv) == 1:
            return d
    raise AssertionError("order must divide q-1")


def isqrt_floor(n: int, k: int) -> int:
    """Integer floor of n^(1/k) for n >= 0, k >= 1 (exact; pure-integer Newton)."""
    if n < 0 or k < 1:
        raise ValueError("isqrt_floor expects n >= 0, k >= 1")
    if n == 0:
        return 0
    if k == 1:
        return n
    r = 1 << -(-n.bit_length() // k)  # power-of-two seed >= true root
    while True:
        nr = ((k - 1) * r + n // r ** (k - 1)) // k
        if nr >= r:
            break
        r = nr
    while r**k > n:
        r -= 1
    while (r + 1) ** k <= n:
        r += 1
    return r


def primes_in_range(lo: int, hi: int) -> list[int]:
    """Primes q with lo <= q <= hi, via the deterministic point test."""
    lo = max(lo, 2)
    return [n for n in range(lo, hi + 1) if is_prime(n)]
