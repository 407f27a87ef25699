"""Additive and multiplicative Fourier analysis on Z/qZ.

Conventions (e(t) = exp(2*pi*i*t)):
    additive:        f^(r)   = sum_a f(a) e(-r*a/q)
    multiplicative:  f^(chi) = sum_x f(x) conj(chi(x))     over x in (Z/qZ)^x
    convolution:     (f*g)(a) = sum_{xy=a} f(x) conj(g(y))

The additive transform is numpy's FFT verbatim; the multiplicative one is the
FFT after reindexing by discrete logs.  Note the conjugation in the
convolution: its verified spectral form is (f*g)^(chi) = f^(chi) *
conj(g^(conj chi)), which collapses to f^ * g^ for real g.

Kloosterman sums Kl2(r, s; q) = sum_{n in (Z/qZ)^x} e((r*n + s*n^-1)/q) are
evaluated by brute force and audited against the 2*sqrt(q) bound.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from .modular import cached_inverse_table, character_table, modulus_value
from .reports import FAIL, PASS, RECORDED, AuditReport
from .sieves import LOWER, UPPER, SieveWeights


@dataclass
class SpectrumAdditive:
    """Additive Fourier coefficients, indexed by frequency r in [0, q-1]."""

    q: int
    values: np.ndarray


@dataclass
class SpectrumMultiplicative:
    """Multiplicative Fourier coefficients, indexed by character j in [0, q-2]."""

    q: int
    values: np.ndarray


def _as_mod_array(f: np.ndarray, q: int) -> np.ndarray:
    arr = np.asarray(f, dtype=np.complex128)
    if arr.shape != (q,):
        raise ValueError(f"function must be a length-{q} array indexed by residue")
    return arr


def additive_transform(f: np.ndarray, q: int) -> SpectrumAdditive:
    """f^(r) = sum_a f(a) e(-ra/q) for all r, via FFT."""
    qv = modulus_value(q)
    if qv > 10**6:
        raise ValueError("dense transforms budgeted for q <= 10^6")
    return SpectrumAdditive(qv, np.fft.fft(_as_mod_array(f, qv)))


def additive_transform_naive(f: np.ndarray, q: int) -> SpectrumAdditive:
    """Direct-definition transform over the support of f (oracle path)."""
    qv = modulus_value(q)
    arr = _as_mod_array(f, qv)
    support = np.flatnonzero(arr)
    out = np.zeros(qv, dtype=np.complex128)
    rs = np.arange(qv)
    for a in support:
        out += arr[a] * np.exp(-2j * np.pi * (rs * int(a) % qv) / qv)
    return SpectrumAdditive(qv, out)


def distance_to_int(t: float) -> float:
    """||t||: distance from t to the nearest integer."""
    return abs(t - round(t))


def linear_exponential_sum(a: int, q: int, length: int) -> complex:
    """sum_{y=1}^{Y} e(-a*y/q) in closed form (geometric sum)."""
    qv = modulus_value(q)
    if a % qv == 0:
        raise ValueError("frequency a must be nonzero mod q")
    if not 1 <= length <= qv:
        raise ValueError(f"Y must lie in [1, {qv}]")
    w = np.exp(-2j * np.pi * (a % qv) / qv)
    return complex(w * (w**length - 1) / (w - 1))


def linear_exponential_bound(a: int, q: int, length: int) -> float:
    """min(Y, 1/(2*||a/q||)), the standard geometric-sum estimate."""
    qv = modulus_value(q)
    return min(float(length), 1.0 / (2.0 * distance_to_int((a % qv) / qv)))


def mult_transform(f: np.ndarray, table) -> SpectrumMultiplicative:
    """f^(chi_j) for all j at once: FFT of f reindexed by discrete logs."""
    q = table.q
    arr = _as_mod_array(f, q)
    if abs(arr[0]) != 0:
        raise ValueError("multiplicative transforms need f(0) = 0")
    reindexed = arr[table.pow_g]
    return SpectrumMultiplicative(q, np.fft.fft(reindexed))


def mult_transform_naive(f: np.ndarray, table) -> SpectrumMultiplicative:
    """Definition-chasing transform: explicit character sums (oracle path)."""
    q = table.q
    arr = _as_mod_array(f, q)
    out = np.empty(q - 1, dtype=np.complex128)
    for j in range(q - 1):
        out[j] = (arr[1:] * np.conj(table.character_values(j)[1:])).sum()
    return SpectrumMultiplicative(q, out)


def mult_convolve(f: np.ndarray, g: np.ndarray, table) -> np.ndarray:
    """(f*g)(a) = sum_{xy=a} f(x) conj(g(y)), via the discrete-log FFT."""
    q = table.q
    fa = _as_mod_array(f, q)[table.pow_g]
    ga = _as_mod_array(g, q)[table.pow_g]
    conv = np.fft.ifft(np.fft.fft(fa) * np.fft.fft(np.conj(ga)))
    out = np.zeros(q, dtype=np.complex128)
    out[table.pow_g] = conv
    return out


def mult_convolve_naive(f: np.ndarray, g: np.ndarray, q: int) -> np.ndarray:
    """Double-loop definition of the convolution (oracle path)."""
    qv = modulus_value(q)
    fa = _as_mod_array(f, qv)
    ga = np.conj(_as_mod_array(g, qv))
    out = np.zeros(qv, dtype=np.complex128)
    ys = np.arange(1, qv)
    for x in range(1, qv):
        if fa[x] == 0:
            continue
        np.add.at(out, x * ys % qv, fa[x] * ga[1:])
    return out


# ---------------------------------------------------------------------------
# Kloosterman sums


@functools.lru_cache(maxsize=4)
def _unit_roots(q: int) -> np.ndarray:
    return np.exp(2j * np.pi * np.arange(q) / q)


def kloosterman(r: int, s: int, q: int) -> complex:
    """Kl2(r, s; q) by brute force over the units; rejects r or s = 0 mod q."""
    qv = modulus_value(q)
    if r % qv == 0 or s % qv == 0:
        raise ValueError("degenerate Kloosterman arguments (r or s = 0) are out of scope")
    inv = cached_inverse_table(qv)
    ns = np.arange(1, qv)
    idx = (r % qv * ns + s % qv * inv[1:]) % qv
    return complex(_unit_roots(qv)[idx].sum())


@functools.lru_cache(maxsize=4)
def kloosterman_row(q: int) -> np.ndarray:
    """Kl2(1, u; q) for u in [0, q-1]; entry 0 is the degenerate Ramanujan value -1.

    Every nondegenerate sum reduces to this row: Kl2(r, s; q) = Kl2(1, rs; q)
    by substituting n -> r^-1 n.
    """
    qv = modulus_value(q)
    inv = cached_inverse_table(qv)
    ns = np.arange(1, qv)
    us = np.arange(qv)
    idx = (ns[None, :] + us[:, None] * inv[1:][None, :]) % qv
    return _unit_roots(qv)[idx].sum(axis=1)


def weil_audit(q: int, tol: float = 1e-6) -> AuditReport:
    """Exhaustive |Kl2(r, s; q)| <= 2*sqrt(q) over all (r, s) in [1, q-1]^2.

    Also verifies that every sum is real (conjugation symmetry n <-> -n)
    and symmetric under r <-> s (substitution n <-> n^-1).
    """
    qv = modulus_value(q)
    inv = cached_inverse_table(qv)
    roots = _unit_roots(qv)
    ns = np.arange(1, qv)
    bound = 2.0 * math.sqrt(qv)
    worst = 0.0
    worst_pair = None
    max_imag = 0.0
    for r in range(1, qv):
        idx = (r * ns[None, :] + np.arange(1, qv)[:, None] * inv[1:][None, :]) % qv
        sums = roots[idx].sum(axis=1)
        max_imag = max(max_imag, float(np.abs(sums.imag).max()))
        mags = np.abs(sums)
        m = float(mags.max())
        if m > worst:
            worst = m
            worst_pair = (r, int(mags.argmax()) + 1)
    ok = worst <= bound + tol and max_imag <= tol
    return AuditReport(
        name="kloosterman.weil",
        params={"q": qv},
        computed=worst,
        bound=bound,
        ratio=worst / bound,
        verdict=PASS if ok else FAIL,
        tolerance=tol,
        witness=None if ok else worst_pair,
        details={"max_imag": max_imag, "pairs_checked": (qv - 1) ** 2},
    )


# ---------------------------------------------------------------------------
# Sieve-weight spectrum audits


def l1_spectrum_norm(w: SieveWeights, q: int) -> AuditReport:
    """L = sum_{r=1}^{q-1} |w^(r)| against the scaling shape q * x^(2*xi) * log q.

    The comparison is a recorded regression ratio, not a proved constant.
    Requires upper weights with x < q.
    """
    qv = modulus_value(q)
    if w.kind != UPPER:
        raise ValueError("l1_spectrum_norm expects upper weights")
    if w.params.x >= qv:
        raise ValueError("needs x < q")
    spec = additive_transform(w.residue_array(qv), qv)
    l1 = float(np.abs(spec.values[1:]).sum())
    shape = qv * w.params.x ** (2 * w.params.xi) * math.log(qv)
    return AuditReport(
        name="sieve-spectrum.l1-additive",
        params={"q": qv, "x": w.params.x, "xi": w.params.xi},
        computed=l1,
        bound=shape,
        ratio=l1 / shape,
        verdict=RECORDED,
        details={"dc_term": float(abs(spec.values[0]))},
    )


def sup_nontrivial_mult_coeff(w: SieveWeights, q: int, pv_tol: float = 1e-6) -> AuditReport:
    """sup over chi != chi_0 of |w^(chi)| vs x^(2*xi+delta) * sqrt(q) * log q.

    Also audits the intermediate prefix-sum step: for every nontrivial chi
    and every d in the support, |sum_{n<=x, d|n} conj(chi)(n)| must respect
    the sqrt(q)*log(q) prefix bound (hard assertion).  Requires x <= q.
    """
    qv = modulus_value(q)
    if w.kind != LOWER:
        raise ValueError("sup_nontrivial_mult_coeff expects lower weights")
    x = w.params.x
    if x > qv:
        raise ValueError("needs x <= q")
    table = character_table(qv)
    farr = w.residue_array(qv)
    farr[0] = 0.0
    spec = mult_transform(farr, table)
    sup = float(np.abs(spec.values[1:]).max()) if qv > 2 else 0.0
    shape = x ** (2 * w.params.xi + w.params.delta) * math.sqrt(qv) * math.log(qv)

    prefix_bound = math.sqrt(qv) * math.log(qv)
    worst_prefix = 0.0
    worst_d = None
    for d in w.support():
        mult = np.zeros(qv)
        tops = np.arange(d, x + 1, d) % qv
        mult[tops[tops != 0]] = 1.0
        dvals = np.abs(mult_transform(mult, table).values[1:])
        m = float(dvals.max()) if dvals.size else 0.0
        if m > worst_prefix:
            worst_prefix, worst_d = m, d
    prefix_ok = worst_prefix <= prefix_bound + pv_tol
    return AuditReport(
        name="sieve-spectrum.sup-multiplicative",
        params={"q": qv, "x": x, "xi": w.params.xi, "delta": w.params.delta},
        computed=sup,
        bound=shape,
        ratio=sup / shape,
        verdict=PASS if prefix_ok else FAIL,
        tolerance=pv_tol,
        witness=None if prefix_ok else worst_d,
        details={
            "prefix_max": worst_prefix,
            "prefix_bound": prefix_bound,
            "support_size": len(w.support()),
        },
    )


# ---------------------------------------------------------------------------
# Modular-hyperbola solution counts weighted by sieve coefficients


@dataclass
class SolutionCountReport:
    """Dual evaluation of sum_n w(n) w(a n^-1) with the frequency-side split.

    The off-diagonal block (both frequencies nonzero) is reported exactly, as
    an absolute sum, and re-bounded through |Kl2| <= 2*sqrt(q); the two axis
    blocks (one frequency zero, Ramanujan sums of size 1) carry their
    absolute ceilings alongside the exact values.
    """

    q: int
    a: int
    direct: float
    spectral: float
    main_term: float
    cross_r: float
    cross_s: float
    cross_r_abs_bound: float
    cross_s_abs_bound: float
    offdiag_exact: float
    offdiag_abs: float
    offdiag_weil_bound: float
    rel_gap: float


def solution_count_fourier(w: SieveWeights, a: int, q: int) -> SolutionCountReport:
    """Evaluate sum_{n in units} w(n) w(a n^-1) directly and spectrally.

    The spectral route expands both factors by additive inversion, leaving a
    double frequency sum against complete exponential sums: Kloosterman sums
    off the axes, Ramanujan sums (-1) on them, and q-1 at the origin.  The
    off-diagonal block is also re-estimated with |Kl2| <= 2*sqrt(q) to expose
    the bound chain.  Budgeted for q <= ~5000 (dense q x q frequency grid).
    """
    qv = modulus_value(q)
    if w.kind != UPPER:
        raise ValueError("solution counts are audited for upper weights")
    if a % qv == 0:
        raise ValueError("a must be a unit")
    if w.params.x >= qv:
        raise ValueError("needs x < q")
    a = a % qv
    inv = cached_inverse_table(qv)
    farr = w.residue_array(qv)

    partner = farr[(a * inv) % qv]
    direct = float((farr * partner)[1:].sum())

    what = np.fft.fft(farr)
    w0 = what[0]
    tail = what[1:]
    row = kloosterman_row(qv)  # row[u] = Kl2(1, u; q)
    uidx = np.multiply.outer(np.arange(1, qv), np.arange(1, qv) * a % qv) % qv
    kl = row[uidx]
    offdiag = (tail[:, None] * tail[None, :] * kl).sum()
    cross_r = (-1.0) * (tail.sum() * w0)
    cross_s = (-1.0) * (w0 * tail.sum())
    main = (qv - 1) * w0 * w0
    spectral = (main + cross_r + cross_s + offdiag) / qv**2

    abs_tail = np.abs(tail)
    offdiag_abs = float((abs_tail[:, None] * abs_tail[None, :] * np.abs(kl)).sum()) / qv**2
    weil_bound = float(abs_tail.sum()) ** 2 * 2.0 * math.sqrt(qv) / qv**2
    axis_bound = float(abs(w0)) * float(abs_tail.sum()) / qv**2

    spectral_real = float(spectral.real)
    rel_gap = abs(direct - spectral_real) / max(1.0, abs(direct))
    return SolutionCountReport(
        q=qv,
        a=a,
        direct=direct,
        spectral=spectral_real,
        main_term=float((main / qv**2).real),
        cross_r=float((cross_r / qv**2).real),
        cross_s=float((cross_s / qv**2).real),
        cross_r_abs_bound=axis_bound,
        cross_s_abs_bound=axis_bound,
        offdiag_exact=float((offdiag / qv**2).real),
        offdiag_abs=offdiag_abs,
        offdiag_weil_bound=weil_bound,
        rel_gap=rel_gap,
    )


def parseval_gap_additive(f: np.ndarray, q: int) -> float:
    """Relative Parseval defect |sum|f^|^2 - q*sum|f|^2| / (q*sum|f|^2)."""
    qv = modulus_value(q)
    arr = _as_mod_array(f, qv)
    lhs = float((np.abs(additive_transform(arr, qv).values) ** 2).sum())
    rhs = qv * float((np.abs(arr) ** 2).sum())
    return abs(lhs - rhs) / rhs if rhs else abs(lhs)


def parseval_gap_multiplicative(f: np.ndarray, table) -> float:
    """Relative Parseval defect over the character group."""
    arr = _as_mod_array(f, table.q)
    lhs = float((np.abs(mult_transform(arr, table).values) ** 2).sum())
    rhs = (table.q - 1) * float((np.abs(arr[1:]) ** 2).sum())
    return abs(lhs - rhs) / rhs if rhs else abs(lhs)
