import cmath
import math

import numpy as np
import pytest

from primecover.fourier import (
    additive_transform,
    additive_transform_naive,
    kloosterman,
    kloosterman_row,
    l1_spectrum_norm,
    linear_exponential_bound,
    linear_exponential_sum,
    mult_convolve,
    mult_convolve_naive,
    mult_transform,
    mult_transform_naive,
    parseval_gap_additive,
    parseval_gap_multiplicative,
    solution_count_fourier,
    sup_nontrivial_mult_coeff,
    weil_audit,
)
from primecover.modular import cached_inverse_table, character_table
from primecover.primes import prime_residues
from primecover.sieves import SieveParams, SieveWeights, dirac_weights, linear_lower, selberg_upper


def _rand_fn(rng, q, real=False):
    f = np.zeros(q, dtype=np.complex128)
    f[1:] = rng.normal(size=q - 1)
    if not real:
        f[1:] += 1j * rng.normal(size=q - 1)
    return f


def test_additive_transform_delta_at_zero():
    q = 7
    f = np.zeros(q)
    f[0] = 1.0
    spec = additive_transform(f, q)
    assert np.allclose(spec.values, np.ones(q))


def test_additive_transform_constant():
    q = 11
    spec = additive_transform(np.ones(q), q)
    assert spec.values[0] == pytest.approx(q)
    assert np.abs(spec.values[1:]).max() < 1e-9


def test_additive_transform_two_point():
    q = 5
    f = np.zeros(q)
    f[1] = f[2] = 1.0
    spec = additive_transform(f, q)
    expected = cmath.exp(-2j * cmath.pi / 5) + cmath.exp(-4j * cmath.pi / 5)
    assert spec.values[1] == pytest.approx(expected, abs=1e-12)


def test_additive_fast_vs_naive():
    rng = np.random.default_rng(1)
    for q in (5, 101, 499):
        f = _rand_fn(rng, q)
        fast = additive_transform(f, q).values
        slow = additive_transform_naive(f, q).values
        assert np.abs(fast - slow).max() < 1e-9 * max(1.0, np.abs(slow).max())


def test_linear_exponential_sum_examples():
    assert abs(linear_exponential_sum(1, 5, 5)) < 1e-12  # full period
    two = cmath.exp(-2j * cmath.pi / 5) + cmath.exp(-4j * cmath.pi / 5)
    assert linear_exponential_sum(1, 5, 2) == pytest.approx(two, abs=1e-12)
    with pytest.raises(ValueError):
        linear_exponential_sum(0, 5, 2)
    with pytest.raises(ValueError):
        linear_exponential_sum(1, 5, 6)


def test_linear_exponential_sum_matches_direct_and_bound():
    q = 101
    for a in range(1, q):
        for length in (1, 2, 17, 50, 100, 101):
            closed = linear_exponential_sum(a, q, length)
            direct = sum(cmath.exp(-2j * cmath.pi * a * y / q) for y in range(1, length + 1))
            assert closed == pytest.approx(direct, abs=1e-9)
            assert abs(closed) <= linear_exponential_bound(a, q, length) + 1e-9


def test_mult_transform_constant():
    q = 11
    table = character_table(q)
    f = np.zeros(q)
    f[1:] = 1.0
    spec = mult_transform(f, table)
    assert spec.values[0] == pytest.approx(q - 1)
    assert np.abs(spec.values[1:]).max() < 1e-9


def test_mult_transform_prime_indicator_q5():
    table = character_table(5)
    f = np.zeros(5)
    for p in prime_residues(5, 1):
        f[p] = 1.0
    spec = mult_transform(f, table)
    assert spec.values[0] == pytest.approx(2.0)  # |P_1| = 2


def test_mult_transform_fast_vs_naive():
    rng = np.random.default_rng(2)
    for q in (13, 101):
        table = character_table(q)
        f = _rand_fn(rng, q)
        fast = mult_transform(f, table).values
        slow = mult_transform_naive(f, table).values
        assert np.abs(fast - slow).max() < 1e-9 * max(1.0, np.abs(slow).max())


def test_mult_transform_rejects_mass_at_zero():
    table = character_table(7)
    f = np.ones(7)
    with pytest.raises(ValueError):
        mult_transform(f, table)


def test_parseval_random():
    rng = np.random.default_rng(3)
    table = character_table(101)
    for _ in range(20):
        f = _rand_fn(rng, 101)
        assert parseval_gap_additive(f, 101) < 1e-9
        assert parseval_gap_multiplicative(f, table) < 1e-9


def test_kloosterman_value_q5():
    # n = 1..4: e(2/5) + 1 + 1 + e(8/5); equals 2 + 2*cos(4*pi/5)
    v = kloosterman(1, 1, 5)
    assert v.real == pytest.approx(0.3819660112501051, abs=1e-9)
    assert abs(v.imag) < 1e-9


def test_kloosterman_rejects_degenerate():
    with pytest.raises(ValueError):
        kloosterman(0, 1, 5)
    with pytest.raises(ValueError):
        kloosterman(1, 5, 5)


def test_kloosterman_symmetry_and_reduction():
    # Kl(r,s) = Kl(s,r) (n <-> n^-1) and Kl(r,s) = Kl(1, rs) (n -> r^-1 n)
    import random

    rng = random.Random(5)
    for _ in range(100):
        q = rng.choice([7, 101, 211])
        r = rng.randint(1, q - 1)
        s = rng.randint(1, q - 1)
        a = kloosterman(r, s, q)
        assert a == pytest.approx(kloosterman(s, r, q), abs=1e-9)
        assert a == pytest.approx(kloosterman_row(q)[r * s % q], abs=1e-9)
        assert abs(a.imag) < 1e-6


def test_weil_exhaustive_small():
    for q in (5, 7, 101):
        rep = weil_audit(q)
        assert rep.verdict == "pass"
        assert rep.computed <= 2 * math.sqrt(q) + 1e-6


def test_kloosterman_moment_identities():
    # exact envelopes of the whole family: sum_u Kl2(1,u) = 1 and
    # sum_u Kl2(1,u)^2 = q^2 - q - 1 (orthogonality of additive characters)
    for q in (5, 7, 101, 211):
        row = kloosterman_row(q)[1:]
        assert complex(row.sum()) == pytest.approx(1.0, abs=1e-6)
        assert complex((row**2).sum()) == pytest.approx(q * q - q - 1, abs=1e-4)


def test_convolution_identity_element():
    q = 11
    table = character_table(q)
    delta1 = np.zeros(q)
    delta1[1] = 1.0
    conv = mult_convolve(delta1, delta1, table)
    assert conv[1] == pytest.approx(1.0, abs=1e-9)
    assert np.abs(np.delete(conv, 1)).max() < 1e-9


def test_convolution_prime_indicator_q5():
    # pairs (2,2),(3,3) land at 4; (2,3),(3,2) at 1
    table = character_table(5)
    f = np.zeros(5)
    f[2] = f[3] = 1.0
    conv = mult_convolve(f, f, table).real
    assert conv[1] == pytest.approx(2.0, abs=1e-9)
    assert conv[4] == pytest.approx(2.0, abs=1e-9)
    assert abs(conv[2]) < 1e-9 and abs(conv[3]) < 1e-9


def test_convolution_real_nonneg_closure():
    rng = np.random.default_rng(7)
    q = 101
    table = character_table(q)
    f = np.zeros(q)
    g = np.zeros(q)
    f[1:] = rng.random(q - 1)
    g[1:] = rng.random(q - 1)
    conv = mult_convolve(f, g, table)
    assert np.abs(conv.imag).max() < 1e-9
    assert conv.real.min() > -1e-9


def test_convolution_fast_vs_naive_complex():
    rng = np.random.default_rng(8)
    for q in (13, 101, 499):
        table = character_table(q)
        f = _rand_fn(rng, q)
        g = _rand_fn(rng, q)
        fast = mult_convolve(f, g, table)
        slow = mult_convolve_naive(f, g, q)
        assert np.abs(fast - slow).max() < 1e-6 * np.abs(slow).max()


def test_convolution_spectral_identity_conjugated():
    # the verified form: (f*g)^(chi) = f^(chi) * conj(g^(conj chi));
    # the unconjugated guess f^ * conj(g^) genuinely fails for complex g
    rng = np.random.default_rng(9)
    q = 101
    n = q - 1
    table = character_table(q)
    f = _rand_fn(rng, q)
    g = _rand_fn(rng, q)
    ch = mult_transform(mult_convolve(f, g, table), table).values
    fh = mult_transform(f, table).values
    gh = mult_transform(g, table).values
    true_form = fh * np.conj(gh[(-np.arange(n)) % n])
    scale = np.abs(ch).max()
    assert np.abs(ch - true_form).max() < 1e-9 * scale
    assert np.abs(ch - fh * np.conj(gh)).max() > 0.1 * scale


def test_solution_count_dirac_is_hyperbola_count():
    q = 1009
    x = 50
    w = dirac_weights(x)
    rep = solution_count_fourier(w, 7, q)
    inv = cached_inverse_table(q)
    brute = sum(1 for n in range(1, x + 1) if (7 * inv[n]) % q <= x)
    assert rep.direct == pytest.approx(brute, abs=1e-9)
    assert rep.rel_gap < 1e-6


def test_solution_count_direct_vs_spectral():
    import random

    rng = random.Random(11)
    q = 1009
    w = selberg_upper(SieveParams(int(q**0.75), 0.2))
    for _ in range(5):
        a = rng.randint(1, q - 1)
        rep = solution_count_fourier(w, a, q)
        assert rep.rel_gap < 1e-6
        assert rep.offdiag_abs <= rep.offdiag_weil_bound * (1 + 1e-12)


def test_solution_count_rejects_bad_inputs():
    q = 1009
    w = selberg_upper(SieveParams(int(q**0.75), 0.2))
    with pytest.raises(ValueError):
        solution_count_fourier(w, 0, q)
    with pytest.raises(ValueError):
        solution_count_fourier(dirac_weights(2000), 3, q)  # x >= q


def test_l1_norm_degenerate_delta():
    # lambda tuned so w = delta at n=1: unimodular spectrum, L = q - 1 exactly
    q = 101
    params = SieveParams(4, 0.2)
    w = SieveWeights(params, "upper", {1: 1.0, 2: -1.0, 3: -1.0}, params.z, params.level_upper)
    assert list(w.weight_array()[1:]) == [1.0, 0.0, 0.0, 0.0]
    rep = l1_spectrum_norm(w, q)
    assert rep.computed == pytest.approx(q - 1, rel=1e-12)


def test_l1_norm_requires_x_below_q():
    w = selberg_upper(SieveParams(200, 0.2))
    with pytest.raises(ValueError):
        l1_spectrum_norm(w, 101)
    rep = l1_spectrum_norm(w, 1009)
    assert rep.verdict == "recorded"
    assert rep.computed > 0


def test_sup_mult_coeff_small():
    q = 499
    w = linear_lower(SieveParams(int(q**0.9), 0.15, delta=0.05))
    rep = sup_nontrivial_mult_coeff(w, q)
    assert rep.verdict == "pass"  # the prefix-sum clause is hard
    assert rep.details["prefix_max"] <= rep.details["prefix_bound"] + 1e-6
    with pytest.raises(ValueError):
        sup_nontrivial_mult_coeff(linear_lower(SieveParams(600, 0.15, delta=0.05)), 499)


def test_sup_mult_coeff_zero_weights():
    q = 101
    w = SieveWeights(SieveParams(50, 0.15, delta=0.05), "lower", {}, 1.0, 10.0)
    rep = sup_nontrivial_mult_coeff(w, q)
    assert rep.computed == 0.0


def test_sup_mult_coeff_x_equal_q_wraparound():
    # x = q is allowed; the n = q term lands on residue 0 and is dropped
    q = 101
    w = linear_lower(SieveParams(q, 0.15, delta=0.05))
    farr = w.residue_array(q)
    warr = w.weight_array()
    assert farr[1] == pytest.approx(warr[1])
    assert farr[0] == pytest.approx(warr[q])  # wrapped mass, zeroed by the audit
    rep = sup_nontrivial_mult_coeff(w, q)
    assert rep.verdict == "pass"
