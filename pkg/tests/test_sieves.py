import math

import numpy as np
import pytest

from primecover.primes import factor_sieve
from primecover.sieves import (
    LOWER,
    UPPER,
    SieveParams,
    SieveWeights,
    _squarefree_smooth_products,
    audit_weights,
    dirac_weights,
    divisor_subset_sums,
    linear_lower,
    selberg_upper,
    sifting_primes,
    weight_sum,
    weight_sum_reference,
)

GRID = [SieveParams(10**4, xi, delta=0.05) for xi in (0.1, 0.15, 0.2)]


def test_param_validation():
    with pytest.raises(ValueError):
        selberg_upper(SieveParams(10**4, 0.49, gamma=0.05))  # xi too close to 1/2
    with pytest.raises(ValueError):
        selberg_upper(SieveParams(10**4, 0.0))
    with pytest.raises(ValueError):
        linear_lower(SieveParams(10**4, 0.48, delta=0.05, gamma=0.05))
    with pytest.raises(ValueError):
        SieveParams(2, 0.2)


def test_sifting_primes_strict():
    assert sifting_primes(7.0) == [2, 3, 5]  # strict: 7 excluded
    assert sifting_primes(7.5) == [2, 3, 5, 7]
    assert sifting_primes(1.9) == []


def test_upper_normalization():
    for params in GRID:
        w = selberg_upper(params)
        assert w.lam[1] == pytest.approx(1.0, abs=1e-12)  # rho_1^2
        assert w.weight(1) == pytest.approx(1.0, abs=1e-12)
        assert w.rho[1] == 1.0
        assert all(abs(r) <= 1 + 1e-9 for r in w.rho.values())


def test_upper_rough_weight_is_one():
    # w+(n) >= 1 on z-rough n, with equality for this construction
    params = SieveParams(10**4, 0.2)
    w = selberg_upper(params)
    warr = w.weight_array()
    rough = factor_sieve(params.x).rough_mask(w.z)[: params.x + 1]
    assert float(warr[rough].min()) >= 1 - 1e-9
    assert float(warr[rough].max()) <= 1 + 1e-9
    # and w+(p) >= 1 for every prime z <= p <= x
    from primecover.primes import primes_below

    for p in primes_below(params.x).primes:
        if p >= w.z:
            assert warr[p] >= 1 - 1e-9


def test_upper_rho_matches_quadratic_program():
    # independent oracle: the coefficients minimize rho^T M rho with
    # M[d1,d2] = 1/lcm(d1,d2) subject to rho_1 = 1, so they must equal
    # M^-1 e_1 normalized; and the optimal value must be exactly 1/G(z)
    for xi, x in [(0.2, 10**4), (0.25, 10**5), (0.3, 31623)]:
        w = selberg_upper(SieveParams(x, xi))
        support = sorted(w.rho)
        m = len(support)
        M = np.empty((m, m))
        for i, d1 in enumerate(support):
            for j, d2 in enumerate(support):
                M[i, j] = 1.0 / (d1 * d2 // math.gcd(d1, d2))
        e1 = np.zeros(m)
        e1[support.index(1)] = 1.0
        sol = np.linalg.solve(M, e1)
        rho_qp = sol / sol[support.index(1)]
        closed = np.array([w.rho[d] for d in support])
        assert np.abs(rho_qp - closed).max() < 1e-10

        g_total = math.fsum(1.0 / phi for _, _, phi in _squarefree_smooth_products(
            sifting_primes(w.z), w.z))
        assert closed @ M @ closed == pytest.approx(1.0 / g_total, rel=1e-12)


def test_sieve_sandwich_on_rough_counts():
    # w- <= 1_rough <= w+ pointwise forces the sums to sandwich the true count
    for xi in (0.15, 0.2):
        params = SieveParams(10**4, xi, delta=0.05)
        upper = selberg_upper(params)
        lower = linear_lower(params)
        rough_count = int(factor_sieve(params.x).rough_mask(params.z)[1 : params.x + 1].sum())
        assert weight_sum(lower) <= rough_count + 1e-6
        assert rough_count <= weight_sum(upper) + 1e-6


def test_upper_square_form_identity():
    # expanded lambda representation equals the square of the rho divisor sum
    for params in GRID:
        w = selberg_upper(params)
        s = np.zeros(params.x + 1)
        for d, r in w.rho.items():
            s[d::d] += r
        assert np.abs(w.weight_array()[1:] - s[1:] ** 2).max() <= 1e-9


def test_upper_audits_pass():
    for params in GRID:
        for rep in audit_weights(selberg_upper(params)):
            assert rep.verdict in ("pass", "recorded"), rep.one_line()


def test_lower_audits_pass():
    for params in GRID:
        for rep in audit_weights(linear_lower(params)):
            assert rep.verdict in ("pass", "recorded"), rep.one_line()


def test_lower_basic_clauses():
    params = SieveParams(10**4, 0.15, delta=0.05)
    w = linear_lower(params)
    assert w.weight(1) == 1.0  # lambda_1
    warr = w.weight_array()
    rough = factor_sieve(params.x).rough_mask(w.z)[: params.x + 1]
    smooth = ~rough
    smooth[0] = False
    assert float(warr[smooth].max()) <= 1e-12
    assert all(abs(c) <= 1 for c in w.lam.values())
    assert max(w.support()) <= w.level


def test_lower_fundamental_inequality_exhaustive():
    # sum_{d | m} lambda-_d <= [m = 1] for every squarefree m | P(z), m <= x
    params = SieveParams(10**4, 0.2, delta=0.05)
    w = linear_lower(params)
    primes = sifting_primes(w.z)

    def rec(start, chosen, prod):
        total = divisor_subset_sums(w.lam, chosen)
        limit = 1.0 if not chosen else 0.0
        assert total <= limit + 1e-12, (chosen, total)
        for i in range(start, len(primes)):
            if prod * primes[i] > params.x:
                break
            rec(i + 1, chosen + [primes[i]], prod * primes[i])

    rec(0, [], 1)


def test_weight_sum_identity():
    # divisor-sum interchange: sum_d lambda_d*floor(x/d) = sum_n w(n), exactly
    for params in GRID:
        for w in (selberg_upper(params), linear_lower(params)):
            direct = float(w.weight_array()[1:].sum())
            assert weight_sum(w) == pytest.approx(direct, rel=1e-12, abs=1e-6)


def test_weight_sum_ratios():
    params = SieveParams(10**5, 0.2, delta=0.05)
    upper = selberg_upper(params)
    lower = linear_lower(params)
    up = weight_sum(upper) / weight_sum_reference(upper)
    lo = weight_sum(lower) / weight_sum_reference(lower)
    assert 0 < up <= 2.0  # upper ratio in (0, 2]
    assert 0 < lo <= 1.0  # linear-sieve f(s) <= 1


def test_lower_sum_positive_at_million():
    w = linear_lower(SieveParams(10**6, 0.1, delta=0.05))
    total = weight_sum(w)
    assert total > 0
    # z < 4 here, so the weights reduce to full inclusion-exclusion over {2,3}
    assert total == 10**6 - 10**6 // 2 - 10**6 // 3 + 10**6 // 6


def test_fault_injection_caught():
    params = SieveParams(10**4, 0.2, delta=0.05)
    good = linear_lower(params)
    bad_lam = dict(good.lam)
    bad_lam[2] = +1.0  # flip a Moebius sign
    bad = SieveWeights(params, LOWER, bad_lam, good.z, good.level)
    reps = {r.name: r for r in audit_weights(bad)}
    failed = [r for r in reps.values() if r.verdict == "fail"]
    assert failed
    assert any(r.witness is not None for r in failed)

    up = selberg_upper(params)
    bad_up = dict(up.lam)
    bad_up[max(up.support()) * 2] = 5.0  # push support past the level
    rep = {
        r.name: r
        for r in audit_weights(SieveWeights(params, UPPER, bad_up, up.z, up.level, rho=up.rho))
    }
    assert rep["upper.support-level"].verdict == "fail"


def test_dirac_weights_trivial():
    w = dirac_weights(50)
    assert np.all(w.weight_array()[1:] == 1.0)
    assert weight_sum(w) == 50
