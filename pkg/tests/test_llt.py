import math

import numpy as np
import pytest

from lattice_llt import (
    LatticePmf,
    NonMaximalSpan,
    bernoulli_llt_error,
    convolve_n,
    gauss_local,
    llt_error,
    validate,
)
from lattice_llt.llt import fair_coin_pmf, fit_rate

G0 = 2 / math.sqrt(2 * math.pi)


def test_gauss_local_center():
    assert gauss_local(7, 7 * 0.3, 0.3, 0.4, 1.5) == pytest.approx(1.5 / (math.sqrt(2 * math.pi) * math.sqrt(0.4)))
    assert gauss_local(10, 5, 0.5, 0.25, 1.0) == pytest.approx(G0)
    assert G0 == pytest.approx(0.797885, abs=1e-6)


def test_gauss_local_symmetry():
    for x in (0.5, 1, 3.7):
        assert gauss_local(50, 25 + x, 0.5, 0.25, 1) == pytest.approx(gauss_local(50, 25 - x, 0.5, 0.25, 1))


def test_gauss_local_mass(three):
    s = validate(three)
    for n in (10, 100, 1000):
        N = np.arange(-5 * n, 8 * n + 1)
        mass = gauss_local(n, N, s.mu, s.sigma2, three.D).sum() / math.sqrt(n)
        assert abs(mass - 1) <= 1 / n


def test_coin_delta_100(coin):
    curve = llt_error(coin, [100])
    assert curve.deltas[0] <= 0.01
    center = 10 * math.comb(100, 50) / 2**100
    assert center == pytest.approx(0.79589, abs=1e-5)
    assert curve.deltas[0] >= abs(center - G0)


def test_coin_delta_decades(coin):
    d = llt_error(coin, [100, 1000, 10000]).deltas
    assert d[0] > d[1] > d[2]


def test_coin_rate(coin):
    curve = llt_error(coin, [100, 200, 400, 800, 1600, 3200, 6400])
    assert curve.alpha_hat == pytest.approx(1.0, abs=0.15)
    assert curve.alpha_se < 0.05


def test_fit_rate_exact_power():
    ns = [10, 20, 40, 80, 160, 320]
    slope, se = fit_rate(ns, [3 * n**-0.7 for n in ns])
    assert slope == pytest.approx(0.7) and se == pytest.approx(0, abs=1e-12)
    assert math.isnan(fit_rate([10], [0.1])[0])


def test_non_maximal_span_never_evaluated():
    with pytest.raises(NonMaximalSpan):
        llt_error(LatticePmf(0, 1, {0: 0.5, 2: 0.5}), [10])


def test_max_prob_converges(three):
    s = validate(three)
    target = three.D / (math.sqrt(2 * math.pi) * s.sigma)
    errs = [abs(math.sqrt(n) * convolve_n(three, n).probs.max() / target - 1) for n in (100, 1000, 10000)]
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] <= 0.01


def test_fair_coin_pmf_exact():
    assert fair_coin_pmf(4).tolist() == [1 / 16, 4 / 16, 6 / 16, 4 / 16, 1 / 16]
    assert math.fsum(fair_coin_pmf(1000)) == pytest.approx(1.0, abs=1e-14)


def test_bernoulli_llt_n1():
    sup, nsup = bernoulli_llt_error(1)
    assert sup == pytest.approx(abs(0.5 - G0 * math.exp(-0.5)), abs=1e-15)
    assert sup == pytest.approx(0.01606, abs=1e-5)
    assert nsup == sup


def test_bernoulli_llt_symmetric():
    n = 41
    z = np.arange(n + 1)
    g = G0 * np.exp(-((z - n / 2) ** 2) / (n / 2))
    diff = math.sqrt(n) * fair_coin_pmf(n) - g
    assert np.allclose(diff, diff[::-1], atol=1e-15)


def test_bernoulli_llt_order():
    # n*sup settles at the kurtosis term 1/(2 sqrt(2 pi)); it does not vanish
    limit = 1 / (2 * math.sqrt(2 * math.pi))
    vals = [bernoulli_llt_error(n)[1] for n in (100, 1000, 10000)]
    assert all(abs(v / limit - 1) < 2e-3 for v in vals)
    assert abs(vals[2] - limit) < abs(vals[1] - limit) < abs(vals[0] - limit)
