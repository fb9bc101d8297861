import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sdschwarz import (
    PhysicalParams,
    RobinParams,
    frequency_band,
    optimal_alphas,
    rho,
    rho1,
    rho2,
    rho_simplified,
    sweep_reduction_factor,
)
from sdschwarz.cases import TABLE1_H, TABLE2, TEST2_N1BL, test1_params
from sdschwarz.symbol import half_sum_coefficient, rho_on_search_curve, write_sweep_csv

P = PhysicalParams(1e-3, 4e-3, 0.05, 0.2, 0.01)
R = RobinParams(30.0, 60.0)


def table_param_sets():
    out = []
    for h in TABLE1_H:
        out.append((test1_params(), frequency_band(1.0, h, "quarter_h")))
    for kappa, eps, m11, *_ in TABLE2:
        out.append((PhysicalParams.isotropic(kappa, eps, TEST2_N1BL, m11),
                    frequency_band(1.0, 0.0125, "half_h")))
    return out


def test_rho1_zeros():
    s = P.kappa_geo
    k = 7.0
    assert rho1(P, RobinParams(1 / (s * k), 5.0), k) == pytest.approx(0, abs=1e-15)
    t = P.epsilon * P.n1bl * k
    a_pm = k * (2 + 3 * t) / (1 + 2 * t)
    assert rho1(P, RobinParams(5.0, a_pm), k) == pytest.approx(0, abs=1e-14)


def test_rho1_small_epsilon_limit():
    p = PhysicalParams(1e-3, 1e-3, 1e-12, 0.3, 0.0)
    k = np.array([1.0, 10.0, 100.0])
    s = p.kappa_geo
    a, b = R.alpha_ff, R.alpha_pm
    lim = (1 - a * s * k) * (-b + 2 * k) / ((1 + b * s * k) * (a + 2 * k))
    assert np.allclose(rho1(p, R, k), lim, rtol=1e-9)


def test_rho2_properties():
    k = np.geomspace(0.1, 1e3, 50)
    assert np.all(rho2(P, R, k) > 0)
    p0 = PhysicalParams(1e-3, 4e-3, 0.05, 0.2, 0.0)
    assert np.all(rho2(p0, R, k) == 0)
    assert np.allclose(rho(p0, R, k), np.abs(rho1(p0, R, k)))
    # quadratic decay at small k
    r = rho2(P, R, np.array([1e-4, 2e-4]))
    assert r[1] / r[0] == pytest.approx(4.0, rel=1e-3)


def test_zero_frequency_rejected():
    with pytest.raises(ValueError):
        rho(P, R, 0.0)


@settings(max_examples=50, deadline=None)
@given(k=st.floats(1e-2, 1e4), a=st.floats(1e-2, 1e5), b=st.floats(1e-2, 1e5))
def test_rho_is_even_in_k(k, a, b):
    r = RobinParams(a, b)
    assert rho(P, r, k) == rho(P, r, -k)


def test_rho_simplified_zero_and_search_curve():
    s = P.kappa_geo
    k = np.linspace(1.0, 200.0, 30)
    assert rho_simplified(P, RobinParams(1 / (s * 3.0), 2.0), 3.0) == pytest.approx(0, abs=1e-15)
    a_ff = 40.0
    on_curve = RobinParams(a_ff, 2 / (s * a_ff))
    expected = (2 / s) * ((1 - a_ff * s * k) / (a_ff + 2 * k)) ** 2
    # the signed factor is minus a square on this curve
    assert np.allclose(rho_simplified(P, on_curve, k), -expected, rtol=1e-12)
    assert np.allclose(rho_on_search_curve(s, a_ff, k), expected, rtol=1e-12)


@pytest.mark.parametrize(
    "kappa,expected",
    [(1e-2, (9.33, 21.4)), (1e-3, (40.7, 49.2)), (1e-5, (678, 295)), (1e-7, (4.00e4, 500))],
)
def test_optimal_alphas_reference_values(kappa, expected):
    p = PhysicalParams.isotropic(kappa, 1e-2, 1e-2, 1e-4)
    o = optimal_alphas(p, frequency_band(1.0, 0.0125, "half_h"))
    assert float(f"{o.alpha_ff_star:.3g}") == pytest.approx(expected[0])
    assert float(f"{o.alpha_pm_star:.3g}") == pytest.approx(expected[1])


def test_optimal_alphas_quarter_h_first_row():
    o = optimal_alphas(test1_params(), frequency_band(1.0, 2.0**-3, "quarter_h"))
    assert (round(o.alpha_ff_star, -1), round(o.alpha_pm_star, 1)) == (260.0, 77.5)


@pytest.mark.parametrize("idx", range(13))
def test_optimal_alphas_identities(idx):
    params, band = table_param_sets()[idx]
    o = optimal_alphas(params, band)
    s = params.kappa_geo
    b = half_sum_coefficient(s, band)
    assert o.alpha_ff_star * o.alpha_pm_star == pytest.approx(2 / s, rel=1e-12)
    diff = 2 * (2 * s * band.k_min * band.k_max - 1) / (s * (band.k_min + band.k_max))
    assert o.alpha_pm_star - o.alpha_ff_star == pytest.approx(diff, rel=1e-12)
    for a in (o.alpha_ff_star, -o.alpha_pm_star):  # the two roots of the quadratic
        assert abs(a * a + 2 * b * a - 2 / s) <= 1e-10 * (2 / s)
    lo = rho_on_search_curve(s, o.alpha_ff_star, band.k_min)
    hi = rho_on_search_curve(s, o.alpha_ff_star, band.k_max)
    assert abs(lo - hi) <= 1e-10 * lo
    k = np.linspace(band.k_min, band.k_max, 1000)
    rt = np.abs(rho_simplified(params, o.robin, k))
    assert rt.max() < 1
    assert rt.max() <= max(rt[0], rt[-1]) * (1 + 1e-12)
    assert o.max_rho_tilde == pytest.approx(lo)


def test_optimal_alphas_stable_for_tiny_permeability():
    # b + sqrt(b^2 + c) cancels for large negative b; alpha_pm -> k_min + k_max
    p = PhysicalParams.isotropic(1e-12, 1e-2, 1e-2, 1e-4)
    band = frequency_band(1.0, 0.0125, "half_h")
    o = optimal_alphas(p, band)
    assert o.alpha_ff_star * o.alpha_pm_star == pytest.approx(2e12, rel=1e-12)
    assert o.alpha_pm_star == pytest.approx(band.k_min + band.k_max, rel=1e-6)


def test_sweep_table_shape_and_csv(tmp_path):
    band = frequency_band(1.0, 0.0125, "half_h")
    t = sweep_reduction_factor(P, R, band, 11)
    assert set(t) == {"k", "rho", "rho_tilde", "rho1", "rho2"}
    assert t["k"][0] == band.k_min and t["k"][-1] == pytest.approx(band.k_max)
    assert np.allclose(t["rho"], np.abs(t["rho1"] - t["rho2"]))
    tl = sweep_reduction_factor(P, R, band, 11, log=True)
    assert tl["k"][1] / tl["k"][0] == pytest.approx(tl["k"][2] / tl["k"][1])
    write_sweep_csv(tmp_path / "s.csv", t)
    data = np.loadtxt(tmp_path / "s.csv", delimiter=",", skiprows=1)
    assert data.shape == (11, 5)
    with pytest.raises(ValueError):
        sweep_reduction_factor(P, R, band, 1)


def test_sweep_gap_bounded_by_rho2_and_rational_factor():
    kappa, eps, m11, *_ = TABLE2[1]
    p = PhysicalParams.isotropic(kappa, eps, TEST2_N1BL, m11)
    band = frequency_band(1.0, 0.0125, "half_h")
    o = optimal_alphas(p, band)
    t = sweep_reduction_factor(p, o.robin, band, 1000)
    rational_gap = np.abs(t["rho1"] - rho_simplified(p, o.robin, t["k"]))
    assert np.all(np.abs(t["rho"] - t["rho_tilde"]) <= rational_gap + np.abs(t["rho2"]) + 1e-15)
