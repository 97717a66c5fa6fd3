import math

import numpy as np
import pytest
from scipy import integrate

from fracwave.analysis import (
    ResidualReport,
    decay_probe,
    dyadic_bands,
    fit_decay,
    gaussian_window,
    mode_energy_residual,
    operator_residuals,
    regularity_check,
    singularity_map,
    sobolev_norm,
    time_divided_differences,
)
from fracwave.propagator import SpectralState
from fracwave.spectral import InitialData, Profile, gaussian_delta, make_grid, sample_initial

MIXED = InitialData(Profile.gaussian(0.1), Profile.gaussian(0.3))


def test_sobolev_zero_state(small_grid):
    assert sobolev_norm((small_grid.xi, np.zeros(small_grid.n)), 1.0) == 0.0


def test_sobolev_band_example(fine_grid):
    xi = fine_grid.xi
    band = (np.abs(xi) <= 1.0).astype(complex)
    value = sobolev_norm((xi, band), 0.0)
    riemann = math.sqrt(band.real.sum() * fine_grid.dxi / (2 * math.pi))
    assert value == pytest.approx(riemann, rel=1e-14)
    assert value == pytest.approx(math.sqrt(1 / math.pi), rel=fine_grid.dxi)


@pytest.mark.parametrize("s", [-0.6, 0.0, 1.0])
def test_sobolev_gaussian_matches_quadrature(fine_grid, s):
    a = 0.1
    state = sample_initial(InitialData.gaussian(a), fine_grid, 2.0)
    oracle = math.sqrt(integrate.quad(lambda x: (1 + x * x) ** s * math.exp(-a * a * x * x / 2),
                                      -np.inf, np.inf, epsabs=1e-13, epsrel=1e-13)[0] / (2 * math.pi))
    assert sobolev_norm(state, s) == pytest.approx(oracle, rel=1e-10)
    if s == 0.0:
        assert oracle == pytest.approx((1 / (a * math.sqrt(2 * math.pi))) ** 0.5, rel=1e-12)


def test_parseval_against_spatial_sum(small_grid):
    u = gaussian_delta(small_grid.x - 3.0, 0.4) - 0.5 * gaussian_delta(small_grid.x + 2.0, 0.7)
    spectral = sobolev_norm((small_grid.xi, small_grid.forward(u)), 0.0)
    assert spectral == pytest.approx(math.sqrt((u**2).sum() * small_grid.dx), rel=1e-12)


def test_sobolev_velocity_component(small_grid):
    state = sample_initial(MIXED, small_grid, 2.0)
    assert sobolev_norm(state, 0.0, component="v") == pytest.approx(
        sobolev_norm((state.xi, state.v_hat), 0.0))


@pytest.mark.parametrize("s", [-0.6, 0.0, 1.0])
def test_regularity_bound_mixed_data(fine_grid, s):
    report = regularity_check(MIXED, 2.5, s, np.linspace(0, 25, 26), fine_grid)
    assert report.passed
    assert report.sup_residual == 0.0
    assert report.meta["violations"] == []


def test_point_mass_norms_bounded(fine_grid):
    data = InitialData(Profile.delta())
    report = regularity_check(data, 2.5, -0.6, np.linspace(0.1, 25, 50), fine_grid)
    norms = report.meta["norms"]
    assert report.passed
    assert np.all(np.isfinite(norms))
    assert norms.max() <= report.meta["norm_u0"] * (1 + 1e-12)


def test_residual_report_rejects_negative():
    with pytest.raises(ValueError):
        ResidualReport("x", -1.0, np.zeros(1), np.zeros(1))


@pytest.mark.parametrize("alpha", [1.5, 2.0, 2.5])
def test_mode_energy_conserved(fine_grid, alpha):
    state = sample_initial(MIXED, fine_grid, alpha)
    report = mode_energy_residual(state, [0.5, 5.0, 25.0])
    assert report.sup_residual < 1e-12
    assert report.passed


def test_mode_energy_needs_initial_state(small_grid):
    xi = small_grid.xi
    state = SpectralState(xi, np.ones(xi.size), np.zeros(xi.size), 2.0, time=1.0, v_role="dt_u")
    with pytest.raises(ValueError):
        mode_energy_residual(state, [1.0])


def test_operator_residuals(fine_grid):
    reports = operator_residuals(InitialData.gaussian(0.1), 2.0, fine_grid, [0.99, 1.0, 1.01])
    assert set(reports) == {"Y", "P", "Ybar"}
    assert reports["P"].sup_residual < 1e-10 and reports["P"].passed
    assert reports["Ybar"].passed
    finer = operator_residuals(InitialData.gaussian(0.1), 2.0, fine_grid, [0.995, 1.0, 1.005])
    assert reports["Y"].sup_residual / finer["Y"].sup_residual == pytest.approx(4.0, rel=0.05)


def test_operator_residuals_need_uniform_times(small_grid):
    with pytest.raises(ValueError):
        operator_residuals(InitialData.gaussian(0.5), 2.0, small_grid, [1.0, 2.0])
    with pytest.raises(ValueError):
        operator_residuals(InitialData.gaussian(0.5), 2.0, small_grid, [1.0, 2.0, 4.0])


def test_divided_differences_bounded(fine_grid):
    table = time_divided_differences(2.5, 0.1, 3.0, 5.0, [0.1, 0.05, 0.025, 0.0125], fine_grid)
    assert table.shape == (4, 3)
    assert np.all(np.isfinite(table))
    # consecutive refinements change each order by a vanishing amount
    change = np.abs(np.diff(table, axis=0))
    assert np.all(change[-1] <= change[0] + 1e-12)
    assert np.all(np.abs(table) < 1e3)


def test_window_and_bands():
    x = np.linspace(-10, 10, 2001)
    w = gaussian_window(x, 1.0, 1.0)
    assert w.max() == pytest.approx(1.0) and w[0] == 0.0
    with pytest.raises(ValueError):
        gaussian_window(x, 0.0, 0.0)
    xi = np.linspace(-40, 40, 801)
    with np.errstate(divide="ignore"):
        bands = dyadic_bands(xi, np.abs(xi) ** -2.0, upper=32.0)
    assert bands[:, 0].tolist() == [1.0, 2.0, 4.0, 8.0, 16.0]
    slope, quality = fit_decay(bands)
    assert slope == pytest.approx(-2.0, abs=1e-12) and quality == pytest.approx(1.0)


def test_fit_ignores_floor():
    bands = np.array([[1.0, 1.0], [2.0, 0.25], [4.0, 1e-20]])
    assert fit_decay(bands)[0] == pytest.approx(-2.0)
    slope, quality = fit_decay(np.array([[1.0, 1e-20], [2.0, 1e-21]]))
    assert math.isnan(slope) and quality == 0.0


def test_probe_separates_singular_point():
    at0 = decay_probe(2.5, 0.02, 0.0, 5.0)
    at3 = decay_probe(2.5, 0.02, 3.0, 5.0)
    assert at0.fitted_exponent - at3.fitted_exponent >= 2
    assert at3.reliable and at3.theory_backed
    assert at0.meta["window"] == "gaussian"


def test_probe_rejects_bad_arguments():
    with pytest.raises(ValueError, match="width"):
        decay_probe(2.0, 0.1, 0.0, 5.0, width=0.0)
    with pytest.raises(ValueError):
        decay_probe(2.0, 0.1, 0.0, 5.0, window="hann")
    with pytest.raises(ValueError):
        decay_probe(2.0, 0.1, 0.0, 0.0)


def test_probe_flags_truncated_spectrum():
    assert decay_probe(2.0, 0.02, 3.0, 5.0).meta["truncated_spectrum"]
    assert not decay_probe(2.0, 0.1, 3.0, 5.0).meta["truncated_spectrum"]


def test_singularity_map_alpha_two_late_time():
    smap = singularity_map(2.0, 10.0, [0.1, 0.05, 0.02], [0.0, 2.0, 3.0, 5.0])
    verdicts = {v["prediction"]: v["status"] for v in smap.verdicts}
    assert verdicts["smooth_stability"] == "pass"
    assert verdicts["separation"] == "pass"
    assert smap.exponents.shape == (3, 4)


def test_alpha_maps_share_classification():
    # column-wise singular/smooth pattern agrees; magnitudes shift everywhere
    lo = singularity_map(2.0, 5.0, [0.05], [0.0, 3.0, 5.0]).exponents[0]
    hi = singularity_map(2.5, 5.0, [0.05], [0.0, 3.0, 5.0]).exponents[0]
    assert np.array_equal(lo > -2, hi > -2)
    assert (lo > -2).tolist() == [True, False, False]


def test_singularity_map_marks_missing_theory():
    smap = singularity_map(1.5, 5.0, [0.1], [0.0, 3.0])
    assert all("no theory backing" in v["detail"] for v in smap.verdicts)
