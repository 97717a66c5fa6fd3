import numpy as np

from fracwave.figures import figure_checks, plot_profile, profile_features


def _bump(x, center, width, height):
    return height * np.exp(-(((x - center) / width) ** 2))


def test_features_of_a_bump():
    x = np.linspace(-10, 40, 5001)
    f = profile_features(x, _bump(x, 10.0, 1.0, 2.0))
    assert f["peak"] == 2.0 and f["peak_x"] == 10.0
    half = np.sqrt(np.log(20.0))
    assert abs(f["left_edge"] - (10 - half)) < 0.02
    assert abs(f["right_edge"] - (10 + half)) < 0.02
    assert abs(f["active_measure"] - 2 * half) < 0.03
    assert f["tail_ratio"] < 1e-10


def test_features_ignore_negative_half_line():
    x = np.linspace(-10, 10, 2001)
    f = profile_features(x, _bump(x, -5.0, 0.5, 10.0) + _bump(x, 5.0, 0.5, 1.0))
    assert f["peak"] == 1.0


def _synthetic(alpha, t):
    x = np.linspace(-10, 40, 2001)
    if alpha == 1.5:
        u = _bump(x, t / 2, t / 2 + 1, 2.0 / (1 + 0.1 * t))
    else:
        u = _bump(x, 0.0, 0.5, 1.0)
    return profile_features(x, u)


def test_checks_pass_on_expected_shapes():
    feats = {a: {t: _synthetic(a, t) for t in (1.0, 5.0, 10.0)} for a in (1.5, 2.5)}
    checks = {c["check"]: c["passed"] for c in figure_checks(feats)}
    assert checks == {
        "alpha1.5_bounded_region": True,
        "alpha1.5_right_edge_advances": True,
        "alpha1.5_peak_decreases": True,
        "alpha2.5_left_edge_fixed": True,
        "alpha2.5_narrower_than_alpha1.5": True,
    }


def test_checks_fail_on_growing_peak():
    x = np.linspace(-10, 40, 2001)
    feats = {1.5: {t: profile_features(x, _bump(x, t, 1.0, t)) for t in (1.0, 2.0)}}
    checks = {c["check"]: c["passed"] for c in figure_checks(feats)}
    assert checks["alpha1.5_peak_decreases"] is False


def test_svg_is_deterministic(tmp_path):
    x = np.linspace(-10, 40, 201)
    u = _bump(x, 5.0, 1.0, 1.0)
    a = plot_profile(x, u, 5.0, 2.0, tmp_path / "a.svg").read_bytes()
    b = plot_profile(x, u, 5.0, 2.0, tmp_path / "b.svg").read_bytes()
    assert a == b and a.lstrip().startswith(b"<?xml")
