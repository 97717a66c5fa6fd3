"""Figure presets, profile feature extraction and SVG rendering.

The three presets show the regularized delta solution (``a = 0.1``,
``v0 = 0``) for ``alpha`` in 1.5, 2.5 and 2 at six time instants. Features
are extracted on the half line ``x >= 0``, where the right-moving part of
the (even) solution lives: the active set is where ``|u|`` exceeds 5% of
its maximum there.
"""
from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

FIGURE_PRESETS = (("figure1", 1.5), ("figure2", 2.5), ("figure3", 2.0))
DEFAULT_TIMES = (1.0, 5.0, 10.0, 15.0, 20.0, 25.0)
DEFAULT_X = (-10.0, 40.0, 2001)
ACTIVE_FRACTION = 0.05
# reconstructed thresholds for the qualitative checks
LEFT_EDGE_DRIFT = 1.0
# the front has an algebraic precursor, so "bounded" is judged a margin
# beyond the active set: there |u| must stay below half the activity level
TAIL_MARGIN = 5.0
QUIET_TAIL = 0.5 * ACTIVE_FRACTION


def profile_features(x, u, fraction: float = ACTIVE_FRACTION) -> dict:
    x = np.asarray(x, dtype=float)
    u = np.asarray(u, dtype=float)
    half = x >= 0
    xs, us = x[half], np.abs(u[half])
    peak = us.max(initial=0.0)
    active = us > fraction * peak
    dx = float(np.median(np.diff(xs))) if xs.size > 1 else 0.0
    left = float(xs[active].min()) if active.any() else float("nan")
    right = float(xs[active].max()) if active.any() else float("nan")
    beyond = xs > right + TAIL_MARGIN
    tail = float(us[beyond].max(initial=0.0) / peak) if peak > 0 else 0.0
    return {
        "peak": float(peak),
        "peak_x": float(xs[np.argmax(us)]) if xs.size else float("nan"),
        "left_edge": left,
        "right_edge": right,
        "active_measure": float(active.sum() * dx),
        "tail_ratio": tail,
        "x_max": float(xs.max(initial=0.0)),
    }


def _check(name, ok, detail):
    return {"check": name, "passed": bool(ok), "detail": detail}


def figure_checks(features: dict) -> list[dict]:
    """Qualitative checks on ``features[alpha][t]`` dictionaries.

    alpha = 1.5: bounded active region, right edge advancing, peak decreasing.
    alpha = 2.5: left edge drift below 1 over t in [5, 25] and a smaller
    active set than alpha = 1.5 at every common time.
    """
    checks = []
    if 1.5 in features:
        f = features[1.5]
        ts = sorted(f)
        rights = [f[t]["right_edge"] for t in ts]
        peaks = [f[t]["peak"] for t in ts]
        bounded = all(f[t]["tail_ratio"] < QUIET_TAIL and f[t]["right_edge"] < f[t]["x_max"] - TAIL_MARGIN
                      for t in ts)
        checks.append(_check("alpha1.5_bounded_region", bounded,
                             f"tail ratios {[round(f[t]['tail_ratio'], 6) for t in ts]}"))
        checks.append(_check("alpha1.5_right_edge_advances", np.all(np.diff(rights) > 0),
                             f"right edges {np.round(rights, 3).tolist()}"))
        checks.append(_check("alpha1.5_peak_decreases", np.all(np.diff(peaks) < 0),
                             f"peaks {np.round(peaks, 4).tolist()}"))
    if 2.5 in features:
        f = features[2.5]
        late = [t for t in sorted(f) if 5.0 <= t <= 25.0]
        lefts = [f[t]["left_edge"] for t in late]
        drift = float(np.ptp(lefts)) if lefts else float("nan")
        checks.append(_check("alpha2.5_left_edge_fixed", drift <= LEFT_EDGE_DRIFT,
                             f"left edges {np.round(lefts, 3).tolist()} drift {drift:.3f}"))
        if 1.5 in features:
            common = sorted(set(f) & set(features[1.5]))
            narrow = [f[t]["active_measure"] < features[1.5][t]["active_measure"] for t in common]
            checks.append(_check(
                "alpha2.5_narrower_than_alpha1.5", all(narrow) and bool(common),
                f"measures 2.5 {[round(f[t]['active_measure'], 3) for t in common]} vs 1.5 "
                f"{[round(features[1.5][t]['active_measure'], 3) for t in common]}",
            ))
    return checks


def plot_profile(x, u, t: float, alpha: float, path) -> Path:
    """Line plot of one spatial profile, written as SVG."""
    path = Path(path)
    with plt.rc_context({"svg.hashsalt": "fracwave", "svg.fonttype": "none",
                         "font.size": 11, "axes.linewidth": 0.8}):
        fig, ax = plt.subplots(figsize=(6.0, 3.6))
        ax.plot(x, u, color="k", linewidth=0.9)
        ax.axhline(0.0, color="0.7", linewidth=0.5)
        ax.set_xlim(float(np.min(x)), float(np.max(x)))
        ax.set_xlabel("x")
        ax.set_ylabel(r"$u_a(x,t)$")
        ax.set_title(rf"$\alpha={alpha:g}$, $t={t:g}$")
        fig.tight_layout()
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)
    return path
