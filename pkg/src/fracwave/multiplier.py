"""Fourier symbols of the fractional Eringen model.

Every operator in the model is a Fourier multiplier in the space variable.
This module evaluates those symbols pointwise (scalars or numpy arrays) and
maps physical quantities to the dimensionless variables used everywhere
else in the package.

The central object is the dispersion symbol

.. math::

    h_\\alpha(\\xi) = \\frac{|\\xi|}{\\sqrt{1 + a_\\alpha |\\xi|^\\alpha}},
    \\qquad a_\\alpha = -\\cos(\\alpha\\pi/2),

which is the angular frequency of the spatial Fourier mode ``xi``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class FractionalOrder:
    """Order ``alpha`` of the fractional derivative, restricted to (1, 3).

    The nonlocality coefficient ``a_alpha`` is derived on construction.
    """

    alpha: float
    a_alpha: float = field(init=False, repr=False)

    def __post_init__(self):
        alpha = float(self.alpha)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "a_alpha", nonlocality_coefficient(alpha))


@dataclass(frozen=True)
class PhysicalParams:
    """Nonlocality length ``ell``, elastic modulus ``E`` and density ``rho``."""

    ell: float
    E: float
    rho: float

    def __post_init__(self):
        for name in ("ell", "E", "rho"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be strictly positive, got {value!r}")


@dataclass(frozen=True)
class DispersionCurve:
    """Dispersion relation sampled on a frequency array.

    ``group_velocity`` is the derivative of ``omega`` with respect to
    ``|xi|``, hence even in ``xi`` like the other columns.
    """

    xi: np.ndarray
    omega: np.ndarray
    phase_velocity: np.ndarray
    group_velocity: np.ndarray

    COLUMNS = ("xi", "omega", "phase_velocity", "group_velocity")

    def columns(self):
        return [getattr(self, name) for name in self.COLUMNS]


def _as_order(order) -> FractionalOrder:
    if isinstance(order, FractionalOrder):
        return order
    return FractionalOrder(order)


def nonlocality_coefficient(alpha: float) -> float:
    """Return ``a_alpha = -cos(alpha*pi/2)``.

    Raises
    ------
    ValueError
        If ``alpha`` is not strictly inside (1, 3).
    """
    alpha = float(alpha)
    if not (1.0 < alpha < 3.0):
        raise ValueError(
            f"fractional order alpha must lie in the open interval (1, 3), got {alpha!r}"
        )
    return -math.cos(alpha * math.pi / 2.0)


def _denominator(order: FractionalOrder, xi):
    """``1 + a_alpha |xi|^alpha``; appears in nearly every symbol."""
    return 1.0 + order.a_alpha * np.abs(xi) ** order.alpha


def dispersion_symbol(order, xi):
    """Evaluate ``h_alpha(xi) = |xi| / sqrt(1 + a_alpha |xi|^alpha)``."""
    order = _as_order(order)
    xi = np.asarray(xi, dtype=float)
    return np.abs(xi) / np.sqrt(_denominator(order, xi))


def auxiliary_symbols(order, xi, tau=0.0):
    """Return ``(p, g, d_frac)`` at ``(xi, tau)``.

    ``p = -tau**2 + h_alpha(xi)**2`` is the symbol of the wave operator,
    ``g = i sgn(xi) sqrt(1 + a_alpha |xi|^alpha)`` satisfies ``g * h = i xi``
    (with ``sgn(0) = 0``), and ``d_frac = |xi|^alpha cos(alpha pi/2)`` is the
    symbol of the fractional derivative.
    """
    order = _as_order(order)
    xi = np.asarray(xi, dtype=float)
    tau = np.asarray(tau, dtype=float)
    h = dispersion_symbol(order, xi)
    p = -(tau**2) + h**2
    g = 1j * np.sign(xi) * np.sqrt(_denominator(order, xi))
    d_frac = np.abs(xi) ** order.alpha * math.cos(order.alpha * math.pi / 2.0)
    return p, g, d_frac


def fractional_derivative_symbol(order, xi):
    order = _as_order(order)
    return auxiliary_symbols(order, xi)[2]


def velocities(order, xi):
    """Phase and group velocity of mode ``xi``.

    Both are even in ``xi`` and equal 1 at ``xi = 0``. The group velocity is
    the closed-form derivative of ``h_alpha`` with respect to ``|xi|``::

        (1 + a (1 - alpha/2) |xi|^alpha) * (1 + a |xi|^alpha) ** -1.5
    """
    order = _as_order(order)
    xi = np.asarray(xi, dtype=float)
    den = _denominator(order, xi)
    phase = 1.0 / np.sqrt(den)
    power = order.a_alpha * np.abs(xi) ** order.alpha
    group = (1.0 + (1.0 - order.alpha / 2.0) * power) * den**-1.5
    return phase, group


def dispersion_curve(order, xi) -> DispersionCurve:
    order = _as_order(order)
    xi = np.asarray(xi, dtype=float)
    phase, group = velocities(order, xi)
    return DispersionCurve(
        xi=xi,
        omega=dispersion_symbol(order, xi),
        phase_velocity=phase,
        group_velocity=group,
    )


def nondimensionalize(params: PhysicalParams, x, t, u, sigma):
    """Map physical ``(x, t, u, sigma)`` to the dimensionless variables.

    Returns ``(x/ell, t/ell*sqrt(E/rho), u/ell, sigma/E)``.
    """
    if not isinstance(params, PhysicalParams):
        params = PhysicalParams(*params)
    speed = math.sqrt(params.E / params.rho)
    return (
        np.asarray(x, dtype=float) / params.ell,
        np.asarray(t, dtype=float) / params.ell * speed,
        np.asarray(u, dtype=float) / params.ell,
        np.asarray(sigma, dtype=float) / params.E,
    )
