"""Exact evolution factors in Fourier space.

Each spatial mode obeys ``d2u/dt2 + h(xi)**2 u = 0``; the solution with
data ``(u0, v0)`` is ``u0 * E0 + v0 * E1`` with the factors below. All
factors carry the Heaviside cut-off, with ``H(0) = 1`` so that evaluating at
``t = 0`` returns the initial data.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .multiplier import FractionalOrder, _as_order, dispersion_symbol

# below this |h t| the sinc is replaced by its two-term series
SINC_GUARD = 1e-8


def _sinc_factor(h, t):
    """``sin(h t) / h`` with the removable value ``t`` at ``h = 0``."""
    ht = h * t
    small = np.abs(ht) < SINC_GUARD
    safe_h = np.where(small, 1.0, h)
    return np.where(small, t * (1.0 - ht**2 / 6.0), np.sin(ht) / safe_h)


def e0_hat(order, xi, t):
    """``cos(h(xi) t) H(t)``."""
    order = _as_order(order)
    h = dispersion_symbol(order, xi)
    t = np.asarray(t, dtype=float)
    return np.where(t >= 0, np.cos(h * t), 0.0)


def e1_hat(order, xi, t):
    """``sin(h(xi) t) / h(xi) H(t)``, equal to ``t`` at ``xi = 0``."""
    order = _as_order(order)
    h = dispersion_symbol(order, xi)
    t = np.asarray(t, dtype=float)
    return np.where(t >= 0, _sinc_factor(h, np.maximum(t, 0.0)), 0.0)


def half_wave_hat(order, xi, t):
    """Symbol of the half-wave propagator, ``exp(i t h(xi))``."""
    order = _as_order(order)
    h = dispersion_symbol(order, xi)
    return np.exp(1j * np.asarray(t, dtype=float) * h)


@dataclass(frozen=True)
class SpectralState:
    """Fourier-side state ``(u_hat, v_hat)`` on a frequency array.

    ``xi`` is stored in discrete-transform order (as produced by
    ``numpy.fft.fftfreq``). ``v_role`` records whether ``v_hat`` holds the
    initial velocity (``"v0"``) or the time derivative of ``u_hat`` at
    ``time`` (``"dt_u"``). For ``time == 0`` the two coincide.

    When ``hermitian`` is set the state represents a real field and
    ``u_hat(-xi) == conj(u_hat(xi))`` is checked on construction.
    """

    xi: np.ndarray
    u_hat: np.ndarray
    v_hat: np.ndarray
    order: FractionalOrder
    time: float = 0.0
    hermitian: bool = False
    v_role: str = "v0"

    def __post_init__(self):
        xi = np.asarray(self.xi, dtype=float)
        u_hat = np.asarray(self.u_hat, dtype=complex)
        v_hat = np.asarray(self.v_hat, dtype=complex)
        if u_hat.shape != xi.shape or v_hat.shape != xi.shape:
            raise ValueError("xi, u_hat and v_hat must share one shape")
        if self.time < 0:
            raise ValueError("state time must be non-negative")
        object.__setattr__(self, "xi", xi)
        object.__setattr__(self, "u_hat", u_hat)
        object.__setattr__(self, "v_hat", v_hat)
        object.__setattr__(self, "order", _as_order(self.order))
        if self.hermitian:
            for arr in (u_hat, v_hat):
                err = hermitian_defect(xi, arr)
                if err > 1e-12 * max(np.abs(arr).max(initial=0.0), 1.0):
                    raise ValueError(f"state is flagged real but not Hermitian (defect {err:.3e})")

    @property
    def h(self):
        return dispersion_symbol(self.order, self.xi)

    def as_initial(self) -> "SpectralState":
        """Re-base this state at ``time = 0`` so it can be evolved again."""
        return replace(self, time=0.0, v_role="v0")


def mirror_index(xi):
    """Index map ``k -> k'`` with ``xi[k'] == -xi[k]``; -1 where absent."""
    xi = np.asarray(xi, dtype=float)
    order = np.argsort(xi)
    sorted_xi = xi[order]
    pos = np.searchsorted(sorted_xi, -xi)
    pos = np.clip(pos, 0, len(xi) - 1)
    spacing = np.min(np.diff(sorted_xi)) if len(xi) > 1 else 1.0
    found = np.abs(sorted_xi[pos] + xi) < 1e-9 * spacing
    return np.where(found, order[pos], -1)


def hermitian_defect(xi, values) -> float:
    """Largest ``|values(-xi) - conj(values(xi))|`` over mirrored pairs."""
    idx = mirror_index(xi)
    have = idx >= 0
    if not have.any():
        return 0.0
    return float(np.max(np.abs(values[idx[have]] - np.conj(values[have]))))


def evolve(state0: SpectralState, t: float) -> SpectralState:
    """Evolve an initial spectral state to time ``t >= 0``.

    Returns a state whose ``v_hat`` is ``du_hat/dt`` at ``t``.
    """
    if state0.time != 0:
        raise ValueError("evolve expects an initial state (time == 0); use as_initial()")
    t = float(t)
    if t < 0:
        raise ValueError("evolve is defined for t >= 0 only; the solution vanishes for t < 0")
    h = state0.h
    cos_ht = np.cos(h * t)
    h_sin = h * np.sin(h * t)
    u_hat = state0.u_hat * cos_ht + state0.v_hat * _sinc_factor(h, t)
    du_hat = -state0.u_hat * h_sin + state0.v_hat * cos_ht
    return replace(state0, u_hat=u_hat, v_hat=du_hat, time=t, v_role="dt_u")
