"""Closed-form Fourier symbols of the linearized dynamics.

Everything here is a pointwise multiplier on the (k, eta, alpha) lattice:
the original-frame velocity, the moving-frame transport velocity, the weak
damping coefficient with its exact time integral, and the zero-mode
semigroup.  All functions accept scalars or broadcastable numpy arrays and
assign the excluded (0,0,0) mode the value zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "velocity_symbol",
    "transport_symbol",
    "damping_coeff",
    "damping_integral",
    "semigroup",
    "orr_amplification",
    "SymbolBoundReport",
    "nonzero_mode_decay_bound_check",
]


def _shear_denom(t, k, eta, alpha):
    return k * k + (eta - k * t) ** 2 + alpha * alpha


def velocity_symbol(t, k, eta, alpha):
    """Original-frame velocity multipliers (v1, v2, v3) applied to theta-hat.

    v = (k(eta-kt), -(k^2+alpha^2), (eta-kt)*alpha) / D^2 with
    D = k^2 + (eta-kt)^2 + alpha^2; zero at the mean mode where D = 0.
    """
    k = np.asarray(k, dtype=float)
    eta = np.asarray(eta, dtype=float)
    alpha = np.asarray(alpha, dtype=float)
    k, eta, alpha = np.broadcast_arrays(k, eta, alpha)
    D = _shear_denom(t, k, eta, alpha)
    safe = np.where(D > 0, D, 1.0)
    inv2 = 1.0 / safe**2
    keep = D > 0
    em = eta - k * t
    v1 = np.where(keep, k * em * inv2, 0.0)
    v2 = np.where(keep, -(k * k + alpha * alpha) * inv2, 0.0)
    v3 = np.where(keep, em * alpha * inv2, 0.0)
    return v1, v2, v3


def transport_symbol(t, k, eta, alpha):
    """Moving-frame velocity multipliers (u1, u2, u3) applied to theta-hat.

    For k != 0:  ((t(k^2+a^2) + k(eta-kt)), -(k^2+a^2), (eta-kt)a) / D^2.
    For k = 0:   (t a^2, -a^2, eta*a) / (eta^2+a^2)^2, zero when (eta,a)=(0,0).
    """
    k = np.asarray(k, dtype=float)
    eta = np.asarray(eta, dtype=float)
    alpha = np.asarray(alpha, dtype=float)
    k, eta, alpha = np.broadcast_arrays(k, eta, alpha)
    em = eta - k * t
    D = _shear_denom(t, k, eta, alpha)
    R = eta * eta + alpha * alpha
    nonzero_x = k != 0
    safe_d = np.where(D > 0, D, 1.0)
    safe_r = np.where(R > 0, R, 1.0)
    invd2 = 1.0 / safe_d**2
    invr2 = 1.0 / safe_r**2
    ka = k * k + alpha * alpha

    u1 = np.where(nonzero_x, (t * ka + k * em) * invd2,
                  np.where(R > 0, t * alpha**2 * invr2, 0.0))
    u2 = np.where(nonzero_x, -ka * invd2,
                  np.where(R > 0, -(alpha**2) * invr2, 0.0))
    u3 = np.where(nonzero_x, em * alpha * invd2,
                  np.where(R > 0, eta * alpha * invr2, 0.0))
    return u1, u2, u3


def damping_coeff(t, k, eta, alpha):
    """Linear damping rate (k^2+alpha^2)/D^2, reducing to a^2/(eta^2+a^2)^2 at k=0."""
    k = np.asarray(k, dtype=float)
    eta = np.asarray(eta, dtype=float)
    alpha = np.asarray(alpha, dtype=float)
    k, eta, alpha = np.broadcast_arrays(k, eta, alpha)
    D = _shear_denom(t, k, eta, alpha)
    safe = np.where(D > 0, D, 1.0)
    out = np.where(D > 0, (k * k + alpha * alpha) / safe**2, 0.0)
    return out if out.ndim else float(out)


def _damping_antiderivative(u, b):
    # F(u) = u / (2(b+u^2)) + arctan(u/sqrt(b)) / (2 sqrt(b)), b = k^2 + alpha^2 > 0
    sq = np.sqrt(b)
    return u / (2.0 * (b + u * u)) + np.arctan(u / sq) / (2.0 * sq)


def damping_integral(t0, t1, k, eta, alpha):
    """Exact integral of the damping coefficient over [t0, t1] for k != 0.

    Integrates (k^2+a^2) / ((k^2+a^2) + (eta-k tau)^2)^2 d tau in closed
    form; callers with k = 0 should use the constant-coefficient rate
    directly.
    """
    k = np.asarray(k, dtype=float)
    if np.any(k == 0):
        raise ValueError("damping_integral requires k != 0; the k = 0 rate is constant in time")
    if np.any(np.asarray(t1) < np.asarray(t0)):
        raise ValueError("damping_integral requires t0 <= t1")
    eta = np.asarray(eta, dtype=float)
    alpha = np.asarray(alpha, dtype=float)
    b = k * k + alpha * alpha
    f0 = _damping_antiderivative(eta - k * np.asarray(t0, float), b)
    f1 = _damping_antiderivative(eta - k * np.asarray(t1, float), b)
    out = (f0 - f1) / k
    return out if out.ndim else float(out)


def semigroup(t, eta, alpha):
    """Zero-mode propagator exp(-alpha^2 t / (eta^2+alpha^2)^2)."""
    eta = np.asarray(eta, dtype=float)
    alpha = np.asarray(alpha, dtype=float)
    if np.any((eta == 0) & (alpha == 0)):
        raise ValueError("semigroup is undefined at (eta, alpha) = (0, 0)")
    if np.any(np.asarray(t) < 0):
        raise ValueError("semigroup requires t >= 0")
    R = eta * eta + alpha * alpha
    out = np.exp(-(alpha**2) * np.asarray(t, float) / R**2)
    return out if out.ndim else float(out)


def orr_amplification(k: float, eta: float, alpha: float = 0.0) -> float:
    """Exact peak/initial ratio of |v2| for a k != 0 mode: (D(0)/(k^2+a^2))^2."""
    if k == 0:
        raise ValueError("orr_amplification requires k != 0")
    d0 = k * k + eta * eta + alpha * alpha
    return (d0 / (k * k + alpha * alpha)) ** 2


@dataclass(frozen=True)
class SymbolBoundReport:
    """Smallest uniform constant closing the algebraic decay bounds on a t-grid."""

    constant: float
    c_v1: float
    c_v2: float
    c_v3: float
    c_transport: float
    passed: bool

    def __bool__(self) -> bool:
        return self.passed


def nonzero_mode_decay_bound_check(k: int, eta: float, alpha: float,
                                   t_grid, c_max: float | None = None) -> SymbolBoundReport:
    """Verify the <t>^-3 / <t>^-4 symbol decay bounds for a k != 0 frequency.

    Checks |v1|<t>^3 <= C<f>^3, |v2|<t>^4 <= C<f>^6, |v3|<t>^3 <= C<f>^4 and
    |u|<t>^3 <= C<f>^6 over ``t_grid`` and reports the smallest such C.
    """
    if k == 0:
        raise ValueError("decay bounds only apply to k != 0 modes")
    t = np.asarray(t_grid, dtype=float)
    jt = np.sqrt(1.0 + t * t)
    br = math.sqrt(1.0 + k * k + eta * eta + alpha * alpha)
    em = eta - k * t
    D = k * k + em * em + alpha * alpha
    ka = k * k + alpha * alpha
    v1 = np.abs(k * em) / D**2
    v2 = ka / D**2
    v3 = np.abs(em * alpha) / D**2
    umag = np.sqrt(((t * ka + k * em) ** 2 + ka**2 + (em * alpha) ** 2)) / D**2

    c1 = float(np.max(v1 * jt**3)) / br**3
    c2 = float(np.max(v2 * jt**4)) / br**6
    c3 = float(np.max(v3 * jt**3)) / br**4
    cu = float(np.max(umag * jt**3)) / br**6
    c = max(c1, c2, c3, cu)
    passed = math.isfinite(c) and (c_max is None or c <= c_max)
    return SymbolBoundReport(c, c1, c2, c3, cu, passed)
