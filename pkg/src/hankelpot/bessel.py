"""Bessel functions of real order and the derived kernels built from them.

The routines here evaluate

* ``J_alpha`` and the exponentially scaled ``e^{-u} I_alpha(u)``,
* the normalized functions ``phi_alpha(u) = u^{-alpha} J_alpha(u)``,
  ``varphi_alpha(u) = sqrt(u) J_alpha(u)`` and the complex
  ``psi_alpha(u) = (phi_alpha(|u|) + i u phi_{alpha+1}(|u|)) / 2``,
* the Dunkl profile ``Phi_alpha(u) = I_alpha(u)/u^alpha + u I_{alpha+1}(u)/u^{alpha+1}``
  (with ``|u|`` inside the powers, so it is defined on the whole line),

for every real order ``alpha > -1``.

Moderate arguments are delegated to :mod:`scipy.special` (AMOS).  Small
arguments use the ascending series of the normalized forms, which removes
the ``0 * inf`` ambiguity at the origin, and large arguments use the Hankel
asymptotic expansion of ``sqrt(2 pi z) e^{-z} I_nu(z)`` in powers of
``w = 1/z``.  The expansion is also what makes the scaled difference
``e^{-z}(I_alpha(z) - I_{alpha+1}(z))`` computable without cancellation.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import special

__all__ = [
    "check_order",
    "bessel_j",
    "bessel_i_scaled",
    "phi",
    "varphi",
    "psi",
    "phi_i_scaled",
    "i_asym_factor",
    "i_diff_factor",
    "dunkl_profile",
    "dunkl_profile_scaled",
    "asymptotic_threshold",
]

#: Terms kept in the ascending series of the normalized functions.
_SERIES_TERMS = 30
#: Below this argument the normalized functions use the ascending series.
_SERIES_CUTOFF = 1.0
#: Cap on terms of the large-argument expansion.
_ASYM_MAX_TERMS = 80


def check_order(alpha: float) -> float:
    """Validate a Bessel order and return it as a float.

    Raises
    ------
    ValueError
        If ``alpha`` is not finite or ``alpha <= -1``.
    """
    a = float(alpha)
    if not math.isfinite(a) or a <= -1.0:
        raise ValueError(f"Bessel order must satisfy alpha > -1, got {alpha!r}")
    return a


def asymptotic_threshold(nu: float) -> float:
    """Argument above which the large-``z`` expansion of ``I_nu`` is used.

    At ``z >= 20`` the neglected exponentially small part is below ``e^{-40}``
    and the optimally truncated series reaches full double precision for the
    orders used in this package (checked against mpmath in the test-suite).
    """
    return max(20.0, 2.0 * nu * nu)


def _wrap(out: np.ndarray):
    return out[()] if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# ascending series
# ---------------------------------------------------------------------------


def _normalized_series(alpha: float, u: np.ndarray, sign: float) -> np.ndarray:
    """``sum_k sign^k (u/2)^{2k} / (k! Gamma(k+alpha+1)) * 2^{-alpha}``.

    With ``sign=-1`` this is ``u^{-alpha} J_alpha(u)``; with ``sign=+1`` it is
    ``u^{-alpha} I_alpha(u)``.
    """
    q = sign * (0.5 * u) ** 2
    term = np.full_like(u, 2.0**-alpha / special.gamma(alpha + 1.0))
    total = term.copy()
    for k in range(1, _SERIES_TERMS):
        term = term * q / (k * (k + alpha))
        total = total + term
    return total


# ---------------------------------------------------------------------------
# large-argument expansion
# ---------------------------------------------------------------------------


def _asym_coefficients(nu: float, n: int) -> np.ndarray:
    """Coefficients ``c_k = (-1)^k a_k(nu)`` of the expansion in ``w = 1/z``.

    ``sqrt(2 pi z) e^{-z} I_nu(z) ~ sum_k c_k w^k`` with
    ``a_k(nu) = prod_{j<=k} (4 nu^2 - (2j-1)^2) / (k! 8^k)``.
    """
    c = np.empty(n)
    c[0] = 1.0
    mu = 4.0 * nu * nu
    for k in range(1, n):
        c[k] = -c[k - 1] * (mu - (2 * k - 1) ** 2) / (8.0 * k)
    return c


def _asym_sum(coef: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Sum ``sum_k coef_k w^k`` stopping each entry at its smallest term."""
    total = np.zeros_like(w)
    wk = np.ones_like(w)
    prev = np.full_like(w, np.inf)
    active = np.ones(w.shape, dtype=bool)
    for k in range(coef.size):
        term = coef[k] * wk
        mag = np.abs(term)
        # optimal truncation: stop once terms start growing again
        active &= mag <= prev
        total = np.where(active, total + term, total)
        prev = np.where(active, mag, prev)
        active &= mag > 1e-18 * np.abs(total)
        if not active.any():
            break
        wk = wk * w
    return total


# ---------------------------------------------------------------------------
# public evaluators
# ---------------------------------------------------------------------------


def bessel_j(alpha: float, u):
    """Bessel function of the first kind ``J_alpha(u)`` for ``u >= 0``.

    Parameters
    ----------
    alpha : float
        Order, ``alpha > -1``.
    u : array_like
        Nonnegative arguments.

    Returns
    -------
    ndarray or float
        ``J_alpha(u)``.  At ``u = 0`` the value is ``1`` for ``alpha = 0``,
        ``0`` for ``alpha > 0`` and ``+inf`` for ``alpha < 0`` (use
        :func:`phi` for the finite normalized limit).
    """
    alpha = check_order(alpha)
    u = np.asarray(u, dtype=float)
    if np.any(u < 0):
        raise ValueError("bessel_j requires u >= 0")
    with np.errstate(divide="ignore", invalid="ignore"):
        out = special.jv(alpha, u)
    zero = u == 0
    if zero.any():
        out = np.where(zero, 1.0 if alpha == 0 else (0.0 if alpha > 0 else np.inf), out)
    return _wrap(np.asarray(out, dtype=float))


def bessel_i_scaled(alpha: float, u):
    """Exponentially scaled modified Bessel function ``e^{-u} I_alpha(u)``.

    Finite for every ``u > 0`` (no overflow at any magnitude); for large ``u``
    it follows ``(2 pi u)^{-1/2}``.  At ``u = 0`` the value is ``1`` for
    ``alpha = 0``, ``0`` for ``alpha > 0`` and ``+inf`` for ``alpha < 0``.
    """
    alpha = check_order(alpha)
    u = np.asarray(u, dtype=float)
    if np.any(u < 0):
        raise ValueError("bessel_i_scaled requires u >= 0")
    out = np.empty_like(u)
    big = u >= asymptotic_threshold(alpha)
    small = ~big
    if small.any():
        with np.errstate(divide="ignore", invalid="ignore"):
            out[small] = special.ive(alpha, u[small])
    if big.any():
        ub = u[big]
        coef = _asym_coefficients(alpha, _ASYM_MAX_TERMS)
        out[big] = _asym_sum(coef, 1.0 / ub) / np.sqrt(2.0 * np.pi * ub)
    zero = u == 0
    if zero.any():
        out[zero] = 1.0 if alpha == 0 else (0.0 if alpha > 0 else np.inf)
    return _wrap(out)


def phi(alpha: float, u):
    """Normalized Bessel function ``phi_alpha(u) = u^{-alpha} J_alpha(u)``.

    Even in ``u``; ``phi_alpha(0) = 2^{-alpha} / Gamma(alpha + 1)``.
    """
    alpha = check_order(alpha)
    u = np.abs(np.asarray(u, dtype=float))
    out = np.empty_like(u)
    small = u < _SERIES_CUTOFF
    if small.any():
        out[small] = _normalized_series(alpha, u[small], -1.0)
    big = ~small
    if big.any():
        ub = u[big]
        out[big] = special.jv(alpha, ub) * np.exp(-alpha * np.log(ub))
    return _wrap(out)


def varphi(alpha: float, u):
    """``varphi_alpha(u) = sqrt(u) J_alpha(u)`` for ``u >= 0``."""
    alpha = check_order(alpha)
    u = np.asarray(u, dtype=float)
    if np.any(u < 0):
        raise ValueError("varphi requires u >= 0")
    val = np.asarray(phi(alpha, u))
    pos = u > 0
    out = np.empty_like(u)
    out[pos] = np.exp((alpha + 0.5) * np.log(u[pos])) * val[pos]
    if alpha > -0.5:
        out[~pos] = 0.0
    elif alpha == -0.5:
        out[~pos] = val[~pos]
    else:
        out[~pos] = np.inf
    return _wrap(out)


def psi(alpha: float, u):
    """Hankel-Dunkl kernel ``psi_alpha(u) = (phi_alpha(|u|) + i u phi_{alpha+1}(|u|)) / 2``.

    ``psi_alpha(0) = 2^{-alpha-1} / Gamma(alpha + 1)``.
    """
    alpha = check_order(alpha)
    u = np.asarray(u, dtype=float)
    au = np.abs(u)
    out = 0.5 * (np.asarray(phi(alpha, au)) + 1j * u * np.asarray(phi(alpha + 1.0, au)))
    return _wrap(np.asarray(out, dtype=complex))


def phi_i_scaled(alpha: float, u):
    """``u^{-alpha} e^{-u} I_alpha(u)`` for ``u >= 0``, finite at the origin.

    This is the scaled product that appears in every heat kernel; its value
    at ``u = 0`` is ``2^{-alpha} / Gamma(alpha + 1)``.
    """
    alpha = check_order(alpha)
    u = np.asarray(u, dtype=float)
    out = np.empty_like(u)
    small = u < _SERIES_CUTOFF
    if small.any():
        us = u[small]
        out[small] = np.exp(-us) * _normalized_series(alpha, us, 1.0)
    big = ~small
    if big.any():
        ub = u[big]
        out[big] = np.asarray(bessel_i_scaled(alpha, ub)) * np.exp(-alpha * np.log(ub))
    return _wrap(out)


def i_asym_factor(alpha: float, w):
    """``sqrt(2 pi z) e^{-z} I_alpha(z)`` as a function of ``w = 1/z``.

    Tends to ``1`` as ``w -> 0``; defined for ``w >= 0`` with ``w = 0``
    meaning ``z = inf``.
    """
    alpha = check_order(alpha)
    w = np.asarray(w, dtype=float)
    out = np.empty_like(w)
    near = w <= 1.0 / asymptotic_threshold(alpha)
    if near.any():
        out[near] = _asym_sum(_asym_coefficients(alpha, _ASYM_MAX_TERMS), w[near])
    far = ~near
    if far.any():
        z = 1.0 / w[far]
        out[far] = np.sqrt(2.0 * np.pi * z) * special.ive(alpha, z)
    return _wrap(out)


def i_diff_factor(alpha: float, w):
    """Scaled difference ``sqrt(2 pi z) z e^{-z} (I_alpha(z) - I_{alpha+1}(z))``.

    Expressed through ``w = 1/z``.  The limit at ``w = 0`` is
    ``alpha + 1/2``.  For small ``w`` the two expansions are subtracted
    coefficient by coefficient so that no cancellation occurs.
    """
    alpha = check_order(alpha)
    w = np.asarray(w, dtype=float)
    out = np.empty_like(w)
    near = w <= 1.0 / asymptotic_threshold(alpha + 1.0)
    if near.any():
        n = _ASYM_MAX_TERMS
        d = _asym_coefficients(alpha, n + 1) - _asym_coefficients(alpha + 1.0, n + 1)
        out[near] = _asym_sum(d[1:], w[near])
    far = ~near
    if far.any():
        z = 1.0 / w[far]
        diff = special.ive(alpha, z) - special.ive(alpha + 1.0, z)
        out[far] = np.sqrt(2.0 * np.pi * z) * z * diff
    return _wrap(out)


def dunkl_profile_scaled(alpha: float, u):
    """``e^{-|u|} Phi_alpha(u)`` for real ``u``.

    For ``u >= 0`` this is ``|u|^{-alpha} e^{-|u|}(I_alpha + I_{alpha+1})(|u|)``;
    for ``u < 0`` the second term enters with a minus sign.  The negative
    branch switches to :func:`i_diff_factor` for large ``|u|`` so that the
    difference keeps full relative accuracy.
    """
    alpha = check_order(alpha)
    u = np.asarray(u, dtype=float)
    au = np.abs(u)
    if alpha == -0.5:
        # every term of the asymptotic difference vanishes; the closed form
        # keeps the exponentially small value for negative u
        return _wrap(np.sqrt(2.0 / np.pi) * np.exp(u - au))
    p0 = np.asarray(phi_i_scaled(alpha, au), dtype=float)
    p1 = np.asarray(phi_i_scaled(alpha + 1.0, au), dtype=float)
    out = np.where(u >= 0, p0 + au * p1, p0 - au * p1)
    neg_big = (u < 0) & (au >= asymptotic_threshold(alpha + 1.0))
    if neg_big.any():
        z = au[neg_big]
        w = 1.0 / z
        d = np.asarray(i_diff_factor(alpha, w))
        # |u|^{-alpha} (2 pi z)^{-1/2} w d
        out[neg_big] = np.exp(-alpha * np.log(z)) * w * d / np.sqrt(2.0 * np.pi * z)
    return _wrap(np.asarray(out, dtype=float))


def dunkl_profile(alpha: float, u):
    """Dunkl profile ``Phi_alpha(u)``; equals ``sqrt(2/pi) e^u`` at ``alpha = -1/2``.

    Overflows to ``inf`` for ``|u|`` beyond roughly 700; use
    :func:`dunkl_profile_scaled` when the exponential factor is combined
    with others.
    """
    u = np.asarray(u, dtype=float)
    with np.errstate(over="ignore"):
        out = np.asarray(dunkl_profile_scaled(alpha, u)) * np.exp(np.abs(u))
    return _wrap(np.asarray(out, dtype=float))
