"""Tabulated Riesz kernel profiles for fast repeated evaluation.

Riesz kernels are homogeneous: in every setting

    K(x, y) = |x y|^{sigma - alpha - 1} G(T),    T = (|x| - |y|)^2 / (4 |x y|),

where ``G`` depends on the sign pattern of ``x y`` only (one profile for the
half-line kernels, two for the Dunkl kernel).  Operators evaluate the kernel
at many thousands of points, so ``G`` is tabulated once per ``(alpha,
sigma)`` as a piecewise Chebyshev interpolant in ``tau = log T``.

In the ``tau`` variable every asymptotic regime of ``G`` is a sum of
exponentials, and the nearest complex singularity of ``G(e^tau)`` lies at
distance ``pi`` from the real axis (``T = -1``).  Panels of width 1 with 16
nodes therefore reproduce the exact kernel to about ``1e-14`` relative.
Outside the tabulated window two-term asymptotic forms are fitted to the
window ends; their neglected terms are below ``e^{-40}`` relative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.polynomial import chebyshev
from scipy import special

from .potentials import _h_large_s, _h_small_s, _model_integral, kernel_values
from .settings import Kind, PotentialParams, Setting

__all__ = ["RieszProfile", "riesz_profile", "fast_kernel_values"]

TAU_LO = -80.0
TAU_HI = 80.0
_NODES = 16
_PANEL = 1.0
_NODE_TOL = 1e-13

# (mode, coefficient of F_0, coefficient of F_inf)
_MODES = {"plain": (0.5, 0.5), "same": (0.25, 0.25), "diff": (0.5, 0.25)}


def _exact_profile(alpha: float, sigma: float, mode: str, lT: np.ndarray) -> np.ndarray:
    c0, cinf = _MODES[mode]
    a0 = sigma - 0.5 if mode == "diff" else sigma - 1.5
    none = np.full(lT.shape, -np.inf)
    f0 = _model_integral(a0, lT, none, _h_small_s(alpha, mode), _NODE_TOL)
    finf = _model_integral(alpha - sigma, none, lT, _h_large_s(alpha, mode), _NODE_TOL)
    lg = -special.gammaln(sigma)
    return c0 * np.exp(lg + f0.log_scale) * f0.mantissa + cinf * np.exp(lg + finf.log_scale) * finf.mantissa


@dataclass(frozen=True)
class RieszProfile:
    """Interpolant of ``G`` for one ``(alpha, sigma, mode)``.

    ``mode`` is ``"plain"`` (half-line kernels), ``"same"`` or ``"diff"``
    (Dunkl kernel for points of equal or opposite sign).
    """

    alpha: float
    sigma: float
    mode: str
    coef: np.ndarray
    logarithmic: bool
    small_exponent: float
    small_coef: tuple[float, float]
    large_coef: float

    def _basis(self, lT):
        e = self.small_exponent
        if e == 0.0:
            return -lT, np.ones_like(lT)
        return np.exp(e * lT), np.ones_like(lT)

    def __call__(self, lT) -> np.ndarray:
        """``G`` at ``T = exp(lT)``; ``lT = -inf`` is the diagonal."""
        lT = np.asarray(lT, dtype=float)
        out = np.empty(lT.shape)
        lo = lT < TAU_LO
        hi = lT > TAU_HI
        mid = ~(lo | hi)
        if mid.any():
            t = lT[mid]
            k = np.minimum(((t - TAU_LO) / _PANEL).astype(int), self.coef.shape[0] - 1)
            u = 2.0 * (t - (TAU_LO + k * _PANEL)) / _PANEL - 1.0
            v = chebyshev.chebval(u, self.coef[k].T, tensor=False)
            out[mid] = np.exp(v) if self.logarithmic else v * self._envelope(t)
        if lo.any():
            t = lT[lo]
            b1, b2 = self._basis(t)
            with np.errstate(over="ignore", invalid="ignore"):
                val = self.small_coef[0] * b1 + self.small_coef[1] * b2
            if self.small_exponent <= 0.0:
                val = np.where(np.isneginf(t), np.inf, val)
            else:
                val = np.where(np.isneginf(t), self.small_coef[1], val)
            out[lo] = val
        if hi.any():
            out[hi] = self.large_coef * np.exp((self.sigma - self.alpha - 1.0) * lT[hi])
        return out

    def _envelope(self, lT):
        return np.exp((self.sigma - self.alpha - 1.0) * np.logaddexp(0.0, lT))


@lru_cache(maxsize=64)
def riesz_profile(alpha: float, sigma: float, mode: str = "plain") -> RieszProfile:
    """Build (and cache) the profile; requires ``0 < sigma < alpha + 1``."""
    if mode not in _MODES:
        raise ValueError(f"unknown profile mode {mode!r}")
    if not 0.0 < sigma < alpha + 1.0:
        raise ValueError("Riesz profiles need 0 < sigma < alpha + 1")
    n_panels = int(round((TAU_HI - TAU_LO) / _PANEL))
    ref = np.cos(np.pi * (np.arange(_NODES) + 0.5) / _NODES)
    left = TAU_LO + _PANEL * np.arange(n_panels)
    taus = left[:, None] + 0.5 * _PANEL * (ref[None, :] + 1.0)
    vals = _exact_profile(alpha, sigma, mode, taus.ravel()).reshape(taus.shape)
    logarithmic = bool(np.all(vals > 0))
    data = np.log(vals) if logarithmic else vals / np.exp((sigma - alpha - 1.0) * np.logaddexp(0.0, taus))
    vander = chebyshev.chebvander(ref, _NODES - 1)
    coef = np.linalg.solve(vander, data.T).T

    small_exponent = sigma + 0.5 if mode == "diff" else sigma - 0.5
    edge = np.array([TAU_LO, TAU_LO + 1.0])
    g_edge = _exact_profile(alpha, sigma, mode, edge)
    if small_exponent == 0.0:
        basis = np.column_stack([-edge, np.ones(2)])
    else:
        basis = np.column_stack([np.exp(small_exponent * edge), np.ones(2)])
    small = np.linalg.solve(basis, g_edge)
    g_hi = _exact_profile(alpha, sigma, mode, np.array([TAU_HI]))[0]
    large = g_hi * math.exp(-(sigma - alpha - 1.0) * TAU_HI)
    coef.setflags(write=False)
    return RieszProfile(
        alpha=float(alpha),
        sigma=float(sigma),
        mode=mode,
        coef=coef,
        logarithmic=logarithmic,
        small_exponent=float(small_exponent),
        small_coef=(float(small[0]), float(small[1])),
        large_coef=float(large),
    )


def fast_kernel_values(setting: Setting | str, params: PotentialParams, x, y, diff=None, tol: float = 1e-10):
    """Kernel values for operator quadrature.

    Riesz kernels with ``sigma < alpha + 1`` and both points off the origin
    use the cached profiles; everything else goes through
    :func:`hankelpot.potentials.kernel_values`.  ``diff = |x| - |y|`` may be
    supplied exactly, as there.
    """
    setting = Setting.parse(setting)
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    if params.kind is not Kind.RIESZ or not params.riesz_finite:
        return kernel_values(setting, params, x, y, tol=tol, diff=diff)[0]
    alpha, sigma = params.alpha, params.sigma
    ax, ay = np.abs(x), np.abs(y)
    d = ax - ay if diff is None else np.broadcast_to(np.asarray(diff, dtype=float), x.shape)
    rho = ax * ay
    out = np.empty(x.shape)
    axis = rho == 0
    if axis.any():
        out[axis] = kernel_values(setting, params, x[axis], y[axis], tol=tol)[0]
    inner = ~axis
    if inner.any():
        lrho = np.log(rho[inner])
        with np.errstate(divide="ignore"):
            lT = 2.0 * np.log(np.abs(d[inner])) - math.log(4.0) - lrho
        pref = (sigma - alpha - 1.0) * lrho
        if setting is Setting.DUNKL:
            same = (x[inner] * y[inner]) > 0
            g = np.empty(lT.shape)
            if same.any():
                g[same] = riesz_profile(alpha, sigma, "same")(lT[same])
            if (~same).any():
                g[~same] = riesz_profile(alpha, sigma, "diff")(lT[~same])
        else:
            g = riesz_profile(alpha, sigma, "plain")(lT)
            if setting is Setting.NONMODIFIED:
                pref = pref + (alpha + 0.5) * lrho
        with np.errstate(over="ignore"):
            out[inner] = np.exp(pref) * g
    return out
