"""Riesz and Bessel potential kernels in the three settings.

Every kernel is an integral over ``t > 0`` of a heat kernel against
``t^{sigma-1}`` (times ``e^{-t}`` for Bessel potentials).  Writing
``t = x y s`` and splitting at ``s = 1`` turns it into two integrals of the
model form

    F = int_0^1 s^A exp(-P/s - Q s) h(s) ds

with a smooth bounded ``h``.  With ``T = (x - y)^2 / (4 x y)`` and
``lambda = 0`` (Riesz) or ``1`` (Bessel) the pieces are

* ``s <= 1``:  ``A = sigma - 3/2``, ``P = T``, ``Q = lambda x y``,
  ``h(s) = sqrt(2 pi z) e^{-z} I_alpha(z) / sqrt(pi)`` with ``z = 1/(2s)``;
* ``s >= 1`` (``v = 1/s``): ``A = alpha - sigma``, ``P = lambda x y``,
  ``Q = T``, ``h(v) = 2^{-alpha} (v/2)^{-alpha} e^{-v/2} I_alpha(v/2)``,

and ``K = (x y)^{sigma - alpha - 1} / (2 Gamma(sigma)) (F_0 + F_inf)``.
``F`` diverges exactly when ``P = 0`` and ``A <= -1``; this decides all
infinite values analytically.

``F`` itself is computed in the variable ``s = e^{-tau}``.  There the
exponent ``l(tau) = -(A+1) tau - P e^tau - Q e^{-tau}`` is concave, so its
maximizer is known in closed form and the region where the integrand is
within ``e^{-46}`` of its peak is located by bisection.  That region is cut
at the peak and at the ``e^{-4}`` level on either side, and each piece is
handled by tanh-sinh quadrature (see :mod:`hankelpot.quadrature`).  All
arguments enter through logarithms, so ``T`` as small as ``1e-600`` (points
closer than any float spacing, supplied via an exact difference) is fine.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import special

from . import bessel
from .quadrature import integrate
from .settings import ExtValue, Kind, PotentialParams, Setting

__all__ = [
    "EArgs",
    "e_a",
    "e_a_envelope",
    "potential_kernel",
    "kernel_values",
    "riesz_c",
    "DEFAULT_TOL",
]

DEFAULT_TOL = 1e-8
#: The integrand is neglected once it is ``e^{-_CUT}`` below its peak.
_CUT = 46.0
#: Level (below the peak) of the two inner breakpoints.
_INNER = 4.0
_SQRT_PI = math.sqrt(math.pi)

HFunc = Callable[[np.ndarray], np.ndarray]


# ---------------------------------------------------------------------------
# the model integral
# ---------------------------------------------------------------------------


def _ell(tau, a1, lp, lq):
    with np.errstate(over="ignore"):
        return -a1 * tau - np.exp(lp + tau) - np.exp(lq - tau)


def _log1p_sqrt1p(lr):
    """``log(1 + sqrt(1 + e^{lr}))`` without overflow."""
    lr = np.asarray(lr, dtype=float)
    out = np.empty_like(lr)
    big = lr > 0
    with np.errstate(over="ignore"):
        r = np.exp(np.where(big, -lr, lr))
    out[~big] = np.log1p(np.sqrt(1.0 + r[~big]))
    out[big] = 0.5 * lr[big] + np.log(np.sqrt(r[big]) + np.sqrt(r[big] + 1.0))
    return out


def _peak(a1, lp, lq):
    """Maximizer of ``l`` on ``tau >= 0``."""
    a1 = np.asarray(a1, dtype=float)
    tau = np.zeros_like(a1)
    pos, neg, zero = a1 > 0, a1 < 0, a1 == 0
    with np.errstate(invalid="ignore", divide="ignore"):
        safe = np.where(a1 != 0, np.abs(a1), 1.0)
        lr = math.log(4.0) + lp + lq - 2.0 * np.log(safe)
        lr = np.where(np.isfinite(lr), lr, -np.inf)
        # e^tau = 2Q / ((A+1)(1 + sqrt(1 + 4PQ/(A+1)^2)))
        t_pos = math.log(2.0) + lq - np.log(safe) - _log1p_sqrt1p(lr)
        # e^tau = |A+1| (1 + sqrt(1 + 4PQ/(A+1)^2)) / (2P)
        t_neg = np.log(safe) - lp - math.log(2.0) + _log1p_sqrt1p(lr)
        t_zero = 0.5 * (lq - lp)
    tau = np.where(pos, t_pos, tau)
    tau = np.where(neg, t_neg, tau)
    tau = np.where(zero, t_zero, tau)
    tau = np.where(np.isnan(tau), 0.0, tau)
    return np.maximum(tau, 0.0)


def _bisect(a1, lp, lq, lo, hi, target, iters=48):
    """Point in ``[lo, hi]`` where the monotone ``l`` crosses ``target``."""
    f_lo = _ell(lo, a1, lp, lq) - target
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        f_mid = _ell(mid, a1, lp, lq) - target
        same = np.sign(f_mid) == np.sign(f_lo)
        lo = np.where(same, mid, lo)
        f_lo = np.where(same, f_mid, f_lo)
        hi = np.where(same, hi, mid)
    return 0.5 * (lo + hi)


def _breakpoints(a1, lp, lq):
    """Segment ends ``[tau_lo, tau_a, tau_peak, tau_b, tau_hi]`` and peak level."""
    tp = _peak(a1, lp, lq)
    lstar = _ell(tp, a1, lp, lq)
    ends = []
    l0 = _ell(np.zeros_like(tp), a1, lp, lq)
    for drop in (_CUT, _INNER):
        target = lstar - drop
        inside = l0 >= target
        left = _bisect(a1, lp, lq, np.zeros_like(tp), tp.copy(), target)
        ends.append(np.where(inside, 0.0, left))
    rights = []
    for drop in (_INNER, _CUT):
        target = lstar - drop
        step = np.ones_like(tp)
        for _ in range(80):
            above = _ell(tp + step, a1, lp, lq) > target
            if not above.any():
                break
            step = np.where(above, 2.0 * step, step)
        rights.append(_bisect(a1, lp, lq, tp + 0.5 * step * (step > 1), tp + step, target))
    return np.stack([ends[0], ends[1], tp, rights[0], rights[1]], axis=-1), lstar


@dataclass
class _FResult:
    """``F = exp(log_scale) * mantissa`` with an error on the mantissa."""

    mantissa: np.ndarray
    error: np.ndarray
    log_scale: np.ndarray
    infinite: np.ndarray


def _model_integral(A, lp, lq, h: HFunc, rtol: float) -> _FResult:
    """``int_0^1 s^A exp(-P/s - Q s) h(s) ds`` for arrays of ``A, log P, log Q``.

    ``h`` takes an array of ``s`` values and must be bounded near 0.
    """
    A, lp, lq = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (A, lp, lq)))
    shape = A.shape
    A, lp, lq = A.ravel(), lp.ravel(), lq.ravel()
    n = A.size
    a1 = A + 1.0
    infinite = (lp == -np.inf) & (a1 <= 0)
    mant = np.zeros(n)
    err = np.zeros(n)
    lstar = np.zeros(n)
    idx = np.flatnonzero(~infinite)
    if idx.size:
        bp, ls = _breakpoints(a1[idx], lp[idx], lq[idx])
        lstar[idx] = ls
        nseg = bp.shape[1] - 1
        owner = np.repeat(idx, nseg)
        lo = bp[:, :-1].ravel()
        hi = bp[:, 1:].ravel()

        def func(tau, dl, dr, rows):
            o = owner[rows][:, None]
            with np.errstate(over="ignore", under="ignore"):
                e = np.exp(_ell(tau, a1[o], lp[o], lq[o]) - lstar[o])
                vals = e * h(np.exp(-tau))
            return vals

        res = integrate(func, lo, hi, rtol=rtol * 0.25)
        mant_seg = res.value.reshape(-1, nseg)
        err_seg = res.error.reshape(-1, nseg)
        mant[idx] = mant_seg.sum(axis=1)
        # bound the neglected tails by the last retained level
        err[idx] = err_seg.sum(axis=1) + np.abs(mant[idx]) * 1e-18
    return _FResult(
        mant.reshape(shape), err.reshape(shape), lstar.reshape(shape), infinite.reshape(shape)
    )


# ---------------------------------------------------------------------------
# E_A(T, S)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EArgs:
    """Arguments of ``E_A(T, S) = int_0^1 t^A exp(-T/t - S t) dt``."""

    A: float
    T: float
    S: float

    def __post_init__(self):
        if not (self.T >= 0 and self.S >= 0):
            raise ValueError("E_A requires T >= 0 and S >= 0")


def _log(v):
    with np.errstate(divide="ignore"):
        return np.log(np.asarray(v, dtype=float))


def e_a(args: EArgs, tol: float = 1e-12) -> ExtValue:
    """Evaluate ``E_A(T, S)``.

    Returns ``+inf`` exactly when ``T = 0`` and ``A <= -1``.  The error
    estimate is absolute.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    r = _model_integral(args.A, _log(args.T), _log(args.S), np.ones_like, rtol=tol)
    if bool(r.infinite):
        return ExtValue(math.inf, 0.0)
    scale = math.exp(float(r.log_scale))
    return ExtValue(float(r.mantissa) * scale, float(r.error) * scale)


def e_a_envelope(args: EArgs) -> tuple[float, float]:
    """Algebraic factor and exponent argument of the two-sided bound for ``E_A``.

    ``E_A(T,S)`` is comparable to ``shape * exp(-c * exp_arg)`` with
    ``exp_arg = sqrt(T (T v S))`` and

    * ``shape = T^{A+1}`` for ``A < -1``,
    * ``shape = 1 + log+(1 / (T (T v S)))`` for ``A = -1``,
    * ``shape = (S v 1)^{-A-1}`` for ``A > -1``.
    """
    A, T, S = float(args.A), float(args.T), float(args.S)
    prod = T * max(T, S)
    exp_arg = math.sqrt(prod)
    if A < -1:
        shape = T ** (A + 1.0) if T > 0 else math.inf
    elif A == -1:
        shape = 1.0 + (max(0.0, math.log(1.0 / prod)) if prod > 0 else math.inf)
    else:
        shape = max(S, 1.0) ** (-A - 1.0)
    return shape, exp_arg


# ---------------------------------------------------------------------------
# kernels
# ---------------------------------------------------------------------------


def riesz_c(sigma: float) -> float:
    """``Gamma(1/2 - sigma) / (4^sigma sqrt(pi) Gamma(sigma))``, for ``sigma < 1/2``.

    The Riesz kernel of order ``-1/2`` in the Dunkl setting is
    ``riesz_c(sigma) |x - y|^{2 sigma - 1}``.
    """
    return special.gamma(0.5 - sigma) / (4.0**sigma * _SQRT_PI * special.gamma(sigma))


def _h_small_s(alpha: float, mode: str) -> HFunc:
    if mode == "plain":
        return lambda s: np.asarray(bessel.i_asym_factor(alpha, 2.0 * s)) / _SQRT_PI
    if mode == "same":
        return lambda s: (
            np.asarray(bessel.i_asym_factor(alpha, 2.0 * s))
            + np.asarray(bessel.i_asym_factor(alpha + 1.0, 2.0 * s))
        ) / _SQRT_PI
    return lambda s: np.asarray(bessel.i_diff_factor(alpha, 2.0 * s)) / _SQRT_PI


def _h_large_s(alpha: float, mode: str) -> HFunc:
    c = 2.0**-alpha

    def plain(v):
        return c * np.asarray(bessel.phi_i_scaled(alpha, 0.5 * v))

    if mode == "plain":
        return plain
    sgn = 1.0 if mode == "same" else -1.0
    return lambda v: plain(v) + sgn * c * 0.5 * v * np.asarray(bessel.phi_i_scaled(alpha + 1.0, 0.5 * v))


def _axis_value(alpha, sigma, kind, y):
    """Modified kernel with one argument at the origin (closed forms)."""
    beta = sigma - alpha - 1.0
    c = 2.0 ** (-2.0 * alpha - 1.0) / (special.gamma(alpha + 1.0) * special.gamma(sigma))
    a = 0.25 * y * y
    with np.errstate(divide="ignore", over="ignore"):
        # finiteness is decided by comparing sigma with alpha + 1 directly:
        # sigma - alpha - 1 may round to a tiny nonzero number on the line
        if kind is Kind.RIESZ:
            if not sigma < alpha + 1.0:
                return np.full_like(y, np.inf)
            return c * special.gamma(-beta) * a**beta
        # int t^{beta-1} e^{-t - a/t} dt = 2 a^{beta/2} K_beta(2 sqrt a)
        out = c * 2.0 * a ** (0.5 * beta) * special.kv(beta, y)
        if sigma > alpha + 1.0:
            out = np.where(y == 0, c * special.gamma(beta), out)
        else:
            out = np.where(y == 0, np.inf, out)
        return out


def kernel_values(
    setting: Setting | str,
    params: PotentialParams,
    x,
    y,
    tol: float = DEFAULT_TOL,
    diff=None,
):
    """Vectorized potential kernel.

    Parameters
    ----------
    setting : Setting
        ``MODIFIED`` gives ``K`` (or ``H`` for Bessel potentials),
        ``NONMODIFIED`` multiplies by ``(x y)^{alpha + 1/2}`` and ``DUNKL``
        gives ``(K^alpha(|x|,|y|) + x y K^{alpha+1}(|x|,|y|)) / 2``.
    params : PotentialParams
    x, y : array_like
        Points; nonnegative except in the Dunkl setting.
    tol : float
        Relative accuracy target.
    diff : array_like, optional
        ``|x| - |y|`` computed exactly by the caller.  Used for ``T`` when
        the two points are closer than their float spacing resolves.

    Returns
    -------
    value, error : ndarray
        Kernel values (``+inf`` where the defining integral diverges) and
        absolute error estimates.
    """
    setting = Setting.parse(setting)
    alpha, sigma, kind = params.alpha, params.sigma, params.kind
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    shape = x.shape
    x, y = x.ravel(), y.ravel()
    if setting is not Setting.DUNKL and (np.any(x < 0) or np.any(y < 0)):
        raise ValueError(f"{setting.value} kernels are defined for x, y >= 0")
    ax, ay = np.abs(x), np.abs(y)
    if diff is None:
        d = ax - ay
    else:
        d = np.broadcast_to(np.asarray(diff, dtype=float), shape).ravel()
    rho = ax * ay
    lam = 1.0 if kind is Kind.BESSEL else 0.0
    value = np.zeros(x.size)
    error = np.zeros(x.size)

    on_axis = rho == 0
    interior = ~on_axis
    if on_axis.any():
        other = np.maximum(ax, ay)[on_axis]
        v = _axis_value(alpha, sigma, kind, other)
        if setting is Setting.DUNKL:
            v = 0.5 * v
        elif setting is Setting.NONMODIFIED:
            with np.errstate(invalid="ignore"):
                v = np.where(alpha + 0.5 > 0, 0.0 * v, v)  # (xy)^{alpha+1/2} -> 0
            if alpha + 0.5 < 0:
                v = np.full_like(v, np.inf)
        value[on_axis] = v

    if interior.any() and kind is Kind.RIESZ and not params.riesz_finite:
        value[interior] = np.inf
        interior[:] = False
    if interior.any():
        idx = np.flatnonzero(interior)
        lrho = np.log(rho[idx])
        with np.errstate(divide="ignore"):
            lT = 2.0 * np.log(np.abs(d[idx])) - math.log(4.0) - lrho
        lQ0 = np.log(lam) + lrho if lam > 0 else np.full(idx.size, -np.inf)
        log_pref = (sigma - alpha - 1.0) * lrho - special.gammaln(sigma)
        if setting is Setting.DUNKL:
            same = (x[idx] * y[idx]) > 0
            groups = [(same, "same", 0.25, 0.25), (~same, "diff", 0.5, 0.25)]
        else:
            groups = [(np.ones(idx.size, dtype=bool), "plain", 0.5, 0.5)]
        for mask, mode, c0, cinf in groups:
            if not mask.any():
                continue
            sub = idx[mask]
            A0 = sigma - 0.5 if mode == "diff" else sigma - 1.5
            f0 = _model_integral(A0, lT[mask], lQ0[mask], _h_small_s(alpha, mode), tol)
            finf = _model_integral(alpha - sigma, lQ0[mask], lT[mask], _h_large_s(alpha, mode), tol)
            lp = log_pref[mask]
            with np.errstate(over="ignore", under="ignore", invalid="ignore"):
                s0 = c0 * np.exp(lp + f0.log_scale)
                sinf = cinf * np.exp(lp + finf.log_scale)
                val = s0 * f0.mantissa + sinf * finf.mantissa
                err = s0 * f0.error + sinf * finf.error
            inf = f0.infinite | finf.infinite
            val = np.where(inf, np.inf, val)
            err = np.where(inf, 0.0, err)
            if setting is Setting.NONMODIFIED:
                with np.errstate(over="ignore"):
                    w = np.exp((alpha + 0.5) * lrho[mask])
                val = np.where(inf, val, val * w)
                err = err * w
            value[sub] = val
            error[sub] = err
    return value.reshape(shape), error.reshape(shape)


def potential_kernel(
    setting: Setting | str,
    params: PotentialParams,
    x: float,
    y: float,
    tol: float = DEFAULT_TOL,
) -> ExtValue:
    """Potential kernel at one point pair.

    Riesz kernels are ``+inf`` for ``sigma >= alpha + 1`` and on the diagonal
    for ``sigma <= 1/2`` (same-sign diagonal in the Dunkl setting); Bessel
    kernels are finite off the diagonal.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    v, e = kernel_values(setting, params, x, y, tol=tol)
    return ExtValue(float(v), float(e))
