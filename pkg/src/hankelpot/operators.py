"""Potential operators, Hankel transforms and weighted norms by quadrature.

All integrals are computed with :func:`hankelpot.lineint.line_integral`,
which receives the singular structure of the integrand: the diagonal
``y = x`` of the potential kernel, the support ends of ``f`` and, in the
Dunkl setting, the origin.  Whether an integral converges is decided from
the power exponents declared by the function, so divergent potentials of
nonnegative functions are returned as ``+inf`` rather than as large
numbers.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.polynomial import chebyshev, legendre
from scipy import special

from . import bessel
from .functions import PowerBehavior, SampledFunction, Smoothness, WeightedMeasure
from .lineint import Singularity, Tail, line_integral, local_convergent, tail_convergent
from .profiles import fast_kernel_values
from .settings import ExtValue, Kind, PotentialParams, Setting

__all__ = [
    "AccuracyWarning",
    "apply_potential",
    "apply_potential_values",
    "potential_divergence",
    "hankel_transform",
    "hankel_image",
    "negative_power_check",
    "inversion_check",
    "weighted_norm",
    "weak_quasinorm",
    "SplitValues",
    "split_operators",
    "mult_convolution",
]

DEFAULT_TOL = 1e-8


class AccuracyWarning(UserWarning):
    """A result is computed but its accuracy is likely below the request."""


# ---------------------------------------------------------------------------
# structure of potential integrands
# ---------------------------------------------------------------------------


def _kernel_tail_exponent(setting: Setting, params: PotentialParams) -> float:
    """Exponent of ``K(x, y) * density(y)`` as ``|y| -> inf``."""
    if params.kind is Kind.BESSEL:
        return -math.inf
    e = 2.0 * params.sigma - 2.0 * params.alpha - 2.0
    if setting is Setting.NONMODIFIED:
        return e + params.alpha + 0.5
    return e + 2.0 * params.alpha + 1.0


def _origin_exponent(setting: Setting, alpha: float) -> float:
    """Exponent of ``K(x, y) * density(y)`` as ``y -> 0`` (for ``x != 0``)."""
    if setting is Setting.NONMODIFIED:
        return alpha + 0.5
    return 2.0 * alpha + 1.0


def _diagonal(params: PotentialParams) -> tuple[float, float]:
    """Kernel behavior at ``y = x``: (exponent, log power)."""
    s = params.sigma
    if s < 0.5:
        return 2.0 * s - 1.0, 0.0
    if s == 0.5:
        return 0.0, -1.0
    return 0.0, 0.0


def _check_setting_support(setting: Setting, f: SampledFunction):
    if setting is not Setting.DUNKL and f.lo < 0:
        raise ValueError(f"{setting.value} operators act on functions supported in [0, inf)")


def _structure(setting: Setting, params: PotentialParams, f: SampledFunction, x: float):
    """Singular points and tails of ``y -> K(x, y) f(y) density(y)``."""
    alpha = params.alpha
    sing: list[Singularity] = []
    lo, hi = f.lo, f.hi
    w0 = _origin_exponent(setting, alpha)
    for end, idx in ((lo, 0), (hi, 1)):
        if math.isinf(end):
            continue
        beh = f.behavior(idx)
        e, k = beh.exponent, beh.log_power
        if end == 0:
            e += w0
        sing.append(Singularity(end, e, k))
    if lo < 0 < hi:
        sing.append(Singularity(0.0, w0, 0.0))
    sing += _interior(f)
    de, dk = _diagonal(params)
    if lo <= x <= hi:
        sing.append(Singularity(x, de, dk))
    tails = []
    ktail = _kernel_tail_exponent(setting, params)
    for end, idx in ((lo, 0), (hi, 1)):
        if math.isinf(end):
            beh = f.behavior(idx)
            tails.append(Tail(ktail + beh.exponent, beh.log_power))
        else:
            tails.append(None)
    return sing, tuple(tails)


def _interior(f: SampledFunction, p: float = 1.0) -> list[Singularity]:
    """Interior singular points of ``|f|^p``."""
    return [Singularity(c, beh.exponent * p, beh.log_power * p) for c, beh in f.singular_points]


def potential_divergence(setting: Setting | str, params: PotentialParams, f: SampledFunction, x: float) -> list[str]:
    """Reasons why the potential integral at ``x`` diverges (empty if it converges).

    Riesz kernels with ``sigma >= alpha + 1`` are infinite everywhere.
    Otherwise each singular point and infinite end of the integrand is
    checked against the integrability threshold.
    """
    setting = Setting.parse(setting)
    if params.kind is Kind.RIESZ and not params.riesz_finite:
        return ["kernel is infinite for sigma >= alpha + 1"]
    sing, tails = _structure(setting, params, f, x)
    merged: dict[float, tuple[float, float]] = {}
    for s in sing:
        e, k = merged.get(s.where, (0.0, 0.0))
        merged[s.where] = (e + s.exponent, k + s.log_power)
    reasons = []
    for where, (e, k) in merged.items():
        if not local_convergent(e, k):
            reasons.append(f"non-integrable singularity at y = {where:g} (exponent {e:g}, log power {k:g})")
    for side, tail in zip(("-inf", "+inf"), tails):
        if tail is not None and not tail_convergent(tail.exponent, tail.log_power):
            reasons.append(f"non-integrable tail at y -> {side} (exponent {tail.exponent:g})")
    return reasons


def _near_breaks(f: SampledFunction, x: float) -> list[float]:
    """Geometric cuts between ``x`` and a nearby support end outside which it lies."""
    out = []
    width = f.hi - f.lo
    for end, sgn in ((f.lo, 1.0), (f.hi, -1.0)):
        if math.isinf(end):
            continue
        h = (end - x) * sgn
        if h > 0 and math.isfinite(width) and h < 0.25 * width:
            step = h
            while step < 0.5 * width:
                out.append(end + sgn * step)
                step *= 4.0
    return out


def apply_potential(
    setting: Setting | str,
    params: PotentialParams,
    f: SampledFunction,
    x: float,
    tol: float = DEFAULT_TOL,
) -> ExtValue:
    """Potential of ``f`` at ``x``.

    Modified setting: ``int_0^inf K(x, y) f(y) y^{2 alpha + 1} dy``;
    non-modified: ``int_0^inf K(x, y) f(y) dy`` with the non-modified kernel;
    Dunkl: ``int_R K(x, y) f(y) |y|^{2 alpha + 1} dy``.  ``kind`` in
    ``params`` selects Riesz or Bessel potentials.

    Returns
    -------
    ExtValue
        The value with an error estimate; ``+inf`` if the integral diverges
        and ``f >= 0``; status ``"not-in-domain"`` if it diverges for a
        sign-changing ``f``.
    """
    setting = Setting.parse(setting)
    if not tol > 0:
        raise ValueError("tol must be positive")
    x = float(x)
    if not math.isfinite(x) or x == 0 or (setting is not Setting.DUNKL and x < 0):
        raise ValueError("x must be positive (nonzero in the Dunkl setting)")
    _check_setting_support(setting, f)
    if potential_divergence(setting, params, f, x):
        return ExtValue.infinite() if f.nonnegative else ExtValue.not_in_domain()
    sing, tails = _structure(setting, params, f, x)
    breaks = list(f.breakpoints) + [x / 2, 2 * x] + _near_breaks(f, x)
    if setting is Setting.DUNKL:
        breaks += [-x, -x / 2, -2 * x]
    alpha = params.alpha
    dens = 0.0 if setting is Setting.NONMODIFIED else 2.0 * alpha + 1.0
    ax, sx = abs(x), math.copysign(1.0, x)
    ktol = min(tol, 1e-8) * 1e-2

    def integrand(y, anchor, direction, offset):
        fv = f.evaluate_near(y, anchor, direction, offset)
        at_x = np.broadcast_to(anchor == x, y.shape)
        d = np.where(at_x, -sx * direction * offset, ax - np.abs(y))
        nz = fv != 0
        out = np.zeros(y.shape)
        if nz.any():
            k = fast_kernel_values(setting, params, x, y[nz], diff=d[nz], tol=ktol)
            with np.errstate(divide="ignore", invalid="ignore"):
                w = np.abs(y[nz]) ** dens if dens != 0 else 1.0
            out[nz] = k * fv[nz] * w
        return out

    res = line_integral(
        integrand,
        f.lo,
        f.hi,
        singularities=sing,
        breaks=breaks,
        tails=tails,
        panel_width=f.panel_width,
        rtol=tol,
        atol=0.0,
    )
    if not res.converged:
        warnings.warn(f"potential quadrature at x={x:g} did not reach tol={tol:g}", AccuracyWarning, stacklevel=2)
    return ExtValue(res.value, res.error)


def apply_potential_values(setting, params: PotentialParams, f: SampledFunction, xs, tol: float = DEFAULT_TOL):
    """:func:`apply_potential` on an array of points; returns ``(values, errors)``.

    Divergent points give ``+inf`` (``nan`` if not in the domain).
    """
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    vals = np.empty(xs.shape)
    errs = np.empty(xs.shape)
    for i, x in np.ndenumerate(xs):
        r = apply_potential(setting, params, f, float(x), tol)
        vals[i], errs[i] = r.value, r.abs_error
    return vals, errs


# ---------------------------------------------------------------------------
# Hankel transforms
# ---------------------------------------------------------------------------


def _transform_kernel(setting: Setting, alpha: float, x: float, y: np.ndarray):
    """Transform kernel times density, as a function of ``y``."""
    u = x * y
    if setting is Setting.MODIFIED:
        return np.asarray(bessel.phi(alpha, np.abs(u))) * np.abs(y) ** (2 * alpha + 1)
    if setting is Setting.NONMODIFIED:
        return np.asarray(bessel.varphi(alpha, np.abs(u)))
    au = np.abs(u)
    val = 0.5 * (np.asarray(bessel.phi(alpha, au)) - 1j * u * np.asarray(bessel.phi(alpha + 1, au)))
    return val * np.abs(y) ** (2 * alpha + 1)


def hankel_transform(
    setting: Setting | str,
    alpha: float,
    f: SampledFunction,
    x: float,
    tol: float = 1e-10,
):
    """Hankel transform of ``f`` at ``x``.

    ``H_alpha f(x) = int phi_alpha(x y) f(y) y^{2 alpha + 1} dy`` (modified),
    ``int sqrt(x y) J_alpha(x y) f(y) dy`` (non-modified) and
    ``int conj(psi_alpha(x y)) f(y) |y|^{2 alpha + 1} dy`` over the line
    (Dunkl; the result is complex).

    Quadrature panels are at most ``pi / |x|`` long, so the oscillation of
    the kernel is resolved panel by panel.  An :class:`AccuracyWarning` is
    issued when ``|x| * max|support| > 1e4``.
    """
    setting = Setting.parse(setting)
    alpha = bessel.check_order(alpha)
    _check_setting_support(setting, f)
    x = float(x)
    if setting is not Setting.DUNKL and x < 0:
        raise ValueError("x must be nonnegative")
    if math.isinf(f.lo) or math.isinf(f.hi):
        raise ValueError("hankel_transform needs a finite support hint")
    reach = abs(x) * max(abs(f.lo), abs(f.hi))
    if reach > 1e4:
        warnings.warn(f"x * support = {reach:.3g} exceeds 1e4; transform accuracy may degrade",
                      AccuracyWarning, stacklevel=2)
    w0 = alpha + 0.5 if setting is Setting.NONMODIFIED else 2 * alpha + 1
    sing = []
    for end, idx in ((f.lo, 0), (f.hi, 1)):
        beh = f.behavior(idx)
        sing.append(Singularity(end, beh.exponent + (w0 if end == 0 else 0.0), beh.log_power))
    if f.lo < 0 < f.hi:
        sing.append(Singularity(0.0, w0))
    sing += _interior(f)
    width = math.pi / abs(x) if x != 0 else None
    if f.panel_width is not None:
        width = f.panel_width if width is None else min(width, f.panel_width)

    def part(component):
        def integrand(y, anchor, direction, offset):
            fv = f.evaluate_near(y, anchor, direction, offset)
            k = _transform_kernel(setting, alpha, x, y)
            return component(k) * fv

        return line_integral(integrand, f.lo, f.hi, singularities=sing, breaks=f.breakpoints,
                             panel_width=width, rtol=tol, atol=tol * 1e-3)

    if setting is Setting.DUNKL:
        re = part(np.real)
        im = part(np.imag)
        return complex(re.value, im.value)
    return part(np.real).value


def _gl_transform(alpha: float, g: SampledFunction, ys: np.ndarray, weight_power: float) -> np.ndarray:
    """``int phi_alpha(y s) s^{weight_power} g(s) ds`` over the compact support of ``g``.

    Gauss-Legendre with a node count growing with the oscillation frequency;
    ``g`` must be smooth up to the support ends.
    """
    lo, hi = g.lo, g.hi
    c, h = 0.5 * (lo + hi), 0.5 * (hi - lo)
    out = np.empty(ys.shape)
    order = np.argsort(ys)
    ys_sorted = ys[order]
    res = np.empty(ys.size)
    block = 256
    for start in range(0, ys.size, block):
        yb = ys_sorted[start:start + block]
        n = int(96 + math.ceil(0.75 * yb.max() * h))
        t, w = _gl_nodes(n)
        s = c + h * t
        gs = g(s) * s**weight_power * w * h
        vals = np.asarray(bessel.phi(alpha, yb[:, None] * s[None, :]))
        res[start:start + block] = vals @ gs
    out.ravel()[order] = res
    return out


@lru_cache(maxsize=32)
def _gl_nodes(n: int):
    return legendre.leggauss(n)


def hankel_image(alpha: float, g: SampledFunction, upto: float, panel: float = 1.0, nodes: int = 24) -> SampledFunction:
    """``f = H_alpha g`` for a smooth compactly supported ``g``, as a function.

    ``f`` is tabulated by piecewise Chebyshev interpolation on ``[0, upto]``
    (the values at the nodes come from Gauss-Legendre quadrature), which
    makes repeated evaluation inside potential quadrature cheap.  The
    support hint is ``(0, upto)``; choose ``upto`` where ``f`` is negligible.
    """
    alpha = bessel.check_order(alpha)
    if g.lo <= 0 or math.isinf(g.hi):
        raise ValueError("g must be supported in a compact subset of (0, inf)")
    n_panels = int(math.ceil(upto / panel))
    ref = np.cos(np.pi * (np.arange(nodes) + 0.5) / nodes)
    left = panel * np.arange(n_panels)
    ys = left[:, None] + 0.5 * panel * (ref[None, :] + 1.0)
    vals = _gl_transform(alpha, g, ys.ravel(), 2 * alpha + 1).reshape(ys.shape)
    coef = np.linalg.solve(chebyshev.chebvander(ref, nodes - 1), vals.T).T

    def ev(y):
        y = np.asarray(y, dtype=float)
        k = np.clip((y / panel).astype(int), 0, n_panels - 1)
        u = 2.0 * (y - k * panel) / panel - 1.0
        return chebyshev.chebval(u, coef[k].T, tensor=False)

    return SampledFunction(
        evaluator=ev,
        support=(0.0, n_panels * panel),
        nonnegative=False,
        panel_width=panel,
        name=f"H[{g.name}]",
    )


def _image_extent(alpha: float, sigma: float, g: SampledFunction, tol: float) -> float:
    """Point beyond which ``y^{2 sigma} |H_alpha g(y)|`` stays below ``tol``."""
    y = 8.0
    while y < 2e4:
        probe = np.linspace(y, 2 * y, 64)
        vals = np.abs(_gl_transform(alpha, g, probe, 2 * alpha + 1)) * probe ** (2 * sigma)
        if vals.max() < tol:
            return y
        y *= 1.5
    warnings.warn("H_alpha g decays too slowly for the requested tolerance", AccuracyWarning, stacklevel=3)
    return y


def negative_power_check(alpha: float, sigma: float, g: SampledFunction, x_grid, tol: float = 1e-7) -> float:
    """Largest discrepancy between two computations of ``(L_alpha)^{-sigma} H_alpha g``.

    One side applies the Riesz potential to ``f = H_alpha g``; the other is
    the transform ``H_alpha((.)^{-2 sigma} g)``.  ``g`` must be smooth with
    compact support in ``(0, inf)``.

    Raises
    ------
    ValueError
        Unless ``0 < sigma < alpha + 1``.
    """
    alpha = bessel.check_order(alpha)
    if not 0 < sigma < alpha + 1:
        raise ValueError("the negative power identity needs 0 < sigma < alpha + 1")
    if g.lo <= 0 or math.isinf(g.hi):
        raise ValueError("g must have compact support separated from 0")
    params = PotentialParams(alpha, sigma, Kind.RIESZ)
    upto = _image_extent(alpha, sigma, g, tol * 1e-2)
    f = hankel_image(alpha, g, upto)
    xs = np.atleast_1d(np.asarray(x_grid, dtype=float))
    lhs = apply_potential_values(Setting.MODIFIED, params, f, xs, tol)[0]
    rhs = _gl_transform(alpha, g, xs, 2 * alpha + 1 - 2 * sigma)
    return float(np.max(np.abs(lhs - rhs)))


def inversion_check(alpha: float, g: SampledFunction, x_grid, tol: float = 1e-8) -> tuple[float, float]:
    """Discrepancies in ``H_alpha H_alpha g = g`` and ``||H_alpha g||_2 = ||g||_2`` (modified setting).

    ``f = H_alpha g`` is tabulated up to the point where it stays below
    ``tol * 1e-2``; its transform is then evaluated at ``x_grid`` by
    oscillation-aware quadrature.  ``g`` must be smooth with compact support
    in ``(0, inf)``.

    Returns
    -------
    inversion_error : float
        ``max |H_alpha f(x) - g(x)|`` over ``x_grid``.
    isometry_error : float
        ``| ||f||_2 / ||g||_2 - 1 |`` in ``L^2(d mu_alpha)``.
    """
    alpha = bessel.check_order(alpha)
    if g.lo <= 0 or math.isinf(g.hi):
        raise ValueError("g must have compact support separated from 0")
    f = hankel_image(alpha, g, _image_extent(alpha, 0.0, g, tol * 1e-2))
    xs = np.atleast_1d(np.asarray(x_grid, dtype=float))
    back = np.array([hankel_transform(Setting.MODIFIED, alpha, f, float(x), tol * 1e-2) for x in xs])
    inversion = float(np.max(np.abs(back - g(xs))))
    measure = WeightedMeasure(Setting.MODIFIED, alpha)
    ratio = weighted_norm(f, 2.0, measure, tol=tol * 1e-2).value / weighted_norm(g, 2.0, measure, tol=tol * 1e-2).value
    return inversion, float(abs(ratio - 1.0))


# ---------------------------------------------------------------------------
# norms
# ---------------------------------------------------------------------------


def _norm_structure(f: SampledFunction, p: float, measure: WeightedMeasure, a: float):
    """Singular points and tails of ``|y^a f(y)|^p density(y)``."""
    w0 = measure.density_exponent
    sing, tails = [], []
    for end, idx in ((f.lo, 0), (f.hi, 1)):
        beh = f.behavior(idx).scaled(p)
        if math.isinf(end):
            tails.append(Tail(beh.exponent + a * p + w0, beh.log_power))
            continue
        tails.append(None)
        e = beh.exponent + ((a * p + w0) if end == 0 else 0.0)
        sing.append(Singularity(end, e, beh.log_power))
    if f.lo < 0 < f.hi:
        sing.append(Singularity(0.0, a * p + w0))
    sing += _interior(f, p)
    return sing, tuple(tails)


def _norm_divergent(sing, tails) -> bool:
    return any(not local_convergent(s.exponent, s.log_power) for s in sing) or any(
        t is not None and not tail_convergent(t.exponent, t.log_power) for t in tails
    )


def _sup_divergent(f: SampledFunction, a: float) -> bool:
    for end, idx in ((f.lo, 0), (f.hi, 1)):
        beh = f.behavior(idx)
        e = beh.exponent
        if math.isinf(end):
            e += a
            if e > 0 or (e == 0 and beh.log_power < 0):
                return True
            continue
        if end == 0:
            e += a
        if e < 0 or (e == 0 and beh.log_power < 0):
            return True
    return False


def _sup_estimate(f: SampledFunction, a: float) -> float:
    lo, hi = f.lo, f.hi
    span_lo = lo if math.isfinite(lo) else -1e8
    span_hi = hi if math.isfinite(hi) else 1e8
    pts = np.linspace(span_lo, span_hi, 2049)[1:-1]
    if span_lo >= 0:
        a0 = max(span_lo, 1e-12 * max(1.0, span_hi))
        pts = np.concatenate([pts, np.geomspace(a0, span_hi, 2049)[1:-1]])
    best = 0.0
    for _ in range(3):
        vals = np.abs(np.abs(pts) ** a * f(pts))
        vals = np.where(np.isfinite(vals), vals, 0.0)
        i = int(np.argmax(vals))
        best = max(best, float(vals[i]))
        lo_i = pts[max(i - 1, 0)]
        hi_i = pts[min(i + 1, pts.size - 1)]
        pts = np.linspace(lo_i, hi_i, 257)[1:-1]
    return best


def weighted_norm(f: SampledFunction, p: float, measure: WeightedMeasure, a: float | None = None,
                  tol: float = 1e-10) -> ExtValue:
    """``|| x^a f ||_{L^p(d mu)}`` for ``1 <= p <= inf``.

    ``a`` defaults to ``measure.power_weight_exponent``.  Finite ``p`` uses
    quadrature, with ``+inf`` decided from the endpoint exponents.  For
    ``p = inf`` the essential supremum is maximized over a sample grid with
    three refinement rounds (a lower bound with heuristic convergence);
    it is ``+inf`` when an endpoint exponent shows unboundedness.
    """
    p = float(p)
    if not p >= 1:
        raise ValueError("p must be in [1, inf]")
    a = measure.power_weight_exponent if a is None else float(a)
    if not measure.whole_line and f.lo < 0:
        raise ValueError("half-line measures need functions supported in [0, inf)")
    if math.isinf(p):
        if _sup_divergent(f, a):
            return ExtValue.infinite()
        if math.isinf(f.hi) or math.isinf(f.lo):
            warnings.warn("sup over an unbounded support is estimated on a finite sample grid",
                          AccuracyWarning, stacklevel=2)
        return ExtValue(_sup_estimate(f, a), 0.0)
    sing, tails = _norm_structure(f, p, measure, a)
    if _norm_divergent(sing, tails):
        return ExtValue.infinite()
    w0 = measure.density_exponent

    def integrand(y, anchor, direction, offset):
        fv = f.evaluate_near(y, anchor, direction, offset)
        ay = np.abs(y)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.abs(fv) ** p * ay ** (a * p + w0)
        return np.where(fv != 0, out, 0.0)

    res = line_integral(integrand, f.lo, f.hi, singularities=sing, breaks=f.breakpoints, tails=tails,
                        panel_width=f.panel_width, rtol=tol)
    value = res.value ** (1.0 / p)
    err = res.error / p * res.value ** (1.0 / p - 1.0) if res.value > 0 else res.error ** (1.0 / p)
    return ExtValue(value, err)


def weak_quasinorm(f: SampledFunction, q: float, measure: WeightedMeasure, a: float | None = None,
                   window: tuple[float, float] | None = None, samples: int = 4001) -> float:
    """``sup_lambda lambda * mu{ |x^a f| > lambda }^{1/q}`` on a sample grid.

    The distribution function is estimated from a log grid over ``window``
    (default: the support, clipped to ``[1e-12, 1e12]`` relative to the
    unit scale); each cell contributes its measure where the sampled value
    exceeds the level.  For ``f >= 0`` this is a lower bound that converges
    as the grid is refined.
    """
    a = measure.power_weight_exponent if a is None else float(a)
    if f.lo < 0:
        raise ValueError("weak_quasinorm is implemented on the half-line")
    lo = max(f.lo, 1e-12) if window is None else window[0]
    hi = min(f.hi, 1e12) if window is None else window[1]
    edges = np.geomspace(max(lo, 1e-300), hi, samples)
    mids = np.sqrt(edges[1:] * edges[:-1])
    w0 = measure.density_exponent
    cell = (edges[1:] ** (w0 + 1) - edges[:-1] ** (w0 + 1)) / (w0 + 1) if w0 != -1 else np.log(edges[1:] / edges[:-1])
    vals = np.abs(mids**a * f(mids))
    order = np.argsort(-vals)
    cum = np.cumsum(cell[order])
    levels = vals[order]
    return float(np.max(levels * cum ** (1.0 / q)))


# ---------------------------------------------------------------------------
# split operators
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SplitValues:
    """Components ``H_0 f``, ``H_inf f``, ``T f`` (sigma < 1/2), ``S f`` (sigma = 1/2)."""

    h0: ExtValue
    hinf: ExtValue
    t_op: ExtValue
    s_op: ExtValue

    @property
    def total(self) -> float:
        return self.h0.value + self.hinf.value + self.t_op.value + self.s_op.value


def _restricted(f: SampledFunction, lo: float, hi: float) -> SampledFunction | None:
    """``f`` restricted to ``(lo, hi)``, keeping endpoint behavior where the ends agree."""
    nlo, nhi = max(f.lo, lo), min(f.hi, hi)
    if not nlo < nhi:
        return None
    ends = (f.singular_exponents[0] if nlo == f.lo else None, f.singular_exponents[1] if nhi == f.hi else None)
    return SampledFunction(
        evaluator=f.evaluator,
        support=(nlo, nhi),
        smoothness=f.smoothness,
        singular_exponents=ends,
        nonnegative=f.nonnegative,
        breakpoints=f.breakpoints,
        singular_points=f.singular_points,
        near_point=f.near_point,
        panel_width=f.panel_width,
        near_lo=f.near_lo if nlo == f.lo else None,
        near_hi=f.near_hi if nhi == f.hi else None,
        name=f.name,
    )


def _weighted_integral(f: SampledFunction | None, weight_exp: float, extra=None, extra_sing=(), tol=1e-10,
                       breaks=()) -> ExtValue:
    """``int f(y) y^weight_exp extra(y) dy`` over the support of ``f`` (half-line)."""
    if f is None:
        return ExtValue(0.0)
    sing = []
    tails = []
    for end, idx in ((f.lo, 0), (f.hi, 1)):
        beh = f.behavior(idx)
        if math.isinf(end):
            tails.append(Tail(beh.exponent + weight_exp, beh.log_power))
            continue
        tails.append(None)
        sing.append(Singularity(end, beh.exponent + (weight_exp if end == 0 else 0.0), beh.log_power))
    sing += _interior(f) + list(extra_sing)
    merged: dict[float, tuple[float, float]] = {}
    for s in sing:
        e, k = merged.get(s.where, (0.0, 0.0))
        merged[s.where] = (e + s.exponent, k + s.log_power)
    divergent = any(not local_convergent(e, k) for e, k in merged.values()) or any(
        t is not None and not tail_convergent(t.exponent, t.log_power) for t in tails
    )
    if divergent:
        return ExtValue.infinite() if f.nonnegative else ExtValue.not_in_domain()

    def integrand(y, anchor, direction, offset):
        fv = f.evaluate_near(y, anchor, direction, offset)
        out = fv * np.abs(y) ** weight_exp
        if extra is not None:
            out = out * extra(y, anchor, direction, offset)
        return np.where(fv != 0, out, 0.0)

    res = line_integral(integrand, f.lo, f.hi, singularities=sing, breaks=list(f.breakpoints) + list(breaks),
                        tails=tuple(tails), panel_width=f.panel_width, rtol=tol)
    return ExtValue(res.value, res.error)


def split_operators(alpha: float, sigma: float, f: SampledFunction, x: float, tol: float = 1e-10) -> SplitValues:
    """The four comparison operators of the modified Riesz potential at ``x``.

    * ``H_0 f(x) = x^{2 sigma - 2 alpha - 2} int_0^x f d mu_alpha``
    * ``H_inf f(x) = int_x^inf y^{2 sigma - 2 alpha - 2} f(y) d mu_alpha(y)``
    * ``T f(x) = int_{x/2}^{2x} |x - y|^{2 sigma - 1} f(y) dy`` if ``sigma < 1/2``, else 0
    * ``S f(x) = int_{x/2}^{2x} log(2 (x + y) / |x - y|) f(y) dy`` if ``sigma = 1/2``, else 0

    For ``f >= 0`` their sum is comparable with the Riesz potential.  Each
    component is ``+inf`` (or not in the domain) on its own when divergent.
    """
    alpha = bessel.check_order(alpha)
    if not 0 < sigma < alpha + 1:
        raise ValueError("split operators need 0 < sigma < alpha + 1")
    x = float(x)
    if not x > 0:
        raise ValueError("x must be positive")
    if f.lo < 0:
        raise ValueError("split operators act on functions supported in [0, inf)")
    w = 2 * alpha + 1
    h0 = _weighted_integral(_restricted(f, 0.0, x), w, tol=tol)
    if math.isfinite(h0.value):
        h0 = ExtValue(h0.value * x ** (2 * sigma - 2 * alpha - 2), h0.abs_error * x ** (2 * sigma - 2 * alpha - 2))
    hinf = _weighted_integral(_restricted(f, x, math.inf), 2 * sigma - 1, tol=tol)
    local = _restricted(f, x / 2, 2 * x)
    zero = ExtValue(0.0)
    t_op = s_op = zero
    if sigma <= 0.5 and local is not None:

        def dist(y, anchor, direction, offset):
            at_x = np.broadcast_to(anchor == x, y.shape)
            return np.where(at_x, offset, np.abs(x - y))

        inside = local.lo <= x <= local.hi
        if sigma < 0.5:
            extra = lambda y, an, di, off: dist(y, an, di, off) ** (2 * sigma - 1)  # noqa: E731
            sing = [Singularity(x, 2 * sigma - 1)] if inside else []
            t_op = _weighted_integral(local, 0.0, extra, sing, tol=tol, breaks=_near_breaks(local, x))
        else:
            extra = lambda y, an, di, off: np.log(2 * (x + y) / dist(y, an, di, off))  # noqa: E731
            sing = [Singularity(x, 0.0, -1.0)] if inside else []
            s_op = _weighted_integral(local, 0.0, extra, sing, tol=tol, breaks=_near_breaks(local, x))
    return SplitValues(h0, hinf, t_op, s_op)


# ---------------------------------------------------------------------------
# multiplicative convolution
# ---------------------------------------------------------------------------


def _log_function(f: SampledFunction) -> SampledFunction:
    """``s -> f(e^s)``: the function on the additive group ``(R, ds)``."""
    if f.lo < 0:
        raise ValueError("functions on (0, inf) only")
    lo = -math.inf if f.lo == 0 else math.log(f.lo)
    hi = math.log(f.hi) if math.isfinite(f.hi) else math.inf
    ev = f.evaluator
    beh_lo, beh_hi = f.singular_exponents
    if f.lo == 0:
        beh_lo = PowerBehavior(-math.inf) if beh_lo is None or beh_lo.exponent > 0 else PowerBehavior(0.0)
    if math.isinf(f.hi):
        beh_hi = PowerBehavior(-math.inf) if beh_hi is None or beh_hi.exponent < 0 else PowerBehavior(0.0)
    return SampledFunction(
        evaluator=lambda s: ev(np.exp(np.asarray(s))),
        support=(lo, hi),
        smoothness=f.smoothness,
        singular_exponents=(beh_lo, beh_hi),
        nonnegative=f.nonnegative,
        breakpoints=tuple(math.log(b) for b in f.breakpoints if b > 0),
        singular_points=tuple((math.log(c), beh) for c, beh in f.singular_points),
        near_point=None if f.near_point is None else (
            lambda lc, d, g=f.near_point: g(math.exp(lc), math.exp(lc) * np.expm1(np.asarray(d)))),
        near_lo=None if f.near_lo is None or f.lo == 0 else (lambda d, g=f.near_lo, c=f.lo: g(c * np.expm1(d))),
        near_hi=None if f.near_hi is None or math.isinf(f.hi) else (lambda d, g=f.near_hi, c=f.hi: g(-c * np.expm1(-d))),
    )


def _group_norm(f: SampledFunction, p: float, tol: float) -> ExtValue:
    """``|| f ||_{L^p(R_+, dx/x)}``, i.e. the ``L^p(ds)`` norm of ``s -> f(e^s)``."""
    g = _log_function(f)
    if math.isinf(g.lo) or math.isinf(g.hi):
        raise ValueError("group norms are implemented for supports compact in (0, inf)")
    return weighted_norm(g, p, WeightedMeasure(Setting.DUNKL, -0.5), 0.0, tol=tol)


def mult_convolution(F: SampledFunction, Kker: SampledFunction, q: float, p: float, r: float,
                     tol: float = 1e-9, samples: int = 257) -> tuple[float, float]:
    """Both sides of Young's inequality on ``(R_+, dx/x)``.

    Returns ``(lhs, rhs)`` with ``lhs = || F * K ||_q`` where
    ``F * K(x) = int F(y) K(x / y) dy / y`` and ``rhs = || K ||_r || F ||_p``.
    Both functions must have supports compact in ``(0, inf)``.  ``rhs`` is
    ``+inf`` when ``K`` is not in ``L^r``.

    Raises
    ------
    ValueError
        If ``1/q + 1 != 1/p + 1/r``.
    """
    inv = lambda t: 0.0 if math.isinf(t) else 1.0 / t  # noqa: E731
    if abs(inv(q) + 1.0 - inv(p) - inv(r)) > 1e-12:
        raise ValueError("Young's inequality needs 1/q + 1 = 1/p + 1/r")
    nF = _group_norm(F, p, tol)
    nK = _group_norm(Kker, r, tol)
    rhs = nF.value * nK.value
    if math.isinf(rhs):
        return math.nan, math.inf
    gF, gK = _log_function(F), _log_function(Kker)
    k_sing = []
    for end, idx in ((gK.lo, 0), (gK.hi, 1)):
        k_sing.append((end, gK.behavior(idx)))

    def conv(xi: float) -> float:
        # int gF(s) gK(xi - s) ds; K's structure maps to s = xi - point
        lo, hi = max(gF.lo, xi - gK.hi), min(gF.hi, xi - gK.lo)
        if not lo < hi:
            return 0.0
        sing = [Singularity(xi - end, beh.exponent, beh.log_power) for end, beh in k_sing]
        sing += [Singularity(e, gF.behavior(i).exponent, gF.behavior(i).log_power) for i, e in enumerate((gF.lo, gF.hi))]
        sing += _interior(gF)
        sing += [Singularity(xi - c, beh.exponent, beh.log_power) for c, beh in gK.singular_points]
        breaks = list(gF.breakpoints) + [xi - b for b in gK.breakpoints]

        def integrand(s, anchor, direction, offset):
            fv = gF.evaluate_near(s, anchor, direction, offset)
            kv = gK.evaluate_near(xi - s, xi - anchor, -direction, offset)
            return fv * kv

        return line_integral(integrand, lo, hi, singularities=sing, breaks=breaks, rtol=tol).value

    a, b = gF.lo + gK.lo, gF.hi + gK.hi
    kinks = sorted({gF.lo + gK.lo, gF.lo + gK.hi, gF.hi + gK.lo, gF.hi + gK.hi}
                   | {u + v for u in gF.breakpoints for v in (gK.lo, gK.hi)}
                   | {u + v for u in (gF.lo, gF.hi) for v in gK.breakpoints})
    if math.isinf(q):
        xs = np.unique(np.concatenate([np.linspace(a, b, samples), kinks]))
        vals = np.array([abs(conv(float(t))) for t in xs])
        return float(vals.max()), float(rhs)
    nodes, weights = _gl_nodes(16)
    total = 0.0
    for u, v in zip(kinks[:-1], kinks[1:]):
        edges = np.linspace(u, v, 9)
        for e0, e1 in zip(edges[:-1], edges[1:]):
            c, h = 0.5 * (e0 + e1), 0.5 * (e1 - e0)
            vals = np.array([abs(conv(float(c + h * t))) for t in nodes])
            total += h * float(np.sum(weights * vals**q))
    return float(total ** (1.0 / q)), float(rhs)
