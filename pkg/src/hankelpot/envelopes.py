"""Closed-form envelopes of the potential kernels and a grid verifier.

An envelope is the comparison function ``shape(x, y) * exp(-c * exp_arg(x, y))``
of a two-sided estimate.  :func:`envelope` returns ``shape`` and ``exp_arg``
separately; :func:`ratio_verify` evaluates kernel/envelope ratios on a log
grid, fits the exponential constants where they occur, and checks that the
resulting bracket does not move when the grid is refined.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Callable

import numpy as np

from .potentials import DEFAULT_TOL, _model_integral, kernel_values
from .settings import Kind, PotentialParams, Setting

__all__ = [
    "Region",
    "EnvelopeSpec",
    "GridSpec",
    "RatioReport",
    "envelope",
    "envelope_values",
    "aux_opposite_kernel",
    "aux_opposite_envelope",
    "ratio_verify",
    "assess_ratios",
    "sign_scan",
    "CHUNK",
]

#: Number of grid points handed to the kernel evaluator at once.  Fixed so
#: that results do not depend on the thread count.
CHUNK = 512
#: Relative change of the ratio spread tolerated under grid refinement.
STABILITY = 0.2


class Region(str, Enum):
    """Part of the plane a two-sided estimate is stated on."""

    SAME_SIGN_LOCAL = "same-local"
    SAME_SIGN_GLOBAL = "same-global"
    OPPOSITE_SIGN_LOCAL = "opposite-local"
    OPPOSITE_SIGN_GLOBAL = "opposite-global"
    ALL = "all"

    @classmethod
    def parse(cls, value: "Region | str") -> "Region":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower().replace("_", "-")
        aliases = {
            "local": cls.SAME_SIGN_LOCAL,
            "global": cls.SAME_SIGN_GLOBAL,
            "same-sign-local": cls.SAME_SIGN_LOCAL,
            "same-sign-global": cls.SAME_SIGN_GLOBAL,
            "opposite-sign-local": cls.OPPOSITE_SIGN_LOCAL,
            "opposite-sign-global": cls.OPPOSITE_SIGN_GLOBAL,
        }
        if key in aliases:
            return aliases[key]
        try:
            return cls(key)
        except ValueError:
            raise ValueError(f"unknown region {value!r}") from None

    @property
    def opposite(self) -> bool:
        return self in (Region.OPPOSITE_SIGN_LOCAL, Region.OPPOSITE_SIGN_GLOBAL)

    @property
    def local(self) -> bool:
        return self in (Region.SAME_SIGN_LOCAL, Region.OPPOSITE_SIGN_LOCAL)


@dataclass(frozen=True)
class EnvelopeSpec:
    """Which kernel estimate to evaluate."""

    setting: Setting
    kind: Kind
    alpha: float
    sigma: float
    region: Region = Region.ALL

    def __post_init__(self):
        object.__setattr__(self, "setting", Setting.parse(self.setting))
        object.__setattr__(self, "kind", Kind.parse(self.kind))
        object.__setattr__(self, "region", Region.parse(self.region))
        p = PotentialParams(self.alpha, self.sigma, self.kind)
        object.__setattr__(self, "alpha", p.alpha)
        object.__setattr__(self, "sigma", p.sigma)
        self.validate()

    @property
    def params(self) -> PotentialParams:
        return PotentialParams(self.alpha, self.sigma, self.kind)

    @property
    def has_exponential(self) -> bool:
        return self.kind is Kind.BESSEL and self.region in (
            Region.SAME_SIGN_GLOBAL,
            Region.OPPOSITE_SIGN_GLOBAL,
            Region.ALL,
        )

    def validate(self) -> None:
        a, s = self.alpha, self.sigma
        if self.kind is Kind.RIESZ:
            if s >= a + 1:
                raise ValueError(
                    f"Riesz kernel is infinite for sigma >= alpha + 1 (sigma={s}, alpha={a}); no envelope"
                )
            if self.setting is Setting.DUNKL and a < -0.5:
                raise ValueError("Dunkl Riesz kernel estimates require alpha >= -1/2")
            if self.region is not Region.ALL:
                raise ValueError("Riesz kernel estimates are stated on the whole domain (region 'all')")
        else:
            if self.setting is Setting.DUNKL and a <= -0.5:
                raise ValueError("Dunkl Bessel kernel estimates require alpha > -1/2")
        if self.setting is not Setting.DUNKL and self.region.opposite:
            raise ValueError("opposite-sign regions exist only in the Dunkl setting")


@dataclass(frozen=True)
class GridSpec:
    """Log-spaced grid ``count`` points in ``[lo, hi]`` for both coordinates.

    ``margin`` removes pairs with ``|x - y| < margin * (|x| + |y|)`` whenever
    the kernel is singular on the diagonal.
    """

    lo: float = 1e-2
    hi: float = 1e2
    count: int = 40
    margin: float = 1e-4

    def __post_init__(self):
        if self.count < 2:
            raise ValueError("grid count must be at least 2")
        if not (0 < self.lo < self.hi):
            raise ValueError("grid needs 0 < lo < hi")

    def axis(self) -> np.ndarray:
        return np.geomspace(self.lo, self.hi, self.count)

    def refined(self) -> "GridSpec":
        """Grid with halved log-spacing (contains the original nodes)."""
        return GridSpec(self.lo, self.hi, 2 * self.count - 1, self.margin)


@dataclass
class RatioReport:
    """Outcome of a kernel/envelope scan."""

    min_ratio: float
    max_ratio: float
    c_lower: float
    c_upper: float
    grid: int
    worst_point: tuple[float, float]
    label: str = ""
    refined_spread: float = math.nan
    passed: bool = False
    extra: dict = field(default_factory=dict)

    @property
    def spread(self) -> float:
        return self.max_ratio / self.min_ratio if self.min_ratio > 0 else math.inf

    def to_dict(self) -> dict:
        d = asdict(self)
        d["worst_point"] = list(self.worst_point)
        d["spread"] = self.spread
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


# ---------------------------------------------------------------------------
# envelope formulas
# ---------------------------------------------------------------------------


def _riesz_core(alpha, sigma, X, D):
    """``X^{-2a-1}`` times ``D^{2s-1}``, ``log(2X/D)`` or ``X^{2s-1}``."""
    with np.errstate(divide="ignore"):
        if sigma < 0.5:
            tail = D ** (2 * sigma - 1)
        elif sigma == 0.5:
            tail = np.log(2 * X / D)
        else:
            tail = X ** (2 * sigma - 1)
    return X ** (-2 * alpha - 1) * tail


def _local_bessel_prefix(alpha, sigma, X):
    if sigma > alpha + 1:
        return np.ones_like(X)
    if sigma == alpha + 1:
        with np.errstate(divide="ignore"):
            return np.log(1.0 / X)
    return np.zeros_like(X)


def _global_bessel_same(alpha, sigma, X, D):
    with np.errstate(divide="ignore"):
        if sigma < 0.5:
            tail = D ** (2 * sigma - 1)
        elif sigma == 0.5:
            tail = 1.0 + np.maximum(0.0, np.log(1.0 / D))
        else:
            tail = np.ones_like(D)
    return X ** (-2 * alpha - 1) * tail


def envelope_values(spec: EnvelopeSpec, x, y, check_region: bool = True):
    """Vectorized :func:`envelope`; returns ``(shape, exp_arg)`` arrays."""
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    a, s = spec.alpha, spec.sigma
    if spec.setting is not Setting.DUNKL and (np.any(x <= 0) or np.any(y <= 0)):
        raise ValueError("half-line envelopes need x, y > 0")
    X = np.abs(x) + np.abs(y)
    D = np.abs(x - y)
    opp = x * y < 0
    local = X <= 1.0
    if check_region and spec.region is not Region.ALL:
        want_opp = spec.region.opposite
        want_local = spec.region.local
        bad = (opp != want_opp) | (local != want_local)
        if bad.any():
            i = int(np.flatnonzero(bad.ravel())[0])
            raise ValueError(
                f"point ({x.ravel()[i]}, {y.ravel()[i]}) is outside region {spec.region.value}"
            )
    exp_arg = np.zeros_like(X)
    if spec.kind is Kind.RIESZ:
        shape = _riesz_core(a, s, X, D)
    else:
        with np.errstate(divide="ignore", over="ignore"):
            same_local = _local_bessel_prefix(a, s, X) + _riesz_core(a, s, X, D)
            same_global = _global_bessel_same(a, s, X, D)
            opp_local = _local_bessel_prefix(a, s, X) + X ** (2 * s - 2 * a - 2)
            opp_global = X ** (-2 * a - 3)
        shape = np.where(
            opp,
            np.where(local, opp_local, opp_global),
            np.where(local, same_local, same_global),
        )
        exp_arg = np.where(local, 0.0, np.where(opp, np.abs(x + y), D))
    if spec.setting is Setting.NONMODIFIED:
        shape = shape * (x * y) ** (a + 0.5)
    return shape, exp_arg


def envelope(spec: EnvelopeSpec, x: float, y: float) -> tuple[float, float]:
    """Envelope of the kernel named by ``spec`` at ``(x, y)``.

    Returns
    -------
    shape : float
        Algebraic factor of the estimate.
    exp_arg : float
        Quantity multiplying ``-c`` in the exponential factor (0 when the
        estimate has none).

    Raises
    ------
    ValueError
        If the point lies outside ``spec.region`` or the estimate does not
        exist for the parameters.
    """
    shape, arg = envelope_values(spec, x, y)
    return float(shape), float(arg)


def aux_opposite_kernel(alpha: float, sigma: float, x, y, tol: float = DEFAULT_TOL):
    """Model kernel governing opposite-sign Dunkl Bessel potentials.

    For ``x, y > 0`` it is

        (xy)^{-a-3/2} int_0^{xy} e^{-t - (x-y)^2/4t} t^{s-1/2} dt
            + int_{xy}^inf e^{-t - (x^2+y^2)/4t} t^{s-a-2} dt
        = (xy)^{s-a-1} [E_{s-1/2}(T, xy) + E_{a-s}(xy, T + 1/2)],

    with ``T = (x - y)^2 / (4xy)``.
    """
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    rho = x * y
    lrho = np.log(rho)
    with np.errstate(divide="ignore"):
        lT = 2 * np.log(np.abs(x - y)) - math.log(4.0) - lrho
    lT_half = np.logaddexp(lT, math.log(0.5))
    one = lambda s: np.ones_like(s)  # noqa: E731
    f0 = _model_integral(sigma - 0.5, lT, lrho, one, tol)
    f1 = _model_integral(alpha - sigma, lrho, lT_half, one, tol)
    lp = (sigma - alpha - 1) * lrho
    return np.exp(lp + f0.log_scale) * f0.mantissa + np.exp(lp + f1.log_scale) * f1.mantissa


def aux_opposite_envelope(alpha: float, sigma: float, x, y):
    """Two-sided envelope of :func:`aux_opposite_kernel` for ``x, y > 0``."""
    spec = EnvelopeSpec(Setting.DUNKL, Kind.BESSEL, alpha, sigma, Region.ALL)
    return envelope_values(spec, np.asarray(x, dtype=float), -np.asarray(y, dtype=float), check_region=False)


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------


def _grid_points(spec: EnvelopeSpec, grid: GridSpec):
    g = grid.axis()
    X, Y = np.meshgrid(g, g, indexing="ij")
    x, y = X.ravel(), Y.ravel()
    if spec.setting is Setting.DUNKL:
        x = np.concatenate([x, x])
        y = np.concatenate([y, -y])
    if spec.sigma <= 0.5 and grid.margin > 0:
        # pairs on the edge of the excluded diagonal band belong to the
        # admissible region; sampling them at every resolution keeps the
        # supremum of the ratio near the diagonal from drifting
        edge = g * (1.0 + grid.margin) / (1.0 - grid.margin)
        ex = np.concatenate([g, edge])
        ey = np.concatenate([edge, g])
        if spec.setting is Setting.DUNKL:
            ex, ey = np.concatenate([ex, -ex]), np.concatenate([ey, -ey])
        x = np.concatenate([x, ex])
        y = np.concatenate([y, ey])
    keep = np.ones(x.size, dtype=bool)
    if spec.region is not Region.ALL:
        opp = x * y < 0
        local = np.abs(x) + np.abs(y) <= 1.0
        keep &= (opp == spec.region.opposite) & (local == spec.region.local)
    if spec.sigma <= 0.5:
        band = grid.margin * (1.0 - 1e-9) * (np.abs(x) + np.abs(y))
        keep &= ~((x * y > 0) & (np.abs(x - y) < band))
    return x[keep], y[keep]


def _chunked(fn: Callable, x, y, threads: int):
    """Apply ``fn`` to fixed-size chunks, optionally in parallel, in order."""
    starts = list(range(0, x.size, CHUNK))
    work = [(x[i : i + CHUNK], y[i : i + CHUNK]) for i in starts]
    if threads > 1 and len(work) > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            parts = list(ex.map(lambda w: fn(*w), work))
    else:
        parts = [fn(*w) for w in work]
    if not parts:
        return np.zeros(0)
    return np.concatenate(parts)


def _fit_slope(z, l, nbins=16, upper=True):
    """Slope magnitude ``c`` of the line through bin-wise extremes of ``l``."""
    order = np.argsort(z, kind="stable")
    zb, lb = [], []
    for chunk in np.array_split(order, min(nbins, max(2, z.size // 4))):
        if chunk.size == 0:
            continue
        zz, ll = z[chunk], l[chunk]
        j = np.argmax(ll) if upper else np.argmin(ll)
        zb.append(zz[j])
        lb.append(ll[j])
    zb, lb = np.asarray(zb), np.asarray(lb)
    if np.ptp(zb) == 0:
        return 0.0
    slope = np.polyfit(zb, lb, 1)[0]
    return float(max(0.0, -slope))


def assess_ratios(
    values, shape, exp_arg, x, y, exponential: bool, constants: tuple[float, float] | None = None
) -> RatioReport:
    """Bracket ``values / (shape exp(-c exp_arg))`` over a point set.

    For estimates with an exponential factor the constants are fitted by
    least squares through bin-wise maxima (``c_upper``) and minima
    (``c_lower``) of ``log(values / shape)`` against ``exp_arg``, unless
    ``constants = (c_lower, c_upper)`` is given.
    """
    values = np.asarray(values, dtype=float)
    shape = np.asarray(shape, dtype=float)
    if values.size == 0:
        raise ValueError("no grid points in the requested region")
    if np.any(~np.isfinite(values)):
        raise ValueError("kernel is infinite on the grid; divergent kernels cannot be verified")
    c_lo = c_up = 0.0
    if np.any(values <= 0):
        i = int(np.argmin(values))
        return RatioReport(
            min_ratio=float(values[i] / shape[i]),
            max_ratio=float(np.max(values / shape)),
            c_lower=0.0,
            c_upper=0.0,
            grid=int(values.size),
            worst_point=(float(x[i]), float(y[i])),
            extra={"nonpositive_kernel": True},
        )
    logr = np.log(values) - np.log(shape)
    lo_r = up_r = logr
    if exponential and np.any(exp_arg > 0):
        if constants is None:
            c_lo = _fit_slope(exp_arg, logr, upper=False)
            c_up = _fit_slope(exp_arg, logr, upper=True)
        else:
            c_lo, c_up = constants
        lo_r = logr + c_lo * exp_arg
        up_r = logr + c_up * exp_arg
    i_min = int(np.argmin(lo_r))
    i_max = int(np.argmax(up_r))
    mid = 0.5 * (lo_r[i_min] + up_r[i_max])
    worst = i_max if up_r[i_max] - mid >= mid - lo_r[i_min] else i_min
    return RatioReport(
        min_ratio=float(np.exp(lo_r[i_min])),
        max_ratio=float(np.exp(up_r[i_max])),
        c_lower=c_lo,
        c_upper=c_up,
        grid=int(values.size),
        worst_point=(float(x[worst]), float(y[worst])),
    )


def _scan(spec: EnvelopeSpec, grid: GridSpec, tol: float, threads: int, constants=None) -> RatioReport:
    x, y = _grid_points(spec, grid)
    params = spec.params
    vals = _chunked(lambda a, b: kernel_values(spec.setting, params, a, b, tol=tol)[0], x, y, threads)
    shape, arg = envelope_values(spec, x, y, check_region=False)
    return assess_ratios(vals, shape, arg, x, y, spec.has_exponential, constants)


def _aux_scan(alpha, sigma, grid: GridSpec, tol: float, threads: int, local: bool, constants=None) -> RatioReport:
    g = grid.axis()
    X, Y = np.meshgrid(g, g, indexing="ij")
    x, y = X.ravel(), Y.ravel()
    keep = (x + y <= 1.0) == local
    x, y = x[keep], y[keep]
    vals = _chunked(lambda a, b: aux_opposite_kernel(alpha, sigma, a, b, tol=tol), x, y, threads)
    shape, arg = aux_opposite_envelope(alpha, sigma, x, y)
    return assess_ratios(vals, shape, arg, x, y, not local, constants)


def _label(spec: EnvelopeSpec) -> str:
    return f"{spec.setting.value}/{spec.kind.value} alpha={spec.alpha:g} sigma={spec.sigma:g} region={spec.region.value}"


def ratio_verify(
    spec: EnvelopeSpec,
    grid: GridSpec | None = None,
    tol: float = DEFAULT_TOL,
    threads: int = 1,
    auxiliary: bool = False,
) -> RatioReport:
    """Scan kernel/envelope ratios and check refinement stability.

    The scan is run on ``grid`` and on ``grid.refined()``.  Exponential
    constants are fitted on the first grid and kept fixed on the second, so
    the comparison measures the residual spread of one fitted model.  The
    report passes when every kernel value is positive and finite and the
    spread ``max_ratio / min_ratio`` changes by at most 20% under refinement.

    Parameters
    ----------
    spec : EnvelopeSpec
    grid : GridSpec, optional
        Defaults to 40 log-spaced points in ``[1e-2, 1e2]``.
    tol : float
        Relative accuracy of the kernel evaluations.
    threads : int
        Worker threads; the result does not depend on this value.
    auxiliary : bool
        Verify the opposite-sign model kernel :func:`aux_opposite_kernel` on
        ``x, y > 0`` instead of a potential kernel; ``spec.region`` must then
        be ``same-local`` or ``same-global``.
    """
    grid = grid or GridSpec()
    if auxiliary:
        if spec.alpha <= -0.5:
            raise ValueError("the opposite-sign model kernel estimate requires alpha > -1/2")
        local = spec.region.local
        coarse = _aux_scan(spec.alpha, spec.sigma, grid, tol, threads, local)
        fixed = (coarse.c_lower, coarse.c_upper)
        fine = _aux_scan(spec.alpha, spec.sigma, grid.refined(), tol, threads, local, fixed)
        label = f"aux alpha={spec.alpha:g} sigma={spec.sigma:g} region={'local' if local else 'global'}"
    else:
        coarse = _scan(spec, grid, tol, threads)
        fine = _scan(spec, grid.refined(), tol, threads, (coarse.c_lower, coarse.c_upper))
        label = _label(spec)
    coarse.label = label
    coarse.refined_spread = fine.spread
    ok = (
        coarse.min_ratio > 0
        and fine.min_ratio > 0
        and math.isfinite(coarse.spread)
        and math.isfinite(fine.spread)
        and abs(fine.spread / coarse.spread - 1.0) <= STABILITY
    )
    coarse.passed = bool(ok)
    return coarse


def sign_scan(setting: Setting | str, params: PotentialParams, grid: GridSpec | None = None, tol: float = 1e-6):
    """Count negative kernel values on an opposite-sign Dunkl grid.

    Returns the number of grid points with a negative kernel and the most
    negative point (or ``None``).  Nothing is asserted about the outcome.
    """
    grid = grid or GridSpec(count=20)
    g = grid.axis()
    X, Y = np.meshgrid(g, -g, indexing="ij")
    vals, _ = kernel_values(setting, params, X.ravel(), Y.ravel(), tol=tol)
    neg = vals < 0
    if not neg.any():
        return 0, None
    i = int(np.argmin(vals))
    return int(neg.sum()), (float(X.ravel()[i]), float(Y.ravel()[i]), float(vals[i]))
