"""Test functions with declared singular structure, and weighted measures.

A :class:`SampledFunction` is a vectorized evaluator together with the facts
a quadrature needs: the support, interior breakpoints, and the power
behavior at the ends of the support (or at infinity).  Endpoint behavior is
``|f(y)| ~ d^e * log(2/d)^{-kappa}`` with ``d`` the distance to the end, and
``|f(y)| ~ |y|^e * log|y|^{-kappa}`` at an infinite end.  These exponents
decide convergence of potentials and norms analytically, so divergent
integrals are reported as such rather than chased numerically.

Functions that are singular at an end of their support may carry
``near_lo`` / ``near_hi`` evaluators taking the distance ``d`` to that end.
Quadrature uses them so that points closer to the end than the float
spacing still see the correct value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Callable

import numpy as np

from .bessel import check_order
from .settings import Setting

__all__ = [
    "Smoothness",
    "PowerBehavior",
    "SampledFunction",
    "WeightedMeasure",
    "indicator",
    "bump",
    "gaussian",
    "power_function",
    "from_callable",
]

Evaluator = Callable[[np.ndarray], np.ndarray]


class Smoothness(str, Enum):
    """Regularity of a function on the interior of its support."""

    SMOOTH = "smooth"
    POWER_SINGULAR_ENDPOINTS = "power-singular-endpoints"


@dataclass(frozen=True)
class PowerBehavior:
    """Endpoint behavior ``d^exponent * log(2/d)^{-log_power}``.

    At an infinite end ``d`` is replaced by ``|y|`` and ``log(2/d)`` by
    ``log|y|``.  ``exponent = -inf`` at an infinite end means faster than
    any power.
    """

    exponent: float
    log_power: float = 0.0

    def scaled(self, p: float) -> "PowerBehavior":
        """Behavior of ``|f|^p``."""
        return PowerBehavior(self.exponent * p, self.log_power * p)

    def shifted(self, c: float) -> "PowerBehavior":
        """Behavior after multiplying by ``d^c``."""
        return PowerBehavior(self.exponent + c, self.log_power)


_SMOOTH_END = PowerBehavior(0.0)


def _at(anchor: np.ndarray, point: float) -> np.ndarray:
    """Rows anchored at ``point`` (up to rounding of a computed anchor)."""
    return np.abs(anchor - point) <= 1e-14 * max(abs(point), 1e-300)


@dataclass(frozen=True)
class SampledFunction:
    """A real function given by a vectorized evaluator and a support hint.

    Parameters
    ----------
    evaluator : callable
        Maps an array of points to values; called only inside ``support``.
        Must be safe for concurrent calls.
    support : (float, float)
        ``(lo, hi)`` with ``lo < hi``; the function vanishes outside.  Ends
        may be infinite.  A rapidly decaying function should be given a
        finite support hint beyond which it is negligible.
    smoothness : Smoothness
    singular_exponents : (PowerBehavior | None, PowerBehavior | None), optional
        Behavior at ``lo`` and ``hi``.  ``None`` means bounded and smooth up
        to a finite end; an infinite end must be described.
    nonnegative : bool
        Whether ``f >= 0``; divergent integrals of nonnegative functions are
        ``+inf``, otherwise ``f`` is outside the domain.
    breakpoints : tuple of float
        Interior points where ``f`` is not smooth.
    panel_width : float, optional
        Oscillation scale; quadrature panels are not made longer than this.
    near_lo, near_hi : callable, optional
        ``d -> f(lo + d)`` and ``d -> f(hi - d)`` evaluated from the exact
        distance ``d``.
    name : str
    singular_points : tuple of (float, PowerBehavior)
        Interior points ``c`` where ``f`` behaves like ``|y - c|^e`` (times
        the declared logarithm) on both sides.
    near_point : callable, optional
        ``(c, d) -> f(c + d)`` for a singular point ``c`` and a signed
        offset ``d`` known exactly.
    """

    evaluator: Evaluator
    support: tuple[float, float]
    smoothness: Smoothness = Smoothness.SMOOTH
    singular_exponents: tuple[PowerBehavior | None, PowerBehavior | None] | None = None
    nonnegative: bool = True
    breakpoints: tuple[float, ...] = ()
    panel_width: float | None = None
    near_lo: Evaluator | None = field(default=None, compare=False)
    near_hi: Evaluator | None = field(default=None, compare=False)
    name: str = ""
    singular_points: tuple[tuple[float, PowerBehavior], ...] = ()
    near_point: Callable[[float, np.ndarray], np.ndarray] | None = field(default=None, compare=False)

    def __post_init__(self):
        lo, hi = (float(v) for v in self.support)
        if not lo < hi:
            raise ValueError(f"support must satisfy lo < hi, got {self.support!r}")
        object.__setattr__(self, "support", (lo, hi))
        object.__setattr__(self, "breakpoints", tuple(sorted(float(b) for b in self.breakpoints if lo < b < hi)))
        ends = self.singular_exponents or (None, None)
        for end, beh in zip((lo, hi), ends):
            if math.isinf(end) and beh is None:
                raise ValueError("an infinite support end needs a PowerBehavior describing the decay")
        object.__setattr__(self, "singular_exponents", tuple(ends))
        pts = tuple(sorted((float(c), beh) for c, beh in self.singular_points if lo < c < hi))
        object.__setattr__(self, "singular_points", pts)
        object.__setattr__(self, "breakpoints", tuple(sorted(set(self.breakpoints) | {c for c, _ in pts})))

    # -- evaluation --------------------------------------------------------

    @property
    def lo(self) -> float:
        return self.support[0]

    @property
    def hi(self) -> float:
        return self.support[1]

    def behavior(self, end: int) -> PowerBehavior:
        """Behavior at ``lo`` (``end=0``) or ``hi`` (``end=1``)."""
        beh = self.singular_exponents[end]
        return _SMOOTH_END if beh is None else beh

    def __call__(self, y):
        y = np.asarray(y, dtype=float)
        inside = (y > self.lo) & (y < self.hi)
        out = np.zeros(y.shape)
        if inside.any():
            with np.errstate(all="ignore"):
                out[inside] = np.asarray(self.evaluator(y[inside]), dtype=float)
        return out[()] if out.ndim == 0 else out

    def evaluate_near(self, y, anchor, direction, offset):
        """Values at ``y = anchor + direction * offset`` using endpoint forms.

        ``anchor`` and ``direction`` broadcast against ``y``; rows anchored
        at a support end with a distance evaluator use the exact offset.
        """
        y = np.asarray(y, dtype=float)
        out = self(y)
        anchor = np.broadcast_to(anchor, y.shape)
        direction = np.broadcast_to(direction, y.shape)
        offset = np.asarray(offset, dtype=float)
        for end, form, sgn in ((self.lo, self.near_lo, 1.0), (self.hi, self.near_hi, -1.0)):
            if form is None or math.isinf(end):
                continue
            m = _at(anchor, end) & (direction == sgn) & (offset > 0) & (offset < self.hi - self.lo)
            if m.any():
                with np.errstate(all="ignore"):
                    out[m] = np.asarray(form(offset[m]), dtype=float)
        if self.near_point is not None:
            for c, _ in self.singular_points:
                m = _at(anchor, c) & (offset > 0)
                if m.any():
                    with np.errstate(all="ignore"):
                        out[m] = np.asarray(self.near_point(c, direction[m] * offset[m]), dtype=float)
        return out

    # -- transformations ---------------------------------------------------

    def dilate(self, r: float) -> "SampledFunction":
        """``f_r(y) = f(r y)`` for ``r > 0``."""
        r = float(r)
        if not r > 0:
            raise ValueError("dilation factor must be positive")
        ev = self.evaluator
        return replace(
            self,
            evaluator=lambda y: ev(r * np.asarray(y)),
            support=(self.lo / r, self.hi / r),
            breakpoints=tuple(b / r for b in self.breakpoints),
            singular_points=tuple((c / r, beh) for c, beh in self.singular_points),
            near_point=None if self.near_point is None else (lambda c, d, g=self.near_point: g(r * c, r * np.asarray(d))),
            panel_width=None if self.panel_width is None else self.panel_width / r,
            near_lo=None if self.near_lo is None else (lambda d, g=self.near_lo: g(r * np.asarray(d))),
            near_hi=None if self.near_hi is None else (lambda d, g=self.near_hi: g(r * np.asarray(d))),
            name=f"{self.name}_r{r:g}" if self.name else "",
        )

    def times_power(self, c: float) -> "SampledFunction":
        """``y -> |y|^c f(y)``; requires a support not containing 0 inside."""
        c = float(c)
        if self.lo < 0 < self.hi:
            raise ValueError("times_power needs a support on one side of the origin")
        ev = self.evaluator
        lo_beh, hi_beh = self.singular_exponents
        if self.lo == 0 or (self.hi == 0):
            zero_end = 0 if self.lo == 0 else 1
            ends = [lo_beh, hi_beh]
            ends[zero_end] = self.behavior(zero_end).shifted(c)
            lo_beh, hi_beh = ends
        if math.isinf(self.hi):
            hi_beh = self.behavior(1).shifted(c)
        if math.isinf(self.lo):
            lo_beh = self.behavior(0).shifted(c)
        smooth = self.smoothness
        if (self.lo == 0 or self.hi == 0) and c != 0:
            smooth = Smoothness.POWER_SINGULAR_ENDPOINTS
        lo, hi = self.lo, self.hi
        near_lo = self.near_lo
        near_hi = self.near_hi
        return replace(
            self,
            evaluator=lambda y: np.abs(np.asarray(y)) ** c * ev(y),
            singular_exponents=(lo_beh, hi_beh),
            smoothness=smooth,
            near_lo=None if near_lo is None else (lambda d: np.abs(lo + np.asarray(d)) ** c * near_lo(d)),
            near_hi=None if near_hi is None else (lambda d: np.abs(hi - np.asarray(d)) ** c * near_hi(d)),
            near_point=None if self.near_point is None else (
                lambda x, d, g=self.near_point: np.abs(x + np.asarray(d)) ** c * g(x, d)),
            name=f"{self.name}*|y|^{c:g}" if self.name else "",
        )

    def scaled(self, c: float) -> "SampledFunction":
        """``c f``."""
        c = float(c)
        ev = self.evaluator
        return replace(
            self,
            evaluator=lambda y: c * ev(y),
            nonnegative=self.nonnegative and c >= 0,
            near_lo=None if self.near_lo is None else (lambda d, g=self.near_lo: c * g(d)),
            near_hi=None if self.near_hi is None else (lambda d, g=self.near_hi: c * g(d)),
            near_point=None if self.near_point is None else (lambda x, d, g=self.near_point: c * g(x, d)),
        )

    def reflected(self) -> "SampledFunction":
        """``y -> f(-y)``."""
        ev = self.evaluator
        lo_beh, hi_beh = self.singular_exponents
        return replace(
            self,
            evaluator=lambda y: ev(-np.asarray(y)),
            support=(-self.hi, -self.lo),
            singular_exponents=(hi_beh, lo_beh),
            breakpoints=tuple(-b for b in self.breakpoints),
            singular_points=tuple((-c, beh) for c, beh in self.singular_points),
            near_point=None if self.near_point is None else (lambda c, d, g=self.near_point: g(-c, -np.asarray(d))),
            near_lo=self.near_hi,
            near_hi=self.near_lo,
        )


@dataclass(frozen=True)
class WeightedMeasure:
    """``d mu_alpha = x^{2 alpha + 1} dx`` on the half-line (modified setting),
    ``dx`` (non-modified setting) or ``|x|^{2 alpha + 1} dx`` on the line
    (Dunkl setting), with a power weight exponent ``a`` for norms
    ``|| x^a f ||``.
    """

    setting: Setting = Setting.MODIFIED
    alpha: float = 0.0
    power_weight_exponent: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "setting", Setting.parse(self.setting))
        object.__setattr__(self, "alpha", check_order(self.alpha))

    @property
    def density_exponent(self) -> float:
        """Exponent ``w`` of the density ``|x|^w``."""
        return 0.0 if self.setting is Setting.NONMODIFIED else 2.0 * self.alpha + 1.0

    @property
    def whole_line(self) -> bool:
        return self.setting is Setting.DUNKL

    def density(self, x):
        with np.errstate(divide="ignore"):
            return np.abs(np.asarray(x, dtype=float)) ** self.density_exponent


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------


def from_callable(func: Evaluator, lo: float, hi: float, **kwargs) -> SampledFunction:
    """Wrap an arbitrary vectorized callable."""
    return SampledFunction(evaluator=func, support=(lo, hi), **kwargs)


def indicator(lo: float, hi: float) -> SampledFunction:
    """Characteristic function of ``(lo, hi)``."""
    return SampledFunction(
        evaluator=lambda y: np.ones(np.shape(y)),
        support=(lo, hi),
        name=f"chi({lo:g},{hi:g})",
    )


def bump(lo: float, hi: float, height: float = 1.0) -> SampledFunction:
    """``height * exp(-1 / (1 - t^2))`` with ``t`` mapping ``(lo, hi)`` onto ``(-1, 1)``.

    A ``C^infinity`` function with compact support ``[lo, hi]``.
    """
    c, h = 0.5 * (lo + hi), 0.5 * (hi - lo)

    def ev(y):
        t = (np.asarray(y, dtype=float) - c) / h
        one = (1.0 - t) * (1.0 + t)
        with np.errstate(divide="ignore", over="ignore"):
            return np.where(one > 0, height * np.exp(-1.0 / one), 0.0)

    return SampledFunction(evaluator=ev, support=(lo, hi), name=f"bump({lo:g},{hi:g})")


def gaussian(eps: float, cutoff: float = 745.0) -> SampledFunction:
    """``exp(-eps y^2)`` on ``(0, inf)``, truncated where it underflows."""
    eps = float(eps)
    hi = math.sqrt(cutoff / eps)
    return SampledFunction(
        evaluator=lambda y: np.exp(-eps * np.asarray(y) ** 2),
        support=(0.0, hi),
        name=f"gauss({eps:g})",
    )


def power_function(
    exponent: float,
    lo: float = 0.0,
    hi: float = math.inf,
    log_power: float = 0.0,
    log_base: str = "none",
) -> SampledFunction:
    """``y^exponent`` on ``(lo, hi)``, optionally divided by a logarithm.

    ``log_base`` selects the logarithmic factor: ``"small"`` divides by
    ``log(2/y)^log_power`` (for supports in ``(0, 1]``), ``"large"`` by
    ``log(y)^log_power`` (for supports in ``(1, inf)``).
    """
    e, k = float(exponent), float(log_power)
    if log_base not in {"none", "small", "large"}:
        raise ValueError("log_base must be none, small or large")

    def ev(y):
        y = np.asarray(y, dtype=float)
        out = y**e
        if log_base == "small":
            out = out / np.log(2.0 / y) ** k
        elif log_base == "large":
            out = out / np.log(y) ** k
        return out

    lo_beh = hi_beh = None
    if lo == 0:
        lo_beh = PowerBehavior(e, k if log_base == "small" else 0.0)
    if math.isinf(hi):
        hi_beh = PowerBehavior(e, k if log_base == "large" else 0.0)
    singular = lo == 0 and e != 0
    return SampledFunction(
        evaluator=ev,
        support=(lo, hi),
        smoothness=Smoothness.POWER_SINGULAR_ENDPOINTS if singular else Smoothness.SMOOTH,
        singular_exponents=(lo_beh, hi_beh),
        name=f"y^{e:g}",
    )
