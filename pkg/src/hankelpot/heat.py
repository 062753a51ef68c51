"""Heat kernels of the three Hankel-type settings.

With ``u = x y / (2t)`` the modified heat kernel is

    W_t(x, y) = (2t)^{-alpha-1} exp(-(x - y)^2 / 4t) * u^{-alpha} e^{-u} I_alpha(u),

which keeps every exponential in a single, non-overflowing factor.  The
non-modified kernel multiplies by ``(x y)^{alpha + 1/2}`` and the Dunkl
kernel is

    (1/2) (2t)^{-alpha-1} exp(-(|x| - |y|)^2 / 4t) * e^{-|u|} Phi_alpha(u).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import bessel
from .settings import Setting

__all__ = ["HeatPoint", "heat_kernel", "heat_kernel_values", "heat_asymptotic_envelope"]


@dataclass(frozen=True)
class HeatPoint:
    """Space-time point ``(x, y, t)`` with ``t > 0``."""

    x: float
    y: float
    t: float

    def __post_init__(self):
        if not self.t > 0:
            raise ValueError("heat kernels need t > 0")


def _check(setting: Setting, x, y, t):
    if np.any(np.asarray(t) <= 0):
        raise ValueError("heat kernels need t > 0")
    if setting is not Setting.DUNKL and (np.any(np.asarray(x) < 0) or np.any(np.asarray(y) < 0)):
        raise ValueError(f"{setting.value} heat kernel is defined for x, y >= 0")


def heat_kernel_values(setting: Setting | str, alpha: float, x, y, t):
    """Vectorized heat kernel; arguments broadcast against each other."""
    setting = Setting.parse(setting)
    alpha = bessel.check_order(alpha)
    x, y, t = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (x, y, t)))
    _check(setting, x, y, t)
    ax, ay = np.abs(x), np.abs(y)
    u = x * y / (2.0 * t)
    log_front = -(alpha + 1.0) * np.log(2.0 * t) - (ax - ay) ** 2 / (4.0 * t)
    if setting is Setting.DUNKL:
        profile = np.asarray(bessel.dunkl_profile_scaled(alpha, u))
        out = 0.5 * np.exp(log_front) * profile
    else:
        out = np.exp(log_front) * np.asarray(bessel.phi_i_scaled(alpha, u))
        if setting is Setting.NONMODIFIED:
            with np.errstate(divide="ignore"):
                out = out * np.exp((alpha + 0.5) * np.log(x * y))
    return out[()] if out.ndim == 0 else out


def heat_kernel(setting: Setting | str, alpha: float, p: HeatPoint) -> float:
    """Heat kernel at a single point.

    Positive in the half-line settings; the Dunkl kernel can be negative when
    ``alpha < -1/2`` and ``x y < 0``.  A zero coordinate is handled through the
    finite limit of ``u^{-alpha} I_alpha(u)`` at the origin.
    """
    return float(heat_kernel_values(setting, alpha, p.x, p.y, p.t))


def heat_asymptotic_envelope(setting: Setting | str, alpha: float, p: HeatPoint) -> float:
    """Piecewise comparison function of the heat kernel.

    * ``|xy| <= t``: ``t^{-alpha-1} exp(-(x^2 + y^2) / 4t)``;
    * ``xy > t``: ``(xy)^{-alpha-1/2} t^{-1/2} exp(-(x - y)^2 / 4t)``;
    * ``xy < -t`` (Dunkl only): ``|xy|^{-alpha-3/2} t^{1/2} exp(-(|x| - |y|)^2 / 4t)``.

    Raises
    ------
    ValueError
        For the non-modified setting, or for the Dunkl setting with
        ``alpha <= -1/2`` where no such two-sided bound holds.
    """
    setting = Setting.parse(setting)
    alpha = bessel.check_order(alpha)
    if setting is Setting.NONMODIFIED:
        raise ValueError("the heat envelope is provided for the modified and Dunkl settings")
    if setting is Setting.DUNKL and alpha <= -0.5:
        raise ValueError("the Dunkl heat envelope requires alpha > -1/2")
    x, y, t = float(p.x), float(p.y), float(p.t)
    _check(setting, x, y, t)
    xy = x * y
    if abs(xy) <= t:
        return float(np.exp(-(alpha + 1.0) * np.log(t) - (x * x + y * y) / (4.0 * t)))
    if xy > 0:
        return float(np.exp(-(alpha + 0.5) * np.log(xy) - 0.5 * np.log(t) - (x - y) ** 2 / (4.0 * t)))
    ax, ay = abs(x), abs(y)
    return float(np.exp(-(alpha + 1.5) * np.log(-xy) + 0.5 * np.log(t) - (ax - ay) ** 2 / (4.0 * t)))
