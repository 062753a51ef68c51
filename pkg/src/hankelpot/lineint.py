"""Integration over an interval of the real line with known singular structure.

The interval is cut at every declared breakpoint and singular point.  Each
piece is integrated from its singular end in the distance variable, so an
integrand may use the exact offset from that end:

* power singularity ``d^beta`` with ``-1 < beta < 0``: the substitution
  ``d = L v^{1/(beta+1)}`` of :func:`hankelpot.quadrature.integrate`;
* borderline ``d^{-1} log(2/d)^{-kappa}`` with ``kappa > 1``: the
  substitution ``d = L exp(1 - 1/w)``, after which the integrand behaves
  like ``w^{kappa - 2}``;
* infinite ends: ``y = B / v``.

A piece with singular behavior at both ends is split at its midpoint.
Convergence of the whole integral is decided from the declared exponents
(:func:`local_convergent`, :func:`tail_convergent`), never numerically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .quadrature import integrate

__all__ = [
    "Singularity",
    "Tail",
    "LineResult",
    "line_integral",
    "local_convergent",
    "tail_convergent",
    "EXPONENT_TOL",
]

#: Exponents closer than this are treated as equal in convergence tests.
EXPONENT_TOL = 1e-12

# offsets down to exp(-_LOG_TINY) are representable with full relative accuracy
_LOG_TINY = 690.0
# smallest cutoff depth when the integrand overflows near the end; the model
# remainder then neglects relative corrections of order e^{-30}
_LOG_MIN = 30.0

LineIntegrand = Callable[[np.ndarray, np.ndarray, np.ndarray, np.ndarray], np.ndarray]


def local_convergent(exponent: float, log_power: float = 0.0) -> bool:
    """Whether ``d^e log(2/d)^{-kappa}`` is integrable at ``d = 0``."""
    if exponent > -1.0 + EXPONENT_TOL:
        return True
    if exponent >= -1.0 - EXPONENT_TOL:
        return log_power > 1.0 + EXPONENT_TOL
    return False


def tail_convergent(exponent: float, log_power: float = 0.0) -> bool:
    """Whether ``y^e log(y)^{-kappa}`` is integrable at ``y = inf``."""
    if exponent < -1.0 - EXPONENT_TOL:
        return True
    if exponent <= -1.0 + EXPONENT_TOL:
        return log_power > 1.0 + EXPONENT_TOL
    return False


@dataclass(frozen=True)
class Singularity:
    """Integrand behaves like ``|y - where|^exponent log(2/|y-where|)^{-log_power}``."""

    where: float
    exponent: float = 0.0
    log_power: float = 0.0


@dataclass(frozen=True)
class Tail:
    """Integrand behaves like ``|y|^exponent log|y|^{-log_power}`` at an infinite end."""

    exponent: float
    log_power: float = 0.0


@dataclass
class LineResult:
    value: float
    error: float
    converged: bool


def _merge(points: Sequence[Singularity]) -> dict[float, tuple[float, float]]:
    out: dict[float, tuple[float, float]] = {}
    for s in points:
        e, k = out.get(s.where, (0.0, 0.0))
        out[s.where] = (e + s.exponent, k + s.log_power)
    return out


def _mode(exponent: float, log_power: float) -> tuple[str, float]:
    """Substitution for an end: ("plain" | "power" | "log", parameter)."""
    if abs(exponent + 1.0) <= EXPONENT_TOL:
        return "log", log_power
    if exponent < 0.0 or log_power < 0.0:
        # a logarithmic blow-up alone is flattened like a mild power
        beta = exponent if exponent < 0.0 else -0.25
        return "power", max(beta, -1.0 + 1e-6)
    return "plain", 0.0


def line_integral(
    integrand: LineIntegrand,
    lo: float,
    hi: float,
    *,
    singularities: Sequence[Singularity] = (),
    breaks: Sequence[float] = (),
    tails: tuple[Tail | None, Tail | None] = (None, None),
    panel_width: float | None = None,
    rtol: float = 1e-10,
    atol: float = 0.0,
    max_level: int = 9,
) -> LineResult:
    """Integrate over ``(lo, hi)``.

    Parameters
    ----------
    integrand : callable
        ``integrand(y, anchor, direction, offset)`` with ``y = anchor +
        direction * offset``.  ``anchor`` and ``direction`` have one entry
        per row (shape ``(rows, 1)``); on tail pieces ``anchor`` is ``nan``
        and ``offset`` is ``|y|``.
    lo, hi : float
        Interval ends; infinite ends need the matching entry of ``tails``.
    singularities : sequence of Singularity
        Points with singular or non-smooth behavior (exponents at the same
        point add up).
    breaks : sequence of float
        Extra cut points.
    panel_width : float, optional
        Maximal length of a regular piece.
    rtol, atol : float
        Tolerances, applied to every piece.
    """
    sing = {w: v for w, v in _merge(singularities).items() if lo <= w <= hi}
    pts = {p for p in breaks if lo < p < hi} | set(sing)
    finite = [p for p in (lo, hi) if math.isfinite(p)]
    pts |= set(finite)
    pts = sorted(p for p in pts if math.isfinite(p))
    if not pts:
        pts = [0.0]

    # rows: anchor, direction, length, mode, parameter
    rows: list[tuple[float, float, float, str, float]] = []

    def add(a: float, b: float):
        ea = sing.get(a, (0.0, 0.0))
        eb = sing.get(b, (0.0, 0.0))
        ma = _mode(*ea)
        mb = _mode(*eb)
        pieces: list[tuple[float, float, float, tuple[str, float]]] = []
        if ma[0] != "plain" and mb[0] != "plain":
            m = 0.5 * (a + b)
            pieces.append((a, 1.0, m - a, ma))
            pieces.append((b, -1.0, b - m, mb))
        elif mb[0] != "plain":
            pieces.append((b, -1.0, b - a, mb))
        else:
            pieces.append((a, 1.0, b - a, ma))
        for anchor, direction, length, mode in pieces:
            if length <= 0:
                continue
            if panel_width is None or length <= panel_width:
                rows.append((anchor, direction, length, *mode))
                continue
            n = int(math.ceil(length / panel_width))
            h = length / n
            rows.append((anchor, direction, h, *mode))
            for j in range(1, n):
                start = anchor + direction * j * h
                if direction > 0:
                    rows.append((start, 1.0, h, "plain", 0.0))
                else:
                    rows.append((start - h, 1.0, h, "plain", 0.0))

    for a, b in zip(pts[:-1], pts[1:]):
        add(a, b)

    total = 0.0
    error = 0.0
    scale = 0.0  # sum of |piece values|, the conditioning scale of the sum
    ok = True
    if rows:
        anchor = np.array([r[0] for r in rows])
        direction = np.array([r[1] for r in rows])
        length = np.array([r[2] for r in rows])
        modes = np.array([r[3] for r in rows])
        param = np.array([r[4] for r in rows])

        regular = modes != "log"
        if regular.any():
            idx = np.flatnonzero(regular)
            beta = np.where(modes[idx] == "power", param[idx], 0.0)

            def f_regular(v, dl, dr, r):
                g = idx[r]
                an = anchor[g][:, None]
                di = direction[g][:, None]
                return integrand(an + di * dl, an, di, dl)

            res = integrate(f_regular, np.zeros(idx.size), length[idx], rtol=rtol, atol=atol,
                            left_power=beta, max_level=max_level)
            total += float(np.sum(res.value))
            scale += float(np.sum(np.abs(res.value)))
            error += float(np.sum(res.error))
            ok &= bool(np.all(res.converged))

        logm = ~regular
        if logm.any():
            idx = np.flatnonzero(logm)
            kappa = param[idx]
            if np.any(kappa <= 1.0 + EXPONENT_TOL):
                raise ValueError("a d^-1 log^-kappa end needs kappa > 1")
            L = length[idx]
            an, di = anchor[idx][:, None], direction[idx][:, None]
            # below off = L e^{-lc} offsets underflow (or the integrand
            # overflows); that remainder is added in closed form from the
            # declared model log(2/d)^{-kappa} / d
            lc = np.maximum(np.log(L) + _LOG_TINY, 1.0)
            for _ in range(8):
                off_c = (L * np.exp(-lc))[:, None]
                with np.errstate(all="ignore"):
                    h_c = (integrand(an + di * off_c, an, di, off_c) * off_c)[:, 0]
                bad = ~np.isfinite(h_c)
                if not bad.any():
                    break
                lc = np.where(bad, np.maximum(0.5 * lc, _LOG_MIN), lc)
            w_c = 1.0 / (1.0 + lc)

            def f_log(w, dl, dr, r):
                g = idx[r]
                an = anchor[g][:, None]
                di = direction[g][:, None]
                Lr = length[g][:, None]
                with np.errstate(all="ignore"):
                    off = Lr * np.exp(1.0 - 1.0 / w)
                    vals = integrand(an + di * off, an, di, off) * off / (w * w)
                return np.where(off > 0, vals, 0.0)

            res = integrate(f_log, w_c, np.ones(idx.size), rtol=rtol, atol=atol, max_level=max_level)
            remainder = h_c * (lc + np.log(2.0 / L)) / (kappa - 1.0)
            total += float(np.sum(res.value) + np.sum(remainder))
            scale += float(np.sum(np.abs(res.value)) + np.sum(np.abs(remainder)))
            error += float(np.sum(res.error))
            ok &= bool(np.all(res.converged))

    for side, end in ((-1.0, lo), (1.0, hi)):
        if math.isfinite(end):
            continue
        tail = tails[0 if side < 0 else 1]
        if tail is None:
            raise ValueError("an infinite end needs a Tail description")
        start = pts[0] if side < 0 else pts[-1]
        if side > 0:
            B = max(start, 1.0) if start >= 0 else 1.0
            pre = []
            if B > start:
                pre.append((start, B))
        else:
            B = -min(start, -1.0) if start <= 0 else 1.0
            pre = []
            if -B < start:
                pre.append((-B, start))
        for a, b in pre:
            sub = line_integral(integrand, a, b, singularities=[s for s in singularities if a <= s.where <= b],
                                panel_width=panel_width, rtol=rtol, atol=atol, max_level=max_level)
            total += sub.value
            scale += abs(sub.value)
            error += sub.error
            ok &= sub.converged
        # y = side * B / v, dy = B / v^2 dv; integrand ~ v^{-e-2}
        e = tail.exponent
        if e == -math.inf:
            beta_v, mode = 0.0, "power"
        else:
            mode, beta_v = _mode(-e - 2.0, tail.log_power)

        if mode == "log":
            beta = min(tail.log_power - 2.0, 0.0)

            def f_tail(w, dl, dr, r, B=B, side=side):
                with np.errstate(all="ignore"):
                    v = np.exp(1.0 - 1.0 / w)
                    y = side * B / v
                    vals = integrand(y, np.full((w.shape[0], 1), np.nan), np.full((w.shape[0], 1), side),
                                     np.abs(y)) * (B / (v * v)) * v / (w * w)
                return np.where((v > 0) & np.isfinite(vals), vals, 0.0)
        else:
            beta = beta_v if mode == "power" else 0.0

            def f_tail(v, dl, dr, r, B=B, side=side):
                with np.errstate(all="ignore"):
                    y = side * B / v
                    vals = integrand(y, np.full((v.shape[0], 1), np.nan), np.full((v.shape[0], 1), side),
                                     np.abs(y)) * (B / (v * v))
                return np.where(np.isfinite(vals), vals, 0.0)

        res = integrate(f_tail, np.zeros(1), np.ones(1), rtol=rtol, atol=atol, left_power=[beta],
                        max_level=max_level)
        total += float(res.value[0])
        scale += abs(float(res.value[0]))
        error += float(res.error[0])
        ok &= bool(res.converged[0])
    # pieces carrying a negligible share need not meet rtol on their own
    ok = ok or error <= max(atol, rtol * scale)
    return LineResult(total, error, bool(ok))
