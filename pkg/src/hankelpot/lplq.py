"""L^p - L^q boundedness: exact predicates and numerical probes.

The predicates encode the characterizations of power-weighted ``L^p -> L^q``
boundedness of Riesz potentials, of unweighted boundedness of Bessel
potentials, of domain inclusions and of the Hardy operators.  Strict and
non-strict inequalities at the endpoints are the whole content of these
characterizations, so exponents are converted to exact rationals whenever
they are recognizably rational (``1/inf = 0`` exactly).  Irrational input
falls back to floating point with a ``1e-12`` tolerance; a comparison
decided inside that tolerance raises :class:`NearBoundaryWarning`.

The probes evaluate norm ratios of actual potentials (dilation sweeps and
spreading families) and run the registered counterexample families, each of
which drives a designated quantity to infinity along a family parameter.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import asdict, dataclass, field, replace
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np
from numpy.polynomial import legendre
from scipy import special

from . import functions as F
from .functions import PowerBehavior, SampledFunction, WeightedMeasure
from .lineint import Singularity, line_integral
from .operators import apply_potential, weak_quasinorm, weighted_norm
from .profiles import fast_kernel_values
from .quadrature import integrate
from .settings import Kind, PotentialParams, Setting

__all__ = [
    "NearBoundaryWarning",
    "ExponentQuad",
    "Verdict",
    "riesz_bounded",
    "riesz_bounded_unweighted",
    "radial_bounded",
    "weak_type_bounded",
    "bessel_bounded",
    "domain_inclusion",
    "domain_inclusion_unweighted",
    "hardy_bounded",
    "growth_exponent",
    "nonmodified_shift",
    "norm_ratio",
    "empirical_norm_scan",
    "DilationSweep",
    "dilation_sweep",
    "spreading_scan",
    "CounterexampleReport",
    "COUNTEREXAMPLES",
    "counterexample_manifest",
    "counterexample_run",
    "radial_constant",
    "spherical_average",
    "radial_crosscheck",
]

#: Tolerance of floating-point comparisons when exact rationals are unavailable.
FLOAT_TOL = 1e-12
_MAX_DENOMINATOR = 10**6


class NearBoundaryWarning(UserWarning):
    """A floating-point comparison was decided within the tolerance band."""


# ---------------------------------------------------------------------------
# exact arithmetic
# ---------------------------------------------------------------------------

def exact(value) -> Fraction | float:
    """``value`` as a Fraction when it is (recognizably) rational, else a float.

    Integers, Fractions and strings such as ``"3/2"`` are exact.  A float is
    replaced by the simplest fraction with denominator up to ``10**6`` that
    reproduces it to within a few units in the last place.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, np.integer)):
        return Fraction(int(value))
    if isinstance(value, str):
        v = value.strip().lower()
        if v in {"inf", "+inf", "infinity"}:
            return math.inf
        return Fraction(v)
    v = float(value)
    if not math.isfinite(v):
        return v
    fr = Fraction(v).limit_denominator(_MAX_DENOMINATOR)
    if abs(float(fr) - v) <= 4 * np.finfo(float).eps * max(1.0, abs(v)):
        return fr
    return v


def _inv(p) -> Fraction | float:
    """``1/p`` with ``1/inf = 0`` exactly."""
    p = exact(p)
    if isinstance(p, float) and math.isinf(p):
        return Fraction(0)
    return 1 / p


def _cmp(x, y) -> int:
    """Sign of ``x - y``; float differences within tolerance count as 0."""
    d = x - y
    if isinstance(d, Fraction):
        return (d > 0) - (d < 0)
    d = float(d)
    scale = 1.0 + abs(float(x)) + abs(float(y))
    if abs(d) <= FLOAT_TOL * scale:
        if d != 0.0:
            warnings.warn(f"comparison of {float(x)!r} and {float(y)!r} decided as equality within tolerance",
                          NearBoundaryWarning, stacklevel=3)
        return 0
    return 1 if d > 0 else -1


def _lt(x, y, allow_equal: bool = False) -> bool:
    c = _cmp(x, y)
    return c < 0 or (allow_equal and c == 0)


def _eq(x, y) -> bool:
    return _cmp(x, y) == 0


# ---------------------------------------------------------------------------
# types
# ---------------------------------------------------------------------------


def _check_exponent(v, name):
    e = exact(v)
    if isinstance(e, float) and math.isinf(e):
        return
    if not e >= 1:
        raise ValueError(f"{name} must lie in [1, inf], got {v!r}")


@dataclass(frozen=True)
class ExponentQuad:
    """Lebesgue exponents ``p, q`` in ``[1, inf]`` and power weights ``a, b``.

    Boundedness refers to ``|| x^{-b} T f ||_q <= C || x^a f ||_p``.  Values
    may be given as ints, floats, Fractions or strings (``"inf"``, ``"4/3"``).
    """

    p: object
    q: object
    a: object = 0
    b: object = 0

    def __post_init__(self):
        _check_exponent(self.p, "p")
        _check_exponent(self.q, "q")

    @property
    def inv_p(self):
        return _inv(self.p)

    @property
    def inv_q(self):
        return _inv(self.q)

    @property
    def a_exact(self):
        return exact(self.a)

    @property
    def b_exact(self):
        return exact(self.b)

    def as_floats(self) -> tuple[float, float, float, float]:
        return float(exact(self.p)), float(exact(self.q)), float(exact(self.a)), float(exact(self.b))


@dataclass
class Verdict:
    """Outcome of a boundedness predicate.

    ``failed_conditions`` lists the tags of the violated conditions; the
    weighted Riesz conditions are tagged ``a`` to ``e`` (``p <= q``, the
    scaling relation, the two weight bounds, the local integrability
    condition), unweighted and Bessel verdicts use descriptive tags, and
    ``domain`` marks exponents for which the operator is not defined on the
    whole space.
    """

    bounded: bool
    failed_conditions: list[str] = field(default_factory=list)

    def __post_init__(self):
        if self.bounded != (not self.failed_conditions):
            raise ValueError("bounded must hold exactly when no condition fails")

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _verdict(checks: Sequence[tuple[str, bool]]) -> Verdict:
    failed = [tag for tag, ok in checks if not ok]
    return Verdict(not failed, failed)


def _alpha_sigma(alpha, sigma, riesz: bool = True):
    al, s = exact(alpha), exact(sigma)
    if not al > -1:
        raise ValueError(f"alpha must exceed -1, got {alpha!r}")
    if not s > 0:
        raise ValueError(f"sigma must be positive, got {sigma!r}")
    if riesz and not s < al + 1:
        raise ValueError("Riesz potentials need 0 < sigma < alpha + 1")
    return al, s


# ---------------------------------------------------------------------------
# Riesz potentials
# ---------------------------------------------------------------------------


def _weighted_conditions(dim, shift, sigma, e: ExponentQuad, e_prime: bool, radial_log: bool = False):
    """Conditions (a)-(e) for homogeneous dimension ``dim``.

    ``shift`` is added to both weight bounds (``alpha + 1/2`` in the
    non-modified setting, else 0); there ``dim = 1`` and (e) reads
    ``a + b >= 0``.
    """
    ip, iq = e.inv_p, e.inv_q
    a, b = e.a_exact, e.b_exact
    p_one, q_inf = ip == 1, iq == 0
    endpoint = p_one and q_inf
    strict_e = p_one or q_inf
    cond_a = _lt(iq, ip, allow_equal=True)
    cond_b = _eq(iq, ip + (a + b - 2 * sigma) / dim)
    cond_c = _lt(a, dim * (1 - ip) + shift, allow_equal=endpoint)
    cond_d = _lt(b, dim * iq + shift, allow_equal=endpoint)
    if shift != 0 or radial_log:
        lhs, rhs = a + b, (dim - 1) * (iq - ip) if radial_log else 0
    elif e_prime:
        lhs, rhs = a + b, (dim - 1) * (iq - ip)
    else:
        lhs, rhs = iq, ip - 2 * sigma
    cond_e = _lt(rhs, lhs, allow_equal=not strict_e)
    return [("a", cond_a), ("b", cond_b), ("c", cond_c), ("d", cond_d), ("e", cond_e)]


def riesz_bounded(setting: Setting | str, alpha, sigma, e: ExponentQuad, use_e_prime: bool = False) -> Verdict:
    """Power-weighted ``L^p -> L^q`` boundedness of the Riesz potential.

    Modified and Dunkl settings (homogeneous dimension ``N = 2 alpha + 2``):
    bounded iff (a) ``p <= q``, (b) ``1/q = 1/p + (a + b - 2 sigma)/N``,
    (c) ``a < N/p'``, (d) ``b < N/q`` (both ``<=`` when ``p = 1, q = inf``)
    and (e) ``1/q >= 1/p - 2 sigma`` (``>`` when ``p = 1`` or ``q = inf``).
    With ``use_e_prime`` (e) is replaced by the form
    ``a + b >= (2 alpha + 1)(1/q - 1/p)``, equivalent under (b).

    Non-modified setting: (b) ``1/q = 1/p + a + b - 2 sigma``,
    (c) ``a < 1/p' + alpha + 1/2``, (d) ``b < 1/q + alpha + 1/2`` (same
    endpoint relaxation) and (e) ``a + b >= 0`` (``>`` when ``p = 1`` or
    ``q = inf``).
    """
    setting = Setting.parse(setting)
    al, s = _alpha_sigma(alpha, sigma)
    if setting is Setting.NONMODIFIED:
        return _verdict(_weighted_conditions(Fraction(1) if isinstance(al, Fraction) else 1.0, al + Fraction(1, 2), s, e,
                                             False))
    return _verdict(_weighted_conditions(2 * al + 2, 0, s, e, use_e_prime))


def radial_bounded(n: int, sigma, e: ExponentQuad) -> Verdict:
    """Power-weighted boundedness of the Euclidean Riesz potential on radial functions of ``R^n``.

    The conditions are those of the modified setting with ``2 alpha + 2``
    replaced by ``n``, with (e) in the form
    ``a + b >= (n - 1)(1/q - 1/p)`` (``>`` when ``p = 1`` or ``q = inf``).
    Requires ``0 < sigma < n/2``.
    """
    n = int(n)
    if n < 1:
        raise ValueError("dimension must be a positive integer")
    s = exact(sigma)
    if not 0 < s < Fraction(n, 2):
        raise ValueError("radial Riesz potentials need 0 < sigma < n/2")
    return _verdict(_weighted_conditions(Fraction(n), 0, s, e, True, radial_log=True))


def riesz_bounded_unweighted(setting: Setting | str, alpha, sigma, p, q) -> Verdict:
    """Unweighted ``L^p -> L^q`` boundedness, from the direct characterizations.

    Modified and Dunkl: bounded iff ``1/q = 1/p - sigma/(alpha + 1)``,
    ``1 < p < (alpha + 1)/sigma`` and ``alpha >= -1/2``.
    Non-modified, ``alpha >= -1/2``: iff ``1/q = 1/p - 2 sigma``, ``p > 1``
    and ``q < inf``; ``alpha < -1/2``: iff ``1/q = 1/p - 2 sigma``,
    ``1/p' > -alpha - 1/2`` and ``1/q > -alpha - 1/2``.

    This is an independent encoding; it agrees with :func:`riesz_bounded`
    at ``a = b = 0``.  Tags: ``scaling``, ``p>1``, ``p-range``, ``q<inf``,
    ``alpha``, ``local-p``, ``local-q``.
    """
    setting = Setting.parse(setting)
    al, s = _alpha_sigma(alpha, sigma)
    ip, iq = _inv(p), _inv(q)
    half = Fraction(1, 2)
    if setting is Setting.NONMODIFIED:
        checks = [("scaling", _eq(iq, ip - 2 * s))]
        if not _lt(al, -half):
            checks += [("p>1", _lt(ip, 1)), ("q<inf", _lt(0, iq))]
        else:
            checks += [("local-p", _lt(-al - half, 1 - ip)), ("local-q", _lt(-al - half, iq))]
        return _verdict(checks)
    return _verdict([
        ("scaling", _eq(iq, ip - s / (al + 1))),
        ("p>1", _lt(ip, 1)),
        ("p-range", _lt(s / (al + 1), ip)),
        ("alpha", not _lt(al, -half)),
    ])


def weak_type_bounded(setting: Setting | str, alpha, sigma) -> bool:
    """``L^1 -> weak L^q`` with ``q = (alpha + 1)/(alpha + 1 - sigma)`` (modified, Dunkl): iff ``alpha >= -1/2``."""
    setting = Setting.parse(setting)
    if setting is Setting.NONMODIFIED:
        raise ValueError("the weak-type endpoint is characterized in the modified and Dunkl settings")
    al, _ = _alpha_sigma(alpha, sigma)
    return not _lt(al, Fraction(-1, 2))


def nonmodified_shift(alpha, e: ExponentQuad) -> ExponentQuad:
    """Weights turning a non-modified estimate into a modified one.

    The non-modified potential is ``x^{alpha + 1/2} I((.)^{-alpha - 1/2} f)``,
    so ``|| x^{-b} I_nm f ||_{L^q(dx)} <= C || x^a f ||_{L^p(dx)}`` is the
    modified estimate with ``a' = a + alpha + 1/2 - (2 alpha + 1)/p`` and
    ``b' = b - alpha - 1/2 + (2 alpha + 1)/q``.
    """
    al = exact(alpha)
    half = Fraction(1, 2)
    a2 = e.a_exact + al + half - (2 * al + 1) * e.inv_p
    b2 = e.b_exact - al - half + (2 * al + 1) * e.inv_q
    return ExponentQuad(e.p, e.q, a2, b2)


def growth_exponent(setting: Setting | str, alpha, sigma, e: ExponentQuad) -> float:
    """Exponent ``E`` with ``ratio(f(r .)) = r^E ratio(f)`` for the norm ratio of the Riesz potential.

    ``E = N (1/p - 1/q) + a + b - 2 sigma`` with ``N = 2 alpha + 2`` (modified,
    Dunkl) or ``N = 1`` (non-modified); it vanishes exactly under the scaling
    condition (b).
    """
    setting = Setting.parse(setting)
    al = exact(alpha)
    dim = 1 if setting is Setting.NONMODIFIED else 2 * al + 2
    return float(dim * (e.inv_p - e.inv_q) + e.a_exact + e.b_exact - 2 * exact(sigma))


# ---------------------------------------------------------------------------
# Bessel potentials, domains, Hardy operators
# ---------------------------------------------------------------------------


def bessel_bounded(setting: Setting | str, alpha, sigma, p, q) -> Verdict:
    """Unweighted ``L^p -> L^q`` boundedness of the Bessel potential.

    With ``s = sigma/(alpha + 1)`` (modified, Dunkl) or ``s = 2 sigma``
    (non-modified) and ``alpha >= -1/2``: bounded iff
    ``1/p - s <= 1/q <= 1/p`` and ``(1/p, 1/q)`` is neither ``(s, 0)`` nor
    ``(1, 1 - s)``.  For ``alpha < -1/2``: modified and Dunkl iff ``p = q``;
    non-modified needs ``p > 2/(2 alpha + 3)`` to be defined on ``L^p``
    (else tag ``domain``) and is then bounded iff ``1/p - s <= 1/q <= 1/p``
    and ``1/q > -alpha - 1/2``.

    Tags: ``band-lower``, ``band-upper``, ``corner``, ``p=q``, ``local-q``,
    ``domain``.
    """
    setting = Setting.parse(setting)
    al, s = _alpha_sigma(alpha, sigma, riesz=False)
    ip, iq = _inv(p), _inv(q)
    half = Fraction(1, 2)
    band = 2 * s if setting is Setting.NONMODIFIED else s / (al + 1)
    band_checks = [("band-lower", _lt(ip - band, iq, allow_equal=True)), ("band-upper", _lt(iq, ip, allow_equal=True))]
    if not _lt(al, -half):
        corner = (_eq(ip, band) and _eq(iq, 0)) or (_eq(ip, 1) and _eq(iq, 1 - band))
        return _verdict(band_checks + [("corner", not corner)])
    if setting is not Setting.NONMODIFIED:
        return _verdict([("p=q", _eq(ip, iq))])
    # p > 2/(2 alpha + 3)  <=>  1/p < alpha + 3/2
    if not _lt(ip, al + Fraction(3, 2)):
        return Verdict(False, ["domain"])
    return _verdict(band_checks + [("local-q", _lt(-al - half, iq))])


def domain_inclusion(setting: Setting | str, alpha, sigma, p, a=0, kind: Kind | str = Kind.RIESZ) -> bool:
    """Whether ``L^p(x^{ap} d mu) `` lies in the domain of the potential.

    Riesz, modified and Dunkl: ``2 sigma - N/p < a < N/p'`` with
    ``N = 2 alpha + 2`` (both ``<=`` when ``p = 1``).  Non-modified:
    ``2 sigma - 1/p - alpha - 1/2 < a < 1/p' + alpha + 1/2`` (both ``<=``
    when ``p = 1``).  Bessel potentials are characterized without weights
    only: every ``p`` except, in the non-modified setting with
    ``alpha < -1/2``, ``p <= 2/(2 alpha + 3)``.
    """
    setting = Setting.parse(setting)
    kind = Kind.parse(kind)
    ip = _inv(p)
    a = exact(a)
    half = Fraction(1, 2)
    if kind is Kind.BESSEL:
        if a != 0:
            raise ValueError("weighted domains of Bessel potentials are not characterized")
        al, _ = _alpha_sigma(alpha, sigma, riesz=False)
        if setting is Setting.NONMODIFIED and _lt(al, -half):
            return _lt(ip, al + Fraction(3, 2))
        return True
    al, s = _alpha_sigma(alpha, sigma)
    p_one = ip == 1
    if setting is Setting.NONMODIFIED:
        lo, hi = 2 * s - ip - al - half, (1 - ip) + al + half
    else:
        dim = 2 * al + 2
        lo, hi = 2 * s - dim * ip, dim * (1 - ip)
    return _lt(lo, a, allow_equal=p_one) and _lt(a, hi, allow_equal=p_one)


def domain_inclusion_unweighted(setting: Setting | str, alpha, sigma, p) -> bool:
    """Unweighted domain inclusion for the Riesz potential, from the direct characterizations.

    Modified and Dunkl: ``p < (alpha + 1)/sigma``.  Non-modified,
    ``alpha >= -1/2``: ``1/p > 2 sigma - alpha - 1/2`` (``>=`` if ``p = 1``);
    ``alpha < -1/2``: ``alpha + 3/2 > 1/p > 2 sigma - alpha - 1/2`` (both
    ``>=`` if ``p = 1``).
    """
    setting = Setting.parse(setting)
    al, s = _alpha_sigma(alpha, sigma)
    ip = _inv(p)
    half = Fraction(1, 2)
    if setting is not Setting.NONMODIFIED:
        return _lt(s / (al + 1), ip)
    p_one = ip == 1
    ok = _lt(2 * s - al - half, ip, allow_equal=p_one)
    if _lt(al, -half):
        ok = ok and _lt(ip, al + Fraction(3, 2), allow_equal=p_one)
    return ok


def hardy_bounded(A, B, p, q, variant: str = "hardy") -> bool:
    """Power-weighted ``L^p -> L^q`` boundedness of Hardy operators on ``(0, inf)``.

    ``variant="hardy"``: ``|| x^B int_0^x h ||_q <= C || x^A h ||_p`` iff
    ``p <= q``, ``A - 1/p' = B + 1/q`` and ``A < 1/p'`` (``<=`` when
    ``p = 1, q = inf``).  ``variant="dual"`` (``int_x^inf h``): the same
    with ``B > -1/q`` (``>=`` when ``p = 1, q = inf``) in place of the last
    condition.
    """
    variant = variant.strip().lower()
    if variant not in {"hardy", "dual"}:
        raise ValueError("variant must be 'hardy' or 'dual'")
    ip, iq = _inv(p), _inv(q)
    A, B = exact(A), exact(B)
    endpoint = ip == 1 and iq == 0
    if not (_lt(iq, ip, allow_equal=True) and _eq(A - (1 - ip), B + iq)):
        return False
    if variant == "hardy":
        return _lt(A, 1 - ip, allow_equal=endpoint)
    return _lt(-iq, B, allow_equal=endpoint)


# ---------------------------------------------------------------------------
# empirical norm ratios
# ---------------------------------------------------------------------------

_GL_NODES = 6
_PANEL_FACTOR = 4.0
_MARGIN = 32.0


def _potential_exponents(setting: Setting, alpha: float, sigma: float) -> tuple[float, float]:
    """Power behavior of the potential of a compactly supported ``f`` at 0 and at infinity."""
    if setting is Setting.NONMODIFIED:
        return alpha + 0.5, 2 * sigma - alpha - 1.5
    return 0.0, 2 * sigma - 2 * alpha - 2


def _power_tail(value: float, x0: float, s: float, q: float, w: float, outward: int) -> float:
    """``int (value (x/x0)^s)^q x^w dx`` from ``x0`` to 0 (``outward=-1``) or to inf (``+1``)."""
    if value == 0.0:
        return 0.0
    e = s * q + w
    if (outward > 0 and e >= -1) or (outward < 0 and e <= -1):
        return math.inf
    return abs(value) ** q * x0 ** (w + 1) / abs(e + 1)


def _potential_lq_norm(setting: Setting, params: PotentialParams, f: SampledFunction, q: float, b: float,
                       tol: float) -> float:
    """``|| x^{-b} I f ||_q`` over the measure of ``setting`` for compactly supported ``f``.

    The potential is sampled at Gauss-Legendre nodes of panels in ``log x``
    covering the support enlarged by a factor 32; outside, its known power
    behavior supplies analytic tails.
    """
    if f.lo <= 0 or math.isinf(f.hi):
        raise ValueError("norm ratios need functions with compact support in (0, inf)")
    alpha, sigma = params.alpha, params.sigma
    w = 0.0 if setting is Setting.NONMODIFIED else 2 * alpha + 1
    s0, sinf = _potential_exponents(setting, alpha, sigma)
    lo, hi = math.log(f.lo / _MARGIN), math.log(f.hi * _MARGIN)
    n_panels = int(math.ceil((hi - lo) / math.log(_PANEL_FACTOR)))
    edges = np.linspace(lo, hi, n_panels + 1)
    t, wt = legendre.leggauss(_GL_NODES)
    signs = (1.0, -1.0) if setting is Setting.DUNKL else (1.0,)
    total = 0.0
    sup = 0.0
    for sg in signs:
        vals_first = vals_last = None
        for e0, e1 in zip(edges[:-1], edges[1:]):
            c, h = 0.5 * (e0 + e1), 0.5 * (e1 - e0)
            xs = np.exp(c + h * t)
            v = np.array([apply_potential(setting, params, f, sg * x, tol).value for x in xs])
            g = np.abs(v) * xs ** (-b)
            if math.isinf(q):
                sup = max(sup, float(g.max()))
            else:
                total += h * float(np.sum(wt * g**q * xs ** (w + 1)))
            if vals_first is None:
                vals_first = apply_potential(setting, params, f, sg * math.exp(lo), tol).value
        vals_last = apply_potential(setting, params, f, sg * math.exp(hi), tol).value
        x0, x1 = math.exp(lo), math.exp(hi)
        if math.isinf(q):
            for val, x, s, out in ((vals_first, x0, s0 - b, -1), (vals_last, x1, sinf - b, 1)):
                if val != 0 and out * s > 0:
                    return math.inf
                sup = max(sup, abs(val) * x ** (-b))
        else:
            total += _power_tail(vals_first * x0 ** (-b), x0, s0 - b, q, w, -1)
            total += _power_tail(vals_last * x1 ** (-b), x1, sinf - b, q, w, 1)
    if math.isinf(q):
        return sup
    return total ** (1.0 / q)


def norm_ratio(setting: Setting | str, alpha: float, sigma: float, e: ExponentQuad, f: SampledFunction,
               tol: float = 1e-9) -> float:
    """``|| x^{-b} I f ||_q / || x^a f ||_p`` for one function ``f``."""
    setting = Setting.parse(setting)
    params = PotentialParams(alpha, sigma, Kind.RIESZ)
    p, q, a, b = e.as_floats()
    den = weighted_norm(f, p, WeightedMeasure(setting, alpha), a).value
    num = _potential_lq_norm(setting, params, f, q, b, tol)
    return float(num / den)


def empirical_norm_scan(setting: Setting | str, alpha: float, sigma: float, e: ExponentQuad,
                        family: Sequence[SampledFunction], tol: float = 1e-9) -> float:
    """Largest norm ratio over ``family`` (``inf`` if a potential is not in ``L^q``).

    Family members must lie in ``L^p(x^{ap} d mu)`` and in the domain.
    A finite, stable value is evidence, not proof, of boundedness.
    """
    p, _, a, _ = e.as_floats()
    if not domain_inclusion(setting, alpha, sigma, e.p, e.a):
        warnings.warn("the weighted space is not contained in the domain; ratios may be infinite",
                      RuntimeWarning, stacklevel=2)
    return max(norm_ratio(setting, alpha, sigma, e, f, tol) for f in family)


@dataclass
class DilationSweep:
    """Norm ratios of the dilates ``f(r .)`` and the fitted power law."""

    dilations: list[float]
    ratios: list[float]
    fitted_slope: float
    expected_slope: float

    @property
    def slope_error(self) -> float:
        if self.expected_slope == 0:
            return abs(self.fitted_slope)
        return abs(self.fitted_slope / self.expected_slope - 1.0)

    @property
    def invariance(self) -> float:
        """Largest relative deviation of the ratios from the first one."""
        r0 = self.ratios[0]
        return max(abs(r / r0 - 1.0) for r in self.ratios)


def dilation_sweep(setting: Setting | str, alpha: float, sigma: float, e: ExponentQuad, f: SampledFunction,
                   dilations: Sequence[float] = (0.25, 0.5, 1.0, 2.0, 4.0), tol: float = 1e-9) -> DilationSweep:
    """Ratios of ``f(r .)`` over ``dilations`` with a least-squares slope in ``log r``.

    Under the scaling condition the ratios coincide; otherwise they grow like
    ``r^E`` with ``E`` from :func:`growth_exponent`.
    """
    ratios = [norm_ratio(setting, alpha, sigma, e, f.dilate(r), tol) for r in dilations]
    slope = float(np.polyfit(np.log(dilations), np.log(ratios), 1)[0])
    return DilationSweep(list(map(float, dilations)), ratios, slope, growth_exponent(setting, alpha, sigma, e))


def _sum_function(pieces: Sequence[SampledFunction]) -> SampledFunction:
    """Sum of functions with pairwise disjoint supports."""
    pieces = sorted(pieces, key=lambda g: g.lo)
    los = np.array([g.lo for g in pieces])

    def ev(y):
        y = np.asarray(y, dtype=float)
        out = np.zeros(y.shape)
        for g in pieces:
            m = (y > g.lo) & (y < g.hi)
            if m.any():
                out[m] = g.evaluator(y[m])
        return out

    bps = sorted({v for g in pieces for v in (g.lo, g.hi, *g.breakpoints)})
    return SampledFunction(
        evaluator=ev,
        support=(float(los[0]), pieces[-1].hi),
        breakpoints=tuple(bps),
        nonnegative=all(g.nonnegative for g in pieces),
        name="sum",
    )


def spreading_scan(setting: Setting | str, alpha: float, sigma: float, e: ExponentQuad, base: SampledFunction,
                   sizes: Sequence[int] = (1, 2, 4, 8), separation: float = 100.0,
                   tol: float = 1e-9) -> list[float]:
    """Norm ratios of sums of ``n`` normalized, widely separated dilates of ``base``.

    Each summand has unit ``L^p(x^{ap} d mu)`` norm, so the denominator is
    ``n^{1/p}`` while the potentials are almost disjoint and the numerator
    behaves like ``n^{1/q}``; for ``p > q`` the ratios grow without bound.
    """
    setting = Setting.parse(setting)
    p, _, a, _ = e.as_floats()
    m = WeightedMeasure(setting, alpha)
    out = []
    for n in sizes:
        pieces = []
        for k in range(n):
            g = base.dilate(separation ** (-k))
            pieces.append(g.scaled(1.0 / weighted_norm(g, p, m, a).value))
        out.append(norm_ratio(setting, alpha, sigma, e, _sum_function(pieces), tol))
    return out


# ---------------------------------------------------------------------------
# counterexamples
# ---------------------------------------------------------------------------


@dataclass
class CounterexampleReport:
    """Designated quantity along a counterexample family."""

    tag: str
    parameters: dict
    family: list[float]
    values: list[float]
    diverged: bool
    checks: dict = field(default_factory=dict)

    @property
    def growth_factors(self) -> list[float]:
        return [b / a if a > 0 else math.inf for a, b in zip(self.values[:-1], self.values[1:])]

    def to_dict(self) -> dict:
        d = asdict(self)
        d["growth_factors"] = self.growth_factors
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


#: Minimal growth of the designated quantity between consecutive family members.
GROWTH_FACTOR = 2.0
#: Number of consecutive growth steps required.
GROWTH_STEPS = 3


def _diverging(values: Sequence[float]) -> bool:
    if len(values) < GROWTH_STEPS + 1:
        return False
    v = list(values)
    if any(not (math.isfinite(x) and x > 0) for x in v):
        return False
    return all(b >= GROWTH_FACTOR * a for a, b in zip(v[:-1], v[1:]))


def _geometric_breaks(lo: float, hi: float, factor: float = math.e) -> tuple[float, ...]:
    """Points ``lo * factor^k`` inside ``(lo, hi)`` for quadrature over many decades."""
    n = int(math.floor(math.log(hi / lo) / math.log(factor)))
    return tuple(lo * factor**k for k in range(1, n + 1) if lo * factor**k < hi)


def _modified(alpha, sigma):
    return PotentialParams(alpha, sigma, Kind.RIESZ)


def _ce_h0(alpha=0.0, sigma=0.25, p=2.0, a=None, levels=(1, 2, 3, 4), x=2.0, tol=1e-8):
    """``g = chi_{y<1} y^{-2 alpha - 2}`` with ``a > (2 alpha + 2)/p'``: ``int_0 g d mu`` diverges."""
    N = 2 * alpha + 2
    pp = 1 - 1 / p
    a = N * pp + 0.5 if a is None else a
    if not a > N * pp:
        raise ValueError("this family needs a > (2 alpha + 2)/p'")
    params = _modified(alpha, sigma)
    g = F.power_function(-N, 0.0, 1.0)
    checks = {
        "norm_in_weighted_space": weighted_norm(g, p, WeightedMeasure(Setting.MODIFIED, alpha), a).value,
        "potential_value": apply_potential(Setting.MODIFIED, params, g, x).value,
        "domain_predicate": domain_inclusion(Setting.MODIFIED, alpha, sigma, p, a),
    }
    family, values = [], []
    for k in levels:
        eps = math.exp(-(4.0**k))
        gk = replace(F.power_function(-N, eps, 1.0), breakpoints=_geometric_breaks(eps, 1.0))
        family.append(eps)
        values.append(apply_potential(Setting.MODIFIED, params, gk, x, tol).value)
    return dict(alpha=alpha, sigma=sigma, p=p, a=a, x=x), family, values, checks


def _ce_h0_boundary(alpha=0.0, sigma=0.25, p=2.0, levels=(1, 2, 3, 4), x=2.0, tol=1e-10):
    """``a = (2 alpha + 2)/p'``, ``g = chi_{y<1} y^{-2 alpha - 2} / log(2/y)``: loglog divergence.

    With ``y = 2 exp(-e^u)`` the truncated potential is
    ``int K(x, 2 exp(-e^u)) du`` over ``u`` up to ``log log(2/eps)``; the
    family uses ``log(2/eps) = exp(4^k)``.
    """
    if p <= 1:
        raise ValueError("the logarithmic boundary family needs p > 1")
    N = 2 * alpha + 2
    a = N * (1 - 1 / p)
    params = _modified(alpha, sigma)
    g = F.power_function(-N, 0.0, 1.0, log_power=1.0, log_base="small")
    checks = {
        "norm_in_weighted_space": weighted_norm(g, p, WeightedMeasure(Setting.MODIFIED, alpha), a).value,
        "potential_value": apply_potential(Setting.MODIFIED, params, g, x).value,
        "domain_predicate": domain_inclusion(Setting.MODIFIED, alpha, sigma, p, a),
    }
    u0 = math.log(math.log(2.0))
    u_flat = 7.0  # beyond, y < 1e-400 underflows and the kernel equals its value at y = 0

    def kern(u):
        y = 2.0 * np.exp(-np.exp(u))
        return fast_kernel_values(Setting.MODIFIED, params, x, y)

    head = integrate(lambda u, dl, dr, r: kern(u), [u0], [u_flat], rtol=tol).value[0]
    k0 = float(fast_kernel_values(Setting.MODIFIED, params, x, 0.0))
    family = [float(4.0**k) for k in levels]
    values = [float(head + k0 * (U - u_flat)) for U in family]
    return dict(alpha=alpha, sigma=sigma, p=p, a=a, x=x), family, values, checks


def _ce_hinf(alpha=0.0, sigma=0.25, p=2.0, a=None, levels=(1, 2, 3, 4), x=1.0, tol=1e-8):
    """``g = chi_{y>2} y^{-2 sigma}`` with ``a < 2 sigma - (2 alpha + 2)/p``: ``H_inf g = inf``."""
    N = 2 * alpha + 2
    a = 2 * sigma - N / p - 0.5 if a is None else a
    if not a < 2 * sigma - N / p:
        raise ValueError("this family needs a < 2 sigma - (2 alpha + 2)/p")
    params = _modified(alpha, sigma)
    g = F.power_function(-2 * sigma, 2.0, math.inf)
    checks = {
        "norm_in_weighted_space": weighted_norm(g, p, WeightedMeasure(Setting.MODIFIED, alpha), a).value,
        "potential_value": apply_potential(Setting.MODIFIED, params, g, x).value,
        "domain_predicate": domain_inclusion(Setting.MODIFIED, alpha, sigma, p, a),
    }
    family, values = [], []
    for k in levels:
        R = 2.0 * math.exp(4.0**k)
        gk = replace(F.power_function(-2 * sigma, 2.0, R), breakpoints=_geometric_breaks(2.0, R))
        family.append(R)
        values.append(apply_potential(Setting.MODIFIED, params, gk, x, tol).value)
    return dict(alpha=alpha, sigma=sigma, p=p, a=a, x=x), family, values, checks


def _ce_hinf_boundary(alpha=0.0, sigma=0.25, p=2.0, levels=(1, 2, 3, 4), x=1.0, tol=1e-10):
    """``a = 2 sigma - (2 alpha + 2)/p``, ``g = chi_{y>2} y^{-2 sigma} / log y``.

    With ``y = exp(e^u)`` the truncated potential is ``int h(e^u) du`` where
    ``h(t) = K(x, e^t) e^{(2 alpha + 2 - 2 sigma) t}`` tends to a constant;
    the family uses ``log R = exp(4^k)``.
    """
    if p <= 1:
        raise ValueError("the logarithmic boundary family needs p > 1")
    N = 2 * alpha + 2
    a = 2 * sigma - N / p
    params = _modified(alpha, sigma)
    g = F.power_function(-2 * sigma, 2.0, math.inf, log_power=1.0, log_base="large")
    checks = {
        "norm_in_weighted_space": weighted_norm(g, p, WeightedMeasure(Setting.MODIFIED, alpha), a).value,
        "potential_value": apply_potential(Setting.MODIFIED, params, g, x).value,
        "domain_predicate": domain_inclusion(Setting.MODIFIED, alpha, sigma, p, a),
    }
    u0 = math.log(math.log(2.0))
    t_flat = 60.0
    u_flat = math.log(t_flat)

    def h(t):
        return fast_kernel_values(Setting.MODIFIED, params, x, np.exp(t)) * np.exp((N - 2 * sigma) * t)

    head = integrate(lambda u, dl, dr, r: h(np.exp(u)), [u0], [u_flat], rtol=tol).value[0]
    h_inf = float(h(np.array(t_flat)))
    family = [float(4.0**k) for k in levels]
    values = [float(head + h_inf * (U - u_flat)) for U in family]
    return dict(alpha=alpha, sigma=sigma, p=p, a=a, x=x), family, values, checks


def _ce_t_gamma(alpha=0.0, sigma=0.2, p=2.0, q=20.0, eps=None, steps=4, tol=1e-8):
    """``g = chi_{(1/2,1)} (1 - y)^gamma``, ``gamma = -1/p + eps``, when ``1/q < 1/p - 2 sigma``.

    ``g`` is in ``L^p`` but its potential behaves like ``(x - 1)^{2 sigma +
    gamma}`` to the right of 1, which is not ``q``-integrable.  The
    designated quantity is ``int_{1+h}^{3/2} |I g|^q d mu`` as ``h -> 0``.
    """
    if not 1 / q < 1 / p - 2 * sigma:
        raise ValueError("this family needs 1/q < 1/p - 2 sigma")
    gap = 1 / p - 2 * sigma - 1 / q
    eps = 0.5 * gap if eps is None else eps
    gamma = -1 / p + eps
    params = _modified(alpha, sigma)
    g = SampledFunction(
        evaluator=lambda y: (1.0 - np.asarray(y)) ** gamma,
        support=(0.5, 1.0),
        singular_exponents=(None, PowerBehavior(gamma)),
        near_hi=lambda d: np.asarray(d) ** gamma,
        name="T-gamma",
    )
    kappa = -((2 * sigma + gamma) * q + 1.0)
    step = 2.5 ** (1.0 / kappa)
    hs = [0.1 / step**k for k in range(steps)]
    w = 2 * alpha + 1
    t, wt = legendre.leggauss(8)

    def piece(h_small, h_big):
        lo, hi = math.log(h_small), math.log(h_big)
        n = max(1, int(math.ceil((hi - lo) / 1.0)))
        tot = 0.0
        for e0, e1 in zip(np.linspace(lo, hi, n + 1)[:-1], np.linspace(lo, hi, n + 1)[1:]):
            c, hh = 0.5 * (e0 + e1), 0.5 * (e1 - e0)
            d = np.exp(c + hh * t)
            v = np.array([apply_potential(Setting.MODIFIED, params, g, 1.0 + di, tol).value for di in d])
            tot += hh * float(np.sum(wt * np.abs(v) ** q * (1.0 + d) ** w * d))
        return tot

    acc = piece(hs[0], 0.5)
    values = [acc]
    for h_prev, h_next in zip(hs[:-1], hs[1:]):
        acc += piece(h_next, h_prev)
        values.append(acc)
    checks = {
        "norm_in_Lp": weighted_norm(g, p, WeightedMeasure(Setting.MODIFIED, alpha), 0.0).value,
        "gamma": gamma,
        "local_exponent": 2 * sigma + gamma,
    }
    return dict(alpha=alpha, sigma=sigma, p=p, q=q, eps=eps), hs, values, checks


def _ce_t_endpoint(sigma=0.25, levels=(1, 2, 3, 4), tol=1e-10):
    """``q = inf``, ``p = 1/(2 sigma)``: ``g = chi_{(1/2,1)} (1-y)^{-2 sigma} / log(2/(1-y))``.

    ``g`` is in ``L^p`` (``p > 1``) while ``T g(1 + h)`` grows like
    ``log log(1/h)``.  With ``u = 1 - y = e^{-v}`` and ``h = e^{-H}``,
    ``T g(1 + h) = int_{log 2}^inf (1 + e^{v - H})^{2 sigma - 1} / (v + log 2) dv``;
    the family uses ``H = exp(4^k)`` and integrates in ``log v``.
    """
    if not 0 < sigma < 0.5:
        raise ValueError("this family needs 0 < sigma < 1/2")
    p = 1.0 / (2 * sigma)
    g = SampledFunction(
        evaluator=lambda y: (1.0 - np.asarray(y)) ** (-2 * sigma) / np.log(2.0 / (1.0 - np.asarray(y))),
        support=(0.5, 1.0),
        singular_exponents=(None, PowerBehavior(-2 * sigma, 1.0)),
        near_hi=lambda d: np.asarray(d) ** (-2 * sigma) / np.log(2.0 / np.asarray(d)),
        name="T-endpoint",
    )
    checks = {"norm_in_Lp": weighted_norm(g, p, WeightedMeasure(Setting.NONMODIFIED, -0.5), 0.0).value, "p": p}
    lg2 = math.log(2.0)
    values, family = [], []
    for k in levels:
        H = math.exp(4.0**k)

        def integrand(s, dl, dr, r, H=H):
            v = np.exp(s)
            with np.errstate(over="ignore"):
                damp = np.exp((2 * sigma - 1) * np.logaddexp(0.0, v - H))
            return damp / (v + lg2) * v

        # the integrand is ~1 until v ~ H and then decays like (v/H)^{2 sigma - 1} / v
        s_lo, s_mid = math.log(lg2), math.log(H)
        head = integrate(integrand, [s_lo], [s_mid], rtol=tol).value[0]
        # beyond v = H substitute v = H e^z; decay exp((2 sigma - 1) z), so integrate z to 60/(1-2 sigma)
        z_end = 60.0 / (1.0 - 2 * sigma)
        tail = integrate(lambda z, dl, dr, r, H=H: integrand(math.log(H) + z, dl, dr, r), [0.0], [z_end],
                         rtol=tol).value[0]
        family.append(H)
        values.append(float(head + tail))
    return dict(sigma=sigma, p=p, q=math.inf), family, values, checks


def _ce_s_endpoint(levels=(1, 2, 3, 4), tol=1e-10):
    """``sigma = 1/2``, ``p = 1``, ``q = inf``: ``f = chi_{(1/2,1)} / ((1-y) log^2(2/(1-y)))``.

    ``f`` is integrable, while ``S f(1) = int log(2(1+y)/(1-y)) f(y) dy`` is
    infinite.  With ``u = 1 - y``, ``s = log(2/u)`` and ``r = log s`` the
    truncation to ``u > eps`` is
    ``int (log(2 - u) + s) / s dr`` over ``r`` up to ``log log(2/eps)``;
    the family uses ``log(2/eps) = exp(4^k)``.
    """
    f = SampledFunction(
        evaluator=lambda y: 1.0 / ((1.0 - np.asarray(y)) * np.log(2.0 / (1.0 - np.asarray(y))) ** 2),
        support=(0.5, 1.0),
        singular_exponents=(None, PowerBehavior(-1.0, 2.0)),
        near_hi=lambda d: 1.0 / (np.asarray(d) * np.log(2.0 / np.asarray(d)) ** 2),
        name="S-endpoint",
    )
    checks = {"norm_in_L1": weighted_norm(f, 1.0, WeightedMeasure(Setting.NONMODIFIED, -0.5), 0.0).value}
    r0 = math.log(math.log(4.0))  # u = 1/2

    def integrand(r, dl, dr, rows):
        s = np.exp(r)
        with np.errstate(over="ignore", under="ignore"):
            u = 2.0 * np.exp(-s)
        return (np.log(2.0 - u) + s) / s

    r_flat = 7.0  # beyond, u underflows and the integrand is 1 + log(2)/s
    head = integrate(integrand, [r0], [r_flat], rtol=tol).value[0]
    family, values = [], []
    for k in levels:
        R = 4.0**k
        # int_{r_flat}^R (1 + log 2 e^{-r}) dr
        tail = (R - r_flat) + math.log(2.0) * (math.exp(-r_flat) - math.exp(-R))
        family.append(R)
        values.append(float(head + tail))
    return dict(sigma=0.5, p=1.0, q=math.inf), family, values, checks


def _ce_weak_power(alpha=0.0, sigma=0.5, levels=(1, 2, 3, 4), tol=1e-10):
    """``f(x) = x^{2 sigma - 2 alpha - 2}`` with ``q = (alpha + 1)/(alpha + 1 - sigma)``.

    ``|f|^q d mu = dx / x``: the ``L^q`` integral over ``(1/R, R)`` is
    ``2 log R`` (family ``log R = 4^k / 2``), while the weak quasinorm stays
    bounded.
    """
    N = 2 * alpha + 2
    q = (alpha + 1) / (alpha + 1 - sigma)
    e = 2 * sigma - N
    m = WeightedMeasure(Setting.MODIFIED, alpha)
    family, values, weak = [], [], []
    for k in levels:
        R = math.exp(0.5 * 4.0**k)
        fk = replace(F.power_function(e, 1.0 / R, R), breakpoints=_geometric_breaks(1.0 / R, R))
        family.append(R)
        values.append(weighted_norm(fk, q, m, 0.0, tol=tol).value ** q)
        weak.append(weak_quasinorm(fk, q, m))
    checks = {"weak_quasinorms": weak, "weak_exact": N ** (-1.0 / q), "q": q}
    return dict(alpha=alpha, sigma=sigma, q=q), family, values, checks


def _ce_bes_glob_pq(alpha=0.0, sigma=0.5, p=4.0, q=2.0, xi=None, levels=(4, 6, 8, 10), tol=1e-8):
    """Bessel potential with ``q < p``: ``f = chi_{y>2} y^{-xi}``, ``2(alpha+1)/p < xi <= 2(alpha+1)/q``.

    ``f`` is in ``L^p`` but, as ``J f`` is comparable with ``f`` far out,
    ``int_2^R |J f|^q d mu`` grows without bound; family ``R = 2^k``.
    """
    N = 2 * alpha + 2
    if not N / p < N / q:
        raise ValueError("this family needs q < p")
    xi = 0.5 * (N / p + N / q) if xi is None else xi
    if not N / p < xi <= N / q:
        raise ValueError("xi must satisfy 2(alpha+1)/p < xi <= 2(alpha+1)/q")
    params = PotentialParams(alpha, sigma, Kind.BESSEL)
    f = F.power_function(-xi, 2.0, math.inf)
    w = 2 * alpha + 1
    t, wt = legendre.leggauss(4)
    blocks = []
    for j in range(1, max(levels)):
        c, h = 0.5 * (j + j + 1), 0.5
        xs = 2.0 ** (c + h * t)
        v = np.array([apply_potential(Setting.MODIFIED, params, f, x, tol).value for x in xs])
        blocks.append(h * math.log(2.0) * float(np.sum(wt * np.abs(v) ** q * xs ** (w + 1))))
    family = [2.0**k for k in levels]
    values = [float(sum(blocks[: k - 1])) for k in levels]
    checks = {"norm_in_Lp": weighted_norm(f, p, WeightedMeasure(Setting.MODIFIED, alpha), 0.0).value,
              "predicate": bessel_bounded(Setting.MODIFIED, alpha, sigma, p, q).to_dict()}
    return dict(alpha=alpha, sigma=sigma, p=p, q=q, xi=xi), family, values, checks


def _ce_bes_glob_diag(alpha=-0.8, sigma=1.0, p=2.0, q=4.0, ns=(50.0, 1e4, 2e6, 4e8), tol=1e-8):
    """Bessel potential, ``alpha < -1/2``, ``p != q``: ``f_n = chi_{(n, n+1)}``.

    ``|| J f_n ||_q / || f_n ||_p`` behaves like ``n^{(2 alpha + 1)(1/q - 1/p)}``.
    ``J f_n`` decays like ``e^{-|x - y|}`` away from the support, so its
    norm is integrated over ``(n - 40, n + 41)`` on panels that widen
    geometrically away from the support.
    """
    if not alpha < -0.5:
        raise ValueError("this family needs alpha < -1/2")
    if (2 * alpha + 1) * (1 / q - 1 / p) <= 0:
        raise ValueError("the ratio grows only when (2 alpha + 1)(1/q - 1/p) > 0")
    params = PotentialParams(alpha, sigma, Kind.BESSEL)
    m = WeightedMeasure(Setting.MODIFIED, alpha)
    w = 2 * alpha + 1
    t, wt = legendre.leggauss(8)
    values = []
    for n in ns:
        if n <= 41:
            raise ValueError("n must exceed 41")
        f = F.indicator(n, n + 1)
        offsets = [0.0, 1.0, 2.0, 4.0, 8.0, 16.0, 40.0]
        panels = [(n, n + 1)]
        for o0, o1 in zip(offsets[:-1], offsets[1:]):
            panels.append((n - o1, n - o0))
            panels.append((n + 1 + o0, n + 1 + o1))
        tot = 0.0
        for lo, hi in panels:
            c, h = 0.5 * (lo + hi), 0.5 * (hi - lo)
            xs = c + h * t
            v = np.array([apply_potential(Setting.MODIFIED, params, f, x, tol).value for x in xs])
            tot += h * float(np.sum(wt * np.abs(v) ** q * xs**w))
        values.append(tot ** (1 / q) / weighted_norm(f, p, m, 0.0).value)
    checks = {"predicate": bessel_bounded(Setting.MODIFIED, alpha, sigma, p, q).to_dict(),
              "expected_exponent": (2 * alpha + 1) * (1 / q - 1 / p)}
    return dict(alpha=alpha, sigma=sigma, p=p, q=q), list(ns), values, checks


@dataclass(frozen=True)
class _Registered:
    driver: Callable
    operator: str
    claim: str
    family_parameter: str
    parameter_ranges: dict


COUNTEREXAMPLES: dict[str, _Registered] = {
    "main-i-h0": _Registered(
        _ce_h0, "Riesz potential (modified), local Hardy part",
        "weighted domain inclusion fails for a > (2 alpha + 2)/p'",
        "lower truncation eps = exp(-4^k)",
        {"alpha": "> -1", "sigma": "(0, alpha + 1)", "p": "[1, inf]", "a": "> (2 alpha + 2)/p'"}),
    "main-i-h0-boundary": _Registered(
        _ce_h0_boundary, "Riesz potential (modified), local Hardy part",
        "weighted domain inclusion fails at a = (2 alpha + 2)/p' for p > 1",
        "log(2/eps) = exp(4^k)",
        {"alpha": "> -1", "sigma": "(0, alpha + 1)", "p": "(1, inf]", "a": "= (2 alpha + 2)/p'"}),
    "main-i-hinf": _Registered(
        _ce_hinf, "Riesz potential (modified), dual Hardy part",
        "weighted domain inclusion fails for a < 2 sigma - (2 alpha + 2)/p",
        "upper truncation R = 2 exp(4^k)",
        {"alpha": "> -1", "sigma": "(0, alpha + 1)", "p": "[1, inf]", "a": "< 2 sigma - (2 alpha + 2)/p"}),
    "main-i-hinf-boundary": _Registered(
        _ce_hinf_boundary, "Riesz potential (modified), dual Hardy part",
        "weighted domain inclusion fails at a = 2 sigma - (2 alpha + 2)/p for p > 1",
        "log R = exp(4^k)",
        {"alpha": "> -1", "sigma": "(0, alpha + 1)", "p": "(1, inf]", "a": "= 2 sigma - (2 alpha + 2)/p"}),
    "main-T-gamma": _Registered(
        _ce_t_gamma, "Riesz potential (modified), local part near the diagonal",
        "no L^p -> L^q bound when 1/q < 1/p - 2 sigma",
        "distance h of the lower integration limit to the singular point",
        {"alpha": "> -1", "sigma": "(0, 1/2)", "p": "[1, inf)", "q": "1/q < 1/p - 2 sigma"}),
    "main-T-endpoint": _Registered(
        _ce_t_endpoint, "local operator with kernel |x - y|^{2 sigma - 1}",
        "no L^p -> L^inf bound at 1/p = 2 sigma",
        "log(1/h) = exp(4^k)",
        {"sigma": "(0, 1/2)", "p": "= 1/(2 sigma)", "q": "inf"}),
    "S-endpoint": _Registered(
        _ce_s_endpoint, "local operator with kernel log(2(x + y)/|x - y|)",
        "no L^1 -> L^inf bound at sigma = 1/2",
        "log(2/eps) = exp(4^k)",
        {"sigma": "1/2", "p": "1", "q": "inf"}),
    "weak-power": _Registered(
        _ce_weak_power, "Riesz potential (modified), weak type endpoint",
        "x^{2 sigma - 2 alpha - 2} is in weak L^q but not in L^q, q = (alpha + 1)/(alpha + 1 - sigma)",
        "truncation (1/R, R) with log R = 4^k / 2",
        {"alpha": ">= -1/2", "sigma": "(0, alpha + 1)"}),
    "bes-glob-pq": _Registered(
        _ce_bes_glob_pq, "Bessel potential (modified), global part",
        "no L^p -> L^q bound for q < p",
        "upper limit R = 2^k",
        {"alpha": "> -1", "sigma": "> 0", "p": "(q, inf)", "xi": "(2(alpha+1)/p, 2(alpha+1)/q]"}),
    "bes-glob-diag": _Registered(
        _ce_bes_glob_diag, "Bessel potential (modified), global part",
        "no L^p -> L^q bound for p != q when alpha < -1/2",
        "position n of the unit interval",
        {"alpha": "< -1/2", "sigma": "> 0", "p,q": "(2 alpha + 1)(1/q - 1/p) > 0"}),
}


def counterexample_manifest() -> dict:
    """Machine-readable registry: tag -> operator, claim, family parameter, ranges."""
    return {
        tag: {
            "operator": r.operator,
            "claim": r.claim,
            "family_parameter": r.family_parameter,
            "parameter_ranges": r.parameter_ranges,
        }
        for tag, r in COUNTEREXAMPLES.items()
    }


def counterexample_run(tag: str, **params) -> CounterexampleReport:
    """Run a registered counterexample family.

    ``diverged`` is true iff the designated quantity is finite and positive
    at every family member and grows by a factor of at least 2 across each
    of 3 (or more) consecutive refinements.

    Raises
    ------
    KeyError
        For an unknown tag.
    """
    if tag not in COUNTEREXAMPLES:
        raise KeyError(f"unknown counterexample tag {tag!r}; known: {', '.join(sorted(COUNTEREXAMPLES))}")
    used, family, values, checks = COUNTEREXAMPLES[tag].driver(**params)
    return CounterexampleReport(tag, used, [float(v) for v in family], [float(v) for v in values],
                                _diverging(values), checks)


# ---------------------------------------------------------------------------
# radial cross-check
# ---------------------------------------------------------------------------


def radial_constant(n: int, sigma: float) -> float:
    """``int_{R^n} |x - y|^{2 sigma - n} f(y) dy`` over ``I^{n/2 - 1, sigma} f_0(|x|)`` for radial ``f``.

    Equal to ``4^sigma pi^{n/2} Gamma(sigma) / Gamma(n/2 - sigma)``.
    """
    return 4.0**sigma * math.pi ** (n / 2) * math.exp(special.gammaln(sigma) - special.gammaln(n / 2 - sigma))


def spherical_average(n: int, sigma: float, r: float, rho, diff=None):
    """``int_{S^{n-1}} |r e - rho w|^{2 sigma - n} dw`` (unnormalized surface measure).

    ``diff = rho - r`` may be passed exactly.  Closed forms are used for
    ``n = 1``, ``n = 3`` and ``(n, sigma) = (2, 1/2)``; other cases use
    quadrature over the polar angle.
    """
    rho = np.asarray(rho, dtype=float)
    d = rho - r if diff is None else np.asarray(diff, dtype=float)
    ad = np.abs(d)
    s = 2 * sigma
    with np.errstate(divide="ignore"):
        if n == 1:
            return ad ** (s - 1) + (r + rho) ** (s - 1)
        if n == 3:
            if sigma == 0.5:
                return 2 * math.pi / (r * rho) * np.log((r + rho) / ad)
            return 2 * math.pi / (2 * r * rho * (sigma - 0.5)) * ((r + rho) ** (s - 1) - ad ** (s - 1))
        if n == 2 and sigma == 0.5:
            m1 = (d / (r + rho)) ** 2
            return 4.0 * special.ellipkm1(m1) / (r + rho)
    # generic: |S^{n-2}| int_0^pi (r^2 + rho^2 - 2 r rho cos t)^{sigma - n/2} sin^{n-2} t dt
    surf = 2 * math.pi ** ((n - 1) / 2) / special.gamma((n - 1) / 2)
    out = np.empty(rho.shape)
    for i, (rr, dd) in enumerate(zip(rho.ravel(), d.ravel())):
        def integrand(t, anchor, direction, offset, rr=rr, dd=dd):
            half = np.where(np.broadcast_to(anchor == 0.0, t.shape), np.sin(0.5 * offset), np.sin(0.5 * t))
            dist2 = dd * dd + 4 * r * rr * half * half
            return dist2 ** (sigma - n / 2) * np.sin(t) ** (n - 2)

        sing = [Singularity(0.0, s - 2)] if dd == 0 else []
        out.ravel()[i] = surf * line_integral(integrand, 0.0, math.pi, singularities=sing, rtol=1e-12).value
    return out


def _euclidean_radial_potential(n: int, sigma: float, f0: SampledFunction, r: float, tol: float) -> float:
    """``int_{R^n} |x - y|^{2 sigma - n} f(y) dy`` at ``|x| = r`` for the radial ``f = f0(|.|)``."""
    if sigma < 0.5:
        diag = Singularity(r, 2 * sigma - 1)
    elif sigma == 0.5:
        diag = Singularity(r, 0.0, -1.0)
    else:
        diag = Singularity(r, 0.0)
    sing = [diag] if f0.lo <= r <= f0.hi else []
    for end, idx in ((f0.lo, 0), (f0.hi, 1)):
        beh = f0.behavior(idx)
        sing.append(Singularity(end, beh.exponent + ((n - 1) if end == 0 else 0.0), beh.log_power))

    def integrand(rho, anchor, direction, offset):
        at_r = np.broadcast_to(anchor == r, rho.shape)
        d = np.where(at_r, direction * offset, rho - r)
        fv = f0.evaluate_near(rho, anchor, direction, offset)
        out = np.zeros(rho.shape)
        nz = fv != 0
        if nz.any():
            out[nz] = fv[nz] * rho[nz] ** (n - 1) * spherical_average(n, sigma, r, rho[nz], d[nz])
        return out

    breaks = list(f0.breakpoints) + [r / 2, 2 * r]
    return line_integral(integrand, f0.lo, f0.hi, singularities=sing, breaks=breaks, rtol=tol).value


def radial_crosscheck(n: int, sigma: float, f0: SampledFunction, x_grid, tol: float = 1e-10):
    """Fit the constant between the Euclidean and the Hankel Riesz potential of a radial function.

    The Euclidean side integrates ``|x - y|^{2 sigma - n}`` against
    ``f = f0(|.|)`` through spherical averages; the other side is the
    modified-setting potential with ``alpha = n/2 - 1``.  The constant is
    fitted at the first grid point.

    Returns
    -------
    fitted_constant : float
    max_rel_dev : float
        Largest relative deviation of the ratio at the remaining points.

    Raises
    ------
    ValueError
        Unless ``0 < sigma < n/2``.
    """
    n = int(n)
    if n < 1:
        raise ValueError("dimension must be a positive integer")
    if not 0 < sigma < n / 2:
        raise ValueError("radial Riesz potentials need 0 < sigma < n/2")
    xs = np.atleast_1d(np.asarray(x_grid, dtype=float))
    params = PotentialParams(n / 2 - 1, sigma, Kind.RIESZ)
    ratios = []
    for x in xs:
        euclid = _euclidean_radial_potential(n, sigma, f0, float(x), tol)
        hankel = apply_potential(Setting.MODIFIED, params, f0, float(x), tol).value
        ratios.append(euclid / hankel)
    c = ratios[0]
    dev = max((abs(r / c - 1.0) for r in ratios[1:]), default=0.0)
    return float(c), float(dev)
