"""Heat kernels, Riesz and Bessel potentials in the Hankel, non-modified Hankel and Hankel-Dunkl settings.

Modules
-------
bessel
    Normalized Bessel functions ``phi_alpha``, ``varphi_alpha``, the Dunkl kernel.
heat
    Heat kernels and their comparison functions.
potentials
    Riesz and Bessel potential kernels as integrals over the heat kernel.
envelopes
    Closed-form envelopes and the grid verifier :func:`~hankelpot.envelopes.ratio_verify`.
operators
    Potential operators, Hankel transforms, weighted norms, split operators.
lplq
    L^p - L^q predicates, empirical norm ratios, counterexamples, radial cross-check.
cli
    Command-line front end.
"""

from .envelopes import EnvelopeSpec, GridSpec, RatioReport, Region, envelope, ratio_verify
from .heat import HeatPoint, heat_asymptotic_envelope, heat_kernel
from .lplq import (
    ExponentQuad,
    Verdict,
    bessel_bounded,
    counterexample_run,
    domain_inclusion,
    empirical_norm_scan,
    hardy_bounded,
    radial_crosscheck,
    riesz_bounded,
)
from .operators import apply_potential, hankel_transform, negative_power_check, split_operators, weighted_norm
from .potentials import potential_kernel
from .settings import ExtValue, Kind, PotentialParams, Setting

__version__ = "0.1.0"

__all__ = [
    "EnvelopeSpec",
    "ExponentQuad",
    "ExtValue",
    "GridSpec",
    "HeatPoint",
    "Kind",
    "PotentialParams",
    "RatioReport",
    "Region",
    "Setting",
    "Verdict",
    "apply_potential",
    "bessel_bounded",
    "counterexample_run",
    "domain_inclusion",
    "empirical_norm_scan",
    "envelope",
    "hankel_transform",
    "hardy_bounded",
    "heat_asymptotic_envelope",
    "heat_kernel",
    "negative_power_check",
    "potential_kernel",
    "radial_crosscheck",
    "ratio_verify",
    "riesz_bounded",
    "split_operators",
    "weighted_norm",
]
