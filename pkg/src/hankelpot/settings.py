"""Shared enumerations and small value types."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .bessel import check_order

__all__ = ["Setting", "Kind", "PotentialParams", "ExtValue"]


class Setting(str, Enum):
    """Framework of a kernel or operator.

    ``MODIFIED`` and ``NONMODIFIED`` live on the half-line, ``DUNKL`` on the
    whole real line.
    """

    MODIFIED = "modified"
    NONMODIFIED = "nonmodified"
    DUNKL = "dunkl"

    @classmethod
    def parse(cls, value: "Setting | str") -> "Setting":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower().replace("-", "").replace("_", "")
        aliases = {"modified": cls.MODIFIED, "nonmodified": cls.NONMODIFIED, "dunkl": cls.DUNKL}
        try:
            return aliases[key]
        except KeyError:
            raise ValueError(f"unknown setting {value!r}; expected one of modified, nonmodified, dunkl") from None


class Kind(str, Enum):
    """Riesz potential (no damping) or Bessel potential (factor ``e^{-t}``)."""

    RIESZ = "riesz"
    BESSEL = "bessel"

    @classmethod
    def parse(cls, value: "Kind | str") -> "Kind":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            raise ValueError(f"unknown kind {value!r}; expected riesz or bessel") from None


@dataclass(frozen=True)
class PotentialParams:
    """Order ``alpha > -1``, power ``sigma > 0`` and potential kind."""

    alpha: float
    sigma: float
    kind: Kind = Kind.RIESZ

    def __post_init__(self):
        object.__setattr__(self, "alpha", check_order(self.alpha))
        s = float(self.sigma)
        if not math.isfinite(s) or s <= 0:
            raise ValueError(f"sigma must be positive, got {self.sigma!r}")
        object.__setattr__(self, "sigma", s)
        object.__setattr__(self, "kind", Kind.parse(self.kind))

    @property
    def riesz_finite(self) -> bool:
        """Whether the Riesz kernel is finite off the diagonal (``sigma < alpha + 1``)."""
        return self.sigma < self.alpha + 1.0


@dataclass(frozen=True)
class ExtValue:
    """Extended real value with an absolute error estimate.

    ``status`` is ``"finite"``, ``"infinite"`` (``value = +inf``) or
    ``"not-in-domain"`` (the defining integral diverges for a function that
    changes sign; ``value`` is ``nan``).  Dunkl kernels with ``alpha < -1/2``
    can be negative, so the sign of a finite value is not constrained.
    """

    value: float
    abs_error: float = 0.0
    status: str = "finite"

    def __post_init__(self):
        if self.status == "finite" and math.isinf(self.value):
            object.__setattr__(self, "status", "infinite")

    @classmethod
    def infinite(cls) -> "ExtValue":
        return cls(math.inf, 0.0, "infinite")

    @classmethod
    def not_in_domain(cls) -> "ExtValue":
        return cls(math.nan, math.nan, "not-in-domain")

    @property
    def is_inf(self) -> bool:
        return math.isinf(self.value)

    def __float__(self) -> float:
        return float(self.value)
