"""Hardy, Bergman, and disk L^p norms for all exponents 0 < p < infinity.

For ``p < 1`` these are quasi-norms (the triangle inequality only holds for
p-th powers); family comparisons elsewhere in the package are therefore done
on p-th powers in that regime.  Pointwise powers ``|f|^p`` for fractional p
are computed as ``exp((p/2) * log|f|^2)`` with contributions from nodes
where ``|f|^2 < 1e-300`` flushed to zero — the singularity of the power at
zeros of ``f`` is integrable, so the flush is harmless at quadrature scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError
from .quadrature import DiskRule, integrate_circle_values, integrate_disk_values
from .series import TruncatedSeries, evaluate_polar

# |f|^2 below this is treated as an exact zero of f.
_FLUSH_SQ = 1e-300


@dataclass(frozen=True)
class Exponent:
    """A norm exponent ``p`` in (0, infinity)."""

    p: float

    def __post_init__(self):
        p = float(self.p)
        if not math.isfinite(p) or p <= 0.0:
            raise ConfigurationError(f"exponent p must be finite and positive, got {self.p!r}")
        object.__setattr__(self, "p", p)

    @property
    def is_quasi(self) -> bool:
        return self.p < 1.0


def as_exponent(p) -> Exponent:
    return p if isinstance(p, Exponent) else Exponent(float(p))


def power_from_square(mag_sq: np.ndarray, p: float) -> np.ndarray:
    """``x^(p/2)`` elementwise for a nonnegative array ``x = |f|^2``.

    Even/integer exponents take exact arithmetic paths; fractional exponents
    go through exp/log with the tiny-value flush described in the module
    docstring.
    """
    mag_sq = np.asarray(mag_sq, dtype=float)
    if p == 2.0:
        return mag_sq
    if p == 4.0:
        return mag_sq * mag_sq
    if p == 1.0:
        return np.sqrt(mag_sq)
    out = np.zeros_like(mag_sq)
    mask = mag_sq >= _FLUSH_SQ
    out[mask] = np.exp(0.5 * p * np.log(mag_sq[mask]))
    return out


def bergman_norm(f: TruncatedSeries, p, rule: DiskRule) -> float:
    """``(int_D |f|^p dA)^(1/p)`` over the given disk rule."""
    p = as_exponent(p).p
    values = evaluate_polar(f, rule.radial_nodes, rule.angular_count)
    mag_sq = values.real**2 + values.imag**2
    integral = integrate_disk_values(power_from_square(mag_sq, p), rule)
    return float(integral) ** (1.0 / p)


def hardy_norm(f: TruncatedSeries, p, angular_count: int | None = None) -> float:
    """Hardy-space norm: the supremum over r < 1 of the p-th circle means.

    For polynomials the circle means are nondecreasing in r (a tested
    property), so the supremum equals the mean on the unit circle itself;
    this evaluates exactly that.  ``angular_count`` defaults to
    ``2*degree + 9``.
    """
    p = as_exponent(p).p
    if angular_count is None:
        angular_count = 2 * f.degree + 9
    values = evaluate_polar(f, [1.0], angular_count)[0]
    mag_sq = values.real**2 + values.imag**2
    mean = integrate_circle_values(power_from_square(mag_sq, p))
    return float(mean) ** (1.0 / p)


def lp_disk_norm(field, p, rule: DiskRule) -> float:
    """``(int_D field^p dA)^(1/p)`` for a pointwise nonnegative field.

    ``field`` is a callable on complex ndarrays of disk points (e.g. a
    square function); use `lp_disk_norm_values` when the field is already
    tabulated on the rule grid.
    """
    p = as_exponent(p).p
    phases = np.exp(1j * rule.angles)
    z = rule.radial_nodes[:, None] * phases[None, :]
    values = np.asarray(field(z), dtype=float)
    if values.shape != z.shape:
        values = np.broadcast_to(values, z.shape)
    return lp_disk_norm_values(values, p, rule)


def lp_disk_norm_values(values: np.ndarray, p, rule: DiskRule) -> float:
    """`lp_disk_norm` for a field already evaluated on the rule grid."""
    p = as_exponent(p).p
    powered = power_from_square(np.asarray(values, dtype=float) ** 2, p)
    integral = integrate_disk_values(powered, rule)
    return float(integral) ** (1.0 / p)


def bergman_l2_parseval(f: TruncatedSeries) -> float:
    """Exact A^2 norm ``(sum_k |a_k|^2 / (k+1))^(1/2)`` of a truncated series."""
    k = np.arange(f.coeffs.size)
    terms = (f.coeffs.real**2 + f.coeffs.imag**2) / (k + 1.0)
    return math.sqrt(math.fsum(terms))
