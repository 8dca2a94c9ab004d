"""Coefficient multipliers and reproducing-kernel integrals.

A multiplier sequence ``{m_k}`` acts on a series coefficientwise.  Its
size is measured by the dyadic-variation constant

    sup_k |m_k| + sup_{n>=0} sum_{2^n <= k < 2^(n+1)} |m_{k+1} - m_k|,

the quantity that controls boundedness of the multiplier operator on the
disk spaces studied here.  For finite sequences both suprema truncate at
the sequence length.

The kernel side provides the weighted-kernel integral
``int_D |1 - z conj(w)|^(-(2+p)) dA(z)`` (which grows like
``(1 - |w|^2)^(-p)`` toward the boundary), the positive-kernel transform
``f -> int f(w) |1 - z conj(w)|^(-2) dA(w)``, and the error of the
reproducing identity ``f(z) = int f(w) (1 - z conj(w))^(-2) dA(w)``.
Kernel integrals double the rule and fail loudly when the result is not
refinement-stable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import AccuracyError, ConfigurationError, DomainError
from .norms import as_exponent
from .quadrature import DiskRule, integrate_disk, refine_double
from .series import TruncatedSeries, evaluate

# Kernel evaluation points must keep this distance from the boundary.
BOUNDARY_MARGIN = 1e-6

# Relative change allowed between a rule and its doubled refinement.
REFINE_TOL = 1e-4


@dataclass(frozen=True)
class MultiplierSequence:
    """Immutable coefficient multiplier ``m_0..m_N``."""

    values: np.ndarray

    def __post_init__(self):
        arr = np.array(self.values, dtype=np.complex128, copy=True).reshape(-1)
        if arr.size == 0:
            raise ConfigurationError("a multiplier sequence cannot be empty")
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    def __len__(self) -> int:
        return self.values.size


def ones_multiplier(length: int) -> MultiplierSequence:
    return MultiplierSequence(np.ones(length))


def constant_multiplier(value: complex, length: int) -> MultiplierSequence:
    return MultiplierSequence(np.full(length, complex(value)))


def dyadic_pm1_multiplier(length: int) -> MultiplierSequence:
    """``m_k = (-1)^floor(log2(max(k, 1)))`` — signs alternate per dyadic block."""
    signs = np.ones(length)
    for k in range(2, length):
        if (k.bit_length() - 1) % 2 == 1:
            signs[k] = -1.0
    return MultiplierSequence(signs)


def apply_multiplier(f: TruncatedSeries, m: MultiplierSequence) -> TruncatedSeries:
    """Coefficientwise product ``m_k a_k`` (capacity preserved)."""
    if len(m) < f.coeffs.size:
        raise ConfigurationError(
            f"multiplier length {len(m)} shorter than series size {f.coeffs.size}"
        )
    return TruncatedSeries(m.values[: f.coeffs.size] * f.coeffs)


def multiplier_constant(m: MultiplierSequence) -> float:
    """``sup|m_k|`` plus the supremum of dyadic-block total variation.

    Differences ``m_{k+1} - m_k`` exist for ``k <= N - 1``; blocks
    ``[2^n, 2^(n+1))`` truncate there.
    """
    values = m.values
    sup = float(np.abs(values).max())
    n_max = values.size - 1
    diffs = np.abs(np.diff(values))
    variation = 0.0
    lo = 1
    while lo < n_max:
        hi = min(2 * lo, n_max)
        variation = max(variation, math.fsum(diffs[lo:hi]))
        lo *= 2
    return sup + variation


def _check_kernel_point(w: complex) -> complex:
    w = complex(w)
    if abs(w) > 1.0 - BOUNDARY_MARGIN:
        raise DomainError(
            f"kernel point |w| = {abs(w):.17g} too close to the boundary (margin {BOUNDARY_MARGIN})"
        )
    return w


def _kernel_value(w: complex, exponent: float, rule: DiskRule) -> float:
    """``int_D |1 - z conj(w)|^(-exponent) dA(z)`` on the given rule."""

    def fn(z):
        base = 1.0 - z * np.conj(w)
        mag_sq = base.real**2 + base.imag**2
        return np.exp(-0.5 * exponent * np.log(mag_sq))

    return float(integrate_disk(fn, rule))


def kernel_integral_detail(w: complex, p, rule: DiskRule) -> tuple[float, float, float]:
    """Kernel integral plus its doubled-rule value and relative change."""
    w = _check_kernel_point(w)
    exponent = 2.0 + as_exponent(p).p
    value = _kernel_value(w, exponent, rule)
    refined = _kernel_value(w, exponent, refine_double(rule))
    rel_change = abs(value - refined) / abs(refined)
    return value, refined, rel_change


def kernel_integral(w: complex, p, rule: DiskRule) -> float:
    """``int_D |1 - z conj(w)|^(-(2+p)) dA(z)``, refinement-checked.

    Raises `AccuracyError` when doubling the rule moves the value by more
    than ``1e-4`` relative — the cue to pass a finer (or graded) rule.
    """
    value, _, rel_change = kernel_integral_detail(w, p, rule)
    if rel_change > REFINE_TOL:
        raise AccuracyError(
            f"kernel integral at |w| = {abs(w):.6g} changed by {rel_change:.3e} "
            f"under rule doubling (tolerance {REFINE_TOL}); use a finer rule"
        )
    return value


def kernel_comparator(w: complex, p) -> float:
    """The boundary growth benchmark ``(1 - |w|^2)^(-p)``."""
    return (1.0 - abs(complex(w)) ** 2) ** (-as_exponent(p).p)


def modulus_kernel_transform(field, z: complex, rule: DiskRule) -> float:
    """``int_D field(w) |1 - z conj(w)|^(-2) dA(w)`` for a nonnegative field.

    ``field`` receives complex ndarrays of grid points.
    """
    z = _check_kernel_point(z)

    def fn(w):
        base = 1.0 - z * np.conj(w)
        return np.asarray(field(w), dtype=float) / (base.real**2 + base.imag**2)

    return float(integrate_disk(fn, rule))


def reproducing_identity_error(f: TruncatedSeries, z: complex, rule: DiskRule) -> float:
    """``|f(z) - int_D f(w) (1 - z conj(w))^(-2) dA(w)|``.

    For polynomials the integral is quadrature-exact once the angular count
    exceeds twice the degree and the kernel tail ``(z conj(w))^M`` has
    decayed, so the error is pure rounding for interior ``z``.
    """
    z = _check_kernel_point(z)

    def fn(w):
        base = 1.0 - z * np.conj(w)
        return evaluate(f, w) / (base * base)

    integral = integrate_disk(fn, rule)
    return abs(evaluate(f, z) - integral)
