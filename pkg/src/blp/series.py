"""Truncated power series on the closed unit disk.

A :class:`TruncatedSeries` holds coefficients ``a_0..a_N`` of an analytic
polynomial ``f(z) = sum a_k z^k``.  The degree is a capacity: trailing zeros
are legal, and every operation treats the coefficient array as immutable.

Besides pointwise Horner evaluation the module provides a polar-grid
evaluator (`evaluate_polar`) that computes ``f`` on a full tensor grid of
radii and uniform angles through a single inverse FFT per radius set; it is
the workhorse behind disk-norm computations and is exact (to rounding) for
any angular count, because on uniform angles ``e^{ik\theta_j}`` only depends
on ``k mod M``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, DomainError

# |z| may exceed 1 by at most this much before evaluation refuses.
DOMAIN_TOL = 1e-12

FAMILY_KINDS = ("random_decay", "lacunary", "monomial", "atom_truncation")


@dataclass(frozen=True)
class TruncatedSeries:
    """Immutable coefficient sequence ``a_0..a_N`` of an analytic polynomial."""

    coeffs: np.ndarray

    def __post_init__(self):
        arr = np.array(self.coeffs, dtype=np.complex128, copy=True).reshape(-1)
        if arr.size == 0:
            raise ConfigurationError("a series needs at least the constant coefficient")
        arr.setflags(write=False)
        object.__setattr__(self, "coeffs", arr)

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    def to_pairs(self) -> list[list[float]]:
        """Serialize as a JSON-friendly list of [re, im] pairs."""
        return [[float(c.real), float(c.imag)] for c in self.coeffs]

    @classmethod
    def from_pairs(cls, pairs) -> "TruncatedSeries":
        try:
            coeffs = [complex(re, im) for re, im in pairs]
        except (TypeError, ValueError) as exc:
            raise ConfigurationError(f"series JSON must be a list of [re, im] pairs: {exc}")
        return cls(coeffs)


@dataclass(frozen=True)
class FamilySpec:
    """Reproducible description of a test-function family."""

    kind: str
    degree: int
    count: int
    seed: int
    decay_exponent: float = 1.0


def _check_domain(z) -> None:
    if np.max(np.abs(z)) > 1.0 + DOMAIN_TOL:
        raise DomainError(f"evaluation point |z| = {np.max(np.abs(z)):.6g} lies outside the closed disk")


def evaluate(f: TruncatedSeries, z):
    """Evaluate ``f`` at ``z`` (``|z| <= 1``) by Horner's scheme.

    Parameters
    ----------
    f : TruncatedSeries
    z : complex scalar or ndarray
        Points on the closed unit disk.

    Returns
    -------
    complex scalar or ndarray matching the shape of ``z``.
    """
    _check_domain(z)
    zc = np.asarray(z, dtype=np.complex128)
    acc = np.zeros_like(zc)
    for c in f.coeffs[::-1]:
        acc = acc * zc + c
    if np.isscalar(z) or np.ndim(z) == 0:
        return complex(acc)
    return acc


def evaluate_polar(f: TruncatedSeries, radii, angular_count: int) -> np.ndarray:
    """Evaluate ``f`` on the polar tensor grid ``radii x uniform angles``.

    Returns the complex array ``F[i, j] = f(radii[i] * exp(2*pi*1j*j/M))``
    with ``M = angular_count``.  Coefficients are folded modulo ``M`` and
    synthesized with one inverse FFT, which is exact for uniform angles.
    """
    if angular_count < 1:
        raise ConfigurationError("angular_count must be >= 1")
    rho = np.asarray(radii, dtype=float).reshape(-1)
    _check_domain(rho)
    k = np.arange(f.coeffs.size)
    scaled = f.coeffs[None, :] * rho[:, None] ** k[None, :]
    buf = np.zeros((rho.size, angular_count), dtype=np.complex128)
    np.add.at(buf.T, k % angular_count, scaled.T)
    return np.fft.ifft(buf, axis=1) * angular_count


def derivative(f: TruncatedSeries) -> TruncatedSeries:
    """Coefficients ``k*a_k`` shifted down one index; constants map to (0,)."""
    if f.degree == 0:
        return TruncatedSeries([0.0])
    k = np.arange(1, f.coeffs.size)
    return TruncatedSeries(f.coeffs[1:] * k)


def dilate(f: TruncatedSeries, r: float) -> TruncatedSeries:
    """The dilation ``f_r(z) = f(r z)``, i.e. coefficients ``a_k r^k``."""
    if not 0.0 <= r <= 1.0:
        raise DomainError(f"dilation radius {r!r} outside [0, 1]")
    if r == 1.0:
        return f
    k = np.arange(f.coeffs.size)
    return TruncatedSeries(f.coeffs * r**k)


def dyadic_block_range(n: int) -> tuple[int, int]:
    """Index half-open range [lo, hi) of the n-th dyadic coefficient block."""
    if n < 0:
        raise ConfigurationError("block index must be nonnegative")
    if n == 0:
        return 0, 1
    return 2 ** (n - 1), 2**n


def dyadic_block_count(degree: int) -> int:
    """Number of blocks needed to cover coefficient indices 0..degree."""
    return degree.bit_length() + 1


def dyadic_block(f: TruncatedSeries, n: int) -> TruncatedSeries:
    """Keep coefficients with index in the n-th dyadic block, zero the rest.

    Block 0 is the constant coefficient; block n >= 1 covers indices
    ``2^(n-1) <= k < 2^n``.  Blocks partition the index set, so the blocks
    of ``f`` sum back to ``f`` coefficientwise.  Blocks beyond the degree
    are zero series (same capacity).
    """
    lo, hi = dyadic_block_range(n)
    out = np.zeros_like(f.coeffs)
    hi = min(hi, f.coeffs.size)
    if lo < f.coeffs.size:
        out[lo:hi] = f.coeffs[lo:hi]
    return TruncatedSeries(out)


def generate_family(spec: FamilySpec) -> list[TruncatedSeries]:
    """Build the deterministic test family described by ``spec``.

    kinds
    -----
    random_decay
        ``a_k`` independent complex Gaussians scaled by ``(1+k)^(-s)``.
    lacunary
        unit-modulus coefficients at indices ``2^j`` only (random phases).
    monomial
        ``count`` copies of ``z^degree``.
    atom_truncation
        Taylor truncations of single randomly placed kernel atoms
        (``|a| <= 0.9``, exponent fixed at p = 2).
    """
    if spec.kind not in FAMILY_KINDS:
        raise ConfigurationError(f"unknown family kind {spec.kind!r}; expected one of {FAMILY_KINDS}")
    if spec.count < 1:
        raise ConfigurationError("family count must be >= 1")
    if spec.degree < 0:
        raise ConfigurationError("family degree must be >= 0")

    rng = np.random.default_rng(spec.seed)
    members: list[TruncatedSeries] = []
    n = spec.degree + 1

    if spec.kind == "monomial":
        for _ in range(spec.count):
            coeffs = np.zeros(n, dtype=np.complex128)
            coeffs[-1] = 1.0
            members.append(TruncatedSeries(coeffs))
        return members

    if spec.kind == "atom_truncation":
        from .atoms import Atom, AtomSystem, taylor_truncate
        from .norms import Exponent

        for _ in range(spec.count):
            rho = 0.9 * rng.random()
            phi = 2.0 * np.pi * rng.random()
            a = rho * np.exp(1j * phi)
            system = AtomSystem(pairs=((1.0 + 0.0j, complex(a)),), p=Exponent(2.0))
            members.append(taylor_truncate(system, spec.degree))
        return members

    scale = (1.0 + np.arange(n)) ** (-spec.decay_exponent)
    for _ in range(spec.count):
        if spec.kind == "random_decay":
            draw = rng.standard_normal((2, n))
            coeffs = (draw[0] + 1j * draw[1]) / np.sqrt(2.0) * scale
        else:  # lacunary
            coeffs = np.zeros(n, dtype=np.complex128)
            j = 1
            while j <= spec.degree:
                coeffs[j] = np.exp(2j * np.pi * rng.random())
                j *= 2
        members.append(TruncatedSeries(coeffs))
    return members
