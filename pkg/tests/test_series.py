"""Tests for truncated power series: evaluation, calculus, dyadic blocks, families."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from blp.errors import ConfigurationError, DomainError
from blp.series import (
    FamilySpec,
    TruncatedSeries,
    dilate,
    derivative,
    dyadic_block,
    dyadic_block_count,
    dyadic_block_range,
    evaluate,
    evaluate_polar,
    generate_family,
)


def _series(*coeffs):
    return TruncatedSeries(coeffs=tuple(complex(c) for c in coeffs))


# ---------------------------------------------------------------------------
# strategies

finite_complex = st.complex_numbers(
    max_magnitude=10.0, allow_nan=False, allow_infinity=False
)

coeff_lists = st.lists(finite_complex, min_size=1, max_size=32)

disk_points = st.complex_numbers(
    max_magnitude=1.0, allow_nan=False, allow_infinity=False
)

unit_interval = st.floats(
    min_value=0.0, max_value=1.0, allow_nan=False, allow_infinity=False
)


# ---------------------------------------------------------------------------
# evaluation


def test_evaluate_examples():
    assert evaluate(_series(1, 0, 0), 0.5) == 1.0
    assert evaluate(_series(0, 1), 0.3 + 0.4j) == 0.3 + 0.4j
    assert math.isclose(evaluate(_series(1, 2, 3), 0.5).real, 2.75, rel_tol=1e-15)
    assert evaluate(_series(1, 2, 3), 0.5).imag == 0.0


def test_evaluate_at_origin_is_constant_term():
    f = _series(2.5 - 1.0j, 3, 4, 5)
    assert evaluate(f, 0.0) == 2.5 - 1.0j


def test_evaluate_on_boundary_allowed():
    f = _series(1, 1)
    assert math.isclose(abs(evaluate(f, 1.0)), 2.0, rel_tol=1e-15)
    z = complex(math.cos(1.0), math.sin(1.0))
    assert abs(evaluate(f, z) - (1 + z)) < 1e-15


def test_evaluate_outside_disk_rejected():
    f = _series(1, 1)
    with pytest.raises(DomainError):
        evaluate(f, 1.1)
    with pytest.raises(DomainError):
        evaluate(f, -1.0 - 1e-3j)
    # within the domain tolerance is fine
    evaluate(f, 1.0 + 5e-13)


def test_evaluate_array_matches_scalar():
    f = _series(1, -2j, 3, 0.5)
    zs = np.array([0.0, 0.5, -0.3 + 0.4j, 1j])
    vals = evaluate(f, zs)
    for z, v in zip(zs, vals):
        assert abs(v - evaluate(f, complex(z))) < 1e-15


@given(coeff_lists, coeff_lists, disk_points)
@settings(max_examples=60, deadline=None)
def test_evaluate_linearity(a, b, z):
    n = max(len(a), len(b))
    a = a + [0j] * (n - len(a))
    b = b + [0j] * (n - len(b))
    fa, fb = _series(*a), _series(*b)
    fsum = _series(*(x + y for x, y in zip(a, b)))
    lhs = evaluate(fsum, z)
    rhs = evaluate(fa, z) + evaluate(fb, z)
    scale = max(1.0, abs(lhs), abs(rhs))
    assert abs(lhs - rhs) <= 1e-12 * scale


# ---------------------------------------------------------------------------
# derivative


def test_derivative_examples():
    assert tuple(derivative(_series(1, 0, 0)).coeffs) == (0j, 0j)
    assert tuple(derivative(_series(0, 0, 1)).coeffs) == (0j, 2 + 0j)
    assert tuple(derivative(_series(5, 4, 3, 2)).coeffs) == (4 + 0j, 6 + 0j, 6 + 0j)


def test_derivative_of_constant_is_zero_series():
    d = derivative(_series(7))
    assert tuple(d.coeffs) == (0j,)
    assert d.degree == 0


@given(coeff_lists, st.floats(min_value=0.0, max_value=1.0))
@settings(max_examples=60, deadline=None)
def test_derivative_dilation_chain_rule(a, r):
    f = _series(*a)
    lhs = derivative(dilate(f, r))
    rhs_inner = dilate(derivative(f), r)
    rhs = tuple(r * c for c in rhs_inner.coeffs)
    for x, y in zip(lhs.coeffs, rhs):
        assert abs(x - y) <= 1e-13 * max(1.0, abs(x))


# ---------------------------------------------------------------------------
# dilation


def test_dilate_examples():
    assert tuple(dilate(_series(1, 1), 0.0).coeffs) == (1 + 0j, 0j)
    f = _series(1, 1, 1)
    assert np.array_equal(dilate(f, 1.0).coeffs, f.coeffs)
    assert tuple(dilate(_series(0, 0, 1), 0.5).coeffs) == (0j, 0j, 0.25 + 0j)


def test_dilate_rejects_out_of_range():
    f = _series(1, 1)
    with pytest.raises(DomainError):
        dilate(f, -0.1)
    with pytest.raises(DomainError):
        dilate(f, 1.1)


@given(
    st.lists(
        st.complex_numbers(max_magnitude=1.0, allow_nan=False, allow_infinity=False),
        min_size=1,
        max_size=32,
    ),
    unit_interval,
    unit_interval,
)
@settings(max_examples=60, deadline=None)
def test_dilate_semigroup(a, r, s):
    f = _series(*a)
    lhs = dilate(dilate(f, r), s)
    rhs = dilate(f, r * s)
    for x, y in zip(lhs.coeffs, rhs.coeffs):
        assert abs(x - y) <= 1e-14


def test_dilate_matches_evaluation():
    f = _series(1, 2, 3, 4)
    r, z = 0.7, 0.5 + 0.3j
    assert abs(evaluate(dilate(f, r), z) - evaluate(f, r * z)) < 1e-14


# ---------------------------------------------------------------------------
# dyadic blocks


def test_block_range_examples():
    assert dyadic_block_range(0) == (0, 1)
    assert dyadic_block_range(1) == (1, 2)
    assert dyadic_block_range(2) == (2, 4)
    assert dyadic_block_range(3) == (4, 8)


def test_block_range_rejects_negative():
    with pytest.raises(ConfigurationError):
        dyadic_block_range(-1)


def test_block_count_examples():
    assert dyadic_block_count(0) == 1
    assert dyadic_block_count(1) == 2
    assert dyadic_block_count(4) == 4
    assert dyadic_block_count(7) == 4
    assert dyadic_block_count(8) == 5


def test_dyadic_block_examples():
    f = _series(7, 0, 0, 0)
    assert tuple(dyadic_block(f, 0).coeffs) == (7 + 0j, 0j, 0j, 0j)
    g = _series(0, 1, 1, 1)
    assert tuple(dyadic_block(g, 2).coeffs) == (0j, 0j, 1 + 0j, 1 + 0j)


def test_blocks_partition_coefficients():
    rng = np.random.default_rng(7)
    for degree in (0, 1, 5, 16, 37):
        coeffs = rng.normal(size=degree + 1) + 1j * rng.normal(size=degree + 1)
        f = TruncatedSeries(coeffs=coeffs)
        total = np.zeros(degree + 1, dtype=complex)
        for n in range(dyadic_block_count(degree)):
            total += dyadic_block(f, n).coeffs
        # exact partition: each coefficient lands in exactly one block
        assert np.array_equal(total, f.coeffs)


# ---------------------------------------------------------------------------
# polar evaluation


def test_evaluate_polar_matches_pointwise():
    rng = np.random.default_rng(11)
    coeffs = rng.normal(size=13) + 1j * rng.normal(size=13)
    f = TruncatedSeries(coeffs=coeffs)
    radii = np.array([0.0, 0.3, 0.9, 1.0])
    m = 16
    grid = evaluate_polar(f, radii, m)
    assert grid.shape == (4, m)
    for i, r in enumerate(radii):
        for j in range(m):
            z = r * complex(math.cos(2 * math.pi * j / m), math.sin(2 * math.pi * j / m))
            assert abs(grid[i, j] - evaluate(f, z)) < 1e-12


def test_evaluate_polar_folds_high_coefficients():
    # with M < degree the grid still matches pointwise values, because
    # e^{ik theta_j} depends only on k mod M on uniform angles
    f = _series(0, 0, 0, 0, 1)  # z^4, M = 3
    grid = evaluate_polar(f, np.array([0.5]), 3)
    for j in range(3):
        z = 0.5 * np.exp(2j * np.pi * j / 3)
        assert abs(grid[0, j] - z**4) < 1e-15


# ---------------------------------------------------------------------------
# families


def test_family_generation_is_deterministic():
    spec = FamilySpec(kind="random_decay", degree=12, count=5, seed=42)
    first = generate_family(spec)
    second = generate_family(spec)
    assert len(first) == 5
    for f, g in zip(first, second):
        assert np.array_equal(f.coeffs, g.coeffs)


def test_random_decay_respects_decay_exponent():
    gentle = FamilySpec(kind="random_decay", degree=64, count=3, seed=1,
                        decay_exponent=0.0)
    steep = FamilySpec(kind="random_decay", degree=64, count=3, seed=1,
                       decay_exponent=3.0)
    for f, g in zip(generate_family(gentle), generate_family(steep)):
        # same underlying draws, rescaled by (1+k)^-s
        ratios = g.coeffs / f.coeffs
        expected = (1.0 + np.arange(65)) ** -3.0
        assert np.allclose(ratios, expected, rtol=1e-12)


def test_lacunary_family_support():
    spec = FamilySpec(kind="lacunary", degree=8, count=2, seed=3)
    for f in generate_family(spec):
        support = {k for k, c in enumerate(f.coeffs) if c != 0}
        assert support == {1, 2, 4, 8}
        for k in support:
            assert math.isclose(abs(f.coeffs[k]), 1.0, rel_tol=1e-12)


def test_monomial_family():
    spec = FamilySpec(kind="monomial", degree=3, count=2, seed=0)
    fam = generate_family(spec)
    assert len(fam) == 2
    for f in fam:
        assert tuple(f.coeffs) == (0j, 0j, 0j, 1 + 0j)


def test_atom_truncation_family_degree_and_determinism():
    spec = FamilySpec(kind="atom_truncation", degree=32, count=4, seed=9)
    fam = generate_family(spec)
    assert all(f.degree == 32 for f in fam)
    assert all(np.any(f.coeffs != 0) for f in fam)
    again = generate_family(spec)
    for f, g in zip(fam, again):
        assert np.array_equal(f.coeffs, g.coeffs)


def test_generate_family_validation():
    with pytest.raises(ConfigurationError):
        generate_family(FamilySpec(kind="nope", degree=4, count=1, seed=0))
    with pytest.raises(ConfigurationError):
        generate_family(FamilySpec(kind="monomial", degree=-1, count=1, seed=0))
    with pytest.raises(ConfigurationError):
        generate_family(FamilySpec(kind="monomial", degree=4, count=0, seed=0))


def test_series_roundtrip_pairs():
    f = _series(1 + 2j, -0.5, 3.25j)
    assert np.array_equal(TruncatedSeries.from_pairs(f.to_pairs()).coeffs, f.coeffs)


def test_series_from_pairs_rejects_malformed():
    with pytest.raises(ConfigurationError):
        TruncatedSeries.from_pairs([[1.0], [2.0]])


def test_series_requires_coefficients():
    with pytest.raises(ConfigurationError):
        TruncatedSeries(coeffs=())
