"""Tests for kernel atoms: evaluation, truncation, g-majorant, comparability."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from blp.atoms import (
    Atom,
    AtomSystem,
    atom_derivative,
    atom_evaluate,
    atom_g_function,
    atom_g_majorant,
    auto_truncation_degree,
    check_comparability,
    coefficient_lp_norm,
    rising_binomial_weights,
    synthesize_evaluate,
    taylor_truncate,
)
from blp.errors import ConfigurationError, DomainError
from blp.norms import Exponent, bergman_l2_parseval, bergman_norm
from blp.quadrature import build_disk_rule
from blp.series import evaluate
from blp.squarefuncs import g_function


def _atom(a, p=2.0):
    return Atom(point=a, p=Exponent(p))


# ---------------------------------------------------------------------------
# evaluation


def test_atom_at_origin_is_one():
    atom = _atom(0.0, 0.5)
    for z in (0.0, 0.5, np.exp(1.2j)):
        assert abs(atom_evaluate(atom, z) - 1.0) < 1e-15


def test_atom_value_examples():
    # at z = 0 the kernel factor is 1 regardless of p
    for p in (0.5, 1.0, 2.0):
        assert abs(atom_evaluate(_atom(0.5, p), 0.0) - 0.75) < 1e-15
    # p = 2: power 2/p + 1 = 2, so f(0.5) = 0.75 / 0.5625 = 4/3
    got = atom_evaluate(_atom(0.5, 2.0), 0.5)
    assert abs(got - 4.0 / 3.0) < 1e-15


def test_kernel_power():
    assert _atom(0.1, 2.0).kernel_power == 2.0
    assert _atom(0.1, 1.0).kernel_power == 3.0
    assert _atom(0.1, 0.5).kernel_power == 5.0


def test_atom_array_evaluation():
    atom = _atom(0.3 + 0.4j, 1.0)
    zs = np.array([0.0, 0.5j, -0.2])
    vals = atom_evaluate(atom, zs)
    for z, v in zip(zs, vals):
        assert abs(v - atom_evaluate(atom, complex(z))) < 1e-15


def test_atom_interior_margin():
    _atom(0.999)  # legal, merely boundary-stressed
    with pytest.raises(DomainError):
        _atom(1.0)
    with pytest.raises(DomainError):
        _atom(1.0 - 1e-13)


# ---------------------------------------------------------------------------
# derivative


def test_derivative_examples():
    assert atom_derivative(_atom(0.0, 2.0), 0.5) == 0.0
    got = atom_derivative(_atom(0.5, 2.0), 0.0)
    assert abs(got - 0.75) < 1e-15  # s * conj(a) * (1 - |a|^2) = 2 * 0.5 * 0.75


@pytest.mark.parametrize("p", [0.5, 2.0])
@pytest.mark.parametrize("a", [0.3, 0.6j])
@pytest.mark.parametrize("z", [0.0, 0.4 - 0.2j])
def test_derivative_matches_finite_difference(p, a, z):
    atom = _atom(a, p)
    h = 1e-6
    approx = (atom_evaluate(atom, z + h) - atom_evaluate(atom, z - h)) / (2 * h)
    exact = atom_derivative(atom, z)
    assert abs(approx - exact) <= 1e-6 * max(1.0, abs(exact))


def test_derivative_modulus_identity():
    atom = _atom(0.6 - 0.3j, 0.75)
    s = atom.kernel_power
    a = atom.point
    for z in (0.2, 0.5j, np.exp(0.7j)):
        expected = (
            s * abs(a) * (1.0 - abs(a) ** 2)
            * abs(1.0 - complex(z) * np.conj(a)) ** (-(s + 1.0))
        )
        assert math.isclose(abs(atom_derivative(atom, z)), expected, rel_tol=1e-13)


# ---------------------------------------------------------------------------
# systems and synthesis


def test_atom_system_validation():
    with pytest.raises(ConfigurationError):
        AtomSystem(pairs=(), p=Exponent(2.0))
    with pytest.raises(DomainError):
        AtomSystem(pairs=((1.0, 1.0),), p=Exponent(2.0))


def test_boundary_stress_flag():
    sys = AtomSystem(pairs=((1.0, 0.5), (2.0, 0.9995j)), p=Exponent(2.0))
    assert sys.boundary_stressed == [1]
    assert len(sys.atoms()) == 2


def test_json_roundtrip():
    sys = AtomSystem(pairs=((1.0 + 2.0j, 0.5), (-0.25, 0.1 - 0.7j)), p=Exponent(0.5))
    again = AtomSystem.from_json_dict(sys.to_json_dict())
    assert again.pairs == sys.pairs
    assert again.p == sys.p


def test_json_malformed():
    with pytest.raises(ConfigurationError):
        AtomSystem.from_json_dict({"atoms": []})
    with pytest.raises(ConfigurationError):
        AtomSystem.from_json_dict({"p": 2.0, "atoms": [{"c": [1.0]}]})


def test_synthesis_matches_atom_sum():
    sys = AtomSystem(pairs=((1.0, 0.4), (2.0j, -0.3 + 0.5j)), p=Exponent(1.0))
    for z in (0.0, 0.6, 0.2 - 0.8j):
        expected = sum(
            c * atom_evaluate(Atom(a, sys.p), z) for c, a in sys.pairs
        )
        assert abs(synthesize_evaluate(sys, z) - expected) < 1e-14


# ---------------------------------------------------------------------------
# Taylor truncation


def test_rising_binomial_weights_examples():
    # p = 2: s = 2 gives C(m) = m + 1
    assert np.allclose(rising_binomial_weights(2.0, 5), [1, 2, 3, 4, 5], rtol=1e-15)
    # p = 1: s = 3 gives the triangular-ish C(m) = (m+1)(m+2)/2
    assert np.allclose(rising_binomial_weights(1.0, 4), [1, 3, 6, 10], rtol=1e-15)
    assert rising_binomial_weights(2.0, 0).size == 0


def test_truncation_of_centered_atom_is_constant():
    sys = AtomSystem(pairs=((2.0 - 1.0j, 0.0),), p=Exponent(2.0))
    f = taylor_truncate(sys, 4)
    assert tuple(f.coeffs) == (2.0 - 1.0j, 0j, 0j, 0j, 0j)


def test_truncation_first_coefficients_example():
    sys = AtomSystem(pairs=((1.0, 0.5),), p=Exponent(2.0))
    f = taylor_truncate(sys, 3)
    # b_m = (1 - 0.25) * (m + 1) * 0.5^m
    assert abs(f.coeffs[0] - 0.75) < 1e-15
    assert abs(f.coeffs[1] - 0.75) < 1e-15  # 0.75 * 2 * 0.5
    assert abs(f.coeffs[2] - 0.5625) < 1e-15


def test_truncation_degree_validation():
    sys = AtomSystem(pairs=((1.0, 0.5),), p=Exponent(2.0))
    with pytest.raises(ConfigurationError):
        taylor_truncate(sys, -1)
    assert taylor_truncate(sys, 0).degree == 0


def test_truncation_fidelity_on_boundary():
    sys = AtomSystem(
        pairs=((1.0, 0.6), (0.5 - 0.2j, -0.3 + 0.6j), (2.0j, 0.85)),
        p=Exponent(1.0),
    )
    f = taylor_truncate(sys, 512)
    for theta in np.linspace(0.0, 2.0 * np.pi, 16, endpoint=False):
        z = np.exp(1j * theta)
        direct = synthesize_evaluate(sys, z)
        assert abs(evaluate(f, z) - direct) <= 1e-8 * max(1.0, abs(direct))


def test_auto_truncation_degree():
    centered = AtomSystem(pairs=((1.0, 0.0),), p=Exponent(2.0))
    assert auto_truncation_degree(centered) == 16
    mid = AtomSystem(pairs=((1.0, 0.5),), p=Exponent(2.0))
    assert auto_truncation_degree(mid) == math.ceil(math.log(1e-10) / math.log(0.5))
    hot = AtomSystem(pairs=((1.0, 0.9995),), p=Exponent(2.0))
    assert auto_truncation_degree(hot) == 4096  # capped
    assert auto_truncation_degree(mid, tol=1e-4) < auto_truncation_degree(mid)


def test_p2_truncated_atoms_have_unit_norm():
    # Parseval: (1-|a|^2)^2 sum (m+1)|a|^(2m) = 1 exactly, for every anchor
    for a in (0.0, 0.5, 0.9, 0.3 - 0.6j):
        sys = AtomSystem(pairs=((1.0, a),), p=Exponent(2.0))
        f = taylor_truncate(sys, max(auto_truncation_degree(sys), 256))
        assert math.isclose(bergman_l2_parseval(f), 1.0, rel_tol=1e-8)


def test_atom_norms_bracketed_across_anchors():
    # A^1 norms of truncated atoms stay within a modest bracket as |a| grows
    rule = build_disk_rule(160, 520)
    norms = []
    for a in (0.3, 0.6, 0.9):
        sys = AtomSystem(pairs=((1.0, a),), p=Exponent(1.0))
        norms.append(bergman_norm(taylor_truncate(sys, 512), 1.0, rule))
    assert max(norms) / min(norms) < 3.0


# ---------------------------------------------------------------------------
# g-function of an atom


def test_atom_g_matches_truncated_series_g():
    atom = _atom(0.7, 1.0)
    sys = AtomSystem(pairs=((1.0, 0.7),), p=Exponent(1.0))
    f = taylor_truncate(sys, 400)
    for z in (0.0, 0.5, 0.9 * np.exp(0.2j), 1.0):
        direct = atom_g_function(atom, z)
        via_series = g_function(f, z)
        assert math.isclose(direct, via_series, rel_tol=1e-10, abs_tol=1e-12)


def test_atom_g_at_origin_closed_form():
    atom = _atom(0.5, 2.0)
    # at z = 0 the integrand is constant: g = |f'(0)| sqrt(2/3)
    expected = 0.75 * math.sqrt(2.0 / 3.0)
    assert math.isclose(atom_g_function(atom, 0.0), expected, rel_tol=1e-12)


def test_atom_g_dominated_by_majorant():
    # the domination constant is uniform in the anchor but grows with the
    # kernel power (worst near z = -1, opposite the anchor); measured maxima
    # over |a| <= 0.99 are ~46 (p = 0.5), ~8.6 (p = 1), ~3.3 (p = 2)
    caps = {0.5: 64.0, 1.0: 12.0, 2.0: 5.0}
    for p, cap in caps.items():
        ratios = []
        for a in (0.0, 0.5, 0.9):
            atom = _atom(a, p)
            for theta in np.linspace(0.0, 2.0 * np.pi, 8, endpoint=False):
                for radius in (0.5, 1.0):
                    z = radius * np.exp(1j * theta)
                    ratios.append(
                        atom_g_function(atom, z) / atom_g_majorant(atom, z)
                    )
        assert max(ratios) < cap


# ---------------------------------------------------------------------------
# coefficient norms and comparability


def test_coefficient_norm_examples():
    p2 = AtomSystem(pairs=((3.0, 0.1), (4.0j, 0.2)), p=Exponent(2.0))
    assert math.isclose(coefficient_lp_norm(p2), 5.0, rel_tol=1e-15)
    p1 = AtomSystem(pairs=((1.0, 0.1), (1.0, 0.2)), p=Exponent(1.0))
    assert math.isclose(coefficient_lp_norm(p1), 2.0, rel_tol=1e-15)
    ph = AtomSystem(pairs=((1.0, 0.1), (1.0, 0.2)), p=Exponent(0.5))
    assert math.isclose(coefficient_lp_norm(ph), 4.0, rel_tol=1e-15)


def test_comparability_edges():
    assert check_comparability(1.0, 0.5 + 0.1j)
    assert check_comparability(0.3, 1.0)
    assert check_comparability(1.0, 1.0)
    assert check_comparability(1e-9, -1.0)


@given(
    st.floats(min_value=0.0, max_value=1.0, exclude_min=True),
    st.complex_numbers(max_magnitude=1.0, allow_nan=False, allow_infinity=False),
)
@settings(max_examples=300, deadline=None)
def test_comparability_sampled(t, z):
    assert check_comparability(t, z)
