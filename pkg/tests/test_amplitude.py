import math

import mpmath
import numpy as np
import pytest

import tmsv_decoherence.amplitude as amp
from tmsv_decoherence.amplitude import (
    AmplitudePoint,
    amplitude_density,
    block_coefficient,
    block_decomposition,
    block_diagonal,
    block_matrix,
    channel_params,
    is_separable,
    separability_border,
    upper_bound_er,
)
from tmsv_decoherence.entanglement import UPPER_BOUND, maximally_correlated_er
from tmsv_decoherence.errors import DegenerateStateError, TruncationError
from tmsv_decoherence.numerics import symmetric_eigenvalues
from tmsv_decoherence.oracle import integrate_rk4
from tmsv_decoherence.phase import PhasePoint, build_phase_matrix
from tmsv_decoherence.tmsv import pure_entanglement_bits


@pytest.fixture(scope="module")
def oracle_r03():
    """RK4 states at r = 0.3, M = 12 for the oracle-equivalence grid."""
    return {
        (d, nbar): integrate_rk4("amplitude", 0.3, d, nbar, m=12).entries
        for d in (0.1, 0.2, 0.5, 1.0)
        for nbar in (0.01, 0.1)
    }


@pytest.mark.parametrize("nbar", [0.0, 0.01, 0.1, 1.0])
def test_params_at_t0(nbar):
    r = 0.7
    cp = channel_params(AmplitudePoint(r, 0.0, nbar))
    assert cp.n_t == 0.0
    assert cp.R == pytest.approx(math.tanh(r) ** 2, rel=1e-14)
    assert cp.P == pytest.approx(math.tanh(r), rel=1e-14)
    assert cp.Q == 0.0


def test_params_fully_decohered():
    cp = channel_params(AmplitudePoint(1.0, 50.0, 0.1))
    assert cp.n_t == pytest.approx(0.1, rel=1e-15)
    assert cp.P < 1e-20
    assert upper_bound_er(AmplitudePoint(1.0, 50.0, 0.1)).value < 1e-12


@pytest.mark.parametrize("r", [0.3, 1.0, 1.5])
@pytest.mark.parametrize("d", [0.1, 1.0, 5.0])
@pytest.mark.parametrize("nbar", [0.0, 0.1, 2.0])
def test_params_in_range(r, d, nbar):
    cp = channel_params(AmplitudePoint(r, d, nbar))
    assert cp.R > 0 and 0 <= cp.P < 1 and 0 <= cp.Q < 1


def test_degenerate_squeezing():
    with pytest.raises(DegenerateStateError):
        channel_params(AmplitudePoint(1e-9, 0.3, 0.1))
    res = upper_bound_er(AmplitudePoint(0.0, 0.7, 0.1))
    assert res.value == 0.0 and res.kind == UPPER_BOUND


def test_coefficients_at_t0():
    r = 0.6
    cp = channel_params(AmplitudePoint(r, 0.0, 0.1))
    phase0 = build_phase_matrix(PhasePoint(r, 0.0), 20, tail_ceiling=1.0).matrix
    t, c = math.tanh(r), math.cosh(r)
    for n1, n2 in [(0, 0), (1, 0), (4, 9), (20, 20)]:
        val = block_coefficient(0, n1, n2, cp, r)
        assert val == pytest.approx(t ** (n1 + n2) / c**2, rel=1e-13)
        assert val == pytest.approx(phase0[n1, n2], rel=1e-13)
        for k in (1, 2, 7):
            assert block_coefficient(k, n1, n2, cp, r) == 0.0


@pytest.mark.parametrize("k, n1, n2", [(0, 0, 0), (0, 3, 5), (1, 0, 0), (1, 2, 4), (2, 5, 5),
                                       (3, 0, 9), (5, 4, 2), (6, 6, 6), (12, 0, 0), (4, 8, 3)])
def test_coefficients_match_master_equation(oracle_r03, k, n1, n2):
    r = 0.3
    cp = channel_params(AmplitudePoint(r, 0.2, 0.01))
    rho = oracle_r03[(0.2, 0.01)]
    assert block_coefficient(k, n1, n2, cp, r) == pytest.approx(rho[n1, n1 + k, n2, n2 + k], abs=1e-6)
    assert block_coefficient(k, n1, n2, cp, r) == pytest.approx(rho[n1 + k, n1, n2 + k, n2], abs=1e-6)


@pytest.mark.parametrize("point", [AmplitudePoint(0.3, 0.2, 0.01), AmplitudePoint(1.5, 0.9, 0.1),
                                   AmplitudePoint(1.0, 3.0, 0.5)])
def test_block_matrix_matches_scalar_coefficients(point):
    cp = channel_params(point)
    for k in (0, 1, 4, 15):
        m = block_matrix(k, cp, point.r, 50)
        diag = block_diagonal(k, cp, point.r, 50)
        np.testing.assert_allclose(np.diag(m), diag, rtol=1e-12)
        assert np.array_equal(m, m.T)
        for a, b in [(0, 0), (0, 50), (7, 11), (33, 30), (50, 50)]:
            assert m[a, b] == pytest.approx(block_coefficient(k, a, b, cp, point.r), rel=1e-12)


def test_scalar_coefficient_is_symmetric():
    cp = channel_params(AmplitudePoint(0.8, 0.4, 0.05))
    for k, a, b in [(0, 1, 7), (3, 2, 9), (9, 0, 4)]:
        assert block_coefficient(k, a, b, cp, 0.8) == block_coefficient(k, b, a, cp, 0.8)


def test_decomposition_at_t0():
    dec = block_decomposition(AmplitudePoint(0.5, 0.0, 0.1), 100)
    assert dec.p0 == pytest.approx(1.0, abs=1e-14)
    assert dec.k_cutoff == 0 and dec.weights == [] and dec.blocks == []
    pure = build_phase_matrix(PhasePoint(0.5, 0.0), 100).matrix
    np.testing.assert_allclose(dec.block0, pure, rtol=1e-12, atol=1e-300)


def test_decomposition_trace():
    dec = block_decomposition(AmplitudePoint(0.3, 0.2, 0.01), 60)
    assert abs(dec.p0 + 2 * math.fsum(dec.weights) - 1.0) < 1e-10
    assert dec.p0 + 2 * math.fsum(dec.weights) + dec.trace_deficit == pytest.approx(1.0, abs=1e-15)


@pytest.mark.parametrize("r", [0.2, 0.8, 1.4])
@pytest.mark.parametrize("d", [0.1, 0.6, 1.2, 3.0])
@pytest.mark.parametrize("nbar", [0.01, 0.1])
def test_weights_positive_decreasing_and_blocks_normalized(r, d, nbar):
    dec = block_decomposition(AmplitudePoint(r, d, nbar), 100)
    w = np.array(dec.weights)
    assert dec.k_cutoff >= 1
    assert np.all(w > 0)
    assert np.all(np.diff(w) < 0)
    assert w[-1] >= 1e-12
    for block in [dec.block0] + dec.blocks:
        assert np.trace(block) == pytest.approx(1.0, abs=1e-12)
        assert symmetric_eigenvalues(block).min >= -1e-10
    assert dec.trace_deficit < 1e-8


def test_decomposition_deficit_guard():
    with pytest.raises(TruncationError):
        block_decomposition(AmplitudePoint(1.0, 0.1, 0.01), 10)


def test_upper_bound_exact_at_t0():
    res = upper_bound_er(AmplitudePoint(1.0, 0.0, 0.01))
    assert res.kind == UPPER_BOUND
    assert res.value == pytest.approx(pure_entanglement_bits(1.0), abs=1e-9)
    values = [upper_bound_er(AmplitudePoint(0.9, 0.0, nbar)).value for nbar in (0.01, 0.1, 1.0)]
    assert max(values) - min(values) <= 1e-12


def test_upper_bound_small_at_border_r05():
    border = separability_border(0.5, 0.01)
    at_border = upper_bound_er(AmplitudePoint(0.5, border, 0.01)).value
    assert 0 <= at_border < 0.05 * upper_bound_er(AmplitudePoint(0.5, 0.0, 0.01)).value


def test_upper_bound_nonnegative_and_decreasing():
    for nbar in (0.01, 0.1):
        values = [upper_bound_er(AmplitudePoint(0.7, d, nbar)).value for d in np.linspace(0, 2, 11)]
        assert min(values) >= 0
        assert all(b < a for a, b in zip(values, values[1:]))


@pytest.mark.parametrize("d", [0.1, 0.5, 1.0])
@pytest.mark.parametrize("nbar", [0.01, 0.1])
def test_reassembled_state_matches_master_equation(oracle_r03, d, nbar):
    analytic = amplitude_density(AmplitudePoint(0.3, d, nbar), 12)
    assert np.max(np.abs(analytic - oracle_r03[(d, nbar)])) < 1e-6


def test_branches_are_degenerate(oracle_r03):
    point = AmplitudePoint(0.3, 0.5, 0.1)
    rho = amplitude_density(point, 12)
    for k in range(1, 6):
        a = np.arange(13 - k)
        plus = rho[a[:, None], a[:, None] + k, a[None, :], a[None, :] + k]
        minus = rho[a[:, None] + k, a[:, None], a[None, :] + k, a[None, :]]
        np.testing.assert_allclose(plus, minus, rtol=1e-14, atol=0)
        e_plus = maximally_correlated_er(plus / np.trace(plus))[0]
        e_minus = maximally_correlated_er(minus / np.trace(minus))[0]
        assert e_plus == pytest.approx(e_minus, abs=1e-14)
        # the RK4 state shows the same mirror symmetry
        o = oracle_r03[(0.5, 0.1)]
        o_plus = o[a[:, None], a[:, None] + k, a[None, :], a[None, :] + k]
        o_minus = o[a[:, None] + k, a[:, None], a[None, :] + k, a[None, :]]
        np.testing.assert_allclose(o_plus, o_minus, atol=1e-14)


def test_each_block_entropy_evaluated_once(monkeypatch):
    calls = []
    real = amp.maximally_correlated_er

    def counting(m, tol_eig=1e-10):
        calls.append(m.shape)
        return real(m, tol_eig)

    monkeypatch.setattr(amp, "maximally_correlated_er", counting)
    res = upper_bound_er(AmplitudePoint(0.8, 0.6, 0.1), 80)
    assert len(calls) == 1 + res.k_cutoff


def test_border_values():
    mpmath.mp.dps = 30
    assert separability_border(0.0, 0.3) == 0.0
    expected = float(mpmath.log(1 + (1 - mpmath.exp(-2)) / mpmath.mpf("0.02")))
    assert separability_border(1.0, 0.01) == pytest.approx(expected, rel=1e-14)
    assert separability_border(1.0, 0.01) == pytest.approx(3.789476, abs=1e-6)
    assert separability_border(30.0, 0.1) == pytest.approx(math.log(6), rel=1e-14)
    assert separability_border(0.5, 0.0) == math.inf


def test_is_separable_examples():
    assert not is_separable(AmplitudePoint(0.5, 0.0, 0.1))
    assert separability_border(0.5, 0.1) == pytest.approx(1.4256599662139980, rel=1e-14)
    assert is_separable(AmplitudePoint(0.5, 10.0, 0.1))
    assert is_separable(AmplitudePoint(0.0, 0.0, 0.1))


def _min_partial_transpose_eig(rho):
    size = rho.shape[0]
    return np.linalg.eigvalsh(rho.transpose(0, 3, 2, 1).reshape(size * size, size * size)).min()


def test_border_agrees_with_partial_transpose():
    r, nbar = 0.3, 0.1
    border = separability_border(r, nbar)
    inside = integrate_rk4("amplitude", r, border - 0.05, nbar, m=12).entries
    beyond = integrate_rk4("amplitude", r, border + 0.05, nbar, m=12).entries
    assert _min_partial_transpose_eig(inside) < -1e-3
    assert _min_partial_transpose_eig(beyond) > -1e-10
