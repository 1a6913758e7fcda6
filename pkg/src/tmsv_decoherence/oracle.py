"""Brute-force master-equation integrator used to check the closed forms.

The two-mode density matrix is stored as a real array rho[n1, n2, m1, m2]
(ket photon numbers n1, n2; bra m1, m2), each index running over 0..M.
Ladder operators act by index shifts with sqrt(n) weights. Raising past M
is dropped, so population leaks out of the truncated space at a rate set by
the occupation of level M; the trace drift monitors that loss.
"""
import math
from dataclasses import dataclass

import numpy as np

from .errors import IntegrationError
from .tmsv import check_truncation, schmidt_log_amplitudes

PHASE = "phase"
AMPLITUDE = "amplitude"
MAX_STEP = 1e-3  # largest gamma * dt accepted
MAX_DRIFT = 1e-7


@dataclass
class TwoModeDensityMatrix:
    entries: np.ndarray
    trace_drift: float = 0.0
    steps: int = 0

    @property
    def trunc(self):
        return self.entries.shape[0] - 1

    def trace(self):
        return float(np.einsum("abab->", self.entries))

    def flattened(self):
        n = self.entries.shape[0]
        return self.entries.reshape(n * n, n * n)


def tmsv_projector(r, m):
    """Truncated |Psi><Psi| of the squeezed vacuum (not renormalized)."""
    size = m + 1
    rho = np.zeros((size,) * 4)
    la = schmidt_log_amplitudes(r, m)
    idx = np.arange(size)
    rho[idx[:, None], idx[:, None], idx[None, :], idx[None, :]] = np.exp(la[:, None] + la[None, :])
    return rho


def _number_grids(size):
    n = np.arange(size, dtype=float)
    return (
        n[:, None, None, None],
        n[None, :, None, None],
        n[None, None, :, None],
        n[None, None, None, :],
    )


def apply_phase_generator(rho, gamma):
    """(L1 + L2) rho for dephasing: each element decays at
    (gamma/2) [(n1 - m1)^2 + (n2 - m2)^2]."""
    n1, n2, m1, m2 = _number_grids(rho.shape[0])
    return -0.5 * gamma * ((n1 - m1) ** 2 + (n2 - m2) ** 2) * rho


def _lower_both(rho, ket_axis, bra_axis, sq):
    # a rho a^dag on one mode: out[n, m] = sqrt((n+1)(m+1)) rho[n+1, m+1]
    size = rho.shape[0]
    out = np.zeros_like(rho)
    dst = [slice(None)] * 4
    src = [slice(None)] * 4
    dst[ket_axis] = dst[bra_axis] = slice(0, size - 1)
    src[ket_axis] = src[bra_axis] = slice(1, size)
    out[tuple(dst)] = _pair_weight(sq, ket_axis, bra_axis) * rho[tuple(src)]
    return out


def _raise_both(rho, ket_axis, bra_axis, sq):
    # a^dag rho a on one mode: out[n, m] = sqrt(n m) rho[n-1, m-1]; top level dropped
    size = rho.shape[0]
    out = np.zeros_like(rho)
    dst = [slice(None)] * 4
    src = [slice(None)] * 4
    dst[ket_axis] = dst[bra_axis] = slice(1, size)
    src[ket_axis] = src[bra_axis] = slice(0, size - 1)
    out[tuple(dst)] = _pair_weight(sq, ket_axis, bra_axis) * rho[tuple(src)]
    return out


def _pair_weight(sq, ket_axis, bra_axis):
    shape_k = [1] * 4
    shape_b = [1] * 4
    shape_k[ket_axis] = shape_b[bra_axis] = sq.size
    return sq.reshape(shape_k) * sq.reshape(shape_b)


def apply_amplitude_generator(rho, gamma, nbar):
    """(L1 + L2) rho for thermal amplitude damping with mean bath occupation nbar."""
    size = rho.shape[0]
    sq = np.sqrt(np.arange(1, size, dtype=float))
    n1, n2, m1, m2 = _number_grids(size)
    out = np.zeros_like(rho)
    for ket_axis, bra_axis, nk, nb in ((0, 2, n1, m1), (1, 3, n2, m2)):
        loss = 2.0 * _lower_both(rho, ket_axis, bra_axis, sq) - (nk + nb) * rho
        # a a^dag = a^dag a + 1 exactly, independent of the cutoff
        gain = 2.0 * _raise_both(rho, ket_axis, bra_axis, sq) - (nk + nb + 2.0) * rho
        out += 0.5 * gamma * ((1.0 + nbar) * loss + nbar * gain)
    return out


def integrate_rk4(model, r, d_target, nbar=0.0, m=12, steps=None, gamma=1.0):
    """Fixed-step RK4 from the truncated squeezed vacuum to gamma t = d_target.

    Args:
        model: "phase" or "amplitude".
        steps: number of steps; defaults to the fewest with gamma dt <= 1e-3.

    Raises:
        IntegrationError: trace drift above 1e-7.
        TruncationError: amplitude model with tail mass above 1e-10 beyond m.
    """
    if model not in (PHASE, AMPLITUDE):
        raise ValueError(f"unknown model {model!r}")
    if d_target < 0 or gamma <= 0:
        raise ValueError("need d_target >= 0 and gamma > 0")
    if model == AMPLITUDE:
        # dephasing never couples retained and discarded levels; damping does
        check_truncation(r, m, 1e-10)
    rho = tmsv_projector(r, m)
    if d_target == 0:
        return TwoModeDensityMatrix(rho, 0.0, 0)
    if steps is None:
        steps = math.ceil(d_target / MAX_STEP - 1e-9)
    t_final = d_target / gamma
    dt = t_final / steps
    if gamma * dt > MAX_STEP * (1 + 1e-12):
        raise ValueError(f"gamma*dt = {gamma * dt:.3e} exceeds {MAX_STEP}")
    if model == PHASE:
        rhs = lambda x: apply_phase_generator(x, gamma)  # noqa: E731
    else:
        rhs = lambda x: apply_amplitude_generator(x, gamma, nbar)  # noqa: E731
    trace0 = float(np.einsum("abab->", rho))
    for _ in range(steps):
        k1 = rhs(rho)
        k2 = rhs(rho + 0.5 * dt * k1)
        k3 = rhs(rho + 0.5 * dt * k2)
        k4 = rhs(rho + dt * k3)
        rho = rho + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    drift = abs(float(np.einsum("abab->", rho)) - trace0)
    if drift > MAX_DRIFT:
        raise IntegrationError(f"trace drifted by {drift:.3e}", drift)
    return TwoModeDensityMatrix(rho, drift, steps)

