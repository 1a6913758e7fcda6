"""Phase damping of the two-mode squeezed vacuum.

Under pure dephasing at rate gamma on both modes the state stays in the
span of |n,n><m,m| and its coefficients are

    a_nm = tanh^(n+m) r exp(-d (n-m)^2) / cosh^2 r,   d = gamma t.

That is a maximally correlated state, so its relative entropy of
entanglement is available in closed form.
"""
import math
from dataclasses import dataclass

import numpy as np

from .entanglement import EXACT, EntanglementResult, maximally_correlated_er
from .tmsv import check_squeezing, check_truncation, schmidt_log_amplitudes

DEFAULT_TRUNCATION = 100


@dataclass(frozen=True)
class PhasePoint:
    r: float
    d: float

    def __post_init__(self):
        check_squeezing(self.r)
        if not (math.isfinite(self.d) and self.d >= 0):
            raise ValueError(f"damping d must be finite and >= 0, got {self.d!r}")


@dataclass(frozen=True)
class PhaseDampedMatrix:
    matrix: np.ndarray
    truncation: int
    trace_deficit: float
    point: PhasePoint

    def two_mode_density(self):
        """Embed as a 4-index array rho[n1, n2, m1, m2] (ket n1 n2, bra m1 m2)."""
        n = self.truncation + 1
        rho = np.zeros((n, n, n, n))
        idx = np.arange(n)
        rho[idx[:, None], idx[:, None], idx[None, :], idx[None, :]] = self.matrix
        return rho


def build_phase_matrix(point, n=DEFAULT_TRUNCATION, tail_ceiling=1e-12):
    """Coefficient matrix a_nm of the dephased state, truncated at photon number n.

    Entries are formed in log space and exponentiated once.

    Raises:
        TruncationError: tail mass beyond ``n`` exceeds ``tail_ceiling``.
    """
    if n < 1:
        raise ValueError("truncation must be >= 1")
    deficit = check_truncation(point.r, n, tail_ceiling)
    la = schmidt_log_amplitudes(point.r, n)
    k = np.arange(n + 1)
    gap2 = (k[:, None] - k[None, :]) ** 2
    logs = la[:, None] + la[None, :]
    if point.d:
        logs = logs - point.d * gap2
    m = np.exp(logs)
    m = np.triu(m) + np.triu(m, 1).T
    return PhaseDampedMatrix(m, n, deficit, point)


def relative_entropy_exact(m, tol_eig=1e-10):
    """Exact E_R (bits) of a phase-damped state."""
    value, spectrum = maximally_correlated_er(m.matrix, tol_eig=tol_eig)
    return EntanglementResult(
        value=value,
        kind=EXACT,
        trace_deficit=m.trace_deficit,
        min_eigenvalue=spectrum.min,
        residual=spectrum.residual,
    )


def closest_disentangled_state(m):
    """The separable state minimizing S(rho || sigma): the diagonal part."""
    return np.diag(np.diag(m.matrix))
