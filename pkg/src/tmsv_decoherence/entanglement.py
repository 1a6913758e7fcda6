"""Relative entropy of entanglement for maximally correlated states.

A state sum_{mn} a_mn |phi_m, psi_m><phi_n, psi_n| with orthonormal
families {phi}, {psi} has

    E_R = H(diag a) - S(a),

with H the Shannon entropy of the diagonal and S the von Neumann entropy of
the coefficient matrix. The closest separable state is diag(a) in the same
basis.
"""
from dataclasses import dataclass, field

import numpy as np

from .numerics import as_symmetric, shannon_entropy_bits, von_neumann_entropy_bits

EXACT = "exact"
UPPER_BOUND = "upper-bound"


@dataclass(frozen=True)
class EntanglementResult:
    value: float  # bits
    kind: str  # EXACT or UPPER_BOUND
    trace_deficit: float = 0.0
    min_eigenvalue: float = 0.0
    residual: float = 0.0
    k_cutoff: int | None = None
    extra: dict = field(default_factory=dict, compare=False)


def maximally_correlated_er(coeffs, tol_eig=1e-10):
    """E_R in bits of a maximally correlated state given its coefficient matrix.

    The matrix is used as given (not renormalized), so a truncated state
    with trace slightly below one is handled consistently on both terms.

    Returns:
        (value, spectrum) where spectrum is the :class:`Spectrum` of ``coeffs``.
    """
    a = as_symmetric(coeffs)
    diag_entropy = shannon_entropy_bits(np.diag(a), check_normalization=False)
    state_entropy, spectrum = von_neumann_entropy_bits(a, tol_eig=tol_eig, return_spectrum=True)
    return max(0.0, diag_entropy - state_entropy), spectrum
