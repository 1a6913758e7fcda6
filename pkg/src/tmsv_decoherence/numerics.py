"""Numerical primitives: log-factorials, log-sum-exp, a Jacobi eigensolver
for real symmetric matrices, and Shannon / von Neumann entropies in bits.

Entropies use the convention 0 log 0 = 0.
"""
import math
from dataclasses import dataclass

import numba
import numpy as np

from .errors import ConvergenceError, NegativeProbabilityError, PSDViolationError

_LOG_FACTORIAL_TABLE_SIZE = 401

# ln(n!) from exact integer factorials; math.log of a big int is correctly
# rounded to a double, so every entry is good to ~1 ulp.
_LOG_FACTORIALS = np.array(
    [math.log(math.factorial(n)) for n in range(_LOG_FACTORIAL_TABLE_SIZE)]
)


def log_factorial(n):
    """Return ln(n!) for a nonnegative integer ``n``."""
    n = int(n)
    if n < 0:
        raise ValueError(f"log_factorial needs n >= 0, got {n}")
    if n < _LOG_FACTORIAL_TABLE_SIZE:
        return float(_LOG_FACTORIALS[n])
    return math.log(math.factorial(n))


def log_factorials(n_max):
    """Array of ln(k!) for k = 0..n_max."""
    if n_max < _LOG_FACTORIAL_TABLE_SIZE:
        return _LOG_FACTORIALS[: n_max + 1].copy()
    extra = [math.log(math.factorial(k)) for k in range(_LOG_FACTORIAL_TABLE_SIZE, n_max + 1)]
    return np.concatenate([_LOG_FACTORIALS, extra])


def log_sum_exp(terms, axis=None):
    """Stable ln(sum(exp(terms))).

    The largest term is factored out before exponentiating. Terms equal to
    -inf represent exact zeros; if every term is -inf the result is -inf.
    ``axis`` reduces an array along one axis, as in numpy.
    """
    a = np.asarray(terms, dtype=float)
    if a.size == 0:
        raise ValueError("log_sum_exp needs at least one term")
    peak = np.max(a, axis=axis, keepdims=True)
    finite_peak = np.where(np.isfinite(peak), peak, 0.0)
    with np.errstate(under="ignore"):
        total = np.sum(np.exp(a - finite_peak), axis=axis, keepdims=True)
    with np.errstate(divide="ignore"):
        out = np.log(total) + finite_peak
    out = np.where(np.isneginf(peak), -np.inf, out)
    if axis is None:
        return float(out.reshape(()))
    return np.squeeze(out, axis=axis)


def as_symmetric(m, rtol=1e-12):
    """Validate ``m`` as a finite real symmetric matrix and return a copy.

    The lower triangle is overwritten by the upper one so that the result
    is symmetric bit for bit.
    """
    a = np.array(m, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise ValueError(f"expected a nonempty square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    scale = max(1.0, float(np.max(np.abs(a))))
    if np.max(np.abs(a - a.T)) > rtol * scale:
        raise ValueError("matrix is not symmetric")
    upper = np.triu(a)
    return upper + np.triu(a, 1).T


@dataclass(frozen=True)
class Spectrum:
    eigenvalues: np.ndarray  # descending
    residual: float  # off-diagonal Frobenius norm / Frobenius norm at exit
    sweeps: int

    @property
    def min(self):
        return float(self.eigenvalues[-1])


@numba.njit(cache=True)
def _cyclic_jacobi(a, tol_abs, max_sweeps):
    # In-place cyclic-by-row Jacobi. Returns (off-diagonal norm, sweeps used);
    # sweeps = -1 signals non-convergence.
    n = a.shape[0]
    # pivots this small cannot push the off-diagonal norm above tol_abs
    skip = tol_abs / n
    off = 0.0
    for sweep in range(max_sweeps + 1):
        off = 0.0
        for i in range(n):
            for j in range(i + 1, n):
                off += a[i, j] * a[i, j]
        off = np.sqrt(2.0 * off)
        if off <= tol_abs:
            return off, sweep
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) < skip:
                    continue
                app = a[p, p]
                aqq = a[q, q]
                diff = aqq - app
                sgn = 1.0 if diff >= 0.0 else -1.0
                # tan of the rotation angle, smaller root; no overflow for tiny apq
                t = sgn * 2.0 * apq / (abs(diff) + np.hypot(diff, 2.0 * apq))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                for k in range(n):
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = c * akp - s * akq
                    a[k, q] = s * akp + c * akq
                for k in range(n):
                    apk = a[p, k]
                    aqk = a[q, k]
                    a[p, k] = c * apk - s * aqk
                    a[q, k] = s * apk + c * aqk
                a[p, p] = app - t * apq
                a[q, q] = aqq + t * apq
                a[p, q] = 0.0
                a[q, p] = 0.0
    return off, -1


def symmetric_eigenvalues(m, tol=1e-14, max_sweeps=100):
    """Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations.

    Iterates full sweeps until the off-diagonal Frobenius norm drops below
    ``tol`` times the Frobenius norm of ``m``.

    Args:
        m: square symmetric array (validated with :func:`as_symmetric`).
        tol: relative stopping threshold, > 0.
        max_sweeps: sweep limit before giving up.

    Returns:
        Spectrum with eigenvalues in descending order.

    Raises:
        ConvergenceError: the sweep limit was hit; carries the residual.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    a = as_symmetric(m)
    norm = float(np.sqrt(np.sum(a * a)))
    if norm == 0.0:
        return Spectrum(np.zeros(a.shape[0]), 0.0, 0)
    off, sweeps = _cyclic_jacobi(a, tol * norm, int(max_sweeps))
    residual = off / norm
    if sweeps < 0:
        raise ConvergenceError(
            f"Jacobi did not converge in {max_sweeps} sweeps (residual {residual:.3e})",
            residual,
        )
    return Spectrum(np.sort(np.diag(a))[::-1].copy(), residual, sweeps)


def _xlog2x(p):
    p = np.asarray(p, dtype=float)
    out = np.zeros_like(p)
    pos = p > 0
    out[pos] = p[pos] * np.log2(p[pos])
    return out


def shannon_entropy_bits(p, check_normalization=True):
    """Shannon entropy -sum p log2 p of a probability vector.

    Entries in [-1e-12, 0) are treated as rounding noise and clamped to 0.
    """
    p = np.array(p, dtype=float).ravel()
    bad = np.flatnonzero(p < -1e-12)
    if bad.size:
        raise NegativeProbabilityError(int(bad[0]), float(p[bad[0]]))
    p = np.clip(p, 0.0, None)
    if check_normalization and abs(p.sum() - 1.0) > 1e-8:
        raise ValueError(f"probabilities sum to {p.sum()!r}, not 1")
    return float(max(0.0, -np.sum(_xlog2x(p))))


def von_neumann_entropy_bits(m, tol_eig=1e-10, normalize=False, return_spectrum=False):
    """Von Neumann entropy -Tr(m log2 m) of a positive semidefinite matrix.

    Eigenvalues in [-tol_eig * trace, 0) are clamped to zero; anything more
    negative raises :class:`PSDViolationError`. With ``normalize=True`` the
    spectrum is divided by the trace first.
    """
    a = as_symmetric(m)
    trace = float(np.trace(a))
    if not trace > 0:
        raise ValueError(f"trace must be positive, got {trace!r}")
    spectrum = symmetric_eigenvalues(a)
    if spectrum.min < -tol_eig * trace:
        raise PSDViolationError(
            f"eigenvalue {spectrum.min:.3e} below -{tol_eig:g} * trace", spectrum.min
        )
    lam = np.clip(spectrum.eigenvalues, 0.0, None)
    if normalize:
        lam = lam / trace
    entropy = float(max(0.0, -np.sum(_xlog2x(lam))))
    if return_spectrum:
        return entropy, spectrum
    return entropy
