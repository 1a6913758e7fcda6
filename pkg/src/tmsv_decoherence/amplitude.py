"""Thermal amplitude damping of the two-mode squeezed vacuum.

Both modes decay at rate gamma into a bath with mean photon number nbar.
The damped state splits into blocks labelled by the photon-number
difference k between the modes:

    rho = sum_{n,m} c0_nm |n,n><m,m|
        + sum_{k>=1} sum_{n,m} ck_nm (|n,n+k><m,m+k| + |n+k,n><m+k,m|)

with

    ck_nm = sqrt(n! m! (n+k)! (m+k)!) / sinh^2 r * P^(n+m) Q^k R
            * sum_{l=0}^{min(n,m)} (Q/P)^(2l) / (l! (l+k)! (n-l)! (m-l)!)

Each block is a maximally correlated state, so by convexity the weighted
sum of the blocks' exact relative entropies bounds E_R from above.
"""
import math
from dataclasses import dataclass, field

import numpy as np

from .entanglement import UPPER_BOUND, EntanglementResult, maximally_correlated_er
from .errors import DegenerateStateError, TruncationError
from .numerics import log_factorials, log_sum_exp
from .tmsv import check_squeezing, schmidt_log_amplitudes

R_MIN = 1e-8


@dataclass(frozen=True)
class AmplitudePoint:
    r: float
    d: float
    nbar: float

    def __post_init__(self):
        check_squeezing(self.r)
        for name in ("d", "nbar"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v >= 0):
                raise ValueError(f"{name} must be finite and >= 0, got {v!r}")


@dataclass(frozen=True)
class ChannelParams:
    n_t: float  # thermal photons injected so far, nbar (1 - e^-d)
    P: float
    Q: float
    R: float
    decay: float  # e^-d


def channel_params(point, r_min=R_MIN):
    """P, Q, R and n(t) for a damping point.

    Raises:
        DegenerateStateError: r <= r_min; the input is the vacuum, which
            stays separable, so callers should report zero entanglement.
    """
    r = point.r
    if r <= r_min:
        raise DegenerateStateError(f"r={r} <= {r_min}: input state is the vacuum")
    decay = math.exp(-point.d)
    n_t = point.nbar * (1.0 - decay)
    coth = 1.0 / math.tanh(r)
    lost = n_t + 1.0 - decay
    R = 1.0 / ((coth * (n_t + 1.0)) ** 2 - lost**2)
    P = R * decay * coth
    Q = (n_t + R * decay * lost) / (n_t + 1.0)
    if not (R > 0 and 0 <= P < 1 and 0 <= Q < 1):
        raise ValueError(f"channel parameters out of range at {point}: P={P}, Q={Q}, R={R}")
    return ChannelParams(n_t=n_t, P=P, Q=Q, R=R, decay=decay)


def _times_log(count, log_x):
    # count * ln(x) with 0 * ln(0) = 0, for scalar log_x and integer counts
    count = np.asarray(count)
    if log_x == -np.inf:
        return np.where(count == 0, 0.0, -np.inf)
    return count * log_x


def _log_params(cp, r):
    with np.errstate(divide="ignore"):
        log_p = math.log(cp.P) if cp.P > 0 else -np.inf
        log_q = math.log(cp.Q) if cp.Q > 0 else -np.inf
    return log_p, log_q, math.log(cp.R) - 2.0 * math.log(math.sinh(r))


def block_coefficient(k, n1, n2, cp, r):
    """Single coefficient ck_{n1,n2}, summed over l with log_sum_exp."""
    if min(k, n1, n2) < 0:
        raise ValueError("k, n1, n2 must be nonnegative")
    lf = log_factorials(max(n1, n2) + k)
    log_p, log_q, log_pref = _log_params(cp, r)
    terms = []
    for l in range(min(n1, n2) + 1):
        terms.append(
            float(_times_log(n1 + n2 - 2 * l, log_p))
            + float(_times_log(2 * l + k, log_q))
            - lf[l] - lf[l + k] - lf[n1 - l] - lf[n2 - l]
        )
    log_c = 0.5 * (lf[n1] + lf[n2] + lf[n1 + k] + lf[n2 + k]) + log_pref + log_sum_exp(terms)
    return math.exp(log_c)


def _row_terms(k, cp, r, n):
    # log_c[a, b] = pref[a] + pref[b] + LSE_l (row[a, l] + row[b, l] + mid[l])
    lf = log_factorials(n + k)
    log_p, log_q, log_pref = _log_params(cp, r)
    a = np.arange(n + 1)
    l = np.arange(n + 1)
    excess = a[:, None] - l[None, :]
    valid = excess >= 0
    safe = np.where(valid, excess, 0)
    row = np.where(valid, _times_log(safe, log_p) - lf[safe], -np.inf)
    mid = _times_log(2 * l + k, log_q) - lf[l] - lf[l + k]
    pref = 0.5 * (lf[a] + lf[a + k]) + 0.5 * log_pref
    return row, mid, pref


def block_diagonal(k, cp, r, n):
    """Diagonal ck_{a,a} for a = 0..n, without forming the full block."""
    row, mid, pref = _row_terms(k, cp, r, n)
    return np.exp(2.0 * pref + log_sum_exp(2.0 * row + mid[None, :], axis=1))


def block_matrix(k, cp, r, n):
    """Full block [ck_{a,b}] for a, b = 0..n.

    The l-sum factorizes as sum_l u[a, l] u[b, l] with u = exp(row + mid/2).
    Each row of u is scaled by its largest entry in log space before
    exponentiating, so the product never overflows and every retained
    entry keeps full relative precision.
    """
    row, mid, pref = _row_terms(k, cp, r, n)
    u = row + 0.5 * mid[None, :]
    shift = np.max(u, axis=1)
    shift = np.where(np.isfinite(shift), shift, 0.0)
    with np.errstate(under="ignore"):
        e = np.exp(u - shift[:, None])
        s = e @ e.T
    with np.errstate(divide="ignore"):
        log_c = np.log(s) + (pref + shift)[:, None] + (pref + shift)[None, :]
    c = np.exp(log_c)
    return np.triu(c) + np.triu(c, 1).T


@dataclass(frozen=True)
class BlockDecomposition:
    p0: float
    block0: np.ndarray  # normalized
    weights: list  # p_k for k = 1..k_cutoff, one branch each
    blocks: list  # normalized ck / p_k
    k_cutoff: int
    trace_deficit: float
    params: ChannelParams = field(repr=False, default=None)


def block_decomposition(point, n=100, eps_block=1e-12, deficit_ceiling=1e-8):
    """Split the damped state into normalized k-blocks and their weights.

    Blocks are added for k = 1, 2, ... until the raw weight of the next one
    drops below ``eps_block``. The two mirror branches of each k share one
    coefficient matrix, so each weight p_k appears twice in the total.

    Raises:
        TruncationError: 1 - (p0 + 2 sum p_k) exceeds ``deficit_ceiling``.
        DegenerateStateError: see :func:`channel_params`.
    """
    if n < 1:
        raise ValueError("truncation must be >= 1")
    if not eps_block > 0:
        raise ValueError("eps_block must be positive")
    cp = channel_params(point)
    raw0 = block_matrix(0, cp, point.r, n)
    p0 = float(np.trace(raw0))
    weights, blocks = [], []
    k = 1
    while True:
        diag = block_diagonal(k, cp, point.r, n)
        pk = float(diag.sum())
        if pk < eps_block:
            break
        weights.append(pk)
        blocks.append(block_matrix(k, cp, point.r, n) / pk)
        k += 1
    deficit = 1.0 - (p0 + 2.0 * math.fsum(weights))
    if deficit > deficit_ceiling:
        raise TruncationError(
            f"trace deficit {deficit:.3e} > {deficit_ceiling:.1e} at {point} with N={n}; "
            "increase the truncation"
        )
    return BlockDecomposition(p0, raw0 / p0, weights, blocks, len(weights), deficit, cp)


def upper_bound_er(point, n=100, eps_block=1e-12, deficit_ceiling=1e-8, tol_eig=1e-10):
    """Convexity upper bound E_R* (bits) on the relative entropy of entanglement.

    E_R* = p0 E_R(block0) + 2 sum_k p_k E_R(block_k); each mirror pair of
    blocks has a single entropy evaluation, doubled.
    """
    try:
        dec = block_decomposition(point, n, eps_block, deficit_ceiling)
    except DegenerateStateError:
        return EntanglementResult(value=0.0, kind=UPPER_BOUND, k_cutoff=0)
    value, spectrum = maximally_correlated_er(dec.block0, tol_eig)
    total = [dec.p0 * value]
    min_eig = spectrum.min
    residual = spectrum.residual
    for pk, block in zip(dec.weights, dec.blocks):
        value, spectrum = maximally_correlated_er(block, tol_eig)
        total.append(2.0 * pk * value)
        min_eig = min(min_eig, spectrum.min)
        residual = max(residual, spectrum.residual)
    return EntanglementResult(
        value=math.fsum(total),
        kind=UPPER_BOUND,
        trace_deficit=dec.trace_deficit,
        min_eigenvalue=min_eig,
        residual=residual,
        k_cutoff=dec.k_cutoff,
    )


def amplitude_density(point, m):
    """The damped state as a 4-index array rho[n1, n2, m1, m2], photon
    numbers up to ``m`` in each mode. At d = 0 this is the initial projector."""
    size = m + 1
    rho = np.zeros((size,) * 4)
    idx = np.arange(size)
    diag_pairs = (idx[:, None], idx[:, None], idx[None, :], idx[None, :])
    if point.d == 0:
        la = schmidt_log_amplitudes(point.r, m)
        rho[diag_pairs] = np.exp(la[:, None] + la[None, :])
        return rho
    if point.r <= R_MIN:
        # vacuum input relaxes to a product of two thermal states
        n_t = point.nbar * (1.0 - math.exp(-point.d))
        p = n_t**idx / (n_t + 1.0) ** (idx + 1)
        rho[idx[:, None], idx[None, :], idx[:, None], idx[None, :]] = np.outer(p, p)
        return rho
    cp = channel_params(point)
    for k in range(size):
        c = block_matrix(k, cp, point.r, m - k)
        a = np.arange(m - k + 1)
        rho[a[:, None], a[:, None] + k, a[None, :], a[None, :] + k] = c
        rho[a[:, None] + k, a[:, None], a[None, :] + k, a[None, :]] = c
    return rho


def separability_border(r, nbar):
    """Damping d* = ln(1 + (1 - e^-2r) / (2 nbar)) beyond which the state is
    separable. Returns +inf for nbar = 0."""
    if not (math.isfinite(r) and r >= 0):
        raise ValueError(f"r must be finite and >= 0, got {r!r}")
    if not (math.isfinite(nbar) and nbar >= 0):
        raise ValueError(f"nbar must be finite and >= 0, got {nbar!r}")
    if nbar == 0:
        return math.inf
    return math.log1p(-math.expm1(-2.0 * r) / (2.0 * nbar))


def is_separable(point):
    return point.d >= separability_border(point.r, point.nbar)
