"""The two-mode squeezed vacuum (cosh r)^-1 sum_n tanh^n r |n,n>."""
import math
from dataclasses import dataclass

import numpy as np

from .errors import TruncationError
from .numerics import shannon_entropy_bits

R_MAX = 20.0


def check_squeezing(r):
    r = float(r)
    if not (math.isfinite(r) and 0.0 <= r < R_MAX):
        raise ValueError(f"squeezing r must lie in [0, {R_MAX}), got {r!r}")
    return r


def tail_mass(r, n):
    """Probability beyond photon number ``n``: tanh^(2(n+1)) r."""
    return math.tanh(r) ** (2 * (n + 1))


def minimal_truncation(r, ceiling):
    """Smallest N >= 1 whose tail mass is at most ``ceiling``."""
    t = math.tanh(r)
    if t == 0.0:
        return 1
    if t >= 1.0:
        raise TruncationError(f"tanh(r) rounds to 1 at r={r}; no truncation is adequate")
    n = max(1, math.ceil(math.log(ceiling) / (2.0 * math.log(t))) - 1)
    while tail_mass(r, n) > ceiling:
        n += 1
    while n > 1 and tail_mass(r, n - 1) <= ceiling:
        n -= 1
    return n


def check_truncation(r, n, ceiling):
    tail = tail_mass(r, n)
    if tail > ceiling:
        need = minimal_truncation(r, ceiling)
        raise TruncationError(
            f"truncation N={n} leaves tail mass {tail:.3e} > {ceiling:.1e} at r={r}; "
            f"use N >= {need}",
            suggested_n=need,
        )
    return tail


def schmidt_log_amplitudes(r, n):
    """ln of the Fock amplitudes tanh^k r / cosh r for k = 0..n.

    At r = 0 the entries past k = 0 are -inf.
    """
    r = check_squeezing(r)
    k = np.arange(n + 1)
    if r == 0.0:
        out = np.full(n + 1, -np.inf)
        out[0] = 0.0
        return out
    return k * math.log(math.tanh(r)) - math.log(math.cosh(r))


@dataclass(frozen=True)
class SchmidtDistribution:
    probs: np.ndarray
    truncation: int
    tail_mass: float


def schmidt_distribution(r, n, tail_ceiling=1e-12):
    """Photon-number distribution p_k = tanh^(2k) r / cosh^2 r, k = 0..n.

    Raises:
        TruncationError: the mass beyond ``n`` exceeds ``tail_ceiling``; the
            error names the smallest adequate truncation.
    """
    r = check_squeezing(r)
    if n < 1:
        raise ValueError("truncation must be >= 1")
    tail = check_truncation(r, n, tail_ceiling)
    probs = np.exp(2.0 * schmidt_log_amplitudes(r, n))
    return SchmidtDistribution(probs, n, tail)


def pure_entanglement_bits(r):
    """Entanglement entropy of the pure state in bits:
    cosh^2 r log2 cosh^2 r - sinh^2 r log2 sinh^2 r."""
    r = check_squeezing(r)
    if r == 0.0:
        return 0.0
    c2 = math.cosh(r) ** 2
    s2 = math.sinh(r) ** 2
    return c2 * math.log2(c2) - s2 * math.log2(s2)


def pure_entanglement_from_series(r, n):
    """Same quantity summed from the truncated Schmidt distribution."""
    return shannon_entropy_bits(schmidt_distribution(r, n, tail_ceiling=1.0).probs,
                                check_normalization=False)
