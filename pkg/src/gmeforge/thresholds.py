"""Closed-form noise thresholds for the two-qudit seed families."""

from __future__ import annotations

import itertools
import math
from collections.abc import Sequence

import numpy as np

from .core import ArgumentError


def _check_d(d: int) -> int:
    d = int(d)
    if d < 2:
        raise ArgumentError(f"local dimension must be >= 2, got {d}")
    return d


def p_gm(d: int) -> float:
    """Largest isotropic weight with a local model for generalized measurements."""
    d = _check_d(d)
    return (3 * d - 1) * (d - 1) ** (d - 1) / ((d + 1) * d**d)


def p_gm_tilde(d: int) -> float:
    """Local-model bound for a Schmidt state mixed with white noise."""
    g = p_gm(d)
    return g / ((1 - g) * (d - 1) + 1)


def theta(mu: Sequence[float]) -> float:
    """max over i != j of sqrt(mu_i mu_j), by exhaustive pair search."""
    mu = [float(m) for m in mu]
    if len(mu) < 2 or any(m < 0 for m in mu):
        raise ArgumentError("theta needs at least two nonnegative Schmidt weights")
    return max(math.sqrt(a * b) for a, b in itertools.combinations(mu, 2))


def p_sep_threshold(mu: Sequence[float], d: int | None = None) -> float:
    """Separability bound 1/(d^2 theta + 1) of the white-noise mixture.

    ``mu`` may carry explicit zeros (a lower-rank state embedded in d x d).
    """
    d = _check_d(len(mu) if d is None else d)
    if len(mu) != d:
        raise ArgumentError(f"Schmidt vector has {len(mu)} entries, expected d={d}")
    return 1.0 / (d * d * theta(mu) + 1.0)


def dicke_source_mu(d: int) -> np.ndarray:
    """Schmidt weights C(N,i) C(N,d-1-i) / C(2N,d-1) with N = d-1."""
    d = _check_d(d)
    n = d - 1
    total = math.comb(2 * n, d - 1)
    return np.array([math.comb(n, i) * math.comb(n, d - 1 - i) / total for i in range(d)])


def theta_dicke(d: int) -> float:
    """Closed form of theta for the Dicke source weights, split by parity of d."""
    d = _check_d(d)
    n = d - 1
    norm = math.comb(2 * n, n)
    if d % 2 == 0:
        return math.comb(n, n // 2) * math.comb(n, (n + 1) // 2) / norm
    return math.comb(n, n // 2) * math.sqrt(math.comb(n, (d - 3) // 2) * math.comb(n, (d + 1) // 2)) / norm


def p_gm_tilde_lower_bound(d: int) -> float:
    """The quoted lower estimate (3d-1)/(4d(d+1)) used in the window argument."""
    d = _check_d(d)
    return (3 * d - 1) / (4 * d * (d + 1))
