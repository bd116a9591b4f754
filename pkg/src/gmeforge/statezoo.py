"""Closed-form seed and target states, with model-provenance tags.

Model tags only propagate parameter regions where a local (hidden variable
or hidden state) model is known to exist; nothing here verifies a model.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from .core import (
    TAG_GME_ASSERTED,
    TAG_LOCAL_MODEL_GM,
    TAG_UNSTEERABLE_AB,
    ArgumentError,
    DensityOperator,
    PartyLayout,
    StateVector,
    check_capacity,
)
from .extend import w_columns
from .subspace import dicke_state, symmetric_projector
from .thresholds import dicke_source_mu, p_gm, p_gm_tilde

TAG_HYBRID_MODEL = "hybrid-local-model(PM:A;POVM:B,C)"

_PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


def _check_p(p: float) -> float:
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ArgumentError(f"mixing weight p must lie in [0, 1], got {p}")
    return p


@dataclass(frozen=True)
class SchmidtVector:
    """Squared Schmidt coefficients, all strictly positive, summing to 1."""

    mu: tuple[float, ...]

    def __post_init__(self):
        mu = tuple(float(m) for m in self.mu)
        if len(mu) < 2:
            raise ArgumentError("a Schmidt vector needs at least two entries")
        if any(m <= 0 for m in mu):
            raise ArgumentError(f"Schmidt weights must be strictly positive: {mu}")
        if abs(sum(mu) - 1.0) > 1e-12:
            raise ArgumentError(f"Schmidt weights must sum to 1, got {sum(mu)!r}")
        object.__setattr__(self, "mu", mu)

    @classmethod
    def uniform(cls, d: int) -> SchmidtVector:
        return cls((1.0 / d,) * d)

    @property
    def d(self) -> int:
        return len(self.mu)

    def zero_padded(self, d: int) -> np.ndarray:
        """Weights embedded in a larger local dimension (explicit zeros)."""
        if d < self.d:
            raise ArgumentError(f"cannot pad {self.d} weights into d={d}")
        return np.concatenate([self.mu, np.zeros(d - self.d)])


def _as_schmidt(mu) -> SchmidtVector:
    return mu if isinstance(mu, SchmidtVector) else SchmidtVector(tuple(mu))


def ghz_vector(d: int, n: int, sign: int = 1) -> StateVector:
    """(|0..0> + sign |1..1> + ...)/sqrt(d); ``sign`` only makes sense for d = 2."""
    layout = PartyLayout.uniform(d, n)
    amps = np.zeros(layout.total, dtype=complex)
    for i in range(d):
        amps[layout.index([i] * n)] = 1.0 if i == 0 else float(sign) ** i
    return StateVector(layout, amps / math.sqrt(d))


def max_entangled(d: int) -> StateVector:
    if d < 2:
        raise ArgumentError(f"d must be >= 2, got {d}")
    return ghz_vector(d, 2)


def _isotropic_tags(d: int, p: float) -> frozenset[str]:
    if p <= p_gm(d):
        return frozenset({TAG_LOCAL_MODEL_GM, TAG_UNSTEERABLE_AB})
    return frozenset()


def isotropic(d: int, p: float) -> DensityOperator:
    p = _check_p(p)
    phi = max_entangled(d).amplitudes
    m = p * np.outer(phi, phi.conj()) + (1 - p) * np.eye(d * d) / (d * d)
    return DensityOperator(PartyLayout((d, d)), m, _isotropic_tags(d, p))


def schmidt_state(mu, n: int = 2) -> StateVector:
    """sum_i sqrt(mu_i) |i>^{(x)n}."""
    mu = _as_schmidt(mu)
    if n < 2:
        raise ArgumentError(f"Schmidt state needs n >= 2 parties, got {n}")
    check_capacity(mu.d**n)
    layout = PartyLayout.uniform(mu.d, n)
    amps = np.zeros(layout.total, dtype=complex)
    for i, m in enumerate(mu.mu):
        amps[layout.index([i] * n)] = math.sqrt(m)
    return StateVector.from_amplitudes(layout, amps)


def schmidt_noise_mixture(mu, p: float) -> DensityOperator:
    """Schmidt state mixed with white noise."""
    mu, p = _as_schmidt(mu), _check_p(p)
    d = mu.d
    psi = schmidt_state(mu).amplitudes
    m = p * np.outer(psi, psi.conj()) + (1 - p) * np.eye(d * d) / (d * d)
    tags = {TAG_LOCAL_MODEL_GM} if p <= p_gm_tilde(d) else set()
    return DensityOperator(PartyLayout((d, d)), m, frozenset(tags))


def schmidt_marginal_mixture(mu, p: float) -> DensityOperator:
    """Schmidt state mixed with rho_A (x) 1/d, rho_A its own marginal."""
    mu, p = _as_schmidt(mu), _check_p(p)
    d = mu.d
    psi = schmidt_state(mu).amplitudes
    noise = np.kron(np.diag(mu.mu), np.eye(d) / d)
    m = p * np.outer(psi, psi.conj()) + (1 - p) * noise
    tags = {TAG_LOCAL_MODEL_GM} if p <= p_gm(d) else set()
    return DensityOperator(PartyLayout((d, d)), m, frozenset(tags))


def dicke_source_state(d: int) -> StateVector:
    """Two-qudit state whose Dicke-isometry image is |D_{2(d-1), d-1}>."""
    return schmidt_state(SchmidtVector(tuple(dicke_source_mu(d))), 2)


def dicke_source_mixture(d: int, p: float) -> DensityOperator:
    p = _check_p(p)
    psi = dicke_source_state(d).amplitudes
    m = p * np.outer(psi, psi.conj()) + (1 - p) * np.eye(d * d) / (d * d)
    return DensityOperator(PartyLayout((d, d)), m)


def bell_diag(p: float) -> DensityOperator:
    """p |phi+><phi+| + (1-p) |phi-><phi-|."""
    p = _check_p(p)
    plus = ghz_vector(2, 2, +1).amplitudes
    minus = ghz_vector(2, 2, -1).amplitudes
    m = p * np.outer(plus, plus.conj()) + (1 - p) * np.outer(minus, minus.conj())
    return DensityOperator(PartyLayout((2, 2)), m)


def toth_acin_matrix() -> np.ndarray:
    """1/8 [1 + sum_i (1/3 1(x)s_i(x)s_i - 1/2 s_i(x)1(x)s_i)] as an 8x8 array.

    The operator is Hermitian with unit trace, but with these weights it is
    not positive semidefinite: in the total-spin-1/2 sector the two coupling
    terms leave a 2x2 block whose smaller eigenvalue is
    (1 + 1/6 - sqrt((7/6)^2 + 3/4)) / 8 ~ -0.0358.
    """
    I2 = np.eye(2)
    m = np.eye(8, dtype=complex) / 8
    for s in _PAULI:
        m += (np.kron(I2, np.kron(s, s)) / 3 - np.kron(s, np.kron(I2, s)) / 2) / 8
    return m


def toth_acin() -> DensityOperator:
    """Three-qubit GME state with a hybrid local model (PMs on A, POVMs on B, C).

    Built from :func:`toth_acin_matrix`; because that operator has a negative
    eigenvalue the density-operator validation raises ``NumericsError``.
    """
    return DensityOperator(
        PartyLayout((2, 2, 2)), toth_acin_matrix(), frozenset({TAG_GME_ASSERTED, TAG_HYBRID_MODEL})
    )


def w_state(k: int) -> StateVector:
    if k < 2:
        raise ArgumentError(f"W state needs k >= 2, got {k}")
    check_capacity(2**k)
    return StateVector(PartyLayout.uniform(2, k), w_columns(k)[0])


def w_complement(k: int) -> StateVector:
    if k < 2:
        raise ArgumentError(f"W state needs k >= 2, got {k}")
    check_capacity(2**k)
    return StateVector(PartyLayout.uniform(2, k), w_columns(k)[1])


def w_mixture(k: int, p: float) -> DensityOperator:
    """p |W><W| + (1-p) |W^><W^|; genuinely entangled for every k and p."""
    p = _check_p(p)
    w, wc = w_state(k).amplitudes, w_complement(k).amplitudes
    m = p * np.outer(w, w.conj()) + (1 - p) * np.outer(wc, wc.conj())
    return DensityOperator(PartyLayout.uniform(2, k), m, frozenset({TAG_GME_ASSERTED}))


def _copy_projector(d: int, L: int) -> np.ndarray:
    """sum_i |i..i><i..i| on L qudits."""
    layout = PartyLayout.uniform(d, L)
    P = np.zeros((layout.total, layout.total))
    for i in range(d):
        k = layout.index([i] * L)
        P[k, k] = 1.0
    return P


def example1_state(d: int, n: int, L: int, p: float) -> DensityOperator:
    """p |GHZ_{d,n}><GHZ| + (1-p) P_{d,L} (x) P_{d,n-L} / d^2."""
    p = _check_p(p)
    if not 1 <= L < n:
        raise ArgumentError(f"need 1 <= L < n, got L={L}, n={n}")
    check_capacity(d**n)
    ghz = ghz_vector(d, n).amplitudes
    noise = np.kron(_copy_projector(d, L), _copy_projector(d, n - L)) / (d * d)
    m = p * np.outer(ghz, ghz.conj()) + (1 - p) * noise
    return DensityOperator(PartyLayout.uniform(d, n), m)


def noisy_dicke(d: int, p: float) -> DensityOperator:
    """p |D_{2N,N}><D| + (1-p) Psym_N (x) Psym_N / d^2 with N = d-1 qubits per side."""
    p = _check_p(p)
    if d < 2:
        raise ArgumentError(f"d must be >= 2, got {d}")
    n = d - 1
    check_capacity(4**n)
    dicke = dicke_state(2 * n, n).amplitudes
    P, _ = symmetric_projector(n, 2)
    m = p * np.outer(dicke, dicke.conj()) + (1 - p) * np.kron(P, P) / (d * d)
    return DensityOperator(PartyLayout.uniform(2, 2 * n), m)


def random_pure(dims: Sequence[int], seed: int) -> StateVector:
    layout = PartyLayout(tuple(dims))
    rng = np.random.default_rng(seed)
    amps = rng.standard_normal(layout.total) + 1j * rng.standard_normal(layout.total)
    return StateVector.from_amplitudes(layout, amps)


def random_density(dims: Sequence[int], seed: int, rank: int | None = None) -> DensityOperator:
    """Induced-measure random state of the given rank (full rank by default)."""
    layout = PartyLayout(tuple(dims))
    rank = layout.total if rank is None else int(rank)
    if not 1 <= rank <= layout.total:
        raise ArgumentError(f"rank must lie in 1..{layout.total}, got {rank}")
    rng = np.random.default_rng(seed)
    G = rng.standard_normal((layout.total, rank)) + 1j * rng.standard_normal((layout.total, rank))
    m = G @ G.conj().T
    return DensityOperator(layout, m / np.trace(m).real)
