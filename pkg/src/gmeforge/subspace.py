"""Symmetric, antisymmetric and genuinely entangled subspaces."""

from __future__ import annotations

import enum
import itertools
import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from .core import (
    ArgumentError,
    DensityOperator,
    NumericsError,
    PartitionSpec,
    PartyLayout,
    StateVector,
    check_capacity,
    permute_operator,
    permute_vector,
)


class SubspaceKind(str, enum.Enum):
    SYMMETRIC = "Symmetric"
    ANTISYMMETRIC = "Antisymmetric"
    GES = "GES"
    CUSTOM = "Custom"


def _adjacent_swaps(n: int):
    for k in range(n - 1):
        order = list(range(n))
        order[k], order[k + 1] = order[k + 1], order[k]
        yield order


@dataclass(frozen=True, eq=False)
class SubspaceBasis:
    """Orthonormal columns spanning a subspace of a multiparty space.

    ``columns`` is a ``(D, r)`` array; column ``j`` is the j-th basis vector.
    """

    layout: PartyLayout
    columns: np.ndarray
    kind: SubspaceKind = SubspaceKind.CUSTOM

    def __post_init__(self):
        cols = np.array(self.columns, dtype=complex)
        if cols.ndim == 1:
            cols = cols[:, None]
        if cols.shape[0] != self.layout.total:
            raise ArgumentError(f"basis rows {cols.shape[0]} != total dimension {self.layout.total}")
        gram_dev = np.max(np.abs(cols.conj().T @ cols - np.eye(cols.shape[1]))) if cols.shape[1] else 0.0
        if gram_dev > 1e-12:
            raise NumericsError(f"basis columns not orthonormal (Gram deviation {gram_dev:.3e})")
        kind = SubspaceKind(self.kind)
        if kind in (SubspaceKind.SYMMETRIC, SubspaceKind.ANTISYMMETRIC) and cols.shape[1]:
            sign = 1.0 if kind is SubspaceKind.SYMMETRIC else -1.0
            for order in _adjacent_swaps(self.layout.n):
                swapped = np.stack(
                    [permute_vector(c, self.layout.dims, order) for c in cols.T], axis=1
                )
                res = np.max(np.abs(swapped - sign * cols))
                if res > 1e-12:
                    raise NumericsError(f"{kind.value} basis fails the swap test (residual {res:.3e})")
        cols.setflags(write=False)
        object.__setattr__(self, "columns", cols)
        object.__setattr__(self, "kind", kind)

    @property
    def dim(self) -> int:
        return self.columns.shape[1]

    def projector(self) -> np.ndarray:
        return self.columns @ self.columns.conj().T

    def vectors(self) -> list[StateVector]:
        return [StateVector(self.layout, c) for c in self.columns.T]

    def residual(self, vec) -> float:
        """Norm of the component of ``vec`` outside the span."""
        v = vec.amplitudes if isinstance(vec, StateVector) else np.asarray(vec)
        return float(np.linalg.norm(v - self.columns @ (self.columns.conj().T @ v)))


def dicke_state(n: int, k: int) -> StateVector:
    """n-qubit Dicke state with ``k`` excitations."""
    if n < 1 or not 0 <= k <= n:
        raise ArgumentError(f"Dicke state needs 0 <= k <= n, got n={n}, k={k}")
    layout = PartyLayout.uniform(2, n)
    amps = np.zeros(layout.total, dtype=complex)
    for ones in itertools.combinations(range(n), k):
        amps[sum(1 << (n - 1 - p) for p in ones)] = 1.0
    return StateVector(layout, amps / math.sqrt(math.comb(n, k)))


def _uniform_layout(n: int, d: int) -> PartyLayout:
    if n < 1 or d < 2:
        raise ArgumentError(f"need n >= 1 and d >= 2, got n={n}, d={d}")
    check_capacity(d**n)
    return PartyLayout.uniform(d, n)


def symmetric_basis(n: int, d: int) -> SubspaceBasis:
    """Basis of Sym((C^d)^{(x)n}).

    Column order follows ``itertools.combinations_with_replacement``: each
    column is the normalized symmetrization of the sorted ket label, so the
    occupation numbers run through their canonical lexicographic order (for
    qubits this gives D_{n,0}, ..., D_{n,n}).
    """
    layout = _uniform_layout(n, d)
    labels = list(itertools.combinations_with_replacement(range(d), n))
    position = {lab: j for j, lab in enumerate(labels)}
    cols = np.zeros((layout.total, len(labels)), dtype=complex)
    for idx, digits in enumerate(itertools.product(range(d), repeat=n)):
        cols[idx, position[tuple(sorted(digits))]] = 1.0
    cols /= np.linalg.norm(cols, axis=0)
    return SubspaceBasis(layout, cols, SubspaceKind.SYMMETRIC)


def symmetric_projector(n: int, d: int) -> tuple[np.ndarray, SubspaceBasis]:
    basis = symmetric_basis(n, d)
    return basis.projector(), basis


def _perm_sign(perm: Sequence[int]) -> int:
    sign, seen = 1, [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def antisymmetric_basis(n: int, d: int) -> SubspaceBasis:
    """Basis of the antisymmetric subspace; empty (rank 0) when ``d < n``."""
    layout = _uniform_layout(n, d)
    labels = list(itertools.combinations(range(d), n))
    cols = np.zeros((layout.total, len(labels)), dtype=complex)
    norm = 1.0 / math.sqrt(math.factorial(n))
    perms = [(p, _perm_sign(p)) for p in itertools.permutations(range(n))]
    for j, lab in enumerate(labels):
        for perm, sign in perms:
            cols[layout.index([lab[q] for q in perm]), j] = sign * norm
    return SubspaceBasis(layout, cols, SubspaceKind.ANTISYMMETRIC)


def antisymmetric_projector(n: int, d: int) -> tuple[np.ndarray, SubspaceBasis]:
    basis = antisymmetric_basis(n, d)
    return basis.projector(), basis


def _ges_spanning_vectors(n: int) -> np.ndarray:
    """Unnormalized spanning set of the n-qubit GES, one column per j."""
    D = 2**n
    half = 2 ** (n - 1)
    count = 2 ** (n - 2)
    vecs = np.zeros((D, count), dtype=complex)
    for j in range(count):
        for k in range(2, n + 1):
            # leading |0>, then the (n-1)-digit label 2^{n-k} + j
            vecs[2 ** (n - k) + j, j] += 1.0
        vecs[half + j, j] -= 1.0
    return vecs


def _modified_gram_schmidt(vecs: np.ndarray, dep_tol: float = 1e-10) -> np.ndarray:
    out = []
    for col in vecs.T:
        v = col.astype(complex)
        for _ in range(2):  # second pass restores orthogonality lost to rounding
            for q in out:
                v = v - q * np.vdot(q, v)
        norm = np.linalg.norm(v)
        if norm < dep_tol:
            raise NumericsError("spanning vectors are linearly dependent")
        out.append(v / norm)
    return np.stack(out, axis=1)


def ges_basis(n: int) -> SubspaceBasis:
    """Orthonormal basis of the 2^{n-2}-dimensional n-qubit GES.

    Gram-Schmidt runs over the spanning vectors in increasing ``j``.
    """
    if n < 3:
        raise ArgumentError(f"the GES family needs n >= 3 qubits, got {n}")
    check_capacity(2**n)
    cols = _modified_gram_schmidt(_ges_spanning_vectors(n))
    return SubspaceBasis(PartyLayout.uniform(2, n), cols, SubspaceKind.GES)


def printed_ges_second_vector() -> StateVector:
    """The commonly quoted n=3 companion of phi_0.

    It lies in the GES and has unit norm but is not orthogonal to phi_0, so
    :func:`ges_basis` does not use it.
    """
    amps = np.zeros(8, dtype=complex)
    amps[0b001], amps[0b010], amps[0b011], amps[0b100], amps[0b101] = 1.5, 1.0, -0.5, -1.5, 0.5
    return StateVector(PartyLayout.uniform(2, 3), amps / math.sqrt(6))


def _as_projector(p) -> np.ndarray:
    return p.projector() if isinstance(p, SubspaceBasis) else np.asarray(p, dtype=complex)


def group_projector(dims: Sequence[int], partition: PartitionSpec, projectors: Sequence) -> np.ndarray:
    """Kronecker product of per-group projectors, in the parties' own order."""
    if len(projectors) != partition.k:
        raise ArgumentError(f"expected {partition.k} projectors, got {len(projectors)}")
    if partition.n != len(dims):
        raise ArgumentError(f"partition covers {partition.n} parties, state has {len(dims)}")
    full = np.ones((1, 1), dtype=complex)
    for group, proj in zip(partition.groups, projectors):
        proj = _as_projector(proj)
        gdim = math.prod(dims[p] for p in group)
        if proj.shape != (gdim, gdim):
            raise ArgumentError(f"projector shape {proj.shape} does not match group {group} (dim {gdim})")
        full = np.kron(full, proj)
    order = partition.order
    inverse = tuple(int(i) for i in np.argsort(order))
    return permute_operator(full, [dims[p] for p in order], inverse)


def support_residual(rho: DensityOperator, partition: PartitionSpec, projectors: Sequence) -> float:
    """Frobenius norm of ``P rho P - rho`` for ``P`` the product of group projectors."""
    P = group_projector(rho.dims, partition, projectors)
    return float(np.linalg.norm(P @ rho.matrix @ P - rho.matrix))


def sample_subspace_vector(basis: SubspaceBasis, seed: int) -> StateVector:
    """Random unit vector in the span, complex Gaussian coefficients."""
    if basis.dim == 0:
        raise ArgumentError("cannot sample from an empty subspace")
    rng = np.random.default_rng(seed)
    coeffs = rng.standard_normal(basis.dim) + 1j * rng.standard_normal(basis.dim)
    return StateVector.from_amplitudes(basis.layout, basis.columns @ coeffs)
