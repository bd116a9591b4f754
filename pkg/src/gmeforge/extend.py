"""Local isometries into symmetric / genuinely entangled subspaces and their action on states."""

from __future__ import annotations

import enum
import math
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from .core import (
    TAG_GME_ASSERTED,
    TAG_INPUT_GME_ASSERTED,
    TAG_ISOMETRIC,
    ArgumentError,
    DensityOperator,
    NumericsError,
    PartitionSpec,
    PartyLayout,
    StateVector,
    check_capacity,
)
from .subspace import SubspaceBasis, SubspaceKind, dicke_state, ges_basis, symmetric_basis


class ImageKind(str, enum.Enum):
    SYMMETRIC = "Symmetric"
    GES = "GES"
    BOTH = "Both"
    CUSTOM = "Custom"


@dataclass(frozen=True, eq=False)
class IsometryMap:
    """``V`` of shape (D_out, in_dim) with orthonormal columns.

    ``image`` optionally names the subspace the columns are required to lie
    in; symmetric images default to the full symmetric subspace of the
    output layout.
    """

    in_dim: int
    out_layout: PartyLayout
    matrix: np.ndarray
    image_kind: ImageKind = ImageKind.CUSTOM
    label: str = ""
    image: SubspaceBasis | None = field(default=None, repr=False)

    def __post_init__(self):
        V = np.array(self.matrix, dtype=complex)
        if V.shape != (self.out_layout.total, self.in_dim):
            raise ArgumentError(f"isometry shape {V.shape} != ({self.out_layout.total}, {self.in_dim})")
        dev = np.max(np.abs(V.conj().T @ V - np.eye(self.in_dim)))
        if dev > 1e-12:
            raise NumericsError(f"V^dagger V deviates from identity by {dev:.3e}")
        kind = ImageKind(self.image_kind)
        V.setflags(write=False)
        object.__setattr__(self, "matrix", V)
        object.__setattr__(self, "image_kind", kind)
        if kind is not ImageKind.CUSTOM:
            res = self.image_residual()
            if res > 1e-12:
                raise NumericsError(f"columns leave the declared {kind.value} image (residual {res:.3e})")

    def image_basis(self) -> SubspaceBasis:
        """Subspace used for support checks on extended states."""
        if self.image is not None:
            return self.image
        if self.image_kind is ImageKind.SYMMETRIC:
            dims = set(self.out_layout.dims)
            if len(dims) != 1:
                raise ArgumentError("symmetric image needs equal local dimensions")
            return symmetric_basis(self.out_layout.n, dims.pop())
        kind = SubspaceKind.GES if self.image_kind in (ImageKind.GES, ImageKind.BOTH) else SubspaceKind.CUSTOM
        return SubspaceBasis(self.out_layout, self.matrix, kind)

    def image_residual(self) -> float:
        basis = self.image_basis()
        cols = basis.columns
        return float(np.max(np.abs(self.matrix - cols @ (cols.conj().T @ self.matrix))))


def identity_isometry(d: int) -> IsometryMap:
    return IsometryMap(d, PartyLayout((d,)), np.eye(d), ImageKind.SYMMETRIC, f"id:{d}")


def copy_isometry(d: int, L: int) -> IsometryMap:
    """|i> -> |i>^{(x)L}."""
    if d < 2 or L < 1:
        raise ArgumentError(f"copy isometry needs d >= 2 and L >= 1, got d={d}, L={L}")
    check_capacity(d**L)
    layout = PartyLayout.uniform(d, L)
    V = np.zeros((layout.total, d))
    for i in range(d):
        V[layout.index([i] * L), i] = 1.0
    return IsometryMap(d, layout, V, ImageKind.SYMMETRIC, f"copy:{d}:{L}")


def dicke_isometry(d: int, reversed: bool = False) -> IsometryMap:
    """|i> -> |D_{d-1, i}> (or |D_{d-1, d-1-i}> when ``reversed``)."""
    if d < 2:
        raise ArgumentError(f"Dicke isometry needs d >= 2, got {d}")
    n = d - 1
    check_capacity(2**n)
    cols = [dicke_state(n, d - 1 - i if reversed else i).amplitudes for i in range(d)]
    label = f"dicke:{d}" + (":rev" if reversed else "")
    return IsometryMap(d, PartyLayout.uniform(2, n), np.stack(cols, axis=1), ImageKind.SYMMETRIC, label)


def ges_isometry(n: int) -> IsometryMap:
    basis = ges_basis(n)
    return IsometryMap(basis.dim, basis.layout, basis.columns, ImageKind.GES, f"ges:{n}", image=basis)


def w_columns(L: int) -> tuple[np.ndarray, np.ndarray]:
    """Amplitudes of |W_L> and its bit-flipped complement."""
    w = np.zeros(2**L, dtype=complex)
    for p in range(L):
        w[1 << (L - 1 - p)] = 1.0
    w /= math.sqrt(L)
    return w, w[::-1].copy()  # sigma_x^{(x)L} reverses the computational basis


def w_isometry(L: int) -> IsometryMap:
    """|0> -> |W_L>, |1> -> complement.  Requires L >= 3 (the two coincide at L = 2)."""
    if L <= 2:
        raise ArgumentError(f"W isometry needs L >= 3 (columns are not orthogonal for L={L})")
    check_capacity(2**L)
    w, wc = w_columns(L)
    V = np.stack([w, wc], axis=1)
    layout = PartyLayout.uniform(2, L)
    # symmetric by construction; the span itself serves as the GES image
    sym = symmetric_basis(L, 2)
    if sym.residual(w) + sym.residual(wc) > 1e-12:
        raise NumericsError("W columns are not symmetric")
    return IsometryMap(2, layout, V, ImageKind.BOTH, f"w:{L}")


def _check_maps(dims: Sequence[int], maps: Sequence[IsometryMap]) -> None:
    if len(maps) != len(dims):
        raise ArgumentError(f"{len(maps)} maps for {len(dims)} parties")
    for p, (d, m) in enumerate(zip(dims, maps)):
        if m.in_dim != d:
            raise ArgumentError(f"map {m.label or p} expects input dimension {m.in_dim}, party {p} has {d}")
    check_capacity(math.prod(m.out_layout.total for m in maps))


def _joint(maps: Sequence[IsometryMap]) -> tuple[np.ndarray, PartyLayout]:
    V = np.ones((1, 1), dtype=complex)
    dims: tuple[int, ...] = ()
    for m in maps:
        V = np.kron(V, m.matrix)
        dims += m.out_layout.dims
    return V, PartyLayout(dims)


def induced_partition(maps: Sequence[IsometryMap]) -> PartitionSpec:
    return PartitionSpec.consecutive([m.out_layout.n for m in maps])


def extend_vector(psi: StateVector, maps: Sequence[IsometryMap]) -> StateVector:
    """(V_1 (x) ... (x) V_K)|psi>."""
    _check_maps(psi.dims, maps)
    V, layout = _joint(maps)
    return StateVector(layout, V @ psi.amplitudes)


def apply_extension(rho: DensityOperator, maps: Sequence[IsometryMap]) -> DensityOperator:
    """Conjugate ``rho`` by the tensor product of the maps.

    Output parties of map k follow those of map k-1.  Seed tags are kept
    under a ``seed:`` prefix; a GME-asserted seed yields ``input-GME-asserted``.
    """
    _check_maps(rho.dims, maps)
    V, layout = _joint(maps)
    sigma = V @ rho.matrix @ V.conj().T
    partition = induced_partition(maps)
    tags = {f"seed:{t}" for t in rho.tags} | {TAG_ISOMETRIC, f"partition={partition}"}
    tags.add("maps=" + ",".join(m.label or "custom" for m in maps))
    if TAG_GME_ASSERTED in rho.tags or TAG_INPUT_GME_ASSERTED in rho.tags:
        tags.add(TAG_INPUT_GME_ASSERTED)
    return DensityOperator(layout, sigma, frozenset(tags), partition, rho.notes)
