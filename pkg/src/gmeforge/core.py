"""Dense multiparty linear algebra.

Index convention: a basis ket |i_0 i_1 ... i_{N-1}> of a layout with local
dimensions (d_0, ..., d_{N-1}) sits at the row-major (mixed radix) position
``sum_k i_k * prod_{m>k} d_m``.  Party 0 is the most significant digit, so
``np.kron(a, b)`` puts the parties of ``a`` before those of ``b``.
"""

from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

import numpy as np

DEFAULT_DIM_CAP = 4096
RANK_TOL = 1e-8
NEGATIVITY_TOL = 1e-9

TAG_LOCAL_MODEL_GM = "local-model-GM"
TAG_UNSTEERABLE_AB = "A-to-B-unsteerable"
TAG_GME_ASSERTED = "GME-asserted"
TAG_INPUT_GME_ASSERTED = "input-GME-asserted"
TAG_ISOMETRIC = "isometric-extension"


class GmeForgeError(Exception):
    """Base class for all errors raised by this package."""


class ArgumentError(GmeForgeError, ValueError):
    pass


class CapacityError(GmeForgeError):
    pass


class NumericsError(GmeForgeError, ArithmeticError):
    pass


def dim_cap() -> int:
    """Current cap on total Hilbert space dimension (env ``GMEFORGE_DIM_CAP``)."""
    raw = os.environ.get("GMEFORGE_DIM_CAP")
    if raw is None:
        return DEFAULT_DIM_CAP
    try:
        cap = int(raw)
    except ValueError as exc:
        raise ArgumentError(f"GMEFORGE_DIM_CAP must be an integer, got {raw!r}") from exc
    if cap < 2:
        raise ArgumentError("GMEFORGE_DIM_CAP must be at least 2")
    return cap


def check_capacity(total: int) -> None:
    cap = dim_cap()
    if total > cap:
        raise CapacityError(f"total dimension {total} exceeds cap {cap}")


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class PartyLayout:
    dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if not dims:
            raise ArgumentError("layout needs at least one party")
        if any(d < 2 for d in dims):
            raise ArgumentError(f"local dimensions must be >= 2, got {dims}")
        object.__setattr__(self, "dims", dims)
        check_capacity(math.prod(dims))

    @classmethod
    def uniform(cls, d: int, n: int) -> PartyLayout:
        return cls((d,) * n)

    @property
    def n(self) -> int:
        return len(self.dims)

    @property
    def total(self) -> int:
        return math.prod(self.dims)

    def sub(self, parties: Iterable[int]) -> PartyLayout:
        return PartyLayout(tuple(self.dims[p] for p in parties))

    def __add__(self, other: PartyLayout) -> PartyLayout:
        return PartyLayout(self.dims + other.dims)

    def index(self, digits: Sequence[int]) -> int:
        """Flat position of the basis ket with the given local levels."""
        return int(np.ravel_multi_index(tuple(digits), self.dims))

    def digits(self, index: int) -> tuple[int, ...]:
        return tuple(int(i) for i in np.unravel_index(index, self.dims))


def _parse_groups(text: str) -> tuple[tuple[int, ...], ...]:
    try:
        return tuple(
            tuple(int(tok) for tok in chunk.split(",") if tok.strip() != "")
            for chunk in text.split("|")
        )
    except ValueError as exc:
        raise ArgumentError(f"cannot parse party groups {text!r}") from exc


@dataclass(frozen=True)
class PartitionSpec:
    """Disjoint groups of party indices covering ``0..N-1``."""

    groups: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        groups = tuple(tuple(int(p) for p in g) for g in self.groups)
        if not groups or any(len(g) == 0 for g in groups):
            raise ArgumentError("partition groups must be nonempty")
        flat = [p for g in groups for p in g]
        if len(set(flat)) != len(flat):
            raise ArgumentError(f"partition groups overlap: {groups}")
        if sorted(flat) != list(range(len(flat))):
            raise ArgumentError(f"partition groups must cover 0..{len(flat) - 1}: {groups}")
        object.__setattr__(self, "groups", groups)

    @classmethod
    def parse(cls, text: str) -> PartitionSpec:
        return cls(_parse_groups(text))

    @classmethod
    def singletons(cls, n: int) -> PartitionSpec:
        return cls(tuple((p,) for p in range(n)))

    @classmethod
    def consecutive(cls, sizes: Sequence[int]) -> PartitionSpec:
        groups, start = [], 0
        for s in sizes:
            groups.append(tuple(range(start, start + s)))
            start += s
        return cls(tuple(groups))

    @property
    def k(self) -> int:
        return len(self.groups)

    @property
    def n(self) -> int:
        return sum(len(g) for g in self.groups)

    @property
    def order(self) -> tuple[int, ...]:
        return tuple(p for g in self.groups for p in g)

    def __str__(self) -> str:
        return "|".join(",".join(str(p) for p in g) for g in self.groups)


@dataclass(frozen=True)
class Bipartition:
    """Unordered cut ``left|right``; ``left`` always holds the lowest party."""

    left: tuple[int, ...]
    right: tuple[int, ...]

    def __post_init__(self):
        left, right = tuple(sorted(self.left)), tuple(sorted(self.right))
        if not left or not right:
            raise ArgumentError("both sides of a bipartition must be nonempty")
        if set(left) & set(right):
            raise ArgumentError("bipartition sides overlap")
        if min(right) < min(left):
            left, right = right, left
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "right", right)

    @classmethod
    def of(cls, side: Iterable[int], n: int) -> Bipartition:
        side = set(side)
        return cls(tuple(side), tuple(p for p in range(n) if p not in side))

    @classmethod
    def parse(cls, text: str) -> Bipartition:
        groups = _parse_groups(text)
        if len(groups) != 2:
            raise ArgumentError(f"a bipartition needs exactly two sides: {text!r}")
        PartitionSpec(groups)
        return cls(*groups)

    @property
    def n(self) -> int:
        return len(self.left) + len(self.right)

    def __str__(self) -> str:
        return ",".join(map(str, self.left)) + "|" + ",".join(map(str, self.right))


def _validate_norm(amplitudes: np.ndarray) -> None:
    norm = np.linalg.norm(amplitudes)
    if abs(norm - 1.0) > 1e-12:
        raise NumericsError(f"state vector norm {norm!r} differs from 1 by more than 1e-12")


@dataclass(frozen=True, eq=False)
class StateVector:
    layout: PartyLayout
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = _frozen(np.ravel(self.amplitudes))
        if amps.shape != (self.layout.total,):
            raise ArgumentError(
                f"expected {self.layout.total} amplitudes for dims {self.layout.dims}, got {amps.size}"
            )
        _validate_norm(amps)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_amplitudes(cls, dims: Sequence[int] | PartyLayout, amplitudes, normalize: bool = True) -> StateVector:
        layout = dims if isinstance(dims, PartyLayout) else PartyLayout(tuple(dims))
        amps = np.asarray(amplitudes, dtype=complex).ravel()
        if normalize:
            norm = np.linalg.norm(amps)
            if norm < 1e-300:
                raise NumericsError("cannot normalize the zero vector")
            amps = amps / norm
        return cls(layout, amps)

    @classmethod
    def basis(cls, dims: Sequence[int], digits: Sequence[int]) -> StateVector:
        layout = PartyLayout(tuple(dims))
        amps = np.zeros(layout.total, dtype=complex)
        amps[layout.index(digits)] = 1.0
        return cls(layout, amps)

    @property
    def dims(self) -> tuple[int, ...]:
        return self.layout.dims

    def density(self, tags: Iterable[str] = ()) -> DensityOperator:
        return DensityOperator(self.layout, np.outer(self.amplitudes, self.amplitudes.conj()), frozenset(tags))


def validate_density_matrix(m: np.ndarray) -> None:
    herm = np.max(np.abs(m - m.conj().T)) if m.size else 0.0
    if herm > 1e-10:
        raise NumericsError(f"density matrix not Hermitian (deviation {herm:.3e})")
    tr = np.trace(m)
    if abs(tr - 1.0) > 1e-10:
        raise NumericsError(f"density matrix trace {tr.real:.15g} differs from 1")
    lo = float(np.linalg.eigvalsh(0.5 * (m + m.conj().T))[0])
    if lo < -NEGATIVITY_TOL:
        raise NumericsError(f"density matrix has eigenvalue {lo:.3e} below -{NEGATIVITY_TOL}")


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """Mixed state with layout, provenance tags and optional induced grouping.

    ``partition`` is set by isometric extension and records which output
    parties came from which seed party.
    """

    layout: PartyLayout
    matrix: np.ndarray
    tags: frozenset[str] = frozenset()
    partition: PartitionSpec | None = None
    notes: tuple[str, ...] = ()
    validate: bool = field(default=True, repr=False)

    def __post_init__(self):
        m = _frozen(self.matrix)
        D = self.layout.total
        if m.shape != (D, D):
            raise ArgumentError(f"expected a {D}x{D} matrix for dims {self.layout.dims}, got {m.shape}")
        if self.validate:
            validate_density_matrix(m)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "tags", frozenset(self.tags))
        object.__setattr__(self, "notes", tuple(self.notes))
        if self.partition is not None and self.partition.n != self.layout.n:
            raise ArgumentError("partition does not match the number of parties")

    @classmethod
    def from_matrix(cls, dims: Sequence[int], matrix, tags: Iterable[str] = ()) -> DensityOperator:
        return cls(PartyLayout(tuple(dims)), np.asarray(matrix, dtype=complex), frozenset(tags))

    @classmethod
    def maximally_mixed(cls, dims: Sequence[int]) -> DensityOperator:
        layout = PartyLayout(tuple(dims))
        return cls(layout, np.eye(layout.total) / layout.total)

    @property
    def dims(self) -> tuple[int, ...]:
        return self.layout.dims

    def with_tags(self, add: Iterable[str] = (), remove: Iterable[str] = ()) -> DensityOperator:
        tags = (self.tags | frozenset(add)) - frozenset(remove)
        return DensityOperator(self.layout, self.matrix, tags, self.partition, self.notes, validate=False)

    def with_notes(self, *notes: str) -> DensityOperator:
        return DensityOperator(self.layout, self.matrix, self.tags, self.partition, self.notes + notes, validate=False)

    def purity(self) -> float:
        return float(np.real(np.vdot(self.matrix, self.matrix)))

    def is_pure(self, tol: float = 1e-10) -> bool:
        return abs(self.purity() - 1.0) <= tol

    def as_pure(self) -> StateVector:
        """Dominant eigenvector; only meaningful when :meth:`is_pure` holds."""
        w, v = np.linalg.eigh(self.matrix)
        vec = v[:, -1]
        k = int(np.argmax(np.abs(vec)))
        vec = vec * (abs(vec[k]) / vec[k])
        return StateVector.from_amplitudes(self.layout, vec)


def tensor_compose(a, b):
    """Kronecker product of two states of the same kind."""
    if isinstance(a, StateVector) and isinstance(b, StateVector):
        check_capacity(a.layout.total * b.layout.total)
        return StateVector(a.layout + b.layout, np.kron(a.amplitudes, b.amplitudes))
    if isinstance(a, DensityOperator) and isinstance(b, DensityOperator):
        check_capacity(a.layout.total * b.layout.total)
        return DensityOperator(a.layout + b.layout, np.kron(a.matrix, b.matrix))
    raise ArgumentError("tensor_compose needs two StateVectors or two DensityOperators")


def _check_parties(parties: Iterable[int], n: int) -> tuple[int, ...]:
    parties = tuple(int(p) for p in parties)
    if len(set(parties)) != len(parties) or any(p < 0 or p >= n for p in parties):
        raise ArgumentError(f"invalid party selection {parties} for {n} parties")
    return parties


def permute_vector(amps: np.ndarray, dims: Sequence[int], order: Sequence[int]) -> np.ndarray:
    """Reorder parties so that new party ``k`` is old party ``order[k]``."""
    return np.asarray(amps).reshape(dims).transpose(order).reshape(-1)


def permute_operator(m: np.ndarray, dims: Sequence[int], order: Sequence[int]) -> np.ndarray:
    n = len(dims)
    D = math.prod(dims)
    axes = list(order) + [n + p for p in order]
    return np.asarray(m).reshape(tuple(dims) * 2).transpose(axes).reshape(D, D)


def embed_operator(op: np.ndarray, dims: Sequence[int], parties: Sequence[int]) -> np.ndarray:
    """Full-space matrix of ``op`` acting on ``parties`` (identity elsewhere)."""
    parties = _check_parties(parties, len(dims))
    rest = tuple(p for p in range(len(dims)) if p not in parties)
    sub = math.prod(dims[p] for p in parties)
    if op.shape != (sub, sub):
        raise ArgumentError(f"operator shape {op.shape} does not match parties {parties}")
    full = np.kron(op, np.eye(math.prod(dims[p] for p in rest)))
    order = parties + rest
    inverse = tuple(int(i) for i in np.argsort(order))
    permuted_dims = [dims[p] for p in order]
    return permute_operator(full, permuted_dims, inverse)


def partial_trace(rho: DensityOperator, keep: Iterable[int]) -> DensityOperator:
    """Reduced state on ``keep`` (kept parties stay in layout order)."""
    keep = tuple(sorted(_check_parties(keep, rho.layout.n)))
    if not keep:
        raise ArgumentError("partial_trace needs at least one party to keep")
    dims = rho.dims
    traced = tuple(p for p in range(len(dims)) if p not in keep)
    dk = math.prod(dims[p] for p in keep)
    dt = math.prod(dims[p] for p in traced) if traced else 1
    m = permute_operator(rho.matrix, dims, keep + traced).reshape(dk, dt, dk, dt)
    reduced = np.einsum("aibi->ab", m)
    return DensityOperator(rho.layout.sub(keep), reduced)


def partial_transpose(rho: DensityOperator | np.ndarray, subset: Iterable[int], dims: Sequence[int] | None = None) -> np.ndarray:
    """Transpose the parties in ``subset`` in the computational basis."""
    if isinstance(rho, DensityOperator):
        m, dims = rho.matrix, rho.dims
    else:
        if dims is None:
            raise ArgumentError("dims are required when passing a bare matrix")
        m = np.asarray(rho)
    n = len(dims)
    subset = _check_parties(subset, n)
    if not subset or len(subset) == n:
        raise ArgumentError("partial transpose subset must be a proper nonempty subset")
    axes = list(range(2 * n))
    for p in subset:
        axes[p], axes[n + p] = axes[n + p], axes[p]
    D = math.prod(dims)
    return m.reshape(tuple(dims) * 2).transpose(axes).reshape(D, D)


class SchmidtResult(NamedTuple):
    coefficients: np.ndarray
    rank: int


def schmidt_decomposition(psi: StateVector, cut: Bipartition, rank_tol: float = RANK_TOL) -> SchmidtResult:
    if cut.n != psi.layout.n:
        raise ArgumentError(f"cut {cut} does not match {psi.layout.n} parties")
    dims = psi.dims
    dl = math.prod(dims[p] for p in cut.left)
    m = permute_vector(psi.amplitudes, dims, cut.left + cut.right).reshape(dl, -1)
    s = np.linalg.svd(m, compute_uv=False)
    return SchmidtResult(s, int(np.sum(s > rank_tol)))


def min_eigenvalue_hermitian(h: np.ndarray) -> float:
    h = np.asarray(h)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise NumericsError(f"expected a square matrix, got shape {h.shape}")
    dev = np.max(np.abs(h - h.conj().T)) if h.size else 0.0
    if dev > 1e-10:
        raise NumericsError(f"matrix is not Hermitian (deviation {dev:.3e})")
    return float(np.linalg.eigvalsh(0.5 * (h + h.conj().T))[0])


def min_pt_eigenvalue(rho: DensityOperator, cut: Bipartition) -> float:
    return min_eigenvalue_hermitian(partial_transpose(rho, cut.right))


def enumerate_union_bipartitions(partition: PartitionSpec) -> list[Bipartition]:
    """All cuts whose sides are unions of whole groups, ``2**(K-1) - 1`` of them.

    Ordered lexicographically by the tuple of group indices on the side that
    contains group 0.
    """
    K = partition.k
    if K < 2:
        raise ArgumentError("need at least two groups to form a bipartition")
    n = partition.n
    cuts = []
    for size in range(0, K - 1):
        for rest in itertools.combinations(range(1, K), size):
            cuts.append((0,) + rest)
    cuts.sort()
    return [
        Bipartition.of((p for g in side for p in partition.groups[g]), n)
        for side in cuts
    ]
