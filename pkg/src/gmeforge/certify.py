"""GME decisions from support conditions plus partial-transpose evidence,
and the parameter windows where GME coexists with a known local model.

Only NPT is used as an entanglement oracle across a cut.  A PPT cut never
counts as evidence of separability, so it yields ``Inconclusive``.
"""

from __future__ import annotations

import enum
import logging
import re
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field

import numpy as np

from .core import (
    NEGATIVITY_TOL,
    TAG_INPUT_GME_ASSERTED,
    TAG_ISOMETRIC,
    TAG_UNSTEERABLE_AB,
    ArgumentError,
    Bipartition,
    DensityOperator,
    NumericsError,
    PartitionSpec,
    StateVector,
    enumerate_union_bipartitions,
    min_pt_eigenvalue,
    schmidt_decomposition,
)
from .statezoo import SchmidtVector, schmidt_marginal_mixture
from .subspace import SubspaceBasis, SubspaceKind, support_residual
from .thresholds import (
    p_gm,
    p_gm_tilde,
    p_gm_tilde_lower_bound,
    p_sep_threshold,
    theta,
)

log = logging.getLogger(__name__)

SUPPORT_TOL = 1e-8
BISECTION_TOL = 1e-6

FAMILIES = (
    "isotropic-extension",
    "schmidt-whitenoise-extension",
    "schmidt-marginal-extension",
    "ges-extension",
)


class Verdict(str, enum.Enum):
    GME_CERTIFIED = "GME-certified"
    BISEPARABLE_POSSIBLE = "Biseparable-possible"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class Certificate:
    verdict: Verdict
    support_residual: float
    cut_evidence: tuple[tuple[Bipartition, float], ...]
    basis_kinds: tuple[str, ...]
    partition: PartitionSpec
    rule: str = ""
    notes: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "rule": self.rule,
            "partition": str(self.partition),
            "basis_kinds": list(self.basis_kinds),
            "support_residual": self.support_residual,
            "cut_evidence": [
                {"cut": str(cut), "min_pt_eigenvalue": eig} for cut, eig in self.cut_evidence
            ],
            "notes": list(self.notes),
        }


def _check_kinds(projectors: Sequence[SubspaceBasis]) -> tuple[str, ...]:
    kinds = []
    for basis in projectors:
        if not isinstance(basis, SubspaceBasis):
            raise ArgumentError("projectors must be SubspaceBasis objects carrying a kind")
        if basis.kind is SubspaceKind.CUSTOM:
            raise ArgumentError("support criteria need symmetric or genuinely entangled subspaces, got Custom")
        if basis.kind is SubspaceKind.ANTISYMMETRIC and basis.dim == 0:
            raise ArgumentError("antisymmetric subspace is empty for these dimensions")
        kinds.append(basis.kind.value)
    return tuple(kinds)


def certify_gme_bipartite(
    sigma: DensityOperator, cut: Bipartition, projectors: Sequence[SubspaceBasis]
) -> Certificate:
    """Support on (sym or GES) x (sym or GES) plus NPT across the cut certifies GME.

    ``projectors`` are given for ``cut.left`` then ``cut.right``.
    """
    kinds = _check_kinds(projectors)
    if len(projectors) != 2:
        raise ArgumentError("bipartite certification needs exactly two projectors")
    if cut.n != sigma.layout.n:
        raise ArgumentError(f"cut {cut} does not match {sigma.layout.n} parties")
    partition = PartitionSpec((cut.left, cut.right))
    residual = support_residual(sigma, partition, projectors)
    eig = min_pt_eigenvalue(sigma, cut)
    evidence = ((cut, eig),)
    if residual > SUPPORT_TOL:
        return Certificate(
            Verdict.INCONCLUSIVE, residual, evidence, kinds, partition, "none",
            ("support condition violated; the criterion does not apply",),
        )
    if eig < -NEGATIVITY_TOL:
        return Certificate(
            Verdict.GME_CERTIFIED, residual, evidence, kinds, partition, "npt-across-supported-cut",
            (f"NPT across {cut} with support on {kinds[0]}|{kinds[1]} subspaces",),
        )
    return Certificate(
        Verdict.INCONCLUSIVE, residual, evidence, kinds, partition, "none",
        (f"cut {cut} is PPT; entanglement across it is undecided",),
    )


def pure_gme_check(psi: StateVector) -> bool:
    """True iff the pure state has Schmidt rank >= 2 across every bipartition."""
    n = psi.layout.n
    if n < 2:
        raise ArgumentError("need at least two parties")
    return all(
        schmidt_decomposition(psi, cut).rank >= 2
        for cut in enumerate_union_bipartitions(PartitionSpec.singletons(n))
    )


def certify_gme_multipartition(
    sigma: DensityOperator, partition: PartitionSpec, projectors: Sequence[SubspaceBasis]
) -> Certificate:
    """Support on the group subspaces, then one of three rules.

    * K = 2: NPT across the single union cut.
    * the state is an isometric extension of a seed asserted to be GME.
    * the state is pure and passes :func:`pure_gme_check`.

    For K > 2 NPT on every union cut is reported but is not treated as proof.
    """
    kinds = _check_kinds(projectors)
    if partition.k < 2:
        raise ArgumentError("need at least two groups")
    if partition.n != sigma.layout.n:
        raise ArgumentError(f"partition covers {partition.n} parties, state has {sigma.layout.n}")
    residual = support_residual(sigma, partition, projectors)
    evidence = tuple((cut, min_pt_eigenvalue(sigma, cut)) for cut in enumerate_union_bipartitions(partition))
    all_npt = all(e < -NEGATIVITY_TOL for _, e in evidence)

    def cert(verdict, rule, *notes):
        return Certificate(verdict, residual, evidence, kinds, partition, rule, notes)

    if residual > SUPPORT_TOL:
        return cert(Verdict.INCONCLUSIVE, "none", "support condition violated; the criterion does not apply")
    if partition.k == 2 and evidence[0][1] < -NEGATIVITY_TOL:
        return cert(Verdict.GME_CERTIFIED, "npt-across-supported-cut", f"NPT across {evidence[0][0]}")
    if TAG_INPUT_GME_ASSERTED in sigma.tags and TAG_ISOMETRIC in sigma.tags:
        return cert(Verdict.GME_CERTIFIED, "gme-seed-transfer", "isometric extension of a seed asserted GME")
    if sigma.is_pure():
        if pure_gme_check(sigma.as_pure()):
            return cert(Verdict.GME_CERTIFIED, "pure-state", "pure state entangled across every bipartition")
        return cert(Verdict.BISEPARABLE_POSSIBLE, "pure-state", "pure state is product across some bipartition")
    note = "NPT across every union cut (necessary-type evidence only)" if all_npt else "some union cut is PPT"
    return cert(Verdict.INCONCLUSIVE, "none", note)


def bisect_threshold(predicate: Callable[[float], bool], lo: float = 0.0, hi: float = 1.0, tol: float = BISECTION_TOL) -> float | None:
    """Smallest p in [lo, hi] (to ``tol``) where ``predicate`` switches on.

    Returns ``None`` when the predicate is already on at ``lo`` or never on
    at ``hi``.
    """
    if predicate(lo) or not predicate(hi):
        return None
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if predicate(mid):
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def npt_onset(state_fn: Callable[[float], DensityOperator], cut: Bipartition, tol: float = BISECTION_TOL) -> float | None:
    return bisect_threshold(lambda p: min_pt_eigenvalue(state_fn(p), cut) < -NEGATIVITY_TOL, 0.0, 1.0, tol)


@dataclass(frozen=True)
class Window:
    """Half-open interval (lower, upper]; ``empty`` when upper <= lower."""

    lower: float
    upper: float

    @property
    def empty(self) -> bool:
        return not self.upper > self.lower

    def to_dict(self) -> dict:
        return {"lower": self.lower, "upper": self.upper, "empty": self.empty}


@dataclass(frozen=True)
class ThresholdReport:
    family: str
    d: int
    p_sep: float
    p_gm: float
    p_gm_tilde: float
    theta: float
    windows: dict[str, Window]
    mu: tuple[float, ...] = ()
    checks: dict[str, float | bool] = field(default_factory=dict)
    notes: tuple[str, ...] = ()

    def __post_init__(self):
        values = [self.p_sep, self.p_gm, self.p_gm_tilde, self.theta]
        values += [v for w in self.windows.values() for v in (w.lower, w.upper)]
        if any(not 0.0 <= v <= 1.0 for v in values):
            raise NumericsError(f"threshold values outside [0, 1]: {values}")

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "d": self.d,
            "mu": list(self.mu),
            "p_sep": self.p_sep,
            "p_gm": self.p_gm,
            "p_gm_tilde": self.p_gm_tilde,
            "theta": self.theta,
            "windows": {k: w.to_dict() for k, w in self.windows.items()},
            "checks": dict(self.checks),
            "notes": list(self.notes),
        }


def theta_maximizing_mu(d: int) -> np.ndarray:
    """(1/2, 1/2, 0, ..., 0): theta = 1/2, the largest value any weights reach."""
    mu = np.zeros(d)
    mu[:2] = 0.5
    return mu


def default_marginal_mu(d: int) -> tuple[float, ...]:
    if d == 2:
        return (0.5, 0.5)
    rest = 0.02 / (d - 2)
    return (0.49, 0.49) + (rest,) * (d - 2)


def _checks(d: int) -> dict[str, float | bool]:
    bound = p_gm_tilde_lower_bound(d)
    return {
        "quoted_lower_bound": bound,
        "p_gm_tilde_meets_bound": p_gm_tilde(d) >= bound,
        "p_gm_meets_bound": p_gm(d) >= bound,
    }


def classification_window(family: str, d: int | None = None, mu: Sequence[float] | None = None, n: int | None = None) -> ThresholdReport:
    """Interval of the noise weight p where the extension is GME and bilocal.

    ``mu`` for ``schmidt-whitenoise-extension`` may contain zeros; it defaults
    to the theta-maximizing two-level vector.  ``ges-extension`` takes the
    qubit count ``n`` of the GES and uses d = 2**(n-2).
    """
    if family not in FAMILIES:
        raise ArgumentError(f"unknown family {family!r}; expected one of {', '.join(FAMILIES)}")
    if family == "ges-extension":
        if n is None or n < 3:
            raise ArgumentError("ges-extension needs n >= 3")
        d = 2 ** (n - 2)
    elif family == "schmidt-marginal-extension" and d is None and mu is not None:
        d = len(mu)
    if d is None or d < 2:
        raise ArgumentError(f"{family} needs d >= 2")
    gm, gmt = p_gm(d), p_gm_tilde(d)

    if family in ("isotropic-extension", "ges-extension"):
        uniform = [1.0 / d] * d
        lower = p_sep_threshold(uniform, d)
        windows = {"gme-bilocal": Window(lower, gm)}
        notes: tuple[str, ...] = ()
        if family == "ges-extension":
            quoted = 1.0 / (d - 1)  # d = 2**(n-2) >= 2
            windows["gme-bilocal-quoted-lower"] = Window(quoted, gm)
            notes = (
                f"seed entangled for p > 1/(d+1) = {lower!r}; quoted GME bound 1/(d-1) = {quoted!r}",
                "the two-copy GES seed normalization is 1/sqrt(d) over d terms",
            )
        return ThresholdReport(family, d, lower, gm, gmt, 1.0 / d, windows, tuple(uniform), _checks(d), notes)

    if family == "schmidt-whitenoise-extension":
        weights = theta_maximizing_mu(d) if mu is None else np.asarray(mu, dtype=float)
        if len(weights) != d or abs(weights.sum() - 1.0) > 1e-12 or np.any(weights < 0):
            raise ArgumentError("mu must be d nonnegative weights summing to 1")
        lower = p_sep_threshold(weights, d)
        return ThresholdReport(
            family, d, lower, gm, gmt, theta(weights), {"gme-bilocal": Window(lower, gmt)},
            tuple(float(x) for x in weights), _checks(d),
            ("window upper edge is the white-noise local-model bound p_gm_tilde",),
        )

    schmidt = SchmidtVector(tuple(default_marginal_mu(d) if mu is None else mu))
    if schmidt.d != d:
        raise ArgumentError(f"mu has {schmidt.d} entries, expected d={d}")
    cut = Bipartition((0,), (1,))
    onset = npt_onset(lambda p: schmidt_marginal_mixture(schmidt, p), cut)
    notes = ("lower edge located by bisection on the minimum partial-transpose eigenvalue",)
    if onset is None:
        onset = 1.0
        notes += ("no NPT point found in [0, 1]",)
    return ThresholdReport(
        family, d, onset, gm, gmt, theta(schmidt.mu), {"gme-bilocal": Window(onset, gm)},
        schmidt.mu, _checks(d), notes,
    )


_UNSTEER_RE = re.compile(r"^seed:unsteerable:([\d,]+)->([\d,]+)$")


def _seed_cuts(tags) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    cuts = []
    for tag in sorted(tags):
        if tag == f"seed:{TAG_UNSTEERABLE_AB}":
            cuts.append(((0,), (1,)))
        elif m := _UNSTEER_RE.match(tag):
            cuts.append(tuple(tuple(int(x) for x in s.split(",")) for s in m.groups()))
    return cuts


def steering_transfer(sigma: DensityOperator) -> DensityOperator:
    """Carry one-way unsteerability of the seed over to the induced cut.

    Seed tags ``A-to-B-unsteerable`` (two parties) or ``unsteerable:T->U``
    (sets of seed parties) become ``unsteerable:S->S'`` on the output, with
    each seed party replaced by its group of output parties.
    """
    cuts = _seed_cuts(sigma.tags)
    if TAG_ISOMETRIC not in sigma.tags or sigma.partition is None or not cuts:
        msg = "steering transfer skipped: no isometric extension of an unsteerable seed"
        log.warning(msg)
        return sigma.with_notes(msg)
    groups = sigma.partition.groups
    new = set()
    for src, dst in cuts:
        if max(src + dst) >= len(groups):
            raise ArgumentError(f"seed cut {src}->{dst} does not fit {len(groups)} groups")
        s = sorted(p for g in src for p in groups[g])
        t = sorted(p for g in dst for p in groups[g])
        new.add(f"unsteerable:{','.join(map(str, s))}->{','.join(map(str, t))}")
    return sigma.with_tags(add=new)
