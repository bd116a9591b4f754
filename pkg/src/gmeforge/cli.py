"""Command-line front end.

Exit status: 0 on success (whatever the verdict), 2 for bad arguments or
inputs, 3 when a dimension exceeds the cap.

Map specs are comma lists of ``copy:d:L``, ``dicke:d[:rev]``, ``ges:n``,
``w:L`` and ``id:d``, one per input party in party order.
"""

from __future__ import annotations

import argparse
import sys
from collections.abc import Sequence

import numpy as np

from . import __version__
from . import statezoo as zoo
from .certify import (
    FAMILIES,
    certify_gme_bipartite,
    certify_gme_multipartition,
    classification_window,
)
from .core import (
    ArgumentError,
    Bipartition,
    CapacityError,
    GmeForgeError,
    PartitionSpec,
    PartyLayout,
    StateVector,
)
from .extend import (
    IsometryMap,
    apply_extension,
    copy_isometry,
    dicke_isometry,
    extend_vector,
    ges_isometry,
    identity_isometry,
    w_columns,
    w_isometry,
)
from .io import dumps_report, read_state, write_report, write_state
from .subspace import SubspaceBasis, SubspaceKind, antisymmetric_basis, dicke_state, ges_basis, symmetric_basis
from .thresholds import theta_dicke

EXIT_ARGUMENT = 2
EXIT_CAPACITY = 3

_PATH_OPTIONS = {"--in", "--out"}


def _echo(argv: Sequence[str]) -> str:
    """Command line without file paths, so provenance is location independent."""
    kept, skip = [], False
    for tok in argv:
        if skip:
            skip = False
            continue
        if tok in _PATH_OPTIONS:
            skip = True
            continue
        if tok.split("=", 1)[0] in _PATH_OPTIONS:
            continue
        kept.append(tok)
    return " ".join(kept)


def _require(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise ArgumentError(f"family {args.family!r} needs --{', --'.join(missing)}")
    return [getattr(args, n) for n in names]


def _floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",")]
    except ValueError as exc:
        raise ArgumentError(f"expected a comma list of numbers, got {text!r}") from exc


def _ints(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",")]
    except ValueError as exc:
        raise ArgumentError(f"expected a comma list of integers, got {text!r}") from exc


BUILD_FAMILIES = {
    "isotropic": lambda a: zoo.isotropic(*_require(a, "d", "p")),
    "max-entangled": lambda a: zoo.max_entangled(*_require(a, "d")),
    "schmidt": lambda a: zoo.schmidt_state(_floats(_require(a, "mu")[0]), a.n or 2),
    "schmidt-noise": lambda a: zoo.schmidt_noise_mixture(_floats(_require(a, "mu")[0]), _require(a, "p")[0]),
    "schmidt-marginal": lambda a: zoo.schmidt_marginal_mixture(_floats(_require(a, "mu")[0]), _require(a, "p")[0]),
    "dicke-source": lambda a: zoo.dicke_source_state(*_require(a, "d")),
    "dicke-source-noise": lambda a: zoo.dicke_source_mixture(*_require(a, "d", "p")),
    "bell-diag": lambda a: zoo.bell_diag(*_require(a, "p")),
    "toth-acin": lambda a: zoo.toth_acin(),
    "w-mixture": lambda a: zoo.w_mixture(*_require(a, "k", "p")),
    "example1": lambda a: zoo.example1_state(*_require(a, "d", "n", "l", "p")),
    "noisy-dicke": lambda a: zoo.noisy_dicke(*_require(a, "d", "p")),
    "ghz": lambda a: zoo.ghz_vector(*_require(a, "d", "n")),
    "dicke": lambda a: dicke_state(*_require(a, "n", "k")),
    "random-pure": lambda a: zoo.random_pure(_ints(_require(a, "dims")[0]), a.seed),
    "random-density": lambda a: zoo.random_density(_ints(_require(a, "dims")[0]), a.seed, a.rank),
}


def parse_map(token: str) -> IsometryMap:
    parts = token.strip().split(":")
    name, rest = parts[0], parts[1:]
    try:
        if name == "copy" and len(rest) == 2:
            return copy_isometry(int(rest[0]), int(rest[1]))
        if name == "dicke" and len(rest) in (1, 2):
            if len(rest) == 2 and rest[1] != "rev":
                raise ArgumentError(f"bad dicke flag {rest[1]!r}")
            return dicke_isometry(int(rest[0]), reversed=len(rest) == 2)
        if name == "ges" and len(rest) == 1:
            return ges_isometry(int(rest[0]))
        if name == "w" and len(rest) == 1:
            return w_isometry(int(rest[0]))
        if name == "id" and len(rest) == 1:
            return identity_isometry(int(rest[0]))
    except ValueError as exc:
        if isinstance(exc, ArgumentError):
            raise
        raise ArgumentError(f"bad number in map spec {token!r}") from exc
    raise ArgumentError(f"cannot parse map spec {token!r}")


def parse_maps(spec: str) -> list[IsometryMap]:
    return [parse_map(tok) for tok in spec.split(",") if tok.strip()]


def group_basis(kind: str, dims: Sequence[int]) -> SubspaceBasis:
    """Subspace named by a kinds-spec token for a group with local ``dims``."""
    n, d = len(dims), dims[0]
    if kind in ("sym", "anti") and len(set(dims)) != 1:
        raise ArgumentError(f"{kind} subspace needs equal local dimensions, got {tuple(dims)}")
    if kind == "sym":
        return symmetric_basis(n, d)
    if kind == "anti":
        return antisymmetric_basis(n, d)
    if kind in ("ges", "w"):
        if set(dims) != {2} or n < 3:
            raise ArgumentError(f"{kind} subspace needs at least three qubits, got dims {tuple(dims)}")
        if kind == "ges":
            return ges_basis(n)
        return SubspaceBasis(PartyLayout.uniform(2, n), np.stack(w_columns(n), axis=1), SubspaceKind.GES)
    raise ArgumentError(f"unknown subspace kind {kind!r} (use sym, ges, anti, w)")


def _kinds_from_tags(tags) -> str | None:
    for tag in tags:
        if tag.startswith("maps="):
            names = [tok.split(":")[0] for tok in tag[len("maps="):].split(",")]
            return "|".join({"ges": "ges", "w": "w"}.get(x, "sym") for x in names)
    return None


def cmd_build(args) -> int:
    if args.family not in BUILD_FAMILIES:
        raise ArgumentError(f"unknown family {args.family!r}; choose from {', '.join(sorted(BUILD_FAMILIES))}")
    state = BUILD_FAMILIES[args.family](args)
    write_state(args.out, state, [args.echo])
    return 0


def cmd_extend(args) -> int:
    sf = read_state(args.input)
    maps = parse_maps(args.maps)
    provenance = list(sf.provenance) + [args.echo]
    if isinstance(sf.state, StateVector):
        # run the tag bookkeeping on the density form, keep the file pure
        tagged = apply_extension(sf.density(), maps)
        write_state(args.out, extend_vector(sf.state, maps), provenance, tagged.tags, tagged.partition)
    else:
        write_state(args.out, apply_extension(sf.state, maps), provenance)
    return 0


def cmd_certify(args) -> int:
    sf = read_state(args.input)
    rho = sf.density()
    if args.partition is not None:
        partition = PartitionSpec.parse(args.partition)
    elif rho.partition is not None:
        partition = rho.partition
    else:
        raise ArgumentError("no --partition given and the state records none")
    if partition.n != rho.layout.n:
        raise ArgumentError(f"partition {partition} does not cover the {rho.layout.n} parties")
    kinds_spec = args.kinds or _kinds_from_tags(rho.tags)
    if kinds_spec is None:
        raise ArgumentError("no --kinds given and the state records no maps")
    kinds = kinds_spec.split("|")
    if len(kinds) != partition.k:
        raise ArgumentError(f"{len(kinds)} kinds for {partition.k} groups")
    bases = [group_basis(k, [rho.dims[p] for p in g]) for k, g in zip(kinds, partition.groups)]
    if partition.k == 2:
        cut = Bipartition(*partition.groups)
        if cut.left != tuple(sorted(partition.groups[0])):
            bases = bases[::-1]
        cert = certify_gme_bipartite(rho, cut, bases)
    else:
        cert = certify_gme_multipartition(rho, partition, bases)
    body = {
        "command": args.echo,
        "input": {"dims": list(rho.dims), "tags": sorted(rho.tags), "provenance": list(sf.provenance)},
        "certificate": cert.to_dict(),
    }
    text = dumps_report(body, args.seed)
    if args.out:
        write_report(args.out, body, args.seed)
    else:
        sys.stdout.write(text)
    return 0


def _range(text: str) -> list[int]:
    if ".." in text:
        lo, hi = text.split("..", 1)
        try:
            return list(range(int(lo), int(hi) + 1))
        except ValueError as exc:
            raise ArgumentError(f"bad range {text!r}") from exc
    return _ints(text)


def cmd_thresholds(args) -> int:
    rows = []
    values = _range(args.n if args.family == "ges-extension" else args.d)
    mu = _floats(args.mu) if args.mu else None
    for v in values:
        if args.family == "ges-extension":
            rep = classification_window(args.family, n=v)
        else:
            rep = classification_window(args.family, d=v, mu=mu)
        row = rep.to_dict()
        row["theta_dicke"] = theta_dicke(rep.d)
        rows.append(row)
    print(f"family: {args.family}")
    print(f"{'d':>3} {'p_sep':>10} {'p_gm':>10} {'p_gm~':>10} {'theta_dk':>10} {'lower':>10} {'upper':>10}  window")
    for row in rows:
        w = row["windows"]["gme-bilocal"]
        status = "EMPTY" if w["empty"] else "NONEMPTY"
        print(
            f"{row['d']:>3} {row['p_sep']:>10.6f} {row['p_gm']:>10.6f} {row['p_gm_tilde']:>10.6f} "
            f"{row['theta_dicke']:>10.6f} {w['lower']:>10.6f} {w['upper']:>10.6f}  {status}"
        )
    if args.out:
        write_report(args.out, {"command": args.echo, "thresholds": rows}, args.seed)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gmeforge", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=f"gmeforge {__version__}")
    parser.add_argument("--seed", type=int, default=0, help="seed for random families (recorded in reports)")
    sub = parser.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="write a state from a named family")
    b.add_argument("family", help=", ".join(sorted(BUILD_FAMILIES)))
    b.add_argument("--d", type=int)
    b.add_argument("--p", type=float)
    b.add_argument("--n", type=int)
    b.add_argument("--k", type=int)
    b.add_argument("--l", type=int)
    b.add_argument("--mu", help="comma list of Schmidt weights")
    b.add_argument("--dims", help="comma list of local dimensions")
    b.add_argument("--rank", type=int)
    b.add_argument("--out", required=True)
    b.set_defaults(func=cmd_build)

    e = sub.add_parser("extend", help="apply local isometries to a state file")
    e.add_argument("--in", dest="input", required=True)
    e.add_argument("--maps", required=True, help="e.g. copy:2:2,copy:2:2")
    e.add_argument("--out", required=True)
    e.set_defaults(func=cmd_extend)

    c = sub.add_parser("certify", help="decide GME and write a report")
    c.add_argument("--in", dest="input", required=True)
    c.add_argument("--partition", help="e.g. 0,1|2,3 (defaults to the recorded partition)")
    c.add_argument("--kinds", help="per group: sym, ges, anti or w, e.g. sym|sym")
    c.add_argument("--out")
    c.set_defaults(func=cmd_certify)

    t = sub.add_parser("thresholds", help="print threshold table and GME/bilocal windows")
    t.add_argument("--d", default="2", help="dimension or range, e.g. 3 or 2..8")
    t.add_argument("--n", default="3", help="GES qubit count or range (ges-extension only)")
    t.add_argument("--family", default="isotropic-extension", choices=FAMILIES)
    t.add_argument("--mu", help="comma list of Schmidt weights (Schmidt families)")
    t.add_argument("--out")
    t.set_defaults(func=cmd_thresholds)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    args.echo = _echo(argv)
    try:
        return args.func(args)
    except CapacityError as exc:
        print(f"gmeforge: error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (GmeForgeError, ValueError) as exc:
        print(f"gmeforge: error: {exc}", file=sys.stderr)
        return EXIT_ARGUMENT


if __name__ == "__main__":
    sys.exit(main())
