"""JSON state files and report files.

State files store every complex entry as ``[re, im]`` written with 17
significant digits, which reproduces IEEE doubles exactly on reading.
Reports are written with sorted keys and floats trimmed to 10 significant
digits (magnitudes below 1e-12 become 0) so that they stay byte-stable
across BLAS builds.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .core import ArgumentError, DensityOperator, NumericsError, PartitionSpec, PartyLayout, StateVector

FORMAT_VERSION = "1.0"
REPORT_FLOAT_DIGITS = 10
REPORT_ZERO = 1e-12


def _num(x: float) -> str:
    x = float(x) + 0.0  # folds -0.0 into 0.0
    if not math.isfinite(x):
        raise NumericsError(f"cannot serialize non-finite value {x!r}")
    return "%.17g" % x


@dataclass(frozen=True)
class StateFile:
    """Contents of a state file.  Pure states keep tags and partition here."""

    state: StateVector | DensityOperator
    tags: frozenset[str] = frozenset()
    partition: PartitionSpec | None = None
    provenance: tuple[str, ...] = field(default=())

    def density(self) -> DensityOperator:
        if isinstance(self.state, DensityOperator):
            return self.state
        psi = self.state.amplitudes
        return DensityOperator(self.state.layout, np.outer(psi, psi.conj()), self.tags, self.partition)


def dumps_state(state: StateVector | DensityOperator, provenance=(), tags=None, partition=None) -> str:
    if isinstance(state, StateVector):
        kind, data = "pure", state.amplitudes
    else:
        kind, data = "density", state.matrix.ravel()
        tags = state.tags if tags is None else tags
        partition = state.partition if partition is None else partition
    tags = sorted(tags or ())
    header = [
        ("format_version", FORMAT_VERSION),
        ("kind", kind),
        ("dims", list(state.layout.dims)),
        ("tags", tags),
        ("partition", None if partition is None else str(partition)),
        ("provenance", list(provenance)),
    ]
    lines = ["{"]
    for key, value in header:
        lines.append(f"  {json.dumps(key)}: {json.dumps(value)},")
    lines.append('  "data": [')
    rows = [f"    [{_num(z.real)}, {_num(z.imag)}]" for z in data]
    lines.append(",\n".join(rows))
    lines.append("  ]")
    lines.append("}")
    return "\n".join(lines) + "\n"


def write_state(path, state, provenance=(), tags=None, partition=None) -> None:
    Path(path).write_text(dumps_state(state, provenance, tags, partition), encoding="utf-8")


def loads_state(text: str) -> StateFile:
    try:
        return _loads_state(text)
    except (KeyError, TypeError) as exc:
        raise ArgumentError(f"malformed state file: {exc!r}") from exc


def _loads_state(text: str):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ArgumentError(f"state file is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("format_version") != FORMAT_VERSION:
        raise ArgumentError(f"unsupported state file format {doc.get('format_version') if isinstance(doc, dict) else None!r}")
    layout = PartyLayout(tuple(doc["dims"]))
    data = np.array([complex(re, im) for re, im in doc["data"]], dtype=complex)
    provenance = tuple(doc.get("provenance", []))
    tags = frozenset(doc.get("tags", []))
    partition = doc.get("partition")
    partition = None if partition is None else PartitionSpec.parse(partition)
    if doc["kind"] == "pure":
        if data.size != layout.total:
            raise ArgumentError(f"pure state needs {layout.total} entries, file has {data.size}")
        return StateFile(StateVector(layout, data), tags, partition, provenance)
    if doc["kind"] == "density":
        if data.size != layout.total**2:
            raise ArgumentError(f"density matrix needs {layout.total ** 2} entries, file has {data.size}")
        rho = DensityOperator(layout, data.reshape(layout.total, layout.total), tags, partition)
        return StateFile(rho, tags, partition, provenance)
    raise ArgumentError(f"unknown state kind {doc['kind']!r}")


def read_state(path) -> StateFile:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ArgumentError(f"cannot read {path}: {exc}") from exc
    return loads_state(text)


def _trim(obj):
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, float):
        if abs(obj) < REPORT_ZERO:
            return 0.0
        return float(f"{obj:.{REPORT_FLOAT_DIGITS}g}")
    if isinstance(obj, dict):
        return {k: _trim(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_trim(v) for v in obj]
    return obj


def dumps_report(body: dict, seed: int) -> str:
    doc = {"format_version": FORMAT_VERSION, "tool_version": __version__, "seed": seed}
    doc.update(body)
    return json.dumps(_trim(doc), sort_keys=True, indent=2) + "\n"


def write_report(path, body: dict, seed: int) -> None:
    Path(path).write_text(dumps_report(body, seed), encoding="utf-8")
