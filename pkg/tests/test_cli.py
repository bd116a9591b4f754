import json
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from gmeforge.cli import main, parse_map
from gmeforge.core import ArgumentError
from gmeforge.io import dumps_state, loads_state, read_state, write_state
from gmeforge.statezoo import example1_state, random_density, random_pure

GOLDEN = Path(__file__).parent / "golden" / "example1_d2_p04_report.json"


def run(*argv):
    return main([str(a) for a in argv])


def _chain(tmp_path, p):
    seed, ext, rep = tmp_path / "seed.json", tmp_path / "ext.json", tmp_path / "report.json"
    assert run("build", "isotropic", "--d", 2, "--p", p, "--out", seed) == 0
    assert run("extend", "--in", seed, "--maps", "copy:2:2,copy:2:2", "--out", ext) == 0
    assert run("certify", "--in", ext, "--partition", "0,1|2,3", "--kinds", "sym|sym", "--out", rep) == 0
    return ext, rep


# --- build --------------------------------------------------------------------

def test_build_isotropic(tmp_path):
    out = tmp_path / "iso.json"
    assert run("build", "isotropic", "--d", 2, "--p", 0.4, "--out", out) == 0
    doc = json.loads(out.read_text())
    assert doc["kind"] == "density" and doc["dims"] == [2, 2] and len(doc["data"]) == 16
    trace = sum(doc["data"][k * 5][0] for k in range(4))
    assert abs(trace - 1) < 1e-15
    assert doc["provenance"] == ["build isotropic --d 2 --p 0.4"]


def test_build_three_qubit_hybrid_state_fails(tmp_path, capsys):
    out = tmp_path / "t.json"
    assert run("build", "toth-acin", "--out", out) == 2
    assert "eigenvalue" in capsys.readouterr().err
    assert not out.exists()


@pytest.mark.xfail(strict=True, reason="the operator as written is not positive; construction is refused")
def test_build_three_qubit_hybrid_state_file(tmp_path):
    out = tmp_path / "t.json"
    assert run("build", "toth-acin", "--out", out) == 0
    doc = json.loads(out.read_text())
    assert len(doc["data"]) == 64 and abs(doc["data"][0][0] - 5 / 48) < 1e-15


def test_build_bad_p(tmp_path, capsys):
    assert run("build", "isotropic", "--d", 2, "--p", 1.5, "--out", tmp_path / "x.json") == 2
    assert "error" in capsys.readouterr().err


def test_build_missing_param_and_family(tmp_path):
    assert run("build", "isotropic", "--d", 2, "--out", tmp_path / "x.json") == 2
    assert run("build", "nonsense", "--out", tmp_path / "x.json") == 2


def test_build_capacity(tmp_path, monkeypatch):
    monkeypatch.setenv("GMEFORGE_DIM_CAP", "64")
    assert run("build", "ghz", "--d", 2, "--n", 7, "--out", tmp_path / "x.json") == 3


def test_unknown_option_exits_two():
    with pytest.raises(SystemExit) as exc:
        main(["build", "--bogus"])
    assert exc.value.code == 2


# --- extend -------------------------------------------------------------------

def test_extend_matches_closed_form(tmp_path):
    ext, _ = _chain(tmp_path, 0.4)
    sf = read_state(ext)
    assert sf.state.dims == (2, 2, 2, 2)
    assert np.linalg.norm(sf.state.matrix - example1_state(2, 4, 2, 0.4).matrix) <= 1e-12
    assert str(sf.partition) == "0,1|2,3"


def test_extend_w2_rejected(tmp_path):
    seed = tmp_path / "w.json"
    assert run("build", "w-mixture", "--k", 3, "--p", 0.5, "--out", seed) == 0
    assert run("extend", "--in", seed, "--maps", "w:2,w:3,w:3", "--out", tmp_path / "o.json") == 2


def test_extend_dimension_mismatch(tmp_path):
    seed = tmp_path / "iso.json"
    run("build", "isotropic", "--d", 2, "--p", 0.4, "--out", seed)
    assert run("extend", "--in", seed, "--maps", "copy:3:2,copy:2:2", "--out", tmp_path / "o.json") == 2
    assert run("extend", "--in", seed, "--maps", "copy:2:two", "--out", tmp_path / "o.json") == 2
    assert run("extend", "--in", tmp_path / "missing.json", "--maps", "id:2,id:2", "--out", tmp_path / "o.json") == 2


def test_extend_capacity(tmp_path, monkeypatch):
    seed = tmp_path / "iso.json"
    run("build", "isotropic", "--d", 2, "--p", 0.4, "--out", seed)
    monkeypatch.setenv("GMEFORGE_DIM_CAP", "64")
    assert run("extend", "--in", seed, "--maps", "copy:2:4,copy:2:4", "--out", tmp_path / "o.json") == 3


def test_extend_pure_stays_pure(tmp_path):
    seed, ext = tmp_path / "phi.json", tmp_path / "dicke.json"
    assert run("build", "dicke-source", "--d", 3, "--out", seed) == 0
    assert run("extend", "--in", seed, "--maps", "dicke:3,dicke:3:rev", "--out", ext) == 0
    sf = read_state(ext)
    assert json.loads(ext.read_text())["kind"] == "pure"
    assert str(sf.partition) == "0,1|2,3"
    rep = tmp_path / "r.json"
    assert run("certify", "--in", ext, "--out", rep) == 0
    assert json.loads(rep.read_text())["certificate"]["verdict"] == "GME-certified"


def test_map_grammar():
    assert parse_map("copy:2:3").label == "copy:2:3"
    assert parse_map("dicke:4:rev").label == "dicke:4:rev"
    assert parse_map("ges:3").in_dim == 2
    assert parse_map("w:3").in_dim == 2
    assert parse_map("id:5").in_dim == 5
    for bad in ("copy:2", "dicke:3:fwd", "spin:2", "w:x"):
        with pytest.raises(ArgumentError):
            parse_map(bad)


# --- certify ------------------------------------------------------------------

def test_golden_report(tmp_path):
    _, rep = _chain(tmp_path, 0.4)
    assert rep.read_bytes() == GOLDEN.read_bytes()


def test_certify_below_threshold(tmp_path):
    _, rep = _chain(tmp_path, 0.2)
    assert json.loads(rep.read_text())["certificate"]["verdict"] == "Inconclusive"


def test_certify_bad_partition(tmp_path):
    ext, _ = _chain(tmp_path, 0.4)
    assert run("certify", "--in", ext, "--partition", "0,1|2", "--kinds", "sym|sym") == 2
    assert run("certify", "--in", ext, "--partition", "0,1|2,3", "--kinds", "sym") == 2
    assert run("certify", "--in", ext, "--partition", "0,1|2,3", "--kinds", "sym|blob") == 2


def test_certify_defaults_from_tags(tmp_path, capsys):
    ext, _ = _chain(tmp_path, 0.4)
    assert run("certify", "--in", ext) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["certificate"]["verdict"] == "GME-certified"


def test_certify_verdict_never_sets_exit_code(tmp_path):
    ext, _ = _chain(tmp_path, 0.1)
    assert run("certify", "--in", ext, "--out", tmp_path / "r.json") == 0


def test_report_is_byte_stable(tmp_path):
    ext, rep = _chain(tmp_path, 0.4)
    again = tmp_path / "again.json"
    run("certify", "--in", ext, "--partition", "0,1|2,3", "--kinds", "sym|sym", "--out", again)
    assert again.read_bytes() == rep.read_bytes()


# --- thresholds -----------------------------------------------------------------

def test_thresholds_table(capsys):
    assert run("thresholds", "--d", 2) == 0
    out = capsys.readouterr().out
    row = out.strip().splitlines()[-1].split()
    assert row[0] == "2" and row[1] == "0.333333" and row[2] == "0.416667"
    run("thresholds", "--d", 3)
    assert capsys.readouterr().out.strip().splitlines()[-1].split()[2] == "0.296296"


def test_thresholds_white_noise_all_empty(capsys, tmp_path):
    rep = tmp_path / "t.json"
    assert run("thresholds", "--family", "schmidt-whitenoise-extension", "--d", "2..8", "--out", rep) == 0
    rows = capsys.readouterr().out.strip().splitlines()[2:]
    assert len(rows) == 7 and all(r.endswith("EMPTY") and not r.endswith("NONEMPTY") for r in rows)
    doc = json.loads(rep.read_text())
    assert all(r["windows"]["gme-bilocal"]["empty"] for r in doc["thresholds"])


def test_thresholds_bad_range():
    assert run("thresholds", "--d", "2..x") == 2


# --- state files ----------------------------------------------------------------

def test_state_file_roundtrip_bytes():
    for seed in range(20):
        state = random_pure((2, 3), seed) if seed % 2 else random_density((2, 2), seed)
        text = dumps_state(state, ["test"])
        sf = loads_state(text)
        assert dumps_state(sf.state, sf.provenance, sf.tags, sf.partition) == text
        a = state.amplitudes if seed % 2 else state.matrix
        b = sf.state.amplitudes if seed % 2 else sf.state.matrix
        assert np.array_equal(a, b)


def test_state_file_rejects_garbage(tmp_path):
    with pytest.raises(ArgumentError):
        loads_state("{not json")
    with pytest.raises(ArgumentError):
        loads_state('{"format_version": "9"}')
    with pytest.raises(ArgumentError):
        loads_state('{"format_version": "1.0", "kind": "pure", "dims": [2], "data": [[1, 0]]}')
    path = tmp_path / "s.json"
    write_state(path, random_pure((2, 2), 0))
    assert read_state(path).state.dims == (2, 2)


def test_negative_zero_folded():
    text = dumps_state(random_density((2,), 0))
    assert "-0," not in text and "-0]" not in text


def test_console_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "gmeforge.cli", "thresholds", "--d", "2"], capture_output=True, text=True
    )
    assert proc.returncode == 0 and "0.416667" in proc.stdout
