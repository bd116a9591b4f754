"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line."""

import subprocess
import sys
import time
from pathlib import Path

import numpy as np

from conftest import ACCEPTANCE_LINES
from gmeforge.certify import (
    Verdict,
    bisect_threshold,
    certify_gme_bipartite,
    classification_window,
    pure_gme_check,
    theta_maximizing_mu,
)
from gmeforge.cli import main
from gmeforge.core import Bipartition, StateVector, min_pt_eigenvalue, tensor_compose
from gmeforge.extend import apply_extension, copy_isometry, dicke_isometry, extend_vector, w_isometry
from gmeforge.statezoo import (
    bell_diag,
    dicke_source_mixture,
    dicke_source_state,
    example1_state,
    ghz_vector,
    isotropic,
    max_entangled,
    noisy_dicke,
    random_density,
    random_pure,
    schmidt_marginal_mixture,
)
from gmeforge.subspace import (
    dicke_state,
    ges_basis,
    printed_ges_second_vector,
    sample_subspace_vector,
    symmetric_basis,
    symmetric_projector,
)
from gmeforge.thresholds import dicke_source_mu, p_gm, p_gm_tilde, theta_dicke

import oracles

HERE = Path(__file__).parent
MID = Bipartition((0, 1), (2, 3))


def record(n, ok, detail):
    line = f"[criterion {n:2d}] {'PASS' if ok else 'FAIL'}: {detail}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert ok, line


def test_01_dicke_identity():
    t0 = time.perf_counter()
    errs = []
    for d in (3, 4, 5):
        psi = extend_vector(dicke_source_state(d), [dicke_isometry(d), dicke_isometry(d, reversed=True)])
        errs.append(np.linalg.norm(psi.amplitudes - oracles.dicke_vector(2 * (d - 1), d - 1)))
    dt = time.perf_counter() - t0
    record(1, max(errs) <= 1e-12 and dt < 1.0, f"Dicke identity d=3..5, max error {max(errs):.1e}, {dt:.3f}s")


def test_02_closed_form_vs_pipeline():
    t0 = time.perf_counter()
    worst = 0.0
    for d, N, L in [(2, 4, 2), (3, 4, 2), (2, 5, 2)]:
        for p in (0, 0.4, 1):
            out = apply_extension(isotropic(d, p), [copy_isometry(d, L), copy_isometry(d, N - L)])
            worst = max(worst, np.linalg.norm(out.matrix - example1_state(d, N, L, p).matrix))
    for d in (3, 4):
        for p in (0, 0.5, 1):
            out = apply_extension(dicke_source_mixture(d, p), [dicke_isometry(d), dicke_isometry(d, reversed=True)])
            worst = max(worst, np.linalg.norm(out.matrix - noisy_dicke(d, p).matrix))
    dt = time.perf_counter() - t0
    record(2, worst <= 1e-12 and dt < 2.0, f"closed forms vs pipelines, max Frobenius {worst:.1e}, {dt:.3f}s")


def _transfer_cases():
    rng = np.random.default_rng(7)
    makers = {
        2: [lambda: copy_isometry(2, 2), lambda: copy_isometry(2, 3), lambda: w_isometry(3),
            lambda: copy_isometry(2, 1), lambda: w_isometry(4)],
        3: [lambda: copy_isometry(3, 2), lambda: copy_isometry(3, 3), lambda: dicke_isometry(3),
            lambda: dicke_isometry(3, reversed=True)],
    }
    cases, k = [], 0
    while len(cases) < 20:
        k += 1
        da, db = (int(x) for x in rng.choice([2, 3], size=2))
        maps = [makers[da][rng.integers(len(makers[da]))](), makers[db][rng.integers(len(makers[db]))]()]
        if maps[0].out_layout.total * maps[1].out_layout.total > 243:
            continue
        seed = random_density((da, db), seed=k, rank=int(rng.integers(1, 3)))
        cases.append((seed, maps))
    return cases


def test_03_pt_spectrum_transfer():
    worst, npt = 0.0, 0
    for seed, maps in _transfer_cases():
        out = apply_extension(seed, maps)
        cut = Bipartition(*out.partition.groups)
        seed_min = min_pt_eigenvalue(seed, Bipartition((0,), (1,)))
        npt += seed_min < 0
        worst = max(worst, abs(min_pt_eigenvalue(out, cut) - seed_min))
    record(3, worst <= 1e-10 and npt == 20, f"PT minimum transfer on 20 cases ({npt} NPT seeds), max gap {worst:.1e}")


def test_04_isotropic_boundary():
    vals = [min_pt_eigenvalue(isotropic(d, 1 / (d + 1)), Bipartition((0,), (1,))) for d in (2, 3)]
    record(4, max(abs(v) for v in vals) <= 1e-10, f"PT minimum at p=1/(d+1), d=2,3: {vals[0]:.1e}, {vals[1]:.1e}")


def test_05_threshold_table():
    errs = [
        abs(p_gm(2) - 5 / 12), abs(p_gm(3) - 8 / 27), abs(p_gm_tilde(2) - 5 / 19),
        abs(theta_dicke(2) - 1 / 2), abs(theta_dicke(3) - 1 / 3),
    ]
    errs += [abs(theta_dicke(d) - oracles.theta_bruteforce(dicke_source_mu(d))) for d in range(2, 9)]
    record(5, max(errs) <= 1e-12, f"threshold constants and theta_dicke d=2..8, max error {max(errs):.1e}")


def _verdict(p):
    sym = [symmetric_basis(2, 2)] * 2
    return certify_gme_bipartite(example1_state(2, 4, 2, p), MID, sym).verdict


def test_06_gme_window():
    gme = all(_verdict(p) is Verdict.GME_CERTIFIED for p in (0.34, 0.41))
    inc = all(_verdict(p) is Verdict.INCONCLUSIVE for p in (0.30, 0.33))
    edge = bisect_threshold(lambda p: _verdict(p) is Verdict.GME_CERTIFIED, 0.0, 1.0, 1e-6)
    ok = gme and inc and edge is not None and abs(edge - 1 / 3) <= 1e-3
    record(6, ok, f"GME at 0.34/0.41, Inconclusive at 0.30/0.33, transition {edge:.6f}")


def test_07_ges_suite():
    basis = ges_basis(3)
    phi0 = np.zeros(8)
    phi0[[1, 2]] = 1 / np.sqrt(3)
    phi0[4] = -1 / np.sqrt(3)
    col_err = np.max(np.abs(basis.columns[:, 0] - phi0))
    gram_err = np.max(np.abs(basis.columns.conj().T @ basis.columns - np.eye(2)))
    samples_ok = all(
        oracles.is_gme_pure(sample_subspace_vector(ges_basis(n), s).amplitudes, (2,) * n)
        for n in (3, 4) for s in range(100)
    )
    overlap = abs(np.vdot(phi0, printed_ges_second_vector().amplitudes))
    ok = basis.dim == 2 and col_err <= 1e-12 and gram_err <= 1e-12 and samples_ok and overlap > 0.9
    record(7, ok, f"GES basis dim {basis.dim}, column error {col_err:.1e}, Gram {gram_err:.1e}, "
                  f"200 samples GME={samples_ok}, printed pair overlap {overlap:.4f}")


def test_08_product_vectors_violate_support():
    P = np.kron(symmetric_projector(2, 2)[0], np.eye(4))
    residuals = []
    for s in range(200):
        a, b = random_pure((2, 2), 2 * s).amplitudes, random_pure((2, 2), 2 * s + 1).amplitudes
        # product across T={0,2} | {1,3}
        psi = np.kron(a, b).reshape(2, 2, 2, 2).transpose(0, 2, 1, 3).reshape(-1)
        assert oracles.cut_rank(psi, (2,) * 4, [0, 1]) >= 2
        residuals.append(np.linalg.norm(P @ psi - psi))
    record(8, min(residuals) > 1e-6, f"200 vectors, smallest support residual {min(residuals):.3e}")


def test_09_bell_diagonal():
    maps = [copy_isometry(2, 1), copy_isometry(2, 2)]
    cut = Bipartition((0,), (1, 2))
    bases = [symmetric_basis(1, 2), symmetric_basis(2, 2)]
    half = certify_gme_bipartite(apply_extension(bell_diag(0.5), maps), cut, bases)
    seven = certify_gme_bipartite(apply_extension(bell_diag(0.7), maps), cut, bases)
    eig = half.cut_evidence[0][1]
    ok = half.verdict is Verdict.INCONCLUSIVE and eig >= -1e-10 and seven.verdict is Verdict.GME_CERTIFIED
    record(9, ok, f"p=1/2 {half.verdict.value} (PT min {eig:.1e}), p=0.7 {seven.verdict.value}")


def test_10_pure_checker():
    examples = (
        pure_gme_check(ghz_vector(2, 4)) and pure_gme_check(dicke_state(4, 2))
        and not pure_gme_check(tensor_compose(max_entangled(2), max_entangled(2)))
        and not pure_gme_check(StateVector.basis((2,) * 4, (0,) * 4))
    )
    agree = 0
    for s in range(100):
        psi = random_pure((2,) * 4, s)
        if s % 3 == 0:  # include biseparable cases
            psi = tensor_compose(random_pure((2,), s), random_pure((2,) * 3, s + 500))
        agree += pure_gme_check(psi) == oracles.is_gme_pure(psi.amplitudes, (2,) * 4)
    record(10, examples and agree == 100, f"named examples ok={examples}, oracle agreement {agree}/100")


def test_11_window_scan():
    empties = [
        classification_window("schmidt-whitenoise-extension", d=d, mu=theta_maximizing_mu(d)).windows["gme-bilocal"].empty
        for d in range(2, 9)
    ]
    mu = (0.49, 0.49, 0.02)
    w = classification_window("schmidt-marginal-extension", d=3, mu=mu).windows["gme-bilocal"]
    cut = Bipartition((0,), (1,))
    below = min_pt_eigenvalue(schmidt_marginal_mixture(mu, w.lower - 1e-6), cut)
    above = min_pt_eigenvalue(schmidt_marginal_mixture(mu, w.lower + 1e-6), cut)
    located = below >= -1e-9 and above < -1e-9
    ok = all(empties) and not w.empty and located
    record(11, ok, f"white-noise windows empty d=2..8: {all(empties)}; marginal d=3 window "
                   f"({w.lower:.7f}, {w.upper:.7f}], edge bracketed to 1e-6: {located}")


def test_12_cli_golden(tmp_path):
    t0 = time.perf_counter()
    seed, ext, rep = tmp_path / "s.json", tmp_path / "e.json", tmp_path / "r.json"
    codes = [
        main(["build", "isotropic", "--d", "2", "--p", "0.4", "--out", str(seed)]),
        main(["extend", "--in", str(seed), "--maps", "copy:2:2,copy:2:2", "--out", str(ext)]),
        main(["certify", "--in", str(ext), "--partition", "0,1|2,3", "--kinds", "sym|sym", "--out", str(rep)]),
    ]
    identical = rep.read_bytes() == (HERE / "golden" / "example1_d2_p04_report.json").read_bytes()
    suite = subprocess.run(
        [sys.executable, "-m", "pytest", "-q", "-p", "no:cacheprovider", str(HERE / "test_cli.py")],
        capture_output=True, text=True, cwd=HERE.parent,
    )
    dt = time.perf_counter() - t0
    ok = codes == [0, 0, 0] and identical and suite.returncode == 0 and dt < 10
    record(12, ok, f"golden report byte-identical={identical}, CLI suite rc={suite.returncode}, {dt:.2f}s")
