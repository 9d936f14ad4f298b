"""Exit criteria. Each test prints one PASS/FAIL line, then asserts.

Run with ``pytest tests/test_acceptance.py -v``; the verdict lines appear
even without ``-s``.
"""

import json
import math
import time
from pathlib import Path

import numpy as np
import pytest

from chshkit import cli
from chshkit.bounds import comparison_rows, markdown_table
from chshkit.chsh import (
    MeasurementSettings,
    chsh_value,
    gisin_angles,
    gisin_predicted_value,
    gisin_settings,
)
from chshkit.lhv import lhv_max_chsh, sample_chsh
from chshkit.observables import BlochVector, correlation_closed, correlation_dense
from chshkit.optimizer import maximize_chsh, slice_settings, sweep_slice
from chshkit.states import BipartiteState, random_state, random_unitary, schmidt_decompose
from chshkit.states import canonical_vector

ROOT = Path(__file__).resolve().parents[1]
TSIRELSON = 2 * math.sqrt(2)
SQRT1_2 = 1 / math.sqrt(2)
C1_GRID = np.linspace(0.0, 1.0, 10_002)[1:-1]  # 10^4 interior values


@pytest.fixture
def verdict(capsys):
    def _verdict(number, name, ok, detail=""):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {number}: {name} {detail}".rstrip())
        assert ok, f"criterion {number} failed: {detail}"

    return _verdict


def _random_bloch(r):
    return BlochVector.normalized(*r.normal(size=3))


def test_01_sign_correction_equivalence(verdict):
    r = np.random.default_rng(1)
    worst = 0.0
    for _ in range(1000):
        t = r.uniform(-math.pi, math.pi)
        c1, c2 = math.cos(t), math.sin(t)
        a, b = _random_bloch(r), _random_bloch(r)
        diff = abs(correlation_dense(canonical_vector(c1, c2), a, b) - correlation_closed(c1, c2, a, b))
        worst = max(worst, diff)
    verdict(1, "dense vs closed-form correlation", worst <= 1e-12, f"max |diff| = {worst:.3e} (tol 1e-12)")


def test_02_theorem_reproduction(verdict):
    worst = 0.0
    all_violate = True
    for c1 in C1_GRID:
        c2 = math.sqrt(1 - c1 * c1)
        s = chsh_value(c1, c2, gisin_settings(c1, c2)).s_value
        all_violate &= s > 2
        worst = max(worst, abs(s - 2 * math.sqrt(1 + 4 * c1 * c1 * c2 * c2)))
    verdict(
        2,
        "S > 2 at Gisin settings on 10^4 states",
        all_violate and worst <= 1e-12,
        f"all violate = {all_violate}, max |S - 2sqrt(1+4c1^2c2^2)| = {worst:.3e} (tol 1e-12)",
    )


def test_03_bound_adjudication(verdict):
    dominated = True
    printed_fails = 0
    for c1 in C1_GRID:
        c2 = math.sqrt(1 - c1 * c1)
        s_sq = chsh_value(c1, c2, gisin_settings(c1, c2, variant="squared")).s_value
        s_pr = chsh_value(c1, c2, gisin_settings(c1, c2, variant="printed")).s_value
        dominated &= s_sq >= s_pr
        printed_fails += s_pr <= 2
    rows = comparison_rows()
    worst_opt = max(abs(row.s_squared - row.optimizer) for row in rows)
    doc = (ROOT / "docs" / "bound_comparison.md").read_text()
    table_current = markdown_table(rows) in doc
    verdict(
        3,
        "squared x* dominates printed x* and matches optimizer",
        dominated and worst_opt <= 1e-6 and table_current,
        f"dominates = {dominated}, printed variant S <= 2 on {printed_fails} grid points, "
        f"max |S - best_s| = {worst_opt:.3e} (tol 1e-6), docs table current = {table_current}",
    )


def test_04_tsirelson_ceiling(verdict):
    t0 = time.perf_counter()
    bell = maximize_chsh(SQRT1_2, SQRT1_2)
    elapsed = time.perf_counter() - t0
    prod = maximize_chsh(1.0, 0.0)
    ok = abs(bell.best_s - TSIRELSON) <= 1e-6 and abs(prod.best_s - 2) <= 1e-6 and elapsed < 1.0
    verdict(
        4,
        "optimizer reaches 2sqrt2 (Bell) and 2 (product)",
        ok,
        f"bell |d| = {abs(bell.best_s - TSIRELSON):.3e}, product |d| = {abs(prod.best_s - 2):.3e} "
        f"(tol 1e-6), bell runtime {elapsed:.2f}s (< 1s)",
    )


def test_05_lhv_oracle(verdict):
    m = lhv_max_chsh()
    verdict(5, "deterministic LHV maximum", m == 2 and isinstance(m, int), f"max = {m!r}")


def test_06_sign_rule_branch(verdict):
    worst = 0.0
    branch_ok = True
    flipped_max = -math.inf
    for c1 in C1_GRID[::10]:
        c2 = -math.sqrt(1 - c1 * c1)
        ang = gisin_angles(c1, c2)
        branch_ok &= ang.alpha_prime == -math.pi / 2
        s = ang.settings()
        worst = max(worst, abs(chsh_value(c1, c2, s).s_value - gisin_predicted_value(c1, c2)))
        flipped = MeasurementSettings(s.a, BlochVector(1.0, 0.0, s.a_prime.z), s.b, s.b_prime)
        flipped_max = max(flipped_max, chsh_value(c1, c2, flipped).s_value)
    ok = branch_ok and worst <= 1e-12 and flipped_max <= 2
    verdict(
        6,
        "alpha' = -pi/2 for c1c2 < 0; opposite sign never violates",
        ok,
        f"branch = {branch_ok}, max |S - predicted| = {worst:.3e}, max S flipped = {flipped_max:.15f}",
    )


def test_07_appendix_slices(verdict):
    c1, c2 = 0.8, 0.6
    g0 = sweep_slice(c1, c2, "gisin_phi0", 256)
    g1 = sweep_slice(c1, c2, "meridian_phi_half_pi", 256)
    meridian_diff = float(np.max(np.abs(g0.s_values - g1.s_values)))
    details = [f"meridian max |diff| = {meridian_diff:.3e}"]
    ok = meridian_diff <= 1e-12
    for k in (0.5, 0.3, 0.25, 0.1):
        a = math.sqrt((1 + math.sqrt(1 - 4 * k * k)) / 2)
        g = sweep_slice(a, k / a, "equatorial_theta_half_pi", 512)
        err = abs(g.max_s() - 4 * math.sqrt(2) * k)
        expect_violation = k > 1 / (2 * math.sqrt(2))
        ok &= err <= 1e-3 and bool(np.any(g.violated)) == expect_violation
        details.append(f"|c1c2|={k}: |max - 4sqrt2|c1c2|| = {err:.1e}")
    verdict(7, "meridian = phi0 slice; equatorial max = 4sqrt2|c1c2|", ok, ", ".join(details))


def test_08_monte_carlo(verdict):
    t0 = time.perf_counter()
    emp = sample_chsh(SQRT1_2, SQRT1_2, gisin_settings(SQRT1_2, SQRT1_2), 1_000_000, seed=20240611)
    elapsed = time.perf_counter() - t0
    dev = abs(emp.s_estimate - TSIRELSON)
    ok = dev <= 5 * emp.s_standard_error and elapsed < 10
    verdict(
        8,
        "Born-rule sampling at n = 10^6",
        ok,
        f"|S_hat - 2sqrt2| = {dev:.2e} = {dev / emp.s_standard_error:.2f} SE (<= 5), runtime {elapsed:.2f}s",
    )


def test_09_schmidt_machinery(verdict):
    r = np.random.default_rng(9)
    worst_rec = worst_inv = 0.0
    for n1 in range(1, 17):
        for n2 in range(1, 17):
            s = random_state((n1, n2), r)
            d = schmidt_decompose(s)
            worst_rec = max(worst_rec, float(np.linalg.norm(d.reconstruct() - s.vector)))
            moved = BipartiteState.from_vector(
                np.kron(random_unitary(n1, r), random_unitary(n2, r)) @ s.vector, (n1, n2)
            )
            worst_inv = max(
                worst_inv, float(np.max(np.abs(schmidt_decompose(moved).coefficients - d.coefficients)))
            )
    verdict(
        9,
        "Schmidt reconstruction and local-unitary invariance up to 16x16",
        worst_rec <= 1e-9 and worst_inv <= 1e-9,
        f"reconstruction {worst_rec:.1e}, invariance {worst_inv:.1e} (tol 1e-9)",
    )


def test_10_cli_round_trips(verdict, tmp_path, capsys):
    state = tmp_path / "state.json"
    amps = np.array([0.1, 0.7, 0.5j, -0.2])
    cli.write_state_file(state, BipartiteState.from_vector(amps / np.linalg.norm(amps), (2, 2)))

    report_path = tmp_path / "report.json"
    code = cli.main(["analyze", str(state), "--verify-dense", "--out", str(report_path)])
    rep = json.loads(report_path.read_text())
    consistency = abs(cli.recompute_report_s(rep) - rep["s_value"])

    csv_path = tmp_path / "grid.csv"
    cli.main(["sweep", str(state), "--slice", "full", "--resolution", "6", "--out", str(csv_path)])
    header, rows = cli.read_sweep_csv(csv_path)
    c1, c2 = rep["canonical"]["c1"], rep["canonical"]["c2"]
    csv_err = max(
        abs(chsh_value(c1, c2, slice_settings("full", c1, c2, [float(row[f"angle{i}"]) for i in range(1, 5)])).s_value
            - float(row["S"]))
        for row in rows
    )

    outputs = []
    for i in range(2):
        for cmd in (["optimize", "--seed", "42", "--restarts", "4"], ["sample", "--n", "10000", "--seed", "42"]):
            out = tmp_path / f"{cmd[0]}{i}.json"
            cli.main([cmd[0], str(state), *cmd[1:], "--out", str(out)])
            outputs.append(out.read_bytes())
    identical = outputs[0] == outputs[2] and outputs[1] == outputs[3]
    capsys.readouterr()
    ok = code == 0 and consistency <= 1e-14 and csv_err <= 1e-12 and len(rows) == 6**4 and identical
    verdict(
        10,
        "CLI report consistency, sweep CSV re-verification, determinism",
        ok,
        f"report |dS| = {consistency:.1e} (1e-14), csv max |dS| = {csv_err:.1e} (1e-12), "
        f"byte-identical = {identical}",
    )
