"""Command-line front end.

Exit codes: 0 success, 1 input or configuration error, 2 product state
(``analyze`` only; the report is still written).
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from pathlib import Path

import numpy as np

from .chsh import (
    gisin_angles,
    gisin_predicted_value,
    chsh_value,
    report_from_correlations,
)
from .config import DEFAULT_TOLERANCES
from .errors import ChshKitError, ConfigError, NotEntangledError
from .lhv import OUTCOME_LABELS, PAIR_LABELS, all_strategies, lhv_max_chsh, sample_chsh
from .observables import correlation_dense
from .optimizer import maximize_chsh, sweep_slice
from .states import BipartiteState, canonical_vector, leading_pair, schmidt_decompose, to_canonical

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_NOT_ENTANGLED = 2


class StateFileError(ConfigError):
    pass


# -- serialization ----------------------------------------------------------

def format_float(x: float) -> str:
    return format(x, ".17g")


def _encode(obj, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None or isinstance(obj, (bool, np.bool_)):
        return json.dumps(None if obj is None else bool(obj))
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return format_float(x) if math.isfinite(x) else json.dumps(repr(x))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_encode(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in seq):
            return "[" + ", ".join(_encode(v, indent, level + 1) for v in seq) + "]"
        items = [pad + _encode(v, indent, level + 1) for v in seq]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps_report(report: dict) -> str:
    """JSON text with every float written to 17 significant digits.

    Non-finite floats become the strings "inf", "-inf" or "nan".
    """
    return _encode(report, 2, 0) + "\n"


def load_state_file(path, tol: float = DEFAULT_TOLERANCES.state_file) -> BipartiteState:
    """Read ``{"dims": [n1, n2], "amplitudes": [[re, im], ...]}`` (row-major).

    The squared norm must be within ``tol`` of 1; the state is then rescaled
    to unit norm exactly.
    """
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise StateFileError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise StateFileError(f"{path} is not valid JSON: {exc}") from exc
    try:
        n1, n2 = (int(d) for d in doc["dims"])
        pairs = doc["amplitudes"]
        amps = np.array([complex(float(re), float(im)) for re, im in pairs])
    except (KeyError, TypeError, ValueError) as exc:
        raise StateFileError(f"{path}: malformed state file ({exc})") from exc
    if n1 < 1 or n2 < 1 or amps.size != n1 * n2:
        raise StateFileError(f"{path}: {amps.size} amplitudes do not match dims [{n1}, {n2}]")
    if not np.all(np.isfinite(amps)):
        raise StateFileError(f"{path}: non-finite amplitude")
    norm2 = float(np.sum(np.abs(amps) ** 2))
    if abs(norm2 - 1.0) > tol:
        raise StateFileError(f"{path}: squared norm {norm2!r} is not 1 within {tol}")
    return BipartiteState((amps / math.sqrt(norm2)).reshape(n1, n2))


def write_state_file(path, state: BipartiteState) -> None:
    doc = {
        "dims": [state.dim1, state.dim2],
        "amplitudes": [[z.real, z.imag] for z in state.vector],
    }
    Path(path).write_text(dumps_report(doc), encoding="utf-8")


def _vec(n) -> list[float]:
    return list(n.as_tuple())


def _settings_dict(settings) -> dict:
    return {
        "a": _vec(settings.a),
        "a_prime": _vec(settings.a_prime),
        "b": _vec(settings.b),
        "b_prime": _vec(settings.b_prime),
    }


def _correlations_dict(values) -> dict:
    return dict(zip(("p_ab", "p_abp", "p_apb", "p_apbp"), values))


# -- commands -----------------------------------------------------------------

def cmd_analyze(state_path, rank_tolerance: float = DEFAULT_TOLERANCES.rank,
                verify_dense: bool = False) -> tuple[dict, int]:
    state = load_state_file(state_path)
    decomp = schmidt_decompose(state, rank_tolerance)
    report: dict = {
        "command": "analyze",
        "input": {
            "path": str(state_path),
            "dims": [state.dim1, state.dim2],
            "rank_tolerance": rank_tolerance,
            "verify_dense": verify_dense,
        },
        "schmidt": {"coefficients": decomp.coefficients.tolist(), "rank": decomp.rank},
    }
    try:
        canon = to_canonical(state, rank_tolerance)
    except NotEntangledError:
        report.update(
            entangled=False, canonical=None, settings=None, correlations=None,
            s_value=None, violated=False, margin=None, predicted_value=2.0,
        )
        return report, EXIT_NOT_ENTANGLED

    c1, c2 = canon.c1, canon.c2
    angles = gisin_angles(c1, c2)
    settings = angles.settings()
    result = chsh_value(c1, c2, settings)
    report.update(
        entangled=True,
        canonical={"c1": c1, "c2": c2, "retained_weight": canon.weight},
        settings={
            "angles": {
                "alpha": angles.alpha,
                "alpha_prime": angles.alpha_prime,
                "beta": angles.beta,
                "beta_prime": angles.beta_prime,
            },
            "vectors": _settings_dict(settings),
        },
        correlations=_correlations_dict(result.correlations),
        s_value=result.s_value,
        violated=result.violated,
        margin=result.margin,
        predicted_value=gisin_predicted_value(c1, c2),
    )
    if verify_dense:
        v = canonical_vector(c1, c2)
        dense = [correlation_dense(v, a, b) for a, b in settings.pairs()]
        report["dense_check"] = {
            "correlations": _correlations_dict(dense),
            "max_discrepancy": max(abs(x - y) for x, y in zip(result.correlations, dense)),
        }
    return report, EXIT_OK


def cmd_optimize(state_path, restarts: int = 16, seed: int = 0, tol: float = 1e-9,
                 rank_tolerance: float = DEFAULT_TOLERANCES.rank) -> tuple[dict, int]:
    state = load_state_file(state_path)
    c1, c2, weight = leading_pair(state, rank_tolerance)
    opt = maximize_chsh(c1, c2, restarts=restarts, seed=seed, tol=tol)
    best = chsh_value(c1, c2, opt.best_settings)
    report = {
        "command": "optimize",
        "input": {
            "path": str(state_path),
            "dims": [state.dim1, state.dim2],
            "restarts": restarts,
            "seed": seed,
            "tol": tol,
        },
        "canonical": {"c1": c1, "c2": c2, "retained_weight": weight},
        "optimization": {
            "best_s": opt.best_s,
            "angles": list(opt.best_angles.angles),
            "vectors": _settings_dict(opt.best_settings),
            "correlations": _correlations_dict(best.correlations),
            "restarts_used": opt.restarts_used,
            "evaluations": opt.evaluations,
            "converged": opt.converged,
        },
        "predicted_value": gisin_predicted_value(c1, c2),
        "violated": best.violated,
    }
    return report, EXIT_OK


def cmd_sample(state_path, n_per_pair: int, seed: int = 0,
               rank_tolerance: float = DEFAULT_TOLERANCES.rank) -> tuple[dict, int]:
    if n_per_pair < 1:
        raise ConfigError(f"--n must be >= 1, got {n_per_pair}")
    state = load_state_file(state_path)
    c1, c2, weight = leading_pair(state, rank_tolerance)
    settings = gisin_angles(c1, c2, allow_product=True).settings()
    emp = sample_chsh(c1, c2, settings, n_per_pair, seed)
    exact = chsh_value(c1, c2, settings)
    counts = {
        label: dict(zip(OUTCOME_LABELS, (int(c) for c in row)))
        for label, row in zip(PAIR_LABELS, emp.batch.counts)
    }
    report = {
        "command": "sample",
        "input": {"path": str(state_path), "dims": [state.dim1, state.dim2],
                  "n_per_pair": n_per_pair, "seed": seed},
        "canonical": {"c1": c1, "c2": c2, "retained_weight": weight},
        "settings": _settings_dict(settings),
        "counts": counts,
        "correlations": _correlations_dict(emp.correlations),
        "standard_errors": _correlations_dict(emp.standard_errors),
        "s_estimate": emp.s_estimate,
        "s_standard_error": emp.s_standard_error,
        "sigma_margin": emp.sigma_margin,
        "tie": emp.tie,
        "s_exact": exact.s_value,
    }
    return report, EXIT_OK


def cmd_sweep(state_path, slice_id: str, resolution: int, out_csv_path,
              rank_tolerance: float = DEFAULT_TOLERANCES.rank) -> tuple[dict, int]:
    state = load_state_file(state_path)
    c1, c2, _ = leading_pair(state, rank_tolerance)
    grid = sweep_slice(c1, c2, slice_id, resolution)
    write_sweep_csv(out_csv_path, grid)
    summary = {
        "command": "sweep",
        "slice": grid.slice_id,
        "resolution": list(grid.resolution),
        "c1": c1,
        "c2": c2,
        "cells": int(grid.s_values.size),
        "violated_cells": int(np.count_nonzero(grid.violated)),
        "max_s": grid.max_s(),
        "out": str(out_csv_path),
    }
    return summary, EXIT_OK


def sweep_header(naxes: int) -> list[str]:
    return [f"idx{i + 1}" for i in range(naxes)] + [f"angle{i + 1}" for i in range(naxes)] + ["S", "violated"]


def write_sweep_csv(path, grid) -> None:
    """One row per cell in lexicographic index order; LF line endings."""
    try:
        fh = open(path, "w", encoding="utf-8", newline="")
    except OSError as exc:
        raise ConfigError(f"cannot write {path}: {exc}") from exc
    with fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(sweep_header(len(grid.axes)))
        for idx, angles, s, violated in grid.cells():
            writer.writerow([*idx, *(format_float(a) for a in angles), format_float(s), int(violated)])


def read_sweep_csv(path) -> tuple[list[str], list[dict]]:
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        return list(reader.fieldnames or []), list(reader)


def cmd_lhv() -> str:
    lines = ["A,A',B,B',S"]
    for s in all_strategies():
        lines.append(f"{s.a:+d},{s.a_prime:+d},{s.b:+d},{s.b_prime:+d},{s.chsh():+d}")
    lines.append(f"max,{lhv_max_chsh()}")
    return "\n".join(lines) + "\n"


def recompute_report_s(report: dict) -> float:
    """S re-assembled from the correlations listed in an analyze report."""
    c = report["correlations"]
    return report_from_correlations((c["p_ab"], c["p_abp"], c["p_apb"], c["p_apbp"])).s_value


# -- entry point --------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="chshkit", description="CHSH violation analysis for bipartite pure states")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    a = sub.add_parser("analyze", help="Schmidt form, Gisin settings and the CHSH value")
    a.add_argument("state")
    a.add_argument("--rank-tol", type=float, default=DEFAULT_TOLERANCES.rank)
    a.add_argument("--verify-dense", action="store_true")
    a.add_argument("--out")

    o = sub.add_parser("optimize", help="numerical maximum of S over all settings")
    o.add_argument("state")
    o.add_argument("--restarts", type=int, default=16)
    o.add_argument("--seed", type=int, default=0)
    o.add_argument("--tol", type=float, default=1e-9)
    o.add_argument("--out")

    s = sub.add_parser("sweep", help="evaluate S on a parametrization slice, write CSV")
    s.add_argument("state")
    s.add_argument("--slice", required=True,
                   choices=["gisin_phi0", "meridian", "equatorial", "full",
                            "meridian_phi_half_pi", "equatorial_theta_half_pi"])
    s.add_argument("--resolution", type=int, required=True)
    s.add_argument("--out", required=True)

    m = sub.add_parser("sample", help="Monte Carlo Born-rule estimate of S")
    m.add_argument("state")
    m.add_argument("--n", type=int, required=True)
    m.add_argument("--seed", type=int, default=0)
    m.add_argument("--out")

    sub.add_parser("lhv", help="enumerate deterministic local strategies")
    return p


def _emit(text: str, out) -> None:
    if out:
        try:
            Path(out).write_text(text, encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot write {out}: {exc}") from exc
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "lhv":
            sys.stdout.write(cmd_lhv())
            return EXIT_OK
        if args.command == "analyze":
            report, code = cmd_analyze(args.state, args.rank_tol, args.verify_dense)
        elif args.command == "optimize":
            report, code = cmd_optimize(args.state, args.restarts, args.seed, args.tol)
        elif args.command == "sample":
            report, code = cmd_sample(args.state, args.n, args.seed)
        else:
            report, code = cmd_sweep(args.state, args.slice, args.resolution, args.out)
            args.out = None
        _emit(dumps_report(report), args.out)
        return code
    except ChshKitError as exc:
        print(f"chshkit: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
