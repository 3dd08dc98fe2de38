"""Command-line front end: ``bdconvex analyze | sweep | verify``.

Exit codes: 0 ok, 1 a verification check failed, 2 unreadable input,
3 invalid or inapplicable state, 4 bad numeric range.
"""

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from bdconvex.bdstate import (
    BDState,
    bd_from_probs,
    classify,
    concurrence,
    probs_to_tvec,
    state_from_json,
)
from bdconvex.convex.programs import lsd_as_sdp, lsd_lp_over_separable
from bdconvex.convex.sdp import check_slackness, solve_sdp
from bdconvex.errors import (
    BDConvexError,
    InvalidStateError,
    NotEntangledError,
    OutOfRangeError,
    StateFormatError,
)
from bdconvex.lsd import optimal_lsd, residual_check
from bdconvex.oracle import MAX_STEP, MIN_STEP, grid_max_lambda, grid_min_ree
from bdconvex.relent import EntropyProblem, kkt_report, min_relative_entropy, ree_bd
from bdconvex.sampling import random_entangled

EXIT_OK, EXIT_FAILED, EXIT_PARSE, EXIT_STATE, EXIT_RANGE = 0, 1, 2, 3, 4
SIGNIFICANT = 15
COINCIDENCE_TOL = 1e-12
DEFAULT_SEED = 42
BATCH_SIZE = 25

SWEEP_HEADER = ["p1", "lambda", "ree_bits", "concurrence", "w1", "w2", "w3", "w4"]

TOLERANCES = {
    "sdp_lambda": 1e-6,
    "lp_lambda": 1e-8,
    "kkt_ree": 1e-9,
    "slackness": 1e-6,
    "residual_purity": 1e-12,
    "random_batch": 1e-8,
}


def fmt(v) -> Optional[float]:
    """Round to 15 significant digits; non-finite values become None."""
    v = float(v)
    if not math.isfinite(v):
        return None
    return float(f"{v:.{SIGNIFICANT}g}") + 0.0


def _vec(a) -> list:
    return [fmt(v) for v in a]


# -- analyze --------------------------------------------------------------

def cmd_analyze(state: BDState) -> dict:
    """Classification, geometry, optimal decomposition and REE of one state."""
    d = optimal_lsd(state)
    r = ree_bd(state)
    coincide = bool(np.max(np.abs(r.closest_state.p - d.separable.p)) <= COINCIDENCE_TOL)
    return {
        "p": _vec(state.p),
        "classification": str(classify(state)),
        "t": _vec(probs_to_tvec(state).as_array()),
        "concurrence": fmt(concurrence(state)),
        "lsd": {
            "lambda": fmt(d.lam),
            "separable": _vec(d.separable.p),
            "pure_index": d.entangled_index,
            "pure_weight": fmt(d.entangled_weight),
        },
        "ree": {
            "value_bits": fmt(r.value),
            "infinite": r.infinite,
            "closest_state": _vec(r.closest_state.p),
            "multiplier": fmt(r.multiplier),
        },
        "coincidence": coincide,
    }


# -- sweep ----------------------------------------------------------------

@dataclass(frozen=True)
class SweepRow:
    p1: float
    lam: float
    ree_bits: float
    concurrence: float
    closest_state: tuple

    def as_list(self) -> list:
        return [self.p1, self.lam, self.ree_bits, self.concurrence, *self.closest_state]


def cmd_sweep(p1_min: float, p1_max: float, steps: int) -> List[SweepRow]:
    """Closed-form LSD weight and REE along ``p = (p1, r, r, r)``.

    Raises
    ------
    OutOfRangeError
        Unless ``1/2 < p1_min < p1_max < 1`` and ``steps >= 2``.
    """
    if not (0.5 < p1_min < p1_max < 1.0) or steps < 2:
        raise OutOfRangeError(
            f"need 1/2 < p1_min < p1_max < 1 and steps >= 2, got {p1_min}, {p1_max}, {steps}"
        )
    rows = []
    for p1 in np.linspace(p1_min, p1_max, steps):
        rest = (1.0 - p1) / 3.0
        s = bd_from_probs([p1, rest, rest, rest])
        r = ree_bd(s)
        rows.append(SweepRow(float(p1), optimal_lsd(s).lam, r.value, r.concurrence,
                             tuple(float(v) for v in r.closest_state.p)))
    return rows


# -- verify ---------------------------------------------------------------

def _check(name, residual, tol=None, passed=None):
    tol = TOLERANCES[name] if tol is None else tol
    if passed is None:
        passed = bool(residual <= tol)
    return {"name": name, "passed": passed, "residual": fmt(residual), "tolerance": fmt(tol)}


def _kkt_residual(state, r):
    """KKT violation of the closed-form REE optimum, on the support of p."""
    support = state.p > 0.0
    k = classify(state).index - 1
    idx = int(np.sum(support[:k]))
    A = np.zeros((1, int(support.sum())))
    A[0, idx] = 1.0
    prob = EntropyProblem(q=state.p[support], A=A, b=[0.5])
    return kkt_report(prob, r.closest_state.p[support], [r.multiplier]).max_violation


def _batch_residual(seed):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for s in random_entangled(rng, BATCH_SIZE):
        exact = 2.0 * (1.0 - s.p_max)
        lam, sigma = lsd_lp_over_separable(s)
        k = s.dominant
        A = np.zeros((1, 4))
        A[0, k - 1] = 1.0
        w, _, _ = min_relative_entropy(EntropyProblem(q=s.p, A=A, b=[0.5]))
        worst = max(worst, abs(lam - exact), float(np.max(np.abs(w - sigma.p))))
    return worst


def cmd_verify(state: BDState, level: str = "quick", step: float = 1e-3,
               seed: int = DEFAULT_SEED) -> dict:
    """Cross-check the closed forms against solvers and oracles.

    Raises
    ------
    NotEntangledError
        ``state`` is separable.
    OutOfRangeError
        ``step`` outside the oracle range (full level only).
    """
    if not classify(state).is_entangled:
        raise NotEntangledError(f"state {state.p.tolist()} is not entangled")
    if level == "full" and not MIN_STEP <= step <= MAX_STEP:
        raise OutOfRangeError(f"step {step!r} outside [{MIN_STEP}, {MAX_STEP}]")
    d = optimal_lsd(state)
    r = ree_bd(state)
    checks = []

    prob = lsd_as_sdp(state, d.separable)
    sol = solve_sdp(prob)
    checks.append(_check("sdp_lambda", abs(sol.x[0] - d.lam)))
    lam_lp, _ = lsd_lp_over_separable(state)
    checks.append(_check("lp_lambda", abs(lam_lp - d.lam)))
    if r.infinite:
        checks.append({"name": "kkt_ree", "passed": True, "residual": None,
                       "tolerance": fmt(TOLERANCES["kkt_ree"]), "skipped": "infinite REE"})
    else:
        checks.append(_check("kkt_ree", _kkt_residual(state, r)))
    Fx = prob.F(sol.x)
    slack = max(float(np.max(np.abs(Fx @ sol.Z))), float(np.max(np.abs(sol.Z @ Fx))))
    checks.append(_check("slackness", slack,
                         passed=check_slackness(Fx, sol.Z, TOLERANCES["slackness"])))
    checks.append(_check("residual_purity", abs(residual_check(state, d))))

    if level == "full":
        g = grid_min_ree(state, step)
        if r.infinite:
            checks.append({"name": "grid_min_ree", "passed": True, "residual": None,
                           "tolerance": fmt(3 * step), "skipped": "infinite REE"})
        else:
            checks.append(_check("grid_min_ree", abs(g.value - r.value), 3 * step))
        g = grid_max_lambda(state, step)
        checks.append(_check("grid_max_lambda", abs(g.value - d.lam), 3 * step))
        checks.append(_check("random_batch", _batch_residual(seed)))

    failed = [c["name"] for c in checks if not c["passed"]]
    return {
        "p": _vec(state.p),
        "level": level,
        "seed": seed,
        "checks": checks,
        "passed": not failed,
        "failed": failed,
    }


# -- plumbing -------------------------------------------------------------

def _read_state(source: str) -> BDState:
    if source == "-":
        text = sys.stdin.read()
    else:
        with open(source, encoding="utf-8") as fh:
            text = fh.read()
    return state_from_json(json.loads(text))


def _dump_json(obj, out):
    out.write(json.dumps(obj, indent=2))
    out.write("\n")


def _dump_csv(rows, out):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_HEADER)
    for row in rows:
        writer.writerow(["" if v is None else repr(v) for v in (fmt(x) for x in row)])
    out.write(buf.getvalue())


def _seed() -> int:
    raw = os.environ.get("BDCONVEX_SEED", "")
    try:
        return int(raw) if raw.strip() else DEFAULT_SEED
    except ValueError:
        raise StateFormatError(f"BDCONVEX_SEED={raw!r} is not an integer") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bdconvex",
        description="Optimal decomposition and relative entropy of entanglement "
                    "for Bell-diagonal two-qubit states.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="report on a single state")
    a.add_argument("--state", default="-", help="JSON file with {\"p\": [...]} or {\"t\": [...]}; - for stdin")
    a.add_argument("--format", choices=["json", "csv"], default="json")

    s = sub.add_parser("sweep", help="tabulate p = (p1, r, r, r) over a range of p1")
    s.add_argument("--p1-min", type=float, required=True)
    s.add_argument("--p1-max", type=float, required=True)
    s.add_argument("--steps", type=int, required=True)
    s.add_argument("--format", choices=["json", "csv"], default="csv")

    v = sub.add_parser("verify", help="cross-check closed forms against solvers")
    v.add_argument("--state", default="-")
    v.add_argument("--level", choices=["quick", "full"], default="quick")
    v.add_argument("--step", type=float, default=1e-3, help="oracle lattice step (full level)")
    return parser


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and EXIT_PARSE

    try:
        if args.command == "sweep":
            rows = cmd_sweep(args.p1_min, args.p1_max, args.steps)
            if args.format == "csv":
                _dump_csv([r.as_list() for r in rows], stdout)
            else:
                _dump_json([dict(zip(SWEEP_HEADER, _vec(r.as_list()))) for r in rows], stdout)
            return EXIT_OK

        state = _read_state(args.state)
        if args.command == "analyze":
            report = cmd_analyze(state)
            if args.format == "csv":
                r = ree_bd(state)
                _dump_csv([[state.p[0], report["lsd"]["lambda"], r.value, r.concurrence,
                            *r.closest_state.p]], stdout)
            else:
                _dump_json(report, stdout)
            return EXIT_OK

        report = cmd_verify(state, args.level, args.step, _seed())
        _dump_json(report, stdout)
        if not report["passed"]:
            stderr.write("failed checks: " + ", ".join(report["failed"]) + "\n")
            return EXIT_FAILED
        return EXIT_OK
    except (OSError, json.JSONDecodeError, StateFormatError) as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_PARSE
    except (InvalidStateError, NotEntangledError) as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_STATE
    except OutOfRangeError as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_RANGE
    except BDConvexError as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
