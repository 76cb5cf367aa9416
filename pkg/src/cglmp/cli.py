"""Command-line harness: ``report``, ``scan``, ``verify`` and ``dump-matrix``.

Exit codes: 0 success, 1 usage error, 2 solver non-convergence,
3 verification failure.
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from . import bell
from .classical import ENUMERATION_CAP, classical_extremes
from .core import (CapacityError, PhaseSettings, SchmidtState, bell_value_closed_form,
                   bell_value_from_probabilities, classical_bounds)
from .eigen import ConvergenceError, SolverConfig
from .rules import Side, rule_for
from .search import SEARCH_CAP, SearchProblem, search
from .violation import ViolationResult, extremal_eigen, solve_violation

log = logging.getLogger("cglmp")

EXIT_OK, EXIT_USAGE, EXIT_NONCONVERGENCE, EXIT_VERIFY = 0, 1, 2, 3

CSV_HEADER = ["d", "side", "extremal_value", "f_min", "violation_flag", "entropy",
              "entropy_ratio", "iterations", "residual", "wall_time_ms"]


@dataclass
class ScanRecord:
    d: int
    side: str
    extremal_value: float | None
    f_min: float | None
    violation_flag: bool | None
    entropy: float | None
    entropy_ratio: float | None
    iterations: int
    residual: float | None
    wall_time_ms: int
    error: str | None = None

    @classmethod
    def from_result(cls, r: ViolationResult) -> ScanRecord:
        return cls(r.d, r.side.value, r.eigenvalue, r.f_min, r.violation, r.entropy,
                   r.entropy_ratio, r.iterations, r.residual, r.wall_time_ms)

    def csv_row(self) -> list[str]:
        return [_fmt(getattr(self, name)) for name in CSV_HEADER]

    @classmethod
    def from_csv_row(cls, row: dict) -> ScanRecord:
        def num(key, kind=float):
            v = row[key]
            return None if v == "" else kind(v)

        flag = row["violation_flag"]
        return cls(int(row["d"]), row["side"], num("extremal_value"), num("f_min"),
                   None if flag == "" else flag == "true", num("entropy"),
                   num("entropy_ratio"), int(row["iterations"]), num("residual"),
                   int(row["wall_time_ms"]))

    def json_obj(self) -> dict:
        obj = asdict(self)
        if obj["error"] is None:
            del obj["error"]
        return obj


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)  # shortest round-trip form
    return str(v)


def parse_d_spec(spec: str) -> list[int]:
    """``5``, ``2,3,7``, ``2:10`` (inclusive) or ``lo:hi:geometric:n``."""
    spec = spec.strip()
    if "," in spec:
        ds = [int(float(t)) for t in spec.split(",")]
    elif ":" in spec:
        parts = spec.split(":")
        lo, hi = int(float(parts[0])), int(float(parts[1]))
        if len(parts) == 2:
            ds = list(range(lo, hi + 1))
        elif len(parts) == 3:
            ds = list(range(lo, hi + 1, int(parts[2])))
        elif len(parts) == 4 and parts[2] == "geometric":
            n = int(parts[3])
            if n < 2 or lo < 1:
                raise ValueError("geometric grid needs lo >= 1 and at least 2 points")
            ds = sorted({int(round(x)) for x in np.geomspace(lo, hi, n)})
        else:
            raise ValueError(f"bad d range {spec!r}")
    else:
        ds = [int(float(spec))]
    if any(d < 2 for d in ds):
        raise ValueError("every d must be >= 2")
    if any(b <= a for a, b in zip(ds, ds[1:])):
        raise ValueError("d list must be strictly increasing")
    return ds


def _sides(value: str) -> list[Side]:
    return [Side.POSITIVE, Side.NEGATIVE] if value == "both" else [Side.parse(value)]


def _env(name, cast, default):
    raw = os.environ.get(name)
    if raw is None or raw == "":
        return default
    return cast(raw)


def _solver_cfg(args) -> SolverConfig:
    return SolverConfig(tolerance=args.tol, max_iterations=args.max_iters, seed=args.seed)


def _solve_record(d: int, side: Side, args) -> tuple[ScanRecord, ViolationResult | None]:
    t0 = time.perf_counter()
    try:
        r = solve_violation(d, side, _solver_cfg(args), dense_cap=args.dense_cap)
    except ConvergenceError as exc:
        best = exc.best
        ms = int(round((time.perf_counter() - t0) * 1000))
        rec = ScanRecord(d, side.value, best.eigenvalue, None, None, None, None,
                         best.iterations, best.residual, ms, error=str(exc))
        return rec, None
    return ScanRecord.from_result(r), r


def cmd_report(args) -> int:
    d = parse_d_spec(args.d)
    if len(d) != 1:
        raise ValueError("report takes a single d")
    d = d[0]
    status = EXIT_OK
    payload = []
    for side in _sides(args.side):
        rec, res = _solve_record(d, side, args)
        lower, upper = classical_bounds(d)
        bound = upper if side is Side.POSITIVE else lower
        print(f"d = {d}, {side.value} side (classical bound {bound:.10g})")
        if res is None:
            print(f"  solver did not converge: {rec.error}")
            status = EXIT_NONCONVERGENCE
            payload.append(rec.json_obj())
            continue
        print(f"  extremal value   {res.eigenvalue:.12f}")
        print(f"  F_min            {res.f_min:.12f}"
              + ("" if res.violation else "  (no violation)"))
        print(f"  entropy          {res.entropy:.12f} bits")
        print(f"  entropy ratio    {res.entropy_ratio:.12f}")
        print(f"  iterations       {res.iterations}  residual {res.residual:.3e}")
        alphas = res.state.alphas
        shown = ", ".join(f"{a:.6f}" for a in alphas[:8])
        print(f"  Schmidt coeffs   [{shown}{', ...' if d > 8 else ''}]")
        obj = rec.json_obj()
        obj["schmidt"] = alphas.tolist()
        payload.append(obj)
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(payload[0] if len(payload) == 1 else payload, fh, indent=2)
    return status


def _read_existing(path: str, fmt: str) -> list[ScanRecord]:
    if not os.path.exists(path):
        return []
    with open(path, newline="") as fh:
        if fmt == "csv":
            return [ScanRecord.from_csv_row(row) for row in csv.DictReader(fh)]
        return [ScanRecord(**json.loads(line)) for line in fh if line.strip()]


def cmd_scan(args) -> int:
    ds = parse_d_spec(args.d)
    sides = _sides(args.side)
    jobs = [(d, s) for d in ds for s in sides]
    out_path = args.out
    kept = []
    if args.resume:
        if not out_path:
            raise ValueError("--resume needs --out")
        # failed rows are dropped and recomputed
        kept = [r for r in _read_existing(out_path, args.format) if r.violation_flag is not None]
        done = {(r.d, r.side) for r in kept}
        jobs = [(d, s) for d, s in jobs if (d, s.value) not in done]
    appending = bool(kept)
    fh = open(out_path, "w", newline="") if out_path else sys.stdout
    states_fh = None
    if args.states:
        states_path = (out_path + ".states.jsonl") if out_path else "states.jsonl"
        states_fh = open(states_path, "a" if appending else "w")
    writer = csv.writer(fh, lineterminator="\n") if args.format == "csv" else None
    if writer is not None:
        writer.writerow(CSV_HEADER)
    for rec in kept:
        if writer is not None:
            writer.writerow(rec.csv_row())
        else:
            fh.write(json.dumps(rec.json_obj()) + "\n")
    failures = 0
    last_log = time.monotonic()
    try:
        with ThreadPoolExecutor(max_workers=max(1, args.workers)) as pool:
            # map keeps submission order, so rows come out in ascending d
            for (d, side), (rec, res) in zip(jobs, pool.map(lambda job: _solve_record(*job, args), jobs)):
                if rec.error is not None:
                    failures += 1
                    log.error("d=%d %s: %s", d, side.value, rec.error)
                if writer is not None:
                    writer.writerow(rec.csv_row())
                else:
                    fh.write(json.dumps(rec.json_obj()) + "\n")
                fh.flush()
                if states_fh is not None and res is not None:
                    states_fh.write(json.dumps({"d": d, "side": side.value,
                                                "schmidt": res.state.alphas.tolist()}) + "\n")
                now = time.monotonic()
                if now - last_log >= args.log_interval:
                    log.info("d=%d %s iterations=%d residual=%.3e", d, side.value,
                             rec.iterations, rec.residual if rec.residual is not None else math.nan)
                    last_log = now
    finally:
        if fh is not sys.stdout:
            fh.close()
        if states_fh is not None:
            states_fh.close()
    return EXIT_NONCONVERGENCE if failures else EXIT_OK


def check_bounds(d_max: int) -> list[tuple[str, bool, str]]:
    out = []
    for d in range(2, d_max + 1):
        lo, hi, _, _ = classical_extremes(d)
        elo, ehi = classical_bounds(d, exact=True)
        out.append((f"bounds d={d}", (lo, hi) == (elo, ehi), f"enumerated [{lo}, {hi}]"))
    return out


def check_paths(d_max: int, samples: int = 20, tol: float = 1e-9, seed: int = 0) -> list[tuple[str, bool, str]]:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for d in range(2, d_max + 1):
        for _ in range(samples):
            state, phases = SchmidtState.random(d, rng), PhaseSettings.random(d, rng)
            p = bell_value_from_probabilities(state, phases)
            c = bell_value_closed_form(state, phases)
            q = bell.quadratic_form(bell.build(phases), state)
            worst = max(worst, abs(p - c), abs(c - q))
    return [(f"paths d=2..{d_max}", worst < tol, f"max deviation {worst:.2e}")]


def check_rules(d_max: int, restarts: int = 20, tol: float = 1e-6, seed: int = 0) -> list[tuple[str, bool, str]]:
    out = []
    for d in range(2, d_max + 1):
        for side in Side:
            rule_value = extremal_eigen(d, side).eigenvalue
            found = search(SearchProblem(d, side, restarts, seed)).best_value
            excess = found - rule_value if side is Side.POSITIVE else rule_value - found
            out.append((f"rules d={d} {side.value}", excess <= tol,
                        f"rule {rule_value:.12f} search {found:.12f}"))
    return out


def cmd_verify(args) -> int:
    selected = [name for name in ("bounds", "paths", "rules") if getattr(args, name)]
    if not selected:
        selected = ["bounds", "paths", "rules"]
    caps = {"bounds": ENUMERATION_CAP, "rules": SEARCH_CAP}
    results = []
    for name in selected:
        d_max = args.d_max
        if name in caps and d_max > caps[name]:
            raise ValueError(f"--d-max {d_max} exceeds the {name} cap {caps[name]}")
        check = {"bounds": check_bounds, "paths": check_paths, "rules": check_rules}[name]
        results.extend(check(d_max))
    for label, ok, detail in results:
        print(f"{'PASS' if ok else 'FAIL'} {label}: {detail}")
    return EXIT_OK if all(ok for _, ok, _ in results) else EXIT_VERIFY


def cmd_dump_matrix(args) -> int:
    d = parse_d_spec(args.d)
    if len(d) != 1 or d[0] > bell.DUMP_CAP:
        raise ValueError(f"dump-matrix takes a single d <= {bell.DUMP_CAP}")
    side = Side.parse(args.side)
    B = bell.build(rule_for(side, d[0]), representation="dense")
    if args.out:
        with open(args.out, "w") as fh:
            bell.dump_dense(B, fh)
    else:
        bell.dump_dense(B, sys.stdout)
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    solver = argparse.ArgumentParser(add_help=False)
    solver.add_argument("--tol", type=float, default=_env("CGLMP_TOL", float, 1e-10))
    solver.add_argument("--max-iters", type=int, default=1_000_000)
    solver.add_argument("--seed", type=int, default=0)
    solver.add_argument("--dense-cap", type=int,
                        default=_env("CGLMP_DENSE_CAP", int, bell.DEFAULT_DENSE_CAP))
    solver.add_argument("-v", "--verbose", action="store_true")

    p = _Parser(prog="cglmp", description="Maximal quantum violations of the CGLMP inequality.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    r = sub.add_parser("report", parents=[solver], help="single-d report")
    r.add_argument("--d", required=True)
    r.add_argument("--side", choices=["positive", "negative", "both"], default="positive")
    r.add_argument("--out", help="write the report as JSON")
    r.set_defaults(func=cmd_report)

    s = sub.add_parser("scan", parents=[solver], help="dimension scan")
    s.add_argument("--d", required=True, help="5 | 2,3,7 | 2:100 | 2:1e6:geometric:40")
    s.add_argument("--side", choices=["positive", "negative", "both"], default="both")
    s.add_argument("--format", choices=["csv", "jsonl"], default="csv")
    s.add_argument("--out")
    s.add_argument("--states", action="store_true", help="also write Schmidt vectors per d")
    s.add_argument("--workers", type=int, default=_env("CGLMP_WORKERS", int, 1))
    s.add_argument("--resume", action="store_true")
    s.add_argument("--log-interval", type=float, default=10.0, help="seconds between progress lines")
    s.set_defaults(func=cmd_scan)

    v = sub.add_parser("verify", help="independent cross-checks")
    v.add_argument("--bounds", action="store_true")
    v.add_argument("--paths", action="store_true")
    v.add_argument("--rules", action="store_true")
    v.add_argument("--d-max", type=int, default=6)
    v.add_argument("-v", "--verbose", action="store_true")
    v.set_defaults(func=cmd_verify)

    m = sub.add_parser("dump-matrix", help="dense Bell matrix as CSV (d <= 64)")
    m.add_argument("--d", required=True)
    m.add_argument("--side", choices=["positive", "negative"], default="positive")
    m.add_argument("--out")
    m.set_defaults(func=cmd_dump_matrix)
    return p


def main(argv=None) -> int:
    try:
        parser = build_parser()
    except ValueError as exc:  # malformed CGLMP_* environment value
        print(f"cglmp: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    args = parser.parse_args(argv)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s %(message)s"))
    log.handlers[:] = [handler]
    log.setLevel(logging.DEBUG if getattr(args, "verbose", False) else logging.INFO)
    try:
        return args.func(args)
    except (ValueError, CapacityError, OSError) as exc:
        print(f"cglmp: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
