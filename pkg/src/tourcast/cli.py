"""Command-line interface: ``tourcast {solve,check,sweep,gen,oracle}``.

Exit codes: 0 success, 2 input error, 3 construction failure, 4 oracle cap.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import datetime as dt
import io
import json
import logging
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

from . import sample_dir
from .anneal import SAParams, simulated_annealing
from .construct import PlacementOverflow, construct_initial
from .cost import relaxed_cost
from .constraints import evaluate
from .ingest import (INSTANCE_FILE, GeneratorParams, IngestError, generate_random_instance,
                     load_instance_dir, write_instance_dir)
from .manifest import Cell, ManifestError, RunManifest, load_manifest
from .model import Instance, Penalties, Weekday, Weights, as_tour
from .oracle import EnumerationCapExceeded, brute_force_best
from .report import TourReport, build_report

log = logging.getLogger("tourcast")

EXIT_OK, EXIT_INPUT, EXIT_CONSTRUCT, EXIT_CAP = 0, 2, 3, 4


class InputError(Exception):
    pass


# --- instance and settings resolution -------------------------------------------------


def _start_date_of(directory: Path) -> dt.date | None:
    cfg = configparser.ConfigParser()
    cfg.read(directory / INSTANCE_FILE, encoding="utf-8")
    raw = cfg.get("calendar", "start_date", fallback=None)
    return dt.date.fromisoformat(raw) if raw else None


def _check_start_date(inst: Instance, start_date: dt.date | None) -> dt.date | None:
    if start_date is not None and start_date.weekday() != inst.start_weekday:
        raise InputError(f"start date {start_date} is a {start_date.strftime('%a')}, "
                         f"but the calendar starts on {inst.start_weekday.label}")
    return start_date


def _resolve(args) -> tuple[RunManifest, Instance, dt.date | None]:
    """Combine manifest (if any) with command-line overrides."""
    manifest = load_manifest(args.manifest) if getattr(args, "manifest", None) else None
    if manifest is None:
        manifest = RunManifest(instance_dir=Path(args.instance) if args.instance else None)
    if getattr(args, "instance", None):
        manifest = replace(manifest, instance_dir=Path(args.instance), generator=None)
    if getattr(args, "sample", False):
        manifest = replace(manifest, instance_dir=sample_dir(), generator=None)
    sa = manifest.sa
    if getattr(args, "seed", None) is not None:
        sa = replace(sa, seed=args.seed)
    if getattr(args, "budget", None) is not None:
        sa = replace(sa, time_budget=args.budget, max_moves=None)
    if getattr(args, "moves", None) is not None:
        sa = replace(sa, max_moves=args.moves)
    if getattr(args, "no_restart_reset", False):
        sa = replace(sa, restart_reset=False)
    weights, penalties = manifest.weights, manifest.penalties
    if getattr(args, "weights", None):
        weights = Weights(*_floats(args.weights, 3, "--weights"))
    if getattr(args, "penalties", None):
        penalties = Penalties(*_floats(args.penalties, 5, "--penalties"))
    if getattr(args, "out", None):
        manifest = replace(manifest, output_dir=Path(args.out))
    manifest = replace(manifest, sa=sa, weights=weights.validate(), penalties=penalties)

    start_date = manifest.start_date
    if manifest.instance_dir is not None:
        d = manifest.instance_dir
        if not d.is_dir():
            raise InputError(f"instance directory not found: {d}")
        overrides = {"waitlist_cutoff": manifest.waitlist_cutoff, "travel_limit": manifest.travel_limit}
        inst = load_instance_dir(d, **overrides)
        start_date = start_date or _start_date_of(d)
    elif manifest.generator is not None:
        inst = generate_random_instance(manifest.generator, manifest.generator_seed)
    else:
        raise InputError("no instance: pass --instance DIR, --sample, or a manifest")
    if getattr(args, "start_date", None):
        try:
            start_date = dt.date.fromisoformat(args.start_date)
        except ValueError:
            raise InputError(f"bad --start-date {args.start_date!r}") from None
    elif not getattr(args, "real_dates", True):
        start_date = None
    return manifest, inst, _check_start_date(inst, start_date)


def _floats(text: str, count: int, flag: str) -> list[float]:
    try:
        vals = [float(x) for x in text.split(",")]
    except ValueError:
        raise InputError(f"{flag}: expected {count} comma-separated numbers") from None
    if len(vals) != count:
        raise InputError(f"{flag}: expected {count} values, got {len(vals)}")
    return vals


# --- solving ------------------------------------------------------------------------


@dataclass
class SolveOutcome:
    cell: str
    best: tuple[int, ...]
    best_cost: float
    initial: tuple[int, ...]
    initial_cost: float
    miles: int
    good: int
    bad: int
    violations: tuple[int, ...]
    runtime: float
    moves: int


def solve_cell(inst: Instance, cell: Cell, break_limit: int, out_dir: Path | None,
               start_date: dt.date | None) -> SolveOutcome:
    clock = time.perf_counter()
    initial = construct_initial(inst, cell.sa.seed, break_limit=break_limit)
    best, trace = simulated_annealing(inst, initial, cell.weights, cell.penalties, cell.sa, break_limit=break_limit)
    runtime = time.perf_counter() - clock
    ev_best = evaluate(best, inst, break_limit, record=False)
    ev_init = evaluate(initial, inst, break_limit, record=False)
    best_cost = relaxed_cost(ev_best, cell.weights, cell.penalties).total
    init_cost = relaxed_cost(ev_init, cell.weights, cell.penalties).total
    if out_dir is not None:
        build_report(best, inst, title=f"Best tour ({cell.name})", break_limit=break_limit,
                     start_date=start_date, cost=best_cost).write(out_dir / "best")
        build_report(initial, inst, title=f"Initial tour ({cell.name})", break_limit=break_limit,
                     start_date=start_date, cost=init_cost).write(out_dir / "initial")
        with open(out_dir / "trace.jsonl", "w", encoding="utf-8") as fh:
            header = {"rng": trace.rng_algorithm, "seed": trace.seed, "moves": trace.moves,
                      "accepted": trace.accepted, "stages_per_restart": trace.stages_per_restart,
                      "stopped_by_clock": trace.stopped_by_clock}
            fh.write(json.dumps(header) + "\n")
            for row in trace.to_rows():
                fh.write(json.dumps(row) + "\n")
    o = ev_best.objectives
    return SolveOutcome(cell.name, best, best_cost, initial, init_cost, o.total_miles, o.good_days,
                        o.bad_days, ev_best.violations.counts, runtime, trace.moves)


def cmd_solve(args) -> int:
    manifest, inst, start_date = _resolve(args)
    out = manifest.output_dir
    res = solve_cell(inst, manifest.base_cell(), manifest.break_limit, out, start_date)
    sys.stdout.write((out / "best.txt").read_text(encoding="utf-8"))
    log.info("initial cost %.1f -> best cost %.1f in %.1fs (%d moves); reports in %s",
             res.initial_cost, res.best_cost, res.runtime, res.moves, out)
    return EXIT_OK


def cmd_check(args) -> int:
    manifest, inst, start_date = _resolve(args)
    if args.tour:
        text = args.tour
    else:
        p = Path(args.tour_file)
        if not p.is_file():
            raise InputError(f"tour file not found: {p}")
        text = p.read_text(encoding="utf-8")
    text = text.strip().strip("[]")
    try:
        values = [int(x) for x in text.replace("\n", ",").split(",") if x.strip()]
        tour = as_tour(values, inst)
    except ValueError as exc:
        raise InputError(f"bad tour: {exc}") from None
    cost = relaxed_cost(evaluate(tour, inst, manifest.break_limit), manifest.weights, manifest.penalties).total
    report = build_report(tour, inst, title="Checked tour", break_limit=manifest.break_limit,
                          start_date=start_date, cost=cost)
    if not report.complete:
        log.warning("tour is not complete: duplicates %s, missing %s", report.duplicates, report.missing)
    sys.stdout.write(report.render())
    if args.json:
        Path(args.json).write_text(json.dumps(report.to_json(), indent=2) + "\n", encoding="utf-8")
    return EXIT_OK


def _sweep_worker(payload):
    inst, cell, break_limit, out_dir, start_date = payload
    try:
        return solve_cell(inst, cell, break_limit, out_dir, start_date), None
    except Exception as exc:  # reported per row
        return None, f"{type(exc).__name__}: {exc}"


def pareto_flags(points: list[tuple[int, int, int] | None]) -> list[bool | None]:
    """For (miles, good, bad) triples: True if no other point dominates it."""
    flags = []
    for a in points:
        if a is None:
            flags.append(None)
            continue
        dominated = any(
            b is not None and b[0] <= a[0] and b[1] >= a[1] and b[2] <= a[2] and b != a
            for b in points
        )
        flags.append(not dominated)
    return flags


SWEEP_COLUMNS = ["cell", "w_mile", "w_good", "w_bad", "p_avail1", "p_avail2", "p_break", "p_sep1", "p_sep2",
                 "t0", "iters_per_temp", "alpha", "seed", "best_cost", "miles", "good", "bad",
                 "y1", "y2", "y3", "y4", "y5", "runtime_s", "pareto", "status"]


def run_sweep(inst: Instance, cells, break_limit: int, out_dir: Path | None, start_date, jobs: int = 1):
    payloads = [(inst, c, break_limit, out_dir / f"cell-{c.name}" if out_dir else None, start_date) for c in cells]
    if jobs > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_sweep_worker, payloads))
    else:
        results = [_sweep_worker(p) for p in payloads]
    flags = pareto_flags([(r.miles, r.good, r.bad) if r else None for r, _ in results])
    rows = []
    for cell, (res, err), flag in zip(cells, results, flags):
        w, p, sa = cell.weights, cell.penalties, cell.sa
        row = dict(cell=cell.name, w_mile=w.w_mile, w_good=w.w_good, w_bad=w.w_bad,
                   p_avail1=p.p_avail1, p_avail2=p.p_avail2, p_break=p.p_break, p_sep1=p.p_sep1, p_sep2=p.p_sep2,
                   t0=sa.t0, iters_per_temp=sa.iters_per_temp, alpha=sa.alpha, seed=sa.seed)
        if res is None:
            row.update(best_cost="", miles="", good="", bad="", y1="", y2="", y3="", y4="", y5="",
                       runtime_s="", pareto="", status=err)
        else:
            row.update(best_cost=res.best_cost, miles=res.miles, good=res.good, bad=res.bad,
                       **{f"y{k + 1}": v for k, v in enumerate(res.violations)},
                       runtime_s=round(res.runtime, 2), pareto="yes" if flag else "dominated", status="ok")
        rows.append(row)
    return rows


def format_table(rows) -> str:
    cols = ["cell", "w_mile", "w_good", "w_bad", "best_cost", "miles", "good", "bad",
            "y1", "y2", "y3", "y4", "y5", "runtime_s", "pareto", "status"]
    cells = [[_fmt(r[c]) for c in cols] for r in rows]
    widths = [max(len(c), *(len(row[k]) for row in cells)) for k, c in enumerate(cols)]
    lines = ["  ".join(c.rjust(wd) for c, wd in zip(cols, widths))]
    lines += ["  ".join(v.rjust(wd) for v, wd in zip(row, widths)) for row in cells]
    return "\n".join(lines) + "\n"


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:g}" if abs(v) < 1e7 else f"{v:.6g}"
    return str(v)


def cmd_sweep(args) -> int:
    manifest, inst, start_date = _resolve(args)
    cells = list(manifest.cells) or [manifest.base_cell()]
    if args.seed is not None or args.budget is not None or args.moves is not None:
        cells = [replace(c, sa=_override_sa(c.sa, args)) for c in cells]
    out = manifest.output_dir
    rows = run_sweep(inst, cells, manifest.break_limit, out, start_date, jobs=args.jobs)
    out.mkdir(parents=True, exist_ok=True)
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=SWEEP_COLUMNS)
    w.writeheader()
    w.writerows(rows)
    (out / "sweep.csv").write_text(buf.getvalue(), encoding="utf-8")
    table = format_table(rows)
    (out / "sweep.txt").write_text(table, encoding="utf-8")
    sys.stdout.write(table)
    return EXIT_OK


def _override_sa(sa: SAParams, args) -> SAParams:
    if args.seed is not None:
        sa = replace(sa, seed=args.seed)
    if args.budget is not None:
        sa = replace(sa, time_budget=args.budget, max_moves=None)
    if args.moves is not None:
        sa = replace(sa, max_moves=args.moves)
    return sa


def cmd_gen(args) -> int:
    try:
        params = GeneratorParams(
            num_cities=args.cities, num_days=args.days, start_weekday=Weekday.parse(args.start_weekday),
            p_available=args.p_available, p_relative=args.p_relative,
            mile_range=(args.mile_lo, args.mile_hi), travel_limit=args.travel_limit,
            symmetric_days=args.symmetric_days,
        )
    except ValueError as exc:
        raise InputError(str(exc)) from None
    inst = generate_random_instance(params, args.seed)
    out = Path(args.out)
    try:
        write_instance_dir(inst, out, seed=args.seed)
    except OSError as exc:
        raise InputError(f"cannot write {out}: {exc}") from None
    print(f"wrote {inst.num_cities} cities x {inst.num_days} days to {out}")
    return EXIT_OK


def cmd_oracle(args) -> int:
    manifest, inst, _ = _resolve(args)
    res = brute_force_best(inst, manifest.weights, manifest.penalties, manifest.break_limit)
    ev = evaluate(res.best_tour, inst, manifest.break_limit)
    print("Optimal tour: [" + ", ".join(map(str, res.best_tour)) + "]")
    print(f"Relaxed cost: {res.best_cost:.1f}")
    print(f"Tours enumerated: {res.num_enumerated}")
    print(f"Optimal ties: {res.ties}")
    print(f"Violations: {list(ev.violations.counts)}")
    return EXIT_OK


# --- argument parsing ---------------------------------------------------------------


def _add_instance_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--instance", metavar="DIR", help="instance directory (availability.csv, miles.csv, instance.ini)")
    p.add_argument("--sample", action="store_true", help="use the bundled 15-city, 42-day sample instance")
    p.add_argument("--manifest", metavar="FILE", help="run manifest (INI)")
    p.add_argument("--weights", metavar="MILE,GOOD,BAD", help="objective weights, e.g. 20,-200,200")
    p.add_argument("--penalties", metavar="A1,A2,B,S1,S2", help="violation penalties")
    p.add_argument("--start-date", metavar="YYYY-MM-DD", help="render calendar dates in schedules")
    p.add_argument("--day-offsets", dest="real_dates", action="store_false",
                   help="render 'Thu, day 10' even when the instance has a start date")


def _add_sa_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, help="RNG seed for construction and annealing")
    p.add_argument("--budget", type=float, metavar="SECONDS", help="time budget (converted to a move budget)")
    p.add_argument("--moves", type=int, help="explicit move budget, overrides --budget")
    p.add_argument("--no-restart-reset", action="store_true",
                   help="continue from the current tour at each restart instead of the initial one")
    p.add_argument("--out", metavar="DIR", help="output directory")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tourcast", description="Concert tour scheduling by simulated annealing.")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="construct an initial tour and anneal it")
    _add_instance_args(p)
    _add_sa_args(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("check", help="evaluate a given tour vector")
    _add_instance_args(p)
    p.add_argument("tour_file", nargs="?", help="file with one line of comma-separated city codes")
    p.add_argument("--tour", help="tour vector inline, e.g. 0,1,0,2")
    p.add_argument("--json", metavar="FILE", help="also write the report as JSON")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("sweep", help="solve every [cell ...] of a manifest and tabulate")
    _add_instance_args(p)
    _add_sa_args(p)
    p.add_argument("--jobs", type=int, default=1, help="cells solved in parallel")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("gen", help="write a random instance")
    p.add_argument("--out", required=True, metavar="DIR")
    p.add_argument("--cities", type=int, default=15)
    p.add_argument("--days", type=int, default=42)
    p.add_argument("--start-weekday", default="mon", choices=[d.name.lower() for d in Weekday])
    p.add_argument("--p-available", type=float, default=GeneratorParams.p_available)
    p.add_argument("--p-relative", type=float, default=GeneratorParams.p_relative)
    p.add_argument("--mile-lo", type=int, default=GeneratorParams.mile_range[0])
    p.add_argument("--mile-hi", type=int, default=GeneratorParams.mile_range[1])
    p.add_argument("--travel-limit", type=int, default=500)
    p.add_argument("--symmetric-days", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("oracle", help="exhaustively solve a tiny instance")
    _add_instance_args(p)
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2),
                        format="%(levelname)s %(name)s: %(message)s")
    if args.command == "check" and not (args.tour or args.tour_file):
        parser.error("check needs a tour file or --tour")
    try:
        return args.func(args)
    except (InputError, IngestError, ManifestError) as exc:
        print(f"tourcast: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except PlacementOverflow as exc:
        print(f"tourcast: construction failed: {exc}", file=sys.stderr)
        return EXIT_CONSTRUCT
    except EnumerationCapExceeded as exc:
        print(f"tourcast: {exc}", file=sys.stderr)
        return EXIT_CAP


if __name__ == "__main__":
    sys.exit(main())
