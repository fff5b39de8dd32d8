"""Command-line front end.

Subcommands:
    verify        run the module property suites
    trace-table   numeric vs closed-form peripheral traces on a grid
    surface       sample the tr = -1 surface t(s, theta)
    anosov-scan   empirical verdicts over a coordinate grid
    rep-info      single-representation report as JSON

Grids are given as "lo:hi:n" triples joined by commas, e.g.
``--grid 0:3:20,0:3:20,0:3.1:20`` for (s, t, theta).  All outputs are
deterministic functions of the configuration and seed; CSV files end
with a comment line echoing the configuration hash.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import anosov, charvar, verify
from .errors import GeometryError

_FMT = "%.17g"


def _fmt(x) -> str:
    return _FMT % float(x)


def _parse_axis(spec: str) -> np.ndarray:
    try:
        lo, hi, n = spec.split(":")
        lo, hi, n = float(lo), float(hi), int(n)
    except ValueError as exc:
        raise SystemExit(f"bad axis spec {spec!r}; expected lo:hi:n") from exc
    if n < 1:
        raise SystemExit("axis must have at least one sample")
    return np.linspace(lo, hi, n)


def _parse_grid(spec: str, axes: int) -> list[np.ndarray]:
    parts = spec.split(",")
    if len(parts) != axes:
        raise SystemExit(f"expected {axes} comma-separated axes, got {len(parts)}")
    return [_parse_axis(p) for p in parts]


def _parse_coords(spec: str) -> charvar.Coordinates:
    try:
        s, t, theta = (float(v) for v in spec.split(","))
    except ValueError as exc:
        raise SystemExit(f"bad coordinates {spec!r}; expected s,t,theta") from exc
    return charvar.Coordinates(s, t, theta)


def _config_hash(config: dict) -> str:
    canon = ";".join(f"{k}={config[k]}" for k in sorted(config))
    return hashlib.sha256(canon.encode()).hexdigest()[:12]


def _emit_json_rows(columns, rows, config, out_path) -> None:
    payload = {
        "config_hash": _config_hash(config),
        "rows": [
            {k: (v if isinstance(v, str) else float(v)) for k, v in zip(columns, row)}
            for row in rows
        ],
    }
    _emit([json.dumps(payload, indent=2, sort_keys=True)], out_path)


def _emit(lines: list[str], out_path: str | None) -> None:
    text = "\n".join(lines) + "\n"
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- verify ------------------------------------------------------------------


def cmd_verify(args) -> int:
    results = verify.run_suites(args.filter, args.tol, args.seed)
    if not results:
        print(f"no suite named {args.filter!r}", file=sys.stderr)
        return 2
    if args.format == "json":
        payload = [
            {"suite": r.suite, "name": r.name, "passed": r.passed, "detail": r.detail}
            for r in results
        ]
        print(json.dumps(payload, indent=2))
    else:
        for r in results:
            mark = "ok  " if r.passed else "FAIL"
            print(f"{mark} {r.suite}.{r.name}: {r.detail}")
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return 1 if failed else 0


# -- trace table ---------------------------------------------------------------


def _trace_row(coords: tuple[float, float, float]) -> tuple:
    s, t, theta = coords
    c = charvar.Coordinates(s, t, theta)
    rep = charvar.rep_from_coords(c)
    numeric = charvar.trace_of_word(rep, charvar.BABA)
    closed = float(charvar.trace_baba_closed_form(c))
    return s, t, theta, numeric, closed, abs(numeric - closed)


def _grid_rows(axes: list[np.ndarray]):
    for s in axes[0]:
        for t in axes[1]:
            for theta in axes[2]:
                yield float(s), float(t), float(theta)


def _map_rows(fn, rows, jobs: int):
    if jobs <= 1:
        return [fn(r) for r in rows]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, rows, chunksize=16))


def cmd_trace_table(args) -> int:
    if args.coords:
        c = _parse_coords(args.coords)
        rows = [(c.s, c.t, c.theta)]
    else:
        rows = list(_grid_rows(_parse_grid(args.grid, 3)))
    results = _map_rows(_trace_row, rows, args.jobs)
    config = {"cmd": "trace-table", "grid": args.coords or args.grid}
    columns = ("s", "t", "theta", "tr_baba_numeric", "tr_baba_closed", "residual")
    if args.format == "json":
        _emit_json_rows(columns, results, config, args.out)
    else:
        lines = [",".join(columns)]
        lines.extend(",".join(_fmt(v) for v in row) for row in results)
        lines.append(f"# config={_config_hash(config)}")
        _emit(lines, args.out)
    max_res = max(row[5] for row in results)
    print(f"max residual {max_res:.3e} over {len(results)} rows", file=sys.stderr)
    return 0


# -- surface -----------------------------------------------------------------


def cmd_surface(args) -> int:
    s_axis = _parse_axis(args.s_grid)
    th_axis = _parse_axis(args.theta_grid)
    rows = []
    for s in s_axis:
        for theta in th_axis:
            try:
                t = charvar.schwartz_t(s, theta)
                res = abs(float(charvar.trace_baba_closed_form(s=s, t=t, theta=theta)) + 1.0)
                rows.append((float(s), float(theta), float(t), res, "ok"))
            except GeometryError as exc:
                rows.append((float(s), float(theta), float("nan"), float("nan"),
                             f"error:{exc}"))
    config = {"cmd": "surface", "s_grid": args.s_grid, "theta_grid": args.theta_grid}
    columns = ("s", "theta", "t", "residual", "status")
    if args.format == "json":
        _emit_json_rows(columns, rows, config, args.out)
    else:
        lines = [",".join(columns)]
        for row in rows:
            lines.append(",".join([_fmt(row[0]), _fmt(row[1]), _fmt(row[2]),
                                   _fmt(row[3]), row[4]]))
        lines.append(f"# config={_config_hash(config)}")
        _emit(lines, args.out)
    return 0


# -- anosov scan ---------------------------------------------------------------


def _verdict_row(task) -> tuple:
    s, t, theta, max_len, samples, window, seed = task
    cfg = anosov.VerdictConfig(max_len=max_len, samples=samples, window=window, seed=seed)
    v = anosov.anosov_verdict(charvar.Coordinates(s, t, theta), cfg)
    return (
        s, t, theta, v.verdict,
        v.stats.get("slope_c", float("nan")),
        v.stats.get("min_zeta_angle", float("nan")),
        v.stats.get("min_spacing", float("nan")),
    )


def _write_gap_table(path: str, coords, max_len, samples, seed) -> None:
    rep = charvar.rep_from_coords(charvar.Coordinates(*coords))
    gaps = anosov.cartan_gap_scan(rep, max_len, samples, seed)
    config = {"cmd": "gap-table", "coords": coords, "max_len": max_len,
              "samples": samples, "seed": seed}
    lines = ["word,length,gap12,gap23"]
    for w, n, g12, g23 in zip(gaps.words, gaps.lengths, gaps.gap12, gaps.gap23):
        lines.append(",".join([w, str(int(n)), _fmt(g12), _fmt(g23)]))
    lines.append(f"# config={_config_hash(config)} c={_fmt(gaps.slope_c)}"
                 f" C={_fmt(gaps.intercept_C)}")
    _emit(lines, path)


def cmd_anosov_scan(args) -> int:
    axes = _parse_grid(args.grid, 3)
    tasks = [
        (s, t, theta, args.max_len, args.samples, args.window, args.seed)
        for (s, t, theta) in _grid_rows(axes)
    ]
    if args.gap_table:
        if len(tasks) != 1:
            raise SystemExit("--gap-table needs a single-point grid")
        _write_gap_table(args.gap_table, tasks[0][:3], args.max_len,
                         args.samples, args.seed)
    results = _map_rows(_verdict_row, tasks, args.jobs)
    config = {
        "cmd": "anosov-scan", "grid": args.grid, "max_len": args.max_len,
        "samples": args.samples, "window": args.window, "seed": args.seed,
    }
    columns = ("s", "t", "theta", "verdict", "c", "minangle", "minspacing")
    if args.format == "json":
        _emit_json_rows(columns, results, config, args.out)
    else:
        lines = [",".join(columns)]
        for row in results:
            lines.append(",".join(
                [_fmt(row[0]), _fmt(row[1]), _fmt(row[2]), str(row[3]),
                 _fmt(row[4]), _fmt(row[5]), _fmt(row[6])]
            ))
        lines.append(f"# config={_config_hash(config)}")
        _emit(lines, args.out)
    summary = {
        "config": config,
        "config_hash": _config_hash(config),
        "seed": args.seed,
        "rows": len(results),
        "verdicts": {
            name: sum(1 for r in results if r[3] == name)
            for name in (anosov.EVIDENCE_ANOSOV, anosov.EVIDENCE_DEGENERATE,
                         anosov.INCONCLUSIVE)
        },
    }
    if args.out:
        with open(args.out + ".summary.json", "w", encoding="utf-8") as fh:
            json.dump(summary, fh, indent=2, sort_keys=True)
            fh.write("\n")
    else:
        print(json.dumps(summary, indent=2, sort_keys=True), file=sys.stderr)
    return 0


# -- rep info ------------------------------------------------------------------


def cmd_rep_info(args) -> int:
    c = _parse_coords(args.coords)
    rep = charvar.rep_from_coords(c)
    numeric = charvar.trace_of_word(rep, charvar.BABA)
    closed = float(charvar.trace_baba_closed_form(c))
    symm = charvar.trace_symmetry_check(rep)
    growth = anosov.peripheral_growth(rep, args.peripheral_n)
    info = {
        "coordinates": {"s": c.s, "t": c.t, "theta": c.theta},
        "fuchsian_class": charvar.fuchsian_classify(c, args.tol),
        "trace_baba": {
            "numeric": numeric,
            "closed_form": closed,
            "residual": abs(numeric - closed),
            "symmetry_residual": symm.residual,
        },
        "reducible": charvar.is_reducible(rep),
        "peripheral_growth": {"model": growth.model, "kappa": growth.kappa},
        "surface_t_at_s_theta": float(charvar.schwartz_t(c.s, c.theta)),
    }
    if abs(numeric + 1.0) <= charvar.SURFACE_TOL:
        report = charvar.trace_b2aba_bound_check(rep)
        info["trace_b2aba"] = {
            "numeric": report.numeric_trace,
            "bound_abs": charvar.B2ABA_TRACE_BOUND,
        }
    if args.word:
        # word literals use the alphabet a, b, B (= b^2), e.g. "baBa"
        word = charvar.normalize(args.word)
        try:
            info["trace_word"] = {
                "word": str(word),
                "trace": charvar.trace_of_word(rep, word),
            }
        except GeometryError as exc:
            info["trace_word"] = {"word": str(word), "error": str(exc)}
    text = json.dumps(info, indent=2, sort_keys=True)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0


# -- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="modsym", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run module property suites")
    p.add_argument("--filter", default=None,
                   help="run only this module's suite (symspace, flats, ...)")
    p.add_argument("--tol", type=float, default=None,
                   help="override every check tolerance")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("trace-table", help="peripheral trace table over a grid")
    p.add_argument("--grid", default="0:3:5,0:3:5,0:3:5",
                   help="s,t,theta axes as lo:hi:n triples")
    p.add_argument("--coords", default=None, help="single point s,t,theta")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_trace_table)

    p = sub.add_parser("surface", help="sample the tr = -1 surface")
    p.add_argument("--s-grid", default="0:3:31")
    p.add_argument("--theta-grid", default="0:3.0:31")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_surface)

    p = sub.add_parser("anosov-scan", help="verdict grid scan")
    p.add_argument("--grid", default="0.5:2:4,1:8:4,0.5:0.5:1")
    p.add_argument("--max-len", type=int, default=8, dest="max_len")
    p.add_argument("--samples", type=int, default=20_000)
    p.add_argument("--window", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default=None)
    p.add_argument("--gap-table", default=None, dest="gap_table",
                   help="also write the per-word gap CSV (single-point grids)")
    p.set_defaults(func=cmd_anosov_scan)

    p = sub.add_parser("rep-info", help="single representation report")
    p.add_argument("--coords", required=True, help="s,t,theta")
    p.add_argument("--word", default=None,
                   help="also report the trace of this even word (alphabet a, b, B)")
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--peripheral-n", type=int, default=64, dest="peripheral_n")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_rep_info)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
