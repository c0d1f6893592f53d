"""Command-line front end: ``markovtensor <command> --input edges.txt [options]``.

Exit codes: 0 success, 1 invalid input, 2 numerical or consistency failure.
"""

from __future__ import annotations

import argparse
import contextlib
import io
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from threadpoolctl import threadpool_limits

from . import centrality, influence, metrics, reachability, relations, simulate
from .errors import MarkovTensorError, NumericalError, ValidationError
from .fundamental import fundamental_matrix, fundamental_tensor, normalize_tensor
from .graph import Graph, extend_graph, load_graph, read_graph, transition_matrix

OUTPUT_DIR_ENV = "MARKOVTENSOR_OUTPUT_DIR"
COMMANDS = ("tensor", "hitting", "commute", "kirchhoff", "centrality", "articulation", "load",
            "influence", "reach", "simulate", "relations")
CSV_DEFAULT = {"tensor", "reach"}
DIGITS = 12
ZERO_RTOL = 1e-12


@dataclass(frozen=True)
class RunConfig:
    command: str
    input: str
    directed: bool = True
    weighted: bool = False
    beta: float = 1.0
    format: str = "json"
    seed: int = 0
    threads: int | None = None
    output_dir: str | None = None
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.beta <= 0:
            raise ValidationError("--beta must be positive", module="cli")
        if self.threads is not None and self.threads < 1:
            raise ValidationError("--threads must be at least 1", module="cli")
        if self.format not in ("json", "csv"):
            raise ValidationError(f"unknown format {self.format!r}", module="cli")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _ids(text: str | None) -> list[str]:
    return [v for v in (text or "").split(",") if v]


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--input", required=True, help="edge list: src dst [weight [cost]] per line, '-' for stdin")
    d = common.add_mutually_exclusive_group()
    d.add_argument("--directed", dest="directed", action="store_true", default=True)
    d.add_argument("--undirected", dest="directed", action="store_false")
    common.add_argument("--weighted", action="store_true", help="read the third column as edge weight")
    common.add_argument("--beta", type=float, default=1.0, help="weight of each node's edge to the exogenous node")
    common.add_argument("--format", choices=("json", "csv"), help="output format")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=int, help="cap on BLAS and worker threads")
    common.add_argument("--output-dir", default=os.environ.get(OUTPUT_DIR_ENV),
                        help=f"write <command>.<format> here instead of stdout (default ${OUTPUT_DIR_ENV})")

    parser = _Parser(prog="markovtensor", description="Fundamental-tensor metrics for random walks on graphs.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, help_):
        return sub.add_parser(name, parents=[common], help=help_, description=help_)

    p = add("tensor", "nonzero entries of F[s, m, t] (or the normalized tensor) as CSV")
    p.add_argument("--normalized", action="store_true")
    p.add_argument("--npy", help="also save the dense [s, m, t] array to this .npy path")

    p = add("hitting", "hitting times and costs; all pairs, or to a target set")
    p.add_argument("--targets", help="comma-separated target ids")

    add("commute", "commute times (and costs when the input has a cost column)")
    add("kirchhoff", "Kirchhoff index with its three cross-checked routes")
    add("centrality", "random-walk closeness, betweenness and Load per node")

    p = add("articulation", "source/target pairs that every walk must pass through m to connect")
    p.add_argument("--eps", type=float, default=centrality.ARTICULATION_EPS)

    add("load", "Load(m) sorted by value, with the peak-to-mean skew")

    p = add("influence", "seed selection on the graph with an exogenous node")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--method", choices=influence.METHODS, default="c2greedy")

    p = add("reach", "reachability queries, optionally with failed nodes")
    p.add_argument("--query", nargs=2, metavar=("S", "T"))
    p.add_argument("--failed", help="comma-separated failed node ids")
    p.add_argument("--batch", help="file of 's t [f1,f2,...]' lines")
    p.add_argument("--dump-oracle", action="store_true", help="write F^o as CSV")

    p = add("simulate", "Monte-Carlo estimates of visits, hitting time/cost and absorption")
    p.add_argument("--start", required=True)
    p.add_argument("--targets", required=True)
    p.add_argument("--walks", type=int, default=100_000)
    p.add_argument("--max-steps", type=int, default=10**6)

    p = add("relations", "audit the identities and inequalities between metrics (small graphs)")
    p.add_argument("--max-n", type=int, default=relations.DEFAULT_MAX_N)
    return parser


def _config(args) -> RunConfig:
    base = {"command", "input", "directed", "weighted", "beta", "format", "seed", "threads", "output_dir"}
    fmt = args.format or ("csv" if args.command in CSV_DEFAULT else "json")
    params = {k: v for k, v in vars(args).items() if k not in base}
    return RunConfig(args.command, args.input, args.directed, args.weighted, args.beta, fmt,
                     args.seed, args.threads, args.output_dir, params)


# -- output helpers ---------------------------------------------------------------

def _num(x) -> float | None:
    """Round to DIGITS significant digits so outputs do not carry round-off noise."""
    x = float(x)
    return float(f"{x:.{DIGITS}g}") if np.isfinite(x) else None


def _clean(obj):
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (float, np.floating)):
        return _num(obj)
    return obj


def _cell(v) -> str:
    if isinstance(v, str):
        return v
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.{DIGITS}g}"
    return str(v)


def _matrix_csv(nodes, rows, m) -> str:
    out = io.StringIO()
    out.write("," + ",".join(nodes) + "\n")
    for name, row in zip(rows, m):
        out.write(name + "," + ",".join(_cell(float(v)) for v in row) + "\n")
    return out.getvalue()


def _records_csv(header, rows) -> str:
    lines = [",".join(header)]
    lines += [",".join(_cell(v) for v in r) for r in rows]
    return "\n".join(lines) + "\n"


def _json(obj) -> str:
    return json.dumps(_clean(obj), indent=2) + "\n"


# -- commands ------------------------------------------------------------------------

def _load(cfg: RunConfig) -> Graph:
    if cfg.input == "-":
        return load_graph(sys.stdin.read(), directed=cfg.directed, weighted=cfg.weighted)
    if not Path(cfg.input).is_file():
        raise ValidationError(f"input file {cfg.input!r} not found", module="cli")
    return read_graph(cfg.input, directed=cfg.directed, weighted=cfg.weighted)


def _tensor(g: Graph):
    return fundamental_tensor(transition_matrix(g).with_stationary())


def cmd_tensor(g, cfg):
    f = _tensor(g)
    src = normalize_tensor(f) if cfg.params["normalized"] else f
    if cfg.params.get("npy"):
        np.save(cfg.params["npy"], src.values)
    rows = []
    scale = max(np.abs(sl).max() for _, sl in src.slices())
    for t, sl in src.slices():
        for s, m in zip(*np.nonzero(np.abs(sl) > ZERO_RTOL * scale)):
            rows.append((g.nodes[s], g.nodes[m], g.nodes[t], float(sl[s, m])))
    rows.sort(key=lambda r: (g.index[r[2]], g.index[r[0]], g.index[r[1]]))
    if cfg.format == "csv":
        return _records_csv(("source", "medial", "target", "value"), rows)
    return _json({"nodes": list(g.nodes), "normalized": cfg.params["normalized"],
                  "entries": [list(r) for r in rows]})


def cmd_hitting(g, cfg):
    p = transition_matrix(g)
    targets = _ids(cfg.params.get("targets"))
    if targets:
        fm = fundamental_matrix(p, g.indices(targets))
        h = metrics.hitting_times(fm).h
        u = metrics.hitting_costs(fm, g.cost).lh if g.cost is not None else None
        nodes = [g.nodes[i] for i in fm.transient]
        if cfg.format == "csv":
            rows = [(v, float(h[i])) + ((float(u[i]),) if u is not None else ()) for i, v in enumerate(nodes)]
            return _records_csv(("node", "hitting_time") + (("hitting_cost",) if u is not None else ()), rows)
        out = {"targets": targets, "hitting_time": dict(zip(nodes, map(float, h)))}
        if u is not None:
            out["hitting_cost"] = dict(zip(nodes, map(float, u)))
        return _json(out)
    f = _tensor(g)
    h = metrics.hitting_matrix(f)
    if cfg.format == "csv":
        return _matrix_csv(g.nodes, g.nodes, h)
    out = {"nodes": list(g.nodes), "hitting_time": h.tolist()}
    if g.cost is not None:
        out["hitting_cost"] = metrics.hitting_cost_matrix(f, g.cost).tolist()
    return _json(out)


def cmd_commute(g, cfg):
    f = _tensor(g)
    c = metrics.commute(metrics.hitting_matrix(f),
                        None if g.cost is None else metrics.hitting_cost_matrix(f, g.cost))
    if cfg.format == "csv":
        return _matrix_csv(g.nodes, g.nodes, c.c)
    out = {"nodes": list(g.nodes), "commute_time": c.c.tolist()}
    if c.cc is not None:
        out["commute_cost"] = c.cc.tolist()
    return _json(out)


def cmd_kirchhoff(g, cfg):
    f = _tensor(g)
    k = metrics.kirchhoff_index(f, g.edge_count)
    routes = metrics.kirchhoff_routes(f, g.edge_count)
    if cfg.format == "csv":
        return _records_csv(("route", "value"), [("index", k)] + sorted(routes.items()))
    return _json({"kirchhoff_index": k, "edge_count": g.edge_count, "routes": routes})


def cmd_centrality(g, cfg):
    f = _tensor(g)
    rep = centrality.centrality_report(f, normalize_tensor(f))
    cols = ("closeness_raw", "closeness", "betweenness_rw", "betweenness_newman", "load")
    if cfg.format == "csv":
        rows = [(v,) + tuple(float(getattr(rep, c)[i]) for c in cols) for i, v in enumerate(g.nodes)]
        return _records_csv(("node",) + cols, rows)
    return _json({"nodes": list(g.nodes),
                  **{c: dict(zip(g.nodes, map(_num, getattr(rep, c)))) for c in cols}})


def cmd_articulation(g, cfg):
    f = _tensor(g)
    recs = centrality.articulation_points(normalize_tensor(f), cfg.params["eps"], graph=g)
    recs = [r for r in recs if r.pairs]
    if cfg.format == "csv":
        rows = [(g.nodes[r.node], g.nodes[s], g.nodes[t]) for r in recs for s, t in r.pairs]
        return _records_csv(("node", "source", "target"), rows)
    return _json({"articulation_points": [
        {"node": g.nodes[r.node], "count": r.count,
         "pairs": [[g.nodes[s], g.nodes[t]] for s, t in r.pairs]} for r in recs]})


def cmd_load(g, cfg):
    f = _tensor(g)
    loads = centrality.load(normalize_tensor(f))
    order = np.argsort(-loads, kind="stable")
    rows = [(g.nodes[i], float(loads[i])) for i in order]
    if cfg.format == "csv":
        return _records_csv(("node", "load"), rows)
    return _json({"load": dict(rows), "mean": float(loads.mean()), "skew": centrality.load_skew(loads)})


def cmd_influence(g, cfg):
    ext = extend_graph(g, cfg.beta)
    sel = influence.select_seeds(ext, cfg.params["k"], cfg.params["method"], cfg.seed)
    curve = influence.spread_curve(ext, sel.seeds)
    if cfg.format == "csv":
        rows = [(i + 1, g.nodes[s], gain, sp) for i, (s, gain, sp) in
                enumerate(zip(sel.seeds, sel.marginal_gains, curve))]
        return _records_csv(("k", "node", "marginal_gain", "spread"), rows)
    return _json({"method": cfg.params["method"], "beta": cfg.beta,
                  "seeds": [g.nodes[s] for s in sel.seeds],
                  "marginal_gains": list(sel.marginal_gains), "spread": sel.spread,
                  "spread_curve": curve,
                  "adoption": dict(zip(g.nodes, map(float, influence.adoption_probabilities(ext, sel.seeds))))})


def _batch_lines(path: str):
    if not Path(path).is_file():
        raise ValidationError(f"batch file {path!r} not found", module="cli")
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].split()
        if not line:
            continue
        if len(line) not in (2, 3):
            raise ValidationError(f"batch line {lineno}: expected 's t [f1,f2,...]'", module="cli")
        yield line[0], line[1], _ids(line[2] if len(line) == 3 else None)


def cmd_reach(g, cfg):
    oracle = reachability.build_oracle(extend_graph(g, cfg.beta))
    prm = cfg.params
    if prm["dump_oracle"]:
        return oracle.to_csv()
    if prm["query"]:
        queries = [(prm["query"][0], prm["query"][1], _ids(prm["failed"]))]
    elif prm["batch"]:
        queries = list(_batch_lines(prm["batch"]))
    else:
        raise ValidationError("reach needs --query, --batch or --dump-oracle", module="cli")
    answers = []
    for s, t, failed in queries:
        si, ti = g.indices([s, t])
        answers.append(int(oracle.query_with_failures(si, ti, g.indices(failed))))
    if cfg.format == "json":
        return _json([{"source": s, "target": t, "failed": f, "reachable": a}
                      for (s, t, f), a in zip(queries, answers)])
    return "".join(f"{a}\n" for a in answers)


def cmd_simulate(g, cfg):
    prm = cfg.params
    p = transition_matrix(g)
    start = g.indices([prm["start"]])[0]
    targets = g.indices(_ids(prm["targets"]))
    res = simulate.simulate_walks(p, start, targets, prm["walks"], cfg.seed, prm["max_steps"],
                                  cost=g.cost, threads=cfg.threads or 1)
    rows = [(e.kind, "" if e.node is None else g.nodes[e.node], e.mean, e.standard_error)
            for e in res.estimates()]
    if cfg.format == "csv":
        return _records_csv(("metric", "node", "mean", "standard_error"), rows)
    return _json({"start": prm["start"], "targets": _ids(prm["targets"]), "num_walks": res.num_walks,
                  "truncated": res.truncated,
                  "estimates": [dict(zip(("metric", "node", "mean", "standard_error"), r)) for r in rows]})


def cmd_relations(g, cfg):
    p = transition_matrix(g)
    res = relations.relation_suite(p, cfg.params["max_n"], reversible=None)
    rows = [(r.name, r.kind, r.max_violation, r.tolerance, int(r.passed)) for r in res.values()]
    text = (_records_csv(("relation", "kind", "max_violation", "tolerance", "passed"), rows)
            if cfg.format == "csv" else
            _json({r.name: {"kind": r.kind, "max_violation": r.max_violation, "tolerance": r.tolerance,
                            "passed": r.passed} for r in res.values()}))
    failed = [r.name for r in res.values() if not r.passed]
    return text, failed


def run(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        with contextlib.redirect_stdout(stdout), contextlib.redirect_stderr(stderr):
            args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = _config(args)
        limit = threadpool_limits(cfg.threads) if cfg.threads else None
        try:
            g = _load(cfg)
            out = globals()[f"cmd_{cfg.command}"](g, cfg)
        finally:
            if limit is not None:
                limit.unregister()
    except MarkovTensorError as exc:
        stderr.write(f"error [{exc.module}]: {exc}\n")
        if exc.hint:
            stderr.write(f"hint: {exc.hint}\n")
        return 2 if isinstance(exc, NumericalError) else 1
    failed = []
    if isinstance(out, tuple):
        out, failed = out
    if cfg.output_dir:
        path = Path(cfg.output_dir) / f"{cfg.command}.{cfg.format}"
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(out)
        stderr.write(f"wrote {path}\n")
    else:
        stdout.write(out)
    if failed:
        stderr.write(f"error [metrics]: relations failed: {', '.join(failed)}\n")
        return 2
    return 0


def main() -> None:
    sys.exit(run())
