"""Command-line front end: ``gaussfrust emax|table|scan|verify``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from pathlib import Path

import numpy as np

from .entanglement import epr_uncertainty_global, eof_from_delta
from .errors import GaussFrustError
from .graphs import GraphSpec, build_graph, parse_graph
from .oracle import appendix_theta_scan, bruteforce_min_delta, independent_pair, probe_y_nonzero
from .solver import (
    HamiltonianPair,
    LATTICES,
    build_pair_edges,
    closed_form_energy,
    emax_for_graph,
    ground_cm,
    ground_energy,
    infinite_lattice_energy,
    lattice_energy_at,
    ring_energy_branches,
    ring_sine_sum,
)

PLATONIC_ROWS = ("tetrahedron", "cube", "dodecahedron", "octahedron", "icosahedron")
PLATONIC_EXACT = {
    "tetrahedron": 1 / math.sqrt(2),
    "cube": 1 / math.sqrt(2),
    "dodecahedron": (12 + 5 * math.sqrt(2) + 2 * math.sqrt(5)) / 30,
    "octahedron": (3 + math.sqrt(3)) / 6,
    "icosahedron": 1 / math.sqrt(5) + 1 / math.sqrt(6),
}
# published E_max in units of 1e-2 ebits
PLATONIC_PUBLISHED = {"tetrahedron": 19.74, "cube": 19.74, "dodecahedron": 11.12, "octahedron": 10.75, "icosahedron": 5.37}
LATTICE_PUBLISHED = {"honeycomb": 10.61, "square": 6.31, "triangular": 2.69, "cubic": 2.62}
LATTICE_ROWS = ("honeycomb", "square", "triangular", "cubic")
ORACLE_GRAPHS = (
    *(GraphSpec("ring", n=n) for n in range(3, 7)),
    *(GraphSpec("complete", n=n) for n in range(3, 7)),
    GraphSpec("platonic", name="octahedron"),
)


def fmt(x) -> str:
    """Floats with 12 significant digits; everything else via ``str``."""
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".12g")
    return "" if x is None else str(x)


def energy_fields(e0: float) -> dict:
    """``e0`` at emitted precision and ``E_max`` computed from that value.

    Deriving ``E_max`` from the rounded ``e0`` keeps every record
    recomputable to 1e-12; rounding ``e0`` alone could be amplified past
    that by the slope of the EoF curve.
    """
    e0 = float(format(e0, ".12g"))
    return {"e0": e0, "emax_ebits": math.inf if e0 <= 1e-12 else eof_from_delta(e0)}


def _json_value(x):
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return float(format(x, ".12g")) if math.isfinite(x) else None
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    return x


def write_records(records, columns, fmt_name: str, out) -> None:
    if fmt_name == "json":
        payload = {"records": [{c: _json_value(r.get(c)) for c in columns} for r in records]}
        out.write(json.dumps(payload, indent=2) + "\n")
        return
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for r in records:
        writer.writerow([fmt(r.get(c)) for c in columns])
    out.write(buf.getvalue())


def _spec_from_args(args) -> GraphSpec:
    graph = args.graph
    if graph.startswith("platonic:"):
        return GraphSpec("platonic", name=graph.split(":", 1)[1])
    return GraphSpec(graph, n=args.n, dim=args.dim, size=args.size)


EMAX_COLUMNS = ("graph", "n", "degree", "e0", "emax_ebits", "method", "epsilon", "delta_epsilon", "runtime_ms")


def cmd_emax(args, out) -> int:
    start = time.perf_counter()
    if args.graph_file:
        path = Path(args.graph_file)
        target = parse_graph(path.read_text(encoding="utf-8"), name=path.stem)
    elif args.graph:
        target = _spec_from_args(args)
    else:
        raise GaussFrustError("either --graph or --graph-file is required")
    result = emax_for_graph(target)
    record = {
        "graph": result.family,
        "n": result.n,
        "degree": result.degree,
        **energy_fields(result.e0),
        "method": result.method,
    }
    if args.epsilon is not None:
        graph = target if args.graph_file else build_graph(target)
        hp = build_pair_edges(graph)
        record["epsilon"] = float(args.epsilon)
        record["delta_epsilon"] = epr_uncertainty_global(ground_cm(hp, args.epsilon), hp)
    record["runtime_ms"] = (time.perf_counter() - start) * 1e3
    write_records([record], EMAX_COLUMNS, args.format, out)
    return 0


def platonic_rows():
    rows = []
    for name in PLATONIC_ROWS:
        start = time.perf_counter()
        spec = GraphSpec("platonic", name=name)
        res = emax_for_graph(spec)
        fields = energy_fields(res.e0)
        rows.append({
            "graph": name,
            "n": res.n,
            "degree": res.degree,
            **fields,
            "e0_exact": PLATONIC_EXACT[name],
            "e0_full": res.e0,
            "emax_1e-2": f"{100 * fields['emax_ebits']:.2f}",
            "runtime_ms": (time.perf_counter() - start) * 1e3,
        })
    return rows


def lattice_rows(resolution: int):
    rows = []
    for kind in LATTICE_ROWS:
        start = time.perf_counter()
        fields = energy_fields(lattice_energy_at(kind, resolution))
        rows.append({
            "graph": kind,
            "degree": LATTICES[kind][2],
            **fields,
            "emax_1e-2": f"{100 * fields['emax_ebits']:.2f}",
            "resolution": resolution,
            "runtime_ms": (time.perf_counter() - start) * 1e3,
        })
    return rows


def cmd_table(args, out) -> int:
    if args.which == "platonic":
        cols = ("graph", "n", "degree", "e0", "e0_exact", "emax_ebits", "emax_1e-2", "runtime_ms")
        write_records(platonic_rows(), cols, args.format, out)
    else:
        cols = ("graph", "degree", "e0", "emax_ebits", "emax_1e-2", "resolution", "runtime_ms")
        write_records(lattice_rows(args.resolution), cols, args.format, out)
    return 0


def cmd_scan(args, out) -> int:
    if args.min < 3 or args.max < args.min:
        raise GaussFrustError(f"need 3 <= --min <= --max, got {args.min}..{args.max}")
    cols = ["n", "e0", "emax_ebits", "parity"]
    if args.envelopes:
        cols += ["e0_even_branch", "e0_odd_branch"]
    rows = []
    for n in range(args.min, args.max + 1):
        row = {"n": n, **energy_fields(closed_form_energy("ring", n)), "parity": "even" if n % 2 == 0 else "odd"}
        if args.envelopes:
            row["e0_even_branch"], row["e0_odd_branch"] = ring_energy_branches(float(n))
        rows.append(row)
    write_records(rows, cols, args.format, out)
    return 0


def _check(name, residual, tolerance, **detail):
    ok = bool(residual <= tolerance)
    return {"name": name, "ok": ok, "residual": float(residual), "tolerance": float(tolerance), **detail}


def _flip_minus_sign(hp: HamiltonianPair) -> HamiltonianPair:
    # mutation fixture: wrong sign on the off-diagonal EPR coupling in H_-
    minus = -hp.minus
    np.fill_diagonal(minus, np.diag(hp.minus))
    return HamiltonianPair(hp.plus, minus, hp.provenance + "+fault", hp.generators)


def suite_tables():
    checks = []
    for row in platonic_rows():
        name = row["graph"]
        checks.append(_check(f"platonic:{name}:e0", abs(row["e0_full"] - row["e0_exact"]), 1e-10))
        checks.append(_check(
            f"platonic:{name}:emax", abs(100 * row["emax_ebits"] - PLATONIC_PUBLISHED[name]), 0.005,
            value=100 * row["emax_ebits"],
        ))
    for kind in LATTICE_ROWS:
        e0 = infinite_lattice_energy(kind)
        value = 100 * eof_from_delta(e0)
        checks.append(_check(f"lattice:{kind}:emax", abs(value - LATTICE_PUBLISHED[kind]), 0.01, value=value))
    worst = max(abs(closed_form_energy("ring", n) - ring_sine_sum(n)) for n in range(3, 201))
    checks.append(_check("ring:closed_form_vs_sum", worst, 1e-12))
    return checks


def suite_oracle(fault: str | None = None):
    checks = []
    for spec in ORACLE_GRAPHS:
        graph = build_graph(spec)
        hp = build_pair_edges(graph)
        if fault == "h-minus-sign":
            hp = _flip_minus_sign(hp)
        e0 = ground_energy(hp)
        reference = independent_pair(graph.edges, graph.n)
        bf = bruteforce_min_delta(reference)
        checks.append(_check(f"oracle:{spec.descriptor}", abs(bf.delta - e0), 1e-5, bruteforce=bf.delta, e0=e0))
        probe = probe_y_nonzero(reference, bf.X)
        checks.append(_check(f"y-probe:{spec.descriptor}", max(-probe.min_gap, 0.0), 1e-10, min_gap=probe.min_gap))
    return checks


def suite_appendix(n_min: int = 3, n_max: int = 12):
    checks = []
    for n in range(n_min, n_max + 1):
        rep = appendix_theta_scan(n)
        off = np.abs(np.mod(rep.argmin_theta + np.pi / 2, np.pi) - np.pi / 2)
        checks.append(_check(f"appendix:ring({n}):theta_argmin", float(off.max()), 1e-12, theta_argmin=float(off.max())))
        checks.append(_check(f"appendix:ring({n}):lambda_minor", max(-rep.min_minor, 0.0), 1e-10))
        checks.append(_check(f"appendix:ring({n}):theta_zero_slice", rep.theta_zero_residual, 1e-10))
        checks.append(_check(f"appendix:ring({n}):q_form", rep.q_form_residual, 1e-12))
    return checks


SUITES = {"tables": suite_tables, "oracle": suite_oracle, "appendix": suite_appendix}


def cmd_verify(args, out) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    checks = []
    for name in names:
        start = time.perf_counter()
        suite_checks = suite_oracle(args.inject_fault) if name == "oracle" else SUITES[name]()
        for c in suite_checks:
            c["suite"] = name
        checks += suite_checks
        print(f"suite {name}: {time.perf_counter() - start:.1f} s", file=sys.stderr)
    failed = [c["name"] for c in checks if not c["ok"]]
    report = {"ok": not failed, "failed": failed, "checks": [{k: _json_value(v) for k, v in c.items()} for c in checks]}
    out.write(json.dumps(report, indent=2) + "\n")
    if failed:
        print("failing checks: " + ", ".join(failed), file=sys.stderr)
        return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gaussfrust", description="Entanglement frustration in symmetric Gaussian networks")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("emax", help="maximal nearest-neighbour entanglement of one graph")
    p.add_argument("--graph", help="ring, torus, complete, meanfield, honeycomb_torus, triangular_torus or platonic:<name>")
    p.add_argument("--graph-file", help="symmetric graph in the n/e/g text format")
    p.add_argument("--n", type=int)
    p.add_argument("--dim", type=int)
    p.add_argument("--size", type=int)
    p.add_argument("--epsilon", type=float, help="also report Delta of the regularised ground-state CM")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_emax)

    p = sub.add_parser("table", help="platonic solids or infinite lattices")
    p.add_argument("which", choices=("platonic", "lattice"))
    p.add_argument("--resolution", type=int, default=128, help="finest Brillouin-zone grid per axis")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("scan", help="ring curve E_max(N)")
    p.add_argument("family", choices=("ring",))
    p.add_argument("--min", type=int, default=3)
    p.add_argument("--max", type=int, default=50)
    p.add_argument("--envelopes", action="store_true", help="add the even/odd closed-form branches")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("verify", help="run verification suites, exit 1 on any failure")
    p.add_argument("--suite", choices=("all", *SUITES), default="all")
    p.add_argument("--inject-fault", choices=("h-minus-sign",), help="mutation fixture: corrupt the pair under test")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, sys.stdout)
    except (GaussFrustError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
