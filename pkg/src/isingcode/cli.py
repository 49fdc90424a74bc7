"""Command-line front end.

Subcommands: verify, scan-rbim, scan-coherence, threshold, dualize,
build-code. A --config JSON file is authoritative; explicit flags
override individual fields; the NF_SEED environment variable overrides
the seed last. Outputs are pure functions of the resolved config, so a
rerun with the same seed is byte-identical at any thread count.

Exit codes: 0 ok, 1 check failure, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

from isingcode import exact, mc
from isingcode.channels import threshold_experiment
from isingcode.codes import Sector, build_color_2d, build_toric, build_xcube, code_to_hypergraph, dual_spin_model
from isingcode.errors import InstanceTooLargeError
from isingcode.gf2 import BitVector
from isingcode.hypergraph import dual_hypergraph, read_hypergraph, write_hypergraph
from isingcode.lattice import Boundary, StringPath, build_square_lattice, shortest_boundary_path
from isingcode.results import ScanCell, ScanResult
from isingcode.rng import bernoulli_bitvector, stream

VERIFY_MAX_SIZE = 4  # open-lattice linear size the exact battery accepts


def _resolve_config(args: argparse.Namespace, defaults: dict) -> dict:
    config = dict(defaults)
    if getattr(args, "config", None):
        with open(args.config) as f:
            config.update(json.load(f))
    for key in defaults:
        val = getattr(args, key, None)
        if val is not None:
            config[key] = val
    env_seed = os.environ.get("NF_SEED")
    if env_seed is not None and "seed" in config:
        config["seed"] = int(env_seed)
    return config


def _persistable(config: dict) -> dict:
    """Config as embedded in output files. The thread count cannot
    change any result, so it is dropped to keep outputs byte-identical
    at any thread count."""
    return {k: v for k, v in config.items() if k != "threads"}


def _grid(spec_str: str) -> list[float]:
    """Parse 'start:stop:count' or a comma list into a float grid."""
    if ":" in spec_str:
        start, stop, count = spec_str.split(":")
        start, stop, count = float(start), float(stop), int(count)
        if count < 1:
            raise ValueError("grid count must be >= 1")
        if count == 1:
            return [start]
        step = (stop - start) / (count - 1)
        return [start + i * step for i in range(count)]
    return [float(tok) for tok in spec_str.split(",")]


def _write_json(path: str, doc: dict) -> None:
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def _verify_battery(config: dict) -> list[dict]:
    seed = config["seed"]
    n_draws = config["draws"]
    size = config["size"]
    if size > VERIFY_MAX_SIZE:
        raise InstanceTooLargeError(
            f"verify size {size} exceeds the exact battery bound {VERIFY_MAX_SIZE}; "
            "instance too large for enumeration"
        )
    inject = config.get("inject_fault", False)
    checks = []

    def record(name, worst, tol, draw_seed):
        checks.append(
            {"check": name, "worst": worst, "tolerance": tol,
             "passed": bool(worst < tol), "seed": draw_seed}
        )

    sizes = [(2, 2), (size, size)] if size != 2 else [(2, 2), (2, 3)]
    worst_z, worst_m, worst_path, worst_coh = 0.0, 0.0, 0.0, 0.0
    for i in range(n_draws):
        w, h = sizes[i % len(sizes)]
        lat = build_square_lattice(w, h, Boundary.OPEN)
        rng = stream(seed, "verify", i)
        beta_j = 0.1 + 1.9 * rng.random()
        eta = bernoulli_bitvector(lat.n_edges, 0.3, rng)
        ca = exact.CouplingAssignment(lat, eta, beta=beta_j)
        if inject and i == 0:
            ca = exact.CouplingAssignment(lat, eta ^ BitVector.from_indices(lat.n_edges, [0]), beta=beta_j)
            zq = exact.partition_function_quantum(ca)
            ca = exact.CouplingAssignment(lat, eta, beta=beta_j)
        else:
            zq = exact.partition_function_quantum(ca)
        zd = exact.partition_function_direct(ca)
        worst_z = max(worst_z, abs(zq - zd) / zd)

        site = lat.center_site
        path = shortest_boundary_path(lat, site)
        md = exact.magnetization_direct(ca, site)
        mq = exact.magnetization_quantum(ca, path)
        worst_m = max(worst_m, abs(mq - md))
        # A second route to the same endpoint: the string times one face check.
        f = next(fi for fi, face in enumerate(lat.faces) if path.edge_set.overlap(lat.face_support(fi)) > 0)
        alt = exact.magnetization_quantum(
            ca, StringPath(path.edge_set ^ lat.face_support(f), site, True)
        )
        worst_path = max(worst_path, abs(alt - mq))

        q = 0.05 + 0.4 * rng.random()
        o = exact.loop_parity_weights(lat, eta, q, path).order
        m_dual = exact.magnetization_direct(exact.nishimori_coupling(lat, eta, q), site)
        worst_coh = max(worst_coh, abs(o - m_dual))

    record("partition-function-equivalence", worst_z, 1e-10, seed)
    record("magnetization-equivalence", worst_m, 1e-10, seed)
    record("path-independence", worst_path, 1e-12, seed)
    record("coherence-identity", worst_coh, 1e-10, seed)

    for L, q in ((2, 0.05), (min(size, 3), 0.15)):
        lat = build_square_lattice(L, L, Boundary.TORUS)
        etas = [
            bernoulli_bitvector(lat.n_edges, q, stream(seed, "fstar", L, i)) for i in range(10)
        ]
        spread = exact.fidelity_vs_partition_proportionality(lat, etas, q)
        record(f"fidelity-partition-proportionality-L{L}", spread, 1e-8, seed)
    return checks


def cmd_verify(args: argparse.Namespace) -> int:
    defaults = {"seed": 0, "draws": 20, "size": 3, "inject_fault": False, "out": None}
    config = _resolve_config(args, defaults)
    try:
        checks = _verify_battery(config)
    except InstanceTooLargeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    all_ok = all(c["passed"] for c in checks)
    for c in checks:
        status = "PASS" if c["passed"] else "FAIL"
        print(f"[{status}] {c['check']}: worst {c['worst']:.3e} (tol {c['tolerance']:.0e}, seed {c['seed']})")
    if config["out"]:
        _write_json(config["out"], {"config": _persistable(config), "checks": checks, "all_passed": all_ok})
    return 0 if all_ok else 1


# ---------------------------------------------------------------------------
# scans / threshold
# ---------------------------------------------------------------------------


def _mc_params(config: dict) -> mc.McParams:
    return mc.McParams(
        linear_size=config["size"],
        boundary=Boundary(config["boundary"]),
        beta_j=1.0,  # per-cell value set by the scan
        disorder_p=0.0,
        n_disorder=config["n_disorder"],
        n_equilibration_sweeps=config["equilibration_sweeps"],
        n_measure_sweeps=config["measure_sweeps"],
        measure_interval=config["measure_interval"],
        seed=config["seed"],
    )


_SCAN_DEFAULTS = {
    "size": 12,
    "n_disorder": 16,
    "equilibration_sweeps": 400,
    "measure_sweeps": 800,
    "measure_interval": 1,
    "seed": 0,
    "threads": max(1, os.cpu_count() or 1),
    "format": "csv",
    "out": "scan.csv",
}


def cmd_scan_rbim(args: argparse.Namespace) -> int:
    defaults = dict(_SCAN_DEFAULTS, p_grid="0:0.2:5", t_grid="1.0:3.5:6", boundary="torus")
    config = _resolve_config(args, defaults)
    params = _mc_params(config)
    p_values = _grid(config["p_grid"])
    t_values = _grid(config["t_grid"])
    lattice = build_square_lattice(config["size"], config["size"], Boundary(config["boundary"]))
    scan = ScanResult(tuple(p_values), tuple(t_values), y_axis="T")
    sweeps = config["equilibration_sweeps"] + config["measure_sweeps"]
    for p in p_values:
        for t in t_values:
            try:
                est = mc.disorder_averaged_m(
                    lattice, p, 1.0 / t, params, threads=config["threads"]
                )
                scan.add(ScanCell(p, t, est.mean, est.std_error, config["n_disorder"], sweeps, config["seed"]))
            except Exception:
                scan.add(ScanCell(p, t, math.nan, math.nan, config["n_disorder"], sweeps, config["seed"], ok=False))
    scan.write(config["out"], config["format"], config=_persistable(config))
    return 0 if any(c.ok for c in scan.cells) else 1


def cmd_scan_coherence(args: argparse.Namespace) -> int:
    defaults = dict(
        _SCAN_DEFAULTS, p_grid="0:0.2:5", q_grid="0.05:0.45:5", boundary="torus",
        observable="auto",
    )
    config = _resolve_config(args, defaults)
    params = _mc_params(config)
    scan = mc.phase_diagram_scan(
        config["size"],
        _grid(config["p_grid"]),
        _grid(config["q_grid"]),
        params,
        boundary=Boundary(config["boundary"]),
        observable=config["observable"],
        threads=config["threads"],
    )
    scan.write(config["out"], config["format"], config=_persistable(config))
    return 0 if any(c.ok for c in scan.cells) else 1


def cmd_threshold(args: argparse.Namespace) -> int:
    defaults = {
        "size": 3, "p_grid": "0.02:0.20:7", "n_eta": 200, "seed": 0,
        "format": "csv", "out": "threshold.csv",
    }
    config = _resolve_config(args, defaults)
    try:
        rows = threshold_experiment(config["size"], _grid(config["p_grid"]), config["n_eta"], config["seed"])
    except InstanceTooLargeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if config["format"] == "csv":
        lines = ["p,success_mean,success_stderr,correct_mean,correct_stderr,n_eta,L"]
        for r in rows:
            lines.append(
                f"{r['p']!r},{r['success_mean']!r},{r['success_stderr']!r},"
                f"{r['correct_mean']!r},{r['correct_stderr']!r},{r['n_eta']},{r['L']}"
            )
        Path(config["out"]).write_text("\n".join(lines) + "\n")
        Path(config["out"] + ".config.json").write_text(
            json.dumps(_persistable(config), indent=2, sort_keys=True) + "\n"
        )
    else:
        _write_json(config["out"], {"config": _persistable(config), "rows": rows})
    return 0


# ---------------------------------------------------------------------------
# hypergraph commands
# ---------------------------------------------------------------------------


def cmd_dualize(args: argparse.Namespace) -> int:
    try:
        with open(args.input) as f:
            h = read_hypergraph(f)
    except ValueError as exc:
        print(f"parse error in {args.input}: {exc}", file=sys.stderr)
        return 2
    try:
        d = dual_hypergraph(h)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    with open(args.out, "w") as f:
        write_hypergraph(d, f)
    return 0


def cmd_build_code(args: argparse.Namespace) -> int:
    kind = args.kind
    if kind in ("toric", "planar"):
        boundary = Boundary.TORUS if kind == "toric" else Boundary.OPEN
        code = build_toric(build_square_lattice(args.size, args.size, boundary))
    elif kind == "color2d":
        code = build_color_2d(args.size)
    elif kind == "xcube":
        code = build_xcube(args.size, args.size, args.size)
    else:  # pragma: no cover - argparse restricts choices
        raise AssertionError(kind)
    sector = Sector(args.sector)
    h = code_to_hypergraph(code, sector)
    with open(args.out, "w") as f:
        write_hypergraph(h, f)
    if args.spin_model_out:
        model = dual_spin_model(code, sector)
        with open(args.spin_model_out, "w") as f:
            model.write_couplings(f)
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="isingcode",
        description=(
            "Random-bond Ising / noisy Toric code duality toolkit. "
            "CSV output uses '.' decimals, '\\n' newlines and the fixed column "
            "order p,q_or_T,mean,stderr,n_disorder,sweeps,seed; threshold CSV "
            "uses p,success_mean,success_stderr,correct_mean,correct_stderr,n_eta,L. "
            "NF_SEED overrides the seed."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, scan=False):
        p.add_argument("--config", help="JSON config file (authoritative; flags override)")
        p.add_argument("--seed", type=int)
        if scan:
            p.add_argument("--size", type=int)
            p.add_argument("--n-disorder", dest="n_disorder", type=int)
            p.add_argument("--equilibration-sweeps", dest="equilibration_sweeps", type=int)
            p.add_argument("--measure-sweeps", dest="measure_sweeps", type=int)
            p.add_argument("--measure-interval", dest="measure_interval", type=int)
            p.add_argument("--threads", type=int)
            p.add_argument("--format", choices=["csv", "json"])
            p.add_argument("--out")

    p = sub.add_parser("verify", help="run the exact-oracle equivalence battery")
    common(p)
    p.add_argument("--draws", type=int)
    p.add_argument("--size", type=int)
    p.add_argument("--out")
    p.add_argument("--inject-fault", dest="inject_fault", action="store_true", default=None,
                   help=argparse.SUPPRESS)  # test hook
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("scan-rbim", help="disorder-averaged order parameter on a (p, T) grid")
    common(p, scan=True)
    p.add_argument("--p-grid", dest="p_grid")
    p.add_argument("--t-grid", dest="t_grid")
    p.add_argument("--boundary", choices=["open", "torus"])
    p.set_defaults(func=cmd_scan_rbim)

    p = sub.add_parser("scan-coherence", help="coherence order parameter on a (p, q) grid")
    common(p, scan=True)
    p.add_argument("--p-grid", dest="p_grid")
    p.add_argument("--q-grid", dest="q_grid")
    p.add_argument("--boundary", choices=["open", "torus"])
    p.add_argument("--observable", choices=["auto", "center", "site_average"])
    p.set_defaults(func=cmd_scan_coherence)

    p = sub.add_parser("threshold", help="optimal-decoding success probability on p = q")
    common(p)
    p.add_argument("--size", type=int)
    p.add_argument("--p-grid", dest="p_grid")
    p.add_argument("--n-eta", dest="n_eta", type=int)
    p.add_argument("--format", choices=["csv", "json"])
    p.add_argument("--out")
    p.set_defaults(func=cmd_threshold)

    p = sub.add_parser("dualize", help="dualize a hypergraph text file")
    p.add_argument("input")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_dualize)

    p = sub.add_parser("build-code", help="build a CSS code sector as a hypergraph file")
    p.add_argument("kind", choices=["toric", "planar", "color2d", "xcube"])
    p.add_argument("--size", type=int, required=True)
    p.add_argument("--sector", choices=["x", "z"], default="x")
    p.add_argument("--out", required=True)
    p.add_argument("--spin-model-out", dest="spin_model_out")
    p.set_defaults(func=cmd_build_code)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
