"""Command-line front end: generate -> simulate -> estimate -> verify.

Every stage reads and writes plain files (TSV edge lists, CSV matrices and
sequences, JSON reports with a top-level ``"schema": 1``), so the pipeline
can be driven from a shell and scripted for batch runs. ``demo`` bundles the
three preset experiments end to end, ``bench`` sweeps seeds and reports a
success-rate table.

Configuration comes from flags, optionally seeded from a JSON file via
``--config`` (flags win over the file). The environment variable
``SPECTRAL_SCOPE_SEED`` overrides any configured seed, which lets a CI loop
fuzz seeds without editing scripts.

Exit codes: 0 success, 1 estimation or verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from .dynamics import (
    CT,
    DT,
    NodeDynamics,
    ObservationSetup,
    OutputSequence,
    SimulationOverflowError,
    random_setup,
    read_sequence,
    simulate_ct_networked,
    simulate_ct_sampled,
    simulate_dt,
    simulate_dt_networked,
    write_sequence,
)
from .estimator import (
    EstimatorOptions,
    InsufficientDataError,
    LogSingularRootError,
    SingularDeconvolutionError,
    estimate_ct_spectrum,
    estimate_dt_spectrum,
    estimate_networked_dt_spectrum,
)
from .graphs import (
    GraphMatrixKind,
    assign_uniform_weights,
    build_matrix,
    generate_preferential_attachment,
    generate_ring,
    read_matrix_csv,
    write_graph_tsv,
    write_matrix_csv,
)
from .oracle import full_spectrum, match_spectra, observable_partition
from .scenarios import SCENARIOS, run_scenario, summarize, sweep

__all__ = ["main"]

SEED_ENV = "SPECTRAL_SCOPE_SEED"

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


# =========================================================================
# Small helpers
# =========================================================================


def _fail_usage(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return EXIT_USAGE


def _resolve_seed(seed):
    env = os.environ.get(SEED_ENV)
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise SystemExit(_fail_usage(f"{SEED_ENV}={env!r} is not an integer"))
    return seed


def _parse_floats(text: str) -> np.ndarray:
    try:
        return np.array([float(tok) for tok in text.split(",") if tok.strip() != ""])
    except ValueError:
        raise SystemExit(_fail_usage(f"expected comma-separated numbers, got {text!r}"))


def _write_json(payload: dict, out: str | None) -> None:
    text = json.dumps(payload, indent=2) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _node_to_json(node: NodeDynamics) -> dict:
    return {
        "schema": 1,
        "A": node.A.tolist(),
        "beta": node.beta.tolist(),
        "gamma": node.gamma.tolist(),
    }


def _node_from_json(path) -> NodeDynamics:
    data = json.loads(Path(path).read_text())
    return NodeDynamics(
        A=np.asarray(data["A"], dtype=float),
        beta=np.asarray(data["beta"], dtype=float),
        gamma=np.asarray(data["gamma"], dtype=float),
    )


def _load_node(args) -> NodeDynamics | None:
    if getattr(args, "node", None):
        return _node_from_json(args.node)
    if getattr(args, "node_d", None):
        return NodeDynamics.random_symmetric(args.node_d, seed=args.node_seed)
    return None


def _estimator_options(args) -> EstimatorOptions:
    prescale = {"auto": None, "on": True, "off": False}[args.prescale]
    return EstimatorOptions(
        rank_tolerance=args.rank_tolerance,
        cluster_tol=args.cluster_tol,
        prescale=prescale,
    )


# =========================================================================
# generate
# =========================================================================


def cmd_generate(args) -> int:
    if args.model is None:
        return _fail_usage("generate requires --model {pa,ring}")
    if args.n is None:
        return _fail_usage("generate requires --n")
    seed = _resolve_seed(args.seed)
    if args.model == "pa":
        g = generate_preferential_attachment(args.n, args.m, seed=seed)
    elif args.model == "ring":
        g = generate_ring(args.n, directed=args.directed)
    else:
        return _fail_usage(f"unknown model {args.model!r}")
    if args.weights:
        bounds = _parse_floats(args.weights)
        if bounds.size != 2:
            return _fail_usage("--weights expects LO,HI")
        g = assign_uniform_weights(g, float(bounds[0]), float(bounds[1]), seed=seed)
    try:
        gm = build_matrix(g, GraphMatrixKind(args.kind))
    except ValueError as exc:
        return _fail_usage(str(exc))
    write_graph_tsv(g, args.graph_out)
    write_matrix_csv(gm, args.matrix_out)
    print(
        f"n={g.n} edges={g.num_edges} directed={int(g.directed)} kind={gm.kind.value} "
        f"-> {args.graph_out} {args.matrix_out}"
    )
    return EXIT_OK


# =========================================================================
# simulate
# =========================================================================


def _build_setup(args, n: int, seed) -> ObservationSetup:
    observed = None
    weights = None
    if args.observe is not None:
        observed = [int(v) for v in str(args.observe).split(",")]
    if args.observe_weights is not None:
        weights = _parse_floats(args.observe_weights)
    if args.x0 is not None:
        x0 = _parse_floats(args.x0)
        if x0.size != n:
            raise SystemExit(_fail_usage(f"--x0 has {x0.size} entries, matrix is {n}x{n}"))
        if observed is None:
            c = np.random.default_rng(seed).uniform(0.0, 1.0, n)
        else:
            c = np.zeros(n)
            w = np.ones(len(observed)) if weights is None else weights
            np.add.at(c, observed, w)
        return ObservationSetup(x0=x0, c=c)
    return random_setup(n, seed=seed, observed=observed, observe_weights=weights)


def cmd_simulate(args) -> int:
    if args.matrix is None:
        return _fail_usage("simulate requires --matrix FILE")
    seed = _resolve_seed(args.seed)
    try:
        M = read_matrix_csv(args.matrix)
    except OSError as exc:
        return _fail_usage(str(exc))
    n = M.shape[0]
    if M.shape[0] != M.shape[1]:
        return _fail_usage(f"matrix in {args.matrix} is {M.shape[0]}x{M.shape[1]}, not square")
    K = args.K if args.K else 2 * n
    networked = args.mode in ("dt-networked", "ct-networked")
    continuous = args.mode in ("ct", "ct-networked")
    if continuous and not args.tau:
        return _fail_usage(f"mode {args.mode} requires --tau")
    node = _load_node(args)
    if networked and node is None:
        return _fail_usage(f"mode {args.mode} requires --node FILE or --node-d D [--node-seed S]")
    setup = _build_setup(args, n, seed)
    try:
        if args.mode == "dt":
            seq = simulate_dt(M, setup, K=K)
        elif args.mode == "ct":
            seq = simulate_ct_sampled(M, setup, tau=args.tau, K=K)
        elif args.mode == "dt-networked":
            seq = simulate_dt_networked(M, node, setup, K=K)
        else:
            seq = simulate_ct_networked(M, node, setup, tau=args.tau, K=K)
    except SimulationOverflowError as exc:
        if exc.partial.size:
            partial = OutputSequence(
                exc.partial, mode=CT if continuous else DT, tau=args.tau, n_hint=n
            )
            write_sequence(partial, args.out, seed=seed)
            print(f"overflow at sample {exc.index}; partial sequence written", file=sys.stderr)
        else:
            print(f"overflow at sample {exc.index}; nothing recorded", file=sys.stderr)
        return EXIT_FAIL
    except ValueError as exc:
        return _fail_usage(str(exc))
    write_sequence(seq, args.out, seed=seed)
    setup_path = Path(args.out).with_suffix(".setup.json")
    setup_payload = {
        "schema": 1,
        "mode": CT if continuous else DT,
        "tau": args.tau,
        "seed": seed,
        "x0": setup.x0.tolist(),
        "c": setup.c.tolist(),
        "node": _node_to_json(node) if node is not None else None,
    }
    setup_path.write_text(json.dumps(setup_payload, indent=2) + "\n")
    extras = f"+sidecar, {setup_path.name}"
    if networked:
        node_path = Path(args.out).with_suffix(".node.json")
        node_path.write_text(json.dumps(_node_to_json(node), indent=2) + "\n")
        extras += f", {node_path.name}"
    print(f"{len(seq.values)} samples -> {args.out} ({extras})")
    return EXIT_OK


# =========================================================================
# estimate
# =========================================================================


def cmd_estimate(args) -> int:
    if args.y is None:
        return _fail_usage("estimate requires --y FILE")
    try:
        y = read_sequence(args.y, sidecar=args.sidecar)
    except (OSError, ValueError, KeyError) as exc:
        return _fail_usage(f"cannot read sequence: {exc}")
    node = _load_node(args)
    opts = _estimator_options(args)
    try:
        if node is not None and y.mode == DT:
            est = estimate_networked_dt_spectrum(y, node, opts=opts)
        elif y.mode == CT:
            est = estimate_ct_spectrum(y, node=node, opts=opts)
        else:
            est = estimate_dt_spectrum(y, opts=opts)
    except (SingularDeconvolutionError, LogSingularRootError, InsufficientDataError) as exc:
        print(f"estimation failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    _write_json(est.to_json_dict(), args.out)
    return EXIT_OK


# =========================================================================
# verify
# =========================================================================


def _roots_from_json(path) -> list[tuple[complex, int]]:
    data = json.loads(Path(path).read_text())
    return [
        (complex(r["re"], r["im"]), int(r.get("multiplicity", 1)))
        for r in data["roots"]
    ]


def cmd_verify(args) -> int:
    if not (args.matrix and args.estimate and args.setup):
        return _fail_usage("verify requires --matrix, --estimate and --setup")
    try:
        M = read_matrix_csv(args.matrix)
        roots = _roots_from_json(args.estimate)
        setup = json.loads(Path(args.setup).read_text())
    except (OSError, ValueError, KeyError) as exc:
        return _fail_usage(f"cannot read inputs: {exc}")
    tol = args.tol if args.tol is not None else float(setup.get("tol", 1e-6))
    truth = full_spectrum(M)
    report = match_spectra(roots, truth, tol)

    # The estimator is allowed to miss exactly the modes that never reach the
    # output; everything else must match within tolerance.
    x0 = np.asarray(setup["x0"], dtype=float)
    c = np.asarray(setup["c"], dtype=float)
    oracle = observable_partition(M, c, x0)
    missing = oracle.missing
    unexplained = []
    for v in report.unmatched_true:
        if missing.size == 0 or np.min(np.abs(missing - v)) > tol:
            unexplained.append(v)
    ok = (not report.pairs or report.max_error <= tol) and not unexplained

    payload = report.to_json_dict()
    payload.update(
        {
            "tol": tol,
            "pass": bool(ok),
            "unexplained_true": [{"re": v.real, "im": v.imag} for v in unexplained],
        }
    )
    _write_json(payload, args.out)
    return EXIT_OK if ok else EXIT_FAIL


# =========================================================================
# demo
# =========================================================================


def _demo_setup_json(result, mode: str, tau) -> dict:
    art = result.artifacts
    payload = {
        "schema": 1,
        "scenario": result.name,
        "seed": result.seed,
        "mode": mode,
        "tau": tau,
        "tol": result.tol,
        "x0": art.setup.x0.tolist(),
        "c": art.setup.c.tolist(),
        "node": _node_to_json(art.node) if art.node is not None else None,
    }
    return payload


def _write_eigenvalue_csv(path, truth, estimate) -> None:
    lines = ["re,im,source"]
    for v in np.sort_complex(np.asarray(truth)):
        lines.append(f"{v.real:.17g},{v.imag:.17g},true")
    if estimate is not None:
        for v in np.sort_complex(estimate.expanded()):
            lines.append(f"{v.real:.17g},{v.imag:.17g},estimated")
    Path(path).write_text("\n".join(lines) + "\n")


def cmd_demo(args) -> int:
    seed = _resolve_seed(args.seed)
    sign = -1.0 if args.sign == "minus" else 1.0
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    result = run_scenario(args.name, seed=seed, sign=sign, keep_artifacts=True)
    art = result.artifacts
    mode = CT if args.name == "fig2" else DT
    tau = 1.0 if args.name == "fig2" else None

    write_graph_tsv(art.graph, outdir / "graph.tsv")
    write_matrix_csv(art.matrix, outdir / "matrix.csv")
    (outdir / "setup.json").write_text(
        json.dumps(_demo_setup_json(result, mode, tau), indent=2) + "\n"
    )
    if art.sequence is not None:
        write_sequence(art.sequence, outdir / "output.csv", seed=seed)
    if result.estimate is not None:
        (outdir / "spectrum.json").write_text(
            json.dumps(result.estimate.to_json_dict(), indent=2) + "\n"
        )
    match_payload = result.report.to_json_dict() if result.report else {"schema": 1}
    match_payload.update(
        {
            "scenario": result.name,
            "seed": result.seed,
            "tol": result.tol,
            "pass": bool(result.ok),
            "overflow": bool(result.overflow),
        }
    )
    (outdir / "match.json").write_text(json.dumps(match_payload, indent=2) + "\n")
    if result.truth is not None:
        _write_eigenvalue_csv(outdir / "eigenvalues.csv", result.truth, result.estimate)

    verdict = "PASS" if result.ok else "FAIL"
    detail = "overflow truncated the run" if result.overflow else f"max matched error {result.max_error:.3e}"
    print(f"{args.name} seed {seed}: {verdict} ({detail}, tol {result.tol:.1e}) -> {outdir}/")
    return EXIT_OK if result.ok else EXIT_FAIL


# =========================================================================
# bench
# =========================================================================


def cmd_bench(args) -> int:
    seed0 = _resolve_seed(args.seed0)
    sign = -1.0 if args.sign == "minus" else 1.0
    names = list(SCENARIOS) if args.name == "all" else [args.name]
    summaries = []
    for name in names:
        results = sweep(name, seeds=args.seeds, jobs=args.jobs, seed0=seed0, sign=sign)
        summaries.append(summarize(results))
    if args.json:
        payload = {"schema": 1, "sweeps": [s.to_json_dict() for s in summaries]}
        _write_json(payload, args.out)
    else:
        print(f"{'scenario':<10}{'seeds':>6}{'passes':>8}{'rate':>8}"
              f"{'max err (pass)':>16}{'overflow':>10}")
        for s in summaries:
            print(f"{s.name:<10}{s.total:>6}{s.passes:>8}{s.pass_rate:>8.2f}"
                  f"{s.max_error_passing:>16.3e}{len(s.overflow_seeds):>10}")
            if s.overflow_seeds:
                print(f"  overflow seeds: {s.overflow_seeds}")
    return EXIT_OK


# =========================================================================
# Parser
# =========================================================================


def _add_estimator_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--rank-tolerance", type=float, default=None,
                   help="relative singular-value threshold for rank detection")
    p.add_argument("--cluster-tol", type=float, default=1e-6,
                   help="relative distance merging nearby roots")
    p.add_argument("--prescale", choices=("auto", "on", "off"), default="auto",
                   help="geometric output prescaling (auto: on for unstable/continuous data)")


def _add_node_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--node", default=None, help="JSON file with node dynamics {A, beta, gamma}")
    p.add_argument("--node-d", type=int, default=None,
                   help="generate a random symmetric d-dimensional node instead")
    p.add_argument("--node-seed", type=int, default=None, help="seed for --node-d")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spectral-scope",
        description="Recover a network's observable eigenvalue spectrum from scalar outputs.",
    )
    parser.add_argument("--config", default=None,
                        help="JSON file of defaults for the chosen subcommand (flags win)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="draw a graph and write its edge list and matrix")
    p.add_argument("--model", choices=("pa", "ring"), default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--m", type=int, default=2, help="attachments per node (pa model)")
    p.add_argument("--directed", action="store_true")
    p.add_argument("--weights", default=None, help="LO,HI for uniform edge weights")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--kind", default="adjacency",
                   choices=[k.value for k in GraphMatrixKind])
    p.add_argument("--graph-out", default="graph.tsv")
    p.add_argument("--matrix-out", default="matrix.csv")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("simulate", help="roll a system forward and record its output")
    p.add_argument("--matrix", default=None)
    p.add_argument("--mode", choices=("dt", "ct", "dt-networked", "ct-networked"), default="dt")
    p.add_argument("--tau", type=float, default=None)
    p.add_argument("--K", type=int, default=None, help="samples (default 2n)")
    p.add_argument("--observe", default=None, help="observed node index or comma list")
    p.add_argument("--observe-weights", default=None, help="weights for the observed nodes")
    p.add_argument("--x0", default=None, help="explicit initial state, comma-separated")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default="output.csv")
    _add_node_flags(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("estimate", help="recover a spectrum from a recorded sequence")
    p.add_argument("--y", default=None, help="sequence CSV (JSON sidecar found next to it)")
    p.add_argument("--sidecar", default=None)
    p.add_argument("--out", default=None, help="write JSON here instead of stdout")
    _add_node_flags(p)
    _add_estimator_flags(p)
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("verify", help="match an estimate against the true spectrum")
    p.add_argument("--matrix", default=None)
    p.add_argument("--estimate", default=None, help="spectrum JSON from the estimate step")
    p.add_argument("--setup", default=None, help="JSON with x0 and c (demo writes setup.json)")
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("demo", help="run a preset experiment end to end")
    p.add_argument("name", choices=SCENARIOS)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--sign", choices=("plus", "minus"), default="plus",
                   help="orientation of the continuous-time vector field (fig2)")
    p.add_argument("--outdir", default="demo-out")
    p.set_defaults(func=cmd_demo)

    p = sub.add_parser("bench", help="sweep seeds and report success rates")
    p.add_argument("name", choices=SCENARIOS + ("all",))
    p.add_argument("--seeds", type=int, default=100)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--seed0", type=int, default=0)
    p.add_argument("--sign", choices=("plus", "minus"), default="plus")
    p.add_argument("--json", action="store_true")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_bench)

    known = {a.dest for a in parser._actions}
    for sp in sub.choices.values():
        known |= {a.dest for a in sp._actions}
    parser.known_dests = known - {"help", "func", "command"}
    parser.all_parsers = [parser, *sub.choices.values()]
    return parser


_LIST_FLAGS = ("--weights", "--observe-weights", "--x0")


def _fuse_negative_values(argv: list[str]) -> list[str]:
    # argparse reads "-1,1" as an option name; glue list values onto their flag
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if tok in _LIST_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def _config_path(argv) -> str | None:
    # found before parsing so config values can satisfy otherwise-required flags
    for i, tok in enumerate(argv):
        if tok == "--config":
            return argv[i + 1] if i + 1 < len(argv) else None
        if tok.startswith("--config="):
            return tok.split("=", 1)[1]
    return None


def main(argv=None) -> int:
    argv = _fuse_negative_values(list(sys.argv[1:] if argv is None else argv))
    parser = build_parser()
    config = _config_path(argv)
    if config:
        try:
            defaults = json.loads(Path(config).read_text())
        except (OSError, ValueError) as exc:
            return _fail_usage(f"cannot read config: {exc}")
        if not isinstance(defaults, dict):
            return _fail_usage(f"config {config} must hold a JSON object")
        defaults.pop("schema", None)
        bad = set(defaults) - parser.known_dests
        if bad:
            return _fail_usage(f"config keys not recognized: {sorted(bad)}")
        for p in parser.all_parsers:
            p.set_defaults(**defaults)
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
