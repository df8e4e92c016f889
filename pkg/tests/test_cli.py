"""Command-line pipeline: generate -> simulate -> estimate -> verify, demos, bench."""

from __future__ import annotations

import json

import numpy as np
import pytest

from spectral_scope import read_matrix_csv, read_sequence
from spectral_scope.cli import SEED_ENV, main
from spectral_scope.estimator import estimate_dt_spectrum

SWAP_CSV = "0,1\n1,0\n"
ROT_CSV = "0,1\n-1,0\n"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# =========================================================================
# generate
# =========================================================================


def test_generate_directed_weighted_ring(tmp_path, capsys):
    graph, matrix = tmp_path / "g.tsv", tmp_path / "m.csv"
    code, out, _ = run(
        capsys, "generate", "--model", "ring", "--n", 8, "--directed",
        "--weights", "0.5,1.5", "--seed", 3, "--graph-out", graph, "--matrix-out", matrix,
    )
    assert code == 0
    assert "n=8 edges=8 directed=1 kind=adjacency" in out
    M = read_matrix_csv(matrix)
    assert M.shape == (8, 8) and np.count_nonzero(M) == 8
    # one directed edge out of each node, onto its successor
    for i in range(8):
        assert M[i, (i + 1) % 8] != 0.0


def test_generate_preferential_attachment_edge_count(tmp_path, capsys):
    graph, matrix = tmp_path / "g.tsv", tmp_path / "m.csv"
    code, out, _ = run(
        capsys, "generate", "--model", "pa", "--n", 10, "--m", 2, "--seed", 0,
        "--graph-out", graph, "--matrix-out", matrix,
    )
    assert code == 0 and "edges=17" in out


def test_generate_without_n_is_a_usage_error(tmp_path, capsys):
    code, _, err = run(capsys, "generate", "--model", "pa")
    assert code == 2 and "--n" in err


# =========================================================================
# simulate
# =========================================================================


def test_simulate_writes_the_swap_trace_verbatim(tmp_path, capsys):
    matrix = tmp_path / "swap.csv"
    matrix.write_text(SWAP_CSV)
    out_csv = tmp_path / "y.csv"
    code, _, _ = run(
        capsys, "simulate", "--matrix", matrix, "--x0", "1,0", "--observe", 0,
        "--K", 4, "--out", out_csv,
    )
    assert code == 0
    assert out_csv.read_text() == "k,y\n0,1\n1,0\n2,1\n3,0\n"
    sidecar = json.loads((tmp_path / "y.json").read_text())
    assert sidecar["mode"] == "dt" and sidecar["n_hint"] == 2
    setup = json.loads((tmp_path / "y.setup.json").read_text())
    assert setup["x0"] == [1.0, 0.0] and setup["c"] == [1.0, 0.0]


def test_simulate_defaults_to_two_n_samples(tmp_path, capsys):
    matrix = tmp_path / "swap.csv"
    matrix.write_text(SWAP_CSV)
    out_csv = tmp_path / "y.csv"
    code, _, _ = run(capsys, "simulate", "--matrix", matrix, "--seed", 1, "--out", out_csv)
    assert code == 0
    assert len(out_csv.read_text().splitlines()) == 1 + 4


def test_simulate_samples_continuous_decay(tmp_path, capsys):
    matrix = tmp_path / "decay.csv"
    matrix.write_text("-1\n")
    out_csv = tmp_path / "y.csv"
    code, _, _ = run(
        capsys, "simulate", "--matrix", matrix, "--mode", "ct", "--tau", 1.0,
        "--x0", "1", "--observe", 0, "--K", 4, "--out", out_csv,
    )
    assert code == 0
    seq = read_sequence(out_csv)
    assert seq.mode == "ct" and seq.tau == 1.0
    assert np.max(np.abs(seq.values - np.exp(-np.arange(4)))) < 1e-15
    assert out_csv.read_text().startswith("t,y\n0,1\n1,0.36787944117144233\n")


def test_simulate_ct_without_tau_is_a_usage_error(tmp_path, capsys):
    matrix = tmp_path / "decay.csv"
    matrix.write_text("-1\n")
    code, _, err = run(capsys, "simulate", "--matrix", matrix, "--mode", "ct")
    assert code == 2 and "--tau" in err


def test_simulate_reports_overflow_and_keeps_the_partial_trace(tmp_path, capsys):
    matrix = tmp_path / "hot.csv"
    matrix.write_text("1000\n")
    out_csv = tmp_path / "y.csv"
    code, _, err = run(
        capsys, "simulate", "--matrix", matrix, "--x0", "1", "--observe", 0,
        "--K", 200, "--out", out_csv,
    )
    assert code == 1 and "overflow" in err
    partial = read_sequence(out_csv)
    assert 0 < len(partial.values) < 200
    assert np.all(np.isfinite(partial.values))


# =========================================================================
# estimate
# =========================================================================


def simulate_swap(tmp_path, capsys, x0="1,0"):
    matrix = tmp_path / "swap.csv"
    matrix.write_text(SWAP_CSV)
    out_csv = tmp_path / "y.csv"
    code, _, _ = run(
        capsys, "simulate", "--matrix", matrix, "--x0", x0, "--observe", 0,
        "--K", 4, "--out", out_csv,
    )
    assert code == 0
    return matrix, out_csv


def test_estimate_recovers_the_swap_roots(tmp_path, capsys):
    _, y_csv = simulate_swap(tmp_path, capsys)
    code, out, _ = run(capsys, "estimate", "--y", y_csv)
    assert code == 0
    payload = json.loads(out)
    roots = [(r["re"], r["im"], r["multiplicity"]) for r in payload["roots"]]
    assert roots == [(1.0, 0.0, 1), (-1.0, 0.0, 1)]
    assert payload["rank"] == 2 and payload["mode"] == "dt"


def test_estimate_of_a_dead_output_is_empty(tmp_path, capsys):
    _, y_csv = simulate_swap(tmp_path, capsys, x0="0,0")
    code, out, _ = run(capsys, "estimate", "--y", y_csv)
    assert code == 0
    payload = json.loads(out)
    assert payload["roots"] == [] and payload["rank"] == 0


def test_estimate_without_input_is_a_usage_error(tmp_path, capsys):
    code, _, err = run(capsys, "estimate")
    assert code == 2 and "--y" in err


def test_estimate_surfaces_the_aliasing_warning(tmp_path, capsys):
    matrix = tmp_path / "rot.csv"
    matrix.write_text(ROT_CSV)
    y_csv = tmp_path / "y.csv"
    code, _, _ = run(
        capsys, "simulate", "--matrix", matrix, "--mode", "ct",
        "--tau", np.pi, "--x0", "1,0.3", "--observe", 0, "--K", 8, "--out", y_csv,
    )
    assert code == 0
    code, out, _ = run(capsys, "estimate", "--y", y_csv)
    assert code == 0
    payload = json.loads(out)
    assert any("aliasing" in w for w in payload["warnings"])


def test_estimate_fails_cleanly_on_an_orthogonal_node(tmp_path, capsys):
    matrix = tmp_path / "swap.csv"
    matrix.write_text(SWAP_CSV)
    node = tmp_path / "node.json"
    node.write_text(json.dumps({"A": [[0, 0], [0, 0]], "beta": [1, 0], "gamma": [0, 1]}))
    y_csv = tmp_path / "y.csv"
    code, _, _ = run(
        capsys, "simulate", "--matrix", matrix, "--mode", "dt-networked", "--node", node,
        "--x0", "1,0.4", "--observe", 0, "--K", 8, "--out", y_csv,
    )
    assert code == 0
    code, _, err = run(capsys, "estimate", "--y", y_csv, "--node", node)
    assert code == 1 and "estimation failed" in err


# =========================================================================
# verify
# =========================================================================


def full_chain(tmp_path, capsys):
    graph, matrix = tmp_path / "g.tsv", tmp_path / "m.csv"
    run(
        capsys, "generate", "--model", "ring", "--n", 5, "--weights", "0.5,1.5",
        "--seed", 3, "--graph-out", graph, "--matrix-out", matrix,
    )
    y_csv = tmp_path / "y.csv"
    code, _, _ = run(capsys, "simulate", "--matrix", matrix, "--seed", 11, "--out", y_csv)
    assert code == 0
    spectrum = tmp_path / "spectrum.json"
    code, _, _ = run(capsys, "estimate", "--y", y_csv, "--out", spectrum)
    assert code == 0
    return matrix, spectrum, tmp_path / "y.setup.json"


def test_quick_start_chain_passes_verbatim(tmp_path, capsys):
    # the documented four-command pipeline: ct ring with a tight rank cutoff
    graph, matrix = tmp_path / "ring.tsv", tmp_path / "ring.csv"
    code, _, _ = run(
        capsys, "generate", "--model", "ring", "--n", 8, "--directed",
        "--weights", "0.5,1.5", "--seed", 3, "--graph-out", graph, "--matrix-out", matrix,
    )
    assert code == 0
    y_csv = tmp_path / "y.csv"
    code, _, _ = run(
        capsys, "simulate", "--matrix", matrix, "--mode", "ct", "--tau", 1.0,
        "--K", 16, "--seed", 11, "--out", y_csv,
    )
    assert code == 0
    spectrum = tmp_path / "spectrum.json"
    code, _, _ = run(
        capsys, "estimate", "--y", y_csv, "--rank-tolerance", 1e-14, "--out", spectrum,
    )
    assert code == 0
    assert json.loads(spectrum.read_text())["rank"] == 8
    code, out, _ = run(
        capsys, "verify", "--matrix", matrix, "--estimate", spectrum,
        "--setup", tmp_path / "y.setup.json", "--tol", 1e-3,
    )
    assert code == 0
    report = json.loads(out)
    assert report["pass"] is True and report["max_error"] <= 1e-3


def test_verify_passes_an_honest_chain(tmp_path, capsys):
    matrix, spectrum, setup = full_chain(tmp_path, capsys)
    report = tmp_path / "report.json"
    code, _, _ = run(
        capsys, "verify", "--matrix", matrix, "--estimate", spectrum,
        "--setup", setup, "--out", report,
    )
    assert code == 0
    payload = json.loads(report.read_text())
    assert payload["pass"] is True
    assert payload["max_error"] <= payload["tol"] == 1e-6


def test_verify_fails_under_an_impossible_tolerance(tmp_path, capsys):
    matrix, spectrum, setup = full_chain(tmp_path, capsys)
    code, out, _ = run(
        capsys, "verify", "--matrix", matrix, "--estimate", spectrum,
        "--setup", setup, "--tol", 1e-18,
    )
    assert code == 1
    assert json.loads(out)["pass"] is False


def test_verify_calls_out_a_dropped_mode(tmp_path, capsys):
    matrix, spectrum, setup = full_chain(tmp_path, capsys)
    payload = json.loads(spectrum.read_text())
    payload["roots"] = payload["roots"][1:]
    tampered = tmp_path / "tampered.json"
    tampered.write_text(json.dumps(payload))
    code, out, _ = run(
        capsys, "verify", "--matrix", matrix, "--estimate", tampered, "--setup", setup,
    )
    assert code == 1
    report = json.loads(out)
    assert report["pass"] is False and report["unexplained_true"]


# =========================================================================
# demos
# =========================================================================

ARTIFACTS = (
    "graph.tsv", "matrix.csv", "setup.json", "output.csv",
    "output.json", "spectrum.json", "match.json", "eigenvalues.csv",
)


@pytest.mark.parametrize("name", ["fig1", "fig2", "fig3"])
def test_demo_presets_pass_and_write_artifacts(tmp_path, capsys, name):
    outdir = tmp_path / name
    code, out, _ = run(capsys, "demo", name, "--seed", 0, "--outdir", outdir)
    assert code == 0
    assert f"{name} seed 0: PASS" in out
    for fname in ARTIFACTS:
        assert (outdir / fname).is_file(), fname
    match = json.loads((outdir / "match.json").read_text())
    assert match["pass"] is True and match["overflow"] is False


def test_demo_runs_are_byte_reproducible(tmp_path, capsys):
    a, b = tmp_path / "a", tmp_path / "b"
    assert run(capsys, "demo", "fig1", "--seed", 4, "--outdir", a)[0] == 0
    assert run(capsys, "demo", "fig1", "--seed", 4, "--outdir", b)[0] == 0
    for fname in ARTIFACTS:
        assert (a / fname).read_bytes() == (b / fname).read_bytes(), fname


def test_estimate_json_matches_the_library_call_exactly(tmp_path, capsys):
    _, spectrum, _ = full_chain(tmp_path, capsys)
    cli_payload = json.loads(spectrum.read_text())
    seq = read_sequence(tmp_path / "y.csv")
    lib_payload = estimate_dt_spectrum(seq).to_json_dict()
    assert cli_payload == lib_payload


# =========================================================================
# configuration and environment
# =========================================================================


def test_config_file_supplies_defaults(tmp_path, capsys):
    config = tmp_path / "config.json"
    config.write_text(json.dumps({"model": "ring", "n": 6, "seed": 2}))
    code, out, _ = run(
        capsys, "--config", config, "generate",
        "--graph-out", tmp_path / "g.tsv", "--matrix-out", tmp_path / "m.csv",
    )
    assert code == 0 and "n=6" in out


def test_flags_override_the_config_file(tmp_path, capsys):
    config = tmp_path / "config.json"
    config.write_text(json.dumps({"model": "ring", "n": 6, "seed": 2}))
    code, out, _ = run(
        capsys, "--config", config, "generate", "--n", 9,
        "--graph-out", tmp_path / "g.tsv", "--matrix-out", tmp_path / "m.csv",
    )
    assert code == 0 and "n=9" in out


def test_unknown_config_keys_are_a_usage_error(tmp_path, capsys):
    config = tmp_path / "config.json"
    config.write_text(json.dumps({"model": "ring", "n": 6, "nseed": 2}))
    code, _, err = run(capsys, "--config", config, "generate")
    assert code == 2 and "nseed" in err


def test_seed_env_variable_beats_the_flag(tmp_path, capsys, monkeypatch):
    argv = ["generate", "--model", "pa", "--n", 10, "--m", 2, "--weights", "-1,1"]
    monkeypatch.setenv(SEED_ENV, "7")
    run(capsys, *argv, "--seed", 99,
        "--graph-out", tmp_path / "ga.tsv", "--matrix-out", tmp_path / "ma.csv")
    monkeypatch.delenv(SEED_ENV)
    run(capsys, *argv, "--seed", 7,
        "--graph-out", tmp_path / "gb.tsv", "--matrix-out", tmp_path / "mb.csv")
    assert (tmp_path / "ma.csv").read_bytes() == (tmp_path / "mb.csv").read_bytes()
    assert (tmp_path / "ga.tsv").read_bytes() == (tmp_path / "gb.tsv").read_bytes()


def test_garbled_seed_env_is_a_usage_error(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv(SEED_ENV, "often")
    with pytest.raises(SystemExit) as excinfo:
        run(capsys, "generate", "--model", "ring", "--n", 4,
            "--graph-out", tmp_path / "g.tsv", "--matrix-out", tmp_path / "m.csv")
    assert excinfo.value.code == 2


# =========================================================================
# bench
# =========================================================================


def test_bench_emits_a_parseable_json_summary(tmp_path, capsys):
    out_json = tmp_path / "bench.json"
    code, _, _ = run(capsys, "bench", "fig1", "--seeds", 3, "--json", "--out", out_json)
    assert code == 0
    payload = json.loads(out_json.read_text())
    sweeps = payload["sweeps"]
    assert len(sweeps) == 1
    assert sweeps[0]["scenario"] == "fig1" and sweeps[0]["seeds"] == 3
    assert 0.0 <= sweeps[0]["pass_rate"] <= 1.0


def test_bench_prints_a_table(tmp_path, capsys):
    code, out, _ = run(capsys, "bench", "fig3", "--seeds", 2)
    assert code == 0
    assert "scenario" in out and "fig3" in out
