#!/usr/bin/env python3
"""
Tests for the command-line front end: outputs, determinism and exit codes.
"""

import csv
import json
import sys
import tempfile
from pathlib import Path
from unittest import mock

# Add project root to path
sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from helpers import main_guard
from src import cli
from src.cli import EXIT_COHERENCE_VIOLATION, RunConfig, build_parser, config_from_args, main
from src.config import config
from src.errors import ValidationError

OPERATOR_ARGS = [
    "operator", "--family", "matern", "--nu", "0.5",
    "--eps", "-2", "--beta1", "0.075", "--beta2", "0.15", "--grid-n", "64",
]


def _run_to_file(argv, directory: str, name: str):
    path = Path(directory) / name
    code = main(argv + ["--out", str(path)])
    return code, path


def _json_lines(path: Path):
    return [json.loads(line) for line in path.read_text(encoding="utf-8").splitlines()]


def test_operator_table_starts_at_one():
    with tempfile.TemporaryDirectory() as tmp:
        code, path = _run_to_file(OPERATOR_ARGS, tmp, "operator.csv")
        assert code == 0
        rows = list(csv.DictReader(path.open(encoding="utf-8")))
        assert list(rows[0]) == ["t", "K", "phi_beta1", "phi_beta2"]
        assert float(rows[0]["t"]) == 0.0
        assert float(rows[0]["K"]) == 1.0
        assert len(rows) == 64
        assert min(float(r["K"]) for r in rows) < 0.0


def test_outputs_are_deterministic():
    spectral = ["spectral", "--family", "cauchy", "--delta", "0.6", "--lambda", "2.5", "--dim", "2", "--grid-n", "24"]
    check = ["pd-check", "--family", "matern", "--nu", "0.5", "--dim", "2", "--points", "40", "--methods", "gram", "spectral"]
    with tempfile.TemporaryDirectory() as tmp:
        for index, argv in enumerate((OPERATOR_ARGS, spectral, check)):
            first_code, first = _run_to_file(argv, tmp, f"first_{index}")
            second_code, second = _run_to_file(argv, tmp, f"second_{index}")
            assert first_code == second_code == 0, argv[0]
            assert first.read_bytes() == second.read_bytes(), argv[0]


def test_figure1_panels():
    with tempfile.TemporaryDirectory() as tmp:
        code, path = _run_to_file(["figure1", "--grid-n", "200"], tmp, "figure1.csv")
        assert code == 0
        rows = list(csv.DictReader(path.open(encoding="utf-8")))
        assert len(rows) == 3 * 2 * 200

        def curve(panel, eps):
            return [float(r["K"]) for r in rows if r["panel"] == panel and float(r["eps"]) == eps]

        assert min(curve("A", -2.0)) < 0.0
        assert min(curve("C", -2.0)) < 0.0
        for panel, eps_values in (("A", (1.0, -2.0)), ("B", (0.7, -1.25)), ("C", (1.0, -2.0))):
            for eps in eps_values:
                assert curve(panel, eps)[0] == 1.0, (panel, eps)

        sidecar = Path(f"{path}.meta.json")
        assert sidecar.exists()
        metadata = json.loads(sidecar.read_text(encoding="utf-8"))
        assert metadata["command"] == "figure1"
        assert metadata["metadata"]["panels"]["B"]["eps_values"] == [0.7, -1.25]
        assert len(metadata["curves"]) == 6


def test_pd_check_json_records():
    argv = [
        "pd-check", "--family", "matern", "--nu", "0.5", "--eps", "-2",
        "--beta1", "0.075", "--beta2", "0.15", "--dim", "3", "--methods", "spectral",
    ]
    with tempfile.TemporaryDirectory() as tmp:
        code, path = _run_to_file(argv, tmp, "check.jsonl")
        assert code == 0
        records = _json_lines(path)
        assert records[0]["record"] == "metadata"
        assert "claim" not in records[0]
        assert records[1]["record"] == "pd_verdict"
        assert records[1]["verdict"] == "refuted"
        assert records[-1]["record"] == "theorem_claim"
        assert records[-1]["expected"] == "non_member"


def test_theorem_sweep_for_matern_is_coherent():
    argv = [
        "theorem-sweep", "--family", "matern", "--nu", "0.5", "--eps-values", "1", "-2",
        "--dims", "2", "--beta1", "0.075", "--beta2", "0.15", "--points", "60",
    ]
    with tempfile.TemporaryDirectory() as tmp:
        code, path = _run_to_file(argv, tmp, "sweep.jsonl")
        assert code == 0
        records = _json_lines(path)
        assert records[0]["summary"]["member_refuted"] == 0
        coherence = records[1:]
        assert len(coherence) == 2
        for record in coherence:
            assert record["coherent"]
            if record["claim"]["expected"] == "member":
                assert all(v["verdict"] == "consistent" for v in record["verdicts"])


def test_bounds_command():
    with tempfile.TemporaryDirectory() as tmp:
        code, path = _run_to_file(["bounds"], tmp, "bounds.jsonl")
        assert code == 0
        records = _json_lines(path)
        assert records[0]["passed"] is True
        assert [r["record"] for r in records[1:]] == ["lemma1", "lemma1", "lemma1", "lemma2"]


def test_validation_exit_codes():
    with tempfile.TemporaryDirectory() as tmp:
        code, _ = _run_to_file(["eval", "--family", "gaussian", "--nu", "1"], tmp, "bad.csv")
        assert code == 1
        code, _ = _run_to_file(["spectral", "--family", "matern", "--nu", "0.5"], tmp, "bad.csv")
        assert code == 1
        code, _ = _run_to_file(["eval", "--family", "matern", "--nu", "-1"], tmp, "bad.csv")
        assert code == 1
    assert main(["no-such-command"]) == 1
    assert main(["--version"]) == 0


def test_numerical_failure_exit_code():
    saved = config.hankel_max_panels
    config.hankel_max_panels = 1
    try:
        with tempfile.TemporaryDirectory() as tmp:
            argv = ["spectral", "--family", "wendland", "--kappa", "0", "--mu", "4.5", "--dim", "2", "--grid-n", "4"]
            code, path = _run_to_file(argv, tmp, "gw.csv")
            assert code == 2
            assert not path.exists()
    finally:
        config.hankel_max_panels = saved


def test_coherence_violation_exit_code():
    violated = {
        "kernel": {"family": "matern"},
        "d": 2,
        "verdicts": [],
        "claim": {"record": "theorem_claim"},
        "refuted": True,
        "coherence_violation": True,
    }
    with tempfile.TemporaryDirectory() as tmp:
        with mock.patch.object(cli, "_compute", return_value=violated):
            code, path = _run_to_file(["pd-check", "--family", "matern", "--nu", "0.5", "--dim", "2"], tmp, "v.jsonl")
        assert code == EXIT_COHERENCE_VIOLATION
        assert path.exists()


def test_refuted_member_outside_claim_subject_exit_code():
    argv = [
        "pd-check", "--family", "cauchy", "--delta", "2", "--lambda", "2", "--eps", "-1.5",
        "--beta1", "0.5", "--beta2", "1", "--dim", "4", "--methods", "spectral",
    ]
    with tempfile.TemporaryDirectory() as tmp:
        code, path = _run_to_file(argv, tmp, "c22.jsonl")
        assert code == EXIT_COHERENCE_VIOLATION
        records = _json_lines(path)
    metadata = records[0]
    assert metadata["subject_mismatch"]
    assert not metadata["coherence_violation"]
    assert records[1]["verdict"] == "refuted"
    assert records[-1]["expected"] == "member"


def test_run_config_defaults_and_validation():
    args = build_parser().parse_args(["spectral", "--family", "matern", "--nu", "0.5", "--dim", "2"])
    run_config = config_from_args(args)
    assert run_config.format == "csv"
    assert (run_config.grid_min, run_config.grid_max, run_config.grid_n) == (1e-3, 1e3, 400)
    assert "out" not in run_config.describe()

    sweep = config_from_args(build_parser().parse_args(
        ["theorem-sweep", "--family", "matern", "--nu", "0.5", "--eps-values", "1",
         "--beta1", "0.1", "--beta2", "0.2", "--dims", "2", "inf"]
    ))
    assert sweep.format == "json"
    assert sweep.dims == (2, None)

    for kwargs in (
        {"command": "operator", "family": "matern", "eps": 1.0},
        {"command": "theorem-sweep", "family": "matern", "beta1": 0.1, "beta2": 0.2},
        {"command": "eval"},
        {"command": "eval", "family": "matern", "format": "xml"},
    ):
        try:
            RunConfig(**kwargs)
        except ValidationError:
            continue
        raise AssertionError(f"RunConfig accepted {kwargs}")


if __name__ == "__main__":
    main_guard(globals(), "command-line interface")
