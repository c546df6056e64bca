import json
import subprocess
import sys

import pytest

from sste.cli import build_parser, main


def run_cli(*argv) -> int:
    return main(list(argv))


@pytest.fixture(scope="module")
def corpus(tmp_path_factory):
    out = tmp_path_factory.mktemp("corpus")
    code = run_cli(
        "synth", "--out", str(out), "--stem", "demo",
        "--llp", "60", "--flp", "60", "--clp", "0", "--seed", "7", "--sigma", "1.0",
    )
    assert code == 0
    return out / "demo.jsonl", out / "demo.vec"


class TestValidate:
    def test_valid_file(self, tmp_path, capsys):
        path = tmp_path / "d.jsonl"
        lines = [
            '{"id":"a","label":"LLP","sections":[]}',
            '{"id":"b","label":"LLP","sections":[]}',
            '{"id":"c","label":"FLP","sections":[]}',
        ]
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        assert run_cli("validate", str(path)) == 0
        out = capsys.readouterr().out
        assert "3 profiles" in out
        assert "LLP:2 FLP:1" in out
        assert "0 errors" in out

    def test_bad_label_cites_line(self, tmp_path, capsys):
        path = tmp_path / "d.jsonl"
        path.write_text(
            '{"id":"a","label":"LLP","sections":[]}\n{"id":"b","label":"BOT","sections":[]}\n',
            encoding="utf-8",
        )
        assert run_cli("validate", str(path)) == 1
        assert "line 2" in capsys.readouterr().err

    def test_empty_file(self, tmp_path, capsys):
        path = tmp_path / "d.jsonl"
        path.write_text("", encoding="utf-8")
        assert run_cli("validate", str(path)) == 1
        assert "empty dataset" in capsys.readouterr().err


class TestSynth:
    def test_byte_identical_reruns(self, tmp_path):
        for sub in ("a", "b"):
            assert run_cli("synth", "--out", str(tmp_path / sub), "--llp", "10",
                           "--flp", "10", "--clp", "0", "--seed", "3") == 0
        assert (tmp_path / "a/corpus.jsonl").read_bytes() == (tmp_path / "b/corpus.jsonl").read_bytes()
        assert (tmp_path / "a/corpus.vec").read_bytes() == (tmp_path / "b/corpus.vec").read_bytes()

    def test_spec_file(self, tmp_path):
        spec = tmp_path / "spec.json"
        spec.write_text(json.dumps({"n_llp": 4, "n_flp": 2, "seed": 1}), encoding="utf-8")
        assert run_cli("synth", str(spec), "--out", str(tmp_path)) == 0
        assert (tmp_path / "corpus.jsonl").exists()
        assert sum(1 for _ in (tmp_path / "corpus.jsonl").open()) == 6


class TestFeaturize:
    def test_csv_header_and_schema(self, corpus, tmp_path):
        dataset, vectors = corpus
        out = tmp_path / "features.csv"
        assert run_cli(
            "featurize", "--dataset", str(dataset), "--embeddings", str(vectors),
            "--mode", "sste", "--out", str(out),
        ) == 0
        header = out.read_text(encoding="utf-8").splitlines()[0]
        assert header.startswith("id,label,mode,f0,f1,")
        assert header.endswith("f31")
        schema = json.loads((tmp_path / "features.csv.schema.json").read_text())
        assert schema["numeric_feature_order"][0] == "introduction_components"

    def test_numeric_family_needs_no_provider(self, corpus, tmp_path):
        dataset, _ = corpus
        out = tmp_path / "numeric.csv"
        assert run_cli(
            "featurize", "--dataset", str(dataset), "--family", "numeric", "--out", str(out)
        ) == 0
        rows = out.read_text().splitlines()
        assert len(rows) == 121  # header + 120 profiles


class TestTrainScore:
    def test_train_then_score(self, corpus, tmp_path):
        dataset, vectors = corpus
        model = tmp_path / "model.json"
        assert run_cli(
            "train", "--dataset", str(dataset), "--embeddings", str(vectors),
            "--algorithm", "lr", "--seed", "5", "--out", str(model),
        ) == 0
        bundle = json.loads(model.read_text())
        assert bundle["format"] == "sste-train-bundle"
        scores = tmp_path / "scores.csv"
        assert run_cli(
            "score", "--model", str(model), "--dataset", str(dataset),
            "--embeddings", str(vectors), "--out", str(scores),
        ) == 0
        lines = scores.read_text().splitlines()
        assert lines[0] == "id,fake_probability,label"
        assert len(lines) == 121
        labels = {line.split(",")[2] for line in lines[1:]}
        assert labels <= {"legit", "fake", "excluded"}
        # Separable corpus: the trained model should separate the classes.
        correct = sum(
            1 for line in lines[1:]
            if (line.startswith("llp") and line.endswith("legit"))
            or (line.startswith("flp") and line.endswith("fake"))
        )
        assert correct >= 115


class TestExperiment:
    def test_table2_outputs_and_rerun_identical(self, corpus, tmp_path):
        dataset, vectors = corpus
        args = (
            "experiment", "table2", "--dataset", str(dataset),
            "--embeddings", str(vectors), "--seed", "7", "--scale", "0.1",
        )
        assert run_cli(*args, "--out", str(tmp_path / "r1")) == 0
        assert run_cli(*args, "--out", str(tmp_path / "r2")) == 0
        run1 = next((tmp_path / "r1").iterdir())
        run2 = next((tmp_path / "r2").iterdir())
        assert run1.name == run2.name  # config-hash naming
        assert (run1 / "metrics.csv").read_bytes() == (run2 / "metrics.csv").read_bytes()
        assert (run1 / "manifest.json").read_bytes() == (run2 / "manifest.json").read_bytes()
        metrics = (run1 / "metrics.csv").read_text()
        for block in ("numeric", "ste", "sste"):
            assert f",{block}," in metrics
        manifest = json.loads((run1 / "manifest.json").read_text())
        assert manifest["config"]["seed"] == 7
        assert manifest["experiment"] == "table2"

    def test_failure_removes_partial_outputs(self, corpus, tmp_path, capsys):
        dataset, vectors = corpus
        out = tmp_path / "runs"
        code = run_cli(
            "experiment", "fig4", "--dataset", str(dataset),
            "--embeddings", str(vectors), "--scale", "0.1", "--out", str(out),
        )
        assert code == 1
        assert "shortfall" in capsys.readouterr().err
        assert not out.exists() or not any(out.iterdir())

    def test_config_file_precedence(self, corpus, tmp_path):
        dataset, vectors = corpus
        config = tmp_path / "config.json"
        config.write_text(json.dumps({"seed": 3, "scale": 0.1}), encoding="utf-8")
        out = tmp_path / "runs"
        assert run_cli(
            "experiment", "table2", "--dataset", str(dataset), "--embeddings", str(vectors),
            "--config", str(config), "--seed", "9", "--out", str(out),
        ) == 0
        manifest = json.loads(next(out.iterdir()).joinpath("manifest.json").read_text())
        # Flag beats config file; config file beats default.
        assert manifest["config"]["seed"] == 9
        assert manifest["config"]["scale"] == 0.1
        assert manifest["seed"] == 9


class TestHelp:
    def test_every_subcommand_lists_all_flags(self, capsys):
        parser = build_parser()
        subparsers = parser._subparsers._group_actions[0].choices
        for name, sub in subparsers.items():
            help_text = sub.format_help()
            for action in sub._actions:
                for option in action.option_strings:
                    assert option in help_text, f"{name}: {option} missing from --help"

    def test_entry_point_runs(self):
        result = subprocess.run(
            [sys.executable, "-m", "sste", "--help"], capture_output=True, text=True
        )
        assert result.returncode == 0
        for sub in ("validate", "synth", "featurize", "train", "score", "experiment"):
            assert sub in result.stdout
