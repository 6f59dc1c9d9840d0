import csv
import io
import json

import pytest

from mgcf.cli import main
from mgcf.dataset import ucr_paths
from mgcf.errors import DataFormatError, StageError
from mgcf.metrics import REPORT_KEYS, load_report
from mgcf.pipeline import RunConfig, compare, run_pipeline, strip_timing


def read(path):
    return json.loads(path.read_text())


@pytest.fixture(scope="module")
def coffee_runs(tmp_path_factory):
    train, test = ucr_paths("Coffee")
    out = {}
    for method in ("mgcf", "nun"):
        d = tmp_path_factory.mktemp(method)
        out[method] = (run_pipeline(RunConfig(train, test, method=method, output_dir=d)), d)
    return out


def test_run_writes_artifacts(coffee_runs):
    report, d = coffee_runs["mgcf"]
    for name in ("motifs.json", "cfs.json", "report.json"):
        assert (d / name).exists()
    assert 0.0 <= report.flip_rate <= 1.0
    assert report.mean_segments <= 1
    assert len(read(d / "motifs.json")) == 2
    doc = read(d / "report.json")
    assert set(REPORT_KEYS) | {"per_instance"} <= set(doc)
    assert doc["metadata"]["sd"] == "population"


def test_nun_is_less_sparse(coffee_runs):
    assert coffee_runs["nun"][0].mean_sparsity <= coffee_runs["mgcf"][0].mean_sparsity


def test_missing_train_names_dataset_stage(tmp_path):
    cfg = RunConfig(tmp_path / "nope_TRAIN.tsv", tmp_path / "nope_TEST.tsv", output_dir=tmp_path)
    with pytest.raises(StageError) as info:
        run_pipeline(cfg)
    assert info.value.stage == "dataset"


def test_missing_train_exit_code(tmp_path, capsys):
    code = main(["run", "--train", str(tmp_path / "x"), "--test", str(tmp_path / "y"), "--out-dir", str(tmp_path)])
    assert code == 2
    assert "[dataset]" in capsys.readouterr().err


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["bogus"],
        ["mine"],
        ["mine", "--train", "x", "--fractions", "0.3,1.5"],
        ["explain", "--train", "x", "--test", "y", "--method", "alibi"],
        ["run", "--classifier", "cnn"],
        ["run"],
    ],
)
def test_usage_errors_exit_1(argv):
    try:
        code = main(argv)
    except SystemExit as exc:
        code = exc.code
    assert code == 1


def test_help_documents_flags(capsys):
    with pytest.raises(SystemExit) as info:
        main(["run", "--help"])
    assert info.value.code == 0
    text = capsys.readouterr().out
    for flag in ("--fractions", "--no-early-abandon", "--method", "--classifier", "--out-dir"):
        assert flag in text


def test_manual_chain_equals_run(tmp_path, coffee_runs):
    _, run_dir = coffee_runs["mgcf"]
    train, test = ucr_paths("Coffee")
    m, c, r = tmp_path / "motifs.json", tmp_path / "cfs.json", tmp_path / "report.json"
    assert main(["mine", "--train", str(train), "--out", str(m)]) == 0
    assert main(["explain", "--train", str(train), "--test", str(test), "--motifs", str(m), "--out", str(c)]) == 0
    assert main(["evaluate", "--cfs", str(c), "--out", str(r)]) == 0
    assert m.read_bytes() == (run_dir / "motifs.json").read_bytes()
    assert strip_timing(read(c)) == strip_timing(read(run_dir / "cfs.json"))
    assert strip_timing(read(r)) == strip_timing(read(run_dir / "report.json"))


def test_output_dir_env(tmp_path, monkeypatch):
    monkeypatch.setenv("MGCF_OUTPUT_DIR", str(tmp_path / "env_out"))
    train, _ = ucr_paths("Coffee")
    assert main(["mine", "--train", str(train), "--no-early-abandon"]) == 0
    assert (tmp_path / "env_out" / "motifs.json").exists()


def test_explain_nun_needs_no_motifs(tmp_path):
    train, test = ucr_paths("Coffee")
    out = tmp_path / "cfs.json"
    assert main(["explain", "--train", str(train), "--test", str(test), "--method", "nun", "--out", str(out)]) == 0
    assert read(out)["method"] == "nun"
    assert main(["explain", "--train", str(train), "--test", str(test), "--out", str(out)]) == 2


def test_report_formats(coffee_runs, capsys):
    _, d = coffee_runs["mgcf"]
    assert main(["report", "--report", str(d / "report.json"), "--format", "csv"]) == 0
    rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
    assert len(rows) == 1 and rows[0]["dataset"] == "Coffee"
    assert main(["report", "--report", str(d / "report.json"), "--format", "json"]) == 0
    assert json.loads(capsys.readouterr().out)[0]["method"] == "mgcf"


def test_compare_single_and_columns(coffee_runs):
    _, d = coffee_runs["mgcf"]
    rows = compare([d / "report.json"])
    assert len(rows) == 1
    assert tuple(rows[0]) == REPORT_KEYS


def test_compare_cardinality(tmp_path, coffee_runs):
    base = read(coffee_runs["mgcf"][1] / "report.json")
    paths = []
    for ds in ("ECG200", "Coffee", "GunPoint", "BeetleFly", "BirdChicken"):
        for method in ("mgcf", "nun"):
            p = tmp_path / f"{ds}_{method}.json"
            p.write_text(json.dumps(dict(base, dataset=ds, method=method)))
            paths.append(p)
    rows = compare(paths)
    assert len(rows) == 10
    assert {(r["dataset"], r["method"]) for r in rows} == {
        (p.stem.split("_")[0], p.stem.split("_")[1]) for p in paths
    }


def test_compare_rejects_schema_mismatch(tmp_path, coffee_runs, capsys):
    base = read(coffee_runs["mgcf"][1] / "report.json")
    del base["flip_rate"]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(base))
    with pytest.raises(DataFormatError):
        compare([bad])
    assert main(["compare", str(bad)]) == 2


def test_report_round_trip(coffee_runs):
    report, d = coffee_runs["mgcf"]
    back = load_report(d / "report.json")
    assert back.summary() == report.summary()
    assert back.per_instance == report.per_instance
