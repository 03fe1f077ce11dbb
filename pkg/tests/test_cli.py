import json

import pytest

from granulab.cli import EXIT_AXIOM, EXIT_IO, EXIT_OK, EXIT_USAGE, EXIT_VALIDATION, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_termset_list(capsys):
    code, out, _ = run(capsys, "termset", "list")
    assert code == EXIT_OK
    assert [line.split("\t")[0] for line in out.splitlines()] == ["L1", "L2", "L3"]


def test_termset_show_csv(capsys):
    code, out, _ = run(capsys, "termset", "show", "L1", "--format", "csv")
    assert code == EXIT_OK
    lines = out.splitlines()
    assert lines[0] == "label,a,b,alpha,beta"
    assert lines[1:] == [
        "impossible,0,0,0,0",
        "unlikely,0,0.25,0,0.1",
        "maybe,0.4,0.6,0.1,0.1",
        "likely,0.75,1,0.1,0",
        "certain,1,1,0,0",
    ]


def test_termset_show_svg(tmp_path, capsys):
    out = tmp_path / "l2.svg"
    code, _, _ = run(capsys, "termset", "show", "L2", "--format", "svg", "--out", str(out))
    assert code == EXIT_OK
    assert out.read_text().lstrip().startswith("<?xml")


def test_termset_show_bogus(capsys):
    code, _, err = run(capsys, "termset", "show", "bogus")
    assert code == EXIT_VALIDATION
    assert "bogus" in err


def test_eval_scalar(capsys):
    assert run(capsys, "eval", "T2", "--scalar", "0.3", "0.8")[1] == "0.24\n"
    assert run(capsys, "eval", "Tsc(p=-1)", "--scalar", "0.3", "0.8")[1] == "0.1\n"


@pytest.mark.parametrize(
    "argv, label",
    [
        (["T3", "maybe", "maybe"], "maybe"),
        (["T1", "unlikely", "unlikely"], "impossible"),
        (["T2", "likely", "0.4,0.6,0.1,0.1"], "maybe"),
    ],
)
def test_eval_labels(capsys, argv, label):
    code, out, _ = run(capsys, "eval", *argv, "--termset", "L1")
    assert code == EXIT_OK
    assert out.splitlines()[0] == f"label: {label}"


def test_eval_json(capsys):
    code, out, _ = run(capsys, "eval", "T3", "maybe", "maybe", "--format", "json")
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["label"] == "maybe" and payload["distance"] == pytest.approx(0.0, abs=1e-12)
    assert payload["core"] == pytest.approx([0.4, 0.6])


@pytest.mark.parametrize(
    "argv, code",
    [
        (["eval", "T2", "maybe", "nonsense"], EXIT_VALIDATION),
        (["eval", "T0", "maybe", "maybe"], EXIT_VALIDATION),
        (["eval", "T2", "maybe"], EXIT_USAGE),
        (["eval", "T2", "maybe", "0.1,0.2"], EXIT_USAGE),
        (["eval", "Tzz", "--scalar", "0.1", "0.2"], EXIT_VALIDATION),
        (["closure", "--tnorm", "T2", "--weights", "x"], EXIT_USAGE),
        (["closure", "--tnorm", "T2", "--weights", "0,0"], EXIT_VALIDATION),
        (["experiment"], EXIT_USAGE),
        (["axioms", "T2", "--grid", "1"], EXIT_USAGE),
    ],
)
def test_error_exit_codes(capsys, argv, code):
    assert run(capsys, *argv)[0] == code


def test_argparse_usage_errors():
    with pytest.raises(SystemExit) as exc:
        main(["classes", "--threshold", "150%"])
    assert exc.value.code == EXIT_USAGE


def test_io_error(tmp_path, capsys):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    code, _, _ = run(capsys, "closure", "--tnorm", "T2", "--out", str(blocker / "t.csv"))
    assert code == EXIT_IO


def test_closure_and_compare(tmp_path, capsys):
    path = tmp_path / "t2.csv"
    assert run(capsys, "closure", "--tnorm", "T2", "--out", str(path))[0] == EXIT_OK
    code, out, _ = run(capsys, "compare", str(path), str(path))
    assert code == EXIT_OK
    assert json.loads(out) == {"pair": ["T2", "T2"], "count": 0, "percent": 0.0}
    code, out, _ = run(capsys, "compare", "Tsc(p=0.5)", "Tsc(p=1)", "--format", "text")
    assert out == "Tsc(p=0.5) vs Tsc(p=1): 2 of 15 cells (13.3333%)\n"


def test_classes(capsys):
    code, out, _ = run(capsys, "classes", "--threshold", "1.0")
    assert code == EXIT_OK
    assert len(json.loads(out)["classes"]) == 1
    # 11 of 91 cells is 12.09%, just above a literal 12% cutoff
    code, out, _ = run(capsys, "classes", "--termset", "L3", "--threshold", "12.09%", "--format", "text")
    assert out.splitlines()[0].endswith("5 classes")
    code, out, _ = run(capsys, "classes", "--termset", "L3", "--threshold", "12%", "--format", "text")
    assert out.splitlines()[0].endswith("6 classes")


def test_config_env(tmp_path, capsys, monkeypatch):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"weight_centroid": 1.0, "weight_area": 0.0}))
    monkeypatch.setenv("GRANULAB_CONFIG", str(cfg))
    code, out, _ = run(capsys, "eval", "T3", "maybe", "maybe", "--format", "json")
    assert code == EXIT_OK and json.loads(out)["label"] == "maybe"
    cfg.write_text("{broken")
    assert run(capsys, "eval", "T3", "maybe", "maybe")[0] == EXIT_VALIDATION


def test_axioms(capsys):
    code, out, _ = run(capsys, "axioms", "T2")
    assert code == EXIT_OK and "pass" in out.splitlines()[0]
    code, out, _ = run(capsys, "axioms", "Tsc(p=-1)", "--format", "json")
    rep = json.loads(out)
    assert code == EXIT_OK and rep["passed"] and rep["equivalent_to"] == ["T1"]


def test_axiom_violation_exit_code(capsys):
    # an absurdly strict tolerance turns rounding residue into a violation
    code, out, _ = run(capsys, "axioms", "Tf(theta=3)", "--tol", "-1")
    assert code == EXIT_AXIOM
    assert "FAIL" in out


def test_experiment_outputs(tmp_path, capsys):
    out1, out2 = tmp_path / "a", tmp_path / "b"
    assert run(capsys, "experiment", "--out", str(out1))[0] == EXIT_OK
    assert run(capsys, "experiment", "--out", str(out2), "--workers", "3")[0] == EXIT_OK
    assert len(list((out1 / "tables").glob("*.csv"))) == 27
    assert len(list((out1 / "figures").glob("closure_*.svg"))) == 27
    summary = json.loads((out1 / "summary.json").read_text())
    assert [len(p["classes"]) for p in summary["termsets"]["L2"]["partitions"]] == [6, 3]
    files1 = sorted(p.relative_to(out1) for p in out1.rglob("*") if p.is_file())
    files2 = sorted(p.relative_to(out2) for p in out2.rglob("*") if p.is_file())
    assert files1 == files2
    for rel in files1:
        assert (out1 / rel).read_bytes() == (out2 / rel).read_bytes(), rel


def test_experiment_threshold_override(tmp_path, capsys):
    code, _, _ = run(capsys, "experiment", "--out", str(tmp_path), "--no-figures", "--threshold", "L1=100%")
    assert code == EXIT_OK
    assert not (tmp_path / "figures").exists()
    parts = json.loads((tmp_path / "partitions_L1.json").read_text())
    assert parts == [{"threshold": 1.0, "classes": [list(json.loads((tmp_path / "summary.json").read_text())["selectors"])]}]
    assert run(capsys, "experiment", "--out", str(tmp_path), "--threshold", "L1")[0] == EXIT_USAGE
