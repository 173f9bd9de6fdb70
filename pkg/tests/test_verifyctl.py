import json

import pytest

from quatrigid import verifyctl as vc


def run_cli(args, capsys):
    code = vc.main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_catalog_contents():
    cat = vc.list_checks()
    names = {c["check"] for c in cat}
    assert {"lemma_square_check", "lambdappp_vanishing"} <= names
    assert all(c["suite"] in vc.SUITES for c in cat)
    assert all(c["anchor"] for c in cat)
    assert {c["suite"] for c in cat} == set(vc.SUITES)


def test_list_verb(capsys):
    code, out, _ = run_cli(["list", "--format", "machine"], capsys)
    assert code == 0
    rows = [json.loads(line) for line in out.splitlines()]
    assert len(rows) == len(vc.CHECKS)


@pytest.mark.parametrize("args", [["run", "--n", "1"], ["run", "--suite", "nosuch"],
                                  ["run", "--trials", "0"], ["run", "--tol", "-1"],
                                  ["run", "--seed", "-3"], ["bogus"]])
def test_config_errors_exit_2(args, capsys):
    code, _, _ = run_cli(args, capsys)
    assert code == 2


def test_unwritable_output(tmp_path, capsys):
    code, _, err = run_cli(["run", "--suite", "quatmat", "--out", str(tmp_path / "no" / "r.txt")], capsys)
    assert code == 2 and "cannot write" in err


def test_tiny_tolerance_fails(capsys):
    code, out, _ = run_cli(["run", "--suite", "quatmat,liecore", "--tol", "1e-30",
                            "--trials", "10", "--format", "machine"], capsys)
    recs = [json.loads(line) for line in out.splitlines()]
    assert code == 1
    assert any(not r["pass"] for r in recs)


def test_machine_report_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    base = ["run", "--suite", "quatmat,weitzenbock,gradedhodge", "--trials", "20", "--format", "machine"]
    assert vc.main(base + ["--out", str(a)]) == 0
    assert vc.main(base + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    rec = json.loads(a.read_text().splitlines()[0])
    assert list(rec) == ["suite", "check", "anchor", "n", "value", "threshold", "comparison", "pass"]


def test_parallel_matches_serial():
    cfg = vc.RunConfig(n=(2,), suites=("liecore", "branching"), trials=10)
    serial = vc.run_checks(cfg)
    parallel = vc.run_checks(vc.RunConfig(n=(2,), suites=("liecore", "branching"), trials=10, jobs=3))
    key = lambda r: (r.suite, r.check, r.n)
    assert sorted(serial, key=key) == sorted(parallel, key=key)


def test_seed_changes_values():
    a = vc.run_checks(vc.RunConfig(suites=("quatmat",), trials=5, seed=1))
    b = vc.run_checks(vc.RunConfig(suites=("quatmat",), trials=5, seed=2))
    assert [r.value for r in a] != [r.value for r in b]


def test_pass_flag_matches_threshold():
    for r in vc.run_checks(vc.RunConfig(suites=("cupform",), trials=10)):
        ok = r.value <= r.threshold if r.comparison == "le" else r.value >= r.threshold
        assert r.passed == ok


@pytest.mark.parametrize("verb", [["decompose", "--alg", "sp"], ["decompose", "--alg", "hom"],
                                  ["kernel"], ["grade", "--trials", "5"]])
def test_dump_verbs(verb, capsys):
    code, out, _ = run_cli(verb + ["--format", "machine"], capsys)
    assert code == 0
    data = json.loads(out)
    assert "n=2" in data


def test_kernel_dump_dimension(capsys):
    code, out, _ = run_cli(["kernel", "--n", "3", "--format", "machine"], capsys)
    assert json.loads(out)["n=3"]["kernel_dim"] == 20


def test_decompose_so_symmetric_recipe_reports_leak(capsys):
    code, out, _ = run_cli(["decompose", "--alg", "so", "--format", "machine", "--trials", "5"], capsys)
    assert code == 1
    code, out, _ = run_cli(["decompose", "--alg", "so", "--recipe", "adjoint",
                            "--format", "machine", "--trials", "5"], capsys)
    assert code == 0
