import json
import subprocess
import sys

import pytest

from screengender.cli import main


@pytest.fixture
def lists(tmp_path):
    paths = {}
    for name, body in {
        "female": "bert\nanna\nmaria\n",
        "male": "robert\njuan\n",
        "extras": "girl\nlove\n",
        "topics": "style\n",
    }.items():
        p = tmp_path / f"{name}.txt"
        p.write_text(body, encoding="utf-8")
        paths[name] = p
    return paths


def write_users(tmp_path, rows, name="users.tsv"):
    p = tmp_path / name
    p.write_text("".join(f"{a}\t{b}\t{c}\n" for a, b, c in rows), encoding="utf-8")
    return p


def names_args(lists):
    return ["--female-names", str(lists["female"]), "--male-names", str(lists["male"])]


class TestClassify:
    def test_three_users(self, tmp_path, lists):
        users = write_users(tmp_path, [("u1", "anna77", "F"), ("u2", "xrobertx", "M"), ("u3", "0000", "U")])
        out = tmp_path / "preds.json"
        code = main(["classify", "--users", str(users), *names_args(lists), "--strategy", "LONGEST_ACROSS_ALL", "--out", str(out)])
        assert code == 0
        rows = json.loads(out.read_text())
        assert [r["user_id"] for r in rows] == ["u1", "u2", "u3"]
        assert rows[1]["gender"] == "M" and rows[1]["provenance"]["term"] == "robert"
        assert rows[2]["provenance"]["kind"] == "fallback"

    def test_tsv(self, tmp_path, lists, capsys):
        users = write_users(tmp_path, [("u1", "anna77", "F")])
        assert main(["classify", "--users", str(users), "--female-names", str(lists["female"]), "--strategy", "FEMALE_ONLY", "--format", "tsv"]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0].split("\t")[:3] == ["user_id", "gender", "provenance"]
        assert lines[1].split("\t")[:5] == ["u1", "F", "matched", "anna", "FEMALE_NAME"]

    def test_missing_users_file(self, tmp_path, lists, capsys):
        out = tmp_path / "o.json"
        code = main(["classify", "--users", str(tmp_path / "nope.tsv"), *names_args(lists), "--strategy", "FEMALE_THEN_MALE", "--out", str(out)])
        assert code == 2
        assert "file not found" in capsys.readouterr().err
        assert not out.exists()

    def test_unknown_strategy(self, tmp_path, lists, capsys):
        users = write_users(tmp_path, [("u1", "a", "F")])
        assert main(["classify", "--users", str(users), "--strategy", "BOGUS"]) == 2
        assert "usage" in capsys.readouterr().err

    def test_missing_required_list(self, tmp_path, capsys):
        users = write_users(tmp_path, [("u1", "a", "F")])
        assert main(["classify", "--users", str(users), "--strategy", "FEMALE_THEN_MALE"]) == 2
        assert "--female-names" in capsys.readouterr().err

    def test_bad_prior(self, tmp_path):
        users = write_users(tmp_path, [("u1", "a", "F")])
        assert main(["classify", "--users", str(users), "--prior", "1.5", "--demo-lists"]) == 2

    def test_malformed_users_leaves_no_output(self, tmp_path, lists, capsys):
        users = tmp_path / "bad.tsv"
        users.write_text("u1\tanna\tF\nu2\tbroken\n")
        out = tmp_path / "o.json"
        assert main(["classify", "--users", str(users), *names_args(lists), "--strategy", "FEMALE_THEN_MALE", "--out", str(out)]) == 2
        assert "bad.tsv:2" in capsys.readouterr().err
        assert not out.exists()

    def test_demo_lists(self, tmp_path, capsys):
        users = write_users(tmp_path, [("u1", "xRobertx", "M")])
        assert main(["classify", "--users", str(users), "--demo-lists", "--strategy", "FEMALE_THEN_MALE"]) == 0
        rows = json.loads(capsys.readouterr().out)
        assert rows[0]["provenance"]["term"] == "bert"


def fallback_users(tmp_path, n=10, n_female=7):
    return write_users(tmp_path, [(f"u{i}", "0000", "F" if i < n_female else "M") for i in range(n)])


class TestEvaluate:
    def test_all_match(self, tmp_path, lists, capsys):
        users = write_users(tmp_path, [("u1", "anna", "F"), ("u2", "juan_x", "M")])
        out = tmp_path / "r.json"
        assert main(["evaluate", "--users", str(users), *names_args(lists), "--strategy", "FEMALE_THEN_MALE", "--out", str(out)]) == 0
        report = json.loads(out.read_text())
        assert report["realized_accuracy"] == 1.0 and report["coverage"] == 1.0
        line = capsys.readouterr().out.strip()
        assert line == "strategy=FEMALE_THEN_MALE realized=1.000000 expected=1.000000 coverage=1.000000 n=2"

    def test_all_fallback_expected(self, tmp_path, lists):
        out = tmp_path / "r.json"
        args = ["evaluate", "--users", str(fallback_users(tmp_path)), *names_args(lists), "--strategy", "FEMALE_THEN_MALE", "--prior", "0.7", "--out", str(out)]
        assert main(args) == 0
        assert json.loads(out.read_text())["expected_accuracy"] == 0.58

    def test_no_labels(self, tmp_path, lists, capsys):
        users = write_users(tmp_path, [("u1", "anna", "U")])
        out = tmp_path / "r.json"
        assert main(["evaluate", "--users", str(users), *names_args(lists), "--strategy", "FEMALE_THEN_MALE", "--out", str(out)]) == 3
        assert "no labeled users" in capsys.readouterr().err
        assert not out.exists()

    def test_tsv_flattened(self, tmp_path, lists, capsys):
        users = write_users(tmp_path, [("u1", "anna", "F")])
        assert main(["evaluate", "--users", str(users), "--female-names", str(lists["female"]), "--strategy", "FEMALE_ONLY", "--format", "tsv"]) == 0
        out = capsys.readouterr()
        assert "confusion.ff\t1" in out.out.splitlines()
        assert "per_class.m.precision\tNA" in out.out.splitlines()
        assert out.err.startswith("strategy=FEMALE_ONLY")


class TestOtherCommands:
    def test_shadow(self, tmp_path, lists, capsys):
        female = tmp_path / "f.txt"
        female.write_text("bert\n")
        male = tmp_path / "m.txt"
        male.write_text("robert\n")
        assert main(["shadow", "--female-names", str(female), "--male-names", str(male), "--format", "tsv"]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines == ["inner\tinner_category\touter\touter_category", "bert\tFEMALE_NAME\trobert\tMALE_NAME"]

    def test_sweep(self, tmp_path, lists, capsys):
        assert main(["sweep", "--users", str(fallback_users(tmp_path)), *names_args(lists), "--strategy", "FEMALE_THEN_MALE", "--priors", "0.5,0.7"]) == 0
        rows = json.loads(capsys.readouterr().out)
        assert [r["expected_accuracy"] for r in rows] == [0.5, 0.58]

    def test_sweep_bad_priors(self, tmp_path, lists):
        assert main(["sweep", "--users", str(fallback_users(tmp_path)), "--demo-lists", "--priors", "0.5,x"]) == 2

    def test_montecarlo(self, tmp_path, lists, capsys):
        assert main(["montecarlo", "--users", str(fallback_users(tmp_path, 500, 350)), *names_args(lists), "--strategy", "FEMALE_THEN_MALE", "--trials", "20"]) == 0
        obj = json.loads(capsys.readouterr().out)
        assert obj["trials"] == 20 and obj["stderr_defined"]
        assert abs(obj["mean"] - 0.58) <= 4 * obj["stderr"]

    def test_stats_with_edges(self, tmp_path, capsys):
        users = write_users(tmp_path, [("u1", "a", "F"), ("u2", "b", "M"), ("u3", "c", "U")])
        edges = tmp_path / "e.tsv"
        edges.write_text("u1\tu2\nu2\tu3\nu3\tu3\nu3\tu9\n")
        assert main(["stats", "--users", str(users), "--edges", str(edges)]) == 0
        obj = json.loads(capsys.readouterr().out)
        assert (obj["known_users"], obj["unknown_users"]) == (2, 1)
        assert obj["self_loops_dropped"] == 1 and obj["dangling_endpoints"] == 1
        assert obj["edge_count"] == 3

    def test_mine(self, tmp_path, capsys):
        rows = [(f"f{i}", f"{i}flor", "F") for i in range(30)] + [(f"m{i}", f"{i}zz", "M") for i in range(30)]
        users = write_users(tmp_path, rows)
        assert main(["mine", "--users", str(users), "--n-min", "4", "--n-max", "4", "--min-support", "20"]) == 0
        found = {r["text"]: r for r in json.loads(capsys.readouterr().out)}
        assert found["flor"]["support"] == 30 and found["flor"]["female_fraction"] == 1.0

    def test_mine_bad_threshold(self, tmp_path):
        users = write_users(tmp_path, [("a", "xx", "F"), ("b", "yy", "M")])
        assert main(["mine", "--users", str(users), "--threshold", "0.3"]) == 2

    def test_features(self, tmp_path, capsys):
        users = write_users(tmp_path, [("a", "omg!!", "F"), ("b", "x", "M")])
        assert main(["features", "--users", str(users)]) == 0
        obj = json.loads(capsys.readouterr().out)
        assert obj["omg"] == {"f": 1.0, "m": 0.0}

    def test_gen_then_stats(self, tmp_path, capsys):
        out = tmp_path / "g.tsv"
        edges = tmp_path / "ge.tsv"
        assert main(["gen", "--n-users", "1000", "--unknown-fraction", "0.2", "--female-fraction", "0.7", "--seed", "3", "--out", str(out), "--edges-out", str(edges), "--edges-per-user", "2"]) == 0
        assert main(["stats", "--users", str(out), "--edges", str(edges)]) == 0
        obj = json.loads(capsys.readouterr().out)
        assert (obj["total_users"], obj["unknown_users"], obj["female_users"]) == (1000, 200, 560)
        assert obj["edge_count"] == 2000 and obj["dangling_endpoints"] == 0

    def test_gen_deterministic(self, tmp_path):
        a, b = tmp_path / "a.tsv", tmp_path / "b.tsv"
        for p in (a, b):
            assert main(["gen", "--n-users", "500", "--seed", "9", "--out", str(p)]) == 0
        assert a.read_bytes() == b.read_bytes()


def test_module_entry_point(tmp_path):
    users = write_users(tmp_path, [("u1", "anna", "F")])
    proc = subprocess.run(
        [sys.executable, "-m", "screengender", "evaluate", "--users", str(users), "--demo-lists", "--strategy", "FEMALE_ONLY"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["n_evaluated"] == 1
    assert "realized=1.000000" in proc.stderr
