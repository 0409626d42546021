import json

import pytest

from mealy.cli import main


def run(args):
    try:
        return main(args)
    except SystemExit as e:  # argparse --help raises
        return e.code or 0


def test_help_exits_zero(capsys):
    assert run(["--help"]) == 0
    assert "classify" in capsys.readouterr().out


def test_act_prints_image(capsys):
    assert run(["act", "--builtin", "bellaterra", "--word", "c", "--input", "0000"]) == 0
    assert capsys.readouterr().out.strip() == "1001"


def test_act_dual(capsys):
    assert run(["act", "--builtin", "bellaterra", "--dual",
                "--word", "0", "--input", "abc"]) == 0
    out = capsys.readouterr().out.strip()
    assert len(out) == 3 and set(out) <= set("abc")


def test_info_lists_properties(capsys):
    assert run(["info", "--builtin", "aleshin"]) == 0
    out = capsys.readouterr().out
    assert "bireversible" in out
    assert "a 0" in out


def test_info_json(capsys):
    assert run(["info", "--builtin", "adding", "--json"]) == 0
    d = json.loads(capsys.readouterr().out)
    assert d["properties"]["cyclic"] is True
    assert d["states"] == ["r", "i"]


def test_gap_writes_csv_and_manifest(tmp_path, capsys):
    csv = tmp_path / "gaps.csv"
    assert run(["gap", "--builtin", "bellaterra", "--from", "2", "--to", "4",
                "--csv", str(csv)]) == 0
    rows = csv.read_text().strip().splitlines()
    assert rows[0].startswith("n,")
    assert len(rows) == 4
    man = json.loads((tmp_path / "gaps.csv.manifest.json").read_text())
    assert man["subcommand"] == "gap"
    assert man["flags"]["to"] == 4
    assert "wall_time_s" in man


def test_gap_dat_is_reproducible(tmp_path):
    a, b = tmp_path / "a.dat", tmp_path / "b.dat"
    for p in (a, b):
        assert run(["gap", "--builtin", "aleshin", "--from", "2", "--to", "5",
                    "--dat", str(p)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_diameter_exact_csv(tmp_path):
    csv = tmp_path / "diam.csv"
    assert run(["diameter", "--builtin", "bellaterra", "--from", "1", "--to", "4",
                "--mode", "exact", "--csv", str(csv)]) == 0
    rows = [r.split(",") for r in csv.read_text().strip().splitlines()[1:]]
    assert [int(r[1]) for r in rows] == [1, 2, 3, 4]


def test_diameter_bound_mode(capsys):
    assert run(["diameter", "--builtin", "aleshin", "--from", "3", "--to", "3",
                "--mode", "bound", "--seed", "7"]) == 0
    assert capsys.readouterr().out.strip()


def test_schreier_dot_export(tmp_path):
    dot = tmp_path / "g.dot"
    assert run(["schreier", "--builtin", "bellaterra", "--level", "2",
                "--dot", str(dot)]) == 0
    text = dot.read_text()
    assert text.startswith("graph") or text.startswith("digraph")
    assert (tmp_path / "g.dot.manifest.json").exists()


def test_transitive_subcommand(capsys):
    assert run(["transitive", "--builtin", "adding", "--state", "r"]) == 0
    assert "transitive" in capsys.readouterr().out


def test_cotransitive_subcommand(capsys):
    assert run(["cotransitive", "--builtin", "bellaterra", "--budget", "4"]) == 0
    out = capsys.readouterr().out
    assert "no" in out


def test_classify_writes_report(tmp_path, capsys):
    out = tmp_path / "census.json"
    assert run(["classify", "--states", "2", "--letters", "2", "--out", str(out)]) == 0
    d = json.loads(out.read_text())
    assert d["classes_total"] == 24
    assert (tmp_path / "census.json.manifest.json").exists()


def test_classify_jobs_match_single(tmp_path):
    single, jobs = tmp_path / "s.json", tmp_path / "j.json"
    assert run(["classify", "--states", "3", "--letters", "2",
                "--out", str(single)]) == 0
    assert run(["classify", "--states", "3", "--letters", "2", "--jobs", "2",
                "--out", str(jobs)]) == 0
    ds, dj = json.loads(single.read_text()), json.loads(jobs.read_text())
    ds.pop("shard"), dj.pop("shard")
    assert ds == dj


def test_classify_shard(capsys):
    assert run(["classify", "--states", "2", "--letters", "2", "--shard", "0/2"]) == 0
    assert "classes" in capsys.readouterr().out


def test_verify_bellaterra(capsys):
    assert run(["verify", "bellaterra", "--level", "6", "--lemma-n", "6"]) == 0
    out = capsys.readouterr().out
    assert out.count("PASS") >= 3
    assert "FAIL" not in out


def test_verify_preperiod(tmp_path, capsys):
    csv = tmp_path / "h.csv"
    assert run(["verify", "preperiod", "--n", "200", "--adding-n", "500",
                "--csv", str(csv)]) == 0
    assert "PASS" in capsys.readouterr().out
    rows = csv.read_text().strip().splitlines()
    assert len(rows) == 200
    assert rows[0] == "1 1"


def test_growth_subcommand(tmp_path, capsys):
    csv = tmp_path / "g.csv"
    assert run(["growth", "--n", "150", "--adding-n", "300", "--csv", str(csv)]) == 0
    assert "slope" in capsys.readouterr().out
    assert len(csv.read_text().strip().splitlines()) == 150


def test_steer_by_input(capsys):
    assert run(["steer", "--builtin", "aleshin", "--letter", "0",
                "--input", "11011"]) == 0
    assert capsys.readouterr().out.strip()


def test_steer_by_witness_level(capsys):
    assert run(["steer", "--builtin", "bellaterra", "--letter", "1",
                "--witness-level", "6"]) == 0
    assert capsys.readouterr().out.strip()


def test_file_loading(tmp_path, capsys):
    from mealy.automaton import builtin
    table = tmp_path / "m.aut"
    table.write_text(builtin("adding").to_text())
    assert run(["info", "--file", str(table)]) == 0
    assert "cyclic" in capsys.readouterr().out


# usage errors: exit code 2, no traceback

def test_missing_automaton_is_usage_error():
    assert run(["info"]) == 2


def test_unknown_builtin_is_usage_error():
    assert run(["info", "--builtin", "nonesuch"]) == 2


def test_bad_shard_is_usage_error():
    assert run(["classify", "--states", "2", "--letters", "2", "--shard", "5"]) == 2


def test_big_census_needs_long_flag():
    assert run(["classify", "--states", "5", "--letters", "2"]) == 2


def test_steer_needs_target():
    assert run(["steer", "--builtin", "aleshin", "--letter", "0"]) == 2


def test_act_rejects_foreign_letters():
    assert run(["act", "--builtin", "adding", "--word", "r", "--input", "012"]) == 2
