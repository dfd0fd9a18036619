import json
import subprocess
import sys

import pytest

from haariso.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, [json.loads(line) for line in out.splitlines() if line.strip()]


def test_group_info_and_subgroups(capsys):
    code, [info] = run(capsys, "group", "info", "--group", "Z2xZ4")
    assert code == 0 and info["order"] == 8 and info["invariant_factors"] == [2, 4]
    code, [subs] = run(capsys, "group", "subgroups", "--group", "Z2xZ4", "--order", "4")
    assert code == 0 and len(subs["subgroups"]) == 3
    code, [aut] = run(capsys, "group", "aut", "--group", "Z9")
    assert aut["order"] == 6


def test_graph_commands(capsys, tmp_path):
    dot = tmp_path / "x.dot"
    code, [built] = run(capsys, "graph", "build", "--group", "Z5", "--set", "0,1,4", "--dot", str(dot))
    assert code == 0 and built["n"] == 10 and dot.read_text().startswith("graph")
    code, [aut] = run(capsys, "graph", "aut", "--group", "Z5", "--set", "0,1,4")
    assert aut["order"] == 20
    code, [aut] = run(capsys, "graph", "aut", "--group", "Z5", "--set", "0,1,4", "--cayley")
    assert aut["order"] == 10
    code, [iso] = run(capsys, "graph", "iso", "--group", "Z2xZ4", "--set", "0,1,2,3", "--other", "0,2,4,6")
    assert code == 0 and iso["isomorphic"]


def test_bci_commands(capsys):
    code, [report] = run(capsys, "bci", "group", "--group", "Z2xZ4")
    assert code == 0 and report["verdict"] is False and "witness" in report
    code, [report] = run(capsys, "bci", "graph", "--group", "Z5", "--set", "0,1")
    assert report["verdict"] is True


def test_reduce_with_universe_check(capsys, tmp_path):
    trace_path = tmp_path / "trace.json"
    code, [data] = run(capsys, "reduce", "--group", "Z2xZ4", "--set", "0,1,2,3", "--verify-universe",
                       "--trace-json", str(trace_path))
    assert code == 0 and data["universe_check"]["ok"] and data["extension_size"] == 2
    assert len(json.loads(trace_path.read_text())["extension"]) == 2


def test_reduce_exceptional_input(capsys):
    code, [data] = run(capsys, "reduce", "--group", "Z6", "--set", "0,1")
    assert code == 0 and data["terminal"] == "exceptional"
    code, [data] = run(capsys, "reduce", "--group", "Z6", "--set", "0,1", "--fallback", "--verify-universe")
    assert code == 0 and data["fallback"] and data["universe_check"]["ok"]


def test_census_rows(capsys):
    code, rows = run(capsys, "census", "--group", "Z5")
    assert code == 0 and len(rows) == 6
    assert all(row["abci"] for row in rows)
    kinds = {row["case"].split("(")[0] for row in rows if not row["degenerate"]}
    assert kinds <= {"Disconnected", "WreathReducible", "Stable"}


def test_census_symmetric_and_parallel_agree(capsys):
    code, serial = run(capsys, "census", "--group", "Z6", "--symmetric")
    code2, parallel = run(capsys, "census", "--group", "Z6", "--symmetric", "--workers", "2")
    assert code == code2 == 0 and serial == parallel
    assert all(row["case"] != "Exceptional" for row in serial if not row["degenerate"])


def test_census_dot_dir(capsys, tmp_path):
    code, rows = run(capsys, "census", "--group", "Z3", "--dot-dir", str(tmp_path / "dots"))
    assert code == 0 and len(list((tmp_path / "dots").iterdir())) == len(rows)


def test_verify_suite(capsys):
    code, [report] = run(capsys, "verify", "abci-zp")
    assert code == 0 and report["passed"]


@pytest.mark.parametrize("argv", [
    ["verify", "no-such-suite"],
    ["graph", "aut", "--group", "Z2xZ4", "--set", "0,1,2,3", "--budget", "5"],
    ["census", "--group", "Z32"],
    ["group", "info", "--group", "Zx"],
    ["group", "subgroups", "--group", "Z4"],
    ["graph", "iso", "--group", "Z4", "--set", "0"],
    ["reduce", "--group", "Z4", "--set", "9"],
    ["frobnicate"],
])
def test_usage_and_bound_errors_exit_2(capsys, argv):
    assert main(argv) == 2


def test_group_bound_flag(capsys):
    assert main(["group", "info", "--group", "Z9", "--group-bound", "8"]) == 2
    assert main(["--group-bound", "8", "group", "info", "--group", "Z9"]) == 2


def test_console_entry_point():
    out = subprocess.run([sys.executable, "-m", "haariso.cli", "group", "info", "--group", "Z4"],
                         capture_output=True, text=True)
    assert out.returncode == 0 and json.loads(out.stdout)["order"] == 4
