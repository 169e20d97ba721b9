import csv
import json

import pytest

from blockising.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


def test_verify_pass_and_fault(capsys):
    code, out = run(capsys, "verify", "--identity", "thm1", "--degree", "10", "--json")
    assert code == 0 and json.loads(out.out)["status"] == "PASS"
    code, out = run(capsys, "verify", "--identity", "thm1", "--degree", "6", "--fault", "geometric_shift")
    assert code == 1 and "first mismatch" in out.out


def test_verify_needs_degree(capsys):
    code, out = run(capsys, "verify", "--identity", "thm1")
    assert code == 2 and "degree" in out.err


def test_unknown_choice_is_usage_error(capsys):
    assert run(capsys, "check-db", "--model", "nope", "--rank", "3")[0] == 2


@pytest.mark.parametrize("argv,expected", [
    (("--what", "overpartitions", "--n", "4"), "14"),
    (("--what", "overpartitions", "--n", "4", "--colors", "3"), "27"),
])
def test_enumerate_counts(capsys, argv, expected):
    code, out = run(capsys, "enumerate", *argv)
    assert code == 0 and out.out.strip() == expected


def test_enumerate_partitions_json(capsys):
    code, out = run(capsys, "enumerate", "--what", "partitions", "--n", "7", "--json")
    assert json.loads(out.out)["count"] == 15


def test_enumerate_configurations(capsys):
    code, out = run(capsys, "enumerate", "--what", "configurations", "--rank", "2", "--json")
    assert code == 0 and len(json.loads(out.out)) == 4


@pytest.mark.parametrize("model", ["ising", "standup", "natural", "longrange-particle"])
def test_check_db(capsys, tmp_path, model):
    dump = tmp_path / "g.csv"
    code, out = run(capsys, "check-db", "--model", model, "--rank", "4", "--n", "1",
                    "--dump-transitions", str(dump), "--json")
    payload = json.loads(out.out)
    assert code == 0 and payload["failures"] == [] and payload["pairs_checked"] > 0
    rows = list(csv.DictReader(dump.open()))
    assert rows and set(rows[0]) == {"source_id", "target_id", "move", "rate_num", "rate_den"}


def test_check_db_float_and_linear(capsys):
    code, _ = run(capsys, "check-db", "--model", "ising", "--rank", "4", "--kernel", "linear",
                  "--u", "1/4", "--float")
    assert code == 0


def test_stationarity(capsys):
    code, out = run(capsys, "stationarity", "--model", "restricted", "--rank", "4", "--json")
    assert code == 0 and json.loads(out.out)["residual"] == "0"


def test_simulate_writes_trajectory(capsys, tmp_path):
    traj = tmp_path / "t.csv"
    code, out = run(capsys, "simulate", "--model", "standup", "--rank", "3", "--events", "20000",
                    "--replicates", "3", "--threads", "2", "--tv-threshold", "0.2",
                    "--trajectory", str(traj), "--json")
    payload = json.loads(out.out)
    assert code == 0 and [r["seed"] for r in payload["runs"]] == [0, 1, 2]
    assert traj.read_text().splitlines()[0] == "time,state_id"


def test_simulate_needs_a_stopping_rule(capsys):
    assert run(capsys, "simulate", "--model", "standup", "--rank", "3")[0] == 2


def test_concentration(capsys):
    code, out = run(capsys, "concentration", "--horizon", "30", "--json")
    assert code == 0 and json.loads(out.out)["verdict"] == "summable-evidence"


def test_table_kernel_file(capsys, tmp_path):
    f = tmp_path / "k.txt"
    f.write_text(json.dumps({"start": -1, "values": [2, 1, 2]}))
    code, out = run(capsys, "concentration", "--kernel", f"table:{f}", "--horizon", "20")
    assert code == 0
    f.write_text("-1 2 1 2")
    assert run(capsys, "concentration", "--kernel", f"table:{f}")[0] == 2
    lr = tmp_path / "lr.json"
    lr.write_text(json.dumps({"profile": {"1": 1, "2": "1/2"}}))
    code, out = run(capsys, "check-db", "--model", "longrange", "--kernel", f"longrange:{lr}", "--rank", "4")
    assert code == 0


def test_export_to_file(capsys, tmp_path):
    out_path = tmp_path / "fp.csv"
    code, _ = run(capsys, "export-coeffs", "--series", "fp", "--degree", "7", "--out", str(out_path))
    rows = list(csv.DictReader(out_path.open()))
    assert code == 0 and rows
