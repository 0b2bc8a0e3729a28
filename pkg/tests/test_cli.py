import csv
import io
import json

import pytest

from padic_nevanlinna.cli import PRIME_ENV, expand_names, main, parse_levels, split_top
from padic_nevanlinna.serialize import certificate_from_json, pl_from_json

FIXTURE = """\
F := prod(k=1..12, 1 - p^k*z)
f := z^2
g := 1/z^2
a1 := inf
a2 := 0
a3 := 1
a4 := 2
a5 := 3
a6 := 4
"""


@pytest.fixture
def fix(tmp_path):
    path = tmp_path / "fix.txt"
    path.write_text(FIXTURE)
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


# -- helpers ------------------------------------------------------------------------------------

def test_argument_helpers():
    assert split_top("0, (z+1)/(z-1), inf") == ["0", "(z+1)/(z-1)", "inf"]
    assert expand_names(["a1..a3", "b"]) == ["a1", "a2", "a3", "b"]
    assert expand_names(["a2..4"]) == ["a2", "a3", "a4"]
    assert parse_levels("2", 3) == [2, 2, 2]
    assert parse_levels("1,inf", 2) == [1, None]


# -- report --------------------------------------------------------------------------------------

def test_report_json_has_one_block_per_target(capsys, fix):
    code, out, _ = run(capsys, "report", "--prime", "2", "--smax", "10", "-f", fix, "--fn", "f",
                       "--targets", "0,1,inf")
    assert code == 0
    body = json.loads(out)
    assert body["schema"] == 1 and set(body["targets"]) == {"0", "1", "inf"}
    T = pl_from_json(body["T"])
    assert T.domain_end == 10 and T(4) == 8


def test_report_csv_has_a_row_per_target_and_breakpoint(capsys, fix):
    code, out, _ = run(capsys, "report", "--prime", "3", "--smax", "5", "-f", fix, "--fn", "F",
                       "--targets", "0,inf", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    zero = [r for r in rows if r["target"] == "0"]
    assert [r["s"] for r in zero] == ["0/1", "1/1", "2/1", "3/1", "4/1", "5/1"]
    assert {"N", "Nbar", "m", "T"} <= set(rows[0])


def test_prime_from_environment_and_flag_override(capsys, fix, monkeypatch):
    monkeypatch.setenv(PRIME_ENV, "3")
    _, out, _ = run(capsys, "report", "-f", fix, "--fn", "F")
    assert json.loads(out)["prime"] == 3
    _, out, _ = run(capsys, "report", "--prime", "5", "-f", fix, "--fn", "F")
    assert json.loads(out)["prime"] == 5


# -- verify ---------------------------------------------------------------------------------------

def test_verify_theorem1_writes_certificate(capsys, fix, tmp_path):
    out_path = tmp_path / "cert.json"
    code, _, _ = run(capsys, "verify", "theorem1", "--prime", "3", "--smax", "12", "-f", fix, "--fn", "F",
                     "--family", "a1..a6", "-o", str(out_path))
    assert code == 0
    body = json.loads(out_path.read_text())
    assert body["exit_status"] == 0 and body["family"] == ["inf", "0", "1", "2", "3", "4"]
    cert = body["certificates"][0]
    assert cert["slack_table"] and certificate_from_json(cert).verdict.holds


def test_verify_smt_arity_error_exits_1(capsys, fix):
    code, out, err = run(capsys, "verify", "smt", "-f", fix, "--fn", "f", "--family", "a2,a3")
    assert code == 1 and "error" in err
    assert json.loads(out)["exit_status"] == 1


PENCIL = "6*z^2 - z - 3,9*z^2 - 2*z - 21/4,-3*z^2 + 2*z + 15/4,3/2*z^2 + 1/2*z + 3/8,15*z^2 - 4*z - 39/4"


def test_verify_violation_exits_2(capsys):
    # the targets lie on the pencil through f and g, so they are shared but not small
    code, out, _ = run(capsys, "verify", "lemma2", "--prime", "3", "--fn", "3*z^2 - 3/4", "--g", "z + 3/2",
                       "--family", PENCIL)
    body = json.loads(out)
    assert code == 2 and body["exit_status"] == 2
    assert body["certificates"][0]["verdict"]["kind"] == "Violated"


def test_verify_uniqueness_reports_margin_and_decision(capsys, fix):
    code, out, _ = run(capsys, "verify", "theorem2", "-f", fix, "--fn", "f", "--g", "g",
                       "--family", "a2,a1,a3,a4,a5")
    body = json.loads(out)
    assert code == 0 and body["margin"] == "2/9"
    assert body["uniqueness"]["decision"] == "HypothesesFailed"
    assert body["uniqueness"]["witness"] == {"f_only": "z", "g_only": "1"}
    code, out, _ = run(capsys, "verify", "cor1", "-f", fix, "--fn", "f", "--g", "f",
                       "--family", "a1..a5")
    body = json.loads(out)
    assert code == 0 and body["uniqueness"]["decision"] == "Identical"


def test_verify_theorem3_threshold_fields(capsys, fix):
    code, out, _ = run(capsys, "verify", "theorem3", "-f", fix, "--fn", "f", "--g", "g",
                       "--family", "a1..a5", "--k", "14")
    body = json.loads(out)
    assert code == 0
    assert body["threshold"] == "27/2" and body["minimal_level"] == 14 and body["theorem3_applicable"]
    assert body["uniqueness"]["decision"] == "HypothesesFailed"


def test_verify_csv(capsys, fix):
    code, out, _ = run(capsys, "verify", "smt", "--prime", "2", "--smax", "4", "-f", fix, "--fn", "F",
                       "--family", "a1,a2,a3", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert rows[-1]["s"] == "4/1" and rows[0]["certificate"]


@pytest.mark.parametrize("argv", [
    ["verify", "smt", "--fn", "z +", "--family", "0,1,inf"],
    ["verify", "smt", "--fn", "z", "--family", "0,1,inf", "--prime", "4"],
    ["verify", "smt", "--fn", "z", "--family", "0,1,inf", "--smax", "-1"],
    ["verify", "lemma2", "--fn", "z", "--family", "0,1,inf,2,3"],
    ["verify", "lemma3", "--fn", "z", "--family", "0,1,inf", "--k", "0"],
    ["report", "--fn", "inf"],
    ["report", "-f", "/nonexistent/fix.txt", "--fn", "z"],
])
def test_malformed_inputs_exit_1(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 1 and err.startswith("error:")


def test_argparse_errors_exit_1(capsys):
    with pytest.raises(SystemExit) as info:
        main(["verify", "nonsense", "--fn", "z", "--family", "0"])
    assert info.value.code == 1


# -- search -----------------------------------------------------------------------------------

def test_search_output_is_byte_identical_across_runs(capsys, tmp_path):
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    for path in (a, b):
        code, _, _ = run(capsys, "search", "--seed", "5", "--trials", "20", "--prime", "2,3", "-o", str(path))
        assert code == 0
    assert a.read_bytes() == b.read_bytes()
    lines = a.read_text().splitlines()
    assert len(lines) == 21
    footer = json.loads(lines[-1])
    assert footer["summary"]["trials"] == 20 and footer["config"]["primes"] == [2, 3]


def test_search_with_planted_shared_radical_pair(capsys):
    code, out, _ = run(capsys, "search", "--seed", "1", "--trials", "0", "--plant", "shared-radical",
                       "--plant", "identical")
    assert code == 0
    lines = [json.loads(x) for x in out.splitlines()]
    assert lines[0]["share_count"] == 2 and lines[1]["identical"]
    assert lines[-1]["summary"]["by_share_count"] == {"2": 1}
