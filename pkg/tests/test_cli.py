"""Command-line interface: grammar, subcommands, exit codes, JSON stability."""

import json

import pytest

from cxrns import cli
from cxrns.core import GaussianPair, IntModulus, PowerOfTwo
from cxrns.reporting import VerifyReport, dumps_report


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# --- set grammar -----------------------------------------------------------------

def test_parse_set_grammar():
    assert cli.parse_set("31,32,63") == (IntModulus(31), PowerOfTwo(5), IntModulus(63))
    assert cli.parse_set("7,9,16,g3") == (IntModulus(7), IntModulus(9),
                                          PowerOfTwo(4), GaussianPair(3))
    assert cli.parse_set("2^7,15") == (PowerOfTwo(7), IntModulus(15))
    assert cli.parse_set("f:n=2") == (PowerOfTwo(2), IntModulus(3),
                                      IntModulus(5), GaussianPair(2))
    assert cli.parse_set("f:n=3,p=2") == (PowerOfTwo(5), IntModulus(7),
                                          IntModulus(9), GaussianPair(3))


def test_parse_set_errors():
    for bad in ("", "12", "gx", "f:p=1", "f:n=1", "2^0", "15,,16"):
        with pytest.raises(ValueError):
            cli.parse_set(bad)


# --- convert ----------------------------------------------------------------------

def test_convert_forward_example(capsys):
    code, out, _ = run_cli(capsys, "convert", "--set", "f:n=2", "--forward", "100")
    assert code == 0
    assert "[0, 1, 0, 15]" in out


def test_convert_reverse_example(capsys):
    code, out, _ = run_cli(capsys, "convert", "--set", "f:n=2", "--reverse", "0,1,0,15")
    assert code == 0
    assert out.strip() == "100"


def test_convert_forward_zero(capsys):
    code, out, _ = run_cli(capsys, "convert", "--set", "f:n=2", "--forward", "0")
    assert code == 0
    assert "[0, 0, 0, 0]" in out


def test_convert_round_trips_through_cli(capsys):
    code, out, _ = run_cli(capsys, "convert", "--set", "7,9,16,g3", "--forward", "54321",
                           "--json")
    assert code == 0
    residues = json.loads(out)["residues"]
    code, out, _ = run_cli(capsys, "convert", "--set", "7,9,16,g3",
                           "--reverse", ",".join(str(r) for r in residues))
    assert code == 0
    assert out.strip() == "54321"


def test_convert_range_violation_names_channel(capsys):
    code, _, err = run_cli(capsys, "convert", "--set", "f:n=2", "--reverse", "0,9,0,15")
    assert code == 2
    assert "channel 1" in err and "3" in err


def test_convert_rejects_value_beyond_range(capsys):
    code, _, err = run_cli(capsys, "convert", "--set", "f:n=2", "--forward", "1020")
    assert code == 2
    assert "dynamic range" in err


def test_convert_rejects_non_coprime_set(capsys):
    code, _, err = run_cli(capsys, "convert", "--set", "15,64,g3", "--forward", "5")
    assert code == 2
    assert "factor 5" in err


# --- op ---------------------------------------------------------------------------

def test_op_mul_example(capsys):
    code, out, _ = run_cli(capsys, "op", "mul", "3", "5", "--n", "2")
    assert code == 0
    assert "value:  15" in out and "oracle: 15" in out and "match" in out


def test_op_add_zero_identity(capsys):
    code, out, _ = run_cli(capsys, "op", "add", "0", "7", "--n", "2")
    assert code == 0
    assert "value:  7" in out


def test_op_mul_wraparound(capsys):
    code, out, _ = run_cli(capsys, "op", "mul", "16", "16", "--n", "2")
    assert code == 0
    assert "value:  1" in out


def test_op_trace_shows_stages(capsys):
    code, out, _ = run_cli(capsys, "op", "mul", "16", "16", "--n", "2", "--trace")
    assert code == 0
    for label in ("lut partial products", "(4;2) compressors", "carry-save adders"):
        assert label in out


def test_op_json_cross_checks(capsys):
    code, out, _ = run_cli(capsys, "op", "mul", "123", "456", "--n", "5", "--json",
                           "--trace")
    assert code == 0
    doc = json.loads(out)
    assert doc["match"] is True
    assert doc["value"] == doc["oracle"] == (123 * 456) % 1025
    assert set(doc["result"]) == {"r", "borrow", "i", "carry"}
    assert "partials" in doc["trace"]


def test_op_rejects_out_of_range_operand(capsys):
    code, _, err = run_cli(capsys, "op", "mul", "18", "1", "--n", "2")
    assert code == 2
    assert "outside" in err


# --- verify -----------------------------------------------------------------------

def test_verify_multiplier_example(capsys):
    code, out, _ = run_cli(capsys, "verify", "multiplier", "--n", "3")
    assert code == 0
    assert "cases=4225" in out and "failures=0" in out


def test_verify_roundtrip_example(capsys):
    code, out, _ = run_cli(capsys, "verify", "roundtrip", "--n", "2")
    assert code == 0
    assert "cases=1020" in out


def test_verify_random_mode_reports_seed(capsys):
    code, out, _ = run_cli(capsys, "verify", "adder", "--n", "5", "--random",
                           "--samples", "2000", "--seed", "77", "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["seed"] == 77
    assert doc["cases"] == 2000
    assert doc["failures"] == 0
    assert doc["mode"] == "random"


def test_verify_json_schema_and_round_trip(capsys):
    code, out, _ = run_cli(capsys, "verify", "multiplier", "--n", "2", "--json")
    assert code == 0
    doc = json.loads(out)
    assert list(doc) == ["unit", "n", "mode", "cases", "failures", "wall_time_s"]
    # parsing and re-emitting is byte-identical
    assert dumps_report(doc) == out.strip()


def test_verify_failure_exit_code(monkeypatch, capsys):
    failing = VerifyReport(unit="adder", n=2, mode="exhaustive", cases=10,
                           failures=1, counterexample={"x": 1}, wall_time_s=0.0)
    monkeypatch.setattr(cli.sweeps, "run_verify", lambda *a, **kw: failing)
    code, out, _ = run_cli(capsys, "verify", "adder", "--n", "2")
    assert code == 1
    assert "FAIL" in out and "counterexample" in out


def test_verify_workers_flag(capsys):
    code, out, _ = run_cli(capsys, "verify", "multiplier", "--n", "2",
                           "--workers", "2")
    assert code == 0
    assert "failures=0" in out


# --- dr ---------------------------------------------------------------------------

def test_dr_examples(capsys):
    code, out, _ = run_cli(capsys, "dr", "31,32,63")
    assert code == 0
    assert "62,496" in out
    code, out, _ = run_cli(capsys, "dr", "7,9,16,g3")
    assert "65,520" in out
    code, out, _ = run_cli(capsys, "dr", "15,128,g4")
    assert "493,440" in out


def test_dr_json_fields(capsys):
    code, out, _ = run_cli(capsys, "dr", "15,31,128,g6", "--json")
    assert code == 0
    docs = json.loads(out)
    assert docs[0]["dynamic_range"] == 243_853_440
    assert docs[0]["bit_coverage"] == 27
    assert docs[0]["max_channel_width"] == 7
    assert docs[0]["coprime"] is True
    stages = [s["stage"] for s in docs[0]["stage_levels"]]
    assert "(4;2) compressors" in stages and "carry-save adders" in stages
    deltas = {s["stage"]: s["delta_g"] for s in docs[0]["stage_levels"]}
    assert deltas["(4;2) compressors"] == 6
    assert deltas["carry-save adders"] == 2


def test_dr_surfaces_coprimality_violation(capsys):
    code, out, _ = run_cli(capsys, "dr", "15,64,g3")
    assert code == 0  # report is still produced, with the violation called out
    assert "62,400" in out
    assert "factor 5" in out


def test_dr_comparison_table(capsys):
    code, out, _ = run_cli(capsys, "dr", "31,32,63", "7,9,16,g3", "15,64,g3")
    assert code == 0
    assert out.count("\n") >= 5
    for dr in ("62,496", "65,520", "62,400"):
        assert dr in out


def test_dr_bad_grammar_is_usage_error(capsys):
    code, _, err = run_cli(capsys, "dr", "12,foo")
    assert code == 2
    assert "error" in err


def test_big_numbers_emitted_as_strings():
    report = cli.dr_report("g27")
    doc = json.loads(report.to_json())
    assert isinstance(doc["dynamic_range"], str)
    assert int(doc["dynamic_range"]) == (1 << 54) + 1
    # and resist double conversion
    assert dumps_report(doc) == report.to_json()
