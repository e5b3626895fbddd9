import json
import math

import pytest

from crossnum import info_complexity_bounds, WeightKind
from crossnum.cli import (EXIT_ARGS, EXIT_CHECK, EXIT_OK, EXIT_RESOURCE,
                          build_parser, main)


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# -- count --------------------------------------------------------------------

def test_count_exact_bytes(capsys):
    code, out, err = run(capsys, "count", "--r", "2", "--d", "3")
    assert code == EXIT_OK and err == ""
    assert out == '{"count":"7","d":3,"r":2}\n'


def test_count_brute_crosscheck(capsys):
    code, out, _ = run(capsys, "count", "--r", "6", "--d", "2", "--brute")
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["brute"] == payload["count"] and payload["match"] is True


def test_count_metadata_echoes_guard_override(capsys):
    code, out, _ = run(capsys, "count", "--r", "2", "--d", "3",
                       "--max-enum", "50")
    assert code == EXIT_OK
    assert out == '{"count":"7","d":3,"max_enum":50,"r":2}\n'


def test_count_huge_stays_decimal_string(capsys):
    code, out, _ = run(capsys, "count", "--r", "1000000", "--d", "2")
    assert code == EXIT_OK
    assert json.loads(out)["count"] == "51880137"


# -- spectrum -----------------------------------------------------------------

def test_spectrum_sharp_single_bytes(capsys):
    code, out, _ = run(capsys, "spectrum", "--kind", "sharp", "--d", "5",
                       "--s", "2", "--n", "11")
    assert code == EXIT_OK
    assert out == '{"a_n":0.25,"r":2}\n'


def test_spectrum_enumerated_single(capsys):
    code, out, _ = run(capsys, "spectrum", "--kind", "plus", "--d", "2",
                       "--s", "1", "--n", "3")
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["a_n"] == pytest.approx(2.0 ** -0.5, rel=1e-15)
    assert payload["kind"] == "plus(1)"
    assert payload["certification"] == "enumerated-certified"
    assert payload["radius"] >= 2


def test_spectrum_intm_requires_m(capsys):
    code, _, err = run(capsys, "spectrum", "--kind", "intm", "--d", "2",
                       "--s", "1", "--n", "2")
    assert code == EXIT_ARGS and "requires --m" in err
    code, out, _ = run(capsys, "spectrum", "--kind", "intm", "--d", "2",
                       "--m", "2", "--n", "2")
    assert code == EXIT_OK
    assert json.loads(out)["a_n"] == pytest.approx(3.0 ** -0.5, rel=1e-15)


def test_spectrum_table_csv_bytes(capsys):
    code, out, _ = run(capsys, "spectrum", "--kind", "sharp", "--d", "2",
                       "--s", "1", "--nmax", "5", "--format", "csv")
    assert code == EXIT_OK
    assert out == "n,sigma,r\n1,1.0,1\n2,0.5,2\n3,0.5,2\n4,0.5,2\n5,0.5,2\n"


def test_spectrum_table_json_round_trip(capsys):
    code, out, _ = run(capsys, "spectrum", "--kind", "star", "--d", "2",
                       "--s", "0.7", "--nmax", "9")
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["kind"] == "star(0.7)" and payload["d"] == 2
    values = payload["values"]
    assert len(values) == 9 and values[0] == 1.0
    assert values == sorted(values, reverse=True)


def test_spectrum_rejects_n_and_nmax_together(capsys):
    code, _, err = run(capsys, "spectrum", "--kind", "sharp", "--d", "2",
                       "--s", "1", "--n", "3", "--nmax", "5")
    assert code == EXIT_ARGS and "not allowed with" in err


# -- verify -------------------------------------------------------------------

def test_verify_single_formula_passes(capsys):
    code, out, _ = run(capsys, "verify", "--formula", "sharp-upper-43",
                       "--d", "2", "--s", "1")
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["pass"] is True and payload["violations"] == []
    assert payload["checked"] > 900
    assert payload["max_slack"] < 0.0


def test_verify_all_reports_every_pointwise_formula(capsys):
    code, out, _ = run(capsys, "verify", "--formula", "all", "--d", "2",
                       "--s", "1", "--rmax", "500", "--nmax", "10000")
    assert code == EXIT_OK
    payload = json.loads(out)
    names = [record["formula"] for record in payload]
    assert names == ["sharp-upper-43", "sharp-lower-43", "tensor-trick-45",
                     "p-squared", "pre-upper-46", "pre-lower-47",
                     "plus-upper-49", "plus-lower-49", "star-upper-410",
                     "star-lower-410"]
    assert all(record["pass"] for record in payload)


def test_verify_all_with_m_adds_polynomial_family(capsys):
    code, out, _ = run(capsys, "verify", "--formula", "all", "--d", "2",
                       "--s", "1", "--m", "2", "--rmax", "500",
                       "--nmax", "10000")
    assert code == EXIT_OK
    names = {record["formula"] for record in json.loads(out)}
    assert {"intm-upper-413", "intm-lower-413"} <= names


def test_verify_qpt_default_pair(capsys):
    code, out, _ = run(capsys, "verify", "--formula", "qpt", "--s", "1")
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["pass"] is True
    assert payload["t"] == 8.0
    assert payload["C_t"] == pytest.approx(math.exp(2.0))
    assert payload["slack"] == pytest.approx(-10.696, abs=1e-3)


def test_verify_qpt_weak_pair_fails(capsys):
    code, out, _ = run(capsys, "verify", "--formula", "qpt", "--s", "1",
                       "--t", "0.01", "--Ct", "1")
    assert code == EXIT_CHECK
    assert json.loads(out)["pass"] is False


def test_verify_qpt_rejects_bad_eps_grid(capsys):
    code, _, err = run(capsys, "verify", "--formula", "qpt", "--s", "1",
                       "--eps-grid", "0.5,1.5")
    assert code == EXIT_ARGS and "(0, 1)" in err


def test_verify_unknown_formula(capsys):
    code, _, err = run(capsys, "verify", "--formula", "nope", "--d", "2",
                       "--s", "1")
    assert code == EXIT_ARGS and "invalid choice" in err


def test_verify_missing_parameters(capsys):
    code, _, err = run(capsys, "verify", "--formula", "sharp-upper-43",
                       "--s", "1")
    assert code == EXIT_ARGS and "requires --d" in err
    code, _, err = run(capsys, "verify", "--formula", "intm-upper-413",
                       "--d", "2", "--s", "2")
    assert code == EXIT_ARGS and "requires --m" in err


# -- tract --------------------------------------------------------------------

def test_tract_sharp_bytes(capsys):
    code, out, _ = run(capsys, "tract", "--kind", "sharp", "--s", "1",
                       "--d", "2", "--eps", "0.3333334")
    assert code == EXIT_OK
    assert out == '{"n":"6"}\n'


def test_tract_enclosure_matches_library(capsys):
    code, out, _ = run(capsys, "tract", "--kind", "plus", "--s", "1",
                       "--d", "2", "--eps", "0.2", "--exact")
    assert code == EXIT_OK
    payload = json.loads(out)
    enclosure = info_complexity_bounds(WeightKind.plus(1.0), 0.2, 2, exact=True)
    assert payload == {"exact": str(enclosure.exact),
                       "kind": "plus(1)",
                       "lower": str(enclosure.lower),
                       "upper": str(enclosure.upper)}


def test_tract_rejects_eps_outside_unit_interval(capsys):
    code, _, err = run(capsys, "tract", "--kind", "sharp", "--s", "1",
                       "--d", "2", "--eps", "1.5")
    assert code == EXIT_ARGS and "(0, 1)" in err


# -- cross and trace ----------------------------------------------------------

CROSS_2_2 = "k_1,k_2,product\n0,0,1\n-1,0,2\n0,-1,2\n0,1,2\n1,0,2\n"


def test_cross_stdout_bytes(capsys):
    code, out, _ = run(capsys, "cross", "--r", "2", "--d", "2")
    assert code == EXIT_OK and out == CROSS_2_2


def test_cross_out_file_and_summary(capsys, tmp_path):
    target = tmp_path / "points.csv"
    code, out, _ = run(capsys, "cross", "--r", "2", "--d", "2",
                       "--out", str(target))
    assert code == EXIT_OK
    assert target.read_text() == CROSS_2_2
    assert json.loads(out) == {"path": str(target), "rows": "5"}


def test_trace_exact_bytes(capsys):
    code, out, _ = run(capsys, "trace", "--d", "2", "--s", "1",
                       "--rs", "100,1000,10000")
    assert code == EXIT_OK
    assert out == ("n,ratio,constant\n"
                   "1529,2.085274154994305,4.0\n"
                   "24277,2.4043097497645114,4.0\n"
                   "334673,2.6308889903367674,4.0\n")


def test_trace_rejects_radius_one(capsys):
    code, _, err = run(capsys, "trace", "--d", "2", "--s", "1", "--rs", "1,10")
    assert code == EXIT_ARGS and err.startswith("crossnum:")


# -- guard plumbing and failure hygiene ----------------------------------------

def test_resource_exit_code(capsys):
    code, _, err = run(capsys, "cross", "--r", "100", "--d", "2",
                       "--max-enum", "10")
    assert code == EXIT_RESOURCE and "resource limit" in err


def test_env_guard_honored(capsys, monkeypatch):
    monkeypatch.setenv("CROSSNUM_MAX_ENUM", "10")
    code, _, err = run(capsys, "cross", "--r", "100", "--d", "2")
    assert code == EXIT_RESOURCE and "resource limit" in err
    # an explicit flag wins over the environment
    code, out, _ = run(capsys, "cross", "--r", "100", "--d", "2",
                       "--max-enum", "100000")
    assert code == EXIT_OK and out.count("\n") == 1530  # header + C(100, 2)


def test_failed_run_leaves_no_out_file(capsys, tmp_path):
    target = tmp_path / "never.json"
    code, _, _ = run(capsys, "tract", "--kind", "intm", "--d", "2",
                     "--eps", "0.5", "--out", str(target))
    assert code == EXIT_ARGS and not target.exists()
    code, _, _ = run(capsys, "cross", "--r", "100", "--d", "2",
                     "--max-enum", "10", "--out", str(target))
    assert code == EXIT_RESOURCE and not target.exists()


def test_out_file_json(capsys, tmp_path):
    target = tmp_path / "count.json"
    code, out, _ = run(capsys, "count", "--r", "2", "--d", "3",
                       "--out", str(target))
    assert code == EXIT_OK and out == ""
    assert target.read_text() == '{"count":"7","d":3,"r":2}\n'


def test_missing_subcommand_is_argument_error(capsys):
    assert main([]) == EXIT_ARGS
    capsys.readouterr()


def test_help_exits_cleanly(capsys):
    assert main(["--help"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "count" in out and "trace" in out


def test_parser_is_buildable_without_side_effects():
    parser = build_parser()
    args = parser.parse_args(["count", "--r", "3", "--d", "2"])
    assert args.command == "count" and args.r == 3 and args.d == 2
