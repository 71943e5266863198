"""End-to-end command-line behavior: exit codes, reports, file output."""

import csv
import json

import pytest

from bksym import cli
from bksym import numerix as nx


def run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture(scope="module")
def full_report(tmp_path_factory):
    """One aggregate run shared by every report assertion."""
    path = tmp_path_factory.mktemp("report") / "report.json"
    code = cli.main(["report", "--all", "--json", str(path)])
    return code, json.loads(path.read_text()), path.read_bytes()


class TestVerifySymmetries:
    def test_exit_and_statuses(self, capsys, tmp_path):
        out_json = tmp_path / "s.json"
        code, out, err = run(capsys, "verify", "symmetries",
                             "--json", str(out_json))
        assert code == 0
        report = json.loads(out_json.read_text())
        statuses = {c["id"]: c["status"] for c in report["claims"]}
        assert len(statuses) == 15
        assert statuses["sym:G1a"] == "pass"
        assert statuses["sym:G2a"] == "corrected"
        assert statuses["sym:G3a"] == "corrected"
        assert statuses["sym:G6a"] == "corrected"
        assert statuses["sym:G6a-bt"] == "corrected"
        assert sorted(statuses.values()).count("pass") == 11
        assert "warning: sym:G2a" in err

    def test_claim_record_shape(self, capsys, tmp_path):
        out_json = tmp_path / "s.json"
        run(capsys, "verify", "symmetries", "--json", str(out_json))
        report = json.loads(out_json.read_text())
        assert report["tool-version"]
        assert report["assumptions"]
        ids = [c["id"] for c in report["claims"]]
        assert ids == sorted(ids)
        for c in report["claims"]:
            assert set(c) == {"id", "anchor", "source", "status",
                              "pass", "residual"}
            assert c["source"] in ("paper", "derived", "trivial")

    def test_json_byte_identical(self, capsys, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        run(capsys, "verify", "symmetries", "--json", str(a))
        run(capsys, "verify", "symmetries", "--json", str(b))
        assert a.read_bytes() == b.read_bytes()

    def test_timings_only_when_asked(self, capsys, tmp_path):
        out_json = tmp_path / "s.json"
        run(capsys, "verify", "symmetries", "--json", str(out_json),
            "--timings")
        timed = json.loads(out_json.read_text())
        assert all("seconds" in c for c in timed["claims"])
        run(capsys, "verify", "symmetries", "--json", str(out_json))
        plain = json.loads(out_json.read_text())
        assert all("seconds" not in c for c in plain["claims"])

    def test_bound_parameters(self, capsys):
        code, out, _ = run(capsys, "verify", "symmetries",
                           "--params", "alpha=5/3,beta=7/4")
        assert code == 0
        assert "15 claims" in out

    def test_bad_parameter_name(self, capsys):
        code, _, err = run(capsys, "verify", "symmetries",
                           "--params", "zeta=1")
        assert code == 2
        assert "usage error" in err


class TestVerifyConservation:
    def test_both_lanes(self, capsys):
        code, out, _ = run(capsys, "verify", "conservation")
        assert code == 0
        assert "17 claims: 10 pass, 7 corrected" in out

    def test_printed_lane_all_corrected(self, capsys):
        code, out, _ = run(capsys, "verify", "conservation",
                           "--printed")
        assert code == 0
        assert "7 claims: 7 corrected" in out
        assert "reconstruction from G2a-corrected passes" in out

    def test_constructed_lane_all_pass(self, capsys):
        code, out, _ = run(capsys, "verify", "conservation",
                           "--construct")
        assert code == 0
        assert "10 claims: 10 pass" in out

    def test_which_filter(self, capsys):
        code, out, _ = run(capsys, "verify", "conservation",
                           "--which", "G1a")
        assert code == 0
        assert "flux:G1a:printed" in out
        assert "flux:G1a:constructed" in out
        assert "2 claims" in out

    def test_unknown_id_is_usage_error(self, capsys):
        code, _, err = run(capsys, "verify", "conservation",
                           "--which", "G9")
        assert code == 2
        assert "unknown claim id: G9" in err

    def test_lane_flags_rejected_elsewhere(self, capsys):
        code, _, err = run(capsys, "verify", "adjoint",
                           "--which", "G1a")
        assert code == 2
        assert "conservation suite" in err


class TestVerifyAdjoint:
    def test_display_diff_and_multiplier(self, capsys):
        code, out, _ = run(capsys, "verify", "adjoint")
        assert code == 0
        assert "[CORRECTED] adjoint:display: computed minus printed:" \
            " 4*beta*u[x,y]*v[x]; -4*beta*u[y,y]" in out
        assert "[PASS] adjoint:constant-multiplier: lambda = 0;" \
            " constraints: none" in out


class TestReduce:
    def test_list(self, capsys):
        code, out, _ = run(capsys, "reduce", "--list")
        assert code == 0
        lines = out.strip().splitlines()
        assert len(lines) == 18
        assert "1.2-to-3.2: main -> 3.2" in lines

    def test_verify_all_flags_failed_record(self, capsys):
        code, out, _ = run(capsys, "reduce", "--verify", "all")
        assert code == 1
        assert "[FAIL] reduce:3.2-via-G3b:" in out
        assert "10 pass, 7 corrected, 1 fail" in out

    def test_verify_single(self, capsys):
        code, out, _ = run(capsys, "reduce", "--verify", "1.2-to-3.2")
        assert code == 0
        assert "constant factor 1" in out

    def test_unknown_record(self, capsys):
        code, _, err = run(capsys, "reduce", "--verify", "bogus")
        assert code == 2
        assert "unknown reduction record" in err

    def test_exactly_one_mode_required(self, capsys):
        assert run(capsys, "reduce")[0] == 2
        assert run(capsys, "reduce", "--list", "--show", "x")[0] == 2

    def test_show_corrected_record(self, capsys):
        code, out, _ = run(capsys, "reduce", "--show", "3.24-to-3.25")
        assert code == 0
        assert "record 3.24-to-3.25 [corrected]" in out
        assert "computed target:" in out
        assert "claimed target (3.25):" in out
        assert "diff: -6*a^3*b[]^4;" in out
        assert "assuming m[n] != 0" in out

    def test_show_verified_record(self, capsys):
        code, out, _ = run(capsys, "reduce", "--show", "1.2-to-3.2")
        assert code == 0
        assert "diff: exact match up to constant factor 1" in out


@pytest.fixture()
def pulse_ic(tmp_path):
    tw = nx.soliton(1.0, 0.0, 1.0)
    path = tmp_path / "ic.txt"
    path.write_text("# shifted pulse data\n"
                    f"{tw.profile(-10.0) - 1/6} {tw.profile(-10.0, 1)}"
                    f" {tw.profile(-10.0, 2)}\n")
    return path


class TestSolve:
    def test_csv_round_trip(self, capsys, tmp_path, pulse_ic):
        out_csv = tmp_path / "sol.csv"
        code, out, _ = run(capsys, "solve", "--ode", "3.27",
                           "--ic", str(pulse_ic), "--span=-10,10",
                           "--tol", "1e-12", "--csv", str(out_csv))
        assert code == 0
        assert "max local error" in out
        with open(out_csv) as fh:
            rows = list(csv.DictReader(fh))
        assert list(rows[0]) == ["n", "m", "m_n", "m_nn",
                                 "local_error"]
        tw = nx.soliton(1.0, 0.0, 1.0)
        worst = max(abs(float(r["m"]) - (tw.profile(float(r["n"]))
                                         - 1 / 6)) for r in rows)
        assert worst < 1e-7
        assert max(float(r["local_error"]) for r in rows) <= 1e-12

    def test_singular_start_rejected(self, capsys, pulse_ic):
        code, _, err = run(capsys, "solve", "--ode", "3.21",
                           "--ic", str(pulse_ic), "--span", "0,1",
                           "--params", "alpha=1.0")
        assert code == 2
        assert "not finite" in err

    def test_unknown_equation(self, capsys, pulse_ic):
        code, _, err = run(capsys, "solve", "--ode", "9.99",
                           "--ic", str(pulse_ic), "--span", "0,1")
        assert code == 2
        assert "unknown equation id" in err

    def test_malformed_span(self, capsys, pulse_ic):
        code, _, err = run(capsys, "solve", "--ode", "3.27",
                           "--ic", str(pulse_ic), "--span", "zero,1")
        assert code == 2

    def test_wrong_initial_value_count(self, capsys, tmp_path):
        path = tmp_path / "ic.txt"
        path.write_text("1.0 2.0\n")
        code, _, err = run(capsys, "solve", "--ode", "3.27",
                           "--ic", str(path), "--span", "0,1")
        assert code == 2
        assert "initial values" in err

    def test_missing_ic_file(self, capsys, tmp_path):
        code, _, err = run(capsys, "solve", "--ode", "3.27",
                           "--ic", str(tmp_path / "nope.txt"),
                           "--span", "0,1")
        assert code == 2


class TestLift:
    def test_pulse_report(self, capsys, tmp_path):
        out_json = tmp_path / "lift.json"
        code, out, _ = run(capsys, "lift", "--wave", "1,1,1",
                           "--check-residual", "200", "--seed", "3",
                           "--json", str(out_json))
        assert code == 0
        assert "amplitude 0.214286" in out
        report = json.loads(out_json.read_text())
        (claim,) = report["claims"]
        assert claim["id"] == "lift:pulse-residual"
        assert claim["pass"] is True
        assert "over 200 points" in claim["residual"]
        assert report["seed"] == 3

    def test_degenerate_parameters(self, capsys):
        code, _, err = run(capsys, "lift", "--wave", "1,-0.75,1")
        assert code == 2
        assert "amplitude" in err

    def test_malformed_wave(self, capsys):
        assert run(capsys, "lift", "--wave", "1,1")[0] == 2


class TestReport:
    def test_requires_all_flag(self, capsys):
        code, _, err = run(capsys, "report")
        assert code == 2
        assert "--all" in err

    def test_aggregates_every_suite(self, full_report):
        code, report, _ = full_report
        assert code == 1    # stated claims genuinely fail
        ids = [c["id"] for c in report["claims"]]
        assert len(ids) == 102
        assert ids == sorted(ids)
        prefixes = {i.split(":", 1)[0] for i in ids}
        assert prefixes == {"sym", "flux", "adjoint", "reduce",
                            "ode-sym", "linearize", "scan", "numeric"}

    def test_failing_claims_are_the_frozen_trio(self, full_report):
        _, report, _ = full_report
        failed = sorted(c["id"] for c in report["claims"]
                        if c["status"] == "fail")
        assert failed == ["ode-sym:3.18:G3e", "ode-sym:3.2:G3b",
                          "reduce:3.2-via-G3b"]
        for c in report["claims"]:
            if c["status"] == "fail":
                assert c["source"] == "paper"

    def test_status_census(self, full_report):
        _, report, _ = full_report
        census: dict = {}
        for c in report["claims"]:
            census[c["status"]] = census.get(c["status"], 0) + 1
        assert census == {"pass": 73, "corrected": 19,
                          "consistent-with-claim": 5, "skipped": 2,
                          "fail": 3}

    def test_scans_report_consistency_not_proof(self, full_report):
        _, report, _ = full_report
        scans = [c for c in report["claims"]
                 if c["id"].startswith("scan:")]
        assert len(scans) == 5
        for c in scans:
            assert c["status"] == "consistent-with-claim"
            assert "not a proof" in c["residual"]

    def test_numeric_claims_present(self, full_report):
        _, report, _ = full_report
        rows = {c["id"]: c for c in report["claims"]}
        assert rows["numeric:pulse-residual"]["status"] == "pass"
        assert rows["numeric:zero-solution"]["source"] == "trivial"
        assert rows["numeric:third-order-convergence"]["status"] \
            == "pass"
        assert rows["numeric:divergence:G6a-corrected"]["status"] \
            == "skipped"
        assert rows["numeric:divergence:G1a"]["status"] == "pass"
        assert report["seed"] == 0


class TestEntryPoint:
    def test_help_exits_zero(self, capsys):
        assert cli.main(["--help"]) == 0

    def test_unknown_command_exits_two(self, capsys):
        assert cli.main(["frobnicate"]) == 2
