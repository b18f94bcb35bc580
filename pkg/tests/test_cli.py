"""Command-line interface: output formats, exit codes, CSV contract."""

import json
import subprocess
import sys
from fractions import Fraction

from binexceed.cli import format_decimal, main, parse_rational


def run_cli(*args, cwd=None):
    return subprocess.run([sys.executable, "-m", "binexceed.cli", *args],
                          capture_output=True, text=True, cwd=cwd)


class TestDecimalRendering:
    def test_fifteen_digits(self):
        assert format_decimal(Fraction(1, 4), 15) == "0.250000000000000"
        assert format_decimal(Fraction(821, 3125), 15) == "0.262720000000000"

    def test_round_half_even(self):
        assert format_decimal(Fraction(5, 100), 1) == "0.0"
        assert format_decimal(Fraction(15, 100), 1) == "0.2"
        assert format_decimal(Fraction(25, 1000), 2) == "0.02"
        assert format_decimal(Fraction(35, 1000), 2) == "0.04"

    def test_never_through_floats(self):
        # 10^-25 is invisible to a double but must influence rounding
        x = Fraction(5, 1000) + Fraction(1, 10**25)
        assert format_decimal(x, 2) == "0.01"

    def test_roundtrip_parse(self):
        for text in ("1/4", "821/3125", "0", "7/27", "0.057"):
            value = parse_rational(text)
            assert parse_rational(str(value)) == value


class TestTailCommand:
    def test_equality_case(self):
        result = run_cli("tail", "2", "1/2")
        assert result.returncode == 0
        assert "1/4 (0.250000000000000)" in result.stdout

    def test_exact_and_decimal(self):
        result = run_cli("tail", "5", "1/5")
        assert result.returncode == 0
        assert "821/3125 (0.262720000000000)" in result.stdout
        assert "m = 2" in result.stdout and "mean = 1" in result.stdout

    def test_zero_probability(self):
        result = run_cli("tail", "5", "0")
        assert result.returncode == 0
        assert "tail = 0" in result.stdout

    def test_decimal_probability_parsing(self):
        result = run_cli("tail", "5", "0.2")
        assert "821/3125" in result.stdout

    def test_parse_failure_is_usage_error(self):
        assert run_cli("tail", "5", "abc").returncode == 2
        assert run_cli("tail", "5", "3/2").returncode == 2


class TestCheckCommand:
    def test_theorem_equality(self):
        result = run_cli("check", "2", "1/2")
        assert result.returncode == 0
        assert "regime = theorem" in result.stdout
        assert "tail > 1/4: FALSE" in result.stdout
        assert "equality case (n = 2, p = 1/2): TRUE" in result.stdout

    def test_proposition_regime(self):
        result = run_cli("check", "10", "1/100")
        assert result.returncode == 0
        assert "regime = proposition" in result.stdout

    def test_proposition_routing_small_n(self):
        result = run_cli("check", "2", "1/10")
        assert result.returncode == 0
        assert "regime = proposition" in result.stdout

    def test_out_of_hypothesis_query_exits_one(self):
        result = run_cli("check", "3", "1")
        assert result.returncode == 1

    def test_undecided_exits_three(self):
        # a rational within 2^-6000 of ln(4/3): undecidable at the 4096 cap
        from binexceed.enclosure import c_enclosure
        p = c_enclosure(6000).mid
        result = run_cli("check", "1", f"{p.numerator}/{p.denominator}")
        assert result.returncode == 3
        assert "undecided" in result.stderr


class TestOptimalityCommand:
    def test_quarter(self):
        result = run_cli("optimality", "1/4", "--nmax", "100")
        assert result.returncode == 0
        assert "n = 2" in result.stdout and "15/64" in result.stdout

    def test_limit_certificate(self):
        result = run_cli("optimality", "287682/1000000", "--nmax", "50")
        assert result.returncode == 0
        assert "no finite counterexample" in result.stdout

    def test_candidate_above_c_exits_two(self):
        assert run_cli("optimality", "1/2", "--nmax", "5").returncode == 2


class TestVerifyCommand:
    def test_anderson_samuels(self, tmp_path):
        out = tmp_path / "as.json"
        result = run_cli("verify", "anderson-samuels", "--nmax", "30",
                         "--mmax", "5", "--out", str(out))
        assert result.returncode == 0
        payload = json.loads(out.read_text())
        assert payload["passed"] is True
        assert all(s["verdict"] == "TRUE" for s in payload["steps"])

    def test_proposition(self, tmp_path):
        out = tmp_path / "prop.json"
        result = run_cli("verify", "proposition", "--nmax", "8",
                         "--grid", "50", "--out", str(out))
        assert result.returncode == 0
        assert json.loads(out.read_text())["passed"] is True

    def test_main_small(self, tmp_path):
        out = tmp_path / "main.json"
        result = run_cli("verify", "main", "--nmax", "6", "--grid", "40",
                         "--jobs", "1", "--out", str(out))
        assert result.returncode == 0

    def test_unwritable_out_exits_four(self):
        result = run_cli("verify", "anderson-samuels", "--nmax", "5",
                         "--mmax", "3", "--out", "/nonexistent/r.json")
        assert result.returncode == 4

    def test_bad_subject_exits_two(self):
        assert run_cli("verify", "nonsense").returncode == 2


class TestFigureCommand:
    def test_anchor_rows(self, tmp_path):
        out = tmp_path / "fig.csv"
        result = run_cli("figure", "5", "--points", "1000", "--out", str(out))
        assert result.returncode == 0
        lines = out.read_text(encoding="utf-8").splitlines()
        assert lines[0] == "p,tail,segment"
        assert "0.200000000000,0.262720000000,HIGH" in lines
        assert "0.057000000000,0.254309751687,LOW" in lines
        assert "0.058000000000,0.258255193877,MID" in lines
        assert len(lines) == 1000

    def test_byte_identical_across_runs(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        run_cli("figure", "3", "--points", "200", "--out", str(a))
        run_cli("figure", "3", "--points", "200", "--out", str(b))
        assert a.read_bytes() == b.read_bytes()

    def test_lf_line_endings(self, tmp_path):
        out = tmp_path / "fig.csv"
        run_cli("figure", "2", "--points", "50", "--out", str(out))
        raw = out.read_bytes()
        assert b"\r" not in raw and raw.endswith(b"\n")

    def test_tails_strictly_inside_unit_interval(self, tmp_path):
        out = tmp_path / "fig.csv"
        run_cli("figure", "4", "--points", "100", "--out", str(out))
        for line in out.read_text().splitlines()[1:]:
            tail = Fraction(line.split(",")[1])
            assert 0 < tail < 1

    def test_rejects_too_few_points(self):
        assert run_cli("figure", "5", "--points", "5").returncode == 2

    def test_unwritable_path_exits_four(self):
        assert run_cli("figure", "5", "--points", "20",
                       "--out", "/nonexistent/f.csv").returncode == 4


class TestMainEntry:
    def test_in_process_invocation(self, tmp_path, capsys):
        code = main(["tail", "3", "1/3"])
        assert code == 0
        assert "7/27" in capsys.readouterr().out

    def test_precision_flag_validation(self):
        assert main(["check", "2", "1/2", "--precision-bits", "4"]) == 2
        assert main(["check", "2", "1/2", "--precision-bits", "9999"]) == 2
