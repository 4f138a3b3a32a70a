import json
import subprocess

import pytest

from dpr_bounds.cli import main, parse_range


def run_cli(args, tmp_path=None):
    return main(args)


def read_rows(path):
    """Parse a CSV written by the CLI into (comments, list-of-dict rows)."""
    comments, rows, header = [], [], None
    for line in open(path):
        line = line.rstrip("\n")
        if line.startswith("#"):
            comments.append(line)
        elif header is None:
            header = line.split(",")
        else:
            rows.append(dict(zip(header, line.split(","))))
    return comments, rows


class TestParsing:
    def test_parse_range(self):
        assert parse_range("0:25:100") == [0.0, 25.0, 50.0, 75.0, 100.0]
        assert parse_range("0.9:0.05:1.0") == pytest.approx([0.9, 0.95, 1.0])

    def test_parse_range_rejects_bad(self):
        with pytest.raises(ValueError):
            parse_range("1:0:2")
        with pytest.raises(ValueError):
            parse_range("5:1:2")
        with pytest.raises(ValueError):
            parse_range("abc")

    def test_usage_error_exit_code(self):
        with pytest.raises(SystemExit) as exc:
            main(["bsa-scan", "--protocol", "bb84"])
        assert exc.value.code == 1

    def test_bad_range_exit_code(self):
        assert main(["bsa-scan", "--d-range", "10:1:0"]) == 1


class TestBsaScan:
    def test_csv_structure_and_metadata(self, tmp_path):
        out = tmp_path / "bsa.csv"
        assert main(["bsa-scan", "--d-range", "0:50:100",
                     "--out", str(out)]) == 0
        comments, rows = read_rows(out)
        assert any("asymptote: protocol=cow" in c for c in comments)
        assert any("config: eta=0.1" in c for c in comments)
        assert len(rows) == 6  # 2 protocols x 3 distances
        first = [r for r in rows if r["protocol"] == "cow"][0]
        assert float(first["t"]) == 1.0
        assert float(first["chi"]) == 0.0

    def test_rate_decreases_with_distance(self, tmp_path):
        out = tmp_path / "bsa.csv"
        main(["bsa-scan", "--protocol", "dps", "--d-range", "10:20:90",
              "--out", str(out)])
        _, rows = read_rows(out)
        rates = [float(r["rate"]) for r in rows]
        assert all(a > b for a, b in zip(rates, rates[1:]))

    def test_byte_stable(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        argv = ["bsa-scan", "--d-range", "0:40:120", "--seed", "7"]
        main(argv + ["--out", str(a)])
        main(argv + ["--out", str(b)])
        assert a.read_bytes() == b.read_bytes()

    def test_untrusted_device_substitution(self, tmp_path):
        out_u = tmp_path / "u.csv"
        main(["bsa-scan", "--protocol", "cow", "--d-range", "40:10:40",
              "--untrusted-device", "--out", str(out_u)])
        _, rows = read_rows(out_u)
        # t column carries t*eta and the rate matches eta=1 at that value
        assert float(rows[0]["t"]) == pytest.approx(0.1 * 0.1)
        from dpr_bounds.bsa import optimize_bsa
        pt = optimize_bsa("cow", 0.01, 1.0)
        assert float(rows[0]["rate"]) == pytest.approx(pt.rate, rel=1e-9)


class TestAttackScan:
    def test_analytic_rows(self, tmp_path):
        out = tmp_path / "scan.csv"
        code = main(["attack-scan", "--protocol", "cow", "--protocol", "cowm2",
                     "--Q", "0", "--V-range", "0.92:0.04:1.0",
                     "--out", str(out)])
        assert code == 0
        _, rows = read_rows(out)
        assert len(rows) == 6
        v1 = [r for r in rows if float(r["V"]) == 1.0]
        for r in v1:
            assert float(r["r0"]) == pytest.approx(0.0714, abs=1e-3)
            assert float(r["mu_opt"]) == pytest.approx(0.4583, abs=2e-3)
        # the arbitrary-pairing variant is at least as robust
        for v in ("0.92", "0.96"):
            pair = {r["protocol"]: float(r["r0"]) for r in rows
                    if r["V"].startswith(v)}
            assert pair["cowm2"] >= pair["cow"] - 1e-9

    def test_r0_clamped_with_raw_column(self, tmp_path):
        # below the half-visibility threshold Eve reads everything at any mu
        out = tmp_path / "scan.csv"
        main(["attack-scan", "--protocol", "cow", "--Q", "0.1", "--V", "0.45",
              "--out", str(out)])
        _, rows = read_rows(out)
        assert float(rows[0]["r0"]) == 0.0
        assert float(rows[0]["r0_raw"]) < 0.0
        assert float(rows[0]["chi_AE"]) == 1.0
        assert rows[0]["feasible"] == "false"

    def test_json_format(self, tmp_path):
        out = tmp_path / "scan.json"
        main(["attack-scan", "--protocol", "cow", "--Q", "0", "--V", "0.95",
              "--format", "json", "--out", str(out)])
        doc = json.loads(out.read_text())
        assert doc["command"] == "attack-scan"
        assert doc["rows"][0]["protocol"] == "cow"
        assert isinstance(doc["rows"][0]["r0"], float)

    def test_attack_mismatch_rejected(self):
        assert main(["attack-scan", "--protocol", "cow",
                     "--attack", "1pa", "--V", "0.95"]) == 1


class TestRateVsDistance:
    def test_linearity_and_reference(self, tmp_path):
        out = tmp_path / "rates.csv"
        code = main(["rate-vs-distance", "--protocol", "cow",
                     "--protocol", "cowm2", "--V", "0.98", "--Q", "0",
                     "--d-range", "20:40:140", "--bsa-reference", "dps",
                     "--out", str(out)])
        assert code == 0
        comments, rows = read_rows(out)
        assert any("large distances" in c for c in comments)
        curves = {(r["protocol"], r["attack"]) for r in rows}
        assert curves == {("cow", "2pa"), ("cowm2", "1pa"), ("dps", "bsa")}
        # attack columns scale exactly linearly: r/(t*eta) is constant
        for key in (("cow", "2pa"), ("cowm2", "1pa")):
            sel = [r for r in rows if (r["protocol"], r["attack"]) == key]
            ratios = [float(r["rate_raw"]) / (float(r["t"]) * 0.1) for r in sel]
            assert max(ratios) - min(ratios) < 1e-12
        # attack bounds fall below the beam-splitting reference
        by_d = {}
        for r in rows:
            by_d.setdefault(r["distance_km"], {})[r["attack"]] = float(r["rate"])
        for d, vals in by_d.items():
            assert vals["2pa"] <= vals["bsa"]
            assert vals["1pa"] <= vals["bsa"]

    def test_twelve_km_is_three_db(self, tmp_path):
        out = tmp_path / "rates.csv"
        main(["rate-vs-distance", "--protocol", "cow", "--V", "0.98",
              "--d-range", "48:12:60", "--bsa-reference", "none",
              "--out", str(out)])
        _, rows = read_rows(out)
        ratio = float(rows[0]["rate"]) / float(rows[1]["rate"])
        assert ratio == pytest.approx(10 ** 0.3, rel=1e-12)  # ~ halves
        assert ratio == pytest.approx(2.0, rel=3e-3)


class TestVerifyCommand:
    def test_quick_verify_passes(self, tmp_path, capsys):
        out = tmp_path / "verify.json"
        assert main(["verify", "--out", str(out)]) == 0
        doc = json.loads(out.read_text())
        assert doc["passed"] is True
        names = {c["name"] for c in doc["checks"]}
        assert "cow_two_pulse_overlap_oracle" in names
        assert all(c["discrepancy"] <= c["tolerance"] for c in doc["checks"])


class TestVariantsCommand:
    def test_table(self, tmp_path):
        out = tmp_path / "variants.csv"
        assert main(["variants", "--mu", "0.3", "--distance", "50",
                     "--out", str(out)]) == 0
        comments, rows = read_rows(out)
        table = {r["variant"]: r for r in rows}
        assert float(table["Z_CHANNEL"]["sifting_rate"]) == 1.0
        assert float(table["ORIGINAL_COW"]["sifting_rate"]) == pytest.approx(
            2 * float(table["RANDOM_TRAIN_A_POSTERIORI"]["sifting_rate"]))
        assert any("optimal q=" in c for c in comments)


class TestThreadCap:
    def test_env_cap_respected(self, tmp_path, monkeypatch):
        monkeypatch.setenv("DPR_BOUNDS_THREADS", "1")
        out = tmp_path / "bsa.csv"
        assert main(["bsa-scan", "--d-range", "0:60:120",
                     "--out", str(out)]) == 0
        _, rows = read_rows(out)
        assert len(rows) == 6


class TestConsoleEntryPoint:
    def test_installed_script(self, tmp_path):
        out = tmp_path / "bsa.csv"
        proc = subprocess.run(
            ["dpr-bounds", "bsa-scan", "--d-range", "0:50:50",
             "--out", str(out)],
            capture_output=True, text=True)
        assert proc.returncode == 0
        assert out.exists()
