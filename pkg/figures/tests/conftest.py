"""Session fixtures: generate input CSVs through the dpr-bounds CLI.

The renderers consume the primary package only through its command-line
CSV output, so the fixtures shell out to it.  Optimizer budgets are tiny
because only the file structure matters here, not bound quality.
"""

import subprocess
import sys

import pytest

FAST = ["--n-starts", "1", "--max-evals", "500", "--scalar-tol", "0.02"]


def run_bounds(args):
    cmd = [sys.executable, "-m", "dpr_bounds.cli"] + args
    proc = subprocess.run(cmd, capture_output=True, text=True)
    if proc.returncode not in (0, 3):  # 3 = budget exhausted, fine here
        raise RuntimeError(f"{' '.join(cmd)} failed:\n{proc.stderr}")


@pytest.fixture(scope="session")
def csv_dir(tmp_path_factory):
    root = tmp_path_factory.mktemp("sweeps")

    run_bounds(["bsa-scan", "--d-range", "0:30:150",
                "--out", str(root / "bsa.csv")])

    run_bounds(["attack-scan", "--Q", "0",
                "--V-range", "0.94:0.06:1.0"] + FAST +
               ["--out", str(root / "scan_all.csv")])

    run_bounds(["attack-scan", "--protocol", "cow",
                "--Q", "0", "--Q", "0.01", "--Q", "0.03", "--Q", "0.05",
                "--V-range", "0.86:0.02:1.0",
                "--out", str(root / "scan_cow_qs.csv")])

    run_bounds(["attack-scan", "--protocol", "cowm1",
                "--Q", "0", "--Q", "0.03", "--V-range", "0.94:0.06:1.0"]
               + FAST + ["--out", str(root / "scan_cowm1_qs.csv")])

    run_bounds(["attack-scan", "--protocol", "cowm2",
                "--Q", "0", "--Q", "0.01", "--Q", "0.03",
                "--V-range", "0.9:0.02:1.0",
                "--out", str(root / "scan_cowm2_qs.csv")])

    run_bounds(["attack-scan", "--protocol", "dps", "--attack", "1pa",
                "--V-range", "0.94:0.06:1.0"] + FAST +
               ["--out", str(root / "scan_dps_1pa.csv")])

    run_bounds(["rate-vs-distance", "--V", "0.98", "--Q", "0",
                "--d-range", "30:40:150"] + FAST +
               ["--out", str(root / "rates.csv")])
    return root
