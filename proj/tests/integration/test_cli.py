#!/usr/bin/env python3
"""End-to-end checks for the loosehc command-line driver.

Usage: test_cli.py <path-to-loosehc-binary>

Runs the binary against small configs in a temp directory and verifies exit
codes, CSV output, overrides, and rerun determinism.
"""

import subprocess
import sys
import tempfile
from pathlib import Path

FAILURES = []


def check(ok, label):
    status = "ok" if ok else "FAIL"
    print(f"  [{status}] {label}")
    if not ok:
        FAILURES.append(label)


def run_cli(binary, *args):
    return subprocess.run(
        [str(binary), *args], capture_output=True, text=True, timeout=300
    )


def strip_timestamp(text):
    lines = [ln for ln in text.splitlines() if not ln.startswith("# generated")]
    return "\n".join(lines)


def write_config(directory, name, text):
    path = Path(directory) / name
    path.write_text(text)
    return path


def main():
    if len(sys.argv) != 2:
        print("usage: test_cli.py <loosehc-binary>", file=sys.stderr)
        return 2
    binary = Path(sys.argv[1])
    if not binary.exists():
        print(f"binary not found: {binary}", file=sys.stderr)
        return 2

    with tempfile.TemporaryDirectory(prefix="loosehc-cli-") as tmp:
        tmp = Path(tmp)

        good = write_config(
            tmp,
            "spoiled.cfg",
            "# spoiled-pair statistics\n"
            "kind = spoiled-stats\n"
            "m = 10\n"
            "d = 6\n"
            "kappa = 1\n"
            "trials = 150\n"
            "seed = 2024\n",
        )

        print("stdout mode:")
        res = run_cli(binary, "spoiled-stats", "--config", good, "--out", "-")
        check(res.returncode == 0, f"exit code 0 (got {res.returncode})")
        lines = res.stdout.splitlines()
        check(len(lines) >= 3, "at least timestamp + header + one row")
        check(lines and lines[0].startswith("# generated"), "timestamp comment first")
        header = "m,d,kappa,trials,meanS1,meanS2,chi2_pvalue,unspoiled_freq,seed"
        check(len(lines) >= 2 and lines[1] == header, "spoiled-stats header")

        print("file output and determinism:")
        out1 = tmp / "run1.csv"
        out2 = tmp / "run2.csv"
        res1 = run_cli(binary, "spoiled-stats", "--config", good, "--out", out1)
        res2 = run_cli(
            binary, "spoiled-stats", "--config", good, "--out", out2, "--threads", "4"
        )
        check(res1.returncode == 0 and res2.returncode == 0, "both runs exit 0")
        check(out1.exists() and out2.exists(), "output files written")
        same = strip_timestamp(out1.read_text()) == strip_timestamp(out2.read_text())
        check(same, "reruns byte-identical after dropping timestamp")

        print("overrides:")
        res = run_cli(
            binary,
            "spoiled-stats",
            "--config",
            good,
            "--out",
            "-",
            "--trials-override",
            "75",
            "--seed",
            "42",
        )
        check(res.returncode == 0, "override run exits 0")
        rows = [
            ln
            for ln in res.stdout.splitlines()
            if ln and not ln.startswith("#") and not ln.startswith("m,")
        ]
        fields = rows[0].split(",") if rows else []
        check(len(fields) == 9, "data row has 9 columns")
        check(fields and fields[3] == "75", f"trials column shows override (got {fields[3:4]})")
        check(fields and fields[8] == "42", f"seed column shows override (got {fields[8:9]})")
        check(
            strip_timestamp(res.stdout) != strip_timestamp(out1.read_text()),
            "overridden output differs from original",
        )

        print("error handling:")
        bad_key = write_config(tmp, "badkey.cfg", "kind = spoiled-stats\nm = 10\nd = 6\nkappa = 1\nwibble = 3\n")
        res = run_cli(binary, "spoiled-stats", "--config", bad_key, "--out", "-")
        check(res.returncode == 2, f"unknown key exits 2 (got {res.returncode})")
        check("config error" in res.stderr, "unknown key reported as config error")

        indivisible = write_config(
            tmp, "indivisible.cfg", "kind = threshold-sweep\nn = 9\nk = 3\nc = 1\ntrials = 10\n"
        )
        res = run_cli(binary, "threshold-sweep", "--config", indivisible, "--out", "-")
        check(res.returncode == 3, f"divisibility violation exits 3 (got {res.returncode})")
        check("precondition" in res.stderr, "divisibility reported as precondition")

        res = run_cli(binary, "threshold-sweep", "--config", good, "--out", "-")
        check(res.returncode == 2, f"kind/subcommand mismatch exits 2 (got {res.returncode})")

        res = run_cli(binary, "spoiled-stats", "--config", tmp / "missing.cfg", "--out", "-")
        check(res.returncode == 2, f"missing config file exits 2 (got {res.returncode})")

        res = run_cli(binary)
        check(res.returncode == 2, f"missing subcommand exits 2 (got {res.returncode})")

    if FAILURES:
        print(f"\n{len(FAILURES)} integration check(s) failed", file=sys.stderr)
        return 1
    print("\nall integration checks passed")
    return 0


if __name__ == "__main__":
    sys.exit(main())
