import os
import subprocess
import sys
import time

import pytest

ACCEPTANCE = {}


def record(criterion, ok, detail=""):
    ACCEPTANCE[criterion] = (bool(ok), detail)


@pytest.fixture(scope="session")
def fig2_default_run(tmp_path_factory):
    """One default `tdwell fig2` run shared by the acceptance tests; returns (path, seconds)."""
    out = tmp_path_factory.mktemp("fig2") / "fig2.csv"
    t0 = time.perf_counter()
    proc = subprocess.run([sys.executable, "-m", "tdwell.cli", "fig2", "-o", str(out)],
                          capture_output=True, text=True, env=dict(os.environ))
    elapsed = time.perf_counter() - t0
    assert proc.returncode == 0, proc.stderr
    return out, elapsed


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {k}: {detail}")
