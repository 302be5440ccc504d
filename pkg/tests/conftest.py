import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS, TITLES
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(TITLES):
        if n in RESULTS:
            ok, detail = RESULTS[n]
            terminalreporter.write_line(
                f"criterion {n} ({TITLES[n]}): {'PASS' if ok else 'FAIL'} {detail}")
        else:
            terminalreporter.write_line(f"criterion {n} ({TITLES[n]}): NOT RUN")
