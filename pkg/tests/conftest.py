import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not (mod.RESULTS or mod.COMPANIONS):
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for cid, *_ in mod.CRITERIA:
        if cid in mod.RESULTS:
            tr.write_line(mod.format_line(cid, mod.RESULTS[cid]))
        else:
            tr.write_line(f"---- criterion {cid}: not run")
    for cid, *_ in mod.COMPANION_CHECKS:
        if cid in mod.COMPANIONS:
            tr.write_line(mod.format_line(cid, mod.COMPANIONS[cid], "companion"))
