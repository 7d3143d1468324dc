"""Collects acceptance verdicts and prints one line per criterion at the end of the run."""
from collections import OrderedDict

ACCEPTANCE = OrderedDict()


def record(criterion, clause, ok, detail=""):
    """Store one clause verdict; the caller asserts ``ok`` afterwards."""
    ACCEPTANCE.setdefault(criterion, []).append((clause, bool(ok), detail))
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {criterion} / {clause}" + (f": {detail}" if detail else "")
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for criterion in sorted(ACCEPTANCE):
        clauses = ACCEPTANCE[criterion]
        verdict = "PASS" if all(ok for _, ok, _ in clauses) else "FAIL"
        failed = [f"{c} ({d})" if d else c for c, ok, d in clauses if not ok]
        suffix = f"  failing: {'; '.join(failed)}" if failed else f"  ({len(clauses)} clauses)"
        terminalreporter.write_line(f"{verdict}  criterion {criterion:>2}{suffix}")
