ACCEPTANCE = {}


def record(criterion, ok, detail):
    """Store one acceptance verdict; printed now and again in the terminal summary."""
    ok = bool(ok)
    prev = ACCEPTANCE.get(criterion)
    if prev is not None:
        ok = ok and prev[0]
        detail = f"{prev[1]}; {detail}"
    ACCEPTANCE[criterion] = (ok, detail)
    print(f"criterion {criterion}: {'PASS' if ok else 'FAIL'} ({detail})")
    return ok


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for criterion in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[criterion]
        terminalreporter.write_line(f"criterion {criterion:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
