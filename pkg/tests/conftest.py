"""Shared pytest hooks: per-criterion summary for the acceptance suite."""

CRITERIA = {
    "test_criterion_1": "criterion 1: cost ledger totals exact to the minor unit",
    "test_criterion_2": "criterion 2: component value at reporting precision",
    "test_criterion_3": "criterion 3: discounted stated-preference comparison",
    "test_criterion_4": "criterion 4: survey batch aggregates",
    "test_criterion_5": "criterion 5: arithmetic property suites",
    "test_criterion_6": "criterion 6: service concurrency and rejection contract",
}


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    outcomes = {}
    for status in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(status, []):
            nodeid = getattr(report, "nodeid", "")
            if "test_acceptance.py" not in nodeid:
                continue
            for key in CRITERIA:
                if key in nodeid:
                    outcomes[key] = "PASS" if status == "passed" else "FAIL"
    if not outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for key, label in CRITERIA.items():
        if key in outcomes:
            terminalreporter.write_line(f"{outcomes[key]}  {label}")
