_criterion_lines = []


def record_criterion(line: str):
    """Collect a criterion verdict line for the terminal summary."""
    _criterion_lines.append(line)


def pytest_terminal_summary(terminalreporter):
    if not _criterion_lines:
        return
    terminalreporter.section("acceptance criteria")
    for line in _criterion_lines:
        terminalreporter.write_line(line)
