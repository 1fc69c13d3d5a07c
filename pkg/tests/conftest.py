def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """Print one line per acceptance criterion after the run."""
    try:
        import test_acceptance
    except ImportError:
        return
    results = test_acceptance.RESULTS
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        title, status, elapsed = results[number]
        timing = f"  [{elapsed:.1f}s]" if elapsed is not None else ""
        terminalreporter.write_line(
            f"criterion {number}: {status:<4} {title}{timing}")
