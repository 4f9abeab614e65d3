import re

from hypothesis import settings

settings.register_profile("exact", deadline=None)
settings.load_profile("exact")

_ACCEPTANCE = re.compile(r"test_acceptance\.py::test_(\d{2})_(\w+)")


def pytest_runtest_logreport(report):
    """One visible verdict line per acceptance criterion."""
    if report.when != "call":
        return
    m = _ACCEPTANCE.search(report.nodeid)
    if m is None:
        return
    verdict = "PASS" if report.passed else "FAIL"
    name = m.group(2).replace("_", " ")
    print(f"\nACCEPTANCE {m.group(1)} ({name}): {verdict}", flush=True)
