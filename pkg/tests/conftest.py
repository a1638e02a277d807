import numpy as np
import pytest

from syncgames import _backend, sdp

BACKENDS = ["python"] + (["cython"] if _backend.compiled is not None else [])


class DualityAudit:
    """Records every elliptope solve and checks weak duality independently."""

    def __init__(self):
        self.solves = 0
        self.violations = []

    def __call__(self, a, sol):
        self.solves += 1
        scale = max(1.0, float(np.abs(a).sum()))
        lmin = float(np.linalg.eigvalsh(np.diag(sol.dual) - a)[0])
        p_ok = np.allclose(np.diag(sol.primal), 1.0, atol=1e-9) and (
            float(np.linalg.eigvalsh(sol.primal)[0]) >= -1e-9 * a.shape[0]
        )
        if lmin < -1e-9 * scale or sol.upper < sol.value - 1e-10 * scale or not p_ok:
            self.violations.append((a.shape[0], sol.value, sol.upper, lmin))


AUDIT = DualityAudit()
sdp.observers.append(AUDIT)


@pytest.fixture(scope="session")
def duality_audit():
    return AUDIT


@pytest.fixture(params=BACKENDS)
def backend(request):
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)




# -- acceptance reporting ------------------------------------------------------

ACCEPTANCE = {}


def pytest_collection_modifyitems(session, config, items):
    """Run the acceptance suite last so the duality audit covers the whole run."""
    items.sort(key=lambda it: it.fspath.basename == "test_acceptance.py")


def _criterion(nodeid):
    name = nodeid.split("::")[-1]
    if "test_acceptance.py" not in nodeid or not name.startswith("test_criterion_"):
        return None
    return int(name[len("test_criterion_"):].split("_")[0])


def pytest_runtest_logreport(report):
    num = _criterion(report.nodeid)
    if num is None:
        return
    if report.when == "call" or report.outcome != "passed":
        ok = report.outcome == "passed"
        ACCEPTANCE[num] = ACCEPTANCE.get(num, True) and ok


def pytest_terminal_summary(terminalreporter):
    terminalreporter.write_line(
        f"elliptope weak-duality audit: {AUDIT.solves} solves, {len(AUDIT.violations)} violations"
    )
    if ACCEPTANCE:
        from test_acceptance import CRITERIA

        terminalreporter.section("acceptance criteria")
        for num in sorted(CRITERIA):
            if num in ACCEPTANCE:
                status = "PASS" if ACCEPTANCE[num] else "FAIL"
                terminalreporter.write_line(f"criterion {num:2d} {status}  {CRITERIA[num]}")
