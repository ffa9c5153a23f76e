import pytest
from hypothesis import HealthCheck, settings

from ybeloops import constructions as co

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.fixture
def record():
    def _record(num: int, ok: bool, detail: str):
        ACCEPTANCE[num] = (ok, detail)
    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[num]
        terminalreporter.write_line(f"criterion {num:2d}: {'PASS' if ok else 'FAIL'}  {detail}")


@pytest.fixture(scope="session")
def z3sq():
    return co.abelian_group((3, 3))


@pytest.fixture(scope="session")
def b53():
    return co.build_bpq(5, 3)


@pytest.fixture(scope="session")
def l3():
    return co.build_l3()


def small_descriptors():
    """Every small LBDS descriptor the tests treat as 'constructed instances'."""
    out = []
    for n in (3, 5, 7, 9, 15):
        out += [co.zn_descriptor(n, 1), co.zn_descriptor(n, -1)]
    for signs in ((1, 1), (1, -1), (-1, -1)):
        out.append(co.signed_descriptor((3, 3), signs))
        out.append(co.signed_descriptor((5, 5), signs))
    for signs in ((1, 1, 1), (1, 1, -1), (1, -1, -1), (-1, -1, -1)):
        out.append(co.signed_descriptor((3, 3, 3), signs))
    for a, b, c in ((1, 1, 0), (1, -1, 0), (-1, 1, 0), (-1, -1, 0), (-1, 1, 2)):
        out.append(co.bp3_descriptor(5, a, b, c))
    out.append(co.bp3_descriptor(7, -1, 1, 0))
    return out
