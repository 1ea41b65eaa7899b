import pytest

from freudmaps.freud import cm_expand, k_nu

# criterion number -> (ok, detail); filled by test_acceptance
ACCEPTANCE = {}


@pytest.fixture(scope="session")
def exp2():
    """nu=2 expansion deep enough for genus 7."""
    return cm_expand(2, k_nu(2, 7))


@pytest.fixture(scope="session")
def sols2(exp2):
    from freudmaps.matching import derive_zg

    return {g: derive_zg(2, g, expansion=exp2) for g in range(1, 8)}


@pytest.fixture(scope="session")
def orbit400():
    from freudmaps.orbitnum import PrecisionConfig, stieltjes_x

    return stieltjes_x(2, 1, 1, 401, PrecisionConfig(bits=512))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}")
