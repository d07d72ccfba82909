import pytest

from kljn import ResistorQuad, solve_variances


@pytest.fixture(scope="session")
def asymmetric_quad():
    """Four distinct resistances; the package's canonical worked example."""
    return ResistorQuad(r_la=1000.0, r_ha=10_000.0, r_lb=5000.0, r_hb=9000.0)


@pytest.fixture(scope="session")
def asymmetric_vars(asymmetric_quad):
    return solve_variances(asymmetric_quad, 1.0)


@pytest.fixture(scope="session")
def symmetric_quad():
    """Equal resistor pairs on both sides: the classic special case."""
    return ResistorQuad(r_la=1000.0, r_ha=9000.0, r_lb=1000.0, r_hb=9000.0)
