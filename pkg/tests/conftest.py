import pytest

from bunzeta.arith import ext_field
from bunzeta.curves import HyperellipticCurve, PlaneCurve, ProjectiveLine
from bunzeta.zeta import zeta_from_counts


@pytest.fixture(scope="session")
def F2():
    return ext_field(2, 1)


@pytest.fixture(scope="session")
def F3():
    return ext_field(3, 1)


@pytest.fixture(scope="session")
def curve_catalog(F2, F3):
    """The standard desk-scale curve catalog used throughout the suite."""
    return {
        "P1/F2": ProjectiveLine(F2, name="P1/F2"),
        "P1/F3": ProjectiveLine(F3, name="P1/F3"),
        # y^2 + y = x^3, genus 1, supersingular, N_1 = 3
        "E1": HyperellipticCurve.from_ints(F2, [1], [0, 0, 0, 1], name="E1"),
        # y^2 + y = x^5, genus 2
        "C2": HyperellipticCurve.from_ints(F2, [1], [0, 0, 0, 0, 0, 1],
                                           name="C2"),
        # y^2 + y = x^7, genus 3
        "C3": HyperellipticCurve.from_ints(F2, [1], [0] * 7 + [1], name="C3"),
        # Klein quartic x^3 y + y^3 z + z^3 x, genus 3
        "klein": PlaneCurve.from_list(
            F2, [(3, 1, 0, 1), (0, 3, 1, 1), (1, 0, 3, 1)], 4, name="klein"),
        # y^2 = x^3 + x over F_3, genus 1
        "E3": HyperellipticCurve.from_ints(F3, [], [0, 1, 0, 1], name="E3"),
    }


@pytest.fixture(scope="session")
def zeta_catalog():
    """ZetaData for the four base curves of the mass comparisons, built from
    point counts frozen off exhaustive enumeration."""
    return {
        "P1/F2": zeta_from_counts(2, 0, []),
        "P1/F3": zeta_from_counts(3, 0, []),
        "E1": zeta_from_counts(2, 1, [3]),
        "C2": zeta_from_counts(2, 2, [3, 5]),
    }
