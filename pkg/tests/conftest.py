import numpy as np
import pytest

from affsurf4 import backend
from affsurf4.expr import CurveDef
from affsurf4.families import FamilyI1, FamilyI2, FamilyII


@pytest.fixture(scope="session", autouse=True)
def _warm_kernels():
    backend.warmup()


@pytest.fixture(scope="session")
def cubic_curve():
    return CurveDef.from_strings(["1", "u", "u^2/2", "u^3/6"])


@pytest.fixture(scope="session")
def exp_curve():
    return CurveDef.from_strings(["exp(u)", "exp(2*u)", "exp(3*u)", "exp(4*u)"])


@pytest.fixture(scope="session")
def family_i1(cubic_curve):
    return FamilyI1(cubic_curve)


@pytest.fixture(scope="session")
def family_i2(exp_curve):
    return FamilyI2(exp_curve, 1)


@pytest.fixture(scope="session")
def family_ii():
    return FamilyII(CurveDef.from_strings(["0", "0", "cosh(u)", "sinh(u)"]),
                    CurveDef.from_strings(["cos(u)", "sin(u)", "0", "0"]))


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
