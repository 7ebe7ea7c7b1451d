import math

import pytest
from hypothesis import settings

from lrquench.pinney import solve_protocol
from lrquench.protocol import single_jump, two_jump

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

LN3 = math.log(3.0)


def squeezed_solution(r, stretch=True):
    """Single-jump solution plus the time at which its squeeze parameter is r.

    omega1 = omega0 * exp(+-r) reaches r exactly when sin(omega1 t) = 1, with
    rho_dot = 0 there (pure position or momentum squeezing).
    """
    w1 = math.exp(r if stretch else -r)
    return solve_protocol(single_jump(1.0, w1)), 0.5 * math.pi / w1


@pytest.fixture
def maximal():
    return solve_protocol(two_jump(1.0, 3.0, 5 * math.pi / 6))


@pytest.fixture
def revival():
    return solve_protocol(two_jump(1.0, 3.0, math.pi))
