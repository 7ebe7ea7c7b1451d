import math

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from conftest import LN3, squeezed_solution
from lrquench.errors import DomainError, UndefinedPhaseError
from lrquench.oracle import LRWaveFunction, overlap_prob, quadrature_cross_moment
from lrquench.pinney import solve_protocol
from lrquench.protocol import two_jump
from lrquench.squeeze import (R_ZERO, phi1_closed, r1_closed, r2_closed, squeeze_at,
                              squeeze_from_rho)

omegas = st.floats(0.1, 5.0)


def test_before_jump_unsqueezed(maximal):
    sq = squeeze_at(maximal, -1.0)
    assert sq.r == 0.0 and not sq.phi_defined


def test_window_example(maximal):
    assert squeeze_at(maximal, math.pi / 6).r == pytest.approx(LN3, abs=1e-12)
    assert r1_closed(1, 3, math.pi / 6) == pytest.approx(LN3, abs=1e-15)


def test_revival_unsqueezed(revival):
    for t in (math.pi + 0.1, 4.0, 11.0):
        sq = squeeze_at(revival, t)
        assert sq.r <= 1e-12
        assert not sq.phi_defined


def test_r1_closed_examples():
    assert r1_closed(1, 2, math.pi / 4) == pytest.approx(math.acosh(1.25), abs=1e-15)
    assert r1_closed(1, 1, 0.7) == 0.0
    assert r1_closed(1, 3, math.pi / 3) < R_ZERO


def test_r1_closed_vacuum_overlap_oracle():
    # |<0|0>|^2 = 1/cosh r for a squeezed vacuum
    s = solve_protocol(two_jump(1, 2, 10.0))
    t = math.pi / 4
    assert overlap_prob(0, 0, s, t) == pytest.approx(1 / math.cosh(math.acosh(1.25)), abs=1e-12)
    assert overlap_prob(0, 0, s, t) == pytest.approx(0.8, abs=1e-12)


def test_r2_closed_examples():
    assert r2_closed(1, 3, 5 * math.pi / 6) == pytest.approx(LN3, abs=1e-15)
    assert r2_closed(1, 3, math.pi) < R_ZERO


def test_r1_closed_domain():
    with pytest.raises(DomainError):
        r1_closed(0, 1, 1)


@given(omegas, st.floats(0.01, 6.0))
def test_window_r_matches_closed_form(w1, t):
    s = solve_protocol(two_jump(1.0, w1, 10.0))
    assert squeeze_at(s, t).r == pytest.approx(r1_closed(1.0, w1, t), abs=1e-11)


@given(omegas, st.floats(0.01, 6.0), st.floats(0.0, 20.0))
def test_post_jump_r_constant(w1, tau, dt):
    s = solve_protocol(two_jump(1.0, w1, tau))
    assert abs(squeeze_at(s, tau + dt).r - r2_closed(1.0, w1, tau)) <= 1e-11


def test_plateau_drift(maximal):
    tau = 5 * math.pi / 6
    r = [squeeze_at(maximal, t).r for t in np.linspace(tau, tau + 40, 400)]
    assert max(r) - min(r) <= 1e-12


def test_phase_rotates_after_second_jump(maximal):
    tau = 5 * math.pi / 6
    a = squeeze_at(maximal, tau + 0.3).phi
    b = squeeze_at(maximal, tau + 0.6).phi
    assert abs(a - b) > 0.1


def test_phi1_closed_examples():
    assert phi1_closed(1, 3, math.pi / 6) == pytest.approx(math.pi, abs=1e-12)
    assert phi1_closed(1, 3, 1e-9) == pytest.approx(math.pi / 2, abs=1e-6)
    with pytest.raises(UndefinedPhaseError):
        phi1_closed(1, 1, 0.5)
    with pytest.raises(UndefinedPhaseError):
        phi1_closed(1, 3, math.pi / 3)


@given(omegas, st.floats(0.01, 6.0))
def test_phi1_closed_matches_engine(w1, t):
    assume(abs(w1 - 1.0) > 1e-3)
    s = solve_protocol(two_jump(1.0, w1, 10.0))
    sq = squeeze_at(s, t)
    assume(sq.r > 1e-6)
    diff = (phi1_closed(1.0, w1, t) - sq.phi + math.pi) % (2 * math.pi) - math.pi
    assert abs(diff) <= 1e-8


@given(omegas, st.floats(0.05, 4.0), st.floats(0.0, 6.0), st.integers(0, 3))
def test_phase_sign_matches_quadrature_cross_moment(w1, tau, dt, n):
    s = solve_protocol(two_jump(1.0, w1, tau))
    t = tau * 0.5 if dt < 1.0 else tau + dt
    sq = squeeze_at(s, t)
    assume(sq.r > 1e-3)
    cov = quadrature_cross_moment(LRWaveFunction.from_solution(s, n, t))
    expected = -(n + 0.5) * math.sinh(2 * sq.r) * math.sin(sq.phi)
    assert cov == pytest.approx(expected, abs=1e-8 * max(1.0, math.cosh(2 * sq.r)))


@given(st.floats(0.0, 3.0), st.booleans())
def test_single_jump_reaches_target(r, stretch):
    s, t = squeezed_solution(r, stretch)
    assert squeeze_at(s, t).r == pytest.approx(r, abs=1e-12)


def test_squeeze_from_rho_precision_near_zero():
    sq = squeeze_from_rho(1.0 + 1e-14, 0.0, 1.0, 1.0)
    assert 0 < sq.r < 1e-13
    assert not sq.phi_defined
    # well away from zero the asinh route agrees with the arccosh definition
    rho, rho_dot = 0.7, 0.4
    ch = 0.5 * math.sqrt(rho_dot ** 2 + rho ** -2 + 2 + rho ** 2)
    assert squeeze_from_rho(rho, rho_dot, 1, 1).r == pytest.approx(math.acosh(ch), rel=1e-14)
