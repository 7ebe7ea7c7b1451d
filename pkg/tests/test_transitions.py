import json
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import LN3, squeezed_solution
from lrquench.errors import DomainError
from lrquench.oracle import overlap_prob
from lrquench.pinney import solve_protocol
from lrquench.protocol import two_jump
from lrquench.special import gen_binom, log_gen_binom
from lrquench.transitions import (DIRECT_MAX, _terms_direct, _terms_log, prob_closed,
                                  prob_from_nmean, prob_vacuum, row_sums, table_at,
                                  table_from_r, tail_cutoff)

levels = st.integers(0, 30)
squeezes = st.floats(0.0, 2.5)


def mp_prob(m, n, r):
    """The closed form evaluated in 50-digit arithmetic."""
    with mpmath.workdps(50):
        if (n - m) % 2:
            return mpmath.mpf(0)
        m, n = min(m, n), max(m, n)
        r = mpmath.mpf(r)
        sh, ch = mpmath.sinh(r), mpmath.cosh(r)
        d, half = (n - m) // 2, (n + m) // 2
        total = mpmath.mpf(0)
        for k in range(d, half + 1):
            total += (mpmath.binomial(half, k) * mpmath.binomial(mpmath.mpf(n + m + 2 * k - 2) / 4, half)
                      * mpmath.factorial(k) / (mpmath.factorial(k - d) * ch ** k))
        return (2 ** (m + n) * mpmath.factorial(m) ** 2 * sh ** (n - m)
                / (mpmath.factorial(m) * mpmath.factorial(n) * ch) * total ** 2)


def test_examples_at_ln3():
    assert prob_closed(0, 0, LN3) == pytest.approx(0.6, abs=1e-15)
    assert prob_closed(1, 1, LN3) == pytest.approx(0.216, abs=1e-15)
    assert prob_closed(0, 2, LN3) == pytest.approx(0.192, abs=1e-15)
    assert prob_from_nmean(0, 0, 16 / 9) == pytest.approx(0.6, abs=1e-15)
    assert prob_from_nmean(0, 4, 16 / 9) == pytest.approx(0.09216, abs=1e-15)
    assert prob_closed(1, 1, 0.7) == pytest.approx(1 / math.cosh(0.7) ** 3, rel=1e-14)


def test_examples_against_quadrature():
    s, t = squeezed_solution(LN3)
    for (m, n), value in {(0, 0): 0.6, (1, 1): 0.216, (0, 2): 0.192, (0, 4): 0.09216}.items():
        assert overlap_prob(m, n, s, t) == pytest.approx(value, abs=1e-10)


def test_unsqueezed_is_identity():
    assert prob_closed(3, 3, 0.0) == 1.0
    assert prob_closed(3, 5, 0.0) == 0.0


def test_domain_errors():
    with pytest.raises(DomainError):
        prob_closed(0, 0, -0.1)
    with pytest.raises(DomainError):
        prob_closed(-1, 0, 0.3)
    with pytest.raises(DomainError):
        prob_from_nmean(0, 0, -1.0)
    with pytest.raises(DomainError):
        prob_vacuum(-2, 1, 3, 1)
    with pytest.raises(DomainError):
        table_from_r(0.5, -1)


@given(levels, levels, squeezes)
def test_symmetry_and_parity(m, n, r):
    p = prob_closed(m, n, r)
    assert p == prob_closed(n, m, r)
    assert 0.0 <= p <= 1.0 + 1e-12
    if (n - m) % 2:
        assert p == 0.0


@given(levels, levels, squeezes)
def test_identity_chain(m, n, r):
    assert prob_from_nmean(m, n, math.sinh(r) ** 2) == prob_closed(m, n, r)


@given(st.integers(0, 40), st.floats(0.1, 5.0), st.floats(0.0, 7.0))
def test_vacuum_formula_matches_general(n, w1, tau):
    q = (w1 ** 2 - 1) / (2 * w1) * math.sin(w1 * tau)
    r = math.asinh(abs(q))
    assert prob_vacuum(n, 1, w1, tau) == pytest.approx(prob_closed(0, n, r), rel=1e-11, abs=1e-300)


def test_vacuum_examples():
    tau = math.pi / 6
    assert prob_vacuum(0, 1, 3, tau) == pytest.approx(0.6, abs=1e-15)
    assert prob_vacuum(2, 1, 3, tau) == pytest.approx(0.192, abs=1e-15)
    assert prob_vacuum(3, 1, 3, tau) == 0.0
    for l in (1, 2, 3):
        assert prob_vacuum(0, 1, 3, l * math.pi / 3) == pytest.approx(1.0, abs=1e-15)
        assert prob_vacuum(2, 1, 3, l * math.pi / 3) < 1e-28


@pytest.mark.parametrize("m, n, r", [(0, 40, 1.2), (3, 51, 2.0), (10, 60, 0.4), (25, 25, 1.0),
                                     (7, 301, 2.5), (100, 140, 1.1), (2, 500, 2.2)])
def test_large_levels_against_high_precision(m, n, r):
    assert prob_closed(m, n, r) == pytest.approx(float(mp_prob(m, n, r)), rel=1e-10)


@pytest.mark.parametrize("r", [0.2, LN3, 2.0])
def test_direct_and_log_terms_agree(r):
    ch = math.cosh(r)
    for m in range(0, 2 * DIRECT_MAX, 3):
        for n in range(m, 2 * DIRECT_MAX, 2):
            a, b = _terms_direct(m, n, ch), _terms_log(m, n, ch)
            assert [s for _, s in a] == [s for _, s in b]
            np.testing.assert_allclose([l for l, _ in a], [l for l, _ in b], atol=1e-12)


@pytest.mark.parametrize("r", [0.2, LN3, 2.0])
def test_cancelling_sums_stay_accurate(r):
    # large equal-ish levels make the inner sum cancel by many digits
    for m in range(0, 41, 8):
        for n in range(m, 81, 10):
            ref = float(mp_prob(m, n, r))
            assert prob_closed(m, n, r) == pytest.approx(ref, rel=1e-10, abs=1e-300)


def test_underflow_is_exact_zero():
    p = prob_closed(0, 4000, 1e-3)
    assert p == 0.0 and prob_closed(4000, 0, 1e-3) == 0.0


@pytest.mark.parametrize("r", [0.2, LN3, 2.0])
def test_row_sum_rules(r):
    for m in range(9):
        norm, mean, energy = row_sums(m, r)
        assert norm >= 1 - 1e-10
        assert norm <= 1 + 1e-12
        assert mean == pytest.approx(m + (2 * m + 1) * math.sinh(r) ** 2, abs=1e-8)
        assert energy == pytest.approx((m + 0.5) * math.cosh(2 * r), abs=1e-8)


def test_tail_cutoff():
    assert tail_cutoff(3, 0.0) == 3
    top = tail_cutoff(0, LN3)
    assert top % 2 == 0
    assert math.fsum(prob_closed(0, n, LN3) for n in range(top + 1)) >= 1 - 1e-12
    with pytest.raises(DomainError):
        tail_cutoff(0, 8.0, cap=100)


def test_mean_from_quadrature_oracle():
    # sum_k k P(0 -> k) from overlap integrals reproduces sinh(ln 3)**2 = 16/9
    s, t = squeezed_solution(LN3)
    total = sum(k * overlap_prob(0, k, s, t) for k in range(0, 120, 2))
    assert total == pytest.approx(16 / 9, abs=1e-7)


def test_special_binomial():
    for x in (0.5, 2.25, -1.5, -3.0, 4.0, 7.75):
        for j in range(8):
            ref = float(mpmath.binomial(x, j))
            assert gen_binom(x, j) == pytest.approx(ref, rel=1e-13, abs=1e-300)
            lg, sign = log_gen_binom(x, j)
            assert (sign * math.exp(lg) if sign else 0.0) == pytest.approx(ref, rel=1e-12,
                                                                           abs=1e-300)
    assert log_gen_binom(0.0, 1) == (-math.inf, 0)
    with pytest.raises(ValueError):
        log_gen_binom(1.0, -1)


def test_table_before_jump_is_identity(maximal):
    table = table_at(maximal, -0.5, 6)
    np.testing.assert_array_equal(table.probs, np.eye(7))
    assert np.all(table.tail_mass == 0)


def test_plateau_ordering_decreases_with_level():
    s = solve_protocol(two_jump(1, 2, 3 * math.pi / 4))
    table = table_at(s, 4.0, 9)
    row = table.probs[1, 1::2]
    assert all(a > b for a, b in zip(row, row[1:]))
    later = table_at(s, 9.0, 9)
    np.testing.assert_allclose(later.probs, table.probs, atol=1e-13)


def test_half_period_window_restores_identity():
    s = solve_protocol(two_jump(1, 2, math.pi / 2))
    table = table_at(s, 3.0, 8)
    assert np.max(np.abs(table.probs - np.eye(9))) <= 1e-10


def test_table_exports():
    table = table_from_r(LN3, 2, t=1.5)
    lines = table.to_csv().splitlines()
    assert lines[0] == "m,n,prob"
    assert len(lines) == 10
    assert lines[1] == "0,0," + repr(prob_closed(0, 0, LN3))
    doc = json.loads(table.to_json())
    assert set(doc) == {"t", "r", "max_level", "probs", "tail_mass"}
    assert doc["probs"][0][2] == pytest.approx(0.192)
    assert doc["tail_mass"][0] == pytest.approx(1 - 0.6 - 0.192)
