"""Tests for the theta constants and the nome-to-parameter map."""
import math
import sys
from pathlib import Path

import mpmath
import pytest

sys.path.insert(0, str(Path(__file__).parent.parent))

from src.errors import DomainError
from src.theta import (
    jacobi_identity_residuals,
    log_k_pair,
    nome_to_k,
    product_identity_residuals,
    series_length,
    theta_constants,
    theta_direct_series,
    theta_transformed_series,
)

mpmath.mp.dps = 30


def mp_theta(n, t):
    return float(mpmath.jtheta(n, 0, mpmath.exp(-mpmath.pi * t)))


@pytest.mark.parametrize("t", [0.2, 0.5, 1.0, 1.5, 3.0])
def test_theta_constants_match_mpmath(t):
    """All three constants agree with mpmath.jtheta at the nome exp(-pi t)."""
    theta = theta_constants(t)
    assert theta.t2 == pytest.approx(mp_theta(2, t), rel=1e-13)
    assert theta.t3 == pytest.approx(mp_theta(3, t), rel=1e-13)
    assert theta.t4 == pytest.approx(mp_theta(4, t), rel=1e-13)


def test_branch_switch():
    """The direct series serves t >= 1 and the transformed one t < 1."""
    assert theta_constants(1.0).branch == "direct"
    assert theta_constants(2.0).branch == "direct"
    assert theta_constants(0.7).branch == "transformed"


@pytest.mark.parametrize("t", [1.0 - 1e-9, 1.0 + 1e-9])
def test_branches_agree_next_to_switch(t):
    """At the same t on either side of the switch both series give the same constants."""
    direct = theta_direct_series(t)
    transformed = theta_transformed_series(t)
    assert abs(direct.t2 - transformed.t2) <= 1e-12
    assert abs(direct.t3 - transformed.t3) <= 1e-12
    assert abs(direct.t4 - transformed.t4) <= 1e-12


def test_symmetric_point_values():
    """At t = 1 theta_2 = theta_4 and theta_3^4 = 2 theta_2^4."""
    theta = theta_constants(1.0)
    assert theta.t2 == pytest.approx(theta.t4, rel=1e-14)
    assert theta.t3 ** 4 == pytest.approx(2.0 * theta.t2 ** 4, rel=1e-13)


@pytest.mark.parametrize("t", [0.3, 0.8, 1.0, 1.25, 2.5])
def test_jacobi_identities(t):
    """Direct and transformed series agree for every constant."""
    assert max(jacobi_identity_residuals(t)) <= 1e-12


@pytest.mark.parametrize("t", [0.25, 1.0, 4.0])
def test_jacobi_quartic(t):
    """theta_3^4 = theta_2^4 + theta_4^4."""
    theta = theta_constants(t)
    lhs = theta.t3 ** 4
    assert abs(lhs - theta.t2 ** 4 - theta.t4 ** 4) / lhs <= 1e-13


def test_logs_survive_underflow():
    """ln theta_2 stays finite where theta_2 itself underflows."""
    t = 4000.0
    theta = theta_constants(t)
    assert theta.t2 == 0.0
    assert theta.log_t2 == pytest.approx(math.log(2.0) - math.pi * t / 4.0, rel=1e-15)
    assert theta.log_t3 == pytest.approx(0.0, abs=1e-300)
    small = theta_constants(1.0 / t)
    assert small.log_t4 == pytest.approx(theta.log_t2 + 0.5 * math.log(t), rel=1e-12)


def test_brute_force_series_agrees():
    """A fixed long direct series matches the adaptive one."""
    t = 0.6
    brute = theta_direct_series(t, n_terms=200)
    adaptive = theta_constants(t)
    assert brute.t3 == pytest.approx(adaptive.t3, rel=1e-13)
    assert brute.terms_used == 200
    assert theta_transformed_series(t).branch == "transformed"


def test_series_length_grows_as_t_shrinks():
    """Fewer terms are needed further up the imaginary axis."""
    assert series_length(0.1) > series_length(1.0) > series_length(10.0) >= 1


def test_rejects_nonpositive_t():
    """tau must lie in the upper half-plane."""
    with pytest.raises(DomainError):
        theta_constants(0.0)
    with pytest.raises(DomainError):
        theta_constants(float("inf"))


@pytest.mark.parametrize("q", [0.01, 0.1, 0.3, 0.6])
def test_nome_to_k_is_consistent(q):
    """k^2 + k'^2 = 1 and the log pair matches the values."""
    k, kprime = nome_to_k(q)
    assert k * k + kprime * kprime == pytest.approx(1.0, abs=1e-13)
    log_k, log_kprime = log_k_pair(-math.log(q) / math.pi)
    assert math.exp(log_k) == pytest.approx(k, rel=1e-15)
    assert math.exp(log_kprime) == pytest.approx(kprime, rel=1e-15)


def test_nome_to_k_symmetric_point():
    """q = exp(-pi) gives k = k' = 1/sqrt(2)."""
    k, kprime = nome_to_k(math.exp(-math.pi))
    assert k == pytest.approx(1.0 / math.sqrt(2.0), rel=1e-14)
    assert kprime == pytest.approx(k, rel=1e-14)


def test_nome_out_of_range():
    """The nome lies strictly between 0 and 1."""
    for q in (0.0, 1.0, -0.3):
        with pytest.raises(DomainError):
            nome_to_k(q)


@pytest.mark.parametrize("q", [0.05, 0.2, 0.5])
def test_product_identities(q):
    """The two infinite products reproduce k and k' of the same nome."""
    odd, even = product_identity_residuals(q)
    assert odd <= 1e-13
    assert even <= 1e-13
