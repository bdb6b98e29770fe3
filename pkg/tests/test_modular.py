"""Tests for lambda, f, g, Klein's J, the Landen step and the Schwarzian check."""
import math
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent.parent))

from src.errors import ConvergenceError, DomainError
from src.modular import (
    default_schwarzian_step,
    divisor_sigma,
    f_and_g,
    klein_J,
    klein_J_eisenstein,
    lambda_modular,
    lambda_pair,
    landen_modulus,
    landen_step,
    modular_values,
    printed_schwarzian_rhs,
    schwarzian_residual,
    schwarzian_rhs,
)


def test_fixed_point_values():
    """lambda(i) = 1/2, f(i) = 1/4, g(i) = 1/2 and J(i) = 1."""
    values = modular_values(1.0)
    assert values.lam == pytest.approx(0.5, abs=1e-15)
    assert values.f == pytest.approx(0.25, abs=1e-15)
    assert values.g == pytest.approx(0.5, abs=1e-15)
    assert values.J == pytest.approx(1.0, abs=1e-13)


def test_modular_values_alias():
    """lambda is dumped under its own name."""
    dumped = modular_values(1.5).model_dump(by_alias=True)
    assert "lambda" in dumped
    assert dumped["lambda"] == pytest.approx(lambda_modular(1.5), rel=1e-15)


@pytest.mark.parametrize("t", [0.2, 0.7, 1.3, 5.0])
def test_lambda_complement(t):
    """lambda(i/t) = 1 - lambda(i t) and the pair sums to one."""
    lam, one_minus = lambda_pair(t)
    assert lam + one_minus == pytest.approx(1.0, abs=1e-13)
    assert lambda_modular(1.0 / t) == pytest.approx(one_minus, abs=1e-13)


def test_lambda_decreases_up_the_axis():
    """lambda(i t) falls strictly as t grows."""
    values = [lambda_modular(t) for t in (0.3, 0.6, 1.0, 1.7, 3.0)]
    assert all(a > b for a, b in zip(values, values[1:]))


@pytest.mark.parametrize("t", [0.4, 1.0, 2.2])
def test_f_and_g_under_inversion(t):
    """f(-1/tau) = f(tau) and g(-1/tau) = f(tau)/g(tau)."""
    f, g = f_and_g(t)
    f_inv, g_inv = f_and_g(1.0 / t)
    assert f_inv == pytest.approx(f, rel=1e-11)
    assert g_inv == pytest.approx(f / g, rel=1e-11)


@pytest.mark.parametrize("t", [0.5, 1.0, 1.4, 3.0])
def test_klein_invariant_two_routes(t):
    """J from lambda agrees with J from the Eisenstein series."""
    via_eisenstein = klein_J_eisenstein(max(t, 1.0 / t))
    assert klein_J(t) == pytest.approx(via_eisenstein, rel=1e-10)
    assert klein_J(t) == pytest.approx(klein_J(1.0 / t), rel=1e-11)


def test_eisenstein_needs_usable_t():
    """Near the real axis the series refuses instead of running forever."""
    with pytest.raises(ConvergenceError):
        klein_J_eisenstein(1e-7)
    with pytest.raises(DomainError):
        klein_J_eisenstein(-1.0)


def test_divisor_sigma():
    """Small divisor sums by hand."""
    assert divisor_sigma(1, 3) == 1
    assert divisor_sigma(6, 3) == 1 + 8 + 27 + 216
    assert divisor_sigma(4, 5) == 1 + 32 + 1024
    with pytest.raises(DomainError):
        divisor_sigma(0, 3)


@pytest.mark.parametrize("t", [0.5, 1.0, 1.8])
def test_landen_step_doubles_tau(t):
    """landen_step(lambda(t)) = lambda(2t)."""
    assert landen_step(lambda_modular(t)) == pytest.approx(lambda_modular(2.0 * t), rel=1e-12)


def test_landen_modulus_composition():
    """Two steps on (k, k') give the parameter of 4 tau."""
    t = 0.6
    lam, one_minus = lambda_pair(t)
    k, kprime = math.sqrt(lam), math.sqrt(one_minus)
    for _ in range(2):
        k, kprime = landen_modulus(k, kprime)
    assert k * k == pytest.approx(lambda_modular(4.0 * t), rel=1e-10)
    assert k * k + kprime * kprime == pytest.approx(1.0, abs=1e-14)


def test_landen_domain():
    """lambda outside (0, 1) is rejected."""
    with pytest.raises(DomainError):
        landen_step(1.0)
    with pytest.raises(DomainError):
        landen_modulus(0.5, 0.0)


def test_schwarzian_right_hand_sides():
    """At lambda = 1/2 the identity needs 6; the usual printed form gives -8."""
    assert schwarzian_rhs(0.5) == pytest.approx(6.0, abs=1e-15)
    assert printed_schwarzian_rhs(0.5) == pytest.approx(-8.0, abs=1e-15)
    lam = 0.3
    assert printed_schwarzian_rhs(lam) == pytest.approx(-1.0 / (2.0 * lam * lam * (lam - 1.0) ** 2), rel=1e-14)


@pytest.mark.parametrize("t", [0.6, 1.0, 1.5])
def test_schwarzian_identity_holds(t):
    """The differential equation holds to finite-difference accuracy, with and without extrapolation."""
    assert schwarzian_residual(t) <= 1e-6
    assert schwarzian_residual(t, richardson=True) <= 1e-6


def test_schwarzian_sixth_order():
    """While truncation dominates, halving the step shrinks the 6th-order residual by about 64."""
    ratio = schwarzian_residual(1.0, step=0.04) / schwarzian_residual(1.0, step=0.02)
    assert 40.0 < ratio < 100.0


def test_schwarzian_fourth_order():
    """The 4th-order stencils shrink by about 16 per halving."""
    ratio = schwarzian_residual(1.0, step=0.04, order=4) / schwarzian_residual(1.0, step=0.02, order=4)
    assert 10.0 < ratio < 22.0
    assert schwarzian_residual(1.0, order=4, richardson=True) <= 1e-6


def test_schwarzian_extrapolation_removes_leading_error():
    """Extrapolating the derivatives beats the plain stencil at a coarse step."""
    coarse = schwarzian_residual(1.0, step=0.04)
    assert schwarzian_residual(1.0, step=0.04, richardson=True) < coarse / 4.0


def test_schwarzian_default_step():
    """The default step shrinks with t below t = 1."""
    assert default_schwarzian_step(1.5) == pytest.approx(1e-2)
    assert default_schwarzian_step(0.5) == pytest.approx(2.5e-3)
    assert default_schwarzian_step(1.0, order=4) == pytest.approx(4e-3)
    assert schwarzian_residual(1.0) == schwarzian_residual(1.0, step=1e-2)


def test_schwarzian_step_bounds():
    """The stencil must stay inside the upper half-plane."""
    with pytest.raises(DomainError):
        schwarzian_residual(0.3, step=0.2)
    with pytest.raises(DomainError):
        schwarzian_residual(1.0, step=0.0)
    with pytest.raises(DomainError):
        schwarzian_residual(1.0, order=5)
