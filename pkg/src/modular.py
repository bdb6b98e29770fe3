"""Elliptic lambda function on the imaginary axis and the automorphic functions built from it.

lambda(i t) = (theta_2/theta_3)^4 and 1 - lambda = (theta_4/theta_3)^4 are both taken
from the log-space theta constants, so neither loses accuracy at large or small t.
"""
import logging
import math
from functools import lru_cache
from typing import Callable, Optional, Tuple

from src.errors import ConvergenceError, DomainError
from src.models import ModularValues
from src.theta import theta_constants, theta_direct_series, theta_transformed_series, CROSSOVER

logger = logging.getLogger(__name__)

EISENSTEIN_RTOL = 1e-18
MAX_SERIES_TERMS = 1_000_000


def _lambda_pair(log_t2: float, log_t3: float, log_t4: float) -> Tuple[float, float]:
    return math.exp(4.0 * (log_t2 - log_t3)), math.exp(4.0 * (log_t4 - log_t3))


def lambda_pair(tau_imag: float) -> Tuple[float, float]:
    """(lambda, 1 - lambda) at tau = i*tau_imag, each from its own theta ratio."""
    theta = theta_constants(tau_imag)
    return _lambda_pair(theta.log_t2, theta.log_t3, theta.log_t4)


def lambda_modular(tau_imag: float) -> float:
    """lambda(i t) = theta_2^4 / theta_3^4."""
    return lambda_pair(tau_imag)[0]


def _klein_from_lambda(lam: float, one_minus: float) -> float:
    f = lam * one_minus
    return (4.0 / 27.0) * (1.0 - f) ** 3 / (f * f)


def f_and_g(tau_imag: float) -> Tuple[float, float]:
    """f = lambda (1 - lambda) and g = lambda^2 / (1 - lambda)."""
    lam, one_minus = lambda_pair(tau_imag)
    return lam * one_minus, lam * lam / one_minus


def klein_J(tau_imag: float) -> float:
    """Klein's absolute invariant from lambda: (4/27)(1 - lambda + lambda^2)^3 / (lambda^2 (1 - lambda)^2)."""
    return _klein_from_lambda(*lambda_pair(tau_imag))


def modular_values(tau_imag: float) -> ModularValues:
    """lambda, 1 - lambda, f, g and J bundled for one point of the imaginary axis."""
    lam, one_minus = lambda_pair(tau_imag)
    return ModularValues(
        tau_imag=tau_imag,
        lam=lam,
        one_minus_lambda=one_minus,
        f=lam * one_minus,
        g=lam * lam / one_minus,
        J=_klein_from_lambda(lam, one_minus),
    )


def landen_modulus(k: float, kprime: float) -> Tuple[float, float]:
    """One Landen step on the parameter pair: k -> k^2/(1+k')^2, k' -> 2 sqrt(k')/(1+k')."""
    if not (0.0 <= k <= 1.0 and 0.0 < kprime <= 1.0):
        raise DomainError(f"Landen step needs 0 <= k <= 1 and 0 < k' <= 1, got k={k}, k'={kprime}")
    denom = 1.0 + kprime
    return k * k / (denom * denom), 2.0 * math.sqrt(kprime) / denom


def landen_step(lambda_val: float) -> float:
    """lambda(2 tau) from lambda(tau): ((1 - sqrt(1 - lambda)) / (1 + sqrt(1 - lambda)))^2."""
    if not (0.0 < lambda_val < 1.0):
        raise DomainError(f"Landen step needs lambda in (0, 1), got {lambda_val}")
    # lambda = k^2, 1 - sqrt(1 - lambda) = lambda / (1 + k')
    kprime = math.sqrt(1.0 - lambda_val)
    k2, _ = landen_modulus(math.sqrt(lambda_val), kprime)
    return k2 * k2


@lru_cache(maxsize=4096)
def _divisors(n: int) -> Tuple[int, ...]:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return tuple(small + large[::-1])


def divisor_sigma(n: int, k: int) -> int:
    """sigma_k(n) = sum of d**k over the divisors d of n."""
    if n < 1:
        raise DomainError(f"divisor sum needs n >= 1, got n={n}")
    return sum(d ** k for d in _divisors(n))


def _eisenstein_sums(tau_imag: float) -> Tuple[float, float, int]:
    """sum sigma_3(n) x^n and sum sigma_5(n) x^n with x = q^2 = exp(-2 pi t)."""
    log_x = -2.0 * math.pi * tau_imag
    estimate = -math.log(EISENSTEIN_RTOL) / -log_x
    if estimate > MAX_SERIES_TERMS:
        raise ConvergenceError(
            f"Eisenstein series at t={tau_imag} needs about {estimate:.3g} terms "
            f"(limit {MAX_SERIES_TERMS}); map through J(-1/tau) = J(tau) first"
        )
    s3 = s5 = 0.0
    n = 0
    while True:
        n += 1
        if n > MAX_SERIES_TERMS:
            raise ConvergenceError(f"Eisenstein series at t={tau_imag} exceeded {MAX_SERIES_TERMS} terms")
        power = math.exp(n * log_x)
        term5 = divisor_sigma(n, 5) * power
        s3 += divisor_sigma(n, 3) * power
        s5 += term5
        # past the maximum of n^5 x^n the sigma_5 term bounds everything still to come
        if n * -log_x > 5.0 and term5 < EISENSTEIN_RTOL * (1.0 + s5):
            return s3, s5, n


def klein_J_eisenstein(tau_imag: float) -> float:
    """J = E4^3 / (E4^3 - E6^2) from the Eisenstein series with divisor sums."""
    if not (tau_imag > 0 and math.isfinite(tau_imag)):
        raise DomainError(f"Im tau must be positive and finite, got t={tau_imag}")
    s3, s5, terms = _eisenstein_sums(tau_imag)
    a = 240.0 * s3
    b = 504.0 * s5
    e4_cubed = (1.0 + a) ** 3
    # (1 + a)^3 - (1 - b)^2 expanded so the leading 1 cancels exactly
    discriminant = 3.0 * a + 2.0 * b + 3.0 * a * a + a ** 3 - b * b
    logger.debug(f"   [EISENSTEIN] t={tau_imag:.6g} terms={terms}")
    return e4_cubed / discriminant


def printed_schwarzian_rhs(lambda_val: float) -> float:
    """-1/(2 lambda^2) - 1/(2 (lambda - 1)^2) + 1/(lambda (lambda - 1)), the right-hand side as usually printed."""
    lam = lambda_val
    return -0.5 / (lam * lam) - 0.5 / ((lam - 1.0) ** 2) + 1.0 / (lam * (lam - 1.0))


def schwarzian_rhs(lambda_val: float) -> float:
    """{tau, lambda} = (1 - lambda + lambda^2) / (2 lambda^2 (1 - lambda)^2)."""
    lam = lambda_val
    return (1.0 - lam + lam * lam) / (2.0 * lam * lam * (1.0 - lam) ** 2)


def _lambda_on_branch(tau_imag: float) -> Callable[[float], float]:
    # one series for the whole stencil so the branch switch never enters the differences
    evaluate = theta_direct_series if tau_imag >= CROSSOVER else theta_transformed_series

    def lam(s: float) -> float:
        theta = evaluate(s)
        return math.exp(4.0 * (theta.log_t2 - theta.log_t3))

    return lam


def _derivatives_4(phi: Callable[[float], float], tau_imag: float, h: float) -> Tuple[float, float, float]:
    f = {j: phi(tau_imag + j * h) for j in range(-3, 4)}
    d1 = (-f[2] + 8.0 * f[1] - 8.0 * f[-1] + f[-2]) / (12.0 * h)
    d2 = (-f[2] + 16.0 * f[1] - 30.0 * f[0] + 16.0 * f[-1] - f[-2]) / (12.0 * h * h)
    d3 = (-f[3] + 8.0 * f[2] - 13.0 * f[1] + 13.0 * f[-1] - 8.0 * f[-2] + f[-3]) / (8.0 * h ** 3)
    return d1, d2, d3


def _derivatives_6(phi: Callable[[float], float], tau_imag: float, h: float) -> Tuple[float, float, float]:
    f = {j: phi(tau_imag + j * h) for j in range(-4, 5)}
    d1 = (f[3] - 9.0 * f[2] + 45.0 * f[1] - 45.0 * f[-1] + 9.0 * f[-2] - f[-3]) / (60.0 * h)
    d2 = (
        2.0 * f[3] - 27.0 * f[2] + 270.0 * f[1] - 490.0 * f[0]
        + 270.0 * f[-1] - 27.0 * f[-2] + 2.0 * f[-3]
    ) / (180.0 * h * h)
    d3 = (
        7.0 * f[4] - 72.0 * f[3] + 338.0 * f[2] - 488.0 * f[1]
        + 488.0 * f[-1] - 338.0 * f[-2] + 72.0 * f[-3] - 7.0 * f[-4]
    ) / (240.0 * h ** 3)
    return d1, d2, d3


_STENCILS = {4: _derivatives_4, 6: _derivatives_6}
_DEFAULT_STEPS = {4: 4e-3, 6: 1e-2}


def default_schwarzian_step(tau_imag: float, order: int = 6) -> float:
    """Default difference step, shrunk as t^2 below t = 1 where lambda varies on the scale t^2."""
    return _DEFAULT_STEPS[order] * min(1.0, tau_imag) ** 2


def schwarzian_residual(
    tau_imag: float,
    step: Optional[float] = None,
    richardson: bool = False,
    order: int = 6,
) -> float:
    """|{lambda, tau} + lambda'^2 {tau, lambda}| along the imaginary axis by central differences.

    ``order`` picks the 4th- or 6th-order stencils. With ``richardson`` each derivative is
    extrapolated from step and step/2 as (2^p D(h/2) - D(h)) / (2^p - 1) before the residual is formed.
    """
    if order not in _STENCILS:
        raise DomainError(f"order must be 4 or 6, got {order}")
    if not (tau_imag > 0 and math.isfinite(tau_imag)):
        raise DomainError(f"Im tau must be positive and finite, got t={tau_imag}")
    if step is None:
        step = default_schwarzian_step(tau_imag, order)
    if not (0.0 < step < tau_imag / 4.0):
        raise DomainError(f"step must lie in (0, t/4), got step={step} at t={tau_imag}")
    phi = _lambda_on_branch(tau_imag)
    derivatives = _STENCILS[order]
    d1, d2, d3 = derivatives(phi, tau_imag, step)
    if richardson:
        gain = 2.0 ** order
        fine = derivatives(phi, tau_imag, step / 2.0)
        d1, d2, d3 = ((gain * b - a) / (gain - 1.0) for a, b in zip((d1, d2, d3), fine))
    schwarzian_s = d3 / d1 - 1.5 * (d2 / d1) ** 2
    # along tau = i s: {lambda, tau} = -{phi, s} and lambda_tau^2 = -phi'^2
    residual = schwarzian_s + d1 * d1 * schwarzian_rhs(phi(tau_imag))
    logger.debug(
        f"   [SCHWARZIAN] t={tau_imag:.6g} order={order} step={step:.1e} residual={residual:.3e}"
    )
    return abs(residual)
