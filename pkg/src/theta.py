"""Zero-argument Jacobi theta constants at tau = i*t and the parameters k(q), k'(q).

Two series are available for every constant (the Jacobi identities): the direct
q-series with q = exp(-pi t), fast for t >= 1, and the series of the transformed
modulus -1/tau = i/t, fast for t < 1. ``theta_constants`` switches at t = 1.
Everything is carried in log space so that theta_2 (large t) and theta_4 (small t)
never underflow inside the entropy formulas.
"""
import logging
import math
from typing import Optional, Tuple

import numpy as np

from src.errors import DomainError
from src.models import ThetaConstants

logger = logging.getLogger(__name__)

THETA_RTOL = 1e-18
CROSSOVER = 1.0
LN2 = math.log(2.0)

_LogTriple = Tuple[float, float, float]


def _check_tau_imag(t: float) -> None:
    if not (t > 0 and math.isfinite(t)):
        raise DomainError(f"Im tau must be positive and finite, got t={t}")


def series_length(t: float, rtol: float = THETA_RTOL) -> int:
    """Smallest N with exp(-pi t N^2) below rtol (the n = N term of theta_3 is negligible)."""
    return max(1, math.ceil(math.sqrt(-math.log(rtol) / (math.pi * t))))


def _direct_logs(t: float, n_terms: Optional[int] = None) -> Tuple[_LogTriple, int, float]:
    """(ln theta_2, ln theta_3, ln theta_4) from the q-series at q = exp(-pi t)."""
    n_max = n_terms if n_terms is not None else series_length(t)
    n = np.arange(1, n_max + 1, dtype=float)
    q_n2 = np.exp(-math.pi * t * n * n)
    signs = np.where(n % 2 == 0, 1.0, -1.0)
    s3 = math.fsum(q_n2)
    s4 = math.fsum(signs * q_n2)
    # theta_2 = 2 q^(1/4) sum_{n>=0} q^(n(n+1))
    s2 = math.fsum(np.exp(-math.pi * t * n * (n + 1.0)))

    log_t2 = LN2 - 0.25 * math.pi * t + math.log1p(s2)
    log_t3 = math.log1p(2.0 * s3)
    log_t4 = math.log1p(2.0 * s4)
    tail = 2.0 * math.exp(-math.pi * t * (n_max + 1) ** 2)
    return (log_t2, log_t3, log_t4), n_max, tail


def _transformed_logs(t: float, n_terms: Optional[int] = None) -> Tuple[_LogTriple, int, float]:
    """Same triple through tau -> -1/tau: theta_2 <-> theta_4 swap, prefactor t^(-1/2)."""
    (a2, a3, a4), n_max, tail = _direct_logs(1.0 / t, n_terms)
    shift = -0.5 * math.log(t)
    return (shift + a4, shift + a3, shift + a2), n_max, tail / math.sqrt(t)


def _pack(t: float, logs: _LogTriple, branch: str, terms: int, tail: float) -> ThetaConstants:
    log_t2, log_t3, log_t4 = logs
    return ThetaConstants(
        t2=math.exp(log_t2), t3=math.exp(log_t3), t4=math.exp(log_t4),
        log_t2=log_t2, log_t3=log_t3, log_t4=log_t4,
        tau_imag=t, branch=branch, terms_used=terms, tail_bound=tail,
    )


def theta_direct_series(tau_imag: float, n_terms: Optional[int] = None) -> ThetaConstants:
    """Direct q-series at any t > 0; ``n_terms`` fixes the length (brute-force oracle)."""
    _check_tau_imag(tau_imag)
    logs, terms, tail = _direct_logs(tau_imag, n_terms)
    return _pack(tau_imag, logs, "direct", terms, tail)


def theta_transformed_series(tau_imag: float, n_terms: Optional[int] = None) -> ThetaConstants:
    """Series of the transformed modulus at any t > 0."""
    _check_tau_imag(tau_imag)
    logs, terms, tail = _transformed_logs(tau_imag, n_terms)
    return _pack(tau_imag, logs, "transformed", terms, tail)


def theta_constants(tau_imag: float) -> ThetaConstants:
    """theta_2, theta_3, theta_4 at tau = i*tau_imag with automatic series selection."""
    _check_tau_imag(tau_imag)
    if tau_imag >= CROSSOVER:
        result = theta_direct_series(tau_imag)
    else:
        result = theta_transformed_series(tau_imag)
    logger.debug(
        f"   [THETA] t={tau_imag:.6g} branch={result.branch} terms={result.terms_used} "
        f"tail={result.tail_bound:.1e}"
    )
    return result


def jacobi_identity_residuals(tau_imag: float) -> Tuple[float, float, float]:
    """|direct - transformed| for theta_2, theta_3, theta_4 at the same t."""
    direct = theta_direct_series(tau_imag)
    transformed = theta_transformed_series(tau_imag)
    return (
        abs(direct.t2 - transformed.t2),
        abs(direct.t3 - transformed.t3),
        abs(direct.t4 - transformed.t4),
    )


def _check_nome(q: float) -> float:
    if not (0.0 < q < 1.0):
        raise DomainError(f"nome must lie in (0, 1), got q={q}")
    return -math.log(q) / math.pi


def log_k_pair(tau_imag: float) -> Tuple[float, float]:
    """(ln k, ln k') of the modulus i*tau_imag, from k = theta_2^2/theta_3^2, k' = theta_4^2/theta_3^2."""
    theta = theta_constants(tau_imag)
    return 2.0 * (theta.log_t2 - theta.log_t3), 2.0 * (theta.log_t4 - theta.log_t3)


def nome_to_k(q: float) -> Tuple[float, float]:
    """Elliptic parameter and its complement for the nome q."""
    t = _check_nome(q)
    log_k, log_kprime = log_k_pair(t)
    return math.exp(log_k), math.exp(log_kprime)


def product_identity_residuals(q: float) -> Tuple[float, float]:
    """Residuals of prod(1 + q^(2m+1)) = (16q/(k^2 k'^2))^(1/24) and prod_{m>=1}(1 + q^(2m)) = (k^2/(16 q k'))^(1/12)."""
    t = _check_nome(q)
    log_q = math.log(q)
    log_k, log_kprime = log_k_pair(t)

    # factors drop below 1 + 1e-18 once (2m+1)|ln q| > ln(1e18)
    m_max = math.ceil(-math.log(THETA_RTOL) / -log_q) + 1
    m = np.arange(0, m_max + 1, dtype=float)
    odd = np.exp((2.0 * m + 1.0) * log_q)
    even = np.exp((2.0 * m[1:]) * log_q)

    product_odd = math.exp(math.fsum(np.log1p(odd)))
    product_even = math.exp(math.fsum(np.log1p(even)))
    rhs_odd = math.exp((4.0 * LN2 + log_q - 2.0 * log_k - 2.0 * log_kprime) / 24.0)
    rhs_even = math.exp((2.0 * log_k - 4.0 * LN2 - log_q - log_kprime) / 12.0)
    return abs(product_odd - rhs_odd), abs(product_even - rhs_even)
