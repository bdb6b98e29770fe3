"""Closed-form Renyi and von Neumann entropies of the XY chain and their limits.

All closed forms are evaluated from ln k, ln k' and the log theta constants at
tau = i alpha tau0, so nothing underflows when alpha tau0 is large or small.
Entropies are in nats.
"""
import logging
import math
from typing import Optional, Tuple

from src.elliptic import DEFAULT_TIE_TOL, factorizing_field, modulus_data, phase_point
from src.errors import CriticalPointError, DomainError, GuardError, SingularityError
from src.models import AlphaModulus, EllipticData, Method, PhasePoint, Region, RenyiResult
from src.theta import theta_constants

logger = logging.getLogger(__name__)

LN2 = math.log(2.0)
LN4 = math.log(4.0)
VON_NEUMANN_BAND = 1e-6
SMALL_ALPHA_GUARD = 0.2
CRITICAL_FIELD_GUARD = 0.5
XX_GAMMA_GUARD = 0.5
INVERSION_POLE_TOL = 1e-10
MAX_LADDER_STEPS = 8
_ROUNDING = 8.0 * 2.220446049250313e-16


def _check_alpha(alpha: float) -> None:
    if not (alpha > 0 and math.isfinite(alpha)):
        raise DomainError(f"alpha must be a finite number > 0, got alpha={alpha}")


def _bulk_data(point: PhasePoint) -> EllipticData:
    if point.region.is_critical:
        raise CriticalPointError(
            f"{point.region.value}: closed forms degenerate at h={point.h}, gamma={point.gamma}"
        )
    if point.region == Region.FACTORIZING_LINE:
        raise DomainError(f"FactorizingLine: tau0 is infinite at h={point.h}, gamma={point.gamma}")
    return modulus_data(point)


def _log_pair(data: EllipticData) -> Tuple[float, float]:
    """(ln k, ln k') taking the larger of the two through log1p."""
    k, kp = data.k, data.kprime
    log_k = math.log(k) if k < kp else 0.5 * math.log1p(-kp * kp)
    log_kp = math.log(kp) if kp <= k else 0.5 * math.log1p(-k * k)
    return log_k, log_kp


def _phase_log(point: PhasePoint, log_k: float, log_kp: float) -> float:
    """ln(k k') above the critical field, ln(k'/k^2) below it."""
    if point.above_critical_field:
        return log_k + log_kp
    return log_kp - 2.0 * log_k


def _rounding_error(value: float, alpha: float) -> float:
    return _ROUNDING * (1.0 + abs(value)) / min(1.0, abs(1.0 - alpha))


def _factorizing(point: PhasePoint, alpha: Optional[float]) -> RenyiResult:
    return RenyiResult(value=LN2, method=Method.FACTORIZING, alpha=alpha, point=point, tol_attained=0.0)


def _alpha_logs(point: PhasePoint, tau0: float, alpha: float) -> Tuple[float, float]:
    """(ln k_alpha, ln k'_alpha) at tau = i alpha tau0 from the theta ratios."""
    theta = theta_constants(alpha * tau0)
    return 2.0 * (theta.log_t2 - theta.log_t3), 2.0 * (theta.log_t4 - theta.log_t3)


def _entropy_from_alpha_logs(
    point: PhasePoint, alpha: float, log_k: float, log_kp: float, log_ka: float, log_kpa: float,
) -> float:
    # (1/6) alpha/(1-alpha) D(1) - (1/6) 1/(1-alpha) D(alpha) + (1/3) ln 2, D = ln(k k') or ln(k'/k^2)
    scale = 1.0 - alpha
    base = _phase_log(point, log_k, log_kp)
    replicated = _phase_log(point, log_ka, log_kpa)
    return (alpha * base - replicated) / (6.0 * scale) + LN2 / 3.0


def renyi_closed_form(point: PhasePoint, alpha: float) -> RenyiResult:
    """Renyi entropy of a bulk point from theta constants at tau = i alpha tau0.

    The factorizing line short-circuits to ln 2 and |alpha - 1| <= 1e-6 is
    answered by ``von_neumann``.
    """
    _check_alpha(alpha)
    if point.region == Region.FACTORIZING_LINE:
        return _factorizing(point, alpha)
    if abs(alpha - 1.0) <= VON_NEUMANN_BAND:
        return von_neumann(point)
    data = _bulk_data(point)
    log_k, log_kp = _log_pair(data)
    log_ka, log_kpa = _alpha_logs(point, data.tau0, alpha)
    value = _entropy_from_alpha_logs(point, alpha, log_k, log_kp, log_ka, log_kpa)
    logger.debug(f"   [RENYI] {point.region.value} h={point.h} gamma={point.gamma} alpha={alpha} S={value:.17g}")
    return RenyiResult(
        value=value, method=Method.CLOSED_FORM, alpha=alpha, point=point,
        tol_attained=_rounding_error(value, alpha),
    )


def von_neumann(point: PhasePoint) -> RenyiResult:
    """von Neumann entropy from k, k', I(k) and I(k')."""
    if point.region == Region.FACTORIZING_LINE:
        return _factorizing(point, 1.0)
    data = _bulk_data(point)
    log_k, log_kp = _log_pair(data)
    product = 2.0 * data.ik * data.ikprime / math.pi
    if point.above_critical_field:
        # (k - k')(k + k') keeps k^2 - k'^2 accurate near k = k'
        value = (LN4 - log_k - log_kp + (data.k - data.kprime) * (data.k + data.kprime) * product) / 6.0
    else:
        value = (LN4 + 2.0 * log_k - log_kp + (2.0 - data.k * data.k) * product) / 6.0
    return RenyiResult(
        value=value, method=Method.VON_NEUMANN, alpha=1.0, point=point,
        tol_attained=_ROUNDING * (1.0 + abs(value)),
    )


def renyi_entropy(point: PhasePoint, alpha: float) -> RenyiResult:
    """Entropy of any non-critical point: ln 2 on the factorizing line, von Neumann at alpha = 1."""
    _check_alpha(alpha)
    if point.region == Region.FACTORIZING_LINE:
        return _factorizing(point, alpha)
    if abs(alpha - 1.0) <= VON_NEUMANN_BAND:
        return von_neumann(point)
    return renyi_closed_form(point, alpha)


def von_neumann_derivative_route(point: PhasePoint, step: float = 1e-4) -> RenyiResult:
    """von Neumann entropy as the alpha -> 1 limit written with d/dalpha of ln(k_alpha k'_alpha) or ln(k'_alpha/k_alpha^2).

    Verification only: the derivative is a 4th-order central difference in alpha.
    """
    if not (0.0 < step < 0.25):
        raise DomainError(f"step must lie in (0, 0.25), got {step}")
    if point.region == Region.FACTORIZING_LINE:
        return _factorizing(point, 1.0)
    data = _bulk_data(point)
    log_k, log_kp = _log_pair(data)

    def phase_log_at(alpha: float) -> float:
        return _phase_log(point, *_alpha_logs(point, data.tau0, alpha))

    derivative = (
        -phase_log_at(1.0 + 2.0 * step) + 8.0 * phase_log_at(1.0 + step)
        - 8.0 * phase_log_at(1.0 - step) + phase_log_at(1.0 - 2.0 * step)
    ) / (12.0 * step)
    # limit of (alpha D(1) - D(alpha)) / (6 (1 - alpha)) at alpha = 1
    value = (derivative - _phase_log(point, log_k, log_kp)) / 6.0 + LN2 / 3.0
    return RenyiResult(
        value=value, method=Method.VON_NEUMANN, alpha=1.0, point=point,
        tol_attained=step ** 4 + _ROUNDING / step,
    )


def alpha_modulus(point: PhasePoint, alpha: float) -> AlphaModulus:
    """k_alpha = k(q^alpha) and its complement from theta ratios at tau = i alpha tau0."""
    _check_alpha(alpha)
    if point.region == Region.FACTORIZING_LINE:
        return AlphaModulus(alpha=alpha, q_alpha=0.0, k_alpha=0.0, kprime_alpha=1.0)
    data = _bulk_data(point)
    log_ka, log_kpa = _alpha_logs(point, data.tau0, alpha)
    return AlphaModulus(
        alpha=alpha,
        q_alpha=math.exp(-alpha * data.eps),
        k_alpha=min(1.0, math.exp(log_ka)),
        kprime_alpha=min(1.0, math.exp(log_kpa)),
    )


def large_alpha_limit(point: PhasePoint, alpha: Optional[float] = None) -> RenyiResult:
    """Single-copy entanglement S_inf = -ln p_max, or with ``alpha`` the large-alpha form at that order.

    Above the critical field S_inf = -(1/6) ln(k k'/4) - (pi/12) tau0, below it
    S_inf = -(1/6) ln(k'/(4 k^2)) + (pi/6) tau0. The finite-alpha form drops only
    terms of order exp(-alpha pi tau0)/alpha.
    """
    if alpha is not None:
        _check_alpha(alpha)
        if alpha == 1.0:
            raise DomainError("large-alpha form has a pole at alpha = 1")
    if point.region == Region.FACTORIZING_LINE:
        return _factorizing(point, alpha)
    data = _bulk_data(point)
    log_k, log_kp = _log_pair(data)
    # c = -S_inf: the coefficient of alpha/(1 - alpha)
    if point.above_critical_field:
        c = (log_k + log_kp - LN4) / 6.0 + math.pi * data.tau0 / 12.0
        offset = 0.0
    else:
        c = (log_kp - 2.0 * log_k - LN4) / 6.0 - math.pi * data.tau0 / 6.0
        offset = LN2

    if alpha is None:
        value = -c
        tol = _ROUNDING * (1.0 + abs(value))
    else:
        value = (alpha * c + offset) / (1.0 - alpha)
        tol = 4.0 * math.exp(-alpha * data.eps) / abs(1.0 - alpha) + _rounding_error(value, alpha)
    return RenyiResult(
        value=value, method=Method.ASYMPTOTIC_LARGE_ALPHA, alpha=alpha, point=point, tol_attained=tol,
    )


def small_alpha_estimate(point: PhasePoint, alpha: float, refined: bool = False) -> RenyiResult:
    """((1 + alpha)/alpha)(pi/12) I(k)/I(k'), valid while alpha tau0 < 0.2.

    ``refined`` adds the terms that survive alpha tau0 -> 0 at fixed alpha:
    pi/(12 alpha (1 - alpha) tau0) + alpha/(1 - alpha) (1/6) ln(k k'/4) above the
    critical field, ln(k'/(4 k^2)) in place of ln(k k'/4) below it.
    """
    _check_alpha(alpha)
    if point.region.is_critical:
        raise CriticalPointError(f"{point.region.value}: no small-alpha estimate on a critical line")
    data = modulus_data(point)
    if not alpha * data.tau0 < SMALL_ALPHA_GUARD:
        raise GuardError(
            f"small-alpha estimate needs alpha*tau0 < {SMALL_ALPHA_GUARD}, "
            f"got alpha*tau0={alpha * data.tau0:.6g}"
        )
    if refined:
        if alpha == 1.0:
            raise DomainError("refined small-alpha form has a pole at alpha = 1")
        log_k, log_kp = _log_pair(data)
        value = (
            math.pi / (12.0 * alpha * (1.0 - alpha) * data.tau0)
            + alpha / (1.0 - alpha) * (_phase_log(point, log_k, log_kp) - LN4) / 6.0
        )
        tol = math.exp(-math.pi / (alpha * data.tau0)) / (alpha * abs(1.0 - alpha))
    else:
        value = (1.0 + alpha) / alpha * math.pi / (12.0 * data.tau0)
        tol = alpha * (1.0 + abs(value))
    return RenyiResult(
        value=value, method=Method.ASYMPTOTIC_SMALL_ALPHA, alpha=alpha, point=point, tol_attained=tol,
    )


def critical_field_estimate(
    gamma: float, h: float, alpha: float, tie_tol: float = DEFAULT_TIE_TOL,
) -> RenyiResult:
    """((1 + alpha)/alpha)(-(1/12) ln|2 - h| + (1/6) ln 4 gamma) next to the critical field."""
    _check_alpha(alpha)
    if not gamma > 0:
        raise DomainError(f"critical-field estimate needs gamma > 0, got gamma={gamma}")
    distance = abs(h - 2.0)
    if distance == 0.0:
        raise CriticalPointError("critical-field estimate diverges at h = 2")
    if distance >= CRITICAL_FIELD_GUARD:
        raise DomainError(
            f"critical-field estimate needs |h - 2| < {CRITICAL_FIELD_GUARD}, got |h - 2|={distance:.6g}"
        )
    point = phase_point(h, gamma, tie_tol)
    value = (1.0 + alpha) / alpha * (-math.log(distance) / 12.0 + math.log(4.0 * gamma) / 6.0)
    return RenyiResult(
        value=value, method=Method.CRITICAL_ESTIMATE, alpha=alpha, point=point,
        tol_attained=distance * math.log(distance) ** 2,
    )


def xx_limit_estimate(
    gamma: float, h: float, alpha: float, tie_tol: float = DEFAULT_TIE_TOL,
) -> RenyiResult:
    """((1 + alpha)/alpha)(-(1/6) ln gamma + (1/12) ln(4 - h^2) + (1/6) ln 2) for small anisotropy."""
    _check_alpha(alpha)
    if not (0.0 < gamma < XX_GAMMA_GUARD):
        raise DomainError(f"XX estimate needs 0 < gamma < {XX_GAMMA_GUARD}, got gamma={gamma}")
    if h < 0 or not h < factorizing_field(gamma):
        raise DomainError(
            f"XX estimate needs 0 <= h < 2 sqrt(1 - gamma^2) = {factorizing_field(gamma):.6g}, got h={h}"
        )
    point = phase_point(h, gamma, tie_tol)
    value = (1.0 + alpha) / alpha * (
        -math.log(gamma) / 6.0 + math.log((2.0 - h) * (2.0 + h)) / 12.0 + LN2 / 6.0
    )
    return RenyiResult(
        value=value, method=Method.XX_ESTIMATE, alpha=alpha, point=point,
        tol_attained=gamma * (1.0 + abs(math.log(gamma))),
    )


def alpha_inversion(point: PhasePoint, alpha: float) -> RenyiResult:
    """Entropy at the inverted order 1/(alpha tau0^2) obtained from S(alpha) through tau -> -1/tau.

    Below the critical field the relation carries (1/12)(a/(a - 1)) ln(f/g^2) at
    tau = i alpha tau0, with f = lambda (1 - lambda), g = lambda^2/(1 - lambda) and
    a = alpha tau0^2.
    """
    _check_alpha(alpha)
    data = _bulk_data(point)
    tau0 = data.tau0
    a = alpha * tau0 * tau0
    if abs(a - 1.0) < INVERSION_POLE_TOL:
        raise SingularityError(
            f"alpha*tau0^2 = {a:.17g} is within {INVERSION_POLE_TOL} of the pole at 1"
        )
    log_k, log_kp = _log_pair(data)
    s_alpha = renyi_closed_form(point, alpha)
    ratio = a / (a - 1.0)
    value = (
        ratio * (1.0 - alpha) * s_alpha.value
        + (1.0 - alpha * alpha * tau0 * tau0) / (a - 1.0) * (_phase_log(point, log_k, log_kp) - LN4) / 6.0
    )
    if not point.above_critical_field:
        # ln g changes by ln f - 2 ln g under tau -> -1/tau since g(-1/tau) = f(tau)/g(tau)
        theta = theta_constants(alpha * tau0)
        log_lambda = 4.0 * (theta.log_t2 - theta.log_t3)
        log_one_minus = 4.0 * (theta.log_t4 - theta.log_t3)
        log_f = log_lambda + log_one_minus
        log_g = 2.0 * log_lambda - log_one_minus
        value += ratio * (log_f - 2.0 * log_g) / 12.0
    return RenyiResult(
        value=value, method=Method.ALPHA_INVERSION, alpha=1.0 / a, point=point,
        tol_attained=abs(ratio) * (abs(1.0 - alpha) * s_alpha.tol_attained + _ROUNDING) + _ROUNDING,
    )


def landen_ladder(point: PhasePoint, n: int) -> RenyiResult:
    """Entropy at alpha = 2^n from k and k' alone, iterating the Landen step n times."""
    if not (1 <= n <= MAX_LADDER_STEPS):
        raise GuardError(f"Landen ladder needs 1 <= n <= {MAX_LADDER_STEPS}, got n={n}")
    alpha = float(2 ** n)
    if point.region == Region.FACTORIZING_LINE:
        return _factorizing(point, alpha)
    data = _bulk_data(point)
    log_k, log_kp = _log_pair(data)
    log1p_kp = math.log1p(data.kprime)

    if n == 1:
        # 1 - k' = k^2/(1 + k')
        log_one_minus_kp = 2.0 * log_k - log1p_kp
        if point.above_critical_field:
            arg = 2.0 * log_k + 1.5 * log_kp + 2.0 * log1p_kp - log_one_minus_kp
        else:
            arg = 1.5 * log_kp - 4.0 * log_k + 2.0 * log_one_minus_kp - log1p_kp
        value = -arg / 6.0 + 0.5 * LN2
    else:
        log_ka, log_kpa, kpa = log_k, log_kp, data.kprime
        for _ in range(n):
            step = math.log1p(kpa)
            log_ka, log_kpa = 2.0 * log_ka - 2.0 * step, LN2 + 0.5 * log_kpa - step
            kpa = math.exp(log_kpa)
        value = _entropy_from_alpha_logs(point, alpha, log_k, log_kp, log_ka, log_kpa)
    return RenyiResult(
        value=value, method=Method.LANDEN_LADDER, alpha=alpha, point=point,
        tol_attained=_rounding_error(value, alpha) * (n + 1),
    )


def entropy_at(h: float, gamma: float, alpha: float, tie_tol: float = DEFAULT_TIE_TOL) -> RenyiResult:
    """Classify (h, gamma) and dispatch to ``renyi_entropy``."""
    return renyi_entropy(phase_point(h, gamma, tie_tol), alpha)
