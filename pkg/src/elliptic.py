"""Map the physical parameters (h, gamma) to the elliptic parameter and the modulus data."""
import logging
import math
from typing import Optional

from src.errors import CriticalPointError, DomainError
from src.models import EllipticData, PhasePoint, Region

logger = logging.getLogger(__name__)

DEFAULT_TIE_TOL = 1e-9
AGM_RTOL = 1e-16
AGM_MAX_ITER = 64


def factorizing_field(gamma: float) -> float:
    """h_f(gamma) = 2 sqrt(1 - gamma**2); NaN when gamma > 1 (no factorizing line)."""
    if gamma > 1.0:
        return math.nan
    return 2.0 * math.sqrt((1.0 - gamma) * (1.0 + gamma))


def classify_region(h: float, gamma: float, tie_tol: float = DEFAULT_TIE_TOL) -> Region:
    """Place (h, gamma) in the phase diagram; special lines win over bulk cases."""
    if h < -tie_tol:
        raise DomainError(f"h must be >= 0, got h={h}")
    if gamma < -tie_tol:
        raise DomainError(f"gamma must be > 0, got gamma={gamma}")
    h = max(h, 0.0)

    if abs(h - 2.0) <= tie_tol:
        return Region.CRITICAL_FIELD
    if h > 2.0:
        if gamma <= 0.0:
            raise DomainError(f"gamma must be > 0 above the critical field, got gamma={gamma}")
        return Region.CASE_2
    if gamma <= tie_tol:
        return Region.CRITICAL_XX
    if gamma <= 1.0 and abs(h - factorizing_field(gamma)) <= tie_tol:
        return Region.FACTORIZING_LINE
    # 4(1 - gamma^2) < h^2 written without cancellation next to gamma = 1
    if h * h > 4.0 * (1.0 - gamma) * (1.0 + gamma):
        return Region.CASE_1A
    return Region.CASE_1B


def phase_point(h: float, gamma: float, tie_tol: float = DEFAULT_TIE_TOL) -> PhasePoint:
    """Classify and wrap (h, gamma)."""
    region = classify_region(h, gamma, tie_tol)
    return PhasePoint(h=max(h, 0.0), gamma=max(gamma, 0.0), region=region)


def _require_regular(point: PhasePoint) -> None:
    if point.region.is_critical:
        raise CriticalPointError(
            f"{point.region.value}: k degenerates to 1 at h={point.h}, gamma={point.gamma}"
        )


def _field_gap(half: float) -> float:
    """1 - (h/2)^2 as a product, exact next to h = 2."""
    return (1.0 - half) * (1.0 + half)


def elliptic_parameter(point: PhasePoint) -> float:
    """Elliptic parameter k of the phase point; 0 on the factorizing line."""
    _require_regular(point)
    gamma = point.gamma
    gap = _field_gap(point.h / 2.0)
    if point.region == Region.FACTORIZING_LINE:
        return 0.0
    if point.region == Region.CASE_1A:
        return math.sqrt(gamma * gamma - gap) / gamma
    if point.region == Region.CASE_1B:
        return math.sqrt((gap - gamma * gamma) / gap)
    return gamma / math.sqrt(gamma * gamma - gap)


def complementary_parameter(point: PhasePoint) -> float:
    """k' evaluated from (h, gamma) directly, so it keeps full accuracy as k -> 1."""
    _require_regular(point)
    gamma = point.gamma
    gap = _field_gap(point.h / 2.0)
    if point.region == Region.FACTORIZING_LINE:
        return 1.0
    if point.region == Region.CASE_1A:
        return math.sqrt(gap) / gamma
    if point.region == Region.CASE_1B:
        return gamma / math.sqrt(gap)
    return math.sqrt(-gap) / math.sqrt(gamma * gamma - gap)


def agm(a: float, b: float) -> float:
    """Arithmetic-geometric mean of two positive numbers."""
    if a <= 0 or b <= 0:
        raise DomainError(f"AGM needs positive arguments, got a={a}, b={b}")
    for _ in range(AGM_MAX_ITER):
        if abs(a - b) <= AGM_RTOL * a:
            break
        a, b = 0.5 * (a + b), math.sqrt(a * b)
    return 0.5 * (a + b)


def complete_elliptic_K(k: float, kprime: Optional[float] = None) -> float:
    """I(k) = pi / (2 AGM(1, k')), the complete elliptic integral of the first kind.

    Pass ``kprime`` when it is known more accurately than sqrt(1 - k**2).
    """
    if kprime is None:
        if k < 0 or k >= 1:
            raise DomainError(f"complete elliptic integral needs 0 <= k < 1, got k={k}")
        kprime = math.sqrt((1.0 - k) * (1.0 + k))
    elif k < 0 or k > 1:
        raise DomainError(f"complete elliptic integral needs 0 <= k < 1, got k={k}")
    if kprime <= 0:
        raise DomainError(f"complementary parameter must be > 0, got k'={kprime}")
    return math.pi / (2.0 * agm(1.0, kprime))


def elliptic_data_from_k(k: float, kprime: Optional[float] = None) -> EllipticData:
    """Modulus data for an elliptic parameter given directly (k = 0 gives the degenerate record)."""
    if kprime is None:
        kprime = math.sqrt((1.0 - k) * (1.0 + k))
    if k == 0.0:
        return EllipticData(
            k=0.0, kprime=1.0, ik=math.pi / 2.0, ikprime=math.inf,
            tau0=math.inf, eps=math.inf, q=0.0, factorizing=True,
        )
    ik = complete_elliptic_K(k, kprime)
    # I(k') has k' as parameter and k as its complement
    ikprime = math.pi / (2.0 * agm(1.0, k))
    tau0 = ikprime / ik
    eps = math.pi * tau0
    q = math.exp(-eps)
    logger.debug(f"   [ELLIPTIC] k={k:.17g} k'={kprime:.17g} tau0={tau0:.17g} q={q:.6e}")
    return EllipticData(k=k, kprime=kprime, ik=ik, ikprime=ikprime, tau0=tau0, eps=eps, q=q)


def modulus_data(point: PhasePoint) -> EllipticData:
    """k, k', I(k), I(k'), tau0, eps and q for a bulk or factorizing point."""
    _require_regular(point)
    if point.region == Region.FACTORIZING_LINE:
        return elliptic_data_from_k(0.0)
    return elliptic_data_from_k(elliptic_parameter(point), complementary_parameter(point))
