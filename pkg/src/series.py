"""Direct summation of the eigenvalue series: the independent oracle for every closed form.

The reduced density matrix factorises into two-level blocks with eigenvalues
(1 +- lambda_m)/2, lambda_m = tanh((m + (1 - sigma)/2) pi tau0). Writing
x_m = |2m + 1 - sigma| * eps (eps = pi tau0) the probabilities are
1/(1 + e^{-x}) and e^{-x}/(1 + e^{-x}), so every summand is a combination of
log1p(exp(-x)) terms and never forms a difference of nearly equal numbers.

sigma = 0 is the half-integer spectrum of the h > 2 phase, sigma = 1 the integer
spectrum (with lambda_0 = 0) of the h < 2 phase.
"""
import logging
import math
from typing import Callable, Optional, Tuple

import numpy as np

from src.elliptic import modulus_data
from src.errors import ConvergenceError, CriticalPointError, DomainError
from src.models import EigenvalueSpectrum, Method, PhasePoint, Region, RenyiResult

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-13
MAX_WINDOW = 1_000_000
LN2 = math.log(2.0)

_Summand = Callable[[np.ndarray], np.ndarray]


def spectrum_sigma(point: PhasePoint) -> int:
    """0 for the h > 2 phase, 1 for h < 2 (including the factorizing line)."""
    if point.region.is_critical:
        raise CriticalPointError(f"{point.region.value}: the spectrum is gapless, no convergent series")
    return 0 if point.region == Region.CASE_2 else 1


def spectrum(tau0: float, sigma: int, window: int) -> EigenvalueSpectrum:
    """lambda_m for m = -window .. window (the symmetric window about 0)."""
    if sigma not in (0, 1):
        raise DomainError(f"sigma must be 0 or 1, got {sigma}")
    m = np.arange(-window, window + 1, dtype=float)
    shifted = m + 0.5 * (1 - sigma)
    if math.isinf(tau0):
        lambdas = np.sign(shifted)
    else:
        lambdas = np.tanh(shifted * math.pi * tau0)
    return EigenvalueSpectrum(tau0=tau0, sigma=sigma, window=window, lambdas=lambdas.tolist())


def _renyi_summand(alpha: float) -> _Summand:
    def summand(x: np.ndarray) -> np.ndarray:
        # ln[p^alpha + (1 - p)^alpha] with p = 1/(1 + e^{-x})
        return np.log1p(np.exp(-alpha * x)) - alpha * np.log1p(np.exp(-x))
    return summand


def _entropy_summand(x: np.ndarray) -> np.ndarray:
    # H(p) = -p ln p - (1 - p) ln(1 - p) with p = 1/(1 + e^{-x})
    e = np.exp(-x)
    return np.log1p(e) + x * e / (1.0 + e)


def _geometric_tail(x0: float, eps: float, beta: float) -> float:
    """Upper bound of sum_{j>=0} (x_j + 1) e^{-beta x_j}, x_j = x0 + 2 eps j."""
    r = math.exp(-2.0 * beta * eps)
    if r >= 1.0:
        return math.inf
    return math.exp(-beta * x0) * ((x0 + 1.0) / (1.0 - r) + 2.0 * eps * r / (1.0 - r) ** 2)


def _first_x(sigma: int, eps: float, j: int) -> float:
    """x of the j-th folded term: (2j + 1) eps for sigma = 0, 2(j + 1) eps for sigma = 1."""
    return (2 * j + 1) * eps if sigma == 0 else 2 * (j + 1) * eps


def window_size(tau0: float, sigma: int, beta: float, tol: float) -> Tuple[int, float]:
    """Fewest folded terms M whose omitted tail (both mirror halves) is below tol; returns (M, tail)."""
    eps = math.pi * tau0

    def tail(count: int) -> float:
        return 2.0 * _geometric_tail(_first_x(sigma, eps, count), eps, beta)

    hi = 1
    while tail(hi) > tol:
        hi *= 2
        if hi > MAX_WINDOW:
            raise ConvergenceError(
                f"eigenvalue series at tau0={tau0:.3g} needs more than {MAX_WINDOW} terms "
                f"for tol={tol:.1e}; input is too close to a critical line"
            )
    lo = hi // 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if tail(mid) > tol:
            lo = mid
        else:
            hi = mid
    return hi, tail(hi)


def _sum_folded(tau0: float, sigma: int, count: int, summand: _Summand, center: float) -> float:
    eps = math.pi * tau0
    j = np.arange(count, dtype=float)
    x = (2.0 * j + 1.0) * eps if sigma == 0 else 2.0 * (j + 1.0) * eps
    terms = 2.0 * summand(x)
    if sigma == 1:
        return center + math.fsum(terms)
    return math.fsum(terms)


def _sum_unfolded(tau0: float, sigma: int, count: int, summand: _Summand, center: float) -> float:
    eps = math.pi * tau0
    if sigma == 0:
        # symmetric about -1/2: m = -count .. count - 1
        m = np.arange(-count, count, dtype=float)
        return math.fsum(summand(np.abs(2.0 * m + 1.0) * eps))
    m = np.arange(-count, count + 1, dtype=float)
    m = m[m != 0]
    return center + math.fsum(summand(np.abs(2.0 * m) * eps))


def _check_inputs(tau0: float, sigma: int, tol: float) -> None:
    if sigma not in (0, 1):
        raise DomainError(f"sigma must be 0 or 1, got {sigma}")
    if not tau0 > 0:
        raise DomainError(f"tau0 must be > 0, got {tau0}")
    if not tol > 0:
        raise DomainError(f"tol must be > 0, got {tol}")


def _sum_spectrum(
    tau0: float, sigma: int, summand: _Summand, center: float, beta: float,
    tol: float, window: Optional[int], folded: bool,
) -> Tuple[float, float]:
    if math.isinf(tau0):
        # every lambda_m is +-1 except lambda_0 = 0 on the integer spectrum
        return (center if sigma == 1 else 0.0), 0.0
    if window is None:
        count, tail = window_size(tau0, sigma, beta, tol)
    else:
        count = window
        tail = 2.0 * _geometric_tail(_first_x(sigma, math.pi * tau0, count), math.pi * tau0, beta)
    total = (_sum_folded if folded else _sum_unfolded)(tau0, sigma, count, summand, center)
    logger.debug(f"   [SERIES] tau0={tau0:.6g} sigma={sigma} window={count} tail={tail:.1e}")
    return total, tail


def renyi_from_spectrum(
    tau0: float,
    sigma: int,
    alpha: float,
    tol: float = DEFAULT_TOL,
    window: Optional[int] = None,
    folded: bool = True,
) -> Tuple[float, float]:
    """(S_alpha, tail bound) summed directly from tau0; tau0 = inf is allowed."""
    _check_inputs(tau0, sigma, tol)
    if not alpha > 0:
        raise DomainError(f"alpha must be > 0, got alpha={alpha}")
    if alpha == 1.0:
        raise DomainError("alpha = 1 is the von Neumann entropy; use von_neumann_from_spectrum")
    scale = 1.0 - alpha
    # m = 0 of the integer spectrum: ln(2 * 2^-alpha) / (1 - alpha) = ln 2
    # (x + 1) e^{-min(alpha, 1) x} already bounds summand / (1 - alpha), so tol applies unscaled
    total, tail = _sum_spectrum(
        tau0, sigma, _renyi_summand(alpha), scale * LN2, min(alpha, 1.0), tol, window, folded,
    )
    return total / scale, tail


def von_neumann_from_spectrum(
    tau0: float,
    sigma: int,
    tol: float = DEFAULT_TOL,
    window: Optional[int] = None,
    folded: bool = True,
) -> Tuple[float, float]:
    """(S_1, tail bound) as the sum of binary entropies of the two-level blocks."""
    _check_inputs(tau0, sigma, tol)
    return _sum_spectrum(tau0, sigma, _entropy_summand, LN2, 1.0, tol, window, folded)


def _point_tau0(point: PhasePoint) -> Tuple[float, int]:
    sigma = spectrum_sigma(point)
    return modulus_data(point).tau0, sigma


def renyi_series(point: PhasePoint, alpha: float, tol: float = DEFAULT_TOL) -> RenyiResult:
    """Renyi entropy of a bulk or factorizing point by direct eigenvalue summation."""
    tau0, sigma = _point_tau0(point)
    value, tail = renyi_from_spectrum(tau0, sigma, alpha, tol)
    return RenyiResult(value=value, method=Method.SERIES, alpha=alpha, point=point, tol_attained=tail)


def von_neumann_series(point: PhasePoint, tol: float = DEFAULT_TOL) -> RenyiResult:
    """von Neumann entropy by direct eigenvalue summation."""
    tau0, sigma = _point_tau0(point)
    value, tail = von_neumann_from_spectrum(tau0, sigma, tol)
    return RenyiResult(value=value, method=Method.SERIES, alpha=1.0, point=point, tol_attained=tail)


def single_copy_series(point: PhasePoint, tol: float = DEFAULT_TOL) -> RenyiResult:
    """-ln p_max, the largest eigenvalue of the reduced density matrix taken block by block."""
    tau0, sigma = _point_tau0(point)
    # each block contributes -ln max((1 +- lambda)/2) = log1p(e^{-x}); log1p(e^{-x}) <= (x + 1) e^{-x}
    value, tail = _sum_spectrum(
        tau0, sigma, lambda x: np.log1p(np.exp(-x)), LN2, 1.0, tol, None, True,
    )
    return RenyiResult(value=value, method=Method.SERIES, alpha=None, point=point, tol_attained=tail)
