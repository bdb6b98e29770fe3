"""Verification suites: identity residuals and oracle agreement grouped into check families."""
import logging
import math
import time
from typing import Callable, Dict, Iterable, List, Optional, Tuple

import numpy as np
from scipy import integrate

from src.elliptic import (
    complete_elliptic_K,
    elliptic_data_from_k,
    factorizing_field,
    modulus_data,
    phase_point,
)
from src.entropy import (
    alpha_inversion,
    large_alpha_limit,
    landen_ladder,
    renyi_closed_form,
    renyi_entropy,
    small_alpha_estimate,
    von_neumann,
    von_neumann_derivative_route,
)
from src.errors import DomainError
from src.models import CheckFamily, PhasePoint, VerifyReport
from src.modular import (
    f_and_g,
    klein_J,
    klein_J_eisenstein,
    lambda_modular,
    lambda_pair,
    landen_step,
    schwarzian_residual,
)
from src.series import (
    renyi_from_spectrum,
    renyi_series,
    single_copy_series,
    von_neumann_from_spectrum,
    von_neumann_series,
)
from src.theta import (
    jacobi_identity_residuals,
    nome_to_k,
    product_identity_residuals,
    theta_constants,
    theta_direct_series,
    theta_transformed_series,
)

logger = logging.getLogger(__name__)

GRID_H = (0.5, 1.2, 1.9, 2.5, 3.0, 5.0)
GRID_GAMMA = (0.25, 0.5, 1.0)
GRID_ALPHA = (0.3, 0.5, 2.0, 3.0, 7.0, 10.0)
MONOTONE_ALPHA = (0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0)
LADDER_POINTS = ((3.0, 1.0), (5.0, 0.5), (1.0, 0.5), (0.5, 0.25))
THETA_GRID = (0.05, 0.1, 0.3, 0.5, 0.7, 0.9, 1.0, 1.1, 1.5, 2.0, 5.0, 10.0, 20.0)


def _grid_points() -> List[PhasePoint]:
    return [phase_point(h, gamma) for h in GRID_H for gamma in GRID_GAMMA]


def _family(name: str, residuals: Iterable[float], tolerance: float, detail: Optional[str] = None) -> CheckFamily:
    values = list(residuals)
    worst = max(values) if values else 0.0
    # NaN never passes
    passed = bool(values) and all(v <= tolerance for v in values)
    return CheckFamily(name=name, checks=len(values), max_residual=worst, tolerance=tolerance, passed=passed, detail=detail)


def _quadrature_K(k: float) -> float:
    # x = sin(theta) removes the endpoint singularity of the x-integral
    value, _ = integrate.quad(
        lambda theta: 1.0 / math.sqrt(1.0 - (k * math.sin(theta)) ** 2),
        0.0, 0.5 * math.pi, epsabs=0.0, epsrel=2e-14, limit=200,
    )
    return value


def _slope(xs: List[float], ys: List[float]) -> float:
    return float(np.polyfit(np.asarray(xs), np.asarray(ys), 1)[0])


# ---------------------------------------------------------------- elliptic

def check_agm_vs_quadrature(tol: float) -> CheckFamily:
    residuals = []
    for k in (0.1, 0.5, math.sqrt(0.5), 0.9, 0.99):
        reference = _quadrature_K(k)
        residuals.append(abs(complete_elliptic_K(k) - reference) / reference)
    return _family("agm_vs_quadrature", residuals, tol, "relative error against scipy quad")


def check_parameter_identity(tol: float) -> CheckFamily:
    residuals = []
    for point in _grid_points():
        data = modulus_data(point)
        residuals.append(abs(data.k * data.k + data.kprime * data.kprime - 1.0))
    return _family("parameter_identity", residuals, tol, "k^2 + k'^2 - 1 over the bulk grid")


def check_case_duality(tol: float) -> CheckFamily:
    residuals = []
    for h in (2.5, 3.0, 5.0):
        for gamma in GRID_GAMMA:
            point = phase_point(h, gamma)
            k_above = modulus_data(point).k
            half = h / 2.0
            formal = math.sqrt(half * half + gamma * gamma - 1.0) / gamma
            residuals.append(abs(k_above * formal - 1.0))
    return _family("case_duality", residuals, tol, "k above the field times the formal Case1a expression")


def check_modulus_symmetry(tol: float) -> CheckFamily:
    k = math.sqrt(0.5)
    data = elliptic_data_from_k(k, k)
    residuals = [
        abs(complete_elliptic_K(k) - complete_elliptic_K(math.sqrt(1.0 - k * k))),
        abs(data.tau0 - 1.0),
        abs(data.q - math.exp(-math.pi)),
    ]
    return _family("modulus_symmetry", residuals, tol, "I(k) = I(k') and tau0 = 1 at k = 1/sqrt(2)")


# ---------------------------------------------------------------- theta

def check_jacobi_identities(tol: float) -> CheckFamily:
    residuals = [max(jacobi_identity_residuals(t)) for t in THETA_GRID]
    return _family("jacobi_identities", residuals, tol, "direct vs transformed series")


def check_jacobi_quartic(tol: float) -> CheckFamily:
    residuals = []
    for t in THETA_GRID:
        theta = theta_constants(t)
        residuals.append(abs(theta.t3 ** 4 - theta.t2 ** 4 - theta.t4 ** 4) / theta.t3 ** 4)
    return _family("jacobi_quartic", residuals, tol, "theta3^4 = theta2^4 + theta4^4, relative")


def check_product_identities(tol: float) -> CheckFamily:
    residuals = []
    for q in (math.exp(-math.pi), 0.01, 0.1, 0.3):
        residuals.extend(product_identity_residuals(q))
    return _family("product_identities", residuals, tol)


def check_series_switch(tol: float) -> CheckFamily:
    residuals = []
    for t in (1.0 - 1e-9, 1.0, 1.0 + 1e-9):
        direct = theta_direct_series(t)
        transformed = theta_transformed_series(t)
        selected = theta_constants(t)
        residuals.extend([
            abs(direct.t2 - transformed.t2),
            abs(direct.t3 - transformed.t3),
            abs(direct.t4 - transformed.t4),
            abs(selected.t3 - (direct.t3 if t >= 1.0 else transformed.t3)),
        ])
    return _family("series_switch", residuals, tol, "both branches agree on either side of t = 1")


def check_modular_consistency(tol: float) -> CheckFamily:
    residuals = []
    for t in (0.3, 0.7, 2.0, 5.0):
        inverse = theta_direct_series(1.0 / t)
        direct = theta_direct_series(t)
        root = math.sqrt(t)
        residuals.extend([
            abs(inverse.t3 - root * direct.t3),
            abs(inverse.t2 - root * direct.t4),
            abs(inverse.t4 - root * direct.t2),
        ])
    return _family("modular_consistency", residuals, tol, "theta(-1/tau) against sqrt(tau/i) theta(tau)")


def check_nome_roundtrip(tol: float) -> CheckFamily:
    residuals = []
    for k in (0.05, 0.3, 2.0 / 3.0, 0.9, 0.99):
        data = elliptic_data_from_k(k)
        recovered, _ = nome_to_k(data.q)
        residuals.append(abs(recovered - k))
    return _family("nome_roundtrip", residuals, tol, "k -> q -> k")


# ---------------------------------------------------------------- modular

def check_fixed_points(tol: float) -> CheckFamily:
    return _family("fixed_points", [abs(lambda_modular(1.0) - 0.5), abs(klein_J(1.0) - 1.0)], tol, "lambda(i), J(i)")


def check_lambda_complement(tol: float) -> CheckFamily:
    residuals = [abs(sum(lambda_pair(t)) - 1.0) for t in THETA_GRID]
    return _family("lambda_complement", residuals, tol)


def check_landen_step(tol: float) -> CheckFamily:
    residuals = [abs(landen_step(lambda_modular(t)) - lambda_modular(2.0 * t)) for t in (0.3, 0.7, 1.0, 2.0)]
    return _family("landen_step", residuals, tol)


def check_landen_composition(tol: float) -> CheckFamily:
    residuals = []
    for t in (0.3, 0.7):
        lam = lambda_modular(t)
        for n in range(1, 5):
            lam = landen_step(lam)
            residuals.append(abs(lam - lambda_modular(2 ** n * t)))
    return _family("landen_composition", residuals, tol)


def check_f_g_inversion(tol: float) -> CheckFamily:
    residuals = []
    for t in (0.3, 0.5, 2.0):
        f, g = f_and_g(t)
        f_inv, g_inv = f_and_g(1.0 / t)
        residuals.extend([abs(f_inv - f), abs(g_inv - f / g)])
    return _family("f_g_inversion", residuals, tol, "f(-1/tau) = f(tau), g(-1/tau) = f(tau)/g(tau)")


def check_klein_two_routes(tol: float) -> CheckFamily:
    residuals = []
    for t in (1.0, 2.0, 3.0):
        j = klein_J(t)
        residuals.append(abs(j - klein_J_eisenstein(t)) / j)
    return _family("klein_two_routes", residuals, tol, "lambda route vs Eisenstein route, relative")


def check_klein_inversion(tol: float) -> CheckFamily:
    residuals = []
    for t in (2.0, 3.0, 1.5):
        j = klein_J(t)
        residuals.append(abs(j - klein_J(1.0 / t)) / j)
    return _family("klein_inversion", residuals, tol, "J(-1/tau) = J(tau), relative")


def check_schwarzian(tol: float) -> CheckFamily:
    residuals = [schwarzian_residual(t) for t in (1.0, 1.5)]
    return _family("schwarzian", residuals, tol, "{lambda,tau} + lambda'^2 (1-lambda+lambda^2)/(2 lambda^2 (1-lambda)^2)")


def check_lambda_monotone(tol: float) -> CheckFamily:
    values = [lambda_modular(t) for t in np.linspace(0.1, 10.0, 100)]
    increases = [max(0.0, b - a) for a, b in zip(values, values[1:])]
    return _family("lambda_monotone", increases, tol, "lambda(it) decreasing on [0.1, 10]")


# ---------------------------------------------------------------- entropy

def check_oracle_equivalence(tol: float) -> CheckFamily:
    residuals = []
    for point in _grid_points():
        for alpha in GRID_ALPHA:
            closed = renyi_closed_form(point, alpha).value
            residuals.append(abs(closed - renyi_series(point, alpha).value))
    return _family("oracle_equivalence", residuals, tol, "closed form vs eigenvalue series")


def check_factorizing_line(tol: float) -> CheckFamily:
    residuals = []
    for gamma in (0.25, 0.5, 0.8):
        point = phase_point(factorizing_field(gamma), gamma)
        for alpha in (0.1, 1.0, 2.0, 50.0):
            residuals.append(abs(renyi_entropy(point, alpha).value - math.log(2.0)))
            if alpha == 1.0:
                value, _ = von_neumann_from_spectrum(50.0, 1)
            else:
                value, _ = renyi_from_spectrum(50.0, 1, alpha)
            residuals.append(abs(value - math.log(2.0)))
    return _family("factorizing_line", residuals, tol, "ln 2 short-circuit and series at tau0 = 50")


def richardson_alpha_limit(point: PhasePoint, step: float = 1e-4) -> float:
    """Alpha -> 1 limit of the closed form from symmetric averages, Richardson-extrapolated."""
    def average(delta: float) -> float:
        return 0.5 * (renyi_closed_form(point, 1.0 + delta).value + renyi_closed_form(point, 1.0 - delta).value)
    return (4.0 * average(0.5 * step) - average(step)) / 3.0


def check_von_neumann_limit(tol: float) -> CheckFamily:
    residuals = [abs(von_neumann(p).value - richardson_alpha_limit(p)) for p in _grid_points()]
    return _family("von_neumann_limit", residuals, tol, "closed form vs Richardson alpha -> 1")


def check_von_neumann_series(tol: float) -> CheckFamily:
    residuals = [abs(von_neumann(p).value - von_neumann_series(p).value) for p in _grid_points()]
    return _family("von_neumann_series", residuals, tol)


def check_von_neumann_derivative(tol: float) -> CheckFamily:
    residuals = [abs(von_neumann(p).value - von_neumann_derivative_route(p).value) for p in _grid_points()]
    return _family("von_neumann_derivative", residuals, tol, "derivative of ln k_alpha route")


def check_landen_ladder(tol: float) -> CheckFamily:
    residuals = []
    for h, gamma in LADDER_POINTS:
        point = phase_point(h, gamma)
        for n in (1, 2, 3):
            residuals.append(abs(landen_ladder(point, n).value - renyi_closed_form(point, 2.0 ** n).value))
    return _family("landen_ladder", residuals, tol)


def check_alpha_inversion(tol: float) -> CheckFamily:
    residuals = []
    for point in _grid_points():
        tau0 = modulus_data(point).tau0
        for alpha in GRID_ALPHA:
            a = alpha * tau0 * tau0
            if abs(a - 1.0) < 0.05:
                continue
            inverted = alpha_inversion(point, alpha)
            residuals.append(abs(inverted.value - renyi_closed_form(point, inverted.alpha).value))
    return _family("alpha_inversion", residuals, tol, "S(1/(alpha tau0^2)) from S(alpha) vs direct")


def check_large_alpha(tol: float) -> CheckFamily:
    residuals = []
    for point in _grid_points():
        if modulus_data(point).tau0 < 0.3:
            continue
        residuals.append(abs(renyi_closed_form(point, 50.0).value - large_alpha_limit(point, 50.0).value))
    return _family("large_alpha", residuals, tol, "closed form at alpha = 50 vs large-alpha form")


def check_single_copy(tol: float) -> CheckFamily:
    residuals = [abs(large_alpha_limit(p).value - single_copy_series(p).value) for p in _grid_points()]
    return _family("single_copy", residuals, tol, "S_inf vs -ln p_max from the spectrum")


def check_small_alpha(tol: float) -> CheckFamily:
    residuals = []
    alpha = 0.01
    for point in _grid_points():
        if alpha * modulus_data(point).tau0 >= 0.2:
            continue
        estimate = small_alpha_estimate(point, alpha).value
        residuals.append(abs(renyi_closed_form(point, alpha).value - estimate) / estimate)
    return _family("small_alpha", residuals, tol, "relative to the leading estimate at alpha = 0.01")


def check_critical_scaling(tol: float) -> CheckFamily:
    residuals = []
    for alpha in (1.0, 2.0):
        distances = [10.0 ** -j for j in range(3, 8)]
        values = [renyi_entropy(phase_point(2.0 + d, 1.0), alpha).value for d in distances]
        expected = -(1.0 + alpha) / (12.0 * alpha)
        residuals.append(abs(_slope([math.log(d) for d in distances], values) / expected - 1.0))
    return _family("critical_scaling", residuals, tol, "slope of S against ln|2 - h|, relative")


def check_xx_scaling(tol: float) -> CheckFamily:
    alpha = 2.0
    gammas = [10.0 ** -j for j in range(2, 6)]
    values = [renyi_entropy(phase_point(1.0, g), alpha).value for g in gammas]
    expected = -(1.0 + alpha) / (6.0 * alpha)
    residual = abs(_slope([math.log(g) for g in gammas], values) / expected - 1.0)
    return _family("xx_scaling", [residual], tol, "slope of S against ln gamma, relative")


def check_monotonicity(tol: float) -> CheckFamily:
    residuals = []
    for point in _grid_points():
        values = [renyi_entropy(point, alpha).value for alpha in MONOTONE_ALPHA]
        residuals.append(max(max(0.0, b - a) for a, b in zip(values, values[1:])))
    return _family("monotonicity", residuals, tol, "largest increase of S along the alpha grid")


CheckFn = Callable[[float], CheckFamily]

SUITES: Dict[str, List[Tuple[CheckFn, float]]] = {
    "elliptic": [
        (check_agm_vs_quadrature, 1e-12),
        (check_parameter_identity, 1e-15),
        (check_case_duality, 1e-13),
        (check_modulus_symmetry, 1e-15),
    ],
    "theta": [
        (check_jacobi_identities, 1e-12),
        (check_jacobi_quartic, 1e-13),
        (check_product_identities, 1e-13),
        (check_series_switch, 1e-12),
        (check_modular_consistency, 1e-12),
        (check_nome_roundtrip, 1e-12),
    ],
    "modular": [
        (check_fixed_points, 1e-13),
        (check_lambda_complement, 1e-13),
        (check_landen_step, 1e-12),
        (check_landen_composition, 1e-10),
        (check_f_g_inversion, 1e-11),
        (check_klein_two_routes, 1e-10),
        (check_klein_inversion, 1e-11),
        (check_schwarzian, 1e-6),
        (check_lambda_monotone, 1e-15),
    ],
    "entropy": [
        (check_oracle_equivalence, 1e-10),
        (check_factorizing_line, 1e-8),
        (check_von_neumann_limit, 1e-7),
        (check_von_neumann_series, 1e-10),
        (check_von_neumann_derivative, 1e-8),
        (check_landen_ladder, 1e-11),
        (check_alpha_inversion, 1e-9),
        (check_large_alpha, 1e-4),
        (check_single_copy, 1e-10),
        (check_small_alpha, 1e-3),
        (check_critical_scaling, 0.02),
        (check_xx_scaling, 0.02),
        (check_monotonicity, 1e-12),
    ],
}
SUITE_NAMES = tuple(SUITES) + ("all",)


def family_names(suite: str) -> List[str]:
    """Family names a suite produces (used to validate overrides)."""
    suites = list(SUITES) if suite == "all" else [suite]
    return [fn.__name__.removeprefix("check_") for name in suites for fn, _ in SUITES[name]]


def run_suite(suite: str, overrides: Optional[Dict[str, float]] = None) -> VerifyReport:
    """Run one named suite (or ``all``); ``overrides`` maps family name to tolerance."""
    if suite not in SUITE_NAMES:
        raise DomainError(f"unknown suite {suite!r}; choose one of {', '.join(SUITE_NAMES)}")
    overrides = dict(overrides or {})
    known = set(family_names(suite))
    for unused in sorted(set(overrides) - known):
        logger.warning(f"   ⚠️  Override for unknown family ignored: {unused}")
    suites = list(SUITES) if suite == "all" else [suite]

    logger.info(f"🔍 Running verification suite: {suite}")
    start_time = time.time()
    families: List[CheckFamily] = []
    for name in suites:
        for check, default_tol in SUITES[name]:
            key = check.__name__.removeprefix("check_")
            tolerance = overrides.get(key, default_tol)
            family_start = time.time()
            try:
                family = check(tolerance)
            except Exception as e:
                family = CheckFamily(
                    name=key, checks=0, max_residual=math.inf, tolerance=tolerance, passed=False,
                    detail=f"{type(e).__name__}: {e}",
                )
            elapsed = time.time() - family_start
            mark = "✓" if family.passed else "✗"
            logger.info(
                f"   {mark} {family.name}: max residual {family.max_residual:.3e} "
                f"(tol {family.tolerance:.1e}, {family.checks} checks, {elapsed:.2f}s)"
            )
            families.append(family)

    report = VerifyReport(suite=suite, families=families)
    elapsed = time.time() - start_time
    status = "✅ passed" if report.passed else "✗ FAILED"
    logger.info(f"{status}: {report.checks_run} checks in {len(families)} families (took {elapsed:.2f}s)")
    return report
