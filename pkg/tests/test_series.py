"""Tests for the eigenvalue-series oracle."""
import math
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent.parent))

from src.elliptic import modulus_data, phase_point
from src.errors import ConvergenceError, CriticalPointError, DomainError
from src.models import Method
from src.series import (
    renyi_from_spectrum,
    renyi_series,
    single_copy_series,
    spectrum,
    spectrum_sigma,
    von_neumann_from_spectrum,
    von_neumann_series,
    window_size,
)

LN2 = math.log(2.0)


def brute_force_renyi(lambdas, alpha):
    lam = np.asarray(lambdas)
    return math.fsum(np.log(((1 + lam) / 2) ** alpha + ((1 - lam) / 2) ** alpha)) / (1 - alpha)


def brute_force_entropy(lambdas):
    total = 0.0
    for lam in lambdas:
        for p in ((1 + lam) / 2, (1 - lam) / 2):
            if p > 0:
                total -= p * math.log(p)
    return total


def test_sigma_by_phase():
    """Half-integer spectrum above the field, integer below it."""
    assert spectrum_sigma(phase_point(3.0, 1.0)) == 0
    assert spectrum_sigma(phase_point(1.0, 0.5)) == 1
    with pytest.raises(CriticalPointError):
        spectrum_sigma(phase_point(2.0, 1.0))


def test_spectrum_window():
    """lambda_m = tanh((m + (1 - sigma)/2) pi tau0) with lambda_0 = 0 for sigma = 1."""
    window = spectrum(0.8, 1, 3)
    assert len(window.lambdas) == 7
    assert window.lambdas[3] == 0.0
    assert window.lambdas[4] == pytest.approx(math.tanh(math.pi * 0.8), rel=1e-15)
    half = spectrum(0.8, 0, 2)
    assert half.lambdas[2] == pytest.approx(math.tanh(0.5 * math.pi * 0.8), rel=1e-15)
    with pytest.raises(DomainError):
        spectrum(0.8, 2, 3)


def test_infinite_tau0():
    """Only lambda_0 = 0 survives on the integer spectrum, giving ln 2."""
    for alpha in (0.5, 2.0, 7.0):
        value, tail = renyi_from_spectrum(math.inf, 1, alpha)
        assert value == pytest.approx(LN2, rel=1e-15)
        assert tail == 0.0
    assert von_neumann_from_spectrum(math.inf, 1)[0] == pytest.approx(LN2, rel=1e-15)
    assert renyi_from_spectrum(math.inf, 0, 2.0)[0] == 0.0


@pytest.mark.parametrize("sigma", [0, 1])
@pytest.mark.parametrize("alpha", [1.5, 2.0, 5.0])
def test_matches_brute_force_sum(sigma, alpha):
    """The log1p form agrees with the naive probability sum on a long window."""
    tau0 = 0.7
    lambdas = spectrum(tau0, sigma, 200).lambdas
    if sigma == 0:
        lambdas = lambdas[:-1]
    value, _ = renyi_from_spectrum(tau0, sigma, alpha)
    assert value == pytest.approx(brute_force_renyi(lambdas, alpha), abs=1e-12)


@pytest.mark.parametrize("sigma", [0, 1])
def test_von_neumann_matches_brute_force(sigma):
    """Binary-entropy sum agrees with -sum p ln p over the window."""
    tau0 = 0.9
    lambdas = spectrum(tau0, sigma, 200).lambdas
    if sigma == 0:
        lambdas = lambdas[:-1]
    value, _ = von_neumann_from_spectrum(tau0, sigma)
    assert value == pytest.approx(brute_force_entropy(lambdas), abs=1e-12)


@pytest.mark.parametrize("sigma", [0, 1])
def test_folded_and_unfolded_agree(sigma):
    """Mirror terms are equal, so folding the window changes nothing."""
    tau0 = 0.6
    folded, _ = renyi_from_spectrum(tau0, sigma, 3.0, folded=True)
    unfolded, _ = renyi_from_spectrum(tau0, sigma, 3.0, folded=False)
    assert folded == pytest.approx(unfolded, abs=1e-14)
    vn_folded, _ = von_neumann_from_spectrum(tau0, sigma, folded=True)
    vn_unfolded, _ = von_neumann_from_spectrum(tau0, sigma, folded=False)
    assert vn_folded == pytest.approx(vn_unfolded, abs=1e-14)


def test_tail_bound_is_honest():
    """Doubling the window moves the sum by less than the reported tail."""
    tau0 = 0.3
    for alpha in (0.5, 2.0):
        count, _ = window_size(tau0, 1, min(alpha, 1.0), 1e-6)
        value, tail = renyi_from_spectrum(tau0, 1, alpha, window=count)
        longer, _ = renyi_from_spectrum(tau0, 1, alpha, window=2 * count)
        assert abs(longer - value) <= tail
        assert tail <= 1e-6


def test_window_limit():
    """A tau0 next to a critical line needs too many terms."""
    with pytest.raises(ConvergenceError):
        window_size(1e-9, 0, 0.5, 1e-13)


def test_rejects_bad_inputs():
    """alpha = 1, alpha <= 0 and tol <= 0 are refused."""
    with pytest.raises(DomainError):
        renyi_from_spectrum(1.0, 0, 1.0)
    with pytest.raises(DomainError):
        renyi_from_spectrum(1.0, 0, -2.0)
    with pytest.raises(DomainError):
        renyi_from_spectrum(1.0, 0, 2.0, tol=0.0)


def test_renyi_series_result():
    """renyi_series tags its result and reports the tail."""
    point = phase_point(3.0, 1.0)
    result = renyi_series(point, 2.0)
    assert result.method == Method.SERIES
    assert result.alpha == 2.0
    assert result.tol_attained <= 1e-13
    assert result.value > 0


def test_series_brackets_von_neumann():
    """S_alpha at alpha = 1 -+ 1e-6 brackets the von Neumann sum within 1e-5."""
    point = phase_point(0.5, 0.5)
    vn = von_neumann_series(point).value
    above = renyi_series(point, 1.0 + 1e-6).value
    below = renyi_series(point, 1.0 - 1e-6).value
    assert above <= vn <= below
    assert below - above <= 1e-5


def test_single_copy_is_largest_probability():
    """-ln p_max equals the product of the larger block probabilities."""
    point = phase_point(1.0, 0.8)
    tau0 = modulus_data(point).tau0
    lambdas = np.asarray(spectrum(tau0, 1, 200).lambdas)
    log_p_max = math.fsum(np.log((1 + np.abs(lambdas)) / 2))
    result = single_copy_series(point)
    assert result.alpha is None
    assert result.value == pytest.approx(-log_p_max, abs=1e-12)


def test_purity_from_the_spectrum():
    """exp(-S_2) is Tr rho^2 of the factorised density matrix."""
    point = phase_point(3.0, 1.0)
    tau0 = modulus_data(point).tau0
    lambdas = np.asarray(spectrum(tau0, 0, 200).lambdas[:-1])
    purity = float(np.prod((1 + lambdas * lambdas) / 2))
    assert math.exp(-renyi_series(point, 2.0).value) == pytest.approx(purity, rel=1e-12)
