"""CSV rows for single points and deterministic phase-diagram sweeps."""
import csv
import io
import logging
import time
import traceback
from concurrent.futures import ThreadPoolExecutor, as_completed
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, TextIO, Tuple

import numpy as np

from src.elliptic import DEFAULT_TIE_TOL, factorizing_field, modulus_data, phase_point
from src.entropy import (
    CRITICAL_FIELD_GUARD,
    SMALL_ALPHA_GUARD,
    VON_NEUMANN_BAND,
    XX_GAMMA_GUARD,
    critical_field_estimate,
    large_alpha_limit,
    renyi_entropy,
    small_alpha_estimate,
    von_neumann,
    xx_limit_estimate,
)
from src.errors import ConvergenceError, CriticalPointError, DomainError
from src.models import PhasePoint, Region, SweepConfig
from src.series import DEFAULT_TOL, renyi_series, von_neumann_series

logger = logging.getLogger(__name__)

CSV_COLUMNS = [
    "h", "gamma", "alpha", "region", "k", "kprime", "tau0", "q",
    "S_renyi", "S_vonNeumann", "method", "tol_attained", "reason",
]

Row = Dict[str, Any]


def format_number(value: Any) -> str:
    """17 significant digits for floats, empty string for None."""
    if value is None:
        return ""
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def parse_range(text: str) -> Tuple[float, float, int]:
    """Parse MIN:MAX:STEPS."""
    parts = text.split(":")
    if len(parts) != 3:
        raise DomainError(f"range must look like MIN:MAX:STEPS, got {text!r}")
    try:
        return float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as e:
        raise DomainError(f"range must look like MIN:MAX:STEPS, got {text!r}") from e


def grid(bounds: Tuple[float, float, int]) -> List[float]:
    lo, hi, steps = bounds
    return np.linspace(lo, hi, steps).tolist()


def _blank_row(h: float, gamma: float, alpha: float, region: Optional[Region], reason: str) -> Row:
    row: Row = {column: None for column in CSV_COLUMNS}
    row.update(h=h, gamma=gamma, alpha=alpha, region=region.value if region else None, reason=reason)
    return row


def _point_row(point: PhasePoint, alpha: float, tol: float, series: bool) -> Row:
    data = modulus_data(point)
    if series:
        if abs(alpha - 1.0) <= VON_NEUMANN_BAND:
            renyi = von_neumann_series(point, tol)
        else:
            renyi = renyi_series(point, alpha, tol)
        entropy = von_neumann_series(point, tol)
    else:
        renyi = renyi_entropy(point, alpha)
        entropy = von_neumann(point)
    return {
        "h": point.h,
        "gamma": point.gamma,
        "alpha": alpha,
        "region": point.region.value,
        "k": data.k,
        "kprime": data.kprime,
        "tau0": data.tau0,
        "q": data.q,
        "S_renyi": renyi.value,
        "S_vonNeumann": entropy.value,
        "method": renyi.method.value,
        "tol_attained": renyi.tol_attained,
        "reason": "",
    }


def evaluate_row(
    h: float,
    gamma: float,
    alpha: float,
    tol: float = DEFAULT_TOL,
    series: bool = False,
    tie_tol: float = DEFAULT_TIE_TOL,
) -> Row:
    """One CSV record for (h, gamma, alpha); errors propagate to the caller."""
    if not alpha > 0:
        raise DomainError(f"alpha must be > 0, got alpha={alpha}")
    point = phase_point(h, gamma, tie_tol)
    if point.region.is_critical:
        raise CriticalPointError(
            f"{point.region.value}: closed forms degenerate at h={point.h}, gamma={point.gamma}"
        )
    return _point_row(point, alpha, tol, series)


def format_row(row: Row) -> List[str]:
    return [format_number(row[column]) for column in CSV_COLUMNS]


def write_rows(rows: Sequence[Row], stream: TextIO, header: bool = True) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    if header:
        writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow(format_row(row))


def rows_to_csv(rows: Sequence[Row], header: bool = True) -> str:
    buffer = io.StringIO()
    write_rows(rows, buffer, header)
    return buffer.getvalue()


class PhaseSweeper:
    """Evaluates a SweepConfig grid on a thread pool and writes the CSV in h, gamma, alpha order."""

    def __init__(self, config: SweepConfig, tie_tol: float = DEFAULT_TIE_TOL):
        self.config = config
        self.tie_tol = tie_tol

    def _process_point(self, h: float, gamma: float) -> List[Row]:
        """Rows for every alpha at one (h, gamma); failures become rows with a reason."""
        rows = []
        for alpha in self.config.alpha_list:
            try:
                rows.append(evaluate_row(h, gamma, alpha, self.config.tol, self.config.series, self.tie_tol))
            except CriticalPointError:
                region = phase_point(h, gamma, self.tie_tol).region
                rows.append(_blank_row(h, gamma, alpha, region, region.value))
            except (DomainError, ConvergenceError) as e:
                logger.warning(f"   ✗ h={h} gamma={gamma} alpha={alpha}: {type(e).__name__}: {e}")
                region = None
                try:
                    region = phase_point(h, gamma, self.tie_tol).region
                except DomainError:
                    pass
                rows.append(_blank_row(h, gamma, alpha, region, type(e).__name__))
        return rows

    def run(self) -> List[Row]:
        """Evaluate the whole grid and write it to ``config.out_path``."""
        h_values = grid(self.config.h_range)
        gamma_values = grid(self.config.gamma_range)
        points = [(h, gamma) for h in h_values for gamma in gamma_values]
        workers = self.config.max_workers

        logger.info(f"🚀 Starting sweep: {len(h_values)} x {len(gamma_values)} points x {len(self.config.alpha_list)} orders")
        logger.info(f"⚙️  Using {workers} parallel workers")
        start_time = time.time()

        results: Dict[int, List[Row]] = {}
        with ThreadPoolExecutor(max_workers=workers) as executor:
            future_to_index = {
                executor.submit(self._process_point, h, gamma): index
                for index, (h, gamma) in enumerate(points)
            }
            completed = 0
            for future in as_completed(future_to_index):
                index = future_to_index[future]
                try:
                    results[index] = future.result()
                except Exception as e:
                    h, gamma = points[index]
                    logger.error(f"   ✗ Point h={h} gamma={gamma} generated an exception: {e}")
                    logger.debug(traceback.format_exc())
                    results[index] = [
                        _blank_row(h, gamma, alpha, None, type(e).__name__) for alpha in self.config.alpha_list
                    ]
                completed += 1
                if completed % 50 == 0:
                    logger.info(f"   ✓ Progress: {completed}/{len(points)} points evaluated")

        rows = [row for index in range(len(points)) for row in results[index]]
        elapsed = time.time() - start_time
        logger.info(f"✅ Sweep completed: {len(rows)} rows (took {elapsed:.2f}s)")

        out_path = Path(self.config.out_path)
        if out_path.parent and not out_path.parent.exists():
            out_path.parent.mkdir(parents=True, exist_ok=True)
        with open(out_path, "w", encoding="utf-8", newline="") as f:
            write_rows(rows, f, header=True)
        logger.info(f"📄 Wrote {out_path}")
        return rows


def run_sweep(config: SweepConfig, tie_tol: float = DEFAULT_TIE_TOL) -> List[Row]:
    """Convenience wrapper around PhaseSweeper."""
    return PhaseSweeper(config, tie_tol).run()


LIMIT_COLUMNS = ["estimate", "alpha", "value", "method", "tol_attained"]


def limit_rows(h: float, gamma: float, alpha: float, tie_tol: float = DEFAULT_TIE_TOL) -> List[Row]:
    """Closed form beside every asymptotic estimate whose guard holds at (h, gamma, alpha)."""
    point = phase_point(h, gamma, tie_tol)
    results = [("closed_form", renyi_entropy(point, alpha))]
    if alpha != 1.0:
        results.append(("large_alpha", large_alpha_limit(point, alpha)))
    results.append(("single_copy", large_alpha_limit(point)))

    data = modulus_data(point)
    if alpha * data.tau0 < SMALL_ALPHA_GUARD:
        results.append(("small_alpha", small_alpha_estimate(point, alpha)))
        if alpha != 1.0:
            results.append(("small_alpha_refined", small_alpha_estimate(point, alpha, refined=True)))
    if 0.0 < abs(h - 2.0) < CRITICAL_FIELD_GUARD:
        results.append(("critical_field", critical_field_estimate(gamma, h, alpha, tie_tol)))
    if 0.0 < gamma < XX_GAMMA_GUARD and h < factorizing_field(gamma):
        results.append(("xx_limit", xx_limit_estimate(gamma, h, alpha, tie_tol)))

    return [
        {
            "estimate": name,
            "alpha": result.alpha if result.alpha is not None else "inf",
            "value": result.value,
            "method": result.method.value,
            "tol_attained": result.tol_attained,
        }
        for name, result in results
    ]


def limits_to_csv(rows: Sequence[Row], header: bool = True) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    if header:
        writer.writerow(LIMIT_COLUMNS)
    for row in rows:
        writer.writerow([format_number(row[column]) for column in LIMIT_COLUMNS])
    return buffer.getvalue()
