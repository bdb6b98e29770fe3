#!/usr/bin/env python3
"""Regenerate the phase-diagram sweep CSVs under data/."""
import sys
from pathlib import Path

# Add project root to path (scripts folder is one level down)
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from src.cli import configure_logging
from src.config import load_settings
from src.models import SweepConfig
from src.sweep import run_sweep

DATA_DIR = project_root / "data"

SWEEPS = {
    "phase_diagram.csv": dict(h_range=(0.1, 4.0, 40), gamma_range=(0.1, 1.0, 10), alpha_list=[0.5, 1.0, 2.0, 3.0]),
    "critical_field.csv": dict(h_range=(2.0001, 2.1, 30), gamma_range=(0.25, 1.0, 4), alpha_list=[1.0, 2.0]),
    "xx_limit.csv": dict(h_range=(0.5, 1.5, 3), gamma_range=(0.001, 0.1, 30), alpha_list=[1.0, 2.0]),
}


def main():
    """Run every sweep and report the row counts."""
    settings = load_settings()
    configure_logging(settings.log_level)
    print("🔄 Regenerating sweeps...")
    print("=" * 60)

    for name, grid in SWEEPS.items():
        config = SweepConfig(
            out_path=str(DATA_DIR / name),
            tol=settings.series_tol,
            max_workers=settings.max_workers,
            **grid,
        )
        rows = run_sweep(config, settings.tie_tol)
        blanks = sum(1 for row in rows if row["reason"])
        print(f"   ✓ {name}: {len(rows)} rows ({blanks} without a value)")

    print("=" * 60)
    print(f"✅ Sweeps written to {DATA_DIR}")


if __name__ == "__main__":
    main()
