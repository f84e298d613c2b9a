"""
Rejection-rate table for the simulation scenarios.

Runs a study configuration (desk scale by default) and writes the JSON
result, the Table-1 shaped CSV and the long per-cell CSV to results/.

Usage:
    python scripts/run_table1.py [configs/table1_full.toml] [--jobs N]
"""

import argparse
import sys
from pathlib import Path

# Add src to path
sys.path.append(str(Path(__file__).parent.parent))

from src.study import load_study_config, print_study_summary, run_study
from src.utils import configure_logger, print_section_header, save_results

ROOT = Path(__file__).parent.parent


def main():
    """Run the study and save its outputs."""
    parser = argparse.ArgumentParser(description=__doc__.strip().splitlines()[0])
    parser.add_argument("config", nargs="?", default=str(ROOT / "configs" / "table1_desk.toml"))
    parser.add_argument("--jobs", default="auto", help="Worker count or 'auto'")
    parser.add_argument("--results-dir", default=str(ROOT / "results"))
    args = parser.parse_args()

    results_dir = Path(args.results_dir)
    results_dir.mkdir(parents=True, exist_ok=True)
    logger = configure_logger(str(results_dir / "table1.log"), level="INFO")

    print_section_header("ASSOCIATIVITY / ARCHIMEDEANITY REJECTION RATES")
    config = load_study_config(args.config)
    logger.info(f"Config: {args.config}")

    n_jobs = -1 if args.jobs == "auto" else int(args.jobs)
    result = run_study(config, n_jobs=n_jobs)

    stem = Path(args.config).stem
    save_results(result.payload(include_timing=True), str(results_dir / f"{stem}.json"))
    result.to_table().to_csv(results_dir / f"{stem}_table.csv", index=False, lineterminator="\n")
    result.to_long_frame().to_csv(results_dir / f"{stem}_long.csv", index=False, lineterminator="\n")
    print_study_summary(result)
    logger.info(f"Outputs written to {results_dir}")


if __name__ == "__main__":
    main()
