"""
Command-line entry point.

Usage:
    python scripts/archtest.py test data.csv --hypothesis arch --stat l2 -B 200
    python scripts/archtest.py sample "clayton(theta=1)" -n 500 --seed 7
    python scripts/archtest.py study configs/table1_desk.toml --jobs auto
    python scripts/archtest.py diag --model "clayton(theta=1)" -n 100
"""

import sys
from pathlib import Path

# Add src to path
sys.path.append(str(Path(__file__).parent.parent))

from src.cli import main


if __name__ == "__main__":
    sys.exit(main())
