"""
Entry point.

    python main.py fit --summary 31,30.4,5.7,429
    python main.py risk-curve --deltas 0:5:0.5 --nmc 100000
    python main.py reproduce --out reproduction
    python main.py serve
"""

import sys

from src.cli import main

if __name__ == "__main__":
    sys.exit(main())
