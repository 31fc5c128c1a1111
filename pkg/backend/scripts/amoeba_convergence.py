"""
Script to print how the rescaled amoebas of 1 + z1^m + z2^m approach the tropical line
"""
import sys
from pathlib import Path

# Add parent directory to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from app.services.amoeba import distances_by_m
from app.services.troppoly import TropicalPolynomial

BOUND = "0.70/m + 0.02"


def main(max_m: int = 6, grid: int = 200, window=(-4.0, 4.0)):
    line = TropicalPolynomial.from_terms(2, {(0, 0): 0, (1, 0): 0, (0, 1): 0})
    print("=" * 50)
    print(f"AMOEBA CONVERGENCE for {line}")
    print(f"grid {grid}, window {window[0]}:{window[1]}")
    print("=" * 50)
    print(f"{'m':>3}  {'distance':>10}  {'bound':>10}")
    for m, distance in distances_by_m(line, range(1, max_m + 1), grid, window):
        bound = 0.70 / m + 0.02
        marker = "" if distance <= bound else "  exceeds " + BOUND
        print(f"{m:>3}  {distance:>10.6f}  {bound:>10.6f}{marker}")
    print("=" * 50)


if __name__ == "__main__":
    main(int(sys.argv[1]) if len(sys.argv) > 1 else 6)
