"""Write a Lebedev rule as rows "x y z w" (weights summing to 4*pi).

Usage: python tools/gen_lebedev.py ORDER OUT

ORDER 131 gives the 5810-point rule. Requires scipy >= 1.15.
"""
import sys

import numpy as np
from scipy.integrate import lebedev_rule


def main() -> None:
    order, out = int(sys.argv[1]), sys.argv[2]
    x, w = lebedev_rule(order)
    x = x / np.linalg.norm(x, axis=0)
    with open(out, "w") as f:
        f.write(f"# Lebedev rule, order {order}, {w.size} points; columns x y z w (sum w = 4 pi)\n")
        for (a, b, c), wi in zip(x.T, w):
            f.write(f"{a:.17g} {b:.17g} {c:.17g} {wi:.17g}\n")


if __name__ == "__main__":
    main()
