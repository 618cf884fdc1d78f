"""Count CM curves by conductor and look at the growth rate.

The thirteen rational CM j-invariants each carry a twist family (quadratic in
eleven cases, quartic at j = 1728, sextic at j = 0). Counting members with
conductor up to N and fitting log(count) against log(N) shows growth a bit
above the square-root trend: several characters share each conductor in the
quartic and sextic families, which adds log powers at these scales.

Run: python3 demos/cm_census_growth.py [ceiling]
"""

import math
import sys

from ellgal.family import cm_census


def main():
    ceiling = int(sys.argv[1]) if len(sys.argv) > 1 else 10**5
    rep = cm_census(ceiling)
    print(f"{'ceiling':>10} {'count':>8} {'count/sqrt(N)':>14}")
    for n, c, r in zip(rep["ceilings"], rep["counts"], rep["ratioToSqrt"]):
        print(f"{n:>10} {c:>8} {r:>14.3f}")
    if rep["fittedExponent"] is not None:
        print(f"\nfitted exponent: {rep['fittedExponent']:.4f}"
              f"  (residual {rep['fitResidual']:.2e})")
    print("\nper j-invariant at the top ceiling:")
    for j, c in sorted(rep["perJInvariant"].items(), key=lambda kv: -kv[1]):
        print(f"  j = {j:>22}: {c:>6}  ({c / rep['counts'][-1]:.1%})")
    total = sum(rep["perJInvariant"].values())
    assert total == rep["counts"][-1]
    print(f"\nsqrt({ceiling}) = {math.sqrt(ceiling):.0f} for comparison")


if __name__ == "__main__":
    main()
