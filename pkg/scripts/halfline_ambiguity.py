#!/usr/bin/env python3
"""Two filter bases that converge to the same point, answer a sharp half-line
question oppositely, and still agree on every unsharp question.

Usage: python scripts/halfline_ambiguity.py [LAMBDA]
"""

import sys
from fractions import Fraction

from unsharp.common import POS_INF
from unsharp.effects import box, constant, gaussian, scale, smear, triangle
from unsharp.filters import adjoin, converges_to, has_fmp, neighborhood_base
from unsharp.intervals import interval, union
from unsharp.measurement import indistinguishability_experiment
from unsharp.quotient import project


def main() -> None:
    lam = Fraction(sys.argv[1]) if len(sys.argv) > 1 else Fraction(0)
    base = neighborhood_base(lam, 64)
    right = project(interval(lam, POS_INF))
    s1 = adjoin(base, right, 64)

    print(f"anchor point: {lam}")
    cert = has_fmp(s1, 16)
    print(f"finite meet property of the right extension: {cert.ok}")
    for depth, w in cert.witnesses[:4]:
        print(f"  depth {depth:2d}: witness interval {w}")
    print(f"converges to: {converges_to(s1, 64, Fraction(1, 32))}")

    effects = [
        smear(interval(lam - 1, lam + 1), gaussian(Fraction(1, 5))),
        smear(union(interval(lam - 2, lam), interval(lam + 1, lam + 3)), box(Fraction(1, 2))),
        smear(interval(lam, lam + 2), triangle(Fraction(1, 4))),
        scale(Fraction(3, 8), smear(interval(lam - 3, lam + 3), box(1))),
        constant(Fraction(2, 3)),
    ]
    report = indistinguishability_experiment(lam, effects, 2**40, 1e-9)
    print(f"\nsharp question {report.sharp_question}:")
    print(f"  right extension answers {report.sharp_right}, left answers {report.sharp_left}")
    print("\nunsharp questions (value along each base vs the point state):")
    for row in report.rows:
        print(
            f"  dev {row.max_deviation:.2e}  point {row.point_value:.6f}  {row.label}"
        )
    verdict = "indistinguishable" if report.unsharp_agreement else "DISTINGUISHED"
    print(f"\nunsharp verdict: {verdict} (tolerance {report.tol:g})")


if __name__ == "__main__":
    main()
