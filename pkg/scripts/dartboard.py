#!/usr/bin/env python3
"""Dartboard experiment: throw darts from a mixed density, read them at
several precision levels, then let an imperfect score-keeper tally one fixed
round of throws.

Usage: python scripts/dartboard.py [SEED]
"""

import sys
from fractions import Fraction

from unsharp.common import DEFAULT_SEED
from unsharp.effects import evaluate, gaussian, smear
from unsharp.intervals import interval
from unsharp.measurement import PrecisionScheme, run_protocol, sample, scorekeeper
from unsharp.states import Mixture, normal, sharp_probability, uniform


def main() -> None:
    seed = int(sys.argv[1]) if len(sys.argv) > 1 else DEFAULT_SEED
    board = Mixture(
        (
            (Fraction(3, 4), normal(0, Fraction(1, 2))),
            (Fraction(1, 4), uniform(1, 2)),
        )
    )
    print(f"density: {board.describe()}   seed: {seed}")

    count = 20_000
    for level in (1, 2, 3):
        record = run_protocol(board, level, count, seed)
        scheme = PrecisionScheme(level)
        print(f"\nlevel {level} (cell width {scheme.diameter}):")
        shown = 0
        for i, c in record.counts:
            lo, hi = scheme.cell_bounds(i)
            p = float(sharp_probability(board, interval(lo, hi, True, False)))
            if p < 0.01:
                continue
            bar = "#" * round(200 * c / count)
            print(f"  [{str(lo):>5}, {str(hi):>5})  freq {c/count:.4f}  p {p:.4f}  {bar}")
            shown += 1
            if shown >= 12:
                break

    region = interval(-1, 1)
    detector = gaussian(Fraction(1, 3))
    throws = sample(board, 100, seed + 1)
    sheet = scorekeeper(region, detector, throws, seed + 2)
    response = smear(region, detector)
    expected = sum(float(evaluate(response, q)) for q in throws)
    print(f"\nscore-keeper on 100 throws against {region}:")
    print(f"  printout: {sheet.printout()}")
    print(f"  tally: {sheet.y_count} y / {sheet.n_count} n (expected y about {expected:.1f})")


if __name__ == "__main__":
    main()
