"""Sigma(2,3,7) from both orientations.

Run with ``python3 demos/sigma237_both_sides.py``.  The false side comes from
two engines (lattice sum and three-star closed form), the mock side from the
regularized indefinite theta and, independently, from surgery on the
figure-eight knot.
"""

from fractions import Fraction

from zhat import (SurgerySlope, figure_eight_FK, format_series, mock_F0_reference, sigma237,
                  surgery_zhat, three_star_params, zhat_negative_definite, zhat_reversed, zhat_three_star)
from zhat.surgery import normalized


def main():
    g = sigma237()
    p = three_star_params(g)
    print(f"m = {p.m}, b = {', '.join(map(str, p.b))}, prefactor q^({p.prefactor_exponent})")

    lattice = zhat_negative_definite(g, None, 30)
    closed = zhat_three_star(g, 30)
    print("Z(+):", format_series(lattice))
    print("engines agree:", lattice == closed)

    rev = zhat_reversed(g, 20)
    print("Z(-):", format_series(rev))
    f0 = mock_F0_reference(20)
    print("q^(1/2) Z(-) equals F0:", rev.shift(Fraction(1, 2)).truncate(20) == f0)

    raw, guard = surgery_zhat(figure_eight_FK(), SurgerySlope(-1, 1))
    e0, sign, norm = normalized(raw)
    print(f"surgery on 4_1, slope -1: exact below q^{guard}")
    print("  normalized:", format_series(norm))
    print("  sign relative to Z(-):", sign * normalized(rev)[1])


if __name__ == "__main__":
    main()
