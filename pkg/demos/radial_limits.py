"""Radial limits of the Sigma(2,3,7) false theta at x = 0 and x = 1/k.

The exact asymptotic coefficients alpha(n) come from L-values of the period-84
sign pattern.  A coarse grid such as t = 1/10, 1/20, 1/40 is not yet in the
asymptotic regime, so its extrapolant is far from alpha(0); the geometric grid
starting at 1/250 is.
"""

from fractions import Fraction

import mpmath

from zhat import sigma237, zhat_three_star
from zhat.modular import (ASYMPTOTIC_DEGREE, ASYMPTOTIC_GRID, SIGMA237_SIGN, asymptotic_coeffs, radial_extrapolate,
                          required_order, wrt_radial)


def main():
    alpha = asymptotic_coeffs(SIGMA237_SIGN, 42, 3)
    print("alpha:", ", ".join(str(a) for a in alpha))

    coarse = radial_extrapolate(zhat_three_star(sigma237(), 2000), 0, [Fraction(1, 10), Fraction(1, 20), Fraction(1, 40)])
    print("coarse grid extrapolant:", mpmath.nstr(coarse.extrapolant, 8))

    z = zhat_three_star(sigma237(), required_order(ASYMPTOTIC_GRID))
    fine = radial_extrapolate(z, 0, ASYMPTOTIC_GRID, degree=ASYMPTOTIC_DEGREE)
    print("asymptotic grid extrapolant:", mpmath.nstr(fine.extrapolant, 8),
          "error", mpmath.nstr(fine.error_estimate, 3))
    print("slope:", mpmath.nstr(fine.slope(), 12), "vs", mpmath.nstr(alpha[1].value(), 12))

    for k in (1, 2, 3):
        rep = wrt_radial(sigma237(), k, series=z)
        print(f"k = {k}: limit {mpmath.nstr(rep.radial.extrapolant, 10)}, "
              f"Z_CS without X00 {mpmath.nstr(rep.without_x, 10)}, with X00 {mpmath.nstr(rep.with_x, 10)}")


if __name__ == "__main__":
    main()
