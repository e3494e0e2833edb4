"""Independent brute-force oracles used only by the test suite.

These deliberately share no code path with the package implementations:
reducibility by Kronecker value-interpolation, ergodicity by a numerical
root-of-unity scan.
"""

from fractions import Fraction
from itertools import product

import numpy as np

from phlab.intpoly import IntPoly


def _divisors_signed(n: int) -> list[int]:
    n = abs(n)
    out = []
    for d in range(1, n + 1):
        if n % d == 0:
            out.extend((d, -d))
    return out


def _lagrange_poly(points: list[tuple[int, int]]) -> tuple[Fraction, ...] | None:
    """Interpolating polynomial through integer points, as Fractions (const first)."""
    k = len(points) - 1
    coeffs = [Fraction(0)] * (k + 1)
    for i, (xi, yi) in enumerate(points):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j, (xj, _) in enumerate(points):
            if i == j:
                continue
            new = [Fraction(0)] * (len(basis) + 1)
            for m, c in enumerate(basis):
                new[m] += -xj * c
                new[m + 1] += c
            basis = new
            denom *= xi - xj
        for m, c in enumerate(basis):
            coeffs[m] += Fraction(yi) * c / denom
    return tuple(coeffs)


def kronecker_reducible(p: IntPoly) -> bool:
    """Kronecker's method: search integer-valued factor candidates of degree
    <= deg/2 by enumerating divisor combinations at small sample points."""
    d = p.degree
    if d <= 1:
        return False
    if p.coeffs[0] == 0:
        return True
    xs = [0, 1, -1, 2, -2, 3, -3]
    for k in range(1, d // 2 + 1):
        pts = xs[: k + 1]
        vals = [p(x) for x in pts]
        if any(v == 0 for v in vals):
            return True  # integer root
        choices = [_divisors_signed(v) for v in vals]
        for combo in product(*choices):
            coeffs = _lagrange_poly(list(zip(pts, combo)))
            if any(c.denominator != 1 for c in coeffs):
                continue
            g = IntPoly(tuple(int(c) for c in coeffs))
            if g.degree != k:
                continue
            if g.leading < 0:
                g = -g
            if not g.is_monic:
                continue  # monic p has monic factors up to sign
            quolist, rem = _int_divmod(p, g)
            if rem is not None and rem.is_zero:
                return True
    return False


def _int_divmod(num: IntPoly, den: IntPoly):
    from phlab.intpoly import divmod_exact

    try:
        return divmod_exact(num, den)
    except ValueError:
        return None, None


def numeric_ergodicity_scan(p: IntPoly, n_max: int = 1000, tol: float = 1e-9) -> tuple[bool, float]:
    """(ergodic?, min |lambda^n - 1|): declares non-ergodic when some power of
    some root comes within tol of 1."""
    coeffs = list(reversed(p.coeffs))
    roots = np.roots(coeffs) if p.degree >= 1 else np.array([])
    # moduli away from 1 cannot power back to 1; dropping them avoids overflow
    roots = roots[np.abs(np.abs(roots) - 1.0) < 0.01] if roots.size else roots
    if roots.size == 0:
        return True, np.inf
    powers = np.ones_like(roots)
    closest = np.inf
    for _ in range(n_max):
        powers = powers * roots
        closest = min(closest, float(np.min(np.abs(powers - 1.0))))
        if closest < tol:
            return False, closest
    return True, closest
