"""Exact integer polynomial arithmetic for desk-scale spectral certification.

Polynomials are dense tuples of Python ints, constant term first, so x^2 - 3x + 1
is IntPoly((1, -3, 1)).  Everything here is exact: no floats enter any decision.
Scope is monic polynomials of degree <= 12 (degree-split factor search is
exhaustive and correct, not fast).
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction


def _trim(coeffs) -> tuple[int, ...]:
    end = len(coeffs)
    while end > 0 and coeffs[end - 1] == 0:
        end -= 1
    return tuple(coeffs[:end])


@dataclass(frozen=True)
class IntPoly:
    coeffs: tuple[int, ...]

    def __init__(self, coeffs=()):
        object.__setattr__(self, "coeffs", _trim(tuple(int(c) for c in coeffs)))

    @staticmethod
    def x() -> "IntPoly":
        return IntPoly((0, 1))

    @staticmethod
    def constant(c: int) -> "IntPoly":
        return IntPoly((c,))

    @staticmethod
    def monomial(degree: int, c: int = 1) -> "IntPoly":
        return IntPoly((0,) * degree + (c,))

    @property
    def degree(self) -> int:
        """Degree; the zero polynomial has degree -1."""
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> int:
        if self.is_zero:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    @property
    def is_monic(self) -> bool:
        return not self.is_zero and self.leading == 1

    def __add__(self, other: "IntPoly") -> "IntPoly":
        return IntPoly(tuple(a + b for a, b in itertools.zip_longest(self.coeffs, other.coeffs, fillvalue=0)))

    def __sub__(self, other: "IntPoly") -> "IntPoly":
        return IntPoly(tuple(a - b for a, b in itertools.zip_longest(self.coeffs, other.coeffs, fillvalue=0)))

    def __neg__(self) -> "IntPoly":
        return IntPoly(tuple(-c for c in self.coeffs))

    def __mul__(self, other) -> "IntPoly":
        if isinstance(other, int):
            return IntPoly(tuple(c * other for c in self.coeffs))
        out = [0] * (len(self.coeffs) + len(other.coeffs))
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return IntPoly(tuple(out))

    __rmul__ = __mul__

    def __call__(self, x):
        """Horner evaluation; works for int, Fraction, float, complex, IntPoly."""
        if isinstance(x, IntPoly):
            acc = IntPoly()
            for c in reversed(self.coeffs):
                acc = acc * x + IntPoly.constant(c)
            return acc
        acc = 0 * x
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "IntPoly":
        return IntPoly(tuple(i * c for i, c in enumerate(self.coeffs))[1:])

    def reversed_coeffs(self) -> "IntPoly":
        """x^deg * p(1/x): the polynomial with reversed coefficient order."""
        return IntPoly(tuple(reversed(self.coeffs)))

    @property
    def is_palindromic(self) -> bool:
        return not self.is_zero and self.coeffs == tuple(reversed(self.coeffs))

    @property
    def is_antipalindromic(self) -> bool:
        return not self.is_zero and self.coeffs == tuple(-c for c in reversed(self.coeffs))

    def content(self) -> int:
        if self.is_zero:
            return 0
        return math.gcd(*(abs(c) for c in self.coeffs)) if len(self.coeffs) > 1 else abs(self.coeffs[0])

    def primitive(self) -> "IntPoly":
        """Primitive part with positive leading coefficient."""
        if self.is_zero:
            return self
        g = self.content()
        sign = 1 if self.leading > 0 else -1
        return IntPoly(tuple(sign * c // g for c in self.coeffs))

    def norm2(self) -> float:
        return math.sqrt(sum(c * c for c in self.coeffs))

    def __repr__(self):
        if self.is_zero:
            return "IntPoly('0')"
        parts = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            sign = " - " if c < 0 else (" + " if parts else "")
            mag = abs(c)
            term = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            coef = str(mag) if (mag != 1 or i == 0) else ""
            parts.append(f"{sign}{coef}{term}")
        return f"IntPoly('{''.join(parts)}')"


def divmod_exact(num: IntPoly, den: IntPoly) -> tuple[IntPoly, IntPoly]:
    """Quotient and remainder over Q, demanding both come out integral.

    Valid whenever den is monic (the only case used here); raises otherwise
    if any division is inexact.
    """
    if den.is_zero:
        raise ZeroDivisionError("polynomial division by zero")
    q, r = _frac_divmod(_to_frac(num), _to_frac(den))
    return _from_frac_exact(q), _from_frac_exact(r)


def _to_frac(p: IntPoly) -> tuple[Fraction, ...]:
    return tuple(Fraction(c) for c in p.coeffs)


def _from_frac_exact(coeffs) -> IntPoly:
    out = []
    for c in coeffs:
        if c.denominator != 1:
            raise ValueError("inexact polynomial division")
        out.append(int(c))
    return IntPoly(tuple(out))


def _frac_trim(c):
    end = len(c)
    while end > 0 and c[end - 1] == 0:
        end -= 1
    return tuple(c[:end])


def _frac_divmod(num, den):
    den = _frac_trim(den)
    num = list(_frac_trim(num))
    dn = len(den) - 1
    lead = den[-1]
    if dn < 0:
        raise ZeroDivisionError
    q = [Fraction(0)] * max(len(num) - dn, 0)
    while len(num) - 1 >= dn and _frac_trim(num):
        k = len(num) - 1 - dn
        f = num[-1] / lead
        q[k] = f
        for i, d in enumerate(den):
            num[k + i] -= f * d
        num = list(_frac_trim(num))
    return tuple(q), tuple(num)


def poly_gcd(a: IntPoly, b: IntPoly) -> IntPoly:
    """Primitive gcd over Z, computed by monic Euclid over Q."""
    fa, fb = _to_frac(a), _to_frac(b)
    while _frac_trim(fb):
        fa, fb = fb, _frac_divmod(fa, fb)[1]
    fa = _frac_trim(fa)
    if not fa:
        return IntPoly()
    den = math.lcm(*(c.denominator for c in fa))
    ints = [int(c * den) for c in fa]
    return IntPoly(tuple(ints)).primitive()


def is_squarefree(p: IntPoly) -> bool:
    if p.degree <= 1:
        return True
    return poly_gcd(p, p.derivative()).degree == 0


# ---------------------------------------------------------------------------
# cyclotomic polynomials
# ---------------------------------------------------------------------------

def totient(n: int) -> int:
    result, m, q = 1, n, 2
    while q * q <= m:
        if m % q == 0:
            power = 1
            while m % q == 0:
                m //= q
                power *= q
            result *= power - power // q
        q += 1
    if m > 1:
        result *= m - 1
    return result


@functools.lru_cache(maxsize=None)
def cyclotomic(n: int) -> IntPoly:
    """The n-th cyclotomic polynomial, by dividing x^n - 1 by proper divisors."""
    if n < 1:
        raise ValueError("cyclotomic index must be positive")
    poly = IntPoly((-1,) + (0,) * (n - 1) + (1,))
    for d in range(1, n):
        if n % d == 0:
            poly, rem = divmod_exact(poly, cyclotomic(d))
            assert rem.is_zero
    return poly


def cyclotomic_indices(max_phi: int) -> list[int]:
    """All n with totient(n) <= max_phi.  Uses phi(n) >= sqrt(n/2)."""
    bound = 2 * max_phi * max_phi + 2
    return [n for n in range(1, bound + 1) if totient(n) <= max_phi]


# ---------------------------------------------------------------------------
# irreducibility by exhaustive degree-split search
# ---------------------------------------------------------------------------

def _divisors(n: int) -> list[int]:
    n = abs(n)
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def mignotte_bound(p: IntPoly, k: int) -> int:
    """Uniform bound on coefficients of a monic degree-k factor of monic p."""
    norm = p.norm2()
    best = 0.0
    for i in range(k):
        best = max(best, math.comb(k - 1, i) * norm + (math.comb(k - 1, i - 1) if i >= 1 else 0))
    return int(math.floor(best)) + 1


def find_monic_factor(p: IntPoly, max_split: int | None = None) -> IntPoly | None:
    """Smallest-degree monic nontrivial factor of monic p, or None.

    Exhaustive search over coefficient boxes cut by the Mignotte bound, with
    divisor pruning at the sample points 0, 1, -1.  Correct for any monic
    integer polynomial; intended for degree <= 12.
    """
    if not p.is_monic:
        raise ValueError("factor search expects a monic polynomial")
    d = p.degree
    if d <= 1:
        return None
    # constant root 0
    if p.coeffs[0] == 0:
        return IntPoly.x()
    p0, p1, pm1 = p.coeffs[0], p(1), p(-1)
    # linear factors: integer roots divide the constant term
    for r in _divisors(p0):
        for root in (r, -r):
            if p(root) == 0:
                return IntPoly((-root, 1))
    top = d // 2 if max_split is None else min(max_split, d // 2)
    for k in range(2, top + 1):
        bound = mignotte_bound(p, k)
        g0_candidates = [g for dd in _divisors(p0) for g in (dd, -dd) if abs(g) <= bound]
        d1 = set(_divisors(p1)) if p1 != 0 else None
        dm1 = set(_divisors(pm1)) if pm1 != 0 else None
        box = range(-bound, bound + 1)
        for g0 in g0_candidates:
            for middle in itertools.product(box, repeat=k - 1):
                coeffs = (g0,) + middle + (1,)
                s1 = sum(coeffs)
                if d1 is not None and (s1 == 0 or abs(s1) not in d1):
                    continue
                sm1 = sum(c if i % 2 == 0 else -c for i, c in enumerate(coeffs))
                if dm1 is not None and (sm1 == 0 or abs(sm1) not in dm1):
                    continue
                g = IntPoly(coeffs)
                try:
                    _, rem = divmod_exact(p, g)
                except ValueError:
                    continue
                if rem.is_zero:
                    return g
    return None


def is_irreducible(p: IntPoly) -> tuple[bool, IntPoly | None]:
    """Irreducibility over Q of a monic integer polynomial.

    Returns (flag, witness factor when reducible).  Degree-0 input is an error.
    """
    if p.degree == 0 or p.is_zero:
        raise ValueError("irreducibility is undefined for constant polynomials")
    if p.degree == 1:
        return True, None
    factor = find_monic_factor(p)
    return (factor is None), factor


def factor_monic(p: IntPoly) -> list[tuple[IntPoly, int]]:
    """Full factorization of monic p into irreducible monic factors with multiplicity.

    Deterministic order: by (degree, coefficient tuple).
    """
    if not p.is_monic:
        raise ValueError("factorization expects a monic polynomial")
    factors: dict[tuple[int, ...], int] = {}
    rest = p
    while rest.degree > 1:
        g = find_monic_factor(rest)
        if g is None:
            g = rest
        factors[g.coeffs] = factors.get(g.coeffs, 0) + 1
        rest, rem = divmod_exact(rest, g)
        assert rem.is_zero
    if rest.degree == 1:
        factors[rest.coeffs] = factors.get(rest.coeffs, 0) + 1
    items = sorted(factors.items(), key=lambda kv: (len(kv[0]), kv[0]))
    return [(IntPoly(c), m) for c, m in items]


# ---------------------------------------------------------------------------
# Sturm sequences and exact unit-circle root counting
# ---------------------------------------------------------------------------

def sturm_chain(p: IntPoly):
    chain = [_to_frac(p), _to_frac(p.derivative())]
    while _frac_trim(chain[-1]) and len(_frac_trim(chain[-1])) > 1:
        rem = _frac_divmod(chain[-2], chain[-1])[1]
        if not _frac_trim(rem):
            break
        chain.append(tuple(-c for c in rem))
    return [c for c in chain if _frac_trim(c)]


def _eval_frac(coeffs, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _sign_variations(chain, x: Fraction) -> int:
    signs = []
    for c in chain:
        v = _eval_frac(c, x)
        if v != 0:
            signs.append(1 if v > 0 else -1)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def sturm_count(p: IntPoly, a: Fraction, b: Fraction) -> int:
    """Number of distinct real roots of squarefree p in (a, b].

    Endpoints must not be roots of p.
    """
    if p(a) == 0 or p(b) == 0:
        raise ValueError("Sturm interval endpoint is a root")
    chain = sturm_chain(p)
    return _sign_variations(chain, a) - _sign_variations(chain, b)


def halve_palindromic(q: IntPoly) -> IntPoly:
    """For palindromic q of even degree 2e, the degree-e polynomial r with
    q(x) = x^e * r(x + 1/x).

    Uses the recursion for x^k + x^-k in the variable y = x + 1/x.
    """
    if not q.is_palindromic or q.degree % 2 != 0:
        raise ValueError("need a palindromic polynomial of even degree")
    e = q.degree // 2
    # basis[k] = x^k + x^{-k} written in y
    basis = [IntPoly((2,)), IntPoly.x()]
    for _ in range(2, e + 1):
        basis.append(IntPoly.x() * basis[-1] - basis[-2])
    out = IntPoly((q.coeffs[e],))
    for k in range(1, e + 1):
        out = out + q.coeffs[e + k] * basis[k]
    return out


def unit_root_count_irreducible(q: IntPoly) -> int:
    """Number of roots of modulus exactly 1 of an irreducible monic q.

    An irreducible polynomial with a unit-modulus root shares that root with
    its coefficient-reversal (the conjugate 1/lambda is again a root), hence is
    palindromic; the substitution y = x + 1/x then counts conjugate pairs on
    the circle as real roots of the half-degree polynomial in (-2, 2).
    """
    if q.degree == 1:
        return 1 if abs(q.coeffs[0]) == 1 else 0
    if not q.is_palindromic:
        return 0
    half = halve_palindromic(q)
    return 2 * sturm_count(half, Fraction(-2), Fraction(2))


def count_unit_modulus_roots(p: IntPoly) -> int:
    """Exact count, with multiplicity, of roots of monic p on the unit circle."""
    return sum(m * unit_root_count_irreducible(q) for q, m in factor_monic(p))
