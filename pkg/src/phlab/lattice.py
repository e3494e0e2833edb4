"""Integer toral automorphisms: exact classification and certified spectral data.

All classification flags are decided in exact integer/rational arithmetic; the
only floating point here is the eigenvector bases of the stable/center/unstable
splitting, and the count of unit-modulus eigenvalues in those bases is
cross-checked against the exact Sturm-sequence count.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .intpoly import (
    IntPoly,
    count_unit_modulus_roots,
    cyclotomic,
    cyclotomic_indices,
    divmod_exact,
    factor_monic,
    is_irreducible,
    is_squarefree,
    poly_gcd,
    totient,
    unit_root_count_irreducible,
)

INT_JSON_CUTOFF = 2**53  # integers beyond this are serialized as decimal strings


class CertificationError(RuntimeError):
    """Exact and floating-point spectral data disagree beyond tolerance."""


def _obj_matrix(rows) -> np.ndarray:
    m = np.array([[int(x) for x in row] for row in rows], dtype=object)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise ValueError("matrix must be square and nonempty")
    return m


def char_poly_exact(rows) -> IntPoly:
    """Monic characteristic polynomial by the Faddeev-LeVerrier recursion.

    Exact over Z: the divisions in the recursion are always integral.
    """
    L = _obj_matrix(rows)
    d = L.shape[0]
    eye = np.eye(d, dtype=object)
    coeffs = [1]  # leading first while building
    M = np.zeros((d, d), dtype=object)
    c = 1
    for k in range(1, d + 1):
        M = L @ M + c * eye
        t = int(np.trace(L @ M))
        assert t % k == 0
        c = -t // k
        coeffs.append(c)
    return IntPoly(tuple(reversed(coeffs)))


def inverse_exact(rows) -> tuple[tuple[int, ...], ...]:
    """Exact integer inverse of a unimodular integer matrix (det = +-1)."""
    L = _obj_matrix(rows)
    d = L.shape[0]
    eye = np.eye(d, dtype=object)
    M = np.zeros((d, d), dtype=object)
    c = 1
    for k in range(1, d):
        M = L @ M + c * eye
        c = -int(np.trace(L @ M)) // k
    # L * (L M + c I) = -c_d I with c_d = last coefficient
    Md = L @ M + c * eye
    cd = -int(np.trace(L @ Md)) // d
    if abs(cd) != 1:
        raise ValueError("matrix is not unimodular, no exact inverse")
    inv = (-Md) * (1 if cd == 1 else -1)
    return tuple(tuple(int(x) for x in row) for row in inv)


def minimal_polynomial(rows) -> IntPoly:
    """Monic minimal polynomial via exact rational linear algebra.

    Stacks powers of the matrix as vectors and finds the first dependency by
    Gaussian elimination over Q; the monic rational dependency is integral by
    Gauss's lemma.
    """
    L = _obj_matrix(rows)
    d = L.shape[0]
    maxlen = d + 1
    basis: list[tuple[list[Fraction], list[Fraction], int]] = []  # (reduced vec, combo, pivot)
    power = np.eye(d, dtype=object)
    for k in range(maxlen):
        vec = [Fraction(int(x)) for x in power.flatten()]
        combo = [Fraction(0)] * maxlen
        combo[k] = Fraction(1)
        for bvec, bcombo, bpivot in basis:
            f = vec[bpivot] / bvec[bpivot]
            if f:
                vec = [a - f * b for a, b in zip(vec, bvec)]
                combo = [a - f * b for a, b in zip(combo, bcombo)]
        if all(x == 0 for x in vec):
            ints = [int(c) for c in combo]
            if any(c != i for c, i in zip(combo, ints)):
                raise AssertionError("minimal polynomial of an integer matrix must be integral")
            return IntPoly(tuple(ints))
        pivot = next(i for i, x in enumerate(vec) if x != 0)
        basis.append((vec, combo, pivot))
        power = power @ L
    raise AssertionError("dependency must appear by degree d")


@dataclass(frozen=True)
class LatticeAutomorphism:
    """A d x d integer matrix of determinant +-1 acting on the d-torus."""

    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        m = _obj_matrix(self.rows)
        object.__setattr__(self, "rows", tuple(tuple(int(x) for x in row) for row in m))
        if abs(self.det) != 1:
            raise ValueError(f"determinant must be +-1, got {self.det}")

    @property
    def d(self) -> int:
        return len(self.rows)

    @property
    def char_poly(self) -> IntPoly:
        if not hasattr(self, "_char"):
            object.__setattr__(self, "_char", char_poly_exact(self.rows))
        return self._char

    @property
    def det(self) -> int:
        p = char_poly_exact(self.rows) if not hasattr(self, "_char") else self._char
        a0 = p.coeffs[0] if p.coeffs else 0
        return a0 if self.__len_even() else -a0

    def __len_even(self) -> bool:
        return len(self.rows) % 2 == 0

    @property
    def inverse_rows(self) -> tuple[tuple[int, ...], ...]:
        if not hasattr(self, "_inv"):
            object.__setattr__(self, "_inv", inverse_exact(self.rows))
        return self._inv

    def as_float(self) -> np.ndarray:
        return np.array(self.rows, dtype=float)

    def inverse_float(self) -> np.ndarray:
        return np.array(self.inverse_rows, dtype=float)

    @staticmethod
    def companion(p: IntPoly) -> "LatticeAutomorphism":
        """Companion matrix (subdiagonal of ones, negated coefficients in the last column)."""
        if not p.is_monic:
            raise ValueError("companion form needs a monic polynomial")
        d = p.degree
        rows = [[0] * d for _ in range(d)]
        for i in range(1, d):
            rows[i][i - 1] = 1
        for i in range(d):
            rows[i][d - 1] = -p.coeffs[i]
        return LatticeAutomorphism(tuple(tuple(r) for r in rows))

    @staticmethod
    def from_json(obj) -> "LatticeAutomorphism":
        if isinstance(obj, str):
            obj = json.loads(obj)
        rows = obj["rows"]
        parsed = tuple(tuple(int(x) for x in row) for row in rows)
        if "d" in obj and int(obj["d"]) != len(parsed):
            raise ValueError("declared dimension does not match rows")
        return LatticeAutomorphism(parsed)

    def to_json_obj(self) -> dict:
        enc = lambda n: str(n) if abs(n) > INT_JSON_CUTOFF else n
        return {"d": self.d, "rows": [[enc(x) for x in row] for row in self.rows]}


def quartic_companion_example() -> LatticeAutomorphism:
    """Companion form of x^4 - x^3 - x^2 - x + 1 (one expanding, one contracting,
    and a complex-conjugate unit-modulus pair)."""
    return LatticeAutomorphism.companion(IntPoly((1, -1, -1, -1, 1)))


def quartic_symplectic_example() -> LatticeAutomorphism:
    """An Sp(4, Z) matrix with characteristic polynomial x^4 - x^3 - x^2 - x + 1.

    Block form [[0, I], [-I, T]] with symmetric T = [[2, 1], [1, -1]] preserves
    the standard symplectic form exactly.
    """
    return LatticeAutomorphism(((0, 0, 1, 0), (0, 0, 0, 1), (-1, 0, 2, 1), (0, -1, 1, -1)))


def cat_map_example() -> LatticeAutomorphism:
    return LatticeAutomorphism(((2, 1), (1, 1)))


# ---------------------------------------------------------------------------
# classification flags
# ---------------------------------------------------------------------------

def is_ergodic(p: IntPoly) -> tuple[bool, str]:
    """Ergodicity of the induced torus map: no eigenvalue is a root of unity.

    Exact test: gcd with every cyclotomic polynomial whose degree can divide p.
    """
    d = p.degree
    for n in cyclotomic_indices(d):
        if poly_gcd(p, cyclotomic(n)).degree > 0:
            return False, f"eigenvalue is a primitive {n}-th root of unity (cyclotomic index {n})"
    return True, f"no cyclotomic factor with totient <= {d}"


def is_totally_irreducible(L: LatticeAutomorphism) -> tuple[bool, str]:
    """Every power of L is irreducible.

    Finite certificate: the characteristic polynomial is irreducible and no
    ratio of two distinct eigenvalues is a root of unity.  Sufficiency: if
    some power were reducible, the Galois orbit of an eigenvalue of L^n would
    be shorter than deg p, forcing lambda_i^n = lambda_j^n for some i != j,
    i.e. a ratio that is an n-th root of unity; transitivity of the Galois
    action gives the converse.  Ratios are the roots of the characteristic
    polynomial of kron(L, L^{-1}), tested exactly against all cyclotomics of
    degree <= d^2.
    """
    p = L.char_poly
    irr, factor = is_irreducible(p)
    if not irr:
        return False, f"characteristic polynomial is reducible: factor {factor!r}"
    erg, why = is_ergodic(p)
    if not erg:
        return False, f"not ergodic: {why}"
    if L.d == 1:
        return True, "dimension 1, no eigenvalue ratios"
    kron = np.kron(_obj_matrix(L.rows), _obj_matrix(L.inverse_rows))
    ratio_poly = char_poly_exact(kron)
    # the d trivial ratios lambda_i / lambda_i contribute (x - 1)^d
    for _ in range(L.d):
        ratio_poly, rem = divmod_exact(ratio_poly, IntPoly((-1, 1)))
        assert rem.is_zero
    for n in cyclotomic_indices(L.d * L.d):
        if poly_gcd(ratio_poly, cyclotomic(n)).degree > 0:
            return False, f"eigenvalue ratio is a primitive {n}-th root of unity"
    return True, "irreducible and no eigenvalue ratio is a root of unity"


def standard_symplectic_form(d: int) -> np.ndarray:
    if d % 2 != 0:
        raise ValueError("standard symplectic form needs even dimension")
    m = d // 2
    J = np.zeros((d, d), dtype=object)
    J[:m, m:] = np.eye(m, dtype=object)
    J[m:, :m] = -np.eye(m, dtype=object)
    return J


def is_symplectic(L: LatticeAutomorphism) -> tuple[bool, str]:
    """Exact check L^T J L = J against the standard block form J."""
    if L.d % 2 != 0:
        return False, "dimension is odd"
    J = standard_symplectic_form(L.d)
    M = _obj_matrix(L.rows)
    ok = bool(np.all(M.T @ J @ M == J))
    return ok, "L^T J L = J holds exactly" if ok else "L^T J L != J for the standard form"


def is_diagonalizable(L: LatticeAutomorphism) -> tuple[bool, str]:
    """Diagonalizable over C iff the minimal polynomial is squarefree (exact)."""
    m = minimal_polynomial(L.rows)
    if is_squarefree(m):
        return True, f"minimal polynomial {m!r} is squarefree"
    return False, f"minimal polynomial {m!r} has a repeated factor"


def center_foliation_dense(L: LatticeAutomorphism) -> tuple[bool, str]:
    """Dense center foliation: every irreducible factor of the characteristic
    polynomial carries at least one unit-modulus root, so no rational subspace
    avoids the center."""
    for q, _ in factor_monic(L.char_poly):
        if unit_root_count_irreducible(q) == 0:
            return False, f"factor {q!r} has no unit-modulus root"
    return True, "every irreducible factor has a unit-modulus root"


# ---------------------------------------------------------------------------
# spectral splitting
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SpectralSplitting:
    """Certified stable/center/unstable data for a lattice automorphism.

    Bases are real matrices whose columns span the three invariant subspaces;
    `blocks` are the matrices of L restricted to each subspace in those bases
    (for complex pairs on the unit circle the block is an exact rotation).
    """

    d: int
    eigenvalues: tuple[complex, ...]
    classes: tuple[str, ...]           # per eigenvalue: "s" | "c" | "u"
    dim_stable: int
    dim_center: int
    dim_unstable: int
    basis_s: np.ndarray
    basis_c: np.ndarray
    basis_u: np.ndarray
    rho_s_min: float
    rho_s_max: float
    rho_u_min: float
    rho_u_max: float
    r_s: float
    r_u: float
    r_L: float
    d_stable: float
    d_unstable: float
    h_top: float
    defective: bool
    invariance_residual: float
    cluster_radius: float

    @property
    def change_of_basis(self) -> np.ndarray:
        """Columns: stable basis, center basis, unstable basis."""
        return np.hstack([self.basis_s, self.basis_c, self.basis_u])

    @property
    def change_of_basis_inv(self) -> np.ndarray:
        if not hasattr(self, "_pinv"):
            object.__setattr__(self, "_pinv", np.linalg.inv(self.change_of_basis))
        return self._pinv

    def block(self, which: str) -> np.ndarray:
        """Matrix of L restricted to a subspace, in splitting coordinates."""
        if not hasattr(self, "_blocks"):
            raise AttributeError("blocks not attached")
        return self._blocks[which]

    @property
    def slices(self) -> dict[str, slice]:
        ds, dc = self.dim_stable, self.dim_center
        return {"s": slice(0, ds), "c": slice(ds, ds + dc), "u": slice(ds + dc, self.d)}

    def to_json_obj(self) -> dict:
        return {
            "schema": "phlab.splitting/1",
            "d": self.d,
            "eigenvalues": [
                {"re": ev.real, "im": ev.imag, "modulus": abs(ev), "class": cl}
                for ev, cl in zip(self.eigenvalues, self.classes)
            ],
            "dims": {"stable": self.dim_stable, "center": self.dim_center, "unstable": self.dim_unstable},
            "rho_s_min": self.rho_s_min,
            "rho_s_max": self.rho_s_max,
            "rho_u_min": self.rho_u_min,
            "rho_u_max": self.rho_u_max,
            "r_s": self.r_s,
            "r_u": self.r_u,
            "r_L": self.r_L,
            "d_stable": self.d_stable,
            "d_unstable": self.d_unstable,
            "h_top": self.h_top,
            "defective": self.defective,
            "invariance_residual": self.invariance_residual,
        }


def _rational_kernel_basis(rows, shift: int) -> list[np.ndarray]:
    """Exact rational kernel of (L - shift*I), returned as float columns."""
    L = _obj_matrix(rows)
    d = L.shape[0]
    A = [[Fraction(int(L[i][j])) - (Fraction(shift) if i == j else 0) for j in range(d)] for i in range(d)]
    pivots = []
    row = 0
    for col in range(d):
        pivot = next((r for r in range(row, d) if A[r][col] != 0), None)
        if pivot is None:
            continue
        A[row], A[pivot] = A[pivot], A[row]
        inv = A[row][col]
        A[row] = [x / inv for x in A[row]]
        for r in range(d):
            if r != row and A[r][col] != 0:
                f = A[r][col]
                A[r] = [x - f * y for x, y in zip(A[r], A[row])]
        pivots.append(col)
        row += 1
    free = [c for c in range(d) if c not in pivots]
    basis = []
    for fcol in free:
        v = [Fraction(0)] * d
        v[fcol] = Fraction(1)
        for r, pcol in enumerate(pivots):
            v[pcol] = -A[r][fcol]
        vec = np.array([float(x) for x in v])
        basis.append(vec / np.linalg.norm(vec))
    return basis


def _cluster_moduli(moduli: list[float], radius: float) -> list[float]:
    """Representative moduli after merging values within the cluster radius."""
    reps: list[list[float]] = []
    for m in sorted(moduli):
        if reps and m - reps[-1][-1] <= radius:
            reps[-1].append(m)
        else:
            reps.append([m])
    return [sum(group) / len(group) for group in reps]


def spectral_splitting(
    L: LatticeAutomorphism,
    cluster_radius: float = 1e-10,
    unit_band: float = 1e-8,
) -> SpectralSplitting:
    """Eigen-splitting with exact unit-circle certification.

    Unit-modulus classification never trusts floats: the exact count from
    Sturm sequences on the reciprocal part of the characteristic polynomial
    must match the count of numerical eigenvalues within `unit_band` of
    modulus one, otherwise a CertificationError is raised.
    """
    d = L.d
    exact_center = count_unit_modulus_roots(L.char_poly)
    eigvals, eigvecs = np.linalg.eig(L.as_float())
    moduli = np.abs(eigvals)

    diagonalizable, _ = is_diagonalizable(L)
    defective = not diagonalizable

    # the exact count is authoritative; floats only have to be consistent with it
    near = np.abs(moduli - 1.0)
    by_near = np.argsort(near, kind="stable")
    last_in = float(near[by_near[exact_center - 1]]) if exact_center else 0.0
    first_out = float(near[by_near[exact_center]]) if exact_center < d else math.inf
    if first_out <= max(3.0 * last_in, unit_band):
        raise CertificationError(
            f"unit-circle eigenvalue count mismatch: exact {exact_center}, numeric gap "
            f"[{last_in:.3e}, {first_out:.3e}] is not separated at band {unit_band}"
        )
    # diagonalizable integer matrices resolve unit eigenvalues to full precision;
    # a repeated defective eigenvalue only to machine-epsilon^(1/block size)
    if last_in > (unit_band if not defective else 1e-2):
        raise CertificationError(
            f"numeric unit-circle eigenvalues stray {last_in:.3e} from modulus one"
        )
    center_set = set(int(i) for i in by_near[:exact_center])
    classes = np.array(
        ["c" if i in center_set else ("s" if moduli[i] < 1.0 else "u") for i in range(d)]
    )
    unit_band_eff = max(unit_band, 2.0 * last_in)

    order = np.lexsort((eigvals.imag, eigvals.real, moduli))
    eig_sorted = eigvals[order]
    cls_sorted = classes[order]

    bases: dict[str, list[np.ndarray]] = {"s": [], "c": [], "u": []}
    blocks: dict[str, list[np.ndarray]] = {"s": [], "c": [], "u": []}

    if not defective:
        used = np.zeros(d, dtype=bool)
        rational_done = {1: False, -1: False}
        for idx in order:
            if used[idx]:
                continue
            ev = eigvals[idx]
            cl = str(classes[idx])
            if abs(ev.imag) < 1e-12:
                used[idx] = True
                shift = int(round(ev.real))
                if abs(ev.real - shift) < 1e-12 and abs(shift) == 1 and L.char_poly(shift) == 0:
                    # exact rational eigenspace for +-1, taken once for all copies
                    if rational_done[shift]:
                        continue
                    rational_done[shift] = True
                    for vec in _rational_kernel_basis(L.rows, shift):
                        bases[cl].append(vec)
                        blocks[cl].append(np.array([[float(shift)]]))
                    # mark all remaining copies of this eigenvalue as used
                    for j in range(d):
                        if not used[j] and abs(eigvals[j] - shift) < 1e-9:
                            used[j] = True
                    continue
                vec = np.real(eigvecs[:, idx])
                vec = vec / np.linalg.norm(vec)
                if vec[np.argmax(np.abs(vec))] < 0:
                    vec = -vec
                bases[cl].append(vec)
                blocks[cl].append(np.array([[ev.real]]))
            else:
                if ev.imag < 0:
                    continue  # handled with its conjugate partner
                used[idx] = True
                conj = next(j for j in range(d) if not used[j] and abs(eigvals[j] - ev.conjugate()) < 1e-9)
                used[conj] = True
                v = eigvecs[:, idx]
                p, q = np.real(v), np.imag(v)  # L p = a p - b q, L q = b p + a q with ev = a + i b
                # common scale only: separate scaling would destroy the exact
                # rho * rotation form of the restriction in the (p, q) basis
                scale = math.sqrt(np.linalg.norm(p) * np.linalg.norm(q))
                p, q = p / scale, q / scale
                a, b = ev.real, ev.imag
                rho = math.hypot(a, b)
                if str(classes[idx]) == "c":
                    rho = 1.0  # exact unit modulus certified above
                ca, cb = a / math.hypot(a, b), b / math.hypot(a, b)
                block = rho * np.array([[ca, cb], [-cb, ca]])
                bases[cl].append(p)
                bases[cl].append(q)
                blocks[cl].append(block)
    else:
        import scipy.linalg

        for cl, pred in (
            ("s", lambda re, im: math.hypot(re, im) < 1.0 - unit_band_eff),
            ("c", lambda re, im: abs(math.hypot(re, im) - 1.0) <= unit_band_eff),
            ("u", lambda re, im: math.hypot(re, im) > 1.0 + unit_band_eff),
        ):
            T, Z, sdim = scipy.linalg.schur(L.as_float(), output="real", sort=pred)
            if sdim:
                B = Z[:, :sdim]
                bases[cl] = [B[:, j] for j in range(sdim)]
                blocks[cl] = [B.T @ L.as_float() @ B]

    def assemble(cl: str) -> tuple[np.ndarray, np.ndarray]:
        if not bases[cl]:
            return np.zeros((d, 0)), np.zeros((0, 0))
        B = np.column_stack(bases[cl])
        if defective:
            blk = blocks[cl][0]
        else:
            sizes = [b.shape[0] for b in blocks[cl]]
            blk = np.zeros((sum(sizes), sum(sizes)))
            at = 0
            for b in blocks[cl]:
                blk[at : at + b.shape[0], at : at + b.shape[0]] = b
                at += b.shape[0]
        return B, blk

    B_s, blk_s = assemble("s")
    B_c, blk_c = assemble("c")
    B_u, blk_u = assemble("u")
    dims = {"s": B_s.shape[1], "c": B_c.shape[1], "u": B_u.shape[1]}
    if dims["s"] + dims["c"] + dims["u"] != d:
        raise CertificationError(f"splitting dimensions {dims} do not sum to {d}")
    if dims["c"] != exact_center:
        raise CertificationError("assembled center dimension disagrees with exact count")

    Lf = L.as_float()
    residual = 0.0
    for B, blk in ((B_s, blk_s), (B_c, blk_c), (B_u, blk_u)):
        if B.shape[1]:
            residual = max(residual, float(np.linalg.norm(Lf @ B - B @ blk, 2)))

    mods = {cl: sorted(abs(eigvals[i]) for i in range(d) if classes[i] == cl) for cl in ("s", "c", "u")}
    def rho_extremes(cl: str, empty: float) -> tuple[float, float]:
        if not mods[cl]:
            return empty, empty
        reps = _cluster_moduli(mods[cl], cluster_radius)
        return reps[0], reps[-1]

    rho_s_min, rho_s_max = rho_extremes("s", 1.0)
    rho_u_min, rho_u_max = rho_extremes("u", 1.0)
    # ratio of extreme log-moduli; exactly 1 when the extremes cluster together
    r_s = 1.0 if rho_s_min == rho_s_max else math.log(rho_s_min) / math.log(rho_s_max)
    r_u = 1.0 if rho_u_min == rho_u_max else math.log(rho_u_max) / math.log(rho_u_min)
    r_L = max(r_s, r_u)
    h_top = float(sum(math.log(m) for m in mods["u"]))

    split = SpectralSplitting(
        d=d,
        eigenvalues=tuple(complex(v) for v in eig_sorted),
        classes=tuple(str(c) for c in cls_sorted),
        dim_stable=dims["s"],
        dim_center=dims["c"],
        dim_unstable=dims["u"],
        basis_s=B_s,
        basis_c=B_c,
        basis_u=B_u,
        rho_s_min=rho_s_min,
        rho_s_max=rho_s_max,
        rho_u_min=rho_u_min,
        rho_u_max=rho_u_max,
        r_s=r_s,
        r_u=r_u,
        r_L=r_L,
        d_stable=r_s,
        d_unstable=r_u,
        h_top=h_top,
        defective=defective,
        invariance_residual=residual,
        cluster_radius=cluster_radius,
    )
    object.__setattr__(split, "_blocks", {"s": blk_s, "c": blk_c, "u": blk_u})
    return split


# ---------------------------------------------------------------------------
# classification report
# ---------------------------------------------------------------------------

HYPOTHESES_DISCLAIMER = (
    "flags certify algebraic hypotheses only; closeness thresholds of the "
    "rigidity statements are not effective and are never asserted"
)


@dataclass(frozen=True)
class ClassificationReport:
    irreducible: bool
    ergodic: bool
    totally_irreducible: bool
    partially_hyperbolic_with_center: bool
    symplectic: bool
    diagonalizable_over_C: bool
    center_foliation_dense: bool
    dim_stable: int
    dim_center: int
    dim_unstable: int
    certificates: dict = field(default_factory=dict)

    def to_json_obj(self) -> dict:
        return {
            "schema": "phlab.classification/1",
            "irreducible": self.irreducible,
            "ergodic": self.ergodic,
            "totally_irreducible": self.totally_irreducible,
            "partially_hyperbolic_with_center": self.partially_hyperbolic_with_center,
            "symplectic": self.symplectic,
            "diagonalizable_over_C": self.diagonalizable_over_C,
            "center_foliation_dense": self.center_foliation_dense,
            "dims": {"stable": self.dim_stable, "center": self.dim_center, "unstable": self.dim_unstable},
            "certificates": dict(sorted(self.certificates.items())),
            "disclaimer": HYPOTHESES_DISCLAIMER,
        }


def classify(L: LatticeAutomorphism, splitting: SpectralSplitting | None = None) -> ClassificationReport:
    p = L.char_poly
    split = splitting if splitting is not None else spectral_splitting(L)
    certs: dict[str, str] = {}

    irr, factor = is_irreducible(p)
    certs["irreducible"] = "no nontrivial monic factor" if irr else f"factor {factor!r}"
    erg, why = is_ergodic(p)
    certs["ergodic"] = why
    tot, twhy = is_totally_irreducible(L)
    certs["totally_irreducible"] = twhy
    sym, swhy = is_symplectic(L)
    certs["symplectic"] = swhy
    diag, dwhy = is_diagonalizable(L)
    certs["diagonalizable_over_C"] = dwhy
    dense, denwhy = center_foliation_dense(L)
    certs["center_foliation_dense"] = denwhy

    phc = split.dim_stable > 0 and split.dim_unstable > 0 and split.dim_center > 0
    certs["partially_hyperbolic_with_center"] = (
        f"dims (s, c, u) = ({split.dim_stable}, {split.dim_center}, {split.dim_unstable})"
    )

    report = ClassificationReport(
        irreducible=irr,
        ergodic=erg,
        totally_irreducible=tot,
        partially_hyperbolic_with_center=phc,
        symplectic=sym,
        diagonalizable_over_C=diag,
        center_foliation_dense=dense,
        dim_stable=split.dim_stable,
        dim_center=split.dim_center,
        dim_unstable=split.dim_unstable,
        certificates=certs,
    )
    if erg and split.dim_center % 2 != 0:
        raise CertificationError("ergodic automorphism with odd center dimension")
    if tot and not (irr and erg):
        raise CertificationError("totally irreducible without irreducible + ergodic")
    return report
