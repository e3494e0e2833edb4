"""Smooth shear perturbations of lattice automorphisms on the d-torus.

A perturbed map is f = (shear_m o ... o shear_1) o L.  Every shear updates one
coordinate by epsilon times a trigonometric polynomial of the *other*
coordinates, so each shear has unit-triangular derivative (exact volume
preservation) and a closed-form inverse; the composition is a diffeomorphism
for every epsilon and is homotopic to L.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .lattice import LatticeAutomorphism, SpectralSplitting


def torus_reduce(x: np.ndarray) -> np.ndarray:
    """Componentwise representative in [-1/2, 1/2): the displacement metric."""
    return x - np.round(x)


def wrap_unit(x: np.ndarray) -> np.ndarray:
    return x - np.floor(x)


@dataclass(frozen=True)
class TrigPoly:
    """Real trigonometric polynomial sum_k c_k cos(2 pi k.x) + s_k sin(2 pi k.x).

    modes: tuple of (frequency vector, cos coefficient, sin coefficient).
    Exactly 1-periodic; gradients are computed from the modes, never by
    differencing.
    """

    d: int
    modes: tuple[tuple[tuple[int, ...], float, float], ...]

    def __post_init__(self):
        norm = []
        for k, c, s in self.modes:
            k = tuple(int(v) for v in k)
            if len(k) != self.d:
                raise ValueError("frequency vector has wrong length")
            norm.append((k, float(c), float(s)))
        object.__setattr__(self, "modes", tuple(norm))

    def value(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        single = x.ndim == 1
        pts = x[None, :] if single else x
        out = np.zeros(pts.shape[0])
        for k, c, s in self.modes:
            if all(v == 0 for v in k):
                out += c
                continue
            arg = 2.0 * math.pi * (pts @ np.asarray(k, dtype=float))
            if c:
                out += c * np.cos(arg)
            if s:
                out += s * np.sin(arg)
        return out[0] if single else out

    def gradient(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        single = x.ndim == 1
        pts = x[None, :] if single else x
        out = np.zeros_like(pts)
        for k, c, s in self.modes:
            kv = np.asarray(k, dtype=float)
            if not kv.any():
                continue
            arg = 2.0 * math.pi * (pts @ kv)
            radial = np.zeros(pts.shape[0])
            if c:
                radial -= c * np.sin(arg)
            if s:
                radial += s * np.cos(arg)
            out += (2.0 * math.pi) * radial[:, None] * kv[None, :]
        return out[0] if single else out

    def partial_derivative(self, axis: int) -> "TrigPoly":
        """d/dx_axis as a new trig polynomial (modes rotate cos <-> sin)."""
        out = []
        for k, c, s in self.modes:
            f = 2.0 * math.pi * k[axis]
            if f == 0:
                continue
            out.append((k, f * s, -f * c))
        return TrigPoly(self.d, tuple(out))

    @property
    def sup_bound(self) -> float:
        return sum(abs(c) + abs(s) for _, c, s in self.modes)

    @property
    def grad_bound(self) -> float:
        """Coefficient-sum bound on |grad|."""
        return sum(
            2.0 * math.pi * math.sqrt(sum(v * v for v in k)) * (abs(c) + abs(s))
            for k, c, s in self.modes
        )

    @property
    def hessian_bound(self) -> float:
        return sum(
            (2.0 * math.pi) ** 2 * sum(v * v for v in k) * (abs(c) + abs(s))
            for k, c, s in self.modes
        )

    @property
    def has_zero_mean(self) -> bool:
        return all(any(v != 0 for v in k) or (c == 0 and s == 0) for k, c, s in self.modes)

    def to_json_obj(self) -> dict:
        return {"modes": [{"k": list(k), "cos": c, "sin": s} for k, c, s in self.modes]}

    @staticmethod
    def from_modes_json(d: int, modes) -> "TrigPoly":
        return TrigPoly(d, tuple((tuple(m["k"]), m.get("cos", 0.0), m.get("sin", 0.0)) for m in modes))


MAX_MODE_SUP = 8  # default truncation |k|_inf for generated perturbations


@dataclass(frozen=True)
class Shear:
    """Coordinate shear x_target -> x_target + eps * phi(x).

    phi must not depend on the target coordinate (frequency component zero),
    which makes the shear unit-triangular and exactly invertible.
    """

    target: int
    phi: TrigPoly

    def __post_init__(self):
        for k, _, _ in self.phi.modes:
            if k[self.target] != 0:
                raise ValueError("shear displacement may not depend on its own target coordinate")

    def apply(self, x: np.ndarray, eps: float) -> np.ndarray:
        y = np.array(x, dtype=float, copy=True)
        if y.ndim == 1:
            y[self.target] += eps * float(self.phi.value(y))
        else:
            y[:, self.target] += eps * self.phi.value(y)
        return y

    def invert(self, y: np.ndarray, eps: float) -> np.ndarray:
        # phi ignores the target coordinate and all others are unchanged,
        # so the inverse is closed-form.
        x = np.array(y, dtype=float, copy=True)
        if x.ndim == 1:
            x[self.target] -= eps * float(self.phi.value(x))
        else:
            x[:, self.target] -= eps * self.phi.value(x)
        return x

    def derivative(self, x: np.ndarray, eps: float) -> np.ndarray:
        """Stacked (N, d, d) unit-triangular Jacobians at x (or (d, d) for one point)."""
        x = np.asarray(x, dtype=float)
        single = x.ndim == 1
        pts = x[None, :] if single else x
        d = pts.shape[1]
        grad = eps * self.phi.gradient(pts)
        out = np.tile(np.eye(d), (pts.shape[0], 1, 1))
        out[:, self.target, :] += grad
        return out[0] if single else out


@dataclass(frozen=True)
class PerturbedDiffeo:
    """f = shears o L on the torus, with exact inverse and derivatives."""

    L: LatticeAutomorphism
    shears: tuple[Shear, ...]
    epsilon: float
    kind: str = "generic"  # volume_preserving | symplectic | generic

    def __post_init__(self):
        if self.kind not in ("volume_preserving", "symplectic", "generic"):
            raise ValueError(f"unknown kind {self.kind!r}")
        for sh in self.shears:
            if sh.phi.d != self.L.d:
                raise ValueError("shear dimension mismatch")
        if self.kind == "symplectic":
            resid = self.symplectic_defect(n_samples=64, seed=0)
            if resid > 1e-12:
                raise ValueError(f"symplectic defect {resid:.3e} exceeds 1e-12")
        # diffeomorphism margin: triangular shears are invertible for every
        # epsilon; the recorded flag tracks the documented smallness condition
        object.__setattr__(self, "c1_shear_margin", self.epsilon * max((sh.phi.grad_bound for sh in self.shears), default=0.0))

    @property
    def d(self) -> int:
        return self.L.d

    # -- evaluation ---------------------------------------------------------

    def lift(self, x: np.ndarray) -> np.ndarray:
        """The lift to R^d compatible with L: lift(x + m) = lift(x) + L m."""
        x = np.asarray(x, dtype=float)
        y = x @ self.L.as_float().T
        for sh in self.shears:
            y = sh.apply(y, self.epsilon)
        return y

    def eval(self, x: np.ndarray) -> np.ndarray:
        return wrap_unit(self.lift(x))

    def displacement(self, x: np.ndarray) -> np.ndarray:
        """The periodic displacement lift(x) - L x."""
        x = np.asarray(x, dtype=float)
        return self.lift(x) - x @ self.L.as_float().T

    def derivative(self, x: np.ndarray) -> np.ndarray:
        """Exact chain-rule Jacobian, (d, d) for a point or (N, d, d) stacked."""
        x = np.asarray(x, dtype=float)
        single = x.ndim == 1
        pts = x[None, :] if single else x
        y = pts @ self.L.as_float().T
        J = np.tile(self.L.as_float(), (pts.shape[0], 1, 1))
        for sh in self.shears:
            J = sh.derivative(y, self.epsilon) @ J
            y = sh.apply(y, self.epsilon)
        return J[0] if single else J

    def inverse_lift(self, y: np.ndarray) -> np.ndarray:
        y = np.asarray(y, dtype=float)
        x = y
        for sh in reversed(self.shears):
            x = sh.invert(x, self.epsilon)
        return x @ self.L.inverse_float().T

    def inverse(self, y: np.ndarray, tol: float = 1e-12) -> np.ndarray:
        """Exact inverse on the torus; tol is verified, not iterated toward."""
        x = wrap_unit(self.inverse_lift(y))
        err = float(np.max(np.abs(torus_reduce(self.eval(x) - np.asarray(y))))) if np.asarray(y).size else 0.0
        if err > tol:
            raise RuntimeError(f"inverse verification failed: residual {err:.3e} > tol {tol:.3e}")
        return x

    def derivative_inverse(self, y: np.ndarray) -> np.ndarray:
        x = wrap_unit(self.inverse_lift(y))
        J = self.derivative(x)
        return np.linalg.inv(J)

    # -- structural checks --------------------------------------------------

    def jacobian_det(self, x: np.ndarray) -> np.ndarray:
        # each shear factor is unit triangular, so this is det(L) up to roundoff
        return np.linalg.det(self.derivative(x))

    def symplectic_defect(self, n_samples: int = 256, seed: int = 0) -> float:
        if self.d % 2 != 0:
            raise ValueError("symplectic check needs even dimension")
        from .lattice import standard_symplectic_form

        J = np.array(standard_symplectic_form(self.d), dtype=float)
        rng = np.random.default_rng(seed)
        pts = rng.random((n_samples, self.d))
        D = self.derivative(pts)
        defect = np.transpose(D, (0, 2, 1)) @ J @ D - J
        return float(np.max(np.abs(defect)))

    def c1_distance_bound(self) -> float:
        """Coefficient-sum bound on sup |Df - L| (operator 2-norm)."""
        prod = 1.0
        for sh in self.shears:
            prod *= 1.0 + self.epsilon * sh.phi.grad_bound
        return (prod - 1.0) * float(np.linalg.norm(self.L.as_float(), 2))

    def second_derivative_bound(self) -> float:
        """Coefficient-sum bound on the second derivative of the perturbation.

        This feeds the heuristic Lipschitz padding of grid certificates; it is
        a property of the shear displacements alone.
        """
        return self.epsilon * sum(sh.phi.hessian_bound for sh in self.shears)

    # -- wire format ---------------------------------------------------------

    def to_json_obj(self) -> dict:
        return {
            "kind": self.kind,
            "epsilon": self.epsilon,
            "shears": [
                {"target": sh.target, "modes": sh.phi.to_json_obj()["modes"]} for sh in self.shears
            ],
        }

    @staticmethod
    def from_json(L: LatticeAutomorphism, obj) -> "PerturbedDiffeo":
        if isinstance(obj, str):
            obj = json.loads(obj)
        shears = tuple(
            Shear(int(s["target"]), TrigPoly.from_modes_json(L.d, s["modes"])) for s in obj.get("shears", ())
        )
        return PerturbedDiffeo(L, shears, float(obj.get("epsilon", 0.0)), obj.get("kind", "generic"))


# ---------------------------------------------------------------------------
# constructors for the example families
# ---------------------------------------------------------------------------

def translation_family(L: LatticeAutomorphism, v: np.ndarray) -> PerturbedDiffeo:
    """f(x) = L x + (L - I) v: exactly conjugate to L by the translation x -> x + v."""
    Lf = L.as_float()
    disp = (Lf - np.eye(L.d)) @ np.asarray(v, dtype=float)
    shears = tuple(
        Shear(i, TrigPoly(L.d, (((0,) * L.d, float(disp[i]), 0.0),))) for i in range(L.d)
    )
    return PerturbedDiffeo(L, shears, 1.0, "volume_preserving")


def symplectic_double_shear(L: LatticeAutomorphism, epsilon: float,
                            h: TrigPoly | None = None, g: TrigPoly | None = None) -> PerturbedDiffeo:
    """Composition of the two standard symplectic shears.

    First p -> p + eps * grad h(q), then q -> q + eps * grad g(p), in the
    standard (q, p) block coordinates.  Defaults: h = cos(2 pi q_1),
    g = sin(2 pi p_2).
    """
    d = L.d
    if d % 2 != 0:
        raise ValueError("symplectic shears need even dimension")
    m = d // 2
    if h is None:
        k = [0] * d
        k[0] = 1
        h = TrigPoly(d, ((tuple(k), 1.0, 0.0),))
    if g is None:
        k = [0] * d
        k[m + 1] = 1
        g = TrigPoly(d, ((tuple(k), 0.0, 1.0),))
    for k, _, _ in h.modes:
        if any(k[m:]):
            raise ValueError("h must depend on the first block only")
    for k, _, _ in g.modes:
        if any(k[:m]):
            raise ValueError("g must depend on the second block only")
    shears = [Shear(m + j, h.partial_derivative(j)) for j in range(m)]
    shears += [Shear(j, g.partial_derivative(m + j)) for j in range(m)]
    shears = tuple(sh for sh in shears if sh.phi.modes)
    return PerturbedDiffeo(L, shears, epsilon, "symplectic")


def single_shear(L: LatticeAutomorphism, epsilon: float, target: int, phi: TrigPoly,
                 kind: str = "volume_preserving") -> PerturbedDiffeo:
    return PerturbedDiffeo(L, (Shear(target, phi),), epsilon, kind)


# ---------------------------------------------------------------------------
# cone-field certification of partial hyperbolicity
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ConeCertificate:
    """Grid certificate for the dominated rate chain nu < gamma <= gamma_hat < nu_hat.

    Rates are measured in the splitting-adapted coordinates of L.  The margin
    subtracts a heuristic Lipschitz padding for off-grid behavior; it is not a
    computer-assisted proof.
    """

    grid_n: int
    aperture: float
    nu: float
    gamma: float
    gamma_hat: float
    nu_hat: float
    margin: float
    verified: bool
    worst_point: tuple[float, ...]
    lipschitz_pad: float
    details: dict = field(default_factory=dict)

    def to_json_obj(self) -> dict:
        return {
            "schema": "phlab.cone_certificate/1",
            "grid_n": self.grid_n,
            "aperture": self.aperture,
            "nu": self.nu,
            "gamma": self.gamma,
            "gamma_hat": self.gamma_hat,
            "nu_hat": self.nu_hat,
            "margin": self.margin,
            "verified": self.verified,
            "worst_point": list(self.worst_point),
            "lipschitz_pad": self.lipschitz_pad,
            "details": dict(sorted(self.details.items())),
        }


def grid_points(n: int, d: int) -> np.ndarray:
    """The n^d lattice j/n in C order; fixed order keeps reductions deterministic."""
    idx = np.indices((n,) * d).reshape(d, -1).T
    return idx.astype(float) / n


def _min_sv(blocks: np.ndarray) -> np.ndarray:
    if blocks.shape[-1] == 0 or blocks.shape[-2] == 0:
        return np.full(blocks.shape[0], np.inf)
    return np.linalg.svd(blocks, compute_uv=False)[..., -1]


def _max_sv(blocks: np.ndarray) -> np.ndarray:
    if blocks.shape[-1] == 0 or blocks.shape[-2] == 0:
        return np.zeros(blocks.shape[0])
    return np.linalg.svd(blocks, compute_uv=False)[..., 0]


def certify_partial_hyperbolicity(
    f: PerturbedDiffeo,
    splitting: SpectralSplitting,
    grid_n: int = 6,
    lipschitz_pad: float = 1.0,
    aperture: float = 0.25,
) -> ConeCertificate:
    """Check the invariant-cone inequalities of the dominated splitting on a grid.

    For each grid point the derivative is written in splitting coordinates.
    The unstable cone of the linear part must map into itself with certified
    expansion of its unstable component; the stable cone must be backward
    invariant with certified backward expansion; the center growth is
    sandwiched between gamma and gamma_hat.  With epsilon = 0 the certified
    rates equal the eigenvalue moduli of L exactly.
    """
    d = f.d
    P = splitting.change_of_basis
    Pinv = splitting.change_of_basis_inv
    sl = splitting.slices
    pts = grid_points(grid_n, d)
    Df = f.derivative(pts)
    A = Pinv[None] @ Df @ P[None]
    Ainv = np.linalg.inv(A)

    s, c, u = sl["s"], sl["c"], sl["u"]
    has = {k: (sl[k].stop - sl[k].start) > 0 for k in "scu"}

    def rows_cols(M, r, cs):
        return M[:, r, :][:, :, cs]

    details: dict[str, float] = {}
    slack_terms: list[np.ndarray] = []

    sc_idx = np.r_[s, c] if has["s"] or has["c"] else np.array([], dtype=int)
    cu_idx = np.r_[c, u] if has["c"] or has["u"] else np.array([], dtype=int)

    # unstable cone, forward
    if has["u"]:
        e_u = _min_sv(rows_cols(A, u, u)) - aperture * _max_sv(rows_cols(A, u, sc_idx))
        t_u = _max_sv(rows_cols(A, sc_idx, u)) + aperture * _max_sv(rows_cols(A, sc_idx, sc_idx))
        nu_hat = float(np.min(e_u))
        cone_u_slack = aperture * e_u - t_u
        slack_terms.append(cone_u_slack)
        details["unstable_cone_min_slack"] = float(np.min(cone_u_slack))
    else:
        nu_hat = math.inf

    # stable cone, backward
    if has["s"]:
        e_s = _min_sv(rows_cols(Ainv, s, s)) - aperture * _max_sv(rows_cols(Ainv, s, cu_idx))
        t_s = _max_sv(rows_cols(Ainv, cu_idx, s)) + aperture * _max_sv(rows_cols(Ainv, cu_idx, cu_idx))
        with np.errstate(divide="ignore"):
            nu = float(1.0 / np.min(e_s)) if np.min(e_s) > 0 else math.inf
        cone_s_slack = aperture * e_s - t_s
        slack_terms.append(cone_s_slack)
        details["stable_cone_min_slack"] = float(np.min(cone_s_slack))
    else:
        nu = 0.0

    # center sandwich: growth of the center component over the center cone
    if has["c"]:
        su_idx = np.r_[s, u]
        lower = _min_sv(rows_cols(A, c, c)) - aperture * _max_sv(rows_cols(A, c, su_idx))
        upper = _max_sv(rows_cols(A, c, c)) + aperture * _max_sv(rows_cols(A, c, su_idx))
        gamma = float(np.min(lower))
        gamma_hat = float(np.max(upper))
    else:
        gamma, gamma_hat = (1.0, 1.0)

    pad = lipschitz_pad * (1.0 / grid_n) * f.second_derivative_bound()

    chain = [gamma - nu, nu_hat - gamma_hat, 1.0 - nu, nu_hat - 1.0]
    cone_min = min(float(np.min(t)) for t in slack_terms) if slack_terms else math.inf
    margin = min([x for x in chain if not math.isinf(x)] + ([cone_min] if not math.isinf(cone_min) else [])) - pad

    # worst point: smallest pointwise slack over all recorded cone terms
    if slack_terms:
        total = np.minimum.reduce([np.asarray(t) for t in slack_terms])
        worst = pts[int(np.argmin(total))]
    else:
        worst = pts[0]

    verified = bool(
        has["s"] and has["u"]
        and margin > 0
        and nu < 1.0 < nu_hat
        and nu < gamma <= gamma_hat < nu_hat
    )
    details["pad"] = pad
    details["c1_distance_bound"] = f.c1_distance_bound()
    return ConeCertificate(
        grid_n=grid_n,
        aperture=aperture,
        nu=nu,
        gamma=gamma,
        gamma_hat=gamma_hat,
        nu_hat=nu_hat,
        margin=float(margin),
        verified=verified,
        worst_point=tuple(float(x) for x in worst),
        lipschitz_pad=lipschitz_pad,
        details=details,
    )
