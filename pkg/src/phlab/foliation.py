"""Local stable/unstable manifolds by the graph transform, and the
su-quadrilateral holonomy defect that probes joint integrability versus
accessibility.

Leaves are graphs over the *linear* stable/unstable subspaces of L (well
defined charts for small perturbations, no bootstrapping of the nonlinear
splitting).  The unstable manifold of f is the stable manifold of the exact
inverse, handled by a thin adapter.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, field

import numpy as np

from .lattice import SpectralSplitting
from .torus_maps import PerturbedDiffeo, torus_reduce, wrap_unit

CACHE_ENV = "PHLAB_CACHE_DIR"


class LeafError(RuntimeError):
    """Graph transform diverged or a quadrilateral leg left its chart."""


@dataclass(frozen=True)
class FoliationConfig:
    r_leaf: float = 0.2
    tol: float = 1e-8
    n_param: int = 33          # odd, so the base point is a grid node
    max_sweeps: int = 80
    newton_tol: float = 1e-13
    newton_max: int = 12
    delta_s: float = 0.05
    delta_u: float = 0.05
    leg_substeps: int = 64     # arc-length integration steps per leg


@dataclass
class LocalLeaf:
    base: np.ndarray
    which: str                 # "s" | "u"
    sigma: np.ndarray          # (n_param,) parameters along the linear subspace
    values: np.ndarray         # (n_param, d - 1) graph over the subspace, 0 at sigma = 0
    residual: float            # final sweep update
    sup_norm: float
    update_history: list
    converged: bool


class _InverseView:
    """lift/eval/derivative of the exact inverse of a PerturbedDiffeo."""

    def __init__(self, f: PerturbedDiffeo):
        self._f = f
        self.d = f.d

    def lift(self, y):
        return self._f.inverse_lift(y)

    def eval(self, y):
        return wrap_unit(self._f.inverse_lift(y))

    def derivative(self, y):
        x = wrap_unit(self._f.inverse_lift(np.asarray(y, dtype=float)))
        return np.linalg.inv(self._f.derivative(x))


def _leaf_cache_key(f: PerturbedDiffeo, x, which: str, config: FoliationConfig) -> str:
    payload = json.dumps(
        {
            "L": f.L.rows,
            "pert": f.to_json_obj(),
            "x": [round(float(v), 12) for v in np.atleast_1d(x)],
            "which": which,
            "r": config.r_leaf,
            "tol": config.tol,
            "n": config.n_param,
        },
        sort_keys=True,
    )
    return hashlib.sha1(payload.encode()).hexdigest()


class FoliationLab:
    """Leaf computation with per-experiment memoization.

    If the PHLAB_CACHE_DIR environment variable is set, converged leaves are
    also spilled to .npz files keyed by a content hash, so repeated experiment
    runs reuse them.
    """

    def __init__(self, f: PerturbedDiffeo, splitting: SpectralSplitting, config: FoliationConfig = FoliationConfig()):
        if splitting.dim_stable != 1 or splitting.dim_unstable != 1:
            raise NotImplementedError("quadrilateral legs are implemented for 1-d stable/unstable bundles")
        self.f = f
        self.splitting = splitting
        self.config = config
        self._memo: dict[tuple, LocalLeaf] = {}

    # -- leaves ---------------------------------------------------------------

    def leaf(self, x: np.ndarray, which: str) -> LocalLeaf:
        key = (tuple(round(float(v), 12) for v in np.atleast_1d(x)), which)
        if key in self._memo:
            return self._memo[key]
        cache_dir = os.environ.get(CACHE_ENV)
        fname = None
        if cache_dir:
            fname = os.path.join(cache_dir, _leaf_cache_key(self.f, x, which, self.config) + ".npz")
            if os.path.exists(fname):
                data = np.load(fname, allow_pickle=False)
                leaf = LocalLeaf(
                    base=data["base"], which=str(data["which"]), sigma=data["sigma"], values=data["values"],
                    residual=float(data["residual"]), sup_norm=float(data["sup_norm"]),
                    update_history=list(data["updates"]), converged=bool(data["converged"]),
                )
                self._memo[key] = leaf
                return leaf
        leaf = local_invariant_leaf(self.f, self.splitting, x, which, self.config)
        self._memo[key] = leaf
        if fname:
            os.makedirs(cache_dir, exist_ok=True)
            np.savez(
                fname, base=leaf.base, which=leaf.which, sigma=leaf.sigma, values=leaf.values,
                residual=leaf.residual, sup_norm=leaf.sup_norm, updates=np.asarray(leaf.update_history),
                converged=leaf.converged,
            )
        return leaf

    # -- quadrilaterals --------------------------------------------------------

    def travel(self, leaf: LocalLeaf, arclength: float) -> np.ndarray:
        return leaf_travel(leaf, arclength, self.splitting, self.config)

    def su_quadrilateral(self, x: np.ndarray, delta_s: float, delta_u: float) -> "QuadrilateralDefect":
        y1 = self.travel(self.leaf(x, "s"), delta_s)
        y2 = self.travel(self.leaf(y1, "u"), delta_u)
        y3 = self.travel(self.leaf(y2, "s"), -delta_s)
        y4 = self.travel(self.leaf(y3, "u"), -delta_u)
        gap = torus_reduce(y4 - np.asarray(x, dtype=float))
        gap_c = (self.splitting.change_of_basis_inv @ gap)[self.splitting.slices["c"]]
        return QuadrilateralDefect(
            base=tuple(float(v) for v in np.atleast_1d(x)),
            delta_s=delta_s,
            delta_u=delta_u,
            gap=tuple(float(v) for v in gap),
            center_gap=tuple(float(v) for v in gap_c),
        )


@dataclass(frozen=True)
class QuadrilateralDefect:
    base: tuple
    delta_s: float
    delta_u: float
    gap: tuple
    center_gap: tuple

    @property
    def center_gap_norm(self) -> float:
        return float(np.linalg.norm(self.center_gap))

    def to_json_obj(self) -> dict:
        return {
            "base": list(self.base),
            "delta_s": self.delta_s,
            "delta_u": self.delta_u,
            "gap": list(self.gap),
            "center_gap": list(self.center_gap),
            "center_gap_norm": self.center_gap_norm,
        }


def local_invariant_leaf(
    f: PerturbedDiffeo,
    splitting: SpectralSplitting,
    x: np.ndarray,
    which: str,
    config: FoliationConfig = FoliationConfig(),
) -> LocalLeaf:
    """Local leaf through x as a graph over the linear subspace, by iterating
    the graph transform along a finite forward orbit.

    All graphs along the orbit are updated simultaneously each sweep (the top
    graph stays pinned at zero), so the per-sweep update contracts at about
    nu/gamma and the history exposes the measured factor.  Divergence raises
    LeafError with the last update size.
    """
    if which == "s":
        game, par_key = f, "s"
    elif which == "u":
        game, par_key = _InverseView(f), "u"
    else:
        raise ValueError("which must be 's' or 'u'")

    P = splitting.change_of_basis
    Pinv = splitting.change_of_basis_inv
    sl = splitting.slices
    par_sl = sl[par_key]
    d = f.d
    rest_idx = np.array([i for i in range(d) if not (par_sl.start <= i < par_sl.stop)], dtype=int)
    par_idx = np.arange(par_sl.start, par_sl.stop)
    if len(par_idx) != 1:
        raise NotImplementedError("leaf graphs are implemented for 1-d parameter directions")
    B_par = P[:, par_idx]
    B_rest = P[:, rest_idx]

    n = config.n_param
    sigma = np.linspace(-config.r_leaf, config.r_leaf, n)
    levels = config.max_sweeps
    orbit = np.empty((levels + 1, d))
    orbit[0] = np.asarray(x, dtype=float)
    for k in range(levels):
        orbit[k + 1] = game.eval(orbit[k])
    base_lifts = game.lift(orbit[:levels])
    bases = orbit[:levels, None, :] + sigma[None, :, None] * B_par[:, 0][None, None, :]

    # graphs along the orbit; index `levels` stays pinned at zero and each
    # Jacobi sweep updates every level at once from the level above
    W = np.zeros((levels + 1, n, d - 1))
    updates: list[float] = []
    converged = False
    for _ in range(config.max_sweeps):
        w = W[:levels].copy()  # warm start for the batched quasi-Newton
        w_next = W[1:]
        for _ in range(config.newton_max):
            q = (bases + w @ B_rest.T).reshape(-1, d)
            xi = ((game.lift(q).reshape(levels, n, d) - base_lifts[:, None, :]) @ Pinv.T)
            xi_par = xi[:, :, par_idx[0]]
            target = np.empty_like(w)
            for k in range(levels):
                for j in range(d - 1):
                    target[k, :, j] = np.interp(xi_par[k], sigma, w_next[k, :, j])
            res = xi[:, :, rest_idx] - target
            if float(np.max(np.abs(res))) <= config.newton_tol:
                break
            J = (Pinv[None] @ game.derivative(q) @ B_rest[None])[:, rest_idx, :]
            w = w - np.linalg.solve(J, res.reshape(-1, d - 1, 1)).reshape(levels, n, d - 1)
        update = float(np.max(np.abs(w[0] - W[0])))
        updates.append(update)
        W = np.concatenate([w, np.zeros((1, n, d - 1))], axis=0)
        if update <= config.tol:
            converged = True
            break
        if len(updates) >= 4 and updates[-1] > 10 * (updates[0] + 1.0):
            raise LeafError(f"graph transform diverging: last update {update:.3e}")
    if not converged:
        raise LeafError(f"graph transform did not reach tol, last update {updates[-1]:.3e}")

    vals = W[0]
    return LocalLeaf(
        base=np.asarray(x, dtype=float),
        which=which,
        sigma=sigma,
        values=vals,
        residual=updates[-1],
        sup_norm=float(np.max(np.abs(vals))),
        update_history=updates,
        converged=converged,
    )


def leaf_travel(leaf: LocalLeaf, arclength: float, splitting: SpectralSplitting, config: FoliationConfig) -> np.ndarray:
    """Arc-length travel along a 1-d leaf graph by normalized tangent integration.

    Fourth-order integration of d sigma / dt = +-1 / |c'(sigma)| with step
    |arclength| / leg_substeps; raises when the endpoint leaves the chart.
    """
    P = splitting.change_of_basis
    sl = splitting.slices[leaf.which]
    par_idx = np.arange(sl.start, sl.stop)
    rest_idx = np.array([i for i in range(splitting.d) if i not in set(par_idx)], dtype=int)
    B_par = P[:, par_idx][:, 0]
    B_rest = P[:, rest_idx]
    slope = np.gradient(leaf.values, leaf.sigma, axis=0)  # (n, d-1)

    def speed(sig: float) -> float:
        ws = np.array([np.interp(sig, leaf.sigma, slope[:, j]) for j in range(slope.shape[1])])
        tangent = B_par + B_rest @ ws
        return 1.0 / float(np.linalg.norm(tangent))

    direction = 1.0 if arclength >= 0 else -1.0
    total = abs(arclength)
    m = config.leg_substeps
    h = total / m
    sig = 0.0
    for _ in range(m):
        k1 = direction * speed(sig)
        k2 = direction * speed(sig + 0.5 * h * k1)
        k3 = direction * speed(sig + 0.5 * h * k2)
        k4 = direction * speed(sig + h * k3)
        sig += (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
    if abs(sig) > config.r_leaf:
        raise LeafError(f"leg endpoint sigma {sig:.4f} outside leaf radius {config.r_leaf}")
    w_end = np.array([np.interp(sig, leaf.sigma, leaf.values[:, j]) for j in range(leaf.values.shape[1])])
    return leaf.base + sig * B_par + B_rest @ w_end


# ---------------------------------------------------------------------------
# sampled integrability score
# ---------------------------------------------------------------------------

@dataclass
class IntegrabilityReport:
    score: float               # median |center gap| / (delta_s * delta_u)
    samples: list              # QuadrilateralDefect JSON rows
    delta_s: float
    delta_u: float

    def to_json_obj(self) -> dict:
        return {
            "schema": "phlab.integrability/1",
            "score": self.score,
            "delta_s": self.delta_s,
            "delta_u": self.delta_u,
            "samples": self.samples,
        }


def integrability_score(
    f: PerturbedDiffeo,
    splitting: SpectralSplitting,
    n_samples: int = 10,
    config: FoliationConfig = FoliationConfig(),
    seed: int = 0,
) -> IntegrabilityReport:
    """Median normalized center closing defect over sampled su-quadrilaterals.

    Near zero is consistent with joint integrability of the strong foliations;
    large values indicate accessibility-like behavior.  The score is
    comparative: it carries no absolute ground truth.
    """
    if n_samples < 10:
        raise ValueError("need at least 10 samples")
    lab = FoliationLab(f, splitting, config)
    rng = np.random.default_rng(seed)
    rows = []
    norms = []
    for _ in range(n_samples):
        x = rng.random(f.d)
        defect = lab.su_quadrilateral(x, config.delta_s, config.delta_u)
        rows.append(defect.to_json_obj())
        norms.append(defect.center_gap_norm)
    score = float(np.median(norms) / (config.delta_s * config.delta_u))
    return IntegrabilityReport(score=score, samples=rows, delta_s=config.delta_s, delta_u=config.delta_u)
