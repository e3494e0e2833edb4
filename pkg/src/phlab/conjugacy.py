"""Conjugacy components by contraction fixed-point iteration.

Writing the conjugating homeomorphism as identity plus a periodic field and
projecting onto the splitting of L turns the commutation relation into the
fixed-point equation

    H_* = L_*^{-1} (H_* o f) + G_*,      G = L^{-1} (lift(f) - L),

solved by forward iteration on the unstable component (the affine operator is
a sup-norm contraction with ratio |L_u^{-1}|) and by backward iteration on the
stable component.  The center component is never summed in sup norm: only
partial sums and their pairings against test functions are reported.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .lattice import SpectralSplitting
from .torus_maps import PerturbedDiffeo, TrigPoly, grid_points, torus_reduce


class ContractionFailure(RuntimeError):
    """Measured expansion where a contraction was expected (grid too coarse)."""

    def __init__(self, message: str, diagnostics: dict):
        super().__init__(message)
        self.diagnostics = diagnostics


@dataclass(frozen=True)
class SolverConfig:
    grid_n: int = 16
    tol: float = 1e-10
    k_max: int = 200
    interpolation: str = "trigonometric"  # or "multilinear"
    max_modes: int = 4096
    mode_drop_fraction: float = 0.05  # dropped-coefficient budget, as a fraction of tol


# ---------------------------------------------------------------------------
# periodic interpolation
# ---------------------------------------------------------------------------

class MultilinearInterpolator:
    """Periodic multilinear interpolation of grid values (N, m) on the n^d lattice."""

    def __init__(self, values: np.ndarray, grid_n: int, d: int):
        self.n = grid_n
        self.d = d
        self.values = values.reshape((grid_n,) * d + (-1,))

    def __call__(self, pts: np.ndarray) -> np.ndarray:
        n, d = self.n, self.d
        scaled = np.asarray(pts) * n
        base = np.floor(scaled).astype(int)
        frac = scaled - base
        out = np.zeros((pts.shape[0], self.values.shape[-1]))
        for corner in range(1 << d):
            bits = [(corner >> axis) & 1 for axis in range(d)]
            weight = np.ones(pts.shape[0])
            idx = []
            for axis, bit in enumerate(bits):
                weight = weight * (frac[:, axis] if bit else 1.0 - frac[:, axis])
                idx.append((base[:, axis] + bit) % n)
            out += weight[:, None] * self.values[tuple(idx)]
        return out


class SparseTrigInterpolator:
    """Trigonometric interpolation through significant FFT modes.

    Modes are kept until the sum of dropped coefficient magnitudes is below
    `drop_budget` (so truncation never exceeds that sup-norm error), capped at
    `max_modes`; None is returned by `build` when the cap is exceeded and the
    caller falls back to multilinear interpolation.
    """

    def __init__(self, freqs: np.ndarray, coefs: np.ndarray):
        self.freqs = freqs  # (m, d) float
        self.coefs = coefs  # (m, channels) complex

    @staticmethod
    def build(values: np.ndarray, grid_n: int, d: int, max_modes: int, drop_budget: float):
        n = grid_n
        chans = values.shape[-1]
        spec = np.fft.fftn(values.reshape((n,) * d + (chans,)), axes=tuple(range(d))) / float(n**d)
        spec = spec.reshape(-1, chans)
        mags = np.max(np.abs(spec), axis=1)
        order = np.argsort(mags)  # ascending
        csum = np.cumsum(mags[order])
        keep_mask = np.ones(len(mags), dtype=bool)
        droppable = csum <= drop_budget
        keep_mask[order[droppable]] = False
        kept = int(keep_mask.sum())
        if kept > max_modes:
            return None
        idx = np.nonzero(keep_mask)[0]
        if len(idx) == 0:
            idx = order[-1:]
        unraveled = np.stack(np.unravel_index(idx, (n,) * d), axis=1)
        signed = (unraveled + n // 2) % n - n // 2
        return SparseTrigInterpolator(signed.astype(float), spec[idx])

    def __call__(self, pts: np.ndarray) -> np.ndarray:
        out = np.zeros((pts.shape[0], self.coefs.shape[1]))
        chunk = max(1, int(4e6 // max(len(self.freqs), 1)))
        for lo in range(0, pts.shape[0], chunk):
            block = pts[lo : lo + chunk]
            phase = np.exp(2j * math.pi * (block @ self.freqs.T))
            out[lo : lo + chunk] = np.real(phase @ self.coefs)
        return out


def make_interpolator(values: np.ndarray, grid_n: int, d: int, config: SolverConfig):
    if config.interpolation == "trigonometric":
        interp = SparseTrigInterpolator.build(
            values, grid_n, d, config.max_modes, config.mode_drop_fraction * config.tol
        )
        if interp is not None:
            return interp
    return MultilinearInterpolator(values, grid_n, d)


# ---------------------------------------------------------------------------
# displacement field and exact component evaluation
# ---------------------------------------------------------------------------

def component_coordinates(splitting: SpectralSplitting, vectors: np.ndarray) -> dict[str, np.ndarray]:
    coords = vectors @ splitting.change_of_basis_inv.T
    sl = splitting.slices
    return {k: coords[:, sl[k]] for k in "scu"}


def displacement_components(f: PerturbedDiffeo, splitting: SpectralSplitting, pts: np.ndarray) -> dict[str, np.ndarray]:
    """G = L^{-1}(lift f - L) at the given points, in splitting coordinates."""
    F = f.displacement(pts)
    G = F @ f.L.inverse_float().T
    return component_coordinates(splitting, G)


def displacement_field(f: PerturbedDiffeo, splitting: SpectralSplitting, grid_n: int) -> dict[str, np.ndarray]:
    return displacement_components(f, splitting, grid_points(grid_n, f.d))


# ---------------------------------------------------------------------------
# contraction solves
# ---------------------------------------------------------------------------

@dataclass
class SolvedComponent:
    """One solved conjugacy component on the grid, with its truncation data."""

    which: str                   # "u" or "s"
    grid_n: int
    values: np.ndarray           # (N, dim) splitting coordinates
    truncation_K: int
    tail_bound: float
    sup_diffs: list
    measured_ratio: float
    contraction_norm: float
    converged: bool
    interpolation: str

    def evaluate_exact(self, f: PerturbedDiffeo, splitting: SpectralSplitting, pts: np.ndarray) -> np.ndarray:
        """Truncated orbit series at arbitrary points (no grid interpolation)."""
        return _orbit_series(f, splitting, pts, self.which, self.truncation_K)


def _orbit_series(f: PerturbedDiffeo, splitting: SpectralSplitting, pts: np.ndarray, which: str, K: int) -> np.ndarray:
    blk = splitting.block(which)
    dim = blk.shape[0]
    out = np.zeros((pts.shape[0], dim))
    if dim == 0 or K == 0:
        return out
    cur = np.asarray(pts, dtype=float)
    if which == "u":
        step = np.linalg.inv(blk)  # applied k times to the k-th term
        weight = np.eye(dim)
        for _ in range(K):
            out += displacement_components(f, splitting, cur)["u"] @ weight.T
            weight = step @ weight
            cur = f.eval(cur)
    else:
        weight = np.eye(dim)
        for _ in range(1, K + 1):
            cur = f.inverse(cur)
            weight = blk @ weight
            out -= displacement_components(f, splitting, cur)["s"] @ weight.T
    return out


def _measure_ratio(diffs: list, tol: float) -> float:
    ratios = []
    for prev, cur in zip(diffs[1:], diffs[2:]):
        if prev > 10 * tol and cur > 10 * tol and prev > 0:
            ratios.append(cur / prev)
    if not ratios:
        return float("nan")
    return float(np.exp(np.mean(np.log(ratios))))


def solve_unstable_component(
    f: PerturbedDiffeo,
    splitting: SpectralSplitting,
    config: SolverConfig = SolverConfig(),
    certificate=None,
) -> SolvedComponent:
    """Iterate psi <- L_u^{-1}(psi o f) + G_u from zero until sup-differences
    reach tol, measuring the per-step contraction ratio.

    The composition psi o f is interpolated on the grid per config; a measured
    ratio above one aborts with diagnostics.
    """
    if certificate is not None and not getattr(certificate, "verified", True):
        raise ValueError("partial hyperbolicity certificate is not verified")
    return _solve(f, splitting, config, which="u")


def solve_stable_component(
    f: PerturbedDiffeo,
    splitting: SpectralSplitting,
    config: SolverConfig = SolverConfig(),
    certificate=None,
) -> SolvedComponent:
    """Mirror of the unstable solve, iterating backward with the exact inverse."""
    if certificate is not None and not getattr(certificate, "verified", True):
        raise ValueError("partial hyperbolicity certificate is not verified")
    return _solve(f, splitting, config, which="s")


def _solve(f: PerturbedDiffeo, splitting: SpectralSplitting, config: SolverConfig, which: str) -> SolvedComponent:
    d = f.d
    blk = splitting.block(which)
    dim = blk.shape[0]
    pts = grid_points(config.grid_n, d)
    if dim == 0:
        return SolvedComponent(which, config.grid_n, np.zeros((pts.shape[0], 0)), 0, 0.0, [], float("nan"), 0.0, True, config.interpolation)

    if which == "u":
        op = np.linalg.inv(blk)
        targets = f.eval(pts)
        G = displacement_components(f, splitting, pts)["u"]
        drive = G
    else:
        op = blk
        targets = f.inverse(pts)
        G = displacement_components(f, splitting, pts)["s"]
        drive = -(displacement_components(f, splitting, targets)["s"] @ op.T)

    contraction_norm = float(np.linalg.norm(op, 2))
    if contraction_norm >= 1.0:
        raise ContractionFailure(
            f"operator norm {contraction_norm:.6f} >= 1 on component {which!r}",
            {"component": which, "norm": contraction_norm},
        )

    psi = np.zeros((pts.shape[0], dim))
    diffs: list[float] = []
    interp_used = config.interpolation
    converged = False
    K = 0
    for K in range(1, config.k_max + 1):
        interp = make_interpolator(psi, config.grid_n, d, config)
        interp_used = "trigonometric" if isinstance(interp, SparseTrigInterpolator) else "multilinear"
        composed = interp(targets)
        psi_new = composed @ op.T + drive
        diff = float(np.max(np.linalg.norm(psi_new - psi, axis=1))) if dim else 0.0
        diffs.append(diff)
        psi = psi_new
        if diff <= config.tol:
            converged = True
            break
        if K >= 6:
            ratio = _measure_ratio(diffs, config.tol)
            if not math.isnan(ratio) and ratio > 1.0:
                raise ContractionFailure(
                    f"measured contraction ratio {ratio:.4f} > 1 on component {which!r} "
                    "(interpolation grid too coarse)",
                    {"component": which, "ratio": ratio, "diffs": diffs, "grid_n": config.grid_n},
                )

    sup_G = float(np.max(np.linalg.norm(G, axis=1))) if G.size else 0.0
    tail = contraction_norm**K * sup_G / (1.0 - contraction_norm)
    return SolvedComponent(
        which=which,
        grid_n=config.grid_n,
        values=psi,
        truncation_K=K,
        tail_bound=tail,
        sup_diffs=diffs,
        measured_ratio=_measure_ratio(diffs, config.tol),
        contraction_norm=contraction_norm,
        converged=converged,
        interpolation=interp_used,
    )


# ---------------------------------------------------------------------------
# center partial sums (distributional diagnostics, never summed in sup norm)
# ---------------------------------------------------------------------------

@dataclass
class CenterPartialSums:
    """Partial sums sum_{k<j} L_c^{-k}(G_c o f^k) on the grid.

    Term sup norms are reported and expected *not* to decay; convergence
    claims are made only through pairings against zero-mean test functions.
    """

    grid_n: int
    j_max: int
    terms: list            # j_max arrays (N, dim_c)
    term_sup_norms: list
    operator_power_norms: list

    def partial_sum(self, j: int) -> np.ndarray:
        if not 1 <= j <= self.j_max:
            raise ValueError("partial-sum index out of range")
        return np.sum(self.terms[:j], axis=0)

    @property
    def partial_sums(self) -> list:
        acc = np.zeros_like(self.terms[0])
        out = []
        for t in self.terms:
            acc = acc + t
            out.append(acc.copy())
        return out


def center_partial_sums(
    f: PerturbedDiffeo, splitting: SpectralSplitting, j_max: int, grid_n: int = 16
) -> CenterPartialSums:
    blk = splitting.block("c")
    dim = blk.shape[0]
    pts = grid_points(grid_n, f.d)
    if dim == 0:
        z = np.zeros((pts.shape[0], 0))
        return CenterPartialSums(grid_n, j_max, [z] * j_max, [0.0] * j_max, [0.0] * j_max)
    inv = np.linalg.inv(blk)
    weight = np.eye(dim)
    cur = pts
    terms, sups, opnorms = [], [], []
    for _ in range(j_max):
        term = displacement_components(f, splitting, cur)["c"] @ weight.T
        terms.append(term)
        sups.append(float(np.max(np.linalg.norm(term, axis=1))))
        opnorms.append(float(np.linalg.norm(weight, 2)))
        weight = inv @ weight
        cur = f.eval(cur)
    return CenterPartialSums(grid_n, j_max, terms, sups, opnorms)


def pair_against_test_function(
    fields: list,
    eta: "TestFunction",
    grid_n: int,
    d: int,
    quadrature: str = "lebesgue",
    f: PerturbedDiffeo | None = None,
    orbit_length: int = 4096,
    seed: int = 0,
) -> np.ndarray:
    """Pairings <field_j, eta> for a sequence of grid fields.

    Lebesgue quadrature averages over the evaluation grid (the default,
    justified at desk scale by volume preservation); Birkhoff quadrature
    averages along an f-orbit and needs `f`.  Returns (len(fields), dim).
    """
    if quadrature == "lebesgue":
        pts = grid_points(grid_n, d)
        weights = np.full(pts.shape[0], 1.0 / pts.shape[0])
        eta_vals = eta.poly.value(pts)
        return np.stack([ (weights * eta_vals) @ fld for fld in fields ])
    if quadrature == "birkhoff":
        if f is None:
            raise ValueError("Birkhoff quadrature needs the dynamics")
        rng = np.random.default_rng(seed)
        x = rng.random((1, d))
        orbit = np.empty((orbit_length, d))
        for i in range(orbit_length):
            orbit[i] = x
            x = f.eval(x)
        eta_vals = eta.poly.value(orbit)
        out = []
        for fld in fields:
            interp = MultilinearInterpolator(fld, grid_n, d)
            out.append((eta_vals @ interp(orbit)) / orbit_length)
        return np.stack(out)
    raise ValueError(f"unknown quadrature {quadrature!r}")


# ---------------------------------------------------------------------------
# test functions and mollifiers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TestFunction:
    """Zero-mean trigonometric test function with a sampled Hoelder norm."""

    poly: TrigPoly
    theta: float
    holder_norm: float = field(init=False)

    def __post_init__(self):
        if not (0.0 < self.theta <= 1.0):
            raise ValueError("theta must lie in (0, 1]")
        if not self.poly.has_zero_mean:
            raise ValueError("test function must have zero mean")
        object.__setattr__(self, "holder_norm", _holder_norm(self.poly, self.theta))


def _holder_norm(poly: TrigPoly, theta: float, samples: int = 4096, seed: int = 7) -> float:
    """sup |eta(x+h) - eta(x)| / |h|^theta over dyadic scales and random directions."""
    rng = np.random.default_rng(seed)
    pts = rng.random((samples, poly.d))
    best = 0.0
    for j in range(0, 14):
        delta = 2.0 ** (-j)
        dirs = rng.normal(size=(samples, poly.d))
        dirs /= np.linalg.norm(dirs, axis=1)[:, None]
        inc = np.abs(poly.value(pts + delta * dirs) - poly.value(pts))
        best = max(best, float(np.max(inc)) / delta**theta)
    return best


class Mollifier:
    """Smoothing by convolution with a scaled tensor bump supported in the unit ball.

    The 1-d profile is exp(-1/(1-t^2)) normalized to unit mass; per axis it is
    compressed to |t| <= 1/sqrt(d) so the product support sits inside the unit
    ball and the modulus-of-continuity estimate applies verbatim.
    """

    GRID = 1 << 14

    def __init__(self, d: int):
        self.d = d
        t = np.linspace(-1.0, 1.0, self.GRID + 1)
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            raw = np.where(np.abs(t) < 1.0, np.exp(-1.0 / np.maximum(1.0 - t * t, 1e-300)), 0.0)
        mass = np.trapezoid(raw, t)
        self._t = t
        self._psi = raw / mass  # unit-mass profile on [-1, 1]

    def profile_hat(self, xi: np.ndarray) -> np.ndarray:
        """Fourier transform of the unit profile at frequencies xi (real, even)."""
        xi = np.atleast_1d(np.asarray(xi, dtype=float))
        kernels = np.cos(2.0 * math.pi * xi[:, None] * self._t[None, :])
        return np.trapezoid(kernels * self._psi[None, :], self._t, axis=1)

    def multiplier(self, k: np.ndarray, eps: float) -> np.ndarray:
        """Fourier multiplier of the epsilon-mollifier at integer frequencies k."""
        k = np.atleast_2d(np.asarray(k, dtype=float))
        scale = eps / math.sqrt(self.d)
        out = np.ones(k.shape[0])
        for axis in range(self.d):
            out *= self.profile_hat(scale * k[:, axis])
        return out

    def mollify(self, poly: TrigPoly, eps: float) -> TrigPoly:
        ks = np.array([k for k, _, _ in poly.modes], dtype=float)
        mult = self.multiplier(ks, eps) if len(ks) else np.zeros(0)
        modes = tuple(
            (k, m * c, m * s) for (k, c, s), m in zip(poly.modes, mult)
        )
        return TrigPoly(poly.d, modes)

    def profile_derivative_sups(self, ell_max: int) -> list[float]:
        """sup |psi^(m)| of the unit profile for m = 0..ell_max, by differencing."""
        sups = []
        vals = self._psi.copy()
        h = self._t[1] - self._t[0]
        for _ in range(ell_max + 1):
            sups.append(float(np.max(np.abs(vals))))
            vals = np.gradient(vals, h)
        return sups

    def c_ell_constants(self, ell_max: int) -> list[float]:
        """Constants c_ell with |eta_eps|_{C^ell} <= c_ell eps^{-d-ell} |eta|_0.

        Derived from sup|d^a phi| <= prod_i a^{1+a_i} sup|psi^(a_i)| with the
        per-axis compression a = sqrt(d), times the support volume (2/sqrt(d))^d,
        and eps <= 1 absorbing the weaker eps power.
        """
        sups = self.profile_derivative_sups(ell_max)
        a = math.sqrt(self.d)
        out = []
        for ell in range(ell_max + 1):
            best = 0.0
            for combo in _multi_indices(self.d, ell):
                prod = 1.0
                for ai in combo:
                    prod *= a ** (1 + ai) * sups[ai]
                best = max(best, prod)
            out.append((2.0 / a) ** self.d * best)
        return out


def _multi_indices(d: int, total_max: int):
    if d == 1:
        for t in range(total_max + 1):
            yield (t,)
        return
    for head in range(total_max + 1):
        for rest in _multi_indices(d - 1, total_max - head):
            yield (head,) + rest


def trig_sup_norm(poly: TrigPoly, grid_n: int = 256) -> float:
    pts = grid_points(grid_n, poly.d)
    return float(np.max(np.abs(poly.value(pts))))


def trig_c_ell_norm(poly: TrigPoly, ell: int, grid_n: int = 256) -> float:
    """max over multi-indices |a| <= ell of sup |d^a poly| on a fine grid."""
    best = 0.0
    for combo in _multi_indices(poly.d, ell):
        q = poly
        for axis, times in enumerate(combo):
            for _ in range(times):
                q = q.partial_derivative(axis)
        best = max(best, trig_sup_norm(q, grid_n))
    return best


def mollifier_report(eta: TestFunction, eps_list, ell_max: int = 3, grid_n: int = 256) -> dict:
    """Numerical check of the smoothing estimates for one test function.

    For each epsilon: the uniform distance |eta_eps - eta|, its bound
    eps^theta |eta|_theta, and for each ell <= ell_max the C^ell norm of
    eta_eps against c_ell eps^{-d-ell} |eta|_0.
    """
    mol = Mollifier(eta.poly.d)
    c_ells = mol.c_ell_constants(ell_max)
    sup_eta = trig_sup_norm(eta.poly, grid_n)
    rows = []
    pts = grid_points(grid_n, eta.poly.d)
    base_vals = eta.poly.value(pts)
    for eps in eps_list:
        smoothed = mol.mollify(eta.poly, eps)
        dist = float(np.max(np.abs(smoothed.value(pts) - base_vals)))
        row = {
            "eps": float(eps),
            "uniform_distance": dist,
            "uniform_bound": eps**eta.theta * eta.holder_norm,
            "c_ell": [],
        }
        for ell in range(ell_max + 1):
            row["c_ell"].append(
                {
                    "ell": ell,
                    "norm": trig_c_ell_norm(smoothed, ell, grid_n),
                    "bound": c_ells[ell] * eps ** (-eta.poly.d - ell) * sup_eta,
                }
            )
        rows.append(row)
    return {"theta": eta.theta, "holder_norm": eta.holder_norm, "rows": rows}


# ---------------------------------------------------------------------------
# assembled conjugacy field, residuals, regularity
# ---------------------------------------------------------------------------

@dataclass
class ConjugacyField:
    """Grid representation of the conjugacy displacement, by component."""

    grid_n: int
    stable: SolvedComponent
    unstable: SolvedComponent
    center: CenterPartialSums | None
    leaf_mode: bool

    def center_values(self, j: int | None = None) -> np.ndarray:
        pts_count = self.stable.values.shape[0]
        if self.leaf_mode or self.center is None:
            dim_c = 0 if self.center is None else (self.center.terms[0].shape[1] if self.center.terms else 0)
            return np.zeros((pts_count, dim_c))
        return self.center.partial_sum(j if j is not None else self.center.j_max)

    def to_meta_obj(self) -> dict:
        return {
            "schema": "phlab.conjugacy_field/1",
            "grid_n": self.grid_n,
            "leaf_mode": self.leaf_mode,
            "stable": {
                "truncation_K": self.stable.truncation_K,
                "tail_bound": self.stable.tail_bound,
                "measured_ratio": self.stable.measured_ratio,
                "contraction_norm": self.stable.contraction_norm,
                "converged": self.stable.converged,
                "interpolation": self.stable.interpolation,
            },
            "unstable": {
                "truncation_K": self.unstable.truncation_K,
                "tail_bound": self.unstable.tail_bound,
                "measured_ratio": self.unstable.measured_ratio,
                "contraction_norm": self.unstable.contraction_norm,
                "converged": self.unstable.converged,
                "interpolation": self.unstable.interpolation,
            },
            "center_terms": 0 if self.center is None else self.center.j_max,
            "center_term_sup_norms": [] if self.center is None else self.center.term_sup_norms,
        }


def solve_conjugacy(
    f: PerturbedDiffeo,
    splitting: SpectralSplitting,
    config: SolverConfig = SolverConfig(),
    leaf_mode: bool = True,
    center_terms: int = 12,
    certificate=None,
) -> ConjugacyField:
    stable = solve_stable_component(f, splitting, config, certificate)
    unstable = solve_unstable_component(f, splitting, config, certificate)
    center = None
    if splitting.dim_center > 0:
        center = center_partial_sums(f, splitting, center_terms, config.grid_n)
    return ConjugacyField(config.grid_n, stable, unstable, center, leaf_mode)


def conjugacy_residual(
    f: PerturbedDiffeo,
    splitting: SpectralSplitting,
    fields: ConjugacyField,
    grid_n: int | None = None,
    center_field: np.ndarray | None = None,
    config: SolverConfig = SolverConfig(),
) -> dict[str, float]:
    """Sup-norm commutation defect per component over the grid.

    Components are evaluated through their exact truncated series, so the
    stable/unstable residuals telescope to the K-th series term; in leaf mode
    the center residual of the identity center assignment is reported
    separately and is *not* expected to be small.  An explicit `center_field`
    on the grid (e.g. a known exact fixed point) overrides both center modes.
    """
    n = grid_n if grid_n is not None else fields.grid_n
    pts = grid_points(n, f.d)
    fpts = f.eval(pts)
    out: dict[str, float] = {}

    for comp, solved in (("s", fields.stable), ("u", fields.unstable)):
        blk = splitting.block(comp)
        if blk.shape[0] == 0:
            out[comp] = 0.0
            continue
        G = displacement_components(f, splitting, pts)[comp]
        H_at = solved.evaluate_exact(f, splitting, pts)
        H_after = solved.evaluate_exact(f, splitting, fpts)
        res = H_after - (H_at - G) @ blk.T
        out[comp] = float(np.max(np.linalg.norm(res, axis=1)))

    blk_c = splitting.block("c")
    if blk_c.shape[0] == 0:
        out["c"] = 0.0
    elif center_field is not None:
        G_c = displacement_components(f, splitting, pts)["c"]
        H_at = center_field
        H_after = make_interpolator(center_field, n, f.d, config)(fpts)
        res = H_after - (H_at - G_c) @ blk_c.T
        out["c"] = float(np.max(np.linalg.norm(res, axis=1)))
    elif fields.leaf_mode or fields.center is None:
        G_c = displacement_components(f, splitting, pts)["c"]
        out["c"] = float(np.max(np.linalg.norm(G_c @ blk_c.T, axis=1)))
    else:
        j = fields.center.j_max
        inv = np.linalg.inv(blk_c)
        weight = np.linalg.matrix_power(inv, j - 1)
        cur = pts
        for _ in range(j):
            cur = f.eval(cur)
        term = displacement_components(f, splitting, cur)["c"] @ weight.T
        out["c"] = float(np.max(np.linalg.norm(term, axis=1)))
    return out


def holder_exponent(values: np.ndarray, grid_n: int, d: int, scales: list[int]) -> dict:
    """Dyadic log-log regression of max grid increments.

    `scales` are node lags; returns the fitted exponent, the fit residual, and
    the increment table.  A numerically zero field reports exponent 1 by
    convention.
    """
    if len(scales) < 3:
        raise ValueError("need at least 3 scales")
    vals = values.reshape((grid_n,) * d + (-1,))
    sup = float(np.max(np.abs(vals)))
    if sup < 1e-14:
        return {"exponent": 1.0, "fit_residual": 0.0, "scales": list(scales), "increments": [0.0] * len(scales)}
    incs = []
    for lag in scales:
        best = 0.0
        for axis in range(d):
            diff = np.roll(vals, -lag, axis=axis) - vals
            best = max(best, float(np.max(np.linalg.norm(diff, axis=-1))))
        incs.append(best)
    xs = np.log([lag / grid_n for lag in scales])
    ys = np.log(np.maximum(incs, 1e-300))
    coef, res = np.polyfit(xs, ys, 1, full=True)[0:2]
    fit_res = float(res[0]) if len(res) else 0.0
    return {
        "exponent": float(coef[0]),
        "fit_residual": fit_res,
        "scales": list(scales),
        "increments": incs,
    }
