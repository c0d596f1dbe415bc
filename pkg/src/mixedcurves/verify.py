"""Seeded numerical checks of the homogeneity, flow and link-count claims.

Randomness is drawn per trial from ``default_rng([seed, stream, trial])``, so
an outcome depends only on the config and never on evaluation order.
Evaluation itself is batched with numpy.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, replace
from functools import lru_cache

import numpy as np

from .families import FamilyParams, h_chart_roots, make_h
from .invariants import link_count
from .mixed import MixedPolynomial, canonicalize, evaluate, evaluate_batch, term_values, wirtinger_batch
from .weights import Homogeneity, WeightSystem, infer_weights

# stream tags keep the substreams of different checks apart
_HOMOGENEITY, _WIRTINGER, _MONODROMY, _SMOOTHNESS, _RANDOM_POLY = 1, 2, 3, 4, 5

FD_STEP = 1e-6
WIRTINGER_TOL = 1e-6
NEWTON_MAX_ITER = 50
DEFLATION_PASSES = 8
EPS_GUARD = 1e-300


class DegenerateRoot(ArithmeticError):
    def __init__(self, root: complex, a: complex, b: complex):
        self.root, self.a, self.b = root, a, b
        super().__init__(f"zero at w={root!r} has |dphi| ~ |dbar phi| ({abs(a):.3e} vs {abs(b):.3e})")


class SearchExhausted(RuntimeError):
    pass


class NoPointsFound(RuntimeError):
    """Smoothness sampling located no zeros: inconclusive, not a failure."""


@dataclass(frozen=True)
class VerifyConfig:
    seed: int = 0
    trials: int = 1000
    tol: float = 1e-9
    search_radius: float = 8.0
    grid: int = 64
    cluster_eps: float = 1e-6

    def __post_init__(self):
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.trials < 1 or self.grid < 1:
            raise ValueError("trials and grid must be positive")
        if not 0 < self.tol < self.cluster_eps < self.search_radius:
            raise ValueError("need 0 < tol < cluster_eps < search_radius")

    def with_overrides(self, overrides: dict) -> "VerifyConfig":
        unknown = set(overrides) - set(asdict(self))
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return replace(self, **overrides)


@dataclass(frozen=True)
class VerifyOutcome:
    passed: bool
    max_residual: float
    details: str
    samples_used: int

    def to_dict(self) -> dict:
        return {
            "passed": bool(self.passed),
            "max_residual": float(self.max_residual),
            "samples_used": int(self.samples_used),
            "details": self.details,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


@dataclass(frozen=True)
class ZeroSet:
    affine_roots: tuple[complex, ...]
    infinity_is_root: bool
    residuals: tuple[float, ...]
    jacobian_ok: tuple[bool, ...]

    @property
    def count(self) -> int:
        return len(self.affine_roots) + int(self.infinity_is_root)

    def to_dict(self) -> dict:
        return {
            "affine_roots": [[_g17(w.real), _g17(w.imag)] for w in self.affine_roots],
            "infinity_is_root": self.infinity_is_root,
            "residuals": [_g17(r) for r in self.residuals],
            "jacobian_ok": list(self.jacobian_ok),
            "count": self.count,
        }


def _g17(x: float) -> float:
    return float(f"{x:.17g}")


def trial_rng(seed: int, stream: int, trial: int) -> np.random.Generator:
    return np.random.default_rng([seed, stream, trial])


@lru_cache(maxsize=64)
def _sample_points(cfg: VerifyConfig, stream: int, n: int, rmin: float = 0.1):
    """Points in the unit polydisk with |z_i| >= rmin plus (t, theta) per trial.

    Cached, since the draw depends on nothing else; the arrays are read-only.
    """
    Z = np.empty((cfg.trials, n), dtype=complex)
    t = np.empty(cfg.trials)
    theta = np.empty(cfg.trials)
    for i in range(cfg.trials):
        rng = trial_rng(cfg.seed, stream, i)
        mod = np.sqrt(rng.uniform(rmin ** 2, 1.0, n))
        arg = rng.uniform(0.0, 2 * math.pi, n)
        Z[i] = mod * np.exp(1j * arg)
        t[i] = rng.uniform(0.5, 2.0)
        theta[i] = rng.uniform(0.0, 2 * math.pi)
    for a in (Z, t, theta):
        a.setflags(write=False)
    return Z, t, theta


def verify_homogeneity(f: MixedPolynomial, ws: WeightSystem, cfg: VerifyConfig = VerifyConfig()) -> VerifyOutcome:
    if ws.n != f.n_vars:
        raise ValueError("weight system and polynomial dimensions differ")
    Z, t, theta = _sample_points(cfg, _HOMOGENEITY, f.n_vars)
    Q, P = np.array(ws.Q), np.array(ws.P)
    W = t[:, None] ** Q * np.exp(1j * theta[:, None] * P) * Z
    fz = evaluate_batch(f, Z)
    fw = evaluate_batch(f, W)
    td = t ** ws.d
    res = np.abs(fw - td * np.exp(1j * ws.q_pol * theta) * fz) / (np.abs(td * fz) + EPS_GUARD)
    worst = float(res.max())
    return VerifyOutcome(
        worst < cfg.tol, worst,
        f"f((t,rho).z) vs t^{ws.d} rho^{ws.q_pol} f(z) over {cfg.trials} samples, worst relative residual {worst:.3e}",
        cfg.trials,
    )


def _fd_wirtinger(f: MixedPolynomial, Z: np.ndarray, h: float = FD_STEP):
    """Central differences in the 2n real directions, combined as (f_x -+ i f_y)/2.

    Differences are taken per monomial before summing, so terms that do not
    involve z_k cancel exactly instead of leaving eps * |f| / h of rounding.
    """
    m, n = Z.shape
    dz = np.empty((m, n), dtype=complex)
    dzb = np.empty((m, n), dtype=complex)

    def diff(step):
        return (term_values(f, Z + step) - term_values(f, Z - step)).sum(axis=1)

    for k in range(n):
        e = np.zeros(n)
        e[k] = h
        fx = diff(e) / (2 * h)
        fy = diff(1j * e) / (2 * h)
        dz[:, k] = 0.5 * (fx - 1j * fy)
        dzb[:, k] = 0.5 * (fx + 1j * fy)
    return dz, dzb


def wirtinger_error(f: MixedPolynomial, Z: np.ndarray) -> np.ndarray:
    """Per-point max deviation of finite differences from the exact partials.

    Each component is measured relative to the max-norm of the exact
    gradient at that point (a floor that keeps vanishing components from
    dividing by zero).
    """
    ex_dz, ex_dzb = wirtinger_batch(f, Z)
    fd_dz, fd_dzb = _fd_wirtinger(f, Z)
    exact = np.concatenate([ex_dz, ex_dzb], axis=1)
    fd = np.concatenate([fd_dz, fd_dzb], axis=1)
    scale = np.maximum(np.abs(exact).max(axis=1, initial=0.0), EPS_GUARD)
    return (np.abs(fd - exact) / np.maximum(np.abs(exact), scale[:, None])).max(axis=1, initial=0.0)


def verify_wirtinger(f: MixedPolynomial, cfg: VerifyConfig = VerifyConfig()) -> VerifyOutcome:
    Z, _, _ = _sample_points(cfg, _WIRTINGER, f.n_vars, rmin=0.0)
    err = wirtinger_error(f, Z)
    worst = float(err.max(initial=0.0))
    return VerifyOutcome(
        worst < WIRTINGER_TOL, worst,
        f"Wirtinger partials vs central differences (step {FD_STEP:g}) at {cfg.trials} points, worst relative error {worst:.3e}",
        cfg.trials,
    )


def random_polynomial(seed: int, index: int, n_vars: int, degree: int, n_terms: int) -> MixedPolynomial:
    """Seeded random mixed polynomial with total degree <= ``degree``."""
    rng = trial_rng(seed, _RANDOM_POLY, index)
    terms = []
    while len(terms) < n_terms:
        total = int(rng.integers(0, degree + 1))
        cuts = np.sort(rng.integers(0, total + 1, 2 * n_vars - 1))
        parts = np.diff(np.concatenate([[0], cuts, [total]]))
        coeff = complex(rng.normal(), rng.normal())
        terms.append((coeff, parts[:n_vars], parts[n_vars:]))
    return canonicalize(terms, n_vars)


# zeros on P^1

def chart(f: MixedPolynomial) -> MixedPolynomial:
    """phi(w) = f(w, 1) as a one-variable mixed polynomial."""
    if f.n_vars != 2:
        raise ValueError("the P^1 chart needs a 2-variable polynomial")
    return canonicalize([(t.coeff, t.nu[:1], t.mu[:1]) for t in f.terms], 1)


def _newton_step(phi: MixedPolynomial, w: np.ndarray, deflate: np.ndarray | None = None):
    """Solve a*d + b*conj(d) = -psi(w) for d; returns (d, psi, a, b).

    psi is phi divided by prod(w - r) over the ``deflate`` roots. The divisor
    is holomorphic, so only the dz partial picks up the log-derivative term.
    """
    W = w[:, None]
    val = evaluate_batch(phi, W)
    a, b = wirtinger_batch(phi, W)
    a, b = a[:, 0], b[:, 0]
    if deflate is not None and len(deflate):
        with np.errstate(divide="ignore", invalid="ignore"):
            diff = w[:, None] - deflate[None, :]
            denom = np.prod(diff, axis=1)
            val = val / denom
            a = a / denom - val * np.sum(1.0 / diff, axis=1)
            b = b / denom
    det = np.abs(a) ** 2 - np.abs(b) ** 2
    with np.errstate(divide="ignore", invalid="ignore"):
        step = (np.conj(a) * (-val) - b * np.conj(-val)) / det
    return step, val, a, b


def _cluster(points: np.ndarray, eps: float) -> list[np.ndarray]:
    """Single-linkage clusters of complex points, as index arrays."""
    if not len(points):
        return []
    # collapse near-identical points first; linkage then runs on few representatives
    keys = np.round(np.stack([points.real, points.imag], axis=1) / (eps / 16))
    _, rep_idx, inverse = np.unique(keys, axis=0, return_index=True, return_inverse=True)
    inverse = inverse.reshape(-1)
    reps = points[rep_idx]
    parent = list(range(len(reps)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    close = np.abs(reps[:, None] - reps[None, :]) <= eps
    for i, j in zip(*np.nonzero(np.triu(close, 1))):
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)
    rep_label = np.array([find(i) for i in range(len(reps))])
    labels = rep_label[inverse]
    return [np.nonzero(labels == lab)[0] for lab in np.unique(labels)]


def _seeds(cfg: VerifyConfig) -> np.ndarray:
    g = cfg.grid
    rad = cfg.search_radius * np.sqrt((np.arange(g) + 0.5) / g)
    # stagger each ring so that no seed sits on a symmetry axis of the real families
    ang = 2 * math.pi * ((np.arange(g)[None, :] + 0.5) / g + 0.381966 * np.arange(g)[:, None] / g)
    return (rad[:, None] * np.exp(1j * ang)).reshape(-1)


def find_p1_zeros(f: MixedPolynomial, cfg: VerifyConfig = VerifyConfig(), oracle_roots=None) -> ZeroSet:
    """Zeros of a strongly polar 2-variable f on P^1 by seeded Newton on the w2 = 1 chart."""
    if f.n_vars != 2:
        raise ValueError("find_p1_zeros needs a 2-variable polynomial")
    cls = infer_weights(f)
    if cls.tag is not Homogeneity.STRONGLY_POLAR:
        raise ValueError(f"find_p1_zeros needs a strongly polar homogeneous polynomial, got {cls.tag.value}")
    phi = chart(f)
    if not phi.terms:
        raise ValueError("chart function f(w, 1) vanishes identically")
    if oracle_roots is not None:
        far = [w for w in oracle_roots if abs(w) > cfg.search_radius]
        if far:
            raise SearchExhausted(f"{len(far)} oracle root(s) outside |w| <= {cfg.search_radius}, e.g. {far[0]!r}")

    roots: list[complex] = []
    residuals: list[float] = []
    for _ in range(DEFLATION_PASSES):
        new = _newton_pass(phi, _seeds(cfg), np.array(roots, dtype=complex), cfg)
        if not new:
            break
        for root in new:
            _, val, a, b = _newton_step(phi, np.array([root]))
            if abs(abs(a[0]) - abs(b[0])) <= cfg.tol:
                raise DegenerateRoot(root, complex(a[0]), complex(b[0]))
            roots.append(root)
            residuals.append(float(abs(val[0])))
    order = sorted(range(len(roots)), key=lambda i: (round(roots[i].real, 9), round(roots[i].imag, 9)))
    inf_root = abs(evaluate(f, (1.0, 0.0))) < cfg.tol
    return ZeroSet(
        tuple(roots[i] for i in order), inf_root,
        tuple(residuals[i] for i in order), (True,) * len(roots),
    )


def _newton_pass(phi: MixedPolynomial, w: np.ndarray, known: np.ndarray, cfg: VerifyConfig) -> list[complex]:
    """One sweep of (deflated) Newton from every seed; returns new polished roots of phi."""
    alive = np.ones(w.shape, dtype=bool)
    for _ in range(NEWTON_MAX_ITER):
        idx = np.nonzero(alive)[0]
        if not len(idx):
            break
        step, _, _, _ = _newton_step(phi, w[idx], known)
        w_new = w[idx] + step
        ok = np.isfinite(w_new) & (np.abs(w_new) <= 2 * cfg.search_radius)
        w[idx[ok]] = w_new[ok]
        alive[idx[~ok]] = False
        settled = ok & (np.abs(step) <= 1e-15 * (1 + np.abs(w_new)))
        alive[idx[settled]] = False
    w = w[np.isfinite(w) & (np.abs(w) <= 2 * cfg.search_radius)]
    if len(known):
        w = w[np.abs(w[:, None] - known[None, :]).min(axis=1) > cfg.cluster_eps]
    if not len(w):
        return []
    w = w[np.abs(evaluate_batch(phi, w[:, None])) < cfg.tol]
    out = []
    for members in _cluster(w, cfg.cluster_eps):
        cand = w[members]
        root = cand[np.argmin(np.abs(evaluate_batch(phi, cand[:, None])))]
        root = _polish(phi, root, cfg.tol)
        if len(known) and np.abs(known - root).min() <= cfg.cluster_eps:
            continue
        if any(abs(root - o) <= cfg.cluster_eps for o in out):
            continue
        out.append(root)
    return out


def _polish(phi: MixedPolynomial, root: complex, tol: float, max_iter: int = 8) -> complex:
    w = np.array([root])
    for _ in range(max_iter):
        step, _, _, _ = _newton_step(phi, w)
        if not np.isfinite(step[0]):
            break
        w = w + step
        if abs(step[0]) < tol * 1e-3:
            break
    return complex(w[0])


def verify_link_count(p: FamilyParams, cfg: VerifyConfig = VerifyConfig()) -> VerifyOutcome:
    zs = find_p1_zeros(make_h(p), cfg, oracle_roots=h_chart_roots(p))
    expected = link_count(p.q, p.r, p.j)
    found = zs.count
    worst_res = max(zs.residuals, default=0.0)
    return VerifyOutcome(
        found == expected, float(abs(found - expected)),
        f"h_{{{p.q},{p.r},{p.j}}}: expected {expected}, found {found} zeros on P^1 "
        f"(max residual {worst_res:.3e})",
        cfg.grid ** 2,
    )


# monodromy flow

def verify_monodromy_flow(f: MixedPolynomial, ws: WeightSystem, cfg: VerifyConfig = VerifyConfig()) -> VerifyOutcome:
    """f(exp(i theta) . z) = exp(i q theta) f(z), and the flow at 2 pi is the identity."""
    if ws.n != f.n_vars:
        raise ValueError("weight system and polynomial dimensions differ")
    Z, _, theta = _sample_points(cfg, _MONODROMY, f.n_vars)
    P = np.array(ws.P)
    fz = evaluate_batch(f, Z)
    fw = evaluate_batch(f, np.exp(1j * theta[:, None] * P) * Z)
    res = np.abs(fw - np.exp(1j * ws.q_pol * theta) * fz) / (np.abs(fz) + EPS_GUARD)
    loop = np.abs(np.exp(2j * math.pi * P) * Z - Z).max()
    worst = float(max(res.max(), loop))
    return VerifyOutcome(
        worst < cfg.tol, worst,
        f"flow residual {float(res.max()):.3e} over {cfg.trials} (z, theta); "
        f"|h_2pi(z) - z| <= {float(loop):.3e}",
        cfg.trials,
    )


# smoothness sampling

def chart3(f: MixedPolynomial) -> MixedPolynomial:
    """f(z1, z2, 1) as a 2-variable polynomial."""
    if f.n_vars != 3:
        raise ValueError("smoothness sampling needs a 3-variable polynomial")
    return canonicalize([(t.coeff, t.nu[:2], t.mu[:2]) for t in f.terms], 2)


def _real_jacobian(dz: np.ndarray, dzb: np.ndarray) -> np.ndarray:
    """2 x 2n real Jacobian of (Re f, Im f) in coordinates (x1, y1, x2, y2, ...)."""
    m, n = dz.shape
    cols = np.empty((m, 2 * n), dtype=complex)
    cols[:, 0::2] = dz + dzb
    cols[:, 1::2] = 1j * (dz - dzb)
    return np.stack([cols.real, cols.imag], axis=1)


def sample_smoothness(f: MixedPolynomial, cfg: VerifyConfig = VerifyConfig(), max_iter: int = 100) -> VerifyOutcome:
    """Look for rank-deficient points of V on the chart z3 = 1.

    Each trial intersects the zero set with a random real 2-plane in R^4
    and runs Newton on the 2x2 slice system. A located zero is a singular
    candidate when the smallest singular value of its real Jacobian is below
    sqrt(tol) times the local term scale. Absence of candidates is evidence, not
    proof.
    """
    g = chart3(f)
    m = cfg.trials
    base = np.empty((m, 4))
    frames = np.empty((m, 4, 2))
    for i in range(m):
        rng = trial_rng(cfg.seed, _SMOOTHNESS, i)
        base[i] = rng.normal(size=4)
        frames[i], _ = np.linalg.qr(rng.normal(size=(4, 2)))
    st = np.zeros((m, 2))
    alive = np.ones(m, dtype=bool)

    def to_complex(x):
        return np.stack([x[:, 0] + 1j * x[:, 1], x[:, 2] + 1j * x[:, 3]], axis=1)

    for _ in range(max_iter):
        idx = np.nonzero(alive)[0]
        if not len(idx):
            break
        x = base[idx] + np.einsum("mij,mj->mi", frames[idx], st[idx])
        Z = to_complex(x)
        val = evaluate_batch(g, Z)
        J = _real_jacobian(*wirtinger_batch(g, Z)) @ frames[idx]
        det = J[:, 0, 0] * J[:, 1, 1] - J[:, 0, 1] * J[:, 1, 0]
        rhs = np.stack([-val.real, -val.imag], axis=1)
        with np.errstate(divide="ignore", invalid="ignore"):
            ds = (J[:, 1, 1] * rhs[:, 0] - J[:, 0, 1] * rhs[:, 1]) / det
            dt = (-J[:, 1, 0] * rhs[:, 0] + J[:, 0, 0] * rhs[:, 1]) / det
        step = np.stack([ds, dt], axis=1)
        ok = np.isfinite(step).all(axis=1)
        st[idx[ok]] += step[ok]
        dead = ~ok | (np.abs(st[idx]).max(axis=1) > 1e6)
        settled = ok & (np.abs(step).max(axis=1) <= 1e-16 * (1 + np.abs(st[idx]).max(axis=1)))
        alive[idx[dead | settled]] = False

    x = base + np.einsum("mij,mj->mi", frames, st)
    finite = np.isfinite(x).all(axis=1)
    Z = to_complex(x[finite])
    val = np.abs(evaluate_batch(g, Z)) if len(Z) else np.array([])
    found = Z[val < cfg.tol]
    if not len(found):
        raise NoPointsFound(f"no zeros located in {m} slices")
    J = _real_jacobian(*wirtinger_batch(g, found))
    sigma = np.linalg.svd(J, compute_uv=False)[:, -1]
    scale = np.maximum(np.abs(term_values(g, found)).sum(axis=1), 1.0)
    # a zero accepted at residual tol can lie ~sqrt(tol) from a double point
    singular = sigma <= math.sqrt(cfg.tol) * scale
    n_bad = int(singular.sum())
    rel = sigma / scale
    return VerifyOutcome(
        n_bad == 0, float(n_bad),
        f"{len(found)} zeros located in {m} slices; {n_bad} rank-deficient; "
        f"min smallest singular value / scale {float(rel.min()):.3e}",
        m,
    )
