"""Sum-rate bounds and capacity-region estimates for game-compiled channels.

Three families of results live here:

* an analytic upper bound on the sum rate of a game channel, driven only by
  the game's classical value: for a tunable slack ``delta`` there is a
  largest ``eps`` with
  ``(delta + h(eps)) / (1 - eps) = d(eps || 1 - omega)`` such that the sum
  rate is at most ``max{(1 - eps) log d, log d - delta}``, and the bound is
  minimized over ``delta``;
* a randomized inner bound on the capacity region, tracing the boundary by
  maximizing weighted pentagon vertices over product input distributions
  with alternating projected-gradient ascent;
* closed-form achievable rates for channels built from linear-system games,
  plus constructors for those games and for clause/variable games built
  from 3-CNF formulas.

All rates are in bits.  Every randomized routine takes an explicit seed and
is deterministic for a fixed seed, independent of worker count.
"""

from __future__ import annotations

import dataclasses
import math
from concurrent.futures import ProcessPoolExecutor
from typing import NamedTuple, Sequence

import numpy as np

from .channel import Mac, Pentagon, ProductInput, pentagon
from .games import Game, PromisedGame, promise_free

_INV_LN2 = 1.0 / math.log(2.0)
_TINY = 1e-300


# ---------------------------------------------------------------------------
# binary entropy machinery


def binary_entropy(x: float) -> float:
    """Entropy in bits of a coin with bias ``x``; ``h(0) = h(1) = 0``."""
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"binary_entropy needs x in [0, 1], got {x!r}")
    if x == 0.0 or x == 1.0:
        return 0.0
    return -x * math.log2(x) - (1.0 - x) * math.log2(1.0 - x)


def binary_rel_entropy(x: float, y: float) -> float:
    """Relative entropy in bits between coins with biases ``x`` and ``y``.

    ``d(x || y) = x log2(x/y) + (1-x) log2((1-x)/(1-y))``, with the usual
    conventions: terms with ``x = 0`` or ``x = 1`` vanish, and a boundary
    ``y`` mismatching ``x`` gives ``+inf``.
    """
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"binary_rel_entropy needs x in [0, 1], got {x!r}")
    if not 0.0 <= y <= 1.0:
        raise ValueError(f"binary_rel_entropy needs y in [0, 1], got {y!r}")
    total = 0.0
    if x > 0.0:
        if y == 0.0:
            return math.inf
        total += x * math.log2(x / y)
    if x < 1.0:
        if y == 1.0:
            return math.inf
        total += (1.0 - x) * math.log2((1.0 - x) / (1.0 - y))
    return total


class EpsStarResult(NamedTuple):
    """Solution of the slack equation.

    ``value`` is the crossing point; ``crossing`` is False when no crossing
    exists in ``(0, 1 - omega)`` (possible once ``delta`` reaches
    ``-log2(omega)``), in which case ``value`` is 0 and the sum-rate bound
    degenerates to the trivial ``log d``.
    """

    value: float
    crossing: bool


def solve_eps_star(delta: float, omega_u: float) -> EpsStarResult:
    """Solve ``(delta + h(e)) / (1 - e) = d(e || 1 - omega)`` for ``e``.

    The left side increases in ``e`` and the right side decreases on
    ``(0, 1 - omega)``, so for ``0 <= delta < -log2(omega)`` there is a
    unique crossing, found by bisection to an interval below ``1e-12``.
    """
    w = float(omega_u)
    if not 0.0 < w < 1.0:
        raise ValueError(f"omega must lie strictly between 0 and 1, got {w!r}")
    if delta < 0.0:
        raise ValueError(f"delta must be nonnegative, got {delta!r}")
    y = 1.0 - w

    def gap(e: float) -> float:
        return (delta + binary_entropy(e)) / (1.0 - e) - binary_rel_entropy(e, y)

    lo, hi = 1e-15, y - 1e-15
    if gap(lo) >= 0.0:
        return EpsStarResult(0.0, False)
    if gap(hi) <= 0.0:  # unreachable for valid inputs; guards float edge cases
        return EpsStarResult(hi, True)
    while hi - lo > 1e-12:
        mid = 0.5 * (lo + hi)
        if gap(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    return EpsStarResult(0.5 * (lo + hi), True)


@dataclasses.dataclass(frozen=True)
class UpperBoundResult:
    """Optimized analytic sum-rate upper bound for a game channel.

    Attributes:
        delta_star: Minimizing slack (bits).
        eps_star: Matching solution of the slack equation (probability).
        bound: The bound value ``u(delta_star)`` in bits.
        omega_u: Classical value the bound was driven by.
    """

    delta_star: float
    eps_star: float
    bound: float
    omega_u: float

    def __post_init__(self):
        if not 0.0 < self.delta_star < -math.log2(self.omega_u):
            raise ValueError("delta_star outside (0, -log2(omega))")
        if not 0.0 < self.eps_star <= 1.0 - self.omega_u:
            raise ValueError("eps_star outside (0, 1 - omega]")


def _log_dim(g: Game) -> float:
    return math.log2(g.nx1) + math.log2(g.nx2)


def _bound_at(delta: float, omega: float, log_d: float) -> tuple[float, float]:
    eps = solve_eps_star(delta, omega)
    return max((1.0 - eps.value) * log_d, log_d - delta), eps.value


def sum_rate_upper_bound(
    g: Game, omega_u, grid_points: int = 1000
) -> UpperBoundResult:
    """Best analytic sum-rate upper bound for the channel compiled from ``g``.

    Minimizes ``u(delta) = max{(1 - eps*(delta)) log d, log d - delta}`` over
    ``delta in (0, -log2(omega))``, where ``d = nx1 * nx2`` and ``omega_u``
    is the game's classical value under uniform questions (or any valid
    upper bound on it; the caller supplies it).  The curve is unimodal (one
    branch rises, the other falls), so a coarse grid scan followed by a
    golden-section refinement finds the minimum.

    Raises:
        ValueError: If ``omega_u`` is 1 (no nontrivial bound exists) or
            otherwise outside ``(0, 1)``.
    """
    w = float(omega_u)
    if w == 1.0:
        raise ValueError("omega = 1: the game is perfectly winnable, no bound")
    if not 0.0 < w < 1.0:
        raise ValueError(f"omega must lie in (0, 1), got {w!r}")
    log_d = _log_dim(g)
    d_max = -math.log2(w)
    grid = np.linspace(0.0, d_max, grid_points + 2)[1:-1]
    values = [_bound_at(d, w, log_d)[0] for d in grid]
    i = int(np.argmin(values))
    lo = grid[i - 1] if i > 0 else grid[0] * 0.5
    hi = grid[i + 1] if i + 1 < len(grid) else 0.5 * (grid[-1] + d_max)
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - inv_phi * (b - a)
    d = a + inv_phi * (b - a)
    fc, fd = _bound_at(c, w, log_d)[0], _bound_at(d, w, log_d)[0]
    while b - a > 1e-12:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - inv_phi * (b - a)
            fc = _bound_at(c, w, log_d)[0]
        else:
            a, c, fc = c, d, fd
            d = a + inv_phi * (b - a)
            fd = _bound_at(d, w, log_d)[0]
    delta_star = float(0.5 * (a + b))
    bound, eps = _bound_at(delta_star, w, log_d)
    return UpperBoundResult(delta_star, eps, bound, w)


def upper_bound_curve(g: Game, omega_u, points: int = 200) -> np.ndarray:
    """Sample ``(delta, u(delta))`` over the closed interval ``[0, -log2 omega]``.

    At both ends the bound degenerates to ``log d`` (at the left end the
    subtracted slack vanishes, at the right end no positive loss floor can be
    certified), giving the characteristic dip-and-recover shape.
    """
    w = float(omega_u)
    if not 0.0 < w < 1.0:
        raise ValueError(f"omega must lie in (0, 1), got {w!r}")
    log_d = _log_dim(g)
    d_max = -math.log2(w)
    deltas = np.linspace(0.0, d_max, points)
    return np.array([[d, _bound_at(d, w, log_d)[0]] for d in deltas])


# ---------------------------------------------------------------------------
# inner bounds by weighted-vertex scalarization


@dataclasses.dataclass(frozen=True)
class InnerPoint:
    """An achievable rate pair with its witnessing input distribution."""

    r1: float
    r2: float
    input: ProductInput
    corner: str
    mu_index: int
    restart: int


@dataclasses.dataclass(frozen=True)
class RegionBound:
    """A rate-region boundary, ordered from the R1 axis to the R2 axis.

    ``vertices`` is a convex chain with R1 nonincreasing and R2 nondecreasing;
    ``kind`` is one of ``inner``, ``outer-pentagon``, ``analytic-sum-cap``.
    For inner bounds, ``witnesses`` records every evaluated pentagon corner
    with the input distribution achieving it.
    """

    vertices: tuple[tuple[float, float], ...]
    kind: str
    witnesses: tuple[InnerPoint, ...] = ()

    def __post_init__(self):
        if self.kind not in ("inner", "outer-pentagon", "analytic-sum-cap"):
            raise ValueError(f"unknown region kind {self.kind!r}")
        if not self.vertices:
            raise ValueError("a region needs at least one vertex")
        for (r1a, r2a), (r1b, r2b) in zip(self.vertices, self.vertices[1:]):
            if r1b > r1a + 1e-12 or r2b < r2a - 1e-12:
                raise ValueError("vertices must have R1 nonincreasing, R2 nondecreasing")
        if min(min(v) for v in self.vertices) < 0.0:
            raise ValueError("rates must be nonnegative")

    def best_sum_rate(self) -> float:
        return max(r1 + r2 for r1, r2 in self.vertices)


def _row_entropies(p: np.ndarray) -> np.ndarray:
    """Entropies in bits along the last axis; zero cells contribute zero."""
    logs = np.where(p > 0.0, np.log2(np.maximum(p, _TINY)), 0.0)
    return -(p * logs).sum(axis=-1)


class _Workspace:
    """Preprocessed channel tables shared by all optimizer runs."""

    def __init__(self, n: Mac):
        self.chan = n.p
        self.chan_t = np.ascontiguousarray(n.p.transpose(1, 0, 2))
        self.rowent = _row_entropies(n.p)
        self.rowent_t = np.ascontiguousarray(self.rowent.T)


def _vertex_coeffs(mu: float) -> tuple[float, float, float, float]:
    """Coefficients (alpha, beta, gamma, kappa) of the weighted objective.

    The objective ``mu * R1 + (1 - mu) * R2`` at the dominant pentagon corner
    expands into ``alpha H(Z) + beta H(Z|B) + gamma H(Z|A) - kappa H(Z|AB)``.
    """
    if mu >= 0.5:
        return (1.0 - mu, 2.0 * mu - 1.0, 0.0, mu)
    return (mu, 0.0, 1.0 - 2.0 * mu, 1.0 - mu)


class _BlockContext:
    """Quantities that stay fixed while one sender's distribution is optimized.

    With the other sender's batch ``pb`` frozen, the per-input output
    distributions ``cond_a[r, a] = sum_b pb[r, b] N(.|a, b)``, their
    entropies, and the linear noise-floor term are all constant, leaving
    only small per-candidate work inside the ascent loop.
    """

    def __init__(self, pb, chan, rowent, coeffs):
        self.coeffs = coeffs
        na, nb, nz = chan.shape
        self.nb, self.nz = nb, nz
        self.pb = pb
        self.chan_flat = chan.reshape(na, nb * nz)
        _, _, gamma, kappa = coeffs
        cond = pb @ chan.transpose(1, 0, 2).reshape(nb, na * nz)
        self.cond_a = cond.reshape(len(pb), na, nz)
        self.lin = kappa * (pb @ rowent.T)  # noise-floor term, linear in pa
        if gamma:
            self.lin = self.lin - gamma * _row_entropies(self.cond_a)

    def objective(self, pa, rows):
        """Objective values for candidate rows ``pa`` aligned with ``rows``."""
        alpha, beta, _, _ = self.coeffs
        out = -(pa * self.lin[rows]).sum(axis=1)
        if alpha:
            pz = np.matmul(pa[:, None, :], self.cond_a[rows])[:, 0, :]
            out = out + alpha * _row_entropies(pz)
        if beta:
            q = (pa @ self.chan_flat).reshape(len(pa), self.nb, self.nz)
            out = out + beta * (self.pb[rows] * _row_entropies(q)).sum(axis=1)
        return out

    def gradient(self, pa, rows):
        alpha, beta, _, _ = self.coeffs
        grad = -self.lin[rows]
        cond = self.cond_a[rows]
        if alpha:
            pz = np.matmul(pa[:, None, :], cond)[:, 0, :]
            lg = np.where(pz > 0.0, np.log2(np.maximum(pz, _TINY)), 0.0) + _INV_LN2
            grad = grad - alpha * np.matmul(cond, lg[:, :, None])[:, :, 0]
        if beta:
            q = (pa @ self.chan_flat).reshape(len(pa), self.nb, self.nz)
            lg = np.where(q > 0.0, np.log2(np.maximum(q, _TINY)), 0.0) + _INV_LN2
            weighted = (self.pb[rows][:, :, None] * lg).reshape(len(pa), -1)
            grad = grad - beta * (weighted @ self.chan_flat.T)
        return grad


def _objective(pa, pb, chan, rowent, coeffs):
    """Full objective for aligned batches; used for sweep-level bookkeeping."""
    return _BlockContext(pb, chan, rowent, coeffs).objective(pa, np.arange(len(pa)))


def _project_rows(v: np.ndarray) -> np.ndarray:
    """Euclidean projection of each row onto the probability simplex."""
    u = np.sort(v, axis=1)[:, ::-1]
    css = np.cumsum(u, axis=1) - 1.0
    k = np.arange(1, v.shape[1] + 1)
    cond = u - css / k > 0.0
    rho = cond.shape[1] - 1 - np.argmax(cond[:, ::-1], axis=1)
    theta = css[np.arange(len(v)), rho] / (rho + 1)
    return np.maximum(v - theta[:, None], 0.0)


def _ascend_block(pa, ctx: _BlockContext, step_tol=1e-9, max_iter=10_000):
    """Batched projected-gradient ascent over one sender's distributions.

    Every batch row carries its own step size and backtracks independently
    (halving until the objective improves, growing gently after a first-try
    success), so row trajectories do not depend on how rows are grouped into
    batches.  A row stops once its projected step falls below ``step_tol``
    or no improving step remains.
    """
    all_rows = np.arange(len(pa))
    f = ctx.objective(pa, all_rows)
    eta = np.ones(len(pa))
    frozen = np.zeros(len(pa), dtype=bool)
    for _ in range(max_iter):
        live = np.nonzero(~frozen)[0]
        if len(live) == 0:
            break
        pal, fl, el = pa[live], f[live], eta[live]
        grad = ctx.gradient(pal, live)
        cand, fc = pal.copy(), fl.copy()
        accepted = np.zeros(len(live), dtype=bool)
        first_try = np.zeros(len(live), dtype=bool)
        for attempt in range(80):
            act = np.nonzero(~accepted)[0]
            if len(act) == 0:
                break
            trial = _project_rows(pal[act] + el[act, None] * grad[act])
            ft = ctx.objective(trial, live[act])
            ok = ft > fl[act] + 1e-15
            cand[act[ok]] = trial[ok]
            fc[act[ok]] = ft[ok]
            accepted[act[ok]] = True
            if attempt == 0:
                first_try[act[ok]] = True
            el[act[~ok]] *= 0.5
            accepted[act[~ok]] |= el[act[~ok]] < 1e-14  # keep the current point
        step = np.sqrt(((cand - pal) ** 2).sum(axis=1))
        pa[live], f[live] = cand, fc
        eta[live] = np.where(first_try, np.minimum(el * 1.5, 1e6), el)
        frozen[live[step < step_tol]] = True
    return pa, f


def _alternate(pa, pb, ws: _Workspace, coeffs, sweep_tol=1e-10, max_sweeps=500):
    """Alternating coordinate ascent over the two input distributions."""
    coeffs_t = (coeffs[0], coeffs[2], coeffs[1], coeffs[3])
    f_prev = np.full(len(pa), -np.inf)
    active = np.ones(len(pa), dtype=bool)
    for _ in range(max_sweeps):
        idx = np.nonzero(active)[0]
        if len(idx) == 0:
            break
        sub_a, sub_b = pa[idx].copy(), pb[idx].copy()
        sub_a, _ = _ascend_block(sub_a, _BlockContext(sub_b, ws.chan, ws.rowent, coeffs))
        ctx_b = _BlockContext(sub_a, ws.chan_t, ws.rowent_t, coeffs_t)
        sub_b, f = _ascend_block(sub_b, ctx_b)
        pa[idx], pb[idx] = sub_a, sub_b
        done = f - f_prev[idx] < sweep_tol
        f_prev[idx] = f
        active[idx[done]] = False
    return pa, pb


def _dirichlet_inits(seed: int, tag: int, restarts: int, na: int, nb: int):
    """Flat-Dirichlet starting points, one generator per (seed, tag, restart).

    Seeding each restart separately keeps results identical no matter how
    restarts are batched or scheduled.
    """
    pa = np.empty((restarts, na))
    pb = np.empty((restarts, nb))
    for r in range(restarts):
        rng = np.random.default_rng([seed, tag, r])
        pa[r] = rng.dirichlet(np.ones(na))
        pb[r] = rng.dirichlet(np.ones(nb))
    return pa, pb


def _optimize_tag(n: Mac, ws: _Workspace, mu: float, seed: int, tag: int, restarts: int):
    """Run all restarts for one scalarization weight; returns per-restart results."""
    pa, pb = _dirichlet_inits(seed, tag, restarts, n.na, n.nb)
    coeffs = _vertex_coeffs(mu)
    pa, pb = _alternate(pa, pb, ws, coeffs)
    out = []
    for r in range(restarts):
        q = ProductInput(pa[r], pb[r])
        out.append((r, q, pentagon(n, q)))
    return out


def _region_task(args):
    """Process-pool entry point: one scalarization weight, all restarts."""
    n, mu, seed, tag, restarts = args
    return _optimize_tag(n, _Workspace(n), mu, seed, tag, restarts)


def _corner_points(pent: Pentagon) -> tuple[tuple[float, float], tuple[float, float]]:
    d1 = (pent.r1_max, max(pent.sum_max - pent.r1_max, 0.0))
    d2 = (max(pent.sum_max - pent.r2_max, 0.0), pent.r2_max)
    return d1, d2


def _convex_hull(points: Sequence[tuple[float, float]]):
    """Monotone-chain convex hull, counterclockwise.

    Points are merged below 1e-9 and near-collinear vertices dropped, so
    restarts that converged to the same optimum up to float noise yield one
    hull vertex.
    """
    pts = sorted({(round(x, 9), round(y, 9)) for x, y in points})
    if len(pts) <= 2:
        return pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 1e-12:
            lower.pop()
        lower.append(p)
    upper = []
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 1e-12:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def _boundary_chain(points: Sequence[tuple[float, float]]):
    """Upper-right hull boundary from the R1 axis around to the R2 axis.

    Axis projections of every point are included: whatever is achievable
    jointly is achievable with either sender silenced.
    """
    aug = {(0.0, 0.0)}
    for r1, r2 in points:
        aug.add((r1, r2))
        aug.add((r1, 0.0))
        aug.add((0.0, r2))
    hull = _convex_hull(list(aug))
    if len(hull) == 1:
        return hull
    start = max(range(len(hull)), key=lambda i: (hull[i][0], -hull[i][1]))
    top = max(hull, key=lambda v: (v[1], -v[0]))
    chain = []
    i = start
    for _ in range(len(hull)):
        chain.append(hull[i])
        if hull[i] == top:
            break
        i = (i + 1) % len(hull)
    return chain


def inner_bound(
    n: Mac,
    restarts: int = 64,
    seed: int = 0,
    workers: int = 1,
    mu_points: int = 65,
) -> RegionBound:
    """Randomized inner bound on the capacity region of a channel.

    For each weight ``mu`` on a uniform grid in ``[0, 1]`` the optimizer
    maximizes ``mu R1 + (1 - mu) R2`` at the dominant pentagon corner over
    product input distributions, using alternating projected-gradient ascent
    from ``restarts`` flat-Dirichlet initializations.  Every evaluated corner
    is achievable, so the convex hull of the collected rate pairs (closed
    under silencing either sender) is a certified inner bound regardless of
    optimizer quality.

    Deterministic for a fixed seed and restart count, independent of
    ``workers``; results are merged in (weight, restart) order.

    Args:
        n: The channel.
        restarts: Random initializations per weight (>= 1).
        seed: Base seed for the per-restart generators.
        workers: Worker processes across weights.
        mu_points: Number of weights on the scalarization grid.
    """
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    mus = np.linspace(0.0, 1.0, mu_points)
    if workers > 1:
        jobs = [(n, float(mu), seed, tag, restarts) for tag, mu in enumerate(mus)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            per_tag = list(pool.map(_region_task, jobs))
    else:
        ws = _Workspace(n)
        per_tag = [
            _optimize_tag(n, ws, float(mu), seed, tag, restarts)
            for tag, mu in enumerate(mus)
        ]

    witnesses = []
    for tag, results in enumerate(per_tag):
        for r, q, pent in results:
            d1, d2 = _corner_points(pent)
            witnesses.append(InnerPoint(d1[0], d1[1], q, "r1-priority", tag, r))
            witnesses.append(InnerPoint(d2[0], d2[1], q, "r2-priority", tag, r))
    chain = _boundary_chain([(w.r1, w.r2) for w in witnesses])
    return RegionBound(tuple(chain), "inner", tuple(witnesses))


def sum_capacity_lower_bound(
    n: Mac, restarts: int = 64, seed: int = 0
) -> tuple[float, ProductInput]:
    """Best total-rate point found by maximizing I(A,B;Z) over product inputs.

    Same optimizer as :func:`inner_bound` with the weight folded into the
    plain sum objective.  Returns the value in bits and the achieving input;
    any returned value is achievable, so it lower-bounds the sum capacity.
    """
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    ws = _Workspace(n)
    pa, pb = _dirichlet_inits(seed, 0, restarts, n.na, n.nb)
    pa, pb = _alternate(pa, pb, ws, (1.0, 0.0, 0.0, 1.0))
    best_val, best_q = -1.0, None
    for r in range(restarts):
        q = ProductInput(pa[r], pb[r])
        val = pentagon(n, q).sum_max
        if val > best_val:
            best_val, best_q = val, q
    return best_val, best_q


# ---------------------------------------------------------------------------
# linear-system and clause/variable games


@dataclasses.dataclass(frozen=True)
class LsgRates:
    """Achievable rate pair for a channel built from an m x n linear-system game.

    ``p_l`` is the losing probability of the coding strategy and ``f_d`` the
    total-variation defect of the question distribution conditioned on
    winning; both vanish for perfect strategies, giving
    ``(log2 m, log2 n)``.
    """

    m: int
    n: int
    p_l: float
    f_d: float
    r1: float
    r2: float

    def __post_init__(self):
        if self.r1 > math.log2(self.m) + 1e-12:
            raise ValueError("r1 exceeds log2(m)")
        if self.r2 > math.log2(self.n) + 1e-12:
            raise ValueError("r2 exceeds log2(n)")


def lsg_rates(m: int, n: int, p_l: float, f_d: float) -> LsgRates:
    """Evaluate the closed-form achievable rates of a linear-system game channel.

    ``R1 = (1-p_l) log2 m - (1-p_l)(f_d log2(nm-1) + h(f_d))
    - (p_l/2) log2(nm-1) - h(p_l)`` and symmetrically for ``R2`` with
    ``log2 n``.
    """
    if m < 2 or n < 2:
        raise ValueError("m and n must be at least 2")
    if not 0.0 <= p_l <= 1.0:
        raise ValueError(f"p_l must lie in [0, 1], got {p_l!r}")
    if not 0.0 <= f_d <= 1.0:
        raise ValueError(f"f_d must lie in [0, 1], got {f_d!r}")
    log_nm1 = math.log2(n * m - 1)
    defect = (1.0 - p_l) * (f_d * log_nm1 + binary_entropy(f_d))
    floor = (p_l / 2.0) * log_nm1 + binary_entropy(p_l)
    r1 = (1.0 - p_l) * math.log2(m) - defect - floor
    r2 = (1.0 - p_l) * math.log2(n) - defect - floor
    return LsgRates(m, n, p_l, f_d, r1, r2)


def hastad_game(clauses: Sequence[Sequence[int]], n_vars: int | None = None) -> Game:
    """Clause/variable agreement game for a 3-CNF formula, promise-free.

    Alice receives a clause index and answers with one of the 8 assignments
    to that clause's three variables (in clause order, first variable in the
    most significant bit).  Bob receives a variable index and answers a
    truth value.  On promised pairs (Bob's variable occurs in Alice's
    clause) they win iff Alice's assignment satisfies the clause and agrees
    with Bob's value; other pairs win automatically.

    Args:
        clauses: Sequences of exactly three signed, distinct 1-based variable
            indices; a negative literal means the negated variable.
        n_vars: Total variable count; defaults to the largest index used.
    """
    parsed = []
    for c in clauses:
        lits = tuple(int(l) for l in c)
        if len(lits) != 3:
            raise ValueError(f"clause {lits!r} must have exactly 3 literals")
        if any(l == 0 for l in lits):
            raise ValueError("literals are nonzero signed variable indices")
        if len({abs(l) for l in lits}) != 3:
            raise ValueError(f"clause {lits!r} repeats a variable")
        parsed.append(lits)
    if not parsed:
        raise ValueError("formula needs at least one clause")
    max_var = max(abs(l) for c in parsed for l in c)
    n = max_var if n_vars is None else int(n_vars)
    if n < max_var:
        raise ValueError(f"n_vars={n} but a clause mentions variable {max_var}")
    m = len(parsed)
    promise = np.zeros((m, n), dtype=bool)
    win = np.zeros((m, n, 8, 2), dtype=bool)
    for j, lits in enumerate(parsed):
        variables = [abs(l) - 1 for l in lits]
        promise[j, variables] = True
        for a in range(8):
            bits = ((a >> 2) & 1, (a >> 1) & 1, a & 1)
            if not any(bits[i] == (1 if lits[i] > 0 else 0) for i in range(3)):
                continue
            for pos, v in enumerate(variables):
                win[j, v, a, bits[pos]] = True
    return promise_free(PromisedGame(m, n, 8, 2, win, promise))


def linear_system_game(a_matrix, b_vector) -> Game:
    """Row/variable agreement game for a binary linear system, promise-free.

    Alice receives a row index ``i`` and answers an assignment to the
    variables of that row whose parity matches the right-hand side; Bob
    receives a variable index and answers a bit.  On promised pairs (the
    variable occurs in the row) they win iff the assignments agree; other
    pairs win automatically.  Alice's answers are indexed by enumerating the
    row's assignments in lexicographic order (lowest variable index in the
    most significant bit) and keeping the parity-valid ones; rows with fewer
    valid assignments than the widest row are padded with answers that lose
    on every promised pair.

    Args:
        a_matrix: Binary m x n coefficient matrix; every row must be nonzero.
        b_vector: Binary right-hand side of length m.
    """
    a = np.asarray(a_matrix, dtype=int) % 2
    b = np.asarray(b_vector, dtype=int) % 2
    if a.ndim != 2:
        raise ValueError("coefficient matrix must be two-dimensional")
    m, n = a.shape
    if b.shape != (m,):
        raise ValueError(f"right-hand side has shape {b.shape}, expected ({m},)")
    supports = []
    for i in range(m):
        sup = np.nonzero(a[i])[0]
        if len(sup) == 0:
            raise ValueError(f"row {i} of the system is zero")
        supports.append(sup)
    ny1 = max(2 ** (len(sup) - 1) for sup in supports)
    promise = np.zeros((m, n), dtype=bool)
    win = np.zeros((m, n, ny1, 2), dtype=bool)
    for i, sup in enumerate(supports):
        promise[i, sup] = True
        k = len(sup)
        ans = 0
        for code in range(2**k):
            bits = [(code >> (k - 1 - pos)) & 1 for pos in range(k)]
            if sum(bits) % 2 != b[i]:
                continue
            for pos, j in enumerate(sup):
                win[i, j, ans, bits[pos]] = True
            ans += 1
    return promise_free(PromisedGame(m, n, ny1, 2, win, promise))


# ---------------------------------------------------------------------------
# plot-ready data exports


def write_upper_bound_curve(path, curve: np.ndarray) -> None:
    """Write a sampled bound curve as ``d u`` rows with 6 decimal places."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("d u\n")
        for d, u in curve:
            fh.write(f"{d:.6f} {u:.6f}\n")


def write_region_dat(path, region: RegionBound) -> None:
    """Write a region boundary as ``r1 r2`` rows with 6 decimal places."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("r1 r2\n")
        for r1, r2 in region.vertices:
            fh.write(f"{r1:.6f} {r2:.6f}\n")
