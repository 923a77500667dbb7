"""Independent numerical equilibrium solver ("oracle" source).

The decision order is: the manufacturer commits to the buy-back menu, the
recycling retailer picks its recycling rates, and retail prices settle in a
Nash equilibrium between the two retailers.  The solver follows that order
directly instead of trusting any closed form:

* retailer 2's price response is the exact first-order condition of its
  concave quadratic profit;
* retailer 1's joint (p1, tau_H, tau_L) response is computed by profiling
  the recycling rates (each branch is a concave quadratic in tau, so the
  optimal tau is an explicit clip) and then maximizing the resulting
  piecewise-quadratic function of p1 exactly over its breakpoints and
  per-piece vertices ("exact" method) or by grid plus golden-section
  refinement ("grid_golden" method; both agree to solver tolerance);
* the two responses are iterated with damping to a fixed point;
* the leader stage (and the centralized chain problem of models I-II) is a
  dense grid scan with local window refinement, rejecting menus whose
  screening report is infeasible.

Grid evaluation is vectorized over all candidate menus at once; candidates
are ordered lexicographically and ties resolve to the first (smallest)
candidate, so results are deterministic and independent of any evaluation
schedule.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .profits import (
    chain_profit,
    manufacturer_profit,
    retailer1_profit,
    retailer2_profit,
    transfers_at,
    value_warnings,
)
from .screening import DEFAULT_FEASIBILITY_TOL, screening_check, type_payoff
from .types import (
    COMPETITIVE_MODELS,
    RECYCLING_RP_MODELS,
    ContractMenu,
    Diagnostics,
    DivergenceError,
    InfeasibleMenuError,
    ModelParams,
    PricePair,
    Profits,
    Solution,
    validate_model_id,
)

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0

SLACK_NAMES = ("ir_L", "ir_H", "ic_H", "ic_L")

def _first_argmax(score: np.ndarray) -> int:
    """Index of the best score; near-ties resolve to the first (and the
    candidate ordering is lexicographic), absorbing fixed-point noise."""
    best = float(np.max(score))
    cut = best - max(1e-10, 1e-11 * abs(best))
    return int(np.argmax(score >= cut))


@dataclass(frozen=True)
class SolveOptions:
    """Numerical controls for the oracle.

    Attributes:
        grid_points: points per decision-variable axis in each scan round.
        refine_rounds: local window refinements after the initial scan.
        damping: best-response step factor in (0, 1].
        tol: fixed-point convergence tolerance on decision variables.
        feas_tol: screening feasibility tolerance (slack >= -feas_tol).
        w_max: buy-back price upper bound; default 3*(c + c_d + c_r).
        p_max: retail price upper bound; default a*(1 + eps)/(1 - eps).
        constraint_mode: "reject_infeasible" or "penalty".
        penalty_weight: multiplier on constraint violations in penalty mode.
        max_iter: best-response iteration cap.
        p1_method: "exact" or "grid_golden" inner maximizer for retailer 1.
        p1_grid: grid resolution for the grid_golden method.
        start_prices: optional (p1, p2) iteration start.
    """

    grid_points: int = 48
    refine_rounds: int = 6
    damping: float = 0.5
    tol: float = 1e-12
    feas_tol: float = DEFAULT_FEASIBILITY_TOL
    w_max: float | None = None
    p_max: float | None = None
    constraint_mode: str = "reject_infeasible"
    penalty_weight: float = 1e4
    max_iter: int = 400
    p1_method: str = "exact"
    p1_grid: int = 96
    start_prices: tuple[float, float] | None = None
    transfer_on_deviation: str = "chosen_item"

    def __post_init__(self):
        if self.grid_points < 4:
            raise ValueError("grid_points must be at least 4")
        if not 0.0 < self.damping <= 1.0:
            raise ValueError("damping must lie in (0, 1]")
        if self.tol <= 0.0 or self.feas_tol <= 0.0:
            raise ValueError("tolerances must be positive")
        if self.constraint_mode not in ("reject_infeasible", "penalty"):
            raise ValueError(f"unknown constraint_mode {self.constraint_mode!r}")
        if self.p1_method not in ("exact", "grid_golden"):
            raise ValueError(f"unknown p1_method {self.p1_method!r}")
        if self.w_max is not None and self.w_max <= 0.0:
            raise ValueError("w_max must be positive when given")
        if self.p_max is not None and self.p_max <= 0.0:
            raise ValueError("p_max must be positive when given")

    def bounds(self, params: ModelParams) -> tuple[float, float]:
        """(w_max, p_max) with defaults resolved from the parameters."""
        w_max = self.w_max if self.w_max is not None else 3.0 * (params.c + params.c_d + params.c_r)
        p_max = self.p_max if self.p_max is not None else params.a * (1.0 + params.eps) / (1.0 - params.eps)
        return w_max, p_max


def retailer2_best_response(p1, params: ModelParams):
    """Retailer 2's profit-maximizing price given p1 (exact concave FOC)."""
    return (params.a + params.p_m + params.eps * p1) / 2.0


def _branch_value(q, m, beta, K):
    """max over tau in [0,1] of tau*(q*m + K) - beta*tau^2, and the argmax."""
    s = q * m + K
    tau = np.clip(s / (2.0 * beta), 0.0, 1.0)
    return tau * s - beta * tau * tau, tau


def _retailer1_value(params: ModelParams, model_id: str, w_H, w_L, base, q):
    """Retailer 1's expected profit at demand q with branch taus profiled out.

    ``base`` is a + eps*p2 (or a for models I-II), so p1 = base - q.
    Returns (value, tau_H, tau_L).
    """
    K = params.k if model_id in RECYCLING_RP_MODELS else 0.0
    v_H, tau_H = _branch_value(q, w_H - params.c, params.beta_H, K)
    v_L, tau_L = _branch_value(q, w_L - params.c, params.beta_L, K)
    value = (base - q - params.p_m) * q + params.weight_H * v_H + params.weight_L * v_L
    if model_id in RECYCLING_RP_MODELS:
        value = value - params.k * params.tau_0
    return value, tau_H, tau_L


_REGIMES = ("zero", "interior", "full")


def _br1_exact(params: ModelParams, model_id: str, w_H, w_L, base, p_max: float):
    """Exact retailer-1 best response over p1 in [0, p_max] (vectorized).

    The objective is piecewise quadratic in q = base - p1; the maximum is
    one of: the interval endpoints, a tau clipping breakpoint, or a vertex
    of one of the nine (H, L) clipping-regime combinations.
    """
    K = params.k if model_id in RECYCLING_RP_MODELS else 0.0
    wts = (params.weight_H, params.weight_L)
    ms = (np.asarray(w_H - params.c, dtype=float), np.asarray(w_L - params.c, dtype=float))
    betas = (params.beta_H, params.beta_L)
    base = np.asarray(base, dtype=float)
    q_hi = base + 0.0 * ms[0]
    # price floor 0 and the choke price: the solver never prices into
    # negative demand (evaluators still evaluate such points raw)
    q_lo = np.maximum(q_hi - p_max, 0.0)
    c0 = base - params.p_m

    cands = [q_lo, q_hi]
    for m, beta in zip(ms, betas):
        safe = np.where(m == 0.0, 1.0, m)
        cands.append(np.where(m == 0.0, q_lo, (0.0 - K) / safe))
        cands.append(np.where(m == 0.0, q_lo, (2.0 * beta - K) / safe))
    for reg_H in _REGIMES:
        for reg_L in _REGIMES:
            a_coef = c0 + 0.0 * q_lo
            b_coef = 2.0 + 0.0 * q_lo
            for (m, beta, w), reg in zip(zip(ms, betas, wts), (reg_H, reg_L)):
                if reg == "full":
                    a_coef = a_coef + w * m
                elif reg == "interior":
                    a_coef = a_coef + w * m * K / (2.0 * beta)
                    b_coef = b_coef - w * m * m / (2.0 * beta)
            safe_b = np.where(b_coef == 0.0, 1.0, b_coef)
            cands.append(np.where(b_coef == 0.0, q_lo, a_coef / safe_b))

    q_cand = np.clip(np.stack(cands, axis=0), q_lo, q_hi)
    val, _, _ = _retailer1_value(params, model_id, w_H, w_L, base, q_cand)
    pick = np.argmax(val, axis=0)
    q_best = np.take_along_axis(q_cand, pick[None, ...], axis=0)[0]
    value, tau_H, tau_L = _retailer1_value(params, model_id, w_H, w_L, base, q_best)
    p1 = base - q_best
    return p1, tau_H, tau_L, value


def _br1_grid_golden(params: ModelParams, model_id: str, w_H, w_L, base,
                     p_max: float, opts: SolveOptions):
    """Grid scan plus golden-section refinement on the p1 axis (vectorized)."""
    base = np.asarray(base, dtype=float)
    shape = np.broadcast_shapes(base.shape, np.shape(w_H), np.shape(w_L))
    p_top = np.broadcast_to(np.minimum(base, p_max), shape)  # choke price cap
    steps = np.linspace(0.0, 1.0, opts.p1_grid)

    def value_at(p1):
        v, _, _ = _retailer1_value(params, model_id, w_H, w_L, base, base - p1)
        return v

    grid = steps.reshape((-1,) + (1,) * len(shape)) * p_top
    vals = value_at(grid)
    best = np.argmax(vals, axis=0)
    cell = p_top / (opts.p1_grid - 1)
    lo = np.clip((best - 1) * cell, 0.0, p_top)
    hi = np.clip((best + 1) * cell, 0.0, p_top)

    width = max(float(np.max(2.0 * cell)), 1e-12)
    n_iter = max(1, int(math.ceil(math.log(max(opts.tol, 1e-13) / width)
                                  / math.log(_INV_PHI))))
    x1 = hi - _INV_PHI * (hi - lo)
    x2 = lo + _INV_PHI * (hi - lo)
    f1 = value_at(x1)
    f2 = value_at(x2)
    for _ in range(n_iter):
        move_right = f1 < f2  # the maximum lies in the right sub-bracket
        lo = np.where(move_right, x1, lo)
        hi = np.where(move_right, hi, x2)
        span = hi - lo
        x1_new = np.where(move_right, x2, hi - _INV_PHI * span)
        x2_new = np.where(move_right, lo + _INV_PHI * span, x1)
        f_probe = value_at(np.where(move_right, x2_new, x1_new))
        f1_new = np.where(move_right, f2, f_probe)
        f2_new = np.where(move_right, f_probe, f1)
        x1, x2, f1, f2 = x1_new, x2_new, f1_new, f2_new
    p1 = (lo + hi) / 2.0
    value, tau_H, tau_L = _retailer1_value(params, model_id, w_H, w_L, base, base - p1)
    return p1, tau_H, tau_L, value


def _br1(params, model_id, w_H, w_L, base, p_max, opts: SolveOptions):
    if opts.p1_method == "exact":
        return _br1_exact(params, model_id, w_H, w_L, base, p_max)
    return _br1_grid_golden(params, model_id, w_H, w_L, base, p_max, opts)


@dataclass(frozen=True)
class FollowerEquilibrium:
    """Retailer-stage outcome for a fixed menu."""

    prices: PricePair
    tau_H: float
    tau_L: float
    iterations: int
    gap: float
    trace: tuple[float, ...] = ()


def _follower_arrays(params: ModelParams, model_id: str, w_H, w_L,
                     opts: SolveOptions, start: tuple[float, float] | None = None):
    """Damped best-response iteration to the retail fixed point (vectorized).

    Returns (p1, p2, tau_H, tau_L, iterations, trace, converged).  For
    models I-II the stage is retailer 1's single best response and no
    iteration happens.  A lane that has not settled within ``max_iter``
    (possible where retailer 1's response jumps between two profit peaks,
    so the price subgame has no pure fixed point) is flagged False in
    ``converged`` instead of raising; callers decide how to treat it.
    """
    w_max, p_max = opts.bounds(params)
    if model_id not in COMPETITIVE_MODELS:
        base = params.a + 0.0 * np.asarray(w_H, dtype=float)
        p1, tau_H, tau_L, _ = _br1(params, model_id, w_H, w_L, base, p_max, opts)
        return p1, None, tau_H, tau_L, 1, (), np.ones_like(p1, dtype=bool)

    shape = np.broadcast_shapes(np.shape(w_H), np.shape(w_L))
    if start is None:
        start = opts.start_prices
    if start is not None:
        p1 = np.full(shape, float(start[0]))
        p2 = np.full(shape, float(start[1]))
    else:
        p1 = np.full(shape, (params.a + params.p_m) / 2.0)
        p2 = np.full(shape, (params.a + params.p_m) / 2.0)

    trace: list[float] = []
    d = opts.damping
    iterations = 0
    lane_gap = np.full(shape, np.inf)
    for iterations in range(1, opts.max_iter + 1):
        base = params.a + params.eps * p2
        p1_new, _, _, _ = _br1(params, model_id, w_H, w_L, base, p_max, opts)
        p1_next = p1 + d * (p1_new - p1)
        p2_new = np.clip(retailer2_best_response(p1_next, params), 0.0, p_max)
        p2_next = p2 + d * (p2_new - p2)
        lane_gap = np.abs(p1_next - p1) + np.abs(p2_next - p2)
        p1, p2 = p1_next, p2_next
        trace.append(float(np.max(lane_gap)))
        if trace[-1] < opts.tol:
            break

    converged = lane_gap < max(opts.tol, 1e-9) * 10.0
    # final polish: exact responses to the converged opponents
    base = params.a + params.eps * p2
    p1, tau_H, tau_L, _ = _br1(params, model_id, w_H, w_L, base, p_max, opts)
    p2 = np.clip(retailer2_best_response(p1, params), 0.0, p_max)
    return p1, p2, tau_H, tau_L, iterations, tuple(trace), converged


def follower_equilibrium(menu: ContractMenu, params: ModelParams, model_id: str,
                         opts: SolveOptions | None = None) -> FollowerEquilibrium:
    """Retail-stage equilibrium for a fixed buy-back menu.

    The menu's recycling rates are ignored on input: retailer 1 re-derives
    its optimal tau per type (interior value q1*(w - c)/(2*beta), shifted by
    the unit recycling reward in model V, projected to [0, 1]).
    """
    validate_model_id(model_id)
    opts = opts or SolveOptions()
    w_H = np.asarray([menu.w_H], dtype=float)
    w_L = np.asarray([menu.w_L], dtype=float)
    p1, p2, tau_H, tau_L, iterations, trace, converged = _follower_arrays(
        params, model_id, w_H, w_L, opts)
    if not bool(converged[0]):
        raise DivergenceError(
            f"retail best-response iteration did not settle within "
            f"{opts.max_iter} iterations (last gap {trace[-1]:.3g}); the price "
            f"subgame may have no pure equilibrium for this menu",
            trace=trace,
        )
    gap = trace[-1] if trace else 0.0
    return FollowerEquilibrium(
        prices=PricePair(p1=float(p1[0]), p2=None if p2 is None else float(p2[0])),
        tau_H=float(tau_H[0]), tau_L=float(tau_L[0]),
        iterations=iterations, gap=float(gap), trace=trace,
    )


def _slack_arrays(params: ModelParams, model_id: str, menu: ContractMenu,
                  prices: PricePair, transfer_on_deviation: str):
    """The four screening slacks, broadcasting over array-valued menus."""
    def pay(t, item):
        return type_payoff(t, menu, params, prices, model_id, item,
                           transfer_on_deviation=transfer_on_deviation)

    own_H, own_L = pay("H", "H"), pay("L", "L")
    return {
        "ir_L": own_L - params.pi_R0,
        "ir_H": own_H - params.pi_R0,
        "ic_H": own_H - pay("H", "L"),
        "ic_L": own_L - pay("L", "H"),
    }


def _assemble(model_id: str, params: ModelParams, menu: ContractMenu,
              prices: PricePair, opts: SolveOptions,
              stationarity: dict[str, float] | None,
              notes: tuple[str, ...]) -> Solution:
    report = screening_check(menu, params, prices, model_id, tol=opts.feas_tol,
                             transfer_on_deviation=opts.transfer_on_deviation)
    warnings = value_warnings(model_id, params, menu, prices)
    profits = Profits(
        manufacturer=manufacturer_profit(model_id, params, menu, prices),
        retailer1=retailer1_profit(model_id, params, menu, prices),
        retailer2=(retailer2_profit(model_id, params, prices)
                   if model_id in COMPETITIVE_MODELS else None),
        chain=chain_profit(model_id, params, menu, prices),
    )
    diag = Diagnostics(feasible=report.feasible, in_range=not warnings,
                       warnings=warnings, stationarity=stationarity, notes=notes)
    return Solution(model_id=model_id, menu=menu, prices=prices, profits=profits,
                    transfers=transfers_at(model_id, params, menu, prices),
                    slacks=report, diagnostics=diag, provenance="oracle")


def _report_infeasible(model_id: str, slacks: dict[str, np.ndarray]) -> InfeasibleMenuError:
    worst = np.stack([slacks[n] for n in SLACK_NAMES], axis=0)
    best_cell = int(np.argmax(np.min(worst, axis=0)))
    cell_slacks = {n: float(slacks[n].reshape(-1)[best_cell]) for n in SLACK_NAMES}
    name = min(cell_slacks, key=lambda n: cell_slacks[n])
    return InfeasibleMenuError(model_id, name, -cell_slacks[name])


def leader_optimize(model_id: str, params: ModelParams,
                    opts: SolveOptions | None = None) -> Solution:
    """Manufacturer-stage optimum for the decentralized models III-V.

    Scans (w_H, w_L) on a grid with local refinement; every candidate embeds
    the retail fixed point, and menus whose screening report is infeasible
    are rejected (or penalized, per options).  Ties resolve to the
    lexicographically smallest (w_H, w_L).
    """
    validate_model_id(model_id)
    if model_id not in COMPETITIVE_MODELS:
        raise ValueError(f"leader_optimize applies to models III-V, not {model_id}")
    opts = opts or SolveOptions()
    w_max, _ = opts.bounds(params)
    n = opts.grid_points

    lo_H = lo_L = 0.0
    hi_H = hi_L = w_max
    best = None
    start = None
    for _ in range(opts.refine_rounds + 1):
        grid_H = np.linspace(lo_H, hi_H, n)
        grid_L = np.linspace(lo_L, hi_L, n)
        mesh_H, mesh_L = np.meshgrid(grid_H, grid_L, indexing="ij")
        w_H = mesh_H.reshape(-1)
        w_L = mesh_L.reshape(-1)
        p1, p2, tau_H, tau_L, _, _, converged = _follower_arrays(
            params, model_id, w_H, w_L, opts, start)
        menu = ContractMenu(w_H=w_H, w_L=w_L, tau_H=tau_H, tau_L=tau_L)
        prices = PricePair(p1=p1, p2=p2)
        objective = manufacturer_profit(model_id, params, menu, prices)
        slacks = _slack_arrays(params, model_id, menu, prices, opts.transfer_on_deviation)
        violation = sum(np.maximum(0.0, -(s + opts.feas_tol)) for s in slacks.values())
        q2 = params.a - p2 + params.eps * p1
        # menus are candidates only if their retail stage settles and no
        # demand goes negative; the solver never optimizes into either
        supported = (q2 >= 0.0) & converged
        feasible = (violation == 0.0) & supported
        if opts.constraint_mode == "reject_infeasible":
            score = np.where(feasible, objective, -np.inf)
            if not np.any(feasible):
                if not np.any(converged):
                    raise DivergenceError(
                        f"no candidate menu's retail stage settled within "
                        f"{opts.max_iter} iterations")
                raise _report_infeasible(model_id, slacks)
        else:
            score = np.where(supported, objective, -np.inf) \
                - opts.penalty_weight * violation
        idx = _first_argmax(score)
        best = (float(w_H[idx]), float(w_L[idx]))
        start = (float(p1[idx]), float(p2[idx]))
        cell_H = (hi_H - lo_H) / (n - 1)
        cell_L = (hi_L - lo_L) / (n - 1)
        lo_H = max(0.0, best[0] - 2.0 * cell_H)
        hi_H = min(w_max, best[0] + 2.0 * cell_H)
        lo_L = max(0.0, best[1] - 2.0 * cell_L)
        hi_L = min(w_max, best[1] + 2.0 * cell_L)

    assert best is not None
    eq = follower_equilibrium(ContractMenu(best[0], best[1], 0.0, 0.0),
                              params, model_id, opts)
    menu = ContractMenu(w_H=best[0], w_L=best[1], tau_H=eq.tau_H, tau_L=eq.tau_L)
    stat = stationarity_residuals(model_id, params, menu, eq.prices, opts)
    return _assemble(model_id, params, menu, eq.prices, opts, stat,
                     notes=(f"leader grid {n} pts, {opts.refine_rounds} refinements",))


def _w_interval(q, tau, c: float, w_max: float):
    """Range of x = q*tau*(w - c) as w spans [0, w_max]."""
    at0 = q * tau * (0.0 - c)
    at1 = q * tau * (w_max - c)
    return np.minimum(at0, at1), np.maximum(at0, at1)


def _centralized_feasible(params: ModelParams, q, p1, tau_H, tau_L, w_max: float):
    """Does some (w_H, w_L) in [0, w_max]^2 make the menu screen-feasible?"""
    m_margin = q * (p1 - params.p_m)
    r_H = params.pi_R0 - m_margin + params.beta_H * tau_H ** 2
    r_L = params.pi_R0 - m_margin + params.beta_L * tau_L ** 2
    lo_H, hi_H = _w_interval(q, tau_H, params.c, w_max)
    lo_L, hi_L = _w_interval(q, tau_L, params.c, w_max)
    delta = tau_H ** 2 - tau_L ** 2
    d_lo = params.beta_H * delta
    d_hi = params.beta_L * delta
    x_H_lo = np.maximum(lo_H, r_H)
    x_L_lo = np.maximum(lo_L, r_L)
    return ((d_lo <= d_hi)
            & (x_H_lo <= hi_H) & (x_L_lo <= hi_L)
            & (x_H_lo - hi_L <= d_hi) & (hi_H - x_L_lo >= d_lo))


def _reconstruct_menu_prices(model_id: str, params: ModelParams, p1: float,
                             tau_H: float, tau_L: float, opts: SolveOptions) -> ContractMenu:
    """Minimal (w_H, w_L) implementing (tau_H, tau_L) at price p1.

    Chain profit does not depend on the buy-back prices, so they are set to
    the smallest values that satisfy all four screening constraints; the
    binding pattern that emerges is the usual one (a participation
    constraint plus the other type's incentive constraint).
    """
    w_max, _ = opts.bounds(params)
    q = params.a - p1
    m_margin = q * (p1 - params.p_m)
    r = {"H": params.pi_R0 - m_margin + params.beta_H * tau_H ** 2,
         "L": params.pi_R0 - m_margin + params.beta_L * tau_L ** 2}
    delta = tau_H ** 2 - tau_L ** 2
    d_lo, d_hi = params.beta_H * delta, params.beta_L * delta
    qt = {"H": q * tau_H, "L": q * tau_L}
    x0 = {t: qt[t] * (0.0 - params.c) for t in ("H", "L")}

    # smallest feasible x_H, then smallest feasible x_L given it
    x_H = max(x0["H"], r["H"], max(x0["L"], r["L"]) + d_lo)
    x_L = max(x0["L"], r["L"], x_H - d_hi)

    def to_w(t: str, x: float) -> float:
        if qt[t] == 0.0:
            return 0.0
        return min(max((x / qt[t]) + params.c, 0.0), w_max)

    menu = ContractMenu(w_H=to_w("H", x_H), w_L=to_w("L", x_L),
                        tau_H=tau_H, tau_L=tau_L)
    report = screening_check(menu, params, PricePair(p1=p1), model_id,
                             tol=opts.feas_tol,
                             transfer_on_deviation=opts.transfer_on_deviation)
    if not report.feasible:
        name, slack = report.most_violated()
        raise InfeasibleMenuError(model_id, name, -slack)
    return menu


def centralized_optimize(model_id: str, params: ModelParams,
                         opts: SolveOptions | None = None) -> Solution:
    """Chain-profit optimum for the centralized models I-II.

    Maximizes total chain profit over (p1, tau_H, tau_L) on a refined grid,
    keeping only cells for which some buy-back pair in [0, w_max]^2
    satisfies the screening constraints, then reconstructs the minimal such
    pair at the optimum.
    """
    validate_model_id(model_id)
    if model_id in COMPETITIVE_MODELS:
        raise ValueError(f"centralized_optimize applies to models I-II, not {model_id}")
    opts = opts or SolveOptions()
    w_max, p_max = opts.bounds(params)
    n = opts.grid_points

    windows = [(0.0, p_max), (0.0, 1.0), (0.0, 1.0)]
    best = None
    for _ in range(opts.refine_rounds + 1):
        axes = [np.linspace(lo, hi, n) for lo, hi in windows]
        p1, tau_H, tau_L = (m.reshape(-1) for m in np.meshgrid(*axes, indexing="ij"))
        q = params.a - p1
        menu = ContractMenu(w_H=0.0 * tau_H, w_L=0.0 * tau_L, tau_H=tau_H, tau_L=tau_L)
        objective = chain_profit(model_id, params, menu, PricePair(p1=p1, p2=None))
        feasible = _centralized_feasible(params, q, p1, tau_H, tau_L, w_max) & (q >= 0.0)
        if opts.constraint_mode == "reject_infeasible":
            score = np.where(feasible, objective, -np.inf)
            if not np.any(feasible):
                raise InfeasibleMenuError(model_id, "ir_L",
                                          float(np.min(params.pi_R0 - q * (p1 - params.p_m))))
        else:
            score = np.where(feasible, objective, objective - opts.penalty_weight)
        idx = _first_argmax(score)
        best = (float(p1[idx]), float(tau_H[idx]), float(tau_L[idx]))
        new_windows = []
        for (lo, hi), center, cap in zip(windows, best, (p_max, 1.0, 1.0)):
            cell = (hi - lo) / (n - 1)
            new_windows.append((max(0.0, center - 2.0 * cell), min(cap, center + 2.0 * cell)))
        windows = new_windows

    assert best is not None
    p1_star, tau_H_star, tau_L_star = best
    menu = _reconstruct_menu_prices(model_id, params, p1_star, tau_H_star,
                                    tau_L_star, opts)
    prices = PricePair(p1=p1_star, p2=None)
    stat = stationarity_residuals(model_id, params, menu, prices, opts)
    return _assemble(model_id, params, menu, prices, opts, stat,
                     notes=(f"chain grid {n} pts, {opts.refine_rounds} refinements",))


def solve_oracle(model_id: str, params: ModelParams,
                 opts: SolveOptions | None = None) -> Solution:
    """Numerical equilibrium for any model (dispatching on its structure)."""
    validate_model_id(model_id)
    if model_id in COMPETITIVE_MODELS:
        return leader_optimize(model_id, params, opts)
    return centralized_optimize(model_id, params, opts)


def _leader_objective_at(model_id: str, params: ModelParams, w_H: float, w_L: float,
                         opts: SolveOptions) -> tuple[float, bool]:
    eq = follower_equilibrium(ContractMenu(w_H, w_L, 0.0, 0.0), params, model_id, opts)
    menu = ContractMenu(w_H=w_H, w_L=w_L, tau_H=eq.tau_H, tau_L=eq.tau_L)
    obj = manufacturer_profit(model_id, params, menu, eq.prices)
    report = screening_check(menu, params, eq.prices, model_id, tol=opts.feas_tol,
                             transfer_on_deviation=opts.transfer_on_deviation)
    return float(obj), report.feasible


def stationarity_residuals(model_id: str, params: ModelParams, menu: ContractMenu,
                           prices: PricePair, opts: SolveOptions,
                           step: float = 1e-5) -> dict[str, float]:
    """Scaled projected-gradient residuals of every optimized stage.

    For each stage objective and each coordinate, probes +-step inside the
    box (probes that leave the feasible set are discarded) and records the
    best improvement rate; at a true constrained optimum every entry is ~0.
    Residuals are scaled by max(1, |objective|).
    """
    res: dict[str, float] = {}

    if model_id in COMPETITIVE_MODELS:
        w_max, p_max = opts.bounds(params)
        f0, _ = _leader_objective_at(model_id, params, menu.w_H, menu.w_L, opts)
        scale = max(1.0, abs(f0))
        for name, w0, other in (("leader_w_H", menu.w_H, menu.w_L),
                                ("leader_w_L", menu.w_L, menu.w_H)):
            gain = 0.0
            for sgn in (-1.0, 1.0):
                w_probe = w0 + sgn * step
                if not 0.0 <= w_probe <= w_max:
                    continue
                if name == "leader_w_H":
                    f_probe, ok = _leader_objective_at(model_id, params, w_probe, other, opts)
                else:
                    f_probe, ok = _leader_objective_at(model_id, params, other, w_probe, opts)
                if ok:
                    gain = max(gain, (f_probe - f0) / step)
            res[name] = gain / scale

        r1_0 = retailer1_profit(model_id, params, menu, prices)
        scale1 = max(1.0, abs(r1_0))
        gain = 0.0
        for sgn in (-1.0, 1.0):
            p_probe = prices.p1 + sgn * step
            if not 0.0 <= p_probe <= p_max:
                continue
            probe_prices = PricePair(p1=p_probe, p2=prices.p2)
            tau = _follower_taus(params, model_id, menu, probe_prices)
            probe_menu = ContractMenu(menu.w_H, menu.w_L, tau[0], tau[1])
            gain = max(gain, (retailer1_profit(model_id, params, probe_menu, probe_prices) - r1_0) / step)
        res["retailer1_p1"] = gain / scale1

        r2_0 = retailer2_profit(model_id, params, prices)
        scale2 = max(1.0, abs(r2_0))
        gain = 0.0
        for sgn in (-1.0, 1.0):
            p_probe = prices.p2 + sgn * step
            if not 0.0 <= p_probe <= p_max:
                continue
            gain = max(gain, (retailer2_profit(model_id, params,
                                               PricePair(prices.p1, p_probe)) - r2_0) / step)
        res["retailer2_p2"] = gain / scale2
        return res

    # centralized: chain objective over (p1, tau_H, tau_L)
    w_max, p_max = opts.bounds(params)
    f0 = float(chain_profit(model_id, params, menu, prices))
    scale = max(1.0, abs(f0))
    coords = (("chain_p1", prices.p1, (0.0, p_max)),
              ("chain_tau_H", menu.tau_H, (0.0, 1.0)),
              ("chain_tau_L", menu.tau_L, (0.0, 1.0)))
    for name, x0, (lo, hi) in coords:
        gain = 0.0
        for sgn in (-1.0, 1.0):
            x_probe = x0 + sgn * step
            if not lo <= x_probe <= hi:
                continue
            p1_p = x_probe if name == "chain_p1" else prices.p1
            tau_H_p = x_probe if name == "chain_tau_H" else menu.tau_H
            tau_L_p = x_probe if name == "chain_tau_L" else menu.tau_L
            q_p = params.a - p1_p
            ok = q_p >= 0.0 and bool(
                _centralized_feasible(params, np.asarray(q_p), np.asarray(p1_p),
                                      np.asarray(tau_H_p), np.asarray(tau_L_p), w_max))
            if not ok:
                continue
            probe_menu = ContractMenu(0.0, 0.0, tau_H_p, tau_L_p)
            f_probe = float(chain_profit(model_id, params, probe_menu, PricePair(p1=p1_p)))
            gain = max(gain, (f_probe - f0) / step)
        res[name] = gain / scale
    return res


def _follower_taus(params: ModelParams, model_id: str, menu: ContractMenu,
                   prices: PricePair) -> tuple[float, float]:
    """Retailer 1's optimal branch taus at given prices (interior FOC, clipped)."""
    from .profits import demand

    q1, _, _ = demand(params, prices, model_id)
    K = params.k if model_id in RECYCLING_RP_MODELS else 0.0
    tau_H = min(max((q1 * (menu.w_H - params.c) + K) / (2.0 * params.beta_H), 0.0), 1.0)
    tau_L = min(max((q1 * (menu.w_L - params.c) + K) / (2.0 * params.beta_L), 0.0), 1.0)
    return tau_H, tau_L


def nash_deviation_gains(model_id: str, params: ModelParams, solution: Solution,
                         opts: SolveOptions | None = None, n: int = 100,
                         bracket: float = 0.10) -> dict[str, float]:
    """Max profit gain from unilateral price deviations around a solution.

    Each retailer's price is perturbed over a +-bracket range (n points,
    recycling rates held at the solution); at an equilibrium no deviation
    should gain more than solver tolerance.  For the centralized models the
    optimized stage objective is the chain profit, probed in p1.
    """
    opts = opts or SolveOptions()
    _, p_max = opts.bounds(params)
    gains: dict[str, float] = {}

    def dev_grid(x0: float) -> np.ndarray:
        half = bracket * max(abs(x0), 1.0)
        return np.clip(np.linspace(x0 - half, x0 + half, n), 0.0, p_max)

    menu, prices = solution.menu, solution.prices
    if model_id in COMPETITIVE_MODELS:
        p1_dev = dev_grid(prices.p1)
        base1 = retailer1_profit(model_id, params, menu, prices)
        dev_vals = retailer1_profit(model_id, params, menu,
                                    PricePair(p1=p1_dev, p2=prices.p2))
        gains["retailer1"] = float(np.max(dev_vals) - base1)

        p2_dev = dev_grid(prices.p2)
        base2 = retailer2_profit(model_id, params, prices)
        dev_vals2 = retailer2_profit(model_id, params, PricePair(p1=prices.p1, p2=p2_dev))
        gains["retailer2"] = float(np.max(dev_vals2) - base2)
    else:
        p1_dev = dev_grid(prices.p1)
        base = chain_profit(model_id, params, menu, prices)
        dev_vals = chain_profit(model_id, params, menu, PricePair(p1=p1_dev))
        gains["chain_p1"] = float(np.max(dev_vals) - base)
    return gains


@dataclass(frozen=True)
class CrossCheckVariable:
    name: str
    closed_form: float | None
    status: str
    oracle: float | None
    abs_dev: float | None
    rel_dev: float | None


@dataclass(frozen=True)
class CrossCheckReport:
    """Side-by-side closed-form vs oracle values; agreement is reported,
    never asserted (the transcribed formulas carry known inconsistencies)."""

    model_id: str
    family: str
    variables: tuple[CrossCheckVariable, ...]
    notes: tuple[str, ...] = ()

    def by_name(self) -> dict[str, CrossCheckVariable]:
        return {v.name: v for v in self.variables}


def cross_check(model_id: str, params: ModelParams,
                opts: SolveOptions | None = None,
                prices: PricePair | None = None,
                family: str = "harmonized") -> CrossCheckReport:
    """Run both solution sources and tabulate per-variable deviations."""
    from .closed_form import CLOSED_FORM_VARIABLES, decision_table, solve_closed_form
    from .types import SingularExpressionError

    opts = opts or SolveOptions()
    oracle_sol = solve_oracle(model_id, params, opts)
    table = decision_table(model_id, params, prices, family)
    oracle_vals = oracle_sol.decision_values()

    rows: list[CrossCheckVariable] = []
    notes: list[str] = [f"closed-form family: {family}"]
    for name in CLOSED_FORM_VARIABLES[model_id]:
        cf = table[name]
        ora = oracle_vals.get(name)
        if isinstance(cf, str):
            rows.append(CrossCheckVariable(name, None, cf, ora, None, None))
        else:
            dev = None if ora is None else abs(cf - ora)
            rel = None if dev is None else dev / max(1.0, abs(ora))
            rows.append(CrossCheckVariable(name, cf, "ok", ora, dev, rel))
    if model_id not in COMPETITIVE_MODELS:
        p1_eval = prices.p1 if prices is not None else None
        rows.append(CrossCheckVariable("p1", p1_eval, "evaluation-point",
                                       oracle_vals["p1"], None, None))

    try:
        cf_sol = solve_closed_form(model_id, params, prices, family, tol=opts.feas_tol,
                                   transfer_on_deviation=opts.transfer_on_deviation)
        profit_pairs = (("profit_manufacturer", cf_sol.profits.manufacturer,
                         oracle_sol.profits.manufacturer),
                        ("profit_retailer1", cf_sol.profits.retailer1,
                         oracle_sol.profits.retailer1),
                        ("profit_chain", cf_sol.profits.chain, oracle_sol.profits.chain))
        for name, cf_v, or_v in profit_pairs:
            dev = abs(cf_v - or_v)
            rows.append(CrossCheckVariable(name, cf_v, "ok", or_v, dev,
                                           dev / max(1.0, abs(or_v))))
        if not cf_sol.diagnostics.in_range:
            notes.append("closed-form solution out of range: "
                         + "; ".join(cf_sol.diagnostics.warnings))
    except SingularExpressionError as err:
        notes.append(f"closed-form profits unavailable: singular {err.expression}")

    return CrossCheckReport(model_id=model_id, family=family,
                            variables=tuple(rows), notes=tuple(notes))
