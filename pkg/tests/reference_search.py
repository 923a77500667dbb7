"""Independent exhaustive-search baselines used as test oracles.

These deliberately avoid the solver's adaptive machinery: plain dense grids
with no refinement, no exact first-order conditions on the scanned axes and
first-index argmax.  They are slow and only used to validate the package
solvers on small problems.
"""

from __future__ import annotations

import numpy as np

from rscgame.oracle import SolveOptions, _follower_arrays, _slack_arrays
from rscgame.profits import chain_profit, manufacturer_profit
from rscgame.types import ContractMenu, ModelParams, PricePair


def brute_force_centralized(model_id: str, params: ModelParams, resolution: int,
                            opts: SolveOptions) -> dict:
    """Dense (p1, tau) scan of the chain problem with a pooled menu.

    Both types get the same recycling rate (always incentive-compatible), so
    the scan is 2-D; feasibility requires some w in [0, w_max] to cover both
    participation constraints.  Suitable for the single-type case where the
    pooled menu is optimal.
    """
    w_max, p_max = opts.bounds(params)
    p1 = np.linspace(0.0, min(p_max, params.a), resolution)[:, None]
    tau = np.linspace(0.0, 1.0, resolution)[None, :]
    q = params.a - p1

    menu = ContractMenu(w_H=0.0 * tau, w_L=0.0 * tau, tau_H=tau, tau_L=tau)
    objective = chain_profit(model_id, params, menu, PricePair(p1=p1 + 0.0 * tau))

    # feasibility: x = q*tau*(w - c) must reach r_t for both types
    margin = q * (p1 - params.p_m)
    need_H = params.pi_R0 - margin + params.beta_H * tau ** 2
    need_L = params.pi_R0 - margin + params.beta_L * tau ** 2
    reach = np.maximum(q * tau * (0.0 - params.c), q * tau * (w_max - params.c))
    zero_reachable = q * tau * (0.0 - params.c) <= 0.0  # w = c hits x = 0
    feasible = (np.maximum(need_H, need_L) <= reach) | \
        ((np.maximum(need_H, need_L) <= 0.0) & zero_reachable)

    score = np.where(feasible, objective, -np.inf)
    flat = int(np.argmax(score))
    i, j = divmod(flat, resolution)
    neighbors = []
    for di, dj in ((-1, 0), (1, 0), (0, -1), (0, 1)):
        ii, jj = i + di, j + dj
        if 0 <= ii < resolution and 0 <= jj < resolution and np.isfinite(score[ii, jj]):
            neighbors.append(abs(float(score[ii, jj]) - float(score[i, j])))
    return {
        "p1": float(p1[i, 0]),
        "tau": float(tau[0, j]),
        "objective": float(score[i, j]),
        "cell_slack": max(neighbors) if neighbors else 0.0,
    }


def brute_force_leader(model_id: str, params: ModelParams, resolution: int,
                       opts: SolveOptions, chunk: int = 20000) -> dict:
    """Exhaustive (w_H, w_L) scan with the retail stage nested per cell."""
    w_max, _ = opts.bounds(params)
    axis = np.linspace(0.0, w_max, resolution)
    mesh_H, mesh_L = np.meshgrid(axis, axis, indexing="ij")
    w_H_all = mesh_H.reshape(-1)
    w_L_all = mesh_L.reshape(-1)

    scores = np.full(w_H_all.size, -np.inf)
    for lo in range(0, w_H_all.size, chunk):
        sl = slice(lo, min(lo + chunk, w_H_all.size))
        w_H, w_L = w_H_all[sl], w_L_all[sl]
        p1, p2, tau_H, tau_L, _, _, converged = _follower_arrays(
            params, model_id, w_H, w_L, opts)
        menu = ContractMenu(w_H=w_H, w_L=w_L, tau_H=tau_H, tau_L=tau_L)
        prices = PricePair(p1=p1, p2=p2)
        objective = manufacturer_profit(model_id, params, menu, prices)
        slacks = _slack_arrays(params, model_id, menu, prices,
                               opts.transfer_on_deviation)
        ok = converged & (params.a - p2 + params.eps * p1 >= 0.0)
        for s in slacks.values():
            ok &= s >= -opts.feas_tol
        scores[sl] = np.where(ok, objective, -np.inf)

    best_score = float(np.max(scores))
    assert np.isfinite(best_score)
    cut = best_score - max(1e-10, 1e-11 * abs(best_score))
    flat = int(np.argmax(scores >= cut))  # first cell on the optimal plateau
    i, j = divmod(flat, resolution)
    p1, p2, tau_H, tau_L, _, _, _ = _follower_arrays(
        params, model_id, w_H_all[flat:flat + 1], w_L_all[flat:flat + 1], opts)
    neighbors = []
    for di, dj in ((-1, 0), (1, 0), (0, -1), (0, 1)):
        ii, jj = i + di, j + dj
        if 0 <= ii < resolution and 0 <= jj < resolution:
            val = scores[ii * resolution + jj]
            if np.isfinite(val):
                neighbors.append(abs(float(val) - best_score))
    return {
        "w_H": float(w_H_all[flat]), "w_L": float(w_L_all[flat]),
        "tau_H": float(tau_H[0]), "tau_L": float(tau_L[0]),
        "p1": float(p1[0]), "p2": float(p2[0]),
        "objective": best_score,
        "cell_slack": max(neighbors) if neighbors else 0.0,
    }
