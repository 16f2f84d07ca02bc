"""Twist-vector flows and moment-of-inertia-preserving descent.

Because every twist vector is tangent to the level sets of I and of the
center of mass, flows generated by fixed combinations of twists conserve
both (up to integrator error), and gradient descent projected on a twist
basis searches for central configurations at fixed size.  The size itself
is fixed afterwards by a single rescale enforcing U = M*I.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import (COINCIDENT_RTOL, PlanarConfig, PotentialParams,
                       center_of_mass, f_value, moment_of_inertia, potential_u)
from .twist import COLLINEAR_RTOL, TwistPair, canon_pair, twist_span_basis

# Backtracking line-search constants.
ETA0_FRACTION = 1e-2     # initial step length as a fraction of the diameter
ARMIJO_C = 1e-4
SHRINK = 0.5
MAX_BACKTRACKS = 40
COLLAPSE_RUN = 3         # consecutive rank-deficient iterations before flagging


@dataclass(frozen=True)
class FlowSpec:
    """A fixed linear combination of twist fields integrated with RK4."""

    terms: tuple[tuple[float, TwistPair], ...]
    dt: float
    steps: int
    method: str = "rk4"

    def __post_init__(self):
        if self.dt <= 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if self.steps < 1:
            raise ValueError(f"steps must be >= 1, got {self.steps}")
        if not any(c != 0.0 for c, _ in self.terms):
            raise ValueError("flow needs at least one nonzero coefficient")
        if self.method != "rk4":
            raise ValueError(f"unsupported integrator {self.method!r}")


def _field(pos: np.ndarray, m: np.ndarray, terms) -> np.ndarray:
    v = np.zeros_like(pos)
    for c, (i, j) in terms:
        dx = pos[2 * i] - pos[2 * j]
        dy = pos[2 * i + 1] - pos[2 * j + 1]
        v[2 * i] += c * m[j] * dy
        v[2 * i + 1] -= c * m[j] * dx
        v[2 * j] -= c * m[i] * dy
        v[2 * j + 1] += c * m[i] * dx
    return v


def _min_separation(pos: np.ndarray, n: int) -> tuple[float, float]:
    p = pos.reshape(n, 2)
    d = p[:, None, :] - p[None, :, :]
    r = np.hypot(d[..., 0], d[..., 1])
    iu = np.triu_indices(n, 1)
    return float(r[iu].min()), float(r.max())


def flow_fixed_combo(config: PlanarConfig, params: PotentialParams,
                     spec: FlowSpec) -> list[PlanarConfig]:
    """Integrate q' = sum c_k v_{pair_k}(q); aborts early on near-collision."""
    terms = tuple((float(c), canon_pair(config.n, p)) for c, p in spec.terms)
    m = config.masses
    n = config.n
    dt = spec.dt
    pos = config.positions.copy()
    traj = [config]
    for _ in range(spec.steps):
        k1 = _field(pos, m, terms)
        k2 = _field(pos + 0.5 * dt * k1, m, terms)
        k3 = _field(pos + 0.5 * dt * k2, m, terms)
        k4 = _field(pos + dt * k3, m, terms)
        nxt = pos + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        rmin, diam = _min_separation(nxt, n)
        if rmin <= COINCIDENT_RTOL * diam:
            break
        pos = nxt
        traj.append(PlanarConfig(pos.copy(), m))
    return traj


def rescale_to_cc_size(config: PlanarConfig, params: PotentialParams) -> PlanarConfig:
    """Scale about the center of mass so that U = M*I holds exactly.

    U scales as lam^(2-A) and M*I as lam^2, so lam = (U/(M*I))^(1/A).
    """
    params.require_f_domain()
    U = potential_u(config, params)
    MI = float(config.masses.sum()) * moment_of_inertia(config)
    lam = (U / MI) ** (1.0 / params.A)
    c = center_of_mass(config)
    pts = c + lam * (config.points - c)
    return PlanarConfig.from_points(pts, config.masses)


@dataclass(frozen=True)
class DescentReport:
    config: PlanarConfig
    iterations: int
    max_la_residual: float
    f_value: float
    converged: bool
    collinear_collapse: bool
    history: tuple = field(default=(), repr=False)


def _tables(pos: np.ndarray, n: int, A: float):
    p = pos.reshape(n, 2)
    d = p[:, None, :] - p[None, :, :]
    dx, dy = d[..., 0], d[..., 1]
    r = np.hypot(dx, dy)
    rs = r + np.eye(n)
    R = rs ** (-A)
    np.fill_diagonal(R, 0.0)
    return dx, dy, r, R


def _f_raw(pos: np.ndarray, m: np.ndarray, A: float) -> float:
    n = m.size
    p = pos.reshape(n, 2)
    M = m.sum()
    c = (m[:, None] * p).sum(axis=0) / M
    I = (m * ((p - c) ** 2).sum(axis=1)).sum()
    iu = np.triu_indices(n, 1)
    d = p[iu[0]] - p[iu[1]]
    r = np.hypot(d[:, 0], d[:, 1])
    U = (m[iu[0]] * m[iu[1]] * r ** (2.0 - A)).sum()
    return float(M * I / 2.0 + U / (A - 2.0))


def _grad_raw(pos: np.ndarray, m: np.ndarray, A: float) -> np.ndarray:
    n = m.size
    dx, dy, r, R = _tables(pos, n, A)
    S = R - 1.0
    np.fill_diagonal(S, 0.0)
    w = (m[:, None] * m[None, :]) * S
    g = np.empty_like(pos)
    g[0::2] = -(w * dx).sum(axis=1)
    g[1::2] = -(w * dy).sum(axis=1)
    return g


def _max_la_raw(pos: np.ndarray, m: np.ndarray, A: float) -> float:
    n = m.size
    dx, dy, r, R = _tables(pos, n, A)
    worst = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            lam = dx[i, j] * dy[i] - dx[i] * dy[i, j]
            worst = max(worst, abs(m[i] * m[j] * np.dot(m * (R[i] - R[j]), lam)))
    norm = float(m.sum()) ** 2 * float(r.max()) ** 2
    return worst / norm


def descend(config: PlanarConfig, params: PotentialParams, *,
            tol: float = 1e-10, max_iter: int = 50000,
            basis_selector=None, step_rule=None,
            collinearity_tol: float = COLLINEAR_RTOL,
            record: bool = False) -> DescentReport:
    """Projected gradient descent over a twist basis, at (nearly) fixed I.

    Each iteration re-selects an independent twist set V, forms the
    descent direction d = sum (grad f . u_k) u_k over the unit twists u_k,
    and takes an Armijo backtracking step along -d.  Terminates when the
    scale-normalized Laura-Andoyer residual drops below `tol`.  A run of
    rank-deficient twist spans is reported as a suspected collinear
    collapse, not an error.
    """
    params.require_f_domain()
    A = params.A
    m = config.masses.copy()
    n = config.n
    pos = config.positions.copy()
    select = basis_selector or (lambda cfg: twist_span_basis(cfg, collinearity_tol))

    history = []
    collapse = False
    degenerate_run = 0
    iterations = 0
    converged = False

    def effective_residual(p: np.ndarray) -> float:
        # The normalized residual is amplified by MI/U under the final
        # rescale to U = M*I, so converge on the post-rescale value too.
        resid = _max_la_raw(p, m, A)
        cfg = PlanarConfig(p.copy(), m)
        ratio = float(m.sum()) * moment_of_inertia(cfg) / potential_u(cfg, params)
        return resid, resid * max(1.0, ratio)

    for it in range(max_iter):
        resid, resid_cc = effective_residual(pos)
        fcur = _f_raw(pos, m, A)
        if record:
            history.append((it, pos.copy(), fcur, resid))
        if resid_cc < tol:
            converged = True
            break
        cfg = PlanarConfig(pos.copy(), m)
        basis, dim = select(cfg)
        if dim < 2 * n - 3:
            degenerate_run += 1
            if degenerate_run >= COLLAPSE_RUN:
                collapse = True
                break
        else:
            degenerate_run = 0

        g = _grad_raw(pos, m, A)
        d = np.zeros_like(pos)
        for pair in basis:
            i, j = pair
            v = np.zeros_like(pos)
            dxij = pos[2 * i] - pos[2 * j]
            dyij = pos[2 * i + 1] - pos[2 * j + 1]
            v[2 * i] = m[j] * dyij
            v[2 * i + 1] = -m[j] * dxij
            v[2 * j] = -m[i] * dyij
            v[2 * j + 1] = m[i] * dxij
            v /= np.linalg.norm(v)
            d += (g @ v) * v
        slope = float(g @ d)
        dn = float(np.linalg.norm(d))
        if dn == 0.0 or slope <= 0.0:
            break
        _, diam = _min_separation(pos, n)

        if step_rule is not None:
            eta = step_rule(it, pos, d, slope)
            cand = pos - eta * d
            accepted = True
        else:
            eta = ETA0_FRACTION * diam / dn
            accepted = False
            cand = pos
            for _ in range(MAX_BACKTRACKS):
                trial = pos - eta * d
                rmin, dia = _min_separation(trial, n)
                if rmin > COINCIDENT_RTOL * dia:
                    if _f_raw(trial, m, A) <= fcur - ARMIJO_C * eta * slope:
                        cand = trial
                        accepted = True
                        break
                eta *= SHRINK
            if not accepted:
                break
        pos = cand
        iterations = it + 1

    final = PlanarConfig(pos.copy(), m)
    resid = _max_la_raw(pos, m, A)
    converged = converged or resid < tol
    # Laura-Andoyer residuals vanish identically on collinear configurations,
    # so a rank-deficient final span is a collapse even when "converged".
    _, final_dim = select(final)
    collapse = collapse or final_dim < 2 * n - 3
    return DescentReport(final, iterations, resid, _f_raw(pos, m, A),
                         converged, collapse, tuple(history))
