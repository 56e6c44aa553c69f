"""Busemann volume factor, distortion, and S-curvature along geodesics.

sigma(x) compares the volume of the metric's unit ball in the chart
tangent space with the Euclidean unit ball, through the radial formula
Vol{F < 1} = (1/n) * integral of F(x, theta)^(-n) over the unit sphere.
The distortion is tau = ln(sqrt(det g_y) / sigma(x)) in the chart
coordinate frame, and the S-curvature is the forward rate of change of
tau along the geodesic through (x, y).  Quadrature levels refine until
the node budget is met, and the refinement history must contract or the
indicatrix is declared unusable.
"""

from dataclasses import dataclass

import numpy as np

from . import sphere
from .errors import QuadratureDivergence, ZeroVector
from .geodesic_flow import GeodesicPath, chart_fundamental_tensor, integrate_geodesic

MIN_NODES = 10000
_CHUNK = 256


@dataclass
class VolumeFactor:
    x: np.ndarray
    sigma: float
    quadrature_nodes: int
    estimated_error: float


@dataclass
class DistortionSample:
    x: np.ndarray
    y: np.ndarray
    tau: float


@dataclass
class PathDistortion:
    ts: np.ndarray
    taus: np.ndarray
    s_values: np.ndarray
    sigma_errors: np.ndarray


def _indicatrix_integrals(cm, xs: np.ndarray, level: int) -> np.ndarray:
    """(1/n) * integral of F(x, theta)^(-n) per point, one grid level."""
    n = cm.model.dim
    nodes, weights = sphere.quad_grid(n, level)
    out = np.empty(len(xs))
    for start in range(0, len(xs), _CHUNK):
        block = xs[start : start + _CHUNK]
        a = cm.model.body_jacobian(block)
        body = np.einsum("cij,mj->cmi", a, nodes)
        f = cm.norm.value(body)
        out[start : start + _CHUNK] = (f ** (-float(n))) @ weights / n
    return out


def _sigma_batch(cm, xs: np.ndarray, min_nodes: int = MIN_NODES):
    """sigma, absolute error estimate, and node count for a batch of x."""
    n = cm.model.dim
    if n not in (2, 3, 4):
        raise ValueError(f"sphere quadrature covers dimensions 2..4, got {n}")
    xs = np.asarray(xs, dtype=float)
    level = max(sphere.level_for(n, min_nodes), 2)
    values = [_indicatrix_integrals(cm, xs, lv) for lv in (level - 2, level - 1, level)]
    if not all(np.all(np.isfinite(v)) for v in values):
        raise QuadratureDivergence("indicatrix integral is not finite; norm is not usable")
    e_prev = np.abs(values[1] - values[0])
    e_last = np.abs(values[2] - values[1])
    floor = 5.0e-13 * np.abs(values[2])
    if np.any(e_last > np.maximum(0.5 * e_prev, floor)):
        raise QuadratureDivergence(
            "sphere-grid refinement failed to contract; indicatrix looks irregular"
        )
    sigma = sphere.ball_volume(n) / values[2]
    return sigma, sigma * e_last / values[2], sphere.grid_size(n, level)


def busemann_sigma(cm, x) -> VolumeFactor:
    """Busemann volume factor Vol(B^n) / Vol{y : F(x, y) < 1}."""
    x = np.asarray(x, dtype=float)
    sigma, err, nodes = _sigma_batch(cm, x[None, :])
    return VolumeFactor(
        x=x, sigma=float(sigma[0]), quadrature_nodes=int(nodes), estimated_error=float(err[0])
    )


def _tau_batch(cm, xs: np.ndarray, ys: np.ndarray):
    g = chart_fundamental_tensor(cm, xs, ys)
    det = np.linalg.det(g)
    sigma, err, _ = _sigma_batch(cm, xs)
    return 0.5 * np.log(det) - np.log(sigma), err / sigma


def distortion(cm, x, y) -> DistortionSample:
    """tau(x, y) = ln(sqrt(det g_y) / sigma(x)) in the chart frame."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if np.linalg.norm(y) == 0.0:
        raise ZeroVector("distortion needs y != 0")
    tau, _ = _tau_batch(cm, x[None, :], y[None, :])
    return DistortionSample(x=x, y=y, tau=float(tau[0]))


def s_curvature(cm, x, y, dt: float = 1.0e-3) -> float:
    """Forward rate of change of the distortion along the geodesic.

    Integrates two RK4 steps of size dt from (x, y), evaluates tau at
    t in {0, dt, 2*dt}, and returns the one-sided second-order quotient
    (-3*tau0 + 4*tau1 - tau2) / (2*dt).  Backward evaluation is never
    used; F is only positively homogeneous.
    """
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    path = integrate_geodesic(cm, x, y, T=2.0 * dt, step=dt)
    taus, _ = _tau_batch(cm, path.points, path.velocities)
    return float((-3.0 * taus[0] + 4.0 * taus[1] - taus[2]) / (2.0 * dt))


def s_along_path(cm, path: GeodesicPath) -> PathDistortion:
    """tau at every path sample and the difference-quotient S sequence.

    Interior samples use the forward one-sided second-order stencil;
    the last two fall back to the matching backward stencil on the
    already-computed tau sequence.
    """
    taus, errs = _tau_batch(cm, path.points, path.velocities)
    count = len(taus)
    if count < 3:
        raise ValueError("need at least three samples for the S stencil")
    dt = float(path.ts[1] - path.ts[0])
    s = np.empty(count)
    s[: count - 2] = (-3.0 * taus[: count - 2] + 4.0 * taus[1 : count - 1] - taus[2:]) / (2.0 * dt)
    for i in (count - 2, count - 1):
        s[i] = (3.0 * taus[i] - 4.0 * taus[i - 1] + taus[i - 2]) / (2.0 * dt)
    return PathDistortion(ts=path.ts, taus=taus, s_values=s, sigma_errors=errs)
