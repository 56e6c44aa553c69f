"""Chart-level tensors, the geodesic spray, flow integration, Berwald test.

The spray coefficients follow
    G^j = 1/4 g^{jl} (2 dg_sl/dx^k - dg_sk/dx^l) y^s y^k
with the fundamental tensor pulled back to the chart.  y-derivatives go
through nilpotent jets (exact); x-derivatives go through central
differences with one Richardson step, because the x-dependence flows
through the group law.  The geodesic system xdot = y, ydot = -2G(x, y)
is integrated with classical fixed-step Runge-Kutta; the metric value F
is a first integral of the exact flow, so its drift along a numerical
path measures integration error.
"""

from dataclasses import dataclass, field

import numpy as np

from . import jets, lie, sphere
from .errors import SingularTensor, StepRejected, ZeroVector
from .geodesic_vectors import geodesic_residual
from .groups import ChartMetric, GroupModel, orbit_curve

X_STEP = 1.0e-5
DRIFT_LIMIT = 1.0e-3


@dataclass
class SprayEvaluation:
    x: np.ndarray
    y: np.ndarray
    G: np.ndarray
    g_matrix: np.ndarray
    g_inverse: np.ndarray


@dataclass
class GeodesicPath:
    ts: np.ndarray
    points: np.ndarray
    velocities: np.ndarray
    F_values: np.ndarray
    step: float
    method: str = "rk4"

    @property
    def samples(self):
        return list(zip(self.ts, self.points, self.velocities))


@dataclass
class HomogeneousGeodesicReport:
    X: np.ndarray
    sup_distance: float
    residual_norm: float
    tolerance: float
    horizon: float
    step: float

    @property
    def passed(self) -> bool:
        return self.sup_distance <= self.tolerance


@dataclass
class BerwaldReport:
    base_point: np.ndarray
    samples: int
    max_deviation: float
    tolerance: float
    witness_directions: dict = field(default_factory=dict)

    @property
    def is_berwald(self) -> bool:
        return self.max_deviation <= self.tolerance


def _require_nonzero_tangent(y: np.ndarray) -> np.ndarray:
    y = np.asarray(y, dtype=float)
    if np.any(np.linalg.norm(y, axis=-1) == 0.0):
        raise ZeroVector("chart tangent must be nonzero")
    return y


def chart_fundamental_tensor(cm: ChartMetric, x, y, generic: bool = False) -> np.ndarray:
    """g_ij(x, y) of the chart metric, batched over leading axes.

    The default route pushes y to the body frame and conjugates the
    norm's fundamental tensor with the body Jacobian; the generic route
    differentiates F(x, .)^2 with order-2 jets and exists to cross-check
    the congruence.
    """
    x = np.asarray(x, dtype=float)
    y = _require_nonzero_tangent(y)
    if generic:
        n = y.shape[-1]
        eye = np.eye(n)
        yb = np.broadcast_to(y[..., None, None, :], y.shape[:-1] + (n, n, n))
        u = np.broadcast_to(eye[:, None, :], (n, n, n))
        v = np.broadcast_to(eye[None, :, :], (n, n, n))
        f2 = cm.value2_jet(x, jets.variable(yb, [u, v]))
        return 0.5 * f2.coeff(0b11)
    a = cm.model.body_jacobian(x)
    body_y = np.einsum("...ij,...j->...i", a, y)
    ghat = cm.norm.fundamental_matrix(body_y)
    return np.einsum("...pi,...pq,...qj->...ij", a, ghat, a)


def _x_derivatives(cm: ChartMetric, x, y, h: float = X_STEP) -> np.ndarray:
    """dg[..., k, s, l] = dg_sl/dx^k by Richardson-extrapolated centrals."""
    n = x.shape[-1]
    steps = np.array([h, -h, 0.5 * h, -0.5 * h])
    shifts = np.eye(n)[:, None, :] * steps[None, :, None]
    xs = x[..., None, None, :] + shifts
    ys = np.broadcast_to(y[..., None, None, :], xs.shape)
    g = chart_fundamental_tensor(cm, xs, ys)
    coarse = (g[..., 0, :, :] - g[..., 1, :, :]) / (2.0 * h)
    fine = (g[..., 2, :, :] - g[..., 3, :, :]) / h
    return (4.0 * fine - coarse) / 3.0


def _spray_raw(cm: ChartMetric, x, y):
    """Spray coefficients and the fundamental matrix, batched."""
    g = chart_fundamental_tensor(cm, x, y)
    dg = _x_derivatives(cm, x, y)
    lowered = 2.0 * np.einsum("...ksl,...s,...k->...l", dg, y, y) - np.einsum(
        "...lsk,...s,...k->...l", dg, y, y
    )
    coeffs = 0.25 * np.linalg.solve(g, lowered[..., None])[..., 0]
    return coeffs, g


def spray_coefficients(cm: ChartMetric, x, y) -> SprayEvaluation:
    x = np.asarray(x, dtype=float)
    y = _require_nonzero_tangent(y)
    coeffs, g = _spray_raw(cm, x, y)
    try:
        np.linalg.cholesky(g)
    except np.linalg.LinAlgError:
        raise SingularTensor("fundamental tensor is not positive definite") from None
    return SprayEvaluation(x=x, y=y, G=coeffs, g_matrix=g, g_inverse=np.linalg.inv(g))


def integrate_geodesic(cm: ChartMetric, x0, y0, T: float = 2.0, step: float = 1.0e-3) -> GeodesicPath:
    """Fixed-step RK4 on xdot = y, ydot = -2G(x, y), forward in time.

    Batched over leading axes of (x0, y0); all trajectories advance in
    lockstep.  Raises StepRejected when the relative drift of F across a
    single step exceeds 1e-3, and ChartDomain when a point leaves the
    model's chart.
    """
    if step <= 0.0 or T <= 0.0:
        raise ValueError("forward integration needs step > 0 and T > 0")
    x = np.array(x0, dtype=float)
    y = _require_nonzero_tangent(y0).copy()
    cm.model.check_chart(x)
    nsteps = max(1, int(round(T / step)))
    ts = np.arange(nsteps + 1) * step
    points = np.empty((nsteps + 1,) + x.shape)
    velocities = np.empty_like(points)
    points[0] = x
    velocities[0] = y
    f_prev = cm.value(x, y)

    def rhs(xc, yc):
        coeffs, _ = _spray_raw(cm, xc, yc)
        return yc, -2.0 * coeffs

    for i in range(1, nsteps + 1):
        k1x, k1y = rhs(x, y)
        k2x, k2y = rhs(x + 0.5 * step * k1x, y + 0.5 * step * k1y)
        k3x, k3y = rhs(x + 0.5 * step * k2x, y + 0.5 * step * k2y)
        k4x, k4y = rhs(x + step * k3x, y + step * k3y)
        x = x + (step / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x)
        y = y + (step / 6.0) * (k1y + 2.0 * k2y + 2.0 * k3y + k4y)
        cm.model.check_chart(x)
        f_now = cm.value(x, y)
        if np.any(np.abs(f_now - f_prev) > DRIFT_LIMIT * np.abs(f_prev)):
            raise StepRejected(
                f"metric value drifted more than {DRIFT_LIMIT:g} in one step; refine the step size"
            )
        f_prev = f_now
        points[i] = x
        velocities[i] = y

    f_values = cm.value(points, velocities)
    return GeodesicPath(
        ts=ts, points=points, velocities=velocities, F_values=f_values, step=float(step)
    )


def is_homogeneous_geodesic(
    model: GroupModel,
    norm,
    X,
    T: float = 2.0,
    step: float = 1.0e-3,
    tol: float = 1.0e-6,
) -> HomogeneousGeodesicReport:
    """Integrate from (e, X) and compare with the orbit of exp(tX).

    The sup-distance over [0, T] in chart coordinates decides pass or
    fail; the algebraic criterion residual for X rides along so callers
    can confirm the two verdicts agree.
    """
    X = np.asarray(X, dtype=float)
    if np.linalg.norm(X) == 0.0:
        raise ZeroVector("direction must be nonzero")
    cm = ChartMetric(model, norm)
    path = integrate_geodesic(cm, model.identity(), X, T=T, step=step)
    orbit_points, _ = orbit_curve(model, X, model.identity(), path.ts)
    sup = float(np.max(np.abs(path.points - orbit_points)))
    dec = lie.ReductiveDecomposition(model.algebra, m_indices=tuple(range(model.dim)))
    residual = geodesic_residual(dec, norm, X).residual
    return HomogeneousGeodesicReport(
        X=X,
        sup_distance=sup,
        residual_norm=float(np.linalg.norm(residual)),
        tolerance=tol,
        horizon=float(T),
        step=float(step),
    )


def berwald_test(
    cm: ChartMetric,
    x=None,
    samples: int = 8,
    h: float = 1.0e-2,
    tol: float = 1.0e-5,
) -> BerwaldReport:
    """Agreement of the y-Hessians of G^i across unit-sphere directions.

    The spray is quadratic in y exactly when those Hessians do not
    depend on y; with them matching to tol the chart metric passes.
    Directions come from the deterministic low-discrepancy sphere set.
    """
    n = cm.model.dim
    x = np.zeros(n) if x is None else np.asarray(x, dtype=float)
    ys = sphere.seeds(n, samples)
    eye = np.eye(n)
    pair_rows = []
    pair_cols = []
    for a in range(n):
        for b in range(a + 1, n):
            pair_rows.append(a)
            pair_cols.append(b)
    offsets = [np.zeros((1, n)), h * eye, -h * eye]
    for a, b in zip(pair_rows, pair_cols):
        offsets.append(h * np.stack([eye[a] + eye[b], -(eye[a] + eye[b]), eye[a] - eye[b], eye[b] - eye[a]]))
    offsets = np.concatenate(offsets, axis=0)
    probes = ys[:, None, :] + offsets[None, :, :]
    coeffs, _ = _spray_raw(cm, np.broadcast_to(x, probes.shape).copy(), probes)

    center = coeffs[:, 0]
    plus = coeffs[:, 1 : 1 + n]
    minus = coeffs[:, 1 + n : 1 + 2 * n]
    # hess[s, j, a, b] approximates the second y-derivative of G^j
    hess = np.empty((samples, n, n, n))
    diag = (plus - 2.0 * center[:, None, :] + minus) / (h * h)
    for a in range(n):
        hess[:, :, a, a] = diag[:, a, :]
    base = 1 + 2 * n
    for pos, (a, b) in enumerate(zip(pair_rows, pair_cols)):
        block = coeffs[:, base + 4 * pos : base + 4 * pos + 4]
        mixed = (block[:, 0] + block[:, 1] - block[:, 2] - block[:, 3]) / (4.0 * h * h)
        hess[:, :, a, b] = mixed
        hess[:, :, b, a] = mixed

    deviation = np.abs(hess - hess[:1])
    worst = np.unravel_index(int(np.argmax(deviation)), deviation.shape)
    return BerwaldReport(
        base_point=x,
        samples=samples,
        max_deviation=float(deviation[worst]),
        tolerance=tol,
        witness_directions={"reference": ys[0], "compared": ys[worst[0]]},
    )
