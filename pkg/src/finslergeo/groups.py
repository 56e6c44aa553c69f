"""Concrete Lie groups: coordinates, group law, exponential, charts.

Both built-in models have trivial isotropy, so the homogeneous space is
the group itself and the algebra coincides with the tangent space at
the identity.  Heisenberg H3 uses global exponential coordinates with a
polynomial group law.  SU(2) uses the 3-dim exponential chart around
the identity (radius strictly below 2π), with unit quaternions as the
internal representation for composing group elements; all tensor
calculus happens in the chart.

The body Jacobian A(x) is the differential of left translation by
x^{-1} at x.  It trivializes the tangent bundle: a chart velocity v at
x corresponds to the algebra vector A(x)·v, and the left-invariant
metric is F(x, v) = norm(A(x)·v).
"""

import numpy as np

from . import jets, lie
from .errors import ChartDomain, DimensionMismatch, ZeroVector

_QUAT_DRIFT = 1.0e-13
_SU2_CHART_RADIUS = 2.0 * np.pi - 0.05


class GroupModel:
    """Common interface for the built-in models."""

    name = "abstract"
    dim = 0

    def identity(self) -> np.ndarray:
        return np.zeros(self.dim)

    def multiply(self, p: np.ndarray, q: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def inverse(self, p: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def exp_map(self, X: np.ndarray, t) -> np.ndarray:
        """Chart coordinates of exp(tX); t may be a scalar or an array."""
        raise NotImplementedError

    def body_jacobian(self, x: np.ndarray) -> np.ndarray:
        """A(x) = d(L_{x^{-1}})_x, batched over leading axes of x."""
        raise NotImplementedError

    def dleft(self, p: np.ndarray, v: np.ndarray, base: np.ndarray | None = None) -> np.ndarray:
        """Differential of L_p at the base point, applied to v."""
        raise NotImplementedError

    def check_chart(self, x: np.ndarray) -> None:
        """Raise ChartDomain when x leaves the chart's validity region."""

    def orbit(self, X: np.ndarray, p: np.ndarray, ts: np.ndarray):
        """Points and chart velocities of t -> exp(tX)·p."""
        raise NotImplementedError


class Heisenberg3(GroupModel):
    """(a,b,c)·(a',b',c') = (a+a', b+b', c+c'+½(ab'−a'b)); global chart."""

    name = "heisenberg3"
    dim = 3

    def __init__(self):
        self.algebra = lie.heisenberg3()

    def multiply(self, p, q):
        p = np.asarray(p, dtype=float)
        q = np.asarray(q, dtype=float)
        out = p + q
        out[..., 2] += 0.5 * (p[..., 0] * q[..., 1] - p[..., 1] * q[..., 0])
        return out

    def inverse(self, p):
        return -np.asarray(p, dtype=float)

    def exp_map(self, X, t):
        X = np.asarray(X, dtype=float)
        t = np.asarray(t, dtype=float)
        return t[..., None] * X if t.ndim else t * X

    def body_jacobian(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape[:-1] + (3, 3))
        out[..., 0, 0] = 1.0
        out[..., 1, 1] = 1.0
        out[..., 2, 2] = 1.0
        out[..., 2, 0] = 0.5 * x[..., 1]
        out[..., 2, 1] = -0.5 * x[..., 0]
        return out

    def dleft(self, p, v, base=None):
        # the differential of L_p does not depend on the base point here
        p = np.asarray(p, dtype=float)
        v = np.asarray(v, dtype=float)
        out = v.copy()
        out[..., 2] += 0.5 * (p[..., 0] * v[..., 1] - p[..., 1] * v[..., 0])
        return out

    def orbit(self, X, p, ts):
        X = np.asarray(X, dtype=float)
        p = np.asarray(p, dtype=float)
        ts = np.asarray(ts, dtype=float)
        points = self.multiply(np.broadcast_to(ts[:, None] * X, (len(ts), 3)).copy(), np.broadcast_to(p, (len(ts), 3)).copy())
        vel = np.empty(3)
        vel[0] = X[0]
        vel[1] = X[1]
        vel[2] = X[2] + 0.5 * (X[0] * p[1] - X[1] * p[0])
        velocities = np.broadcast_to(vel, (len(ts), 3)).copy()
        return points, velocities


def _hamilton(q, r):
    w = q[..., 0] * r[..., 0] - np.einsum("...i,...i->...", q[..., 1:], r[..., 1:])
    v = (
        q[..., :1] * r[..., 1:]
        + r[..., :1] * q[..., 1:]
        + np.cross(q[..., 1:], r[..., 1:])
    )
    return np.concatenate([w[..., None], v], axis=-1)


class SU2(GroupModel):
    """Unit quaternions internally; the 3-dim exponential chart outside."""

    name = "su2"
    dim = 3

    def __init__(self):
        self.algebra = lie.su2()

    def _to_quat(self, x):
        x = np.asarray(x, dtype=float)
        theta = np.linalg.norm(x, axis=-1)
        w = np.cos(0.5 * theta)
        # sin(θ/2)/θ via sinc, finite at θ = 0
        factor = 0.5 * np.sinc(theta / (2.0 * np.pi))
        return np.concatenate([w[..., None], factor[..., None] * x], axis=-1)

    def _to_chart(self, q):
        w = q[..., 0]
        v = q[..., 1:]
        s = np.linalg.norm(v, axis=-1)
        theta = 2.0 * np.arctan2(s, w)
        small = s < 1.0e-9
        safe_s = np.where(small, 1.0, s)
        # near the identity the factor tends to 2/w; near the antipode the
        # chart is invalid, so push the radius onto the guard
        near_id = small & (w > 0.0)
        factor = np.where(near_id, 2.0 / np.where(w == 0.0, 1.0, w), theta / safe_s)
        out = factor[..., None] * v
        if np.any(small & (w <= 0.0)):
            raise ChartDomain("group element is at the antipode of the chart")
        return out

    def _renormalize(self, q):
        norm = np.linalg.norm(q, axis=-1, keepdims=True)
        if np.any(np.abs(norm - 1.0) > _QUAT_DRIFT):
            q = q / norm
        return q

    def multiply(self, p, q):
        prod = self._renormalize(_hamilton(self._to_quat(p), self._to_quat(q)))
        out = self._to_chart(prod)
        self.check_chart(out)
        return out

    def inverse(self, p):
        return -np.asarray(p, dtype=float)

    def exp_map(self, X, t):
        X = np.asarray(X, dtype=float)
        t = np.asarray(t, dtype=float)
        out = t[..., None] * X if t.ndim else t * X
        self.check_chart(out)
        return out

    def body_jacobian(self, x):
        x = np.asarray(x, dtype=float)
        theta2 = np.einsum("...i,...i->...", x, x)
        theta = np.sqrt(theta2)
        small = theta < 1.0e-4
        t2 = theta2
        with np.errstate(divide="ignore", invalid="ignore"):
            c1 = np.where(small, 0.5 - t2 / 24.0 + t2 * t2 / 720.0, (1.0 - np.cos(theta)) / theta2)
            c2 = np.where(
                small,
                1.0 / 6.0 - t2 / 120.0 + t2 * t2 / 5040.0,
                (theta - np.sin(theta)) / (theta2 * theta),
            )
        k = np.zeros(x.shape[:-1] + (3, 3))
        k[..., 0, 1] = -x[..., 2]
        k[..., 0, 2] = x[..., 1]
        k[..., 1, 0] = x[..., 2]
        k[..., 1, 2] = -x[..., 0]
        k[..., 2, 0] = -x[..., 1]
        k[..., 2, 1] = x[..., 0]
        eye = np.broadcast_to(np.eye(3), k.shape)
        return eye - c1[..., None, None] * k + c2[..., None, None] * (k @ k)

    def dleft(self, p, v, base=None):
        p = np.asarray(p, dtype=float)
        v = np.asarray(v, dtype=float)
        if base is None:
            base = np.zeros(3)
        base = np.asarray(base, dtype=float)
        target = self.multiply(p, base)
        rhs = np.einsum("...ij,...j->...i", self.body_jacobian(base), v)
        return np.linalg.solve(self.body_jacobian(target), rhs[..., None])[..., 0]

    def check_chart(self, x):
        x = np.asarray(x, dtype=float)
        radius = np.linalg.norm(x, axis=-1)
        if np.any(radius >= _SU2_CHART_RADIUS):
            worst = float(np.max(radius))
            raise ChartDomain(
                f"coordinate radius {worst} exceeds the chart bound {_SU2_CHART_RADIUS}"
            )

    def orbit(self, X, p, ts):
        X = np.asarray(X, dtype=float)
        p = np.asarray(p, dtype=float)
        ts = np.asarray(ts, dtype=float)
        if np.max(np.abs(p)) == 0.0:
            points = ts[:, None] * X
            self.check_chart(points)
            velocities = np.broadcast_to(X, points.shape).copy()
            return points, velocities
        points = self.multiply(np.broadcast_to(ts[:, None] * X, (len(ts), 3)).copy(), np.broadcast_to(p, (len(ts), 3)).copy())
        h = 1.0e-5
        stencil = []
        for off in (2.0 * h, h, -h, -2.0 * h):
            stencil.append(self.multiply((ts[:, None] + off) * X, np.broadcast_to(p, (len(ts), 3)).copy()))
        velocities = (-stencil[0] + 8.0 * stencil[1] - 8.0 * stencil[2] + stencil[3]) / (12.0 * h)
        return points, velocities


class Abelian(GroupModel):
    """Vector group R^n under addition; the flat translation model.

    A code-level extension used for flat-space baselines; not selectable
    by name in scenario files.
    """

    name = "abelian"

    def __init__(self, dim: int = 3):
        self.dim = dim
        self.algebra = lie.abelian(dim)

    def multiply(self, p, q):
        return np.asarray(p, dtype=float) + np.asarray(q, dtype=float)

    def inverse(self, p):
        return -np.asarray(p, dtype=float)

    def exp_map(self, X, t):
        X = np.asarray(X, dtype=float)
        t = np.asarray(t, dtype=float)
        return t[..., None] * X if t.ndim else t * X

    def body_jacobian(self, x):
        x = np.asarray(x, dtype=float)
        return np.broadcast_to(np.eye(self.dim), x.shape[:-1] + (self.dim, self.dim)).copy()

    def dleft(self, p, v, base=None):
        return np.asarray(v, dtype=float).copy()

    def orbit(self, X, p, ts):
        X = np.asarray(X, dtype=float)
        p = np.asarray(p, dtype=float)
        ts = np.asarray(ts, dtype=float)
        points = p + ts[:, None] * X
        velocities = np.broadcast_to(X, points.shape).copy()
        return points, velocities


_MODELS = {"heisenberg3": Heisenberg3, "su2": SU2}


def model_by_name(name: str) -> GroupModel:
    try:
        return _MODELS[name]()
    except KeyError:
        raise ValueError(f"unknown group model {name!r}; available: {sorted(_MODELS)}") from None


class ChartMetric:
    """Left-invariant metric F(x, v) = norm(A(x)·v) on a group model."""

    def __init__(self, model: GroupModel, norm):
        if norm.dim != model.dim:
            raise DimensionMismatch(model.dim, norm.dim, "norm")
        self.model = model
        self.norm = norm

    def value(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        a = self.model.body_jacobian(x)
        return self.norm.value(np.einsum("...ij,...j->...i", a, y))

    def value2_jet(self, x: np.ndarray, yj: jets.Jet) -> jets.Jet:
        a = self.model.body_jacobian(x)
        extra = yj.c.ndim - 2 - a.ndim + 2  # batch axes yj carries beyond x's
        if extra > 0:
            a = a.reshape(a.shape[:-2] + (1,) * extra + a.shape[-2:])
        return self.norm.value2_jet(jets.matvec(a, yj))


def induced_chart_metric(model: GroupModel, norm) -> ChartMetric:
    return ChartMetric(model, norm)


def orbit_curve(model: GroupModel, X: np.ndarray, p: np.ndarray, ts):
    """Points and velocities of the one-parameter orbit exp(tX)·p."""
    X = np.asarray(X, dtype=float)
    if np.linalg.norm(X) == 0.0:
        raise ZeroVector("orbit direction must be nonzero")
    ts = np.asarray(ts, dtype=float)
    points, velocities = model.orbit(X, np.asarray(p, dtype=float), ts)
    model.check_chart(points)
    return points, velocities
