"""Minkowski norms and their fundamental and Cartan tensors.

A Minkowski norm F on R^n is positively 1-homogeneous and strongly
convex away from the origin.  Its fundamental tensor is half the
y-Hessian of F², a direction-dependent inner product; its Cartan tensor
is a quarter of the third y-derivative of F² and vanishes identically
exactly when the norm is induced by an inner product.

The generic derivative path evaluates F² on nested truncated jets, so
both tensors are exact up to floating-point accumulation.  Euclidean and
Randers norms additionally carry closed forms used by hot loops; the two
routes are cross-checked in the test-suite, never collapsed.
"""

from dataclasses import dataclass

import numpy as np

from . import jets
from .errors import DimensionMismatch, NonConvexNorm, NotPositiveDefinite, SingularTensor, ZeroVector


@dataclass(frozen=True)
class FundamentalTensor:
    base_y: np.ndarray
    matrix: np.ndarray


@dataclass(frozen=True)
class CartanTensor:
    base_y: np.ndarray
    tensor: np.ndarray


def _check_spd(mat: np.ndarray, what: str) -> None:
    mat = np.asarray(mat, dtype=float)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise NotPositiveDefinite(f"{what} must be a square matrix")
    if np.max(np.abs(mat - mat.T)) > 1.0e-12 * max(1.0, np.trace(mat)):
        raise NotPositiveDefinite(f"{what} must be symmetric")
    shift = 1.0e-12 * np.trace(mat) * np.eye(mat.shape[0])
    try:
        np.linalg.cholesky(mat - shift)
    except np.linalg.LinAlgError:
        raise NotPositiveDefinite(f"{what} is not positive definite") from None


class MinkowskiNorm:
    """Base class: value routes plus jet-based derivative machinery."""

    kind = "abstract"

    def __init__(self, dim: int):
        self.dim = int(dim)

    # subclasses implement value(y) for plain arrays and value2_jet(yj)
    # for jet vectors; everything else is derived here

    def value(self, y: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def value2_jet(self, yj: jets.Jet) -> jets.Jet:
        raise NotImplementedError

    def _check_dim(self, y: np.ndarray) -> np.ndarray:
        y = np.asarray(y, dtype=float)
        if y.shape[-1] != self.dim:
            raise DimensionMismatch(self.dim, y.shape[-1])
        return y

    def fundamental_matrix(self, y: np.ndarray) -> np.ndarray:
        """g_ij(y) = ½ ∂²F²/∂y_i∂y_j, batched over leading axes of y."""
        return self._generic_fundamental(y)

    def cartan(self, y: np.ndarray) -> np.ndarray:
        """C_ijk(y) = ¼ ∂³F²/∂y_i∂y_j∂y_k, batched."""
        return self._generic_cartan(y)

    def _require_nonzero(self, y: np.ndarray) -> np.ndarray:
        y = self._check_dim(y)
        if np.any(np.linalg.norm(y, axis=-1) == 0.0):
            raise ZeroVector("derivative operations need y != 0")
        return y

    def _generic_fundamental(self, y: np.ndarray) -> np.ndarray:
        y = self._require_nonzero(y)
        n = self.dim
        eye = np.eye(n)
        yb = np.broadcast_to(y[..., None, None, :], y.shape[:-1] + (n, n, n))
        u = np.broadcast_to(eye[:, None, :], (n, n, n))
        v = np.broadcast_to(eye[None, :, :], (n, n, n))
        vj = jets.variable(yb, [u, v])
        f2 = self.value2_jet(vj)
        return 0.5 * f2.coeff(0b11)

    def _generic_cartan(self, y: np.ndarray) -> np.ndarray:
        y = self._require_nonzero(y)
        n = self.dim
        eye = np.eye(n)
        yb = np.broadcast_to(y[..., None, None, None, :], y.shape[:-1] + (n, n, n, n))
        u = np.broadcast_to(eye[:, None, None, :], (n, n, n, n))
        v = np.broadcast_to(eye[None, :, None, :], (n, n, n, n))
        w = np.broadcast_to(eye[None, None, :, :], (n, n, n, n))
        vj = jets.variable(yb, [u, v, w])
        f2 = self.value2_jet(vj)
        return 0.25 * f2.coeff(0b111)

    def to_dict(self) -> dict:
        raise NotImplementedError


class EuclideanNorm(MinkowskiNorm):
    """F(y) = sqrt(y·a y) for a symmetric positive definite a."""

    kind = "euclidean"

    def __init__(self, a: np.ndarray):
        a = np.asarray(a, dtype=float)
        _check_spd(a, "a")
        super().__init__(a.shape[0])
        self.a = a

    def value(self, y: np.ndarray) -> np.ndarray:
        y = self._check_dim(y)
        return np.sqrt(np.einsum("...i,ij,...j->...", y, self.a, y))

    def value2_jet(self, yj: jets.Jet) -> jets.Jet:
        return jets.quadform(self.a, yj)

    def fundamental_matrix(self, y: np.ndarray) -> np.ndarray:
        y = self._require_nonzero(y)
        return np.broadcast_to(self.a, y.shape[:-1] + (self.dim, self.dim)).copy()

    def cartan(self, y: np.ndarray) -> np.ndarray:
        y = self._require_nonzero(y)
        n = self.dim
        return np.zeros(y.shape[:-1] + (n, n, n))

    def to_dict(self) -> dict:
        return {"kind": "euclidean", "a": self.a.tolist()}


class RandersNorm(MinkowskiNorm):
    """F(y) = sqrt(y·a y) + b·y with ‖b‖_a < 1.

    Strong convexity is exactly ‖b‖_a < 1, checked at construction.  The
    closed forms below are the direct derivatives of (α+β)²:

      g  = (F/α)·a + b⊗b + (b⊗p + p⊗b)/α − (β/α³)·p⊗p,   p = a y
      C  = ½·Sym₃(u ⊗ h),   u = b/α − (β/α³)p,   h = a − p⊗p/α²

    where Sym₃ symmetrizes over the three slots.
    """

    kind = "randers"

    def __init__(self, a: np.ndarray, b: np.ndarray):
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        _check_spd(a, "a")
        if b.shape != (a.shape[0],):
            raise DimensionMismatch(a.shape[0], b.shape[-1], "b")
        super().__init__(a.shape[0])
        self.a = a
        self.b = b
        self.b_sharp = np.linalg.solve(a, b)
        self.b_norm = float(np.sqrt(self.b @ self.b_sharp))
        if self.b_norm >= 1.0:
            raise NonConvexNorm(
                f"Randers data violates ‖b‖ < 1: computed ‖b‖_a = {self.b_norm}",
                b_norm=self.b_norm,
            )

    def alpha(self, y: np.ndarray) -> np.ndarray:
        y = self._check_dim(y)
        return np.sqrt(np.einsum("...i,ij,...j->...", y, self.a, y))

    def beta(self, y: np.ndarray) -> np.ndarray:
        y = self._check_dim(y)
        return y @ self.b

    def value(self, y: np.ndarray) -> np.ndarray:
        return self.alpha(y) + self.beta(y)

    def value2_jet(self, yj: jets.Jet) -> jets.Jet:
        alpha = jets.sqrt(jets.quadform(self.a, yj))
        beta = jets.dot(yj, jets.Jet.constant(np.broadcast_to(self.b, yj.c.shape[:-1]), yj.order))
        f = alpha + beta
        return f * f

    def fundamental_matrix(self, y: np.ndarray) -> np.ndarray:
        y = self._require_nonzero(y)
        p = y @ self.a
        alpha = np.sqrt(np.einsum("...i,...i->...", y, p))[..., None, None]
        beta = (y @ self.b)[..., None, None]
        pp = p[..., :, None] * p[..., None, :]
        bp = self.b[..., :, None] * p[..., None, :]
        g = (1.0 + beta / alpha) * self.a
        g = g + self.b[:, None] * self.b[None, :]
        g = g + (bp + np.swapaxes(bp, -1, -2)) / alpha
        g = g - (beta / alpha**3) * pp
        return g

    def cartan(self, y: np.ndarray) -> np.ndarray:
        y = self._require_nonzero(y)
        p = y @ self.a
        alpha2 = np.einsum("...i,...i->...", y, p)[..., None]
        alpha = np.sqrt(alpha2)
        beta = (y @ self.b)[..., None]
        u = self.b / alpha - (beta / (alpha2 * alpha)) * p
        h = self.a - p[..., :, None] * p[..., None, :] / alpha2[..., None]
        uh = u[..., :, None, None] * h[..., None, :, :]
        return 0.5 * (uh + np.moveaxis(uh, -3, -2) + np.moveaxis(uh, -3, -1))

    def to_dict(self) -> dict:
        return {"kind": "randers", "a": self.a.tolist(), "b": self.b.tolist()}


class CustomNorm(MinkowskiNorm):
    """Norm given by a callable evaluating F² on jet vectors.

    The callable receives a jet vector (indexable by component) and must
    build its result from jet arithmetic: +, -, *, /, ** and
    finslergeo.jets.sqrt.  Third derivatives then come out exact.
    """

    kind = "custom"

    def __init__(self, dim: int, f2):
        super().__init__(dim)
        self.f2 = f2

    def value(self, y: np.ndarray) -> np.ndarray:
        y = self._check_dim(y)
        flat = np.linalg.norm(y, axis=-1) == 0.0
        if np.all(flat):
            return np.zeros(y.shape[:-1])
        safe = np.where(flat[..., None], 1.0, y)
        val = np.sqrt(self.f2(jets.Jet.constant(safe, 0)).value)
        return np.where(flat, 0.0, val)

    def value2_jet(self, yj: jets.Jet) -> jets.Jet:
        return self.f2(yj)

    def fundamental_matrix(self, y: np.ndarray) -> np.ndarray:
        g = self._generic_fundamental(y)
        flat = g.reshape(-1, self.dim, self.dim)
        for k in range(flat.shape[0]):
            try:
                np.linalg.cholesky(flat[k])
            except np.linalg.LinAlgError:
                raise SingularTensor(
                    "fundamental tensor is not positive definite; the evaluator is not strongly convex"
                ) from None
        return g

    def to_dict(self) -> dict:
        return {"kind": "custom", "dim": self.dim}


def eval_norm(norm: MinkowskiNorm, y: np.ndarray) -> np.ndarray:
    """F(y); F(0) = 0 by the homogeneity limit."""
    return norm.value(y)


def fundamental_tensor(norm: MinkowskiNorm, y: np.ndarray) -> FundamentalTensor:
    """g_y as a matrix, with a positive-definiteness guarantee."""
    y = np.asarray(y, dtype=float)
    if np.linalg.norm(y) == 0.0:
        raise ZeroVector("fundamental tensor needs y != 0")
    matrix = norm.fundamental_matrix(y)
    try:
        np.linalg.cholesky(matrix)
    except np.linalg.LinAlgError:
        raise SingularTensor("fundamental tensor is not positive definite at this y") from None
    return FundamentalTensor(base_y=y, matrix=matrix)


def cartan_tensor(norm: MinkowskiNorm, y: np.ndarray) -> CartanTensor:
    """C_y as a fully symmetric 3-tensor."""
    y = np.asarray(y, dtype=float)
    if np.linalg.norm(y) == 0.0:
        raise ZeroVector("Cartan tensor needs y != 0")
    return CartanTensor(base_y=y, tensor=norm.cartan(y))


def make_randers(a: np.ndarray, b: np.ndarray) -> RandersNorm:
    """Randers norm from Riemannian data a and a drift covector b."""
    return RandersNorm(a, b)


def norm_from_dict(data: dict) -> MinkowskiNorm:
    kind = data.get("kind")
    if kind == "euclidean":
        return EuclideanNorm(np.asarray(data["a"], dtype=float))
    if kind == "randers":
        return RandersNorm(np.asarray(data["a"], dtype=float), np.asarray(data["b"], dtype=float))
    raise ValueError(f"unknown norm kind {kind!r}")
