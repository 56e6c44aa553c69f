"""Truncated polynomial arithmetic for exact mixed partial derivatives.

A jet of order k carries coefficients over the nilpotent basis
ε_S = ∏_{i∈S} ε_i for S ⊆ {0..k-1}, with ε_i² = 0.  Arithmetic on jets
is exact, so the coefficient of the full product ε_{0..k-1} in
f(y + t_0 u_0 + ... + t_{k-1} u_{k-1}) is the mixed partial
∂^k f / ∂t_0 ... ∂t_{k-1} evaluated at t = 0, with no truncation error
beyond floating point.

Coefficients live in the trailing axis of a numpy array of length 2**k,
indexed by the bitmask of S.  Leading axes are free: a batched vector of
jets has shape (..., n, 2**k) with the component axis at -2, and all
operations broadcast over the leading axes.
"""

from functools import lru_cache

import numpy as np


@lru_cache(maxsize=None)
def _mul_table(order: int) -> np.ndarray:
    """Structure tensor M[s, a, b] = 1 when ε_a ε_b = ε_s, else 0."""
    m = 1 << order
    table = np.zeros((m, m, m))
    for a in range(m):
        for b in range(m):
            if a & b == 0:
                table[a | b, a, b] = 1.0
    return table


class Jet:
    """A (batched) element of R[ε_0..ε_{k-1}] / (ε_i² = 0)."""

    __slots__ = ("c", "order")

    def __init__(self, c: np.ndarray, order: int):
        self.c = np.asarray(c, dtype=float)
        self.order = order
        if self.c.shape[-1] != (1 << order):
            raise ValueError("coefficient axis does not match jet order")

    @classmethod
    def constant(cls, value, order: int) -> "Jet":
        value = np.asarray(value, dtype=float)
        c = np.zeros(value.shape + (1 << order,))
        c[..., 0] = value
        return cls(c, order)

    @property
    def value(self) -> np.ndarray:
        return self.c[..., 0]

    def coeff(self, mask: int) -> np.ndarray:
        """Coefficient of ε_S for the bitmask S; the mixed partial ∂_S."""
        return self.c[..., mask]

    def __getitem__(self, i) -> "Jet":
        # component access for vector jets: component axis is -2
        return Jet(self.c[..., i, :], self.order)

    def __neg__(self) -> "Jet":
        return Jet(-self.c, self.order)

    def __add__(self, other):
        if isinstance(other, Jet):
            return Jet(self.c + other.c, self.order)
        c = self.c.copy()
        c[..., 0] += other
        return Jet(c, self.order)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other if isinstance(other, Jet) else -np.asarray(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Jet):
            table = _mul_table(self.order)
            c = np.einsum("sab,...a,...b->...s", table, self.c, other.c)
            return Jet(c, self.order)
        other = np.asarray(other, dtype=float)
        if other.ndim:
            other = other[..., None]  # broadcast against leading axes, not coefficients
        return Jet(self.c * other, self.order)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Jet):
            return self * other._reciprocal()
        other = np.asarray(other, dtype=float)
        if other.ndim:
            other = other[..., None]
        return Jet(self.c / other, self.order)

    def __rtruediv__(self, other):
        return self._reciprocal() * other

    def __pow__(self, p):
        if isinstance(p, (int, np.integer)):
            if p < 0:
                return self._reciprocal() ** (-p)
            result = Jet.constant(np.ones(self.c.shape[:-1]), self.order)
            for _ in range(p):
                result = result * self
            return result
        return self._real_pow(float(p))

    def _split(self):
        # value part a0 and the nilpotent remainder q = (self - a0) / a0
        a0 = self.c[..., :1]
        q = Jet(self.c / a0, self.order)
        q.c[..., 0] = 0.0
        return a0[..., 0], q

    def _series(self, coeffs) -> "Jet":
        # Horner evaluation of sum coeffs[j] q^j at the nilpotent part q
        a0, q = self._split()
        acc = q * coeffs[-1] + coeffs[-2]
        for cj in reversed(coeffs[:-2]):
            acc = q * acc + cj
        return acc, a0

    def _reciprocal(self) -> "Jet":
        if self.order == 0:
            return Jet(1.0 / self.c, 0)
        acc, a0 = self._series([(-1.0) ** j for j in range(self.order + 1)])
        return Jet(acc.c / a0[..., None], self.order)

    def _real_pow(self, p: float) -> "Jet":
        if self.order == 0:
            return Jet(self.c**p, 0)
        coeffs, binom = [], 1.0
        for j in range(self.order + 1):
            coeffs.append(binom)
            binom *= (p - j) / (j + 1)
        acc, a0 = self._series(coeffs)
        return Jet(acc.c * (a0**p)[..., None], self.order)


def sqrt(x):
    """Square root for jets and plain arrays alike."""
    if isinstance(x, Jet):
        return x._real_pow(0.5)
    return np.sqrt(x)


def variable(y: np.ndarray, dirs) -> Jet:
    """Seed a vector jet y + ε_0 u_0 + ... for the directions in dirs.

    y has shape (..., n); each direction broadcasts against it.  The jet
    order equals len(dirs).
    """
    y = np.asarray(y, dtype=float)
    order = len(dirs)
    c = np.zeros(y.shape + (1 << order,))
    c[..., 0] = y
    for i, u in enumerate(dirs):
        c[..., 1 << i] = u
    return Jet(c, order)


def matvec(mat: np.ndarray, x: Jet) -> Jet:
    """Apply a numeric linear map over the component axis of a vector jet."""
    return Jet(np.einsum("...pq,...qs->...ps", mat, x.c), x.order)


def dot(x: Jet, y: Jet) -> Jet:
    """Contract two vector jets over the component axis."""
    table = _mul_table(x.order)
    c = np.einsum("sab,...pa,...pb->...s", table, x.c, y.c)
    return Jet(c, x.order)


def quadform(mat: np.ndarray, x: Jet) -> Jet:
    """x · (mat x) as a scalar jet."""
    return dot(x, matvec(mat, x))
