# Standard:
import logging
from dataclasses import dataclass
from functools import lru_cache

# External:
import numpy as np
from scipy import integrate

# Internal:
from ..utils.errors import QuadratureError

# Constants:
from ..utils.constants import CUTOFF_RESIDUAL_TOL

logger = logging.getLogger(__name__)


def surface_area(d: int) -> float:
    """Area of the unit sphere in ``ℝ^d`` (``2π`` or ``4π``)."""
    return 2.0 * np.pi if d == 2 else 4.0 * np.pi


"""
----------------------------------------------------------------------------------------------------
Cutoff Profile
----------------------------------------------------------------------------------------------------
"""
def theta(r) -> np.ndarray:
    """
    Radial cutoff: ``1`` on ``[0, 1]``, ``0`` on ``[2, ∞)``, ``1 - S(r - 1)`` in between with the quintic
    smoothstep ``S(x) = 6x⁵ - 15x⁴ + 10x³``.
    """
    x = np.clip(np.asarray(r, dtype=float) - 1.0, 0.0, 1.0)
    return 1.0 - x ** 3 * (10.0 - 15.0 * x + 6.0 * x ** 2)


def theta_prime(r) -> np.ndarray:
    x = np.clip(np.asarray(r, dtype=float) - 1.0, 0.0, 1.0)
    return -30.0 * x ** 2 * (1.0 - x) ** 2


def theta_second(r) -> np.ndarray:
    x = np.clip(np.asarray(r, dtype=float) - 1.0, 0.0, 1.0)
    return -60.0 * x * (1.0 - x) * (1.0 - 2.0 * x)


def theta_moment(power: int = 1) -> float:
    """``∫₀² θ(s) s^power ds``."""
    value, _ = integrate.quad(lambda s: float(theta(s)) * s ** power, 0.0, 2.0, points=[1.0])
    return value


"""
----------------------------------------------------------------------------------------------------
Newton Potential
----------------------------------------------------------------------------------------------------
"""
def newton_radial(r, d: int = 2) -> np.ndarray:
    """``N(r)`` with ``ΔN = δ``: ``ln r / 2π`` (d = 2), ``-1 / (4π r)`` (d = 3)."""
    r = np.asarray(r, dtype=float)
    return np.log(r) / (2.0 * np.pi) if d == 2 else -1.0 / (4.0 * np.pi * r)


def newton_radial_prime(r, d: int = 2) -> np.ndarray:
    """``N_r = 1 / (ω_d r^{d-1})``."""
    return 1.0 / (surface_area(d) * np.asarray(r, dtype=float) ** (d - 1))


def newton_radial_second(r, d: int = 2) -> np.ndarray:
    return -(d - 1) / (surface_area(d) * np.asarray(r, dtype=float) ** d)


def newton_grad(X) -> np.ndarray:
    """
    Gradient of the Newton potential, ``∇N(X) = X / (ω_d |X|^d)``.

    Notes
    -----
    1. d = 2: ``X / (2π|X|²)``; d = 3: ``X / (4π|X|³)``. Both follow from ``ΔN = δ``.

    Parameters
    ----------
    X : array-like
        Points of shape ``(d, ...)``, none at the origin.

    Returns
    -------
    np.ndarray
        Gradient of shape ``(d, ...)``.
    """
    X = np.asarray(X, dtype=float)
    d = X.shape[0]
    r = np.sqrt(np.sum(X ** 2, axis=0))
    if np.any(r == 0.0):
        raise ValueError("Input Error: the Newton kernel is singular at X = 0.")
    return X / (surface_area(d) * r ** d)


def newton_hessian(X) -> np.ndarray:
    """
    ``K_ij(X) = ∂_i∂_j N(X) = (δ_ij - d x̂_i x̂_j) / (ω_d |X|^d)``, shape ``(d, d, ...)``.
    """
    X = np.asarray(X, dtype=float)
    d = X.shape[0]
    r = np.sqrt(np.sum(X ** 2, axis=0))
    with np.errstate(divide='ignore', invalid='ignore'):
        xh = X / r
        out = (np.eye(d).reshape((d, d) + (1,) * (X.ndim - 1)) - d * xh[:, None] * xh[None, :]) \
            / (surface_area(d) * r ** d)
    return out


@dataclass(frozen=True)
class CutoffProfile:
    """
    The cutoff ``θ`` and its radial antiderivative profiles.

    Notes
    -----
    1. ``θ₁′ = θ N_r`` with ``θ₁ = 0`` on ``[2, ∞)``; ``θ₂′ = (1 - θ) N_r`` with ``θ₂ = 0`` on ``[0, 1]``. Hence
       ``θ₁ + θ₂ = N - N(1) - c`` with ``c = ∫₁² θ N_r``, and ``∇θ₁(|X|) = θ∇N``, ``∇θ₂(|X|) = (1 - θ)∇N``.
    2. On ``[1, 2]`` both are integrated with ``solve_ivp``; the residual compares the ODE value ``θ₁(1)`` with the
       closed form ``-c`` from adaptive quadrature.

    Parameters
    ----------
    d : int
        Dimension.

    c : float
        ``∫₁² θ N_r dr``.

    residual : float
        ``|θ₁(1) + c|`` between the ODE and the quadrature.
    """
    # Data Class Attributes:
    d: int
    c: float
    residual: float
    _solution: object

    @classmethod
    @lru_cache(maxsize=4)
    def build(cls, d: int = 2) -> 'CutoffProfile':
        c, err = integrate.quad(lambda r: float(theta(r)) * float(newton_radial_prime(r, d)), 1.0, 2.0,
                                epsabs=1e-14, epsrel=1e-13)
        if err > CUTOFF_RESIDUAL_TOL:
            raise QuadratureError("cutoff constant", err)
        sol = integrate.solve_ivp(lambda r, y: [float(theta(r)) * float(newton_radial_prime(r, d))],
                                  (2.0, 1.0), [0.0], method='DOP853', rtol=1e-13, atol=1e-15, dense_output=True)
        residual = abs(float(sol.y[0, -1]) + c)
        if residual > CUTOFF_RESIDUAL_TOL:
            raise QuadratureError("cutoff profile ODE", residual)
        logger.debug("Cutoff profile built for d=%d: c=%.12f, residual=%.2e", d, c, residual)
        return cls(d=d, c=c, residual=residual, _solution=sol.sol)

    def theta1(self, r) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        inner = newton_radial(np.maximum(r, 1e-300), self.d) - newton_radial(1.0, self.d) - self.c
        middle = self._solution(np.clip(r, 1.0, 2.0))[0]
        return np.where(r <= 1.0, inner, np.where(r >= 2.0, 0.0, middle))

    def theta2(self, r) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        total = newton_radial(np.maximum(r, 1e-300), self.d) - newton_radial(1.0, self.d) - self.c
        return np.where(r <= 1.0, 0.0, total - self.theta1(r))

    def theta2_prime(self, r) -> np.ndarray:
        return (1.0 - theta(r)) * newton_radial_prime(r, self.d)

    def theta2_second(self, r) -> np.ndarray:
        return -theta_prime(r) * newton_radial_prime(r, self.d) + (1.0 - theta(r)) * newton_radial_second(r, self.d)

    def theta_ij(self, X) -> np.ndarray:
        """
        ``θ_ij(X) = ∂_i∂_j θ₂(|X|) = θ₂″ x̂_ix̂_j + (θ₂′/r)(δ_ij - x̂_ix̂_j)``; vanishes for ``|X| ≤ 1``.
        """
        X = np.asarray(X, dtype=float)
        d = X.shape[0]
        r = np.sqrt(np.sum(X ** 2, axis=0))
        safe = np.maximum(r, 1.0)
        xh = X / safe
        outer = xh[:, None] * xh[None, :]
        eye = np.eye(d).reshape((d, d) + (1,) * (X.ndim - 1))
        out = self.theta2_second(safe) * outer + (self.theta2_prime(safe) / safe) * (eye - outer)
        return np.where(r > 1.0, out, 0.0)


def log_centre_cell(a: float) -> float:
    """``∫_{[-a,a]²} ½ ln(x² + y²) dx dy = a²(4 ln a + 2(ln 2 - 3 + π/2))``."""
    return a ** 2 * (4.0 * np.log(a) + 2.0 * (np.log(2.0) - 3.0 + np.pi / 2.0))


"""
----------------------------------------------------------------------------------------------------
Operator Kernels
----------------------------------------------------------------------------------------------------
"""
def _radius(X: np.ndarray) -> np.ndarray:
    return np.sqrt(np.sum(X ** 2, axis=0))


def ring_gradN(X, k: int, R: float = 1.0) -> np.ndarray:
    """
    ``φ_k(X) = ∇N(X)(θ(2^k|X|/R) - θ(2^{k+1}|X|/R))``, shape ``(d, ...)``; zero near the origin.
    """
    X = np.asarray(X, dtype=float)
    r = _radius(X)
    window = theta(2.0 ** k * r / R) - theta(2.0 ** (k + 1) * r / R)
    safe = np.where(r > 0, r, 1.0)
    return np.where(r > 0, X / (surface_area(X.shape[0]) * safe ** X.shape[0]), 0.0) * window


def core_gradN(X, rho: float) -> np.ndarray:
    """``∇N(X) θ(|X|/ρ)``, the sub-grid core of the near field."""
    X = np.asarray(X, dtype=float)
    r = _radius(X)
    safe = np.where(r > 0, r, 1.0)
    return np.where(r > 0, X / (surface_area(X.shape[0]) * safe ** X.shape[0]), 0.0) * theta(r / rho)


def witness_kernel(X, k: int) -> np.ndarray:
    """``φ*_k(X) = -∇N(X)·∇[θ(2^k|X|)] = -2^k θ′(2^k|X|) N_r(|X|) ≥ 0``, unit mass."""
    X = np.asarray(X, dtype=float)
    r = _radius(X)
    safe = np.where(r > 0, r, 1.0)
    return np.where(r > 0, -2.0 ** k * theta_prime(2.0 ** k * safe) * newton_radial_prime(safe, X.shape[0]), 0.0)


def ring_riesz(X, n: int) -> np.ndarray:
    """``φ_n(X) = K_ij(X)(θ(2^n|X|) - θ(2^{n+1}|X|))``, shape ``(d, d, ...)``."""
    X = np.asarray(X, dtype=float)
    r = _radius(X)
    window = theta(2.0 ** n * r) - theta(2.0 ** (n + 1) * r)
    return np.where(r > 0, newton_hessian(np.where(r > 0, X, 1.0)), 0.0) * window


def far_riesz(X, rho: float) -> np.ndarray:
    """``K_ij(X)(1 - θ(|X|/ρ))``, the coarse remainder of the Riesz ladder."""
    X = np.asarray(X, dtype=float)
    r = _radius(X)
    return np.where(r > 0, newton_hessian(np.where(r > 0, X, 1.0)), 0.0) * (1.0 - theta(r / rho))


def far_pressure(X, R: float = 1.0) -> np.ndarray:
    """
    ``∂_i∂_j[∇N(X)(1 - θ(|X|/R))]^m`` with shape ``(d, d, d, ...)`` indexed ``[i, j, m]``.

    Notes
    -----
    1. With ``F^m = x_m s(r)`` and ``s = (1 - θ(r/R)) / (ω_d r^d)``:
       ``∂_i∂_jF^m = a(δ_jm x_i + δ_im x_j + δ_ij x_m) + b x_i x_j x_m``, ``a = s′/r``, ``b = (s″ - s′/r)/r²``.
    2. Vanishes for ``|X| ≤ R`` and decays like ``|X|^{-(d+1)}``.
    """
    X = np.asarray(X, dtype=float)
    d = X.shape[0]
    r = _radius(X)
    rs = np.maximum(r, R)
    c = 1.0 / surface_area(d)
    q = 1.0 - theta(rs / R)
    q1 = -theta_prime(rs / R) / R
    q2 = -theta_second(rs / R) / R ** 2
    s1 = c * (q1 * rs ** (-d) - d * q * rs ** (-d - 1))
    s2 = c * (q2 * rs ** (-d) - 2 * d * q1 * rs ** (-d - 1) + d * (d + 1) * q * rs ** (-d - 2))
    a = s1 / rs
    b = (s2 - s1 / rs) / rs ** 2
    eye = np.eye(d).reshape((d, d) + (1,) * (X.ndim - 1))
    out = np.empty((d, d, d) + X.shape[1:])
    for i in range(d):
        for j in range(d):
            for m in range(d):
                out[i, j, m] = a * (eye[j, m] * X[i] + eye[i, m] * X[j] + eye[i, j] * X[m]) + b * X[i] * X[j] * X[m]
    return np.where(r > R, out, 0.0)


def heat_kernel(t: float, X) -> np.ndarray:
    """``K(t, X) = (4πt)^{-d/2} exp(-|X|²/4t)``."""
    X = np.asarray(X, dtype=float)
    d = X.shape[0]
    return (4.0 * np.pi * t) ** (-d / 2.0) * np.exp(-np.sum(X ** 2, axis=0) / (4.0 * t))


def heat_kernel_derivatives(t: float, X, k: int) -> np.ndarray:
    """
    Pointwise magnitude of ``∇^k K(t, X)`` for ``k ∈ {0, 1, 2}`` (Euclidean / Frobenius).
    """
    X = np.asarray(X, dtype=float)
    d = X.shape[0]
    K = heat_kernel(t, X)
    if k == 0:
        return K
    if k == 1:
        return K * np.sqrt(np.sum(X ** 2, axis=0)) / (2.0 * t)
    outer = X[:, None] * X[None, :] / (4.0 * t ** 2)
    eye = np.eye(d).reshape((d, d) + (1,) * (X.ndim - 1)) / (2.0 * t)
    return K * np.sqrt(np.sum((outer - eye) ** 2, axis=(0, 1)))


def fd_derivative(func, X, axis: int, h: float) -> np.ndarray:
    """
    Fourth-order central difference of an analytic kernel along ``axis`` with step ``h``.
    """
    X = np.asarray(X, dtype=float)
    e = np.zeros(X.shape[0])
    e[axis] = h
    e = e.reshape((-1,) + (1,) * (X.ndim - 1))
    return (func(X - 2 * e) - 8.0 * func(X - e) + 8.0 * func(X + e) - func(X + 2 * e)) / (12.0 * h)
