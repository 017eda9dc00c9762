"""Closed-form risk, rate, density and tail-bound formulas.

All rates are in bits; a natural-log exponent beta converts as beta = B ln 2.
These functions are the analytic oracles the estimator and the Monte Carlo
harness are checked against. Every function is pure.
"""

import math
from numbers import Real

import numpy as np
from scipy import integrate, special

from utils.errors import DomainError, UsageError


def _positive(name: str, value: Real) -> float:
    v = float(value)
    if not math.isfinite(v) or v <= 0:
        raise DomainError(f"{name} must be positive and finite, got {value}")
    return v


def _nonnegative(name: str, value: Real, allow_inf: bool = False) -> float:
    v = float(value)
    if math.isnan(v) or v < 0 or (math.isinf(v) and not allow_inf):
        raise DomainError(f"{name} must be nonnegative, got {value}")
    return v


def _open_unit(name: str, value: Real) -> float:
    v = float(value)
    if not 0 < v < 1:
        raise DomainError(f"{name} must lie in (0, 1), got {value}")
    return v


def _dimension(n: int, minimum: int = 1) -> int:
    if int(n) != n or n < minimum:
        raise DomainError(f"n must be an integer >= {minimum}, got {n}")
    return int(n)


def pinsker_risk(sigma2: Real, c2: Real) -> float:
    """Unconstrained asymptotic minimax risk over the ball, s c / (s + c)."""
    s = _positive("sigma2", sigma2)
    c = _positive("c2", c2)
    return s * c / (s + c)


def quantized_risk_bound(rate_b: Real, sigma2: Real, b2: Real) -> float:
    """Quantized minimax risk at rate B for signal energy b2.

    With b2 = c2 this is the minimax lower bound; with b2 = |theta|^2/n it is
    the adaptive target the coding method attains. rate_b may be infinite.
    """
    rate = _nonnegative("rate_b", rate_b, allow_inf=True)
    s = _positive("sigma2", sigma2)
    b = _nonnegative("b2", b2)
    return s * b / (s + b) + b * b * 2.0 ** (-2.0 * rate) / (s + b)


def distortion_rate_gaussian(rate_b: Real, sigma2: Real) -> float:
    rate = _nonnegative("rate_b", rate_b, allow_inf=True)
    return _positive("sigma2", sigma2) * 2.0 ** (-2.0 * rate)


def rate_lower_bound(D: Real, sigma2: Real, c2: Real) -> float:
    """Smallest rate compatible with risk D: inverse of quantized_risk_bound in B.

    Returns 0 for D at or above the zero-rate risk c2.
    """
    floor = pinsker_risk(sigma2, c2)
    d = float(D)
    if not math.isfinite(d) or d <= floor:
        raise DomainError(f"D must exceed the Pinsker risk {floor!r}, got {D} (infinite rate)")
    s, c = float(sigma2), float(c2)
    excess_at_zero = c * c / (s + c)
    excess = d - floor
    if excess >= excess_at_zero:
        return 0.0
    return 0.5 * math.log2(excess_at_zero / excess)


def distortion(x, y) -> float:
    """Per-coordinate squared error (1/n) sum (x_i - y_i)^2."""
    a = np.asarray(x, dtype=np.float64)
    b = np.asarray(y, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise UsageError(f"distortion needs equal-length vectors, got {a.shape} and {b.shape}")
    diff = a - b
    return float(np.mean(diff * diff))


def chi2_mean_tail_bound(n: int, t: Real) -> float:
    """Bound on P(|mean(Z_i^2 - 1)| > t) for n standard normals."""
    n = _dimension(n)
    t = _open_unit("t", t)
    return 2.0 * math.exp(-n * t * t / 8.0)


def bhat_concentration_bound(n: int, t: Real, sigma2: Real, b2: Real) -> float:
    """Bound on P(|mean(X_i^2) - b2 - sigma2| >= t) when |theta|^2/n = b2."""
    n = _dimension(n)
    t = _positive("t", t)
    s = _positive("sigma2", sigma2)
    b2 = _nonnegative("b2", b2)
    chi2_part = 2.0 * math.exp(-n * t * t / (32.0 * s * s))
    if b2 == 0:
        return chi2_part
    sigma, b = math.sqrt(s), math.sqrt(b2)
    mean_part = 8.0 * sigma * b / math.sqrt(2.0 * math.pi * n * t * t) * math.exp(-n * t * t / (32.0 * s * b2))
    return chi2_part + mean_part


def _sphere_log_coef(n: int) -> float:
    # log-gamma difference keeps large n finite
    return special.gammaln(n / 2.0) - special.gammaln((n - 1) / 2.0) - 0.5 * math.log(math.pi)


def sphere_inner_density(rho, n: int):
    """Density of <x, Y> for fixed unit x and Y uniform on the unit sphere in R^n."""
    n = _dimension(n, minimum=2)
    r = np.asarray(rho, dtype=np.float64)
    inside = np.abs(r) < 1.0
    safe = np.where(inside, 1.0 - r * r, 1.0)
    value = np.where(inside, np.exp(_sphere_log_coef(n) + 0.5 * (n - 3) * np.log(safe)), 0.0)
    return float(value) if value.ndim == 0 else value


def sphere_inner_moment(k: int, n: int) -> float:
    """k-th moment of the sphere inner product.

    rho^2 is Beta(1/2, (n-1)/2), so odd moments vanish and
    E[rho^(2m)] = B(m + 1/2, (n-1)/2) / B(1/2, (n-1)/2).
    """
    n = _dimension(n, minimum=2)
    if int(k) != k or k < 0:
        raise DomainError(f"k must be a nonnegative integer, got {k}")
    if k % 2:
        return 0.0
    m = int(k) // 2
    b = 0.5 * (n - 1)
    return math.exp(special.betaln(m + 0.5, b) - special.betaln(0.5, b))


def sphere_inner_cdf(rho, n: int):
    """CDF of the inner product; (rho + 1)/2 is Beta((n-1)/2, (n-1)/2)."""
    n = _dimension(n, minimum=2)
    r = np.clip(np.asarray(rho, dtype=np.float64), -1.0, 1.0)
    a = 0.5 * (n - 1)
    value = special.betainc(a, a, 0.5 * (r + 1.0))
    return float(value) if value.ndim == 0 else value


def expected_max_inner(n: int, count: int, grid_points: int = 200001) -> float:
    """Exact finite-n mean of the largest of `count` i.i.d. inner products.

    E[L] = 1 - integral_{-1}^{1} F(u)^count du, evaluated on a dense grid with
    F^count = exp(count * log1p(-S(u))) to stay accurate when F is near 1.
    """
    n = _dimension(n, minimum=2)
    if count < 1:
        raise DomainError(f"count must be >= 1, got {count}")
    u = np.linspace(-1.0, 1.0, grid_points)
    a = 0.5 * (n - 1)
    survival = special.betaincc(a, a, 0.5 * (u + 1.0))
    with np.errstate(divide="ignore"):
        powered = np.exp(count * np.log1p(-np.minimum(survival, 1.0)))
    return 1.0 - float(integrate.trapezoid(powered, u))


def extreme_angle_limit(rate_b: Real) -> float:
    """In-probability limit of the max inner product over 2^(nB) sphere points."""
    rate = _nonnegative("rate_b", rate_b)
    return math.sqrt(1.0 - 2.0 ** (-2.0 * rate))


def orthogonality_tail(n: int, eps: Real, k_const: Real) -> float:
    """K sqrt(n) (1 - eps^2)^((n-2)/2), bounding P(|<U, x>| > eps) for unit x."""
    n = _dimension(n, minimum=2)
    eps = _open_unit("eps", eps)
    k = _positive("k_const", k_const)
    return k * math.sqrt(n) * (1.0 - eps * eps) ** (0.5 * (n - 2))


def prior_tail_bound(n: int, delta: Real) -> float:
    """Mass of the N(0, c^2 delta^2 I) prior outside the ball of squared radius c^2 n."""
    n = _dimension(n)
    d = _open_unit("delta", delta)
    d2 = d * d
    return 2.0 * math.exp(-n * (1.0 - d2) ** 2 / (8.0 * d2 * d2))


def effective_rate(n: int, c2: Real, rate_b: Real) -> float:
    """Bits per coordinate including the magnitude index: B + log2(c2)/n + log2(n)/(2n)."""
    n = _dimension(n)
    c = _positive("c2", c2)
    rate = _nonnegative("rate_b", rate_b)
    return rate + math.log2(c) / n + math.log2(n) / (2.0 * n)


def adaptive_risk_threshold(n: int, rate_b: Real, sigma2: Real, b2: Real, c_const: Real) -> float:
    """Adaptive high-probability threshold: risk bound at b2 plus C sqrt(log n / n)."""
    n = _dimension(n)
    c = _nonnegative("c_const", c_const)
    return quantized_risk_bound(rate_b, sigma2, b2) + c * math.sqrt(math.log(n) / n)


def achieving_noise_variance(D: Real, sigma2: Real, c2: Real) -> float:
    """Variance of X around theta_tilde/gamma that makes E d(theta, theta_tilde) = D."""
    floor = pinsker_risk(sigma2, c2)
    c = float(c2)
    d = float(D)
    if not floor < d < c:
        raise DomainError(f"D must lie strictly between the Pinsker risk {floor!r} and c2={c!r}, got {D}")
    gamma = c / (float(sigma2) + c)
    return (d - floor) / (gamma * gamma)
