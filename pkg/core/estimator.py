"""Quantized estimation pipeline, baseline estimators and samplers.

Encoding splits X into a magnitude (b-hat squared on the grid) and a
direction (nearest random unit codeword); decoding rescales the codeword by
the shrinkage that the rate allows.
"""

import logging
import math

import numpy as np

from core.codebook import (
    codeword,
    codeword_count,
    decode_magnitude,
    encode_magnitude,
    magnitude_grid,
    search_direction,
)
from core.theory import achieving_noise_variance, distortion
from utils.errors import DomainError, UsageError
from utils.prng import NOISE_TAG, TESTDIST_TAGS, THETA_TAG, derive_seed, gaussian_vector
from validation.experiment_models import EstimatorName
from validation.model_params import LossDecomposition, ModelParams, QuantizedIndex, Vector, as_vector

logger = logging.getLogger(__name__)


def _sigma2(value: float) -> float:
    s = float(value)
    if not math.isfinite(s) or s <= 0:
        raise DomainError(f"sigma2 must be positive and finite, got {value}")
    return s


def estimate_b2(x, sigma2: float) -> float:
    """|x|^2/n - sigma2; may be negative, callers clamp explicitly."""
    x = as_vector(x)
    return float(np.sum(x * x)) / x.shape[0] - float(sigma2)


def encode_observation(x, params: ModelParams, seed: int, workers: int | None = None) -> tuple[QuantizedIndex, float]:
    """Encode X into (magnitude index, direction index) and report the achieved inner product."""
    x = as_vector(x, n=params.n)
    grid = magnitude_grid(params.n, params.c2)
    mag_index = encode_magnitude(estimate_b2(x, params.sigma2), grid)
    count = codeword_count(params.n, params.rate_b)
    if count == 1:
        dir_index, inner = 0, float(np.sum(codeword(seed, 0, params.n) * x))
    else:
        dir_index, inner = search_direction(x, seed, count, workers=workers)
    return QuantizedIndex(mag_index=mag_index, dir_index=dir_index, seed=seed), inner


def quantized_encode(x, params: ModelParams, seed: int, workers: int | None = None) -> QuantizedIndex:
    idx, _ = encode_observation(x, params, seed, workers=workers)
    return idx


def quantized_decode(idx: QuantizedIndex, params: ModelParams) -> Vector:
    """sqrt(n b^4 (1 - 2^-2B) / (b^2 + sigma2)) times the decoded codeword.

    Uses the nominal rate B, not log2(count)/n.
    """
    grid = magnitude_grid(params.n, params.c2)
    b2_check = decode_magnitude(idx.mag_index, grid)
    count = codeword_count(params.n, params.rate_b)
    if idx.dir_index >= count:
        raise UsageError(f"direction index {idx.dir_index} out of range for a codebook of {count}")
    factor = 1.0 - 2.0 ** (-2.0 * float(params.rate_b))
    scale = math.sqrt(params.n * b2_check * b2_check * factor / (b2_check + params.sigma2))
    if scale == 0.0:
        return np.zeros(params.n)
    return scale * codeword(idx.seed, idx.dir_index, params.n)


def james_stein(x, sigma2: float) -> Vector:
    """(1 - (n-2) sigma2 / |x|^2) x, without the positive-part clamp."""
    x = as_vector(x)
    n = x.shape[0]
    if n < 3:
        raise DomainError(f"James-Stein needs n >= 3, got n={n}")
    norm2 = float(np.sum(x * x))
    if norm2 == 0:
        raise DomainError("James-Stein is undefined at the zero vector")
    return (1.0 - (n - 2) * _sigma2(sigma2) / norm2) * x


def shrinkage_factor(x, sigma2: float) -> float:
    """gamma-hat = b2 / (b2 + sigma2) with b-hat squared clamped at zero."""
    s = _sigma2(sigma2)
    b2 = max(estimate_b2(x, s), 0.0)
    return b2 / (b2 + s)


def linear_shrinkage(x, sigma2: float) -> Vector:
    x = as_vector(x)
    return shrinkage_factor(x, sigma2) * x


def zero_estimate(x) -> Vector:
    return np.zeros(as_vector(x).shape[0])


def loss_decomposition(theta, x, theta_check, sigma2: float) -> LossDecomposition:
    """Split d(theta, theta_check) into quantization, shrinkage and cross terms."""
    theta = np.asarray(theta, dtype=np.float64)
    x = np.asarray(x, dtype=np.float64)
    theta_check = np.asarray(theta_check, dtype=np.float64)
    if not (theta.shape == x.shape == theta_check.shape) or theta.ndim != 1:
        raise UsageError(
            f"loss decomposition needs equal-length vectors, got {theta.shape}, {x.shape}, {theta_check.shape}"
        )
    shrunk = shrinkage_factor(x, sigma2) * x
    quantization = theta_check - shrunk
    shrinkage = shrunk - theta
    return LossDecomposition(
        a1=float(np.mean(quantization * quantization)),
        a2=float(np.mean(shrinkage * shrinkage)),
        a3=2.0 * float(np.mean(quantization * shrinkage)),
        total=distortion(theta, theta_check),
    )


def sample_mean_on_sphere(n: int, b2: float, seed: int) -> Vector:
    """theta uniform on the sphere |theta|^2/n = b2."""
    if float(b2) < 0 or not math.isfinite(float(b2)):
        raise DomainError(f"b2 must be nonnegative, got {b2}")
    if b2 == 0:
        return np.zeros(n)
    g = gaussian_vector(derive_seed(seed, THETA_TAG), n)
    return math.sqrt(n * float(b2)) * g / math.sqrt(float(np.sum(g * g)))


def sample_observation(theta, sigma2: float, seed: int) -> Vector:
    """X_i ~ N(theta_i, sigma2) independently."""
    theta = as_vector(theta, name="theta")
    noise = gaussian_vector(derive_seed(seed, NOISE_TAG), theta.shape[0])
    return theta + math.sqrt(_sigma2(sigma2)) * noise


def sample_testdist(n: int, D: float, sigma2: float, c2: float, seed: int) -> tuple[Vector, Vector, Vector]:
    """Joint draw (theta, X, theta_tilde) from the distribution attaining the rate bound at risk D.

    theta_tilde ~ N(0, g^2 (s + c2 - v)), X ~ N(theta_tilde / g, v),
    theta ~ N(g X, g s) with g = c2/(s + c2) and v chosen so E d(theta, theta_tilde) = D.
    """
    s = _sigma2(sigma2)
    v = achieving_noise_variance(D, s, c2)
    gamma = float(c2) / (s + float(c2))
    tilde_seed, x_seed, theta_seed = (derive_seed(seed, tag) for tag in TESTDIST_TAGS)
    theta_tilde = gamma * math.sqrt(s + float(c2) - v) * gaussian_vector(tilde_seed, n)
    x = theta_tilde / gamma + math.sqrt(v) * gaussian_vector(x_seed, n)
    theta = gamma * x + math.sqrt(gamma * s) * gaussian_vector(theta_seed, n)
    return theta, x, theta_tilde


def apply_estimator(name: EstimatorName, x, params: ModelParams, seed: int, workers: int | None = 1) -> Vector:
    name = EstimatorName(name)
    if name is EstimatorName.QUANTIZED:
        return quantized_decode(quantized_encode(x, params, seed, workers=workers), params)
    if name is EstimatorName.JAMES_STEIN:
        return james_stein(x, params.sigma2)
    if name is EstimatorName.LINEAR_SHRINKAGE:
        return linear_shrinkage(x, params.sigma2)
    return zero_estimate(x)
