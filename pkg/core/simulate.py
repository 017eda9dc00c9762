"""Monte Carlo harness: MSE-versus-n grids, the shrinkage comparison and loss decompositions.

Every replicate derives its own (theta, noise, codebook) seeds from
(master_seed, n, r), so results do not depend on scheduling or worker count.
"""

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np
from pydantic import ValidationError

from config.settings import get_settings
from core.estimator import (
    apply_estimator,
    james_stein,
    loss_decomposition,
    quantized_decode,
    quantized_encode,
    sample_mean_on_sphere,
    sample_observation,
)
from core.theory import distortion, quantized_risk_bound
from utils.errors import CapacityError, GridError, QgsmError, UsageError, validation_detail
from utils.prng import CODEBOOK_TAG, NOISE_TAG, THETA_TAG, derive_seed
from validation.experiment_models import CellResult, EstimatorName, ExperimentSpec, ShrinkageResult
from validation.model_params import LossDecomposition, ModelParams, coerce_rate

logger = logging.getLogger(__name__)


def derive_replicate_seeds(master_seed: int, n: int, r: int) -> tuple[int, int, int]:
    base = derive_seed(master_seed, n, r)
    return derive_seed(base, THETA_TAG), derive_seed(base, NOISE_TAG), derive_seed(base, CODEBOOK_TAG)


def check_desk_scale(params: ModelParams, allow_large: bool = False) -> None:
    limit = get_settings().desk_scale_max_bits
    if params.total_bits > limit and not allow_large:
        detail = (
            f"cell n={params.n}, B={params.rate_b}: n*B = {params.total_bits} bits exceeds the "
            f"desk-scale limit of {limit}; set allow_large to run it"
        )
        logger.warning(f"Refusing {detail}")
        raise CapacityError(detail)


def run_replicate(params: ModelParams, b2: float, estimator: EstimatorName, master_seed: int, r: int) -> float:
    theta_seed, noise_seed, codebook_seed = derive_replicate_seeds(master_seed, params.n, r)
    theta = sample_mean_on_sphere(params.n, b2, theta_seed)
    x = sample_observation(theta, params.sigma2, noise_seed)
    estimate = apply_estimator(estimator, x, params, codebook_seed, workers=1)
    return distortion(theta, estimate)


def _map_replicates(fn, args_list, workers: int) -> list:
    if workers <= 1 or len(args_list) <= 1:
        return [fn(*args) for args in args_list]
    with ProcessPoolExecutor(max_workers=min(workers, len(args_list))) as pool:
        futures = [pool.submit(fn, *args) for args in args_list]
        return [f.result() for f in futures]


def run_cell(spec: ExperimentSpec, n: int, estimator: EstimatorName, workers: int | None = None) -> CellResult:
    if n not in spec.n_values:
        raise UsageError(f"n={n} is not one of the experiment n_values {spec.n_values}")
    estimator = EstimatorName(estimator)
    params = ModelParams(n=n, rate_b=spec.rate_b, sigma2=spec.sigma2, c2=spec.c2)
    b2 = spec.b2
    if estimator is EstimatorName.QUANTIZED:
        check_desk_scale(params, spec.allow_large)
    workers = get_settings().workers if workers is None else workers
    # only the codebook search is worth a process pool
    if estimator is not EstimatorName.QUANTIZED:
        workers = 1

    logger.info(f"Running cell n={n} estimator={estimator.value} with {spec.replicates} replicates")
    args_list = [(params, b2, estimator, spec.master_seed, r) for r in range(spec.replicates)]
    mses = np.asarray(_map_replicates(run_replicate, args_list, workers), dtype=np.float64)
    return CellResult(
        n=n,
        estimator=estimator,
        mean_mse=float(np.mean(mses)),
        sd_mse=float(np.std(mses, ddof=1)) if mses.size > 1 else 0.0,
        replicates=int(mses.size),
        lower_bound=quantized_risk_bound(spec.rate_b, spec.sigma2, b2),
    )


def run_grid(spec: ExperimentSpec, workers: int | None = None) -> list[CellResult]:
    """All cells, n ascending then estimator name; failing cells are collected, not fatal."""
    results, failures = [], []
    for n in sorted(spec.n_values):
        for estimator in sorted(spec.estimators, key=lambda e: e.value):
            try:
                results.append(run_cell(spec, n, estimator, workers=workers))
            except QgsmError as e:
                logger.error(f"Cell n={n} estimator={estimator.value} failed: {e.detail}")
                failures.append((n, estimator.value, e.detail))
    if failures:
        raise GridError(failures, results)
    return results


def load_spec(path: Path) -> ExperimentSpec:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise UsageError(f"cannot read experiment spec {path}: {e}")
    try:
        return ExperimentSpec.model_validate_json(text)
    except ValidationError as e:
        raise UsageError(validation_detail(e))


def run_decomposition(params: ModelParams, b2: float, replicates: int, seed: int,
                      allow_large: bool = False, workers: int | None = None) -> list[LossDecomposition]:
    """Per-replicate A1/A2/A3 split of the quantized estimator's loss."""
    if replicates < 1:
        raise UsageError(f"replicates must be positive, got {replicates}")
    check_desk_scale(params, allow_large)
    workers = get_settings().workers if workers is None else workers
    args_list = [(params, b2, seed, r) for r in range(replicates)]
    return _map_replicates(_decompose_replicate, args_list, workers)


def _decompose_replicate(params: ModelParams, b2: float, seed: int, r: int) -> LossDecomposition:
    theta_seed, noise_seed, codebook_seed = derive_replicate_seeds(seed, params.n, r)
    theta = sample_mean_on_sphere(params.n, b2, theta_seed)
    x = sample_observation(theta, params.sigma2, noise_seed)
    theta_check = quantized_decode(quantized_encode(x, params, codebook_seed, workers=1), params)
    return loss_decomposition(theta, x, theta_check, params.sigma2)


def shrinkage_comparison(n: int = 15, c2: float = 4.0, sigma2: float = 1.0,
                         rates=(0.1, 0.2, 0.5, 1.0), replicates: int = 100, seed: int = 0) -> ShrinkageResult:
    """Average quantized estimates at several rates next to James-Stein, for one fixed theta."""
    if replicates < 1:
        raise UsageError(f"replicates must be positive, got {replicates}")
    rate_values = [coerce_rate(r) for r in rates]
    if not rate_values:
        raise UsageError("at least one rate is required")
    param_sets = [ModelParams(n=n, rate_b=rate, sigma2=sigma2, c2=c2) for rate in rate_values]
    for params in param_sets:
        check_desk_scale(params)

    theta = sample_mean_on_sphere(n, c2, seed)
    sums = np.zeros((len(param_sets), n))
    norm_sums = np.zeros(len(param_sets))
    js_sum = np.zeros(n)
    for r in range(replicates):
        _, noise_seed, codebook_seed = derive_replicate_seeds(seed, n, r)
        x = sample_observation(theta, sigma2, noise_seed)
        for k, params in enumerate(param_sets):
            estimate = quantized_decode(quantized_encode(x, params, codebook_seed, workers=1), params)
            sums[k] += estimate
            norm_sums[k] += math.sqrt(float(np.sum(estimate * estimate)))
        js_sum += james_stein(x, sigma2)

    logger.info(f"Shrinkage comparison finished: n={n}, {len(param_sets)} rates, {replicates} replicates")
    return ShrinkageResult(
        theta=theta.tolist(),
        rates=[float(rate) for rate in rate_values],
        quantized_means=(sums / replicates).tolist(),
        james_stein_mean=(js_sum / replicates).tolist(),
        mean_norms=(norm_sums / replicates).tolist(),
        replicates=replicates,
    )
