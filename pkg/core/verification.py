"""Empirical-versus-analytic property suites behind `verify`.

Tail suites pass when the empirical frequency stays below the analytic bound
plus three Monte Carlo standard errors. Equality suites compare a sample mean
with its exact value.
"""

import logging
import math

import numpy as np

from config.settings import Settings, get_settings
from core.codebook import codeword_block, codeword_count, search_direction
from core.estimator import sample_testdist
from core.theory import (
    bhat_concentration_bound,
    chi2_mean_tail_bound,
    distortion,
    expected_max_inner,
    extreme_angle_limit,
    orthogonality_tail,
    pinsker_risk,
    prior_tail_bound,
    sphere_inner_cdf,
    sphere_inner_moment,
)
from utils.errors import UsageError
from utils.prng import CODEBOOK_TAG, derive_seed
from validation.experiment_models import SuiteCase, SuiteReport

logger = logging.getLogger(__name__)

# floats per Monte Carlo chunk
CHUNK_ELEMENTS = 1 << 22
MC_SIGMAS = 3.0
# two-sided equality checks on codebook samples
EQUALITY_SIGMAS = 4.0
EXTREME_ANGLE_TOLERANCE = 0.08
EXTREME_ANGLE_SEEDS = 20
EXTREME_ANGLE_CASES = ((32, 0.5), (16, 1.0))
EXTREME_ANGLE_FULL_CASES = ((32, 0.5), (48, 0.5), (24, 1.0))
TESTDIST_DRAWS = 10_000


def _tail_frequency(rng: np.random.Generator, replicates: int, n: int, event) -> float:
    """Fraction of (replicates x n) standard normal rows for which `event` holds."""
    chunk = max(1, CHUNK_ELEMENTS // n)
    hits, done = 0, 0
    while done < replicates:
        k = min(chunk, replicates - done)
        hits += int(np.count_nonzero(event(rng.standard_normal((k, n)))))
        done += k
    return hits / replicates


def _tail_case(label: str, freq: float, bound: float, replicates: int) -> SuiteCase:
    slack = MC_SIGMAS * math.sqrt(freq * (1.0 - freq) / replicates)
    return SuiteCase(label=label, observed=freq, bound=bound, slack=slack, passed=freq <= bound + slack)


def _equality_case(label: str, observed: float, expected: float, slack: float) -> SuiteCase:
    return SuiteCase(label=label, observed=observed, bound=expected, slack=slack,
                     passed=abs(observed - expected) <= slack)


def _mean_case(label: str, samples: np.ndarray, expected: float, sigmas: float = MC_SIGMAS) -> SuiteCase:
    se = float(np.std(samples, ddof=1)) / math.sqrt(samples.size)
    return _equality_case(label, float(np.mean(samples)), expected, sigmas * se)


def chi2_tail(settings: Settings, full: bool = False) -> list[SuiteCase]:
    rng = np.random.default_rng([settings.verify_seed, 1])
    reps = settings.verify_replicates
    cases = []
    for n in (16, 64, 256):
        for t in (0.2, 0.4, 0.6):
            freq = _tail_frequency(rng, reps, n, lambda z: np.abs(np.mean(z * z, axis=1) - 1.0) > t)
            cases.append(_tail_case(f"n={n} t={t}", freq, chi2_mean_tail_bound(n, t), reps))
    return cases


def bhat_concentration(settings: Settings, full: bool = False) -> list[SuiteCase]:
    rng = np.random.default_rng([settings.verify_seed, 2])
    reps = settings.verify_replicates
    sigma2 = 1.0
    cases = []
    for b2 in (0.0, 1.0):
        theta_i = math.sqrt(b2)
        for n in (16, 64, 256):
            for t in (0.5, 1.0):
                def event(z, t=t, theta_i=theta_i, b2=b2):
                    x = theta_i + math.sqrt(sigma2) * z
                    return np.abs(np.mean(x * x, axis=1) - b2 - sigma2) >= t
                freq = _tail_frequency(rng, reps, n, event)
                bound = bhat_concentration_bound(n, t, sigma2, b2)
                cases.append(_tail_case(f"b2={b2} n={n} t={t}", freq, bound, reps))
    return cases


def sphere_density(settings: Settings, full: bool = False) -> list[SuiteCase]:
    cases = []
    for n in (2, 3, 5, 10, 50, 400):
        cases.append(_equality_case(f"n={n} normalization", sphere_inner_moment(0, n), 1.0, 1e-9))
        cases.append(_equality_case(f"n={n} second moment", sphere_inner_moment(2, n), 1.0 / n, 1e-6))

    reps = settings.verify_replicates
    seed = derive_seed(settings.verify_seed, CODEBOOK_TAG)
    for n in (3, 10, 50):
        chunk = max(1, CHUNK_ELEMENTS // n)
        rho = np.concatenate([
            codeword_block(seed, lo, min(lo + chunk, reps), n)[:, 0] for lo in range(0, reps, chunk)
        ])
        cases.append(_mean_case(f"n={n} codeword mean", rho, 0.0, EQUALITY_SIGMAS))
        cases.append(_mean_case(f"n={n} codeword second moment", rho * rho, 1.0 / n, EQUALITY_SIGMAS))
        point = 1.0 / math.sqrt(n)
        p = sphere_inner_cdf(point, n)
        slack = EQUALITY_SIGMAS * math.sqrt(p * (1.0 - p) / reps)
        cases.append(_equality_case(f"n={n} cdf at 1/sqrt(n)", float(np.mean(rho <= point)), p, slack))
    return cases


def extreme_angle(settings: Settings, full: bool = False) -> list[SuiteCase]:
    """Mean best inner product against the sqrt(1 - 2^-2B) limit and the exact finite-n mean."""
    rng = np.random.default_rng([settings.verify_seed, 4])
    cases = []
    for n, rate in (EXTREME_ANGLE_FULL_CASES if full else EXTREME_ANGLE_CASES):
        count = codeword_count(n, rate)
        best = np.empty(EXTREME_ANGLE_SEEDS)
        for s in range(EXTREME_ANGLE_SEEDS):
            x = rng.standard_normal(n)
            x /= np.linalg.norm(x)
            _, best[s] = search_direction(x, derive_seed(settings.verify_seed, CODEBOOK_TAG, n, s), count)
        label = f"n={n} B={rate} N={count}"
        cases.append(_equality_case(f"{label} limit", float(np.mean(best)), extreme_angle_limit(rate),
                                    EXTREME_ANGLE_TOLERANCE))
        cases.append(_mean_case(f"{label} finite-n mean", best, expected_max_inner(n, count), EQUALITY_SIGMAS))
    return cases


def orthogonality(settings: Settings, full: bool = False) -> list[SuiteCase]:
    rng = np.random.default_rng([settings.verify_seed, 5])
    reps = settings.verify_replicates
    cases = []
    for n in (4, 16, 64):
        for eps in (0.2, 0.4, 0.6):
            def event(z, eps=eps):
                return np.abs(z[:, 0]) > eps * np.sqrt(np.sum(z * z, axis=1))
            freq = _tail_frequency(rng, reps, n, event)
            bound = orthogonality_tail(n, eps, settings.orthogonality_k)
            cases.append(_tail_case(f"n={n} eps={eps}", freq, bound, reps))
    return cases


def prior_tail(settings: Settings, full: bool = False) -> list[SuiteCase]:
    """Prior N(0, c^2 delta^2 I) escaping the ball; c = 1 without loss of generality."""
    rng = np.random.default_rng([settings.verify_seed, 6])
    reps = settings.verify_replicates
    cases = []
    for n in (16, 64, 256):
        for delta in (0.75, 0.8, 0.9):
            def event(z, d2=delta * delta):
                return d2 * np.mean(z * z, axis=1) > 1.0
            freq = _tail_frequency(rng, reps, n, event)
            cases.append(_tail_case(f"n={n} delta={delta}", freq, prior_tail_bound(n, delta), reps))
    return cases


def testdist_moments(settings: Settings, full: bool = False) -> list[SuiteCase]:
    n, sigma2, c2, D = 50, 1.0, 1.0, 0.75
    gamma = c2 / (sigma2 + c2)
    to_tilde = np.empty(TESTDIST_DRAWS)
    to_linear = np.empty(TESTDIST_DRAWS)
    energy = np.empty(TESTDIST_DRAWS)
    for k in range(TESTDIST_DRAWS):
        theta, x, theta_tilde = sample_testdist(n, D, sigma2, c2, derive_seed(settings.verify_seed, k))
        to_tilde[k] = distortion(theta, theta_tilde)
        to_linear[k] = distortion(theta, gamma * x)
        energy[k] = float(np.mean(theta * theta))
    return [
        _mean_case(f"n={n} E d(theta, theta_tilde) = D", to_tilde, D),
        _mean_case(f"n={n} E d(theta, gamma X) = Pinsker", to_linear, pinsker_risk(sigma2, c2)),
        _mean_case(f"n={n} E theta_i^2 = c2", energy, c2),
    ]


SUITES = {
    "chi2-tail": chi2_tail,
    "bhat-concentration": bhat_concentration,
    "sphere-density": sphere_density,
    "extreme-angle": extreme_angle,
    "orthogonality": orthogonality,
    "prior-tail": prior_tail,
    "testdist-moments": testdist_moments,
}


def run_suite(name: str, settings: Settings | None = None, full: bool = False) -> SuiteReport:
    if name not in SUITES:
        raise UsageError(f"unknown suite {name!r}; choose from {', '.join(SUITES)} or all")
    settings = settings or get_settings()
    logger.info(f"Running suite {name}")
    report = SuiteReport(name=name, cases=SUITES[name](settings, full))
    logger.info(f"Suite {name}: {'pass' if report.passed else 'FAIL'} ({len(report.cases)} cases)")
    return report


def run_all(settings: Settings | None = None, full: bool = False) -> list[SuiteReport]:
    return [run_suite(name, settings, full) for name in SUITES]
