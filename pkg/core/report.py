"""CSV and SVG emitters for simulation results and bound tables."""

import csv
import io
import logging
from itertools import groupby

import matplotlib
from matplotlib.figure import Figure

from core.theory import distortion_rate_gaussian, pinsker_risk, quantized_risk_bound
from utils.errors import UsageError
from validation.experiment_models import CellResult, ShrinkageResult
from validation.model_params import LossDecomposition

logger = logging.getLogger(__name__)

CSV_HEADER = ["n", "estimator", "mean_mse", "sd_mse", "lower_bound", "replicates"]
SVG_RC = {"svg.hashsalt": "qgsm", "svg.fonttype": "none", "path.simplify": False}


def _fmt(value: float) -> str:
    return repr(float(value))


def _csv_bytes(header: list[str], rows) -> bytes:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue().encode("utf-8")


def emit_csv(results: list[CellResult]) -> bytes:
    if not results:
        raise UsageError("no results to write")
    rows = [
        [r.n, r.estimator.value, _fmt(r.mean_mse), _fmt(r.sd_mse), _fmt(r.lower_bound), r.replicates]
        for r in results
    ]
    return _csv_bytes(CSV_HEADER, rows)


def _svg_bytes(fig: Figure) -> bytes:
    fig.tight_layout()
    buf = io.BytesIO()
    fig.savefig(buf, format="svg", metadata={"Date": None})
    return buf.getvalue()


def emit_svg(results: list[CellResult]) -> bytes:
    """Mean MSE with sd error bars per n, one panel per estimator, dashed line at the lower bound."""
    if not results:
        raise UsageError("no results to plot")
    ordered = sorted(results, key=lambda r: (r.estimator.value, r.n))
    series = [(name, list(cells)) for name, cells in groupby(ordered, key=lambda r: r.estimator.value)]

    with matplotlib.rc_context(SVG_RC):
        fig = Figure(figsize=(4.5 * len(series), 3.6))
        axes = fig.subplots(1, len(series), squeeze=False)[0]
        for ax, (name, cells) in zip(axes, series):
            ax.errorbar(
                [c.n for c in cells], [c.mean_mse for c in cells], yerr=[c.sd_mse for c in cells],
                marker="o", capsize=3, label="mean MSE ± sd",
            )
            for k, bound in enumerate(sorted({c.lower_bound for c in cells})):
                ax.axhline(bound, linestyle="--", color="gray", linewidth=1,
                           label="lower bound" if k == 0 else None)
            ax.set_title(name)
            ax.set_xlabel("n")
            ax.set_ylabel("MSE")
            ax.legend(fontsize="small")
        data = _svg_bytes(fig)
    logger.info(f"Rendered SVG with {len(series)} panel(s)")
    return data


def bounds_table(sigma2: float, c2_values, rates) -> list[tuple[float, float, float, float, float]]:
    """(c2, B, quantized bound, Pinsker risk, Gaussian distortion-rate) for every c2 and rate."""
    rows = []
    for c2 in c2_values:
        floor = pinsker_risk(sigma2, c2)
        for rate in rates:
            rows.append((float(c2), float(rate), quantized_risk_bound(rate, sigma2, c2), floor,
                         distortion_rate_gaussian(rate, sigma2)))
    return rows


def emit_bounds_csv(rows) -> bytes:
    if not rows:
        raise UsageError("no bound rows to write")
    header = ["c2", "rate_b", "quantized_bound", "pinsker_risk", "distortion_rate"]
    return _csv_bytes(header, [[_fmt(v) for v in row] for row in rows])


def emit_decomposition_csv(parts: list[LossDecomposition]) -> bytes:
    """One row per replicate, then a `mean` row."""
    if not parts:
        raise UsageError("no decomposition rows to write")
    header = ["replicate", "a1", "a2", "a3", "total"]
    rows = [[r, _fmt(p.a1), _fmt(p.a2), _fmt(p.a3), _fmt(p.total)] for r, p in enumerate(parts)]
    k = len(parts)
    rows.append(["mean"] + [
        _fmt(sum(getattr(p, field) for p in parts) / k) for field in ("a1", "a2", "a3", "total")
    ])
    return _csv_bytes(header, rows)


def emit_shrinkage_csv(result: ShrinkageResult) -> bytes:
    header = ["coordinate", "theta"] + [f"B={rate:g}" for rate in result.rates] + ["james_stein"]
    rows = []
    for i, theta_i in enumerate(result.theta):
        quantized = [_fmt(means[i]) for means in result.quantized_means]
        rows.append([i, _fmt(theta_i)] + quantized + [_fmt(result.james_stein_mean[i])])
    return _csv_bytes(header, rows)


def emit_shrinkage_svg(result: ShrinkageResult) -> bytes:
    """Per-coordinate averages: theta, James-Stein, and one quantized series per rate."""
    coords = list(range(len(result.theta)))
    with matplotlib.rc_context(SVG_RC):
        fig = Figure(figsize=(6.0, 3.6))
        ax = fig.subplots()
        ax.plot(coords, result.theta, "ko", label="theta")
        ax.plot(coords, result.james_stein_mean, "s--", color="gray", label="James-Stein")
        for rate, means in zip(result.rates, result.quantized_means):
            ax.plot(coords, means, marker=".", linewidth=1, label=f"B={rate:g}")
        ax.axhline(0.0, color="black", linewidth=0.5)
        ax.set_xlabel("coordinate")
        ax.set_ylabel("average estimate")
        ax.legend(fontsize="small")
        data = _svg_bytes(fig)
    logger.info(f"Rendered shrinkage SVG with {len(result.rates)} rate(s)")
    return data
