import logging

from core.report import emit_csv, emit_decomposition_csv, emit_shrinkage_csv, emit_shrinkage_svg, emit_svg
from core.simulate import load_spec, run_decomposition, run_grid, shrinkage_comparison
from utils.command_router import CommandRouter, arg, float_list_arg, rate_arg, write_output
from utils.errors import GridError, UsageError
from validation.model_params import ModelParams

logger = logging.getLogger(__name__)

router = CommandRouter(tags=["Experiments"])


@router.command("simulate", help="Run an experiment grid from a JSON spec", arguments=[
    arg("--spec", required=True, help="Experiment spec JSON"),
    arg("--csv", default=None, help="CSV output path (default stdout)"),
    arg("--svg", default=None, help="SVG output path"),
    arg("--workers", type=int, default=None),
])
def simulate(args) -> int:
    """Run every (n, estimator) cell and write the CSV and, optionally, the SVG."""
    spec = load_spec(args.spec)
    try:
        results = run_grid(spec, workers=args.workers)
    except GridError as e:
        # completed cells are still written before reporting the failures
        if e.results:
            _write_results(e.results, args)
        raise
    _write_results(results, args)
    return 0


def _write_results(results, args) -> None:
    write_output(emit_csv(results), args.csv)
    if args.svg:
        write_output(emit_svg(results), args.svg)
        logger.info(f"Wrote {args.svg}")


@router.command("decompose", help="Per-replicate A1/A2/A3 split of the quantized loss", arguments=[
    arg("--n", type=int, required=True),
    arg("--rate", type=rate_arg, required=True),
    arg("--sigma2", type=float, default=1.0),
    arg("--b2", type=float, required=True, help="True signal energy"),
    arg("--c2", type=float, default=None, help="Squared radius of the grid (default max(b2, 1))"),
    arg("--replicates", type=int, default=100),
    arg("--seed", type=int, default=0),
    arg("--allow-large", action="store_true", help="Lift the desk-scale nB guard"),
    arg("--out", default=None, help="CSV path (default stdout)"),
])
def decompose(args) -> int:
    c2 = max(args.b2, 1.0) if args.c2 is None else args.c2
    if args.b2 < 0 or args.b2 > c2:
        raise UsageError(f"b2 must lie in [0, c2], got b2={args.b2}, c2={c2}")
    params = ModelParams(n=args.n, rate_b=args.rate, sigma2=args.sigma2, c2=c2)
    parts = run_decomposition(params, args.b2, args.replicates, args.seed, allow_large=args.allow_large)
    write_output(emit_decomposition_csv(parts), args.out)
    return 0


@router.command("shrinkage", help="Compare quantized estimates across rates with James-Stein", arguments=[
    arg("--n", type=int, default=15),
    arg("--c2", type=float, default=4.0),
    arg("--sigma2", type=float, default=1.0),
    arg("--rates", type=float_list_arg, default=[0.1, 0.2, 0.5, 1.0]),
    arg("--replicates", type=int, default=100),
    arg("--seed", type=int, default=0),
    arg("--out", default=None, help="CSV path (default stdout)"),
    arg("--svg", default=None, help="SVG output path"),
])
def shrinkage(args) -> int:
    result = shrinkage_comparison(
        n=args.n, c2=args.c2, sigma2=args.sigma2, rates=args.rates,
        replicates=args.replicates, seed=args.seed,
    )
    write_output(emit_shrinkage_csv(result), args.out)
    if args.svg:
        write_output(emit_shrinkage_svg(result), args.svg)
        logger.info(f"Wrote {args.svg}")
    return 0
