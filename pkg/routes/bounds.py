import logging

from core.report import bounds_table, emit_bounds_csv
from utils.command_router import CommandRouter, arg, float_list_arg, rate_list_arg, write_output

logger = logging.getLogger(__name__)

router = CommandRouter(tags=["Bounds"])

DEFAULT_RATES = "0:3:1/10"


@router.command("bounds", help="Tabulate the quantized risk bound against rate", arguments=[
    arg("--sigma2", type=float, required=True, help="Noise variance"),
    arg("--c2", type=float_list_arg, required=True, help="Squared radius, or a comma-separated list"),
    arg("--rates", type=rate_list_arg, default=rate_list_arg(DEFAULT_RATES),
        help='Comma-separated rates or an inclusive "start:stop:step" range (default 0:3:1/10)'),
    arg("--out", default=None, help="CSV path (default stdout)"),
])
def bounds(args) -> int:
    """One CSV row per (c2, B): quantized bound, Pinsker risk and Gaussian distortion-rate."""
    rows = bounds_table(args.sigma2, args.c2, args.rates)
    logger.info(f"Computed {len(rows)} bound rows")
    write_output(emit_bounds_csv(rows), args.out)
    return 0
