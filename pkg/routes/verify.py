import logging

from config.settings import get_settings
from core.verification import SUITES, run_all, run_suite
from utils.command_router import CommandRouter, arg

logger = logging.getLogger(__name__)

router = CommandRouter(tags=["Verify"])


@router.command("verify", help="Check empirical tails and moments against their analytic values", arguments=[
    arg("--suite", required=True, choices=[*SUITES, "all"]),
    arg("--full", action="store_true", help="Run the desk-scale extreme-angle cases (N = 2^24)"),
])
def verify(args) -> int:
    """Print PASS/FAIL per suite; exit status 1 when any suite fails."""
    settings = get_settings()
    if args.suite == "all":
        reports = run_all(settings, full=args.full)
    else:
        reports = [run_suite(args.suite, settings, full=args.full)]
    failed = 0
    for report in reports:
        print(f"{'PASS' if report.passed else 'FAIL'} {report.name} ({len(report.cases)} cases)")
        for case in report.cases:
            if not case.passed:
                print(f"  failed {case.label}: observed {case.observed:.6g}, "
                      f"bound {case.bound:.6g}, slack {case.slack:.3g}")
        failed += not report.passed
    return 1 if failed else 0
