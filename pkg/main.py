import argparse
import logging
import sys

from dotenv import load_dotenv
from pydantic import ValidationError

from config.settings import get_settings
from routes.bounds import router as bounds_router
from routes.coding import router as coding_router
from routes.experiments import router as experiments_router
from routes.verify import router as verify_router
from utils.errors import QgsmError, UsageError, validation_detail

# Load environment variables
load_dotenv()

logger = logging.getLogger(__name__)

ROUTERS = (bounds_router, coding_router, experiments_router, verify_router)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qgsm",
        description="Quantized minimax estimation of Gaussian sequence models",
    )
    parser.add_argument("--log-level", default=None, help="Root log level (default from settings)")
    subparsers = parser.add_subparsers(dest="command", required=True)
    # Include routers
    for router in ROUTERS:
        router.include(subparsers)
    return parser


def main(argv=None) -> int:
    settings = get_settings()
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=(args.log_level or settings.log_level).upper(),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.handler(args)
    except ValidationError as e:
        error = UsageError(validation_detail(e))
    except QgsmError as e:
        error = e
    except OSError as e:
        error = UsageError(str(e))
    logger.debug(f"{args.command} failed with exit code {error.exit_code}")
    print(f"error: {error.detail}", file=sys.stderr)
    return error.exit_code


if __name__ == "__main__":
    sys.exit(main())
