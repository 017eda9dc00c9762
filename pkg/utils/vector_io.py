from pathlib import Path

import numpy as np

from utils.errors import DomainError, UsageError


def read_vector(path: Path) -> np.ndarray:
    """Whitespace/newline separated reals."""
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise UsageError(f"cannot read vector file {path}: {e}")
    tokens = text.split()
    if not tokens:
        raise UsageError(f"malformed input file {path}: no values")
    try:
        values = np.array([float(token) for token in tokens], dtype=np.float64)
    except ValueError as e:
        raise UsageError(f"malformed input file {path}: {e}")
    if not np.all(np.isfinite(values)):
        raise DomainError(f"malformed input file {path}: non-finite value")
    return values


def format_vector(values) -> str:
    # 17 significant digits round-trip a double
    return "".join(f"{float(v):.17g}\n" for v in values)


def write_vector(path: Path, values) -> None:
    Path(path).write_text(format_vector(values))
