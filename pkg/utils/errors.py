"""Exception hierarchy shared by every module.

Each error carries a human-readable ``detail`` and the process ``exit_code``
the CLI returns for it.
"""


class QgsmError(Exception):
    exit_code = 1

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail


class DomainError(QgsmError, ValueError):
    """Argument outside the mathematical domain of an operation."""
    exit_code = 2


class UsageError(QgsmError, ValueError):
    """Malformed call: length mismatch, index out of range, bad input."""
    exit_code = 2


class CapacityError(QgsmError):
    """Codebook too large to index or to search at desk scale."""
    exit_code = 3


class StreamParseError(QgsmError, ValueError):
    exit_code = 4


class BadMagicError(StreamParseError):
    pass


class UnsupportedVersionError(StreamParseError):
    pass


class TruncatedStreamError(StreamParseError):
    pass


class IndexBoundsError(StreamParseError):
    pass


class MalformedHeaderError(StreamParseError):
    pass


class GridError(QgsmError):
    """One or more cells of an experiment grid failed; the rest completed."""
    exit_code = 5

    def __init__(self, failures: list[tuple[int, str, str]], results: list):
        lines = "; ".join(f"n={n} estimator={name}: {msg}" for n, name, msg in failures)
        super().__init__(f"{len(failures)} cell(s) failed: {lines}")
        self.failures = failures
        self.results = results


def validation_detail(exc) -> str:
    """Flatten a pydantic ValidationError into a message naming each field."""
    parts = []
    for err in exc.errors():
        field = ".".join(str(p) for p in err.get("loc", ())) or "<root>"
        parts.append(f"{field}: {err.get('msg', 'invalid value')}")
    return "invalid field(s): " + "; ".join(parts)
