"""Decorator-based grouping of CLI subcommands.

A route module builds a ``CommandRouter``, decorates its handlers with
``@router.command(...)`` and main.py includes every router into the
argparse subparsers, the way an API app includes its routers.
"""

import argparse
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from validation.model_params import coerce_rate


def arg(*flags, **kwargs) -> tuple[tuple, dict]:
    return flags, kwargs


@dataclass
class Command:
    name: str
    help: str
    arguments: list
    handler: Callable


@dataclass
class CommandRouter:
    tags: list[str] = field(default_factory=list)
    commands: list[Command] = field(default_factory=list)

    def command(self, name: str, help: str, arguments: list | None = None):
        def decorator(fn):
            self.commands.append(Command(name=name, help=help, arguments=arguments or [], handler=fn))
            return fn
        return decorator

    def include(self, subparsers) -> None:
        for cmd in self.commands:
            parser = subparsers.add_parser(cmd.name, help=cmd.help, description=cmd.handler.__doc__)
            for flags, kwargs in cmd.arguments:
                parser.add_argument(*flags, **kwargs)
            parser.set_defaults(handler=cmd.handler)


def rate_arg(text: str) -> Fraction:
    """argparse type for one rate: "0.5", "1/2" or "3"."""
    try:
        return coerce_rate(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e))


def rate_list_arg(text: str) -> list[Fraction]:
    """Comma-separated rates, or an inclusive range "start:stop:step"."""
    if ":" in text:
        try:
            start, stop, step = (coerce_rate(part) for part in text.split(":"))
        except ValueError as e:
            raise argparse.ArgumentTypeError(f"bad rate range {text!r}: {e}")
        if step <= 0 or stop < start:
            raise argparse.ArgumentTypeError(f"bad rate range {text!r}: need start <= stop and step > 0")
        count = int((stop - start) / step)
        return [start + k * step for k in range(count + 1)]
    return [rate_arg(part) for part in text.split(",") if part.strip()]


def float_list_arg(text: str) -> list[float]:
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def write_output(data: bytes, out: str | None) -> None:
    """Write to the --out path, or to stdout when it is absent or "-"."""
    if out and out != "-":
        with open(out, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
