import argparse
import functools
import logging
import math
from typing import Any, Callable, Dict, List, NamedTuple, Optional, Tuple

from fuzzywuzzy import process

from backend.exceptions import UnknownSuite


class Row(NamedTuple):
    """
    One line of a residual table.
    """
    name: str
    value: float
    tolerance: Optional[float]
    report_only: bool = False

    @property
    def passed(self) -> bool:
        if self.report_only or self.tolerance is None:
            return True
        return not math.isnan(self.value) and self.value <= self.tolerance


# Subcommand name -> (help, argument specs, handler)
COMMANDS: Dict[str, Tuple[str, List[Tuple[tuple, dict]], Callable]] = {}


def argument(*args: Any, **kwargs: Any) -> Tuple[tuple, dict]:
    return args, kwargs


def command(name: str, help: str,
            arguments: Optional[List[Tuple[tuple, dict]]] = None) -> Callable:
    """
    Register a function as a subcommand of the command line. The function is
    called with the parsed arguments and must return an exit code.

    Any exception escaping the handler is logged and mapped to exit code 1, so
    that a batch never dies with a traceback.

    :param name: The name of the subcommand.
    :param help: The help text of the subcommand.
    :param arguments: argument(...) specs, passed on to add_argument.
    :return: The decorator.
    """
    if arguments is None:
        arguments = []

    def decorator(func: Callable[[argparse.Namespace], int]) -> Callable:
        @functools.wraps(func)
        def wrapper(args: argparse.Namespace) -> int:
            try:
                return func(args)
            except Exception:
                logging.exception(f'FAIL {name}')
                return 1
        COMMANDS[name] = (help, arguments, wrapper)
        return wrapper
    return decorator


def build_parser(prog: str = 'loggrowth') -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=prog,
        description='Laplacian growth trajectories, their logarithmic action '
                    'and the Virasoro identities behind it.')
    subparsers = parser.add_subparsers(dest='command', required=True)
    for name, (help, arguments, handler) in COMMANDS.items():
        sub = subparsers.add_parser(name, help=help)
        for args, kwargs in arguments:
            sub.add_argument(*args, **kwargs)
        sub.set_defaults(handler=handler)
    return parser


def closest(name: str, choices: List[str]) -> str:
    """
    Return the exact choice, or raise UnknownSuite suggesting the choice
    closest to a mistyped name.

    :param name: The name given on the command line.
    :param choices: The valid names.
    :return: The name, if valid.
    """
    if name in choices:
        return name
    suggestion = process.extractOne(name, choices)
    hint = f', did you mean {suggestion[0]!r}?' if suggestion else ''
    raise UnknownSuite(f'Unknown suite {name!r}{hint}')


def format_number(x: Optional[float]) -> str:
    """
    Format a residual or tolerance compactly, in scientific notation.

    :param x: The number of interest.
    :return: A string with 3 significant digits, or n/a.
    """
    if x is None or math.isnan(x):
        return 'n/a'
    if x == 0:
        return '0'
    return f'{x:.2e}'


def format_table(title: str, rows: List[Row]) -> str:
    """
    Render a residual table with one status column.

    :param title: The heading of the table.
    :param rows: The rows.
    :return: The table, ready to be printed.
    """
    width = max([len(row.name) for row in rows] + [len('check')])
    lines = [title,
             f'{"check":<{width}}  {"value":>10}  {"tolerance":>10}  status',
             '-' * (width + 32)]
    for row in rows:
        if row.report_only:
            status = 'INFO'
        else:
            status = 'OK' if row.passed else 'FAIL'
        lines.append(f'{row.name:<{width}}  {format_number(row.value):>10}  '
                     f'{format_number(row.tolerance):>10}  {status}')
    return '\n'.join(lines)
