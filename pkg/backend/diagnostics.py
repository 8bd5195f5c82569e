import contextlib
import threading
import warnings
from typing import Iterator, List

from backend.exceptions import SpectralUnderresolved

# Runs on worker threads collect their own diagnostics
_local = threading.local()


def warn_underresolved(message: str) -> None:
    """
    Issue a SpectralUnderresolved warning, and record its message with the
    collector of the current thread, if any.

    :param message: The diagnostic.
    :return: None.
    """
    warnings.warn(message, SpectralUnderresolved, stacklevel=3)
    collected = getattr(_local, 'collected', None)
    if collected is not None:
        collected.append(message)


@contextlib.contextmanager
def collecting() -> Iterator[List[str]]:
    """
    Collect the diagnostics issued on this thread inside the block.
    """
    previous = getattr(_local, 'collected', None)
    _local.collected = []
    try:
        yield _local.collected
    finally:
        _local.collected = previous
