"""Exception types shared across the package."""

import difflib


class ConfigError(ValueError):
    """Raised when a configuration value is out of its legal range."""


class DimensionMismatch(ValueError):
    """Raised when a point's dimension disagrees with the problem's."""


class UnknownName(ValueError):
    """Raised for an unrecognized function or algorithm name."""


def unknown_name(kind: str, name: str, known) -> UnknownName:
    """Build an UnknownName error, suggesting the closest known name."""
    known = sorted(known)
    msg = f"unknown {kind} {name!r}"
    close = difflib.get_close_matches(name, known, n=1)
    if close:
        msg += f" (did you mean {close[0]!r}?)"
    msg += f"; known: {', '.join(known)}"
    return UnknownName(msg)
