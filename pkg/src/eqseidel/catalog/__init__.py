"""Space definitions: the built-in spaces and the ``.eqh`` text format."""

from .builtins import FAMILIES, builtin, builtin_ids, builtin_text, parse_id
from .parser import load_space, parse_expr, parse_space
from .render import render_space
from .spec import Seed, SpaceSpec


def resolve(space_id=None, path=None):
    """A space from a file when ``path`` is given, else a built-in id."""
    if path is not None:
        return load_space(path)
    return builtin(space_id)


__all__ = [
    "FAMILIES",
    "Seed",
    "SpaceSpec",
    "builtin",
    "builtin_ids",
    "builtin_text",
    "load_space",
    "parse_expr",
    "parse_id",
    "parse_space",
    "render_space",
    "resolve",
]
