"""The four built-in spaces, written in the definition format and parsed."""

from __future__ import annotations

import re
from functools import lru_cache

from ..errors import BadParam, UnknownSpace
from .parser import parse_space

FAMILIES = ("complex_plane", "complex_space", "projective_space", "taut_line_bundle")


def _sum(terms):
    terms = [t for t in terms if t]
    return " + ".join(terms) if terms else "0"


def _pow(base, e):
    if e == 0:
        return ""
    return base if e == 1 else f"{base}^{e}"


def _mono(*factors):
    return "*".join(f for f in factors if f)


def _complex_space_text(n):
    sid = "complex_plane" if n == 1 else f"complex_space({n})"
    return f"""\
[space]
id = {sid}
basis = e0:0
unit = e0

[seidel]
shift = {2 * n}
e0 -> {_mono(_pow("(r + 1)", n), _pow("u", n))}*e0

[limit]
basis = e0
"""


def _pn_names(n):
    """Unknown names; the plane uses the letters of its classical derivation."""
    if n == 2:
        return {"alpha1": "alpha", "A1": "A", "A0": "B", "F2_0": "F"}
    return {}


def _projective_text(n):
    name = _pn_names(n)

    def nm(x):
        return name.get(x, x)

    basis = " ".join(f"e{k}:{2 * k}" for k in range(n + 1))
    product = ["e0 -> e1"]
    for k in range(1, n):
        product.append(f"e{k} -> e{k + 1} - r*u*e{k}")
    product.append(f"e{n} -> q*e0 - r*u*e{n}")

    seidel = [
        "e0 -> " + _sum(
            _mono(_pow("(r + 1)", n - l), _pow("u", n - l), f"e{l}") for l in range(n, -1, -1)
        )
    ]
    for k in range(1, n + 1):
        seidel.append(f"e{k} -> " + _sum(
            _mono(_pow("(r + 1)", k - 1 - l), "q", _pow("u", k - 1 - l), f"e{l}")
            for l in range(k - 1, -1, -1)
        ))

    inverse = ["e0 -> q^-1*e1"]
    for k in range(1, n):
        inverse.append(f"e{k} -> q^-1*e{k + 1} - (r + 1)*u*q^-1*e{k}")
    inverse.append(f"e{n} -> -(r + 1)*u*q^-1*e{n} + e0")

    ansatz = []
    for k in range(1, n):
        ansatz.append(f"product e{k} -> ?{nm(f'alpha{k}')}*u*e{k}")
    ansatz.append(f"product e{n} -> ?gamma*u*e{n}")
    ansatz.append("seidel e0 -> " + _sum(
        _mono(f"?{nm(f'A{l}')}", _pow("u", n - l), f"e{l}") for l in range(n - 1, -1, -1)
    ))
    for k in range(2, n + 1):
        ansatz.append(f"seidel e{k} -> " + _sum(
            _mono(f"?{nm(f'F{k}_{l}')}", "q", _pow("u", k - 1 - l), f"e{l}")
            for l in range(k - 2, -1, -1)
        ))

    seeds = [f"{nm('A0')} = (r + 1)^{n}"]
    seeds += [f"{nm(f'alpha{k}')}@0 = 0" for k in range(1, n)]
    seeds.append("gamma@0 = 0")

    return "\n".join([
        "[space]",
        f"id = projective_space({n})",
        f"q_degree = {2 * (n + 1)}",
        f"basis = {basis}",
        "unit = e0",
        "generator = e1",
        "",
        "[product]", *product,
        "",
        "[seidel]", f"shift = {2 * n}", *seidel,
        "",
        "[inverse]", f"shift = {-2 * n}", *inverse,
        "",
        "[ansatz]", *ansatz,
        "",
        "[seeds]", *seeds,
        "",
    ])


def _taut_text(n):
    basis = " ".join(f"e{k}:{2 * k}" for k in range(n + 1))
    product = [f"e{k} -> e{k + 1}" for k in range(n)]
    product.append(f"e{n} -> -q*e1 + r*u*q*e0")
    seidel = [f"e{k} -> -e{k + 1} + (r + 1)*u*e{k}" for k in range(n)]
    seidel.append(f"e{n} -> q*e1 + (r + 1)*u*e{n} - (r + 1)*u*q*e0")
    ansatz = ["product e{0} -> ?c*u*q*e0".format(n)]
    ansatz += [f"seidel e{k} -> ?diag{k}*u*e{k}" for k in range(n)]
    ansatz.append(f"seidel e{n} -> ?diag{n}*u*e{n} + ?d*q*u*e0")
    seeds = [f"diag{k} = r + 1" for k in range(n + 1)] + ["c@0 = 0"]
    limit = ", ".join([f"e{n} + q*e0"] + [f"e{k}" for k in range(1, n + 1)])
    return "\n".join([
        "[space]",
        f"id = taut_line_bundle({n})",
        f"q_degree = {2 * n}",
        f"basis = {basis}",
        "unit = e0",
        "generator = e1",
        "",
        "[product]", *product,
        "",
        "[seidel]", "shift = 2", *seidel,
        "",
        "[ansatz]", *ansatz,
        "",
        "[seeds]", *seeds,
        "",
        "[limit]", f"basis = {limit}",
        "",
    ])


def parse_id(text):
    """``'projective_space(2)'`` -> ``('projective_space', 2)``."""
    m = re.fullmatch(r"\s*([a-z_]+)\s*(?:\(\s*(-?\d+)\s*\))?\s*", text)
    if m is None:
        raise UnknownSpace(f"cannot read space id {text!r}")
    family, n = m.group(1), m.group(2)
    return family, None if n is None else int(n)


def builtin_text(space_id, n=None) -> str:
    family, parsed_n = parse_id(space_id)
    if n is None:
        n = parsed_n
    elif parsed_n is not None and parsed_n != n:
        raise BadParam(f"{space_id} given with conflicting parameter {n}")
    if family not in FAMILIES:
        raise UnknownSpace(f"no built-in space {family!r}; choose from {', '.join(FAMILIES)}")
    if family == "complex_plane":
        if n not in (None, 1):
            raise BadParam("complex_plane takes no parameter")
        return _complex_space_text(1)
    if n is None:
        raise BadParam(f"{family} needs a dimension, e.g. {family}(2)")
    if n < 1:
        raise BadParam(f"{family} needs n >= 1, got {n}")
    if family == "complex_space":
        return _complex_space_text(n)
    if family == "projective_space":
        return _projective_text(n)
    return _taut_text(n)


@lru_cache(maxsize=None)
def _cached(space_id, n):
    return parse_space(builtin_text(space_id, n))


def builtin(space_id, n=None):
    """The SpaceSpec of a built-in space, e.g. ``builtin('taut_line_bundle', 2)``."""
    return _cached(space_id, n)


def builtin_ids(max_n=3):
    """A representative list of concrete ids, for listings and sweeps."""
    ids = ["complex_plane"]
    for family in FAMILIES[1:]:
        ids += [f"{family}({n})" for n in range(1 if family != "complex_space" else 2, max_n + 1)]
    return ids
