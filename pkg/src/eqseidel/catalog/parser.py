"""Reader for the ``.eqh`` space definition format.

A file is a sequence of bracketed sections::

    [space]
    id = projective_space(2)
    q_degree = 6
    basis = e0:0 e1:2 e2:4
    unit = e0
    generator = e1

    [product]
    e1 -> e2 - r*u*e1

    [seidel]
    shift = 4
    e0 -> e2 + (r + 1)*u*e1 + (r^2 + 2*r + 1)*u^2*e0

Expressions use integer literals, ``q``, ``u``, ``r``, basis labels,
unknowns ``?name``, ``+ - * ^`` and parentheses.  Exponents are integers
(``q^-1`` and ``q^(-1)`` are both accepted); ``/`` may only divide by an
integer literal.  ``#`` starts a comment.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from ..errors import EngineError, SemanticError, SpecSyntaxError
from ..module import BasisSpec
from ..poly import Q, R, U, Poly, is_unknown
from ..ring import CoeffDomain, RingConfig
from ..template import MapTemplate
from .spec import Seed, SpaceSpec

SECTIONS = ("space", "product", "seidel", "inverse", "ansatz", "seeds", "limit")
SPACE_KEYS = ("id", "q_degree", "coefficients", "localized", "basis", "unit", "generator")
LABEL_PREFIX = "$"

_TOKEN = re.compile(
    r"(?P<ws>\s+)|(?P<int>\d+)|(?P<unknown>\?[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*^()/])"
)


@dataclass
class Token:
    kind: str  # int, ident, unknown, op, end
    text: str
    column: int


def tokenize(text, line=None, column=1):
    tokens, pos = [], 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise SpecSyntaxError(
                f"unexpected character {text[pos]!r}", line, column + pos,
                ("integer", "symbol", "?unknown", "operator"),
            )
        if m.lastgroup != "ws":
            tokens.append(Token(m.lastgroup, m.group(), column + pos))
        pos = m.end()
    tokens.append(Token("end", "", column + len(text)))
    return tokens


class ExprParser:
    """Recursive descent over one expression; symbols become Poly variables."""

    def __init__(self, text, line=None, column=1, labels=(), allow=(Q, U, R)):
        self.tokens = tokenize(text, line, column)
        self.i = 0
        self.line = line
        self.labels = set(labels)
        self.allow = set(allow)

    @property
    def tok(self):
        return self.tokens[self.i]

    def error(self, expected):
        t = self.tok
        found = "end of expression" if t.kind == "end" else repr(t.text)
        raise SpecSyntaxError(
            f"expected {' or '.join(expected)}, found {found}", self.line, t.column, expected
        )

    def accept(self, text):
        if self.tok.kind == "op" and self.tok.text == text:
            self.i += 1
            return True
        return False

    def parse(self):
        value = self.expr()
        if self.tok.kind != "end":
            self.error(("operator", "end of expression"))
        return value

    def expr(self):
        if self.accept("-"):
            value = -self.term()
        else:
            self.accept("+")
            value = self.term()
        while True:
            if self.accept("+"):
                value = value + self.term()
            elif self.accept("-"):
                value = value - self.term()
            else:
                return value

    def term(self):
        value = self.factor()
        while True:
            if self.accept("*"):
                value = value * self.factor()
            elif self.accept("/"):
                if self.tok.kind != "int":
                    self.error(("integer",))
                d = int(self.tok.text)
                if d == 0:
                    raise SemanticError("division by zero", self.line)
                self.i += 1
                value = value * Fraction(1, d)
            else:
                return value

    def factor(self):
        start = self.tok
        base = self.atom()
        if not self.accept("^"):
            return base
        e = self.exponent()
        try:
            return base ** e
        except EngineError:
            raise SemanticError(
                f"negative exponent at column {start.column} needs a monomial in q and u", self.line
            ) from None

    def exponent(self):
        if self.tok.kind == "int":
            self.i += 1
            return int(self.tokens[self.i - 1].text)
        if self.accept("-"):
            if self.tok.kind != "int":
                self.error(("integer",))
            self.i += 1
            return -int(self.tokens[self.i - 1].text)
        if self.accept("("):
            neg = self.accept("-")
            if self.tok.kind != "int":
                self.error(("integer",))
            e = int(self.tok.text)
            self.i += 1
            if not self.accept(")"):
                self.error(("')'",))
            return -e if neg else e
        self.error(("integer exponent",))

    def atom(self):
        t = self.tok
        if t.kind == "int":
            self.i += 1
            return Poly.const(int(t.text))
        if t.kind == "unknown":
            self.i += 1
            return Poly.var(t.text)
        if t.kind == "ident":
            self.i += 1
            if t.text in self.labels:
                return Poly.var(LABEL_PREFIX + t.text)
            if t.text in self.allow:
                return Poly.var(t.text)
            raise SemanticError(f"unknown symbol {t.text!r} at column {t.column}", self.line)
        if self.accept("("):
            value = self.expr()
            if not self.accept(")"):
                self.error(("')'",))
            return value
        self.error(("integer", "symbol", "?unknown", "'('"))


def parse_expr(text, line=None, column=1, labels=(), allow=(Q, U, R)) -> Poly:
    return ExprParser(text, line, column, labels, allow).parse()


def split_labels(poly: Poly, labels, line=None):
    """Split a Poly linear in label variables into ``{label: coefficient}``."""
    out = {}
    for mono, c in poly.terms.items():
        lab = [(v, e) for v, e in mono if v.startswith(LABEL_PREFIX)]
        if len(lab) != 1 or lab[0][1] != 1:
            raise SemanticError("each term needs exactly one basis element to the first power", line)
        label = lab[0][0][len(LABEL_PREFIX):]
        rest = tuple((v, e) for v, e in mono if not v.startswith(LABEL_PREFIX))
        out[label] = out.get(label, Poly()) + Poly({rest: c})
    return {k: v for k, v in out.items() if v}


# ----------------------------------------------------------------------------

@dataclass
class Line:
    number: int
    text: str  # comment stripped
    indent: int  # column of the first character of text


def _logical_lines(source):
    for number, raw in enumerate(source.splitlines(), start=1):
        body = raw.split("#", 1)[0].rstrip()
        stripped = body.lstrip()
        if stripped:
            yield Line(number, stripped, len(body) - len(stripped) + 1)


def _sections(source):
    sections, current = {}, None
    for ln in _logical_lines(source):
        if ln.text.startswith("["):
            m = re.fullmatch(r"\[\s*([A-Za-z_]+)\s*\]", ln.text)
            if m is None:
                raise SpecSyntaxError("malformed section header", ln.number, ln.indent, ("[section]",))
            name = m.group(1)
            if name not in SECTIONS:
                raise SpecSyntaxError(
                    f"unknown section [{name}]", ln.number, ln.indent + 1,
                    tuple(f"[{s}]" for s in SECTIONS),
                )
            if name in sections:
                raise SemanticError(f"section [{name}] appears twice", ln.number)
            current = sections[name] = []
            continue
        if current is None:
            raise SpecSyntaxError("content before the first section", ln.number, ln.indent, ("[space]",))
        current.append(ln)
    return sections


def _key_value(ln):
    if "=" not in ln.text:
        raise SpecSyntaxError("expected 'key = value'", ln.number, ln.indent + len(ln.text), ("'='",))
    key, value = ln.text.split("=", 1)
    col = ln.indent + len(key) + 1 + (len(value) - len(value.lstrip()))
    return key.strip(), value.strip(), col


def _map_entry(ln, text=None, offset=0):
    text = ln.text if text is None else text
    if "->" not in text:
        raise SpecSyntaxError("expected 'label -> expression'", ln.number, ln.indent + offset + len(text), ("'->'",))
    src, expr = text.split("->", 1)
    col = ln.indent + offset + len(src) + 2 + (len(expr) - len(expr.lstrip()))
    return src.strip(), expr.strip(), col


def _parse_space(lines):
    values = {}
    for ln in lines:
        key, value, col = _key_value(ln)
        if key not in SPACE_KEYS:
            raise SpecSyntaxError(f"unknown key {key!r}", ln.number, ln.indent, SPACE_KEYS)
        values[key] = (value, ln, col)
    for key in ("id", "basis"):
        if key not in values:
            raise SemanticError(f"[space] is missing '{key}'")

    def integer(key):
        value, ln, col = values[key]
        if not re.fullmatch(r"-?\d+", value):
            raise SpecSyntaxError(f"{key} must be an integer", ln.number, col, ("integer",))
        return int(value)

    domain = CoeffDomain.INTEGER
    if "coefficients" in values:
        value, ln, col = values["coefficients"]
        if value not in ("integer", "rational"):
            raise SpecSyntaxError("unknown coefficient domain", ln.number, col, ("integer", "rational"))
        domain = CoeffDomain(value)
    localized = False
    if "localized" in values:
        value, ln, col = values["localized"]
        if value not in ("true", "false"):
            raise SpecSyntaxError("expected a boolean", ln.number, col, ("true", "false"))
        localized = value == "true"
    has_q = "q_degree" in values
    try:
        config = RingConfig(has_q, integer("q_degree") if has_q else 0, domain, localized)
    except ValueError as exc:
        raise SemanticError(str(exc), values.get("q_degree", values["id"])[1].number) from None

    value, ln, col = values["basis"]
    labels, degrees = [], []
    for m in re.finditer(r"\S+", value):
        item = m.group()
        mm = re.fullmatch(r"([A-Za-z_][A-Za-z0-9_]*):(-?\d+)", item)
        if mm is None:
            raise SpecSyntaxError(f"bad basis item {item!r}", ln.number, col + m.start(), ("label:degree",))
        if mm.group(1) in (Q, U, R):
            raise SemanticError(f"{mm.group(1)!r} is reserved and cannot name a basis element", ln.number)
        labels.append(mm.group(1))
        degrees.append(int(mm.group(2)))
    try:
        basis = BasisSpec(tuple(labels), tuple(degrees))
    except ValueError as exc:
        raise SemanticError(str(exc), ln.number) from None
    if not labels:
        raise SemanticError("empty basis", ln.number)

    def label(key, default):
        if key not in values:
            return default
        value, ln, _ = values[key]
        if value not in labels:
            raise SemanticError(f"{key} {value!r} is not a basis label", ln.number)
        return value

    unit = label("unit", labels[0])
    generator = label("generator", None)
    return values["id"][0], config, basis, unit, generator


def _check_entry(poly, config, want, line, where, allow_unknowns=True):
    for mono, c in poly.terms.items():
        d = dict(mono)
        a, b = d.get(Q, 0), d.get(U, 0)
        if a and not config.has_q:
            raise SemanticError(f"{where}: q does not exist in this ring", line)
        if b < 0 and not config.u_localized:
            raise SemanticError(f"{where}: negative power of u needs a localized ring", line)
        if not allow_unknowns and any(is_unknown(v) for v in d):
            raise SemanticError(f"{where}: unknowns are not allowed here", line)
        if not config.rational and Fraction(c).denominator != 1:
            raise SemanticError(f"{where}: non-integer coefficient {c} in an integer ring", line)
        deg = a * config.q_degree + 2 * b
        if deg != want:
            raise SemanticError(
                f"{where}: term of degree {deg} where degree {want} is required", line
            )


def _parse_map(lines, basis, config, shift, name, prefix=None):
    images, seen = {}, {}
    for ln in lines:
        text, offset = ln.text, 0
        if prefix is not None:
            text, offset = prefix(ln)
        src, expr, col = _map_entry(ln, text, offset)
        if src not in basis.labels:
            raise SemanticError(f"{src!r} is not a basis label", ln.number)
        if src in seen:
            raise SemanticError(f"second entry for {src} (first on line {seen[src]})", ln.number)
        seen[src] = ln.number
        poly = parse_expr(expr, ln.number, col, basis.labels)
        image = split_labels(poly, basis.labels, ln.number)
        for tgt, coeff in image.items():
            want = shift + basis.degree_of(src) - basis.degree_of(tgt)
            _check_entry(coeff, config, want, ln.number, f"[{name}] {src} -> {tgt}")
        images[src] = image
    return MapTemplate.from_images(basis, shift, images)


def _split_shift(lines, name):
    shift, rest = None, []
    for ln in lines:
        if ln.text.startswith("shift") and "=" in ln.text and "->" not in ln.text:
            key, value, col = _key_value(ln)
            if key != "shift":
                raise SpecSyntaxError(f"unknown key {key!r}", ln.number, ln.indent, ("shift",))
            if not re.fullmatch(r"-?\d+", value):
                raise SpecSyntaxError("shift must be an integer", ln.number, col, ("integer",))
            shift = int(value)
        else:
            rest.append(ln)
    if shift is None:
        raise SemanticError(f"[{name}] needs 'shift = <integer>'")
    return shift, rest


def parse_space(text: str) -> SpaceSpec:
    sections = _sections(text)
    if "space" not in sections:
        raise SemanticError("missing [space] section")
    sid, config, basis, unit, generator = _parse_space(sections["space"])

    product = None
    if "product" in sections:
        if generator is None:
            raise SemanticError("[product] needs a generator in [space]")
        product = _parse_map(sections["product"], basis, config, basis.degree_of(generator), "product")

    maps = {}
    for name in ("seidel", "inverse"):
        if name in sections:
            shift, rest = _split_shift(sections[name], name)
            maps[name] = _parse_map(rest, basis, config, shift, name)

    ansatz = {"product": [], "seidel": []}
    for ln in sections.get("ansatz", []):
        m = re.match(r"(\w+)\s+", ln.text)
        if m is None or m.group(1) not in ansatz:
            raise SpecSyntaxError("ansatz lines start with 'product' or 'seidel'", ln.number, ln.indent, ("product", "seidel"))
        ansatz[m.group(1)].append(ln)
    ansatz_maps = {}
    for kind, lines in ansatz.items():
        if not lines:
            continue
        if kind == "product":
            if product is None:
                raise SemanticError("a product ansatz needs a [product] section", lines[0].number)
            shift = product.shift
        else:
            if "seidel" not in maps:
                raise SemanticError("a Seidel ansatz needs a [seidel] section", lines[0].number)
            shift = maps["seidel"].shift

        def strip(ln):
            m = re.match(r"\w+\s+", ln.text)
            return ln.text[m.end():], m.end()

        ansatz_maps[kind] = _parse_map(lines, basis, config, shift, f"ansatz {kind}", strip)

    registered = set()
    for t in ansatz_maps.values():
        registered |= {v[1:] for v in t.unknowns()}
    seeds = []
    for ln in sections.get("seeds", []):
        key, value, col = _key_value(ln)
        m = re.fullmatch(r"([A-Za-z_][A-Za-z0-9_]*)(?:@(\d+))?", key)
        if m is None:
            raise SpecSyntaxError(f"bad seed name {key!r}", ln.number, ln.indent, ("name", "name@level"))
        name, level = m.group(1), m.group(2)
        if name not in registered:
            raise SemanticError(f"seed {name!r} names no ansatz unknown", ln.number)
        poly = parse_expr(value, ln.number, col, allow=(R,))
        seeds.append(Seed(name, poly, None if level is None else int(level)))

    limit = None
    for ln in sections.get("limit", []):
        key, value, col = _key_value(ln)
        if key != "basis":
            raise SpecSyntaxError(f"unknown key {key!r}", ln.number, ln.indent, ("basis",))
        vectors, pos = [], 0
        for piece in value.split(","):
            poly = parse_expr(piece, ln.number, col + pos, basis.labels, allow=(Q, U))
            image = split_labels(poly, basis.labels, ln.number)
            vectors.append(tuple(image.get(lab, Poly()) for lab in basis.labels))
            pos += len(piece) + 1
        if len(vectors) != len(basis):
            raise SemanticError(f"limit basis has {len(vectors)} vectors for rank {len(basis)}", ln.number)
        for v in vectors:
            degs = set()
            for lab, p in zip(basis.labels, v):
                for mono in p.terms:
                    d = dict(mono)
                    degs.add(d.get(Q, 0) * config.q_degree + 2 * d.get(U, 0) + basis.degree_of(lab))
            if len(degs) != 1:
                raise SemanticError("limit basis vectors must be homogeneous and nonzero", ln.number)
        limit = tuple(vectors)

    return SpaceSpec(
        sid, config, basis, unit, generator, product,
        maps.get("seidel"), maps.get("inverse"),
        ansatz_maps.get("product"), ansatz_maps.get("seidel"),
        tuple(seeds), limit,
    )


def load_space(path) -> SpaceSpec:
    with open(path, encoding="utf-8") as fh:
        return parse_space(fh.read())
