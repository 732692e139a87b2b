"""Canonical ``.eqh`` text for a SpaceSpec; ``parse_space(render_space(s)) == s``."""

from __future__ import annotations

from ..poly import Q, R, U, Poly, monomial_text, var_sort_key
from ..ring import coeff_text


def r_poly_text(p: Poly) -> str:
    """A polynomial in ``r`` alone, highest power first: ``r^2 + 2*r + 1``."""
    terms = sorted(p.terms.items(), key=lambda kv: -dict(kv[0]).get(R, 0))
    out = []
    for i, (mono, c) in enumerate(terms):
        e = dict(mono).get(R, 0)
        mag = abs(c)
        body = "" if e == 0 else ("r" if e == 1 else f"r^{e}")
        if not body:
            body = coeff_text(mag)
        elif mag != 1:
            body = f"{coeff_text(mag)}*{body}"
        if i == 0:
            out.append(f"-{body}" if c < 0 else body)
        else:
            out.append(f" - {body}" if c < 0 else f" + {body}")
    return "".join(out) or "0"


def _group_by_r(p: Poly):
    """``{monomial without r: coefficient polynomial in r}``."""
    groups = {}
    for mono, c in p.terms.items():
        rest = tuple((v, e) for v, e in mono if v != R)
        r_part = tuple((v, e) for v, e in mono if v == R)
        groups.setdefault(rest, {})[r_part] = c
    return {k: Poly(v) for k, v in groups.items()}


def _mono_key(mono):
    d = dict(mono)
    rest = sorted((var_sort_key(v), e) for v, e in mono if v not in (Q, U))
    return (d.get(U, 0), d.get(Q, 0), rest)


def _terms(p: Poly, suffix=""):
    """Signed term bodies of ``p`` (times ``suffix``) with r-coefficients grouped."""
    out = []
    for mono, coeff in sorted(_group_by_r(p).items(), key=lambda kv: _mono_key(kv[0])):
        unknowns = tuple((v, e) for v, e in mono if v not in (Q, U))
        ring_part = tuple((v, e) for v, e in mono if v in (Q, U))
        tail = [x for x in (monomial_text(unknowns), monomial_text(ring_part), suffix) if x]
        sign = 1
        if len(coeff.terms) == 1:
            (rm, c), = coeff.terms.items()
            sign = -1 if c < 0 else 1
            e = dict(rm).get(R, 0)
            head = []
            if abs(c) != 1 or (not e and not tail):
                head.append(coeff_text(abs(c)))
            if e:
                head.append("r" if e == 1 else f"r^{e}")
            body = "*".join(head + tail)
        else:
            lead = max(coeff.terms.items(), key=lambda kv: dict(kv[0]).get(R, 0))[1]
            if lead < 0:
                sign, coeff = -1, -coeff
            body = "*".join([f"({r_poly_text(coeff)})"] + tail)
        out.append((sign, body))
    return out


def join_terms(parts):
    if not parts:
        return "0"
    text = []
    for i, (sign, body) in enumerate(parts):
        if i == 0:
            text.append(body if sign > 0 else f"-{body}")
        else:
            text.append(f" + {body}" if sign > 0 else f" - {body}")
    return "".join(text)


def expr_text(p: Poly) -> str:
    return join_terms(_terms(p))


def vector_text(labels, coords) -> str:
    """Render ``sum coords[l] * labels[l]``, highest label first."""
    parts = []
    for label, p in reversed(list(zip(labels, coords))):
        parts.extend(_terms(Poly.lift(p), label))
    return join_terms(parts)


def _map_lines(template, basis, skip_zero=True):
    lines = []
    for k, label in enumerate(basis.labels):
        col = template.columns[k]
        if skip_zero and not any(col):
            continue
        lines.append(f"{label} -> {vector_text(basis.labels, col)}")
    return lines


def render_space(spec) -> str:
    out = ["[space]", f"id = {spec.id}"]
    cfg = spec.config
    if cfg.has_q:
        out.append(f"q_degree = {cfg.q_degree}")
    out.append(f"coefficients = {cfg.coeff_domain.value}")
    if cfg.u_localized:
        out.append("localized = true")
    out.append("basis = " + " ".join(f"{l}:{d}" for l, d in zip(spec.basis.labels, spec.basis.degrees)))
    out.append(f"unit = {spec.unit}")
    if spec.generator is not None:
        out.append(f"generator = {spec.generator}")

    if spec.product is not None:
        out += ["", "[product]"] + _map_lines(spec.product, spec.basis)
    for name, t in (("seidel", spec.seidel), ("inverse", spec.inverse)):
        if t is not None:
            out += ["", f"[{name}]", f"shift = {t.shift}"] + _map_lines(t, spec.basis)
    ansatz = []
    for kind, t in (("product", spec.ansatz_product), ("seidel", spec.ansatz_seidel)):
        if t is not None:
            ansatz += [f"{kind} {line}" for line in _map_lines(t, spec.basis)]
    if ansatz:
        out += ["", "[ansatz]"] + ansatz
    if spec.seeds:
        out += ["", "[seeds]"]
        for s in spec.seeds:
            key = s.name if s.level is None else f"{s.name}@{s.level}"
            out.append(f"{key} = {r_poly_text(s.value) if s.value else '0'}")
    if spec.limit_basis is not None:
        vecs = [vector_text(spec.basis.labels, v) for v in spec.limit_basis]
        out += ["", "[limit]", "basis = " + ", ".join(vecs)]
    return "\n".join(out) + "\n"

