import os
import re
from pathlib import Path

import pytest

from eqseidel.catalog import builtin, builtin_ids, builtin_text, load_space, parse_space, render_space
from eqseidel.catalog.parser import parse_expr, split_labels
from eqseidel.errors import BadParam, SemanticError, SpecSyntaxError, UnknownSpace
from eqseidel.module import check_grading
from eqseidel.poly import Poly
from eqseidel.product import check_axioms
from eqseidel.seidel import verify_inverse_pair
from eqseidel.verify import verify_space

GOLDEN = Path(__file__).parent / "golden" / "spaces"
UPDATE = os.environ.get("UPDATE_GOLDEN") == "1"
GOLDEN_IDS = ["complex_plane", "complex_space(3)", "projective_space(2)", "projective_space(3)",
              "taut_line_bundle(1)", "taut_line_bundle(2)"]


def golden_path(sid):
    return GOLDEN / (re.sub(r"\W+", "_", sid).strip("_") + ".eqh")


# builtins ---------------------------------------------------------------------

def test_projective_plane_shape():
    s = builtin("projective_space(2)")
    assert s.config.q_degree == 6
    assert s.basis.degrees == (0, 2, 4)
    assert s.seidel_family().maslov_shift == 4


def test_taut_2_shape():
    s = builtin("taut_line_bundle(2)")
    assert s.config.q_degree == 4
    assert s.seidel_family().maslov_shift == 2


def test_complex_space_1_is_complex_plane():
    assert builtin("complex_space(1)") == builtin("complex_plane")
    assert builtin("complex_space", 1) == builtin("complex_plane")


@pytest.mark.parametrize("bad", ["sphere", "projective_space(x)", "taut_line_bundle"])
def test_unknown_space(bad):
    with pytest.raises((UnknownSpace, BadParam)):
        builtin(bad)


@pytest.mark.parametrize("bad", ["projective_space(0)", "complex_space(-1)"])
def test_bad_param(bad):
    with pytest.raises(BadParam):
        builtin(bad)


@pytest.mark.parametrize("sid", builtin_ids(3))
def test_builtins_pass_every_check(sid):
    s = builtin(sid)
    for r in range(6):
        assert check_grading(s.seidel_family().instantiate(r)).passed
        assert check_axioms(s.table_at(r)).passed
        if s.inverse is not None:
            assert verify_inverse_pair(s.seidel_family(), s.inverse_family(), r).passed
    assert all(rep.passed for rep in verify_space(s, 5))


# parsing ----------------------------------------------------------------------

def test_entry_against_manual_tree():
    labels = ("e0", "e1")
    got = split_labels(parse_expr("-1*e1 + (r+1)*u*e0", labels=labels), labels)
    u, r = Poly.var("u"), Poly.var("r")
    assert got == {"e1": Poly.const(-1), "e0": r * u + u}
    assert all(not p.unknowns() for p in got.values())


def test_fractional_exponent_is_a_syntax_error():
    text = builtin_text("taut_line_bundle(1)").replace("e0 -> -e1 + (r + 1)*u*e0", "e0 -> q^(1/2)*e1")
    with pytest.raises(SpecSyntaxError) as info:
        parse_space(text)
    assert (info.value.line, info.value.column) == (14, 11)
    assert info.value.expected


def test_degree_violation_is_semantic():
    text = builtin_text("taut_line_bundle(1)").replace("(r + 1)*u*e0", "(r + 1)*q^2*e0", 1)
    with pytest.raises(SemanticError) as info:
        parse_space(text)
    assert info.value.line == 14


def test_unknown_symbol():
    text = builtin_text("taut_line_bundle(1)").replace("(r + 1)*u*e0", "(r + 1)*z*e0", 1)
    with pytest.raises(SemanticError, match="unknown symbol 'z'"):
        parse_space(text)


def test_unknown_section():
    with pytest.raises(SpecSyntaxError, match="unknown section"):
        parse_space("[space]\nid = x\nbasis = e0:0\n\n[bogus]\n")


def test_comments_are_ignored():
    text = builtin_text("projective_space(2)")
    noisy = "# a comment\n" + text.replace("[seidel]", "[seidel]  # maps\n# more")
    assert parse_space(noisy) == parse_space(text)


# rendering --------------------------------------------------------------------

@pytest.mark.parametrize("sid", builtin_ids(4))
def test_round_trip(sid):
    s = builtin(sid)
    text = render_space(s)
    assert parse_space(text) == s
    assert render_space(parse_space(text)) == text


def test_unknowns_render_with_question_mark():
    text = render_space(builtin("projective_space(2)"))
    assert "?alpha*u*e1" in text and "?F*q*u*e0" in text


def test_empty_sections_are_omitted():
    text = render_space(builtin("complex_plane"))
    assert "[product]" not in text and "[inverse]" not in text and "[ansatz]" not in text


@pytest.mark.parametrize("sid", GOLDEN_IDS)
def test_golden_files(sid):
    path = golden_path(sid)
    text = render_space(builtin(sid))
    if UPDATE:
        path.write_text(text, encoding="utf-8")
    assert path.read_text(encoding="utf-8") == text
    assert load_space(path) == builtin(sid)
