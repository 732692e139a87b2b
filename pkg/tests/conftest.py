import sys

import sympy
from hypothesis import settings

from eqseidel.poly import Poly
from eqseidel.ring import RingElem

settings.register_profile("repo", deadline=None, max_examples=60)
settings.load_profile("repo")

q, u, r = sympy.symbols("q u r")


def to_sympy(x):
    """Independent view of a ring element or polynomial as a sympy expression."""
    if isinstance(x, RingElem):
        return sum((sympy.Rational(c) * q**a * u**b for (a, b), c in x.terms.items()), sympy.Integer(0))
    if isinstance(x, Poly):
        out = sympy.Integer(0)
        for mono, c in x.terms.items():
            term = sympy.Rational(c)
            for v, e in mono:
                term *= sympy.Symbol(v) ** e
            out += term
        return out
    return sympy.Rational(x)


def matrix_to_sympy(M):
    rows = M.matrix if hasattr(M, "matrix") else M
    return sympy.Matrix([[to_sympy(e) for e in row] for row in rows])


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    if acceptance is not None and acceptance.REPORT:
        terminalreporter.section("acceptance criteria")
        for line in sorted(acceptance.REPORT, key=lambda s: int(s.split("criterion ")[1].split()[0])):
            terminalreporter.write_line(line)
