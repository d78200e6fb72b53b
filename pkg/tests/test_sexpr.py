"""Canonical s-expression grammar: parsing, errors, round trips."""

import pytest

from pvk.errors import CertificateSyntaxError
from pvk import sexpr
from pvk.ops import ONE, disj, forall, op, var, var_range
from pvk.exprs import ExprTuple, Literal


def test_grammar_example():
    text = ('(Operation (Literal "logic.booleans.disjunction" "Or") '
            '(ExprTuple (Variable "A") (Variable "B")))')
    assert sexpr.parse(text) is disj(var("A"), var("B"))


def test_whitespace_insensitive():
    a = sexpr.parse('(ExprTuple (Variable "x")   (Variable "y"))')
    b = sexpr.parse('(ExprTuple\n  (Variable "x")\n  (Variable "y"))')
    assert a is b


def test_string_escapes():
    lit = Literal('pkg"x', 'na\\me')
    assert sexpr.parse(lit.sexpr()) is lit


def test_error_reports_line_and_column():
    with pytest.raises(CertificateSyntaxError) as err:
        sexpr.parse('(ExprTuple\n  (Variable "x")\n  (Bogus "y"))')
    assert err.value.line == 3
    with pytest.raises(CertificateSyntaxError):
        sexpr.parse("(Variable")
    with pytest.raises(CertificateSyntaxError):
        sexpr.parse('(Variable "x") trailing')
    with pytest.raises(CertificateSyntaxError):
        sexpr.parse("")


def test_round_trip_nested():
    n = var("n")
    e = forall([var_range("A", ONE, n)],
               op(var("P"), ExprTuple(var_range("A", ONE, n))))
    assert sexpr.parse(sexpr.serialize(e)) is e
