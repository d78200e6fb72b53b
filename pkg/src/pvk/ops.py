"""Constant catalog and convenience constructors for common expressions.

Literal identity is the (theory-package qualifier, name) pair; the handful
of literals below play fixed roles in the derivation and reduction rules
(Forall, Implies, And, Equals, tuple Len) while the rest are ordinary
operator symbols used by the bundled theories.
"""

from __future__ import annotations

from .errors import MalformedParts
from .exprs import (Conditional, ExprRange, ExprTuple, IndexedVar, Lambda,
                    Literal, Operation, Variable)

TRUE = Literal("logic.booleans", "TRUE")
FALSE = Literal("logic.booleans", "FALSE")
BOOLEANS = Literal("logic.booleans", "Booleans")
IMPLIES = Literal("logic.booleans.implication", "Implies")
IFF = Literal("logic.booleans.implication", "Iff")
NOT = Literal("logic.booleans.negation", "Not")
AND = Literal("logic.booleans.conjunction", "And")
OR = Literal("logic.booleans.disjunction", "Or")
FORALL = Literal("logic.booleans.quantification.universality", "Forall")
EXISTS = Literal("logic.booleans.quantification.existence", "Exists")
NOTEXISTS = Literal("logic.booleans.quantification.existence", "NotExists")
EQUALS = Literal("logic.equality", "Equals")
NOTEQUALS = Literal("logic.equality", "NotEquals")
IN_SET = Literal("logic.sets.membership", "InSet")
NOTIN_SET = Literal("logic.sets.membership", "NotInSet")
SET_EQUIV = Literal("logic.sets.equivalence", "SetEquiv")
SET_NOTEQUIV = Literal("logic.sets.equivalence", "SetNotEquiv")
ENUM_SET = Literal("logic.sets.enumeration", "Set")
SUBSET_EQ = Literal("logic.sets.inclusion", "SubsetEq")
NOT_SUBSET_EQ = Literal("logic.sets.inclusion", "NotSubsetEq")
PROPER_SUBSET = Literal("logic.sets.inclusion", "ProperSubset")
NOT_PROPER_SUBSET = Literal("logic.sets.inclusion", "NotProperSubset")
UNION = Literal("logic.sets.unification", "Union")
UNION_OF_ALL = Literal("logic.sets.unification", "UnionOfAll")
INTERSECT = Literal("logic.sets.intersection", "Intersect")
INTERSECT_OF_ALL = Literal("logic.sets.intersection", "IntersectOfAll")
DIFFERENCE = Literal("logic.sets.subtraction", "Difference")
SET_OF_ALL = Literal("logic.sets.comprehension", "SetOfAll")
POWER_SET = Literal("logic.sets.power_sets", "PowerSet")
CARD = Literal("logic.sets.cardinality", "Card")
LEN = Literal("core_expr_types.tuples", "Len")
CONDITIONAL_SET = Literal("core_expr_types.conditionals", "ConditionalSet")
NATURALS = Literal("numbers.number_sets.natural_numbers", "Naturals")
NATURALS_POS = Literal("numbers.number_sets.natural_numbers", "NaturalsPos")
ADD = Literal("numbers.addition", "Add")
MULT = Literal("numbers.multiplication", "Mult")
DIV = Literal("numbers.division", "Div")
NEG = Literal("numbers.negation", "Neg")
EXP = Literal("numbers.exponentiation", "Exp")
GREATER = Literal("numbers.ordering", "Greater")
LESS = Literal("numbers.ordering", "Less")


def num(n):
    """Decimal numeral literal."""
    return Literal("numbers.numerals.decimals", str(n))


ZERO = num(0)
ONE = num(1)
TWO = num(2)


def var(name):
    return Variable(name)


def indexed(base, *indices):
    if isinstance(base, str):
        base = Variable(base)
    return IndexedVar(base, *indices)


def op(operator, *operands):
    return Operation(operator, ExprTuple(*operands))


def equals(a, b):
    return op(EQUALS, a, b)


def not_equals(a, b):
    return op(NOTEQUALS, a, b)


def implies(a, b):
    return op(IMPLIES, a, b)


def iff(a, b):
    return op(IFF, a, b)


def neg(a):
    return op(NOT, a)


def conj(*xs):
    return op(AND, *xs)


def disj(*xs):
    return op(OR, *xs)


def in_set(x, s):
    return op(IN_SET, x, s)


def notin_set(x, s):
    return op(NOTIN_SET, x, s)


def in_bool(x):
    return in_set(x, BOOLEANS)


def enum_set(*xs):
    return op(ENUM_SET, *xs)


def add(*xs):
    return op(ADD, *xs)


def mult(*xs):
    return op(MULT, *xs)


def tuple_len(*entries):
    """|(e1, ..., en)|  — length of a tuple of entries."""
    return Operation(LEN, ExprTuple(*entries))


def var_range(base, start, end, index_name="_i"):
    """The range base_start, ..., base_end of indexed variables."""
    if isinstance(base, str):
        base = Variable(base)
    if base.name == index_name:
        index_name = "_j"
    k = Variable(index_name)
    return ExprRange(Lambda((k,), IndexedVar(base, k)), start, end)


def func_range(fn, start, end, index_name="_i"):
    """The range fn(start), ..., fn(end) for an arbitrary one-place map."""
    k = Variable(index_name)
    return ExprRange(Lambda((k,), fn(k)), start, end)


def index_range(start, end):
    """The index tuple (start, ..., end)."""
    k = Variable("_i")
    return ExprRange(Lambda((k,), k), start, end)


def _as_condition(conditions):
    conditions = tuple(conditions)
    if not conditions:
        return None
    if len(conditions) == 1 and not isinstance(conditions[0], ExprRange):
        return conditions[0]
    # several conditions, or a range of them, form a conjunction
    return conj(*conditions)


def quantify(quantifier, params, body, conditions=()):
    """Desugar a conditioned quantifier to its primitive structure."""
    params = tuple(params)
    if not params:
        raise MalformedParts("quantifier needs at least one parameter")
    cond = _as_condition(conditions)
    inner = Conditional(body, cond) if cond is not None else body
    return Operation(quantifier, ExprTuple(Lambda(params, inner)))


def forall(params, body, conditions=()):
    return quantify(FORALL, params, body, conditions)


def exists(params, body, conditions=()):
    return quantify(EXISTS, params, body, conditions)


def conditional_set(*conditionals):
    for c in conditionals:
        if not isinstance(c, Conditional):
            raise MalformedParts("conditional_set operands must be Conditionals")
    return op(CONDITIONAL_SET, *conditionals)


def expr_array(rows):
    """2-D array as a tuple of tuples (round-trippable structure only)."""
    return ExprTuple(*[ExprTuple(*row) for row in rows])


def build_composite(form, parts):
    if form == "quantifier":
        quantifier, params, conditions, body = parts
        return quantify(quantifier, params, body, conditions)
    if form == "conditional_set":
        return conditional_set(*parts)
    if form == "expr_array":
        return expr_array(parts)
    raise MalformedParts(f"unknown composite form {form!r}")
