"""Programmatic definitions of the bundled theory packages.

``standard_axioms`` builds every axiom of the basic theories; the fixture
files under ``stdlib_data`` are generated from these (see
``tools/gen_stdlib.py``) and pinned by digest, so edits here require
regenerating the fixtures.
"""

from __future__ import annotations

from .exprs import Conditional, ExprRange, ExprTuple, Lambda, Literal, Operation, Variable
from .ops import (ADD, AND, BOOLEANS, CARD, DIV, ENUM_SET, EQUALS, EXP, EXISTS,
                  FALSE, FORALL, GREATER, IFF, IMPLIES, IN_SET, INTERSECT,
                  INTERSECT_OF_ALL, LEN, LESS, MULT, NATURALS, NATURALS_POS,
                  NOT, NOTEQUALS, NOTEXISTS, NOTIN_SET, NOT_PROPER_SUBSET,
                  NOT_SUBSET_EQ, ONE, OR, POWER_SET, PROPER_SUBSET, SET_EQUIV,
                  SET_NOTEQUIV, SET_OF_ALL, SUBSET_EQ, TRUE, TWO, UNION,
                  UNION_OF_ALL, ZERO, add, conj, disj, enum_set, equals,
                  exists, forall, func_range, iff, implies, in_bool, in_set,
                  indexed, mult, neg, not_equals, notin_set, num, op,
                  quantify, tuple_len, var, var_range)

A, B, P, Q, R, S = map(var, "ABPQRS")
a, b, c, d, e, f, g = map(var, "abcdefg")
i, j, k, m, n, x, y, z, q, p = map(var, ("i", "j", "k", "m", "n", "x", "y",
                                         "z", "q", "p"))

RATIONALS = Literal("numbers.number_sets.rational_numbers", "Rationals")
RATIONALS_NONZERO = Literal("numbers.number_sets.rational_numbers",
                            "RationalsNonZero")
RATIONALS_POS = Literal("numbers.number_sets.rational_numbers", "RationalsPos")
INTEGERS = Literal("numbers.number_sets.integer_numbers", "Integers")
REALS = Literal("numbers.number_sets.real_numbers", "Reals")
REALS_POS = Literal("numbers.number_sets.real_numbers", "RealsPos")
COMPLEXES = Literal("numbers.number_sets.complex_numbers", "Complexes")
GCD = Literal("numbers.divisibility", "Gcd")
DIVIDES = Literal("numbers.divisibility", "Divides")
ABS = Literal("numbers.absolute_value", "Abs")
SQRT2 = Literal("numbers.exponentiation", "sqrt2")


def _app(fn, *operands):
    return op(fn, *operands)


def _tuple_of(base, count_end):
    return ExprTuple(var_range(base, ONE, count_end))


def _f_range(fn, start, end):
    return func_range(lambda t: _app(fn, t), start, end)


def standard_axioms():
    """Ordered {package: [(name, statement), ...]} for the basic theories."""
    out = {}

    def pkg(path, *stmts):
        out[path] = [(f"axiom{idx}", stmt) for idx, stmt in enumerate(stmts, 1)]

    x_to_n = var_range("x", ONE, n)
    y_to_n = var_range("y", ONE, n)

    # operations: a function applied to equal tuples gives equal values
    pkg("core_expr_types.operations",
        forall([n], forall([f, x_to_n, y_to_n],
                           equals(Operation(f, _tuple_of("x", n)),
                                  Operation(f, _tuple_of("y", n))),
                           [equals(_tuple_of("x", n), _tuple_of("y", n))]),
               [in_set(n, NATURALS)]))

    # conditionals
    pkg("core_expr_types.conditionals",
        forall([a], equals(Conditional(a, TRUE), a)),
        forall([a, Q], equals(Conditional(a, Q),
                              Conditional(a, equals(Q, TRUE)))),
        forall([a, b, Q], equals(Conditional(a, Q), Conditional(b, Q)),
               [implies(Q, equals(a, b))]))

    # lambda_maps
    a_to_i = var_range("a", ONE, i)
    b_to_i = var_range("b", ONE, i)
    c_to_i = var_range("c", ONE, i)
    pkg("core_expr_types.lambda_maps",
        forall([i], forall([f, g], implies(
            forall([a_to_i], equals(Operation(f, _tuple_of("a", i)),
                                    Operation(g, _tuple_of("a", i)))),
            equals(Lambda((b_to_i,), Operation(f, _tuple_of("b", i))),
                   Lambda((c_to_i,), Operation(g, _tuple_of("c", i)))))),
               [in_set(i, NATURALS_POS)]))

    # tuples
    pkg("core_expr_types.tuples",
        equals(tuple_len(), ZERO),
        forall([i], forall([a_to_i, b],
                           equals(tuple_len(var_range("a", ONE, i), b),
                                  add(i, ONE))),
               [in_set(i, NATURALS)]),
        forall([i], forall([a_to_i, b, c_to_i, d],
                           equals(
                               equals(ExprTuple(var_range("a", ONE, i), b),
                                      ExprTuple(var_range("c", ONE, i), d)),
                               conj(equals(ExprTuple(var_range("a", ONE, i)),
                                           ExprTuple(var_range("c", ONE, i))),
                                    equals(b, d)))),
               [in_set(i, NATURALS)]),
        forall([f, i, j], equals(ExprTuple(_f_range(f, i, j)), ExprTuple()),
               [equals(add(j, ONE), i)]),
        forall([f, i, j],
               equals(ExprTuple(_f_range(f, i, add(j, ONE))),
                      ExprTuple(_f_range(f, i, j), _app(f, add(j, ONE)))),
               [in_set(tuple_len(_f_range(f, i, j)), NATURALS)]))

    # booleans
    pkg("logic.booleans",
        TRUE,
        equals(BOOLEANS, enum_set(TRUE, FALSE)),
        not_equals(FALSE, TRUE),
        forall([A], equals(A, TRUE), [A]),
        forall([A], A, [equals(A, TRUE)]))

    pkg("logic.booleans.implication",
        equals(implies(TRUE, FALSE), FALSE),
        forall([A], A, [in_bool(A), implies(neg(A), FALSE)]),
        forall([A], neg(A), [in_bool(A), implies(A, FALSE)]),
        forall([A, B], equals(iff(A, B),
                              conj(implies(A, B), implies(B, A)))))

    pkg("logic.booleans.negation",
        equals(neg(TRUE), FALSE),
        equals(neg(FALSE), TRUE),
        forall([A], equals(A, FALSE), [neg(A)]),
        forall([A], in_bool(A), [in_bool(neg(A))]))

    A_to_m = var_range("A", ONE, m)
    pkg("logic.booleans.conjunction",
        equals(conj(TRUE, TRUE), TRUE),
        equals(conj(TRUE, FALSE), FALSE),
        equals(conj(FALSE, TRUE), FALSE),
        equals(conj(FALSE, FALSE), FALSE),
        forall([A, B], in_bool(A), [in_bool(conj(A, B))]),
        forall([A, B], in_bool(B), [in_bool(conj(A, B))]),
        conj(),
        forall([m], forall([A_to_m, B],
                           equals(conj(var_range("A", ONE, m), B),
                                  conj(conj(var_range("A", ONE, m)), B))),
               [in_set(m, NATURALS)]))

    pkg("logic.booleans.disjunction",
        equals(disj(TRUE, TRUE), TRUE),
        equals(disj(TRUE, FALSE), TRUE),
        equals(disj(FALSE, TRUE), TRUE),
        equals(disj(FALSE, FALSE), FALSE),
        forall([A, B], in_bool(A), [in_bool(disj(A, B))]),
        forall([A, B], in_bool(B), [in_bool(disj(A, B))]),
        neg(disj()),
        forall([m], forall([A_to_m, B],
                           equals(disj(var_range("A", ONE, m), B),
                                  disj(disj(var_range("A", ONE, m)), B))),
               [in_set(m, NATURALS)]))

    pkg("logic.booleans.quantification.universality",
        forall([n], forall([P], in_bool(
            forall([x_to_n], Operation(P, _tuple_of("x", n))))),
               [in_set(n, NATURALS_POS)]))

    def _pq_quant(quantifier, base):
        rng = var_range(base, ONE, n)
        return quantify(quantifier, [rng],
                        Operation(P, ExprTuple(var_range(base, ONE, n))),
                        [Operation(Q, ExprTuple(var_range(base, ONE, n)))])

    pkg("logic.booleans.quantification.existence",
        forall([n], forall([P, Q], equals(
            _pq_quant(EXISTS, "x"),
            neg(quantify(FORALL, [y_to_n],
                         not_equals(Operation(P, _tuple_of("y", n)), TRUE),
                         [Operation(Q, _tuple_of("y", n))])))),
               [in_set(n, NATURALS_POS)]),
        forall([n], forall([P, Q], equals(
            _pq_quant(NOTEXISTS, "x"),
            neg(_pq_quant(EXISTS, "y")))),
               [in_set(n, NATURALS_POS)]))

    pkg("logic.equality",
        forall([x, y], in_bool(equals(x, y))),
        forall([x, y], equals(equals(y, x), equals(x, y))),
        forall([x, y, z], equals(x, z), [equals(x, y), equals(y, z)]),
        forall([x, y], equals(not_equals(x, y), neg(equals(x, y)))),
        forall([x], equals(x, x)),
        forall([f, x, y], equals(_app(f, x), _app(f, y)), [equals(x, y)]))

    pkg("logic.sets.membership",
        forall([x, S], equals(notin_set(x, S), neg(in_set(x, S)))))

    pkg("logic.sets.equivalence",
        forall([A, B], equals(op(SET_EQUIV, A, B),
                              forall([x], equals(in_set(x, A), in_set(x, B))))),
        forall([A, B], equals(op(SET_NOTEQUIV, A, B),
                              neg(op(SET_EQUIV, A, B)))))

    pkg("logic.sets.enumeration",
        forall([n], forall([x, y_to_n], equals(
            in_set(x, Operation(ENUM_SET, _tuple_of("y", n))),
            Operation(OR, ExprTuple(func_range(
                lambda t: equals(x, indexed("y", t)), ONE, n))))),
               [in_set(n, NATURALS)]))

    pkg("logic.sets.inclusion",
        forall([A, B], equals(op(SUBSET_EQ, A, B),
                              forall([x], in_set(x, B), [in_set(x, A)]))),
        forall([A, B], equals(op(NOT_SUBSET_EQ, A, B),
                              neg(op(SUBSET_EQ, A, B)))),
        forall([A, B], equals(op(PROPER_SUBSET, A, B),
                              conj(op(SUBSET_EQ, A, B),
                                   op(SET_NOTEQUIV, B, A)))),
        forall([A, B], equals(op(NOT_PROPER_SUBSET, A, B),
                              neg(op(PROPER_SUBSET, A, B)))))

    def _domained(quantifier, base, sets_base, count, body, extra_condition):
        rng = var_range(base, ONE, count)
        domain = func_range(lambda t: in_set(indexed(base, t),
                                             indexed(sets_base, t)), ONE, count)
        conditions = [domain] + ([extra_condition] if extra_condition is not None
                                 else [])
        return quantify(quantifier, [rng], body, conditions)

    S_to_n = var_range("S", ONE, n)
    Q_of_y = Operation(Q, _tuple_of("y", n))
    R_of_y = Operation(R, _tuple_of("y", n))

    pkg("logic.sets.unification",
        forall([m], forall([x, A_to_m], equals(
            in_set(x, Operation(UNION, _tuple_of("A", m))),
            Operation(OR, ExprTuple(func_range(
                lambda t: in_set(x, indexed("A", t)), ONE, m))))),
               [in_set(m, NATURALS_POS)]),
        forall([n], forall([S_to_n, Q, R, x], equals(
            in_set(x, _domained(UNION_OF_ALL, "y", "S", n, R_of_y, Q_of_y)),
            _domained(EXISTS, "y", "S", n, in_set(x, R_of_y), Q_of_y))),
               [in_set(n, NATURALS_POS)]))

    pkg("logic.sets.intersection",
        forall([m], forall([x, A_to_m], equals(
            in_set(x, Operation(INTERSECT, _tuple_of("A", m))),
            Operation(AND, ExprTuple(func_range(
                lambda t: in_set(x, indexed("A", t)), ONE, m))))),
               [in_set(m, NATURALS_POS)]),
        forall([n], forall([S_to_n, Q, R, x], equals(
            in_set(x, _domained(INTERSECT_OF_ALL, "y", "S", n, R_of_y, Q_of_y)),
            _domained(FORALL, "y", "S", n, in_set(x, R_of_y), Q_of_y)),
               [_domained(EXISTS, "y", "S", n, Q_of_y, None)]),
               [in_set(n, NATURALS_POS)]))

    pkg("logic.sets.subtraction",
        forall([x, A, B], equals(
            in_set(x, Operation(Literal("logic.sets.subtraction", "Difference"),
                                ExprTuple(A, B))),
            conj(in_set(x, A), notin_set(x, B)))))

    f_of_y = Operation(f, _tuple_of("y", n))
    pkg("logic.sets.comprehension",
        forall([n], forall([S_to_n, Q, f, x], equals(
            in_set(x, _domained(SET_OF_ALL, "y", "S", n, f_of_y, Q_of_y)),
            _domained(EXISTS, "y", "S", n, equals(x, f_of_y), Q_of_y))),
               [in_set(n, NATURALS_POS)]))

    pkg("logic.sets.power_sets",
        forall([x, S], equals(in_set(x, op(POWER_SET, S)),
                              op(SUBSET_EQ, x, S))))

    pkg("logic.sets.cardinality",
        equals(op(CARD, enum_set()), ZERO),
        forall([x, S], equals(op(CARD, op(UNION, S, enum_set(x))),
                              add(op(CARD, S), ONE)),
               [in_set(op(CARD, S), NATURALS), notin_set(x, S)]))

    pkg("numbers.number_sets.natural_numbers",
        in_set(ZERO, NATURALS),
        forall([n], in_set(add(n, ONE), NATURALS), [in_set(n, NATURALS)]),
        forall([m, n], equals(n, m),
               [in_set(m, NATURALS), in_set(n, NATURALS),
                equals(add(m, ONE), add(n, ONE))]),
        forall([n], not_equals(add(n, ONE), ZERO), [in_set(n, NATURALS)]),
        forall([S], implies(conj(in_set(ZERO, S),
                                 forall([x], in_set(add(x, ONE), S),
                                        [in_set(x, S)])),
                            op(SET_EQUIV, S, NATURALS)),
               [op(SUBSET_EQ, S, NATURALS)]),
        forall([x], in_bool(in_set(x, NATURALS))),
        equals(NATURALS_POS,
               quantify(SET_OF_ALL, [n], n,
                        [in_set(n, NATURALS), op(GREATER, n, ZERO)])))

    return out


# Decimal numeral successor definitions (these appear among the axioms the
# reference development requires; the basic-theory packages above leave
# numerals symbolic, so sessions that need 1 and 2 register these).
def numeral_axioms():
    return {"numbers.numerals.decimals": [
        ("axiom1", equals(ONE, add(ZERO, ONE))),
        ("axiom2", equals(TWO, add(ONE, ONE))),
    ]}


def _divides(u, v):
    return op(DIVIDES, u, v)


def _frac(u, v):
    return op(DIV, u, v)


def _square(u):
    return op(EXP, u, TWO)


def _abs(u):
    return op(ABS, u)


def root2_conjectures():
    """The unproven conjecture statements the flagship irrationality proof
    rests on, shipped as parse-and-closure test data."""
    return [
        forall([i], forall([f], equals(
            tuple_len(func_range(lambda t: _app(f, t), ONE, i)),
            tuple_len(func_range(lambda t: t, ONE, i)))),
               [in_set(i, NATURALS)]),
        forall([a], in_set(_abs(a), RATIONALS_POS),
               [in_set(a, RATIONALS_NONZERO)]),
        forall([a, b], forall([p], neg(conj(_divides(p, a), _divides(p, b))),
                              [in_set(p, NATURALS_POS),
                               op(GREATER, p, ONE)]),
               [in_set(a, NATURALS_POS), in_set(b, NATURALS_POS),
                equals(_app(GCD, a, b), ONE)]),
        forall([k, a, n], _divides(op(EXP, k, n), op(EXP, a, n)),
               [in_set(k, INTEGERS), in_set(a, INTEGERS),
                in_set(n, NATURALS_POS), _divides(k, a)]),
        forall([a, b, k], _divides(a, b),
               [in_set(a, COMPLEXES), in_set(b, COMPLEXES),
                in_set(k, COMPLEXES), _divides(mult(k, a), mult(k, b)),
                not_equals(k, ZERO)]),
        forall([a, n], _divides(TWO, a),
               [in_set(a, INTEGERS), in_set(n, INTEGERS),
                _divides(TWO, op(EXP, a, n))]),
        forall([x, y], _divides(x, mult(x, y)),
               [in_set(x, COMPLEXES), in_set(y, INTEGERS),
                not_equals(x, ZERO)]),
        forall([a, b], in_set(_frac(a, b), RATIONALS_NONZERO),
               [in_set(a, RATIONALS_NONZERO), in_set(b, RATIONALS_NONZERO)]),
        forall([x], equals(_frac(x, ONE), x), [in_set(x, COMPLEXES)]),
        forall([a, b, c, d, e], equals(
            mult(_frac(a, mult(b, c)), _frac(mult(c, d), e)),
            mult(_frac(a, b), _frac(d, e))),
               [in_set(a, COMPLEXES), in_set(b, COMPLEXES),
                in_set(c, COMPLEXES), in_set(d, COMPLEXES),
                in_set(e, COMPLEXES), not_equals(c, ZERO)]),
        forall([a, b], in_set(op(EXP, a, b), NATURALS_POS),
               [in_set(a, NATURALS_POS), in_set(b, NATURALS)]),
        forall([a, b], not_equals(op(EXP, a, b), ZERO),
               [in_set(a, RATIONALS_NONZERO), in_set(b, RATIONALS_NONZERO)]),
        forall([n, x], equals(op(EXP, op(EXP, x, _frac(ONE, n)), n), x),
               [in_set(n, NATURALS_POS), in_set(x, REALS_POS)]),
        forall([a, b, n], equals(op(EXP, mult(a, b), n),
                                 mult(op(EXP, a, n), op(EXP, b, n))),
               [in_set(a, COMPLEXES), in_set(b, COMPLEXES),
                in_set(n, NATURALS_POS)]),
        forall([a], equals(_square(_abs(a)), _square(a)),
               [in_set(a, RATIONALS)]),
        forall([x], equals(_square(x), mult(x, x)), [in_set(x, COMPLEXES)]),
        forall([x], equals(mult(ONE, x), x), [in_set(x, COMPLEXES)]),
        forall([x], equals(mult(x, ONE), x), [in_set(x, COMPLEXES)]),
        forall([a, x, y], equals(mult(x, a), mult(y, a)),
               [in_set(a, COMPLEXES), in_set(x, COMPLEXES),
                in_set(y, COMPLEXES), equals(x, y)]),
        op(PROPER_SUBSET, REALS, COMPLEXES),
        op(PROPER_SUBSET, NATURALS, INTEGERS),
        op(PROPER_SUBSET, NATURALS_POS, NATURALS),
        op(PROPER_SUBSET, INTEGERS, RATIONALS),
        op(PROPER_SUBSET, NATURALS_POS, RATIONALS_NONZERO),
        forall([q], in_set(q, RATIONALS_NONZERO),
               [in_set(q, RATIONALS), not_equals(q, ZERO)]),
        op(PROPER_SUBSET, RATIONALS_POS, RATIONALS),
        forall([q], exists([a, b], conj(equals(q, _frac(a, b)),
                                        equals(_app(GCD, a, b), ONE)),
                           [in_set(a, NATURALS_POS),
                            in_set(b, NATURALS_POS)]),
               [in_set(q, RATIONALS_POS)]),
        forall([x], in_bool(in_set(x, RATIONALS))),
        in_set(ZERO, RATIONALS),
        op(PROPER_SUBSET, NATURALS_POS, REALS_POS),
        op(PROPER_SUBSET, RATIONALS, REALS),
        op(PROPER_SUBSET, REALS_POS, REALS),
        op(LESS, ONE, TWO),
        in_set(ONE, NATURALS_POS),
        in_set(TWO, NATURALS_POS),
        forall([a, b], equals(tuple_len(a, b),
                              tuple_len(func_range(lambda t: t, ONE, TWO)))),
        forall([a, b], not_equals(a, b),
               [in_set(a, REALS), in_set(b, REALS), op(GREATER, a, b)]),
        forall([a], op(GREATER, a, ZERO), [in_set(a, REALS_POS)]),
    ]
