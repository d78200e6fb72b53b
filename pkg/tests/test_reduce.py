"""Reduction engine: the worked beta-reduction examples, range expansion,
capture avoidance, and the non-termination guard."""

import random

import pytest

from pvk.errors import (AmbiguousMatch, FuelExhausted, IndexMismatch,
                        LengthMismatch, RangeBodyForbidden, RelabelForbidden)
from pvk.exprs import (ExprRange, ExprTuple, IndexedVar, Lambda, Operation,
                       Variable)
from pvk.ops import (ADD, AND, FALSE, MULT, NATURALS, NEG, ONE, OR, TRUE, TWO,
                     add, conj, disj, equals, forall, implies, in_set,
                     index_range, indexed, mult, neg, num, op, tuple_len, var,
                     var_range)
from pvk import reduce as rd


def test_simple_triple_application():
    x, y, z, a, b = map(var, "xyzab")
    f = Lambda((x, y, z), mult(add(x, y), z))
    res = rd.apply_lambda(f, [add(a, x), mult(b, y), add(b, y, x)])
    assert res.expr == mult(add(add(a, x), mult(b, y)), add(b, y, x))
    assert res.requirements == ()


def test_identity_application():
    x = var("x")
    out = rd.apply_lambda(Lambda((x,), x), [add(var("a"), var("b"))])
    assert out.expr == add(var("a"), var("b"))
    assert out.requirements == ()


def test_range_dot_product_two_length_requirements():
    n, k = var("n"), var("k")
    f = Lambda((var_range("x", ONE, n), var_range("y", ONE, n)),
               Operation(ADD, ExprTuple(ExprRange(
                   Lambda((k,), mult(indexed("x", k), indexed("y", k))),
                   ONE, n))))
    squares = ExprRange(Lambda((k,), mult(k, k)), ONE, n)
    doubles = ExprRange(Lambda((k,), add(k, k)), ONE, n)
    res = rd.apply_lambda(f, [squares, doubles],
                          assumptions=[in_set(n, NATURALS)])
    assert res.expr == Operation(ADD, ExprTuple(ExprRange(
        Lambda((k,), mult(mult(k, k), add(k, k))), ONE, n)))
    assert list(res.requirements) == [
        equals(tuple_len(squares), tuple_len(index_range(ONE, n))),
        equals(tuple_len(doubles), tuple_len(index_range(ONE, n))),
    ]


def test_alternative_expansион_six_requirements():
    i, j, m, k, q = map(var, "ijmkq")
    A, D = var("A"), var("D")
    im1 = add(i, op(NEG, ONE))
    conj_range = ExprRange(Lambda((k,), indexed("A", k)), ONE, j)
    inner_forall = forall([var_range("A", i, j)],
                          Operation(OR, ExprTuple(var_range("A", i, j))))
    lam = Lambda((var_range("A", ONE, m),),
                 Operation(AND, ExprTuple(conj_range, inner_forall,
                                          indexed("A", m))))
    negB = ExprRange(Lambda((q,), neg(indexed("B", q))), ONE, im1)
    negC = ExprRange(Lambda((q,), neg(indexed("C", q))), ONE, i)
    last = disj(A, D)
    operand = ExprTuple(negB, negC, last)
    alt1 = ExprTuple(var_range("A", ONE, im1), var_range("A", i, j),
                     indexed("A", m))
    alt2 = ExprTuple(var_range("A", ONE, j), indexed("A", m))
    res = rd.apply_lambda(lam, operand,
                          alt_expansions=[(alt1, operand), (alt2, operand)])
    # the masked inner quantifier is untouched; the slices splice in order
    assert res.expr == Operation(AND, ExprTuple(negB, negC, inner_forall,
                                                last))
    assert list(res.requirements) == [
        equals(tuple_len(negB, negC, last), tuple_len(index_range(ONE, m))),
        equals(tuple_len(negB), tuple_len(index_range(ONE, im1))),
        equals(tuple_len(negC), tuple_len(index_range(i, j))),
        equals(tuple_len(negB, negC), tuple_len(index_range(ONE, j))),
        equals(ExprTuple(index_range(ONE, im1), index_range(i, j), m),
               ExprTuple(index_range(ONE, m))),
        equals(ExprTuple(index_range(ONE, j), m),
               ExprTuple(index_range(ONE, m))),
    ]


def test_empty_and_singular_range_reduction():
    a, c, n = var("a"), var("c"), var("n")
    lam = Lambda((n,), ExprTuple(a, var_range("b", ONE, n), c))
    assert rd.apply_lambda(lam, [num(0)]).expr == ExprTuple(a, c)
    assert rd.apply_lambda(lam, [num(1)]).expr == \
        ExprTuple(a, indexed("b", ONE), c)


def test_extent_from_supplied_judgments():
    a, c, n = var("a"), var("c"), var("n")
    tup = ExprTuple(a, var_range("b", ONE, n), c)
    fact = equals(add(n, ONE), ONE)  # n + 1 = 1, so the range is empty
    res = rd.substitute(tup, rd.ReplacementMap(), assumptions=[fact])
    assert res.expr == ExprTuple(a, c)
    assert res.assumptions_used == {fact}
    rerun = rd.substitute(tup, rd.ReplacementMap(),
                          assumptions=sorted(res.assumptions_used,
                                             key=lambda e: e.expr_id()))
    assert rerun.expr == res.expr


def test_parameter_dependent_expansion():
    n, j, k, q = var("n"), var("j"), var("k"), var("q")
    body = Operation(ADD, ExprTuple(ExprRange(
        Lambda((k,), mult(k, indexed("x", k))), ONE, n)))
    univ = forall([var_range("x", ONE, n)], body)
    first = ExprRange(Lambda((q,), indexed("a", q)), ONE, j)
    second = ExprRange(Lambda((q,), indexed("a", q)), add(j, ONE), n)
    rmap = rd.ReplacementMap({var_range("x", ONE, n):
                              ExprTuple(first, second)})
    out = rd.instantiation_outcome(univ, rmap, layers=1)
    assert out.expr == Operation(ADD, ExprTuple(
        ExprRange(Lambda((k,), mult(k, indexed("a", k))), ONE, j),
        ExprRange(Lambda((k,), mult(k, indexed("a", k))), add(j, ONE), n)))
    assert list(out.requirements) == [
        equals(ExprTuple(index_range(ONE, j), index_range(add(j, ONE), n)),
               ExprTuple(index_range(ONE, n)))]


def test_parameter_dependent_mismatch_is_an_error():
    n, j, k, q = var("n"), var("j"), var("k"), var("q")
    body = Operation(ADD, ExprTuple(ExprRange(
        Lambda((k,), mult(k, indexed("x", k))), ONE, n)))
    univ = forall([var_range("x", ONE, n)], body)
    first = ExprRange(Lambda((q,), indexed("a", q)), ONE, j)
    second = ExprRange(Lambda((q,), indexed("b", q)), ONE, var("kk"))
    rmap = rd.ReplacementMap({var_range("x", ONE, n):
                              ExprTuple(first, second)})
    with pytest.raises(IndexMismatch):
        rd.instantiation_outcome(univ, rmap, layers=1)


def test_parameter_independent_expansion():
    n, j, k, q, kk = var("n"), var("j"), var("k"), var("q"), var("kk")
    body = Operation(ADD, ExprTuple(ExprRange(
        Lambda((k,), mult(indexed("x", k), indexed("y", k))), ONE, n)))
    univ = forall([var_range("x", ONE, n), var_range("y", ONE, n)], body)
    slices = {
        "x": (ExprRange(Lambda((q,), indexed("a", q)), ONE, j),
              ExprRange(Lambda((q,), indexed("b", q)), ONE, kk)),
        "y": (ExprRange(Lambda((q,), indexed("c", q)), ONE, j),
              ExprRange(Lambda((q,), indexed("d", q)), ONE, kk)),
    }
    rmap = rd.ReplacementMap({var_range("x", ONE, n): ExprTuple(*slices["x"]),
                              var_range("y", ONE, n): ExprTuple(*slices["y"])})
    out = rd.instantiation_outcome(univ, rmap, layers=1,
                                   assumptions=[equals(add(j, kk), n)])
    assert out.expr == Operation(ADD, ExprTuple(
        ExprRange(Lambda((k,), mult(indexed("a", k), indexed("c", k))),
                  ONE, j),
        ExprRange(Lambda((k,), mult(indexed("b", k), indexed("d", k))),
                  ONE, kk)))


def test_curry_fuel_exhaustion():
    P, g = var("P"), var("g")
    lam = Lambda((P,), implies(op(P, P), FALSE))
    curry = Lambda((g,), op(g, g))
    with pytest.raises(FuelExhausted):
        rd.apply_lambda(curry, [lam], fuel=rd.Fuel(10000))


def test_fuel_monotonicity():
    x = var("x")
    twice = Lambda((x,), op(x, var("a")))
    inner = Lambda((var("y"),), add(var("y"), ONE))
    small = rd.apply_lambda(twice, [inner], fuel=rd.Fuel(2))
    big = rd.apply_lambda(twice, [inner], fuel=rd.Fuel(5000))
    assert small.expr is big.expr
    assert small.requirements == big.requirements


def test_capture_avoidance_relabels():
    a, b, f = var("a"), var("b"), var("f")
    lam = Lambda((a,), add(a, b))
    res = rd.substitute(lam, rd.ReplacementMap({b: op(f, a)}))
    assert res.expr == Lambda((var("_a"),), add(var("_a"), op(f, a)))
    assert res.expr.canonical is \
        Lambda((var("_b"),), add(var("_b"), op(f, a))).canonical


def test_relabel_for_capture():
    a, b, c = var("a"), var("b"), var("c")
    lam = Lambda((a,), add(a, b))
    assert rd.relabel_for_capture(lam, {c}) is lam
    renamed = rd.relabel_for_capture(lam, {a})
    assert renamed == lam  # alpha-equivalent
    assert renamed is not lam


def test_relabel_forbidden_for_uncovered_range():
    n, k = var("n"), var("k")
    nm1 = add(n, op(NEG, ONE))
    body = Operation(ADD, ExprTuple(
        ExprRange(Lambda((k,), indexed("x", k)), ONE, nm1), indexed("x", n)))
    lam = Lambda((var_range("x", ONE, n),), body)
    with pytest.raises(RelabelForbidden):
        rd.relabel_for_capture(lam, {var("x")})


def test_capture_oracle_small_terms():
    """Textbook capture-avoiding substitution oracle on depth-<=4 terms:
    free variables of subst(lam, v := r) match the prediction
    (free(lam) - {v}) U free(r) whenever v occurs free."""
    rnd = random.Random(3)
    names = ["u", "v", "w"]

    def gen(depth):
        if depth == 0:
            return var(rnd.choice(names))
        pick = rnd.randrange(3)
        if pick == 0:
            return Lambda((var(rnd.choice(names)),), gen(depth - 1))
        if pick == 1:
            return add(gen(depth - 1), gen(depth - 1))
        return neg(gen(depth - 1))

    for _ in range(500):
        body = gen(rnd.randrange(1, 5))
        target = var(rnd.choice(names))
        replacement = gen(rnd.randrange(0, 3))
        expected = set(body.free_var_names())
        if target.name in expected:
            expected = (expected - {target.name}) \
                | set(replacement.free_var_names())
        res = rd.substitute(body, rd.ReplacementMap({target: replacement}))
        assert set(res.expr.free_var_names()) == expected


def test_operation_replacement_explicit_and_implicit():
    P, x, y, a, b = map(var, "Pxyab")
    pxy = op(P, x, y)
    assert rd.replace_operation(pxy, Lambda((a, b), add(a, b))).expr == \
        add(x, y)
    assert rd.replace_operation(pxy, ADD).expr == add(x, y)


def test_range_body_replacement_forbidden():
    f, a, x, k = var("f"), var("a"), var("x"), var("k")
    bad = Lambda((x,), ExprRange(Lambda((k,), indexed("x", k)), ONE, num(4)))
    ctx_expr = equals(tuple_len(op(f, a), var("b"), var("c")), num(3))
    with pytest.raises(RangeBodyForbidden):
        rd.substitute(ctx_expr, rd.ReplacementMap({f: bad}))


def test_equality_reduce_registry():
    A = var("A")
    unary_or = Operation(OR, ExprTuple(A))
    res = rd.equality_reduce(unary_or)
    assert res.expr == A
    assert list(res.eq_requirements) == [equals(unary_or, A)]
    untouched = rd.equality_reduce(equals(A, A))
    assert untouched.expr == equals(A, A)
    assert untouched.requirements == ()


def test_eq_requirement_emitted_during_substitution():
    n, k = var("n"), var("k")
    cond = Operation(AND, ExprTuple(ExprRange(
        Lambda((k,), equals(indexed("x", k), indexed("y", k))), ONE, n)))
    res = rd.substitute(cond, rd.ReplacementMap({n: ONE}))
    x1y1 = equals(indexed("x", ONE), indexed("y", ONE))
    assert res.expr == x1y1
    assert list(res.eq_requirements) == [
        equals(Operation(AND, ExprTuple(x1y1)), x1y1)]
    frozen = rd.substitute(cond, rd.ReplacementMap({n: ONE}), eq_mode="none")
    assert frozen.expr == Operation(AND, ExprTuple(x1y1))


def test_determinism():
    n, k = var("n"), var("k")
    f = Lambda((var_range("x", ONE, n),),
               Operation(ADD, ExprTuple(ExprRange(
                   Lambda((k,), indexed("x", k)), ONE, n))))
    rng = ExprRange(Lambda((k,), mult(k, k)), ONE, n)
    r1 = rd.apply_lambda(f, [rng])
    r2 = rd.apply_lambda(f, [rng])
    assert r1.expr is r2.expr
    assert r1.requirements == r2.requirements


def test_length_mismatch_and_ambiguity():
    x, y, z = var("x"), var("y"), var("z")
    f = Lambda((x, y, z), add(x, y, z))
    with pytest.raises(LengthMismatch):
        rd.apply_lambda(f, [x, y])
    n = var("n")
    g = Lambda((var_range("x", ONE, n), var_range("y", ONE, n)),
               Operation(ADD, ExprTuple(var_range("x", ONE, n))))
    with pytest.raises(AmbiguousMatch):
        rd.apply_lambda(g, [var("a"), var("b"), var("c")])
