"""Expression construction, canonicalization and identity."""

import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from pvk.errors import KindViolation, MalformedParts
from pvk.exprs import (Conditional, ExprRange, ExprTuple, IndexedVar, Lambda,
                       Literal, NamedExprs, Operation, Variable, build,
                       canonical_form, expr_id)
from pvk.ops import (ADD, FALSE, MULT, NEG, ONE, OR, TRUE, add, conj, disj,
                     equals, exists, forall, in_bool, indexed, mult, neg, num,
                     op, var, var_range)
from pvk import sexpr


def test_nine_kinds_and_build():
    x = build("Variable", ["x"])
    lit = build("Literal", ["logic.booleans", "TRUE"])
    tup = build("ExprTuple", [x, lit])
    operation = build("Operation", [OR, tup])
    cond = build("Conditional", [x, lit])
    lam = build("Lambda", [[x], operation])
    named = build("NamedExprs", [("key", x)])
    rng = build("ExprRange", [Lambda((var("k"),), indexed("a", var("k"))),
                              ONE, var("n")])
    iv = build("IndexedVar", [var("a"), ONE])
    kinds = {e.kind for e in (x, lit, tup, operation, cond, lam, named, rng, iv)}
    assert kinds == {"Variable", "Literal", "ExprTuple", "Operation",
                     "Conditional", "Lambda", "NamedExprs", "ExprRange",
                     "IndexedVar"}


def test_hash_consing_pointer_identity():
    a = disj(var("A"), var("B"))
    b = disj(var("A"), var("B"))
    assert a is b
    c = canonical_form(a)
    assert build("Operation", [OR, ExprTuple(var("A"), var("B"))]) is c


def test_operation_lambda_operator_rejected():
    P = var("P")
    lam = Lambda((P,), op(P, P))
    with pytest.raises(KindViolation):
        Operation(lam, ExprTuple(var("x")))


def test_malformed_parts():
    with pytest.raises(MalformedParts):
        Conditional(var("x"), "not an expression")
    with pytest.raises(MalformedParts):
        Lambda((), var("x"))
    with pytest.raises(MalformedParts):
        Lambda((op(var("f"), var("x")),), var("x"))
    with pytest.raises(MalformedParts):
        NamedExprs([("k", var("x")), ("k", var("y"))])
    with pytest.raises(MalformedParts):
        Variable("")
    with pytest.raises(MalformedParts):
        IndexedVar(var("x"))


def test_canonical_relabeling_single_scope():
    # x ↦ ∃_y((x+y+z)=0)  becomes  _b ↦ ∃__a((_b+_a+z)=0)
    x, y, z = var("x"), var("y"), var("z")
    lam = Lambda((x,), exists([y], equals(add(x, y, z), num(0))))
    expected = Lambda((var("_b"),),
                      exists([var("_a")],
                             equals(add(var("_b"), var("_a"), z), num(0))))
    assert canonical_form(lam) is canonical_form(expected)
    assert canonical_form(lam).sexpr() == expected.sexpr()


def test_canonical_relabeling_range_parameters():
    # (x1..xn, y1..yn) ↦ (x1·y1 + ... + xn·yn) relabels x to _c and y to _b,
    # with _a taken by the range parameterization.
    n, k = var("n"), var("k")
    body = Operation(ADD, ExprTuple(ExprRange(
        Lambda((k,), mult(indexed("x", k), indexed("y", k))), ONE, n)))
    lam = Lambda((var_range("x", ONE, n), var_range("y", ONE, n)), body)
    got = canonical_form(lam)
    exp_body = Operation(ADD, ExprTuple(ExprRange(
        Lambda((var("_a"),), mult(indexed("_c", var("_a")),
                                  indexed("_b", var("_a")))), ONE, n)))
    expected = Lambda((var_range("_c", ONE, n, "_a"),
                       var_range("_b", ONE, n, "_a")), exp_body)
    assert got is canonical_form(expected)
    assert "_c" in got.sexpr() and "_b" in got.sexpr()


def test_uncovered_range_not_relabelable():
    # (x1..xn) ↦ (x1 + ... + x_{n-1} + xn) keeps x: coverage is ambiguous.
    n, k = var("n"), var("k")
    nm1 = add(n, op(NEG, ONE))
    body = Operation(ADD, ExprTuple(
        ExprRange(Lambda((k,), indexed("x", k)), ONE, nm1), indexed("x", n)))
    lam = Lambda((var_range("x", ONE, n),), body)
    assert not lam.is_relabelable("x")
    assert 'Variable "x"' in canonical_form(lam).sexpr()


def test_canonical_idempotent_random():
    rnd = random.Random(7)
    pool = [var(c) for c in "abcxyz"] + [TRUE, FALSE, num(0), num(1)]

    def gen(depth):
        if depth == 0:
            return rnd.choice(pool)
        form = rnd.randrange(5)
        if form == 0:
            return Lambda((var(rnd.choice("uvw")),), gen(depth - 1))
        if form == 1:
            return disj(gen(depth - 1), gen(depth - 1))
        if form == 2:
            return Conditional(gen(depth - 1), gen(depth - 1))
        if form == 3:
            return ExprTuple(gen(depth - 1), gen(depth - 1))
        return neg(gen(depth - 1))

    for _ in range(2000):
        e = gen(rnd.randrange(1, 4))
        c = canonical_form(e)
        assert canonical_form(c) is c
        assert expr_id(e) == expr_id(c)


@given(st.sampled_from("pqrstuv"))
def test_alpha_invariance(name):
    fresh = var(name)
    lam1 = Lambda((var("x"),), add(var("x"), ONE))
    lam2 = Lambda((fresh,), add(fresh, ONE))
    assert expr_id(lam1) == expr_id(lam2)
    assert lam1 == lam2


def test_free_vars():
    x, b = var("x"), var("b")
    assert Lambda((x,), add(x, b)).free_vars() == {b}
    assert Literal("logic.booleans", "TRUE").free_vars() == set()
    m = var("m")
    k = var("k")
    cond = ExprRange(Lambda((k,), in_bool(indexed("A", k))), ONE, m)
    fa = forall([var_range("A", ONE, m)],
                in_bool(Operation(OR, ExprTuple(var_range("A", ONE, m)))),
                [cond])
    assert fa.free_vars() == {m}


def test_expr_id_alpha_and_style_independence():
    assert expr_id(Lambda((var("x"),), add(var("x"), ONE))) == \
        expr_id(Lambda((var("y"),), add(var("y"), ONE)))


def test_digest_no_collisions_exhaustive():
    """Brute-force oracle: all expressions of depth <= 3 over 5 literals and
    3 variables have distinct digests unless their canonical
    serializations agree."""
    leaves = [Literal("t", n) for n in "abcde"] + [var(n) for n in "xyz"]

    level1 = list(leaves)
    level2 = []
    for a, b in itertools.product(level1, repeat=2):
        level2.append(disj(a, b))
    level2 += [neg(a) for a in level1]
    level2 += [Lambda((var("x"),), a) for a in level1]
    sample = level1 + level2
    extra = [disj(a, b) for a, b in itertools.islice(
        itertools.product(level2, level1), 400)]
    sample += extra

    by_digest = {}
    for e in sample:
        d = expr_id(e)
        prev = by_digest.setdefault(d, e)
        assert prev.canonical.sexpr() == e.canonical.sexpr(), \
            f"digest collision: {prev!r} vs {e!r}"


def test_serialization_round_trip_corpus():
    n = var("n")
    corpus = [
        var("x"),
        TRUE,
        conj(),
        disj(var("A"), var("B")),
        forall([var("x")], op(var("P"), var("x")), [op(var("Q"), var("x"))]),
        ExprTuple(var("a"), var_range("b", ONE, n), var("c")),
        NamedExprs([("left", var("a")), ("right", var("b"))]),
        Conditional(var("p"), var("q")),
        indexed("x", ONE, num(2)),
    ]
    for e in corpus:
        back = sexpr.parse(e.sexpr())
        assert back is e
        assert expr_id(back) == expr_id(e)


def test_named_exprs_key_order_independent():
    a = NamedExprs([("k1", var("x")), ("k2", var("y"))])
    b = NamedExprs([("k2", var("y")), ("k1", var("x"))])
    assert a is b
