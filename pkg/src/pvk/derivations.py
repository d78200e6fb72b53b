"""Desk-scale theorem derivations over the bundled axioms.

Everything here goes through the kernel rules; the helpers encode the
recurring equational moves (truth conversion, symmetry, transitivity,
substitution) and the case-split trick that proves a consequent C by
contradiction on the always-Boolean equality C = TRUE.
"""

from __future__ import annotations

from .exprs import ExprTuple, Lambda, Operation, Variable
from .kernel import assume, deduce, generalize, instantiate, invoke, modus_ponens
from .ops import (AND, FALSE, LEN, OR, TRUE, add, conj, disj, enum_set,
                  equals, in_bool, in_set, indexed, index_range, neg, num, op,
                  tuple_len, var, var_range, BOOLEANS, NATURALS, ONE, TWO,
                  ZERO)
from .stdlib_defs import numeral_axioms
from .theory import Registry


def ensure_numerals(registry):
    """Register the decimal successor definitions if absent."""
    for pkg, items in numeral_axioms().items():
        for name, stmt in items:
            if registry.lookup(f"{pkg}.{name}") is None:
                registry.register_axiom(pkg, name, stmt)


# --- equational helpers ------------------------------------------------------------


def as_true(registry, j):
    """From S |- A derive S |- A = TRUE."""
    ax = invoke(registry, "logic.booleans.axiom4")
    return instantiate(ax, {var("A"): j.consequent},
                       assumptions=j.assumptions)


def from_true(registry, eq_j):
    """From S |- A = TRUE derive S |- A."""
    lhs = eq_j.consequent.operand_entries()[0]
    ax = invoke(registry, "logic.booleans.axiom5")
    return instantiate(ax, {var("A"): lhs}, assumptions=eq_j.assumptions)


def transitivity(registry, j1, j2):
    """From a=b and b=c derive a=c."""
    a, b = j1.consequent.operand_entries()
    b2, c = j2.consequent.operand_entries()
    ax = invoke(registry, "logic.equality.axiom3")
    merged = tuple(set(j1.assumptions) | set(j2.assumptions))
    return instantiate(ax, {var("x"): a, var("y"): b, var("z"): c},
                       assumptions=merged)


def flip(registry, eq_j):
    """From a=b derive b=a."""
    a, b = eq_j.consequent.operand_entries()
    ax2 = invoke(registry, "logic.equality.axiom2")
    swapped = instantiate(ax2, {var("x"): a, var("y"): b})  # (b=a) = (a=b)
    as_true(registry, eq_j)                                 # (a=b) = TRUE
    q = transitivity(registry, swapped, as_true(registry, eq_j))
    return from_true(registry, q)


def substitution(registry, fn, eq_j):
    """From x=y derive f(x)=f(y) for a one-parameter lambda ``fn``."""
    x_e, y_e = eq_j.consequent.operand_entries()
    ax = invoke(registry, "logic.equality.axiom6")
    return instantiate(ax, {var("f"): fn, var("x"): x_e, var("y"): y_e},
                       assumptions=eq_j.assumptions)


def apply_eq(registry, eq_j, lhs_j):
    """From a=b and a derive b."""
    flipped = flip(registry, eq_j)                     # b = a
    lhs_true = as_true(registry, lhs_j)                # a = TRUE
    return from_true(registry,
                     transitivity(registry, flipped, lhs_true))


def apply_eq_rev(registry, eq_j, rhs_j):
    """From a=b and b derive a."""
    rhs_true = as_true(registry, rhs_j)                # b = TRUE
    return from_true(registry, transitivity(registry, eq_j, rhs_true))


def falsum_from(registry, truth_j, eq_false_j):
    """From X and X=FALSE derive FALSE."""
    return apply_eq(registry, eq_false_j, truth_j)


def chain(registry, *eq_js):
    out = eq_js[0]
    for nxt in eq_js[1:]:
        out = transitivity(registry, out, nxt)
    return out


# --- small number facts ---------------------------------------------------------------


def nat_facts(registry):
    """|- 1 in N and |- 2 in N from the successor and numeral axioms."""
    ensure_numerals(registry)
    zero_nat = invoke(registry, "numbers.number_sets.natural_numbers.axiom1")
    succ = invoke(registry, "numbers.number_sets.natural_numbers.axiom2")
    one_succ = instantiate(succ, {var("n"): ZERO})          # (0+1) in N
    one_def = invoke(registry, "numbers.numerals.decimals.axiom1")
    in_nat = Lambda((var("z"),), in_set(var("z"), NATURALS))
    one_nat = apply_eq_rev(registry,
                           substitution(registry, in_nat, one_def), one_succ)
    two_succ = instantiate(succ, {var("n"): ONE})           # (1+1) in N
    two_def = invoke(registry, "numbers.numerals.decimals.axiom2")
    two_nat = apply_eq_rev(registry,
                           substitution(registry, in_nat, two_def), two_succ)
    return one_nat, two_nat


def pair_length_eq(registry, first, second):
    """|- |(first, second)| = |(1, ..., 2)| for concrete entries."""
    one_nat, two_nat = nat_facts(registry)
    tup_len_ax = "core_expr_types.tuples.axiom2"
    a1 = indexed("a", ONE)
    # |(first, second)| = (1+1)
    pair_len = instantiate(invoke(registry, tup_len_ax),
                           {var("i"): ONE, a1: first, var("b"): second},
                           layers=2)
    # |(1)| in N, needed by the tuple-unroll axiom
    single_len = instantiate(invoke(registry, tup_len_ax),
                             {var("i"): ZERO, var("b"): ONE}, layers=2)
    one_succ = instantiate(
        invoke(registry, "numbers.number_sets.natural_numbers.axiom2"),
        {var("n"): ZERO})
    in_nat = Lambda((var("z"),), in_set(var("z"), NATURALS))
    instantiate(invoke(registry, "logic.booleans.axiom4"),
                {var("A"): one_succ.consequent},
                assumptions=one_succ.assumptions)
    single_nat = apply_eq_rev(registry,
                              substitution(registry, in_nat, single_len),
                              one_succ)
    # (1, ..., 1+1) = (1, 1+1)
    k = var("k")
    unroll = instantiate(invoke(registry, "core_expr_types.tuples.axiom5"),
                         {var("f"): Lambda((k,), k), var("i"): ONE,
                          var("j"): ONE})
    # |(1, ..., 1+1)| = |(1, 1+1)|
    t = var("t")
    len_of = Lambda((t,), Operation(LEN, t))
    len_unroll = substitution(registry, len_of, unroll)
    # |(1, ..., 2)| = |(1, ..., 1+1)|
    two_def = invoke(registry, "numbers.numerals.decimals.axiom2")
    z = var("z")
    len_range_to = Lambda((z,), tuple_len(index_range(ONE, z)))
    len_two = substitution(registry, len_range_to, two_def)
    # |(1, 1+1)| = (1+1)
    flat_len = instantiate(invoke(registry, tup_len_ax),
                           {var("i"): ONE, a1: ONE, var("b"): add(ONE, ONE)},
                           layers=2)
    range_len = chain(registry, len_two, len_unroll, flat_len)
    return transitivity(registry, pair_len, flip(registry, range_len))


# --- Boolean case machinery --------------------------------------------------------------


def unfold_bool_membership(registry, a):
    """{a in B} |- (a=TRUE) or (a=FALSE)."""
    j0 = assume(in_bool(a))
    bool_def = invoke(registry, "logic.booleans.axiom2")    # B = {T, F}
    s = var("S") if a != var("S") else var("S0")
    member_of = Lambda((s,), in_set(a, s))
    mem_eq = substitution(registry, member_of, bool_def)
    mem = apply_eq(registry, mem_eq, j0)                    # a in {T, F}
    pair_length_eq(registry, TRUE, FALSE)
    enum_ax = invoke(registry, "logic.sets.enumeration.axiom1")
    unfolded = instantiate(
        enum_ax,
        {var("n"): TWO, var("x"): a,
         var_range("y", ONE, var("n")): ExprTuple(TRUE, FALSE)},
        layers=2)
    return apply_eq(registry, unfolded, mem)


def dilemma(registry, disj_j, case_true_j, case_false_j, p_in_bool_j,
            q_in_bool_j):
    """Case analysis: from P or Q, {P} |- C and {Q} |- C, with P and Q
    Boolean, derive C.

    Works by contradiction on C = TRUE, which is Boolean outright, so no
    closure fact about C itself is needed.
    """
    p_e, q_e = disj_j.consequent.operand_entries()
    c_e = case_true_j.consequent
    if case_false_j.consequent != c_e:
        raise ValueError("the two cases must prove the same consequent")
    impl_p = deduce(case_true_j, p_e)
    impl_q = deduce(case_false_j, q_e)
    c_true = equals(c_e, TRUE)
    not_c_true = neg(c_true)
    nc = assume(not_c_true)
    neg_ax3 = invoke(registry, "logic.booleans.negation.axiom3")
    c_eq_false = instantiate(neg_ax3, {var("A"): c_true},
                             assumptions=[not_c_true])     # (C=T) = F

    def refute(impl_j, operand):
        under = modus_ponens(impl_j, assume(operand))       # C
        got_true = as_true(registry, under)                 # C = T
        bottom = falsum_from(registry, got_true, c_eq_false)
        to_false = deduce(bottom, operand)                  # operand => F
        impl_ax3 = invoke(registry, "logic.booleans.implication.axiom3")
        merged = tuple(set(to_false.assumptions)
                       | set(p_in_bool_j.assumptions)
                       | set(q_in_bool_j.assumptions))
        negated = instantiate(impl_ax3, {var("A"): operand},
                              assumptions=merged)           # not operand
        return instantiate(neg_ax3, {var("A"): operand},
                           assumptions=negated.assumptions)  # operand = F

    p_false = refute(impl_p, p_e)
    q_false = refute(impl_q, q_e)
    z = var("z")
    step1 = substitution(registry, Lambda((z,), disj(z, q_e)), p_false)
    step2 = substitution(registry, Lambda((z,), disj(FALSE, z)), q_false)
    ff = invoke(registry, "logic.booleans.disjunction.axiom4")  # (F or F) = F
    disj_false = chain(registry, step1, step2, ff)          # (P or Q) = F
    bottom = falsum_from(registry, disj_j, disj_false)
    nc_to_false = deduce(bottom, not_c_true)                # not(C=T) => F
    eq_ax1 = invoke(registry, "logic.equality.axiom1")
    instantiate(eq_ax1, {var("x"): c_e, var("y"): TRUE})    # (C=T) in B
    impl_ax2 = invoke(registry, "logic.booleans.implication.axiom2")
    c_is_true = instantiate(impl_ax2, {var("A"): c_true},
                            assumptions=nc_to_false.assumptions)
    return from_true(registry, c_is_true)


def _bool_case(registry, a, target_fn, true_value_eq, false_value_eq):
    """{a=T} |- target(a) and {a=F} |- target(a) from concrete evaluations.

    ``true_value_eq``/``false_value_eq`` prove target(T)=T and target(F)=T
    style chains; ``target_fn`` maps the variable to the case consequent.
    """
    out = []
    for value, value_eq in ((TRUE, true_value_eq), (FALSE, false_value_eq)):
        je = assume(equals(a, value))
        z = var("z") if a != var("z") else var("z0")
        to_value = substitution(registry, Lambda((z,), target_fn(z)), je)
        got = chain(registry, to_value, value_eq)           # target(a) = T
        out.append(from_true(registry, got))
    return out


def excluded_middle(registry):
    """|- forall_{A | A in B} (A or not A), fully proven from the axioms."""
    a = var("A")
    split = unfold_bool_membership(registry, a)   # {A in B} |- (A=T) or (A=F)
    neg_ax1 = invoke(registry, "logic.booleans.negation.axiom1")  # not T = F
    neg_ax2 = invoke(registry, "logic.booleans.negation.axiom2")  # not F = T
    z = var("z")
    # (T or not T) = (T or F) = T
    t_chain = chain(registry,
                    substitution(registry, Lambda((z,), disj(TRUE, z)), neg_ax1),
                    invoke(registry, "logic.booleans.disjunction.axiom2"))
    # (F or not F) = (F or T) = T
    f_chain = chain(registry,
                    substitution(registry, Lambda((z,), disj(FALSE, z)), neg_ax2),
                    invoke(registry, "logic.booleans.disjunction.axiom3"))
    case_t, case_f = _bool_case(registry, a, lambda v: disj(v, neg(v)),
                                t_chain, f_chain)
    eq_ax1 = invoke(registry, "logic.equality.axiom1")
    p_in_bool = instantiate(eq_ax1, {var("x"): a, var("y"): TRUE})
    q_in_bool = instantiate(eq_ax1, {var("x"): a, var("y"): FALSE})
    open_lem = dilemma(registry, split, case_t, case_f, p_in_bool, q_in_bool)
    return generalize(open_lem, [a])


# --- unary connective reduction theorems ---------------------------------------------------


def _unary_eval(registry, connective_pkg, empty_truth_j, value):
    """[op](value) = ([op]() op value) = (empty-value op value), evaluated."""
    ax8 = invoke(registry, f"{connective_pkg}.axiom8")
    unrolled = instantiate(ax8, {var("m"): ZERO, var("B"): value},
                           layers=2, eq_mode="none")
    return unrolled


def unary_and_reduction(registry):
    """|- forall_{A | A in B} ([and](A) = A), then registered as a theorem."""
    nat_facts(registry)
    a = var("A")
    unary = lambda v: Operation(AND, ExprTuple(v))
    empty_true = invoke(registry, "logic.booleans.conjunction.axiom7")
    empty_eq = as_true(registry, empty_true)                 # [and]() = T
    z = var("z")
    cases = {}
    for value, table_axiom in ((TRUE, "axiom1"), (FALSE, "axiom2")):
        unrolled = _unary_eval(registry, "logic.booleans.conjunction",
                               empty_true, value)
        by_empty = substitution(registry, Lambda((z,), conj(z, value)),
                                empty_eq)
        table = invoke(registry,
                       f"logic.booleans.conjunction.{table_axiom}")
        cases[value] = chain(registry, unrolled, by_empty, table)
    return _register_unary(registry, "logic.booleans.conjunction",
                           "unary_and_reduction", a, unary, cases)


def unary_or_reduction(registry):
    """|- forall_{A | A in B} ([or](A) = A), then registered as a theorem."""
    nat_facts(registry)
    a = var("A")
    unary = lambda v: Operation(OR, ExprTuple(v))
    empty_not = invoke(registry, "logic.booleans.disjunction.axiom7")
    neg_ax3 = invoke(registry, "logic.booleans.negation.axiom3")
    empty_eq = instantiate(neg_ax3, {var("A"): disj()})      # [or]() = F
    z = var("z")
    cases = {}
    for value, table_axiom in ((TRUE, "axiom3"), (FALSE, "axiom4")):
        unrolled = _unary_eval(registry, "logic.booleans.disjunction",
                               empty_not, value)
        by_empty = substitution(registry, Lambda((z,), disj(z, value)),
                                empty_eq)
        table = invoke(registry,
                       f"logic.booleans.disjunction.{table_axiom}")
        cases[value] = chain(registry, unrolled, by_empty, table)
    return _register_unary(registry, "logic.booleans.disjunction",
                           "unary_or_reduction", a, unary, cases)


def _register_unary(registry, pkg, name, a, unary, value_chains):
    # value_chains[v]: |- [op](v) = v ; lift to target(a) := ([op](a) = a)
    target = lambda v: equals(unary(v), v)
    cases = []
    for value in (TRUE, FALSE):
        je = assume(equals(a, value))
        z = var("z")
        to_value = substitution(registry, Lambda((z,), unary(z)), je)
        val_eq = value_chains[value]                  # [op](v) = v
        steady = transitivity(registry, to_value, val_eq)   # [op](a) = v
        back = flip(registry, je)                     # v = a
        cases.append(transitivity(registry, steady, back))  # [op](a) = a
    split = unfold_bool_membership(registry, a)
    eq_ax1 = invoke(registry, "logic.equality.axiom1")
    p_in_bool = instantiate(eq_ax1, {var("x"): a, var("y"): TRUE})
    q_in_bool = instantiate(eq_ax1, {var("x"): a, var("y"): FALSE})
    open_thm = dilemma(registry, split, cases[0], cases[1],
                       p_in_bool, q_in_bool)
    closed = generalize(open_thm, [a])
    from .kernel import export_certificate
    full_name = f"{pkg}.{name}"
    if registry.lookup(full_name) is None:
        registry.register_theorem(pkg, name, closed.consequent)
        registry.attach_proof(full_name, export_certificate(closed))
    return closed


def unary_reduction_instance(registry, connective, operand, operand_in_bool_j):
    """|- [op](e) = e for a proven-Boolean operand, discharging the
    automated equality-reduction obligation for unary connectives."""
    pkg, name = {AND: ("logic.booleans.conjunction", "unary_and_reduction"),
                 OR: ("logic.booleans.disjunction", "unary_or_reduction")}[connective]
    full_name = f"{pkg}.{name}"
    if registry.lookup(full_name) is None:
        if connective == AND:
            unary_and_reduction(registry)
        else:
            unary_or_reduction(registry)
    thm = invoke(registry, full_name)
    return instantiate(thm, {var("A"): operand},
                       assumptions=operand_in_bool_j.assumptions)
