"""Independent verifier: kernel/checker agreement, mutations, independence."""

import ast
import copy
import json
import os
import random

import pytest

from pvk.errors import CertificateSyntaxError, HashMismatch
from pvk import checker as ck
from pvk import derivations as dv
from pvk.exprs import ExprTuple, Lambda, Literal, Operation
from pvk.kernel import (assume, deduce, export_certificate, generalize,
                        instantiate, invoke, modus_ponens, reset_kernel)
from pvk.ops import (EXP, ONE, TRUE, add, disj, equals, forall, implies,
                     in_bool, neg, num, op, var)


def _fig6(reg):
    x, y, a, f = var("x"), var("y"), var("a"), var("f")
    ax = invoke(reg, "logic.equality.axiom6")
    assume(equals(x, y))
    inst = instantiate(ax, {f: Lambda((var("z"),), op(EXP, var("z"), a)),
                            x: x, y: y}, assumptions=[equals(x, y)])
    return generalize(inst, [a, x, y])


def _corpus(reg):
    """Kernel-exported certificates spanning every rule."""
    certs = [export_certificate(_fig6(reg))]
    three = num(3)
    certs.append(export_certificate(deduce(assume(three), three)))
    lem = dv.excluded_middle(reg)
    certs.append(export_certificate(lem))
    lit = Literal("toy", "c")
    P = Literal("toy", "P")
    reg.register_axiom("toy", "fact", op(P, lit))
    from pvk.kernel import literal_generalize
    certs.append(export_certificate(
        literal_generalize(invoke(reg, "toy.fact"), {lit: var("a")})))
    A, B = var("A"), var("B")
    certs.append(export_certificate(
        modus_ponens(assume(implies(A, B)), assume(A))))
    return certs


def test_corpus_round_trip_and_agreement(reg):
    for cert in _corpus(reg):
        data = json.dumps(cert)
        parsed = ck.parse_certificate(data)
        assert parsed.digest == cert["digest"]
        report = ck.verify_certificate_data(parsed, reg.lookup,
                                            reg.axiom_closure)
        assert report.ok, report.first_error()


def test_truncated_and_malformed_input():
    with pytest.raises(CertificateSyntaxError):
        ck.parse_certificate(b'{"version": 1, "steps": [')
    with pytest.raises(CertificateSyntaxError):
        ck.parse_certificate(b"[]")
    with pytest.raises(CertificateSyntaxError):
        ck.parse_certificate(json.dumps({"version": 1, "steps": []}))


def test_tampered_consequent_rejected(reg):
    cert = export_certificate(deduce(assume(num(3)), num(3)))
    bad = copy.deepcopy(cert)
    bad["steps"][1]["consequent"] = var("oops").sexpr()
    with pytest.raises(HashMismatch):
        ck.parse_certificate(json.dumps(bad))
    # without the declared digest the step check still fails
    del bad["digest"]
    report = ck.verify_certificate_data(json.dumps(bad), reg.lookup)
    assert not report.ok


def test_ordering_violation_detected(reg):
    cert = export_certificate(deduce(assume(num(3)), num(3)))
    bad = copy.deepcopy(cert)
    bad["steps"][0]["requirements"] = [0]
    del bad["digest"]
    report = ck.verify_certificate_data(json.dumps(bad), reg.lookup)
    assert not report.ok
    assert any(code == "OrderingViolation" for _, code, _ in report.verdicts)


def test_unknown_axiom_rejected(reg):
    cert = export_certificate(invoke(reg, "logic.booleans.axiom1"))
    bad = copy.deepcopy(cert)
    bad["steps"][0]["payload"]["name"] = "logic.booleans.axiom99"
    del bad["digest"]
    report = ck.verify_certificate_data(json.dumps(bad), reg.lookup)
    assert not report.ok
    assert "UnknownTheoryItem" in (report.first_error() or "")


def test_missing_instantiation_requirement_reported(reg):
    cert = export_certificate(_fig6(reg))
    bad = copy.deepcopy(cert)
    inst_step = next(s for s in bad["steps"] if s["rule"] == "instantiation")
    dropped = inst_step["requirements"].pop()
    del bad["digest"]
    report = ck.verify_certificate_data(json.dumps(bad), reg.lookup)
    assert not report.ok
    message = report.first_error()
    # the complaint names the exact missing judgment
    assert "missing" in message and "Equals" in message


def test_antecedent_mismatch_detected(reg):
    A, B = var("A"), var("B")
    cert = export_certificate(
        modus_ponens(assume(implies(A, B)), assume(A)))
    bad = copy.deepcopy(cert)
    # swap the antecedent requirement to point at the implication itself
    mp = bad["steps"][0]
    mp["requirements"] = [1, 1]
    del bad["digest"]
    report = ck.verify_certificate_data(json.dumps(bad), reg.lookup)
    assert not report.ok
    assert "Antecedent" in (report.first_error() or "")


def test_reference_proxy_must_match_target(reg):
    A, C = var("A"), var("C")
    shared = assume(A)
    left = modus_ponens(assume(implies(A, implies(A, C))), shared)
    root = modus_ponens(left, shared)
    cert = export_certificate(root)
    assert any(s["rule"] == "reference" for s in cert["steps"])
    report = ck.verify_certificate_data(json.dumps(cert), reg.lookup)
    assert report.ok
    bad = copy.deepcopy(cert)
    ref = next(s for s in bad["steps"] if s["rule"] == "reference")
    ref["consequent"] = var("other").sexpr()
    del bad["digest"]
    report = ck.verify_certificate_data(json.dumps(bad), reg.lookup)
    assert not report.ok


def test_checker_module_is_kernel_independent():
    """Build-graph gate: the checker imports only expression machinery and
    the reduction engine, never the kernel's construction paths."""
    import pvk.checker
    source = open(pvk.checker.__file__).read()
    tree = ast.parse(source)
    imported = set()
    for node in ast.walk(tree):
        if isinstance(node, ast.ImportFrom):
            imported.add(node.module or "")
            for alias in node.names:
                imported.add(alias.name)
        elif isinstance(node, ast.Import):
            for alias in node.names:
                imported.add(alias.name)
    assert not any("kernel" in name for name in imported)
    assert not any("theory" in name for name in imported)


MUTATION_FIELDS = ("rule", "consequent", "assumption", "requirement",
                   "payload", "index", "digest")


def _mutate(cert, rnd):
    """One random single-field mutation; returns a fresh document."""
    doc = copy.deepcopy(cert)
    choice = rnd.choice(MUTATION_FIELDS)
    steps = doc["steps"]
    step = rnd.choice(steps)
    other_exprs = [var("zz").sexpr(), TRUE.sexpr(),
                   equals(var("zz"), TRUE).sexpr()]
    if choice == "rule":
        step["rule"] = rnd.choice([r for r in ck.RULES if r != step["rule"]])
    elif choice == "consequent":
        step["consequent"] = rnd.choice(other_exprs)
    elif choice == "assumption":
        if step["assumptions"] and rnd.random() < 0.5:
            step["assumptions"].pop(rnd.randrange(len(step["assumptions"])))
        else:
            step["assumptions"].append(rnd.choice(other_exprs))
    elif choice == "requirement":
        if step["requirements"] and rnd.random() < 0.5:
            step["requirements"][rnd.randrange(len(step["requirements"]))] = \
                rnd.randrange(0, len(steps) + 2)
        else:
            step["requirements"].append(rnd.randrange(0, len(steps) + 2))
    elif choice == "payload":
        payload = step["payload"]
        if payload:
            key = rnd.choice(sorted(payload))
            value = payload[key]
            if isinstance(value, str):
                payload[key] = value + "x" if not value.endswith("x") \
                    else value[:-1]
            elif isinstance(value, int):
                payload[key] = value + 1
            elif isinstance(value, list):
                payload[key] = value + [value[0]] if value else [["x", "y"]]
            else:
                payload[key] = None
        else:
            step["payload"] = {"name": "bogus"}
    elif choice == "index":
        step["index"] = step["index"] + rnd.choice([-1, 1])
    elif choice == "digest":
        doc["digest"] = "0" * 64
    return doc


def test_random_mutation_suite(reg):
    """Each random single-field mutation is rejected outright or proves
    semantics-preserving by digest equality."""
    corpus = _corpus(reg)
    rnd = random.Random(20260810)
    rejected = 0
    preserved = 0
    for i in range(1000):
        cert = corpus[i % len(corpus)]
        mutated = _mutate(cert, rnd)
        try:
            parsed = ck.parse_certificate(json.dumps(mutated))
        except (CertificateSyntaxError, HashMismatch):
            rejected += 1
            continue
        report = ck.verify_certificate_data(parsed, reg.lookup,
                                            reg.axiom_closure)
        if not report.ok:
            rejected += 1
        else:
            assert parsed.digest == cert["digest"], \
                "accepted mutation changed certificate semantics"
            preserved += 1
    assert rejected + preserved == 1000
    assert rejected > 0
