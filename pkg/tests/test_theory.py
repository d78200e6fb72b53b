"""Theory registry: statuses, presumption sets, dependency DAG, stdlib."""

import json
import os

import pytest

from pvk.errors import (CircularDependency, DuplicateName, FixtureCorrupt,
                        NotClosed, PresumptionViolation, UnknownTheoryItem,
                        VerificationFailed)
from pvk.exprs import Literal
from pvk.kernel import (assume, deduce, export_certificate, invoke,
                        modus_ponens)
from pvk.ops import TRUE, equals, forall, implies, in_bool, op, var
from pvk.theory import (Presumptions, Registry, load_stdlib, STDLIB_DIR,
                        STATUS_CONJECTURE, STATUS_FULL, STATUS_PARTIAL)


def test_register_axiom_requires_closed():
    reg = Registry()
    with pytest.raises(NotClosed):
        reg.register_axiom("toy", "bad", equals(var("x"), var("x")))
    reg.register_axiom("toy", "ok", forall([var("x")],
                                           equals(var("x"), var("x"))))
    with pytest.raises(DuplicateName):
        reg.register_axiom("toy", "ok", TRUE)


def test_conjecture_status_and_upgrade(reg):
    P = Literal("toy", "P")
    Q = Literal("toy", "Q")
    reg.register_axiom("toy", "p_holds", op(P, TRUE))
    reg.register_theorem("toy", "q_holds", op(Q, TRUE))
    reg.register_theorem("toy", "combined",
                         implies(op(Q, TRUE), op(Q, TRUE)))
    assert reg.status("toy.q_holds") == STATUS_CONJECTURE

    # combined's proof invokes the conjecture q_holds
    jq = invoke(reg, "toy.q_holds")
    combined = deduce(modus_ponens(deduce(jq, op(Q, TRUE)), jq), op(Q, TRUE))
    reg.attach_proof("toy.combined", export_certificate(combined))
    assert reg.status("toy.combined") == STATUS_PARTIAL
    report = reg.dependency_report("toy.combined")
    assert report["unproven_conjectures"] == ["toy.q_holds"]

    # attaching a proof for the conjecture upgrades the dependent theorem
    jq_proof = modus_ponens(deduce(assume(op(Q, TRUE)), op(Q, TRUE)),
                            assume(op(Q, TRUE)))
    # a closed proof needs no assumptions: use the axiom instead
    reg.register_theorem("toy", "q_via_axiom", op(P, TRUE))
    reg.attach_proof("toy.q_via_axiom",
                     export_certificate(invoke(reg, "toy.p_holds")))
    assert reg.status("toy.q_via_axiom") == STATUS_FULL


def test_attach_rejects_wrong_statement(reg):
    P = Literal("toy", "P")
    reg.register_axiom("toy", "p_holds", op(P, TRUE))
    reg.register_theorem("toy", "thm", op(P, FALSE_ := Literal(
        "logic.booleans", "FALSE")))
    with pytest.raises(VerificationFailed):
        reg.attach_proof("toy.thm",
                         export_certificate(invoke(reg, "toy.p_holds")))


def test_circular_dependency_rejected(reg):
    """Theorem A proven using B, then B's proof invoking A."""
    P = Literal("toy", "P")
    stmt_a, stmt_b = op(P, var("x")), op(P, var("y"))
    stmt_a = forall([var("x")], op(P, var("x")))
    stmt_b = forall([var("y")], op(P, var("y")))
    reg.register_theorem("toy", "thm_a", stmt_a)
    reg.register_theorem("toy", "thm_b", stmt_b)

    jb = invoke(reg, "toy.thm_b")
    proof_a = modus_ponens(deduce(jb, stmt_b), jb)
    assert proof_a.consequent == stmt_a  # alpha-equivalent statements
    reg.attach_proof("toy.thm_a", export_certificate(proof_a))

    ja = invoke(reg, "toy.thm_a")
    proof_b = modus_ponens(deduce(ja, stmt_a), ja)
    cert_b = export_certificate(proof_b)
    # the default presumption set already forbids the erroneous route
    with pytest.raises(PresumptionViolation):
        reg.attach_proof("toy.thm_b", cert_b)
    # and forcing it past the gate trips the dependency-DAG cycle check
    with pytest.raises(CircularDependency):
        reg.attach_proof("toy.thm_b", cert_b,
                         presumptions=Presumptions.all())


def test_presumption_gate(reg):
    scope = Presumptions({"logic.booleans"})
    with pytest.raises(PresumptionViolation):
        invoke(reg, "logic.equality.axiom5", presumptions=scope)
    assert invoke(reg, "logic.booleans.axiom1", presumptions=scope)
    # a package path admits everything beneath it
    assert Presumptions({"logic"}).allows("logic.booleans.axiom1")
    assert not Presumptions({"logic.boolean"}).allows(
        "logic.booleans.axiom1")
    assert not Presumptions(set()).allows("logic.booleans.axiom1")


def test_default_presumptions_exclude_reverse_closure(reg):
    P = Literal("toy", "P")
    reg.register_axiom("toy", "base", op(P, TRUE))
    reg.register_theorem("toy", "one", op(P, TRUE))
    reg.attach_proof("toy.one", export_certificate(invoke(reg, "toy.base")))
    scope = reg.default_presumptions("toy.base" if False else "toy.one")
    assert not scope.allows("toy.one")
    assert scope.allows("toy.base")


def _dfs_axiom_oracle(reg, name, seen=None):
    """Independent leaf scan over certificates for the dependency report."""
    from pvk.checker import certificate_axioms, certificate_theorems
    seen = seen if seen is not None else set()
    item = reg.lookup(name)
    if item.kind == "axiom":
        return {name}, set()
    if item.certificate is None:
        return set(), {name}
    axioms, conjectures = set(certificate_axioms(item.certificate)), set()
    for thm in certificate_theorems(item.certificate):
        if thm in seen:
            continue
        seen.add(thm)
        sub_ax, sub_conj = _dfs_axiom_oracle(reg, thm, seen)
        axioms |= sub_ax
        conjectures |= sub_conj
    return axioms, conjectures


def test_dependency_report_matches_dfs_oracle(reg):
    P = Literal("toy", "P")
    ax_names = []
    for i in (1, 4, 5):
        reg.register_axiom("toy", f"ax{i}", op(P, Literal("toy", f"c{i}")))
        ax_names.append(f"toy.ax{i}")
    j1 = invoke(reg, "toy.ax1")
    j4 = invoke(reg, "toy.ax4")
    j5 = invoke(reg, "toy.ax5")
    combined = modus_ponens(
        modus_ponens(assume(implies(j1.consequent,
                                    implies(j4.consequent, j5.consequent))),
                     j1), j4)
    final = deduce(combined, combined.assumptions[0])
    reg.register_theorem("toy", "uses_three", final.consequent)
    reg.attach_proof("toy.uses_three", export_certificate(final))
    report = reg.dependency_report("toy.uses_three")
    oracle_axioms, oracle_conjectures = _dfs_axiom_oracle(reg, "toy.uses_three")
    assert set(report["axioms"]) == oracle_axioms
    # ax5 only appears inside the assumed implication, not as a leaf
    assert set(report["axioms"]) == {"toy.ax1", "toy.ax4"}
    assert report["unproven_conjectures"] == sorted(oracle_conjectures)


def test_unused_axiom_not_reported(reg):
    P = Literal("toy", "P")
    reg.register_axiom("toy", "used", op(P, TRUE))
    reg.register_theorem("toy", "thm", op(P, TRUE))
    reg.attach_proof("toy.thm", export_certificate(invoke(reg, "toy.used")))
    before = reg.dependency_report("toy.thm")
    reg.register_axiom("toy", "unused_axiom", op(P, Literal("toy", "c")))
    after = reg.dependency_report("toy.thm")
    assert before["axioms"] == after["axioms"] == ["toy.used"]


def test_status_recompute_equals_incremental(reg):
    """Statuses recomputed from scratch equal the incrementally observed
    ones for every registry state along a three-theorem chain."""
    P = Literal("toy", "P")
    reg.register_axiom("toy", "ax", op(P, TRUE))
    reg.register_theorem("toy", "t1", op(P, TRUE))
    reg.register_theorem("toy", "t2", implies(op(P, TRUE), op(P, TRUE)))
    states = []

    def snapshot():
        states.append({n: reg.status(n) for n in ("toy.t1", "toy.t2")})

    snapshot()
    j = invoke(reg, "toy.t1")
    t2 = deduce(modus_ponens(deduce(j, op(P, TRUE)), j), op(P, TRUE))
    reg.attach_proof("toy.t2", export_certificate(t2))
    snapshot()
    # each theorem proof runs in its own session
    from pvk.kernel import reset_kernel
    reset_kernel()
    reg.attach_proof("toy.t1", export_certificate(invoke(reg, "toy.ax")))
    snapshot()
    assert states == [
        {"toy.t1": STATUS_CONJECTURE, "toy.t2": STATUS_CONJECTURE},
        {"toy.t1": STATUS_CONJECTURE, "toy.t2": STATUS_PARTIAL},
        {"toy.t1": STATUS_FULL, "toy.t2": STATUS_FULL},
    ]


def test_save_load_round_trip(tmp_path, reg):
    P = Literal("toy", "P")
    reg.register_axiom("toy", "ax", op(P, TRUE))
    reg.register_common("toy", "truth", TRUE)
    reg.register_theorem("toy", "thm", op(P, TRUE))
    reg.attach_proof("toy.thm", export_certificate(invoke(reg, "toy.ax")))
    root = tmp_path / "registry"
    reg.save(str(root))
    assert (root / "theories" / "toy" / "axioms" / "ax.pvx").exists()
    assert (root / "index.json").exists()

    reloaded = Registry()
    reloaded.load(str(root))
    assert reloaded.lookup("toy.ax").statement == op(P, TRUE)
    assert reloaded.status("toy.thm") == STATUS_FULL
    assert reloaded.lookup("toy.truth").kind == "common"


def test_stdlib_counts_and_integrity():
    reg = load_stdlib()
    counts = {path: len(pkg.axioms) for path, pkg in reg.packages.items()}
    assert counts["logic.booleans"] == 5
    assert counts["logic.equality"] == 6
    assert counts["logic.booleans.conjunction"] == 8
    assert counts["logic.booleans.disjunction"] == 8
    assert counts["core_expr_types.tuples"] == 5
    assert counts["numbers.number_sets.natural_numbers"] == 7
    assert sum(counts.values()) == 72
    from pvk import sexpr
    for name, item in reg.items.items():
        assert not item.statement.free_var_names(), name
        assert sexpr.parse(item.statement.sexpr()) is item.statement


def test_stdlib_fixture_digests_pinned():
    with open(os.path.join(STDLIB_DIR, "index.json")) as f:
        index = json.load(f)
    import hashlib
    for path, entry in index["packages"].items():
        for name, meta in entry["axioms"].items():
            fn = os.path.join(STDLIB_DIR, "theories", path, "axioms",
                              name + ".pvx")
            data = open(fn, "rb").read()
            assert hashlib.sha256(data).hexdigest() == meta["digest"]


def test_list_package_and_unknown(reg):
    items = reg.list_package("logic.booleans")
    assert len(items) == 5
    assert all(i["status"] == "axiom" for i in items)
    with pytest.raises(UnknownTheoryItem):
        reg.list_package("not.a.package")
