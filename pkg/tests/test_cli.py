"""Command-line surfaces: check, verify-theory, deps, fmt, hash."""

import json

import pytest

from pvk.cli import main
from pvk.exprs import Literal
from pvk.kernel import assume, deduce, export_certificate, invoke
from pvk.ops import DIV, TRUE, equals, forall, num, op, var


def test_check_pass_fail_parse(tmp_path, reg, capsys):
    cert = export_certificate(deduce(assume(num(3)), num(3)))
    good = tmp_path / "good.pvp"
    good.write_text(json.dumps(cert))
    assert main(["check", str(good)]) == 0
    out = capsys.readouterr().out
    assert "overall: pass" in out

    bad = json.loads(json.dumps(cert))
    bad["steps"][0]["rule"] = "modus_ponens"
    del bad["digest"]
    bad_path = tmp_path / "bad.pvp"
    bad_path.write_text(json.dumps(bad))
    assert main(["check", str(bad_path)]) == 1

    garbage = tmp_path / "garbage.pvp"
    garbage.write_text("{not json")
    assert main(["check", str(garbage)]) == 2

    tampered = json.loads(json.dumps(cert))
    tampered["steps"][0]["consequent"] = var("zz").sexpr()
    tampered_path = tmp_path / "tampered.pvp"
    tampered_path.write_text(json.dumps(tampered))
    assert main(["check", str(tampered_path)]) == 1


def test_check_json_report(tmp_path, reg, capsys):
    cert = export_certificate(invoke(reg, "logic.booleans.axiom1"))
    path = tmp_path / "ax.pvp"
    path.write_text(json.dumps(cert))
    assert main(["check", str(path), "--json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["overall"] == "pass"
    assert report["axioms"] == ["logic.booleans.axiom1"]


def test_verify_theory(tmp_path, reg, capsys):
    P = Literal("toy", "P")
    reg.register_axiom("toy", "ground", op(P, TRUE))
    reg.register_theorem("toy", "fact", op(P, TRUE))
    reg.attach_proof("toy.fact",
                     export_certificate(invoke(reg, "toy.ground")))
    root = tmp_path / "registry"
    reg.save(str(root))
    assert main(["verify-theory", str(root), "--no-stdlib"]) == 0
    out = capsys.readouterr().out
    assert "toy.fact: pass [fully-proven]" in out


def test_deps_output(tmp_path, reg, capsys):
    P = Literal("toy", "P")
    reg.register_axiom("toy", "ground", op(P, TRUE))
    reg.register_theorem("toy", "fact", op(P, TRUE))
    reg.attach_proof("toy.fact",
                     export_certificate(invoke(reg, "toy.ground")))
    root = tmp_path / "registry"
    reg.save(str(root))
    assert main(["deps", "toy.fact", "--no-stdlib", "--theories",
                 str(root)]) == 0
    out = capsys.readouterr().out
    assert "Axioms required (directly or indirectly)" in out
    assert "toy.ground" in out
    assert "Unproven conjectures required" in out
    assert main(["deps", "no.such.item"]) == 2


def test_fmt_and_hash(tmp_path, capsys):
    d = op(DIV, var("a"), var("b"))
    path = tmp_path / "frac.pvx"
    path.write_text(d.sexpr())
    assert main(["fmt", str(path), "--latex"]) == 0
    assert capsys.readouterr().out.strip() == r"\frac{a}{b}"
    assert main(["fmt", str(path), "--latex", "--style",
                 "division=inline"]) == 0
    assert capsys.readouterr().out.strip() == "a / b"
    assert main(["fmt", str(path)]) == 0
    assert capsys.readouterr().out.strip() == "a / b"
    assert main(["hash", str(path)]) == 0
    assert capsys.readouterr().out.strip() == d.expr_id()
    missing = tmp_path / "missing.pvx"
    assert main(["hash", str(missing)]) == 2
