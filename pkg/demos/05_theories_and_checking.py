"""Theory packages, statuses, the dependency DAG, and the CLI checker.

Registers a toy theory, shows conjecture status propagation, the
circularity defenses, and round-trips a certificate through `pvk check`.
"""

import json
import subprocess
import sys
import tempfile

from pvk.errors import CircularDependency, PresumptionViolation
from pvk.exprs import Literal
from pvk.kernel import (assume, deduce, export_certificate, invoke,
                        modus_ponens, reset_kernel)
from pvk.ops import TRUE, forall, op, var
from pvk.theory import Presumptions, load_stdlib

reg = load_stdlib()
print("stdlib packages:", len(reg.packages), "| axioms:", len(reg.items))

print()
print("=== 1. Conjectures propagate until proven ===")
P = Literal("demo", "P")
reg.register_axiom("demo", "ground", op(P, TRUE))
reg.register_theorem("demo", "fact", op(P, TRUE))
print("fresh theorem status:", reg.status("demo.fact"))
reg.attach_proof("demo.fact", export_certificate(invoke(reg, "demo.ground")))
print("after attaching an axiom-based proof:", reg.status("demo.fact"))
print("dependency report:", reg.dependency_report("demo.fact"))

print()
print("=== 2. Circular theorem dependencies are rejected ===")
stmt_a = forall([var("x")], op(P, var("x")))
stmt_b = forall([var("y")], op(P, var("y")))
reg.register_theorem("demo", "thm_a", stmt_a)
reg.register_theorem("demo", "thm_b", stmt_b)
jb = invoke(reg, "demo.thm_b")
reg.attach_proof("demo.thm_a",
                 export_certificate(modus_ponens(deduce(jb, stmt_b), jb)))
ja = invoke(reg, "demo.thm_a")
cert_b = export_certificate(modus_ponens(deduce(ja, stmt_a), ja))
try:
    reg.attach_proof("demo.thm_b", cert_b)
except PresumptionViolation as exc:
    print("default presumption gate:", exc)
try:
    reg.attach_proof("demo.thm_b", cert_b, presumptions=Presumptions.all())
except CircularDependency as exc:
    print("dependency DAG gate:", exc)

print()
print("=== 3. Certificates re-verify from the command line ===")
reset_kernel()
cert = export_certificate(invoke(reg, "logic.booleans.axiom1"))
with tempfile.NamedTemporaryFile("w", suffix=".pvp", delete=False) as f:
    json.dump(cert, f)
    path = f.name
proc = subprocess.run([sys.executable, "-m", "pvk.cli", "check", path],
                      capture_output=True, text=True)
print(proc.stdout.strip())
print("exit code:", proc.returncode)
