"""The law of excluded middle, fully proven from the bundled axioms.

The derivation unfolds Boolean membership through the set-enumeration
axiom (discharging the tuple-length obligation from the tuple axioms and
the numeral definitions), proves each truth-value case by equational
chaining, and finishes by case analysis via contradiction on the
always-Boolean equality (A or not A) = TRUE.
"""

import json
import time

from pvk import checker
from pvk import derivations as dv
from pvk.kernel import export_certificate, export_proof
from pvk.style import format_judgment
from pvk.theory import load_stdlib

reg = load_stdlib()

start = time.monotonic()
lem = dv.excluded_middle(reg)
elapsed = time.monotonic() - start

print("derived:", format_judgment(lem.assumptions, lem.consequent))
print(f"in {elapsed * 1000:.0f} ms")

proof = export_proof(lem)
print(f"\nproof DAG: {len(proof)} steps; first rows:")
for step in list(proof)[:6]:
    reqs = ",".join(str(r) for r in step.requirements)
    judgment = format_judgment(step.judgment.assumptions,
                               step.judgment.consequent)
    print(f"  {step.index}. {step.rule:<16} [{reqs}] {judgment[:84]}")

cert = export_certificate(lem)
report = checker.verify_certificate_data(json.dumps(cert), reg.lookup,
                                         reg.axiom_closure)
print("\nindependent checker:", "pass" if report.ok else "fail")
print("axiom leaves:")
for name in sorted(report.axioms):
    print("  ", name)

reg.register_theorem("logic.booleans", "excluded_middle", lem.consequent)
status = reg.attach_proof("logic.booleans.excluded_middle", cert)
print("\nregistered as logic.booleans.excluded_middle:", status)
deps = reg.dependency_report("logic.booleans.excluded_middle")
print("unproven conjectures required:", deps["unproven_conjectures"] or "none")
