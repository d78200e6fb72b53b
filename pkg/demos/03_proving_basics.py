"""Deriving judgments with the kernel rules.

Covers proof by assumption, deduction, modus ponens, instantiation and
generalization, including judgments about expressions that are not
propositions at all.
"""

from pvk import derivations as dv
from pvk.exprs import Lambda
from pvk.kernel import (assume, deduce, export_proof, generalize,
                        instantiate, invoke)
from pvk.ops import EXP, TRUE, add, disj, equals, num, op, var
from pvk.style import format_judgment
from pvk.theory import load_stdlib

reg = load_stdlib()

print("=== 1. Anything may be assumed; 'garbage' stays harmless ===")
three = num(3)
j3 = assume(three)
print(" ", format_judgment(j3.assumptions, j3.consequent))
eq6 = deduce(j3, three)
print(" ", format_judgment(eq6.assumptions, eq6.consequent))

print()
print("=== 2. {x = (5 or T), x + 10} |- (5 or T) + 10 ===")
x, z = var("x"), var("z")
five_or_true = disj(num(5), TRUE)
lhs = assume(add(x, num(10)))
eq = assume(equals(x, five_or_true))
subst = dv.substitution(reg, Lambda((z,), add(z, num(10))), eq)
final = dv.apply_eq(reg, subst, lhs)
print(" ", format_judgment(final.assumptions, final.consequent))

print()
print("=== 3. Instantiating the substitution axiom (the exp_eq shape) ===")
y, a, f = var("y"), var("a"), var("f")
ax = invoke(reg, "logic.equality.axiom6")
print("  axiom:", format_judgment(ax.assumptions, ax.consequent))
assume(equals(x, y))
inst = instantiate(ax, {f: Lambda((z,), op(EXP, z, a)), x: x, y: y},
                   assumptions=[equals(x, y)])
print("  inst :", format_judgment(inst.assumptions, inst.consequent))
gen = generalize(inst, [a, x, y])
print("  gen  :", format_judgment(gen.assumptions, gen.consequent))

print()
print("=== 4. The proof exports as a numbered DAG, root first ===")
for step in export_proof(gen):
    reqs = ", ".join(str(r) for r in step.requirements)
    print(f"  {step.index}. {step.rule:<18} [{reqs:<5}] "
          f"{format_judgment(step.judgment.assumptions, step.judgment.consequent)}")
