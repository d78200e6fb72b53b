"""Expressions are immutable DAGs over nine primitive kinds.

Walk through building expressions, inspecting their DAG structure, and the
canonical relabeling that makes alpha-equivalent lambdas the same value.
"""

from pvk.exprs import ExprRange, ExprTuple, Lambda, Operation, dag_table
from pvk.ops import (ONE, OR, add, disj, equals, exists, forall, in_bool,
                     indexed, mult, num, var, var_range)
from pvk.stdlib_defs import ABS
from pvk.style import format_expr

print("=== 1. Building an expression ===")
x, y = var("x"), var("y")
product_abs = Operation(ABS, ExprTuple(mult(x, y)))
print("text :", format_expr(product_abs))
print("latex:", format_expr(product_abs, "latex"))

print()
print("=== 2. The DAG table (shared sub-expressions appear once) ===")
for row in dag_table(product_abs):
    subs = ", ".join(str(i) for i in row["subexprs"])
    print(f"  {row['index']:2d}  {row['kind']:<10}  "
          f"{format_expr(row['expr']):<18} {'-> ' + subs if subs else ''}")

print()
print("=== 3. Eight of the nine kinds in one expression ===")
m, k = var("m"), var("k")
bool_range = ExprRange(Lambda((k,), in_bool(indexed("A", k))), ONE, m)
closure = forall([var_range("A", ONE, m)],
                 in_bool(Operation(OR, ExprTuple(var_range("A", ONE, m)))),
                 [bool_range])
print("text :", format_expr(closure))
kinds = {row["kind"] for row in dag_table(closure)}
print("kinds used:", ", ".join(sorted(kinds)))
print("free variables:", [v.name for v in closure.free_vars()])

print()
print("=== 4. Canonical relabeling ===")
z = var("z")
lam = Lambda((x,), exists([y], equals(add(x, y, z), num(0))))
print("original :", format_expr(lam))
print("canonical:", format_expr(lam.canonical))
other = Lambda((var("w"),), exists([var("v")],
                                   equals(add(var("w"), var("v"), z), num(0))))
print("alpha-equivalent ids match:", lam.expr_id() == other.expr_id())

print()
print("=== 5. Hash consing ===")
again = Lambda((x,), exists([y], equals(add(x, y, z), num(0))))
print("rebuilding returns the same node:", again is lam)
