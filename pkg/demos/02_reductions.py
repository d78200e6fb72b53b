"""The reduction calculus: beta reduction with parameter ranges, range
expansion and reduction, capture avoidance, and the non-termination guard.
"""

from pvk.errors import FuelExhausted
from pvk.exprs import ExprRange, ExprTuple, Lambda, Operation
from pvk.ops import (ADD, FALSE, NATURALS, ONE, add, implies, in_set,
                     indexed, mult, num, op, var, var_range)
from pvk.reduce import Fuel, ReplacementMap, apply_lambda, substitute
from pvk.style import format_expr

print("=== 1. Plain simultaneous substitution ===")
x, y, z, a, b = map(var, "xyzab")
triple = Lambda((x, y, z), mult(add(x, y), z))
result = apply_lambda(triple, [add(a, x), mult(b, y), add(b, y, x)])
print(f"{format_expr(triple)}")
print(f"  applied to (a + x, b·y, b + y + x)")
print(f"  = {format_expr(result.expr)}   ({len(result.requirements)} requirements)")

print()
print("=== 2. Parameter ranges emit tuple-length requirements ===")
n, k = var("n"), var("k")
dot = Lambda((var_range("x", ONE, n), var_range("y", ONE, n)),
             Operation(ADD, ExprTuple(ExprRange(
                 Lambda((k,), mult(indexed("x", k), indexed("y", k))),
                 ONE, n))))
squares = ExprRange(Lambda((k,), mult(k, k)), ONE, n)
doubles = ExprRange(Lambda((k,), add(k, k)), ONE, n)
result = apply_lambda(dot, [squares, doubles],
                      assumptions=[in_set(n, NATURALS)])
print(f"{format_expr(dot)}")
print(f"  applied to ({format_expr(squares)}, {format_expr(doubles)})")
print(f"  = {format_expr(result.expr)}")
for req in result.requirements:
    print(f"  requires  {format_expr(req)}")

print()
print("=== 3. Empty and singular range reduction ===")
c = var("c")
tup = Lambda((n,), ExprTuple(a, var_range("b", ONE, n), c))
print(f"(a, b_1, ..., b_n, c) with n:0 -> "
      f"{format_expr(apply_lambda(tup, [num(0)]).expr)}")
print(f"(a, b_1, ..., b_n, c) with n:1 -> "
      f"{format_expr(apply_lambda(tup, [num(1)]).expr)}")

print()
print("=== 4. Capture avoidance relabels the bound variable ===")
f = var("f")
lam = Lambda((a,), add(a, b))
res = substitute(lam, ReplacementMap({b: op(f, a)}))
print(f"{format_expr(lam)} with b := f(a)  ->  {format_expr(res.expr)}")

print()
print("=== 5. Self-application never terminates; fuel aborts it ===")
P, g = var("P"), var("g")
curry = Lambda((P,), implies(op(P, P), FALSE))
try:
    apply_lambda(Lambda((g,), op(g, g)), [curry], fuel=Fuel(10000))
except FuelExhausted as exc:
    print("FuelExhausted:", exc)
