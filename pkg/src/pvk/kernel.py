"""Proof kernel: judgments derived through the six inference rules plus
literal generalization, exported as topologically ordered proof DAGs.

Judgments are only constructible through the rule functions here; every
judgment records the rule application that established it, so exporting a
certificate is a pure traversal.
"""

from __future__ import annotations

import hashlib
import json
import threading

from .errors import (AntecedentMismatch, FreeVariableLeak, KernelError,
                     LiteralStillRequired, MalformedParts, NotAnImplication,
                     NotFullyProven, PresumptionViolation, UnknownTheoryItem,
                     UnsatisfiedCondition)
from .exprs import (Conditional, Expression, ExprRange, ExprTuple, IndexedVar,
                    Lambda, Literal, NamedExprs, Operation, Variable,
                    _all_var_names, _param_base)
from .ops import AND, IMPLIES, forall
from .reduce import Fuel, ReplacementMap, instantiation_outcome
from . import sexpr as _sexpr

RULES = ("assumption", "axiom_invocation", "theorem_invocation",
         "modus_ponens", "deduction", "instantiation", "generalization",
         "literal_generalization", "reference")

_DERIVE_TOKEN = object()
_LOCK = threading.Lock()


class Judgment:
    """A claim {A1,...,An} |- B together with the proof that derived it.

    Instances are interned on (assumption set, consequent); re-deriving an
    existing judgment returns the original object and keeps its first proof.
    """

    _registry = {}
    _by_consequent = {}

    __slots__ = ("assumptions", "assumption_set", "consequent", "proof",
                 "__weakref__")

    def __init__(self, token, assumptions, consequent):
        if token is not _DERIVE_TOKEN:
            raise KernelError("judgments are only constructible through "
                              "kernel rules")
        self.assumptions = assumptions          # tuple sorted by expr_id
        self.assumption_set = frozenset(assumptions)
        self.consequent = consequent
        self.proof = None

    def __repr__(self):
        inner = ", ".join(a.sexpr() for a in self.assumptions)
        return f"{{{inner}}} |- {self.consequent.sexpr()}"

    def key(self):
        return (frozenset(a.expr_id() for a in self.assumptions),
                self.consequent.expr_id())


class ProofNode:
    __slots__ = ("rule", "judgment", "requirements", "payload")

    def __init__(self, rule, judgment, requirements, payload):
        self.rule = rule
        self.judgment = judgment
        self.requirements = tuple(requirements)
        self.payload = payload


def reset_kernel():
    """Drop every derived judgment (test isolation)."""
    with _LOCK:
        Judgment._registry.clear()
        Judgment._by_consequent.clear()


def _derive(rule, assumptions, consequent, requirements, payload):
    assumptions = tuple(sorted(set(assumptions), key=lambda e: e.expr_id()))
    j = Judgment(_DERIVE_TOKEN, assumptions, consequent)
    with _LOCK:
        existing = Judgment._registry.get(j.key())
        if existing is not None:
            # keep the first proof, except that an axiom invocation strictly
            # improves on an earlier theorem/conjecture invocation
            if rule == "axiom_invocation" \
                    and existing.proof.rule == "theorem_invocation":
                existing.proof = ProofNode(rule, existing, requirements,
                                           payload)
            return existing
        j.proof = ProofNode(rule, j, requirements, payload)
        Judgment._registry[j.key()] = j
        Judgment._by_consequent.setdefault(consequent, []).append(j)
    return j


def lookup_known(consequent, scope, known=()):
    """Deterministic lookup of a judgment proving ``consequent`` whose
    assumptions fit inside ``scope``; direct lookup only, no search."""
    scope = frozenset(scope)
    for j in known:
        if j.consequent == consequent and j.assumption_set <= scope:
            return j
    candidates = [j for j in Judgment._by_consequent.get(consequent, ())
                  if j.assumption_set <= scope]
    if candidates:
        return min(candidates, key=lambda j: (len(j.assumptions),
                                              [a.expr_id() for a in j.assumptions]))
    if consequent in scope:
        return assume(consequent)
    return None


# --- the inference rules --------------------------------------------------------


def assume(a):
    """{A} |- A; a range of assumptions proves their conjunction."""
    if not isinstance(a, Expression):
        raise MalformedParts("assume needs an expression")
    if isinstance(a, ExprRange):
        consequent = Operation(AND, ExprTuple(a))
        return _derive("assumption", (a,), consequent, (), {})
    return _derive("assumption", (a,), a, (), {})


def invoke(registry, name, presumptions=None):
    """Invoke an axiom, theorem or conjecture from the theory registry."""
    item = registry.lookup(name)
    if item is None:
        raise UnknownTheoryItem(f"unknown theory item {name!r}")
    if presumptions is not None and not presumptions.allows(name):
        raise PresumptionViolation(
            f"{name!r} is outside the presumption set of this proof")
    rule = "axiom_invocation" if item.kind == "axiom" else "theorem_invocation"
    payload = {"name": name, "_registry": registry}
    return _derive(rule, (), item.statement, (), payload)


def modus_ponens(impl, antecedent):
    c = impl.consequent
    if not (isinstance(c, Operation) and c.operator == IMPLIES
            and len(c.operand_entries()) == 2):
        raise NotAnImplication(f"not an implication: {c.sexpr()}")
    a, b = c.operand_entries()
    if antecedent.consequent != a:
        raise AntecedentMismatch(
            f"antecedent proves {antecedent.consequent.sexpr()}, "
            f"implication needs {a.sexpr()}")
    assumptions = impl.assumption_set | antecedent.assumption_set
    return _derive("modus_ponens", assumptions, b, (impl, antecedent), {})


def deduce(j, antecedent):
    """(S \\ {A}) |- A => B, the inverse of modus ponens."""
    assumptions = [a for a in j.assumptions if a != antecedent]
    consequent = Operation(IMPLIES, ExprTuple(antecedent, j.consequent))
    return _derive("deduction", assumptions, consequent, (j,),
                   {"antecedent": antecedent})


def instantiate(univ, bindings=None, assumptions=(), layers=1, fuel=None,
                eq_mode="default", range_mode="auto", alt_expansions=None,
                known=()):
    """Eliminate universal quantifier layers, discharging every condition
    and reduction obligation against known judgments or assumptions."""
    if isinstance(bindings, ReplacementMap):
        rmap = bindings
    else:
        rmap = ReplacementMap(bindings or {}, alt_expansions)
    assumptions = tuple(assumptions)
    outcome = instantiation_outcome(univ.consequent, rmap,
                                    assumptions=assumptions, layers=layers,
                                    fuel=fuel, eq_mode=eq_mode,
                                    range_mode=range_mode)
    requirement_js = []
    for cond, scope in outcome.conditions:
        j = lookup_known(cond, scope, known)
        if j is None:
            raise UnsatisfiedCondition(
                f"condition not proven under the supplied assumptions: "
                f"{cond.sexpr()}")
        requirement_js.append(j)
    scope = frozenset(assumptions)
    for req in outcome.requirements:
        j = lookup_known(req, scope, known)
        if j is None:
            kind = "equality replacement requirement" \
                if req in outcome.eq_requirements else "requirement"
            raise UnsatisfiedCondition(
                f"{kind} not proven under the supplied assumptions: "
                f"{req.sexpr()}")
        requirement_js.append(j)
    final_assumptions = set(univ.assumption_set) | set(outcome.assumptions_used)
    for j in requirement_js:
        final_assumptions |= j.assumption_set
    payload = {
        "bindings": _serialize_bindings(rmap),
        "alt_expansions": _serialize_alts(rmap),
        "layers": layers,
        "eq_mode": eq_mode,
        "range_mode": range_mode,
        "num_conditions": len(outcome.conditions),
        "reduction_assumptions": sorted(
            (a.sexpr() for a in outcome.assumptions_used)),
    }
    return _derive("instantiation", final_assumptions, outcome.expr,
                   (univ, *requirement_js), payload)


def _serialize_bindings(rmap):
    out = []
    for t, r in rmap.direct.items():
        if isinstance(t, Variable) and r is t:
            continue  # identity defaults added during layer processing
        out.append([t.sexpr(), r.sexpr()])
    for binding in rmap.ranges.values():
        if binding.primary_form is not None:
            start, end = binding.primary_form
            target = _range_target(binding.base, start, end)
        else:
            target = _range_target(binding.base, None, None)
        out.append([target.sexpr(), ExprTuple(*binding.entries).sexpr()])
    return out


def _range_target(base, start, end):
    from .ops import var_range, ONE
    if start is None:
        start = end = ONE
    return var_range(base, start, end)


def _serialize_alts(rmap):
    out = []
    for binding in rmap.ranges.values():
        for form_entries, repl_entries in binding.alts:
            out.append([ExprTuple(*form_entries).sexpr(),
                        ExprTuple(*repl_entries).sexpr()])
    return out


def _mentions(expr, bases):
    """Does any base name occur free in expr?"""
    return bool(expr.free_var_names() & bases)


def generalize(j, params, extra_conditions=(), move_assumptions=True):
    """Introduce a universal quantification over ``params``; assumptions
    mentioning the parameters relocate into the quantifier conditions."""
    params = tuple(params)
    if not params:
        raise MalformedParts("generalize needs parameters")
    bases = frozenset(_param_base(p).name for p in params)
    moved, retained = [], []
    for a in j.assumptions:
        if _mentions(a, bases):
            moved.append(a)
        else:
            retained.append(a)
    if moved and not move_assumptions:
        raise FreeVariableLeak(
            f"parameters occur free in retained assumptions: "
            f"{[a.sexpr() for a in moved]}")
    conditions = sorted(moved, key=lambda e: e.expr_id()) \
        + sorted(extra_conditions, key=lambda e: e.expr_id())
    consequent = forall(params, j.consequent, conditions)
    payload = {"parameters": [p.sexpr() for p in params],
               "extra_conditions": [c.sexpr() for c in
                                    sorted(extra_conditions,
                                           key=lambda e: e.expr_id())]}
    return _derive("generalization", retained, consequent, (j,), payload)


def _map_literals(expr, mapping):
    if isinstance(expr, Literal):
        return mapping.get(expr, expr)
    if isinstance(expr, Variable):
        return expr
    if isinstance(expr, ExprTuple):
        return ExprTuple(*[_map_literals(e, mapping) for e in expr.entries])
    if isinstance(expr, Operation):
        return Operation(_map_literals(expr.operator, mapping),
                         _map_literals(expr.operands, mapping))
    if isinstance(expr, Conditional):
        return Conditional(_map_literals(expr.value, mapping),
                           _map_literals(expr.condition, mapping))
    if isinstance(expr, Lambda):
        return Lambda(tuple(_map_literals(p, mapping) for p in expr.parameters),
                      _map_literals(expr.body, mapping))
    if isinstance(expr, ExprRange):
        return ExprRange(_map_literals(expr.lambda_map, mapping),
                         _map_literals(expr.start_index, mapping),
                         _map_literals(expr.end_index, mapping))
    if isinstance(expr, IndexedVar):
        return IndexedVar(expr.var,
                          *[_map_literals(i, mapping) for i in expr.indices])
    if isinstance(expr, NamedExprs):
        return NamedExprs([(k, _map_literals(v, mapping))
                           for k, v in expr.items])
    return expr


def _mentions_literal(expr, literals):
    if isinstance(expr, Literal):
        return expr in literals
    return any(_mentions_literal(c, literals) for c in expr.children())


def proof_closure(j):
    """Every ProofNode reachable from ``j``'s proof."""
    seen = {}
    stack = [j]
    while stack:
        cur = stack.pop()
        if cur.key() in seen:
            continue
        seen[cur.key()] = cur
        stack.extend(cur.proof.requirements)
    return list(seen.values())


def required_items(j):
    """(axiom invocations, theorem invocations) in j's proof closure."""
    axioms, theorems = [], []
    for node_j in proof_closure(j):
        node = node_j.proof
        if node.rule == "axiom_invocation":
            axioms.append(node)
        elif node.rule == "theorem_invocation":
            theorems.append(node)
    return axioms, theorems


def literal_generalize(j, mapping):
    """Axiom elimination: convert literals to fresh variables, turning the
    required axioms that mention them into quantifier conditions."""
    mapping = dict(mapping)
    for lit, v in mapping.items():
        if not isinstance(lit, Literal) or not isinstance(v, Variable):
            raise MalformedParts("mapping sends Literals to Variables")
    fresh = {v.name for v in mapping.values()}
    used = _all_var_names(j.consequent)
    for a in j.assumptions:
        used |= _all_var_names(a)
    if fresh & used:
        raise MalformedParts(
            f"mapping variables must be fresh: {sorted(fresh & used)}")
    literals = set(mapping)
    axioms, theorems = required_items(j)
    for node in theorems:
        registry = node.payload.get("_registry")
        name = node.payload["name"]
        if registry is None:
            raise NotFullyProven(f"theorem {name} lacks registry context")
        report = registry.dependency_report(name)
        if report["unproven_conjectures"]:
            raise NotFullyProven(
                f"dependency closure includes unproven conjectures via {name}")
        for ax_name in report["axioms"]:
            stmt = registry.lookup(ax_name).statement
            if _mentions_literal(stmt, literals):
                raise LiteralStillRequired(
                    f"axiom {ax_name} mentions an eliminated literal but is "
                    f"required indirectly through theorem {name}")
    eliminated = {}
    for node in axioms:
        if _mentions_literal(node.judgment.consequent, literals):
            eliminated[node.payload["name"]] = node.judgment.consequent
    conditions = [_map_literals(stmt, mapping)
                  for _, stmt in sorted(eliminated.items(),
                                        key=lambda kv: kv[1].expr_id())]
    new_assumptions = [_map_literals(a, mapping) for a in j.assumptions]
    new_consequent = _map_literals(j.consequent, mapping)
    params = tuple(mapping.values())
    bases = frozenset(v.name for v in params)
    moved = sorted((a for a in new_assumptions if _mentions(a, bases)),
                   key=lambda e: e.expr_id())
    retained = [a for a in new_assumptions if not _mentions(a, bases)]
    consequent = forall(params, new_consequent, conditions + moved)
    payload = {"mapping": [[lit.sexpr(), v.sexpr()]
                           for lit, v in mapping.items()],
               "eliminated_axioms": sorted(eliminated)}
    return _derive("literal_generalization", retained, consequent, (j,),
                   payload)


# --- proof export --------------------------------------------------------------


class ProofStep:
    __slots__ = ("index", "rule", "judgment", "requirements", "payload")

    def __init__(self, index, rule, judgment, requirements, payload):
        self.index = index
        self.rule = rule
        self.judgment = judgment
        self.requirements = requirements
        self.payload = payload


class Proof:
    """Ordered steps with the root at index 0; every requirement index is
    strictly greater than the step that needs it."""

    def __init__(self, steps):
        self.steps = steps

    def __len__(self):
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)


def export_proof(j):
    nodes = {}      # judgment key -> ProofNode
    discovery = {}  # judgment key -> discovery rank (DFS preorder)
    consumers = {}  # judgment key -> set of consumer keys

    def visit(cur):
        k = cur.key()
        if k in nodes:
            return
        discovery[k] = len(discovery)
        nodes[k] = cur.proof
        for req in cur.proof.requirements:
            consumers.setdefault(req.key(), set()).add(k)
        for req in cur.proof.requirements:
            visit(req)

    visit(j)
    root_key = j.key()
    consumers.setdefault(root_key, set())

    placed = {}   # judgment key -> index
    steps = []

    def place_real(cur_j):
        node = cur_j.proof
        step = ProofStep(len(steps), node.rule, cur_j, None, node.payload)
        placed[cur_j.key()] = step.index
        steps.append(step)
        return step

    proxy_targets = {}  # step index of proxy -> judgment it references
    place_real(j)
    # root requirements (or reference proxies for shared ones) come first
    root_slots = []
    seen_direct = set()
    for req in j.proof.requirements:
        k = req.key()
        others = consumers[k] - {root_key}
        if not others and k not in seen_direct:
            seen_direct.add(k)
            root_slots.append(place_real(req).index)
        else:
            step = ProofStep(len(steps), "reference", req, None, {})
            proxy_targets[step.index] = req
            root_slots.append(step.index)
            steps.append(step)

    remaining = [k for k in nodes if k not in placed]
    while remaining:
        eligible = [k for k in remaining
                    if all(c in placed for c in consumers[k])]
        if not eligible:
            raise KernelError("proof graph is not acyclic")
        k = min(eligible, key=lambda k: discovery[k])
        place_real(nodes[k].judgment)
        remaining.remove(k)

    for step in steps:
        if step.index == 0:
            step.requirements = tuple(root_slots)
        elif step.index in proxy_targets:
            step.requirements = (placed[proxy_targets[step.index].key()],)
        else:
            node = nodes[step.judgment.key()]
            step.requirements = tuple(placed[r.key()]
                                      for r in node.requirements)
    return Proof(steps)


# --- certificates ------------------------------------------------------------------

CERT_VERSION = 1


def _payload_for_cert(rule, payload):
    if rule == "deduction":
        return {"antecedent": payload["antecedent"].sexpr()}
    out = {k: v for k, v in payload.items() if not k.startswith("_")}
    return out


def step_digest_line(index, rule, assumption_ids, consequent_id,
                     requirements, payload_json):
    reqs = ",".join(str(r) for r in requirements)
    return f"{index}|{rule}|{';'.join(assumption_ids)}|{consequent_id}|{reqs}|{payload_json}"


def certificate_digest(step_lines):
    return hashlib.sha256("\n".join(step_lines).encode("utf-8")).hexdigest()


def proof_certificate(proof):
    """Certificate document for a proof (JSON-serializable dict)."""
    steps_out = []
    lines = []
    theory_refs = set()
    for step in proof:
        payload = _payload_for_cert(step.rule, step.payload)
        if step.rule in ("axiom_invocation", "theorem_invocation"):
            theory_refs.add(payload["name"])
        payload_json = json.dumps(payload, sort_keys=True, ensure_ascii=False)
        j = step.judgment
        assumption_ids = [a.expr_id() for a in j.assumptions]
        lines.append(step_digest_line(step.index, step.rule, assumption_ids,
                                      j.consequent.expr_id(),
                                      step.requirements, payload_json))
        steps_out.append({
            "index": step.index,
            "rule": step.rule,
            "assumptions": [a.sexpr() for a in j.assumptions],
            "consequent": j.consequent.sexpr(),
            "requirements": list(step.requirements),
            "payload": payload,
        })
    return {
        "version": CERT_VERSION,
        "theory_refs": sorted(theory_refs),
        "digest": certificate_digest(lines),
        "steps": steps_out,
    }


def export_certificate(j):
    return proof_certificate(export_proof(j))


def certificate_bytes(cert):
    return (json.dumps(cert, indent=1, ensure_ascii=False) + "\n").encode("utf-8")
