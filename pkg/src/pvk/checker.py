"""Independent proof-certificate verification.

Re-executes every step using only the expression structure and the
reduction engine; theory items arrive through a plain lookup callable so
nothing here depends on the kernel's construction paths.
"""

from __future__ import annotations

import hashlib
import json

from .errors import (CertificateSyntaxError, HashMismatch, OrderingViolation,
                     PvkError, RuleViolation)
from .exprs import (Conditional, ExprRange, ExprTuple, IndexedVar, Lambda,
                    Literal, Operation, Variable, _param_base)
from .ops import AND, IMPLIES, forall
from . import sexpr as _sexpr
from .reduce import Fuel, ReplacementMap, instantiation_outcome

RULES = ("assumption", "axiom_invocation", "theorem_invocation",
         "modus_ponens", "deduction", "instantiation", "generalization",
         "literal_generalization", "reference")


class CheckedStep:
    __slots__ = ("index", "rule", "assumptions", "assumption_set",
                 "consequent", "requirements", "payload")

    def __init__(self, index, rule, assumptions, consequent, requirements,
                 payload):
        self.index = index
        self.rule = rule
        self.assumptions = tuple(assumptions)
        self.assumption_set = frozenset(assumptions)
        self.consequent = consequent
        self.requirements = tuple(requirements)
        self.payload = payload


class CertProof:
    def __init__(self, version, theory_refs, steps, digest):
        self.version = version
        self.theory_refs = theory_refs
        self.steps = steps
        self.digest = digest


class VerificationReport:
    """Per-step verdicts plus the leaf summary."""

    def __init__(self, verdicts, axioms, theorems, conjectures, root_judgment):
        self.verdicts = verdicts        # [(index, "ok"|error-code, message)]
        self.axioms = axioms
        self.theorems = theorems
        self.conjectures = conjectures
        self.root_judgment = root_judgment
        self.ok = all(v[1] == "ok" for v in verdicts)

    def first_error(self):
        for index, code, message in self.verdicts:
            if code != "ok":
                return f"step {index}: {code}: {message}"
        return None

    def as_dict(self):
        return {
            "overall": "pass" if self.ok else "fail",
            "steps": [{"index": i, "verdict": code, "message": msg}
                      for i, code, msg in self.verdicts],
            "axioms": sorted(self.axioms),
            "conjectures": sorted(self.conjectures),
        }


def _parse_expr(text, where):
    try:
        return _sexpr.parse(text)
    except CertificateSyntaxError as exc:
        raise CertificateSyntaxError(f"{where}: {exc}") from exc


def step_digest_line(step, payload_json):
    reqs = ",".join(str(r) for r in step.requirements)
    assumption_ids = ";".join(a.expr_id() for a in step.assumptions)
    return (f"{step.index}|{step.rule}|{assumption_ids}|"
            f"{step.consequent.expr_id()}|{reqs}|{payload_json}")


def parse_certificate(data):
    """Parse and structurally validate a certificate; every embedded
    expression is re-interned and re-hashed."""
    if isinstance(data, (bytes, bytearray)):
        data = data.decode("utf-8")
    if isinstance(data, str):
        try:
            doc = json.loads(data)
        except json.JSONDecodeError as exc:
            raise CertificateSyntaxError(exc.msg, line=exc.lineno,
                                         column=exc.colno) from exc
    else:
        doc = data
    if not isinstance(doc, dict) or "steps" not in doc:
        raise CertificateSyntaxError("certificate must be an object with steps")
    steps = []
    lines = []
    for pos, raw in enumerate(doc["steps"]):
        if not isinstance(raw, dict):
            raise CertificateSyntaxError(f"step {pos} is not an object")
        if raw.get("index") != pos:
            raise CertificateSyntaxError(
                f"step {pos} carries index {raw.get('index')}")
        rule = raw.get("rule")
        if rule not in RULES:
            raise CertificateSyntaxError(f"step {pos}: unknown rule {rule!r}")
        assumptions = [_parse_expr(t, f"step {pos} assumption")
                       for t in raw.get("assumptions", [])]
        consequent = _parse_expr(raw["consequent"], f"step {pos} consequent")
        requirements = raw.get("requirements", [])
        if not all(isinstance(r, int) for r in requirements):
            raise CertificateSyntaxError(f"step {pos}: bad requirement list")
        payload = raw.get("payload", {})
        step = CheckedStep(pos, rule, assumptions, consequent, requirements,
                           payload)
        steps.append(step)
        payload_json = json.dumps(payload, sort_keys=True, ensure_ascii=False)
        lines.append(step_digest_line(step, payload_json))
    if not steps:
        raise CertificateSyntaxError("certificate has no steps")
    digest = hashlib.sha256("\n".join(lines).encode("utf-8")).hexdigest()
    declared = doc.get("digest")
    if declared is not None and declared != digest:
        raise HashMismatch(
            f"declared digest {declared} does not match recomputed {digest}")
    return CertProof(doc.get("version"), doc.get("theory_refs", []), steps,
                     digest)


def certificate_digest_of(data):
    return parse_certificate(data).digest


# --- per-rule verification ---------------------------------------------------------


def _req_steps(step, steps):
    out = []
    for r in step.requirements:
        if not (step.index < r < len(steps)):
            raise OrderingViolation(
                f"requirement index {r} does not come after step {step.index}")
        out.append(steps[r])
    return out


def _same_judgment(a_assumptions, a_consequent, step):
    return (frozenset(a_assumptions) == step.assumption_set
            and a_consequent == step.consequent)


def _check_assumption(step, reqs, lookup):
    if reqs or len(step.assumptions) != 1:
        raise RuleViolation("assumption steps have one assumption and no "
                            "requirements")
    a = step.assumptions[0]
    if a == step.consequent:
        return
    if isinstance(a, ExprRange) \
            and step.consequent == Operation(AND, ExprTuple(a)):
        return
    raise RuleViolation("assumption step does not match its judgment")


def _check_invocation(step, reqs, lookup, expect_kind):
    if reqs:
        raise RuleViolation("invocation steps have no requirements")
    name = step.payload.get("name")
    item = lookup(name) if name else None
    if item is None:
        raise RuleViolation(f"UnknownTheoryItem: {name!r} is not registered")
    if item.kind != expect_kind:
        raise RuleViolation(f"{name} is a {item.kind}, not {expect_kind}")
    if step.assumptions or item.statement != step.consequent:
        raise RuleViolation(f"invocation of {name} does not match its "
                            f"registered statement")


def _check_modus_ponens(step, reqs, lookup):
    if len(reqs) != 2:
        raise RuleViolation("modus ponens needs an implication and an "
                            "antecedent")
    impl, antecedent = reqs
    c = impl.consequent
    if not (isinstance(c, Operation) and c.operator == IMPLIES
            and len(c.operand_entries()) == 2):
        raise RuleViolation(f"NotAnImplication: {c.sexpr()}")
    a, b = c.operand_entries()
    if antecedent.consequent != a:
        raise RuleViolation("AntecedentMismatch: the second requirement does "
                            "not prove the antecedent")
    if step.consequent != b:
        raise RuleViolation("conclusion is not the implication's consequent")
    if step.assumption_set != impl.assumption_set | antecedent.assumption_set:
        raise RuleViolation("assumption set is not the union of the premises'")


def _check_deduction(step, reqs, lookup):
    if len(reqs) != 1:
        raise RuleViolation("deduction has exactly one premise")
    premise = reqs[0]
    antecedent = _parse_expr(step.payload["antecedent"], "deduction antecedent")
    expected = Operation(IMPLIES, ExprTuple(antecedent, premise.consequent))
    if step.consequent != expected:
        raise RuleViolation("conclusion is not antecedent => premise")
    expected_assumptions = frozenset(
        a for a in premise.assumption_set if a != antecedent)
    if step.assumption_set != expected_assumptions:
        raise RuleViolation("assumptions must drop exactly the antecedent")


def _parse_bindings(payload):
    rmap = ReplacementMap()
    for t_text, r_text in payload.get("bindings", []):
        target = _parse_expr(t_text, "binding target")
        repl = _parse_expr(r_text, "binding replacement")
        rmap.bind(target, repl)
    for f_text, r_text in payload.get("alt_expansions", []):
        form = _parse_expr(f_text, "alternative expansion form")
        repl = _parse_expr(r_text, "alternative expansion replacement")
        rmap.add_alt_expansion(form, repl)
    return rmap


def _check_instantiation(step, reqs, lookup):
    if not reqs:
        raise RuleViolation("instantiation requires the universal judgment")
    univ = reqs[0]
    rmap = _parse_bindings(step.payload)
    layers = step.payload.get("layers", 1)
    eq_mode = step.payload.get("eq_mode", "default")
    range_mode = step.payload.get("range_mode", "auto")
    context = [_parse_expr(t, "reduction assumption")
               for t in step.payload.get("reduction_assumptions", [])]
    outcome = instantiation_outcome(univ.consequent, rmap,
                                    assumptions=context, layers=layers,
                                    eq_mode=eq_mode, range_mode=range_mode)
    obligations = [c for c, _ in outcome.conditions] + list(outcome.requirements)
    provided = reqs[1:]
    if len(provided) != len(obligations):
        missing = [o.sexpr() for o in obligations[len(provided):]]
        raise RuleViolation(
            f"instantiation lists {len(provided)} requirements but the rule "
            f"emits {len(obligations)}; missing: {missing}")
    for got, want in zip(provided, obligations):
        if got.consequent != want:
            raise RuleViolation(
                f"requirement mismatch: expected {want.sexpr()}, "
                f"certificate provides {got.consequent.sexpr()}")
    num_conditions = len(outcome.conditions)
    scope = frozenset(context)
    for pos, (cond, _) in enumerate(outcome.conditions):
        j = provided[pos]
        allowed = step.assumption_set | scope
        if not j.assumption_set <= allowed:
            raise RuleViolation(
                "a condition requirement relies on assumptions outside the "
                "instantiation's scope")
        scope = scope | {cond}
    if outcome.expr != step.consequent:
        raise RuleViolation(
            f"instantiation produces {outcome.expr.sexpr()}, certificate "
            f"claims {step.consequent.sexpr()}")
    expected_assumptions = set(univ.assumption_set) | set(context)
    for j in provided:
        expected_assumptions |= j.assumption_set
    if step.assumption_set != frozenset(expected_assumptions):
        raise RuleViolation("instantiation assumptions are not the union of "
                            "the premises' plus the reduction context")


def _mentions(expr, bases):
    return bool(expr.free_var_names() & bases)


def _check_generalization(step, reqs, lookup):
    if len(reqs) != 1:
        raise RuleViolation("generalization has exactly one premise")
    premise = reqs[0]
    params = tuple(_parse_expr(t, "generalization parameter")
                   for t in step.payload.get("parameters", []))
    extras = [_parse_expr(t, "generalization condition")
              for t in step.payload.get("extra_conditions", [])]
    if not params:
        raise RuleViolation("generalization needs parameters")
    bases = frozenset(_param_base(p).name for p in params)
    moved = sorted((a for a in premise.assumptions if _mentions(a, bases)),
                   key=lambda e: e.expr_id())
    retained = frozenset(a for a in premise.assumptions
                         if not _mentions(a, bases))
    for a in retained:
        if _mentions(a, bases):
            raise RuleViolation("FreeVariableLeak: a parameter occurs free "
                                "in a retained assumption")
    conditions = moved + sorted(extras, key=lambda e: e.expr_id())
    expected = forall(params, premise.consequent, conditions)
    if step.consequent != expected:
        raise RuleViolation(
            f"generalization produces {expected.sexpr()}, certificate "
            f"claims {step.consequent.sexpr()}")
    if step.assumption_set != retained:
        raise RuleViolation("generalization must retain exactly the "
                            "assumptions not mentioning the parameters")


def _subtree_axioms(step, steps):
    """Axiom invocations reachable from a step through its requirements."""
    seen = set()
    stack = [step.index]
    axioms = []
    theorems = []
    while stack:
        idx = stack.pop()
        if idx in seen:
            continue
        seen.add(idx)
        s = steps[idx]
        if s.rule == "axiom_invocation":
            axioms.append(s)
        elif s.rule == "theorem_invocation":
            theorems.append(s)
        stack.extend(s.requirements)
    return axioms, theorems


def _mentions_literal(expr, literals):
    if isinstance(expr, Literal):
        return expr in literals
    return any(_mentions_literal(c, literals) for c in expr.children())


def _map_literals(expr, mapping):
    if isinstance(expr, Literal):
        return mapping.get(expr, expr)
    if isinstance(expr, (Variable,)):
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
    return expr


def _check_literal_generalization(step, reqs, lookup, steps, axiom_closure):
    if len(reqs) != 1:
        raise RuleViolation("literal generalization has exactly one premise")
    premise = reqs[0]
    mapping = {}
    for lit_text, var_text in step.payload.get("mapping", []):
        lit = _parse_expr(lit_text, "literal mapping")
        v = _parse_expr(var_text, "literal mapping variable")
        if not isinstance(lit, Literal) or not isinstance(v, Variable):
            raise RuleViolation("mapping must send Literals to Variables")
        mapping[lit] = v
    literals = set(mapping)
    axioms, theorems = _subtree_axioms(steps[step.requirements[0]], steps)
    for s in theorems:
        name = s.payload.get("name")
        item = lookup(name)
        if item is None or item.certificate is None:
            raise RuleViolation(
                f"NotFullyProven: {name} is not fully proven")
        for ax_name in (axiom_closure(name) if axiom_closure else ()):
            ax_item = lookup(ax_name)
            if ax_item is not None and _mentions_literal(
                    ax_item.statement, literals):
                raise RuleViolation(
                    f"LiteralStillRequired: axiom {ax_name} is required "
                    f"indirectly through {name}")
    eliminated = {}
    for s in axioms:
        if _mentions_literal(s.consequent, literals):
            eliminated[s.payload["name"]] = s.consequent
    if sorted(eliminated) != sorted(step.payload.get("eliminated_axioms", [])):
        raise RuleViolation("eliminated axiom list does not match the "
                            "premise's proof")
    conditions = [_map_literals(stmt, mapping)
                  for _, stmt in sorted(eliminated.items(),
                                        key=lambda kv: kv[1].expr_id())]
    new_assumptions = [_map_literals(a, mapping) for a in premise.assumptions]
    params = tuple(mapping.values())
    bases = frozenset(v.name for v in params)
    moved = sorted((a for a in new_assumptions if _mentions(a, bases)),
                   key=lambda e: e.expr_id())
    retained = frozenset(a for a in new_assumptions
                         if not _mentions(a, bases))
    expected = forall(params, _map_literals(premise.consequent, mapping),
                      conditions + moved)
    if step.consequent != expected:
        raise RuleViolation(
            f"literal generalization produces {expected.sexpr()}")
    if step.assumption_set != retained:
        raise RuleViolation("literal generalization retains the wrong "
                            "assumptions")


def _check_reference(step, reqs, lookup):
    if len(reqs) != 1:
        raise RuleViolation("reference steps have exactly one requirement")
    target = reqs[0]
    if not _same_judgment(step.assumption_set, step.consequent, target):
        raise RuleViolation("reference judgment differs from its target")


def verify_step(step, steps, lookup, axiom_closure=None):
    """Re-execute one rule against its already-verified requirements."""
    reqs = _req_steps(step, steps)
    if step.rule == "assumption":
        _check_assumption(step, reqs, lookup)
    elif step.rule == "axiom_invocation":
        _check_invocation(step, reqs, lookup, "axiom")
    elif step.rule == "theorem_invocation":
        _check_invocation(step, reqs, lookup, "theorem")
    elif step.rule == "modus_ponens":
        _check_modus_ponens(step, reqs, lookup)
    elif step.rule == "deduction":
        _check_deduction(step, reqs, lookup)
    elif step.rule == "instantiation":
        _check_instantiation(step, reqs, lookup)
    elif step.rule == "generalization":
        _check_generalization(step, reqs, lookup)
    elif step.rule == "literal_generalization":
        _check_literal_generalization(step, reqs, lookup, steps, axiom_closure)
    elif step.rule == "reference":
        _check_reference(step, reqs, lookup)
    else:
        raise RuleViolation(f"unknown rule {step.rule!r}")


def verify_certificate_data(data, lookup, axiom_closure=None):
    """Verify steps in reverse index order (leaves first)."""
    cert = data if isinstance(data, CertProof) else parse_certificate(data)
    steps = cert.steps
    verdicts = [None] * len(steps)
    for step in reversed(steps):
        try:
            verify_step(step, steps, lookup, axiom_closure)
            verdicts[step.index] = (step.index, "ok", "")
        except PvkError as exc:
            verdicts[step.index] = (step.index, exc.code, str(exc))
    axioms, theorems, conjectures = set(), set(), set()
    for step in steps:
        if step.rule == "axiom_invocation":
            axioms.add(step.payload.get("name"))
        elif step.rule == "theorem_invocation":
            name = step.payload.get("name")
            theorems.add(name)
            item = lookup(name) if name else None
            if item is None or item.certificate is None:
                conjectures.add(name)
    root = steps[0]
    return VerificationReport(verdicts, axioms, theorems, conjectures,
                              (root.assumptions, root.consequent))


def verify_certificate(path, lookup, axiom_closure=None):
    with open(path, "rb") as f:
        data = f.read()
    return verify_certificate_data(data, lookup, axiom_closure)


def certificate_axioms(cert):
    """Axiom names the root step requires, honoring literal-generalization
    steps that eliminate axioms from their premise's requirements."""
    if not isinstance(cert, CertProof):
        steps = cert["steps"]
        rules = [s["rule"] for s in steps]
        reqs = [s["requirements"] for s in steps]
        payloads = [s.get("payload", {}) for s in steps]
    else:
        rules = [s.rule for s in cert.steps]
        reqs = [s.requirements for s in cert.steps]
        payloads = [s.payload for s in cert.steps]
    memo = {}

    def required(idx):
        if idx in memo:
            return memo[idx]
        memo[idx] = frozenset()  # cycles are rejected elsewhere
        if rules[idx] == "axiom_invocation":
            out = frozenset((payloads[idx]["name"],))
        else:
            out = frozenset()
            for r in reqs[idx]:
                out |= required(r)
            if rules[idx] == "literal_generalization":
                out -= set(payloads[idx].get("eliminated_axioms", ()))
        memo[idx] = out
        return out

    return sorted(required(0))


def certificate_theorems(cert):
    steps = cert["steps"] if not isinstance(cert, CertProof) else None
    if steps is None:
        return sorted({s.payload.get("name") for s in cert.steps
                       if s.rule == "theorem_invocation"})
    return sorted({s.get("payload", {}).get("name") for s in steps
                   if s["rule"] == "theorem_invocation"})
