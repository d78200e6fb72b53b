"""Presentation-only styling and deterministic text/LaTeX rendering.

Styles live out-of-band in a side table keyed by node path, so a styled
view always shares the canonical id of its underlying expression.
"""

from __future__ import annotations

from .errors import BadPath, UnknownStyleOption
from .exprs import (Conditional, Expression, ExprRange, ExprTuple, IndexedVar,
                    Lambda, Literal, NamedExprs, Operation, Variable)
from .ops import (ADD, AND, CARD, DIV, ENUM_SET, EQUALS, EXISTS, EXP, FALSE,
                  FORALL, GREATER, IFF, IMPLIES, IN_SET, INTERSECT, LEN, LESS,
                  MULT, NEG, NOT, NOTEQUALS, NOTEXISTS, NOTIN_SET, OR,
                  PROPER_SUBSET, SET_EQUIV, SUBSET_EQ, TRUE, UNION)

_INFIX = {
    OR: ("∨", r"\lor"),
    AND: ("∧", r"\land"),
    IMPLIES: ("⇒", r"\Rightarrow"),
    IFF: ("⇔", r"\Leftrightarrow"),
    EQUALS: ("=", "="),
    NOTEQUALS: ("≠", r"\neq"),
    IN_SET: ("∈", r"\in"),
    NOTIN_SET: ("∉", r"\notin"),
    SET_EQUIV: ("≅", r"\cong"),
    SUBSET_EQ: ("⊆", r"\subseteq"),
    PROPER_SUBSET: ("⊂", r"\subset"),
    UNION: ("∪", r"\cup"),
    INTERSECT: ("∩", r"\cap"),
    ADD: ("+", "+"),
    MULT: ("·", r"\cdot"),
    LESS: ("<", "<"),
    GREATER: (">", ">"),
}

_ATOMS = {
    TRUE: ("⊤", r"\top"),
    FALSE: ("⊥", r"\bot"),
    Literal("logic.booleans", "Booleans"): ("\U0001d539", r"\mathbb{B}"),
    Literal("numbers.number_sets.natural_numbers", "Naturals"):
        ("ℕ", r"\mathbb{N}"),
    Literal("numbers.number_sets.natural_numbers", "NaturalsPos"):
        ("ℕ⁺", r"\mathbb{N}^{+}"),
}

_QUANTIFIERS = {
    FORALL: ("∀", r"\forall"),
    EXISTS: ("∃", r"\exists"),
    NOTEXISTS: ("∄", r"\nexists"),
}

_PREFIX = {
    NOT: ("¬", r"\lnot"),
    NEG: ("-", "-"),
}


class StyleMap:
    """(node path -> option name -> value); never part of structure."""

    def __init__(self, table=None):
        self.table = {path: dict(opts) for path, opts in (table or {}).items()}

    def get(self, path, option, default):
        return self.table.get(path, {}).get(option, default)

    def updated(self, path, option, value):
        out = StyleMap(self.table)
        out.table.setdefault(path, {})[option] = value
        return out


class StyledExpr:
    """A presentation view; structural identity ignores the styles."""

    def __init__(self, expr, styles=None):
        self.expr = expr
        self.styles = styles if isinstance(styles, StyleMap) else StyleMap(styles)

    def expr_id(self):
        return self.expr.expr_id()

    @property
    def canonical(self):
        return self.expr.canonical

    def sexpr(self):
        return self.expr.sexpr()

    def __eq__(self, other):
        other_expr = other.expr if isinstance(other, StyledExpr) else other
        return self.expr == other_expr

    def __hash__(self):
        return hash(self.expr)


def _unwrap(e):
    if isinstance(e, StyledExpr):
        return e.expr, e.styles
    return e, StyleMap()


def node_at(e, path):
    expr, _ = _unwrap(e)
    if path == "":
        return expr
    node = expr
    for part in path.split("."):
        try:
            node = node.children()[int(part)]
        except (ValueError, IndexError):
            raise BadPath(f"no node at path {path!r}")
    return node


def _class_options(node):
    """Registered style options for the node's class, in stable order."""
    out = []
    if isinstance(node, Operation) and isinstance(node.operator, Literal):
        if node.operator == DIV:
            out.append(("division", ("inline", "fraction"), "fraction"))
        if node.operator == ADD:
            out.append(("subtraction", ("explicit", "compact"), "explicit"))
        if node.operator in _INFIX:
            out.append(("wrapping", ("inline", "wrapped"), "inline"))
    if isinstance(node, ExprRange):
        out.append(("parameterization", ("implicit", "explicit"), "implicit"))
    return out


def style_options(e, path=""):
    node = node_at(e, path)
    _, styles = _unwrap(e)
    return [(name, set(values), styles.get(path, name, default))
            for name, values, default in _class_options(node)]


def with_style(e, path, option, value):
    """Styled variant with an identical canonical id."""
    expr, styles = _unwrap(e)
    node = node_at(expr, path)
    for name, values, _default in _class_options(node):
        if name == option:
            if value not in values:
                raise UnknownStyleOption(
                    f"{option}={value!r} is not among {sorted(values)}")
            return StyledExpr(expr, styles.updated(path, option, value))
    raise UnknownStyleOption(
        f"{option!r} is not a style option of this node")


def _style_of(styles, path, node, option):
    for name, _values, default in _class_options(node):
        if name == option:
            return styles.get(path, option, default)
    return None


def _needs_parens(entry):
    """Infix operations are the only forms that do not self-delimit."""
    if isinstance(entry, (Conditional, Lambda)):
        return True
    if isinstance(entry, Operation) and entry.operator in _INFIX:
        return len(entry.operand_entries()) > 1
    return False


class _Renderer:
    def __init__(self, target, styles):
        self.latex = target == "latex"
        self.styles = styles

    def sym(self, pair):
        return pair[1] if self.latex else pair[0]

    def render(self, node, path="", parens=False):
        out = self._render(node, path)
        if parens:
            return rf"\left({out}\right)" if self.latex else f"({out})"
        return out

    def _child(self, node, path, idx, child=None, parens=None):
        child = node.children()[idx] if child is None else child
        sub = f"{path}.{idx}" if path else str(idx)
        if parens is None:
            parens = _needs_parens(child)
        return self.render(child, sub, parens)

    def _render(self, node, path):
        if isinstance(node, Variable):
            return node.name
        if isinstance(node, Literal):
            if node in _ATOMS:
                return self.sym(_ATOMS[node])
            if node.package == "numbers.numerals.decimals":
                return node.name
            return node.name
        if isinstance(node, IndexedVar):
            idx = ", ".join(self._child(node, path, k + 1, parens=False)
                            for k in range(len(node.indices)))
            if self.latex:
                return f"{node.var.name}_{{{idx}}}"
            return f"{node.var.name}_{idx}"
        if isinstance(node, ExprTuple):
            return f"({self._entries(node, path)})"
        if isinstance(node, NamedExprs):
            inner = ", ".join(
                f"{k}: {self.render(v, f'{path}.{i}' if path else str(i))}"
                for i, (k, v) in enumerate(node.items))
            return f"{{{inner}}}"
        if isinstance(node, Conditional):
            value = self._child(node, path, 0, parens=False)
            cond = self._child(node, path, 1, parens=False)
            if self.latex:
                return rf"\left\{{{value} \textrm{{ if }} {cond}\right.."
            return f"{{{value} if {cond}."
        if isinstance(node, Lambda):
            params = ", ".join(
                self.render(p, f"{path}.{i}" if path else str(i), False)
                for i, p in enumerate(node.parameters))
            if len(node.parameters) > 1 or self.latex:
                params = f"({params})"
            body = self._child(node, path, len(node.parameters), parens=False)
            arrow = r" \mapsto " if self.latex else " ↦ "
            return f"{params}{arrow}{body}"
        if isinstance(node, ExprRange):
            return self._range(node, path, ", ")
        if isinstance(node, Operation):
            return self._operation(node, path)
        raise TypeError(node)

    def _entries(self, tup, path, sep=", "):
        parts = []
        for i, entry in enumerate(tup.entries):
            sub = f"{path}.{i}" if path else str(i)
            if isinstance(entry, ExprRange):
                parts.append(self._range(entry, sub, sep))
            else:
                parts.append(self.render(entry, sub, _needs_parens(entry)))
        return sep.join(parts)

    def _range(self, node, path, sep):
        first = _shallow_substitute(node.body, node.parameter,
                                    node.start_index)
        last = _shallow_substitute(node.body, node.parameter, node.end_index)
        show_first = self.render(first, parens=_needs_parens(first))
        show_last = self.render(last, parens=_needs_parens(last))
        dots = r"\ldots" if self.latex else "..."
        mode = _style_of(self.styles, path, node, "parameterization")
        if mode == "explicit":
            middle = self.render(node.body,
                                 parens=_needs_parens(node.body))
            return f"{show_first}{sep}..{middle}..{sep}{show_last}"
        return f"{show_first}{sep}{dots}{sep}{show_last}"

    def _operation(self, node, path):
        operator = node.operator
        entries = node.operand_entries()
        operand_path = f"{path}.1" if path else "1"
        if operator in _QUANTIFIERS and len(entries) == 1 \
                and isinstance(entries[0], Lambda):
            return self._quantifier(node, path)
        if operator in _PREFIX and len(entries) == 1:
            inner = self._operand(entries[0], node, 0)
            return f"{self.sym(_PREFIX[operator])} {inner}" if self.latex \
                else f"{self.sym(_PREFIX[operator])}{inner}"
        if operator in _INFIX and len(entries) == 1 \
                and not isinstance(entries[0], ExprRange):
            symbol = self.sym(_INFIX[operator])
            return f"[{symbol}]({self.render(entries[0], parens=False)})"
        if operator == LEN or operator == CARD:
            if operator == LEN:
                inner = f"({self._entries(node.operands, operand_path)})" \
                    if isinstance(node.operands, ExprTuple) \
                    else self.render(node.operands, operand_path)
            else:
                inner = self._entries(node.operands, operand_path) \
                    if isinstance(node.operands, ExprTuple) \
                    else self.render(node.operands, operand_path)
            return f"|{inner}|"
        if operator == ENUM_SET:
            inner = self._entries(node.operands, operand_path) \
                if isinstance(node.operands, ExprTuple) else ""
            if self.latex:
                return rf"\left\{{{inner}\right\}}"
            return f"{{{inner}}}"
        if operator == EXP and len(entries) == 2:
            base = self._operand(entries[0], node, 0)
            power = self.render(entries[1], parens=False)
            return f"{base}^{{{power}}}" if self.latex else f"{base}^{power}"
        if operator == DIV and len(entries) == 2:
            mode = _style_of(self.styles, path, node, "division")
            num = self._operand(entries[0], node, 0)
            den = self._operand(entries[1], node, 1)
            if self.latex and mode == "fraction":
                return rf"\frac{{{num}}}{{{den}}}"
            return f"{num} / {den}"
        if operator in _INFIX:
            symbol = self.sym(_INFIX[operator])
            if operator == ADD and _style_of(self.styles, path, node,
                                             "subtraction") == "compact":
                return self._compact_sum(node, path, entries)
            if not entries:
                return f"[{symbol}]()"
            joiner = f" {symbol} "
            if _style_of(self.styles, path, node, "wrapping") == "wrapped":
                joiner = f" {symbol}\n" if not self.latex \
                    else f" {symbol} \\\\ "
            return joiner.join(self._op_entry(e, node, path, i, symbol)
                               for i, e in enumerate(entries))
        inner = self._entries(node.operands, operand_path) \
            if isinstance(node.operands, ExprTuple) \
            else self.render(node.operands, operand_path)
        shown = self.render(operator, f"{path}.0" if path else "0",
                            isinstance(operator, (Operation, Lambda)))
        return f"{shown}({inner})"

    def _op_entry(self, entry, node, path, idx, symbol):
        if isinstance(entry, ExprRange):
            sub = f"{path}.1.{idx}" if path else f"1.{idx}"
            return self._range(entry, sub, f" {symbol} ")
        if node.operator == ADD and isinstance(entry, Operation) \
                and entry.operator == NEG:
            # a negated summand is grouped: w + (-x) + y + (-z)
            return self.render(entry, parens=True)
        return self._operand(entry, node, idx)

    def _operand(self, entry, node, idx):
        return self.render(entry, parens=_needs_parens(entry))

    def _compact_sum(self, node, path, entries):
        parts = []
        for i, entry in enumerate(entries):
            negated = isinstance(entry, Operation) and entry.operator == NEG \
                and len(entry.operand_entries()) == 1
            if i == 0:
                parts.append(self._operand(entry, node, i))
            elif negated:
                parts.append("- " + self._operand(
                    entry.operand_entries()[0], node, i))
            else:
                parts.append("+ " + self._operand(entry, node, i))
        return " ".join(parts)

    def _quantifier(self, node, path):
        lam = node.operand_entries()[0]
        symbol = self.sym(_QUANTIFIERS[node.operator])
        params = ", ".join(self.render(p, parens=False)
                           for p in lam.parameters)
        body = lam.body
        conditions = []
        if isinstance(body, Conditional):
            cond = body.condition
            if isinstance(cond, Operation) and cond.operator == AND \
                    and len(cond.operand_entries()) > 1:
                conditions = list(cond.operand_entries())
            else:
                conditions = [cond]
            body = body.value
        shown_body = self.render(body, parens=_needs_parens(body))
        if conditions:
            shown_conds = ", ".join(
                self._range(c, "", ", ") if isinstance(c, ExprRange)
                else self.render(c, parens=False) for c in conditions)
            if self.latex:
                return rf"{symbol}_{{{params}~|~{shown_conds}}}~{shown_body}"
            return f"{symbol}_{{{params} | {shown_conds}}} {shown_body}"
        if self.latex:
            return rf"{symbol}_{{{params}}}~{shown_body}"
        return f"{symbol}_{{{params}}} {shown_body}"


def _shallow_substitute(body, param, value):
    """Purely presentational index substitution (no reductions)."""
    if isinstance(body, Variable):
        return value if body == param else body
    if isinstance(body, Literal):
        return body
    if isinstance(body, IndexedVar):
        return IndexedVar(body.var, *[_shallow_substitute(i, param, value)
                                      for i in body.indices])
    if isinstance(body, ExprTuple):
        return ExprTuple(*[_shallow_substitute(e, param, value)
                           for e in body.entries])
    if isinstance(body, Operation):
        operator = body.operator
        if isinstance(operator, (Variable, IndexedVar)):
            operator = _shallow_substitute(operator, param, value)
        if not isinstance(operator, (Variable, Literal, IndexedVar)):
            operator = body.operator
        return Operation(operator,
                         _shallow_substitute(body.operands, param, value))
    if isinstance(body, Conditional):
        return Conditional(_shallow_substitute(body.value, param, value),
                           _shallow_substitute(body.condition, param, value))
    if isinstance(body, Lambda):
        if param.name in body.parameter_base_names:
            return body
        return Lambda(body.parameters,
                      _shallow_substitute(body.body, param, value))
    if isinstance(body, ExprRange):
        if body.parameter == param:
            return body
        return ExprRange(
            Lambda(body.lambda_map.parameters,
                   _shallow_substitute(body.body, param, value)),
            _shallow_substitute(body.start_index, param, value),
            _shallow_substitute(body.end_index, param, value))
    if isinstance(body, NamedExprs):
        return NamedExprs([(k, _shallow_substitute(v, param, value))
                           for k, v in body.items])
    return body


def format_expr(e, target="text", styles=None):
    """Deterministic rendering; pure in (expression, styles, target)."""
    expr, own_styles = _unwrap(e)
    if styles is not None:
        own_styles = styles if isinstance(styles, StyleMap) else StyleMap(styles)
    return _Renderer(target, own_styles).render(expr)


def format_judgment(assumptions, consequent, target="text"):
    turnstile = r" \vdash " if target == "latex" else " ⊢ "
    shown = ", ".join(format_expr(a, target) for a in assumptions)
    prefix = f"{{{shown}}}" if shown else ""
    return f"{prefix}{turnstile}{format_expr(consequent, target)}"
