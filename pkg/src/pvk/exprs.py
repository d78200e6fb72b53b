"""Immutable, hash-consed expression DAGs over nine primitive kinds.

The nine kinds are Variable, Literal, ExprTuple, Operation, Conditional,
Lambda, NamedExprs, ExprRange and IndexedVar.  Nodes are interned on exact
structure; alpha-equivalence and presentation style are factored out through
a separate canonical form, so two lambdas that differ only in parameter
labels share one ``expr_id``.
"""

from __future__ import annotations

import hashlib
import itertools
import string
import threading

from .errors import KindViolation, MalformedParts

EXPR_KINDS = (
    "Variable", "Literal", "ExprTuple", "Operation", "Conditional",
    "Lambda", "NamedExprs", "ExprRange", "IndexedVar",
)

_INTERN = {}
_INTERN_LOCK = threading.Lock()
_SERIAL = itertools.count(1)


def _escape(s):
    return s.replace("\\", "\\\\").replace('"', '\\"')


class Expression:
    """Base node.  Construct only through the subclasses or :func:`build`."""

    kind = None
    __slots__ = ("_serial", "_sexpr", "_canonical", "_free", "_id", "__weakref__")

    def __new__(cls, *args, **kwargs):
        try:
            key = cls._intern_key(*args, **kwargs)
        except (AttributeError, TypeError):
            raise MalformedParts(
                f"{cls.kind} parts must be expressions") from None
        with _INTERN_LOCK:
            node = _INTERN.get(key)
            if node is None:
                node = object.__new__(cls)
                node._init_fields(*args, **kwargs)
                node._serial = next(_SERIAL)
                node._sexpr = None
                node._canonical = None
                node._free = None
                node._id = None
                _INTERN[key] = node
        return node

    # Subclasses define _intern_key and _init_fields.

    def sexpr(self):
        if self._sexpr is None:
            self._sexpr = self._to_sexpr()
        return self._sexpr

    @property
    def canonical(self):
        if self._canonical is None:
            self._canonical = self._canonicalize()
        return self._canonical

    def expr_id(self):
        """SHA-256 digest of the canonical structural serialization."""
        if self._id is None:
            self._id = hashlib.sha256(self.canonical.sexpr().encode("utf-8")).hexdigest()
        return self._id

    def free_var_names(self):
        if self._free is None:
            self._free = self._free_names()
        return self._free

    def free_vars(self):
        """Variables occurring outside any Lambda scope that binds them."""
        return {Variable(name) for name in self.free_var_names()}

    def children(self):
        return ()

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Expression):
            return NotImplemented
        return self.canonical is other.canonical

    def __hash__(self):
        # equality is canonical-node identity, so hash follows the canonical node
        return self.canonical._serial

    def __repr__(self):
        return self.sexpr()

    def _canonicalize(self):
        return self

    def _free_names(self):
        names = set()
        for c in self.children():
            names |= c.free_var_names()
        return frozenset(names)


class Variable(Expression):
    kind = "Variable"
    __slots__ = ("name",)

    @staticmethod
    def _intern_key(name):
        return ("V", name)

    def _init_fields(self, name):
        if not isinstance(name, str) or not name:
            raise MalformedParts("Variable needs a nonempty name string")
        self.name = name

    def _to_sexpr(self):
        return f'(Variable "{_escape(self.name)}")'

    def _free_names(self):
        return frozenset((self.name,))


class Literal(Expression):
    kind = "Literal"
    __slots__ = ("package", "name")

    @staticmethod
    def _intern_key(package, name):
        return ("L", package, name)

    def _init_fields(self, package, name):
        if not isinstance(name, str) or not name:
            raise MalformedParts("Literal needs a nonempty name string")
        if not isinstance(package, str):
            raise MalformedParts("Literal needs a theory-package qualifier string")
        self.package = package
        self.name = name

    def _to_sexpr(self):
        return f'(Literal "{_escape(self.package)}" "{_escape(self.name)}")'

    def _free_names(self):
        return frozenset()


class ExprTuple(Expression):
    kind = "ExprTuple"
    __slots__ = ("entries",)

    @staticmethod
    def _intern_key(*entries):
        return ("T",) + tuple(e._serial for e in entries)

    def _init_fields(self, *entries):
        for e in entries:
            if not isinstance(e, Expression):
                raise MalformedParts("ExprTuple entries must be expressions")
        self.entries = tuple(entries)

    def children(self):
        return self.entries

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def _to_sexpr(self):
        inner = " ".join(e.sexpr() for e in self.entries)
        return f"(ExprTuple {inner})" if inner else "(ExprTuple)"

    def _canonicalize(self):
        return ExprTuple(*[e.canonical for e in self.entries])


class Operation(Expression):
    kind = "Operation"
    __slots__ = ("operator", "operands")

    @staticmethod
    def _intern_key(operator, operands):
        return ("O", operator._serial, operands._serial)

    def _init_fields(self, operator, operands):
        if isinstance(operator, Lambda):
            raise KindViolation("Operation operators may not be Lambda expressions")
        if not isinstance(operator, (Variable, Literal, IndexedVar)):
            raise MalformedParts(
                "Operation operator must be a Variable, Literal or IndexedVar")
        if not isinstance(operands, Expression):
            raise MalformedParts("Operation operands must be an expression")
        self.operator = operator
        self.operands = operands

    def children(self):
        return (self.operator, self.operands)

    def operand_entries(self):
        if isinstance(self.operands, ExprTuple):
            return self.operands.entries
        return (self.operands,)

    def _to_sexpr(self):
        return f"(Operation {self.operator.sexpr()} {self.operands.sexpr()})"

    def _canonicalize(self):
        return Operation(self.operator.canonical, self.operands.canonical)


class Conditional(Expression):
    kind = "Conditional"
    __slots__ = ("value", "condition")

    @staticmethod
    def _intern_key(value, condition):
        return ("C", value._serial, condition._serial)

    def _init_fields(self, value, condition):
        if not isinstance(value, Expression) or not isinstance(condition, Expression):
            raise MalformedParts("Conditional needs exactly one value and one condition")
        self.value = value
        self.condition = condition

    def children(self):
        return (self.value, self.condition)

    def _to_sexpr(self):
        return f"(Conditional {self.value.sexpr()} {self.condition.sexpr()})"

    def _canonicalize(self):
        return Conditional(self.value.canonical, self.condition.canonical)


class NamedExprs(Expression):
    kind = "NamedExprs"
    __slots__ = ("items",)

    @staticmethod
    def _intern_key(items):
        return ("N",) + tuple((k, v._serial) for k, v in sorted(items))

    def _init_fields(self, items):
        items = sorted(items)
        keys = [k for k, _ in items]
        if len(set(keys)) != len(keys):
            raise MalformedParts("NamedExprs keywords must be unique")
        for k, v in items:
            if not isinstance(k, str) or not isinstance(v, Expression):
                raise MalformedParts("NamedExprs maps keyword strings to expressions")
        self.items = tuple(items)

    def children(self):
        return tuple(v for _, v in self.items)

    def _to_sexpr(self):
        inner = " ".join(f'("{_escape(k)}" {v.sexpr()})' for k, v in self.items)
        return f"(NamedExprs {inner})" if inner else "(NamedExprs)"

    def _canonicalize(self):
        return NamedExprs([(k, v.canonical) for k, v in self.items])


class IndexedVar(Expression):
    kind = "IndexedVar"
    __slots__ = ("var", "indices")

    @staticmethod
    def _intern_key(var, *indices):
        return ("I", var._serial) + tuple(i._serial for i in indices)

    def _init_fields(self, var, *indices):
        if not isinstance(var, Variable):
            raise MalformedParts("IndexedVar operator must be a Variable")
        if not indices:
            raise MalformedParts("IndexedVar needs one or more indices")
        for i in indices:
            if not isinstance(i, Expression):
                raise MalformedParts("IndexedVar indices must be expressions")
        self.var = var
        self.indices = tuple(indices)

    def children(self):
        return (self.var,) + self.indices

    def _to_sexpr(self):
        inner = " ".join(i.sexpr() for i in self.indices)
        return f"(IndexedVar {self.var.sexpr()} {inner})"

    def _canonicalize(self):
        return IndexedVar(self.var, *[i.canonical for i in self.indices])

    def _free_names(self):
        names = {self.var.name}
        for i in self.indices:
            names |= i.free_var_names()
        return frozenset(names)


class ExprRange(Expression):
    kind = "ExprRange"
    __slots__ = ("lambda_map", "start_index", "end_index")

    @staticmethod
    def _intern_key(lambda_map, start_index, end_index):
        return ("R", lambda_map._serial, start_index._serial, end_index._serial)

    def _init_fields(self, lambda_map, start_index, end_index):
        if not isinstance(lambda_map, Lambda) or len(lambda_map.parameters) != 1 \
                or not isinstance(lambda_map.parameters[0], Variable):
            raise MalformedParts("ExprRange needs a single-parameter Lambda map")
        if not isinstance(start_index, Expression) or not isinstance(end_index, Expression):
            raise MalformedParts("ExprRange needs a start_index and an end_index")
        self.lambda_map = lambda_map
        self.start_index = start_index
        self.end_index = end_index

    @property
    def parameter(self):
        return self.lambda_map.parameters[0]

    @property
    def body(self):
        return self.lambda_map.body

    def children(self):
        return (self.lambda_map, self.start_index, self.end_index)

    def _to_sexpr(self):
        return (f"(ExprRange {self.lambda_map.sexpr()} "
                f"{self.start_index.sexpr()} {self.end_index.sexpr()})")

    def _canonicalize(self):
        return ExprRange(self.lambda_map.canonical,
                         self.start_index.canonical, self.end_index.canonical)


def _param_base(entry):
    """Base Variable of a Lambda parameter entry."""
    if isinstance(entry, Variable):
        return entry
    if isinstance(entry, IndexedVar):
        return entry.var
    if isinstance(entry, ExprRange):
        body = entry.body
        if isinstance(body, IndexedVar):
            return body.var
    raise MalformedParts(
        "Lambda parameters must be Variables, IndexedVars or ranges of IndexedVars")


def _check_param_entry(entry):
    if isinstance(entry, (Variable, IndexedVar)):
        return
    if isinstance(entry, ExprRange):
        body = entry.body
        if isinstance(body, IndexedVar) and body.indices == (entry.parameter,):
            return
    raise MalformedParts(
        "Lambda parameters must be Variables, IndexedVars or ranges of IndexedVars")


class Lambda(Expression):
    kind = "Lambda"
    __slots__ = ("parameters", "body")

    @staticmethod
    def _intern_key(parameters, body):
        return ("F",) + tuple(p._serial for p in parameters) + (body._serial,)

    def _init_fields(self, parameters, body):
        parameters = tuple(parameters)
        if not parameters:
            raise MalformedParts("Lambda needs at least one parameter")
        bases = []
        for p in parameters:
            _check_param_entry(p)
            bases.append(_param_base(p).name)
        if len(set(bases)) != len(bases):
            raise MalformedParts("Lambda parameter base variables must be distinct")
        if not isinstance(body, Expression):
            raise MalformedParts("Lambda body must be an expression")
        self.parameters = parameters
        self.body = body

    @property
    def parameter_base_names(self):
        return frozenset(_param_base(p).name for p in self.parameters)

    def children(self):
        return self.parameters + (self.body,)

    def _to_sexpr(self):
        params = " ".join(p.sexpr() for p in self.parameters)
        return f"(Lambda (ExprTuple {params}) {self.body.sexpr()})"

    def _free_names(self):
        bound = self.parameter_base_names
        names = set(self.body.free_var_names()) - bound
        for p in self.parameters:
            if isinstance(p, ExprRange):
                names |= p.start_index.free_var_names()
                names |= p.end_index.free_var_names()
            elif isinstance(p, IndexedVar):
                for i in p.indices:
                    names |= i.free_var_names()
        return frozenset(names - bound)

    def _canonicalize(self):
        params = tuple(p.canonical for p in self.parameters)
        body = self.body.canonical
        lam = Lambda(params, body)
        relabelable = [b for b in (_param_base(p).name for p in params)
                       if lam.is_relabelable(b)]
        used = _all_var_names(lam) - set(relabelable)
        renames = {}
        # Dummies are assigned scanning the parameter entries right to left,
        # matching the reference labeling (_a is taken by inner range maps
        # first, then the rightmost relabel-able parameter gets the next one).
        for p in reversed(params):
            base = _param_base(p).name
            if base not in relabelable:
                continue
            new = _first_unused_dummy(used)
            used.add(new)
            renames[base] = new
        if not renames:
            return lam
        new_params = tuple(_rename_bases(p, renames) for p in params)
        new_body = _rename_bases(body, renames)
        return Lambda(new_params, new_body)

    def is_relabelable(self, base):
        """Conservative coverage test from the relabeling rules.

        A range-parameterized variable may be relabeled only when every
        occurrence sits inside an ExprRange over syntactically identical
        bounds; anything else (bare or directly indexed occurrences, sliced
        ranges) disables relabeling for that variable.
        """
        entries = [p for p in self.parameters if _param_base(p).name == base]
        if not entries:
            return False
        entry = entries[0]
        if len(entries) > 1:
            return False
        occurrences = []
        _collect_occurrences(self.body, base, None, occurrences)
        for p in self.parameters:
            if p is entry:
                continue
            # other parameters' index bounds may mention the base
            if isinstance(p, ExprRange):
                _collect_occurrences(p.start_index, base, None, occurrences)
                _collect_occurrences(p.end_index, base, None, occurrences)
            elif isinstance(p, IndexedVar):
                for i in p.indices:
                    _collect_occurrences(i, base, None, occurrences)
        if isinstance(entry, Variable):
            return True
        if isinstance(entry, IndexedVar):
            return all(tag == "direct" and info == entry.indices
                       for tag, info in occurrences)
        bounds = (entry.start_index, entry.end_index)
        return all(tag == "ranged" and info == bounds for tag, info in occurrences)


def _collect_occurrences(node, base, range_ctx, out):
    """Classify free occurrences of ``base`` as bare/direct/ranged.

    ``range_ctx`` maps an enclosing ExprRange parameter name to that range's
    (start, end) pair; inner Lambdas that rebind ``base`` mask their scope.
    """
    range_ctx = range_ctx or {}
    if isinstance(node, Variable):
        if node.name == base:
            out.append(("bare", None))
    elif isinstance(node, IndexedVar):
        if node.var.name == base:
            if (len(node.indices) == 1 and isinstance(node.indices[0], Variable)
                    and node.indices[0].name in range_ctx):
                out.append(("ranged", range_ctx[node.indices[0].name]))
            else:
                out.append(("direct", node.indices))
        for i in node.indices:
            _collect_occurrences(i, base, range_ctx, out)
    elif isinstance(node, Lambda):
        if base in node.parameter_base_names:
            for p in node.parameters:
                if isinstance(p, ExprRange):
                    _collect_occurrences(p.start_index, base, range_ctx, out)
                    _collect_occurrences(p.end_index, base, range_ctx, out)
            return
        for c in node.children():
            _collect_occurrences(c, base, range_ctx, out)
    elif isinstance(node, ExprRange):
        _collect_occurrences(node.start_index, base, range_ctx, out)
        _collect_occurrences(node.end_index, base, range_ctx, out)
        param = node.parameter.name
        if param == base:
            return
        inner = dict(range_ctx)
        inner[param] = (node.start_index, node.end_index)
        _collect_occurrences(node.body, base, inner, out)
    else:
        for c in node.children():
            _collect_occurrences(c, base, range_ctx, out)


def _all_var_names(node):
    names = set()
    if isinstance(node, Variable):
        names.add(node.name)
    for c in node.children():
        names |= _all_var_names(c)
    return names


def _dummy_names():
    for n in itertools.count(1):
        for combo in itertools.product(string.ascii_lowercase, repeat=n):
            yield "_" + "".join(combo)


def _first_unused_dummy(used):
    for name in _dummy_names():
        if name not in used:
            return name


def _rename_bases(node, renames):
    """Rename base variables, stopping at inner scopes that rebind them."""
    if isinstance(node, Variable):
        new = renames.get(node.name)
        return Variable(new) if new else node
    if isinstance(node, Literal):
        return node
    if isinstance(node, IndexedVar):
        return IndexedVar(_rename_bases(node.var, renames),
                          *[_rename_bases(i, renames) for i in node.indices])
    if isinstance(node, Lambda):
        inner = {k: v for k, v in renames.items()
                 if k not in node.parameter_base_names}
        params = tuple(_rename_param(p, renames, inner) for p in node.parameters)
        return Lambda(params, _rename_bases(node.body, inner) if inner else node.body)
    if isinstance(node, ExprRange):
        inner = {k: v for k, v in renames.items() if k != node.parameter.name}
        lam = node.lambda_map
        if inner:
            lam = Lambda(lam.parameters, _rename_bases(lam.body, inner))
        return ExprRange(lam, _rename_bases(node.start_index, renames),
                         _rename_bases(node.end_index, renames))
    if isinstance(node, ExprTuple):
        return ExprTuple(*[_rename_bases(e, renames) for e in node.entries])
    if isinstance(node, Operation):
        return Operation(_rename_bases(node.operator, renames),
                         _rename_bases(node.operands, renames))
    if isinstance(node, Conditional):
        return Conditional(_rename_bases(node.value, renames),
                           _rename_bases(node.condition, renames))
    if isinstance(node, NamedExprs):
        return NamedExprs([(k, _rename_bases(v, renames)) for k, v in node.items])
    raise TypeError(node)


def _rename_param(p, outer_renames, inner_renames):
    # Parameter entries themselves are renamed with the *outer* map for the
    # base, but their index bounds live in the enclosing scope.
    if isinstance(p, Variable):
        new = outer_renames.get(p.name)
        return Variable(new) if new else p
    if isinstance(p, IndexedVar):
        base = outer_renames.get(p.var.name)
        var = Variable(base) if base else p.var
        return IndexedVar(var, *[_rename_bases(i, outer_renames) for i in p.indices])
    if isinstance(p, ExprRange):
        body = p.body
        base = outer_renames.get(body.var.name)
        new_body = IndexedVar(Variable(base), *body.indices) if base else body
        lam = Lambda(p.lambda_map.parameters, new_body)
        return ExprRange(lam, _rename_bases(p.start_index, outer_renames),
                         _rename_bases(p.end_index, outer_renames))
    raise MalformedParts("bad parameter entry")


_KIND_CLASSES = {
    "Variable": Variable, "Literal": Literal, "ExprTuple": ExprTuple,
    "Operation": Operation, "Conditional": Conditional, "Lambda": Lambda,
    "NamedExprs": NamedExprs, "ExprRange": ExprRange, "IndexedVar": IndexedVar,
}


def build(kind, parts):
    """Construct a node of the given kind from a child-descriptor list."""
    cls = _KIND_CLASSES.get(kind)
    if cls is None:
        raise MalformedParts(f"unknown expression kind {kind!r}")
    if kind == "Lambda":
        params, body = parts
        return Lambda(tuple(params), body)
    if kind == "NamedExprs":
        return NamedExprs(list(parts))
    return cls(*parts)


def dag_table(e):
    """Tabular DAG summary: one row per distinct node in preorder, listing
    the core type and the row numbers of its sub-expressions."""
    rows = []
    index_of = {}

    def visit(node):
        if node._serial in index_of:
            return index_of[node._serial]
        idx = len(rows)
        index_of[node._serial] = idx
        row = {"index": idx, "kind": node.kind, "expr": node,
               "subexprs": []}
        rows.append(row)
        for child in node.children():
            row["subexprs"].append(visit(child))
        return idx

    visit(e)
    return rows


def canonical_form(e):
    """Alpha-canonical variant: relabel-able parameters become dummies."""
    return e.canonical


def expr_id(e):
    return e.expr_id()


def free_vars(e):
    return e.free_vars()
