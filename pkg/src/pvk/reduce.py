"""Reduction calculus: lambda application with range-aware matching,
capture-avoiding relabeling, operation replacement, range expansion and
reduction, conditional-assumption scoping, and automated equality
reductions.

All functions are pure over immutable expressions; proof obligations are
returned unproven in the :class:`ReductionResult` for the caller to
discharge.
"""

from __future__ import annotations

import sys
import threading

from .errors import (AmbiguousMatch, FuelExhausted, IndexMismatch,
                     LengthMismatch, MalformedParts, NotUniversal,
                     RangeBodyForbidden, RelabelForbidden, UnreducibleExtent)
from .exprs import (Conditional, ExprRange, ExprTuple, IndexedVar, Lambda,
                    Literal, NamedExprs, Operation, Variable, _all_var_names,
                    _first_unused_dummy, _param_base, _rename_bases)
from .ops import AND, EQUALS, FORALL, LEN, ONE, OR, add, equals, index_range

DEFAULT_MAX_BETA_STEPS = 10000

# Operator literals with automated equality reduction enabled by default:
# unary conjunction and unary disjunction only.
EQ_REDUCIBLE_DEFAULT = frozenset((AND, OR))
_eq_registry = set(EQ_REDUCIBLE_DEFAULT)


def enable_equality_reduction(operator_literal):
    _eq_registry.add(operator_literal)


def disable_equality_reduction(operator_literal):
    _eq_registry.discard(operator_literal)


def eq_reducible_operators():
    return frozenset(_eq_registry)


class Fuel:
    """Budget of chained beta steps; exhaustion aborts the reduction."""

    def __init__(self, max_beta_steps=DEFAULT_MAX_BETA_STEPS):
        if max_beta_steps <= 0:
            raise MalformedParts("fuel must be positive")
        self.max_beta_steps = max_beta_steps
        self.remaining = max_beta_steps

    def spend(self):
        if self.remaining <= 0:
            raise FuelExhausted(
                f"beta reduction did not terminate within {self.max_beta_steps} steps")
        self.remaining -= 1


class ReductionResult:
    def __init__(self, expr, requirements, eq_requirements, assumptions_used):
        self.expr = expr
        self.requirements = tuple(requirements)
        self.eq_requirements = tuple(eq_requirements)
        self.assumptions_used = frozenset(assumptions_used)

    def __repr__(self):
        return f"ReductionResult({self.expr!r}, requirements={len(self.requirements)})"


class _RangeBinding:
    def __init__(self, base, entries):
        self.base = base
        self.entries = tuple(entries)
        self.primary_form = None   # (start, end) once matched to a parameter
        self.alts = []             # list of (form_entries, repl_entries)
        self.dependent_forms = {}  # (start, end) -> index-tuple equality

    def copy(self):
        b = _RangeBinding(self.base, self.entries)
        b.primary_form = self.primary_form
        b.alts = list(self.alts)
        b.dependent_forms = dict(self.dependent_forms)
        return b

    def add_alt(self, form_entries, repl_entries):
        self.alts.append((tuple(form_entries), tuple(repl_entries)))

    def slices(self):
        """All (form, repl_entries) pairs, primary first."""
        out = []
        if self.primary_form is not None:
            start, end = self.primary_form
            out.append((("range", start, end), self.entries))
        for form_entries, repl_entries in self.alts:
            for form_entry, repl_seg in _align_alt(form_entries, repl_entries):
                if isinstance(form_entry, ExprRange):
                    out.append((("range", form_entry.start_index,
                                 form_entry.end_index), repl_seg))
                else:
                    out.append((("single", form_entry.indices), repl_seg))
        return out

    def find_range_slice(self, start, end):
        for form, repl in self.slices():
            if form[0] == "range" and form[1] == start and form[2] == end:
                return repl
        return None

    def find_single_slice(self, indices):
        for form, repl in self.slices():
            if form[0] == "single" and form[1] == indices:
                if len(repl) != 1:
                    raise IndexMismatch(
                        f"singular occurrence of {self.base} matched a "
                        f"multi-entry slice")
                return repl[0]
        return None


class ReplacementMap:
    """Bindings from parameters (or parameter ranges, or operator variables)
    to replacements, plus optional equivalent alternative expansions.

    Range targets are keyed by base variable; the replacement is an
    ExprTuple of entries.  Alternative expansions are (form, replacement)
    pairs where the form tuple re-slices the parameter range.
    """

    def __init__(self, bindings=None, alt_expansions=None):
        self.direct = {}
        self.ranges = {}
        bindings = bindings or {}
        items = bindings.items() if isinstance(bindings, dict) else bindings
        for target, repl in items:
            self.bind(target, repl)
        for form, repl in (alt_expansions or []):
            self.add_alt_expansion(form, repl)

    def bind(self, target, repl):
        if isinstance(target, ExprRange):
            base = _param_base(target).name
            if base in self.ranges:
                raise MalformedParts(f"duplicate range binding for {base}")
            if not isinstance(repl, ExprTuple):
                raise MalformedParts("range replacements must be ExprTuples")
            self.ranges[base] = _RangeBinding(base, repl.entries)
        elif isinstance(target, (Variable, IndexedVar)):
            if target in self.direct:
                raise MalformedParts(f"duplicate binding for {target!r}")
            self.direct[target] = repl
        else:
            raise MalformedParts("bindings target parameters, parameter ranges "
                                 "or operator variables")

    def add_alt_expansion(self, form, repl):
        if not isinstance(form, ExprTuple) or not isinstance(repl, ExprTuple):
            raise MalformedParts("alternative expansions are (ExprTuple, ExprTuple)")
        bases = set()
        for entry in form.entries:
            if isinstance(entry, ExprRange):
                body = entry.body
                if not isinstance(body, IndexedVar):
                    raise MalformedParts("alternative expansion forms slice "
                                         "ranges of indexed variables")
                bases.add(body.var.name)
            elif isinstance(entry, IndexedVar):
                bases.add(entry.var.name)
            else:
                raise MalformedParts("alternative expansion forms contain only "
                                     "indexed variables and their ranges")
        if len(bases) != 1:
            raise MalformedParts("an alternative expansion re-slices one variable")
        base = bases.pop()
        binding = self.ranges.get(base)
        if binding is None:
            raise MalformedParts(
                f"alternative expansion targets unbound range variable {base}")
        binding.add_alt(form.entries, repl.entries)

    def target_names(self):
        names = set(self.ranges)
        for t in self.direct:
            names.add(t.name if isinstance(t, Variable) else t.var.name)
        return names

    def copy(self):
        m = ReplacementMap()
        m.direct = dict(self.direct)
        m.ranges = {k: v.copy() for k, v in self.ranges.items()}
        return m


def _align_alt(form_entries, repl_entries):
    """Match alt-form entries to replacement entries; ranges absorb segments."""
    segs = _match_segments(form_entries, repl_entries,
                           is_flexible=lambda e: isinstance(e, ExprRange))
    return list(zip(form_entries, segs))


def _match_segments(patterns, items, is_flexible):
    """Distribute ``items`` over ``patterns``; flexible patterns absorb runs.

    Within a run of consecutive flexible patterns, items are matched one to
    one when the counts agree; a single flexible pattern absorbs its whole
    segment; anything else is ambiguous.  Returns one item tuple per pattern.
    """
    out = [None] * len(patterns)
    i = 0
    j = 0
    n, m = len(patterns), len(items)
    while i < n:
        if not is_flexible(patterns[i]):
            if j >= m:
                raise LengthMismatch("not enough operands for the parameters")
            out[i] = (items[j],)
            i += 1
            j += 1
            continue
        run_end = i
        while run_end < n and is_flexible(patterns[run_end]):
            run_end += 1
        rigid_after = sum(1 for p in patterns[run_end:] if not is_flexible(p))
        seg_end = m - rigid_after
        if seg_end < j:
            raise LengthMismatch("not enough operands for the parameters")
        seg = list(items[j:seg_end])
        run = run_end - i
        if run == 1:
            out[i] = tuple(seg)
        elif len(seg) == run:
            for k in range(run):
                out[i + k] = (seg[k],)
        else:
            raise AmbiguousMatch(
                "cannot distribute operands over consecutive parameter ranges; "
                "supply an explicit replacement map")
        i = run_end
        j = seg_end
    if j != m:
        raise LengthMismatch("too many operands for the parameters")
    return out


class _Ctx:
    """Traversal state: active bindings, assumptions, fuel, obligation sinks."""

    def __init__(self, rmap, assumptions, fuel, eq_mode, range_mode="auto"):
        self.rmap = rmap
        self.assumptions = frozenset(assumptions)
        self.supplied = frozenset(assumptions)
        self.fuel = fuel
        self.eq_mode = eq_mode
        self.range_mode = range_mode
        self.requirements = []
        self._req_seen = set()
        self.eq_requirements = []
        self.assumptions_used = set()
        self._free_cache = None

    def require(self, expr, is_eq=False):
        if expr in self._req_seen:
            return
        self._req_seen.add(expr)
        self.requirements.append(expr)
        if is_eq:
            self.eq_requirements.append(expr)

    def note_assumption(self, expr):
        if expr in self.supplied:
            self.assumptions_used.add(expr)

    def incoming_free_names(self):
        if self._free_cache is None:
            names = set()
            for repl in self.rmap.direct.values():
                names |= repl.free_var_names()
            for binding in self.rmap.ranges.values():
                for e in binding.entries:
                    names |= e.free_var_names()
                for _, repl in binding.alts:
                    for e in repl:
                        names |= e.free_var_names()
            self._free_cache = names
        return self._free_cache

    def sub_ctx(self, rmap):
        child = _Ctx(rmap, self.assumptions, self.fuel, self.eq_mode,
                     self.range_mode)
        child.supplied = self.supplied
        child.requirements = self.requirements
        child._req_seen = self._req_seen
        child.eq_requirements = self.eq_requirements
        child.assumptions_used = self.assumptions_used
        return child

    def with_assumptions(self, extra):
        child = self.sub_ctx(self.rmap)
        child.assumptions = self.assumptions | frozenset(extra)
        child._free_cache = self._free_cache
        return child


def _literal_int(e):
    if isinstance(e, Literal) and e.package == "numbers.numerals.decimals":
        try:
            return int(e.name)
        except ValueError:
            return None
    return None


def _range_extent(start, end, ctx):
    """0, 1 or None; literal extents first, then supplied judgments."""
    s, e = _literal_int(start), _literal_int(end)
    if s is not None and e is not None:
        n = e - s + 1
        return n if n in (0, 1) else None
    if ctx is not None:
        empty_fact = equals(add(end, ONE), start)
        if empty_fact in ctx.assumptions:
            ctx.note_assumption(empty_fact)
            return 0
        single_fact = equals(start, end)
        if single_fact in ctx.assumptions:
            ctx.note_assumption(single_fact)
            return 1
    return None


# --- the substitution walk ------------------------------------------------------


def _subst(e, ctx):
    if isinstance(e, Variable):
        return ctx.rmap.direct.get(e, e)
    if isinstance(e, Literal):
        return e
    if isinstance(e, IndexedVar):
        hit = ctx.rmap.direct.get(e)
        if hit is not None:
            return hit
        binding = ctx.rmap.ranges.get(e.var.name)
        if binding is not None:
            indices = tuple(_subst(i, ctx) for i in e.indices)
            repl = binding.find_single_slice(e.indices)
            if repl is None and indices != e.indices:
                repl = binding.find_single_slice(indices)
            if repl is None:
                raise IndexMismatch(
                    f"no expansion covers the occurrence {e.sexpr()}")
            return repl
        base_hit = ctx.rmap.direct.get(e.var)
        new_indices = tuple(_subst(i, ctx) for i in e.indices)
        if base_hit is not None:
            if isinstance(base_hit, Lambda):
                # an IndexedVar is an operation of its base variable
                return _beta(base_hit, new_indices, ctx)
            if isinstance(base_hit, Variable):
                return IndexedVar(base_hit, *new_indices)
            raise MalformedParts(f"cannot index the replacement of {e.var.name}")
        return IndexedVar(e.var, *new_indices)
    if isinstance(e, ExprTuple):
        entries, _ = _subst_entries(e.entries, ctx)
        return ExprTuple(*entries)
    if isinstance(e, Operation):
        return _subst_operation(e, ctx)
    if isinstance(e, Conditional):
        condition = _subst(e.condition, ctx)
        value = _subst(e.value, ctx.with_assumptions((condition,)))
        return Conditional(value, condition)
    if isinstance(e, NamedExprs):
        return NamedExprs([(k, _subst(v, ctx)) for k, v in e.items])
    if isinstance(e, Lambda):
        return _subst_lambda(e, ctx)
    if isinstance(e, ExprRange):
        pieces = _subst_range(e, ctx, in_tuple=False)
        if len(pieces) == 1:
            return pieces[0]
        raise MalformedParts("a range outside a tuple cannot expand to "
                             "several entries")
    raise TypeError(e)


def _subst_entries(entries, ctx):
    out = []
    changed_arity = False
    for entry in entries:
        if isinstance(entry, ExprRange):
            pieces = _subst_range(entry, ctx, in_tuple=True)
            out.extend(pieces)
            if len(pieces) != 1 or not isinstance(pieces[0], ExprRange):
                changed_arity = True
        else:
            out.append(_subst(entry, ctx))
    return out, changed_arity


def _subst_operation(e, ctx):
    operator = e.operator
    hit = None
    if isinstance(operator, (Variable, IndexedVar)):
        hit = ctx.rmap.direct.get(operator)
    if isinstance(e.operands, ExprTuple):
        new_entries, changed = _subst_entries(e.operands.entries, ctx)
        operands = ExprTuple(*new_entries)
    else:
        operands = _subst(e.operands, ctx)
        new_entries = [operands]
        changed = False
    if hit is not None:
        if isinstance(hit, Lambda):
            return _beta(hit, tuple(new_entries), ctx)
        # implicit operation replacement: re-tag under the new operator
        return Operation(hit, operands)
    new_operator = operator if isinstance(operator, Literal) \
        else _subst(operator, ctx)
    if isinstance(new_operator, Lambda):
        return _beta(new_operator, tuple(new_entries), ctx)
    result = Operation(new_operator, operands)
    if changed and ctx.eq_mode == "default" and len(new_entries) == 1 \
            and not isinstance(new_entries[0], ExprRange) \
            and new_operator in _eq_registry:
        reduced = new_entries[0]
        ctx.require(equals(result, reduced), is_eq=True)
        return reduced
    return result


def _beta(lam, operand_entries, ctx):
    """Immediately apply a Lambda that landed in operator position."""
    if isinstance(lam.body, ExprRange):
        raise RangeBodyForbidden(
            "a replacement lambda applied in operator position cannot have "
            "an ExprRange body")
    ctx.fuel.spend()
    rmap = _match_parameters(lam, operand_entries)
    inner = ctx.sub_ctx(rmap)
    result = _subst(lam.body, inner)
    _flush_range_requirements(rmap, ctx)
    return result


def _match_parameters(lam, operand_entries, alt_expansions=None):
    params = lam.parameters
    segs = _match_segments(params, tuple(operand_entries),
                           is_flexible=lambda p: isinstance(p, ExprRange))
    rmap = ReplacementMap()
    for p, seg in zip(params, segs):
        if isinstance(p, ExprRange):
            binding = _RangeBinding(_param_base(p).name, seg)
            binding.primary_form = (p.start_index, p.end_index)
            rmap.ranges[binding.base] = binding
        else:
            rmap.direct[p] = seg[0]
    if alt_expansions:
        for form, repl in alt_expansions:
            rmap.add_alt_expansion(form, repl)
    return rmap


def _flush_range_requirements(rmap, ctx):
    """Length equalities (primary form, then alt slices), then the alt
    index-tuple equalities; a parameter-dependent expansion's index
    equality replaces the length requirement for its form."""
    for binding in rmap.ranges.values():
        forms = []
        if binding.primary_form is not None:
            start, end = binding.primary_form
            forms.append(((start, end), binding.entries))
        for form_entries, repl_entries in binding.alts:
            for form_entry, seg in _align_alt(form_entries, repl_entries):
                if isinstance(form_entry, ExprRange):
                    forms.append(((form_entry.start_index,
                                   form_entry.end_index), seg))
        for (start, end), entries in forms:
            dep = binding.dependent_forms.get((start, end))
            if dep is not None:
                ctx.require(dep)
            else:
                ctx.require(equals(
                    Operation(LEN, ExprTuple(*entries)),
                    Operation(LEN, ExprTuple(index_range(start, end)))))
    for binding in rmap.ranges.values():
        if binding.primary_form is None:
            continue
        start, end = binding.primary_form
        original = ExprTuple(index_range(start, end))
        for form_entries, _ in binding.alts:
            idx_entries = []
            for form_entry in form_entries:
                if isinstance(form_entry, ExprRange):
                    idx_entries.append(index_range(form_entry.start_index,
                                                   form_entry.end_index))
                else:
                    idx_entries.extend(form_entry.indices)
            ctx.require(equals(ExprTuple(*idx_entries), original))


def _expansion_bases(body, param_name, ctx):
    """Range-bound base variables occurring as IndexedVar(base, param)."""
    bases = []

    def walk(node, masked):
        if isinstance(node, IndexedVar):
            if node.var.name not in masked and node.var.name in ctx.rmap.ranges \
                    and node.indices == (Variable(param_name),):
                if node.var.name not in bases:
                    bases.append(node.var.name)
            for i in node.indices:
                walk(i, masked)
            return
        if isinstance(node, Lambda):
            inner = masked | node.parameter_base_names
            for c in node.children():
                walk(c, inner)
            return
        if isinstance(node, ExprRange):
            walk(node.start_index, masked)
            walk(node.end_index, masked)
            walk(node.body, masked | {node.parameter.name})
            return
        for c in node.children():
            walk(c, masked)

    walk(body, frozenset())
    return bases


def _param_beyond_indexing(body, param_name, bases):
    """Does the range parameter occur beyond indexing the expanded bases?"""
    found = []

    def walk(node, masked):
        if param_name in masked or found:
            return
        if isinstance(node, Variable):
            if node.name == param_name:
                found.append(node)
            return
        if isinstance(node, IndexedVar):
            if node.var.name in bases and node.indices == (Variable(param_name),):
                return
            walk(node.var, masked)
            for i in node.indices:
                walk(i, masked)
            return
        if isinstance(node, Lambda):
            inner = masked | node.parameter_base_names
            for c in node.children():
                walk(c, inner)
            return
        if isinstance(node, ExprRange):
            walk(node.start_index, masked)
            walk(node.end_index, masked)
            walk(node.body, masked | {node.parameter.name})
            return
        for c in node.children():
            walk(c, masked)

    walk(body, frozenset())
    return bool(found)


def _subst_range(r, ctx, in_tuple):
    """Substitute within one ExprRange entry; returns spliced entries."""
    param = r.parameter
    bases = _expansion_bases(r.body, param.name, ctx)
    if bases:
        slices = {}
        for base in bases:
            binding = ctx.rmap.ranges[base]
            repl = binding.find_range_slice(r.start_index, r.end_index)
            if repl is None:
                repl = binding.find_range_slice(_subst(r.start_index, ctx),
                                                _subst(r.end_index, ctx))
            if repl is None:
                raise IndexMismatch(
                    f"no expansion of {base} covers the range over "
                    f"({r.start_index.sexpr()}, {r.end_index.sexpr()})")
            slices[base] = repl
        if _param_beyond_indexing(r.body, param.name, bases):
            return _dependent_expansion(r, bases, slices, ctx)
        return _independent_expansion(r, bases, slices, ctx)
    # no expansion: ordinary descent with the parameter masked
    inner_ctx = _mask_ctx(ctx, {param.name})
    start = _subst(r.start_index, ctx)
    end = _subst(r.end_index, ctx)
    body = _subst(r.body, inner_ctx)
    # "none" delays extent reductions, keeping e.g. (b_1,...,b_0)
    extent = None if ctx.range_mode == "none" \
        else _range_extent(start, end, ctx)
    if extent == 0 and in_tuple:
        return []
    if extent == 1:
        single = ReplacementMap()
        single.direct[param] = start
        return [_subst(body, ctx.sub_ctx(single))]
    return [ExprRange(Lambda((param,), body), start, end)]


def _expansion_ctx(ctx, param_name, extra_direct):
    """The outer bindings still apply inside an expanded range body; the
    range's own parameter is rebound explicitly."""
    rmap = ReplacementMap()
    rmap.direct = {t: v for t, v in ctx.rmap.direct.items()
                   if (t.name if isinstance(t, Variable) else t.var.name)
                   != param_name}
    rmap.direct.update(extra_direct)
    rmap.ranges = dict(ctx.rmap.ranges)
    return ctx.sub_ctx(rmap)


def _independent_expansion(r, bases, slices, ctx):
    """Splice per-entry replacements; only lengths must agree."""
    param = r.parameter
    lead = slices[bases[0]]
    for base in bases[1:]:
        if len(slices[base]) != len(lead):
            raise IndexMismatch(
                f"expansions of {bases[0]} and {base} have different shapes")
    if len(bases) == 1 and isinstance(r.body, IndexedVar) \
            and r.body.var.name == bases[0]:
        return list(lead)
    out = []
    for pos in range(len(lead)):
        column = {base: slices[base][pos] for base in bases}
        ranged = [isinstance(column[b], ExprRange) for b in bases]
        if all(ranged):
            first = column[bases[0]]
            fresh = _fresh_index_var(r, ctx)
            extra = {}
            for base in bases:
                seg = column[base]
                if not (seg.start_index == first.start_index
                        and seg.end_index == first.end_index):
                    raise IndexMismatch(f"misaligned expansion entries for {base}")
                extra[IndexedVar(Variable(base), param)] = \
                    _apply_single(seg.lambda_map, fresh, ctx)
            extra[param] = fresh
            new_body = _subst(r.body, _expansion_ctx(ctx, param.name, extra))
            out.append(ExprRange(Lambda((fresh,), new_body),
                                 first.start_index, first.end_index))
        elif not any(ranged):
            extra = {IndexedVar(Variable(base), param): column[base]
                     for base in bases}
            out.append(_subst(r.body, _expansion_ctx(ctx, param.name, extra)))
        else:
            raise IndexMismatch("mixed ranged and singular expansion entries")
    return out


def _dependent_expansion(r, bases, slices, ctx):
    """Expansion indices must match the original indices exactly.

    Replacement entries are ranges (or explicitly indexed variables) whose
    own index segments tile the original range consecutively; the spliced
    pieces keep those indices so occurrences of the range parameter outside
    the expanded variable stay aligned.
    """
    param = r.parameter
    lead = slices[bases[0]]
    start_s = _subst(r.start_index, ctx)
    end_s = _subst(r.end_index, ctx)
    segments = []  # ("range", start, end) or ("single", index)
    for entry in lead:
        if isinstance(entry, ExprRange):
            segments.append(("range", entry.start_index, entry.end_index))
        elif isinstance(entry, IndexedVar) and len(entry.indices) == 1:
            segments.append(("single", entry.indices[0]))
        else:
            raise IndexMismatch(
                "parameter dependent expansion needs indexed replacements")
    # indices must run consecutively from the original start to its end
    cursor = start_s
    for seg in segments:
        first = seg[1]
        if first != cursor:
            raise IndexMismatch(
                f"expansion indices do not match the original indices: "
                f"expected {cursor.sexpr()}, got {first.sexpr()}")
        last = seg[2] if seg[0] == "range" else seg[1]
        cursor = add(last, ONE)
    last_end = segments[-1][2] if segments[-1][0] == "range" else segments[-1][1]
    if last_end != end_s:
        raise IndexMismatch(
            "expansion indices do not reach the original end index")
    for base in bases[1:]:
        other = slices[base]
        if len(other) != len(lead):
            raise IndexMismatch(
                f"expansions of {bases[0]} and {base} have different shapes")
        for pos, entry in enumerate(other):
            seg = segments[pos]
            if isinstance(entry, ExprRange):
                ok = (seg[0] == "range" and entry.start_index == seg[1]
                      and entry.end_index == seg[2])
            elif isinstance(entry, IndexedVar) and len(entry.indices) == 1:
                ok = seg[0] == "single" and entry.indices == (seg[1],)
            else:
                ok = False
            if not ok:
                raise IndexMismatch(
                    f"expansion of {base} does not match the indices of "
                    f"{bases[0]}")
    idx_entries = []
    for seg in segments:
        if seg[0] == "single":
            idx_entries.append(seg[1])
        else:
            idx_entries.append(index_range(seg[1], seg[2]))
    eq = equals(ExprTuple(*idx_entries), ExprTuple(index_range(start_s, end_s)))
    for base in bases:
        binding = ctx.rmap.ranges[base]
        binding.dependent_forms[(r.start_index, r.end_index)] = eq
        binding.dependent_forms[(start_s, end_s)] = eq
    out = []
    for pos, seg in enumerate(segments):
        if seg[0] == "single":
            extra = {param: seg[1]}
            for base in bases:
                extra[IndexedVar(Variable(base), param)] = slices[base][pos]
            out.append(_subst(r.body, _expansion_ctx(ctx, param.name, extra)))
        else:
            fresh = _fresh_index_var(r, ctx)
            extra = {param: fresh}
            for base in bases:
                extra[IndexedVar(Variable(base), param)] = \
                    _apply_single(slices[base][pos].lambda_map, fresh, ctx)
            new_body = _subst(r.body, _expansion_ctx(ctx, param.name, extra))
            out.append(ExprRange(Lambda((fresh,), new_body), seg[1], seg[2]))
    return out


def _apply_single(lam, arg, ctx):
    inner = ReplacementMap()
    inner.direct[lam.parameters[0]] = arg
    return _subst(lam.body, ctx.sub_ctx(inner))


def _fresh_index_var(r, ctx):
    claimed = ctx.incoming_free_names() | ctx.rmap.target_names()
    if r.parameter.name not in claimed:
        return r.parameter
    used = _all_var_names(r) | claimed
    return Variable(_first_unused_dummy(used))


def _mask_ctx(ctx, names):
    rmap = ReplacementMap()
    rmap.direct = {t: v for t, v in ctx.rmap.direct.items()
                   if (t.name if isinstance(t, Variable) else t.var.name)
                   not in names}
    rmap.ranges = {b: v for b, v in ctx.rmap.ranges.items() if b not in names}
    return ctx.sub_ctx(rmap)


def _subst_lambda(e, ctx):
    free_here = set(e.free_var_names())
    if not (ctx.rmap.target_names() & free_here):
        return e
    param_bases = e.parameter_base_names
    inner_ctx = _mask_ctx(ctx, param_bases)
    # free variables of replacements that actually inject below this binder
    relevant_free = set()
    for t, v in inner_ctx.rmap.direct.items():
        nm = t.name if isinstance(t, Variable) else t.var.name
        if nm in free_here:
            relevant_free |= v.free_var_names()
    for b, binding in inner_ctx.rmap.ranges.items():
        if b in free_here:
            for entry in binding.entries:
                relevant_free |= entry.free_var_names()
            for _, repl in binding.alts:
                for entry in repl:
                    relevant_free |= entry.free_var_names()
    lam = e
    collisions = sorted(param_bases & relevant_free)
    if collisions:
        renames = {}
        used = _all_var_names(e) | relevant_free | ctx.rmap.target_names()
        for base in collisions:
            if not e.is_relabelable(base):
                raise RelabelForbidden(
                    f"substitution would capture non-relabel-able variable {base}")
            new = _first_unused_dummy(used)
            used.add(new)
            renames[base] = new
        lam = Lambda(tuple(_rename_bases(p, renames) for p in e.parameters),
                     _rename_bases(e.body, renames))
        inner_ctx = _mask_ctx(ctx, lam.parameter_base_names)
    new_params = []
    for p in lam.parameters:
        if isinstance(p, ExprRange):
            # parameter-range bounds live in the enclosing scope
            start = _subst(p.start_index, ctx)
            end = _subst(p.end_index, ctx)
            extent = _range_extent(start, end, ctx)
            if extent == 0:
                continue
            if extent == 1:
                body = p.body
                new_params.append(IndexedVar(body.var, start))
                continue
            new_params.append(ExprRange(p.lambda_map, start, end))
        elif isinstance(p, IndexedVar):
            new_params.append(IndexedVar(p.var,
                                         *[_subst(i, ctx) for i in p.indices]))
        else:
            new_params.append(p)
    if not new_params:
        raise MalformedParts("all parameters of a lambda reduced away")
    return Lambda(tuple(new_params), _subst(lam.body, inner_ctx))


# --- deep-recursion shelter -------------------------------------------------------

_DEEP_STACK_BYTES = 256 * 1024 * 1024
_DEEP_LIMIT = 400000


def _deepcall(fn):
    """Run ``fn`` on a thread with a large stack; Curry-style chains recurse
    once per beta step and would overflow the default stack."""
    result, error = [], []

    def runner():
        old = sys.getrecursionlimit()
        sys.setrecursionlimit(_DEEP_LIMIT)
        try:
            result.append(fn())
        except BaseException as exc:  # re-raised on the calling thread
            error.append(exc)
        finally:
            sys.setrecursionlimit(old)

    old_size = threading.stack_size(_DEEP_STACK_BYTES)
    try:
        t = threading.Thread(target=runner, name="pvk-reduce")
        t.start()
    finally:
        threading.stack_size(old_size)
    t.join()
    if error:
        raise error[0]
    return result[0]


# --- public operations --------------------------------------------------------------


def substitute(e, rmap, assumptions=(), fuel=None, eq_mode="default",
               range_mode="auto"):
    """Engine core: substitute under a replacement map, returning the
    reduced expression plus the emitted proof obligations."""
    fuel = fuel or Fuel()
    rmap = rmap.copy()

    def run():
        ctx = _Ctx(rmap, assumptions, fuel, eq_mode, range_mode)
        expr = _subst(e, ctx)
        _flush_range_requirements(rmap, ctx)
        return ctx, expr

    ctx, expr = _deepcall(run)
    return ReductionResult(expr, ctx.requirements, ctx.eq_requirements,
                           ctx.assumptions_used)


def apply_lambda(f, operands, assumptions=(), fuel=None, alt_expansions=None,
                 eq_mode="default", range_mode="auto"):
    """Beta-apply ``f`` to operand entries (ranges may absorb several)."""
    if not isinstance(f, Lambda):
        raise MalformedParts("apply_lambda needs a Lambda")
    operands = tuple(operands)
    fuel = fuel or Fuel()

    def run():
        ctx = _Ctx(ReplacementMap(), assumptions, fuel, eq_mode, range_mode)
        ctx.fuel.spend()
        rmap = _match_parameters(f, operands, alt_expansions)
        inner = ctx.sub_ctx(rmap)
        expr = _subst(f.body, inner)
        _flush_range_requirements(rmap, ctx)
        return ctx, expr

    ctx, expr = _deepcall(run)
    return ReductionResult(expr, ctx.requirements, ctx.eq_requirements,
                           ctx.assumptions_used)


def relabel_for_capture(f, incoming_free):
    """Rename parameters of ``f`` colliding with the incoming free variables."""
    if not isinstance(f, Lambda):
        raise MalformedParts("relabel_for_capture needs a Lambda")
    names = {v.name if isinstance(v, Variable) else v for v in incoming_free}
    collisions = [b for b in sorted(f.parameter_base_names) if b in names]
    if not collisions:
        return f
    renames = {}
    used = _all_var_names(f) | set(names)
    for base in collisions:
        if not f.is_relabelable(base):
            raise RelabelForbidden(f"variable {base} is non-relabel-able")
        new = _first_unused_dummy(used)
        used.add(new)
        renames[base] = new
    return Lambda(tuple(_rename_bases(p, renames) for p in f.parameters),
                  _rename_bases(f.body, renames))


def replace_operation(e, operator_replacement, assumptions=(), fuel=None,
                      eq_mode="default"):
    """Replace the operator variable of ``e``; Lambdas beta-apply at once."""
    if not isinstance(e, Operation) or not isinstance(e.operator, Variable):
        raise MalformedParts("replace_operation needs an Operation with a "
                             "Variable operator")
    rmap = ReplacementMap({e.operator: operator_replacement})
    return substitute(e, rmap, assumptions, fuel, eq_mode)


def expand_range(e, rmap, assumptions=(), fuel=None, eq_mode="default",
                 require_reduction=False):
    """Range expansion/reduction of ``e`` (a tuple or range in context)."""
    result = substitute(e, rmap, assumptions, fuel, eq_mode)
    if require_reduction and result.expr == e:
        raise UnreducibleExtent("the range extent could not be established")
    return result


def equality_reduce(e, assumptions=()):
    """Root-level registered equality reduction; pass-through if disabled."""
    if isinstance(e, Operation) and e.operator in _eq_registry \
            and isinstance(e.operands, ExprTuple) \
            and len(e.operands.entries) == 1 \
            and not isinstance(e.operands.entries[0], ExprRange):
        reduced = e.operands.entries[0]
        eq = equals(e, reduced)
        return ReductionResult(reduced, [eq], [eq], set())
    return ReductionResult(e, [], [], set())


# --- instantiation support (shared by the kernel and the checker) ---------------------


def forall_layer(expr):
    """The operand Lambda of a universal quantification, or None."""
    if isinstance(expr, Operation) and expr.operator == FORALL:
        operands = expr.operand_entries()
        if len(operands) == 1 and isinstance(operands[0], Lambda):
            return operands[0]
    return None


def split_conditions(condition):
    """Individual entries of a conjunction of conditions."""
    if isinstance(condition, Operation) and condition.operator == AND:
        out = []
        for entry in condition.operand_entries():
            if isinstance(entry, ExprRange):
                # a symbolic range of conditions stands as one conjunction
                out.append(Operation(AND, ExprTuple(entry)))
            else:
                out.append(entry)
        return out
    return [condition]


class InstantiationOutcome:
    def __init__(self, expr, conditions, requirements, eq_requirements,
                 assumptions_used):
        self.expr = expr
        self.conditions = conditions  # [(condition, scope assumptions)]
        self.requirements = tuple(requirements)
        self.eq_requirements = tuple(eq_requirements)
        self.assumptions_used = frozenset(assumptions_used)


def instantiation_outcome(consequent, rmap, assumptions=(), layers=1,
                          fuel=None, eq_mode="default", range_mode="auto"):
    """Strip universal layers under a replacement map.

    Returns the instantiated body, the per-layer condition obligations with
    the assumption scope each may use, and the reduction obligations.
    Unmentioned parameters default to themselves.
    """
    fuel = fuel or Fuel()
    rmap = rmap.copy()

    def run():
        ctx = _Ctx(rmap, assumptions, fuel, eq_mode, range_mode)
        expr = consequent
        conditions = []
        scope = frozenset(assumptions)
        for _ in range(layers):
            lam = forall_layer(expr)
            if lam is None:
                raise NotUniversal(f"not a universal quantification: "
                                   f"{expr.sexpr()}")
            for p in lam.parameters:
                if isinstance(p, ExprRange):
                    base = _param_base(p).name
                    binding = ctx.rmap.ranges.get(base)
                    if binding is not None and binding.primary_form is None:
                        binding.primary_form = (p.start_index, p.end_index)
                elif p not in ctx.rmap.direct:
                    ctx.rmap.direct[p] = p
            ctx._free_cache = None
            layer_ctx = ctx.with_assumptions(scope)
            body = _subst(lam.body, layer_ctx)
            if isinstance(body, Conditional):
                new_conds = split_conditions(body.condition)
                for cond in new_conds:
                    conditions.append((cond, scope))
                scope = scope | frozenset(new_conds)
                expr = body.value
            else:
                expr = body
        _flush_range_requirements(rmap, ctx)
        return ctx, expr, conditions

    ctx, expr, conditions = _deepcall(run)
    return InstantiationOutcome(expr, conditions, ctx.requirements,
                                ctx.eq_requirements, ctx.assumptions_used)
