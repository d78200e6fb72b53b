"""Parser for the canonical s-expression grammar.

One node form per kind, e.g.
``(Operation (Literal "logic.booleans.disjunction" "Or") (ExprTuple ...))``.
Whitespace only separates tokens; strings are double-quoted with backslash
escapes.  This text is the normative input to ``expr_id`` and to
certificate files.
"""

from __future__ import annotations

from .errors import CertificateSyntaxError
from .exprs import (Conditional, ExprRange, ExprTuple, IndexedVar, Lambda,
                    Literal, NamedExprs, Operation, Variable)


class _Tokenizer:
    def __init__(self, text):
        self.text = text
        self.pos = 0
        self.line = 1
        self.col = 1

    def error(self, msg):
        raise CertificateSyntaxError(msg, line=self.line, column=self.col)

    def _advance(self, n=1):
        for _ in range(n):
            if self.pos < len(self.text) and self.text[self.pos] == "\n":
                self.line += 1
                self.col = 1
            else:
                self.col += 1
            self.pos += 1

    def _skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos] in " \t\r\n":
            self._advance()

    def next(self):
        """Returns ('(', None) | (')', None) | ('str', s) | ('sym', s) | (None, None)."""
        self._skip_ws()
        if self.pos >= len(self.text):
            return (None, None)
        c = self.text[self.pos]
        if c == "(":
            self._advance()
            return ("(", None)
        if c == ")":
            self._advance()
            return (")", None)
        if c == '"':
            self._advance()
            out = []
            while True:
                if self.pos >= len(self.text):
                    self.error("unterminated string")
                c = self.text[self.pos]
                if c == "\\":
                    self._advance()
                    if self.pos >= len(self.text):
                        self.error("unterminated escape")
                    out.append(self.text[self.pos])
                    self._advance()
                elif c == '"':
                    self._advance()
                    return ("str", "".join(out))
                else:
                    out.append(c)
                    self._advance()
        out = []
        while self.pos < len(self.text) and self.text[self.pos] not in ' \t\r\n()"':
            out.append(self.text[self.pos])
            self._advance()
        return ("sym", "".join(out))


def parse(text):
    """Parse one expression; trailing garbage is an error."""
    tok = _Tokenizer(text)
    expr = _parse_node(tok)
    kind, _ = tok.next()
    if kind is not None:
        tok.error("trailing input after expression")
    return expr


def _expect(tok, kind, what):
    k, v = tok.next()
    if k != kind:
        tok.error(f"expected {what}")
    return v


def _parse_node(tok):
    k, v = tok.next()
    if k != "(":
        tok.error("expected '('")
    head = _expect(tok, "sym", "a kind tag")
    if head == "Variable":
        name = _expect(tok, "str", "a variable name string")
        node = Variable(name)
    elif head == "Literal":
        pkg = _expect(tok, "str", "a package string")
        name = _expect(tok, "str", "a literal name string")
        node = Literal(pkg, name)
    elif head == "ExprTuple":
        node = ExprTuple(*_parse_until_close(tok))
        return node
    elif head == "Operation":
        op = _parse_node(tok)
        operands = _parse_node(tok)
        node = Operation(op, operands)
    elif head == "Conditional":
        value = _parse_node(tok)
        condition = _parse_node(tok)
        node = Conditional(value, condition)
    elif head == "Lambda":
        params = _parse_node(tok)
        if not isinstance(params, ExprTuple):
            tok.error("Lambda parameters must be an ExprTuple")
        body = _parse_node(tok)
        node = Lambda(params.entries, body)
    elif head == "NamedExprs":
        items = []
        while True:
            k, _ = tok.next()
            if k == ")":
                return NamedExprs(items)
            if k != "(":
                tok.error("expected a (key expr) pair")
            key = _expect(tok, "str", "a keyword string")
            value = _parse_node(tok)
            _expect(tok, ")", "')' closing the pair")
            items.append((key, value))
    elif head == "ExprRange":
        lam = _parse_node(tok)
        start = _parse_node(tok)
        end = _parse_node(tok)
        node = ExprRange(lam, start, end)
    elif head == "IndexedVar":
        var = _parse_node(tok)
        indices = _parse_until_close(tok)
        if not isinstance(var, Variable):
            tok.error("IndexedVar operator must be a Variable")
        return IndexedVar(var, *indices)
    else:
        tok.error(f"unknown kind tag {head!r}")
    _expect(tok, ")", "')'")
    return node


def _parse_until_close(tok):
    out = []
    while True:
        save = (tok.pos, tok.line, tok.col)
        k, _ = tok.next()
        if k == ")":
            return out
        if k is None:
            tok.error("unexpected end of input")
        tok.pos, tok.line, tok.col = save
        out.append(_parse_node(tok))


def serialize(expr):
    return expr.sexpr()
