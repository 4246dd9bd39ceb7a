"""Recursive-descent parser with operator precedence for the Elixir fragment.

Precedence, tightest first: postfix map access; unary `-`/`not`; `*` `/`;
binary `+` `-`; `++` `--` `<>` (right associative); comparisons; `and`; `or`;
`=` (match, right associative, lowest).
"""
from __future__ import annotations

from . import syntax
from .lexer import Token, tokenize
from .syntax import (
    AnonFn, AtomLit, BinOp, BoolLit, Call, Case, CaseClause, Cond, CondClause,
    ConsExpr, ConsPattern, ElistExpr, ElistPattern, FloatLit, FunctionDef, If,
    IntLit, MapAccess, MapExpr, MapPattern, Match, ModuleDef, PinPattern,
    Program, Seq, Span, SpecDecl, StringLit, TupleExpr, TuplePattern, UnaryOp,
    Var, VarCall, VarPattern, Wildcard,
)
from .types import (
    AtomLiteralType, BASE_TYPE_NAMES, FunctionType, ListType, MapKey, MapType,
    TupleType, Type,
)


class ParseError(Exception):
    def __init__(self, message: str, span: Span):
        super().__init__(message)
        self.message = message
        self.span = span


_COMPARISONS = {"<", ">", "<=", ">=", "==", "!=", "===", "!=="}
_CONCAT_OPS = {"++", "--", "<>"}
_DECL_STARTS = {"defmodule", "def"}


class Parser:
    def __init__(self, tokens: list[Token], path: str = "<input>"):
        self.tokens = tokens
        self.pos = 0
        self.path = path

    # --- token plumbing ---

    def peek(self, offset: int = 0) -> Token:
        i = min(self.pos + offset, len(self.tokens) - 1)
        return self.tokens[i]

    def take(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def prev_span(self) -> Span:
        return self.tokens[max(0, self.pos - 1)].span

    def at(self, kind: str, lexeme: str | None = None) -> bool:
        tok = self.peek()
        return tok.kind == kind and (lexeme is None or tok.lexeme == lexeme)

    def at_op(self, lexeme: str) -> bool:
        return self.at("op", lexeme)

    def at_punct(self, lexeme: str) -> bool:
        return self.at("punct", lexeme)

    def at_keyword(self, lexeme: str) -> bool:
        return self.at("keyword", lexeme)

    def expect(self, kind: str, lexeme: str | None = None, what: str | None = None) -> Token:
        if not self.at(kind, lexeme):
            expected = what or (lexeme if lexeme is not None else kind)
            found = self.peek().lexeme or self.peek().kind
            raise ParseError(f"expected {expected!r}, found {found!r}", self.peek().span)
        return self.take()

    def error(self, message: str) -> ParseError:
        return ParseError(message, self.peek().span)

    def at_separator(self) -> bool:
        return self.at("newline") or self.at_punct(";")

    def skip_separators(self):
        while self.at_separator():
            self.take()

    # --- programs and declarations ---

    def parse_program(self) -> Program:
        start = self.peek().span
        items = self.parse_items(toplevel=True)
        span = start if not items else items[0].span.cover(self.prev_span())
        return Program(items, path=self.path, span=span)

    def parse_items(self, toplevel: bool) -> list[syntax.Node]:
        items: list[syntax.Node] = []
        while True:
            self.skip_separators()
            if self.at("eof") or self.at_keyword("end"):
                if toplevel and self.at_keyword("end"):
                    raise self.error("unexpected 'end'")
                break
            if self.at_keyword("defmodule"):
                items.append(self.parse_module())
            elif self.at_keyword("def"):
                items.append(self.parse_def())
            elif self.at("atspec"):
                items.append(self.parse_spec_decl())
            else:
                items.append(self.parse_expr_group())
        return items

    def parse_module(self) -> ModuleDef:
        start = self.expect("keyword", "defmodule").span
        name = self.expect("ident", what="module name").lexeme
        self.expect("keyword", "do")
        body = self.parse_items(toplevel=False)
        self.expect("keyword", "end")
        return ModuleDef(name, body, span=start.cover(self.prev_span()))

    def parse_def(self) -> FunctionDef:
        start = self.expect("keyword", "def").span
        name = self.expect("ident", what="function name").lexeme
        self.expect("punct", "(")
        params: list[syntax.Pattern] = []
        if not self.at_punct(")"):
            params.append(self.parse_pattern())
            while self.at_punct(","):
                self.take()
                params.append(self.parse_pattern())
        self.expect("punct", ")")
        self.expect("keyword", "do")
        body = self.parse_body_sequence()
        self.expect("keyword", "end")
        return FunctionDef(name, params, body, span=start.cover(self.prev_span()))

    def parse_spec_decl(self) -> SpecDecl:
        start = self.expect("atspec").span
        name = self.expect("ident", what="function name").lexeme
        self.expect("punct", "(")
        params: list[Type] = []
        if not self.at_punct(")"):
            params.append(self.parse_type())
            while self.at_punct(","):
                self.take()
                params.append(self.parse_type())
        self.expect("punct", ")")
        self.expect("op", "::")
        result = self.parse_type()
        return SpecDecl(name, params, result, span=start.cover(self.prev_span()))

    def parse_expr_group(self) -> syntax.Expr:
        """A maximal run of expression statements, folded into a sequence."""
        exprs = [self.parse_expr()]
        while self.at_separator():
            mark = self.pos
            self.skip_separators()
            if (self.at("eof") or self.at_keyword("end")
                    or self.peek().lexeme in _DECL_STARTS or self.at("atspec")):
                self.pos = mark
                break
            exprs.append(self.parse_expr())
        return _fold_sequence(exprs)

    # --- types ---

    def parse_type(self) -> Type:
        tok = self.peek()
        if tok.kind == "ident":
            self.take()
            base = BASE_TYPE_NAMES.get(tok.lexeme)
            if base is None:
                raise ParseError(f"unknown type name {tok.lexeme!r}", tok.span)
            return base
        if tok.kind == "atom":
            self.take()
            return AtomLiteralType(tok.lexeme)
        if self.at_punct("["):
            self.take()
            element = self.parse_type()
            self.expect("punct", "]")
            return ListType(element)
        if self.at_punct("{"):
            self.take()
            items: list[Type] = []
            if not self.at_punct("}"):
                items.append(self.parse_type())
                while self.at_punct(","):
                    self.take()
                    items.append(self.parse_type())
            self.expect("punct", "}")
            return TupleType(tuple(items))
        if self.at_punct("%{"):
            open_span = self.take().span
            entries: list[tuple[MapKey, Type]] = []
            if not self.at_punct("}"):
                entries.append(self.parse_map_type_entry())
                while self.at_punct(","):
                    self.take()
                    entries.append(self.parse_map_type_entry())
            self.expect("punct", "}")
            keys = [k for k, _ in entries]
            if len(set(keys)) != len(keys):
                raise ParseError("duplicate keys in map type", open_span.cover(self.prev_span()))
            return MapType(entries)
        if self.at_punct("("):
            self.take()
            params: list[Type] = []
            if not self.at_punct(")"):
                params.append(self.parse_type())
                while self.at_punct(","):
                    self.take()
                    params.append(self.parse_type())
            self.expect("punct", ")")
            self.expect("op", "->")
            result = self.parse_type()
            return FunctionType(tuple(params), result)
        raise ParseError(f"expected a type, found {tok.lexeme!r}", tok.span)

    def parse_map_type_entry(self) -> tuple[MapKey, Type]:
        key = self.parse_map_key()
        self.expect("op", "=>")
        return key, self.parse_type()

    def parse_map_key(self) -> MapKey:
        tok = self.peek()
        if tok.kind == "atom":
            self.take()
            return MapKey.atom(tok.lexeme)
        if tok.kind == "int":
            self.take()
            return MapKey.integer(int(tok.lexeme))
        if tok.kind == "keyword" and tok.lexeme in ("true", "false"):
            self.take()
            return MapKey.boolean(tok.lexeme == "true")
        raise ParseError("expected a map key (atom, boolean or integer)", tok.span)

    # --- patterns ---

    def parse_pattern(self) -> syntax.Pattern:
        tok = self.peek()
        if tok.kind == "ident":
            self.take()
            if tok.lexeme == "_":
                return Wildcard(span=tok.span)
            return VarPattern(tok.lexeme, span=tok.span)
        if self.at_op("^"):
            start = self.take().span
            name = self.expect("ident", what="variable after '^'")
            return PinPattern(name.lexeme, span=start.cover(name.span))
        lit = self.try_literal()
        if lit is not None:
            return lit
        if self.at_punct("{"):
            start = self.take().span
            items: list[syntax.Pattern] = []
            if not self.at_punct("}"):
                items.append(self.parse_pattern())
                while self.at_punct(","):
                    self.take()
                    items.append(self.parse_pattern())
            self.expect("punct", "}")
            return TuplePattern(items, span=start.cover(self.prev_span()))
        if self.at_punct("["):
            start = self.take().span
            if self.at_punct("]"):
                self.take()
                return ElistPattern(span=start.cover(self.prev_span()))
            head = self.parse_pattern()
            self.expect("op", "|")
            tail = self.parse_pattern()
            self.expect("punct", "]")
            return ConsPattern(head, tail, span=start.cover(self.prev_span()))
        if self.at_punct("%{"):
            start = self.take().span
            entries: list[tuple[MapKey, syntax.Pattern]] = []
            if not self.at_punct("}"):
                entries.append(self.parse_map_pattern_entry())
                while self.at_punct(","):
                    self.take()
                    entries.append(self.parse_map_pattern_entry())
            self.expect("punct", "}")
            span = start.cover(self.prev_span())
            keys = [k for k, _ in entries]
            if len(set(keys)) != len(keys):
                raise ParseError("duplicate keys in map pattern", span)
            return MapPattern(entries, span=span)
        raise ParseError(f"expected a pattern, found {tok.lexeme or tok.kind!r}", tok.span)

    def parse_map_pattern_entry(self) -> tuple[MapKey, syntax.Pattern]:
        key = self.parse_map_key()
        self.expect("op", "=>")
        return key, self.parse_pattern()

    def try_literal(self) -> syntax.Literal | None:
        tok = self.peek()
        if tok.kind == "int":
            self.take()
            return IntLit(int(tok.lexeme), span=tok.span)
        if tok.kind == "float":
            self.take()
            return FloatLit(float(tok.lexeme), span=tok.span)
        if tok.kind == "string":
            self.take()
            return StringLit(tok.lexeme, span=tok.span)
        if tok.kind == "atom":
            self.take()
            return AtomLit(tok.lexeme, span=tok.span)
        if tok.kind == "keyword" and tok.lexeme in ("true", "false"):
            self.take()
            return BoolLit(tok.lexeme == "true", span=tok.span)
        return None

    # --- expressions ---

    def parse_expr(self) -> syntax.Expr:
        mark = self.pos
        pattern = None
        try:
            candidate = self.parse_pattern()
            if self.at_op("="):
                pattern = candidate
        except ParseError:
            pass
        if pattern is not None:
            self.take()  # '=': committed to a match expression
            value = self.parse_expr()
            return Match(pattern, value, span=pattern.span.cover(value.span))
        self.pos = mark
        expr = self.parse_or()
        if self.at_op("="):
            raise ParseError("left-hand side of '=' is not a valid pattern", expr.span)
        return expr

    def parse_or(self) -> syntax.Expr:
        left = self.parse_and()
        while self.at_keyword("or"):
            self.take()
            right = self.parse_and()
            left = BinOp("or", left, right, span=left.span.cover(right.span))
        return left

    def parse_and(self) -> syntax.Expr:
        left = self.parse_cmp()
        while self.at_keyword("and"):
            self.take()
            right = self.parse_cmp()
            left = BinOp("and", left, right, span=left.span.cover(right.span))
        return left

    def parse_cmp(self) -> syntax.Expr:
        left = self.parse_concat()
        while self.peek().kind == "op" and self.peek().lexeme in _COMPARISONS:
            op = self.take().lexeme
            right = self.parse_concat()
            left = BinOp(op, left, right, span=left.span.cover(right.span))
        return left

    def parse_concat(self) -> syntax.Expr:
        left = self.parse_additive()
        if self.peek().kind == "op" and self.peek().lexeme in _CONCAT_OPS:
            op = self.take().lexeme
            right = self.parse_concat()
            return BinOp(op, left, right, span=left.span.cover(right.span))
        return left

    def parse_additive(self) -> syntax.Expr:
        left = self.parse_multiplicative()
        while self.at_op("+") or self.at_op("-"):
            op = self.take().lexeme
            right = self.parse_multiplicative()
            left = BinOp(op, left, right, span=left.span.cover(right.span))
        return left

    def parse_multiplicative(self) -> syntax.Expr:
        left = self.parse_unary()
        while self.at_op("*") or self.at_op("/"):
            op = self.take().lexeme
            right = self.parse_unary()
            left = BinOp(op, left, right, span=left.span.cover(right.span))
        return left

    def parse_unary(self) -> syntax.Expr:
        if self.at_op("-"):
            start = self.take().span
            operand = self.parse_unary()
            return UnaryOp("-", operand, span=start.cover(operand.span))
        if self.at_keyword("not"):
            start = self.take().span
            operand = self.parse_unary()
            return UnaryOp("not", operand, span=start.cover(operand.span))
        return self.parse_postfix()

    def parse_postfix(self) -> syntax.Expr:
        expr = self.parse_primary()
        while self.at_punct("["):
            self.take()
            key = self.parse_map_key()
            end = self.expect("punct", "]").span
            expr = MapAccess(expr, key, span=expr.span.cover(end))
        return expr

    def parse_primary(self) -> syntax.Expr:
        tok = self.peek()
        lit = self.try_literal()
        if lit is not None:
            return lit
        if tok.kind == "ident":
            if tok.lexeme == "_":
                raise ParseError("wildcard '_' is not an expression", tok.span)
            return self.parse_name()
        if self.at_punct("("):
            self.take()
            exprs = [self.parse_expr()]
            while self.at_punct(";"):
                self.take()
                exprs.append(self.parse_expr())
            self.expect("punct", ")")
            return _fold_sequence(exprs)
        if self.at_punct("{"):
            start = self.take().span
            items: list[syntax.Expr] = []
            if not self.at_punct("}"):
                items.append(self.parse_expr())
                while self.at_punct(","):
                    self.take()
                    items.append(self.parse_expr())
            self.expect("punct", "}")
            return TupleExpr(items, span=start.cover(self.prev_span()))
        if self.at_punct("["):
            start = self.take().span
            if self.at_punct("]"):
                self.take()
                return ElistExpr(span=start.cover(self.prev_span()))
            head = self.parse_expr()
            self.expect("op", "|")
            tail = self.parse_expr()
            self.expect("punct", "]")
            return ConsExpr(head, tail, span=start.cover(self.prev_span()))
        if self.at_punct("%{"):
            start = self.take().span
            entries: list[tuple[MapKey, syntax.Expr]] = []
            if not self.at_punct("}"):
                entries.append(self.parse_map_expr_entry())
                while self.at_punct(","):
                    self.take()
                    entries.append(self.parse_map_expr_entry())
            self.expect("punct", "}")
            span = start.cover(self.prev_span())
            keys = [k for k, _ in entries]
            if len(set(keys)) != len(keys):
                raise ParseError("duplicate keys in map literal", span)
            return MapExpr(entries, span=span)
        if self.at_keyword("if"):
            return self.parse_if()
        if self.at_keyword("case"):
            return self.parse_case()
        if self.at_keyword("cond"):
            return self.parse_cond()
        if self.at_keyword("fn"):
            return self.parse_fn()
        raise ParseError(f"expected an expression, found {tok.lexeme or tok.kind!r}", tok.span)

    def parse_map_expr_entry(self) -> tuple[MapKey, syntax.Expr]:
        key = self.parse_map_key()
        self.expect("op", "=>")
        return key, self.parse_expr()

    def parse_name(self) -> syntax.Expr:
        first = self.take()
        if self.at_op(".") and self.peek(1).kind == "punct" and self.peek(1).lexeme == "(":
            self.take()  # .
            args = self.parse_call_args()
            return VarCall(first.lexeme, args, span=first.span.cover(self.prev_span()))
        if self.at_op("."):
            path = [first.lexeme]
            while self.at_op("."):
                self.take()
                path.append(self.expect("ident", what="name after '.'").lexeme)
            args = self.parse_call_args()
            return Call(tuple(path[:-1]), path[-1], args,
                        span=first.span.cover(self.prev_span()))
        if self.at_punct("("):
            args = self.parse_call_args()
            return Call((), first.lexeme, args, span=first.span.cover(self.prev_span()))
        return Var(first.lexeme, span=first.span)

    def parse_call_args(self) -> list[syntax.Expr]:
        self.expect("punct", "(")
        args: list[syntax.Expr] = []
        if not self.at_punct(")"):
            args.append(self.parse_expr())
            while self.at_punct(","):
                self.take()
                args.append(self.parse_expr())
        self.expect("punct", ")")
        return args

    def parse_if(self) -> If:
        start = self.expect("keyword", "if").span
        cond = self.parse_expr()
        self.expect("keyword", "do")
        then = self.parse_body_sequence(extra_stop="else")
        if self.at_keyword("else"):
            self.take()
            orelse = self.parse_body_sequence()
        else:
            # An else-less `if` produces :nil when the condition is false; the
            # synthetic branch points back at the `if` keyword.
            orelse = AtomLit("nil", span=start)
        self.expect("keyword", "end")
        return If(cond, then, orelse, span=start.cover(self.prev_span()))

    def parse_case(self) -> Case:
        start = self.expect("keyword", "case").span
        subject = self.parse_expr()
        self.expect("keyword", "do")
        clauses: list[CaseClause] = []
        while True:
            self.skip_separators()
            if self.at_keyword("end"):
                break
            pattern = self.parse_pattern()
            self.expect("op", "->")
            body = self.parse_branch_body(self.case_branch_ahead)
            clauses.append(CaseClause(pattern, body, span=pattern.span.cover(body.span)))
        if not clauses:
            raise self.error("case expression needs at least one clause")
        self.expect("keyword", "end")
        return Case(subject, clauses, span=start.cover(self.prev_span()))

    def parse_cond(self) -> Cond:
        start = self.expect("keyword", "cond").span
        self.expect("keyword", "do")
        clauses: list[CondClause] = []
        while True:
            self.skip_separators()
            if self.at_keyword("end"):
                break
            cond = self.parse_expr()
            self.expect("op", "->")
            body = self.parse_branch_body(self.cond_branch_ahead)
            clauses.append(CondClause(cond, body, span=cond.span.cover(body.span)))
        if not clauses:
            raise self.error("cond expression needs at least one clause")
        self.expect("keyword", "end")
        return Cond(clauses, span=start.cover(self.prev_span()))

    def parse_fn(self) -> AnonFn:
        start = self.expect("keyword", "fn").span
        self.expect("punct", "(")
        params: list[syntax.Pattern] = []
        if not self.at_punct(")"):
            params.append(self.parse_pattern())
            while self.at_punct(","):
                self.take()
                params.append(self.parse_pattern())
        self.expect("punct", ")")
        self.expect("op", "->")
        body = self.parse_body_sequence()
        self.expect("keyword", "end")
        return AnonFn(params, body, span=start.cover(self.prev_span()))

    def parse_body_sequence(self, extra_stop: str | None = None) -> syntax.Expr:
        self.skip_separators()
        exprs = [self.parse_expr()]
        while self.at_separator():
            self.skip_separators()
            if self.at("eof") or self.at_keyword("end") or (
                    extra_stop and self.at_keyword(extra_stop)):
                break
            exprs.append(self.parse_expr())
        return _fold_sequence(exprs)

    def parse_branch_body(self, branch_ahead) -> syntax.Expr:
        self.skip_separators()
        exprs = [self.parse_expr()]
        while self.at_separator():
            self.skip_separators()
            if self.at("eof") or self.at_keyword("end") or branch_ahead():
                break
            exprs.append(self.parse_expr())
        return _fold_sequence(exprs)

    def case_branch_ahead(self) -> bool:
        mark = self.pos
        try:
            self.parse_pattern()
            return self.at_op("->")
        except ParseError:
            return False
        finally:
            self.pos = mark

    def cond_branch_ahead(self) -> bool:
        mark = self.pos
        try:
            self.parse_expr()
            return self.at_op("->")
        except ParseError:
            return False
        finally:
            self.pos = mark


def _fold_sequence(exprs: list[syntax.Expr]) -> syntax.Expr:
    result = exprs[-1]
    for expr in reversed(exprs[:-1]):
        result = Seq(expr, result, span=expr.span.cover(result.span))
    return result


def _as_tokens(source) -> list[Token]:
    return source if isinstance(source, list) else tokenize(source)


def parse_program(source, path: str = "<input>") -> Program:
    """Parse a whole program from source text or a token list."""
    parser = Parser(_as_tokens(source), path)
    program = parser.parse_program()
    parser.skip_separators()
    parser.expect("eof")
    return program


def parse_expression(source) -> syntax.Expr:
    """Parse a single expression statement group (tests and API convenience)."""
    parser = Parser(_as_tokens(source))
    parser.skip_separators()
    expr = parser.parse_expr_group()
    parser.skip_separators()
    parser.expect("eof")
    return expr


def parse_spec(source) -> SpecDecl:
    """Parse one `@spec` declaration."""
    parser = Parser(_as_tokens(source))
    parser.skip_separators()
    decl = parser.parse_spec_decl()
    parser.skip_separators()
    parser.expect("eof")
    return decl


def parse_type_text(source) -> Type:
    """Parse a type written in `@spec` surface syntax."""
    parser = Parser(_as_tokens(source))
    result = parser.parse_type()
    parser.expect("eof")
    return result
