import pytest

from conftest import corpus_files
from extc import syntax
from extc.parser import (
    ParseError, parse_expression, parse_program, parse_spec, parse_type_text,
)
from extc.syntax import (
    AtomLit, BinOp, Call, Case, ConsPattern, If, IntLit, Match, ModuleDef,
    Seq, TuplePattern, Var, VarCall, VarPattern, Wildcard,
)
from extc.types import (
    ANY, AtomLiteralType, FLOAT, FunctionType, INTEGER, ListType, MapKey,
    MapType, STRING, TupleType,
)


class TestExpressions:
    def test_sequence_with_match(self):
        expr = parse_expression("x = 10 * 9\nx + 10")
        assert expr == Seq(
            Match(VarPattern("x"), BinOp("*", IntLit(10), IntLit(9))),
            BinOp("+", Var("x"), IntLit(10)),
        )

    def test_semicolon_and_newline_interchangeable(self):
        assert parse_expression("x = 1; x") == parse_expression("x = 1\nx")

    def test_multiplication_binds_tighter(self):
        assert parse_expression("1 + 2 * 3") == \
            BinOp("+", IntLit(1), BinOp("*", IntLit(2), IntLit(3)))

    def test_comparison_looser_than_arith(self):
        expr = parse_expression("1 + 2 > 2")
        assert expr.op == ">"

    def test_and_or_precedence(self):
        expr = parse_expression("true and false or true")
        assert expr.op == "or"
        assert expr.left.op == "and"

    def test_concat_right_associative(self):
        expr = parse_expression('"a" <> "b" <> "c"')
        assert expr.op == "<>"
        assert isinstance(expr.right, BinOp) and expr.right.op == "<>"

    def test_unary_minus_binds_tightest(self):
        expr = parse_expression("-1 + 2")
        assert expr.op == "+"
        assert expr.left == syntax.UnaryOp("-", IntLit(1))

    def test_match_is_lowest_and_right_associative(self):
        expr = parse_expression("x = y = 3")
        assert isinstance(expr, Match)
        assert isinstance(expr.value, Match)

    def test_non_pattern_lhs_is_an_error(self):
        with pytest.raises(ParseError, match="not a valid pattern"):
            parse_expression("3 + x = 5")

    def test_parenthesized_match_inside_expression(self):
        expr = parse_expression("(x = 3) > 2")
        assert expr.op == ">"
        assert isinstance(expr.left, Match)

    def test_map_access_key_must_be_literal(self):
        with pytest.raises(ParseError):
            parse_expression("m[x]")

    def test_map_access(self):
        expr = parse_expression("m[9]")
        assert expr == syntax.MapAccess(Var("m"), MapKey.integer(9))

    def test_duplicate_map_literal_keys_rejected(self):
        with pytest.raises(ParseError, match="duplicate"):
            parse_expression("%{:a => 1, :a => 2}")

    def test_qualified_call(self):
        expr = parse_expression("Base.Math.dec(n)")
        assert expr == Call(("Base", "Math"), "dec", [Var("n")])

    def test_local_call(self):
        assert parse_expression("dec(1)") == Call((), "dec", [IntLit(1)])

    def test_var_call(self):
        assert parse_expression("f.(8)") == VarCall("f", [IntLit(8)])

    def test_anon_fn(self):
        expr = parse_expression("fn (x, _) -> x end")
        assert expr == syntax.AnonFn([VarPattern("x"), Wildcard()], Var("x"))

    def test_case_branches(self):
        expr = parse_expression("case :yes do :yes -> 1\n:no -> 2 end")
        assert isinstance(expr, Case)
        assert len(expr.clauses) == 2
        assert expr.clauses[1].pattern == AtomLit("no")

    def test_case_branch_body_can_be_a_sequence(self):
        expr = parse_expression("case x do :a -> y = 1\ny + 1\n:b -> 2 end")
        assert len(expr.clauses) == 2
        assert isinstance(expr.clauses[0].body, Seq)

    def test_cond(self):
        expr = parse_expression("cond do x > 1 -> 1\ntrue -> 2 end")
        assert isinstance(expr, syntax.Cond)
        assert len(expr.clauses) == 2

    def test_wildcard_is_not_an_expression(self):
        with pytest.raises(ParseError):
            parse_expression("_ + 1")


class TestIfDesugaring:
    def test_else_kept(self):
        expr = parse_expression("if c do 1 else 2 end")
        assert expr == If(Var("c"), IntLit(1), IntLit(2))

    def test_else_less_if_desugars_to_nil(self):
        expr = parse_expression("if c do 1 end")
        assert expr == If(Var("c"), IntLit(1), AtomLit("nil"))

    def test_synthetic_else_span_is_the_if_keyword(self):
        source = "y = if c do 1 end"
        expr = parse_expression(source)
        synthetic = expr.value.orelse
        assert source[synthetic.span.start:synthetic.span.end] == "if"


class TestPatterns:
    def test_pin_and_tuple(self):
        expr = parse_expression("{^x, y} = {1, 2}")
        assert expr.pattern == TuplePattern([syntax.PinPattern("x"), VarPattern("y")])

    def test_cons_pattern(self):
        expr = parse_expression("[x | _] = l")
        assert expr.pattern == ConsPattern(VarPattern("x"), Wildcard())

    def test_map_pattern(self):
        expr = parse_expression("%{9 => b} = m")
        assert expr.pattern == syntax.MapPattern([(MapKey.integer(9), VarPattern("b"))])

    def test_duplicate_map_pattern_keys_rejected(self):
        with pytest.raises(ParseError, match="duplicate"):
            parse_expression("%{9 => a, 9 => b} = m")


class TestPrograms:
    def test_nested_modules(self):
        program = parse_program(
            "defmodule Base do defmodule Math do def dec(x) do x - 1 end end end")
        assert isinstance(program.items[0], ModuleDef)
        outer = program.items[0]
        assert outer.name == "Base"
        assert isinstance(outer.body[0], ModuleDef)
        assert outer.body[0].name == "Math"

    def test_top_level_expressions_group_into_one_sequence(self):
        program = parse_program("x = 1\nx + 1\ndef f(y) do y end\n2 + 2")
        assert len(program.items) == 3
        assert isinstance(program.items[0], Seq)
        assert isinstance(program.items[1], syntax.FunctionDef)

    def test_def_params_are_patterns(self):
        program = parse_program("def fact(0) do 1 end")
        assert program.items[0].params == [IntLit(0)]

    def test_unbalanced_end(self):
        with pytest.raises(ParseError):
            parse_program("def f(x) do x end end")

    def test_missing_end(self):
        with pytest.raises(ParseError):
            parse_program("defmodule M do def f(x) do x end")


class TestSpecParsing:
    def test_simple_spec(self):
        decl = parse_spec("@spec func(integer) :: float")
        assert decl.name == "func"
        assert decl.params == [INTEGER]
        assert decl.result == FLOAT

    def test_list_of_any(self):
        decl = parse_spec("@spec length([any]) :: integer")
        assert decl.params == [ListType(ANY)]
        assert decl.result == INTEGER

    def test_function_typed_parameter(self):
        decl = parse_spec("@spec f((integer) -> integer) :: integer")
        assert decl.params == [FunctionType((INTEGER,), INTEGER)]

    def test_compound_types(self):
        assert parse_type_text("{any, float}") == TupleType((ANY, FLOAT))
        assert parse_type_text("%{:a => integer, 9 => boolean}") == MapType([
            (MapKey.atom("a"), INTEGER),
            (MapKey.integer(9), parse_type_text("boolean")),
        ])
        assert parse_type_text(":ok") == AtomLiteralType("ok")
        assert parse_type_text("(string) -> (integer) -> integer") == \
            FunctionType((STRING,), FunctionType((INTEGER,), INTEGER))

    def test_duplicate_map_type_keys_rejected(self):
        with pytest.raises(ParseError, match="duplicate"):
            parse_type_text("%{:a => integer, :a => float}")

    def test_unknown_type_name(self):
        with pytest.raises(ParseError, match="unknown type"):
            parse_type_text("number")

    def test_boolean_literals_are_not_types(self):
        with pytest.raises(ParseError):
            parse_type_text("true")


class TestSpansAndRoundTrip:
    def test_span_of_records_parse_position(self):
        source = "x + 10"
        expr = parse_expression(source)
        span = syntax.span_of(expr)
        assert (span.start, span.end) == (0, 6)
        assert (span.line, span.col, span.end_col) == (1, 1, 7)

    def test_span_of_nested_node_contained_in_parent(self):
        expr = parse_expression("1 + 2 * 3")
        inner = syntax.span_of(expr.right)
        outer = syntax.span_of(expr)
        assert outer.start <= inner.start and inner.end <= outer.end

    @pytest.mark.parametrize("path", corpus_files(), ids=lambda p: p.name)
    def test_spans_index_valid_source(self, path):
        source = path.read_text()
        program = parse_program(source, path=path.name)
        for node in syntax.walk(program):
            span = node.span
            assert 0 <= span.start <= span.end <= len(source)
            assert span.line >= 1 and span.col >= 1

    @pytest.mark.parametrize("path", corpus_files(), ids=lambda p: p.name)
    def test_child_spans_contained_in_parents(self, path):
        program = parse_program(path.read_text(), path=path.name)
        stack = [program]
        while stack:
            node = stack.pop()
            for child in syntax.children(node):
                assert node.span.start <= child.span.start
                assert child.span.end <= node.span.end
                stack.append(child)

    @pytest.mark.parametrize("path", corpus_files(), ids=lambda p: p.name)
    def test_pretty_print_reparses_to_equal_ast(self, path):
        first = parse_program(path.read_text(), path=path.name)
        second = parse_program(str(first), path=path.name)
        assert first == second

    @pytest.mark.parametrize("path", corpus_files(), ids=lambda p: p.name)
    def test_parse_is_deterministic(self, path):
        source = path.read_text()
        assert parse_program(source) == parse_program(source)
