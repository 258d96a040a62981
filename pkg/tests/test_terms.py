from fractions import Fraction as F

import pytest

from effectlayers.terms import (
    App,
    FiniteAlgebra,
    OpSymbol,
    PBin,
    PConst,
    PVar,
    ParamDivisionByZero,
    Signature,
    SyntacticClass,
    TermError,
    Var,
    app,
    classify,
    equation,
    eval_param,
    evaluate,
    find_violation,
    holds,
    interpret,
    prepare_indices,
    render_term,
    term_args,
    term_depth,
    term_vars,
)
from effectlayers.theories import PLUS, SEQ, SKIP, monoid_theory, semilattice_theory

x, y, z = Var("x"), Var("y"), Var("z")


class TestTermBasics:
    def test_term_vars_first_occurrence_order(self):
        t = app(SEQ, app(SEQ, Var("x1"), Var("x3")), app(SEQ, Var("x2"), Var("x1")))
        assert term_vars(t) == ("x1", "x3", "x2")

    def test_term_args_in_order_with_repeats(self):
        t = app(SEQ, app(SEQ, Var("x1"), Var("x3")), app(SEQ, Var("x2"), Var("x1")))
        assert term_args(t) == ("x1", "x3", "x2", "x1")

    def test_depth_counts_variables_as_one(self):
        assert term_depth(x) == 1
        assert term_depth(app(SEQ, x, app(SEQ, y, z))) == 3

    def test_prepare_indices_projects_the_context(self):
        t = app(SEQ, app(SEQ, Var("x1"), Var("x3")), app(SEQ, Var("x2"), Var("x1")))
        assert prepare_indices(t, ["x1", "x2", "x3"]) == (0, 2, 1, 0)

    def test_signature_rejects_duplicates(self):
        with pytest.raises(TermError):
            Signature((SEQ, OpSymbol(";", 2)))

    def test_signature_merge(self):
        merged = Signature((SEQ, SKIP)).merge(Signature((PLUS,)))
        assert [o.name for o in merged.ops] == [";", "skip", "+"]
        with pytest.raises(TermError):
            Signature((SEQ,)).merge(Signature((OpSymbol(";", 3),)))


class TestParams:
    def test_eval_param(self):
        e = PBin("/", PVar("l"), PBin("+", PVar("l"), PConst(F(1))))
        assert eval_param(e, {"l": F(1, 2)}) == F(1, 3)

    def test_division_by_zero_is_reported(self):
        e = PBin("/", PConst(F(1)), PVar("l"))
        with pytest.raises(ParamDivisionByZero):
            eval_param(e, {"l": F(0)})


class TestClassification:
    def test_linear(self):
        e = equation(app(SEQ, x, app(SEQ, y, z)), app(SEQ, app(SEQ, x, y), z))
        assert classify(e) is SyntacticClass.LINEAR

    def test_balanced(self):
        e = equation(app(SEQ, x, x), app(SEQ, x, x, param=None))
        assert classify(equation(app(PLUS, x, x), x)) is not SyntacticClass.LINEAR

    def test_affine_safe(self):
        e = equation(app(SEQ, x, y), y)  # drops x, duplicates nothing
        assert classify(e) is SyntacticClass.AFFINE_SAFE

    def test_duplication_is_balanced(self):
        e = equation(app(PLUS, x, x), x)
        assert classify(e) is SyntacticClass.BALANCED

    def test_duplicating_and_dropping_is_general(self):
        e = equation(app(PLUS, x, x), y, context=("x", "y"))
        assert classify(e) is SyntacticClass.GENERAL


def bool_or_algebra():
    return FiniteAlgebra(
        (0, 1),
        {
            "+": lambda a, p=None: a[0] | a[1],
            ";": lambda a, p=None: a[0] & a[1],
            "skip": lambda a, p=None: 1,
            "abort": lambda a, p=None: 0,
        },
        name="bool",
    )


class TestAlgebra:
    def test_evaluate_consumes_args_in_order(self):
        t = app(SEQ, x, app(SEQ, y, z))
        assert evaluate(t, bool_or_algebra(), (1, 1, 1)) == 1
        assert evaluate(t, bool_or_algebra(), (1, 0, 1)) == 0

    def test_interpret_uses_valuation(self):
        t = app(PLUS, x, x)
        assert interpret(t, bool_or_algebra(), {"x": 0}) == 0

    def test_holds_and_violations(self):
        A = bool_or_algebra()
        for e in semilattice_theory().equations:
            assert holds(A, e), e.describe()
        bad = equation(app(PLUS, x, y), x)
        w = find_violation(A, bad)
        assert w is not None and w["lhs"] != w["rhs"]

    def test_monoid_theory_holds_in_conjunction(self):
        A = bool_or_algebra()
        for e in monoid_theory().equations:
            assert holds(A, e), e.describe()


class TestRendering:
    def test_infix_precedence(self):
        t = app(SEQ, app(PLUS, x, y), z)
        assert render_term(t) == "(x + y);z"
        t2 = app(PLUS, x, app(SEQ, y, z))
        assert render_term(t2) == "x + y;z"

    def test_param_op(self):
        oplus = OpSymbol("⊕", 2, param=True)
        t = App(oplus, (Var("x"), Var("y")), F(1, 2))
        assert "⊕[1/2]" in render_term(t)
