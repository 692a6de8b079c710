"""Language layer: parsing, sorts, free variables, closure."""

import pytest
from hypothesis import given, settings, strategies as st

from abdukit.lang import (
    neg,
    Alphabet,
    Const,
    EqAtom,
    ExistsFO,
    ExistsSO,
    FormulaSyntaxError,
    Lit,
    Literal,
    Not,
    Or,
    PredAtom,
    SOAtom,
    SOVar,
    SOVarRef,
    SortError,
    Var,
    conj,
    existential_closure,
    free_variables,
    impl,
    is_sentence,
    parse_formula,
    parse_literal,
    parse_sentence,
    serialize,
    true_formula,
    well_sorted,
)


PLANT = Alphabet(
    sorts=("comp", "state"),
    constants={"comp": ("F", "P"), "state": ("High", "No")},
    predicates={"Hold": ("comp", "state"), "Open": ("comp",)},
    second_order={"Action": 3, "Cause-Effect": 2},
)

MONO = Alphabet(
    sorts=("obj",),
    constants={"obj": ("0",)},
    predicates={"p": ("obj",)},
    second_order={"R": 2},
)


def lit(pred, *args):
    return Literal(PredAtom(pred, args))


F = Const("F", "comp")
P = Const("P", "comp")
HIGH = Const("High", "state")
NO = Const("No", "state")


class TestParse:
    def test_ground_predicate_literal(self):
        phi = parse_formula("Hold(F, No)", PLANT)
        assert phi == Lit(lit("Hold", F, NO))

    def test_negated_self_equality(self):
        x = Var("x", "comp")
        phi = parse_formula("!(x:comp = x:comp)", PLANT)
        assert phi == Lit(Literal(EqAtom(x, x), positive=False))

    def test_exists_second_order_atom(self):
        # Oracle: hand-built AST for the same string.
        expected = ExistsSO(
            "X",
            SOAtom("Action", (SOVar("X"), lit("Open", F), lit("Hold", F, HIGH))),
        )
        assert parse_formula("exists X . Action(X, Open(F), Hold(F,High))", PLANT) == expected

    def test_second_order_equality(self):
        phi = parse_formula("X == Hold(F, No)", PLANT)
        assert phi == type(phi)(SOVar("X"), lit("Hold", F, NO))

    def test_negative_literal_as_so_term(self):
        phi = parse_formula("Action((!Open(F)), Open(F), Hold(F,High))", PLANT)
        assert phi.args[0] == lit("Open", F).negate()

    def test_macros_are_expanded(self):
        phi = parse_formula("Hold(F,No) & Open(F)", PLANT)
        assert phi == conj(Lit(lit("Hold", F, NO)), Lit(lit("Open", F)))
        psi = parse_formula("Hold(F,No) -> Open(F)", PLANT)
        assert psi == Or(Lit(lit("Hold", F, NO).negate()), Lit(lit("Open", F)))

    def test_forall_expands_to_not_exists_not(self):
        phi = parse_formula("forall X . X", PLANT)
        assert phi == Not(ExistsSO("X", Not(SOVarRef("X"))))

    def test_true_macro(self):
        assert parse_formula("true", PLANT) == true_formula(PLANT)

    def test_syntax_error_carries_position(self):
        with pytest.raises(FormulaSyntaxError) as err:
            parse_formula("Hold(F, No) |", PLANT)
        assert err.value.position == 13

    def test_unknown_symbol(self):
        with pytest.raises(FormulaSyntaxError):
            parse_formula("Hold(F, Q)", PLANT)

    def test_arity_mismatch(self):
        with pytest.raises(FormulaSyntaxError):
            parse_formula("Open(F, F)", PLANT)

    def test_sort_mismatch(self):
        with pytest.raises(FormulaSyntaxError):
            parse_formula("Hold(No, F)", PLANT)

    def test_variable_needs_annotation(self):
        with pytest.raises(FormulaSyntaxError):
            parse_formula("Open(y)", PLANT)

    def test_one_sort_per_name(self):
        with pytest.raises(FormulaSyntaxError):
            parse_formula("Hold(x:comp, No) | exists x:state . Hold(F, x:state)", PLANT)

    def test_hyphenated_names_and_arrow(self):
        phi = parse_formula("Cause-Effect(Hold(F,High), Hold(P,High)) -> Open(F)", PLANT)
        assert isinstance(phi, Or)
        assert isinstance(phi.lhs, Not)
        assert phi.lhs.body.rel == "Cause-Effect"


class TestFreeVariables:
    def test_ground_literal(self):
        assert free_variables(parse_formula("Hold(F,No)", PLANT)) == (frozenset(), frozenset())

    def test_shadowing(self):
        phi = parse_formula("p(x:obj) | exists x:obj . p(x:obj)", MONO)
        assert free_variables(phi) == (frozenset({Var("x", "obj")}), frozenset())

    def test_second_order_atom(self):
        phi = parse_formula("Action(X, Open(F), Hold(F,High))", PLANT)
        assert free_variables(phi) == (frozenset(), frozenset({"X"}))


class TestClosure:
    def test_closes_first_order(self):
        phi = parse_formula("p(x:obj)", MONO)
        assert existential_closure(phi) == ExistsFO(Var("x", "obj"), phi)

    def test_identity_on_sentences(self):
        phi = parse_sentence("p(0) | !p(0)", MONO)
        assert existential_closure(phi) == phi

    def test_order_is_sort_then_name(self):
        phi = parse_formula("Hold(y:comp, a:state) | Open(x:comp) | X", PLANT)
        closed = existential_closure(phi)
        assert closed == ExistsFO(
            Var("x", "comp"),
            ExistsFO(Var("y", "comp"), ExistsFO(Var("a", "state"), ExistsSO("X", phi))),
        )

    def test_sentence_helper_rejects_open_formula(self):
        with pytest.raises(SortError):
            parse_sentence("p(x:obj)", MONO)


class TestWellSorted:
    def test_accepts_ground_literal(self):
        assert well_sorted(parse_formula("Hold(F, No)", PLANT), PLANT).ok

    def test_rejects_swapped_sorts(self):
        bad = Lit(Literal(PredAtom("Hold", (NO, F))))
        verdict = well_sorted(bad, PLANT)
        assert not verdict.ok
        assert any(d.code == "sort-mismatch" for d in verdict.diagnostics)

    def test_rejects_wrong_arity(self):
        bad = SOAtom("Action", (lit("Hold", F, NO), lit("Open", F)))
        verdict = well_sorted(bad, PLANT)
        assert not verdict.ok
        assert any(d.code == "arity-mismatch" for d in verdict.diagnostics)

    def test_rejects_equality_as_so_argument(self):
        eq = Literal(EqAtom(F, P))
        verdict = well_sorted(SOAtom("Cause-Effect", (eq, lit("Open", F))), PLANT)
        assert not verdict.ok
        assert any(d.code == "equality-as-so-argument" for d in verdict.diagnostics)

    def test_never_raises(self):
        verdict = well_sorted(Lit(lit("Nope", F)), PLANT)
        assert not verdict.ok


# -- round-trip property ------------------------------------------------------

_comp_terms = st.sampled_from([F, P, Var("u", "comp"), Var("v", "comp")])
_state_terms = st.sampled_from([HIGH, NO, Var("s", "state")])


def _literals():
    hold = st.tuples(_comp_terms, _state_terms).map(lambda a: lit("Hold", *a))
    open_ = _comp_terms.map(lambda t: lit("Open", t))
    eq = st.tuples(_comp_terms, _comp_terms).map(lambda a: Literal(EqAtom(*a)))
    base = st.one_of(hold, open_, eq)
    return st.tuples(base, st.booleans()).map(lambda p: p[0] if p[1] else p[0].negate())


def _formulas():
    so_terms = st.one_of(
        _literals().filter(lambda l: not l.is_equality),
        st.sampled_from([SOVar("X"), SOVar("Y")]),
    )
    leaves = st.one_of(
        _literals().map(Lit),
        st.sampled_from([SOVarRef("X"), SOVarRef("Y")]),
        st.tuples(so_terms, so_terms).map(lambda p: type(parse_formula("X == X", PLANT))(*p)),
        st.tuples(so_terms, so_terms).map(lambda p: SOAtom("Cause-Effect", p)),
    )

    def extend(children):
        # Canonical ASTs build negation through neg(); Not never directly
        # wraps a positive literal.
        return st.one_of(
            children.map(neg),
            st.tuples(children, children).map(lambda p: Or(*p)),
            children.map(lambda f: ExistsFO(Var("u", "comp"), f)),
            children.map(lambda f: ExistsSO("X", f)),
        )

    return st.recursive(leaves, extend, max_leaves=6)


@given(_formulas())
@settings(max_examples=200, deadline=None)
def test_serialize_parse_round_trip(phi):
    text = serialize(phi)
    assert parse_formula(text, PLANT) == phi
    # Serialised text is already normalised: parse . serialize is stable.
    assert serialize(parse_formula(text, PLANT)) == text


@given(_formulas())
@settings(max_examples=100, deadline=None)
def test_closure_has_no_free_variables(phi):
    closed = existential_closure(phi)
    assert free_variables(closed) == (frozenset(), frozenset())
    assert is_sentence(closed)


def test_parse_literal_helper():
    assert parse_literal("!Open(F)", PLANT) == lit("Open", F).negate()
    with pytest.raises(SortError):
        parse_literal("Open(F) | Open(P)", PLANT)
