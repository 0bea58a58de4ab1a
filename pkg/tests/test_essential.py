import pytest

from fta import (
    EnumerationBudgetExceeded,
    InvalidPositionError,
    NotEssentialError,
    NotIndependentError,
    ROOT,
    essential_positions,
    essential_vars,
    is_essential_subtree,
    is_prefix_closed,
    is_separable,
    parse_term,
    positions,
    run,
    sets_independent,
)

from conftest import P, PS

# Frozen from an independent enumeration of all assignment pairs over
# the boolean semantics of the sample automaton (q0=0, q1=1; g=not,
# f1=and, f2=or): root value is not(x1 and x2) for every assignment.
ESSENTIAL = PS("ε", "1", "2", "1.1", "2.2", "1.1.1", "1.1.2",
               "2.2.1", "2.2.1.1", "2.2.1.2")
FICTIVE = PS("2.1", "2.1.1", "2.1.1.1", "2.1.1.2", "2.1.1.2.1", "2.1.1.2.2")


class TestWitnessSearch:
    def test_canonical_first_witness(self, aut, term):
        w = is_essential_subtree(aut, term, P("1.1"))
        assert w is not None
        assert w.gamma1 == {1: "0", 2: "0", 3: "0", 4: "0"}
        assert w.gamma2 == {1: "1", 2: "1", 3: "0", 4: "0"}
        assert w.sub_states == ("q0", "q1")
        assert w.root_states == ("q1", "q0")
        assert w.verify(aut, term)

    def test_fictive_position(self, aut, term):
        assert is_essential_subtree(aut, term, P("2.1")) is None

    def test_ground_subtree_never_essential(self, sig, aut):
        t = parse_term("1", sig)
        assert is_essential_subtree(aut, t, ROOT) is None

    def test_invalid_position(self, aut, term):
        with pytest.raises(InvalidPositionError):
            is_essential_subtree(aut, term, P("4.4"))

    def test_witnesses_self_verify(self, aut, term):
        rep = essential_positions(aut, term)
        for p, w in rep.witnesses.items():
            assert w.position == p
            assert w.verify(aut, term)

    def test_witness_states_differ_along_root_path(self, aut, term):
        # with at most one variable occurrence per leaf inside the
        # subtree's ancestors, a witness pair keeps its disagreement at
        # every prefix of its position
        w = is_essential_subtree(aut, term, P("1.1"))
        tr1 = run(aut, w.gamma1, term)
        tr2 = run(aut, w.gamma2, term)
        for cut in range(len(w.position.indices) + 1):
            q = P(".".join(map(str, w.position.indices[:cut])) or "ε")
            assert tr1.per_position[q] != tr2.per_position[q]


class TestReport:
    def test_partition(self, aut, term):
        rep = essential_positions(aut, term)
        assert rep.essential_positions == ESSENTIAL
        assert rep.fictive_positions == FICTIVE
        assert (rep.essential_positions | rep.fictive_positions) == positions(term)
        assert not (set(rep.essential_positions) & set(rep.fictive_positions))

    def test_prefix_closed_on_sample(self, aut, term):
        rep = essential_positions(aut, term)
        assert is_prefix_closed(rep.essential_positions)

    def test_essential_vars_included(self, aut, term):
        rep = essential_positions(aut, term)
        assert rep.essential_vars == {1, 2}

    def test_ground_term_all_fictive(self, sig, aut):
        rep = essential_positions(aut, parse_term("1", sig))
        assert rep.essential_positions == set()
        assert rep.fictive_positions == {ROOT}

    def test_essential_vars_have_essential_leaf_occurrences(self, aut, term):
        # a root-flipping toggle forces different leaf states, so every
        # leaf occurrence of an essential variable is itself essential
        from fta import variable_positions
        rep = essential_positions(aut, term)
        for v in rep.essential_vars:
            for occ in variable_positions(term)[v]:
                assert occ in rep.essential_positions


class TestEssentialVars:
    def test_sample(self, aut, term):
        assert essential_vars(aut, term) == {1, 2}

    def test_unary(self, sig, aut):
        assert essential_vars(aut, parse_term("g(x1)", sig)) == {1}

    def test_ground(self, sig, aut):
        assert essential_vars(aut, parse_term("f2(0,1)", sig)) == frozenset()

    def test_suppressed_variable(self, sig, aut):
        # f1(x1, 0) is constantly q0, so x1 cannot matter
        assert essential_vars(aut, parse_term("f1(x1,0)", sig)) == frozenset()


class TestSetsIndependent:
    def test_examples(self, term):
        assert sets_independent(term, PS("1.1"), PS("2.1", "2.2"))
        assert not sets_independent(term, PS("1"), PS("1.1"))
        assert sets_independent(term, set(), PS("1", "2"))

    def test_membership_required(self, term):
        with pytest.raises(InvalidPositionError):
            sets_independent(term, PS("8"), PS("1"))


class TestSeparability:
    def test_sample_singleton(self, aut, term):
        result = is_separable(aut, term, PS("1.1"))
        assert result.separable
        assert result.witness == {3: "0", 4: "0"}

    def test_not_essential_rejected(self, aut, term):
        with pytest.raises(NotEssentialError):
            is_separable(aut, term, PS("2.1"))

    def test_explicit_dependent_sets_rejected(self, aut, term):
        with pytest.raises(NotIndependentError):
            is_separable(aut, term, PS("1"), PS("1.1"))

    def test_explicit_fictive_wrt_rejected(self, aut, term):
        with pytest.raises(NotEssentialError):
            is_separable(aut, term, PS("1.1"), PS("2.1"))

    def test_empty_domain_degenerates(self, aut, term):
        # every variable of the term occurs under position 2, so there
        # is nothing to fix and the empty assignment is the witness
        result = is_separable(aut, term, PS("2"))
        assert result.separable and result.witness == {}

    def test_explicit_sets(self, aut, term):
        result = is_separable(aut, term, PS("1.1"), PS("2.2"))
        assert result.separable and result.witness == {}

    def test_substituted_term_keeps_set_essential(self, aut, term):
        from fta import Node, substitute
        result = is_separable(aut, term, PS("1.1"))
        fixed = substitute(term, {v: Node(c) for v, c in result.witness.items()})
        assert is_essential_subtree(aut, fixed, P("1.1")) is not None


class TestBudget:
    def test_wide_term_fails_fast(self, sig, aut):
        text = "x1"
        for i in range(2, 26):
            text = f"f1(x{i},{text})"
        t = parse_term(text, sig)
        with pytest.raises(EnumerationBudgetExceeded):
            essential_positions(aut, t)
        with pytest.raises(EnumerationBudgetExceeded):
            is_essential_subtree(aut, t, ROOT)

    def test_custom_budget(self, aut, term):
        with pytest.raises(EnumerationBudgetExceeded):
            is_essential_subtree(aut, term, P("1.1"), budget=16)
        assert is_essential_subtree(aut, term, P("1.1"), budget=64) is not None
