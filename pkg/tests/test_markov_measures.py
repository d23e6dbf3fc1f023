"""Tests for exact chains, hidden Markov measures and the window verifiers."""

from fractions import Fraction

import pytest

from classification import decompose_irreducible, is_tmc
from errors import (
    InvalidWeights,
    MalformedPresentation,
    NotATmc,
    NotNonWanderingTmc,
    NullConditioning,
    PreconditionViolated,
    ReducibleChain,
    TheoremInconsistency,
)
from fixtures import MEASURE_FIXTURES
from markov_measures import (
    HiddenMarkovMeasure,
    RationalMarkovChain,
    WindowVerdict,
    admissible_grid,
    chain_on_tmc,
    check_markov_windows,
    check_mrf_windows,
    load_measure,
    measure_to_document,
    random_chain,
    stationary_distribution,
    support_of,
    verify_decomposition_identity,
    verify_main_theorem,
)
from markov_measures import windows
from markov_measures.windows import markov_covers_mrf
from shift_core import blocks, contains_word, language_equal

F = Fraction


def _measure_doc(transitions, **extra):
    doc = {
        "format": "soficlab-measure-v1",
        "chain": {"states": ["a", "b"], "transitions": transitions},
    }
    doc.update(extra)
    return doc


class TestStationaryDistribution:
    def test_single_state(self):
        assert list(stationary_distribution([[1]])) == [F(1)]

    def test_doubly_stochastic(self):
        P = [[0, F(1, 2), F(1, 2)], [F(1, 2), 0, F(1, 2)], [F(1, 2), F(1, 2), 0]]
        assert list(stationary_distribution(P)) == [F(1, 3)] * 3

    def test_goldenmean(self):
        assert list(stationary_distribution([[F(1, 2), F(1, 2)], [1, 0]])) == [F(2, 3), F(1, 3)]

    def test_reducible(self):
        with pytest.raises(ReducibleChain):
            stationary_distribution([[1, 0], [0, 1]])


class TestChainOnTmc:
    def test_uniform_goldenmean(self, goldenmean):
        chain = chain_on_tmc(goldenmean)
        assert chain.transitions.tolist() == [[F(1, 2), F(1, 2)], [F(1), F(0)]]
        assert list(chain.stationary) == [F(2, 3), F(1, 3)]

    def test_weighted(self, goldenmean):
        chain = chain_on_tmc(goldenmean, weights={("0", "0"): 1, ("0", "1"): 3, ("1", "0"): 1})
        assert chain.transition("0", "1") == F(3, 4)
        assert list(chain.stationary) == [F(4, 7), F(3, 7)]

    def test_full_shift_on_one_symbol(self, full_a):
        chain = chain_on_tmc(full_a)
        assert chain.transitions.tolist() == [[F(1)]]
        assert list(chain.stationary) == [F(1)]

    def test_two_components(self, two_loops):
        chain = chain_on_tmc(two_loops, component_weights=[F(1, 4), F(3, 4)])
        assert list(chain.stationary) == [F(1, 4), F(3, 4)]
        assert chain.component_weights == (F(1, 4), F(3, 4))

    def test_weight_on_forbidden_block(self, goldenmean):
        with pytest.raises(InvalidWeights):
            chain_on_tmc(goldenmean, weights={("0", "0"): 1, ("0", "1"): 1, ("1", "0"): 1, ("1", "1"): 1})

    def test_missing_weight(self, goldenmean):
        with pytest.raises(InvalidWeights):
            chain_on_tmc(goldenmean, weights={("0", "0"): 1, ("0", "1"): 1})

    def test_component_weights_must_sum_to_one(self, two_loops):
        with pytest.raises(InvalidWeights):
            chain_on_tmc(two_loops, component_weights=[F(1, 2), F(1, 4)])

    def test_rejects_non_tmc(self, even, one_way):
        with pytest.raises(NotATmc):
            chain_on_tmc(even)
        with pytest.raises(NotNonWanderingTmc):
            chain_on_tmc(one_way)

    @pytest.mark.parametrize("name", ["goldenmean", "three_cycle", "period2", "two_loops"])
    def test_support_is_the_tmc(self, name, request):
        p = request.getfixturevalue(name)
        assert language_equal(support_of(chain_on_tmc(p)), p)


class TestProbabilities:
    def test_goldenmean_cylinders(self, goldenmean_chain):
        assert goldenmean_chain.cylinder_prob("0") == F(2, 3)
        assert goldenmean_chain.cylinder_prob("01") == F(1, 3)
        assert goldenmean_chain.cylinder_prob("11") == 0

    def test_goldenmean_conditionals(self, goldenmean_chain):
        assert goldenmean_chain.conditional_prob({0: "1"}, {-1: "0"}) == F(1, 2)
        assert goldenmean_chain.conditional_prob({0: "0"}, {-1: "0", 1: "0"}) == F(1, 3)

    def test_conflicting_target(self, goldenmean_chain):
        assert goldenmean_chain.conditional_prob({0: "1"}, {0: "0"}) == 0

    def test_null_conditioning(self, goldenmean_chain):
        with pytest.raises(NullConditioning):
            goldenmean_chain.conditional_prob({1: "0"}, {-1: "1", 0: "1"})

    @pytest.mark.parametrize("word", ["0", "01", "010", "1001"])
    def test_stationarity(self, even_hmm, word):
        values = {even_hmm.cylinder_prob(word, j) for j in range(-3, 4)}
        assert len(values) == 1

    def test_marginals(self, even_hmm):
        for w in blocks(support_of(even_hmm), 3).blocks:
            total = even_hmm.cylinder_prob(w)
            assert sum(even_hmm.cylinder_prob(w + (a,)) for a in even_hmm.alphabet) == total
            assert sum(even_hmm.cylinder_prob((a,) + w, -1) for a in even_hmm.alphabet) == total

    def test_hidden_cylinders(self, even_hmm):
        assert even_hmm.cylinder_prob("1") == F(1, 3)
        assert even_hmm.cylinder_prob("11") == F(1, 6)
        assert even_hmm.cylinder_prob("101") == 0


class TestSupport:
    def test_chain_support(self, goldenmean_chain, goldenmean):
        assert language_equal(support_of(goldenmean_chain), goldenmean)

    def test_hidden_support_is_even_shift(self, even_hmm, even):
        support = support_of(even_hmm)
        assert language_equal(support, even)
        assert not is_tmc(support)[0]

    def test_zero_stationary_mass_drops_edges(self):
        chain = RationalMarkovChain(["0", "1"], [[1, 0], [F(1, 2), F(1, 2)]], stationary=[1, 0])
        support = support_of(chain)
        assert contains_word(support, "000")
        assert not contains_word(support, "1")


class TestLoading:
    def test_chain_file(self, goldenmean_chain):
        assert isinstance(goldenmean_chain, RationalMarkovChain)
        assert goldenmean_chain.states == ("0", "1")

    def test_hidden_file(self, even_hmm):
        assert isinstance(even_hmm, HiddenMarkovMeasure)
        assert even_hmm.alphabet == ("0", "1")
        assert list(even_hmm.stationary) == [F(1, 3)] * 3

    def test_injective_labels_rename_states(self):
        m = load_measure(_measure_doc([["0", "1"], ["1", "0"]], labels={"a": "x", "b": "y"}))
        assert isinstance(m, RationalMarkovChain)
        assert m.states == ("x", "y")

    def test_floats_rejected(self):
        with pytest.raises(MalformedPresentation) as exc:
            load_measure(_measure_doc([[0.5, 0.5], [1, 0]]))
        assert exc.value.location == "chain.transitions[0][0]"

    def test_reserved_characters_rejected(self):
        with pytest.raises(MalformedPresentation) as exc:
            load_measure(_measure_doc([["0", "1"], ["1", "0"]], labels={"a": "x:y", "b": "y"}))
        assert exc.value.location == "labels.a"
        doc = _measure_doc([["0", "1"], ["1", "0"]])
        doc["chain"]["states"] = ["a", "b~c"]
        with pytest.raises(MalformedPresentation) as exc:
            load_measure(doc)
        assert exc.value.location == "chain.states[1]"

    def test_rows_must_sum_to_one(self):
        with pytest.raises(MalformedPresentation):
            load_measure(_measure_doc([["1/2", "1/3"], ["1", "0"]]))

    def test_reducible_without_stationary(self):
        with pytest.raises(ReducibleChain):
            load_measure(_measure_doc([["1", "0"], ["0", "1"]]))

    def test_stationary_must_be_invariant(self):
        with pytest.raises(MalformedPresentation):
            load_measure(_measure_doc([["0", "1"], ["1", "0"]], stationary=["1/3", "2/3"]))

    def test_document_roundtrip(self, even_hmm):
        again = load_measure(measure_to_document(even_hmm))
        assert again.labels == even_hmm.labels
        assert list(again.stationary) == list(even_hmm.stationary)


class TestWindows:
    @pytest.mark.parametrize("name", sorted(MEASURE_FIXTURES))
    def test_catalog_verdicts(self, name, request):
        expected = MEASURE_FIXTURES[name]
        m = request.getfixturevalue(name)
        kind = RationalMarkovChain if expected["kind"] == "chain" else HiddenMarkovMeasure
        assert isinstance(m, kind)
        assert check_mrf_windows(m, 4, 2, 2).holds == expected["mrf"]
        assert check_markov_windows(m, 4, 4).holds == expected["markov"]

    def test_goldenmean_chain_passes(self, goldenmean_chain):
        assert check_mrf_windows(goldenmean_chain, 2, 2, 2).holds
        assert check_markov_windows(goldenmean_chain, 3, 3).holds

    def test_two_loops_passes(self, two_loops_chain):
        assert check_mrf_windows(two_loops_chain, 2, 2, 2).holds
        assert check_markov_windows(two_loops_chain, 2, 2).holds

    def test_even_hmm_fails_mrf(self, even_hmm):
        verdict = check_mrf_windows(even_hmm, 4, 2, 2)
        assert not verdict.holds
        w = verdict.witness
        assert w.lhs != w.rhs
        assert len(w.block) == w.n + 1 and len(w.left) == w.N and len(w.right) == w.M

    def test_even_hmm_fails_markov(self, even_hmm):
        verdict = check_markov_windows(even_hmm, 4, 4)
        assert not verdict.holds
        assert verdict.witness.M is None

    def test_bad_window(self, goldenmean_chain):
        with pytest.raises(PreconditionViolated):
            check_mrf_windows(goldenmean_chain, 1, 0, 1)


class TestMainTheorem:
    def test_consistent(self, goldenmean_chain):
        assert verify_main_theorem(goldenmean_chain).outcome == "consistent"

    def test_contrapositive(self, even_hmm):
        report = verify_main_theorem(even_hmm, (4, 2, 2), (4, 4))
        assert report.outcome == "consistent-contrapositive"

    def test_coverage(self):
        assert markov_covers_mrf((2, 2, 2), (4, 5))
        assert not markov_covers_mrf((2, 2, 2), (4, 4))
        assert not markov_covers_mrf((2, 2, 2), (2, 2))

    def _fake_failure(self, monkeypatch, prop):
        failing = WindowVerdict(prop, (1,), False, None, 1)
        name = "check_mrf_windows" if prop == "MRF" else "check_markov_windows"
        monkeypatch.setattr(windows, name, lambda *args, **kwargs: failing)

    def test_inconclusive_when_windows_do_not_cover(self, goldenmean_chain, monkeypatch):
        self._fake_failure(monkeypatch, "MRF")
        report = verify_main_theorem(goldenmean_chain, (1, 1, 1), (1, 1))
        assert report.outcome == "inconclusive"
        assert report.note

    def test_covering_windows_raise(self, goldenmean_chain, monkeypatch):
        self._fake_failure(monkeypatch, "MRF")
        with pytest.raises(TheoremInconsistency):
            verify_main_theorem(goldenmean_chain, (1, 1, 1), (2, 4))

    def test_tension(self, goldenmean_chain, monkeypatch):
        self._fake_failure(monkeypatch, "Markov")
        assert verify_main_theorem(goldenmean_chain).outcome == "tension"


class TestDecompositionIdentity:
    def test_goldenmean(self, goldenmean_chain):
        verdict = verify_decomposition_identity(goldenmean_chain, r=2, L=5, i=1)
        assert verdict.holds
        assert (verdict.period, verdict.primitivity_index) == (1, 2)
        assert len(verdict.blocks_used) == 3

    def test_goldenmean_exhaustive(self, goldenmean_chain):
        verdict = verify_decomposition_identity(goldenmean_chain, r=2, L=5, i=2, exhaustive=True)
        assert verdict.holds
        assert verdict.checked == 3 * 2

    def test_period_two(self, period2_chain):
        verdict = verify_decomposition_identity(period2_chain, r=2, L=6, i=1)
        assert verdict.holds
        assert verdict.blocks_used == [("a", "b")]

    def test_explicit_context(self, goldenmean_chain):
        verdict = verify_decomposition_identity(goldenmean_chain, 2, 5, 1, context="01", x0="0")
        assert verdict.holds and verdict.checked == 1

    def test_zero_probability_context(self, goldenmean_chain):
        with pytest.raises(PreconditionViolated):
            verify_decomposition_identity(goldenmean_chain, 2, 5, 1, context="11")

    @pytest.mark.parametrize("r, L", [(2, 4), (0, 5)])
    def test_inadmissible_goldenmean(self, goldenmean_chain, r, L):
        with pytest.raises(PreconditionViolated):
            verify_decomposition_identity(goldenmean_chain, r=r, L=L, i=1)

    def test_period_must_divide(self, period2_chain):
        with pytest.raises(PreconditionViolated):
            verify_decomposition_identity(period2_chain, r=1, L=6, i=1)

    def test_needs_irreducible_chain(self, two_loops_chain, even_hmm):
        with pytest.raises(PreconditionViolated):
            verify_decomposition_identity(two_loops_chain, r=1, L=3, i=1)
        with pytest.raises(PreconditionViolated):
            verify_decomposition_identity(even_hmm, r=1, L=3, i=1)

    def test_admissible_grid(self, goldenmean_chain):
        assert admissible_grid(goldenmean_chain, 3, 6, 1) == [
            (1, 4, 1), (1, 5, 1), (1, 6, 1), (2, 5, 1), (2, 6, 1), (3, 6, 1),
        ]


class TestRandomChains:
    @pytest.mark.parametrize("seed", range(5))
    def test_quick_windows(self, seed):
        chain = random_chain(seed)
        assert check_markov_windows(chain, 2, 2).holds
        assert check_mrf_windows(chain, 1, 1, 1).holds

    def test_deterministic(self):
        a, b = random_chain(7), random_chain(7)
        assert a.states == b.states
        assert a.transitions.tolist() == b.transitions.tolist()

    @pytest.mark.slow
    @pytest.mark.parametrize("seed", range(50))
    def test_main_theorem_on_random_chains(self, seed):
        chain = random_chain(seed)
        assert check_mrf_windows(chain, 2, 2, 2).holds
        assert check_markov_windows(chain, 3, 3).holds

    @pytest.mark.slow
    @pytest.mark.parametrize("max_components", [1, 2])
    @pytest.mark.parametrize("seed", range(50))
    def test_decomposition_grid_on_random_chains(self, seed, max_components):
        chain = random_chain(seed, max_components=max_components)
        if len(decompose_irreducible(support_of(chain))) > 1:
            with pytest.raises(PreconditionViolated):
                admissible_grid(chain, 4, 12, 2)
            return
        for r, L, i in admissible_grid(chain, 4, 12, 2):
            assert verify_decomposition_identity(chain, r, L, i).holds
