# markov_measures/windows.py
"""
Finite-window verification for stationary measures.

A measure is an MRF when, for every window,

    mu(a_0..a_n | a_-N..a_-1, a_n+1..a_n+M) = mu(a_0..a_n | a_-1, a_n+1)

and a Markov chain when

    mu(a_0..a_n | a_-N..a_-1) = mu(a_0..a_n | a_-1).

Both are checked exactly over every positive-probability configuration
up to the given bounds. Configurations are visited in a fixed order
(n, N, M ascending, then words lexicographically), so the reported
witness is the first violation in that order.
"""

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Literal, Optional, Sequence

from config import DEFAULT_LIMITS, Limits
from errors import PreconditionViolated, ResourceCapExceeded, TheoremInconsistency
from markov_measures.markov_chain import RationalMarkovChain
from markov_measures.measure_base import ShiftMeasure
from shift_core import Presentation, blocks, trim_essential
from utils import Word


@dataclass
class WindowWitness:
    n: int
    N: int
    M: Optional[int]              # None for Markov windows
    left: Word                    # a_-N..a_-1
    block: Word                   # a_0..a_n
    right: Optional[Word]         # a_n+1..a_n+M
    lhs: Fraction
    rhs: Fraction


@dataclass
class WindowVerdict:
    property: Literal["MRF", "Markov"]
    max_window: tuple[int, ...]
    holds: bool
    witness: Optional[WindowWitness] = None
    configurations_checked: int = 0


@dataclass
class MainTheoremReport:
    mrf: WindowVerdict
    markov: WindowVerdict
    outcome: Literal["consistent", "consistent-contrapositive", "tension", "inconclusive"]
    markov_covers_mrf: bool
    note: str = ""


@dataclass
class DecompositionVerdict:
    holds: bool
    r: int
    L: int
    i: int
    period: int
    primitivity_index: int
    checked: int = 0
    # (context, x0, lhs, rhs) of the first failure
    witness: Optional[tuple[Word, str, Fraction, Fraction]] = None
    blocks_used: list[Word] = field(default_factory=list)


# --------------------------------------------------
# Support
# --------------------------------------------------

def support_of(m: ShiftMeasure) -> Presentation:
    """
    Labelled graph of the positive-probability transitions, trimmed.

    Hidden states are vertices; h -> h' is kept when pi(h) P(h, h') > 0 and
    is labelled by the label of h'.
    """
    states = m.hidden_states
    P, pi = m.transitions, m.stationary
    n = len(states)
    edges = [
        (states[i], states[j], m.label_of(states[j]))
        for i in range(n)
        for j in range(n)
        if pi[i] > 0 and P[i, j] > 0
    ]
    return trim_essential(Presentation.build(m.alphabet, states, edges))


# --------------------------------------------------
# Window checks
# --------------------------------------------------

class _Evaluator:
    """Memoised pattern probabilities for one window search."""

    def __init__(self, m: ShiftMeasure):
        self.m = m
        self._memo: dict[tuple, Fraction] = {}

    def prob(self, constraints: dict[int, str]) -> Fraction:
        key = tuple(sorted(constraints.items()))
        if key not in self._memo:
            self._memo[key] = self.m.pattern_prob(constraints)
        return self._memo[key]

    def positive_words(self, length: int, start: int) -> list[Word]:
        """Words of `length` placed at `start` with positive probability, lexicographic."""
        level: list[Word] = [()]
        for k in range(length):
            level = [
                w + (a,)
                for w in level
                for a in self.m.alphabet
                if self.prob({start + j: s for j, s in enumerate(w + (a,))}) > 0
            ]
        return level


def _place(word: Sequence[str], start: int) -> dict[int, str]:
    return {start + k: a for k, a in enumerate(word)}


def _charge(budget: list[int], amount: int, limits: Limits) -> None:
    budget[0] += amount
    if budget[0] > limits.max_enumeration:
        raise ResourceCapExceeded("enumeration", limits.max_enumeration, budget[0])


def check_mrf_windows(
    m: ShiftMeasure,
    n_max: int,
    N_max: int,
    M_max: int,
    limits: Limits = DEFAULT_LIMITS,
) -> WindowVerdict:
    if n_max < 0 or N_max < 1 or M_max < 1:
        raise PreconditionViolated("MRF windows need n >= 0, N >= 1, M >= 1")
    ev = _Evaluator(m)
    budget = [0]
    checked = 0
    for n in range(n_max + 1):
        blocks_n = ev.positive_words(n + 1, 0)
        for N in range(1, N_max + 1):
            lefts = ev.positive_words(N, -N)
            for M in range(1, M_max + 1):
                rights = ev.positive_words(M, n + 1)
                _charge(budget, len(lefts) * len(rights) * len(blocks_n), limits)
                for left, right in itertools.product(lefts, rights):
                    given = {**_place(left, -N), **_place(right, n + 1)}
                    denominator = ev.prob(given)
                    if denominator == 0:
                        continue
                    near = {-1: left[-1], n + 1: right[0]}
                    near_denominator = ev.prob(near)
                    for block in blocks_n:
                        inner = _place(block, 0)
                        lhs = ev.prob({**given, **inner}) / denominator
                        rhs = ev.prob({**near, **inner}) / near_denominator
                        checked += 1
                        if lhs != rhs:
                            return WindowVerdict(
                                property="MRF",
                                max_window=(n_max, N_max, M_max),
                                holds=False,
                                witness=WindowWitness(n, N, M, left, block, right, lhs, rhs),
                                configurations_checked=checked,
                            )
    return WindowVerdict("MRF", (n_max, N_max, M_max), True, None, checked)


def check_markov_windows(
    m: ShiftMeasure,
    n_max: int,
    N_max: int,
    limits: Limits = DEFAULT_LIMITS,
) -> WindowVerdict:
    if n_max < 0 or N_max < 1:
        raise PreconditionViolated("Markov windows need n >= 0, N >= 1")
    ev = _Evaluator(m)
    budget = [0]
    checked = 0
    for n in range(n_max + 1):
        blocks_n = ev.positive_words(n + 1, 0)
        for N in range(1, N_max + 1):
            lefts = ev.positive_words(N, -N)
            _charge(budget, len(lefts) * len(blocks_n), limits)
            for left in lefts:
                given = _place(left, -N)
                denominator = ev.prob(given)
                near = {-1: left[-1]}
                near_denominator = ev.prob(near)
                for block in blocks_n:
                    inner = _place(block, 0)
                    lhs = ev.prob({**given, **inner}) / denominator
                    rhs = ev.prob({**near, **inner}) / near_denominator
                    checked += 1
                    if lhs != rhs:
                        return WindowVerdict(
                            property="Markov",
                            max_window=(n_max, N_max),
                            holds=False,
                            witness=WindowWitness(n, N, None, left, block, None, lhs, rhs),
                            configurations_checked=checked,
                        )
    return WindowVerdict("Markov", (n_max, N_max), True, None, checked)


def markov_covers_mrf(mrf_window: tuple[int, int, int], markov_window: tuple[int, int]) -> bool:
    """
    True when the Markov property on `markov_window` implies the MRF
    property on `mrf_window`: blocks up to n + M and pasts up to
    max(N, n + 3) symbols.
    """
    n, N, M = mrf_window
    mk_n, mk_N = markov_window
    return mk_n >= n + M and mk_N >= max(N, n + 3)


def verify_main_theorem(
    m: ShiftMeasure,
    mrf_window: tuple[int, int, int] = (2, 2, 2),
    markov_window: tuple[int, int] = (2, 2),
    limits: Limits = DEFAULT_LIMITS,
) -> MainTheoremReport:
    """
    Contingency of the MRF and Markov window checks.

    MRF failing while Markov holds is only a contradiction when the Markov
    windows are wide enough to imply the MRF windows; then it raises
    TheoremInconsistency, otherwise the outcome is "inconclusive".
    """
    mrf = check_mrf_windows(m, *mrf_window, limits=limits)
    markov = check_markov_windows(m, *markov_window, limits=limits)
    covers = markov_covers_mrf(mrf_window, markov_window)

    if mrf.holds and markov.holds:
        return MainTheoremReport(mrf, markov, "consistent", covers)
    if not mrf.holds and not markov.holds:
        return MainTheoremReport(mrf, markov, "consistent-contrapositive", covers)
    if mrf.holds:
        return MainTheoremReport(
            mrf, markov, "tension", covers,
            note="MRF holds on every tested window but Markov fails; increase bounds",
        )
    if covers:
        raise TheoremInconsistency(
            "Markov property holds on windows that imply the failing MRF window",
            {"mrf": mrf, "markov": markov},
        )
    return MainTheoremReport(
        mrf, markov, "inconclusive", covers,
        note="MRF fails outside the span the Markov windows control; widen the Markov window",
    )


# --------------------------------------------------
# Decomposition identity
# --------------------------------------------------

def _irreducible_support(chain: ShiftMeasure, limits: Limits):
    from classification import decompose_irreducible

    if not isinstance(chain, RationalMarkovChain):
        raise PreconditionViolated("the decomposition identity is stated for Markov chains")
    components = decompose_irreducible(support_of(chain), limits)
    if len(components) != 1:
        raise PreconditionViolated(
            f"support has {len(components)} irreducible components; an irreducible chain is required"
        )
    return components[0]


def admissible_parameters(component, r: int, L: int, i: int) -> Optional[str]:
    """Reason why (r, L, i) is not admissible for the component, or None."""
    p, t = component.period, component.primitivity_index
    if r < 1 or L < 1 or i < 1:
        return "r, L and i must be positive"
    if r % p or L % p:
        return f"r and L must be multiples of the period {p}"
    if L <= r + t * p:
        return f"L must exceed r + t*p = {r + t * p}"
    return None


def admissible_grid(
    chain: RationalMarkovChain,
    r_max: int,
    L_max: int,
    i_max: int,
    limits: Limits = DEFAULT_LIMITS,
) -> list[tuple[int, int, int]]:
    component = _irreducible_support(chain, limits)
    return [
        (r, L, i)
        for r in range(1, r_max + 1)
        for L in range(1, L_max + 1)
        for i in range(1, i_max + 1)
        if admissible_parameters(component, r, L, i) is None
    ]


def verify_decomposition_identity(
    chain: RationalMarkovChain,
    r: int,
    L: int,
    i: int,
    context: Optional[Sequence[str]] = None,
    x0: Optional[str] = None,
    exhaustive: bool = False,
    limits: Limits = DEFAULT_LIMITS,
) -> DecompositionVerdict:
    """
    Check exactly that

        mu(x0 | x_-r..x_-1) = sum over a in B_r^0 of
            mu(x0 | x_-1, a_{iL-r}) * mu(a_{iL-r}..a_{iL-1} | x_-r..x_-1)

    where B_r^0 holds the r-blocks starting in the cyclic class of the
    least symbol. Terms whose weight is zero are skipped. By default the
    least conditioning word of B_r^0 is checked against every x0 in that
    class; `exhaustive` checks every conditioning word of B_r^0.
    """
    component = _irreducible_support(chain, limits)
    reason = admissible_parameters(component, r, L, i)
    if reason:
        raise PreconditionViolated(reason)

    class0 = set(component.cyclic_classes[0])
    block_list = [
        b for b in blocks(component.presentation, r, limits).blocks
        if b[0] in class0 and chain.cylinder_prob(b, -r) > 0
    ]

    if context is not None:
        context = tuple(context)
        if len(context) != r:
            raise PreconditionViolated(f"conditioning word must have length r = {r}")
        if chain.cylinder_prob(context, -r) == 0:
            raise PreconditionViolated("conditioning word has probability zero")
        if context[0] not in class0:
            raise PreconditionViolated("conditioning word must start in the class of the least symbol")
        contexts = [context]
    else:
        contexts = block_list if exhaustive else block_list[:1]

    x0_values = [x0] if x0 is not None else sorted(class0)
    if len(contexts) * len(x0_values) * len(block_list) > limits.max_enumeration:
        raise ResourceCapExceeded(
            "enumeration", limits.max_enumeration, len(contexts) * len(x0_values) * len(block_list)
        )

    offset = i * L - r
    checked = 0
    for ctx in contexts:
        given = _place(ctx, -r)
        for x in x0_values:
            lhs = chain.conditional_prob({0: x}, given)
            rhs = Fraction(0)
            for a in block_list:
                weight = chain.conditional_prob(_place(a, offset), given)
                if weight == 0:
                    continue
                rhs += chain.conditional_prob({0: x}, {-1: ctx[-1], offset: a[0]}) * weight
            checked += 1
            if lhs != rhs:
                return DecompositionVerdict(
                    False, r, L, i, component.period, component.primitivity_index,
                    checked, (ctx, x, lhs, rhs), block_list,
                )
    return DecompositionVerdict(
        True, r, L, i, component.period, component.primitivity_index, checked, None, block_list,
    )
