# markov_measures/markov_chain.py

import random
from fractions import Fraction
from typing import Mapping, Optional, Sequence

import networkx as nx
import numpy as np
import sympy

from config import DEFAULT_LIMITS, Limits
from errors import InvalidWeights, ReducibleChain
from markov_measures.measure_base import ShiftMeasure, fraction_matrix, fraction_vector
from shift_core import Presentation, tmc_from_blocks


def _positive_digraph(states: Sequence[str], P: np.ndarray) -> nx.DiGraph:
    g = nx.DiGraph()
    g.add_nodes_from(states)
    n = len(states)
    g.add_edges_from((states[i], states[j]) for i in range(n) for j in range(n) if P[i, j] > 0)
    return g


def stationary_distribution(P, states: Optional[Sequence[str]] = None) -> np.ndarray:
    """
    Exact solution of pi P = pi, sum(pi) = 1 for an irreducible chain.

    The nullspace of (P - I)^T is computed over the rationals with sympy.
    Reducible matrices have no unique stationary vector and raise
    ReducibleChain.
    """
    P = fraction_matrix(P)
    n = P.shape[0]
    states = list(states) if states is not None else [str(i) for i in range(n)]
    if n == 0:
        raise InvalidWeights("transition matrix is empty")
    if not nx.is_strongly_connected(_positive_digraph(states, P)):
        raise ReducibleChain("transition matrix is reducible; give component weights or a stationary vector")

    coef = sympy.Matrix(n, n, lambda i, j: sympy.Rational(P[j, i].numerator, P[j, i].denominator))
    basis = (coef - sympy.eye(n)).nullspace()
    if len(basis) != 1:
        raise ReducibleChain(f"stationary vector is not unique (nullspace dimension {len(basis)})")
    v = basis[0]
    total = sum(v)
    return fraction_vector([Fraction(int((x / total).p), int((x / total).q)) for x in v])


class RationalMarkovChain(ShiftMeasure):
    """
    Stationary Markov chain on symbols with exact rational entries.

    `component_weights` records the convex combination used for a
    reducible support, one weight per irreducible component in order of
    least symbol. It is informational only.
    """

    def __init__(
        self,
        states: Sequence[str],
        transitions,
        stationary=None,
        component_weights: Optional[Sequence[Fraction]] = None,
    ):
        self._states = tuple(states)
        if len(set(self._states)) != len(self._states):
            raise InvalidWeights("duplicate chain states")
        P = fraction_matrix(transitions)
        n = len(self._states)
        if P.shape != (n, n):
            raise InvalidWeights(f"transition matrix must be {n}x{n}, got {P.shape}")
        for i, row in enumerate(P):
            if any(v < 0 or v > 1 for v in row):
                raise InvalidWeights(f"row {self._states[i]!r} has an entry outside [0, 1]")
            if sum(row, Fraction(0)) != 1:
                raise InvalidWeights(f"row {self._states[i]!r} does not sum to 1")
        self._P = P

        if stationary is None:
            pi = stationary_distribution(P, self._states)
        else:
            pi = fraction_vector(stationary)
            if pi.shape != (n,):
                raise InvalidWeights(f"stationary vector must have {n} entries")
            if any(v < 0 for v in pi) or sum(pi, Fraction(0)) != 1:
                raise InvalidWeights("stationary vector must be a probability vector")
            if any(a != b for a, b in zip(pi.dot(P), pi)):
                raise InvalidWeights("stationary vector is not invariant: pi P != pi")
        self._pi = pi
        self.component_weights = tuple(Fraction(w) for w in component_weights) if component_weights else ()

    @property
    def hidden_states(self) -> tuple[str, ...]:
        return self._states

    @property
    def states(self) -> tuple[str, ...]:
        return self._states

    @property
    def transitions(self) -> np.ndarray:
        return self._P

    @property
    def stationary(self) -> np.ndarray:
        return self._pi

    def label_of(self, state: str) -> str:
        return state

    def transition(self, a: str, b: str) -> Fraction:
        index = {s: i for i, s in enumerate(self._states)}
        return self._P[index[a], index[b]]

    def __repr__(self) -> str:
        return f"RationalMarkovChain(states={self._states})"


# --------------------------------------------------
# Chains on topological Markov chains
# --------------------------------------------------

def chain_on_tmc(
    p: Presentation,
    weights: Optional[Mapping[tuple[str, str], object]] = None,
    component_weights: Optional[Sequence[object]] = None,
    limits: Limits = DEFAULT_LIMITS,
) -> RationalMarkovChain:
    """
    Stationary chain with P[a][b] > 0 exactly on the allowed 2-blocks of p.

    Without `weights` every state spreads uniformly over its out-edges.
    Each irreducible component gets its own exact stationary vector; a
    union of components is the convex combination with `component_weights`
    (uniform by default).
    """
    from classification import decompose_irreducible

    components = decompose_irreducible(p, limits)
    symbols = sorted(s for c in components for s in c.alphabet)
    allowed = sorted({(e.src, e.dst) for c in components for e in c.presentation.edges})
    allowed_set = set(allowed)

    if weights is None:
        w = {block: Fraction(1) for block in allowed}
    else:
        w = {}
        for block, value in weights.items():
            block = tuple(block)
            if block not in allowed_set:
                raise InvalidWeights(f"weight on forbidden 2-block {block}")
            value = Fraction(value)
            if value <= 0:
                raise InvalidWeights(f"non-positive weight {value} on allowed 2-block {block}")
            w[block] = value
        missing = [block for block in allowed if block not in w]
        if missing:
            raise InvalidWeights(f"zero weight on allowed 2-block {missing[0]}")

    if component_weights is None:
        cw = [Fraction(1, len(components))] * len(components)
    else:
        cw = [Fraction(v) for v in component_weights]
        if len(cw) != len(components):
            raise InvalidWeights(f"expected {len(components)} component weights, got {len(cw)}")
        if any(v <= 0 for v in cw) or sum(cw) != 1:
            raise InvalidWeights("component weights must be positive and sum to 1")

    index = {s: i for i, s in enumerate(symbols)}
    n = len(symbols)
    P = fraction_matrix([[0] * n for _ in range(n)])
    for a in symbols:
        out = [(b, w[(a, b)]) for (x, b) in allowed if x == a]
        total = sum(v for _, v in out)
        for b, v in out:
            P[index[a], index[b]] = v / total

    pi = fraction_vector([0] * n)
    for weight, component in zip(cw, components):
        members = list(component.alphabet)
        rows = [index[s] for s in members]
        local = stationary_distribution(P[np.ix_(rows, rows)], members)
        for k, i in enumerate(rows):
            pi[i] = weight * local[k]

    return RationalMarkovChain(symbols, P, pi, component_weights=cw)


def random_chain(
    seed: int,
    max_symbols: int = 4,
    max_components: int = 2,
    max_weight: int = 5,
) -> RationalMarkovChain:
    """
    Seeded random chain on a random non-wandering TMC.

    Symbols are split into components; each component gets a cycle through
    all its symbols plus random extra 2-blocks, so it is irreducible.
    Edge and component weights are random positive integers.
    """
    rng = random.Random(seed)
    n = rng.randint(1, max_symbols)
    symbols = [chr(ord("a") + i) for i in range(n)]
    order = symbols[:]
    rng.shuffle(order)
    k = rng.randint(1, min(max_components, n))
    cuts = sorted(rng.sample(range(1, n), k - 1)) if k > 1 else []
    groups = [order[i:j] for i, j in zip([0] + cuts, cuts + [n])]

    pairs: set[tuple[str, str]] = set()
    for group in groups:
        for i, a in enumerate(group):
            pairs.add((a, group[(i + 1) % len(group)]))
        for a in group:
            for b in group:
                if rng.random() < 0.5:
                    pairs.add((a, b))

    tmc = tmc_from_blocks(symbols, sorted(pairs))
    weights = {block: rng.randint(1, max_weight) for block in sorted(pairs)}
    raw = [rng.randint(1, max_weight) for _ in groups]
    component_weights = [Fraction(v, sum(raw)) for v in raw]
    return chain_on_tmc(tmc, weights=weights, component_weights=component_weights)
