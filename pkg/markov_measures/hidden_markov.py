# markov_measures/hidden_markov.py

from typing import Mapping

import numpy as np

from errors import InvalidWeights
from markov_measures.markov_chain import RationalMarkovChain
from markov_measures.measure_base import ShiftMeasure


class HiddenMarkovMeasure(ShiftMeasure):
    """
    Push-forward of a stationary chain under a 1-block labelling.

    Hidden states carry the chain; a point of the shift is the label
    sequence of a chain path. Several hidden states may share a label,
    which is how sofic supports that are not TMCs arise.
    """

    def __init__(self, chain: RationalMarkovChain, labels: Mapping[str, str]):
        missing = [h for h in chain.states if h not in labels]
        if missing:
            raise InvalidWeights(f"hidden state {missing[0]!r} has no label")
        extra = [h for h in labels if h not in chain.states]
        if extra:
            raise InvalidWeights(f"label given for unknown hidden state {extra[0]!r}")
        self.chain = chain
        self.labels = {h: str(labels[h]) for h in chain.states}

    @property
    def hidden_states(self) -> tuple[str, ...]:
        return self.chain.states

    @property
    def transitions(self) -> np.ndarray:
        return self.chain.transitions

    @property
    def stationary(self) -> np.ndarray:
        return self.chain.stationary

    def label_of(self, state: str) -> str:
        return self.labels[state]

    def __repr__(self) -> str:
        return f"HiddenMarkovMeasure(hidden={self.chain.states}, alphabet={self.alphabet})"
