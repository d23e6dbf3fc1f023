# markov_measures/measure_base.py

from abc import ABC, abstractmethod
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from errors import NullConditioning


def fraction_matrix(rows: Sequence[Sequence]) -> np.ndarray:
    """Object-dtype matrix of Fractions."""
    return np.array([[Fraction(v) for v in row] for row in rows], dtype=object)


def fraction_vector(values: Sequence) -> np.ndarray:
    return np.array([Fraction(v) for v in values], dtype=object)


def fraction_identity(n: int) -> np.ndarray:
    return fraction_matrix([[1 if i == j else 0 for j in range(n)] for i in range(n)])


class ShiftMeasure(ABC):
    """
    Abstract interface for exactly computable stationary shift measures.

    A measure is described by a stationary Markov chain on hidden states and
    a label per hidden state. Plain chains label every state by itself.
    Cylinder and pattern probabilities are computed here once for every
    implementation by transfer-matrix products over Fractions.
    """

    @property
    @abstractmethod
    def hidden_states(self) -> tuple[str, ...]:
        pass

    @property
    @abstractmethod
    def transitions(self) -> np.ndarray:
        """Row-stochastic matrix over hidden_states (Fractions)."""
        pass

    @property
    @abstractmethod
    def stationary(self) -> np.ndarray:
        """Stationary vector over hidden_states (Fractions)."""
        pass

    @abstractmethod
    def label_of(self, state: str) -> str:
        pass

    @property
    def alphabet(self) -> tuple[str, ...]:
        return tuple(sorted({self.label_of(h) for h in self.hidden_states}))

    def _mask(self, symbol: str) -> np.ndarray:
        return fraction_vector([1 if self.label_of(h) == symbol else 0 for h in self.hidden_states])

    def _power(self, k: int) -> np.ndarray:
        cache = self.__dict__.setdefault("_power_cache", {0: fraction_identity(len(self.hidden_states))})
        if k not in cache:
            nearest = max(j for j in cache if j <= k)
            current = cache[nearest]
            for j in range(nearest + 1, k + 1):
                current = current.dot(self.transitions)
                cache[j] = current
        return cache[k]

    def pattern_prob(self, constraints: Mapping[int, str]) -> Fraction:
        """
        mu(x_i = a_i for every i in constraints).

        The stationary vector is placed at position min(0, first constrained
        position) and pushed forward, so positions matter only through
        stationarity. Gaps between constrained coordinates are summed out by
        matrix powers.
        """
        if not constraints:
            return Fraction(1)
        positions = sorted(constraints)
        anchor = min(0, positions[0])
        v = self.stationary.dot(self._power(positions[0] - anchor)) * self._mask(constraints[positions[0]])
        previous = positions[0]
        for pos in positions[1:]:
            v = v.dot(self._power(pos - previous)) * self._mask(constraints[pos])
            previous = pos
        return sum(v, Fraction(0))

    def cylinder_prob(self, word: Sequence[str], position: int = 0) -> Fraction:
        """mu([word] placed at `position`)."""
        return self.pattern_prob({position + k: a for k, a in enumerate(word)})

    def conditional_prob(self, target: Mapping[int, str], given: Mapping[int, str]) -> Fraction:
        """mu(target | given); raises NullConditioning when mu(given) = 0."""
        denominator = self.pattern_prob(given)
        if denominator == 0:
            raise NullConditioning(f"conditioning event {dict(given)} has probability zero")
        for pos, a in target.items():
            if pos in given and given[pos] != a:
                return Fraction(0)
        joint = dict(given)
        joint.update(target)
        return self.pattern_prob(joint) / denominator
