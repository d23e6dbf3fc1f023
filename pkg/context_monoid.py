# context_monoid.py
"""
Transition Monoid and Context Sets

PURPOSE:
Computes the finite transition monoid of an essential presentation, the
boundary families behind follower / predecessor / context sets, and a
canonical ContextSignature per monoid element so that C(w) = C(u) becomes an
exact, finite equality test.

REPRESENTATION:
- M_w is the boolean |Q|x|Q| relation "some w-labelled path runs p -> q".
  The zero matrix stands for every word outside B(X) (the star element).
- End(x)   = column support of M_x   (states where an x-path can end)
- Start(y) = row support of M_y      (states where a y-path can start)
  E and S collect these over nonempty words, plus Q for the empty word.
- Membership of (x, y) in C(w) depends only on (End(x), Start(y)):
      x w y in B(X)  iff  exists p in End(x), q in Start(y) with M_w[p][q]
  so the table over E x S determines C(w) completely.

Context pairs never use empty x or y. The Q row/column of a signature is
the union of the other rows/columns on an essential presentation, so it
does not affect equality.

NON-GOALS:
- Green's relations, syntactic-monoid minimisation
- Symbolic (BDD) matrices
"""

import sys
from collections import deque
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from config import DEFAULT_LIMITS, Limits
from errors import NotInLanguage, ResourceCapExceeded, TheoremInconsistency
from shift_core import (
    Presentation,
    blocks,
    contains_word,
    determinize,
    ensure_essential,
    reverse,
)
from utils import Word, format_word


# --------------------------------------------------
# Relation matrices
# --------------------------------------------------

class RelationMatrix:
    """Read-only boolean relation on the states of a presentation."""

    __slots__ = ("bits", "_key")

    def __init__(self, bits: np.ndarray):
        bits = np.array(bits, dtype=bool)
        bits.setflags(write=False)
        self.bits = bits
        self._key = (bits.shape[0], bits.tobytes())

    @classmethod
    def identity(cls, dim: int) -> "RelationMatrix":
        return cls(np.eye(dim, dtype=bool))

    @classmethod
    def zero(cls, dim: int) -> "RelationMatrix":
        return cls(np.zeros((dim, dim), dtype=bool))

    @property
    def dim(self) -> int:
        return self.bits.shape[0]

    @property
    def is_zero(self) -> bool:
        return not self.bits.any()

    def __matmul__(self, other: "RelationMatrix") -> "RelationMatrix":
        # int64 so that path counts cannot wrap around to zero
        return RelationMatrix((self.bits.astype(np.int64) @ other.bits.astype(np.int64)) > 0)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, RelationMatrix) and self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        rows = ["".join("1" if b else "0" for b in row) for row in self.bits]
        return f"RelationMatrix({'/'.join(rows)})"

    def end_set(self) -> frozenset[int]:
        return frozenset(np.flatnonzero(self.bits.any(axis=0)).tolist())

    def start_set(self) -> frozenset[int]:
        return frozenset(np.flatnonzero(self.bits.any(axis=1)).tolist())


def relation_of_word(p: Presentation, w: Sequence[str]) -> RelationMatrix:
    """Boolean product of generator matrices along w; identity for the empty word."""
    p = ensure_essential(p)
    n = len(p.states)
    result = np.eye(n, dtype=np.int64)
    for a in w:
        gen = p.label_matrices.get(a)
        if gen is None:
            return RelationMatrix.zero(n)
        result = ((result @ gen.astype(np.int64)) > 0).astype(np.int64)
    return RelationMatrix(result > 0)


# --------------------------------------------------
# Data structures
# --------------------------------------------------

STAR = 0


@dataclass
class TransitionMonoid:
    """
    Relations M_w of the nonempty words, plus the star element at index 0.

    Elements are stored in the order their shortlex-least witness words
    appear, so `witnesses[i]` is the shortest, lexicographically least word
    with relation `elements[i]`. The star's witness is the least word
    outside B(X), or None when every word belongs to B(X).
    """
    presentation: Presentation
    elements: list[RelationMatrix]
    witnesses: list[Optional[Word]]
    generators: dict[str, int]
    index: dict[RelationMatrix, int]
    _products: dict[tuple[int, int], int] = field(default_factory=dict, repr=False)

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def nonzero(self) -> range:
        return range(1, len(self.elements))

    def element_of(self, w: Sequence[str]) -> int:
        """Index of M_w; star for words outside B(X)."""
        current: Optional[int] = None
        for a in w:
            g = self.generators.get(a, STAR)
            current = g if current is None else self.multiply(current, g)
            if current == STAR:
                return STAR
        if current is None:
            raise ValueError("the empty word has no element (identity is not stored)")
        return current

    def multiply(self, i: int, j: int) -> int:
        """Product of two elements; closed by construction."""
        if i == STAR or j == STAR:
            return STAR
        key = (i, j)
        cached = self._products.get(key)
        if cached is None:
            prod = self.elements[i] @ self.elements[j]
            cached = STAR if prod.is_zero else self.index[prod]
            self._products[key] = cached
        return cached


@dataclass(frozen=True)
class FamilyMember:
    states: frozenset[int]
    witness: Word                      # shortest word, empty for Q
    nonempty_witness: Optional[Word]   # shortest nonempty word, if any


@dataclass(frozen=True)
class BoundaryFamilies:
    end_sets: tuple[FamilyMember, ...]
    start_sets: tuple[FamilyMember, ...]

    @property
    def realized_end_sets(self) -> tuple[FamilyMember, ...]:
        """Members realised by a nonempty word."""
        return tuple(m for m in self.end_sets if m.nonempty_witness is not None)

    @property
    def realized_start_sets(self) -> tuple[FamilyMember, ...]:
        return tuple(m for m in self.start_sets if m.nonempty_witness is not None)


@dataclass(frozen=True)
class ContextSignature:
    """table[i][j] = exists p in end_sets[i], q in start_sets[j] with M[p][q]."""
    shape: tuple[int, int]
    bits: bytes

    def table(self) -> np.ndarray:
        return np.frombuffer(self.bits, dtype=bool).reshape(self.shape)

    def holds(self, i: int, j: int) -> bool:
        return bool(self.table()[i, j])

    @property
    def is_empty(self) -> bool:
        return not any(self.bits)


@dataclass(frozen=True)
class MonoidStats:
    follower_count: int
    predecessor_count: int
    context_count: int
    monoid_size: int
    end_family_size: int
    start_family_size: int


# --------------------------------------------------
# Monoid construction
# --------------------------------------------------

def build_monoid(
    p: Presentation,
    limits: Limits = DEFAULT_LIMITS,
    verbose: bool = False,
) -> tuple[TransitionMonoid, BoundaryFamilies]:
    """
    Worklist closure of the generator matrices under right multiplication.

    Breadth-first in shortlex order: each element's stored witness is its
    shortlex-least word, and the first element of the queue to produce a
    new relation is the one with the least witness.
    """
    p = ensure_essential(p)
    n = len(p.states)
    zero = RelationMatrix.zero(n)
    elements: list[RelationMatrix] = [zero]
    witnesses: list[Optional[Word]] = [None]
    index: dict[RelationMatrix, int] = {zero: STAR}
    gens = {a: RelationMatrix(p.label_matrices[a]) for a in p.alphabet}

    def admit(matrix: RelationMatrix, word: Word) -> Optional[int]:
        if matrix in index:
            if matrix.is_zero and witnesses[STAR] is None:
                witnesses[STAR] = word
            return None
        if len(elements) >= limits.max_monoid:
            raise ResourceCapExceeded("monoid", limits.max_monoid)
        index[matrix] = len(elements)
        elements.append(matrix)
        witnesses.append(word)
        return index[matrix]

    queue: deque[int] = deque()
    for a in p.alphabet:
        i = admit(gens[a], (a,))
        if i is not None:
            queue.append(i)
    while queue:
        i = queue.popleft()
        for a in p.alphabet:
            j = admit(elements[i] @ gens[a], witnesses[i] + (a,))
            if j is not None:
                queue.append(j)

    monoid = TransitionMonoid(
        presentation=p,
        elements=elements,
        witnesses=witnesses,
        generators={a: index[g] for a, g in gens.items()},
        index=index,
    )
    families = _boundary_families(monoid)
    if verbose:
        print(
            f"[Monoid] {len(elements)} elements (incl. star), "
            f"|E|={len(families.end_sets)}, |S|={len(families.start_sets)}",
            file=sys.stderr,
        )
    return monoid, families


def _family(monoid: TransitionMonoid, support) -> tuple[FamilyMember, ...]:
    n = len(monoid.presentation.states)
    everything = frozenset(range(n))
    first_nonempty: dict[frozenset[int], Word] = {}
    for i in monoid.nonzero:
        s = support(monoid.elements[i])
        if s not in first_nonempty:
            first_nonempty[s] = monoid.witnesses[i]
    members = [FamilyMember(everything, (), first_nonempty.get(everything))]
    members += [
        FamilyMember(s, w, w) for s, w in first_nonempty.items() if s != everything
    ]
    return tuple(members)


def _boundary_families(monoid: TransitionMonoid) -> BoundaryFamilies:
    return BoundaryFamilies(
        end_sets=_family(monoid, RelationMatrix.end_set),
        start_sets=_family(monoid, RelationMatrix.start_set),
    )


def _indicator(members: tuple[FamilyMember, ...], n: int) -> np.ndarray:
    out = np.zeros((len(members), n), dtype=np.int64)
    for i, m in enumerate(members):
        out[i, sorted(m.states)] = 1
    return out


def context_signature(
    monoid: TransitionMonoid,
    families: BoundaryFamilies,
    matrix: Union[RelationMatrix, int],
) -> ContextSignature:
    """Canonical form of C(w) for the word(s) with relation `matrix`."""
    if isinstance(matrix, int):
        matrix = monoid.elements[matrix]
    n = len(monoid.presentation.states)
    ends = _indicator(families.end_sets, n)
    starts = _indicator(families.start_sets, n)
    table = (ends @ matrix.bits.astype(np.int64) @ starts.T) > 0
    return ContextSignature(shape=table.shape, bits=table.tobytes())


def signature_table(monoid: TransitionMonoid, families: BoundaryFamilies) -> list[ContextSignature]:
    """Signature of every element, aligned with monoid.elements."""
    return [context_signature(monoid, families, m) for m in monoid.elements]


# --------------------------------------------------
# Context comparisons
# --------------------------------------------------

def _require_in_language(p: Presentation, w: Sequence[str]) -> None:
    if not w or not contains_word(p, w):
        raise NotInLanguage(f"word {format_word(w, p.alphabet)!r} is not in B(X)")


def contexts_equal(
    p: Presentation,
    w: Sequence[str],
    u: Sequence[str],
    built: Optional[tuple[TransitionMonoid, BoundaryFamilies]] = None,
    limits: Limits = DEFAULT_LIMITS,
) -> bool:
    """True iff C(w) = C(u), by signature equality."""
    p = ensure_essential(p)
    _require_in_language(p, w)
    _require_in_language(p, u)
    monoid, families = built or build_monoid(p, limits)
    return (
        context_signature(monoid, families, relation_of_word(p, w))
        == context_signature(monoid, families, relation_of_word(p, u))
    )


def bounded_context(
    p: Presentation,
    w: Sequence[str],
    m: int,
    limits: Limits = DEFAULT_LIMITS,
) -> frozenset[tuple[Word, Word]]:
    """
    C_m(w): every (x, y) with 1 <= |x|, |y| <= m and xwy in B(X).

    Plain enumeration with membership tests; this is the oracle the
    signature comparison is checked against.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    p = ensure_essential(p)
    _require_in_language(p, w)
    sides: list[Word] = []
    for length in range(1, m + 1):
        sides.extend(blocks(p, length, limits).blocks)
    if len(sides) ** 2 > limits.max_enumeration:
        raise ResourceCapExceeded("enumeration", limits.max_enumeration, len(sides) ** 2)
    w = tuple(w)
    return frozenset((x, y) for x in sides for y in sides if contains_word(p, x + w + y))


def _prefix_frontiers(p: Presentation, m: int) -> list[tuple[frozenset[int], Word]]:
    """Distinct End(x) for 1 <= |x| <= m with the shortlex-least x reaching each."""
    seen: dict[frozenset[int], Word] = {}
    level = [(p.all_states(), ())]
    for _ in range(m):
        nxt = []
        for frontier, word in level:
            for a in p.alphabet:
                reached = p.step(frontier, a)
                if reached and reached not in seen:
                    seen[reached] = word + (a,)
                    nxt.append((reached, word + (a,)))
        level = nxt
    return sorted(((s, x) for s, x in seen.items()), key=lambda item: (len(item[1]), item[1]))


def _run(p: Presentation, frontier: frozenset[int], w: Sequence[str]) -> frozenset[int]:
    for a in w:
        if not frontier:
            break
        frontier = p.step(frontier, a)
    return frontier


def bounded_contexts_agree(
    p: Presentation,
    w: Sequence[str],
    u: Sequence[str],
    m: int,
    limits: Limits = DEFAULT_LIMITS,
) -> Optional[tuple[Word, Word]]:
    """
    Decide C_m(w) = C_m(u) without listing the pairs.

    Left contexts are grouped by End(x); for each group a breadth-first
    search over pairs of state sets looks for a right context y, |y| <= m,
    accepted after exactly one of w, u. Returns None when the bounded
    context sets agree, otherwise a distinguishing (x, y) with x least in
    shortlex order and y shortest for that x.
    """
    p = ensure_essential(p)
    _require_in_language(p, w)
    _require_in_language(p, u)
    searched: dict[tuple[frozenset[int], frozenset[int]], Optional[Word]] = {}
    for end_set, x in _prefix_frontiers(p, m):
        start = (_run(p, end_set, w), _run(p, end_set, u))
        if start not in searched:
            searched[start] = _distinguishing_suffix(p, start, m, limits)
        y = searched[start]
        if y is not None:
            return x, y
    return None


def _distinguishing_suffix(
    p: Presentation,
    start: tuple[frozenset[int], frozenset[int]],
    m: int,
    limits: Limits,
) -> Optional[Word]:
    seen = {start}
    level: list[tuple[tuple[frozenset[int], frozenset[int]], Word]] = [(start, ())]
    for _ in range(m):
        nxt = []
        for (left, right), y in level:
            for a in p.alphabet:
                nl, nr = p.step(left, a), p.step(right, a)
                if bool(nl) != bool(nr):
                    return y + (a,)
                if nl and (nl, nr) not in seen:
                    if len(seen) >= limits.max_subset_states:
                        raise ResourceCapExceeded("subset-states", limits.max_subset_states)
                    seen.add((nl, nr))
                    nxt.append(((nl, nr), y + (a,)))
        level = nxt
    return None


# --------------------------------------------------
# Counting
# --------------------------------------------------

def _moore_classes(automaton) -> list[int]:
    """
    Language-equivalence classes of the subset automaton's states.

    Every live subset accepts (the language is factorial); only the
    implicit dead state rejects. Refined until stable.
    """
    n = len(automaton.subsets)
    dead = -1
    classes = [0] * n
    count = 1
    while True:
        keys = {}
        refined = []
        for s in range(n):
            key = (classes[s],) + tuple(
                classes[automaton.delta[(s, a)]] if (s, a) in automaton.delta else dead
                for a in automaton.alphabet
            )
            refined.append(keys.setdefault(key, len(keys)))
        if len(keys) == count:
            return refined
        classes, count = refined, len(keys)


def _follower_count(p: Presentation, limits: Limits) -> tuple[int, set[frozenset[int]]]:
    automaton = determinize(p, limits=limits)
    classes = _moore_classes(automaton)
    reached = set(automaton.delta.values())
    return len({classes[s] for s in reached}), {automaton.subsets[s] for s in reached}


def monoid_stats(
    p: Presentation,
    built: Optional[tuple[TransitionMonoid, BoundaryFamilies]] = None,
    limits: Limits = DEFAULT_LIMITS,
) -> MonoidStats:
    """
    |F(X)|, |P(X)|, |C(X)| and the monoid size.

    Follower sets are counted on the determinised presentation, predecessor
    sets on the determinised reversal. The count is cross-checked against
    the end-set family of the monoid.
    """
    p = ensure_essential(p)
    monoid, families = built or build_monoid(p, limits)
    follower_count, reached_ends = _follower_count(p, limits)
    predecessor_count, reached_starts = _follower_count(reverse(p), limits)

    realized_ends = {m.states for m in families.realized_end_sets}
    realized_starts = {m.states for m in families.realized_start_sets}
    if reached_ends != realized_ends or reached_starts != realized_starts:
        raise TheoremInconsistency(
            "subset construction and monoid disagree on the boundary families",
            {"subset_end_sets": sorted(map(sorted, reached_ends)),
             "monoid_end_sets": sorted(map(sorted, realized_ends)),
             "subset_start_sets": sorted(map(sorted, reached_starts)),
             "monoid_start_sets": sorted(map(sorted, realized_starts))},
        )
    if len(realized_ends) < follower_count or len(realized_starts) < predecessor_count:
        raise TheoremInconsistency(
            "fewer end/start sets than follower/predecessor sets",
            {"end_sets": len(realized_ends), "follower_count": follower_count,
             "start_sets": len(realized_starts), "predecessor_count": predecessor_count},
        )

    signatures = signature_table(monoid, families)
    context_count = len({signatures[i] for i in monoid.nonzero})
    bound = context_count_bound(follower_count, predecessor_count)
    if context_count > bound:
        raise TheoremInconsistency(
            "context count exceeds the soficity bound",
            {"context_count": context_count, "bound": bound},
        )
    return MonoidStats(
        follower_count=follower_count,
        predecessor_count=predecessor_count,
        context_count=context_count,
        monoid_size=len(monoid),
        end_family_size=len(families.end_sets),
        start_family_size=len(families.start_sets),
    )


def context_count_bound(follower_count: int, predecessor_count: int) -> int:
    """(1 + 2^|P| * |F|)^|F|: functions from follower sets to predecessor/follower data."""
    return (1 + 2 ** predecessor_count * follower_count) ** follower_count


def describe_monoid(monoid: TransitionMonoid, families: BoundaryFamilies) -> dict:
    """JSON-ready dump: element witnesses, signature ids and the E/S families."""
    p = monoid.presentation
    signatures = signature_table(monoid, families)
    signature_ids: dict[ContextSignature, int] = {}
    elements = []
    for i, (matrix, witness) in enumerate(zip(monoid.elements, monoid.witnesses)):
        sid = signature_ids.setdefault(signatures[i], len(signature_ids))
        elements.append({
            "index": i,
            "star": i == STAR,
            "witness": None if witness is None else format_word(witness, p.alphabet),
            "signature_id": sid,
            "relation": [[p.states[a], p.states[b]] for a, b in zip(*np.nonzero(matrix.bits))],
        })

    def family(members: tuple[FamilyMember, ...]) -> list[dict]:
        return [
            {
                "states": sorted(p.states[i] for i in m.states),
                "witness": format_word(m.witness, p.alphabet),
            }
            for m in members
        ]

    return {
        "element_count": len(monoid),
        "elements": elements,
        "end_sets": family(families.end_sets),
        "start_sets": family(families.start_sets),
    }
