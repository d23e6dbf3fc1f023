# shift_core.py
"""
Sofic Shift Presentations

PURPOSE:
Representation, parsing, normalisation and language-level operations for
sofic shifts given by labelled-graph presentations. A presentation is a
finite directed graph whose edges carry symbols; the shift it presents is
the set of label sequences of bi-infinite walks.

DESIGN PRINCIPLES:
- Presentations are immutable values. States, symbols and edges are kept in
  sorted order so that every enumeration, witness and report is
  reproducible byte-for-byte.
- Analysis always runs on an ESSENTIAL presentation (every state on a
  bi-infinite walk), where finite path labels coincide with B(X).
  `ensure_essential` trims on demand.
- Every exponential construction (word enumeration, subset construction)
  is bounded by a `Limits` cap and raises ResourceCapExceeded past it.

INPUT FORMATS (UTF-8 JSON, discriminated by "format"):
    soficlab-presentation-v1   {"alphabet", "states", "edges": [{"from","to","label"}]}
    soficlab-tmc-v1            {"alphabet", "allowed_2blocks": [[a, b], ...]}
    soficlab-sft-v1            {"alphabet", "forbidden_words": ["11", ...]}

NON-GOALS:
- General regular-language operations beyond products and equality
- Minimal (Fischer) covers
"""

import itertools
import json
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Iterable, NamedTuple, Optional, Sequence, Union

import networkx as nx
import numpy as np

from config import DEFAULT_LIMITS, Limits
from errors import EmptyShift, MalformedPresentation, ResourceCapExceeded
from utils import (
    ROUTE_LABEL_SEPARATOR,
    ROUTE_SEPARATOR,
    Word,
    block_name,
    pair_name,
    parse_word as _parse_text,
    reserved_in,
)

FORMAT_PRESENTATION = "soficlab-presentation-v1"
FORMAT_TMC = "soficlab-tmc-v1"
FORMAT_SFT = "soficlab-sft-v1"
SUPPORTED_FORMATS = (FORMAT_PRESENTATION, FORMAT_TMC, FORMAT_SFT)


# --------------------------------------------------
# Data structures
# --------------------------------------------------

class Edge(NamedTuple):
    src: str
    dst: str
    label: str


@dataclass(frozen=True)
class Presentation:
    """
    Labelled-graph presentation of a sofic shift.

    `recoding` maps each symbol of a higher-block recoding back to the
    block of original symbols it stands for; it is empty for presentations
    given directly.
    """
    alphabet: tuple[str, ...]
    states: tuple[str, ...]
    edges: tuple[Edge, ...]
    essential: bool = False
    recoding: tuple[tuple[str, Word], ...] = ()

    @classmethod
    def build(
        cls,
        alphabet: Iterable[str],
        states: Iterable[str],
        edges: Iterable[tuple[str, str, str]],
        essential: bool = False,
        recoding: Iterable[tuple[str, Word]] = (),
    ) -> "Presentation":
        """Validate and canonicalise. Raises MalformedPresentation."""
        alphabet = list(alphabet)
        states = list(states)
        if not alphabet:
            raise MalformedPresentation("alphabet is empty", "alphabet")
        if len(set(alphabet)) != len(alphabet):
            raise MalformedPresentation("alphabet has duplicate symbols", "alphabet")
        if len(set(states)) != len(states):
            raise MalformedPresentation("duplicate state ids", "states")
        symbol_set, state_set = set(alphabet), set(states)
        seen: set[Edge] = set()
        for i, raw in enumerate(edges):
            edge = Edge(*raw)
            if edge.src not in state_set:
                raise MalformedPresentation(f"unknown state {edge.src!r}", f"edges[{i}].from")
            if edge.dst not in state_set:
                raise MalformedPresentation(f"unknown state {edge.dst!r}", f"edges[{i}].to")
            if edge.label not in symbol_set:
                raise MalformedPresentation(f"unknown symbol {edge.label!r}", f"edges[{i}].label")
            if edge in seen:
                raise MalformedPresentation(f"duplicate edge {tuple(edge)}", f"edges[{i}]")
            seen.add(edge)
        return cls(
            alphabet=tuple(sorted(alphabet)),
            states=tuple(sorted(states)),
            edges=tuple(sorted(seen)),
            essential=essential,
            recoding=tuple(sorted(recoding)),
        )

    # Derived indexes. cached_property writes straight into __dict__,
    # which a frozen dataclass still permits.

    @cached_property
    def state_index(self) -> dict[str, int]:
        return {q: i for i, q in enumerate(self.states)}

    @cached_property
    def label_matrices(self) -> dict[str, np.ndarray]:
        """Boolean |Q|x|Q| adjacency matrix per symbol."""
        n = len(self.states)
        mats = {a: np.zeros((n, n), dtype=bool) for a in self.alphabet}
        for e in self.edges:
            mats[e.label][self.state_index[e.src], self.state_index[e.dst]] = True
        for m in mats.values():
            m.setflags(write=False)
        return mats

    @cached_property
    def successors(self) -> dict[tuple[int, str], frozenset[int]]:
        out: dict[tuple[int, str], set[int]] = {}
        for e in self.edges:
            out.setdefault((self.state_index[e.src], e.label), set()).add(self.state_index[e.dst])
        return {k: frozenset(v) for k, v in out.items()}

    @cached_property
    def graph(self) -> nx.MultiDiGraph:
        g = nx.MultiDiGraph()
        g.add_nodes_from(self.states)
        for e in self.edges:
            g.add_edge(e.src, e.dst, label=e.label)
        return g

    @cached_property
    def reachability(self) -> np.ndarray:
        """Reflexive-transitive closure of the underlying graph, indexed like `states`."""
        n = len(self.states)
        reach = np.eye(n, dtype=bool)
        for src, targets in nx.all_pairs_shortest_path_length(nx.DiGraph(self.graph)):
            for dst in targets:
                reach[self.state_index[src], self.state_index[dst]] = True
        reach.setflags(write=False)
        return reach

    @property
    def used_symbols(self) -> tuple[str, ...]:
        return tuple(sorted({e.label for e in self.edges}))

    def step(self, frontier: frozenset[int], symbol: str) -> frozenset[int]:
        """States reachable from `frontier` by one edge labelled `symbol`."""
        out: set[int] = set()
        for q in frontier:
            out |= self.successors.get((q, symbol), frozenset())
        return frozenset(out)

    def all_states(self) -> frozenset[int]:
        return frozenset(range(len(self.states)))


@dataclass(frozen=True)
class LanguageSample:
    """Exhaustive B_n(X), sorted lexicographically."""
    n: int
    blocks: tuple[Word, ...]

    @cached_property
    def block_set(self) -> frozenset[Word]:
        return frozenset(self.blocks)

    def __contains__(self, word: object) -> bool:
        return word in self.block_set

    def __len__(self) -> int:
        return len(self.blocks)


@dataclass(frozen=True)
class SubsetAutomaton:
    """
    Accessible part of the subset construction seeded at a start set.

    subsets[0] is the start set; `delta` omits transitions into the
    empty set (the dead state).
    """
    subsets: tuple[frozenset[int], ...]
    delta: dict[tuple[int, str], int]
    alphabet: tuple[str, ...]


# --------------------------------------------------
# Loading
# --------------------------------------------------

def _require(doc: dict, key: str, kind: type, path: str) -> Any:
    if key not in doc:
        raise MalformedPresentation(f"missing field {key!r}", path or "$")
    value = doc[key]
    if not isinstance(value, kind):
        raise MalformedPresentation(
            f"field {key!r} must be a {kind.__name__}", f"{path}{key}" if path else key
        )
    return value


def _string_list(values: list, path: str) -> list[str]:
    """Symbol or state ids: strings free of the separators used in derived names."""
    for i, v in enumerate(values):
        if not isinstance(v, str):
            raise MalformedPresentation("expected a string", f"{path}[{i}]")
        bad = reserved_in(v)
        if bad is not None:
            raise MalformedPresentation(f"id {v!r} contains reserved character {bad!r}", f"{path}[{i}]")
    return list(values)


def load_presentation(document: Union[str, bytes, dict], limits: Limits = DEFAULT_LIMITS) -> Presentation:
    """
    Build a validated, untrimmed Presentation from presentation-file content.

    SFT documents are recoded through recode_to_tmc; TMC documents expand
    to their vertex-shift labelled graph.
    """
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as e:
            raise MalformedPresentation(f"invalid JSON: {e.msg}", f"line {e.lineno}, column {e.colno}")
        except UnicodeDecodeError as e:
            raise MalformedPresentation(f"input is not UTF-8: {e.reason}", f"byte {e.start}")
    if not isinstance(document, dict):
        raise MalformedPresentation("top-level value must be an object", "$")

    fmt = document.get("format")
    if fmt not in SUPPORTED_FORMATS:
        raise MalformedPresentation(
            f"unknown format {fmt!r}; supported: {', '.join(SUPPORTED_FORMATS)}", "format"
        )
    alphabet = _string_list(_require(document, "alphabet", list, ""), "alphabet")

    if fmt == FORMAT_PRESENTATION:
        states = _string_list(_require(document, "states", list, ""), "states")
        raw_edges = _require(document, "edges", list, "")
        edges = []
        for i, e in enumerate(raw_edges):
            if not isinstance(e, dict):
                raise MalformedPresentation("edge must be an object", f"edges[{i}]")
            edges.append((
                _require(e, "from", str, f"edges[{i}]."),
                _require(e, "to", str, f"edges[{i}]."),
                _require(e, "label", str, f"edges[{i}]."),
            ))
        return Presentation.build(alphabet, states, edges)

    if fmt == FORMAT_TMC:
        raw_blocks = _require(document, "allowed_2blocks", list, "")
        pairs = []
        for i, b in enumerate(raw_blocks):
            if not (isinstance(b, list) and len(b) == 2 and all(isinstance(s, str) for s in b)):
                raise MalformedPresentation("2-block must be a pair of symbols", f"allowed_2blocks[{i}]")
            pairs.append((b[0], b[1]))
        if len(set(pairs)) != len(pairs):
            raise MalformedPresentation("duplicate 2-block", "allowed_2blocks")
        return tmc_from_blocks(alphabet, pairs)

    raw_words = _require(document, "forbidden_words", list, "")
    words = []
    for i, w in enumerate(raw_words):
        if not isinstance(w, (str, list)):
            raise MalformedPresentation("forbidden word must be a string or list", f"forbidden_words[{i}]")
        words.append(_parse_text(w, alphabet))
    return recode_to_tmc(alphabet, words, limits)


def load_presentation_file(path: str, limits: Limits = DEFAULT_LIMITS) -> Presentation:
    with open(path, "rb") as f:
        return load_presentation(f.read(), limits)


def presentation_to_document(p: Presentation) -> dict:
    """Labelled-graph document for `p`; load_presentation(doc) == p up to trimming flags."""
    return {
        "format": FORMAT_PRESENTATION,
        "alphabet": list(p.alphabet),
        "states": list(p.states),
        "edges": [{"from": e.src, "to": e.dst, "label": e.label} for e in p.edges],
    }


def parse_word(p: Presentation, text: Union[str, Sequence[str]]) -> Word:
    return _parse_text(text, p.alphabet)


# --------------------------------------------------
# Constructions
# --------------------------------------------------

def tmc_from_blocks(alphabet: Iterable[str], allowed: Iterable[tuple[str, str]]) -> Presentation:
    """Vertex shift: states are symbols, edge s->t labelled t for each allowed block st."""
    alphabet = list(alphabet)
    symbols = set(alphabet)
    edges = []
    for i, (a, b) in enumerate(allowed):
        for s in (a, b):
            if s not in symbols:
                raise MalformedPresentation(f"unknown symbol {s!r}", f"allowed_2blocks[{i}]")
        edges.append((a, b, b))
    return Presentation.build(alphabet, alphabet, edges)


def _avoids(word: Word, forbidden: list[Word]) -> bool:
    n = len(word)
    for f in forbidden:
        k = len(f)
        for i in range(n - k + 1):
            if word[i:i + k] == f:
                return False
    return True


def recode_to_tmc(
    alphabet: Iterable[str],
    forbidden_words: Iterable[Sequence[str]],
    limits: Limits = DEFAULT_LIMITS,
) -> Presentation:
    """
    Higher-block recoding of an SFT into a vertex shift.

    With k + 1 the longest forbidden word (k >= 1), states are the allowed
    k-blocks and s -> t is an edge when s and t overlap in k - 1 symbols and
    the (k+1)-block they span avoids every forbidden word. Each edge is
    labelled by its destination block. For k = 1 the symbols keep their
    original names.
    """
    alphabet = sorted(alphabet)
    if not alphabet:
        raise MalformedPresentation("alphabet is empty", "alphabet")
    symbols = set(alphabet)
    forbidden = []
    for i, w in enumerate(forbidden_words):
        w = tuple(w)
        if not w:
            raise MalformedPresentation("forbidden word is empty", f"forbidden_words[{i}]")
        for s in w:
            if s not in symbols:
                raise MalformedPresentation(f"unknown symbol {s!r}", f"forbidden_words[{i}]")
        forbidden.append(w)

    k = max(1, max((len(w) for w in forbidden), default=1) - 1)
    if len(alphabet) ** k > limits.max_enumeration:
        raise ResourceCapExceeded("enumeration", limits.max_enumeration, len(alphabet) ** k)

    allowed = [b for b in itertools.product(alphabet, repeat=k) if _avoids(b, forbidden)]
    if not allowed:
        raise EmptyShift("no allowed blocks remain after forbidding the given words")

    names = {b: block_name(b, alphabet) for b in allowed}
    allowed_set = set(allowed)
    edges = []
    for b in allowed:
        for a in alphabet:
            nxt = b[1:] + (a,)
            if nxt in allowed_set and _avoids(b + (a,), forbidden):
                edges.append((names[b], names[nxt], names[nxt]))

    recoding = [(names[b], b) for b in allowed] if k > 1 else []
    return Presentation.build(
        alphabet=sorted(names.values()),
        states=sorted(names.values()),
        edges=edges,
        recoding=recoding,
    )


def higher_block(p: Presentation, k: int, limits: Limits = DEFAULT_LIMITS) -> Presentation:
    """
    k-th higher block presentation of the shift presented by `p`.

    States are paths of k - 1 edges, edges are paths of k edges labelled by
    the k-block they read. Length-n words of the result correspond one to
    one with length-(n + k - 1) words of the original shift.
    """
    if k < 1:
        raise ValueError("block length must be >= 1")
    p = ensure_essential(p)
    if k == 1:
        return p

    out_edges: dict[str, list[Edge]] = {}
    for e in p.edges:
        out_edges.setdefault(e.src, []).append(e)

    def paths(length: int) -> list[tuple[Edge, ...]]:
        current: list[tuple[Edge, ...]] = [(e,) for e in p.edges]
        for _ in range(length - 1):
            current = [path + (e,) for path in current for e in out_edges.get(path[-1].dst, [])]
            if len(current) > limits.max_enumeration:
                raise ResourceCapExceeded("enumeration", limits.max_enumeration, len(current))
        return current

    def path_state(path: tuple[Edge, ...]) -> str:
        route = ROUTE_SEPARATOR.join([path[0].src] + [e.dst for e in path])
        return route + ROUTE_LABEL_SEPARATOR + block_name(tuple(e.label for e in path), p.alphabet)

    state_names = {path: path_state(path) for path in paths(k - 1)}

    edges, recoding = [], {}
    for path in paths(k):
        label_block = tuple(e.label for e in path)
        label = block_name(label_block, p.alphabet)
        recoding[label] = label_block
        edges.append((state_names[path[:-1]], state_names[path[1:]], label))
    return Presentation.build(
        alphabet=sorted(recoding),
        states=sorted(state_names.values()),
        edges=edges,
        recoding=recoding.items(),
    )


def trim_essential(p: Presentation) -> Presentation:
    """
    Iteratively delete states without incoming or outgoing edges.

    The language of bi-infinite walks is unchanged. The alphabet is kept
    as declared even if some symbols no longer label any edge.
    """
    alive = set(p.states)
    edges = list(p.edges)
    while True:
        has_out = {e.src for e in edges}
        has_in = {e.dst for e in edges}
        dead = {q for q in alive if q not in has_out or q not in has_in}
        if not dead:
            break
        alive -= dead
        edges = [e for e in edges if e.src in alive and e.dst in alive]
    if not alive:
        raise EmptyShift("presentation has no bi-infinite walk")
    return Presentation.build(p.alphabet, alive, edges, essential=True, recoding=p.recoding)


def ensure_essential(p: Presentation) -> Presentation:
    return p if p.essential else trim_essential(p)


def reverse(p: Presentation) -> Presentation:
    """Edge-reversed presentation: it presents the reversed words of X."""
    return Presentation.build(
        p.alphabet,
        p.states,
        [(e.dst, e.src, e.label) for e in p.edges],
        essential=p.essential,
        recoding=[(name, tuple(reversed(block))) for name, block in p.recoding],
    )


def product(p: Presentation, q: Presentation) -> Presentation:
    """Presentation of X_p x X_q over paired symbols, essential-trimmed."""
    p, q = ensure_essential(p), ensure_essential(q)
    alphabet = [pair_name(a, b) for a in p.alphabet for b in q.alphabet]
    states = [pair_name(s, t) for s in p.states for t in q.states]
    edges = [
        (pair_name(e.src, f.src), pair_name(e.dst, f.dst), pair_name(e.label, f.label))
        for e in p.edges
        for f in q.edges
    ]
    return trim_essential(Presentation.build(alphabet, states, edges))


def disjoint_union(p: Presentation, q: Presentation) -> Presentation:
    """Union of two presentations with state ids tagged by side."""
    states = [pair_name("L", s) for s in p.states] + [pair_name("R", s) for s in q.states]
    edges = [(pair_name("L", e.src), pair_name("L", e.dst), e.label) for e in p.edges]
    edges += [(pair_name("R", e.src), pair_name("R", e.dst), e.label) for e in q.edges]
    return Presentation.build(sorted(set(p.alphabet) | set(q.alphabet)), states, edges)


# --------------------------------------------------
# Language queries
# --------------------------------------------------

def contains_word(p: Presentation, w: Sequence[str]) -> bool:
    """True iff some path of the essential presentation reads `w` (w in B(X))."""
    p = ensure_essential(p)
    frontier = p.all_states()
    for a in w:
        frontier = p.step(frontier, a)
        if not frontier:
            return False
    return True


def blocks(p: Presentation, n: int, limits: Limits = DEFAULT_LIMITS) -> LanguageSample:
    """Exhaustive, sorted B_n(X)."""
    if n < 1:
        raise ValueError("block length must be >= 1")
    p = ensure_essential(p)
    if len(p.alphabet) ** n > limits.max_enumeration:
        raise ResourceCapExceeded("enumeration", limits.max_enumeration, len(p.alphabet) ** n)
    level: list[tuple[Word, frozenset[int]]] = [((), p.all_states())]
    for _ in range(n):
        nxt = []
        for word, frontier in level:
            for a in p.alphabet:
                reached = p.step(frontier, a)
                if reached:
                    nxt.append((word + (a,), reached))
        level = nxt
    return LanguageSample(n=n, blocks=tuple(word for word, _ in level))


def determinize(
    p: Presentation,
    start: Optional[frozenset[int]] = None,
    limits: Limits = DEFAULT_LIMITS,
) -> SubsetAutomaton:
    """Subset construction from `start` (default: all states), BFS order."""
    start = p.all_states() if start is None else start
    index = {start: 0}
    subsets = [start]
    delta: dict[tuple[int, str], int] = {}
    queue = deque([start])
    while queue:
        current = queue.popleft()
        for a in p.alphabet:
            nxt = p.step(current, a)
            if not nxt:
                continue
            if nxt not in index:
                if len(subsets) >= limits.max_subset_states:
                    raise ResourceCapExceeded("subset-states", limits.max_subset_states)
                index[nxt] = len(subsets)
                subsets.append(nxt)
                queue.append(nxt)
            delta[(index[current], a)] = index[nxt]
    return SubsetAutomaton(subsets=tuple(subsets), delta=delta, alphabet=p.alphabet)


def language_difference(p: Presentation, q: Presentation, limits: Limits = DEFAULT_LIMITS) -> Optional[Word]:
    """
    Shortest, then lexicographically least, word in exactly one of B(X_p), B(X_q).

    Breadth-first search over pairs of subsets; a pair where exactly one
    side is empty exposes a difference. None means the languages agree.
    """
    p, q = ensure_essential(p), ensure_essential(q)
    alphabet = sorted(set(p.alphabet) | set(q.alphabet))
    start = (p.all_states(), q.all_states())
    seen = {start}
    queue: deque[tuple[tuple[frozenset[int], frozenset[int]], Word]] = deque([(start, ())])
    while queue:
        (left, right), word = queue.popleft()
        for a in alphabet:
            nl, nr = p.step(left, a), q.step(right, a)
            if bool(nl) != bool(nr):
                return word + (a,)
            if not nl or (nl, nr) in seen:
                continue
            if len(seen) >= limits.max_subset_states:
                raise ResourceCapExceeded("subset-states", limits.max_subset_states)
            seen.add((nl, nr))
            queue.append(((nl, nr), word + (a,)))
    return None


def language_equal(p: Presentation, q: Presentation, limits: Limits = DEFAULT_LIMITS) -> bool:
    """True iff B(X_p) = B(X_q)."""
    return language_difference(p, q, limits) is None
