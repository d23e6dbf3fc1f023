# classification.py
"""
Classification of Sofic Shifts

PURPOSE:
Decides, with witnesses, whether a sofic shift is a topological Markov
field (TMF), non-wandering, has dense periodic points, is irreducible, and
is a topological Markov chain (TMC). For non-wandering TMCs it computes the
irreducible decomposition with period, cyclic classes and index of
primitivity. `classify` combines everything into the five-way equivalence:

    (a) X is the support of a stationary Markov chain
    (b) X is the support of a stationary Markov random field
    (c) X is non-wandering and a TMF
    (d) X x X is non-wandering and X is a TMF
    (e) X is a finite union of irreducible TMCs on disjoint alphabets

(c), (d) and (e) are computed independently and must agree. (a) and (b)
are witnessed by constructing a chain whose support is X.

TMF DECISION MODES:
- monoid        breadth-first over lengths; the profile at length n is the
                set of (first symbol, last symbol, monoid element) triples
                of B_n(X). A profile determines the next one, so the search
                stops once a profile repeats. Two triples with the same
                first and last symbol but different context signatures
                expose a violation.
- paper-bound   enumerate words up to |C(X)|^2 and compare bounded
                contexts C_m with m = max(|P(X)|, |F(X)|). Small inputs only.
- oracle        test "uvwxy, vzx in B(X) implies uvzxy in B(X)" directly
                over all words up to a length bound.

WITNESSES:
Shortest first, then lexicographically least under sorted symbol order.
A TMF witness (w, u, x, y) has |w| = |u|, equal first and last symbols,
x w y in B(X) and x u y not in B(X). Every witness is re-validated by
direct membership tests before it is returned.
"""

import math
import sys
from dataclasses import dataclass, field
from typing import Literal, Optional, Sequence, Union

import networkx as nx
import numpy as np

from config import DEFAULT_LIMITS, Limits
from context_monoid import (
    STAR,
    BoundaryFamilies,
    MonoidStats,
    TransitionMonoid,
    _prefix_frontiers,
    bounded_contexts_agree,
    build_monoid,
    monoid_stats,
    signature_table,
)
from errors import (
    NotATmc,
    NotNonWanderingTmc,
    ResourceCapExceeded,
    TheoremInconsistency,
)
from shift_core import (
    Presentation,
    blocks,
    contains_word,
    ensure_essential,
    higher_block,
    language_difference,
    product,
    tmc_from_blocks,
    trim_essential,
)
from utils import Word, format_word

TmfMode = Literal["monoid", "paper-bound", "oracle"]
TMF_MODES = ("monoid", "paper-bound", "oracle")

Built = tuple[TransitionMonoid, BoundaryFamilies]


# --------------------------------------------------
# Data structures
# --------------------------------------------------

@dataclass(frozen=True)
class TmfWitness:
    """x w y is in B(X), x u y is not."""
    w: Word
    u: Word
    x: Word
    y: Word


@dataclass
class TmfVerdict:
    is_tmf: bool
    witness: Optional[TmfWitness]
    mode: str
    step: int = 1
    lengths_searched: int = 0
    # oracle mode only: whether the length bound reached the exactness bound
    exhaustive: bool = True
    search_length: Optional[int] = None


@dataclass
class NonWanderingVerdict:
    is_non_wandering: bool
    witness: Optional[Word]          # u with no v such that u v u is in B(X)
    periodic_dense: bool
    return_word: Optional[Word] = None   # shortest v for the least word, when non-wandering


@dataclass
class IrreducibilityVerdict:
    is_irreducible: bool
    witness: Optional[tuple[Word, Word]]   # (u, v) with no w such that u w v is in B(X)


@dataclass
class IrreducibleComponent:
    alphabet: tuple[str, ...]
    presentation: Presentation
    period: int = 1
    cyclic_classes: tuple[tuple[str, ...], ...] = ()
    primitivity_index: int = 1


@dataclass
class PatchingVerdict:
    holds: bool
    n: int
    # (interior positions C, a, b, spliced word) for the first failure
    witness: Optional[tuple[tuple[int, ...], Word, Word, Word]] = None


@dataclass
class ClassificationReport:
    sofic_stats: MonoidStats
    tmf: TmfVerdict
    nonwandering: NonWanderingVerdict
    product_nonwandering: NonWanderingVerdict
    irreducibility: IrreducibilityVerdict
    is_tmc: bool
    components: list[IrreducibleComponent] = field(default_factory=list)
    conditions: dict[str, bool] = field(default_factory=dict)
    condition_basis: dict[str, str] = field(default_factory=dict)
    consistent: bool = True
    tmc_difference: Optional[Word] = None    # word separating X from its 2-block TMC
    chain_support_verified: Optional[bool] = None
    recoding: dict[str, Word] = field(default_factory=dict)


# --------------------------------------------------
# TMF: witness helpers
# --------------------------------------------------

def _validate_witness(p: Presentation, witness: TmfWitness, mode: str) -> None:
    ok = (
        len(witness.w) == len(witness.u)
        and witness.w[0] == witness.u[0]
        and witness.w[-1] == witness.u[-1]
        and contains_word(p, witness.x + witness.w + witness.y)
        and not contains_word(p, witness.x + witness.u + witness.y)
    )
    if not ok:
        raise TheoremInconsistency(
            f"{mode} TMF witness does not validate",
            {"w": witness.w, "u": witness.u, "x": witness.x, "y": witness.y},
        )


def _separating_context(
    families: BoundaryFamilies,
    table_w: np.ndarray,
    table_u: np.ndarray,
) -> tuple[Word, Word, bool]:
    """
    Least (x, y) by (|x| + |y|, x, y) over boundary members where the two
    signature tables differ. The flag says whether the pair lies in C(w).
    """
    best = None
    for i, end in enumerate(families.end_sets):
        if end.nonempty_witness is None:
            continue
        for j, start in enumerate(families.start_sets):
            if start.nonempty_witness is None or table_w[i, j] == table_u[i, j]:
                continue
            x, y = end.nonempty_witness, start.nonempty_witness
            key = (len(x) + len(y), x, y)
            if best is None or key < best[0]:
                best = (key, x, y, bool(table_w[i, j]))
    if best is None:
        raise TheoremInconsistency("signatures differ only on the empty-word boundary members")
    return best[1], best[2], best[3]


# --------------------------------------------------
# TMF: monoid mode
# --------------------------------------------------

def _tmf_monoid(p: Presentation, built: Built, limits: Limits) -> TmfVerdict:
    monoid, families = built
    signatures = signature_table(monoid, families)

    profile: dict[tuple[str, str, int], Word] = {}
    for a in p.alphabet:
        g = monoid.generators[a]
        if g != STAR:
            profile[(a, a, g)] = (a,)

    seen: set[frozenset] = set()
    n = 1
    while True:
        key = frozenset(profile)
        if key in seen:
            return TmfVerdict(is_tmf=True, witness=None, mode="monoid", lengths_searched=n - 1)
        seen.add(key)

        pair = _profile_violation(profile, signatures)
        if pair is not None:
            (w, ew), (u, eu) = pair
            x, y, w_in = _separating_context(
                families, signatures[ew].table(), signatures[eu].table()
            )
            witness = TmfWitness(w, u, x, y) if w_in else TmfWitness(u, w, x, y)
            _validate_witness(p, witness, "monoid")
            return TmfVerdict(is_tmf=False, witness=witness, mode="monoid", lengths_searched=n)

        if n >= limits.max_profile_steps:
            raise ResourceCapExceeded("profile-steps", limits.max_profile_steps)
        nxt: dict[tuple[str, str, int], Word] = {}
        for (first, _, e), word in profile.items():
            for a in p.alphabet:
                e2 = monoid.multiply(e, monoid.generators[a])
                if e2 == STAR:
                    continue
                triple = (first, a, e2)
                candidate = word + (a,)
                if triple not in nxt or candidate < nxt[triple]:
                    nxt[triple] = candidate
        profile = nxt
        n += 1


def _profile_violation(profile, signatures):
    """Lexicographically least pair of words (w < u) whose triples clash."""
    groups: dict[tuple[str, str], list[tuple[Word, int]]] = {}
    for (first, last, e), word in profile.items():
        groups.setdefault((first, last), []).append((word, e))
    best = None
    for members in groups.values():
        members.sort()
        w, ew = members[0]
        for u, eu in members[1:]:
            if signatures[eu] != signatures[ew]:
                if best is None or (w, u) < (best[0][0], best[1][0]):
                    best = ((w, ew), (u, eu))
                break
    return best


# --------------------------------------------------
# TMF: bounded-context (paper-bound) mode
# --------------------------------------------------

def _bounded_classes(p: Presentation, depth: int):
    """
    Canonical id of f_d(T) = {y : 1 <= |y| <= d, T reads y}, memoised.

    f_d(T) is fixed by which symbols T can read and f_{d-1} of where they
    lead, so ids are interned level by level.
    """
    memo: dict[tuple[frozenset[int], int], int] = {}
    interned: dict[tuple, int] = {}

    def cls(states: frozenset[int], d: int) -> int:
        if d == 0:
            return 0
        key = (states, d)
        if key not in memo:
            parts = []
            for a in p.alphabet:
                nxt = p.step(states, a)
                parts.append(cls(nxt, d - 1) if nxt else -1)
            memo[key] = interned.setdefault((d, tuple(parts)), len(interned))
        return memo[key]

    return lambda states: cls(states, depth)


def _tmf_paper_bound(p: Presentation, built: Built, limits: Limits) -> TmfVerdict:
    stats = monoid_stats(p, built, limits)
    max_word = stats.context_count ** 2
    m = max(stats.predecessor_count, stats.follower_count)
    lefts = [frontier for frontier, _ in _prefix_frontiers(p, m)]
    classify_right = _bounded_classes(p, m)

    # each entry: word, states reading it from anywhere, runs from each left frontier
    level = [((), p.all_states(), tuple(lefts))]
    enumerated = 0
    for n in range(1, max_word + 1):
        nxt = []
        for word, frontier, runs in level:
            for a in p.alphabet:
                reached = p.step(frontier, a)
                if reached:
                    nxt.append((word + (a,), reached, tuple(p.step(r, a) for r in runs)))
        level = nxt
        enumerated += len(level)
        if enumerated > limits.max_enumeration:
            raise ResourceCapExceeded("enumeration", limits.max_enumeration, enumerated)
        if n < 3:
            continue

        # level is in lexicographic order, so the first word of each
        # (first, last) group pairs with the first word that disagrees
        best = None
        firsts: dict[tuple[str, str], tuple[Word, tuple]] = {}
        for word, _, runs in level:
            key = tuple(classify_right(r) for r in runs)
            group = (word[0], word[-1])
            if group not in firsts:
                firsts[group] = (word, key)
                continue
            head, head_key = firsts[group]
            if key != head_key and (best is None or (head, word) < best):
                best = (head, word)
        if best is not None:
            w, u = best
            xy = bounded_contexts_agree(p, w, u, m, limits)
            if xy is None:
                raise TheoremInconsistency("bounded context keys differ but contexts agree", {"w": w, "u": u})
            x, y = xy
            witness = TmfWitness(w, u, x, y) if contains_word(p, x + w + y) else TmfWitness(u, w, x, y)
            _validate_witness(p, witness, "paper-bound")
            return TmfVerdict(is_tmf=False, witness=witness, mode="paper-bound",
                              lengths_searched=n, search_length=max_word)

    # a monoid-mode violation longer than |C(X)|^2 means the length reduction stalled
    fast = _tmf_monoid(p, built, limits)
    if not fast.is_tmf:
        raise TheoremInconsistency(
            "violation exists beyond |C(X)|^2 words",
            {"bound": max_word, "witness": fast.witness},
        )
    return TmfVerdict(is_tmf=True, witness=None, mode="paper-bound",
                      lengths_searched=max_word, search_length=max_word)


# --------------------------------------------------
# TMF: definitional oracle
# --------------------------------------------------

def oracle_length_bound(stats: MonoidStats) -> int:
    """Word length that makes the definitional search exact: |C|^2 + 2 max(|P|, |F|)."""
    return stats.context_count ** 2 + 2 * max(stats.predecessor_count, stats.follower_count)


def _tmf_oracle(p: Presentation, built: Built, limits: Limits, max_len: Optional[int]) -> TmfVerdict:
    bound = oracle_length_bound(monoid_stats(p, built, limits))
    length = max_len or limits.oracle_max_len or bound
    samples = {}
    total = 0
    for n in range(1, length + 1):
        samples[n] = blocks(p, n, limits)
        total += len(samples[n])
        if total > limits.max_enumeration:
            raise ResourceCapExceeded("enumeration", limits.max_enumeration, total)

    def in_language(word: Word) -> bool:
        return not word or word in samples[len(word)]

    groups: dict[tuple[int, str, str], list[Word]] = {}
    for n in range(3, length + 1):
        for word in samples[n].blocks:
            groups.setdefault((n, word[0], word[-1]), []).append(word)

    # t = u . (v w x) . y ; swap the middle for every v z x of the same length
    for n in range(3, length + 1):
        for t in samples[n].blocks:
            for i in range(n):
                for j in range(i + 2, n):
                    middle = t[i:j + 1]
                    prefix, suffix = t[:i], t[j + 1:]
                    for other in groups[(len(middle), middle[0], middle[-1])]:
                        if other != middle and not in_language(prefix + other + suffix):
                            witness = TmfWitness(middle, other, prefix, suffix)
                            _validate_witness(p, witness, "oracle")
                            return TmfVerdict(
                                is_tmf=False, witness=witness, mode="oracle",
                                lengths_searched=n, exhaustive=length >= bound,
                                search_length=length,
                            )
    return TmfVerdict(is_tmf=True, witness=None, mode="oracle", lengths_searched=length,
                      exhaustive=length >= bound, search_length=length)


# --------------------------------------------------
# TMF: entry point
# --------------------------------------------------

def is_tmf(
    p: Presentation,
    mode: TmfMode = "monoid",
    step: int = 1,
    max_len: Optional[int] = None,
    built: Optional[Built] = None,
    limits: Limits = DEFAULT_LIMITS,
) -> TmfVerdict:
    """
    Decide whether the shift is a TMF (step = 1) or a k-step TMF.

    A k-step TMF is decided as a TMF on the k-th higher block presentation;
    its witnesses are then words over k-block symbols.
    """
    if mode not in TMF_MODES:
        raise ValueError(f"unknown TMF mode {mode!r}; expected one of {', '.join(TMF_MODES)}")
    p = ensure_essential(p)
    if step > 1:
        p = higher_block(p, step, limits)
        built = None
    built = built or build_monoid(p, limits)
    if mode == "monoid":
        verdict = _tmf_monoid(p, built, limits)
    elif mode == "paper-bound":
        verdict = _tmf_paper_bound(p, built, limits)
    else:
        verdict = _tmf_oracle(p, built, limits, max_len)
    verdict.step = step
    return verdict


# --------------------------------------------------
# Non-wandering, periodic points, irreducibility
# --------------------------------------------------

def return_word(p: Presentation, u: Sequence[str], max_len: Optional[int] = None) -> Optional[Word]:
    """
    Shortest (then least) v, possibly empty, with u v u in B(X).

    Breadth-first over the state sets reachable after u v; None if no such
    v exists (or none within max_len).
    """
    p = ensure_essential(p)
    u = tuple(u)

    def run(states: frozenset[int]) -> frozenset[int]:
        for a in u:
            states = p.step(states, a)
            if not states:
                break
        return states

    start = run(p.all_states())
    if not start:
        return None
    seen = {start}
    level = [(start, ())]
    depth = 0
    while level:
        for states, v in level:
            if run(states):
                return v
        if max_len is not None and depth >= max_len:
            return None
        nxt = []
        for states, v in level:
            for a in p.alphabet:
                reached = p.step(states, a)
                if reached and reached not in seen:
                    seen.add(reached)
                    nxt.append((reached, v + (a,)))
        level = nxt
        depth += 1
    return None


def is_non_wandering(
    p: Presentation,
    built: Optional[Built] = None,
    limits: Limits = DEFAULT_LIMITS,
) -> NonWanderingVerdict:
    """
    Non-wandering iff M R M != 0 for every nonzero monoid element M, with R
    the reflexive-transitive reachability of the graph. Dense periodic
    points iff M[p][q] and R[q][p] for some p, q. The two must agree.
    """
    p = ensure_essential(p)
    monoid, _ = built or build_monoid(p, limits)
    reach = p.reachability.astype(np.int64)
    witness = None
    periodic_dense = True
    for i in monoid.nonzero:
        m = monoid.elements[i].bits.astype(np.int64)
        if witness is None and not (m @ reach @ m).any():
            witness = monoid.witnesses[i]
        if periodic_dense and not (m.astype(bool) & reach.T.astype(bool)).any():
            periodic_dense = False
        if witness is not None and not periodic_dense:
            break
    non_wandering = witness is None
    if non_wandering != periodic_dense:
        raise TheoremInconsistency(
            "non-wandering and dense periodic points disagree on a sofic shift",
            {"non_wandering": non_wandering, "periodic_dense": periodic_dense,
             "witness": witness},
        )
    if witness is not None and return_word(p, witness) is not None:
        raise TheoremInconsistency("non-wandering witness has a return word", {"u": witness})

    sample_return = None
    if non_wandering:
        sample_return = return_word(p, monoid.witnesses[1])
    return NonWanderingVerdict(
        is_non_wandering=non_wandering,
        witness=witness,
        periodic_dense=periodic_dense,
        return_word=sample_return,
    )


def nonwandering_oracle(p: Presentation, max_len: int, limits: Limits = DEFAULT_LIMITS) -> Optional[Word]:
    """
    Definitional search: the least u with |u| <= max_len for which no v with
    |v| <= max_len gives u v u in B(X). None if every such u returns.
    """
    p = ensure_essential(p)
    for n in range(1, max_len + 1):
        for u in blocks(p, n, limits).blocks:
            if return_word(p, u, max_len) is None:
                return u
    return None


def is_irreducible(
    p: Presentation,
    built: Optional[Built] = None,
    limits: Limits = DEFAULT_LIMITS,
) -> IrreducibilityVerdict:
    """Irreducible iff every End(u) reaches every Start(v) in the graph."""
    p = ensure_essential(p)
    _, families = built or build_monoid(p, limits)
    reach = p.reachability
    best = None
    for end in families.realized_end_sets:
        for start in families.realized_start_sets:
            if reach[np.ix_(sorted(end.states), sorted(start.states))].any():
                continue
            u, v = end.nonempty_witness, start.nonempty_witness
            key = (len(u) + len(v), u, v)
            if best is None or key < best[0]:
                best = (key, u, v)
    if best is None:
        return IrreducibilityVerdict(is_irreducible=True, witness=None)
    return IrreducibilityVerdict(is_irreducible=False, witness=(best[1], best[2]))


# --------------------------------------------------
# TMC test and decomposition
# --------------------------------------------------

def two_block_tmc(p: Presentation, limits: Limits = DEFAULT_LIMITS) -> Presentation:
    """The TMC Y allowed by B_2(X); X is always contained in Y."""
    p = ensure_essential(p)
    return trim_essential(tmc_from_blocks(p.alphabet, blocks(p, 2, limits).blocks))


def is_tmc(p: Presentation, limits: Limits = DEFAULT_LIMITS) -> tuple[bool, Optional[Presentation]]:
    """(True, Y) when B(X) = B(Y) for the 2-block TMC Y, else (False, None)."""
    tmc = two_block_tmc(p, limits)
    if language_difference(p, tmc, limits) is None:
        return True, tmc
    return False, None


def _symbol_digraph(c: Union[IrreducibleComponent, Presentation]) -> nx.DiGraph:
    tmc = c.presentation if isinstance(c, IrreducibleComponent) else c
    g = nx.DiGraph()
    g.add_nodes_from(tmc.used_symbols)
    g.add_edges_from((e.src, e.dst) for e in tmc.edges)
    return g


def period_and_classes(c: Union[IrreducibleComponent, Presentation]) -> tuple[int, tuple[tuple[str, ...], ...]]:
    """
    Period as the gcd of level[a] + 1 - level[b] over all edges a -> b,
    levels taken from a breadth-first search rooted at the least symbol.
    Class i holds the symbols at level = i (mod period).
    """
    g = _symbol_digraph(c)
    root = min(g.nodes)
    level = nx.single_source_shortest_path_length(g, root)
    d = 0
    for a, b in g.edges:
        d = math.gcd(d, abs(level[a] + 1 - level[b]))
    d = d or 1
    classes = tuple(
        tuple(sorted(s for s in g.nodes if level[s] % d == i)) for i in range(d)
    )
    return d, classes


def index_of_primitivity(c: Union[IrreducibleComponent, Presentation]) -> int:
    """
    Smallest t >= 1 with A^(t p + ((j - i) mod p))[a][b] for every a in
    class i and b in class j.
    """
    g = _symbol_digraph(c)
    period, classes = period_and_classes(c)
    symbols = sorted(g.nodes)
    pos = {s: k for k, s in enumerate(symbols)}
    adjacency = nx.to_numpy_array(g, nodelist=symbols, dtype=np.int64) > 0
    class_of = {s: i for i, members in enumerate(classes) for s in members}

    powers = [np.eye(len(symbols), dtype=bool)]

    def power(k: int) -> np.ndarray:
        while len(powers) <= k:
            powers.append((powers[-1].astype(np.int64) @ adjacency.astype(np.int64)) > 0)
        return powers[k]

    # Wielandt-type bound; an irreducible component always stops well before it
    limit = len(symbols) ** 2 + 2
    for t in range(1, limit + 1):
        if all(
            power(t * period + (class_of[b] - class_of[a]) % period)[pos[a], pos[b]]
            for a in symbols
            for b in symbols
        ):
            return t
    raise RuntimeError(f"no index of primitivity below {limit}; component is not irreducible")


def decompose_irreducible(p: Presentation, limits: Limits = DEFAULT_LIMITS) -> list[IrreducibleComponent]:
    """
    Strongly connected components of a non-wandering TMC.

    Raises NotATmc when X is not a TMC and NotNonWanderingTmc when some edge
    joins two components.
    """
    tmc_ok, tmc = is_tmc(p, limits)
    if not tmc_ok:
        raise NotATmc("shift is not a topological Markov chain")
    g = _symbol_digraph(tmc)
    component_of = {}
    sccs = sorted((tuple(sorted(c)) for c in nx.strongly_connected_components(g)), key=lambda c: c[0])
    for k, members in enumerate(sccs):
        for s in members:
            component_of[s] = k
    crossing = sorted((a, b) for a, b in g.edges if component_of[a] != component_of[b])
    if crossing:
        raise NotNonWanderingTmc(f"edges between strongly connected components: {crossing}")

    components = []
    for members in sccs:
        keep = set(members)
        sub = Presentation.build(
            tmc.alphabet,
            members,
            [e for e in tmc.edges if e.src in keep],
            essential=True,
        )
        component = IrreducibleComponent(alphabet=members, presentation=sub)
        component.period, component.cyclic_classes = period_and_classes(component)
        component.primitivity_index = index_of_primitivity(component)
        components.append(component)
    return components


# --------------------------------------------------
# Patching oracle
# --------------------------------------------------

def _interval_unions(n: int):
    """Nonempty subsets C of the interior positions 1..n-2 with their boundary."""
    interior = range(1, n - 1)
    for mask in range(1, 2 ** len(interior)):
        chosen = tuple(i for k, i in enumerate(interior) if mask >> k & 1)
        inside = set(chosen)
        boundary = tuple(sorted({j for i in chosen for j in (i - 1, i + 1) if j not in inside}))
        yield chosen, boundary


def patching_check(p: Presentation, n: int, limits: Limits = DEFAULT_LIMITS) -> PatchingVerdict:
    """
    Words a, b in B_n(X) that agree on the boundary of C must splice:
    b on C, a elsewhere, is again in B_n(X).
    """
    p = ensure_essential(p)
    sample = blocks(p, n, limits)
    words = sample.blocks
    if n < 3:
        return PatchingVerdict(holds=True, n=n)
    if 2 ** (n - 2) * len(words) > limits.max_enumeration:
        raise ResourceCapExceeded("enumeration", limits.max_enumeration, 2 ** (n - 2) * len(words))
    for chosen, boundary in _interval_unions(n):
        groups: dict[Word, list[Word]] = {}
        for word in words:
            groups.setdefault(tuple(word[i] for i in boundary), []).append(word)
        for members in groups.values():
            for a in members:
                for b in members:
                    if a == b:
                        continue
                    z = list(a)
                    for i in chosen:
                        z[i] = b[i]
                    z = tuple(z)
                    if z not in sample:
                        return PatchingVerdict(holds=False, n=n, witness=(chosen, a, b, z))
    return PatchingVerdict(holds=True, n=n)


# --------------------------------------------------
# Full classification
# --------------------------------------------------

def classify(
    p: Presentation,
    limits: Limits = DEFAULT_LIMITS,
    verbose: bool = False,
) -> ClassificationReport:
    """
    Evaluate (c), (d) and (e) independently and check they agree.

    When they hold, a stationary chain supported on X is built and its
    support compared with X, witnessing (a) and hence (b).
    """
    p = trim_essential(p)
    built = build_monoid(p, limits, verbose=verbose)
    stats = monoid_stats(p, built, limits)
    if verbose:
        print(f"[Classify] |F|={stats.follower_count} |P|={stats.predecessor_count} |C|={stats.context_count}", file=sys.stderr)

    tmf = is_tmf(p, "monoid", built=built, limits=limits)
    nw = is_non_wandering(p, built, limits)
    nw_product = is_non_wandering(product(p, p), limits=limits)
    irreducibility = is_irreducible(p, built, limits)
    tmc_ok, tmc = is_tmc(p, limits)
    tmc_difference = None if tmc_ok else language_difference(p, two_block_tmc(p, limits), limits)

    components: list[IrreducibleComponent] = []
    decomposed = False
    if tmc_ok:
        try:
            components = decompose_irreducible(p, limits)
            decomposed = True
        except NotNonWanderingTmc:
            decomposed = False

    c = nw.is_non_wandering and tmf.is_tmf
    d = nw_product.is_non_wandering and tmf.is_tmf
    e = tmc_ok and decomposed
    c_tmc = nw.is_non_wandering and tmc_ok
    d_tmc = nw_product.is_non_wandering and tmc_ok
    if verbose:
        print(f"[Classify] tmf={tmf.is_tmf} nw={nw.is_non_wandering} tmc={tmc_ok} -> c={c} d={d} e={e}", file=sys.stderr)

    evidence = {
        "c": c, "d": d, "e": e, "c_tmc": c_tmc, "d_tmc": d_tmc,
        "tmf_witness": tmf.witness,
        "nonwandering_witness": nw.witness,
        "product_nonwandering_witness": nw_product.witness,
        "tmc_difference": tmc_difference,
    }
    if len({c, d, e, c_tmc, d_tmc}) != 1:
        raise TheoremInconsistency("conditions (c), (d), (e) disagree", evidence)
    if nw.is_non_wandering != nw_product.is_non_wandering:
        raise TheoremInconsistency("X and X x X disagree on non-wandering", evidence)
    if tmc_ok and not tmf.is_tmf:
        raise TheoremInconsistency("TMC that is not a TMF", evidence)
    if irreducibility.is_irreducible and not nw.is_non_wandering:
        raise TheoremInconsistency("irreducible shift that is not non-wandering", evidence)

    chain_verified = None
    if e:
        from markov_measures import chain_on_tmc, support_of

        chain = chain_on_tmc(tmc)
        chain_verified = language_difference(support_of(chain), p, limits) is None
        if not chain_verified:
            raise TheoremInconsistency("constructed chain is not supported on X", evidence)

    conditions = {"a": e, "b": e, "c": c, "d": d, "e": e}
    basis = {
        "a": "witnessed" if e else "excluded by (c)-(e)",
        "b": "witnessed" if e else "excluded by (c)-(e)",
        "c": "decided", "d": "decided", "e": "decided",
    }
    return ClassificationReport(
        sofic_stats=stats,
        tmf=tmf,
        nonwandering=nw,
        product_nonwandering=nw_product,
        irreducibility=irreducibility,
        is_tmc=tmc_ok,
        components=components,
        conditions=conditions,
        condition_basis=basis,
        consistent=True,
        tmc_difference=tmc_difference,
        chain_support_verified=chain_verified,
        recoding=dict(p.recoding),
    )


def describe_witness(p: Presentation, witness: Optional[TmfWitness]) -> Optional[dict]:
    if witness is None:
        return None
    return {k: format_word(getattr(witness, k), p.alphabet) for k in ("w", "u", "x", "y")}
