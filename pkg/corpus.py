# corpus.py
"""
Random Presentation Corpora

PURPOSE:
Deterministic generation of small labelled-graph presentations and batch
classification over them. Generation is a pure function of the
CorpusSpec: one random.Random seeded with `seed`, consumed in a fixed
order. Presentations that trim to the empty shift are resampled from the
same stream.
"""

import json
import os
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Optional

from classification import classify
from config import DEFAULT_LIMITS, Limits
from errors import (
    EmptyShift,
    MalformedPresentation,
    PreconditionViolated,
    ResourceCapExceeded,
    TheoremInconsistency,
)
from run_report import input_digest
from shift_core import Presentation, load_presentation, presentation_to_document, trim_essential

SPEC_FILE = "corpus.json"
MAX_RESAMPLES = 10_000


@dataclass(frozen=True)
class CorpusSpec:
    count: int = 100
    seed: int = 1
    min_states: int = 1
    max_states: int = 3
    min_alphabet: int = 1
    max_alphabet: int = 2
    density: Fraction = Fraction(1, 2)

    def __post_init__(self):
        if self.count < 0:
            raise PreconditionViolated("count must be non-negative")
        if not 1 <= self.min_states <= self.max_states:
            raise PreconditionViolated("need 1 <= min_states <= max_states")
        if not 1 <= self.min_alphabet <= self.max_alphabet <= 10:
            raise PreconditionViolated("need 1 <= min_alphabet <= max_alphabet <= 10")
        density = Fraction(self.density)
        if not 0 < density <= 1:
            raise PreconditionViolated("density must lie in (0, 1]")
        object.__setattr__(self, "density", density)
        if not 0 <= self.seed < 2 ** 64:
            raise PreconditionViolated("seed must be a 64-bit unsigned integer")


def random_presentation(rng: random.Random, spec: CorpusSpec) -> Presentation:
    """
    One presentation: each (source, target, label) triple is an edge with
    probability `density`, drawn exactly as randrange(denominator) <
    numerator. Resamples until the essential part is nonempty.
    """
    for _ in range(MAX_RESAMPLES):
        n = rng.randint(spec.min_states, spec.max_states)
        k = rng.randint(spec.min_alphabet, spec.max_alphabet)
        states = [f"q{i}" for i in range(n)]
        alphabet = [str(a) for a in range(k)]
        edges = [
            (s, t, a)
            for s in states
            for t in states
            for a in alphabet
            if rng.randrange(spec.density.denominator) < spec.density.numerator
        ]
        p = Presentation.build(alphabet, states, edges)
        try:
            trim_essential(p)
        except EmptyShift:
            continue
        return p
    raise PreconditionViolated(f"no nonempty presentation in {MAX_RESAMPLES} draws; raise the density")


def generate_corpus(spec: CorpusSpec) -> list[Presentation]:
    rng = random.Random(spec.seed)
    return [random_presentation(rng, spec) for _ in range(spec.count)]


def _spec_document(spec: CorpusSpec) -> dict:
    doc = asdict(spec)
    doc["density"] = str(spec.density)
    return doc


def write_corpus(spec: CorpusSpec, directory: str, verbose: bool = False) -> list[str]:
    """
    Write item_0000.json ... plus corpus.json into `directory`.

    Every file is re-loaded and compared with the generated presentation.
    """
    os.makedirs(directory, exist_ok=True)
    paths = []
    for k, p in enumerate(generate_corpus(spec)):
        text = json.dumps(presentation_to_document(p), indent=2, sort_keys=True) + "\n"
        if load_presentation(text) != p:
            raise MalformedPresentation("generated presentation does not survive a reload", f"item {k}")
        path = os.path.join(directory, f"item_{k:04d}.json")
        with open(path, "w", encoding="utf-8") as f:
            f.write(text)
        paths.append(path)
    with open(os.path.join(directory, SPEC_FILE), "w", encoding="utf-8") as f:
        f.write(json.dumps(_spec_document(spec), indent=2, sort_keys=True) + "\n")
    if verbose:
        print(f"[Corpus] wrote {len(paths)} presentations to {directory}", file=sys.stderr)
    return paths


# --------------------------------------------------
# Batch classification
# --------------------------------------------------

@dataclass
class CorpusItem:
    file: str
    input_digest: str
    status: str                      # "ok" | "cap" | "inconsistent" | "malformed"
    tmf: Optional[bool] = None
    non_wandering: Optional[bool] = None
    tmc: Optional[bool] = None
    conditions: dict[str, bool] = field(default_factory=dict)
    detail: str = ""


@dataclass
class CorpusSummary:
    total: int
    strata: dict[str, int]
    items: list[CorpusItem]
    invariant_violations: list[str] = field(default_factory=list)


def analyse_file(path: str, limits: Limits = DEFAULT_LIMITS) -> CorpusItem:
    with open(path, "rb") as f:
        data = f.read()
    name = os.path.basename(path)
    digest = input_digest(data)
    try:
        report = classify(load_presentation(data, limits), limits)
    except (MalformedPresentation, EmptyShift) as e:
        return CorpusItem(name, digest, "malformed", detail=str(e))
    except ResourceCapExceeded as e:
        return CorpusItem(name, digest, "cap", detail=str(e))
    except TheoremInconsistency as e:
        return CorpusItem(name, digest, "inconsistent", detail=str(e))
    return CorpusItem(
        file=name,
        input_digest=digest,
        status="ok",
        tmf=report.tmf.is_tmf,
        non_wandering=report.nonwandering.is_non_wandering,
        tmc=report.is_tmc,
        conditions=dict(report.conditions),
    )


def _analyse_job(job: tuple[str, Limits]) -> CorpusItem:
    return analyse_file(*job)


def run_corpus(
    paths: list[str],
    jobs: int = 1,
    limits: Limits = DEFAULT_LIMITS,
    verbose: bool = False,
) -> CorpusSummary:
    """
    Classify every file; results keep the order of `paths` whatever `jobs` is.
    """
    paths = sorted(paths)
    work = [(p, limits) for p in paths]
    if jobs > 1 and len(paths) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            items = list(pool.map(_analyse_job, work))
    else:
        items = [_analyse_job(w) for w in work]

    strata = {"ok": 0, "cap": 0, "inconsistent": 0, "malformed": 0, "tmf": 0, "non_wandering": 0, "tmc": 0, "sft_union": 0}
    violations = []
    for item in items:
        strata[item.status] += 1
        if item.status != "ok":
            continue
        strata["tmf"] += item.tmf
        strata["non_wandering"] += item.non_wandering
        strata["tmc"] += item.tmc
        strata["sft_union"] += item.conditions.get("e", False)
        if item.tmc and not item.tmf:
            violations.append(f"{item.file}: TMC but not TMF")
        if item.conditions.get("c") != item.conditions.get("e"):
            violations.append(f"{item.file}: condition (c) differs from (e)")
    if verbose:
        print(f"[Corpus] analysed {len(items)} files: {strata}", file=sys.stderr)
    return CorpusSummary(total=len(items), strata=strata, items=items, invariant_violations=violations)


def corpus_files(directory: str) -> list[str]:
    return sorted(
        os.path.join(directory, name)
        for name in os.listdir(directory)
        if name.endswith(".json") and name != SPEC_FILE
    )
