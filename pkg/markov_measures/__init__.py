import json
from fractions import Fraction
from typing import Union

from errors import MalformedPresentation, SoficLabError
from markov_measures.hidden_markov import HiddenMarkovMeasure
from markov_measures.markov_chain import (
    RationalMarkovChain,
    chain_on_tmc,
    random_chain,
    stationary_distribution,
)
from markov_measures.measure_base import ShiftMeasure
from markov_measures.windows import (
    DecompositionVerdict,
    MainTheoremReport,
    WindowVerdict,
    WindowWitness,
    admissible_grid,
    check_markov_windows,
    check_mrf_windows,
    support_of,
    verify_decomposition_identity,
    verify_main_theorem,
)
from utils import reserved_in

FORMAT_MEASURE = "soficlab-measure-v1"


def _rational(value, location: str) -> Fraction:
    # floats are rejected: 0.1 has no exact binary value
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise MalformedPresentation("rationals must be integers or \"p/q\" strings", location)
    try:
        result = Fraction(value)
    except (ValueError, ZeroDivisionError):
        raise MalformedPresentation(f"invalid rational {value!r}", location)
    return result


def _check_id(name: str, location: str) -> None:
    bad = reserved_in(name)
    if bad is not None:
        raise MalformedPresentation(f"id {name!r} contains reserved character {bad!r}", location)


def load_measure(document: Union[str, bytes, dict]) -> ShiftMeasure:
    """
    Create a measure from measure-file content.

    A chain whose labels are one-to-one is a Markov chain on the label
    symbols and comes back as a RationalMarkovChain; any other labelling
    gives a HiddenMarkovMeasure. Without "labels" states label themselves.
    """
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as e:
            raise MalformedPresentation(f"invalid JSON: {e.msg}", f"line {e.lineno}, column {e.colno}")
    if not isinstance(document, dict):
        raise MalformedPresentation("top-level value must be an object", "$")
    if document.get("format") != FORMAT_MEASURE:
        raise MalformedPresentation(f"unknown format {document.get('format')!r}; expected {FORMAT_MEASURE}", "format")

    chain_doc = document.get("chain")
    if not isinstance(chain_doc, dict):
        raise MalformedPresentation("missing object 'chain'", "chain")
    states = chain_doc.get("states")
    if not isinstance(states, list) or not all(isinstance(s, str) for s in states):
        raise MalformedPresentation("states must be a list of strings", "chain.states")
    for i, s in enumerate(states):
        _check_id(s, f"chain.states[{i}]")
    rows = chain_doc.get("transitions")
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise MalformedPresentation("transitions must be a list of rows", "chain.transitions")
    transitions = [
        [_rational(v, f"chain.transitions[{i}][{j}]") for j, v in enumerate(row)]
        for i, row in enumerate(rows)
    ]
    stationary = document.get("stationary")
    if stationary is not None:
        if not isinstance(stationary, list):
            raise MalformedPresentation("stationary must be a list", "stationary")
        stationary = [_rational(v, f"stationary[{i}]") for i, v in enumerate(stationary)]

    labels = document.get("labels")
    if labels is None:
        labels = {s: s for s in states}
    if not isinstance(labels, dict) or not all(isinstance(v, str) for v in labels.values()):
        raise MalformedPresentation("labels must map states to symbols", "labels")
    for state, symbol in labels.items():
        _check_id(symbol, f"labels.{state}")

    try:
        if set(labels) == set(states) and len(set(labels.values())) == len(states):
            return RationalMarkovChain([labels[s] for s in states], transitions, stationary)
        return HiddenMarkovMeasure(RationalMarkovChain(states, transitions, stationary), labels)
    except SoficLabError as e:
        if isinstance(e, ValueError):
            raise MalformedPresentation(str(e), "chain")
        raise


def load_measure_file(path: str) -> ShiftMeasure:
    with open(path, "rb") as f:
        return load_measure(f.read())


def measure_to_document(m: ShiftMeasure) -> dict:
    """Measure-file document for `m`, rationals as "p/q" strings."""
    doc = {
        "format": FORMAT_MEASURE,
        "chain": {
            "states": list(m.hidden_states),
            "transitions": [[str(v) for v in row] for row in m.transitions],
        },
        "stationary": [str(v) for v in m.stationary],
    }
    if isinstance(m, HiddenMarkovMeasure):
        doc["labels"] = dict(m.labels)
    return doc
