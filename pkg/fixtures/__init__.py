# --------------------------------------------------
# Fixture Catalog (Static, Versioned)
# --------------------------------------------------
#
# Presentation and measure files shipped with soficlab. Each presentation
# entry records the verdicts the classifier must reproduce:
#   - tmf, non_wandering, tmc: expected decisions
#   - description: documentation only
#
# Measure entries record the measure kind and whether the MRF / Markov
# window checks are expected to hold.
import os

FIXTURES_VERSION = "1.0.0"
FIXTURE_DIR = os.path.dirname(os.path.abspath(__file__))

PRESENTATION_FIXTURES = {
    "goldenmean": {
        "description": "No two consecutive 1s, as a TMC.",
        "tmf": True, "non_wandering": True, "tmc": True,
    },
    "goldenmean_sft": {
        "description": "Golden mean given by its forbidden word 11.",
        "tmf": True, "non_wandering": True, "tmc": True,
    },
    "even": {
        "description": "Even shift: blocks of 0s between 1s have even length.",
        "tmf": False, "non_wandering": True, "tmc": False,
    },
    "xnot": {
        "description": "Countable shift 0^inf 1^inf, 1^inf 0 2^inf and fixed points.",
        "tmf": True, "non_wandering": False, "tmc": False,
    },
    "full_a": {
        "description": "Full shift on one symbol.",
        "tmf": True, "non_wandering": True, "tmc": True,
    },
    "full_ab": {
        "description": "Full 2-shift as a one-state labelled graph.",
        "tmf": True, "non_wandering": True, "tmc": True,
    },
    "three_cycle": {
        "description": "Single periodic orbit 012, period 3.",
        "tmf": True, "non_wandering": True, "tmc": True,
    },
    "period2": {
        "description": "Single periodic orbit ab, period 2.",
        "tmf": True, "non_wandering": True, "tmc": True,
    },
    "two_loops": {
        "description": "Two fixed points on disjoint alphabets.",
        "tmf": True, "non_wandering": True, "tmc": True,
    },
    "one_way": {
        "description": "a^inf b^inf: a TMC with a transient edge.",
        "tmf": True, "non_wandering": False, "tmc": True,
    },
}

MEASURE_FIXTURES = {
    "goldenmean_chain": {"kind": "chain", "mrf": True, "markov": True},
    "even_hmm": {"kind": "hidden-markov", "mrf": False, "markov": False},
    "two_loops_chain": {"kind": "chain", "mrf": True, "markov": True},
    "period2_chain": {"kind": "chain", "mrf": True, "markov": True},
}


def fixture_path(name: str) -> str:
    """Absolute path of fixtures/<name>.json."""
    path = os.path.join(FIXTURE_DIR, f"{name}.json")
    if not os.path.exists(path):
        raise FileNotFoundError(f"no fixture named {name!r}")
    return path
