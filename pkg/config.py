# config.py
"""
Runtime limits for soficlab.

Every decision procedure here is worst-case exponential in the size of the
presentation (subset construction, monoid closure, word enumeration). The
caps below bound that work. Each cap is read once from the environment
(a .env file is honoured) and can be overridden per call or per CLI run.

Environment variables:
    SOFICLAB_MAX_SUBSET_STATES   states of any subset / pair construction
    SOFICLAB_MAX_ENUMERATION     words produced by any exhaustive enumeration
    SOFICLAB_MAX_MONOID          elements of a transition monoid
    SOFICLAB_MAX_PROFILE_STEPS   lengths explored by the profile search
    SOFICLAB_ORACLE_MAX_LEN      default word length for oracle searches
    SOFICLAB_LEDGER_DB           SQLite ledger path (unset = ledger disabled)
"""

import os
from dataclasses import dataclass
from typing import Optional

from dotenv import load_dotenv
load_dotenv()


def _int_env(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{name} must be an integer, got {raw!r}")
    if value < 1:
        raise ValueError(f"{name} must be positive, got {value}")
    return value


# --------------------------------------------------
# Resource caps
# --------------------------------------------------

MAX_SUBSET_STATES = _int_env("SOFICLAB_MAX_SUBSET_STATES", 2 ** 16)
MAX_ENUMERATION = _int_env("SOFICLAB_MAX_ENUMERATION", 10 ** 6)
MAX_MONOID = _int_env("SOFICLAB_MAX_MONOID", 2 ** 16)
MAX_PROFILE_STEPS = _int_env("SOFICLAB_MAX_PROFILE_STEPS", 4096)

# None means "derive from the exactness bound of the presentation"
_oracle_len = os.getenv("SOFICLAB_ORACLE_MAX_LEN")
ORACLE_MAX_LEN: Optional[int] = (
    _int_env("SOFICLAB_ORACLE_MAX_LEN", 1) if _oracle_len else None
)

# --------------------------------------------------
# Observability
# --------------------------------------------------

LEDGER_DB_PATH = os.getenv("SOFICLAB_LEDGER_DB") or None

TOOL_VERSION = "1.0.0"


@dataclass(frozen=True)
class Limits:
    """
    Bundle of resource caps passed through the capped operations.
    """
    max_subset_states: int = MAX_SUBSET_STATES
    max_enumeration: int = MAX_ENUMERATION
    max_monoid: int = MAX_MONOID
    max_profile_steps: int = MAX_PROFILE_STEPS
    oracle_max_len: Optional[int] = ORACLE_MAX_LEN


DEFAULT_LIMITS = Limits()
