# guardrails.py
"""
Consistency Ledger for soficlab

PURPOSE:
Records, per analysed input, whether the independently computed verdicts
agreed. Three statuses:
    green   verdicts consistent with the theorems
    yellow  resource cap hit, or a window check inconclusive at the
            tested scale
    red     TheoremInconsistency (always an implementation fault)

IMPORTANT DESIGN PRINCIPLES:
- The ledger is OBSERVATIONAL ONLY: it never changes a verdict, a report
  or an exit code.
- Events are appended to SQLite and never modified.
- Ledger failures are printed and swallowed.
- The ledger is off unless SOFICLAB_LEDGER_DB or `--ledger` names a
  database. Run ids live only here, never in JSON reports.
"""

import sqlite3
import sys
import uuid
from contextlib import closing, contextmanager
from dataclasses import dataclass
from datetime import datetime, timezone
from typing import Literal, Optional

from config import LEDGER_DB_PATH

StatusType = Literal["green", "yellow", "red"]
STATUSES: tuple[StatusType, ...] = ("green", "yellow", "red")

_db_path: Optional[str] = LEDGER_DB_PATH
# one id per CLI invocation; a corpus run shares it across all its files
_run_id: Optional[str] = None

_SCHEMA = (
    """CREATE TABLE IF NOT EXISTS consistency_events (
        id INTEGER PRIMARY KEY AUTOINCREMENT,
        run_id TEXT NOT NULL,
        command TEXT NOT NULL,
        input_digest TEXT NOT NULL,
        status TEXT NOT NULL CHECK (status IN ('green', 'yellow', 'red')),
        detail TEXT NOT NULL,
        created_at TIMESTAMP NOT NULL
    )""",
    "CREATE INDEX IF NOT EXISTS idx_consistency_run ON consistency_events(run_id, status)",
)


@dataclass
class ConsistencyEvent:
    run_id: str
    command: str
    input_digest: str
    status: StatusType
    detail: str
    created_at: datetime

    def row(self) -> tuple:
        return (self.run_id, self.command, self.input_digest, self.status,
                self.detail, self.created_at.isoformat())


# --------------------------------------------------
# Ledger state
# --------------------------------------------------

def configure(db_path: Optional[str]) -> None:
    """Point the ledger at `db_path`; None disables it."""
    global _db_path
    _db_path = db_path


def enabled() -> bool:
    return _db_path is not None


def start_run() -> str:
    """Open a new ledger run and return its id (ledger-<utc stamp>-<hex>)."""
    global _run_id
    stamp = datetime.now(timezone.utc).strftime("%Y%m%dT%H%M%S")
    _run_id = f"ledger-{stamp}-{uuid.uuid4().hex[:6]}"
    return _run_id


def end_run() -> None:
    global _run_id
    _run_id = None


def _active_run() -> str:
    return _run_id or start_run()


def status_for(exit_code: int, outcome: Optional[str] = None) -> StatusType:
    """Map a command's exit code (and window-check outcome) to a ledger status."""
    if exit_code == 3:
        return "red"
    if exit_code != 0 or outcome in ("tension", "inconclusive"):
        return "yellow"
    return "green"


# --------------------------------------------------
# SQLite persistence
# --------------------------------------------------

@contextmanager
def _ledger():
    with closing(sqlite3.connect(_db_path)) as conn:
        for statement in _SCHEMA:
            conn.execute(statement)
        yield conn
        conn.commit()


def record_event(command: str, input_digest: Optional[str], status: StatusType, detail: str = "") -> Optional[ConsistencyEvent]:
    """
    Append one event to the active run.

    NEVER raises. Returns None when the ledger is disabled or the write failed.
    """
    if not enabled():
        return None
    event = ConsistencyEvent(
        run_id=_active_run(),
        command=command,
        input_digest=input_digest or "",
        status=status,
        detail=detail,
        created_at=datetime.now(timezone.utc),
    )
    try:
        with _ledger() as conn:
            conn.execute(
                "INSERT INTO consistency_events "
                "(run_id, command, input_digest, status, detail, created_at) "
                "VALUES (?, ?, ?, ?, ?, ?)",
                event.row(),
            )
    except sqlite3.Error as e:
        print(f"  [Ledger] write failed (non-blocking): {e}", file=sys.stderr)
        return None
    if status != "green":
        print(f"  [Ledger] {command} {event.input_digest[:19]}: {status.upper()} {detail}", file=sys.stderr)
    return event


# --------------------------------------------------
# Run summary
# --------------------------------------------------

def get_run_summary(run_id: Optional[str] = None) -> dict:
    run_id = run_id or _active_run()
    with _ledger() as conn:
        rows = dict(conn.execute(
            "SELECT status, COUNT(*) FROM consistency_events WHERE run_id = ? GROUP BY status",
            (run_id,),
        ).fetchall())
    counts = {status: rows.get(status, 0) for status in STATUSES}
    return {"run_id": run_id, "total": sum(counts.values()), **counts}


def print_run_summary(run_id: Optional[str] = None) -> None:
    """GREEN/YELLOW/RED tally of the run, on stderr."""
    if not enabled():
        return
    try:
        summary = get_run_summary(run_id)
    except sqlite3.Error as e:
        print(f"  [Ledger] summary unavailable (non-blocking): {e}", file=sys.stderr)
        return
    tally = "  ".join(f"{s.upper()} {summary[s]}" for s in STATUSES)
    print(f"[Ledger] {summary['run_id']}: {summary['total']} input(s)  {tally}", file=sys.stderr)
    if summary["red"]:
        print(f"[Ledger] red rows: SELECT * FROM consistency_events "
              f"WHERE run_id = '{summary['run_id']}' AND status = 'red'", file=sys.stderr)
