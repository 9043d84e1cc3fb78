"""Report envelopes, stable JSON and CSV curves."""
import csv
import io
import json
import sys
import time
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, Iterable, Optional, Tuple

from pydantic import BaseModel

from config import TOOL_NAME, VERSION
from logs import logger
from src.core.states import word_to_string
from src.reports.structured import ReportEnvelope, Trajectory

# Envelope fields that differ between otherwise identical runs.
TIMESTAMP_FIELDS = ("started_at", "runtime_seconds")


class RunClock:
    def __init__(self):
        self.started_at = datetime.now(timezone.utc).isoformat(timespec="seconds")
        self._t0 = time.perf_counter()

    def elapsed(self) -> float:
        return round(time.perf_counter() - self._t0, 6)


def envelope(command: str, config: Dict[str, Any], seed: Optional[int], result: BaseModel, clock: RunClock) -> ReportEnvelope:
    return ReportEnvelope(
        tool=TOOL_NAME,
        version=VERSION,
        command=command,
        config=config,
        seed=seed,
        started_at=clock.started_at,
        runtime_seconds=clock.elapsed(),
        result=result.model_dump(mode="json"),
    )


def to_json(report: BaseModel) -> str:
    return json.dumps(report.model_dump(mode="json"), sort_keys=True, indent=2) + "\n"


def write_json(report: BaseModel, out: Optional[str] = None):
    """Write to ``out`` or stdout."""
    text = to_json(report)
    if out is None:
        sys.stdout.write(text)
        return
    Path(out).parent.mkdir(parents=True, exist_ok=True)
    Path(out).write_text(text, encoding="utf-8")
    logger.info(f"report written to {out}")


def trajectory_csv(traj: Trajectory, n: int) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["step", "state", "event"])
    for t, x, event in zip(traj.steps, traj.states, traj.events):
        writer.writerow([t, word_to_string(x, n), event])
    return buffer.getvalue()


def curve_csv(rows: Iterable[Tuple[int, float]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["t", "d"])
    for t, d in rows:
        writer.writerow([t, repr(float(d))])
    return buffer.getvalue()


def write_text(text: str, out: str):
    Path(out).parent.mkdir(parents=True, exist_ok=True)
    Path(out).write_text(text, encoding="utf-8")
    logger.info(f"wrote {out}")
