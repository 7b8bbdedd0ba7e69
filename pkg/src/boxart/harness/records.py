"""JSONL records written by runs and graders."""

from __future__ import annotations

import json
import threading
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Optional

from ..trials import MAX_REISSUES


def dumps(obj: dict) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False)


def read_jsonl(path, missing_ok: bool = False) -> Iterator[dict]:
    p = Path(path)
    if missing_ok and not p.exists():
        return
    with p.open(encoding="utf-8") as f:
        for n, line in enumerate(f, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                yield json.loads(line)
            except ValueError:
                # a run killed mid-write can leave a torn last line
                raise ValueError(f"{path}:{n}: not valid JSON") from None


def write_jsonl(path, rows: Iterable[dict]):
    with open(path, "w", encoding="utf-8") as f:
        for r in rows:
            f.write(dumps(r) + "\n")


class JsonlAppender:
    """Append-only writer; one lock so several producers can share it."""

    def __init__(self, path):
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        self._f = open(path, "a", encoding="utf-8")
        self._lock = threading.Lock()

    def write(self, obj: dict):
        with self._lock:
            self._f.write(dumps(obj) + "\n")
            self._f.flush()

    def close(self):
        self._f.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


@dataclass
class ResponseRecord:
    trial_id: str
    attempt_index: int
    raw_response: Optional[str]
    reissue_count: int = 0
    gave_up: bool = False
    started_at: str = ""
    finished_at: str = ""
    model: str = ""
    responses: list = field(default_factory=list)  # every completion, in order
    error: Optional[str] = None

    def __post_init__(self):
        if not 0 <= self.reissue_count <= MAX_REISSUES:
            raise ValueError(f"{self.trial_id}: reissue_count {self.reissue_count} out of range")
        if self.gave_up and self.reissue_count != MAX_REISSUES:
            raise ValueError(f"{self.trial_id}: gave up after {self.reissue_count} reissues")

    @property
    def ok(self) -> bool:
        return self.error is None

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, d: dict) -> "ResponseRecord":
        return cls(**d)


GRADERS = ("model", "edit-distance")


@dataclass
class GradeRecord:
    trial_id: str
    grader: str
    setting: str
    extracted_answer: Optional[str] = None
    correct: Optional[bool] = None
    flagged: bool = False
    metrics: Optional[dict] = None
    gave_up: bool = False
    weighted: Optional[str] = None  # tie-split credit as a fraction string, edit-distance only

    def __post_init__(self):
        if self.grader not in GRADERS:
            raise ValueError(f"unknown grader {self.grader!r}")

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, d: dict) -> "GradeRecord":
        return cls(**d)
