"""Run orchestration: send prompts, apply the reissue policy, grade, persist."""

from __future__ import annotations

import datetime as _dt
import logging
from concurrent.futures import ThreadPoolExecutor, as_completed
from pathlib import Path
from typing import Callable, Iterable, Optional

from ..baseline import score_texts
from ..diagram import Diagram
from ..grid import DEFAULT_NOISE_CHARSET
from ..humanart import extract_part_answer
from ..kinds import TaskKind
from ..structure import extract_art, grade_generation
from ..trials import MAX_REISSUES, TrialSettings, extract_choice_answer, needs_reissue
from .records import GradeRecord, JsonlAppender, ResponseRecord, read_jsonl

log = logging.getLogger(__name__)

PART_KIND = "part-recognition"
RESPONSES = "responses.jsonl"
GRADES = "grades.jsonl"


def utc_now() -> str:
    return _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="milliseconds")


def is_generation(trial: dict) -> bool:
    return trial["kind"] != PART_KIND and TaskKind(trial["kind"]).is_generation


def setting_label(trial: dict) -> str:
    if trial["kind"] == PART_KIND:
        return f"{PART_KIND} image={trial['image_id']} part={trial['part']}"
    return TrialSettings.from_json(trial["settings"]).label()


def grade_response(trial: dict, resp: ResponseRecord) -> GradeRecord:
    """Model grade for one stored response; pure in its inputs."""
    setting = setting_label(trial)
    if not is_generation(trial):
        extract = extract_part_answer if trial["kind"] == PART_KIND else extract_choice_answer
        answer = extract(resp.raw_response or "")
        if answer is None:
            return GradeRecord(trial["trial_id"], "model", setting, None, None, flagged=True)
        return GradeRecord(trial["trial_id"], "model", setting, answer, answer == trial["correct_label"])
    if resp.gave_up:
        return GradeRecord(trial["trial_id"], "model", setting, correct=False, gave_up=True)
    art = extract_art(resp.raw_response or "")
    if art is None:
        return GradeRecord(trial["trial_id"], "model", setting, flagged=True)
    settings = TrialSettings.from_json(trial["settings"])
    reference = Diagram.from_json(trial["ground_truth"]["reference"])
    metrics = grade_generation(settings.kind, reference, trial["reference"], art,
                               settings.noise.charset if settings.noise else DEFAULT_NOISE_CHARSET)
    return GradeRecord(trial["trial_id"], "model", setting, correct=metrics.exact_match,
                       metrics=metrics.to_json())


def baseline_grade(trial: dict) -> GradeRecord:
    choices = {c["label"]: c["text"] for c in trial["choices"]}
    s = score_texts(trial["reference"], choices, trial["correct_label"])
    answer = s.predicted[0] if len(s.predicted) == 1 else None
    return GradeRecord(trial["trial_id"], "edit-distance", setting_label(trial), answer,
                       bool(s.unweighted), weighted=str(s.weighted))


def _ask_once(client, trial: dict) -> tuple[str, int, bool, list]:
    text = client.complete(trial["prompt"])
    return text, 0, False, [text]


def _ask_until_art(client, trial: dict) -> tuple[str, int, bool, list]:
    cap = trial.get("max_reissues", MAX_REISSUES)
    seen = []
    for i in range(cap + 1):
        text = client.complete(trial["prompt"])
        seen.append(text)
        if not needs_reissue(text):
            return text, i, False, seen
    return text, cap, True, seen


def _done_ids(path: Path) -> tuple[set, dict]:
    done, attempts = set(), {}
    for r in read_jsonl(path, missing_ok=True):
        attempts[r["trial_id"]] = attempts.get(r["trial_id"], 0) + 1
        if r.get("error") is None:
            done.add(r["trial_id"])
    return done, attempts


def run_trials(trials: Iterable[dict], client, out_dir, *, max_parallel: int = 4,
               clock: Callable[[], str] = utc_now) -> dict:
    """Query the client for every trial not already answered in ``out_dir``.

    Completions run on up to ``max_parallel`` threads; grading and all file
    writes happen on the calling thread. Returns counts for the run.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    done, attempts = _done_ids(out / RESPONSES)
    todo = [t for t in trials if t["trial_id"] not in done]
    stats = {"skipped": len(done), "answered": 0, "errors": 0}

    def work(trial):
        started = clock()
        ask = _ask_until_art if is_generation(trial) else _ask_once
        try:
            text, reissues, gave_up, seen = ask(client, trial)
            err = None
        except Exception as e:  # recorded per trial; the run carries on
            text, reissues, gave_up, seen, err = None, 0, False, [], f"{type(e).__name__}: {e}"
        return ResponseRecord(trial["trial_id"], attempts.get(trial["trial_id"], 0), text, reissues,
                              gave_up, started, clock(), client.model_name, seen, err)

    with JsonlAppender(out / RESPONSES) as rw, JsonlAppender(out / GRADES) as gw, \
            ThreadPoolExecutor(max_workers=max(1, max_parallel)) as pool:
        futures = {pool.submit(work, t): t for t in todo}
        for fut in as_completed(futures):
            trial, resp = futures[fut], fut.result()
            rw.write(resp.to_json())
            if not resp.ok:
                stats["errors"] += 1
                log.warning("%s: %s", resp.trial_id, resp.error)
                continue
            gw.write(grade_response(trial, resp).to_json())
            stats["answered"] += 1
    return stats


def run_recognition(trials: Iterable[dict], client, out_dir, **kw) -> dict:
    trials = list(trials)
    bad = [t["trial_id"] for t in trials if is_generation(t)]
    if bad:
        raise ValueError(f"generation trials passed to run_recognition: {bad[:3]}")
    return run_trials(trials, client, out_dir, **kw)


def run_generation(trials: Iterable[dict], client, out_dir, **kw) -> dict:
    trials = list(trials)
    bad = [t["trial_id"] for t in trials if not is_generation(t)]
    if bad:
        raise ValueError(f"recognition trials passed to run_generation: {bad[:3]}")
    return run_trials(trials, client, out_dir, **kw)


def regrade(trials: Iterable[dict], responses: Iterable[dict]) -> list[GradeRecord]:
    """Grades for stored responses, in trial order; the last good response per trial wins."""
    latest = {}
    for r in responses:
        if r.get("error") is None:
            latest[r["trial_id"]] = ResponseRecord.from_json(r)
    return [grade_response(t, latest[t["trial_id"]]) for t in trials if t["trial_id"] in latest]


def load_trials(path) -> list[dict]:
    return list(read_jsonl(path))


def find_trial(trials: list[dict], trial_id: str) -> Optional[dict]:
    return next((t for t in trials if t["trial_id"] == trial_id), None)
