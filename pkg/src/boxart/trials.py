"""Recognition and generation trials: construction, prompts, answer extraction.

A recognition trial shows a reference image and three labelled choices, one
of which is derived from the reference; the other two are fresh diagrams with
the same character counts. A generation trial shows one image and asks for a
transformed copy.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Optional

from .diagram import (SCALE_BASE, SIZE_PRESETS, CharBudget, Diagram, GenParams, generate, render,
                      rotate_cw)
from .errors import BudgetUnsatisfiable, InvalidSettings
from .grid import CharGrid, NoiseSpec, embed, inject_noise, trim_ragged, upscale2
from .kinds import GENERATION_KINDS, RECOGNITION_KINDS, TaskKind
from .prompts import QUESTIONS, generation_prompt, recognition_prompt, scale_question
from .rng import RandomStream, child_seed
from .structure import has_vertex_signature

__all__ = [
    "TaskKind", "Enlarged", "TrialSettings", "RecognitionTrial", "GenerationTrial",
    "make_settings", "build_recognition_trial", "build_generation_trial", "build_trials",
    "extract_choice_answer", "needs_reissue", "trial_from_record",
]

LABELS = ("A", "B", "C")
MAX_REISSUES = 14
TRANSLATION_OUTER = 48
TRANSLATION_MAX_OFFSET = 24
RAGGED_MAX_BOXES = 6
GEN_NOISE_LEVEL = 0.04
_DISTINCT_TRIES = 100


class Enlarged(str, Enum):
    REFERENCE = "reference"
    CHOICES = "choices"


@dataclass(frozen=True)
class TrialSettings:
    kind: TaskKind
    gen_params: GenParams
    names_shown: bool = False
    noise: Optional[NoiseSpec] = None
    padding_kept: bool = True
    enlarged_side: Optional[Enlarged] = None
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "kind", TaskKind(self.kind))
        if self.enlarged_side is not None:
            object.__setattr__(self, "enlarged_side", Enlarged(self.enlarged_side))
        k = self.kind
        noisy = k in (TaskKind.RECOG_NOISE, TaskKind.GEN_NOISE)
        if noisy != (self.noise is not None):
            raise InvalidSettings(f"{k.value}: noise must be given exactly for noise tasks")
        if (k == TaskKind.RECOG_SCALE) != (self.enlarged_side is not None):
            raise InvalidSettings(f"{k.value}: enlarged_side must be given exactly for recognition scale trials")
        if k == TaskKind.RECOG_NOISE and not self.padding_kept and self.gen_params.max_boxes > RAGGED_MAX_BOXES:
            raise InvalidSettings(f"ragged noise trials draw at most {RAGGED_MAX_BOXES} boxes")
        if k.is_generation and not self.names_shown:
            raise InvalidSettings("generation trials always show names")
        if self.gen_params.names_shown != self.names_shown:
            raise InvalidSettings("gen_params.names_shown must agree with names_shown")

    def label(self) -> str:
        """Human-readable setting name used to group results in reports."""
        p = self.gen_params
        parts = [self.kind.value]
        size = {v[0]: k for k, v in SIZE_PRESETS.items()}.get(p.side)
        if self.kind == TaskKind.RECOG_ROTATION or (self.kind == TaskKind.RECOG_VERBATIM and p.side != 24):
            parts.append(f"size={size}")
        if self.kind == TaskKind.RECOG_NOISE:
            parts.append(f"level={self.noise.level:g}")
            parts.append("padding=" + ("kept" if self.padding_kept else "ragged"))
        if self.kind == TaskKind.RECOG_SCALE:
            parts.append("enlarged=" + ("ref" if self.enlarged_side == Enlarged.REFERENCE else "cho"))
        if not self.kind.is_generation:
            parts.append("names=" + ("on" if self.names_shown else "off"))
        return " ".join(parts)

    def slug(self) -> str:
        return self.label().replace(" ", "_").replace("=", "")

    def to_json(self) -> dict:
        p = self.gen_params
        return {
            "kind": self.kind.value, "side": p.side, "max_boxes": p.max_boxes, "lambda": p.lam,
            "names_shown": self.names_shown,
            "noise_level": self.noise.level if self.noise else None,
            "noise_charset": "".join(self.noise.charset) if self.noise else None,
            "padding_kept": self.padding_kept,
            "enlarged_side": self.enlarged_side.value if self.enlarged_side else None,
            "seed": self.seed,
        }

    @classmethod
    def from_json(cls, d: dict) -> "TrialSettings":
        noise = None
        if d.get("noise_level") is not None:
            noise = NoiseSpec(d["noise_level"], tuple(d.get("noise_charset") or '"@*.,'))
        return cls(TaskKind(d["kind"]),
                   GenParams(d["side"], d["max_boxes"], d["lambda"], d["names_shown"]),
                   d["names_shown"], noise, d.get("padding_kept", True),
                   Enlarged(d["enlarged_side"]) if d.get("enlarged_side") else None, d.get("seed", 0))


def make_settings(kind, *, size: float = 1.0, names_shown: Optional[bool] = None,
                  noise_level: Optional[float] = None, padding_kept: bool = True,
                  enlarged: Optional[str] = None, seed: int = 0) -> TrialSettings:
    """Settings with the standard parameters for each task kind filled in."""
    kind = TaskKind(kind)
    if noise_level is not None and kind not in (TaskKind.RECOG_NOISE, TaskKind.GEN_NOISE):
        raise InvalidSettings(f"{kind.value} takes no noise level")
    if enlarged is not None and kind != TaskKind.RECOG_SCALE:
        raise InvalidSettings(f"{kind.value} has no enlarged side")
    if names_shown is None:
        names_shown = kind.is_generation
    if kind in (TaskKind.RECOG_SCALE, TaskKind.GEN_SCALE):
        side, boxes, lam = SCALE_BASE
    elif kind in (TaskKind.RECOG_VERBATIM, TaskKind.RECOG_ROTATION):
        if size not in SIZE_PRESETS:
            raise InvalidSettings(f"size must be one of {sorted(SIZE_PRESETS)}, got {size}")
        side, boxes, lam = SIZE_PRESETS[size]
    else:
        side, boxes, lam = SIZE_PRESETS[1.0]
    noise = None
    if kind == TaskKind.RECOG_NOISE:
        noise = NoiseSpec(GEN_NOISE_LEVEL if noise_level is None else noise_level)
        if not padding_kept:
            boxes = min(boxes, RAGGED_MAX_BOXES)
    elif kind == TaskKind.GEN_NOISE:
        noise = NoiseSpec(GEN_NOISE_LEVEL if noise_level is None else noise_level)
    if kind.is_generation:
        padding_kept = True
    enlarged_side = None
    if kind == TaskKind.RECOG_SCALE:
        enlarged_side = Enlarged.REFERENCE if enlarged in (None, "ref", "reference") else Enlarged.CHOICES
    return TrialSettings(kind, GenParams(side, boxes, lam, names_shown), names_shown, noise,
                         padding_kept, enlarged_side, seed)


@dataclass(frozen=True)
class RecognitionTrial:
    settings: TrialSettings
    reference_text: str
    choices: tuple[tuple[str, str], ...]
    correct_label: str
    question_text: str
    prompt_text: str
    ground_truth: dict = field(default_factory=dict, compare=False)

    def choice(self, label: str) -> str:
        return dict(self.choices)[label]

    def to_record(self, trial_id: str) -> dict:
        return {
            "trial_id": trial_id,
            "kind": self.settings.kind.value,
            "settings": self.settings.to_json(),
            "seed": self.settings.seed,
            "reference": self.reference_text,
            "choices": [{"label": lab, "text": text} for lab, text in self.choices],
            "correct_label": self.correct_label,
            "prompt": self.prompt_text,
            "ground_truth": self.ground_truth,
        }


@dataclass(frozen=True)
class GenerationTrial:
    settings: TrialSettings
    reference: Diagram
    reference_text: str
    prompt_text: str
    max_reissues: int = MAX_REISSUES
    ground_truth: dict = field(default_factory=dict, compare=False)

    def to_record(self, trial_id: str) -> dict:
        return {
            "trial_id": trial_id,
            "kind": self.settings.kind.value,
            "settings": self.settings.to_json(),
            "seed": self.settings.seed,
            "reference": self.reference_text,
            "prompt": self.prompt_text,
            "ground_truth": self.ground_truth,
            "max_reissues": self.max_reissues,
        }


def trial_from_record(rec: dict):
    settings = TrialSettings.from_json(rec["settings"])
    if settings.kind.is_generation:
        return GenerationTrial(settings, Diagram.from_json(rec["ground_truth"]["reference"]),
                               rec["reference"], rec["prompt"], rec.get("max_reissues", MAX_REISSUES),
                               rec["ground_truth"])
    choices = tuple((c["label"], c["text"]) for c in rec["choices"])
    question = scale_question(settings.enlarged_side == Enlarged.REFERENCE) \
        if settings.kind == TaskKind.RECOG_SCALE else QUESTIONS[settings.kind]
    return RecognitionTrial(settings, rec["reference"], choices, rec["correct_label"], question,
                            rec["prompt"], rec["ground_truth"])


def render_recognition_prompt(trial: RecognitionTrial) -> str:
    return recognition_prompt(trial.reference_text, trial.question_text, trial.choices,
                              trial.settings.names_shown)


def _text(d: Diagram, names: bool) -> str:
    return render(d, names).text


def _distractors(params: GenParams, budget: CharBudget, taken: list[str], rng: RandomStream) -> list[Diagram]:
    out = []
    for _ in range(2):
        for _ in range(_DISTINCT_TRIES):
            d = generate(params, rng, budget)
            t = _text(d, params.names_shown)
            if t not in taken:
                taken.append(t)
                out.append(d)
                break
        else:
            raise BudgetUnsatisfiable("could not draw a distractor distinct from the other choices")
    return out


def _offset(rng: RandomStream) -> tuple[int, int]:
    return rng.uniform_int(0, TRANSLATION_MAX_OFFSET), rng.uniform_int(0, TRANSLATION_MAX_OFFSET)


def build_recognition_trial(settings: TrialSettings, rng: RandomStream) -> RecognitionTrial:
    kind = settings.kind
    if kind not in RECOGNITION_KINDS:
        raise InvalidSettings(f"{kind.value} is not a recognition task")
    p = settings.gen_params
    names = settings.names_shown
    d0 = generate(p, rng)
    target = rotate_cw(d0) if kind == TaskKind.RECOG_ROTATION else d0
    # distractors match the family they are shown with: the rotated image for rotation
    d1, d2 = _distractors(p, CharBudget.of(target), [_text(target, names)], rng)
    diagrams = [target, d1, d2]
    grids = [render(d, names) for d in diagrams]
    ref = render(d0, names)
    truth: dict = {"reference": d0.to_json()}

    if kind == TaskKind.RECOG_TRANSLATION:
        ref_off = _offset(rng)
        offs = [_offset(rng)]
        while offs[0] == ref_off:
            offs[0] = _offset(rng)
        offs += [_offset(rng), _offset(rng)]
        ref = embed(ref, TRANSLATION_OUTER, TRANSLATION_OUTER, *ref_off)
        grids = [embed(g, TRANSLATION_OUTER, TRANSLATION_OUTER, *o) for g, o in zip(grids, offs)]
        truth["reference_offset"] = list(ref_off)
        choice_extra = [{"offset": list(o)} for o in offs]
    elif kind == TaskKind.RECOG_NOISE:
        ref = inject_noise(ref, settings.noise, rng)
        grids = [inject_noise(g, settings.noise, rng) for g in grids]
        if not settings.padding_kept:
            ref = trim_ragged(ref)
            grids = [trim_ragged(g) for g in grids]
        choice_extra = [{} for _ in grids]
    elif kind == TaskKind.RECOG_SCALE:
        if settings.enlarged_side == Enlarged.REFERENCE:
            ref = upscale2(ref)
        else:
            grids = [upscale2(g) for g in grids]
        choice_extra = [{} for _ in grids]
    else:
        choice_extra = [{} for _ in grids]

    texts = [g.text for g in grids]
    if len(set(texts)) != 3:
        raise BudgetUnsatisfiable("choice texts are not pairwise distinct")
    pos = rng.uniform_int(0, 2)
    order = [1, 2]
    order.insert(pos, 0)  # order[slot] = index into diagrams
    choices = tuple((LABELS[slot], texts[i]) for slot, i in enumerate(order))
    truth["choices"] = {LABELS[slot]: {"diagram": diagrams[i].to_json(), "derived": i == 0, **choice_extra[i]}
                        for slot, i in enumerate(order)}
    if kind == TaskKind.RECOG_SCALE:
        truth["enlarged_side"] = settings.enlarged_side.value
        question = scale_question(settings.enlarged_side == Enlarged.REFERENCE)
    else:
        question = QUESTIONS[kind]
    correct = LABELS[pos]
    prompt = recognition_prompt(ref.text, question, choices, names)
    return RecognitionTrial(settings, ref.text, choices, correct, question, prompt, truth)


def build_generation_trial(settings: TrialSettings, rng: RandomStream) -> GenerationTrial:
    kind = settings.kind
    if kind not in GENERATION_KINDS:
        raise InvalidSettings(f"{kind.value} is not a generation task")
    d = generate(settings.gen_params, rng)
    grid = render(d, True)
    truth: dict = {"reference": d.to_json()}
    if kind == TaskKind.GEN_TRANSLATION:
        off = _offset(rng)
        grid = embed(grid, TRANSLATION_OUTER, TRANSLATION_OUTER, *off)
        truth["offset"] = list(off)
    elif kind == TaskKind.GEN_NOISE:
        grid = inject_noise(grid, settings.noise, rng)
    text = grid.text
    return GenerationTrial(settings, d, text, generation_prompt(kind, text), MAX_REISSUES, truth)


def build_trials(settings: TrialSettings, n: int, seed: int, attempts: int = 20) -> list[tuple[str, object]]:
    """``n`` trials, trial i drawn from its own child stream of ``seed``.

    A reference whose character counts no peer canvas can reproduce
    (BudgetUnsatisfiable) is replaced by the next draw from the same stream.
    """
    build = build_generation_trial if settings.kind.is_generation else build_recognition_trial
    out = []
    for i in range(n):
        s = child_seed(seed, i)
        rng = RandomStream(s)
        trial_settings = replace(settings, seed=s)
        for a in range(attempts):
            try:
                trial = build(trial_settings, rng)
                break
            except BudgetUnsatisfiable:
                if a == attempts - 1:
                    raise
        out.append((f"{settings.slug()}-{seed}-{i:05d}", trial))
    return out


_CHOICE = re.compile(r"choice\s+([abc])\b", re.IGNORECASE)


def _marker(digit: str) -> re.Pattern:
    return re.compile(rf"^[ \t]*(?:\({digit}\)|{digit}\)|{digit}\.)", re.MULTILINE)


_MARK4 = _marker("4")


def extract_answer(response: str, marker: re.Pattern) -> Optional[str]:
    marks = list(marker.finditer(response))
    if marks:
        m = _CHOICE.search(response, marks[-1].end())
        if m:
            return m.group(1).upper()
    found = _CHOICE.findall(response)
    if found:
        return found[-1].upper()
    return None


def extract_choice_answer(response: str) -> Optional[str]:
    """The letter chosen under question (4), or None when the answer must be flagged."""
    return extract_answer(response, _MARK4)


def needs_reissue(response: str) -> bool:
    return len(response.splitlines()) < 3 or not has_vertex_signature(response)
