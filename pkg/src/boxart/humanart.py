"""Part recognition on human-drawn ASCII-art.

A corpus record holds a full drawing and, per part, a mask: the same drawing
with every character outside that part blanked. A trial shows both and asks
which of three names fits the part, with six worked exemplars appended.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Optional

from .errors import MaskMismatch, UnknownPart, VocabularyTooSmall
from .prompts import FENCE
from .rng import RandomStream
from .trials import LABELS, extract_answer, _marker

OTHER = "other"

VOCABULARIES: dict[str, tuple[str, ...]] = {
    "bird": ("head", "leg(s)", "wing(s)"),
    "cat": ("back leg(s)", "front leg(s)", "head", "tail"),
    "dog": ("back leg(s)", "front leg(s)", "head", "tail"),
    "car": ("body", "wheel(s)", OTHER),
    "airplane": ("tail", "wing(s)", OTHER),
}


@dataclass(frozen=True)
class ClassVocabulary:
    object_class: str
    parts: tuple[str, ...]

    @property
    def includes_other(self) -> bool:
        return OTHER in self.parts

    @classmethod
    def for_class(cls, object_class: str) -> "ClassVocabulary":
        return cls(object_class, VOCABULARIES[object_class])


def _pad(lines: list[str], width: int) -> list[str]:
    return [ln.ljust(width) for ln in lines]


def article(noun: str) -> str:
    return "an" if noun[:1].lower() in "aeiou" else "a"


@dataclass(frozen=True)
class ArtRecord:
    id: str
    object_class: str
    full_art: str
    parts: dict = field(default_factory=dict)

    @classmethod
    def build(cls, art_id: str, object_class: str, full: str, parts: dict,
              vocab: Optional[ClassVocabulary] = None) -> "ArtRecord":
        """Validate masks against the full art and pad everything to one width."""
        full_lines = full.split("\n")
        part_lines = {k: v.split("\n") for k, v in parts.items()}
        width = max(len(ln) for ln in full_lines + [ln for v in part_lines.values() for ln in v])
        full_lines = _pad(full_lines, width)
        allowed = vocab.parts if vocab else VOCABULARIES.get(object_class)
        padded = {}
        for label, lines in part_lines.items():
            if allowed is not None and (label not in allowed or label == OTHER):
                raise UnknownPart(f"{art_id}: part {label!r} is not in the {object_class} vocabulary")
            if len(lines) != len(full_lines):
                raise MaskMismatch(art_id, label, min(len(lines), len(full_lines)), 0)
            lines = _pad(lines, width)
            for r, (pl, fl) in enumerate(zip(lines, full_lines)):
                for c, ch in enumerate(pl):
                    if ch != " " and ch != fl[c]:
                        raise MaskMismatch(art_id, label, r, c)
            padded[label] = "\n".join(lines)
        return cls(art_id, object_class, "\n".join(full_lines), padded)


def load_corpus(path) -> list[ArtRecord]:
    """Every ``*.json`` record in a directory, sorted by id."""
    records = []
    for f in sorted(Path(path).glob("*.json")):
        d = json.loads(f.read_text())
        records.append(ArtRecord.build(d["id"], d["class"], d["full"], d.get("parts", {})))
    return sorted(records, key=lambda r: r.id)


@dataclass(frozen=True)
class Exemplar:
    object_name: str
    article: str
    full_art: str
    part_art: str
    choices: tuple[str, ...]
    answer: str


def load_exemplars(path=None) -> tuple[Exemplar, ...]:
    if path is None:
        text = resources.files("boxart").joinpath("data/exemplars.json").read_text()
    else:
        text = Path(path).read_text()
    items = json.loads(text)["exemplars"]
    if len(items) != 6:
        raise ValueError(f"an exemplar file needs exactly six entries, got {len(items)}")
    out = []
    for e in items:
        width = max(len(ln) for ln in e["full"] + e["part"])
        out.append(Exemplar(e["object"], e.get("article") or article(e["object"]),
                            "\n".join(_pad(e["full"], width)), "\n".join(_pad(e["part"], width)),
                            tuple(e["choices"]), e["answer"]))
    return tuple(out)


_INTRO = (
    "I am about to show you two pieces of ASCII-art then ask you as series of questions about them.\n"
    "\n"
    "The first piece of ASCII-art is a full image, and the second is part of that image which has only "
    "some of its non-whitespace characters retained while the rest have been blanked out. The full image "
    "will be labeled FULL_IMAGE above it, and the mostly blanked-out image will be labeled IMAGE_PART. "
    "The ASCII-art will be labeled to indicate which is which. In addition to these pictures, we will "
    "provide the name of the object that the ASCII-art in FULL_IMAGE is meant to depict, providing it "
    "immediately following the tag OBJECT_IN_FULL_IMAGE.  The tag OBJECT_IN_FULL_IMAGE and the name of "
    "the object follows the full image but preceeds the other ASCII-art.\n"
)
_Q123 = (
    "Please answer the following questions, numbered one through six, in order:\n"
    "\n"
    "(1) Describe the ASCII-art shown in FULL_IMAGE, indicating the shape of its parts and what they are "
    "comprised of.\n"
    "\n"
    "(2) Describe how you would expect an ASCII-art depiction of the type of thing indicated by "
    "OBJECT_IN_FULL_IMAGE to look like. Indicate its shape and what parts you expect to be present.\n"
    "\n"
    "(3) Describe the ASCII-art shown in IMAGE_PART, indicating the shape of its parts and what they are "
    "comprised of.\n"
    "\n"
    "(4) For each of the following sub-parts --- 4.1, 4.2, and 4.3 respectively --- describe what "
    "characters in FULL_IMAGE you believe represent them, if any:\n"
)
_Q5 = (
    "(5) Describe how you would determine which part of FULL_IMAGE the art in IMAGE_PART corresponds to.\n"
    "\n"
    "(6) Of the following three choices --- Choice A, Choice B, or Choice C --- which provides the best "
    "name for the part of FULL_IMAGE that is shown in IMAGE_PART ?\n"
)
_EXAMPLES = (
    "EXAMPLES:\n"
    "The remainder of this prompt has examples of full images (labeled EX_FULL_IMG), parts (labeled "
    "EX_PART_IMG) and names of objects shown in EX_FULL_IMG (labeled OBJECT_IN_EX_FULL_IMG), followed by "
    "the tag EX_CHOICE_FOR_6 listing choices provided to choose a name for the image in EX_PART_IMG and "
    "then the tag EX_EXPECTED_ANSWER_TO_6 indicating the letter of the correct choice shown among those "
    "in EX_CHOICE_FOR_6."
)


def render_exemplar(i: int, ex: Exemplar) -> str:
    lines = [f"Example {i}:", "", "EX_FULL_IMG:", FENCE, ex.full_art, FENCE,
             f"OBJECT_IN_EX_FULL_IMG: {ex.article} {ex.object_name}", "", "EX_PART_IMG:",
             FENCE, ex.part_art, FENCE, "EX_CHOICE_FOR_6:"]
    lines += [f"    Choice {chr(65 + j)}: {c}" for j, c in enumerate(ex.choices)]
    lines.append(f"EXPECTED_ANSWER_TO_6_FOR_EX: Choice {ex.answer}")
    return "\n".join(lines)


def render_part_prompt(record: ArtRecord, part: str, choices, exemplars) -> str:
    """``choices`` are the three labels in display order."""
    for ex in exemplars:
        if ex.full_art.rstrip() == record.full_art.rstrip():
            raise ValueError(f"{record.id}: queried art is identical to an exemplar")
    obj = f"{article(record.object_class)} {record.object_class}"
    text = _INTRO + "\n"
    text += f"FULL_IMAGE\n{FENCE}\n{record.full_art}\n{FENCE}\nOBJECT_IN_FULL_IMAGE {obj}\n\n"
    text += f"IMAGE_PART\n{FENCE}\n{record.parts[part]}\n{FENCE}\n\n\n"
    text += _Q123
    text += "".join(f"    (4.{j + 1}) {c}\n" for j, c in enumerate(choices)) + "\n"
    text += _Q5
    text += "".join(f"    Choice {LABELS[j]}: {c}\n" for j, c in enumerate(choices)) + "\n"
    text += _EXAMPLES
    for i, ex in enumerate(exemplars, start=1):
        text += "\n\n" + render_exemplar(i, ex)
    return text


@dataclass(frozen=True)
class PartTrial:
    record_id: str
    object_class: str
    part: str
    choices: tuple[tuple[str, str], ...]
    correct_label: str
    prompt_text: str

    def to_record(self, trial_id: str) -> dict:
        return {"trial_id": trial_id, "kind": "part-recognition", "image_id": self.record_id,
                "object_class": self.object_class, "part": self.part,
                "choices": [{"label": lab, "text": t} for lab, t in self.choices],
                "correct_label": self.correct_label, "prompt": self.prompt_text}


def build_part_trial(record: ArtRecord, part: str, vocab: ClassVocabulary, rng: RandomStream,
                     exemplars=None) -> PartTrial:
    if part not in record.parts:
        raise UnknownPart(f"{record.id} has no part {part!r}")
    others = [p for p in vocab.parts if p != part]
    if len(others) < 2:
        raise VocabularyTooSmall(f"{vocab.object_class} vocabulary offers {len(others) + 1} labels, need 3")
    picked = [part] + rng.sample(others, 2)
    rng.shuffle(picked)
    choices = tuple((LABELS[i], c) for i, c in enumerate(picked))
    correct = LABELS[picked.index(part)]
    ex = load_exemplars() if exemplars is None else exemplars
    return PartTrial(record.id, record.object_class, part, choices, correct,
                     render_part_prompt(record, part, picked, ex))


_MARK6 = _marker("6")


def extract_part_answer(response: str) -> Optional[str]:
    return extract_answer(response, _MARK6)


def build_part_trials(records, per_part: int, seed: int, exemplars=None) -> list[tuple[str, PartTrial]]:
    ex = load_exemplars() if exemplars is None else exemplars
    out = []
    for rec in records:
        vocab = ClassVocabulary.for_class(rec.object_class)
        for part in sorted(rec.parts):
            for i in range(per_part):
                rng = RandomStream(seed).child(len(out))
                out.append((f"part-{rec.id}-{part}-{seed}-{i:04d}",
                            build_part_trial(rec, part, vocab, rng, ex)))
    return out
