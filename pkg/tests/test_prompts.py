"""Byte-exact prompt fixtures.

``golden/source`` holds reference prompt text the builders must reproduce;
``golden/prompts`` holds one full prompt per task kind built from seed 11.
"""

import pytest

from boxart.diagram import render, rotate_cw
from boxart.grid import CharGrid, pad_to_width, trim_ragged
from boxart.kinds import TaskKind
from boxart.prompts import QUESTIONS, recognition_prompt
from boxart.structure import parse_boxes
from boxart.trials import build_trials, make_settings, render_recognition_prompt

SEED = 11
CASES = {
    "recog-verbatim": dict(names_shown=True),
    "recog-translation": {},
    "recog-rotation": dict(size=0.3, names_shown=True),
    "recog-noise": dict(noise_level=0.32),
    "recog-scale": dict(enlarged="ref"),
    "gen-verbatim": {},
    "gen-translation": {},
    "gen-noise": {},
    "gen-scale": {},
    "gen-rotation": {},
}


def seeded(kind):
    s = make_settings(TaskKind(kind), seed=SEED, **CASES[kind])
    return build_trials(s, 1, SEED)[0][1]


@pytest.mark.parametrize("kind", sorted(CASES))
def test_golden_prompt(kind, golden):
    assert seeded(kind).prompt_text == (golden / "prompts" / f"{kind}.txt").read_text()


@pytest.mark.parametrize("kind", [k for k in sorted(CASES) if k.startswith("recog-")])
def test_recognition_prompt_carries_question(kind, golden):
    name = "recog-scale-ref" if kind == "recog-scale" else kind
    question = (golden / "source" / f"{name}-question.txt").read_text()
    t = seeded(kind)
    assert question in t.prompt_text
    assert render_recognition_prompt(t) == t.prompt_text


def test_scale_question_for_enlarged_choices(golden):
    s = make_settings(TaskKind.RECOG_SCALE, enlarged="choices")
    t = build_trials(s, 1, 2)[0][1]
    assert (golden / "source" / "recog-scale-cho-question.txt").read_text() in t.prompt_text


@pytest.mark.parametrize("kind", ["gen-translation", "gen-noise", "gen-scale", "gen-rotation"])
def test_generation_prompt_paragraphs(kind, golden):
    p = seeded(kind).prompt_text
    preamble = (golden / "source" / "gen_preamble.txt").read_text()
    if kind == "gen-noise":
        preamble = preamble.replace("1, 2, and 3,", "1, 2, 3 and 4,")
    assert p.startswith(preamble)
    assert p.endswith((golden / "source" / f"{kind}.txt").read_text())


def test_generation_verbatim_prompt(golden):
    t = seeded("gen-verbatim")
    head = (golden / "source" / "gen_verbatim_head.txt").read_text()
    assert t.prompt_text == f"{head}\n{t.reference_text}\n```"


def _example_parts(golden):
    text = (golden / "source" / "rotation_prompt_example.txt").read_text()
    return text, [b.strip("\n") for b in text.split("```")[1::2]]


def test_rotation_example_art_reconstructs(golden):
    _, arts = _example_parts(golden)
    diagrams = []
    for art in arts:
        g = pad_to_width(CharGrid.from_text(art), 8)
        g = CharGrid.from_rows(list(g.rows) + [" " * 8] * (8 - g.height))
        rep = parse_boxes(g)
        assert rep.is_clean
        d = rep.to_diagram(8)
        rows = list(trim_ragged(render(d)).rows)
        while rows and not rows[-1]:
            rows.pop()
        assert "\n".join(rows) == art
        diagrams.append(d)
    # choice C is the quarter turn of the reference
    assert render(rotate_cw(diagrams[0])) == render(diagrams[3])


def test_rotation_example_prompt(golden):
    text, arts = _example_parts(golden)
    q = QUESTIONS[TaskKind.RECOG_ROTATION]
    assert recognition_prompt(arts[0], q, list(zip("ABC", arts[1:])), True) == text


def test_noise_example_prefix(golden):
    text = (golden / "source" / "noise_prompt_example_prefix.txt").read_text()
    blocks = [b.strip("\n") for b in text.split("```")[1::2]]
    q = QUESTIONS[TaskKind.RECOG_NOISE]
    prompt = recognition_prompt(blocks[0], q, [("A", blocks[1]), ("B", "x"), ("C", "y")], False)
    assert prompt.startswith(text)
