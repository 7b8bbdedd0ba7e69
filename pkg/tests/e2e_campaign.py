"""Scripted mock-client campaign shared by the end-to-end acceptance test."""

from pathlib import Path

from boxart.diagram import render, rotate_cw
from boxart.grid import CharGrid, pad_to_width, upscale2
from boxart.harness import MockClient, read_jsonl, run_trials, summarize, to_csv
from boxart.harness.runner import GRADES
from boxart.kinds import TaskKind
from boxart.prompts import generation_prompt
from boxart.structure import parse_boxes
from boxart.trials import GenerationTrial, build_trials, make_settings

GOLDEN = Path(__file__).parent / "golden"
SEED = 2024
REFUSAL = "I'm sorry, but I can't produce that image."
PROSE = "Sure. The image shows several boxes.\nSome are nested inside others.\nEach has a name."

RECOGNITION = [
    make_settings(TaskKind.RECOG_VERBATIM, size=0.3, names_shown=True),
    make_settings(TaskKind.RECOG_TRANSLATION),
    make_settings(TaskKind.RECOG_ROTATION, size=0.3),
    make_settings(TaskKind.RECOG_NOISE, noise_level=0.04, padding_kept=False),
    make_settings(TaskKind.RECOG_SCALE, enlarged="choices"),
]


def _wrong(label):
    return "B" if label == "A" else "A"


def recognition_reply(i, correct):
    wrong = _wrong(correct)
    return [
        f"(1) Boxes.\n(2) More boxes.\n(3) Compare them.\n(4) Choice {correct}",
        f"(1) Boxes.\n(2) More boxes.\n(3) Compare them.\n(4) Choice {wrong}",
        f"1. ...\n4) choice {correct.lower()}",
        "I cannot decide between them.",
        f"Choice {correct} seems closest.",
        f"(3) Choice {wrong} differs.\n(4) The answer is Choice {correct} because Choice {wrong} is off.",
    ][i % 6]


def stretched_trial():
    ref = (GOLDEN / "stretched_reference.txt").read_text().rstrip("\n")
    d = parse_boxes(pad_to_width(CharGrid.from_text(ref), 24)).to_diagram(24)
    text = render(d).text
    settings = make_settings(TaskKind.GEN_VERBATIM)
    t = GenerationTrial(settings, d, text, generation_prompt(TaskKind.GEN_VERBATIM, text),
                        ground_truth={"reference": d.to_json()})
    return "gen-verbatim-stretched", t


def fenced(art):
    return f"Here is the image:\n```\n{art}\n```"


def build_campaign():
    """(trial records, prompt -> scripted responses)."""
    records, script = [], {}
    for s in RECOGNITION:
        for tid, t in build_trials(s, 6, SEED):
            rec = t.to_record(tid)
            script[rec["prompt"]] = [recognition_reply(len(records), rec["correct_label"])]
            records.append(rec)

    def gen(kind):
        return build_trials(make_settings(kind), 1, SEED)[0]

    tid, t = gen(TaskKind.GEN_VERBATIM)
    records.append(t.to_record(tid))
    script[t.prompt_text] = [fenced(t.reference_text)]

    tid, t = gen(TaskKind.GEN_ROTATION)
    records.append(t.to_record(tid))
    script[t.prompt_text] = [REFUSAL]

    tid, t = stretched_trial()
    records.append(t.to_record(tid))
    script[t.prompt_text] = [fenced((GOLDEN / "stretched_output.txt").read_text().rstrip("\n"))]

    tid, t = gen(TaskKind.GEN_SCALE)
    records.append(t.to_record(tid))
    script[t.prompt_text] = [PROSE, PROSE, fenced(upscale2(render(t.reference)).text)]

    tid, t = gen(TaskKind.GEN_TRANSLATION)
    records.append(t.to_record(tid))
    from boxart.grid import strip_margins
    shifted = "\n".join(" " + ln for ln in strip_margins(render(t.reference)).text.split("\n"))
    script[t.prompt_text] = [fenced(shifted)]
    return records, script


def run_campaign(out_dir):
    records, script = build_campaign()
    client = MockClient.per_prompt(script)
    run_trials(records, client, out_dir, max_parallel=4, clock=lambda: "2024-01-01T00:00:00.000+00:00")
    grades = sorted(read_jsonl(Path(out_dir) / GRADES), key=lambda g: g["trial_id"])
    return records, client, grades, to_csv(summarize(grades))
