from collections import Counter

import pytest
from hypothesis import given, strategies as st

from boxart.diagram import Diagram, render
from boxart.errors import InvalidSettings
from boxart.grid import CharGrid, NoiseSpec, char_histogram, strip_margins
from boxart.kinds import TaskKind
from boxart.rng import RandomStream
from boxart.trials import (MAX_REISSUES, TrialSettings, build_generation_trial,
                           build_trials, extract_choice_answer, make_settings, needs_reissue,
                           trial_from_record)

SETTINGS = {
    "verbatim": make_settings(TaskKind.RECOG_VERBATIM, size=0.6, names_shown=True),
    "translation": make_settings(TaskKind.RECOG_TRANSLATION),
    "rotation": make_settings(TaskKind.RECOG_ROTATION, size=0.3, names_shown=True),
    "noise": make_settings(TaskKind.RECOG_NOISE, noise_level=0.32, padding_kept=False),
    "scale-ref": make_settings(TaskKind.RECOG_SCALE, enlarged="ref", names_shown=True),
    "scale-cho": make_settings(TaskKind.RECOG_SCALE, enlarged="choices"),
}
seeds = st.integers(0, 2**63)


def trial(name, seed):
    # build_trials redraws the rare reference whose counts no peer can match
    return build_trials(SETTINGS[name], 1, seed)[0][1]


def clean_histograms(t):
    names = t.settings.names_shown
    out = []
    for lab in "ABC":
        d = Diagram.from_json(t.ground_truth["choices"][lab]["diagram"])
        out.append(char_histogram(render(d, names)))
    return out


def test_settings_invariants():
    with pytest.raises(InvalidSettings):
        TrialSettings(TaskKind.RECOG_NOISE, SETTINGS["verbatim"].gen_params, True)
    with pytest.raises(InvalidSettings):
        make_settings(TaskKind.RECOG_VERBATIM, noise_level=0.1)
    with pytest.raises(InvalidSettings):
        make_settings(TaskKind.GEN_VERBATIM, names_shown=False)
    ragged = make_settings(TaskKind.RECOG_NOISE, noise_level=0.04, padding_kept=False)
    assert ragged.gen_params.max_boxes <= 6


def test_settings_json_round_trip():
    for s in SETTINGS.values():
        assert TrialSettings.from_json(s.to_json()) == s


@given(seeds, st.sampled_from(sorted(SETTINGS)))
def test_trial_shape(seed, name):
    t = trial(name, seed)
    labels = [lab for lab, _ in t.choices]
    assert labels == ["A", "B", "C"]
    assert len({text for _, text in t.choices}) == 3
    derived = [lab for lab, c in t.ground_truth["choices"].items() if c["derived"]]
    assert derived == [t.correct_label]
    h = clean_histograms(t)
    assert h[0] == h[1] == h[2]


@given(seeds)
def test_verbatim_correct_is_reference(seed):
    t = trial("verbatim", seed)
    assert t.choice(t.correct_label) == t.reference_text


@given(seeds)
def test_translation_correct_has_same_content(seed):
    t = trial("translation", seed)
    ref, cor = CharGrid.from_text(t.reference_text), CharGrid.from_text(t.choice(t.correct_label))
    assert ref.height == ref.width == 48
    assert strip_margins(ref) == strip_margins(cor)
    assert t.ground_truth["choices"][t.correct_label]["offset"] != t.ground_truth["reference_offset"]


@given(seeds)
def test_noise_keeps_clean_cells(seed):
    t = trial("noise", seed)
    clean = render(Diagram.from_json(t.ground_truth["reference"]), False)
    ref = CharGrid.from_text(t.reference_text)
    cor = CharGrid.from_text(t.choice(t.correct_label))
    for r, row in enumerate(clean.rows):
        for c, ch in enumerate(row):
            if ch != " ":
                assert ref.cell(r, c) == cor.cell(r, c) == ch


@given(seeds)
def test_rotation_correct_is_rotated(seed):
    from boxart.diagram import rotate_cw
    t = trial("rotation", seed)
    d0 = Diagram.from_json(t.ground_truth["reference"])
    assert t.choice(t.correct_label) == render(rotate_cw(d0), True).text


@given(seeds)
def test_scale_enlarges_one_side(seed):
    t = trial("scale-ref", seed)
    assert CharGrid.from_text(t.reference_text).width == 24
    assert all(CharGrid.from_text(text).width == 12 for _, text in t.choices)
    t = trial("scale-cho", seed)
    assert CharGrid.from_text(t.reference_text).width == 12
    assert all(CharGrid.from_text(text).width == 24 for _, text in t.choices)


def test_names_shared_when_shown():
    t = trial("verbatim", 5)
    sets = [Diagram.from_json(c["diagram"]).names for c in t.ground_truth["choices"].values()]
    assert sets[0] == sets[1] == sets[2] and sets[0]


def test_correct_label_uniform():
    s = make_settings(TaskKind.RECOG_VERBATIM, size=0.3)
    n = 3000
    counts = Counter(t.correct_label for _, t in build_trials(s, n, seed=99))
    for lab in "ABC":
        assert abs(counts[lab] / n - 1 / 3) < 0.03


def test_build_trials_deterministic_and_records_round_trip():
    s = SETTINGS["noise"]
    a = build_trials(s, 5, seed=7)
    b = build_trials(s, 5, seed=7)
    assert [t.to_record(i) for i, t in a] == [t.to_record(i) for i, t in b]
    for tid, t in a:
        rec = t.to_record(tid)
        assert set(rec) == {"trial_id", "kind", "settings", "seed", "reference", "choices", "correct_label",
                            "prompt", "ground_truth"}
        assert trial_from_record(rec) == t


def test_generation_trials():
    for kind in (TaskKind.GEN_VERBATIM, TaskKind.GEN_TRANSLATION, TaskKind.GEN_NOISE, TaskKind.GEN_SCALE,
                 TaskKind.GEN_ROTATION):
        s = make_settings(kind)
        t = build_generation_trial(s, RandomStream(3))
        assert t.settings.names_shown and t.max_reissues == MAX_REISSUES
        rec = t.to_record("x")
        assert rec["max_reissues"] == 14 and "choices" not in rec
        assert trial_from_record(rec) == t
        width = CharGrid.from_text(t.reference_text).width
        assert width == {TaskKind.GEN_TRANSLATION: 48, TaskKind.GEN_SCALE: 12}.get(kind, 24)
    t = build_generation_trial(make_settings(TaskKind.GEN_NOISE), RandomStream(3))
    assert t.settings.noise == NoiseSpec(0.04)


@pytest.mark.parametrize("text,want", [
    ("(1) blah\n(2) blah\n(3) blah\n(4) The answer is Choice A because it matches.", "A"),
    ("I pick Choice b.", "B"),
    ("I cannot decide.", None),
    ("(1) Choice C looks odd.\n(4) Choice B", "B"),
    ("4) choice c", "C"),
    ("4. Choice A\n(4) Choice C", "C"),
    ("the choice and the other", None),
])
def test_extract_choice_answer(text, want):
    assert extract_choice_answer(text) == want


def test_needs_reissue():
    assert needs_reissue("ok")
    assert needs_reissue("one line\nanother line\nand a third line")
    t = build_generation_trial(make_settings(TaskKind.GEN_VERBATIM), RandomStream(1))
    assert not needs_reissue(t.reference_text)
