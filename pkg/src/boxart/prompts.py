"""Prompt templates, reproduced character for character (typos included).

Models were queried with exactly these strings, so none of the wording is
"fixed" here: results only compare when prompts are byte-identical.
"""

from __future__ import annotations

from .kinds import TaskKind

FENCE = "```"

# ---- recognition -------------------------------------------------------------

_RECOG_OPENING = (
    "Instructions: I am about to show you a reference ASCII-art image, and then ask you a question "
    "about it in relation to three choices -labeled choice A, choice B , and choice C."
)
_RECOG_NAMES_NOTE = (
    " Note that in each illustration, the objects depicted are labeled with a unique name, which "
    "consists of an alphanumeric character and which appears inside the object they label next to "
    "one of the object's boundaries."
)
_RECOG_STEPS = (
    "(1) Describe the reference ASCII-art image.\n"
    "(2) Describe each of the ASCII-art choices, A, B, and C.\n"
    "(3) Describe how you would go about answering the question posed about the ASCII-art images "
    "to determine which choice is correct.\n"
    "(4) Name which choice you believe is correct, only stating the name of the choice and nothing else."
)

QUESTIONS = {
    TaskKind.RECOG_VERBATIM:
        "Which choice has ASCII-art that matches the reference ASCII-art exactly?",
    TaskKind.RECOG_TRANSLATION:
        "Which choice has ASCII-art that matches what the reference ASCII-art would look like after "
        "it has been moved left, right, up, or down? That is, which choice has ASCII-art that looks "
        "like the reference ASCII-art after a translation?",
    TaskKind.RECOG_ROTATION:
        "Which choice has ASCII-art that matches what the reference ASCII-art would look like if we "
        "rotate the reference image 90 degrees clockwise? In other words, which choice shows what "
        "the ASCII-art would look like if it underwent a quarter-turn clockwise?",
    TaskKind.RECOG_NOISE:
        "Ignoring the noisy characters injected into the depictions, which choice has ASCII-art "
        "which contains boxes that match the reference ASCII-art? That is, if we ignore characters "
        "that look like they are in the ASCII-artworks accidentally, which choice looks most like "
        "the reference ASCII-art?",
}
SCALE_QUESTION = (
    "Which choice has ASCII-art that matches what the reference ASCII-art would look like if we "
    "scaled the reference ASCII-art to {} its size?"
)


def scale_question(reference_enlarged: bool) -> str:
    return SCALE_QUESTION.format("half" if reference_enlarged else "double")


def fenced(art: str) -> str:
    return f"{FENCE}\n{art}\n{FENCE}"


def recognition_prompt(reference: str, question: str, choices, names_shown: bool) -> str:
    """``choices`` is a sequence of (label, text) in display order."""
    if names_shown:
        head = _RECOG_OPENING + _RECOG_NAMES_NOTE + " Your job is to do the following, in order:\n"
        head += _RECOG_STEPS + "\n"
        q = f"Question: {question}\n"
    else:
        head = _RECOG_OPENING + "  Your job is to do the following, in order:\n"
        head += _RECOG_STEPS + "\n\n"
        q = f"Question: {question}\n\n"
    body = f"Reference ASCII-art Image:\n{fenced(reference)}\n" + q
    body += "\n\n".join(f"Choice {label}:\n{fenced(text)}" for label, text in choices)
    return head + body


# ---- generation ----------------------------------------------------------------

VERBATIM_GEN = (
    "Instructions: I am about to show you a reference ASCII-art image. You are to return the "
    "ASCII-art image to me verbatim. Reference ASCII-art Image:\n"
)
_GEN_PREAMBLE = (
    "Instructions: I am about to show you a reference ASCII-art image, and then ask you questions "
    "about it and a task you must complete. The questions are numbered 1, 2, {numbering} and the task "
    "is indicated separately. The ASCII-art depicts a collection of boxes, some of which may be "
    "nested inside of other boxes. Note that in the ASCII-art, each box depicted is labeled with a "
    "unique name, which consists of an alphanumeric character and which appears in one of the box's "
    "corners.\n\nReference ASCII-art Image:\n"
)
_JOB = "\n\n     Your job is to do the following, in order:\n"

GEN_BODIES = {
    TaskKind.GEN_TRANSLATION: (
        "(1) Describe the reference ASCII-art image.\n"
        "(2) What would you do in order to form a piece of ASCII-art that matches what the reference "
        "ASCII-art would look like if it had no blank areas at the top of it and no empty left margin? "
        "That is, how would you change the reference ASCII-art to look like it was translated so that "
        "there was not unneeded empty space around it (while preserving all internal spacing and "
        "structured)?\n"
        "(3) What would the reference ASCII-art look like if it had no blank areas at the top of it and "
        "no empty left margin? That is, what would the reference ASCII-art look like after it has been "
        "translated so that there was not unneeded empty space around it?\n"
        "\n"
        "Task: Provide ASCII-art that matches what the reference ASCII-art would look like if it was "
        "translated to have no blank areas at the top of it and no empty left margin. That is, show a "
        "modified version of the reference ASCII-art that has been translated so that there is no "
        "unneeded empty space around it (while preserving internal spacing and structure)."
    ),
    TaskKind.GEN_NOISE: (
        "(1) Describe the reference ASCII-art image.\n"
        "(2) In the reference ASCII-art, the only characters that should be present are \"|\", \"-\", "
        "alphanumeric characters, or whitespace. All other characters are noise that should not be "
        "present. List what characters are present in the reference ASCII-art that are noise.\n"
        "(3) How would you remove noise from the reference ASCII-art so that only the characters that "
        "should be there are present?\n"
        "(4) What would the ASCII-art look like if each character that is noise was replaced with a "
        "single space character?\n"
        "\n"
        "Task: Provide what the reference ASCII-art would look like if you remove the noise and only "
        "leave the characters that should be present. Any single character you remove should be "
        "replace by a single space character."
    ),
    TaskKind.GEN_SCALE: (
        "(1) Describe the reference ASCII-art image.\n"
        "(2) What would you do in order to form a piece of ASCII-art that matches what the reference "
        "ASCII-art would look like if it was scaled up to double the size?\n"
        "(3) What would the reference ASCII-art look like if it was enlarge by a factor of two? That is, "
        "what would the reference ASCII-art look like if it was made twice as large?\n"
        "\n"
        "Task you must complete after answering the questions: Provide ASCII-art that matches what the "
        "reference ASCII-art would look like if we scaled the reference ASCII-art to double its size. "
        "That is, produce ASCII-art that has axis which are double the length of the reference, and "
        "which the images shown are enlarged respectively."
    ),
    TaskKind.GEN_ROTATION: (
        "(1) Describe the reference ASCII-art image.\n"
        "(2) What would you do in order to form a piece of ASCII-art that matches what the reference "
        "ASCII-art would look like if it was rotated 90 degrees clockwise? That is, what you you do in "
        "order to depict the reference image after a quarter-turn clockwise?\n"
        "(3) What would the reference ASCII-art look like if it was rotated 90 degrees clockwise? That "
        "is, what would the reference image look like after a quarter-turn clockwise?\n"
        "\n"
        "Task: Provide ASCII-art that matches what the reference ASCII-art would look like if it was "
        "rotated 90 degrees clockwise. That is, show the reference ASCII-art after it has been rotated "
        "a quarter-turn clockwise."
    ),
}


def generation_preamble(art: str, questions: int = 3) -> str:
    numbering = "3 and 4," if questions == 4 else "and 3,"
    return _GEN_PREAMBLE.format(numbering=numbering) + fenced(art)


def generation_prompt(kind: TaskKind, art: str) -> str:
    kind = TaskKind(kind)
    if kind == TaskKind.GEN_VERBATIM:
        return VERBATIM_GEN + fenced(art)
    body = GEN_BODIES[kind]
    questions = 4 if "\n(4) " in body else 3
    return generation_preamble(art, questions) + _JOB + body
