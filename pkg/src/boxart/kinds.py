"""Task kinds shared by trial construction and grading."""

from enum import Enum


class TaskKind(str, Enum):
    RECOG_VERBATIM = "recog-verbatim"
    RECOG_TRANSLATION = "recog-translation"
    RECOG_ROTATION = "recog-rotation"
    RECOG_NOISE = "recog-noise"
    RECOG_SCALE = "recog-scale"
    GEN_VERBATIM = "gen-verbatim"
    GEN_TRANSLATION = "gen-translation"
    GEN_NOISE = "gen-noise"
    GEN_SCALE = "gen-scale"
    GEN_ROTATION = "gen-rotation"

    @property
    def is_generation(self) -> bool:
        return self.value.startswith("gen-")


RECOGNITION_KINDS = tuple(k for k in TaskKind if not k.is_generation)
GENERATION_KINDS = tuple(k for k in TaskKind if k.is_generation)
