"""Exception types shared across the package."""


class BoxArtError(Exception):
    """Base class for all errors raised by this package."""


class WidthTooSmall(BoxArtError):
    pass


class DoesNotFit(BoxArtError):
    pass


class OddDimensions(BoxArtError):
    pass


class NoSpacesAvailable(BoxArtError):
    pass


class BudgetUnsatisfiable(BoxArtError):
    pass


class NoFreeCorner(BoxArtError):
    pass


class InvalidSettings(BoxArtError):
    pass


class MaskMismatch(BoxArtError):
    def __init__(self, art_id: str, part: str, row: int, col: int):
        super().__init__(f"{art_id}/{part}: mask cell ({row}, {col}) differs from the full art")
        self.art_id, self.part, self.row, self.col = art_id, part, row, col


class UnknownPart(BoxArtError):
    pass


class VocabularyTooSmall(BoxArtError):
    pass


class InvalidArgs(BoxArtError):
    pass


class EmptyGroup(BoxArtError):
    pass
