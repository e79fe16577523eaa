"""Exception types shared across the package."""


class UsastagError(Exception):
    """Base class for all domain errors raised by this package."""


class MalformedTag(UsastagError):
    """A tag string does not follow the category-label grammar."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class MalformedTemplate(UsastagError):
    """An MWE template cannot be compiled."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class DuplicateLabel(UsastagError):
    """The same category label occurs twice in an inventory file."""


class MissingTitle(UsastagError):
    """An inventory row has no title text."""


class EmptyGloss(UsastagError):
    """A gloss produced no tokens, so it cannot be embedded."""


class EmptyTable(UsastagError):
    """A frequency table with zero observations cannot be normalized."""


class InsufficientLabels(UsastagError):
    """Too few sampleable labels remain to draw distinct negatives."""


class EmptyDataset(UsastagError):
    """Training was requested on an empty example set."""


class EmptyCorpus(UsastagError):
    """A corpus operation was requested on an empty corpus."""


class AlignmentError(UsastagError):
    """Gold tokens and predictions do not share token indices."""


class CorpusFormatError(UsastagError):
    """A vertical-format corpus line cannot be parsed."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
