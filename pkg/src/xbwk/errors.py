"""Exception types shared across the package."""


class XbwkError(Exception):
    """Base class for all library errors."""


class RecordError(XbwkError, ValueError):
    """An input record is unusable; ``index`` is the 1-based record number."""

    def __init__(self, index: int, detail: str = ""):
        self.index = index
        msg = f"{type(self).__name__}({index})"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class DuplicateString(RecordError):
    pass


class EmptyString(RecordError):
    pass


class NulByte(RecordError):
    pass


class NotAPermutation(XbwkError, ValueError):
    pass


class NoSuchOccurrence(XbwkError, LookupError):
    pass


class LengthMismatch(XbwkError, ValueError):
    pass


class MalformedXbwl(XbwkError, ValueError):
    pass


class RootHasNoParent(XbwkError, LookupError):
    pass


class HypothesisViolated(XbwkError, ValueError):
    pass


class RepresentativeMismatch(XbwkError, ValueError):
    pass


class LeafMismatch(XbwkError, ValueError):
    pass


class InstanceTooLarge(XbwkError, ValueError):
    pass


class FormatError(XbwkError, ValueError):
    """A serialized container is corrupt or has the wrong magic/version."""


class MissingSection(FormatError):
    def __init__(self, tag: str):
        self.tag = tag
        super().__init__(f"container lacks section {tag!r}")
