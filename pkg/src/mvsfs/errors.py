"""Exception hierarchy.

Everything raised on bad user input derives from :class:`InputError`; the CLI
maps those to exit code 2.
"""


class MVSError(Exception):
    """Base class for all errors raised by this package."""


class InputError(MVSError, ValueError):
    """Invalid user-supplied data or arguments."""


class DatasetMissing(InputError, FileNotFoundError):
    pass


class EmptyFile(InputError):
    pass


class MalformedRow(InputError):
    def __init__(self, line, reason):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


class SingleClass(InputError):
    pass


class EmptyDistribution(InputError):
    pass


class LengthMismatch(InputError):
    pass


class SymbolOutOfRange(InputError, IndexError):
    pass


class SearchSpaceTooLarge(InputError):
    pass


class EmptyTrainingSet(InputError):
    pass


class EmptyTestSet(InputError):
    pass
