"""Exception hierarchy. Everything raised for bad data derives from LexforgeError."""


class LexforgeError(Exception):
    """Base class for data errors (CLI exit code 2)."""


class CorpusFormatError(LexforgeError, ValueError):
    def __init__(self, message, token_index=None):
        self.token_index = token_index
        if token_index is not None:
            message = f"token {token_index}: {message}"
        super().__init__(message)


class InsufficientFrequencyError(LexforgeError, ValueError):
    pass


class DimensionError(LexforgeError, ValueError):
    pass


class UndefinedScoreError(LexforgeError, ValueError):
    pass


class AnchorOrderError(LexforgeError, ValueError):
    """Anchor points are not monotone, so they cannot cut the texts."""


class MissingVectorError(LexforgeError, KeyError):
    def __init__(self, word, side):
        self.word = word
        self.side = side
        super().__init__(f"no {side} vector for word {word!r}")

    def __str__(self):
        return self.args[0]
