"""Domain error types raised across the package.

The HTTP layer maps these onto status codes; everything else lets them
propagate.
"""


class KidvoiceError(Exception):
    """Base class for every domain error."""


# --- audio front end ---------------------------------------------------------

class UnsupportedFormat(KidvoiceError):
    """WAV payload is well-formed but outside the ingestion contract."""


class CorruptHeader(KidvoiceError):
    """WAV payload is not a parseable RIFF/WAVE stream."""


class EmptySignal(KidvoiceError):
    """Operation needs at least one sample."""


class TooFewFrames(KidvoiceError):
    """Noise estimation needs more leading frames than the input has."""


# --- feature extraction ------------------------------------------------------

class BadConfig(KidvoiceError):
    """Configuration violates a precondition."""


class ShapeMismatch(KidvoiceError):
    """Array shapes are inconsistent with the configuration."""


# --- corpus store ------------------------------------------------------------

class CorpusError(KidvoiceError):
    """Speech database is in a state the operation cannot work with."""


class AgeOutOfRange(CorpusError):
    """Speaker age outside the supported 2-7 year band."""


class UnknownWord(CorpusError):
    """Word is not part of the active lexicon."""


class DuplicateUtteranceId(CorpusError):
    """Utterance id already present in the database."""


class TooFewRecordings(CorpusError):
    """A word has fewer recordings than a stratified split needs."""


class UnknownKeyword(CorpusError):
    """Association keyword is not part of the active lexicon."""


# --- recognizer --------------------------------------------------------------

class EmptySequence(KidvoiceError):
    """DTW input sequence has no frames."""


class DimMismatch(KidvoiceError):
    """DTW inputs disagree on feature dimensionality."""


class EmptyTemplateStore(KidvoiceError):
    """Recognition requested with no enrolled templates."""


class NotRejected(KidvoiceError):
    """Feedback path invoked on an accepted recognition result."""


# --- language model ----------------------------------------------------------

class EmptyLexicon(KidvoiceError):
    """Language model training needs a non-empty vocabulary."""


# --- dialog manager ----------------------------------------------------------

class EmptyAgenda(KidvoiceError):
    """Session initialisation needs at least one handler."""


class DuplicateHandlerName(KidvoiceError):
    """Agenda handler names must be unique."""


class SessionFinished(KidvoiceError):
    """Turn submitted to a session whose agenda is already empty."""


# --- speech output -----------------------------------------------------------

class UnknownIntent(KidvoiceError):
    """No response template registered for the intent id."""


class MissingSlot(KidvoiceError):
    """Response template requires a slot the caller did not provide."""


class UnmappedGrapheme(KidvoiceError):
    """Grapheme-to-phoneme rules do not cover a character."""

    def __init__(self, char: str, position: int, word: str):
        super().__init__(
            f"no grapheme rule covers {char!r} at position {position} in {word!r}"
        )
        self.char = char
        self.position = position
        self.word = word


# --- app shell ---------------------------------------------------------------

class NoTemplates(KidvoiceError):
    """Evaluation or recognition requested before any enrollment."""


class EmptySplit(KidvoiceError):
    """Requested corpus split holds no recordings."""


class UnknownSession(KidvoiceError):
    """No dialog session registered under the given id."""
