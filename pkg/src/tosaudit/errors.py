"""Exception types shared across the package."""


class TosAuditError(Exception):
    """Base class for all package errors."""


class FetchError(TosAuditError):
    """Network failure, bad HTTP status, or timeout while fetching a URL.

    Carries the URL and a short cause tag so callers can distinguish
    failure modes without parsing the message.
    """

    def __init__(self, url, cause, detail=""):
        self.url = url
        self.cause = cause
        msg = f"{cause} for {url}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class CorpusError(TosAuditError):
    """Digest mismatch, missing payload, or malformed manifest."""


class ExtractionError(TosAuditError):
    """Payload cannot be turned into analyzable text."""


class LexiconError(TosAuditError):
    """Malformed or invalid lexicon file."""


class DegenerateDocumentError(TosAuditError):
    """Raised when a document has no words or no sentences."""


class ReviewError(TosAuditError):
    """Unmatched or malformed review records."""


class AssessmentError(TosAuditError):
    """Invalid interface assessment record."""
