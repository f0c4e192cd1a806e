"""Root exception for speechprep."""


class SpeechPrepError(Exception):
    """Base exception for all speechprep errors."""

    pass
