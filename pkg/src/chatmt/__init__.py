"""chatmt: chat-corpus curation, translation orchestration, metric scoring,
and blinded human preference evaluation for Russian-to-English translation
of hacktivist channel messages."""

__version__ = "0.1.0"
