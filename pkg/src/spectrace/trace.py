"""Parsing of dynamic-analysis event logs into documents of API-call words.

A log line in the event grammar looks like

    event(1501696951,8644,3120,api_RegQueryInfoKey(21900,0,...))

with the shape event(timestamp, process_id, thread_id, api_NAME(args)).
Only the call name matters downstream: the argument list is discarded, the
``api_`` prefix stripped, and the names collected in file order into a
document of words. Lines outside the grammar (banners, blank lines, sandbox
noise) are skipped and counted, never fatal.
"""
from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from typing import Iterable

from .errors import EmptyDocumentError, TraceParseError

log = logging.getLogger(__name__)

# Name runs up to the first '('; an event-shaped line with an empty name is
# malformed rather than skippable.
_EVENT_RE = re.compile(r"^event\((\d+),(\d+),(\d+),api_([^()\s]*)\(.*\)\)$")


@dataclass(frozen=True)
class Event:
    timestamp: int
    process_id: int
    thread_id: int
    api_name: str


@dataclass(frozen=True)
class Document:
    """Ordered API-call words of one execution trace."""

    words: tuple[str, ...]
    source_id: str

    def __len__(self) -> int:
        return len(self.words)


def parse_event_line(line: str) -> Event | None:
    """Parse one log line.

    Returns the Event on a grammar match, None for non-event lines, and
    raises TraceParseError for an event-shaped line whose name is empty.
    """
    m = _EVENT_RE.match(line.strip())
    if m is None:
        return None
    name = m.group(4)
    if not name:
        raise TraceParseError(f"event line with empty api name: {line.strip()!r}")
    return Event(int(m.group(1)), int(m.group(2)), int(m.group(3)), name)


def parse_trace(
    stream: str | Iterable[str],
    source_id: str,
    warn_nonmonotonic: bool = False,
) -> tuple[Document, int]:
    """Parse a whole trace log into a Document.

    File order is authoritative; timestamps are parsed but never used for
    reordering. Returns (document, skipped_line_count). Raises
    EmptyDocumentError when no line parses as an event.
    """
    lines = stream.splitlines() if isinstance(stream, str) else stream
    words: list[str] = []
    skipped = 0
    last_ts: int | None = None
    for line in lines:
        event = parse_event_line(line)
        if event is None:
            skipped += 1
            continue
        if warn_nonmonotonic and last_ts is not None and event.timestamp < last_ts:
            log.warning(
                "%s: timestamp %d after %d; keeping file order",
                source_id, event.timestamp, last_ts,
            )
        last_ts = event.timestamp
        words.append(event.api_name)
    if not words:
        raise EmptyDocumentError(f"{source_id}: no events parsed ({skipped} lines skipped)")
    return Document(tuple(words), source_id), skipped


def document_to_text(doc: Document) -> str:
    """Serialize a document as newline-separated tokens, one word per line."""
    return "".join(w + "\n" for w in doc.words)


def document_from_text(text: str, source_id: str) -> Document:
    words = tuple(w for w in (line.strip() for line in text.splitlines()) if w)
    return Document(words, source_id)
