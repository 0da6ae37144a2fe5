"""Event log model plus XES and CSV ingestion.

A log is an ordered list of traces, each a timestamp-ordered list of events.
Traces are kept sorted by the timestamp of their first event so that
positional windows over the log correspond to time order.
"""

from __future__ import annotations

import csv
import io
import json
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from datetime import datetime, timezone


class LogParseError(ValueError):
    """Raised when an input file cannot be read as an event log."""


@dataclass(frozen=True)
class Event:
    activity: str
    timestamp: datetime  # timezone-aware UTC, millisecond precision


@dataclass
class Trace:
    case_id: str
    events: list[Event]

    @property
    def start(self) -> datetime:
        return self.events[0].timestamp

    def activities(self) -> list[str]:
        return [e.activity for e in self.events]

    def __len__(self) -> int:
        return len(self.events)


@dataclass
class EventLog:
    traces: list[Trace]
    alphabet: tuple[str, ...] = field(default_factory=tuple)

    @classmethod
    def from_traces(cls, traces: list[Trace]) -> "EventLog":
        """Sort traces by start timestamp (stable) and derive the alphabet."""
        kept = [t for t in traces if t.events]
        for t in kept:
            t.events.sort(key=lambda e: e.timestamp)
        kept.sort(key=lambda t: t.start)
        alphabet = tuple(sorted({e.activity for t in kept for e in t.events}))
        return cls(traces=kept, alphabet=alphabet)

    def __len__(self) -> int:
        return len(self.traces)

    @property
    def n_events(self) -> int:
        return sum(len(t) for t in self.traces)

    @property
    def time_span(self) -> tuple[datetime, datetime]:
        if not self.traces:
            raise ValueError("empty log has no time span")
        lo = min(t.events[0].timestamp for t in self.traces)
        hi = max(t.events[-1].timestamp for t in self.traces)
        return lo, hi


def _to_utc_ms(dt: datetime) -> datetime:
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    dt = dt.astimezone(timezone.utc)
    return dt.replace(microsecond=(dt.microsecond // 1000) * 1000)


def parse_timestamp(text: str) -> datetime:
    """Parse an ISO-8601 timestamp, normalized to UTC with ms precision."""
    s = text.strip()
    if s.endswith("Z"):
        s = s[:-1] + "+00:00"
    try:
        return _to_utc_ms(datetime.fromisoformat(s))
    except ValueError:
        pass
    for fmt in ("%Y-%m-%d %H:%M:%S", "%Y/%m/%d %H:%M:%S", "%d.%m.%Y %H:%M:%S"):
        try:
            return _to_utc_ms(datetime.strptime(s, fmt))
        except ValueError:
            continue
    raise LogParseError(f"unparseable timestamp: {text!r}")


def format_timestamp(dt: datetime) -> str:
    dt = _to_utc_ms(dt)
    return dt.strftime("%Y-%m-%dT%H:%M:%S.") + f"{dt.microsecond // 1000:03d}+00:00"


def _local(tag) -> str:
    # drop any XML namespace prefix
    return tag.rsplit("}", 1)[-1] if isinstance(tag, str) else ""


def parse_xes(source) -> EventLog:
    """Parse an XES file (path, bytes, or file object) into an EventLog.

    Only ``concept:name`` and ``time:timestamp`` attributes are read; events
    missing either are a parse error. Empty traces are dropped.
    """
    if isinstance(source, bytes):
        source = io.BytesIO(source)
    try:
        tree = ET.parse(source)
    except ET.ParseError as exc:
        raise LogParseError(f"not well-formed XML: {exc}") from exc
    root = tree.getroot()
    if _local(root.tag) != "log":
        raise LogParseError(f"root element is <{_local(root.tag)}>, expected <log>")

    traces: list[Trace] = []
    for idx, tr in enumerate(el for el in root.iter() if _local(el.tag) == "trace"):
        case_id = f"case-{idx}"
        events: list[Event] = []
        for child in tr:
            tag = _local(child.tag)
            if tag == "string" and child.get("key") == "concept:name":
                case_id = child.get("value", case_id)
            elif tag == "event":
                activity = None
                ts = None
                for attr in child:
                    key = attr.get("key")
                    if key == "concept:name":
                        activity = attr.get("value")
                    elif key == "time:timestamp":
                        ts = attr.get("value")
                if activity is None:
                    raise LogParseError(f"event without concept:name in trace {case_id!r}")
                if ts is None:
                    raise LogParseError(f"event without time:timestamp in trace {case_id!r}")
                events.append(Event(activity, parse_timestamp(ts)))
        if events:
            traces.append(Trace(case_id, events))
    if not traces:
        raise LogParseError("log contains no non-empty traces")
    return EventLog.from_traces(traces)


def parse_csv(
    source,
    case_col: str = "case_id",
    activity_col: str = "activity",
    time_col: str = "timestamp",
    time_format: str | None = None,
) -> EventLog:
    """Parse a CSV file with one event per row, grouped into traces by case id."""
    if isinstance(source, bytes):
        source = io.StringIO(source.decode("utf-8-sig"))
    elif isinstance(source, str):
        source = open(source, newline="", encoding="utf-8-sig")
    reader = csv.DictReader(source)
    if reader.fieldnames is None:
        raise LogParseError("CSV file has no header row")
    for col in (case_col, activity_col, time_col):
        if col not in reader.fieldnames:
            raise LogParseError(f"CSV is missing column {col!r}")

    by_case: dict[str, list[Event]] = {}
    for lineno, row in enumerate(reader, start=2):
        case = row[case_col]
        activity = row[activity_col]
        raw_ts = row[time_col]
        if case is None or activity is None or raw_ts is None or activity == "":
            raise LogParseError(f"incomplete event row at line {lineno}")
        if time_format:
            try:
                ts = _to_utc_ms(datetime.strptime(raw_ts, time_format))
            except ValueError as exc:
                raise LogParseError(f"bad timestamp at line {lineno}: {raw_ts!r}") from exc
        else:
            ts = parse_timestamp(raw_ts)
        by_case.setdefault(case, []).append(Event(activity, ts))
    if not by_case:
        raise LogParseError("CSV contains no event rows")
    traces = [Trace(case, events) for case, events in by_case.items()]
    return EventLog.from_traces(traces)


def serialize_xes(log: EventLog) -> bytes:
    """Serialize to a minimal XES document; inverse of parse_xes."""
    out = io.StringIO()
    out.write('<?xml version="1.0" encoding="UTF-8"?>\n')
    out.write('<log xes.version="1.0">\n')
    for t in log.traces:
        out.write("  <trace>\n")
        out.write(f'    <string key="concept:name" value="{_xml_escape(t.case_id)}"/>\n')
        for e in t.events:
            out.write("    <event>\n")
            out.write(f'      <string key="concept:name" value="{_xml_escape(e.activity)}"/>\n')
            out.write(f'      <date key="time:timestamp" value="{format_timestamp(e.timestamp)}"/>\n')
            out.write("    </event>\n")
        out.write("  </trace>\n")
    out.write("</log>\n")
    return out.getvalue().encode("utf-8")


def serialize_csv(log: EventLog) -> str:
    """One event per row with the default column names; inverse of parse_csv."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["case_id", "activity", "timestamp"])
    for t in log.traces:
        for e in t.events:
            writer.writerow([t.case_id, e.activity, format_timestamp(e.timestamp)])
    return out.getvalue()


def _xml_escape(s: str) -> str:
    return (
        s.replace("&", "&amp;")
        .replace("<", "&lt;")
        .replace(">", "&gt;")
        .replace('"', "&quot;")
    )


def log_to_json(log: EventLog) -> dict:
    return {
        "traces": [
            {
                "case_id": t.case_id,
                "events": [[e.activity, format_timestamp(e.timestamp)] for e in t.events],
            }
            for t in log.traces
        ]
    }


def log_from_json(data: dict) -> EventLog:
    traces = [
        Trace(t["case_id"], [Event(a, parse_timestamp(ts)) for a, ts in t["events"]])
        for t in data["traces"]
    ]
    return EventLog.from_traces(traces)


def load_log(path: str, **csv_kwargs) -> EventLog:
    """Load a log from a path, dispatching on extension (.xes/.xml vs .csv)."""
    lower = path.lower()
    if lower.endswith(".csv"):
        return parse_csv(path, **csv_kwargs)
    if lower.endswith((".xes", ".xml")):
        return parse_xes(path)
    with open(path, "rb") as fh:
        head = fh.read(512).lstrip()
    if head.startswith(b"<"):
        return parse_xes(path)
    return parse_csv(path, **csv_kwargs)


def dumps_canonical(data) -> str:
    """Canonical JSON used for every artifact that must be byte-stable."""
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
