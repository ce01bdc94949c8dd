"""Reading check-in logs and flow matrices, and building mobility graphs.

Two input families are supported.  A *check-in log* is a list of
(user, country, timestamp) events from a location-based service, parsed
into a :class:`CheckinTable`; the home country of each user is inferred
from it and country-to-country flows are counted as distinct travellers.
A *flow matrix* is an already-aggregated origin/destination CSV, parsed
directly into a :class:`tourflow.graph.MobilityGraph`.
"""

from __future__ import annotations

import csv
import io
import json
import re
from dataclasses import dataclass
from datetime import datetime, timezone
from functools import cached_property
from pathlib import Path
from typing import IO, Iterable, Iterator

from .errors import ParseError
from .graph import MobilityGraph, is_country_code

_INT_RE = re.compile(r"[+-]?\d+$")

CHECKIN_FIELDS = ("user_id", "country", "timestamp")

# user id -> home country code
HomeAssignment = dict[str, str]


@dataclass(frozen=True)
class CheckinRecord:
    """A single check-in event; ``timestamp`` is epoch seconds (UTC)."""

    user_id: str
    country: str
    timestamp: int
    venue_id: str | None = None


@dataclass(frozen=True)
class CheckinTable:
    """Parsed check-in log plus aggregate counts derived from it.

    ``skipped`` reports how many malformed rows were dropped during a
    lenient parse; it is 0 after a strict parse.  The count properties
    are computed from ``records``, so they are exact by construction.
    """

    records: tuple[CheckinRecord, ...]
    skipped: int = 0

    @cached_property
    def country_counts(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for rec in self.records:
            counts[rec.country] = counts.get(rec.country, 0) + 1
        return counts

    @cached_property
    def user_country_counts(self) -> dict[str, dict[str, int]]:
        per_user: dict[str, dict[str, int]] = {}
        for rec in self.records:
            counts = per_user.setdefault(rec.user_id, {})
            counts[rec.country] = counts.get(rec.country, 0) + 1
        return per_user

    @property
    def users(self) -> tuple[str, ...]:
        return tuple(sorted(self.user_country_counts))


def _parse_timestamp(text: str) -> int:
    """Epoch seconds from an integer literal or an ISO-8601 string.

    Naive datetimes are taken as UTC; a trailing ``Z`` is accepted.
    """
    value = text.strip()
    if _INT_RE.match(value):
        return int(value)
    if value.endswith("Z"):
        value = value[:-1] + "+00:00"
    stamp = datetime.fromisoformat(value)
    if stamp.tzinfo is None:
        stamp = stamp.replace(tzinfo=timezone.utc)
    return int(stamp.timestamp())


def _open_lines(source: str | Path | IO[str]) -> tuple[Iterator[str], IO[str] | None]:
    if hasattr(source, "read"):
        return iter(source), None  # type: ignore[arg-type]
    handle = open(source, "r", encoding="utf-8", newline="")
    return iter(handle), handle


def _record_from_parts(
    user_id: str, country: str, timestamp: str, venue_id: str | None
) -> CheckinRecord:
    user = user_id.strip()
    code = country.strip()
    if not user:
        raise ValueError("empty user_id")
    if not is_country_code(code):
        raise ValueError(f"invalid country code {country!r}")
    venue = venue_id.strip() if venue_id is not None and venue_id.strip() else None
    return CheckinRecord(user, code, _parse_timestamp(timestamp), venue)


def _iter_csv_records(lines: Iterator[str]) -> Iterator[tuple[int, CheckinRecord | None]]:
    reader = csv.reader(lines)
    try:
        header = next(reader)
    except StopIteration:
        raise ParseError("check-in CSV is empty; expected a header row") from None
    header = [col.strip() for col in header]
    if tuple(header[:3]) != CHECKIN_FIELDS or len(header) > 4 or (
        len(header) == 4 and header[3] != "venue_id"
    ):
        raise ParseError(
            "check-in CSV must start with header user_id,country,timestamp[,venue_id]"
        )
    width = len(header)
    for row in reader:
        lineno = reader.line_num
        if not row:
            continue
        if len(row) != width:
            yield lineno, None
            continue
        try:
            venue = row[3] if width == 4 else None
            yield lineno, _record_from_parts(row[0], row[1], row[2], venue)
        except (ValueError, OverflowError):
            yield lineno, None


def _iter_ndjson_records(lines: Iterator[str]) -> Iterator[tuple[int, CheckinRecord | None]]:
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
            if not isinstance(obj, dict):
                raise ValueError("row is not a JSON object")
            venue = obj.get("venue_id")
            if venue is not None and not isinstance(venue, str):
                raise ValueError("venue_id must be a string")
            yield lineno, _record_from_parts(
                str(obj["user_id"]), str(obj["country"]), str(obj["timestamp"]), venue
            )
        except (ValueError, KeyError, TypeError, OverflowError):
            yield lineno, None


def parse_checkins(
    source: str | Path | IO[str], fmt: str = "csv", strict: bool = True
) -> CheckinTable:
    """Parse a check-in log into a :class:`CheckinTable`.

    Args:
        source: path to the log, or an open text stream.
        fmt: ``"csv"`` (header ``user_id,country,timestamp[,venue_id]``)
            or ``"ndjson"`` (one object per line with the same keys).
        strict: when True the first malformed row raises
            :class:`ParseError` naming its line number; when False
            malformed rows are skipped and counted.

    Returns:
        The parsed table; ``table.skipped`` holds the number of rows
        dropped in lenient mode.
    """
    if fmt not in ("csv", "ndjson"):
        raise ValueError(f"unknown check-in format {fmt!r}; expected 'csv' or 'ndjson'")
    lines, handle = _open_lines(source)
    try:
        rows = _iter_csv_records(lines) if fmt == "csv" else _iter_ndjson_records(lines)
        records: list[CheckinRecord] = []
        skipped = 0
        for lineno, rec in rows:
            if rec is None:
                if strict:
                    raise ParseError(f"malformed check-in row at line {lineno}")
                skipped += 1
            else:
                records.append(rec)
        return CheckinTable(tuple(records), skipped)
    finally:
        if handle is not None:
            handle.close()


def infer_homes(table: CheckinTable) -> HomeAssignment:
    """Assign each user the country holding most of their check-ins.

    Ties go to the lexicographically smallest country code, so the
    assignment is deterministic.  The table must contain at least one
    record.
    """
    if not table.records:
        raise ValueError("cannot infer home countries from an empty check-in table")
    homes: HomeAssignment = {}
    for user, counts in table.user_country_counts.items():
        homes[user] = min(counts, key=lambda code: (-counts[code], code))
    return homes


def filter_countries(table: CheckinTable, threshold: int = 1000) -> frozenset[str]:
    """Countries whose total check-in count strictly exceeds ``threshold``."""
    if threshold < 0:
        raise ValueError(f"threshold must be >= 0, got {threshold}")
    return frozenset(c for c, n in table.country_counts.items() if n > threshold)


def build_mobility_graph(
    table: CheckinTable,
    homes: HomeAssignment,
    allowed: Iterable[str],
    label: str = "",
) -> MobilityGraph:
    """Count distinct travellers between home and visited countries.

    An edge ``home -> visited`` gains one unit per user whose inferred
    home is ``home`` and who has at least one check-in in ``visited``.
    Users whose home country is not in ``allowed`` contribute nothing,
    and visited countries outside ``allowed`` are ignored.  The node set
    is exactly ``allowed`` (isolated countries included).
    """
    kept = frozenset(allowed)
    edges: dict[tuple[str, str], int] = {}
    for user, counts in table.user_country_counts.items():
        if user not in homes:
            raise ValueError(f"no home assignment for user {user!r}")
        home = homes[user]
        if home not in kept:
            continue
        for country in counts:
            if country != home and country in kept:
                pair = (home, country)
                edges[pair] = edges.get(pair, 0) + 1
    return MobilityGraph(tuple(sorted(kept)), edges, label)


def parse_flow_matrix(source: str | Path | IO[str], label: str = "") -> MobilityGraph:
    """Parse an aggregated flow CSV into a :class:`MobilityGraph`.

    The stream must carry a header ``origin,destination,count`` followed
    by one row per directed edge.  Lines starting with ``#`` are
    comments, except that ``# nodes: AA BB ...`` lines contribute
    (possibly isolated) nodes; :func:`tourflow.graph.export_graph`
    writes such a line so graphs round-trip exactly.
    """
    lines, handle = _open_lines(source)
    try:
        nodes: set[str] = set()
        data_lines: list[str] = []
        for raw in lines:
            stripped = raw.strip()
            if stripped.startswith("#"):
                body = stripped[1:].strip()
                if body.startswith("nodes:"):
                    for code in body[len("nodes:"):].split():
                        if not is_country_code(code):
                            raise ParseError(f"invalid country code {code!r} in nodes line")
                        nodes.add(code)
                continue
            if stripped:
                data_lines.append(raw)
        reader = csv.reader(io.StringIO("".join(data_lines)))
        try:
            header = [col.strip() for col in next(reader)]
        except StopIteration:
            raise ParseError("flow matrix is empty; expected header origin,destination,count") from None
        if header != ["origin", "destination", "count"]:
            raise ParseError("flow matrix header must be origin,destination,count")
        edges: dict[tuple[str, str], int] = {}
        for rownum, row in enumerate(reader, start=2):
            if len(row) != 3:
                raise ParseError(f"flow matrix row {rownum} has {len(row)} fields, expected 3")
            origin, dest, count_text = (field.strip() for field in row)
            if not is_country_code(origin) or not is_country_code(dest):
                raise ParseError(f"invalid country code in flow matrix row {rownum}")
            if origin == dest:
                raise ParseError(f"self-loop {origin}->{dest} in flow matrix row {rownum}")
            if not _INT_RE.match(count_text) or int(count_text) < 1:
                raise ParseError(f"count must be a positive integer in flow matrix row {rownum}")
            pair = (origin, dest)
            if pair in edges:
                raise ParseError(f"duplicate edge {origin}->{dest} in flow matrix row {rownum}")
            edges[pair] = int(count_text)
            nodes.add(origin)
            nodes.add(dest)
        return MobilityGraph(tuple(sorted(nodes)), edges, label)
    finally:
        if handle is not None:
            handle.close()
