"""Local JSON API for visual review of the half-hourly tables.

Serves weekly data windows from the raw dataset and accepts row-flag
updates, persisting them to the flag file that the pipeline reads on its
next run. Read endpoints serve consistent snapshots; flag writes are
serialized behind a single lock (single-writer store, many readers). The
service only ever mutates the flag set, never the power tables.

Endpoints (JSON, under /api):
    GET  /api/meta                                  coverage and column names
    GET  /api/window?start=&end=&source=ELEXM|NGEM  half-open UTC window
    GET  /api/flags?source=                         current flag entries
    POST /api/flags                                 {"source":…, "updates":[…]}

Anything outside /api serves the optional static review UI. The service is
a localhost tool: no authentication, one reviewer per instance assumed.
"""

from __future__ import annotations

import datetime as dt
import json
import mimetypes
import os
import re
import threading
from bisect import bisect_left
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import parse_qs, urlparse

import pandas as pd

from .config import PipelineConfig
from .errors import ConfigError, ValidationError
from .merge import read_espeni_csv
from .quality import SOURCES, FlagEntry, FlagSet, read_flag_csv, write_flag_csv

HALF_HOUR = dt.timedelta(minutes=30)


_PLUS_EATEN = re.compile(r"^(\d{4}-\d{2}-\d{2}T\d{2}:\d{2}:\d{2}) (\d{2}:\d{2})$")


def canonical_utc(text: str) -> str:
    value = text.strip().replace("Z", "+00:00")
    # an unencoded '+' in a query string decodes to a space; repair it
    value = _PLUS_EATEN.sub(r"\1+\2", value)
    try:
        parsed = dt.datetime.fromisoformat(value)
    except ValueError:
        raise ValidationError(f"not an ISO 8601 timestamp: {text!r}") from None
    if parsed.tzinfo is None:
        parsed = parsed.replace(tzinfo=dt.timezone.utc)
    return parsed.astimezone(dt.timezone.utc).isoformat(timespec="seconds")


def _column_values(series: pd.Series) -> list[int | None]:
    return [None if pd.isna(v) else int(v) for v in series]


class ReviewState:
    """In-memory snapshot of the raw table plus the live flag set."""

    def __init__(
        self,
        table: pd.DataFrame,
        flags: FlagSet,
        flag_path: Path | None = None,
        ui_dir: Path | None = None,
    ):
        self.lock = threading.Lock()
        self.flags = flags
        self.flag_path = Path(flag_path) if flag_path else None
        self.ui_dir = Path(ui_dir) if ui_dir else None

        self.keys: list[str] = list(
            table["ELEXM_SETTLEMENT_DATE"] + "_" + table["ELEXM_SETTLEMENT_PERIOD"]
        )
        self.key_set = set(self.keys)
        self.utc: list[str] = list(table["ELEXM_utc"])
        self.columns: dict[str, list[str]] = {
            "ELEXM": [c for c in table.columns if c.startswith("POWER_ELEXM_")],
            "NGEM": [c for c in table.columns if c.startswith("POWER_NGEM_")],
        }
        self.series: dict[str, list[int | None]] = {
            c: _column_values(table[c])
            for cols in self.columns.values()
            for c in cols
        }
        self.base_flags: dict[str, list[int]] = {}
        for source in SOURCES:
            col = f"{source}_ROWFLAG"
            if col in table.columns:
                self.base_flags[source] = [
                    1 if pd.isna(v) else int(v) for v in table[col]
                ]
            else:
                self.base_flags[source] = [1] * len(self.keys)

    # -- reads ----------------------------------------------------------

    def meta(self) -> dict:
        end = dt.datetime.fromisoformat(self.utc[-1]) + HALF_HOUR
        return {
            "start_utc": self.utc[0],
            "end_utc": end.isoformat(timespec="seconds"),
            "sources": list(SOURCES),
            "columns": {s: list(cols) for s, cols in self.columns.items()},
        }

    def current_flag(self, source: str, index: int) -> int:
        entry = self.flags.get(source, self.keys[index])
        if entry is not None:
            return entry.flag
        return self.base_flags[source][index]

    def window(self, start: str, end: str, source: str) -> dict:
        if source not in SOURCES:
            raise ValidationError(f"unknown source {source!r}")
        start_c, end_c = canonical_utc(start), canonical_utc(end)
        lo = bisect_left(self.utc, start_c)
        hi = bisect_left(self.utc, end_c)
        with self.lock:
            flags = [self.current_flag(source, i) for i in range(lo, hi)]
        return {
            "start_utc": start_c,
            "end_utc": end_c,
            "keys": self.keys[lo:hi],
            "series": {c: self.series[c][lo:hi] for c in self.columns[source]},
            "flags": flags,
        }

    def flag_entries(self, source: str) -> list[dict]:
        if source not in SOURCES:
            raise ValidationError(f"unknown source {source!r}")
        with self.lock:
            return [
                {
                    "datesp": e.datesp,
                    "flag": e.flag,
                    "note": e.note,
                    "updated_utc": e.updated_utc,
                }
                for e in self.flags.for_source(source)
            ]

    # -- writes ---------------------------------------------------------

    def apply_updates(self, source: str, updates: list[dict]) -> int:
        """Validate a whole batch, then apply and persist it atomically."""
        if source not in SOURCES:
            raise ValidationError(f"unknown source {source!r}")
        if not isinstance(updates, list) or not updates:
            raise ValidationError("updates must be a non-empty list")
        entries = []
        stamp = dt.datetime.now(dt.timezone.utc).isoformat(timespec="seconds")
        for u in updates:
            if not isinstance(u, dict) or "datesp" not in u or "flag" not in u:
                raise ValidationError("each update needs datesp and flag")
            key = str(u["datesp"])
            if key not in self.key_set:
                raise KeyError(key)
            flag = u["flag"]
            if flag not in (0, 1):
                raise ValidationError(f"flag must be 0 or 1, got {flag!r}")
            entries.append(
                FlagEntry(source, key, int(flag), str(u.get("note", "")), stamp)
            )
        with self.lock:
            for entry in entries:
                self.flags.set(entry)
            self._persist()
        return len(entries)

    def _persist(self) -> None:
        if self.flag_path is None:
            return
        tmp = self.flag_path.with_name(f"{self.flag_path.name}.tmp-{os.getpid()}")
        write_flag_csv(self.flags, tmp)
        os.replace(tmp, self.flag_path)


class ReviewHandler(BaseHTTPRequestHandler):
    server: "ReviewServer"

    def log_message(self, fmt, *args):  # quiet by default
        pass

    def _send_json(self, payload: dict | list, status: int = 200) -> None:
        data = json.dumps(payload).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(data)))
        self.end_headers()
        self.wfile.write(data)

    def _send_error_json(self, message: str, status: int) -> None:
        self._send_json({"error": message}, status)

    def do_GET(self):
        state = self.server.state
        url = urlparse(self.path)
        query = {k: v[0] for k, v in parse_qs(url.query).items()}
        try:
            if url.path == "/api/meta":
                self._send_json(state.meta())
            elif url.path == "/api/window":
                for param in ("start", "end", "source"):
                    if param not in query:
                        raise ValidationError(f"missing query parameter {param!r}")
                self._send_json(
                    state.window(query["start"], query["end"], query["source"])
                )
            elif url.path == "/api/flags":
                source = query.get("source", "ELEXM")
                self._send_json(state.flag_entries(source))
            elif url.path.startswith("/api/"):
                self._send_error_json("unknown endpoint", 404)
            else:
                self._serve_static(url.path)
        except ValidationError as exc:
            self._send_error_json(str(exc), 400)

    def do_POST(self):
        state = self.server.state
        if urlparse(self.path).path != "/api/flags":
            self._send_error_json("unknown endpoint", 404)
            return
        try:
            length = int(self.headers.get("Content-Length", "0"))
            body = json.loads(self.rfile.read(length) or b"{}")
            if not isinstance(body, dict):
                raise ValidationError("body must be a JSON object")
            applied = state.apply_updates(
                str(body.get("source", "")), body.get("updates", [])
            )
            self._send_json({"applied": applied})
        except KeyError as exc:
            self._send_error_json(f"unknown settlement key {exc.args[0]!r}", 404)
        except (ValidationError, json.JSONDecodeError) as exc:
            self._send_error_json(str(exc), 400)

    def _serve_static(self, path: str) -> None:
        state = self.server.state
        if state.ui_dir is None:
            self._send_error_json("no UI directory configured", 404)
            return
        name = "index.html" if path in ("", "/") else path.lstrip("/")
        target = (state.ui_dir / name).resolve()
        if not str(target).startswith(str(state.ui_dir.resolve())) or not target.is_file():
            self._send_error_json("not found", 404)
            return
        data = target.read_bytes()
        ctype = mimetypes.guess_type(target.name)[0] or "application/octet-stream"
        self.send_response(200)
        self.send_header("Content-Type", ctype)
        self.send_header("Content-Length", str(len(data)))
        self.end_headers()
        self.wfile.write(data)


class ReviewServer(ThreadingHTTPServer):
    daemon_threads = True

    def __init__(self, address: tuple[str, int], state: ReviewState):
        super().__init__(address, ReviewHandler)
        self.state = state


def _parse_listen(listen: str) -> tuple[str, int]:
    host, _, port = listen.rpartition(":")
    if not host or not port.isdigit():
        raise ConfigError(f"listen address must be host:port, got {listen!r}")
    return host, int(port)


def serve_review(
    config: PipelineConfig,
    table: pd.DataFrame | None = None,
    flags: FlagSet | None = None,
    listen: str | None = None,
) -> ReviewServer:
    """Build the service; the caller decides when to serve_forever()."""
    if table is None:
        config.require("out_dir")
        raw_path = Path(config.out_dir) / "espeni_raw.csv"
        if not raw_path.is_file():
            raise ConfigError(f"{raw_path} not found; run the pipeline first")
        table = read_espeni_csv(raw_path)
    if flags is None:
        if config.flag_path and Path(config.flag_path).is_file():
            flags = read_flag_csv(config.flag_path)
        else:
            flags = FlagSet()
    state = ReviewState(table, flags, config.flag_path, config.ui_dir)
    address = _parse_listen(listen or config.listen_address)
    return ReviewServer(address, state)
