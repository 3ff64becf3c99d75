"""Downloader for National Grid historic-demand files.

These files need no login, so fetching them is plain HTTP plumbing; the
Elexon side stays a manual download because it sits behind a per-user
portal account. URLs are pure configuration (`fetch_url_ng = url[,url...]`),
files keep their original names, and every download is recorded with a
digest so a changed upstream file is noticed instead of silently replacing
the copy already used in a run.
"""

from __future__ import annotations

import hashlib
import os
import time
from dataclasses import dataclass
from pathlib import Path
from urllib.parse import urlparse

import requests

from .config import PipelineConfig
from .errors import ConflictError, ConfigError, FetchError

MANIFEST_NAME = "downloads.sha256"


@dataclass(frozen=True)
class FetchResult:
    path: Path
    digest: str
    status: str  # "saved" | "unchanged"


def _filename_from_url(url: str) -> str:
    name = Path(urlparse(url).path).name
    if not name:
        raise ConfigError(f"cannot derive a filename from URL {url!r}")
    return name


def _download(url: str, retries: int, timeout: float) -> bytes:
    last: Exception | None = None
    for attempt in range(retries + 1):
        try:
            response = requests.get(url, timeout=timeout)
        except requests.RequestException as exc:
            last = exc
            time.sleep(min(2.0 * attempt + 0.5, 5.0))
            continue
        if response.status_code != 200:
            raise FetchError(f"GET {url} returned HTTP {response.status_code}")
        return response.content
    raise FetchError(f"GET {url} failed after {retries + 1} attempt(s): {last}")


def _update_manifest(directory: Path, filename: str, digest: str) -> None:
    manifest = directory / MANIFEST_NAME
    entries: dict[str, str] = {}
    if manifest.is_file():
        for line in manifest.read_text(encoding="utf-8").splitlines():
            if line.strip():
                value, _, name = line.partition("  ")
                entries[name] = value
    entries[filename] = digest
    lines = [f"{entries[name]}  {name}" for name in sorted(entries)]
    manifest.write_text("\n".join(lines) + "\n", encoding="utf-8")


def fetch_source(
    source: str,
    config: PipelineConfig,
    *,
    force: bool = False,
    retries: int = 2,
    timeout: float = 60.0,
) -> list[FetchResult]:
    """Download every configured URL for a source into its data directory.

    A file that already exists with identical content is left alone; one
    that exists with different content raises unless force is given.
    """
    if source != "ng":
        raise ConfigError(f"unknown fetch source {source!r} (only 'ng' is supported)")
    urls = config.fetch_urls.get(source, [])
    if not urls:
        raise ConfigError(f"no fetch_url_{source} configured")
    config.require("ng_dir")
    directory = Path(config.ng_dir)
    directory.mkdir(parents=True, exist_ok=True)

    results = []
    for url in urls:
        name = _filename_from_url(url)
        content = _download(url, retries, timeout)
        digest = hashlib.sha256(content).hexdigest()
        target = directory / name
        if target.exists():
            existing = hashlib.sha256(target.read_bytes()).hexdigest()
            if existing == digest:
                results.append(FetchResult(target, digest, "unchanged"))
                _update_manifest(directory, name, digest)
                continue
            if not force:
                raise ConflictError(
                    f"{target} already exists with different content "
                    f"(existing {existing[:12]}, downloaded {digest[:12]}); "
                    f"use --force to overwrite"
                )
        tmp = target.with_name(f"{target.name}.tmp-{os.getpid()}")
        tmp.write_bytes(content)
        os.replace(tmp, target)
        _update_manifest(directory, name, digest)
        results.append(FetchResult(target, digest, "saved"))
    return results
