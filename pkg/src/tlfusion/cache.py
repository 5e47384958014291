"""On-disk record cache keyed by a content hash."""
from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path

from . import __version__


def cache_key(operation: str, params: dict, field_config: dict) -> str:
    payload = json.dumps({"op": operation, "params": params, "field": field_config, "version": __version__},
                         sort_keys=True, default=str)
    return hashlib.sha256(payload.encode()).hexdigest()


class RecordCache:
    """Lists of JSON records stored one file per key; writes are atomic renames."""

    def __init__(self, directory: str | None):
        self.dir = Path(directory) if directory else None
        if self.dir is not None:
            self.dir.mkdir(parents=True, exist_ok=True)

    def _path(self, key: str) -> Path:
        return self.dir / key[:2] / f"{key}.json"

    def get(self, key: str) -> list[dict] | None:
        if self.dir is None:
            return None
        path = self._path(key)
        if not path.exists():
            return None
        return json.loads(path.read_text())

    def put(self, key: str, records: list[dict]) -> None:
        if self.dir is None:
            return
        path = self._path(key)
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
        with os.fdopen(fd, "w") as fh:
            json.dump(records, fh, sort_keys=True)
        os.replace(tmp, path)

    def fetch(self, key: str, compute) -> tuple[list[dict], bool]:
        """Cached records for ``key`` or the result of ``compute()``; the flag tells whether it was a hit."""
        hit = self.get(key)
        if hit is not None:
            return hit, True
        records = compute()
        self.put(key, records)
        return records, False
