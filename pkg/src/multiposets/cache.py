"""On-disk result cache keyed by a digest of the instance."""
from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path

CACHE_ENV = "MULTIPOSETS_CACHE_DIR"


def instance_digest(instance: dict) -> str:
    blob = json.dumps(instance, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()


class ResultCache:
    def __init__(self, directory: str | Path) -> None:
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)

    @classmethod
    def from_env(cls, directory: str | Path | None = None) -> ResultCache | None:
        directory = directory or os.environ.get(CACHE_ENV)
        return cls(directory) if directory else None

    def _path(self, digest: str) -> Path:
        return self.directory / f"{digest}.json"

    def get(self, instance: dict) -> dict | None:
        path = self._path(instance_digest(instance))
        try:
            return json.loads(path.read_text())
        except (OSError, json.JSONDecodeError):
            return None

    def put(self, instance: dict, record: dict) -> None:
        path = self._path(instance_digest(instance))
        fd, tmp = tempfile.mkstemp(dir=self.directory, suffix=".tmp")
        try:
            with os.fdopen(fd, "w") as fh:
                json.dump(record, fh, sort_keys=True, separators=(",", ":"))
            os.replace(tmp, path)
        except BaseException:
            Path(tmp).unlink(missing_ok=True)
            raise
