"""Result cache: one JSON file per entry, named by a stable key hash.

Entries are versioned; a version mismatch invalidates.  Writers publish via
create-then-rename in the cache directory, so concurrent processes never see
a partial file.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile

CACHE_VERSION = "1"


def cache_key(parts):
    """Stable hash of a key mapping (sorted-key JSON, sha256)."""
    blob = json.dumps(parts, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:32]


class ResultCache:
    def __init__(self, directory):
        self.directory = directory
        os.makedirs(directory, exist_ok=True)

    def _path(self, key_parts):
        return os.path.join(self.directory, cache_key(key_parts) + ".json")

    def load(self, key_parts):
        path = self._path(key_parts)
        try:
            with open(path, encoding="utf-8") as fh:
                entry = json.load(fh)
        except (OSError, json.JSONDecodeError):
            return None
        if entry.get("version") != CACHE_VERSION or entry.get("key") != key_parts:
            return None
        return entry.get("payload")

    def store(self, key_parts, payload):
        entry = {"version": CACHE_VERSION, "key": key_parts, "payload": payload}
        blob = json.dumps(entry, sort_keys=True, separators=(",", ":"))
        fd, tmp = tempfile.mkstemp(dir=self.directory, suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                fh.write(blob)
            os.replace(tmp, self._path(key_parts))
        except BaseException:
            try:
                os.unlink(tmp)
            except OSError:
                pass
            raise

    def get_or_compute(self, key_parts, compute):
        hit = self.load(key_parts)
        if hit is not None:
            return hit
        payload = compute()
        self.store(key_parts, payload)
        return payload


class NullCache:
    def load(self, key_parts):
        return None

    def store(self, key_parts, payload):
        pass

    def get_or_compute(self, key_parts, compute):
        return compute()
