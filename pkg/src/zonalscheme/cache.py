"""On-disk cache for transition matrices.

Each entry is one file: a plain-text header line followed by a
zlib-compressed JSON body. The header records the format version, the key
and a sha256 of the body. A missing, truncated or mismatched file is treated
as absent and rebuilt.
"""

from __future__ import annotations

import hashlib
import json
import os
import re
import tempfile
import zlib
from fractions import Fraction
from pathlib import Path

from . import symfunc
from .symfunc import RationalMatrix

FORMAT_VERSION = 1
MAGIC = "ZSCACHE"
ENV_VAR = "ZS_CACHE_DIR"


def default_cache_dir() -> Path:
    env = os.environ.get(ENV_VAR)
    if env:
        return Path(env)
    return Path(os.environ.get("XDG_CACHE_HOME", Path.home() / ".cache")) / "zonalscheme"


def _key_text(key: tuple) -> str:
    return "-".join(str(Fraction(k)) if isinstance(k, Fraction) else str(k) for k in key)


def _filename(key: tuple) -> str:
    return re.sub(r"[^A-Za-z0-9_.-]", "_", _key_text(key)) + ".zsc"


def encode(key: tuple, matrix: RationalMatrix) -> bytes:
    body = zlib.compress(json.dumps(matrix.to_nested(), separators=(",", ":")).encode())
    digest = hashlib.sha256(body).hexdigest()
    header = f"{MAGIC} v{FORMAT_VERSION} key={_key_text(key)} sha256={digest}\n"
    return header.encode("ascii") + body


def decode(key: tuple, blob: bytes) -> RationalMatrix | None:
    """Parse a cache file; ``None`` if anything about it is off."""
    head, sep, body = blob.partition(b"\n")
    if not sep:
        return None
    try:
        fields = head.decode("ascii").split(" ")
    except UnicodeDecodeError:
        return None
    expected = [MAGIC, f"v{FORMAT_VERSION}", f"key={_key_text(key)}"]
    if len(fields) != 4 or fields[:3] != expected or not fields[3].startswith("sha256="):
        return None
    if hashlib.sha256(body).hexdigest() != fields[3][len("sha256="):]:
        return None
    try:
        return RationalMatrix.from_nested(json.loads(zlib.decompress(body)))
    except (zlib.error, ValueError, KeyError, StopIteration, ZeroDivisionError):
        return None


class DiskCache:
    def __init__(self, root: str | os.PathLike | None = None):
        self.root = Path(root) if root is not None else default_cache_dir()
        self.hits = 0
        self.misses = 0

    def path(self, key: tuple) -> Path:
        return self.root / _filename(key)

    def get(self, key: tuple) -> RationalMatrix | None:
        try:
            blob = self.path(key).read_bytes()
        except OSError:
            self.misses += 1
            return None
        value = decode(key, blob)
        if value is None:
            self.misses += 1
        else:
            self.hits += 1
        return value

    def put(self, key: tuple, value: RationalMatrix) -> None:
        try:
            self.root.mkdir(parents=True, exist_ok=True)
            fd, tmp = tempfile.mkstemp(dir=self.root, suffix=".tmp")
            with os.fdopen(fd, "wb") as fh:
                fh.write(encode(key, value))
            os.replace(tmp, self.path(key))
        except OSError:
            pass  # the cache is an accelerator only


def install(cache: DiskCache | None) -> None:
    """Route the symmetric-function memo through ``cache`` (``None`` detaches)."""
    symfunc.set_backing_store(cache)
