"""Delimited-text tables and the run manifest.

Every output table is a comma-separated file whose first line pins the
schema ("# schema: hfc/<kind>/v1"), followed by one header row and data
rows. Files are fully rewritten on every run, floats are serialized with
repr (shortest round-trip form, locale-independent), so identical runs
produce byte-identical files. The manifest records the resolved config and
a content digest that changes exactly when some output byte changes.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

SCHEMA_PREFIX = "# schema: "


def format_value(value) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return repr(float(value))
    if value is None:
        return ""
    return str(value)


def write_table(path, kind: str, columns, rows) -> Path:
    """Write a schema-versioned CSV; rows are sequences matching columns."""
    path = Path(path)
    lines = [f"{SCHEMA_PREFIX}hfc/{kind}/v1", ",".join(columns)]
    for row in rows:
        if len(row) != len(columns):
            raise ValueError(f"row width {len(row)} != {len(columns)} columns")
        lines.append(",".join(format_value(v) for v in row))
    path.write_text("\n".join(lines) + "\n")
    return path


def read_table(path):
    """Parse a schema-versioned CSV into (kind, columns, row dicts of str)."""
    lines = Path(path).read_text().splitlines()
    if not lines or not lines[0].startswith(SCHEMA_PREFIX):
        raise ValueError(f"{path}: missing schema line")
    schema = lines[0][len(SCHEMA_PREFIX):]
    parts = schema.split("/")
    if len(parts) != 3 or parts[0] != "hfc":
        raise ValueError(f"{path}: malformed schema tag {schema!r}")
    columns = lines[1].split(",")
    rows = []
    for line in lines[2:]:
        if not line:
            continue
        values = line.split(",")
        if len(values) != len(columns):
            raise ValueError(f"{path}: row width {len(values)} != header width {len(columns)}")
        rows.append(dict(zip(columns, values)))
    return parts[1], columns, rows


def sha256_file(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def content_digest(output_digests) -> str:
    """Digest over (name, sha256) pairs; independent of wall-clock fields."""
    payload = "\n".join(f"{name}:{digest}" for name, digest in output_digests)
    return hashlib.sha256(payload.encode("ascii")).hexdigest()


def write_manifest(path, command: str, config_dict: dict, outputs, duration_seconds: float,
                   version: str, extras: dict | None = None) -> Path:
    """Write the run manifest as JSON with sorted keys.

    `outputs` is a list of file paths; their digests define content_digest.
    duration_seconds is informational and excluded from the digest.
    """
    path = Path(path)
    digests = [(Path(p).name, sha256_file(p)) for p in outputs]
    manifest = {
        "schema": "hfc/manifest/v1",
        "command": command,
        "artifact_version": version,
        "config": config_dict,
        "seed_root": config_dict.get("seed_root"),
        "outputs": [{"path": name, "sha256": digest} for name, digest in digests],
        "content_digest": content_digest(digests),
        "duration_seconds": round(duration_seconds, 3),
    }
    if extras:
        manifest.update(extras)
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return path
