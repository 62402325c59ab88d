"""Versioned, deterministic JSON reports."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import Any

SCHEMA = "1"
PASS, FAIL, UNDETERMINED, INVALID_CONFIG = "pass", "fail", "undetermined", "invalid_config"
EXIT_CODES = {PASS: 0, FAIL: 1, INVALID_CONFIG: 2, UNDETERMINED: 3}


def config_hash(config: dict) -> str:
    blob = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()


@dataclass
class Report:
    command: str
    config: dict[str, Any]
    summary: str
    certificates: dict[str, Any] = field(default_factory=dict)
    timing: float | None = None
    schema: str = SCHEMA

    @property
    def config_hash(self) -> str:
        return config_hash(self.config)

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.summary]

    def to_dict(self, timing: bool = True) -> dict:
        out = {
            "schema": self.schema,
            "command": self.command,
            "config": self.config,
            "config_hash": self.config_hash,
            "summary": self.summary,
            "certificates": self.certificates,
        }
        if timing:
            out["timing_seconds"] = self.timing
        return out

    def to_json(self, timing: bool = True) -> str:
        return json.dumps(self.to_dict(timing), sort_keys=True, indent=2, ensure_ascii=False) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "Report":
        d = json.loads(text)
        if d.get("schema") != SCHEMA:
            raise ValueError(f"unsupported report schema {d.get('schema')!r}")
        r = cls(d["command"], d["config"], d["summary"], d["certificates"], d.get("timing_seconds"), d["schema"])
        if r.config_hash != d["config_hash"]:
            raise ValueError("config hash mismatch")
        return r
