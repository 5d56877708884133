"""Structured reports with stable field order and exact rationals as "p/q"."""
from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .linalg import RationalMatrix, Subspace

PASS, FAIL, INDETERMINATE = "pass", "fail", "indeterminate-to-cap"

EXIT_OK, EXIT_INVALID, EXIT_FAILED, EXIT_CAP = 0, 2, 3, 4


def jsonable(x: Any) -> Any:
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, RationalMatrix):
        return [[str(v) for v in row] for row in x.entries]
    if isinstance(x, Subspace):
        return [[str(v) for v in row] for row in x.basis]
    if isinstance(x, dict):
        return {_key(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (set, frozenset)):
        return [jsonable(v) for v in sorted(x, key=repr)]
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    return str(x)


def _key(k: Any) -> str:
    if isinstance(k, tuple):
        return ",".join(_key(p) for p in k)
    return str(k)


class Report:
    def __init__(self, command: str, instance=None):
        self.doc: dict = {"command": command}
        if instance is not None:
            self.doc["instance"] = {"name": instance.name, "kind": instance.kind, "digest": instance.digest}
        self.doc["checks"] = []
        self.doc["results"] = {}

    def check(self, name: str, ok, witnesses=(), **details) -> bool:
        status = PASS if ok is True else INDETERMINATE if ok is None else FAIL
        entry = {"name": name, "status": status}
        if witnesses:
            entry["witnesses"] = list(witnesses)
        entry.update(details)
        self.doc["checks"].append(entry)
        return ok is True

    def result(self, key: str, value: Any):
        self.doc["results"][key] = value

    def error(self, kind: str, message: str):
        self.doc["error"] = {"kind": kind, "message": message}

    @property
    def statuses(self) -> list[str]:
        return [c["status"] for c in self.doc["checks"]]

    def exit_code(self) -> int:
        if "error" in self.doc:
            return EXIT_CAP if self.doc["error"]["kind"] == "capacity" else EXIT_INVALID
        if FAIL in self.statuses:
            return EXIT_FAILED
        if INDETERMINATE in self.statuses:
            return EXIT_CAP
        return EXIT_OK

    def as_dict(self) -> dict:
        out = jsonable(self.doc)
        out["exit_code"] = self.exit_code()
        return out

    def dumps(self) -> str:
        return json.dumps(self.as_dict(), indent=2, ensure_ascii=False) + "\n"
