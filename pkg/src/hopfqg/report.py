"""Verification reports: named identities with pass/fail, witnesses and timings."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

from .exactlin import LinearMap, first_mismatch, format_scalar


def sparse_to_json(vec) -> dict:
    return {str(i): format_scalar(v) for i, v in sorted(vec.items())}


def unflatten(index: int, dims: Sequence[int]) -> List[int]:
    """Split a row-major flattened index into per-factor basis indices."""
    out = []
    for d in reversed(dims):
        index, r = divmod(index, d)
        out.append(r)
    return out[::-1]


@dataclass
class Entry:
    name: str
    passed: bool
    witness: Optional[dict] = None
    seconds: float = 0.0
    detail: Optional[str] = None

    def to_json(self, timings: bool = False) -> dict:
        d = {"name": self.name, "passed": self.passed}
        if self.detail is not None:
            d["detail"] = self.detail
        if self.witness is not None:
            d["witness"] = self.witness
        if timings:
            d["seconds"] = round(self.seconds, 6)
        return d


@dataclass
class Report:
    suite: str
    entries: List[Entry] = field(default_factory=list)
    # facts that are reported but never fail, e.g. classification flags
    info: Dict[str, object] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries)

    def __bool__(self):
        return self.passed

    def __getitem__(self, name: str) -> Entry:
        for e in self.entries:
            if e.name == name:
                return e
        raise KeyError(name)

    def __contains__(self, name: str) -> bool:
        return any(e.name == name for e in self.entries)

    @property
    def failures(self) -> List[Entry]:
        return [e for e in self.entries if not e.passed]

    def add(self, name: str, passed: bool, witness=None, seconds: float = 0.0, detail=None) -> Entry:
        if not passed and witness is None:
            witness = {}
        e = Entry(name, bool(passed), witness, seconds, detail)
        self.entries.append(e)
        return e

    def identity(self, name: str, lhs: Sequence[LinearMap], rhs: Sequence[LinearMap],
                 dims: Optional[Sequence[int]] = None) -> Entry:
        """Record whether two composites (composition order) agree on every basis vector."""
        t0 = time.perf_counter()
        mm = first_mismatch(lhs, rhs)
        witness = None
        if mm is not None:
            j, a, b = mm
            witness = {"index": j, "lhs": sparse_to_json(a), "rhs": sparse_to_json(b)}
            if dims:
                witness["basis"] = unflatten(j, dims)
        return self.add(name, mm is None, witness, time.perf_counter() - t0)

    def merge(self, other: "Report", prefix: Optional[str] = None) -> "Report":
        for e in other.entries:
            name = f"{prefix}/{e.name}" if prefix else e.name
            self.entries.append(Entry(name, e.passed, e.witness, e.seconds, e.detail))
        for k, v in other.info.items():
            self.info[f"{prefix}/{k}" if prefix else k] = v
        return self

    def to_json(self, timings: bool = False) -> dict:
        out = {
            "suite": self.suite,
            "passed": self.passed,
            "total": len(self.entries),
            "failed": len(self.failures),
            "entries": [e.to_json(timings) for e in self.entries],
        }
        if self.info:
            out["info"] = self.info
        return out

    def dumps(self, timings: bool = False) -> str:
        """Canonical serialization; byte-identical across runs when ``timings`` is off."""
        return json.dumps(self.to_json(timings), indent=2, sort_keys=True) + "\n"

    def render(self) -> str:
        lines = [f"== {self.suite}"]
        for k, v in self.info.items():
            lines.append(f"  {k}: {json.dumps(v)}")
        for e in self.entries:
            mark = "PASS" if e.passed else "FAIL"
            line = f"  [{mark}] {e.name}"
            if e.detail:
                line += f"  ({e.detail})"
            lines.append(line)
            if not e.passed and e.witness:
                w = json.dumps(e.witness, sort_keys=True)
                if len(w) > 400:
                    w = w[:400] + " ..."
                lines.append(f"         witness: {w}")
        lines.append(f"  {len(self.entries) - len(self.failures)}/{len(self.entries)} passed")
        return "\n".join(lines)
