"""Append-only JSON-lines results store.

One record per line, tagged with ``schema`` (currently 1) and a ``kind``
("census", "special", or "zp").  Census rows are the persisted unit of
reproducibility: re-running a census against the same store compares counts
and flags any drift.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import IO, Optional

from .cyclic import ZpCensusRow
from .engine import CensusRecord

__all__ = ["SCHEMA_VERSION", "ResultsStore", "export_census_csv"]

SCHEMA_VERSION = 1


class ResultsStore:
    def __init__(self, path: str | Path):
        self.path = Path(path)

    # -- raw line access ----------------------------------------------------

    def records(self, kind: Optional[str] = None) -> list[dict]:
        if not self.path.exists():
            return []
        out = []
        with self.path.open() as fh:
            for line_no, line in enumerate(fh, start=1):
                line = line.strip()
                if not line:
                    continue
                data = json.loads(line)
                if data.get("schema") != SCHEMA_VERSION:
                    raise ValueError(
                        f"{self.path}:{line_no}: unsupported schema {data.get('schema')!r}"
                    )
                if kind is None or data.get("kind") == kind:
                    out.append(data)
        return out

    def _append(self, kind: str, payload: dict) -> None:
        self.path.parent.mkdir(parents=True, exist_ok=True)
        record = {"schema": SCHEMA_VERSION, "kind": kind}
        record.update(payload)
        with self.path.open("a") as fh:
            fh.write(json.dumps(record, sort_keys=True) + "\n")

    # -- census rows ----------------------------------------------------------

    def append_census(self, record: CensusRecord) -> None:
        self._append("census", record.to_json())

    def find_census(self, n: int, profile_id: str) -> Optional[CensusRecord]:
        for data in self.records("census"):
            if data["n"] == n and data["profile_id"] == profile_id:
                return CensusRecord.from_json(data)
        return None

    # -- special-set rows -----------------------------------------------------

    def append_special(self, t: int, count_with_zero: int, count_all: int) -> None:
        self._append(
            "special", {"t": t, "count_with_zero": count_with_zero, "count_all": count_all}
        )

    def find_special(self, t: int) -> Optional[dict]:
        for data in self.records("special"):
            if data["t"] == t:
                return data
        return None

    # -- cyclic census rows -----------------------------------------------------

    def append_zp(self, row: ZpCensusRow) -> None:
        self._append("zp", row.to_json())

    def find_zp(self, p: int, s: int) -> Optional[dict]:
        for data in self.records("zp"):
            if data["p"] == p and data["s"] == s:
                return data
        return None


def export_census_csv(store: ResultsStore, out: IO[str]) -> int:
    """Write the stored census rows as CSV (n, profile_id, count, max_size);
    returns the number of rows written."""
    writer = csv.writer(out)
    writer.writerow(["n", "profile_id", "count", "max_size"])
    rows = store.records("census")
    for data in rows:
        writer.writerow([data["n"], data["profile_id"], data["count"], data["max_size"]])
    return len(rows)
