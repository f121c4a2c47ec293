"""Telemetry archive: the immutable output of a simulation run."""

import hashlib
from dataclasses import dataclass
from pathlib import Path

from .telemetry import (
    Annotation,
    FlowRecord,
    RecordFormatError,
    record_from_line,
    record_to_line,
)


@dataclass(frozen=True)
class TelemetryArchive:
    site_id: str
    records: tuple
    annotations: tuple[Annotation, ...]
    epoch_ms: int
    duration: float  # seconds
    tick: float

    def record_lines(self) -> list[str]:
        return [record_to_line(r) for r in self.records]

    def annotation_lines(self) -> list[str]:
        return [record_to_line(a) for a in self.annotations]

    def digest(self) -> str:
        """SHA-256 over the serialized records and annotations."""
        h = hashlib.sha256()
        for line in self.record_lines():
            h.update(line.encode("utf-8"))
            h.update(b"\n")
        h.update(b"\x00")
        for line in self.annotation_lines():
            h.update(line.encode("utf-8"))
            h.update(b"\n")
        return h.hexdigest()

    def write(self, records_path: str | Path, annotations_path: str | Path | None = None) -> None:
        records_path = Path(records_path)
        records_path.parent.mkdir(parents=True, exist_ok=True)
        with records_path.open("w", encoding="utf-8", newline="\n") as fh:
            for line in self.record_lines():
                fh.write(line)
                fh.write("\n")
        if annotations_path is None:
            annotations_path = records_path.with_suffix(records_path.suffix + ".truth")
        annotations_path = Path(annotations_path)
        with annotations_path.open("w", encoding="utf-8", newline="\n") as fh:
            for line in self.annotation_lines():
                fh.write(line)
                fh.write("\n")

    @property
    def flows(self) -> list[FlowRecord]:
        return [r for r in self.records if isinstance(r, FlowRecord)]

    @property
    def end_ms(self) -> int:
        return self.epoch_ms + int(self.duration * 1000)


def read_records(path: str | Path) -> list:
    """Load one line-delimited record file (telemetry or annotations)."""
    out = []
    with Path(path).open("r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                out.append(record_from_line(line))
            except RecordFormatError as exc:
                raise RecordFormatError(f"{path}:{lineno}: {exc}") from exc
    return out


def archive_from_records(records, annotations=(), site_id: str = "") -> TelemetryArchive:
    """Build an archive value from already-parsed records (e.g. a live stream)."""
    records = list(records)
    if records:
        epoch_ms = min(r.ts for r in records)
        last = max(getattr(r, "ts_end", r.ts) for r in records)
        duration = (last - epoch_ms) / 1000.0
    else:
        epoch_ms, duration = 0, 0.0
    return TelemetryArchive(
        site_id=site_id,
        records=tuple(records),
        annotations=tuple(annotations),
        epoch_ms=epoch_ms,
        duration=duration,
        tick=0.0,
    )


def read_archive(
    records_path: str | Path,
    annotations_path: str | Path | None = None,
    site_id: str = "",
) -> TelemetryArchive:
    """Rebuild an archive value from files written by :meth:`TelemetryArchive.write`.

    Timing metadata (epoch, duration, tick) is recovered from the record
    timestamps; it is only needed for reporting, not detection.
    """
    records_path = Path(records_path)
    records = read_records(records_path)
    if annotations_path is None:
        candidate = records_path.with_suffix(records_path.suffix + ".truth")
        annotations = read_records(candidate) if candidate.exists() else []
    else:
        annotations = read_records(annotations_path)
    return archive_from_records(records, annotations, site_id)
