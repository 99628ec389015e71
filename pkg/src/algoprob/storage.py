"""Persistence of distributions and reports: canonical JSON, CSV export."""

import csv
import io
import logging
import math
from pathlib import Path

from pydantic import BaseModel, Field, ValidationError

from algoprob import __version__
from algoprob.models import (
    CorrelationReport,
    DistributionLoadError,
    IndexRange,
    PatternDistribution,
    PatternEntry,
    SourceDescriptor,
    canonical_key,
)

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1
FREQUENCY_TOLERANCE = 1e-12


class DistributionMetadata(BaseModel):
    source: SourceDescriptor
    seed: int | None = None
    total_runs: int
    contributing_runs: int
    shards: list[IndexRange] | None = None


class DistributionFile(BaseModel):
    """On-disk layout of a distribution."""

    format_version: int
    tool_version: str
    metadata: DistributionMetadata
    checksum: str
    entries: list[PatternEntry] = Field(default_factory=list)


def write_text_atomic(path: Path, text: str) -> Path:
    """Write through a temporary sibling file, then replace the destination."""
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(f".{path.name}.tmp")
    tmp.write_text(text, encoding="utf-8")
    tmp.replace(path)
    return path


def dump_distribution(d: PatternDistribution) -> str:
    """Canonical JSON text of a distribution."""
    document = DistributionFile(
        format_version=FORMAT_VERSION,
        tool_version=__version__,
        metadata=DistributionMetadata(
            source=d.source,
            seed=d.seed,
            total_runs=d.total_runs,
            contributing_runs=d.contributing_runs,
            shards=d.shards,
        ),
        checksum=d.checksum(),
        entries=d.entries(),
    )
    return document.model_dump_json(indent=2) + "\n"


def save_distribution(d: PatternDistribution, path: Path) -> Path:
    write_text_atomic(path, dump_distribution(d))
    logger.debug("Saved %d entries to %s", d.support_size, path)
    return path


def _error_field(error: ValidationError) -> str:
    first = error.errors()[0]
    return ".".join(str(part) for part in first["loc"]) or "document"


def parse_distribution(text: str) -> PatternDistribution:
    """Parse and verify distribution JSON text."""
    try:
        document = DistributionFile.model_validate_json(text)
    except ValidationError as e:
        raise DistributionLoadError(_error_field(e), str(e.errors()[0]["msg"])) from e

    if document.format_version != FORMAT_VERSION:
        raise DistributionLoadError(
            "format_version",
            f"expected {FORMAT_VERSION}, found {document.format_version}",
        )

    counts: dict[str, int] = {}
    for i, entry in enumerate(document.entries):
        if entry.string in counts:
            raise DistributionLoadError(f"entries.{i}.string", f"duplicate '{entry.string}'")
        counts[entry.string] = entry.count

    total = sum(counts.values())
    for i, entry in enumerate(document.entries):
        expected = entry.count / total
        if not math.isclose(entry.frequency, expected, rel_tol=0.0, abs_tol=FREQUENCY_TOLERANCE):
            raise DistributionLoadError(
                f"entries.{i}.frequency",
                f"{entry.frequency} does not match count {entry.count}/{total}",
            )
    ordered = sorted(counts.items(), key=canonical_key)
    if [e.string for e in document.entries] != [s for s, _ in ordered]:
        raise DistributionLoadError("entries", "entries are not in canonical order")

    meta = document.metadata
    try:
        d = PatternDistribution(
            source=meta.source,
            seed=meta.seed,
            total_runs=meta.total_runs,
            contributing_runs=meta.contributing_runs,
            counts=counts,
            shards=meta.shards,
        )
    except ValidationError as e:
        raise DistributionLoadError("metadata", str(e.errors()[0]["msg"])) from e

    if d.checksum() != document.checksum:
        raise DistributionLoadError("checksum", "entries do not match the stored checksum")
    return d


def load_distribution(path: Path) -> PatternDistribution:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise DistributionLoadError("path", f"cannot read '{path}': {e}") from e
    return parse_distribution(text)


def distribution_csv(d: PatternDistribution) -> str:
    """`string,count,frequency` rows in canonical order."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["string", "count", "frequency"])
    for entry in d.entries():
        writer.writerow([entry.string, entry.count, repr(entry.frequency)])
    return buffer.getvalue()


def save_distribution_csv(d: PatternDistribution, path: Path) -> Path:
    return write_text_atomic(path, distribution_csv(d))


def save_report(report: CorrelationReport, path: Path) -> Path:
    return write_text_atomic(path, report.model_dump_json(indent=2) + "\n")
