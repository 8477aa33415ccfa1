"""Record parsing, inclusion filters, birth-year assignment, and cohorts.

The record file is a UTF-8 CSV with header
``name,sex,age,year,kind,location,native_born`` (sex codes F/M/U, empty
string for absent optionals).  Malformed rows are collected with a reason
rather than silently dropped so that sample construction stays auditable.
"""

from __future__ import annotations

import csv
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import IO, Iterable, Sequence

from .standardize import (
    MAX_NAME_LEN,
    CodingTable,
    Sex,
    apply_coding,
    correct_sex,
    truncate_name,
)

RECORD_HEADER = ("name", "sex", "age", "year", "kind", "location", "native_born")
REJECT_HEADER = RECORD_HEADER + ("reason",)

MANDATORY_COLUMNS = ("name", "sex", "year")

YEAR_MIN, YEAR_MAX = 1000, 2100
AGE_MIN, AGE_MAX = 0, 110

DEFAULT_GENERIC_NAMES = frozenset({"MR", "MRS", "WIDOW", "INFANT"})


class ParseError(ValueError):
    """The record stream cannot be parsed at all (bad header, unreadable)."""


class AgeUnresolvableError(ValueError):
    """No age and no applicable default: the birth year cannot be assigned."""


class RecordKind(Enum):
    CENSUS = "census"
    MARRIAGE = "marriage"
    ADULT_ROSTER = "adult_roster"
    BIRTH_REGISTER = "birth_register"
    OTHER = "other"


@dataclass(frozen=True)
class NameRecord:
    """One raw observation of a person's given name."""

    raw_name: str
    sex: Sex
    record_year: int
    record_kind: RecordKind = RecordKind.OTHER
    age: int | None = None
    location: str | None = None
    native_born: bool | None = None

    def __post_init__(self) -> None:
        if not YEAR_MIN <= self.record_year <= YEAR_MAX:
            raise ValueError(
                f"record_year {self.record_year} outside [{YEAR_MIN}, {YEAR_MAX}]"
            )
        if self.age is not None and not AGE_MIN <= self.age <= AGE_MAX:
            raise ValueError(f"age {self.age} outside [{AGE_MIN}, {AGE_MAX}]")


@dataclass(frozen=True)
class FilterPolicy:
    """Inclusion rules applied to truncated names.

    Generic-name matching is case-insensitive and happens after
    truncation, so "Widow Smith" matches WIDOW.
    """

    drop_single_letter: bool = True
    generic_names: frozenset[str] = DEFAULT_GENERIC_NAMES
    require_native_born: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "generic_names", frozenset(n.upper() for n in self.generic_names)
        )


@dataclass(frozen=True)
class CohortSpec:
    """A sex and an inclusive birth-year span, plus age defaults.

    Records without an age field get an assumed age: 25 years for
    marriage records and 35 years for adult rosters.
    """

    sex: Sex
    birth_year_start: int
    birth_year_end: int
    default_age_marriage: int = 25
    default_age_adult: int = 35

    def __post_init__(self) -> None:
        if self.birth_year_start > self.birth_year_end:
            raise ValueError(
                f"birth_year_start {self.birth_year_start} > "
                f"birth_year_end {self.birth_year_end}"
            )

    @property
    def label(self) -> str:
        if self.birth_year_start == self.birth_year_end:
            return str(self.birth_year_start)
        return f"{self.birth_year_start}-{self.birth_year_end}"


@dataclass(frozen=True)
class Cohort:
    """Standardized-name multiset for one sex and birth-year span."""

    spec: CohortSpec
    names: Counter = field(default_factory=Counter)

    @property
    def sample_size(self) -> int:
        return sum(self.names.values())


@dataclass(frozen=True)
class RejectedRow:
    """A raw input row that could not be parsed, with the field text kept."""

    fields: dict[str, str]
    reason: str


@dataclass(frozen=True)
class ParseResult:
    records: list[NameRecord]
    rejected: list[RejectedRow]


@dataclass(frozen=True)
class FilterResult:
    kept: list[NameRecord]
    rejected: list[tuple[NameRecord, str]]


def _parse_row(row: dict[str, str]) -> NameRecord | RejectedRow:
    fields = {col: (row.get(col) or "").strip() for col in RECORD_HEADER}

    name = fields["name"]
    if not name:
        return RejectedRow(fields, "empty_name")

    try:
        sex = Sex.from_code(fields["sex"])
    except ValueError:
        return RejectedRow(fields, "bad_sex")

    try:
        year = int(fields["year"])
    except ValueError:
        return RejectedRow(fields, "bad_year")
    if not YEAR_MIN <= year <= YEAR_MAX:
        return RejectedRow(fields, "bad_year")

    age: int | None
    if fields["age"] == "":
        age = None
    else:
        try:
            age = int(fields["age"])
        except ValueError:
            return RejectedRow(fields, "bad_age")
        if not AGE_MIN <= age <= AGE_MAX:
            return RejectedRow(fields, "bad_age")

    if fields["kind"] == "":
        kind = RecordKind.OTHER
    else:
        try:
            kind = RecordKind(fields["kind"].lower())
        except ValueError:
            return RejectedRow(fields, "bad_kind")

    native: bool | None
    nb = fields["native_born"].lower()
    if nb == "":
        native = None
    elif nb in ("true", "1", "yes"):
        native = True
    elif nb in ("false", "0", "no"):
        native = False
    else:
        return RejectedRow(fields, "bad_native_born")

    return NameRecord(
        raw_name=name,
        sex=sex,
        record_year=year,
        record_kind=kind,
        age=age,
        location=fields["location"] or None,
        native_born=native,
    )


def parse_records(stream: IO[str]) -> ParseResult:
    """Parse a record CSV; malformed rows land in ``rejected`` with a reason.

    Raises :class:`ParseError` only for stream-level problems: no header,
    or the mandatory name/sex/year columns missing.
    """
    reader = csv.DictReader(stream)
    if reader.fieldnames is None:
        raise ParseError("record file is empty")
    missing = set(MANDATORY_COLUMNS) - set(reader.fieldnames)
    if missing:
        raise ParseError(f"record file missing mandatory columns: {sorted(missing)}")

    records: list[NameRecord] = []
    rejected: list[RejectedRow] = []
    for row in reader:
        if row.get(None) or any(v is None for k, v in row.items() if k is not None):
            rejected.append(
                RejectedRow(
                    {col: (row.get(col) or "") for col in RECORD_HEADER},
                    "malformed_row",
                )
            )
            continue
        parsed = _parse_row(row)
        if isinstance(parsed, RejectedRow):
            rejected.append(parsed)
        else:
            records.append(parsed)
    return ParseResult(records, rejected)


def _leading_letters(raw: str) -> str:
    s = raw.strip().upper()
    out = []
    for ch in s:
        if not ch.isalpha():
            break
        out.append(ch)
        if len(out) == MAX_NAME_LEN:
            break
    return "".join(out)


def filter_records(
    records: Sequence[NameRecord],
    policy: FilterPolicy,
    table: CodingTable | None = None,
) -> FilterResult:
    """Partition records into kept and rejected-with-reason.

    Tests run on the truncated name.  Reasons, checked in order:
    ``single_letter`` (fewer than two leading letters), ``generic``,
    ``non_native`` (only when the policy requires native birth; unknown
    birthplace counts as non-native), and ``unparseable_sex`` (recorded
    sex unknown and the coding table, when given, has no override for the
    standardized name).  Every input row appears in exactly one output.
    """
    kept: list[NameRecord] = []
    rejected: list[tuple[NameRecord, str]] = []
    for record in records:
        trunc = _leading_letters(record.raw_name)
        if len(trunc) == 0 or (policy.drop_single_letter and len(trunc) == 1):
            rejected.append((record, "single_letter"))
            continue
        if trunc in policy.generic_names:
            rejected.append((record, "generic"))
            continue
        if policy.require_native_born and record.native_born is not True:
            rejected.append((record, "non_native"))
            continue
        if record.sex is Sex.UNKNOWN:
            resolved = Sex.UNKNOWN
            if table is not None and len(trunc) >= 2:
                std = apply_coding(table, trunc)
                resolved = correct_sex(table, std, Sex.UNKNOWN)
            if resolved is Sex.UNKNOWN:
                rejected.append((record, "unparseable_sex"))
                continue
        kept.append(record)
    return FilterResult(kept, rejected)


def assign_birth_year(record: NameRecord, spec: CohortSpec) -> int:
    """Birth year from the age field, or from the record kind's default age."""
    if record.age is not None:
        return record.record_year - record.age
    if record.record_kind is RecordKind.BIRTH_REGISTER:
        return record.record_year
    if record.record_kind is RecordKind.MARRIAGE:
        return record.record_year - spec.default_age_marriage
    if record.record_kind is RecordKind.ADULT_ROSTER:
        return record.record_year - spec.default_age_adult
    raise AgeUnresolvableError(
        f"age_unresolvable: {record.record_kind.value} record of {record.raw_name!r} "
        f"in {record.record_year} has no age and no default applies"
    )


def build_cohort(
    records: Iterable[NameRecord],
    spec: CohortSpec,
    table: CodingTable,
) -> Cohort:
    """Collect standardized names of records matching the spec.

    A record joins the cohort when its assigned birth year falls in the
    span and its sex, after coding-table correction, equals the spec's
    sex.  Records whose birth year cannot be resolved can never match a
    span and are skipped.  The result is an order-independent multiset;
    an empty cohort is returned rather than raised.
    """
    names: Counter = Counter()
    for record in records:
        try:
            birth_year = assign_birth_year(record, spec)
        except AgeUnresolvableError:
            continue
        if not spec.birth_year_start <= birth_year <= spec.birth_year_end:
            continue
        std = apply_coding(table, truncate_name(record.raw_name))
        if correct_sex(table, std, record.sex) is spec.sex:
            names[std] += 1
    return Cohort(spec, names)


def standardized_record(record: NameRecord, table: CodingTable) -> NameRecord:
    """Copy of ``record`` with the standardized name and corrected sex."""
    std = apply_coding(table, truncate_name(record.raw_name))
    return NameRecord(
        raw_name=std,
        sex=correct_sex(table, std, record.sex),
        record_year=record.record_year,
        record_kind=record.record_kind,
        age=record.age,
        location=record.location,
        native_born=record.native_born,
    )


def record_to_row(record: NameRecord) -> list[str]:
    """Record as CSV field texts in ``RECORD_HEADER`` order."""
    return [
        record.raw_name,
        record.sex.value,
        "" if record.age is None else str(record.age),
        str(record.record_year),
        record.record_kind.value,
        record.location or "",
        "" if record.native_born is None else str(record.native_born).lower(),
    ]


def write_records(records: Iterable[NameRecord], stream: IO[str]) -> None:
    """Write records in the standard record-file format."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(RECORD_HEADER)
    for record in records:
        writer.writerow(record_to_row(record))


def write_rejection_report(
    parse_rejects: Iterable[RejectedRow],
    filter_rejects: Iterable[tuple[NameRecord, str]],
    stream: IO[str],
) -> None:
    """Rejection report: the record format plus a trailing reason column."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(REJECT_HEADER)
    for row in parse_rejects:
        writer.writerow([row.fields.get(col, "") for col in RECORD_HEADER] + [row.reason])
    for record, reason in filter_rejects:
        writer.writerow(record_to_row(record) + [reason])
