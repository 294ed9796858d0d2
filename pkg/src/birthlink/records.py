"""Record data model, file I/O, and the seeded synthetic data generator.

Records are birth registrations: an integer id, a registration date, and a
map of attribute values where an absent key means the value is missing.
Files are comma-separated with a header row; an empty field reads back as a
missing value.
"""

import csv
import random
from dataclasses import dataclass, field
from datetime import date, timedelta
from pathlib import Path
from types import MappingProxyType
from typing import Iterator, Mapping

DEFAULT_SCHEMA: tuple[str, ...] = (
    "father_first",
    "father_last",
    "mother_first",
    "mother_last",
    "mother_maiden",
    "marriage_day",
    "marriage_month",
    "marriage_year",
    "marriage_place1",
    "marriage_place2",
    "father_occupation",
    "mother_occupation",
    "address1",
    "address2",
    "source_parish",
)

PARENT_NAME_ATTRIBUTES: tuple[str, ...] = DEFAULT_SCHEMA[:5]


@dataclass(frozen=True)
class Record:
    """One birth registration."""

    id: int
    timestamp: date
    attributes: Mapping[str, str]

    def __post_init__(self):
        if self.id < 0:
            raise ValueError(f"record id must be non-negative, got {self.id}")
        object.__setattr__(self, "attributes", MappingProxyType(dict(self.attributes)))


@dataclass(frozen=True)
class RecordSet:
    """An id-unique collection of records conforming to one schema."""

    records: tuple[Record, ...]
    schema: tuple[str, ...] = DEFAULT_SCHEMA

    def __post_init__(self):
        object.__setattr__(self, "records", tuple(self.records))
        object.__setattr__(self, "schema", tuple(self.schema))
        by_id: dict[int, Record] = {}
        allowed = set(self.schema)
        for rec in self.records:
            if rec.id in by_id:
                raise ValueError(f"duplicate record id {rec.id}")
            unknown = set(rec.attributes) - allowed
            if unknown:
                raise ValueError(
                    f"record {rec.id} has attributes outside the schema: {sorted(unknown)}"
                )
            by_id[rec.id] = rec
        object.__setattr__(self, "_by_id", by_id)

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self) -> Iterator[Record]:
        return iter(self.records)

    def ids(self) -> tuple[int, ...]:
        return tuple(rec.id for rec in self.records)

    def by_id(self, record_id: int) -> Record:
        try:
            return self._by_id[record_id]  # type: ignore[attr-defined]
        except KeyError:
            raise ValueError(f"unknown record id {record_id}") from None


@dataclass(frozen=True)
class GroundTruth:
    """Expert entity assignment: record id -> entity id."""

    assignment: Mapping[int, str]

    def __post_init__(self):
        object.__setattr__(self, "assignment", MappingProxyType(dict(self.assignment)))

    def __len__(self) -> int:
        return len(self.assignment)

    def entities(self) -> dict[str, frozenset[int]]:
        groups: dict[str, set[int]] = {}
        for record_id, entity_id in self.assignment.items():
            groups.setdefault(entity_id, set()).add(record_id)
        return {entity: frozenset(ids) for entity, ids in groups.items()}


def load_records(path: str | Path, schema: tuple[str, ...] = DEFAULT_SCHEMA) -> RecordSet:
    """Load a records file: columns `id`, `date` (ISO 8601), then the schema.

    Empty fields become missing values. Raises ValueError on a duplicate id
    (naming the id) or an unparseable date (naming the data row).
    """
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as handle:
        reader = csv.DictReader(handle)
        if reader.fieldnames is None:
            return RecordSet(records=(), schema=schema)
        missing_cols = ({"id", "date"} | set(schema)) - set(reader.fieldnames)
        if missing_cols:
            raise ValueError(f"records file {path} lacks columns: {sorted(missing_cols)}")
        records = []
        for row_num, row in enumerate(reader, start=1):
            try:
                record_id = int(row["id"])
            except ValueError:
                raise ValueError(f"data row {row_num}: unparseable id {row['id']!r}") from None
            try:
                timestamp = date.fromisoformat(row["date"])
            except ValueError:
                raise ValueError(
                    f"data row {row_num}: unparseable date {row['date']!r}"
                ) from None
            attributes = {a: row[a] for a in schema if row[a] != ""}
            records.append(Record(id=record_id, timestamp=timestamp, attributes=attributes))
    return RecordSet(records=tuple(records), schema=schema)


def save_records(record_set: RecordSet, path: str | Path) -> None:
    """Write a RecordSet in the format `load_records` reads, sorted by id."""
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(("id", "date") + record_set.schema)
        for rec in sorted(record_set, key=lambda r: r.id):
            row = [str(rec.id), rec.timestamp.isoformat()]
            row.extend(rec.attributes.get(a, "") for a in record_set.schema)
            writer.writerow(row)


def load_ground_truth(path: str | Path, records: RecordSet) -> GroundTruth:
    """Load a two-column (record id, entity id) file resolved against `records`.

    An empty file is a valid empty ground truth. A header row is skipped if
    present. Raises ValueError on record ids absent from `records`.
    """
    path = Path(path)
    assignment: dict[int, str] = {}
    with path.open(newline="", encoding="utf-8") as handle:
        for row_num, row in enumerate(csv.reader(handle), start=1):
            if not row:
                continue
            if row_num == 1 and not _is_int(row[0]):
                continue  # header
            if len(row) != 2:
                raise ValueError(f"row {row_num}: expected two columns, got {len(row)}")
            record_id = int(row[0])
            records.by_id(record_id)
            assignment[record_id] = row[1]
    return GroundTruth(assignment=assignment)


def save_ground_truth(ground_truth: GroundTruth, path: str | Path) -> None:
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(("record_id", "entity_id"))
        for record_id in sorted(ground_truth.assignment):
            writer.writerow((str(record_id), ground_truth.assignment[record_id]))


def _is_int(text: str) -> bool:
    try:
        int(text)
    except ValueError:
        return False
    return True


# --- Synthetic data -------------------------------------------------------
#
# The generator emulates the pathologies of transcribed historical birth
# registers: a small, heavily skewed name vocabulary, widespread missing
# values, typos, and noisy dates. Optionally it injects "lookalike" pairs:
# two distinct mothers with identical names whose births lie decades apart,
# which only temporal constraints can keep separate.

DEFAULT_MISSING_RATES: Mapping[str, float] = MappingProxyType(
    {
        "father_first": 0.08,
        "father_last": 0.08,
        "mother_first": 0.01,
        "mother_last": 0.02,
        "mother_maiden": 0.05,
        "marriage_day": 0.25,
        "marriage_month": 0.25,
        "marriage_year": 0.25,
        "marriage_place1": 0.35,
        "marriage_place2": 0.55,
        "father_occupation": 0.45,
        "mother_occupation": 0.70,
        "address1": 0.30,
        "address2": 0.55,
        "source_parish": 0.10,
    }
)

# Sibling gaps are drawn uniformly from this window (with occasional twins
# at <= 2 days), and an entity's total birth span is capped so that every
# within-entity pair stays fully plausible under the default temporal model
# even after date noise.
_GAP_MIN_DAYS = 280
_GAP_MAX_DAYS = 5 * 365
_SPAN_CAP_DAYS = 12000
_LOOKALIKE_GAP_MIN = 15000
_LOOKALIKE_GAP_MAX = 16500


@dataclass(frozen=True)
class SyntheticConfig:
    """Knobs for the synthetic register; output is a pure function of this."""

    num_entities: int = 1000
    max_births_per_entity: int = 8
    first_name_vocab: int = 800
    last_name_vocab: int = 500
    first_name_zipf: float = 1.0
    last_name_zipf: float = 1.0
    missing_rates: Mapping[str, float] = DEFAULT_MISSING_RATES
    typo_rate: float = 0.02
    date_noise_days: int = 2
    twin_rate: float = 0.03
    lookalike_rate: float = 0.0
    start_year: int = 1861
    end_year: int = 1901
    seed: int = 0

    def __post_init__(self):
        if self.num_entities < 1:
            raise ValueError("num_entities must be positive")
        if self.max_births_per_entity < 1:
            raise ValueError("max_births_per_entity must be positive")
        if self.first_name_vocab < 10 or self.last_name_vocab < 10:
            raise ValueError("name vocabularies must hold at least 10 names")
        rates = dict(self.missing_rates)
        for attr, rate in rates.items():
            if not 0.0 <= rate <= 1.0:
                raise ValueError(f"missing rate for {attr} outside [0, 1]")
        for name in ("typo_rate", "twin_rate", "lookalike_rate"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} outside [0, 1]")
        if self.date_noise_days < 0:
            raise ValueError("date_noise_days must be non-negative")
        if self.end_year < self.start_year:
            raise ValueError("end_year before start_year")
        object.__setattr__(self, "missing_rates", MappingProxyType(rates))

    @classmethod
    def from_dict(cls, data: Mapping) -> "SyntheticConfig":
        known = set(cls.__dataclass_fields__)
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown synthetic config keys: {sorted(unknown)}")
        return cls(**dict(data))


_ONSETS = (
    "b", "bl", "br", "c", "ch", "cr", "d", "dr", "f", "fl", "fr", "g", "gl",
    "gr", "h", "j", "k", "kn", "l", "m", "n", "p", "pr", "qu", "r", "s",
    "sh", "sk", "sl", "sm", "sp", "st", "t", "th", "tr", "v", "w", "wh", "y",
)
_VOWELS = ("a", "e", "i", "o", "u", "ai", "au", "ea", "ee", "io", "oa", "ou")
_CODAS = ("", "b", "ck", "d", "g", "l", "ld", "m", "n", "nd", "ng", "r",
          "rt", "s", "ss", "t", "th", "x")

# Distinct vocabulary names cropping up at Jaro-Winkler 0.72+ would blur the
# line between name variants and different names, so candidates too close
# to an existing same-initial name are rejected.
_VOCAB_SIMILARITY_CAP = 0.72


def _make_vocab(rng: random.Random, size: int, mc_prefix_rate: float = 0.0) -> list[str]:
    from .similarity import jaro_winkler

    names: list[str] = []
    by_initial: dict[str, list[str]] = {}
    attempts = 0
    while len(names) < size:
        attempts += 1
        if attempts > size * 400:
            raise ValueError(f"cannot generate {size} distinct names")
        syllables = rng.randint(2, 3)
        name = "".join(rng.choice(_ONSETS) + rng.choice(_VOWELS) for _ in range(syllables))
        name += rng.choice(_CODAS)
        if mc_prefix_rate and rng.random() < mc_prefix_rate:
            name = "mc" + name
        bucket = by_initial.setdefault(name[0], [])
        if any(jaro_winkler(name, other) >= _VOCAB_SIMILARITY_CAP for other in bucket):
            continue
        bucket.append(name)
        names.append(name)
    return names


def _zipf_picker(rng: random.Random, vocab: list[str], exponent: float):
    weights = [1.0 / (rank ** exponent) for rank in range(1, len(vocab) + 1)]
    cumulative = []
    total = 0.0
    for w in weights:
        total += w
        cumulative.append(total)

    def pick() -> str:
        return rng.choices(vocab, cum_weights=cumulative, k=1)[0]

    return pick


def _apply_typo(rng: random.Random, value: str) -> str:
    if not value:
        return value
    letters = "abcdefghijklmnopqrstuvwxyz"
    op = rng.randrange(4)
    pos = rng.randrange(len(value))
    if op == 0:  # substitute
        return value[:pos] + rng.choice(letters) + value[pos + 1 :]
    if op == 1:  # insert
        return value[:pos] + rng.choice(letters) + value[pos:]
    if op == 2 and len(value) > 1:  # delete
        return value[:pos] + value[pos + 1 :]
    if len(value) > 1:  # transpose
        pos = min(pos, len(value) - 2)
        return value[:pos] + value[pos + 1] + value[pos] + value[pos + 2 :]
    return rng.choice(letters)


def _entity_profile(rng, pick_first, pick_last, places, occupations, birth_year) -> dict[str, str]:
    father_last = pick_last()
    mother_maiden = pick_last()
    # Scottish registers record mothers under married or maiden last name
    mother_last = father_last if rng.random() < 0.55 else mother_maiden
    marriage_year = birth_year - rng.randint(1, 15)
    return {
        "father_first": pick_first(),
        "father_last": father_last,
        "mother_first": pick_first(),
        "mother_last": mother_last,
        "mother_maiden": mother_maiden,
        "marriage_day": str(rng.randint(1, 28)),
        "marriage_month": str(rng.randint(1, 12)),
        "marriage_year": str(marriage_year),
        "marriage_place1": rng.choice(places),
        "marriage_place2": rng.choice(places),
        "father_occupation": rng.choice(occupations),
        "mother_occupation": rng.choice(occupations),
        "address1": rng.choice(places),
        "address2": rng.choice(places),
        "source_parish": rng.choice(places),
    }


def _birth_dates(rng: random.Random, config: SyntheticConfig, first: date) -> list[date]:
    births = [first]
    target = rng.randint(1, config.max_births_per_entity)
    span = 0
    previous_was_twin = False
    while len(births) < target:
        if not previous_was_twin and rng.random() < config.twin_rate:
            gap = rng.randint(0, 2)
            previous_was_twin = True
        else:
            gap = rng.randint(_GAP_MIN_DAYS, _GAP_MAX_DAYS)
            previous_was_twin = False
        if span + gap > _SPAN_CAP_DAYS:
            break
        span += gap
        births.append(births[-1] + timedelta(days=gap))
    return births


def generate_synthetic(config: SyntheticConfig) -> tuple[RecordSet, GroundTruth]:
    """Generate a synthetic register with ground truth, bit-stable under seed."""
    rng = random.Random(config.seed)
    first_names = _make_vocab(rng, config.first_name_vocab)
    last_names = _make_vocab(rng, config.last_name_vocab, mc_prefix_rate=0.3)
    places = _make_vocab(rng, 48)
    occupations = _make_vocab(rng, 32)
    pick_first = _zipf_picker(rng, first_names, config.first_name_zipf)
    pick_last = _zipf_picker(rng, last_names, config.last_name_zipf)

    first_day = date(config.start_year, 1, 1).toordinal()
    last_day = date(config.end_year, 12, 31).toordinal()

    entities: list[tuple[str, dict[str, str], list[date]]] = []
    for index in range(config.num_entities):
        first_birth = date.fromordinal(rng.randint(first_day, last_day))
        profile = _entity_profile(
            rng, pick_first, pick_last, places, occupations, first_birth.year
        )
        entities.append((f"m{index:05d}", profile, _birth_dates(rng, config, first_birth)))

    num_lookalikes = int(round(config.lookalike_rate * config.num_entities))
    if num_lookalikes:
        originals = sorted(rng.sample(range(config.num_entities), num_lookalikes))
        for index in originals:
            _, profile, births = entities[index]
            offset = rng.randint(_LOOKALIKE_GAP_MIN, _LOOKALIKE_GAP_MAX)
            clone_first = births[-1] + timedelta(days=offset)
            clone_births = _birth_dates(rng, config, clone_first)[: rng.randint(1, 3)]
            entities.append((f"m{index:05d}x", dict(profile), clone_births))

    records: list[Record] = []
    assignment: dict[int, str] = {}
    next_id = 0
    for entity_id, profile, births in entities:
        for birth in births:
            attributes: dict[str, str] = {}
            for attr, value in profile.items():
                if rng.random() < config.missing_rates.get(attr, 0.0):
                    continue
                if rng.random() < config.typo_rate:
                    value = _apply_typo(rng, value)
                attributes[attr] = value
            recorded = birth
            if config.date_noise_days:
                recorded += timedelta(
                    days=rng.randint(-config.date_noise_days, config.date_noise_days)
                )
            records.append(Record(id=next_id, timestamp=recorded, attributes=attributes))
            assignment[next_id] = entity_id
            next_id += 1

    return RecordSet(records=tuple(records)), GroundTruth(assignment=assignment)
