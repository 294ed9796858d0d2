"""Attribute similarity functions and weighted record-pair scoring.

A comparison profile lists the attributes to compare, a similarity function
per attribute, and a weight. The pair score is the weighted sum of
attribute similarities normalised by the total weight, so it always lands
in [0, 1]. Values are trimmed and case-folded before every comparison, and
a comparison involving a missing value scores 0 while its weight stays in
the denominator (see `ComparisonProfile.missing_excludes_weight` for the
alternative rule).
"""

from dataclasses import dataclass

from .records import Record

JW_PREFIX_SCALE = 0.1
JW_MAX_PREFIX = 4

SIMILARITY_FUNCTIONS = ("jaro_winkler", "exact", "year_difference")

PROFILE_NAMES = ("all", "parent-names", "parent-names-addresses")


def canonical(value: str | None) -> str:
    """Trimmed, case-folded comparison form; '' stands for missing."""
    if value is None:
        return ""
    return value.strip().casefold()


def _jaro(a: str, b: str) -> float:
    len_a, len_b = len(a), len(b)
    window = max(len_a, len_b) // 2 - 1
    if window < 0:
        window = 0
    matched_a = [False] * len_a
    matched_b = [False] * len_b
    matches = 0
    for i, ch in enumerate(a):
        lo = max(0, i - window)
        hi = min(i + window + 1, len_b)
        for j in range(lo, hi):
            if matched_b[j] or b[j] != ch:
                continue
            matched_a[i] = True
            matched_b[j] = True
            matches += 1
            break
    if matches == 0:
        return 0.0
    transpositions = 0
    j = 0
    for i in range(len_a):
        if not matched_a[i]:
            continue
        while not matched_b[j]:
            j += 1
        if a[i] != b[j]:
            transpositions += 1
        j += 1
    transpositions //= 2
    return (
        matches / len_a + matches / len_b + (matches - transpositions) / matches
    ) / 3.0


def jaro_winkler(a: str | None, b: str | None) -> float:
    """Jaro-Winkler similarity with prefix scale 0.1 over at most 4 characters.

    Missing or empty values score 0.0; equal non-empty strings score 1.0.
    """
    a = canonical(a)
    b = canonical(b)
    if not a or not b:
        return 0.0
    if a == b:
        return 1.0
    jaro = _jaro(a, b)
    prefix = 0
    for ch_a, ch_b in zip(a[:JW_MAX_PREFIX], b[:JW_MAX_PREFIX]):
        if ch_a != ch_b:
            break
        prefix += 1
    return jaro + prefix * JW_PREFIX_SCALE * (1.0 - jaro)


def exact(a: str | None, b: str | None) -> float:
    """1.0 iff both values are present and equal after canonicalisation."""
    a = canonical(a)
    b = canonical(b)
    if not a or not b:
        return 0.0
    return 1.0 if a == b else 0.0


def year_difference(a: str | None, b: str | None, max_gap: int = 10) -> float:
    """Linear decay 1 - |a-b|/max_gap, floored at 0; non-numeric values score 0."""
    try:
        year_a = int(canonical(a))
        year_b = int(canonical(b))
    except ValueError:
        return 0.0
    return max(0.0, 1.0 - abs(year_a - year_b) / max_gap)


@dataclass(frozen=True)
class AttributeComparator:
    """One attribute's similarity function and weight."""

    attribute: str
    function: str
    weight: float = 1.0
    max_year_gap: int = 10

    def __post_init__(self):
        if self.function not in SIMILARITY_FUNCTIONS:
            raise ValueError(f"unknown similarity function {self.function!r}")
        if self.weight <= 0:
            raise ValueError(f"weight for {self.attribute} must be positive")
        if self.max_year_gap < 1:
            raise ValueError("max_year_gap must be at least one year")

    def compare(self, a: str | None, b: str | None) -> float:
        """Raw (unweighted) similarity of two values."""
        if self.function == "jaro_winkler":
            return jaro_winkler(a, b)
        if self.function == "exact":
            return exact(a, b)
        return year_difference(a, b, self.max_year_gap)


@dataclass(frozen=True)
class ComparisonProfile:
    """Named set of attribute comparators used to score record pairs."""

    name: str
    comparators: tuple[AttributeComparator, ...]
    weighted: bool = True
    missing_excludes_weight: bool = False

    def __post_init__(self):
        object.__setattr__(self, "comparators", tuple(self.comparators))

    @property
    def attributes(self) -> tuple[str, ...]:
        return tuple(c.attribute for c in self.comparators)

    @property
    def total_weight(self) -> float:
        return sum(c.weight for c in self.comparators)


# Attribute, similarity function, and weight for the full profile; the
# other presets select subsets of these rows.
ATTRIBUTE_TABLE: tuple[tuple[str, str, float], ...] = (
    ("father_first", "jaro_winkler", 6.578),
    ("father_last", "jaro_winkler", 7.168),
    ("mother_first", "jaro_winkler", 4.483),
    ("mother_last", "jaro_winkler", 7.168),
    ("mother_maiden", "jaro_winkler", 5.985),
    ("marriage_day", "exact", 4.610),
    ("marriage_month", "exact", 3.855),
    ("marriage_year", "year_difference", 5.240),
    ("marriage_place1", "jaro_winkler", 4.435),
    ("marriage_place2", "jaro_winkler", 3.607),
    ("father_occupation", "jaro_winkler", 2.247),
    ("mother_occupation", "jaro_winkler", 1.274),
    ("address1", "jaro_winkler", 4.715),
    ("address2", "jaro_winkler", 3.548),
    ("source_parish", "jaro_winkler", 4.562),
)

_PARENT_NAMES = tuple(row[0] for row in ATTRIBUTE_TABLE[:5])
_PROFILE_ATTRIBUTES: dict[str, tuple[str, ...]] = {
    "all": tuple(row[0] for row in ATTRIBUTE_TABLE),
    "parent-names": _PARENT_NAMES,
    "parent-names-addresses": _PARENT_NAMES + ("address1", "address2", "source_parish"),
}


def preset(name: str, weighted: bool = True) -> ComparisonProfile:
    """One of the three built-in profiles, with table weights or all 1.0."""
    if name not in _PROFILE_ATTRIBUTES:
        raise ValueError(f"unknown profile {name!r}; expected one of {PROFILE_NAMES}")
    wanted = set(_PROFILE_ATTRIBUTES[name])
    comparators = tuple(
        AttributeComparator(attr, function, weight if weighted else 1.0)
        for attr, function, weight in ATTRIBUTE_TABLE
        if attr in wanted
    )
    return ComparisonProfile(name=name, comparators=comparators, weighted=weighted)


def compare_records(
    r_i: Record, r_j: Record, profile: ComparisonProfile
) -> tuple[float, ...]:
    """Per-attribute weighted similarities, aligned with the profile."""
    return tuple(
        cmp.compare(r_i.attributes.get(cmp.attribute), r_j.attributes.get(cmp.attribute))
        * cmp.weight
        for cmp in profile.comparators
    )


def normalise(vector: tuple[float, ...], profile: ComparisonProfile) -> float:
    """Weighted similarity vector -> single score in [0, 1]."""
    if len(vector) != len(profile.comparators):
        raise ValueError("similarity vector does not align with the profile")
    total = profile.total_weight
    if total <= 0:
        raise ValueError(f"profile {profile.name!r} has zero total weight")
    score = sum(vector) / total
    return min(1.0, max(0.0, score))  # guard against float summation drift


def score_pair(r_i: Record, r_j: Record, profile: ComparisonProfile) -> float:
    """Normalised pair similarity under the profile's missing-value rule."""
    if not profile.missing_excludes_weight:
        return normalise(compare_records(r_i, r_j, profile), profile)
    numerator = 0.0
    denominator = 0.0
    for cmp in profile.comparators:
        a = r_i.attributes.get(cmp.attribute)
        b = r_j.attributes.get(cmp.attribute)
        if not canonical(a) or not canonical(b):
            continue
        numerator += cmp.compare(a, b) * cmp.weight
        denominator += cmp.weight
    if denominator <= 0:
        return 0.0
    return min(1.0, max(0.0, numerator / denominator))
