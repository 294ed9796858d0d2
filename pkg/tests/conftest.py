"""Shared fixtures: hand-built graphs and small record sets."""

from datetime import date

import pytest

from birthlink import (
    Record,
    RecordSet,
    SimilarityGraph,
    SyntheticConfig,
    TemporalConstraintModel,
    generate_synthetic,
)

# A plausibility model that is 1.0 at every reachable day difference: used
# to check that disabling the model and supplying a constant-1 model are
# exactly equivalent.
CONSTANT_ONE_MODEL = TemporalConstraintModel(breakpoints=((0, 1.0), (10**9, 1.0)))


@pytest.fixture
def default_model() -> TemporalConstraintModel:
    return TemporalConstraintModel()


@pytest.fixture
def constant_model() -> TemporalConstraintModel:
    return CONSTANT_ONE_MODEL


@pytest.fixture
def star_fixture() -> SimilarityGraph:
    """Six records, node 5 temporally impossible against all others.

    Day gaps between 1, 2, 3, 4, 6 all fall on the fully plausible plateau
    (319..2426 days); node 5 is 44+ years from everyone.
    """
    dates = {
        1: date(1880, 1, 10),
        2: date(1881, 3, 5),
        3: date(1882, 6, 20),
        4: date(1884, 2, 11),
        5: date(1930, 5, 2),
        6: date(1886, 9, 1),
    }
    edges = {
        (1, 2): 0.95,
        (1, 3): 0.90,
        (2, 3): 0.80,
        (3, 4): 0.85,
        (4, 6): 0.88,
        (1, 5): 0.92,
        (3, 6): 0.72,
    }
    return SimilarityGraph(s_build=0.7, timestamps=dates, edges=edges)


@pytest.fixture
def greedy_fixture() -> SimilarityGraph:
    """Six records in id/date order, node 6 temporally impossible (41+ years)."""
    dates = {
        1: date(1880, 1, 1),
        2: date(1880, 11, 15),
        3: date(1882, 2, 1),
        4: date(1883, 3, 10),
        5: date(1884, 6, 1),
        6: date(1925, 6, 1),
    }
    edges = {
        (1, 2): 0.95,
        (1, 3): 0.7,
        (2, 3): 0.9,
        (1, 4): 0.92,
        (2, 4): 0.7,
        (3, 4): 0.75,
        (2, 5): 0.85,
        (4, 5): 0.8,
        (1, 6): 0.9,
        (2, 6): 0.9,
    }
    return SimilarityGraph(s_build=0.7, timestamps=dates, edges=edges)


def make_record(record_id: int, when: date, **attributes: str) -> Record:
    return Record(id=record_id, timestamp=when, attributes=attributes)


def sibling_pair(record_id_a: int = 1, record_id_b: int = 2) -> RecordSet:
    """Two records with identical parent names, two years apart."""
    shared = dict(
        father_first="john",
        father_last="mcleod",
        mother_first="mary",
        mother_last="mcleod",
        mother_maiden="mcdonald",
    )
    return RecordSet(
        records=(
            make_record(record_id_a, date(1880, 3, 1), **shared),
            make_record(record_id_b, date(1882, 5, 20), **shared),
        )
    )


@pytest.fixture(scope="session")
def small_synthetic() -> tuple:
    config = SyntheticConfig(num_entities=60, seed=11, lookalike_rate=0.1)
    return generate_synthetic(config)
