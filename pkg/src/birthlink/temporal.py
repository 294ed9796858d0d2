"""Birth-interval plausibility model.

Maps the day difference between two birth registrations to a plausibility
value in [0, 1] via a piecewise-linear curve. Both clusterers use the
cluster-level check here to decide whether a record may join a cluster.
"""

from bisect import bisect_right
from dataclasses import dataclass
from datetime import date
from typing import Iterable

# Default curve (day offset, plausibility). Registration dates are noisy, so
# twins and triplets are allowed a couple of days apart; from two weeks to
# roughly nine months a second birth by the same mother is impossible; nine
# months to 35 years is fully plausible, fading linearly to impossible at 40
# years. The ramp shoulders are configurable.
DEFAULT_BREAKPOINTS: tuple[tuple[int, float], ...] = (
    (0, 1.0),
    (2, 1.0),
    (14, 0.0),
    (200, 0.0),
    (280, 1.0),
    (12775, 1.0),  # 35 years
    (14600, 0.0),  # 40 years
)

DEFAULT_P_MIN = 0.5


@dataclass(frozen=True)
class TemporalConstraintModel:
    """Piecewise-linear plausibility over day differences.

    Breakpoints must have strictly increasing day offsets starting at 0;
    plausibility is interpolated between them and is 0 beyond the last.
    """

    breakpoints: tuple[tuple[int, float], ...] = DEFAULT_BREAKPOINTS

    def __post_init__(self):
        points = tuple((int(d), float(p)) for d, p in self.breakpoints)
        if not points:
            raise ValueError("temporal model needs at least one breakpoint")
        if points[0][0] != 0:
            raise ValueError("first breakpoint must be at day offset 0")
        offsets = [d for d, _ in points]
        if any(b <= a for a, b in zip(offsets, offsets[1:])):
            raise ValueError("breakpoint day offsets must be strictly increasing")
        if any(not 0.0 <= p <= 1.0 for _, p in points):
            raise ValueError("breakpoint plausibilities must lie in [0, 1]")
        object.__setattr__(self, "breakpoints", points)
        object.__setattr__(self, "_offsets", offsets)


def plausibility(model: TemporalConstraintModel, delta_days: int) -> float:
    """Plausibility of two births by the same mother `delta_days` apart."""
    if delta_days < 0:
        raise ValueError("day difference must be non-negative")
    points = model.breakpoints
    offsets: list[int] = model._offsets  # type: ignore[attr-defined]
    if delta_days > offsets[-1]:
        return 0.0
    idx = bisect_right(offsets, delta_days) - 1
    d0, p0 = points[idx]
    if delta_days == d0:
        return p0
    d1, p1 = points[idx + 1]
    frac = (delta_days - d0) / (d1 - d0)
    return p0 + frac * (p1 - p0)


def pair_plausible(
    model: TemporalConstraintModel, t_i: date, t_j: date, p_min: float = DEFAULT_P_MIN
) -> bool:
    """Whether two registration dates can belong to the same mother."""
    return plausibility(model, abs((t_i - t_j).days)) >= p_min


def cluster_plausible(
    model: TemporalConstraintModel | None,
    candidate: date,
    members: Iterable[date],
    p_min: float = DEFAULT_P_MIN,
) -> bool:
    """Whether `candidate` is plausible with every member of a cluster.

    With no model supplied the temporal constraints are disabled and every
    candidate is admissible.
    """
    if model is None:
        return True
    return all(pair_plausible(model, candidate, t, p_min) for t in members)
