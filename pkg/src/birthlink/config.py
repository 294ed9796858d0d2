"""Declarative pipeline configuration: one flat JSON file drives every stage.

Command-line flags override individual keys. The synthetic generator's
parameters live under the single nested `synthetic` key.
"""

import json
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Mapping

from .evaluation import CLUSTERERS, DEFAULT_SWEEP_THRESHOLDS, SweepSettings
from .greedy import SELECT_METHODS
from .records import SyntheticConfig
from .similarity import ComparisonProfile, PROFILE_NAMES, preset
from .star import RESOLVE_METHODS, SORT_METHODS
from .temporal import DEFAULT_BREAKPOINTS, DEFAULT_P_MIN, TemporalConstraintModel


@dataclass(frozen=True)
class PipelineConfig:
    records: str | None = None
    ground_truth: str | None = None
    output_dir: str = "out"
    profile: str = "parent-names"
    weighted: bool = False
    lsh_bands: int = 100
    lsh_rows: int = 4
    seed: int = 0
    graph_threshold: float = 0.7
    graph_temporal: bool = False
    temporal: bool = True
    temporal_breakpoints: tuple[tuple[int, float], ...] = DEFAULT_BREAKPOINTS
    p_min: float = DEFAULT_P_MIN
    clusterer: str = "star"
    sort_method: str = "avr-sim-first"
    resolve_method: str = "avr-all"
    select_method: str = "next"
    greedy_retry: bool = False
    thresholds: tuple[float, ...] = DEFAULT_SWEEP_THRESHOLDS
    synthetic: SyntheticConfig | None = None

    def __post_init__(self):
        if self.profile not in PROFILE_NAMES:
            raise ValueError(f"profile must be one of {PROFILE_NAMES}, got {self.profile!r}")
        if self.clusterer not in CLUSTERERS:
            raise ValueError(f"clusterer must be one of {CLUSTERERS}, got {self.clusterer!r}")
        if self.sort_method not in SORT_METHODS:
            raise ValueError(f"sort_method must be one of {SORT_METHODS}")
        if self.resolve_method not in RESOLVE_METHODS:
            raise ValueError(f"resolve_method must be one of {RESOLVE_METHODS}")
        if self.select_method not in SELECT_METHODS:
            raise ValueError(f"select_method must be one of {SELECT_METHODS}")
        if not 0.0 < self.graph_threshold <= 1.0:
            raise ValueError("graph_threshold must lie in (0, 1]")
        if not 0.0 <= self.p_min <= 1.0:
            raise ValueError("p_min must lie in [0, 1]")
        if self.lsh_bands < 1 or self.lsh_rows < 1:
            raise ValueError("lsh_bands and lsh_rows must be at least 1")
        object.__setattr__(
            self,
            "temporal_breakpoints",
            tuple((int(d), float(p)) for d, p in self.temporal_breakpoints),
        )
        thresholds = tuple(float(t) for t in self.thresholds)
        for t in thresholds:
            if not self.graph_threshold <= t <= 1.0:
                raise ValueError(
                    f"sweep threshold {t} outside [{self.graph_threshold}, 1.0]"
                )
        object.__setattr__(self, "thresholds", thresholds)

    @classmethod
    def from_dict(cls, data: Mapping) -> "PipelineConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        values = dict(data)
        if "synthetic" in values and values["synthetic"] is not None:
            values["synthetic"] = SyntheticConfig.from_dict(values["synthetic"])
        return cls(**values)

    @classmethod
    def from_file(cls, path: str | Path) -> "PipelineConfig":
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))

    def override(self, **changes) -> "PipelineConfig":
        """A copy with the given keys replaced; None values are ignored."""
        real = {k: v for k, v in changes.items() if v is not None}
        return replace(self, **real) if real else self

    def comparison_profile(self) -> ComparisonProfile:
        return preset(self.profile, weighted=self.weighted)

    def temporal_model(self) -> TemporalConstraintModel | None:
        if not self.temporal:
            return None
        return TemporalConstraintModel(breakpoints=self.temporal_breakpoints)

    def sweep_settings(self) -> SweepSettings:
        return SweepSettings(
            profile=self.comparison_profile(),
            clusterer=self.clusterer,
            sort_method=self.sort_method,
            resolve_method=self.resolve_method,
            select_method=self.select_method,
            num_bands=self.lsh_bands,
            band_size=self.lsh_rows,
            seed=self.seed,
            s_build=self.graph_threshold,
            temporal=self.temporal_model(),
            p_min=self.p_min,
            greedy_retry=self.greedy_retry,
        )
