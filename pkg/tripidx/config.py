"""Typed configuration.

All knobs live in pydantic models; a JSON file (sections `network`,
`generator`, `build`, `bench`) may provide any of them and command line flags
override the file.
"""

__license__ = '[BSD](http://www.opensource.org/licenses/bsd-license.php)'
__version__ = '0.1.0'


from typing import Optional, Tuple, Literal, Dict, Any

import orjson
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


PSI_SAMPLINGS = (32, 128, 512)
WM_SAMPLINGS = (32, 64, 128)
QUERY_FAMILIES = ('xy', 'xyS', 'xyE', 'xySE', 'xyT', 'xyST', 'xyET', 'xySET', 'JkS1', 'J1S', 'JkSk', 'load')
# start only and end only trip counts, benched on request
OPEN_QUERY_FAMILIES = ('x', 'xS', 'xT', 'xST', 'y', 'yE', 'yT', 'yET')


class _Base(BaseModel):
    model_config = ConfigDict(extra='forbid', frozen=True)


class GeneratorConfig(_Base):
    """Synthetic trip generator knobs."""
    trip_count: int = Field(10000, ge=0)
    rng_seed: int = 42
    switch_probability: float = Field(0.1, ge=0.0, le=1.0)
    end_prob_coefficient: float = Field(0.01, ge=0.0, le=1.0)
    min_stage_stops: int = Field(2, ge=2)
    max_trip_stops: int = Field(100, ge=2)
    max_wait_seconds: int = Field(1800, ge=0)
    walk_radius_meters: float = Field(100.0, ge=0.0)
    shard_size: int = Field(5000, ge=1)
    workers: int = Field(1, ge=1)


class NetworkConfig(_Base):
    """Desk scale synthetic network."""
    n_routes: int = Field(10, ge=1)
    grid_width: int = Field(10, ge=2)
    grid_height: int = Field(10, ge=2)
    node_spacing_meters: float = Field(400.0, gt=0)
    twin_offset_meters: float = Field(40.0, ge=0)
    min_line_stops: int = Field(12, ge=3)
    max_line_stops: int = Field(30, ge=3)
    speed_mps: float = Field(6.0, gt=0)
    dwell_seconds: int = Field(20, ge=0)
    service_start: str = '06:00:00'
    service_end: str = '23:00:00'
    headways_minutes: Tuple[int, ...] = (10, 12, 15, 20, 30)
    period_start: str = '2017-05-01'
    days: int = Field(7, ge=1)
    seed: int = 7
    origin_lat: float = 40.4168
    origin_lon: float = -3.7038

    @model_validator(mode='after')
    def _check(self) -> 'NetworkConfig':
        if self.min_line_stops > self.max_line_stops:
            raise ValueError("min_line_stops must not exceed max_line_stops")
        if not self.headways_minutes or min(self.headways_minutes) <= 0:
            raise ValueError("headways_minutes must hold positive values")
        return self


class BuildConfig(_Base):
    """Index build knobs."""
    t_psi: int = 128
    wm_sampling: Optional[int] = None
    encoding: Literal['plain', 'diff'] = 'plain'
    vocabulary: Literal['observed', 'topology'] = 'observed'
    suffix_sort: Literal['doubling', 'comparator'] = 'doubling'
    capacity: Optional[int] = Field(None, ge=1)

    @field_validator('t_psi')
    @classmethod
    def _t_psi(cls, v: int) -> int:
        if v not in PSI_SAMPLINGS:
            raise ValueError(f"t_psi must be one of {PSI_SAMPLINGS}")
        return v

    @field_validator('wm_sampling')
    @classmethod
    def _wm_sampling(cls, v: Optional[int]) -> Optional[int]:
        if v is not None and v not in WM_SAMPLINGS:
            raise ValueError(f"wm_sampling must be one of {WM_SAMPLINGS}")
        return v


class BenchConfig(_Base):
    """Benchmark harness knobs."""
    families: Tuple[str, ...] = QUERY_FAMILIES
    queries: int = Field(10000, ge=1)
    warmup: int = Field(200, ge=0)
    seed: int = 1
    readers: int = Field(1, ge=1)

    @field_validator('families')
    @classmethod
    def _families(cls, v: Tuple[str, ...]) -> Tuple[str, ...]:
        bad = [f for f in v if f not in QUERY_FAMILIES + OPEN_QUERY_FAMILIES]
        if bad:
            raise ValueError(f"Unknown query families {bad}, choose from {QUERY_FAMILIES + OPEN_QUERY_FAMILIES}")
        return v


class Settings(_Base):
    """All sections together."""
    network: NetworkConfig = NetworkConfig()
    generator: GeneratorConfig = GeneratorConfig()
    build: BuildConfig = BuildConfig()
    bench: BenchConfig = BenchConfig()


def load_settings(path: Optional[str] = None) -> Settings:
    """Read a JSON settings file; defaults when no path is given.
    """
    if not path:
        return Settings()
    with open(path, 'rb') as f:
        data = orjson.loads(f.read())
    return Settings.model_validate(data)

def override(model: BaseModel, **changes: Any) -> Any:
    """Copy of a config with the non-None changes applied (and validated).
    """
    data: Dict[str, Any] = model.model_dump()
    data.update({k: v for k, v in changes.items() if v is not None})
    return model.__class__.model_validate(data)
