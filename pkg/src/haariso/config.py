"""Run-time limits. Defaults, overridable by HAARISO_* environment variables,
which command-line flags override in turn."""

import os
from dataclasses import dataclass, fields, replace

_ENV = {
    "group_bound": "HAARISO_GROUP_BOUND",
    "backtrack_budget": "HAARISO_BUDGET",
    "seed": "HAARISO_SEED",
    "aut_element_cap": "HAARISO_AUT_CAP",
    "subset_enum_bound": "HAARISO_SUBSET_BOUND",
}


@dataclass(frozen=True)
class Config:
    group_bound: int = 64
    aut_element_cap: int = 2_000_000
    backtrack_budget: int = 10_000_000
    subset_enum_bound: int = 16
    seed: int = 0

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if f.name == "seed":
                if value < 0:
                    raise ValueError("seed must be non-negative")
            elif value <= 0:
                raise ValueError(f"{f.name} must be positive, got {value}")

    @classmethod
    def from_env(cls, environ=None, **overrides):
        environ = os.environ if environ is None else environ
        values = {}
        for name, var in _ENV.items():
            raw = environ.get(var)
            if raw is not None and raw.strip():
                values[name] = int(float(raw))
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)

    def with_(self, **changes):
        return replace(self, **{k: v for k, v in changes.items() if v is not None})


DEFAULT = Config()
