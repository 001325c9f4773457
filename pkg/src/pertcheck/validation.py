"""Input checks shared by the estimators and the CLI."""

from __future__ import annotations

from .exceptions import ConfigError, MissingSample
from .metrics.scores import EMBEDDING, NATIVE, ORACLE
from .perturb.types import Sample


def check_seed(seed) -> int:
    if isinstance(seed, bool):
        raise ConfigError("seed must be an integer")
    try:
        seed = int(seed)
    except (TypeError, ValueError):
        raise ConfigError(f"seed must be an integer, got {seed!r}") from None
    if seed < 0:
        raise ConfigError("seed must be non-negative")
    return seed


def check_jobs(jobs) -> int:
    try:
        jobs = int(jobs)
    except (TypeError, ValueError):
        raise ConfigError(f"jobs must be an integer, got {jobs!r}") from None
    if jobs < 1:
        raise ConfigError("jobs must be >= 1")
    return jobs


def check_dataset(dataset) -> list[Sample]:
    samples = list(dataset)
    if not samples:
        raise ConfigError("dataset is empty")
    for s in samples:
        if not isinstance(s, Sample):
            raise ConfigError(f"dataset entries must be Sample objects, got {type(s).__name__}")
    ids = [s.id for s in samples]
    if len(set(ids)) != len(ids):
        raise ConfigError("sample ids must be unique")
    return samples


def check_metrics(metrics, vectors=None, allow_oracle=False) -> list[str]:
    if isinstance(metrics, str):
        metrics = [m for m in metrics.split(",") if m.strip()]
    out = []
    for m in metrics:
        m = m.strip()
        if m == ORACLE and allow_oracle:
            pass
        elif m in EMBEDDING:
            if vectors is None:
                raise ConfigError(f"metric {m} needs word vectors")
        elif m not in NATIVE:
            raise ConfigError(f"unknown metric {m!r}; choose from {', '.join(NATIVE + EMBEDDING)}")
        if m in out:
            raise ConfigError(f"metric {m} listed twice")
        out.append(m)
    return out


def check_consistent(suite, dataset) -> None:
    """Every suite item must refer to a dataset sample."""
    ids = {s.id for s in dataset}
    missing = sorted({it.sample_id for it in suite.items} - ids)
    if missing:
        raise MissingSample("suite items reference unknown samples: " + ", ".join(missing))
