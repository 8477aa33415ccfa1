"""Synthetic name corpora from a proportional random-growth process.

Each birth takes a fresh unique name with probability alpha and otherwise
copies the name of a uniformly drawn earlier individual, so existing
names attract new bearers in proportion to how many they already have.
Long runs develop the power-law rank-frequency shape seen in real name
samples, which makes the generator a useful end-to-end fixture.

Streams come from numpy's PCG64 generator, so a config reproduces its
corpus bit for bit; :func:`simulation_metadata` captures the seed and
algorithm identifier for output sidecars.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .corpus import Cohort, CohortSpec, NameRecord, RecordKind
from .standardize import MAX_NAME_LEN, Sex

RNG_ALGORITHM = "numpy-pcg64"

_LETTERS = "ABCDEFGHIJKLMNOPQRSTUVWXYZ"


def sequential_name(index: int) -> str:
    """Fresh unique name for innovation number ``index``: N + base-26 digits.

    Names are valid standardized forms (2-8 upper-case letters) and
    survive truncation unchanged.
    """
    digits = []
    n = index
    while n:
        n, rem = divmod(n, 26)
        digits.append(_LETTERS[rem])
    while len(digits) < 3:
        digits.append("A")
    name = "N" + "".join(reversed(digits))
    if len(name) > MAX_NAME_LEN:
        raise ValueError(f"name index {index} exceeds {MAX_NAME_LEN} letters")
    return name


@dataclass(frozen=True)
class SimulationConfig:
    innovation_rate: float
    births: int
    initial_names: int = 1
    seed: int = 0
    sex: Sex = Sex.FEMALE
    year: int = 2000
    name_alphabet: Callable[[int], str] | None = None

    def __post_init__(self) -> None:
        if not 0 <= self.innovation_rate <= 1:
            raise ValueError("innovation_rate must lie in [0, 1]")
        if self.births < 1:
            raise ValueError("births must be >= 1")
        if self.initial_names < 1:
            raise ValueError("initial_names must be >= 1")


def _simulate_sequence(config: SimulationConfig) -> list[str]:
    namefn = config.name_alphabet or sequential_name
    rng = np.random.Generator(np.random.PCG64(config.seed))
    innovate = rng.random(config.births) < config.innovation_rate

    history = [namefn(i) for i in range(config.initial_names)]
    next_index = config.initial_names
    for t in range(config.births):
        if innovate[t]:
            name = namefn(next_index)
            next_index += 1
        else:
            name = history[int(rng.integers(0, len(history)))]
        history.append(name)
    return history


def simulate_naming(config: SimulationConfig) -> Cohort:
    """Run the growth process; the cohort includes the initial seed names.

    The ``initial_names`` founders are part of the population (so the
    expected distinct-name count is alpha * births + initial_names), and
    every subsequent birth draws its copy target uniformly from all
    earlier individuals including them.
    """
    spec = CohortSpec(config.sex, config.year, config.year)
    return Cohort(spec, Counter(_simulate_sequence(config)))


def simulate_records(config: SimulationConfig) -> list[NameRecord]:
    """The same simulation as birth-register records, in birth order."""
    return [
        NameRecord(
            raw_name=name,
            sex=config.sex,
            record_year=config.year,
            record_kind=RecordKind.BIRTH_REGISTER,
        )
        for name in _simulate_sequence(config)
    ]


def simulation_metadata(config: SimulationConfig) -> dict:
    """Reproducibility sidecar: the RNG identifier and every parameter."""
    return {
        "rng": RNG_ALGORITHM,
        "seed": config.seed,
        "innovation_rate": config.innovation_rate,
        "births": config.births,
        "initial_names": config.initial_names,
        "sex": config.sex.value,
        "year": config.year,
    }
