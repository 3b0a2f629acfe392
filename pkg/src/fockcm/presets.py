"""Named configurations for the two reference experiments.

All presets use ``g = 1``.  The mean interaction time puts the level that
should be selected (``n = 9`` for the elastic run, ``n = 21`` for the
interference runs) on a trapping time, chosen with `isolated_trapping_time`
so that the level above it sits near anti-trapping.  The spread is measured in
units of `critical_spread` evaluated at the initial mean photon number.

``fig1`` starts from the coherent amplitude 3, i.e. mean photon number 9.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .dynamics import critical_spread, isolated_trapping_time
from .experiment import ExperimentConfig, Scheme

G = 1.0
N_ATOMS = 2000


@dataclass(frozen=True)
class Preset:
    name: str
    description: str
    build: Callable[[], ExperimentConfig]


def _fig1() -> ExperimentConfig:
    n = 9
    return ExperimentConfig(
        g=G,
        alpha_init=3.0,
        n_target=n,
        scheme=Scheme.ELASTIC_EE,
        tau_mean=isolated_trapping_time(G, n),
        spread=critical_spread(G, n),
        n_atoms=N_ATOMS,
    )


def _fig2(spread_factor: float) -> Callable[[], ExperimentConfig]:
    def build() -> ExperimentConfig:
        n = 21
        return ExperimentConfig(
            g=G,
            alpha_init=math.sqrt(21.0),
            n_target=n,
            scheme=Scheme.INTERFERENCE_EPG,
            tau_mean=isolated_trapping_time(G, n),
            spread=spread_factor * critical_spread(G, n),
            length_ratio=1.0,
            final_phase=-math.pi / 2,
            n_atoms=N_ATOMS,
        )

    return build


PRESETS: dict[str, Preset] = {
    p.name: p
    for p in (
        Preset("fig1", "e->e detection, alpha=3, spread = critical spread", _fig1),
        Preset("fig2-fixed", "e->e+g detection, alpha=sqrt(21), fixed interaction time", _fig2(0.0)),
        Preset("fig2-small", "e->e+g detection, alpha=sqrt(21), spread = critical/10", _fig2(0.1)),
        Preset("fig2-large", "e->e+g detection, alpha=sqrt(21), spread = 2 x critical", _fig2(2.0)),
    )
}


def get_preset(name: str) -> ExperimentConfig:
    try:
        return PRESETS[name].build()
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}") from None
