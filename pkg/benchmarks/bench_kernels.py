"""Compare the compiled trajectory kernel with the numpy fallback.

Usage::

    python3 benchmarks/bench_kernels.py [--atoms 2000] [--repeat 5]

Both kernels advance the same ``fig2-small`` field through the same atoms;
the script reports the best wall time of each and checks that they agree.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from fockcm._core import _fallback
from fockcm.experiment import _detection_amplitudes
from fockcm.presets import get_preset
from fockcm.states import coherent_state
from fockcm.stochastic import sample_many, trajectory_rng

try:
    from fockcm._core import _kernels
except ImportError:
    _kernels = None


def workload(atoms: int):
    cfg = get_preset("fig2-small")
    taus, pulses = sample_many(cfg.timing, trajectory_rng(cfg.seed), atoms)
    afc, bfc = _detection_amplitudes(cfg, pulses)
    d0 = coherent_state(cfg.alpha_init, cfg.resolved_n_max).amplitudes
    return d0, afc, bfc, cfg.g * taus


def run(kernel, d0, afc, bfc, angles):
    count = angles.size
    d = np.array(d0, dtype=complex)
    mean, dn, p = np.zeros(count), np.zeros(count), np.ones(count)
    outcome = np.zeros(count, dtype=np.int8)
    start = time.perf_counter()
    kernel(d, 1.0 + 0j, 0j, afc, bfc, angles, np.zeros(count), False, 1e-12, 1e-14, mean, dn, p, outcome)
    return time.perf_counter() - start, d, dn


def best_of(kernel, repeat, *args):
    results = [run(kernel, *args) for _ in range(repeat)]
    return min(r[0] for r in results), results[0]


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--atoms", type=int, default=2000)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    data = workload(args.atoms)
    t_py, (_, d_py, dn_py) = best_of(_fallback.cm_trajectory, args.repeat, *data)
    print(f"numpy fallback : {t_py * 1e3:8.2f} ms for {args.atoms} atoms (dim {data[0].size})")
    if _kernels is None:
        print("compiled kernel: not built")
        return
    t_cy, (_, d_cy, dn_cy) = best_of(_kernels.cm_trajectory, args.repeat, *data)
    print(f"compiled kernel: {t_cy * 1e3:8.2f} ms  ({t_py / t_cy:.1f}x faster)")
    print(f"max |d| difference {np.max(np.abs(d_py - d_cy)):.1e}, max |dn| difference {np.max(np.abs(dn_py - dn_cy)):.1e}")


if __name__ == "__main__":
    main()
