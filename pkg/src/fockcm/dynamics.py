"""Per-atom update rules for the cavity field.

All maps work in the interaction picture of the resonant Jaynes-Cummings
model, where one atom transit of duration ``tau`` rotates each doublet
``{|e,n>, |g,n+1>}`` by the angle ``g tau sqrt(n+1)``.

Truncation: the field space is cut at ``n_max`` and amplitudes beyond it are
taken to vanish (``d_{n_max+1} = 0``, as ``d_{-1} = 0`` at the bottom).  Every
retained level, including ``n_max``, evolves with its own ``cos(g tau sqrt(n+1))``;
the amplitude ``|e,n_max> -> |g,n_max+1>`` leaves the window and is dropped.
That loss is bounded by the top population, which the tail guard keeps below
its threshold, so the maps are unitary (trace preserving) on valid states.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.typing import NDArray

from .errors import NullOutcome
from .states import (
    AtomState,
    FieldDensity,
    FieldState,
    JointState,
    PulseParams,
)

DEFAULT_NULL_EPSILON = 1e-14


@dataclass(frozen=True)
class CouplingParams:
    """Atom-field coupling constant ``g`` and interaction time ``tau``."""

    g: float
    tau: float

    def __post_init__(self):
        if not self.g > 0:
            raise ValueError("coupling constant g must be positive")
        if self.tau < 0:
            raise ValueError("interaction time tau must be non-negative")

    @property
    def angle(self) -> float:
        """Vacuum Rabi angle ``g * tau``."""
        return self.g * self.tau


@dataclass(frozen=True)
class CmResult:
    """Field after a conditional measurement and the probability of that outcome."""

    field: FieldState
    success_prob: float


@lru_cache(maxsize=64)
def _roots(n_max: int) -> NDArray:
    r = np.sqrt(np.arange(1, n_max + 2, dtype=float))
    r.setflags(write=False)
    return r


def jc_factors(angle: float, n_max: int) -> tuple[NDArray, NDArray]:
    """``C_n = cos(angle sqrt(n+1))`` and ``S_n = sin(angle sqrt(n+1))`` for n = 0..n_max."""
    phase = angle * _roots(n_max)
    return np.cos(phase), np.sin(phase)


def _shift_down(v: NDArray, fill: float) -> NDArray:
    """``w[n] = v[n-1]`` with ``w[0] = fill``."""
    w = np.empty_like(v)
    w[0] = fill
    w[1:] = v[:-1]
    return w


def _finish(out: NDArray, null_epsilon: float, tail_threshold: float | None) -> CmResult:
    prob = float(np.vdot(out, out).real)
    if not prob >= null_epsilon:
        raise NullOutcome(prob)
    out /= math.sqrt(prob)
    result = FieldState._adopt(out)
    result.check_tail(tail_threshold)
    return CmResult(result, prob)


def cm_step(
    field: FieldState,
    atom_in: AtomState,
    atom_out: AtomState,
    cpl: CouplingParams,
    *,
    null_epsilon: float = DEFAULT_NULL_EPSILON,
    tail_threshold: float | None = None,
) -> CmResult:
    """One atom transit followed by projecting the atom onto ``atom_out``.

    Unnormalized amplitudes::

        [a_i a_f* C_n + b_i b_f* C_{n-1}] d_n - i a_i b_f* S_{n-1} d_{n-1} - i b_i a_f* S_n d_{n+1}

    with ``d_{-1} = d_{n_max+1} = 0``.  The squared norm is the success
    probability; the returned field is renormalized.

    Raises:
        NullOutcome: if the success probability is below ``null_epsilon``.
        TruncationTooSmall: if ``tail_threshold`` is given and the output tail exceeds it.
    """
    d = field.amplitudes
    c, s = jc_factors(cpl.angle, field.n_max)
    ai, bi = atom_in.alpha, atom_in.beta
    afc, bfc = atom_out.alpha.conjugate(), atom_out.beta.conjugate()

    out = (ai * afc) * c * d
    out[0] += (bi * bfc) * d[0]
    out[1:] += (bi * bfc) * c[:-1] * d[1:] + (-1j * ai * bfc) * s[:-1] * d[:-1]
    out[:-1] += (-1j * bi * afc) * s[:-1] * d[1:]
    return _finish(out, null_epsilon, tail_threshold)


def excited_cm_step(
    field: FieldState,
    atom_out: AtomState,
    cpl: CouplingParams,
    *,
    null_epsilon: float = DEFAULT_NULL_EPSILON,
    tail_threshold: float | None = None,
) -> CmResult:
    """`cm_step` for an atom entering in ``|e>``: ``a_f* C_n d_n - i b_f* S_{n-1} d_{n-1}``."""
    d = field.amplitudes
    c, s = jc_factors(cpl.angle, field.n_max)
    afc, bfc = atom_out.alpha.conjugate(), atom_out.beta.conjugate()
    out = afc * c * d
    out[1:] += -1j * bfc * s[:-1] * d[:-1]
    return _finish(out, null_epsilon, tail_threshold)


def jc_joint_evolve(joint: JointState, cpl: CouplingParams) -> JointState:
    """Resonant Jaynes-Cummings evolution of the atom-field state over one transit.

    Exactly unitary on states with no ``|e,n_max>`` amplitude (a subspace the
    evolution never leaves); otherwise the part sent to ``|g,n_max+1>`` is lost.
    """
    e, g = joint.e_branch, joint.g_branch
    c, s = jc_factors(cpl.angle, joint.n_max)
    new_e = c * e
    new_e[:-1] += -1j * s[:-1] * g[1:]
    new_g = g.copy()
    new_g[1:] = -1j * s[:-1] * e[:-1] + c[:-1] * g[1:]
    return JointState._adopt(new_e, new_g)


def project_atom(
    joint: JointState,
    atom_out: AtomState,
    *,
    null_epsilon: float = DEFAULT_NULL_EPSILON,
    tail_threshold: float | None = None,
) -> CmResult:
    """Project the atom onto ``atom_out`` and return the renormalized field."""
    out = atom_out.alpha.conjugate() * joint.e_branch + atom_out.beta.conjugate() * joint.g_branch
    return _finish(out, null_epsilon, tail_threshold)


def kraus_operators(atom_in: AtomState, cpl: CouplingParams, n_max: int) -> tuple[NDArray, NDArray]:
    """Field operators for finding the atom in ``|e>`` and in ``|g>`` after the transit.

    ``K_e`` and ``K_g`` are the linear maps of `cm_step` with the final atom
    fixed to ``|e>`` and ``|g>``.  ``K_e^+ K_e + K_g^+ K_g`` is the identity
    except for a deficit ``|a_i S_{n_max}|^2`` on the top level.
    """
    dim = n_max + 1
    c, s = jc_factors(cpl.angle, n_max)
    ai, bi = atom_in.alpha, atom_in.beta
    k_e = np.diag(ai * c).astype(complex)
    k_e[np.arange(dim - 1), np.arange(1, dim)] = -1j * bi * s[:-1]
    k_g = np.diag(bi * _shift_down(c, 1.0)).astype(complex)
    k_g[np.arange(1, dim), np.arange(dim - 1)] = -1j * ai * s[:-1]
    return k_e, k_g


def _left_bidiagonal(diag: NDArray, off: NDArray, upper: bool, m: NDArray) -> NDArray:
    """``K @ m`` for ``K`` with main diagonal ``diag`` and one off-diagonal ``off``."""
    out = diag[:, None] * m
    if upper:
        out[:-1] += off[:, None] * m[1:]
    else:
        out[1:] += off[:, None] * m[:-1]
    return out


def _sandwich(diag: NDArray, off: NDArray, upper: bool, m: NDArray) -> NDArray:
    """``K m K^+`` in O(dim^2) for a bidiagonal ``K``."""
    left = _left_bidiagonal(diag, off, upper, m)
    return _left_bidiagonal(diag, off, upper, left.conj().T).conj().T


def nsm_step(
    rho: FieldDensity,
    atom_in: AtomState,
    cpl: CouplingParams,
    *,
    tail_threshold: float | None = None,
) -> FieldDensity:
    """Field update when the atom's final state is not read out.

    ``rho' = K_e rho K_e^+ + K_g rho K_g^+`` with the operators of
    `kraus_operators`; no renormalization.
    """
    c, s = jc_factors(cpl.angle, rho.n_max)
    ai, bi = atom_in.alpha, atom_in.beta
    m = rho.matrix
    new = _sandwich(ai * c, -1j * bi * s[:-1], True, m)
    new += _sandwich(bi * _shift_down(c, 1.0), -1j * ai * s[:-1], False, m)
    new = 0.5 * (new + new.conj().T)
    out = FieldDensity(new, validate=False)
    out.check_tail(tail_threshold)
    return out


def approx_cm_factor(n: int, pulse: PulseParams, cpl: CouplingParams) -> float:
    """Slowly-varying-amplitude estimate ``cos(OT/2 - g tau sqrt(n+1))`` of the per-step gain.

    Valid for detection phase near ``-pi/2`` and amplitudes that change little
    between neighbouring ``n``.  For diagnostics only.
    """
    return math.cos(0.5 * pulse.area - cpl.angle * math.sqrt(n + 1))


def critical_spread(g: float, n: int) -> float:
    """Interaction-time spread separating the trapping and anti-trapping times of level ``n``."""
    if not g > 0 or n < 0:
        raise ValueError("need g > 0 and n >= 0")
    return math.pi / (2.0 * g * math.sqrt(n + 1))


def trapping_times(g: float, n: int, count: int = 1) -> list[float]:
    """Interaction times with ``S_n = 0``: ``m pi / (g sqrt(n+1))`` for ``m = 1..count``."""
    if not g > 0 or n < 0:
        raise ValueError("need g > 0 and n >= 0")
    root = math.sqrt(n + 1)
    return [m * math.pi / (g * root) for m in range(1, count + 1)]


def isolated_trapping_time(g: float, n: int, max_multiple: int = 30) -> float:
    """Trapping time of level ``n`` that best blocks the level above it.

    Among the first ``max_multiple`` trapping times of ``n``, returns the one for
    which ``|cos(g tau sqrt(n+2))|`` is smallest, i.e. level ``n + 1`` sits
    closest to its anti-trapping condition.  Ties go to the shorter time.
    """
    times = trapping_times(g, n, max_multiple)
    root_up = math.sqrt(n + 2)
    scores = [abs(math.cos(g * t * root_up)) for t in times]
    return times[int(np.argmin(scores))]

