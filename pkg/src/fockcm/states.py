"""Field and atom state types.

The cavity field lives on a truncated Fock basis ``|0>, ..., |n_max>``.  The
two-level atom is written over ``{|e>, |g>}`` in that order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.special import gammainc, gammaln

from .errors import TruncationTooSmall

DEFAULT_TAIL_THRESHOLD = 1e-12
NORM_TOL = 1e-10
ATOM_NORM_TOL = 1e-12


def _frozen(values: ArrayLike, dtype=complex) -> NDArray:
    arr = np.array(values, dtype=dtype, copy=True)
    arr.setflags(write=False)
    return arr


def default_n_max(alpha_amp: complex) -> int:
    """Truncation used when none is given: ``ceil(|a|^2 + 8|a| + 20)``."""
    r = abs(alpha_amp)
    return math.ceil(r * r + 8.0 * r + 20.0)


@dataclass(frozen=True, eq=False)
class FieldState:
    """Pure cavity-field state, amplitudes ``d_n`` for ``n = 0..n_max``."""

    amplitudes: NDArray[np.complex128]

    def __post_init__(self):
        amps = _frozen(self.amplitudes)
        if amps.ndim != 1 or amps.size < 2:
            raise ValueError("field amplitudes must be a 1-d vector with at least two entries")
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def _adopt(cls, amps: NDArray[np.complex128]) -> FieldState:
        """Wrap a freshly computed complex vector without copying it."""
        amps.setflags(write=False)
        obj = object.__new__(cls)
        object.__setattr__(obj, "amplitudes", amps)
        return obj

    @property
    def n_max(self) -> int:
        return self.amplitudes.size - 1

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> FieldState:
        nrm = self.norm()
        if nrm == 0.0:
            raise ValueError("cannot normalize the zero vector")
        return FieldState(self.amplitudes / nrm)

    def is_normalized(self, tol: float = NORM_TOL) -> bool:
        return abs(float(np.vdot(self.amplitudes, self.amplitudes).real) - 1.0) <= tol

    def tail_mass(self) -> float:
        """Population of the two highest retained Fock levels."""
        top = self.amplitudes[-2:]
        return float(np.sum(top.real**2 + top.imag**2))

    def check_tail(self, threshold: float | None = DEFAULT_TAIL_THRESHOLD) -> None:
        if threshold is None:
            return
        tail = self.tail_mass()
        if tail >= threshold:
            raise TruncationTooSmall(
                f"tail mass {tail:.3e} at n_max={self.n_max} exceeds threshold {threshold:.1e}"
            )

    def with_phase(self, phase: float) -> FieldState:
        return FieldState(self.amplitudes * np.exp(1j * phase))

    def __repr__(self) -> str:
        return f"FieldState(n_max={self.n_max}, mean_n={mean_n(self):.6g})"


def fock_state(n: int, n_max: int) -> FieldState:
    if not 0 <= n <= n_max:
        raise ValueError(f"Fock index {n} outside 0..{n_max}")
    amps = np.zeros(n_max + 1, dtype=complex)
    amps[n] = 1.0
    return FieldState(amps)


def coherent_state(
    alpha_amp: complex,
    n_max: int | None = None,
    tail_threshold: float | None = DEFAULT_TAIL_THRESHOLD,
) -> FieldState:
    """Coherent state ``exp(-|a|^2/2) sum a^n / sqrt(n!) |n>`` on a truncated basis.

    The coefficients are evaluated in log space and renormalized over the
    retained window.  Raises `TruncationTooSmall` when the Poisson weight of
    levels ``n >= n_max - 1`` (the guarded top of the window plus everything
    cut away) is not below ``tail_threshold``.
    """
    if n_max is None:
        n_max = default_n_max(alpha_amp)
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    alpha_amp = complex(alpha_amp)
    mean = abs(alpha_amp) ** 2
    n = np.arange(n_max + 1)
    if mean == 0.0:
        amps = np.zeros(n_max + 1, dtype=complex)
        amps[0] = 1.0
        return FieldState(amps)
    if tail_threshold is not None:
        # P(N >= n_max - 1) for Poisson(mean) is the regularized lower gamma P(n_max - 1, mean).
        tail = float(gammainc(n_max - 1, mean)) if n_max >= 2 else 1.0
        if tail >= tail_threshold:
            raise TruncationTooSmall(
                f"coherent state with |alpha|^2={mean:g} needs more than n_max={n_max} "
                f"(tail weight {tail:.2e})"
            )
    log_mag = -0.5 * mean + n * math.log(abs(alpha_amp)) - 0.5 * gammaln(n + 1)
    amps = np.exp(log_mag) * np.exp(1j * n * np.angle(alpha_amp))
    amps /= np.linalg.norm(amps)
    return FieldState(amps)


def pn(state: FieldState | FieldDensity) -> NDArray[np.float64]:
    """Photon-number distribution ``P(n)``."""
    if isinstance(state, FieldDensity):
        return np.clip(np.real(np.diag(state.matrix)), 0.0, None)
    a = state.amplitudes
    return a.real**2 + a.imag**2


def mean_n(state: FieldState | FieldDensity) -> float:
    p = pn(state)
    return float(np.dot(np.arange(p.size), p))


def var_n(state: FieldState | FieldDensity) -> float:
    p = pn(state)
    n = np.arange(p.size)
    m = float(np.dot(n, p))
    # second central moment computed directly; avoids <n^2> - <n>^2 cancellation
    return float(np.dot((n - m) ** 2, p))


def delta_n(state: FieldState | FieldDensity) -> float:
    """Root-mean-square spread of the photon number."""
    return math.sqrt(var_n(state))


@dataclass(frozen=True)
class AtomState:
    """Normalized atomic state ``alpha |e> + beta |g>``."""

    alpha: complex
    beta: complex

    def __post_init__(self):
        object.__setattr__(self, "alpha", complex(self.alpha))
        object.__setattr__(self, "beta", complex(self.beta))
        norm2 = abs(self.alpha) ** 2 + abs(self.beta) ** 2
        if abs(norm2 - 1.0) > ATOM_NORM_TOL:
            raise ValueError(f"atom state not normalized: |alpha|^2 + |beta|^2 = {norm2!r}")

    def orthogonal(self) -> AtomState:
        """The state orthogonal to this one, ``-beta* |e> + alpha* |g>``."""
        return AtomState(-self.beta.conjugate(), self.alpha.conjugate())

    def overlap(self, other: AtomState) -> complex:
        return self.alpha.conjugate() * other.alpha + self.beta.conjugate() * other.beta


EXCITED = AtomState(1.0, 0.0)
GROUND = AtomState(0.0, 1.0)


@dataclass(frozen=True)
class PulseParams:
    """Classical resonant pulse: Rabi frequency, duration and phase."""

    rabi_frequency: float
    duration: float
    phase: float = 0.0

    def __post_init__(self):
        if self.rabi_frequency < 0 or self.duration < 0:
            raise ValueError("rabi_frequency and duration must be non-negative")

    @property
    def area(self) -> float:
        return self.rabi_frequency * self.duration


def prepare_atom(pulse: PulseParams) -> AtomState:
    """Atom left by a pulse acting on ``|e>``: ``cos(OT/2)|e> + sin(OT/2) e^{i phi}|g>``."""
    half = 0.5 * pulse.area
    c, s = math.cos(half), math.sin(half)
    # cos^2 + sin^2 can miss 1 by an ulp; rescale so the invariant holds to rounding
    scale = 1.0 / math.sqrt(c * c + s * s)
    return AtomState(c * scale, s * scale * complex(math.cos(pulse.phase), math.sin(pulse.phase)))


@dataclass(frozen=True, eq=False)
class FieldDensity:
    """Mixed cavity-field state as a density matrix over the truncated basis."""

    matrix: NDArray[np.complex128]
    validate: bool = field(default=True, repr=False)

    def __post_init__(self):
        mat = _frozen(self.matrix)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1] or mat.shape[0] < 2:
            raise ValueError("density matrix must be square with dimension >= 2")
        object.__setattr__(self, "matrix", mat)
        if self.validate:
            self.check()

    @classmethod
    def from_pure(cls, state: FieldState) -> FieldDensity:
        a = state.amplitudes
        return cls(np.outer(a, a.conj()))

    @property
    def n_max(self) -> int:
        return self.matrix.shape[0] - 1

    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    def check(self, tol: float = 1e-10) -> None:
        m = self.matrix
        if np.max(np.abs(m - m.conj().T)) > tol:
            raise ValueError("density matrix is not Hermitian")
        if abs(np.trace(m) - 1.0) > tol:
            raise ValueError(f"density matrix trace {np.trace(m).real!r} != 1")
        diag = np.diag(m)
        if np.any(np.abs(diag.imag) > tol) or np.any(diag.real < -1e-12):
            raise ValueError("density matrix diagonal must be real and non-negative")

    def tail_mass(self) -> float:
        d = np.real(np.diag(self.matrix))
        return float(d[-1] + d[-2])

    def check_tail(self, threshold: float | None = DEFAULT_TAIL_THRESHOLD) -> None:
        if threshold is None:
            return
        tail = self.tail_mass()
        if tail >= threshold:
            raise TruncationTooSmall(
                f"tail mass {tail:.3e} at n_max={self.n_max} exceeds threshold {threshold:.1e}"
            )


@dataclass(frozen=True, eq=False)
class JointState:
    """Atom-field state: amplitudes of ``|e,n>`` and ``|g,n>`` for ``n = 0..n_max``."""

    e_branch: NDArray[np.complex128]
    g_branch: NDArray[np.complex128]

    def __post_init__(self):
        e, g = _frozen(self.e_branch), _frozen(self.g_branch)
        if e.shape != g.shape or e.ndim != 1:
            raise ValueError("e and g branches must be 1-d vectors of equal length")
        object.__setattr__(self, "e_branch", e)
        object.__setattr__(self, "g_branch", g)

    @classmethod
    def _adopt(cls, e: NDArray[np.complex128], g: NDArray[np.complex128]) -> JointState:
        """Wrap freshly computed complex branches without copying them."""
        e.setflags(write=False)
        g.setflags(write=False)
        obj = object.__new__(cls)
        object.__setattr__(obj, "e_branch", e)
        object.__setattr__(obj, "g_branch", g)
        return obj

    @classmethod
    def product(cls, atom: AtomState, field_state: FieldState) -> JointState:
        a = field_state.amplitudes
        return cls._adopt(atom.alpha * a, atom.beta * a)

    @property
    def n_max(self) -> int:
        return self.e_branch.size - 1

    def norm(self) -> float:
        return math.sqrt(
            float(np.vdot(self.e_branch, self.e_branch).real + np.vdot(self.g_branch, self.g_branch).real)
        )

    def as_vector(self) -> NDArray[np.complex128]:
        """Flattened vector in ``atom (x) field`` order: e-block first."""
        return np.concatenate([self.e_branch, self.g_branch])
