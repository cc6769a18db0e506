"""Exact state-vector execution of the circuit IR.

The state is one control qubit tensored with a work register whose
basis is the circuit's reachable-residue orbit, nothing more. That
orbit has size equal to the multiplicative order of the base, which is
why the compiled circuit gets away with two work values while an honest
run pays for the full cycle. Measurement collapses mid-circuit and the
classical bits feed the later phase gates.

Two exact-distribution routes exist on purpose: output_distribution
walks the gate IR over all measurement branches, while
dft_oracle_distribution never looks at the IR and instead builds the
plain dense-Fourier reference. Tests hold the two to each other.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _kernels
from .compiler import (
    Circuit,
    ControlledModMul,
    Hadamard,
    MeasureQubit,
    PhaseThenHadamard,
    PreparePlus,
)
from .errors import DomainError, RefusedTooLargeError, SimulationError
from .numtheory import gcd, multiplicative_order

# Exact enumeration refuses beyond these; past them the dense
# distribution is no longer a desk-scale object.
MAX_DIST_READOUT_BITS = 20
MAX_DIST_MODULUS = 1 << 16
MAX_DIST_CELLS = 1 << 25

NORM_TOLERANCE = 1e-12


@dataclass
class QuantumState:
    """Control qubit tensor work register, plus measured classical bits.

    amps has shape (2, W): row 0 is the control-|0> block, row 1 the
    control-|1> block, columns indexed by the work orbit.
    """

    amps: np.ndarray
    classical_bits: list[int]
    rng_seed: int
    work_values: tuple[int, ...]

    @property
    def amplitudes(self) -> np.ndarray:
        """Flat length-2W view: control-0 block then control-1 block."""
        return self.amps.reshape(-1)

    def norm_sq(self) -> float:
        return float(np.vdot(self.amps, self.amps).real)

    def control_probabilities(self) -> tuple[float, float]:
        p1 = float(np.vdot(self.amps[1], self.amps[1]).real)
        return 1.0 - p1, p1


@dataclass(frozen=True)
class StageRecord:
    """What one readout stage did: operand, feedback, outcome odds."""

    stage: int
    multiplier: int
    phase: float
    p_one: float
    bit: int


@dataclass(frozen=True)
class RunTrace:
    """History summary of one seeded trajectory."""

    seed: int
    y: int
    bits: tuple[int, ...]
    stages: tuple[StageRecord, ...]
    work_register_span: int
    final_state: QuantumState


class OutcomeDistribution:
    """Exact probabilities over every readout y in [0, 2**s).

    Wraps a dense float vector; probabilities sum to 1 within 1e-12.
    """

    def __init__(self, probabilities: np.ndarray):
        probs = np.asarray(probabilities, dtype=np.float64)
        if probs.ndim != 1 or probs.size == 0:
            raise DomainError("need a nonempty 1-d probability vector")
        if float(probs.min()) < -NORM_TOLERANCE:
            raise SimulationError("negative probability encountered")
        total = float(probs.sum())
        if abs(total - 1.0) > NORM_TOLERANCE:
            raise SimulationError(
                f"probabilities sum to {total}, expected 1"
            )
        self._probs = np.clip(probs, 0.0, None)
        self._probs.setflags(write=False)

    def __len__(self) -> int:
        return int(self._probs.size)

    def __getitem__(self, y: int) -> float:
        return float(self._probs[y])

    @property
    def num_outcomes(self) -> int:
        return int(self._probs.size)

    def as_array(self) -> np.ndarray:
        return self._probs

    def support(self, atol: float = 0.0) -> list[int]:
        """Outcomes with probability strictly above atol."""
        return [int(y) for y in np.nonzero(self._probs > atol)[0]]

    def as_dict(self, nonzero_only: bool = True) -> dict[int, float]:
        if nonzero_only:
            return {y: float(self._probs[y]) for y in self.support()}
        return {int(y): float(p) for y, p in enumerate(self._probs)}

    def to_plot_text(self) -> str:
        """Two columns, outcome and probability, nonzero entries only."""
        lines = [f"{y}\t{self._probs[y]:.17g}" for y in self.support()]
        return "\n".join(lines) + "\n"


def total_variation(d1: OutcomeDistribution, d2: OutcomeDistribution) -> float:
    """Total variation distance between two same-length distributions."""
    if len(d1) != len(d2):
        raise DomainError("distributions cover different outcome sets")
    return 0.5 * float(np.abs(d1.as_array() - d2.as_array()).sum())


def _stage_perm_invs(circuit: Circuit) -> np.ndarray:
    """Per-stage inverse permutations over the work orbit, int64[s, W]."""
    values = circuit.orbit_values()
    index = {v: i for i, v in enumerate(values)}
    modulus = circuit.modulus
    span = len(values)
    out = np.empty((circuit.num_readout_bits, span), dtype=np.int64)
    for stage, mult in enumerate(circuit.multipliers):
        perm = np.empty(span, dtype=np.int64)
        for i, v in enumerate(values):
            perm[i] = index[v * mult % modulus]
        inv = np.empty(span, dtype=np.int64)
        inv[perm] = np.arange(span, dtype=np.int64)
        out[stage] = inv
    return out


def _feedback_phase(stage: int, bits: list[int]) -> float:
    """Feedback angle before the stage-k Hadamard: -2*pi*P/2**k."""
    prefix = 0
    for j, bit in enumerate(bits):
        prefix |= bit << j
    return -2.0 * np.pi * prefix / float(1 << stage)


def run_circuit(circuit: Circuit, seed: int) -> tuple[int, RunTrace]:
    """Sample one trajectory; deterministic per seed.

    The work register starts at residue 1. Returns the readout y
    assembled from the measured bits (classical bit index = bit
    significance) and a stage-by-stage trace.
    """
    rng = np.random.Generator(np.random.PCG64(seed))
    values = circuit.orbit_values()
    span = len(values)
    perm_invs = _stage_perm_invs(circuit)

    work = np.zeros(span, dtype=np.complex128)
    work[0] = 1.0  # residue 1 sits at orbit index 0
    amps = np.zeros((2, span), dtype=np.complex128)
    amps[0] = work
    bits: list[int] = []
    records: list[StageRecord] = []
    stage = 0
    pending_phase = 0.0

    def check_norm() -> None:
        total = float(np.vdot(amps, amps).real)
        if abs(total - 1.0) > NORM_TOLERANCE:
            raise SimulationError(f"state norm drifted to {total}")

    for gate in circuit.gates:
        if isinstance(gate, PreparePlus):
            stage += 1
            amps = np.vstack((work, work)) / np.sqrt(2.0)
            pending_phase = 0.0
        elif isinstance(gate, ControlledModMul):
            amps[1] = amps[1][perm_invs[stage - 1]]
        elif isinstance(gate, Hadamard):
            top = (amps[0] + amps[1]) / np.sqrt(2.0)
            bottom = (amps[0] - amps[1]) / np.sqrt(2.0)
            amps = np.vstack((top, bottom))
        elif isinstance(gate, PhaseThenHadamard):
            pending_phase = _feedback_phase(gate.stage, bits)
            amps[1] = amps[1] * np.exp(1j * pending_phase)
            top = (amps[0] + amps[1]) / np.sqrt(2.0)
            bottom = (amps[0] - amps[1]) / np.sqrt(2.0)
            amps = np.vstack((top, bottom))
        elif isinstance(gate, MeasureQubit):
            p1 = float(np.vdot(amps[1], amps[1]).real)
            outcome = 1 if rng.random() < p1 else 0
            p_outcome = p1 if outcome == 1 else 1.0 - p1
            work = amps[outcome] / np.sqrt(p_outcome)
            amps = np.zeros((2, span), dtype=np.complex128)
            amps[outcome] = work
            bits.append(outcome)
            records.append(StageRecord(
                stage=stage,
                multiplier=circuit.multipliers[stage - 1],
                phase=pending_phase,
                p_one=p1,
                bit=outcome,
            ))
        else:  # pragma: no cover - the union is closed
            raise SimulationError(f"unknown gate {gate!r}")
        check_norm()

    y = 0
    for j, bit in enumerate(bits):
        y |= bit << j
    final = QuantumState(
        amps=amps,
        classical_bits=list(bits),
        rng_seed=seed,
        work_values=values,
    )
    trace = RunTrace(
        seed=seed,
        y=y,
        bits=tuple(bits),
        stages=tuple(records),
        work_register_span=span,
        final_state=final,
    )
    return y, trace


def _check_enumeration_guards(s: int, modulus: int, cells: int) -> None:
    if s > MAX_DIST_READOUT_BITS:
        raise RefusedTooLargeError(
            f"exact enumeration refused: {s} readout bits exceeds "
            f"{MAX_DIST_READOUT_BITS}"
        )
    if modulus > MAX_DIST_MODULUS:
        raise RefusedTooLargeError(
            f"exact enumeration refused: modulus above {MAX_DIST_MODULUS}"
        )
    if cells > MAX_DIST_CELLS:
        raise RefusedTooLargeError(
            f"exact enumeration refused: {cells} amplitude cells exceeds "
            f"{MAX_DIST_CELLS}"
        )


def output_distribution(circuit: Circuit) -> OutcomeDistribution:
    """Exact outcome distribution by summing every measurement branch."""
    s = circuit.num_readout_bits
    span = circuit.work_register_span
    _check_enumeration_guards(s, circuit.modulus, (1 << s) * span)
    init = np.zeros(span, dtype=np.complex128)
    init[0] = 1.0
    probs = _kernels.branch_probabilities(init, _stage_perm_invs(circuit))
    return OutcomeDistribution(probs)


def dft_oracle_distribution(a: int, n: int, s: int) -> OutcomeDistribution:
    """Reference distribution from the non-recycled construction.

    Builds the uniform superposition over all S = 2**s exponent values,
    groups them by a**x mod n (the exponents congruent mod the order r
    land on the same work value), Fourier-transforms each group with a
    dense FFT, and accumulates squared magnitudes. Independent of the
    circuit IR and of the branch kernels.
    """
    if s < 1:
        raise DomainError("need at least one readout bit")
    a %= n
    if gcd(a, n) != 1:
        raise DomainError(f"{a} is not a unit mod {n}")
    big_s = 1 << s
    r = multiplicative_order(a, n)
    _check_enumeration_guards(s, n, r * big_s)
    probs = np.zeros(big_s, dtype=np.float64)
    for j in range(r):
        indicator = np.zeros(big_s, dtype=np.float64)
        indicator[j::r] = 1.0
        spectrum = np.fft.fft(indicator)
        probs += (spectrum.real ** 2 + spectrum.imag ** 2)
    probs /= float(big_s) ** 2
    return OutcomeDistribution(probs)


def control_reduced_density(circuit: Circuit) -> np.ndarray:
    """Reduced 2x2 density matrix of the control qubit just before the
    final measurement, averaged over all earlier measurement outcomes.
    """
    s = circuit.num_readout_bits
    span = circuit.work_register_span
    _check_enumeration_guards(s, circuit.modulus, (1 << s) * span)
    perm_invs = _stage_perm_invs(circuit)
    init = np.zeros(span, dtype=np.complex128)
    init[0] = 1.0
    prior = _kernels.branch_states_numpy(init, perm_invs, s - 1)
    branches = prior.shape[0]
    permuted = prior[:, perm_invs[s - 1]]
    if s > 1:
        phases = np.exp(-2j * np.pi * np.arange(branches) / float(1 << s))
        permuted = phases[:, None] * permuted
    # Per branch: control-0 block (psi + U psi)/2, control-1 block
    # (psi - U psi)/2, both unnormalized; weights ride along.
    block0 = 0.5 * (prior + permuted)
    block1 = 0.5 * (prior - permuted)
    rho = np.empty((2, 2), dtype=np.complex128)
    rho[0, 0] = np.einsum("ij,ij->", block0.conj(), block0)
    rho[0, 1] = np.einsum("ij,ij->", block1.conj(), block0)
    rho[1, 0] = np.conj(rho[0, 1])
    rho[1, 1] = np.einsum("ij,ij->", block1.conj(), block1)
    return rho


def bloch_vector(rho: np.ndarray) -> np.ndarray:
    """Bloch components (x, y, z) of a 2x2 density matrix."""
    x = 2.0 * rho[1, 0].real
    y = 2.0 * rho[1, 0].imag
    z = (rho[0, 0] - rho[1, 1]).real
    return np.array([x, y, z], dtype=np.float64)
