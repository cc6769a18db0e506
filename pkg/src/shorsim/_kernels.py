"""Branch-enumeration kernels behind exact output distributions.

The staged circuit's full outcome distribution is computed by carrying
every measurement history at once: after stage k there are 2**k
unnormalized work-register vectors, one per readout prefix, and the
branch index literally is the readout value accumulated so far. Stage k
maps branch b to branches b and b + 2**(k-1) via

    out = (state + phase * permuted(state)) / 2      (bit 0)
    out = (state - phase * permuted(state)) / 2      (bit 1)

with phase = exp(-2j*pi*b / 2**k) for k >= 2 and 1 at stage 1.

This is the package's one hot loop, so it ships twice: a numba-compiled
kernel and a pure-numpy twin. SHORSIM_BACKEND picks between them
("auto", "numba", "numpy"); auto takes numba when importable.
"""

from __future__ import annotations

import math
import os

import numpy as np

from .errors import DomainError

try:
    import numba
    HAS_NUMBA = True
except ImportError:  # pragma: no cover - exercised on numba-free installs
    numba = None
    HAS_NUMBA = False

BACKEND_ENV = "SHORSIM_BACKEND"


def active_backend() -> str:
    """Resolve the backend name the next kernel call will use."""
    choice = os.environ.get(BACKEND_ENV, "auto").strip().lower() or "auto"
    if choice == "auto":
        return "numba" if HAS_NUMBA else "numpy"
    if choice == "numpy":
        return "numpy"
    if choice == "numba":
        if not HAS_NUMBA:
            raise DomainError(
                f"{BACKEND_ENV}=numba requested but numba is not installed"
            )
        return "numba"
    raise DomainError(
        f"{BACKEND_ENV} must be auto, numba, or numpy (got {choice!r})"
    )


def branch_states_numpy(
    init: np.ndarray, perm_invs: np.ndarray, stages: int
) -> np.ndarray:
    """Unnormalized branch vectors after the first `stages` stages.

    init: complex128[W]; perm_invs: int64[s, W] (inverse permutation per
    stage); returns complex128[2**stages, W]. Row y is the state paired
    with readout prefix y.
    """
    span = init.shape[0]
    state = np.empty((1 << stages, span), dtype=np.complex128)
    state[0] = init
    branches = 1
    for k in range(1, stages + 1):
        block = state[:branches]
        permuted = block[:, perm_invs[k - 1]]
        if k > 1:
            phases = np.exp(-2j * np.pi * np.arange(branches) / float(1 << k))
            permuted = phases[:, None] * permuted
        top = 0.5 * (block + permuted)
        bottom = 0.5 * (block - permuted)
        state[:branches] = top
        state[branches:2 * branches] = bottom
        branches *= 2
    return state


def branch_probabilities_numpy(
    init: np.ndarray, perm_invs: np.ndarray
) -> np.ndarray:
    state = branch_states_numpy(init, perm_invs, perm_invs.shape[0])
    return np.einsum("ij,ij->i", state, state.conj()).real


if HAS_NUMBA:

    @numba.njit(cache=True)
    def _branch_probs_jit(init, perm_invs, state, probs):  # pragma: no cover
        stages, span = perm_invs.shape
        for i in range(span):
            state[0, i] = init[i]
        scratch = np.empty(span, dtype=np.complex128)
        branches = 1
        for k in range(1, stages + 1):
            pinv = perm_invs[k - 1]
            denom = float(1 << k)
            for b in range(branches):
                if k == 1:
                    phase = complex(1.0, 0.0)
                else:
                    angle = -2.0 * math.pi * (b / denom)
                    phase = complex(math.cos(angle), math.sin(angle))
                for i in range(span):
                    scratch[i] = phase * state[b, pinv[i]]
                for i in range(span):
                    top = 0.5 * (state[b, i] + scratch[i])
                    bottom = 0.5 * (state[b, i] - scratch[i])
                    state[b, i] = top
                    state[b + branches, i] = bottom
            branches *= 2
        for y in range(branches):
            total = 0.0
            for i in range(span):
                amp = state[y, i]
                total += amp.real * amp.real + amp.imag * amp.imag
            probs[y] = total

    def branch_probabilities_numba(
        init: np.ndarray, perm_invs: np.ndarray
    ) -> np.ndarray:
        stages, span = perm_invs.shape
        state = np.empty((1 << stages, span), dtype=np.complex128)
        probs = np.empty(1 << stages, dtype=np.float64)
        _branch_probs_jit(
            np.ascontiguousarray(init, dtype=np.complex128),
            np.ascontiguousarray(perm_invs, dtype=np.int64),
            state,
            probs,
        )
        return probs

else:  # pragma: no cover - exercised on numba-free installs

    def branch_probabilities_numba(init, perm_invs):
        raise DomainError("numba is not installed")


def branch_probabilities(init: np.ndarray, perm_invs: np.ndarray) -> np.ndarray:
    """Outcome probabilities over all 2**s readouts, backend-dispatched."""
    if active_backend() == "numba":
        return branch_probabilities_numba(init, perm_invs)
    return branch_probabilities_numpy(init, perm_invs)
