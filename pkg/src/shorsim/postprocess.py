"""Classical bookends of the factoring loop.

Base selection with the gcd shortcut, period recovery from a measured
readout via continued fractions, factor derivation (including the
perfect-square rescue for odd periods), and the retry loop that turns
all of it into a FactorReport. Every report carries a plainly worded
note comparing the bit length of the period actually found against the
bit length of the modulus; for the compiled path those two numbers tell
the whole story.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Optional

from .compiler import (
    CompiledBase,
    QubitBudget,
    build_compiled_circuit,
    build_semiclassical_stages,
    default_s,
    find_period2_base,
    zalka_qubit_count,
)
from .errors import DomainError, RefusedTooLargeError
from .numtheory import (
    Convergent,
    Semiprime,
    continued_fraction_convergents,
    gcd,
    mod_pow,
    to_decimal,
)

# Small multiples of each convergent denominator tried during period
# recovery; the measured y often encodes r/gcd(r, something) so a short
# multiple sweep recovers the full period cheaply.
MAX_PERIOD_MULTIPLIER = 4

DEFAULT_MAX_ATTEMPTS = 64

# Honest mode simulates the base's full residue cycle, so the modulus is
# capped where the work register would stop fitting.
HONEST_MODULUS_LIMIT = 1 << 20

MODE_HONEST = "honest-random-base"
MODE_COMPILED = "compiled-crt"
MODE_COIN = "coin"

_MODE_ALIASES = {
    "honest": MODE_HONEST,
    MODE_HONEST: MODE_HONEST,
    "compiled": MODE_COMPILED,
    MODE_COMPILED: MODE_COMPILED,
    "coin": MODE_COIN,
}


@dataclass(frozen=True)
class PeriodCandidate:
    """A verified period, with the convergent that produced it.

    multiplier is the k in k*denominator; multiplier 1 means the
    denominator itself was the period (a direct hit).
    """

    r: int
    source_convergent: Convergent
    multiplier: int
    verified: bool

    @property
    def direct(self) -> bool:
        return self.multiplier == 1


def extract_period(y: int, s_pow: int, a: int, n: int) -> Optional[PeriodCandidate]:
    """Recover the period of a mod n from one measured readout y.

    Scans candidates k*d over k = 1..MAX_PERIOD_MULTIPLIER (small
    multiples last only within each k pass: all convergent denominators
    d are tried at k before k+1, so the smallest verified candidate
    wins). Candidates above n are skipped. Returns None when nothing
    verifies; y = 0 is always uninformative.
    """
    if y >= s_pow:
        raise DomainError("expected y < s_pow")
    if y == 0:
        return None
    convergents = continued_fraction_convergents(y, s_pow)
    seen: set[int] = set()
    for k in range(1, MAX_PERIOD_MULTIPLIER + 1):
        for conv in convergents:
            candidate = k * conv.denominator
            if candidate > n or candidate in seen:
                continue
            seen.add(candidate)
            if mod_pow(a, candidate, n) == 1:
                return PeriodCandidate(
                    r=candidate,
                    source_convergent=conv,
                    multiplier=k,
                    verified=True,
                )
    return None


def derive_factors(a: int, r: int, n: int) -> Optional[tuple[int, int]]:
    """Split n using a verified period r of a.

    Even r: computes x = a**(r/2) and returns the gcd pair (x-1, n),
    (x+1, n) when both are nontrivial; x = n-1 is the dead end that
    sends the caller back for a new base. Odd r: defers to the
    perfect-square rescue. Returns the pair in ascending order.
    """
    if r < 1:
        raise DomainError("period must be positive")
    if mod_pow(a, r, n) != 1:
        raise DomainError(f"{a}**{r} is not 1 mod {n}: not a period")
    if r % 2 == 1:
        return odd_period_rescue(a, r, n)
    x = mod_pow(a, r // 2, n)
    if x == n - 1:
        return None
    g1 = gcd(x - 1, n)
    g2 = gcd(x + 1, n)
    if 1 < g1 < n and 1 < g2 < n:
        lo, hi = sorted((g1, g2))
        return lo, hi
    return None


def odd_period_rescue(a: int, r: int, n: int) -> Optional[tuple[int, int]]:
    """Odd-period escape hatch for perfect-square bases.

    When a = b*b exactly, b has period dividing 2r, so gcd(b**r -/+ 1, n)
    can split n even though r itself is odd. Returns None when a is not
    a perfect square or the gcds are trivial.
    """
    if r < 1 or r % 2 == 0:
        raise DomainError("rescue applies to odd periods only")
    if mod_pow(a, r, n) != 1:
        raise DomainError(f"{a}**{r} is not 1 mod {n}: not a period")
    b = math.isqrt(a)
    if b * b != a:
        return None
    x = mod_pow(b, r, n)
    g1 = gcd((x - 1) % n, n)
    g2 = gcd(x + 1, n)
    if 1 < g1 < n and 1 < g2 < n:
        lo, hi = sorted((g1, g2))
        return lo, hi
    return None


@dataclass(frozen=True)
class AttemptRecord:
    """One pass through the loop: which base, what came out of it."""

    index: int
    base: int
    gcd_shortcut: bool
    y: Optional[int]
    period: Optional[int]
    multiplier: Optional[int]
    outcome: str  # gcd-shortcut | factored | no-period | period-without-factors

    def to_json_dict(self) -> dict:
        return {
            "index": self.index,
            "base": to_decimal(self.base),
            "gcd_shortcut": self.gcd_shortcut,
            "y": None if self.y is None else to_decimal(self.y),
            "period": self.period,
            "multiplier": self.multiplier,
            "outcome": self.outcome,
        }


@dataclass(frozen=True)
class FactorReport:
    """Outcome of a full factoring run.

    factors is None when every attempt came up empty; that is a normal
    result, not an exception. attempt_details keeps the per-attempt
    record that the summary fields compress.
    """

    n: int
    factors: Optional[tuple[int, int]]
    base_used: int
    period_found: Optional[int]
    attempts: int
    mode: str
    qubit_budget: QubitBudget
    seed: int
    honesty_note: str
    gcd_shortcut: bool = False
    attempt_details: tuple[AttemptRecord, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        if self.factors is not None:
            f1, f2 = self.factors
            if f1 * f2 != self.n or f1 <= 1 or f2 <= 1:
                raise DomainError(
                    "reported factors must be nontrivial and multiply to n"
                )

    def to_json_dict(self) -> dict:
        return {
            "n": to_decimal(self.n),
            "factors": None if self.factors is None else [
                to_decimal(self.factors[0]), to_decimal(self.factors[1])
            ],
            "base_used": to_decimal(self.base_used),
            "period_found": self.period_found,
            "attempts": self.attempts,
            "mode": self.mode,
            "qubit_budget": {
                "n_bits": self.qubit_budget.n_bits,
                "zalka_qubits": self.qubit_budget.zalka_qubits,
                "compiled_qubits": self.qubit_budget.compiled_qubits,
            },
            "seed": to_decimal(self.seed),
            "honesty_note": self.honesty_note,
            "gcd_shortcut": self.gcd_shortcut,
            "attempt_details": [a.to_json_dict() for a in self.attempt_details],
        }

    def render_text(self) -> str:
        """Human-readable rendering; the honesty line comes first."""
        lines = [f"HONESTY  {self.honesty_note}"]
        lines.append(f"modulus  {_short_decimal(self.n)}")
        if self.factors is None:
            lines.append("factors  none found")
        else:
            lines.append(f"factors  {_short_decimal(self.factors[0])} x "
                         f"{_short_decimal(self.factors[1])}")
        lines.append(f"base     {_short_decimal(self.base_used)}"
                     + ("  (gcd shortcut)" if self.gcd_shortcut else ""))
        lines.append(f"period   "
                     f"{self.period_found if self.period_found else 'none'}")
        lines.append(f"attempts {self.attempts}")
        lines.append(f"mode     {self.mode}")
        if self.mode == MODE_HONEST:
            lines.append(
                f"qubits   optimized estimate for an uncompiled "
                f"{self.qubit_budget.n_bits}-bit run: "
                f"{self.qubit_budget.zalka_qubits}; the compiled shortcut "
                f"would use {self.qubit_budget.compiled_qubits}"
            )
        else:
            lines.append(
                f"qubits   {self.qubit_budget.compiled_qubits} used here; "
                f"an uncompiled {self.qubit_budget.n_bits}-bit run is "
                f"estimated at {self.qubit_budget.zalka_qubits}"
            )
        lines.append(f"seed     {self.seed}")
        return "\n".join(lines) + "\n"


def _short_decimal(value: int, head: int = 12, tail: int = 12) -> str:
    text = to_decimal(value)
    if len(text) <= head + tail + 3:
        return text
    return f"{text[:head]}...{text[-tail:]} ({len(text)} digits)"


def compose_honesty_note(n: int, period: Optional[int],
                         gcd_shortcut: bool = False) -> str:
    """The scorecard line: period size found versus modulus size."""
    n_bits = n.bit_length()
    if period is not None:
        r_bits = period.bit_length()
        return (
            f"period found: r = {period} ({r_bits} bit{'s' if r_bits != 1 else ''})"
            f" against a {n_bits}-bit modulus; the meaningful size here is "
            f"the {r_bits}-bit period, not the {n_bits}-bit number"
        )
    if gcd_shortcut:
        return (
            f"factors fell out of a classical gcd; no period was measured, "
            f"so nothing quantum is demonstrated on this {n_bits}-bit modulus"
        )
    return (
        f"no usable period recovered; the {n_bits}-bit modulus remains intact"
    )


def canonical_mode(mode: str) -> str:
    try:
        return _MODE_ALIASES[mode]
    except KeyError:
        raise DomainError(
            f"unknown mode {mode!r}; expected honest, compiled, or coin"
        ) from None


def _normalized_factors(g: int, n: int) -> tuple[int, int]:
    lo, hi = sorted((g, n // g))
    return lo, hi


def run_full_algorithm(
    sp: Semiprime,
    mode: str = MODE_HONEST,
    s_override: Optional[int] = None,
    seed: int = 0,
    max_attempts: int = DEFAULT_MAX_ATTEMPTS,
) -> FactorReport:
    """The whole loop: pick a base, run the circuit, recover the period,
    derive factors, retry on dead ends.

    Honest mode draws bases uniformly from [2, n-2] and simulates the
    staged circuit with s = s_override or default_s(n). Compiled mode
    uses the CRT period-2 base (factors required) and the one-stage
    circuit. Coin mode hands off to the coin-toss reduction with
    max_attempts tosses. Deterministic per seed; exhausting max_attempts
    yields a report with factors = None rather than an exception.
    """
    mode = canonical_mode(mode)
    n = sp.n
    if n % 2 == 0:
        raise DomainError("even moduli have the factor 2; nothing to run")
    if max_attempts < 1:
        raise DomainError("need at least one attempt")

    if mode == MODE_COIN:
        from .coinlab import coin_factor_demo  # deferred: coinlab imports us
        _, report = coin_factor_demo(sp, n_tosses=max_attempts, seed=seed)
        return report

    budget = zalka_qubit_count(n)
    master = random.Random(seed)
    base: Optional[CompiledBase] = None
    s = s_override
    if mode == MODE_COMPILED:
        base = find_period2_base(sp)
    else:
        if n >= HONEST_MODULUS_LIMIT:
            raise RefusedTooLargeError(
                f"honest mode simulates the full residue cycle and refuses "
                f"moduli at or above {HONEST_MODULUS_LIMIT}"
            )
        if s is None:
            s = default_s(n)

    # Imported here: simulator pulls in the kernels, and postprocess is
    # importable without them for the purely classical helpers.
    from .simulator import run_circuit

    details: list[AttemptRecord] = []
    last_base = 0
    for attempt in range(1, max_attempts + 1):
        if mode == MODE_COMPILED:
            assert base is not None
            a = base.a
            circuit = build_compiled_circuit(base)
            s_eff = 1
        else:
            a = master.randrange(2, n - 1)
            last_base = a
            shortcut = gcd(a, n)
            if shortcut > 1:
                factors = _normalized_factors(shortcut, n)
                details.append(AttemptRecord(
                    index=attempt, base=a, gcd_shortcut=True, y=None,
                    period=None, multiplier=None, outcome="gcd-shortcut",
                ))
                return FactorReport(
                    n=n, factors=factors, base_used=a, period_found=None,
                    attempts=attempt, mode=mode, qubit_budget=budget,
                    seed=seed,
                    honesty_note=compose_honesty_note(n, None, True),
                    gcd_shortcut=True, attempt_details=tuple(details),
                )
            circuit = build_semiclassical_stages(a, n, s)
            s_eff = circuit.num_readout_bits
        last_base = a

        run_seed = master.getrandbits(63)
        y, _ = run_circuit(circuit, run_seed)
        candidate = extract_period(y, 1 << s_eff, a, n)
        if candidate is None:
            details.append(AttemptRecord(
                index=attempt, base=a, gcd_shortcut=False, y=y,
                period=None, multiplier=None, outcome="no-period",
            ))
            continue
        factors_raw = derive_factors(a, candidate.r, n)
        if factors_raw is None:
            details.append(AttemptRecord(
                index=attempt, base=a, gcd_shortcut=False, y=y,
                period=candidate.r, multiplier=candidate.multiplier,
                outcome="period-without-factors",
            ))
            continue
        factors = _normalized_factors(factors_raw[0], n)
        details.append(AttemptRecord(
            index=attempt, base=a, gcd_shortcut=False, y=y,
            period=candidate.r, multiplier=candidate.multiplier,
            outcome="factored",
        ))
        return FactorReport(
            n=n, factors=factors, base_used=a, period_found=candidate.r,
            attempts=attempt, mode=mode, qubit_budget=budget, seed=seed,
            honesty_note=compose_honesty_note(n, candidate.r),
            gcd_shortcut=False, attempt_details=tuple(details),
        )

    return FactorReport(
        n=n, factors=None, base_used=last_base, period_found=None,
        attempts=max_attempts, mode=mode, qubit_budget=budget, seed=seed,
        honesty_note=compose_honesty_note(n, None),
        gcd_shortcut=False, attempt_details=tuple(details),
    )
