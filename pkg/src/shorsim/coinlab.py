"""Coin-toss reduction of the compiled circuit.

The compiled two-qubit circuit's readout is an unbiased bit, so a fair
coin is a drop-in replacement: heads plays y = 1 (period recovered),
tails plays y = 0 (try again). This module runs that replacement,
collects the toss statistics with one-sigma binomial error bars, and
provides the chi-square helpers the statistical checks lean on.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .compiler import find_period2_base, zalka_qubit_count
from .errors import DomainError
from .numtheory import Semiprime, to_decimal
from .postprocess import (
    MODE_COIN,
    AttemptRecord,
    FactorReport,
    derive_factors,
)

# chi-square critical value, 1 degree of freedom, significance 0.001
CHI2_1DOF_P999 = 10.8276

# normal quantile for the 0.999 one-sided tail, used by the
# Wilson-Hilferty approximation for higher degrees of freedom
_Z_P999 = 3.090232


@dataclass(frozen=True)
class CoinRun:
    """Toss statistics for one series, with the plug-in binomial error.

    sigma = sqrt(p_hat * (1 - p_hat) / tosses); zero when every toss
    agreed, which is the honest reading of a plug-in estimate.
    """

    label: str
    tosses: int
    heads: int
    p_hat: float
    sigma: float

    def __post_init__(self) -> None:
        if self.tosses < 1:
            raise DomainError("a coin run needs at least one toss")
        if not 0 <= self.heads <= self.tosses:
            raise DomainError("heads count out of range")
        if abs(self.p_hat - self.heads / self.tosses) > 1e-12:
            raise DomainError("p_hat must equal heads/tosses")
        expected_sigma = math.sqrt(self.p_hat * (1.0 - self.p_hat) / self.tosses)
        if abs(self.sigma - expected_sigma) > 1e-12:
            raise DomainError("sigma must be the plug-in binomial error")

    @classmethod
    def from_counts(cls, label: str, tosses: int, heads: int) -> "CoinRun":
        if tosses < 1:
            raise DomainError("a coin run needs at least one toss")
        if not 0 <= heads <= tosses:
            raise DomainError("heads count out of range")
        p_hat = heads / tosses
        sigma = math.sqrt(p_hat * (1.0 - p_hat) / tosses)
        return cls(label=label, tosses=tosses, heads=heads,
                   p_hat=p_hat, sigma=sigma)

    def to_json_dict(self) -> dict:
        return {
            "label": self.label,
            "tosses": self.tosses,
            "heads": self.heads,
            "p_hat": self.p_hat,
            "sigma": self.sigma,
        }


def _toss_bits(n_tosses: int, seed: int) -> np.ndarray:
    rng = np.random.Generator(np.random.PCG64(seed))
    return rng.random(n_tosses) < 0.5


def toss_series(n_tosses: int, seed: int, label: str = "coin") -> CoinRun:
    """Toss a fair coin n_tosses times; deterministic per seed."""
    if n_tosses < 1:
        raise DomainError("a coin run needs at least one toss")
    bits = _toss_bits(n_tosses, seed)
    return CoinRun.from_counts(label, n_tosses, int(bits.sum()))


def coin_factor_demo(sp: Semiprime, n_tosses: int,
                     seed: int) -> tuple[CoinRun, FactorReport]:
    """Factor a semiprime with a coin.

    Tosses the full series up front (the CoinRun matches toss_series
    with the same seed), then consumes tosses in order: the first heads
    is read as y = 1 from the compiled circuit, giving period 2 and the
    factors via the CRT base. All tails means no period this series.
    Requires known factors, exactly like the compiled pipeline it
    shadows.
    """
    if n_tosses < 1:
        raise DomainError("a coin run needs at least one toss")
    base = find_period2_base(sp)
    n = sp.n
    n_bits = n.bit_length()
    label = to_decimal(n) if n_bits <= 64 else f"{n_bits}-bit semiprime"
    bits = _toss_bits(n_tosses, seed)
    run = CoinRun.from_counts(label, n_tosses, int(bits.sum()))

    first_head: Optional[int] = None
    for i, b in enumerate(bits):
        if b:
            first_head = i + 1
            break

    details = []
    consumed = first_head if first_head is not None else n_tosses
    for i in range(consumed):
        heads = bool(bits[i])
        details.append(AttemptRecord(
            index=i + 1,
            base=base.a,
            gcd_shortcut=False,
            y=1 if heads else 0,
            period=2 if heads else None,
            multiplier=1 if heads else None,
            outcome="factored" if heads else "no-period",
        ))

    budget = zalka_qubit_count(n)
    if first_head is not None:
        factors = derive_factors(base.a, 2, n)
        assert factors is not None
        note = (
            f"period found by coin toss: r = 2 (2 bits) against a "
            f"{n_bits}-bit modulus; a fair coin replaced the circuit, "
            f"and their outcome distributions are identical"
        )
        report = FactorReport(
            n=n, factors=factors, base_used=base.a, period_found=2,
            attempts=first_head, mode=MODE_COIN, qubit_budget=budget,
            seed=seed, honesty_note=note, gcd_shortcut=False,
            attempt_details=tuple(details),
        )
    else:
        note = (
            f"no heads in {n_tosses} tosses, so no period this series; "
            f"the {n_bits}-bit modulus remains intact"
        )
        report = FactorReport(
            n=n, factors=None, base_used=base.a, period_found=None,
            attempts=n_tosses, mode=MODE_COIN, qubit_budget=budget,
            seed=seed, honesty_note=note, gcd_shortcut=False,
            attempt_details=tuple(details),
        )
    return run, report


def chi_square_heads_tails(heads: int, tosses: int) -> float:
    """One-dof chi-square statistic against a fair coin."""
    if tosses < 1:
        raise DomainError("need at least one toss")
    if not 0 <= heads <= tosses:
        raise DomainError("heads count out of range")
    return (2.0 * heads - tosses) ** 2 / tosses


def chi_square_critical(dof: int) -> float:
    """Critical value at significance 0.001.

    Exact table value for one degree of freedom, Wilson-Hilferty
    approximation above that (good to a few parts in a thousand, which
    is plenty for a pass/fail gate at this significance).
    """
    if dof < 1:
        raise DomainError("degrees of freedom must be positive")
    if dof == 1:
        return CHI2_1DOF_P999
    u = 2.0 / (9.0 * dof)
    return dof * (1.0 - u + _Z_P999 * math.sqrt(u)) ** 3


def chi_square_binomial(head_counts: Sequence[int], tosses_per_run: int,
                        p: float = 0.5) -> tuple[float, int, float]:
    """Goodness of fit of observed head counts to Binomial(n, p).

    Adjacent outcome bins are merged until every expected count is at
    least 5 (the usual chi-square validity rule). Returns (statistic,
    degrees of freedom, critical value at significance 0.001).
    """
    if tosses_per_run < 1:
        raise DomainError("need at least one toss per run")
    if not 0.0 < p < 1.0:
        raise DomainError("p must be strictly between 0 and 1")
    runs = len(head_counts)
    if runs < 1:
        raise DomainError("need at least one run")
    observed = [0] * (tosses_per_run + 1)
    for h in head_counts:
        if not 0 <= h <= tosses_per_run:
            raise DomainError("heads count out of range")
        observed[h] += 1
    expected = [
        runs * math.comb(tosses_per_run, k) * p**k * (1 - p) ** (tosses_per_run - k)
        for k in range(tosses_per_run + 1)
    ]

    # merge left to right, then fold a light last bin into its neighbor
    bins: list[tuple[float, float]] = []
    obs_acc = 0.0
    exp_acc = 0.0
    for o, e in zip(observed, expected):
        obs_acc += o
        exp_acc += e
        if exp_acc >= 5.0:
            bins.append((obs_acc, exp_acc))
            obs_acc = 0.0
            exp_acc = 0.0
    if exp_acc > 0.0:
        if bins:
            o_last, e_last = bins.pop()
            bins.append((o_last + obs_acc, e_last + exp_acc))
        else:
            bins.append((obs_acc, exp_acc))
    if len(bins) < 2:
        raise DomainError("too few runs for a meaningful chi-square bin split")

    stat = sum((o - e) ** 2 / e for o, e in bins)
    dof = len(bins) - 1
    return stat, dof, chi_square_critical(dof)


def to_plot_text(runs: Iterable[CoinRun]) -> str:
    """Tab-separated label / p_hat / sigma lines for external plotting."""
    lines = ["label\tp_hat\tsigma"]
    for run in runs:
        lines.append(f"{run.label}\t{run.p_hat:.6f}\t{run.sigma:.6f}")
    return "\n".join(lines) + "\n"


def to_plot_json(runs: Iterable[CoinRun]) -> str:
    payload = [run.to_json_dict() for run in runs]
    return json.dumps(payload, indent=2, sort_keys=True)
