"""Thermal equilibrium of two codes sharing one total bit budget.

Two message sources, with their own prefix codes and message lengths, are
coupled by fixing the combined coded length.  The most probable split
equalizes the two temperatures, so the continuous solution is the single
inverse temperature beta at which the canonical mean lengths add up to the
budget:

    n_first * mean_first(beta) + n_second * mean_second(beta) = total_bits

The brute-force check maximizes the exact product of the two count tables
over every achievable integer split.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .codes import LengthSpectrum
from .errors import InfeasibleError, UnachievableLengthError
from .gibbs import _stats, temperature_from_beta
from .microcanonical import EnsembleTable, count_messages
from .rootfind import solve_decreasing

__all__ = [
    "TwoCodeSystem",
    "Allocation",
    "solve_equilibrium",
    "brute_force_allocation",
    "allocation_table",
]

_LN2 = math.log(2.0)


@dataclass(frozen=True)
class TwoCodeSystem:
    """Two spectra with their message lengths (in symbols)."""

    spectrum_first: LengthSpectrum
    n_first: int
    spectrum_second: LengthSpectrum
    n_second: int

    def __post_init__(self):
        if self.n_first < 1 or self.n_second < 1:
            raise ValueError("both message lengths must be at least 1")

    @property
    def feasible_range(self) -> tuple[int, int]:
        """Closed range of achievable total bit counts."""
        lo = self.n_first * self.spectrum_first.l_min + self.n_second * self.spectrum_second.l_min
        hi = self.n_first * self.spectrum_first.l_max + self.n_second * self.spectrum_second.l_max
        return lo, hi


@dataclass(frozen=True)
class Allocation:
    """Continuous equilibrium split of the bit budget.

    bits_first + bits_second reproduces the budget up to the solver
    residual.  When both spectra are degenerate the split is forced and no
    temperature is defined: degenerate is True and beta_star is nan.
    """

    beta_star: float
    bits_first: float
    bits_second: float
    residual: float
    feasible_range: tuple[int, int]
    degenerate: bool = False

    @property
    def temperature(self) -> float:
        if math.isnan(self.beta_star):
            return math.nan
        return temperature_from_beta(self.beta_star)


def solve_equilibrium(system: TwoCodeSystem, total_bits: float) -> Allocation:
    """Equal-temperature split of total_bits between the two codes.

    total_bits must lie strictly inside the feasible range (exactly on it
    when both spectra are degenerate and the range is a single point).
    Residual tolerance is 1e-9 on the total-length equation.
    """
    sp1, n1 = system.spectrum_first, system.n_first
    sp2, n2 = system.spectrum_second, system.n_second
    lo, hi = system.feasible_range

    if sp1.is_degenerate and sp2.is_degenerate:
        if total_bits != lo:  # lo == hi here
            raise InfeasibleError(
                f"both spectra are degenerate: the only achievable total is {lo}"
            )
        return Allocation(
            beta_star=math.nan,
            bits_first=float(n1 * sp1.l_min),
            bits_second=float(n2 * sp2.l_min),
            residual=0.0,
            feasible_range=(lo, hi),
            degenerate=True,
        )

    if not lo < total_bits < hi:
        raise InfeasibleError(
            f"total_bits {total_bits} outside the open feasible range ({lo}, {hi})"
        )

    def f(beta: float) -> float:
        return n1 * _stats(sp1, beta)[1] + n2 * _stats(sp2, beta)[1]

    def df(beta: float) -> float:
        return -_LN2 * (n1 * _stats(sp1, beta)[2] + n2 * _stats(sp2, beta)[2])

    tol = max(1e-9, 16.0 * math.ulp(float(total_bits)))
    beta = solve_decreasing(f, total_bits, df=df, f_tol=tol)
    bits_first = n1 * _stats(sp1, beta)[1]
    bits_second = n2 * _stats(sp2, beta)[1]
    return Allocation(
        beta_star=beta,
        bits_first=bits_first,
        bits_second=bits_second,
        residual=(bits_first + bits_second) - total_bits,
        feasible_range=(lo, hi),
    )


def _split_products(
    system: TwoCodeSystem, total_bits: int
) -> tuple[EnsembleTable, EnsembleTable, list[tuple[int, int, int, int, int]]]:
    table1 = count_messages(system.spectrum_first, system.n_first)
    table2 = count_messages(system.spectrum_second, system.n_second)
    rows = []
    for bits1 in table1.support:
        bits1 = int(bits1)
        bits2 = total_bits - bits1
        c1 = table1.count(bits1)
        c2 = table2.count(bits2)
        if c2:
            rows.append((bits1, bits2, c1, c2, c1 * c2))
    return table1, table2, rows


def allocation_table(
    system: TwoCodeSystem, total_bits: int
) -> list[tuple[int, int, int, int, int]]:
    """All achievable integer splits with their exact message-count product.

    Rows are (bits_first, bits_second, count_first, count_second, product),
    ascending in bits_first.
    """
    return _split_products(system, total_bits)[2]


def brute_force_allocation(system: TwoCodeSystem, total_bits: int) -> int:
    """bits_first maximizing count_first * count_second over integer splits.

    Exact integer comparison; ties go to the smallest bits_first.  Raises
    UnachievableLengthError when no split is achievable.
    """
    rows = allocation_table(system, total_bits)
    if not rows:
        raise UnachievableLengthError(
            f"no achievable split of {total_bits} bits for this system"
        )
    best_bits, best_product = rows[0][0], rows[0][4]
    for bits1, _, _, _, product in rows[1:]:
        if product > best_product:
            best_bits, best_product = bits1, product
    return best_bits
