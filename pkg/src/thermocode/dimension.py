"""Box-counting dimension of the message set of a prefix code.

Viewing coded messages as binary expansions of points in [0, 1), the set of
infinite messages has a box-counting dimension that depends on temperature:

    dim(beta) = beta + log2(Z(beta)) / mean_length(beta)

with the canonical quantities from the gibbs module.  beta = 1 gives
dimension exactly 1 for complete codes (the Kraft identity), beta = 0 gives
the dimension of the unconstrained message set, and the beta -> +-inf
limits are set by the shortest and longest codewords alone.

The empirical side counts, exactly, the distinct n-bit prefixes of all
messages of fixed symbol count and fixed total coded length; the slope of
log2(count) against n estimates the same dimension.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .codes import Code, LengthSpectrum
from .errors import UnachievableLengthError
from .gibbs import _stats, temperature_from_beta

__all__ = [
    "DimensionLimits",
    "PrefixCountTable",
    "box_dimension",
    "limit_dimensions",
    "unit_temperature_derivatives",
    "prefix_counts",
    "fit_dimension",
    "dimension_curve",
]


def box_dimension(spectrum: LengthSpectrum, beta: float) -> float:
    """dim(beta) = beta + log2(Z(beta)) / mean_length(beta).

    Stable for large |beta|: the log-domain partition sum never overflows.
    beta = 0 needs no special casing, the formula already reduces to
    log2(alphabet size) / mean length there.
    """
    log2_z, mean, _ = _stats(spectrum, beta)
    return beta + log2_z / mean


@dataclass(frozen=True)
class DimensionLimits:
    """Limits of the dimension curve at the four ends of the T axis.

    t_to_zero_plus:  T -> +0 (beta -> +inf): log2(d_min)/l_min, only the
                     shortest codewords survive.
    t_equal_one:     T = 1, exactly 1 for complete codes.
    t_to_inf:        T -> +-inf (beta = 0): n*log2(n)/sum of all lengths.
    t_to_zero_minus: T -> -0 (beta -> -inf): log2(d_max)/l_max.
    """

    t_to_zero_plus: float
    t_equal_one: float
    t_to_inf: float
    t_to_zero_minus: float


def limit_dimensions(spectrum: LengthSpectrum) -> DimensionLimits:
    """Closed-form limits of dim along the temperature axis."""
    n = spectrum.n_codewords
    return DimensionLimits(
        t_to_zero_plus=math.log2(spectrum.d_min) / spectrum.l_min,
        t_equal_one=box_dimension(spectrum, 1.0),
        t_to_inf=n * math.log2(n) / spectrum.total_length,
        t_to_zero_minus=math.log2(spectrum.d_max) / spectrum.l_max,
    )


def unit_temperature_derivatives(
    spectrum: LengthSpectrum, h: float = 1e-4
) -> tuple[float, float]:
    """Central-difference first and second derivatives of dim(T) at T = 1.

    For a complete non-degenerate code the dimension curve peaks at T = 1:
    first derivative 0, second strictly negative.  h must lie in
    [1e-6, 1e-2] to keep truncation and cancellation both small.
    """
    if not 1e-6 <= h <= 1e-2:
        raise ValueError("step h must lie in [1e-6, 1e-2]")

    def f(temperature: float) -> float:
        return box_dimension(spectrum, 1.0 / temperature)

    up, mid, down = f(1.0 + h), f(1.0), f(1.0 - h)
    first = (up - down) / (2.0 * h)
    second = (up - 2.0 * mid + down) / (h * h)
    return first, second


@dataclass(frozen=True)
class PrefixCountTable:
    """Exact counts of distinct n-bit prefixes of the fixed-length message set.

    counts[n] is the number of distinct length-n binary strings extendable
    to a full message of n_symbols codewords totalling total_bits bits.
    counts[0] == 1, and counts[total_bits] equals the number of messages.
    """

    n_symbols: int
    total_bits: int
    counts: tuple[int, ...]

    @property
    def n_max(self) -> int:
        return len(self.counts) - 1

    def log2_counts(self) -> np.ndarray:
        return np.array([math.log2(c) for c in self.counts])


def _achievable_rows(spectrum: LengthSpectrum, n_symbols: int, budget: int) -> np.ndarray:
    """Boolean table: row m, column j true iff m codewords can total j bits."""
    reach = np.zeros((n_symbols + 1, budget + 1), dtype=bool)
    reach[0, 0] = True
    for m in range(1, n_symbols + 1):
        row = reach[m]
        prev = reach[m - 1]
        for l in spectrum.lengths:
            if l <= budget:
                row[l:] |= prev[: budget + 1 - l]
    return reach


def prefix_counts(
    code: Code, n_symbols: int, total_bits: int, n_max: int | None = None
) -> PrefixCountTable:
    """Count distinct prefixes of the message set by exact dynamic programming.

    State: (codewords completed, position inside the code tree).  Distinct
    prefixes reaching a common state are interchangeable, so integer path
    counts per state enumerate them without materializing any string.
    States that cannot be completed to exactly total_bits (checked against
    the achievable-length table of the remaining suffix) are pruned as soon
    as they appear, which keeps the live state set small.

    Args:
        code: the prefix code.
        n_symbols: codewords per message, at least 1.
        total_bits: total coded length; must be achievable.
        n_max: largest prefix length to count (default: total_bits).

    Returns:
        PrefixCountTable with exact counts for n = 0 .. n_max.
    """
    if n_symbols < 1:
        raise ValueError("n_symbols must be at least 1")
    spectrum = code.spectrum()
    if n_max is None:
        n_max = total_bits
    if not 0 <= n_max <= total_bits:
        raise ValueError("n_max must lie in [0, total_bits]")

    reach = _achievable_rows(spectrum, n_symbols, total_bits)
    if not reach[n_symbols, total_bits]:
        raise UnachievableLengthError(
            f"no message of {n_symbols} codewords totals {total_bits} bits"
        )

    # Code tree: internal nodes are the proper prefixes of codewords.
    words = set(code.words.values())
    internal = sorted({w[:i] for w in words for i in range(len(w))})
    node_id = {p: i for i, p in enumerate(internal)}
    root = node_id[""]
    children: list[list[tuple[str, int] | None]] = []
    depth_sets: list[tuple[int, ...]] = []
    for p in internal:
        row: list[tuple[str, int] | None] = []
        for bit in "01":
            q = p + bit
            if q in node_id:
                row.append(("node", node_id[q]))
            elif q in words:
                row.append(("leaf", 0))
            else:
                row.append(None)
        children.append(row)
        depth_sets.append(
            tuple(sorted({len(w) - len(p) for w in words if w.startswith(p)}))
        )

    def viable(k: int, node: int, bits_used: int) -> bool:
        left = total_bits - bits_used
        if node == root:
            return k <= n_symbols and reach[n_symbols - k, left]
        if k >= n_symbols:
            return False
        row = reach[n_symbols - k - 1]
        return any(d <= left and row[left - d] for d in depth_sets[node])

    states: dict[tuple[int, int], int] = {(0, root): 1}
    counts = [1]
    for n in range(1, n_max + 1):
        new: dict[tuple[int, int], int] = {}
        for (k, node), c in states.items():
            for edge in children[node]:
                if edge is None:
                    continue
                kind, target = edge
                key = (k + 1, root) if kind == "leaf" else (k, target)
                if key in new:
                    new[key] += c
                else:
                    new[key] = c
        states = {
            key: c for key, c in new.items() if viable(key[0], key[1], n)
        }
        counts.append(sum(states.values()))
    return PrefixCountTable(n_symbols=n_symbols, total_bits=total_bits, counts=tuple(counts))


def fit_dimension(
    table: PrefixCountTable, n_lo: int | None = None, n_hi: int | None = None
) -> float:
    """Least-squares slope of log2(count) against prefix length.

    Defaults: n_lo = ceil(0.2 * total_bits) to skip the transient where
    every bit string is still a viable prefix, n_hi = the table end.
    """
    if n_lo is None:
        n_lo = math.ceil(0.2 * table.total_bits)
    if n_hi is None:
        n_hi = table.n_max
    if not 0 <= n_lo < n_hi <= table.n_max:
        raise ValueError(f"bad fit range [{n_lo}, {n_hi}] for table up to {table.n_max}")
    xs = np.arange(n_lo, n_hi + 1, dtype=np.float64)
    ys = np.array([math.log2(c) for c in table.counts[n_lo : n_hi + 1]])
    return float(np.polyfit(xs, ys, 1)[0])


def dimension_curve(
    spectrum: LengthSpectrum, betas
) -> list[tuple[float, float, float, float]]:
    """Sample the dimension curve: rows (beta, T, mean length, dim)."""
    rows = []
    for beta in betas:
        log2_z, mean, _ = _stats(spectrum, beta)
        rows.append(
            (float(beta), temperature_from_beta(float(beta)), mean, float(beta) + log2_z / mean)
        )
    return rows
