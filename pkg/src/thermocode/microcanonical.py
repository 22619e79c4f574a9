"""Counting coded messages at fixed total length.

A message of n_symbols symbols encodes to a bit string whose length is the
sum of the individual codeword lengths.  The number of messages that encode
to exactly L bits is the coefficient of z**L in (sum_l d_l z**l)**n_symbols,
where d_l counts codewords of length l.  This module computes that table
exactly (arbitrary-precision integers), in the log2 domain (numpy, for large
n_symbols), and by literal enumeration (the oracle the other two are checked
against), and derives entropy and discrete temperature from it.

Units: lengths in bits, entropy in bits, temperature in bits per bit of
entropy (dimensionless).
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from itertools import product
from typing import Iterator

import numpy as np

from .codes import Code, LengthSpectrum, Pmf
from .errors import CapacityError, UnachievableLengthError

__all__ = [
    "EnsembleTable",
    "LogEnsembleTable",
    "TemperatureEstimate",
    "SampleReport",
    "count_messages",
    "count_messages_brute",
    "count_messages_log",
    "iter_log_tables",
    "entropy_at",
    "temperature_at",
    "most_probable_length",
    "sample_messages",
]

# Exact tables refuse to allocate more than this many coefficient cells;
# the log-domain table has no such limit.
MAX_EXACT_CELLS = 1_000_000

# Literal enumeration refuses more than this many messages.
MAX_BRUTE_MESSAGES = 10_000_000


class EnsembleTable:
    """Exact counts of coded messages by total bit length.

    Stores the coefficient list of the length-counting polynomial raised to
    the n_symbols power.  Counts are Python ints, so they never overflow.
    """

    __slots__ = ("n_symbols", "_offset", "_coeffs", "_support")

    def __init__(self, n_symbols: int, offset: int, coeffs: list[int]):
        self.n_symbols = n_symbols
        self._offset = offset
        self._coeffs = coeffs
        self._support = np.array(
            [offset + i for i, c in enumerate(coeffs) if c], dtype=np.int64
        )

    @property
    def support(self) -> np.ndarray:
        """Achievable total lengths, ascending."""
        return self._support

    def count(self, total_bits: int) -> int:
        """Number of messages encoding to exactly total_bits; 0 if none."""
        i = total_bits - self._offset
        if 0 <= i < len(self._coeffs):
            return self._coeffs[i]
        return 0

    def log2_count(self, total_bits: int) -> float:
        c = self.count(total_bits)
        return math.log2(c) if c else -math.inf

    def items(self) -> Iterator[tuple[int, int]]:
        """(total_bits, count) pairs over the support, ascending."""
        for i, c in enumerate(self._coeffs):
            if c:
                yield self._offset + i, c

    def to_dict(self) -> dict[int, int]:
        return dict(self.items())

    def total_probability(self, kraft: object) -> object:
        """sum count(L) * 2**-L, exactly, given the code's Kraft sum is kraft.

        Included for checking: the result always equals kraft**n_symbols.
        The sum itself is computed directly from the table.
        """
        from fractions import Fraction

        return sum(
            (Fraction(c, 2**L) for L, c in self.items()), start=Fraction(0)
        )


class LogEnsembleTable:
    """log2 of the message counts, as a dense float array over the lattice.

    Unachievable lengths hold -inf.  Agrees with EnsembleTable to float
    precision but scales to n_symbols in the tens of thousands.
    """

    __slots__ = ("n_symbols", "_offset", "_log2")

    def __init__(self, n_symbols: int, offset: int, log2_counts: np.ndarray):
        self.n_symbols = n_symbols
        self._offset = offset
        self._log2 = log2_counts

    @property
    def support(self) -> np.ndarray:
        return self._offset + np.flatnonzero(np.isfinite(self._log2)).astype(np.int64)

    def count(self, total_bits: int) -> float:
        return float(2.0 ** self.log2_count(total_bits))

    def log2_count(self, total_bits: int) -> float:
        i = total_bits - self._offset
        if 0 <= i < len(self._log2):
            return float(self._log2[i])
        return -math.inf

    def log2_array(self) -> np.ndarray:
        """The raw log2-count array; index i is total length offset + i."""
        return self._log2

    @property
    def offset(self) -> int:
        return self._offset


@dataclass(frozen=True)
class TemperatureEstimate:
    """Discrete temperature at one total length.

    value is dL/dS from a central difference over the nearest achievable
    neighbours; one_sided marks boundary lengths where only one neighbour
    exists.  Infinite values carry the sign convention: zero entropy slope
    reads +inf below the entropy peak and -inf above it (and +inf at the
    peak itself).
    """

    value: float
    one_sided: bool = False


def _base_terms(spectrum: LengthSpectrum) -> list[tuple[int, int]]:
    l_min = spectrum.l_min
    return [(l - l_min, d) for l, d in spectrum.degeneracy.items()]


def count_messages(
    spectrum: LengthSpectrum, n_symbols: int, max_cells: int = MAX_EXACT_CELLS
) -> EnsembleTable:
    """Exact message-count table by iterated polynomial convolution.

    Cost grows like n_symbols**2 * (l_max - l_min), so tables larger than
    max_cells raise CapacityError; use count_messages_log for those.
    """
    if n_symbols < 1:
        raise ValueError("n_symbols must be at least 1")
    span = spectrum.l_max - spectrum.l_min
    if n_symbols * span > max_cells:
        raise CapacityError(
            f"exact table needs {n_symbols * span} cells (cap {max_cells}); "
            "use the log-domain table instead"
        )
    base = _base_terms(spectrum)
    coeffs = [0] * (span + 1)
    for off, d in base:
        coeffs[off] = d
    for _ in range(n_symbols - 1):
        new = [0] * (len(coeffs) + span)
        for off, d in base:
            if d == 1:
                for j, c in enumerate(coeffs):
                    if c:
                        new[j + off] += c
            else:
                for j, c in enumerate(coeffs):
                    if c:
                        new[j + off] += d * c
        coeffs = new
    return EnsembleTable(n_symbols, n_symbols * spectrum.l_min, coeffs)


def count_messages_brute(
    code: Code, n_symbols: int, max_messages: int = MAX_BRUTE_MESSAGES
) -> EnsembleTable:
    """Message counts by enumerating every one of the |alphabet|**n messages.

    Exponentially slow by construction; this is the independent oracle the
    convolution tables are validated against.
    """
    if n_symbols < 1:
        raise ValueError("n_symbols must be at least 1")
    k = len(code)
    if k**n_symbols > max_messages:
        raise CapacityError(
            f"{k}**{n_symbols} messages exceed the enumeration cap {max_messages}"
        )
    lengths = [len(code.codeword(s)) for s in code.symbols]
    tally = Counter(map(sum, product(lengths, repeat=n_symbols)))
    lo, hi = min(tally), max(tally)
    coeffs = [0] * (hi - lo + 1)
    for total, c in tally.items():
        coeffs[total - lo] = c
    return EnsembleTable(n_symbols, lo, coeffs)


def _log_step(
    lw: np.ndarray, base_log: list[tuple[int, float]], span: int
) -> np.ndarray:
    """One convolution step in the log2 domain."""
    new = np.full(len(lw) + span, -np.inf)
    for off, ld in base_log:
        seg = new[off : off + len(lw)]
        np.logaddexp2(seg, lw + ld, out=seg)
    return new


def _base_log_terms(spectrum: LengthSpectrum) -> list[tuple[int, float]]:
    l_min = spectrum.l_min
    return [(l - l_min, math.log2(d)) for l, d in spectrum.degeneracy.items()]


def count_messages_log(spectrum: LengthSpectrum, n_symbols: int) -> LogEnsembleTable:
    """Log-domain message-count table (log-sum-exp convolutions, numpy)."""
    if n_symbols < 1:
        raise ValueError("n_symbols must be at least 1")
    span = spectrum.l_max - spectrum.l_min
    base = _base_log_terms(spectrum)
    lw = np.full(span + 1, -np.inf)
    for off, ld in base:
        lw[off] = ld
    for _ in range(n_symbols - 1):
        lw = _log_step(lw, base, span)
    return LogEnsembleTable(n_symbols, n_symbols * spectrum.l_min, lw)


def iter_log_tables(
    spectrum: LengthSpectrum, n_max: int
) -> Iterator[LogEnsembleTable]:
    """Yield the log-domain table for every n_symbols from 1 to n_max.

    Builds incrementally, so sweeping all n costs the same as building the
    largest table once per step; each yielded table owns a copy of its array.
    """
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    span = spectrum.l_max - spectrum.l_min
    base = _base_log_terms(spectrum)
    lw = np.full(span + 1, -np.inf)
    for off, ld in base:
        lw[off] = ld
    yield LogEnsembleTable(1, spectrum.l_min, lw.copy())
    for n in range(2, n_max + 1):
        lw = _log_step(lw, base, span)
        yield LogEnsembleTable(n, n * spectrum.l_min, lw.copy())


def entropy_at(table: EnsembleTable | LogEnsembleTable, total_bits: int) -> float:
    """Microcanonical entropy log2(count) in bits at one total length."""
    s = table.log2_count(total_bits)
    if s == -math.inf:
        support = table.support
        raise UnachievableLengthError(
            f"no message encodes to {total_bits} bits "
            f"(achievable range {int(support[0])}..{int(support[-1])})"
        )
    return s


def _count_peak(table: EnsembleTable | LogEnsembleTable) -> int:
    """Smallest total length maximizing the count (the entropy peak)."""
    if isinstance(table, EnsembleTable):
        best_len, best_count = None, -1
        for L, c in table.items():
            if c > best_count:
                best_len, best_count = L, c
        return best_len
    arr = table.log2_array()
    return int(table.offset + int(np.argmax(arr)))


def temperature_at(
    table: EnsembleTable | LogEnsembleTable, total_bits: int
) -> TemperatureEstimate:
    """Discrete temperature dL/dS at an achievable total length.

    Uses the central difference over the nearest achievable neighbours;
    at the ends of the support it falls back to a one-sided difference and
    flags the result.  A zero entropy difference yields a signed infinity:
    positive at or below the entropy peak, negative above it.
    """
    support = table.support
    if len(support) < 2:
        raise UnachievableLengthError(
            "support has a single achievable length; no temperature is defined"
        )
    pos = int(np.searchsorted(support, total_bits))
    if pos >= len(support) or support[pos] != total_bits:
        raise UnachievableLengthError(
            f"no message encodes to {total_bits} bits "
            f"(achievable range {int(support[0])}..{int(support[-1])})"
        )
    one_sided = pos == 0 or pos == len(support) - 1
    left = int(support[max(pos - 1, 0)])
    right = int(support[min(pos + 1, len(support) - 1)])
    ds = table.log2_count(right) - table.log2_count(left)
    if ds == 0.0:
        sign = 1.0 if total_bits <= _count_peak(table) else -1.0
        return TemperatureEstimate(sign * math.inf, one_sided)
    return TemperatureEstimate((right - left) / ds, one_sided)


def _weight_cmp(c1: int, L1: int, c2: int, L2: int) -> int:
    """Sign of c1 * 2**-L1 - c2 * 2**-L2, exactly."""
    # bit_length brackets log2 within 1, deciding all clear-cut cases cheaply.
    if c1.bit_length() - 1 - L1 >= c2.bit_length() - L2:
        return 1
    if c2.bit_length() - 1 - L2 >= c1.bit_length() - L1:
        return -1
    e = L2 - L1
    a, b = (c1 << e, c2) if e >= 0 else (c1, c2 << -e)
    return (a > b) - (a < b)


def most_probable_length(table: EnsembleTable | LogEnsembleTable) -> int:
    """Total length maximizing count(L) * 2**-L, the weight of length L
    under an absolutely optimal code.  Ties go to the smallest length.

    Exact integer comparison on an EnsembleTable; float comparison on a
    LogEnsembleTable (argmax of log2 count - L).
    """
    if isinstance(table, EnsembleTable):
        best: tuple[int, int] | None = None
        for L, c in table.items():
            if best is None or _weight_cmp(c, L, best[1], best[0]) > 0:
                best = (L, c)
        return best[0]
    arr = table.log2_array()
    scores = arr - (table.offset + np.arange(len(arr)))
    return int(table.offset + int(np.argmax(scores)))


@dataclass(frozen=True)
class SampleReport:
    """Outcome of Monte Carlo message sampling.

    histogram maps total length to frequency (frequencies sum to draws).
    When focus_total is set, conditional_counts maps each distinct coded
    bit string of that total length to its count.
    """

    draws: int
    n_symbols: int
    histogram: dict[int, int]
    focus_total: int | None = None
    conditional_counts: dict[str, int] | None = None

    @property
    def mean_total(self) -> float:
        return sum(L * c for L, c in self.histogram.items()) / self.draws


def sample_messages(
    code: Code,
    pmf: Pmf,
    n_symbols: int,
    draws: int,
    seed: int,
    focus_total: int | None = None,
) -> SampleReport:
    """Draw i.i.d. messages of n_symbols symbols and histogram their coded
    lengths.

    Deterministic in the seed (numpy PCG64 via default_rng).  With
    focus_total set, every sampled message whose coded length hits that
    value is recorded verbatim, giving the conditional distribution over
    coded messages at fixed total length.
    """
    if n_symbols < 1:
        raise ValueError("n_symbols must be at least 1")
    if draws < 1:
        raise ValueError("draws must be at least 1")
    if pmf.symbols != code.symbols:
        raise ValueError("pmf alphabet does not match the code")
    rng = np.random.default_rng(seed)
    words = [code.codeword(s) for s in code.symbols]
    lengths = np.array([len(w) for w in words], dtype=np.int64)
    probs = np.array([float(p) for _, p in pmf.items()], dtype=np.float64)
    probs = probs / probs.sum()  # exact-to-float residue

    hist: Counter[int] = Counter()
    conditional: Counter[str] | None = Counter() if focus_total is not None else None
    chunk = max(1, min(draws, 10_000_000 // n_symbols))
    done = 0
    while done < draws:
        m = min(chunk, draws - done)
        idx = rng.choice(len(words), size=(m, n_symbols), p=probs)
        totals = lengths[idx].sum(axis=1)
        binc = np.bincount(totals)
        for L in np.flatnonzero(binc):
            hist[int(L)] += int(binc[L])
        if conditional is not None:
            for row in idx[totals == focus_total]:
                conditional["".join(words[i] for i in row)] += 1
        done += m
    return SampleReport(
        draws=draws,
        n_symbols=n_symbols,
        histogram=dict(sorted(hist.items())),
        focus_total=focus_total,
        conditional_counts=dict(sorted(conditional.items())) if conditional is not None else None,
    )
