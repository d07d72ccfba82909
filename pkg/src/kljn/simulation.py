"""Monte-Carlo key-exchange experiment from the eavesdropper's bench.

Each transferred bit puts one resistor pair on the wire for a window of noise
samples; the eavesdropper records the window's current variance, voltage
variance and voltage-current cross moment, then tries to classify bits by
thresholding one of those indicators at its pooled median. A secure
configuration pins every indicator's bit error rate at 50%.

All randomness is keyed by (master_seed, per-bit stream ids), so a run is a
pure function of its configuration: any bit can be recomputed in isolation
and parallel execution cannot change results.
"""

from __future__ import annotations

import os
from collections.abc import Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Union

import numpy as np

from .circuit import LineSignals, LineState, NoiseVariances, ResistorQuad, line_signals
from .errors import DegenerateInputError, ValidationError
from .noise import (
    GEN_HA,
    GEN_HB,
    GEN_LA,
    GEN_LB,
    STATE_COIN_STREAM_ID,
    StreamSeed,
    gaussian_block,
    stream_id_for,
)

_UINT64_MAX = 2**64 - 1


class StatePolicy(Enum):
    """How the true line state of each bit is chosen."""

    ALTERNATE = "alternate"  # bit i is LH for even i, HL for odd i
    RANDOM = "random"  # fair coin per bit from a dedicated stream


class Indicator(Enum):
    """The three second-order statistics the eavesdropper can threshold."""

    CURRENT_VARIANCE = "current_variance"
    VOLTAGE_VARIANCE = "voltage_variance"
    CROSS_CORRELATION = "cross_correlation"


@dataclass(frozen=True, slots=True)
class SimConfig:
    """Full description of one exchange experiment."""

    quad: ResistorQuad
    variances: NoiseVariances
    samples_per_bit: int = 1000
    num_bits: int = 1_000_000
    master_seed: int = 0
    state_policy: StatePolicy = StatePolicy.ALTERNATE

    def __post_init__(self) -> None:
        if not isinstance(self.samples_per_bit, int) or self.samples_per_bit < 2:
            raise ValidationError(
                f"samples_per_bit must be an integer >= 2, got {self.samples_per_bit!r}"
            )
        if not isinstance(self.num_bits, int) or self.num_bits < 1:
            raise ValidationError(f"num_bits must be a positive integer, got {self.num_bits!r}")
        if (
            not isinstance(self.master_seed, int)
            or isinstance(self.master_seed, bool)
            or not 0 <= self.master_seed <= _UINT64_MAX
        ):
            raise ValidationError(f"master_seed must be an unsigned 64-bit integer")
        if not isinstance(self.state_policy, StatePolicy):
            raise ValidationError(f"state_policy must be a StatePolicy, got {self.state_policy!r}")


@dataclass(frozen=True, slots=True)
class BitStats:
    """Eavesdropper statistics of a single bit window."""

    true_state: LineState
    var_v: float  # sample variance of v_e, V**2
    var_i: float  # sample variance of i_e, A**2
    cross: float  # sample mean of v_e * i_e, V*A


def _bit_sources(
    state: LineState, config: SimConfig, bit_index: int
) -> tuple[np.ndarray, np.ndarray]:
    """Regenerate the two connected source streams of one bit."""
    if not 0 <= bit_index < config.num_bits:
        raise ValidationError(
            f"bit_index must be in [0, {config.num_bits}), got {bit_index!r}"
        )
    if state is LineState.LH:
        alice_slot, alice_var = GEN_LA, config.variances.v_la_sq
        bob_slot, bob_var = GEN_HB, config.variances.v_hb_sq
    else:
        alice_slot, alice_var = GEN_HA, config.variances.v_ha_sq
        bob_slot, bob_var = GEN_LB, config.variances.v_lb_sq
    n = config.samples_per_bit
    alice = gaussian_block(
        n, alice_var, StreamSeed(config.master_seed, stream_id_for(bit_index, alice_slot))
    )
    bob = gaussian_block(
        n, bob_var, StreamSeed(config.master_seed, stream_id_for(bit_index, bob_slot))
    )
    return alice, bob


def _bit_signals(state: LineState, config: SimConfig, bit_index: int) -> LineSignals:
    alice, bob = _bit_sources(state, config, bit_index)
    return line_signals(state, config.quad, alice, bob)


def _window_statistics(signals: LineSignals) -> tuple[float, float, float]:
    # Unbiased (n-1) variances; raw mean for the cross moment since the
    # sources are zero-mean by construction.
    var_v = float(np.var(signals.v_e, ddof=1))
    var_i = float(np.var(signals.i_e, ddof=1))
    cross = float(np.mean(signals.v_e * signals.i_e))
    return var_v, var_i, cross


def simulate_bit(state: LineState, config: SimConfig, bit_index: int) -> BitStats:
    """Synthesize one bit window and return the eavesdropper's statistics."""
    var_v, var_i, cross = _window_statistics(_bit_signals(state, config, bit_index))
    return BitStats(true_state=state, var_v=var_v, var_i=var_i, cross=cross)


def scatter_trace(state: LineState, config: SimConfig, bit_index: int) -> np.ndarray:
    """Raw (v_e, i_e) pairs of one bit window, shape (samples_per_bit, 2).

    Exactly the samples simulate_bit reduces for the same arguments.
    """
    signals = _bit_signals(state, config, bit_index)
    return np.column_stack([signals.v_e, signals.i_e])


def assign_states(config: SimConfig) -> np.ndarray:
    """True state per bit as a boolean array, True where the state is HL."""
    if config.state_policy is StatePolicy.ALTERNATE:
        return (np.arange(config.num_bits) % 2).astype(bool)
    coin = StreamSeed(config.master_seed, STATE_COIN_STREAM_ID).generator()
    return coin.random(config.num_bits) >= 0.5


class ExchangeResult(Sequence):
    """Per-bit eavesdropper statistics of a whole run, ordered by bit index.

    A sequence of BitStats backed by columnar arrays, so million-bit runs
    stay at a few dozen bytes per bit.
    """

    def __init__(
        self, hl_mask: np.ndarray, var_v: np.ndarray, var_i: np.ndarray, cross: np.ndarray
    ):
        hl_mask = np.asarray(hl_mask, dtype=bool)
        var_v = np.asarray(var_v, dtype=np.float64)
        var_i = np.asarray(var_i, dtype=np.float64)
        cross = np.asarray(cross, dtype=np.float64)
        if not hl_mask.shape == var_v.shape == var_i.shape == cross.shape:
            raise ValidationError("exchange columns must all have the same length")

        def _frozen(column: np.ndarray) -> np.ndarray:
            view = column.view()
            view.flags.writeable = False
            return view

        self._hl_mask = _frozen(hl_mask)
        self._var_v = _frozen(var_v)
        self._var_i = _frozen(var_i)
        self._cross = _frozen(cross)

    def __len__(self) -> int:
        return self._hl_mask.size

    def __getitem__(self, index):
        if isinstance(index, slice):
            return [self[i] for i in range(*index.indices(len(self)))]
        i = int(index)
        if i < 0:
            i += len(self)
        if not 0 <= i < len(self):
            raise IndexError(index)
        return BitStats(
            true_state=LineState.HL if self._hl_mask[i] else LineState.LH,
            var_v=float(self._var_v[i]),
            var_i=float(self._var_i[i]),
            cross=float(self._cross[i]),
        )

    def state_mask(self, state: LineState) -> np.ndarray:
        """Boolean mask of the bits whose true state is ``state``."""
        return self._hl_mask if state is LineState.HL else ~self._hl_mask

    def indicator_values(self, indicator: Indicator) -> np.ndarray:
        """All bits' values of one indicator, ordered by bit index."""
        if indicator is Indicator.CURRENT_VARIANCE:
            return self._var_i
        if indicator is Indicator.VOLTAGE_VARIANCE:
            return self._var_v
        return self._cross


def _simulate_chunk(
    config: SimConfig, start: int, hl_flags: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Statistics for bits [start, start + len(hl_flags)); process-pool worker."""
    n = hl_flags.size
    var_v = np.empty(n)
    var_i = np.empty(n)
    cross = np.empty(n)
    for offset, is_hl in enumerate(hl_flags):
        state = LineState.HL if is_hl else LineState.LH
        stats = _window_statistics(_bit_signals(state, config, start + offset))
        var_v[offset], var_i[offset], cross[offset] = stats
    return var_v, var_i, cross


def run_exchange(config: SimConfig, threads: int = 1) -> ExchangeResult:
    """Transfer num_bits bits and collect every bit's statistics.

    ``threads`` counts worker processes; 0 picks the machine's CPU count.
    The result is identical for every thread count and scheduling order
    because each bit's streams are keyed by its index alone.
    """
    if threads < 0:
        raise ValidationError(f"threads must be >= 0, got {threads!r}")
    hl_mask = assign_states(config)
    workers = threads if threads else (os.cpu_count() or 1)
    if workers == 1 or config.num_bits < 2 * workers:
        columns = _simulate_chunk(config, 0, hl_mask)
        return ExchangeResult(hl_mask, *columns)

    chunk = max(64, -(-config.num_bits // (workers * 4)))
    starts = range(0, config.num_bits, chunk)
    var_v = np.empty(config.num_bits)
    var_i = np.empty(config.num_bits)
    cross = np.empty(config.num_bits)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = {
            pool.submit(_simulate_chunk, config, start, hl_mask[start : start + chunk]): start
            for start in starts
        }
        for future, start in futures.items():
            chunk_v, chunk_i, chunk_c = future.result()
            stop = start + chunk_v.size
            var_v[start:stop] = chunk_v
            var_i[start:stop] = chunk_i
            cross[start:stop] = chunk_c
    return ExchangeResult(hl_mask, var_v, var_i, cross)


BitStatsLike = Union[ExchangeResult, Iterable[BitStats]]


def _pooled(stats: BitStatsLike, indicator: Indicator) -> tuple[np.ndarray, np.ndarray]:
    """(values, hl_mask) for any sequence of BitStats."""
    if isinstance(stats, ExchangeResult):
        return stats.indicator_values(indicator), stats.state_mask(LineState.HL)
    stats = list(stats)
    hl_mask = np.fromiter(
        (s.true_state is LineState.HL for s in stats), dtype=bool, count=len(stats)
    )
    if indicator is Indicator.CURRENT_VARIANCE:
        values = [s.var_i for s in stats]
    elif indicator is Indicator.VOLTAGE_VARIANCE:
        values = [s.var_v for s in stats]
    else:
        values = [s.cross for s in stats]
    return np.asarray(values, dtype=np.float64), hl_mask


@dataclass(frozen=True, slots=True)
class BerEntry:
    """Bit-error-rate result of thresholding one indicator."""

    indicator: Indicator
    ber: float
    leak: float  # |ber - 0.5|, invariant to the classification direction
    threshold: float
    bits_lh: int
    bits_hl: int


@dataclass(frozen=True, slots=True)
class BerReport:
    """BerEntry for each of the three indicators."""

    entries: tuple[BerEntry, ...]

    def entry(self, indicator: Indicator) -> BerEntry:
        for entry in self.entries:
            if entry.indicator is indicator:
                return entry
        raise KeyError(indicator)

    def __iter__(self):
        return iter(self.entries)


def estimate_ber(stats: BitStatsLike, indicator: Indicator) -> BerEntry:
    """Median-threshold classification quality of one indicator.

    Pools every bit's indicator value, thresholds at the pooled median
    (above: HL guess, at or below: LH) and counts wrong guesses over all
    bits. 50% means the indicator carries no information.

    Raises DegenerateInputError unless both states are present.
    """
    values, hl_mask = _pooled(stats, indicator)
    bits_hl = int(np.count_nonzero(hl_mask))
    bits_lh = int(values.size - bits_hl)
    if bits_lh == 0 or bits_hl == 0:
        raise DegenerateInputError(
            f"both line states must be present, got {bits_lh} LH and {bits_hl} HL bits"
        )
    threshold = float(np.median(values))
    predicted_hl = values > threshold
    errors = int(np.count_nonzero(predicted_hl != hl_mask))
    ber = errors / values.size
    return BerEntry(
        indicator=indicator,
        ber=ber,
        leak=abs(ber - 0.5),
        threshold=threshold,
        bits_lh=bits_lh,
        bits_hl=bits_hl,
    )


def ber_report(stats: BitStatsLike) -> BerReport:
    """estimate_ber over all three indicators."""
    return BerReport(tuple(estimate_ber(stats, indicator) for indicator in Indicator))


@dataclass(frozen=True, slots=True)
class HistogramData:
    """Per-state counts over shared uniform bin edges."""

    edges: np.ndarray  # bin_count + 1 edges spanning the pooled value range
    counts_lh: np.ndarray
    counts_hl: np.ndarray

    def __post_init__(self) -> None:
        for column in ("edges", "counts_lh", "counts_hl"):
            object.__setattr__(self, column, np.asarray(getattr(self, column)))


def histogram(stats: BitStatsLike, indicator: Indicator, bin_count: int) -> HistogramData:
    """Histogram one indicator separately per true state over shared bins.

    Bin edges span the pooled min..max uniformly, so the two states'
    distributions are directly comparable bin by bin. Every bit lands in
    exactly one bin.
    """
    if not isinstance(bin_count, int) or bin_count < 1:
        raise ValidationError(f"bin_count must be a positive integer, got {bin_count!r}")
    values, hl_mask = _pooled(stats, indicator)
    if values.size == 0:
        raise DegenerateInputError("cannot histogram an empty statistics sequence")
    low = float(values.min())
    high = float(values.max())
    if low == high:
        # numpy's convention for a degenerate range
        low, high = low - 0.5, high + 0.5
    edges = np.linspace(low, high, bin_count + 1)
    counts_lh, _ = np.histogram(values[~hl_mask], bins=edges)
    counts_hl, _ = np.histogram(values[hl_mask], bins=edges)
    return HistogramData(edges=edges, counts_lh=counts_lh, counts_hl=counts_hl)
