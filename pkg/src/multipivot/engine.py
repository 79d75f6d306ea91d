"""Instrumented k-pivot Quicksort and Monte Carlo estimators of its cost.

Two simulation modes:

* ``synthetic`` charges the mean toll a*s + b for every partitioned segment of
  size s, so the trial mean is an unbiased estimator of the recurrence value.
* ``comparisons`` sorts random permutations and counts key comparisons made
  while partitioning.

Randomness comes from a single root seed. Synthetic trials are grouped in
fixed-size blocks and each block draws from its own ``SeedSequence`` child, so
results do not depend on how blocks are scheduled. Comparison trials get one
child stream per trial.
"""

from __future__ import annotations

import math
import random
from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Callable, Sequence

import numpy as np

from multipivot.oracle import Convention, TollModel

DEFAULT_SEED = 20130101
SYNTHETIC_BLOCK = 4096


class Strategy(str, Enum):
    SEQUENTIAL = "sequential"
    BINARY = "binary"


class Mode(str, Enum):
    SYNTHETIC = "synthetic"
    COMPARISONS = "comparisons"


@dataclass
class PartitionStats:
    comparisons: int = 0
    pivot_sort_comparisons: int = 0
    insertion_comparisons: int = 0
    swaps: int = 0
    stage_log: list[tuple[int, int]] | None = None


def _insertion_sort(a: list, stats: PartitionStats, counter: str) -> list:
    n_cmp = 0
    moves = 0
    for i in range(1, len(a)):
        v = a[i]
        j = i - 1
        while j >= 0:
            n_cmp += 1
            if a[j] > v:
                a[j + 1] = a[j]
                moves += 1
                j -= 1
            else:
                break
        a[j + 1] = v
    setattr(stats, counter, getattr(stats, counter) + n_cmp)
    stats.swaps += moves
    return a


def _classify_sequential(rest, pivots, k):
    buckets = [[] for _ in range(k + 1)]
    n_cmp = 0
    for x in rest:
        b = 0
        while b < k:
            n_cmp += 1
            if x < pivots[b]:
                break
            b += 1
        buckets[b].append(x)
    return buckets, n_cmp


def _classify_binary(rest, pivots, k):
    buckets = [[] for _ in range(k + 1)]
    n_cmp = 0
    for x in rest:
        lo, hi = 0, k
        while lo < hi:
            mid = (lo + hi) // 2
            n_cmp += 1
            if x < pivots[mid]:
                hi = mid
            else:
                lo = mid + 1
        buckets[lo].append(x)
    return buckets, n_cmp


def _check_distinct(array: Sequence) -> None:
    try:
        distinct = len(set(array)) == len(array)
    except TypeError:
        s = sorted(array)
        distinct = all(s[i] != s[i + 1] for i in range(len(s) - 1))
    if not distinct:
        raise ValueError("multipivot_sort requires pairwise distinct keys")


def _as_rng(rng_seed) -> random.Random:
    if isinstance(rng_seed, random.Random):
        return rng_seed
    return random.Random(DEFAULT_SEED if rng_seed is None else rng_seed)


def multipivot_sort(
    array: Sequence,
    k: int,
    strategy: Strategy | str = Strategy.SEQUENTIAL,
    rng_seed=None,
    log_stages: bool = False,
) -> tuple[list, PartitionStats]:
    """Sort distinct keys with k random pivots per stage, counting comparisons.

    Segments with more than k keys are split around k pivots drawn uniformly
    without replacement (partial Fisher-Yates), which are then put in order by
    insertion sort. Smaller segments are insertion-sorted. Partition comparisons,
    pivot-ordering comparisons and insertion-sort comparisons are tallied
    separately.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    strategy = Strategy(strategy)
    _check_distinct(array)
    rng = _as_rng(rng_seed)
    stats = PartitionStats(stage_log=[] if log_stages else None)
    classify = _classify_sequential if strategy is Strategy.SEQUENTIAL else _classify_binary

    def sort(seg: list) -> list:
        s = len(seg)
        if s <= k:
            return _insertion_sort(seg, stats, "insertion_comparisons")
        for t in range(k):
            j = rng.randrange(t, s)
            if j != t:
                seg[t], seg[j] = seg[j], seg[t]
                stats.swaps += 1
        pivots = _insertion_sort(seg[:k], stats, "pivot_sort_comparisons")
        buckets, n_cmp = classify(seg[k:], pivots, k)
        stats.comparisons += n_cmp
        if stats.stage_log is not None:
            stats.stage_log.append((s, n_cmp))
        out = sort(buckets[0])
        for p, bucket in zip(pivots, buckets[1:]):
            out.append(p)
            out.extend(sort(bucket))
        return out

    return sort(list(array)), stats


def top_stage_comparisons(n: int, k: int, strategy: Strategy | str, rng: random.Random) -> int:
    """Comparisons of one partitioning stage on a random permutation of size n > k."""
    strategy = Strategy(strategy)
    perm = list(range(n))
    rng.shuffle(perm)
    # the permutation is already uniform, so its first k entries are uniform pivots
    pivots = sorted(perm[:k])
    classify = _classify_sequential if strategy is Strategy.SEQUENTIAL else _classify_binary
    return classify(perm[k:], pivots, k)[1]


@dataclass
class SimulationReport:
    mode: Mode
    n: int
    k: int
    trials: int
    seed: int
    mean: float
    variance: float
    std_error: float
    extras: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["mode"] = self.mode.value
        return d


def _summarize(samples: np.ndarray) -> tuple[float, float, float]:
    trials = len(samples)
    mean = math.fsum(samples) / trials
    variance = math.fsum((samples - mean) ** 2) / (trials - 1) if trials > 1 else 0.0
    return mean, variance, math.sqrt(variance / trials)


def synthetic_trial_cost(
    n: int,
    k: int,
    toll: TollModel,
    choose_pivots: Callable[[int, int], Sequence[int]],
    convention: Convention | str = Convention.PAPER,
) -> float:
    """Cost of one synthetic trial with an explicit pivot chooser.

    ``choose_pivots(s, k)`` returns k distinct positions in range(s). This is
    the reference path; ``mc_synthetic`` vectorizes the same process.
    """
    convention = Convention(convention)
    threshold = k if convention is Convention.PAPER else k + 1
    total = 0.0
    stack = [n]
    while stack:
        s = stack.pop()
        if s < threshold:
            continue
        total += float(toll(s))
        prev = -1
        for p in sorted(choose_pivots(s, k)):
            stack.append(p - prev - 1)
            prev = p
        stack.append(s - 1 - prev)
    return total


def _random_subsets(gen: np.random.Generator, sizes: np.ndarray, k: int) -> np.ndarray:
    """k distinct uniform positions per row from range(size), via Floyd's algorithm."""
    m = len(sizes)
    chosen = np.empty((m, k), dtype=np.int64)
    for t in range(k):
        j = sizes - k + t
        draw = gen.integers(0, j + 1)
        if t:
            taken = (chosen[:, :t] == draw[:, None]).any(axis=1)
            draw = np.where(taken, j, draw)
        chosen[:, t] = draw
    chosen.sort(axis=1)
    return chosen


def _synthetic_block(gen, n, k, toll, trials, threshold) -> np.ndarray:
    a, b = float(toll.a_bar), float(toll.b_bar)
    costs = np.zeros(trials)
    sizes = np.full(trials, n, dtype=np.int64)
    owner = np.arange(trials)
    while sizes.size:
        live = sizes >= threshold
        sizes, owner = sizes[live], owner[live]
        if not sizes.size:
            break
        costs += np.bincount(owner, weights=a * sizes + b, minlength=trials)
        pos = _random_subsets(gen, sizes, k)
        bounds = np.concatenate(
            [np.full((len(sizes), 1), -1), pos, sizes[:, None]], axis=1
        )
        gaps = np.diff(bounds, axis=1) - 1
        sizes = gaps.ravel()
        owner = np.repeat(owner, k + 1)
    return costs


def mc_synthetic(
    n: int,
    k: int,
    toll: TollModel,
    trials: int,
    seed: int = DEFAULT_SEED,
    convention: Convention | str = Convention.PAPER,
) -> SimulationReport:
    if n < 0 or k < 1 or trials < 1:
        raise ValueError(f"need n >= 0, k >= 1, trials >= 1; got n={n}, k={k}, trials={trials}")
    convention = Convention(convention)
    threshold = k if convention is Convention.PAPER else k + 1
    blocks = -(-trials // SYNTHETIC_BLOCK)
    children = np.random.SeedSequence(seed).spawn(blocks)
    parts = []
    for i, child in enumerate(children):
        size = min(SYNTHETIC_BLOCK, trials - i * SYNTHETIC_BLOCK)
        parts.append(_synthetic_block(np.random.default_rng(child), n, k, toll, size, threshold))
    samples = np.concatenate(parts)
    mean, var, se = _summarize(samples)
    return SimulationReport(
        Mode.SYNTHETIC, n, k, trials, seed, mean, var, se,
        extras={"convention": convention.value, "a_bar": str(toll.a_bar), "b_bar": str(toll.b_bar)},
    )


def _trial_rngs(seed: int, trials: int):
    for child in np.random.SeedSequence(seed).spawn(trials):
        yield random.Random(int(child.generate_state(2, np.uint64)[0]))


def mc_comparisons(
    n: int,
    k: int,
    trials: int,
    seed: int = DEFAULT_SEED,
    strategy: Strategy | str = Strategy.SEQUENTIAL,
) -> SimulationReport:
    """Partition comparisons of multipivot_sort on uniform random permutations."""
    if n < 1 or k < 1 or trials < 1:
        raise ValueError(f"need n >= 1, k >= 1, trials >= 1; got n={n}, k={k}, trials={trials}")
    strategy = Strategy(strategy)
    cmp = np.empty(trials)
    pivot_cmp = np.empty(trials)
    ins_cmp = np.empty(trials)
    for t, rng in enumerate(_trial_rngs(seed, trials)):
        perm = list(range(1, n + 1))
        rng.shuffle(perm)
        _, stats = multipivot_sort(perm, k, strategy, rng)
        cmp[t] = stats.comparisons
        pivot_cmp[t] = stats.pivot_sort_comparisons
        ins_cmp[t] = stats.insertion_comparisons
    mean, var, se = _summarize(cmp)
    return SimulationReport(
        Mode.COMPARISONS, n, k, trials, seed, mean, var, se,
        extras={
            "strategy": strategy.value,
            "pivot_sort_comparisons_mean": math.fsum(pivot_cmp) / trials,
            "insertion_comparisons_mean": math.fsum(ins_cmp) / trials,
        },
    )


@dataclass
class TollFit:
    toll: TollModel
    sizes: list[int]
    means: list[float]
    residuals: list[float]
    trials: int
    seed: int

    @property
    def max_abs_residual(self) -> float:
        return max(abs(r) for r in self.residuals)


def fit_toll(
    k: int,
    strategy: Strategy | str,
    sizes,
    trials: int,
    seed: int = DEFAULT_SEED,
) -> TollFit:
    """Least-squares line through the mean top-stage comparison count per size."""
    sizes = sorted(set(int(s) for s in sizes))
    if len(sizes) < 2:
        raise ValueError("fit_toll needs at least two distinct sizes")
    if sizes[0] <= k:
        raise ValueError(f"every size must exceed k={k}")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    strategy = Strategy(strategy)
    root = np.random.SeedSequence(seed)
    means = []
    for size, child in zip(sizes, root.spawn(len(sizes))):
        rng = random.Random(int(child.generate_state(2, np.uint64)[0]))
        counts = [top_stage_comparisons(size, k, strategy, rng) for _ in range(trials)]
        means.append(math.fsum(counts) / trials)
    x = np.array(sizes, dtype=float)
    y = np.array(means)
    design = np.column_stack([x, np.ones_like(x)])
    (a_hat, b_hat), *_ = np.linalg.lstsq(design, y, rcond=None)
    residuals = (y - design @ np.array([a_hat, b_hat])).tolist()
    return TollFit(TollModel(float(a_hat), float(b_hat)), sizes, means, residuals, trials, seed)
