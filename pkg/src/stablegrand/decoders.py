"""Guess-and-test decoders: ORBGRAND, SGRAND and their EDGE erasure variants.

All decoders share the same primitive: walk candidate noise-effect
patterns in decreasing likelihood, XOR each onto the hard decision and
test codebook membership.  Membership tests are incremental syndrome
updates (a few int XORs per query) against the code's bit-packed
parity-check rows.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field

import numpy as np

from .codes import BinaryCode
from .noise import LlrCurve, StableParams, equivalent_sigma, llr_approx, llr_exact

__all__ = [
    "SoftBlock",
    "ErasureSet",
    "DecodeOutcome",
    "DecoderConfig",
    "make_soft_block",
    "orbgrand_patterns",
    "orbgrand",
    "sgrand",
    "erase_by_soft",
    "erase_by_llr",
    "grand_edge",
]

LLR_MODES = ("gaussian-assumption", "alpha-exact", "alpha-approx")


@dataclass
class SoftBlock:
    """A received block: soft values, LLRs, hard decisions and rank order.

    hard[i] = 1 iff soft[i] < 0 (BPSK bit 0 -> +1); `rank` permutes
    positions into ascending |llr| so rank[0] is the least reliable bit.
    """

    soft: np.ndarray
    llr: np.ndarray
    hard: np.ndarray
    rank: np.ndarray

    @property
    def n(self) -> int:
        return len(self.soft)

    def hard_int(self) -> int:
        return int.from_bytes(
            np.packbits(self.hard, bitorder="little").tobytes(), "little"
        )


def make_soft_block(
    soft: np.ndarray,
    llr_mode: str = "gaussian-assumption",
    noise: StableParams | None = None,
    sigma_eff: float | None = None,
    curve: LlrCurve | None = None,
) -> SoftBlock:
    """Attach LLRs and rank ordering to raw soft values.

    gaussian-assumption: llr = 2*y/sigma_eff**2 (sigma_eff derived from
    `noise` via the equivalent-SNR map when not given); alpha-exact: the
    stable-law LLR (through `curve` when provided, the tabulated hot
    path); alpha-approx: the closed-form approximation.
    """
    soft = np.asarray(soft, dtype=float)
    if llr_mode == "gaussian-assumption":
        if sigma_eff is None:
            if noise is None:
                raise ValueError("gaussian-assumption needs sigma_eff or noise params")
            sigma_eff = equivalent_sigma(noise)
        llr = 2.0 * soft / (sigma_eff * sigma_eff)
    elif llr_mode == "alpha-exact":
        if curve is not None:
            llr = curve(soft)
        elif noise is not None:
            llr = llr_exact(soft, noise)
        else:
            raise ValueError("alpha-exact needs noise params or an LLR curve")
    elif llr_mode == "alpha-approx":
        if noise is None:
            raise ValueError("alpha-approx needs noise params")
        llr = llr_approx(soft, noise.alpha, noise.gamma)
    else:
        raise ValueError(f"unknown llr_mode {llr_mode!r}; expected one of {LLR_MODES}")
    hard = (soft < 0.0).astype(np.uint8)
    rank = np.argsort(np.abs(llr), kind="stable")
    return SoftBlock(soft=soft, llr=llr, hard=hard, rank=rank)


@dataclass
class ErasureSet:
    """Bit positions excluded from guessing, to be completed by elimination."""

    positions: np.ndarray
    origin: str  # "soft-threshold" | "llr-threshold"

    def __len__(self) -> int:
        return len(self.positions)


@dataclass
class DecodeOutcome:
    """Decoded word plus diagnostics.

    abandoned=False guarantees the word is a codebook member; when the
    query budget runs out the hard decision is returned as-is with
    abandoned=True.
    """

    codeword: np.ndarray
    queries: int
    erased: int = 0
    used_fallback: bool = False
    abandoned: bool = False


@dataclass
class DecoderConfig:
    max_queries: int = 1 << 20
    delta: float | None = None  # soft-value erasure threshold
    epsilon: float | None = None  # LLR erasure threshold
    llr_mode: str = "gaussian-assumption"
    noise: StableParams | None = None

    def __post_init__(self):
        if self.max_queries < 1:
            raise ValueError("max_queries must be >= 1")
        if self.delta is not None and self.delta <= 0:
            raise ValueError("delta must be positive")
        if self.epsilon is not None and self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if self.llr_mode not in LLR_MODES:
            raise ValueError(f"llr_mode must be one of {LLR_MODES}")


# ---------------------------------------------------------------------------
# ORBGRAND pattern stream
#
# Patterns are sets of 1-based rank indices; the logistic weight of a
# pattern is the sum of its indices.  Patterns are emitted in
# nondecreasing weight; ties broken by fewer flips first, then
# lexicographically on the ascending index tuple.  Equal-weight classes
# are integer partitions of the weight into distinct parts <= n.
# ---------------------------------------------------------------------------

_PATTERN_CACHE_LIMIT = 1 << 16
_pattern_streams: dict[int, "_PatternStream"] = {}


def _distinct_partitions(w: int, max_part: int) -> list[tuple[int, ...]]:
    """All partitions of w into distinct parts <= max_part, (len, lex) sorted."""
    out: list[tuple[int, ...]] = []
    acc: list[int] = []

    def rec(remaining: int, min_part: int):
        # Largest sum still reachable with distinct parts in [min_part, max_part].
        span = max_part - min_part + 1
        if span <= 0 or remaining > span * (min_part + max_part) // 2:
            return
        for p in range(min_part, max_part + 1):
            if p > remaining:
                break
            acc.append(p)
            if p == remaining:
                out.append(tuple(acc))
            else:
                rec(remaining - p, p + 1)
            acc.pop()

    rec(w, 1)
    out.sort(key=lambda t: (len(t), t))
    return out


class _PatternStream:
    """Lazily materialized, cached prefix of the pattern stream for one n."""

    def __init__(self, n: int):
        self.n = n
        self.max_weight = n * (n + 1) // 2
        self.patterns: list[tuple[int, ...]] = [()]
        self.next_weight = 1

    def _extend(self):
        self.patterns.extend(_distinct_partitions(self.next_weight, self.n))
        self.next_weight += 1

    def iterate(self, budget: int):
        i = 0
        while i < budget:
            if i < len(self.patterns):
                yield self.patterns[i]
                i += 1
            elif len(self.patterns) < _PATTERN_CACHE_LIMIT and self.next_weight <= self.max_weight:
                self._extend()
            else:
                break
        # Past the cached prefix: generate weight classes on the fly.
        w = self.next_weight
        while i < budget and w <= self.max_weight:
            for pat in _distinct_partitions(w, self.n):
                yield pat
                i += 1
                if i == budget:
                    return
            w += 1


def orbgrand_patterns(n: int, budget: int | None = None):
    """Yield rank-index flip patterns in nondecreasing logistic weight.

    The empty pattern comes first; at most `budget` patterns are emitted
    (all 2**n when budget is None or large enough).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    stream = _pattern_streams.setdefault(n, _PatternStream(n))
    if budget is None:
        budget = 1 << n if n < 63 else 1 << 63
    return stream.iterate(budget)


# ---------------------------------------------------------------------------
# Decoders
# ---------------------------------------------------------------------------


def _outcome_hit(code, hard_int, flip_int, queries, erased=0, fallback=False):
    word = hard_int ^ flip_int
    return DecodeOutcome(
        codeword=code.word_from_int(word),
        queries=queries,
        erased=erased,
        used_fallback=fallback,
    )


def orbgrand(block: SoftBlock, code: BinaryCode, cfg: DecoderConfig) -> DecodeOutcome:
    """ORBGRAND: flip patterns in logistic-weight order until a codeword.

    The LLRs enter only through the rank permutation, so this one routine
    is baseline ORBGRAND or alpha-ORBGRAND depending on how the block's
    LLRs were computed.
    """
    hard_int = block.hard_int()
    syn = code.syndrome_int(hard_int)
    cols = code.syndrome_columns()
    rank = block.rank
    rank_syn = [cols[p] for p in rank]
    rank_mask = [1 << int(p) for p in rank]
    queries = 0
    for pattern in orbgrand_patterns(code.n, cfg.max_queries):
        queries += 1
        s = syn
        for r in pattern:
            s ^= rank_syn[r - 1]
        if s == 0:
            flip = 0
            for r in pattern:
                flip |= rank_mask[r - 1]
            return _outcome_hit(code, hard_int, flip, queries)
    return DecodeOutcome(
        codeword=block.hard.copy(), queries=queries, abandoned=True
    )


def sgrand(block: SoftBlock, code: BinaryCode, cfg: DecoderConfig) -> DecodeOutcome:
    """SGRAND: best-first search over patterns by exact log-likelihood.

    A min-heap on the pattern penalty sum(|llr| of flipped ranks) is
    seeded with the empty pattern; popping a pattern S whose largest rank
    is j pushes S + {j+1} and (S - {j}) + {j+1}, which enumerates every
    subset exactly once in nonincreasing likelihood, so the first
    codebook hit is maximum likelihood.  Ties break toward fewer flips,
    then lexicographically.
    """
    hard_int = block.hard_int()
    syn = code.syndrome_int(hard_int)
    cols = code.syndrome_columns()
    rank = block.rank
    rank_syn = [cols[p] for p in rank]
    rank_mask = [1 << int(p) for p in rank]
    pen = np.abs(block.llr)[rank]  # pen[j]: penalty of flipping rank j+1
    n = code.n

    heap: list[tuple[float, int, tuple[int, ...]]] = [(0.0, 0, ())]
    queries = 0
    while heap and queries < cfg.max_queries:
        penalty, _, pattern = heapq.heappop(heap)
        queries += 1
        s = syn
        for r in pattern:
            s ^= rank_syn[r - 1]
        if s == 0:
            flip = 0
            for r in pattern:
                flip |= rank_mask[r - 1]
            return _outcome_hit(code, hard_int, flip, queries)
        j = pattern[-1] if pattern else 0
        if j < n:
            grown = pattern + (j + 1,)
            heapq.heappush(heap, (penalty + pen[j], len(grown), grown))
            if pattern:
                slid = pattern[:-1] + (j + 1,)
                heapq.heappush(
                    heap, (penalty - pen[j - 1] + pen[j], len(slid), slid)
                )
    return DecodeOutcome(codeword=block.hard.copy(), queries=queries, abandoned=True)


def erase_by_soft(block: SoftBlock, delta: float) -> ErasureSet:
    """Erase positions with |soft| strictly above delta (outlier energy)."""
    if delta <= 0:
        raise ValueError("delta must be positive")
    return ErasureSet(
        positions=np.flatnonzero(np.abs(block.soft) > delta), origin="soft-threshold"
    )


def erase_by_llr(block: SoftBlock, epsilon: float) -> ErasureSet:
    """Erase positions with |llr| strictly below epsilon.

    Under heavy-tailed LLR curves this catches both saturating outliers
    (tail reliability decay) and soft values near the decision boundary.
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    return ErasureSet(
        positions=np.flatnonzero(np.abs(block.llr) < epsilon), origin="llr-threshold"
    )


def grand_edge(
    block: SoftBlock, code: BinaryCode, cfg: DecoderConfig, eraser: str = "soft"
) -> DecodeOutcome:
    """Hybrid error-and-erasure decoding (the EDGE variants).

    Erase positions (by soft value with threshold delta, or by LLR with
    threshold epsilon), run ORBGRAND over the survivors only, and complete
    each consistent candidate's erased bits by GF(2) elimination on the
    parity-check system.  If the erasure set is too large for a unique
    completion (more erasures than parity rows, or a column-rank-deficient
    submatrix) the whole block falls back to plain ORBGRAND.
    """
    if eraser == "soft":
        if cfg.delta is None:
            raise ValueError("soft eraser needs cfg.delta")
        erasures = erase_by_soft(block, cfg.delta)
    elif eraser == "llr":
        if cfg.epsilon is None:
            raise ValueError("llr eraser needs cfg.epsilon")
        erasures = erase_by_llr(block, cfg.epsilon)
    else:
        raise ValueError(f"eraser must be 'soft' or 'llr', got {eraser!r}")

    n = code.n
    n_erased = len(erasures)
    erased_pos = [int(p) for p in erasures.positions]

    # Block-level fallback decision: unique completion needs |E| independent
    # parity columns, checked once before any pattern iteration.
    fallback = n_erased > code.redundancy
    pivots: list[tuple[int, int]] = []  # (erased column, reduced row index)
    work = code.packed_parity_rows()
    if not fallback:
        used: set[int] = set()
        for col in erased_pos:
            pivot = next(
                (
                    r
                    for r in range(len(work))
                    if r not in used and (work[r] >> col) & 1
                ),
                None,
            )
            if pivot is None:
                fallback = True
                break
            for r in range(len(work)):
                if r != pivot and (work[r] >> col) & 1:
                    work[r] ^= work[pivot]
            used.add(pivot)
            pivots.append((col, pivot))

    if fallback:
        inner = orbgrand(block, code, cfg)
        return DecodeOutcome(
            codeword=inner.codeword,
            queries=inner.queries,
            erased=n_erased,
            used_fallback=True,
            abandoned=inner.abandoned,
        )

    used_rows = {r for _, r in pivots}
    free_rows = [work[r] for r in range(len(work)) if r not in used_rows]

    erased_mask = 0
    for p in erased_pos:
        erased_mask |= 1 << p
    survivor_mask = ((1 << n) - 1) ^ erased_mask

    hard_surv = block.hard_int() & survivor_mask
    # Free rows contain no erased columns: they are pure survivor parity
    # constraints, reduced against incrementally like plain ORBGRAND.
    syn0 = 0
    for i, row in enumerate(free_rows):
        syn0 |= ((row & hard_surv).bit_count() & 1) << i
    col_syn = {}
    survivors = [p for p in range(n) if not (erased_mask >> p) & 1]
    for p in survivors:
        col_syn[p] = sum(
            (((row >> p) & 1) << i) for i, row in enumerate(free_rows)
        )

    abs_llr = np.abs(block.llr)
    surv_rank = sorted(survivors, key=lambda p: (abs_llr[p], p))
    rank_syn = [col_syn[p] for p in surv_rank]
    rank_mask = [1 << p for p in surv_rank]
    completion = [(1 << col, work[r] & ~(1 << col)) for col, r in pivots]

    queries = 0
    for pattern in orbgrand_patterns(len(survivors), cfg.max_queries):
        queries += 1
        s = syn0
        for r in pattern:
            s ^= rank_syn[r - 1]
        if s != 0:
            continue  # inconsistent survivor assignment: reject candidate
        flip = 0
        for r in pattern:
            flip |= rank_mask[r - 1]
        word = hard_surv ^ flip
        for bit, row_rest in completion:
            if (row_rest & word).bit_count() & 1:
                word |= bit
        vec = code.word_from_int(word)
        if code.kind == "ca-polar" and not code.is_codeword(vec):
            continue  # guard against H/codebook mismatch; never expected
        return DecodeOutcome(codeword=vec, queries=queries, erased=n_erased)

    return DecodeOutcome(
        codeword=block.hard.copy(),
        queries=queries,
        erased=n_erased,
        abandoned=True,
    )
