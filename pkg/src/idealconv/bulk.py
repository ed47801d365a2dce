"""Block-sieved bulk evaluation of exponent statistics over integer ranges.

For whole-range scans (classifying every n up to 1e7, say) per-n factorization
is far too slow in Python.  Instead each block [lo, hi) is swept once per
prime p <= sqrt(hi): the exact exponent of p at every multiple is built with
strided slice increments, and the running product of extracted prime powers
exposes the (at most one) remaining prime factor > sqrt as a cofactor.  All
heavy work is numpy slice arithmetic; the Python-level loop is only over the
~450 primes below sqrt(1e7) per block.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidArgumentError

__all__ = ["BlockStats", "iter_blocks", "small_primes"]

FIELD_NAMES = frozenset(
    {"h_min", "h_max", "omega", "big_omega", "div_count", "exp_gcd"}
)

_NO_EXPONENT = 1 << 30  # larger than any exponent of n <= 2**63


def small_primes(bound: int) -> list[int]:
    """Primes <= bound via a plain boolean sieve (independent of FactorTable)."""
    if bound < 2:
        return []
    is_p = np.ones(bound + 1, dtype=bool)
    is_p[:2] = False
    for p in range(2, math.isqrt(bound) + 1):
        if is_p[p]:
            is_p[p * p :: p] = False
    return [int(p) for p in np.flatnonzero(is_p)]


@dataclass
class BlockStats:
    """Exponent statistics for every n in [lo, hi)."""

    lo: int
    hi: int
    n: np.ndarray
    h_min: np.ndarray | None = None
    h_max: np.ndarray | None = None
    omega: np.ndarray | None = None
    big_omega: np.ndarray | None = None
    div_count: np.ndarray | None = None
    exp_gcd: np.ndarray | None = None
    ap: dict[int, np.ndarray] = field(default_factory=dict)
    smooth_ok: dict[int, np.ndarray] = field(default_factory=dict)


def _multiple_positions(lo: int, hi: int, p: int) -> np.ndarray | None:
    """Positions (index - lo) of multiples of p in [lo, hi), or None."""
    m0 = -(-lo // p) * p
    if m0 >= hi:
        return None
    return np.arange(m0 - lo, hi - lo, p, dtype=np.int64)


def _exponents_at_multiples(lo: int, hi: int, p: int, pos: np.ndarray) -> np.ndarray:
    """Exact exponent of p at each multiple of p in [lo, hi), aligned with pos."""
    e = np.ones(len(pos), dtype=np.int64)
    m0 = lo + int(pos[0])
    pk = p * p
    while pk < hi:
        m0k = -(-lo // pk) * pk
        if m0k >= hi:
            break
        e[(m0k - m0) // p :: pk // p] += 1
        pk *= p
    return e


def iter_blocks(
    limit: int,
    fields: frozenset[str] | set[str] = FIELD_NAMES,
    *,
    ap_primes: tuple[int, ...] = (),
    smooth_bounds: tuple[int, ...] = (),
    block_size: int = 1 << 20,
    start: int = 2,
):
    """Yield BlockStats covering [start, limit] in consecutive blocks.

    `fields` selects which statistic arrays are computed; `ap_primes` adds
    exact p-adic valuation arrays for those primes, and `smooth_bounds`
    adds boolean is-p0-smooth masks for each bound p0.
    """
    unknown = set(fields) - FIELD_NAMES
    if unknown:
        raise InvalidArgumentError(f"unknown bulk fields: {sorted(unknown)}")
    if start < 2:
        raise InvalidArgumentError("bulk scans start at n >= 2")
    if limit < start:
        return
    fields = frozenset(fields)
    need_full = bool(fields)
    primes = small_primes(math.isqrt(limit)) if need_full else []
    max_smooth = max(smooth_bounds, default=0)
    smooth_primes = small_primes(max_smooth) if smooth_bounds else []
    # primes the main sweep must visit
    sweep = sorted(set(primes) | set(smooth_primes) | set(ap_primes))

    for lo in range(start, limit + 1, block_size):
        hi = min(lo + block_size, limit + 1)
        size = hi - lo
        n_arr = np.arange(lo, hi, dtype=np.int64)
        stats = BlockStats(lo=lo, hi=hi, n=n_arr)

        value = np.ones(size, dtype=np.int64) if need_full else None
        if "h_min" in fields:
            stats.h_min = np.full(size, _NO_EXPONENT, dtype=np.int64)
        if "h_max" in fields:
            stats.h_max = np.zeros(size, dtype=np.int64)
        if "omega" in fields:
            stats.omega = np.zeros(size, dtype=np.int64)
        if "big_omega" in fields:
            stats.big_omega = np.zeros(size, dtype=np.int64)
        if "div_count" in fields:
            stats.div_count = np.ones(size, dtype=np.int64)
        if "exp_gcd" in fields:
            stats.exp_gcd = np.zeros(size, dtype=np.int64)
        for p in ap_primes:
            stats.ap[p] = np.zeros(size, dtype=np.int64)
        smooth_vals = {p0: np.ones(size, dtype=np.int64) for p0 in smooth_bounds}

        sqrt_hi = math.isqrt(hi - 1)
        for p in sweep:
            in_main = need_full and p <= sqrt_hi
            if not (in_main or p <= max_smooth or p in stats.ap):
                continue
            pos = _multiple_positions(lo, hi, p)
            if pos is None:
                continue
            e = _exponents_at_multiples(lo, hi, p, pos)
            if p in stats.ap:
                stats.ap[p][pos] = e
            for p0, sval in smooth_vals.items():
                if p <= p0:
                    sval[pos] *= np.power(p, e)
            if not in_main:
                continue
            if stats.h_min is not None:
                stats.h_min[pos] = np.minimum(stats.h_min[pos], e)
            if stats.h_max is not None:
                stats.h_max[pos] = np.maximum(stats.h_max[pos], e)
            if stats.omega is not None:
                stats.omega[pos] += 1
            if stats.big_omega is not None:
                stats.big_omega[pos] += e
            if stats.div_count is not None:
                stats.div_count[pos] *= e + 1
            if stats.exp_gcd is not None:
                stats.exp_gcd[pos] = np.gcd(stats.exp_gcd[pos], e)
            value[pos] *= np.power(p, e)

        if need_full:
            # cofactor is 1 or a single prime > sqrt(hi) with exponent 1
            has_rem = n_arr // value > 1
            if stats.h_min is not None:
                stats.h_min[has_rem] = 1
            if stats.h_max is not None:
                stats.h_max[has_rem] = np.maximum(stats.h_max[has_rem], 1)
            if stats.omega is not None:
                stats.omega[has_rem] += 1
            if stats.big_omega is not None:
                stats.big_omega[has_rem] += 1
            if stats.div_count is not None:
                stats.div_count[has_rem] *= 2
            if stats.exp_gcd is not None:
                stats.exp_gcd[has_rem] = 1

        for p0, sval in smooth_vals.items():
            stats.smooth_ok[p0] = sval == n_arr

        yield stats
