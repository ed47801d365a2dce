"""Exceptional sets of arithmetic sequences and their counting reports.

Each supported sequence x_n (built from the exponent statistics of n) has a
normal value L it tends to along typical integers; the exceptional set at
tolerance eps collects the n with |x_n - L| >= eps.  This module constructs
those sets, counts them against analytic envelopes, and measures the
limsup of log k / log n_k along their elements.

Bulk scans go through `bulk.iter_blocks`, so membership over ranges like
[2, 10**7] costs one sieve pass.
"""

from __future__ import annotations

import dataclasses
import math
import operator
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from . import arith
from .bulk import BlockStats, iter_blocks, small_primes
from .errors import InvalidArgumentError
from .exponent import ExponentEstimate, IdealVerdict
from .sets import Checkpoints, IntegerSet

__all__ = [
    "SequenceSpec",
    "sequence_spec",
    "SEQUENCE_KEYS",
    "sequence_value",
    "sequence_values",
    "exceptional_set",
    "exceptional_members",
    "smooth_bound_for",
    "envelope_value",
    "default_envelope",
    "envelope_check",
    "ENVELOPE_KINDS",
    "CountRow",
    "ExceptionalReport",
    "count_report",
    "RatioRow",
    "LimsupReport",
    "remark_limsup",
]


def _as_limit(table_or_limit) -> int:
    """Accept a factor table (anything with an integer `limit`) or a bare
    integer bound; bulk scans only need the bound."""
    limit = getattr(table_or_limit, "limit", table_or_limit)
    try:
        return operator.index(limit)
    except TypeError:
        raise InvalidArgumentError(
            f"expected a factor table or integer limit, got {table_or_limit!r}"
        ) from None

_LOG2 = math.log(2)
_NORMAL_LOGLOG = 1 + _LOG2  # normal value of loglog f(n) / loglog n


@dataclass(frozen=True)
class SequenceSpec:
    """One supported sequence: key, its normal value, first valid index."""

    key: str
    limit_value: float
    start_n: int
    p: int | None = None

    @property
    def label(self) -> str:
        return f"{self.key}(p={self.p})" if self.p is not None else self.key


# key -> (normal value, first valid n, bulk fields, needs prime p)
SEQUENCE_KEYS: dict[str, tuple[float, int, frozenset[str], bool]] = {
    "min_exponent_over_log": (0.0, 2, frozenset({"h_min"}), False),
    "max_exponent_over_log": (0.0, 2, frozenset({"h_max"}), False),
    "valuation_scaled": (0.0, 2, frozenset(), True),
    "power_rep_count": (1.0, 2, frozenset({"exp_gcd"}), False),
    "power_rep_weight": (1.0, 2, frozenset({"exp_gcd"}), False),
    "pascal_count": (2.0, 2, frozenset(), False),
    "omega_over_loglog": (1.0, 3, frozenset({"omega"}), False),
    "bigomega_over_loglog": (1.0, 3, frozenset({"big_omega"}), False),
    "loglog_f": (_NORMAL_LOGLOG, 3, frozenset({"div_count"}), False),
    "loglog_fstar": (_NORMAL_LOGLOG, 3, frozenset({"div_count"}), False),
}


def sequence_spec(key: str, p: int | None = None) -> SequenceSpec:
    if key not in SEQUENCE_KEYS:
        raise InvalidArgumentError(
            f"unknown sequence {key!r}; choose from {sorted(SEQUENCE_KEYS)}"
        )
    limit_value, start_n, _, needs_p = SEQUENCE_KEYS[key]
    if needs_p:
        if p is None:
            raise InvalidArgumentError(f"sequence {key!r} requires a prime p")
        if not arith.is_prime(p):
            raise InvalidArgumentError(f"p must be prime, got {p}")
    elif p is not None:
        raise InvalidArgumentError(f"sequence {key!r} takes no prime parameter")
    return SequenceSpec(key=key, limit_value=limit_value, start_n=start_n, p=p)


def required_fields(spec: SequenceSpec) -> frozenset[str]:
    return SEQUENCE_KEYS[spec.key][2]


# ---------------------------------------------------------------------------
# values
# ---------------------------------------------------------------------------

# divisor-count / divisor-sum tables for the small exponent gcds
_TBL = 64
_D_SMALL = np.zeros(_TBL, dtype=np.int64)
_SIGMA_SMALL = np.zeros(_TBL, dtype=np.int64)
for _i in range(1, _TBL):
    _D_SMALL[_i::_i] += 1
    _SIGMA_SMALL[_i::_i] += _i


def sequence_value(spec: SequenceSpec, n: int, table: arith.FactorTable) -> float:
    """x_n for a single n, from its factorization (reference path)."""
    if n < spec.start_n:
        raise InvalidArgumentError(
            f"{spec.label} is defined for n >= {spec.start_n}, got {n}"
        )
    key = spec.key
    if key == "pascal_count":
        return float(arith.pascal_count(n))
    f = arith.factorize(n, table)
    ln_n = math.log(n)
    if key == "min_exponent_over_log":
        return arith.h_min(f) / ln_n
    if key == "max_exponent_over_log":
        return arith.h_max(f) / ln_n
    if key == "valuation_scaled":
        return arith.a_p(n, spec.p) * math.log(spec.p) / ln_n
    if key == "power_rep_count":
        return float(arith.gamma_tau(f).gamma)
    if key == "power_rep_weight":
        return float(arith.gamma_tau(f).tau)
    lnln_n = math.log(ln_n)
    if key == "omega_over_loglog":
        return arith.omega(f) / lnln_n
    if key == "bigomega_over_loglog":
        return arith.big_omega(f) / lnln_n
    if key == "loglog_f":
        return math.log(arith.log_f(f)) / lnln_n
    # loglog_fstar: undefined (log 0) when f*(n) = 1, i.e. at the primes
    lf = arith.log_f_star(f)
    return math.log(lf) / lnln_n if lf > 0 else -math.inf


def sequence_values(spec: SequenceSpec, stats: BlockStats) -> np.ndarray:
    """x_n for every n in a stats block (indices below start_n give garbage;
    mask them out with `n >= spec.start_n`)."""
    key = spec.key
    n = stats.n
    if key == "pascal_count":
        return np.array(
            [float(arith.pascal_count(int(v))) for v in n], dtype=np.float64
        )
    ln_n = np.log(n.astype(np.float64))
    if key == "min_exponent_over_log":
        return stats.h_min / ln_n
    if key == "max_exponent_over_log":
        return stats.h_max / ln_n
    if key == "valuation_scaled":
        return stats.ap[spec.p] * math.log(spec.p) / ln_n
    if key == "power_rep_count":
        return _D_SMALL[stats.exp_gcd].astype(np.float64)
    if key == "power_rep_weight":
        return _SIGMA_SMALL[stats.exp_gcd].astype(np.float64)
    with np.errstate(divide="ignore"):
        lnln_n = np.log(ln_n)
        if key == "omega_over_loglog":
            return stats.omega / lnln_n
        if key == "bigomega_over_loglog":
            return stats.big_omega / lnln_n
        if key == "loglog_f":
            return np.log(0.5 * stats.div_count * ln_n) / lnln_n
        if key == "loglog_fstar":
            return np.log((0.5 * stats.div_count - 1.0) * ln_n) / lnln_n
    raise InvalidArgumentError(f"unknown sequence {key!r}")


# ---------------------------------------------------------------------------
# membership
# ---------------------------------------------------------------------------


def _pascal_members(eps: float, limit: int) -> np.ndarray:
    """Exceptional n <= limit for the Pascal occurrence count.

    |N(n) - 2| >= eps holds exactly for n = 2 (when eps <= 1) and for n
    with at least ceil(eps) occurrences interior to the triangle, i.e.
    n = C(r, k) with k >= 2 and r >= 2k; so those values are enumerated
    directly instead of scanning every n.
    """
    need = max(1, math.ceil(eps))
    hits: dict[int, int] = {}
    k = 2
    while math.comb(2 * k, k) <= limit:
        r = 2 * k
        while True:
            v = math.comb(r, k)
            if v > limit:
                break
            hits[v] = hits.get(v, 0) + (1 if r == 2 * k else 2)
            r += 1
        k += 1
    members = sorted(v for v, c in hits.items() if c >= need)
    if eps <= 1 and limit >= 2:
        members = [2] + members
    return np.array(members, dtype=np.int64)


def exceptional_members(
    spec: SequenceSpec, eps: float, table, block_size: int = 1 << 20
) -> Iterator[np.ndarray]:
    """Members of the exceptional set in [start_n, limit], one sorted array
    per sieve block.  `table` may be a factor table or an integer limit."""
    if eps <= 0:
        raise InvalidArgumentError(f"tolerance eps must be positive, got {eps}")
    limit = _as_limit(table)
    if limit < spec.start_n:
        return
    if spec.key == "pascal_count":
        members = _pascal_members(eps, limit)
        if len(members):
            yield members
        return
    fields = required_fields(spec)
    ap_primes = (spec.p,) if spec.p is not None else ()
    for stats in iter_blocks(
        limit,
        fields,
        ap_primes=ap_primes,
        block_size=block_size,
        start=spec.start_n,
    ):
        values = sequence_values(spec, stats)
        mask = np.abs(values - spec.limit_value) >= eps
        if stats.lo < spec.start_n:
            mask[: spec.start_n - stats.lo] = False
        hit = stats.n[mask]
        if len(hit):
            yield hit


def exceptional_set(spec: SequenceSpec, eps: float, table) -> IntegerSet:
    """The exceptional set at tolerance eps, truncated to [2, limit].

    `table` may be a factor table or an integer limit.
    """
    limit = _as_limit(table)

    def gen() -> Iterator[int]:
        for block in exceptional_members(spec, eps, limit):
            for v in block:
                yield int(v)

    return IntegerSet(
        gen(),
        label=f"exceptional({spec.label},eps={eps:g})",
        describe=f"n <= {limit} with |{spec.label}(n) - {spec.limit_value:g}| >= {eps:g}",
    )


def smooth_bound_for(eps: float) -> int | None:
    """Largest prime p with 1/log p >= eps, or None when no prime qualifies.

    Every member of the min-exponent exceptional set is p-smooth for this
    bound: a prime factor q > p would force x_n <= 1/log q < eps.
    """
    if eps <= 0:
        raise InvalidArgumentError(f"tolerance eps must be positive, got {eps}")
    cap = math.floor(math.exp(1 / eps))
    if cap < 2:
        return None
    primes = small_primes(cap)
    return primes[-1] if primes else None


# ---------------------------------------------------------------------------
# envelopes
# ---------------------------------------------------------------------------

ENVELOPE_KINDS: dict[str, tuple[str, ...]] = {
    # kind -> sequence keys it bounds
    "max_exponent": ("max_exponent_over_log",),
    "prime_valuation": ("valuation_scaled",),
    "perfect_power": ("power_rep_count", "power_rep_weight"),
}


def envelope_value(kind: str, x: float, eps: float, p: int | None = None) -> float:
    """Proven upper bound for the exceptional count at x.

    max_exponent:    2 * sqrt(2) * x ** (1 - eps * log(2) / 2)
    prime_valuation: (log x / log p) * x ** (1 - eps)
    perfect_power:   (log x / log 2) * sqrt(x), valid for x >= 4
    """
    if kind == "max_exponent":
        return 2 * math.sqrt(2) * x ** (1 - eps * _LOG2 / 2)
    if kind == "prime_valuation":
        if p is None:
            raise InvalidArgumentError("prime_valuation envelope needs p")
        return (math.log(x) / math.log(p)) * x ** (1 - eps)
    if kind == "perfect_power":
        if x < 4:
            raise InvalidArgumentError(
                f"perfect_power envelope is stated for x >= 4, got {x}"
            )
        return (math.log(x) / _LOG2) * math.sqrt(x)
    raise InvalidArgumentError(
        f"unknown envelope {kind!r}; choose from {sorted(ENVELOPE_KINDS)}"
    )


def default_envelope(spec: SequenceSpec) -> str | None:
    for kind, keys in ENVELOPE_KINDS.items():
        if spec.key in keys:
            return kind
    return None


def _check_envelope_kind(spec: SequenceSpec, kind: str) -> None:
    if kind not in ENVELOPE_KINDS:
        raise InvalidArgumentError(
            f"unknown envelope {kind!r}; choose from {sorted(ENVELOPE_KINDS)}"
        )
    if spec.key not in ENVELOPE_KINDS[kind]:
        raise InvalidArgumentError(
            f"envelope {kind!r} does not bound sequence {spec.key!r}"
        )


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CountRow:
    x: int
    count: int
    envelope: float | None
    ratio: float | None  # count / envelope


@dataclass(frozen=True)
class ExceptionalReport:
    spec: SequenceSpec
    eps: float
    envelope_kind: str | None
    rows: tuple[CountRow, ...]
    lambda_estimate: ExponentEstimate | None = None
    verdicts: tuple[IdealVerdict, ...] = ()

    @property
    def envelope_ok(self) -> bool:
        """True when every counted value sits under its envelope."""
        return all(r.envelope is None or r.count <= r.envelope for r in self.rows)

    def with_analysis(
        self,
        lambda_estimate: ExponentEstimate | None = None,
        verdicts: tuple[IdealVerdict, ...] = (),
    ) -> "ExceptionalReport":
        """Copy of the report with exponent/ideal analysis attached."""
        return dataclasses.replace(
            self, lambda_estimate=lambda_estimate, verdicts=tuple(verdicts)
        )

    def to_records(self) -> list[dict]:
        return [
            {
                "sequence": self.spec.label,
                "eps": self.eps,
                "x": r.x,
                "count": r.count,
                "envelope": r.envelope,
                "ratio": r.ratio,
            }
            for r in self.rows
        ]


def count_report(
    spec: SequenceSpec,
    eps: float,
    checkpoints: Checkpoints,
    envelope: str | None = "auto",
    block_size: int = 1 << 20,
) -> ExceptionalReport:
    """Exceptional counts at each checkpoint, with envelope columns.

    `envelope="auto"` picks the proven bound for the sequence when one
    exists; pass None to skip, or a kind name to force (mismatches raise).
    """
    kind = default_envelope(spec) if envelope == "auto" else envelope
    if kind is not None:
        _check_envelope_kind(spec, kind)
    limit = checkpoints.values[-1]
    rows: list[CountRow] = []
    total = 0
    targets = list(checkpoints.values)
    ti = 0

    def flush(upto: int, block: np.ndarray | None, base: int) -> None:
        nonlocal ti
        while ti < len(targets) and targets[ti] < upto:
            x = targets[ti]
            c = base + (
                int(np.searchsorted(block, x, side="right")) if block is not None else 0
            )
            env = None
            if kind is not None and (kind != "perfect_power" or x >= 4):
                env = envelope_value(kind, x, eps, spec.p)
            rows.append(CountRow(x, c, env, (c / env) if env else None))
            ti += 1

    for block in exceptional_members(spec, eps, limit, block_size=block_size):
        flush(int(block[0]), None, total)  # checkpoints before this block
        flush(int(block[-1]) + 1, block, total)
        total += len(block)
    flush(limit + 1, None, total)
    return ExceptionalReport(spec=spec, eps=eps, envelope_kind=kind, rows=tuple(rows))


def envelope_check(report: ExceptionalReport, kind: str) -> ExceptionalReport:
    """Re-evaluate a report's rows against the named envelope.

    Returns a copy whose envelope/ratio columns come from `kind`; the
    perfect_power bound is left blank below x = 4, where it is not stated.
    A kind that does not bound the report's sequence raises.
    """
    _check_envelope_kind(report.spec, kind)
    rows = []
    for r in report.rows:
        env = None
        if kind != "perfect_power" or r.x >= 4:
            env = envelope_value(kind, r.x, report.eps, report.spec.p)
        rows.append(CountRow(r.x, r.count, env, (r.count / env) if env else None))
    return dataclasses.replace(report, envelope_kind=kind, rows=tuple(rows))


@dataclass(frozen=True)
class RatioRow:
    k: int
    member: int
    ratio: float  # log k / log n_k


@dataclass(frozen=True)
class LimsupReport:
    spec: SequenceSpec
    eps: float
    limit: int
    total: int
    rows: tuple[RatioRow, ...]

    def to_records(self) -> list[dict]:
        return [
            {
                "sequence": self.spec.label,
                "eps": self.eps,
                "k": r.k,
                "member": r.member,
                "ratio": r.ratio,
            }
            for r in self.rows
        ]


def remark_limsup(
    spec: SequenceSpec, eps: float, table, block_size: int = 1 << 20
) -> LimsupReport:
    """log k / log n_k sampled at k = 1, 2, 4, 8, ... plus the final member.

    When the exceptional set has exponent 1 this ratio climbs toward 1;
    the report makes that visible without materializing the set.  The k = 1
    row is always 0 (log 1 = 0).  `table` may be a factor table or an
    integer limit.
    """
    limit = _as_limit(table)
    rows: list[RatioRow] = []
    total = 0
    target = 1
    last_member = 0
    for block in exceptional_members(spec, eps, limit, block_size=block_size):
        m = len(block)
        while target <= total + m:
            nk = int(block[target - total - 1])
            rows.append(RatioRow(target, nk, math.log(target) / math.log(nk)))
            target *= 2
        total += m
        last_member = int(block[-1])
    if total >= 1 and (not rows or rows[-1].k != total):
        rows.append(
            RatioRow(total, last_member, math.log(total) / math.log(last_member))
        )
    return LimsupReport(spec=spec, eps=eps, limit=limit, total=total, rows=tuple(rows))
