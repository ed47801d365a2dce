"""Convergence-exponent estimation and growth-ideal membership verdicts.

The exponent of a set A = {a_1 < a_2 < ...} is the limit superior of
log n / log a_n, equivalently the infimum of t for which sum a_n**(-t)
converges.  Membership of A in the growth ideals is decided here from
finite counting evidence:

  * "at most q":  for every delta > 0 the series A(x) / x**(q+delta) -> 0;
  * "below q":    for some delta > 0 the series A(x) / x**(q-delta) -> 0.

A finite table of ratios can never witness a limit, so verdicts follow an
explicit decay policy (see `DecayPolicy`): a series counts as vanishing when
its final window is nonincreasing and it has either dropped below
`drop_factor` times its starting value or sustained a log-log decay rate of
at least `rate_fraction * delta`.  Every verdict records the policy and the
evidence rows it was based on, and verdicts may be INDETERMINATE.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from .errors import InsufficientDataError, InvalidArgumentError
from .sets import Checkpoints, IntegerSet

__all__ = [
    "Trend",
    "Verdict",
    "Ideal",
    "ExponentEstimate",
    "DecayPolicy",
    "EvidenceRow",
    "IdealVerdict",
    "ChainReport",
    "estimate_lambda",
    "classify_leq",
    "classify_less",
    "classify_rows_leq",
    "classify_rows_less",
    "partial_sum_probe",
    "chain_report",
    "DEFAULT_DELTAS",
]


class Trend(str, enum.Enum):
    INCREASING = "increasing"
    DECREASING = "decreasing"
    OSCILLATING = "oscillating"
    FLAT = "flat"


class Verdict(str, enum.Enum):
    CONSISTENT = "consistent"
    INCONSISTENT = "inconsistent"
    INDETERMINATE = "indeterminate"


class Ideal(str, enum.Enum):
    AT_MOST = "leq"
    BELOW = "less"


DEFAULT_DELTAS = (0.2, 0.1, 0.05, 0.02)


# ---------------------------------------------------------------------------
# exponent estimation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExponentEstimate:
    value: float
    terms: int
    tail_fraction: float
    window_ratios: tuple[tuple[int, float], ...]
    trend: Trend


def estimate_lambda(
    a: IntegerSet, terms: int = 10_000, tail_fraction: float = 0.2
) -> ExponentEstimate:
    """Estimate the convergence exponent from the first `terms` elements.

    Each index n contributes the log-log secant slope

        (log n - log n0) / (log a_n - log a_n0),   n0 = isqrt(n),

    anchored at the geometric midpoint of the index range.  Unlike the raw
    ratio log n / log a_n, the secant is invariant under multiplicative
    rescaling of the stream (a constant factor cancels in the denominator),
    which the estimator algebra relies on.  The estimate is the maximum
    slope over the tail window (the last `tail_fraction` of indices),
    clipped to [0, 1]; it tracks the limit superior while discarding
    small-n noise.  `window_ratios` samples the slope at n = 2, 4, 8, ...
    for trend inspection.
    """
    if terms < 100:
        raise InvalidArgumentError(f"need at least 100 terms, got {terms}")
    if not 0 < tail_fraction <= 1:
        raise InvalidArgumentError(
            f"tail_fraction must be in (0, 1], got {tail_fraction}"
        )
    prefix = a.prefix(terms)
    logs = [math.log(v) if v > 1 else 0.0 for v in prefix]

    def ratio(n: int) -> float:
        n0 = max(1, math.isqrt(n))
        if n0 >= n:
            n0 = n - 1
        den = logs[n - 1] - logs[n0 - 1]
        if den <= 0.0:  # a_n0 == 1 == a_n impossible; defensive only
            return 1.0
        slope = (math.log(n) - math.log(n0)) / den
        return min(max(slope, 0.0), 1.0)

    lo = max(2, math.ceil((1 - tail_fraction) * terms))
    value = max(ratio(n) for n in range(lo, terms + 1))

    samples = []
    n = 2
    while n < terms:
        samples.append((n, ratio(n)))
        n *= 2
    samples.append((terms, ratio(terms)))

    tail = [r for _, r in samples[-8:]]
    diffs = [b - a_ for a_, b in zip(tail, tail[1:])]
    tol = 1e-6
    if all(abs(d) <= tol for d in diffs):
        trend = Trend.FLAT
    elif all(d >= -tol for d in diffs):
        trend = Trend.INCREASING
    elif all(d <= tol for d in diffs):
        trend = Trend.DECREASING
    else:
        trend = Trend.OSCILLATING

    return ExponentEstimate(
        value=value,
        terms=terms,
        tail_fraction=tail_fraction,
        window_ratios=tuple(samples),
        trend=trend,
    )


# ---------------------------------------------------------------------------
# decay policy over finite ratio series
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DecayPolicy:
    """What finite evidence counts as a vanishing ratio series.

    A series r_1, ..., r_m over checkpoints x_1 < ... < x_m (at margin
    delta) *decays* when its final window (the last `window_fraction` of
    points, at least `min_window`) is nonincreasing up to `rel_tol`, and
    either the last value is below `drop_factor * r_1` or the fitted
    log-log slope over the window is at most `-rate_fraction * delta`.
    It *grows* when the final window is nondecreasing with a strictly
    positive net change.
    """

    drop_factor: float = 0.1
    rate_fraction: float = 0.5
    window_fraction: float = 1 / 3
    min_window: int = 3
    rel_tol: float = 1e-9

    def window(self, m: int) -> int:
        return min(m, max(self.min_window, math.ceil(m * self.window_fraction)))

    def describe(self) -> str:
        return (
            f"decay = nonincreasing final window and (drop below "
            f"{self.drop_factor:g} x start or log-log rate >= "
            f"{self.rate_fraction:g} x delta)"
        )

    def series_decays(self, xs: list[int], ratios: list[float], delta: float) -> bool:
        m = len(ratios)
        w = self.window(m)
        win = ratios[m - w :]
        wxs = xs[m - w :]
        if any(
            b > a_ * (1 + self.rel_tol) + 1e-300 for a_, b in zip(win, win[1:])
        ):
            return False
        if win[-1] == 0.0:
            return True
        if ratios[0] > 0 and win[-1] <= self.drop_factor * ratios[0]:
            return True
        if win[0] <= 0:
            return False
        rate = (math.log(win[0]) - math.log(win[-1])) / (
            math.log(wxs[-1]) - math.log(wxs[0])
        )
        return rate >= self.rate_fraction * delta

    def series_grows(self, xs: list[int], ratios: list[float]) -> bool:
        m = len(ratios)
        w = self.window(m)
        win = ratios[m - w :]
        if any(b < a_ * (1 - self.rel_tol) for a_, b in zip(win, win[1:])):
            return False
        return win[-1] > win[0] * (1 + self.rel_tol)


# ---------------------------------------------------------------------------
# verdict objects
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EvidenceRow:
    delta: float
    x: int
    count: int
    ratio: float


@dataclass(frozen=True)
class IdealVerdict:
    set_label: str
    ideal: Ideal
    q: float
    verdict: Verdict
    delta_used: float | None
    evidence: tuple[EvidenceRow, ...]
    notes: tuple[str, ...] = field(default_factory=tuple)

    def to_records(self) -> list[dict]:
        return [
            {
                "set": self.set_label,
                "ideal": self.ideal.value,
                "q": self.q,
                "delta": row.delta,
                "x": row.x,
                "count": row.count,
                "ratio": row.ratio,
                "verdict": self.verdict.value,
            }
            for row in self.evidence
        ]


@dataclass(frozen=True)
class ChainReport:
    set_label: str
    q_grid: tuple[float, ...]
    verdicts: tuple[IdealVerdict, ...]
    monotone: bool


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------


def _valid_checkpoints(checkpoints: Checkpoints | None, default_cap: int) -> Checkpoints:
    cp = checkpoints or Checkpoints.default(default_cap)
    if len(cp.values) < 3:
        raise InvalidArgumentError("need at least 3 checkpoints")
    if cp.decades() < 3:
        raise InvalidArgumentError(
            f"checkpoints span {cp.decades():.2f} decades; need at least 3 "
            "for a meaningful decay verdict"
        )
    return cp


def _counts_at(a: IntegerSet, cp: Checkpoints) -> list[int]:
    return [a.count(x) for x in cp.values]


def _leq_deltas(q: float, deltas: tuple[float, ...] | None) -> tuple[float, ...]:
    if deltas is None:
        deltas = tuple(d for d in DEFAULT_DELTAS if q + d <= 1)
        if not deltas:
            deltas = (1 - q,) if q < 1 else (0.02,)
    if not deltas:
        raise InvalidArgumentError("delta grid must not be empty")
    for d in deltas:
        if d <= 0:
            raise InvalidArgumentError(f"delta must be positive, got {d}")
        if q + d > 1:
            raise InvalidArgumentError(
                f"q + delta must stay at most 1; got q={q}, delta={d}"
            )
    return tuple(deltas)


def _less_deltas(q: float, deltas: tuple[float, ...] | None) -> tuple[float, ...]:
    if deltas is None:
        deltas = tuple(d for d in DEFAULT_DELTAS if d < q)
        if not deltas:
            deltas = (q / 2,)
    if not deltas:
        raise InvalidArgumentError("delta grid must not be empty")
    for d in deltas:
        if not 0 < d < q:
            raise InvalidArgumentError(
                f"delta for a below-q verdict must lie in (0, q); got {d} at q={q}"
            )
    return tuple(deltas)


def classify_rows_leq(
    set_label: str,
    q: float,
    xs: list[int],
    counts: list[int],
    deltas: tuple[float, ...],
    policy: DecayPolicy,
) -> IdealVerdict:
    """Verdict for "exponent at most q" from precomputed counts."""
    evidence: list[EvidenceRow] = []
    all_decay = True
    any_grow = False
    for d in deltas:
        ratios = [c / x ** (q + d) for x, c in zip(xs, counts)]
        evidence.extend(
            EvidenceRow(d, x, c, r) for x, c, r in zip(xs, counts, ratios)
        )
        if not policy.series_decays(xs, ratios, d):
            all_decay = False
            if policy.series_grows(xs, ratios):
                any_grow = True
    if all_decay:
        verdict = Verdict.CONSISTENT
    elif any_grow:
        verdict = Verdict.INCONSISTENT
    else:
        verdict = Verdict.INDETERMINATE
    return IdealVerdict(
        set_label=set_label,
        ideal=Ideal.AT_MOST,
        q=q,
        verdict=verdict,
        delta_used=None,
        evidence=tuple(evidence),
        notes=(policy.describe(),),
    )


def classify_rows_less(
    set_label: str,
    q: float,
    xs: list[int],
    counts: list[int],
    deltas: tuple[float, ...],
    policy: DecayPolicy,
) -> IdealVerdict:
    """Verdict for "exponent below q" from precomputed counts."""
    evidence: list[EvidenceRow] = []
    witness: float | None = None
    grow_delta: float | None = None
    for d in deltas:
        ratios = [c / x ** (q - d) for x, c in zip(xs, counts)]
        evidence.extend(
            EvidenceRow(d, x, c, r) for x, c, r in zip(xs, counts, ratios)
        )
        if witness is None and policy.series_decays(xs, ratios, d):
            witness = d
        if policy.series_grows(xs, ratios):
            if grow_delta is None or d < grow_delta:
                grow_delta = d
    if witness is not None:
        verdict = Verdict.CONSISTENT
    elif grow_delta is not None:
        verdict = Verdict.INCONSISTENT
    else:
        verdict = Verdict.INDETERMINATE
    return IdealVerdict(
        set_label=set_label,
        ideal=Ideal.BELOW,
        q=q,
        verdict=verdict,
        delta_used=witness,
        evidence=tuple(evidence),
        notes=(policy.describe(),),
    )


def classify_leq(
    a: IntegerSet,
    q: float,
    deltas: tuple[float, ...] | None = None,
    checkpoints: Checkpoints | None = None,
    policy: DecayPolicy | None = None,
) -> IdealVerdict:
    """Is the evidence consistent with exponent(A) <= q?

    Tests A(x) / x**(q + delta) for every delta in the grid; consistent only
    when every series decays under the policy.
    """
    if not 0 <= q < 1:
        raise InvalidArgumentError(f"q must be in [0, 1) for an at-most verdict, got {q}")
    deltas = _leq_deltas(q, deltas)
    cp = _valid_checkpoints(checkpoints, 10**7)
    pol = policy or DecayPolicy()
    counts = _counts_at(a, cp)
    return classify_rows_leq(a.label, q, list(cp.values), counts, deltas, pol)


def classify_less(
    a: IntegerSet,
    q: float,
    deltas: tuple[float, ...] | None = None,
    checkpoints: Checkpoints | None = None,
    policy: DecayPolicy | None = None,
) -> IdealVerdict:
    """Is the evidence consistent with exponent(A) < q?

    Searches the delta grid in order for a witness margin whose series
    A(x) / x**(q - delta) decays; the first witness is recorded.
    """
    if not 0 < q <= 1:
        raise InvalidArgumentError(f"q must be in (0, 1] for a below verdict, got {q}")
    deltas = _less_deltas(q, deltas)
    cp = _valid_checkpoints(checkpoints, 10**7)
    pol = policy or DecayPolicy()
    counts = _counts_at(a, cp)
    return classify_rows_less(a.label, q, list(cp.values), counts, deltas, pol)


def partial_sum_probe(
    a: IntegerSet, q: float, checkpoints: Checkpoints | None = None
) -> list[tuple[int, float]]:
    """Running partial sums of a**(-q) reported at each checkpoint.

    A visibly stalling sum suggests convergence (exponent below q); steady
    growth suggests divergence.  This is a probe, not a verdict.
    """
    if not 0 < q <= 1:
        raise InvalidArgumentError(f"series exponent must be in (0, 1], got {q}")
    cp = checkpoints or Checkpoints.default(10**7)
    out: list[tuple[int, float]] = []
    total = 0.0
    it = iter(a)
    pending = next(it, None)
    for x in cp.values:
        while pending is not None and pending <= x:
            total += pending ** (-q)
            pending = next(it, None)
        out.append((x, total))
    return out


def chain_report(
    a: IntegerSet,
    q_grid: tuple[float, ...],
    checkpoints: Checkpoints | None = None,
    policy: DecayPolicy | None = None,
) -> ChainReport:
    """at-most verdicts along an increasing q grid, with a monotonicity check.

    Consistency at q must persist at every larger q; `monotone` is False
    when a consistent verdict is followed by an inconsistent one (which
    would indicate contradictory evidence, not a property of the set).
    """
    if any(b <= a_ for a_, b in zip(q_grid, q_grid[1:])):
        raise InvalidArgumentError("q grid must be strictly increasing")
    if any(not 0 <= q < 1 for q in q_grid):
        raise InvalidArgumentError("q grid values must lie in [0, 1)")
    cp = _valid_checkpoints(checkpoints, 10**7)
    pol = policy or DecayPolicy()
    counts = _counts_at(a, cp)
    verdicts = [
        classify_rows_leq(a.label, q, list(cp.values), counts, _leq_deltas(q, None), pol)
        for q in q_grid
    ]
    seen_consistent = False
    monotone = True
    for v in verdicts:
        if v.verdict is Verdict.CONSISTENT:
            seen_consistent = True
        elif v.verdict is Verdict.INCONSISTENT and seen_consistent:
            monotone = False
    return ChainReport(
        set_label=a.label,
        q_grid=tuple(q_grid),
        verdicts=tuple(verdicts),
        monotone=monotone,
    )
