"""Complete-monotonicity tests, support classification, and p.g.f. bounds.

A sequence is completely monotone when every iterated forward decrement
stays non-negative; for tails of a count variable this is exactly the
decreasing-failure-rate property, and for a mixing distribution it is
equivalent to the support sitting inside (0, 1]. The helpers here make
those statements checkable: difference tables (exact for rational input),
interval masses, and the two-sided geometric bounds on the mixture p.g.f.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ValidationError
from .measures import (
    MixingDistribution,
    Num,
    identity,
    integrate,
    is_exact,
    jsonable,
    mass_on,
    parse_number,
    reciprocal,
    render,
)
from .pgf_core import TailSequence, pgf_eval, tail_violation

VERDICT_NOT_PGF = "not_pgf_mass_at_or_beyond_2"
VERDICT_UNIT_SUPPORT = "sdfr_support_in_unit"
VERDICT_CANDIDATE = "candidate_mass_in_1_2"


def _values(u) -> tuple[Num, ...]:
    if isinstance(u, TailSequence):
        return u.values
    return tuple(u)


@dataclass(frozen=True)
class DifferenceTable:
    """Iterated forward decrements: row j applies u_k - u_{k+1} j times.

    Row j has len(u) - j entries; entry (j, k) is non-negative for every j
    and k exactly when u is completely monotone up to order J.
    """

    entries: tuple[tuple[Num, ...], ...]
    exact: bool

    @property
    def J(self) -> int:
        return len(self.entries) - 1

    def value(self, j: int, k: int) -> Num:
        return self.entries[j][k]

    def to_csv(self) -> str:
        width = len(self.entries[0])
        lines = ["j," + ",".join(f"k={k}" for k in range(width))]
        for j, row in enumerate(self.entries):
            cells = [render(v) for v in row] + [""] * (width - len(row))
            lines.append(f"{j}," + ",".join(cells))
        return "\n".join(lines) + "\n"

    def to_json_dict(self) -> dict:
        return {
            "J": self.J,
            "exact": self.exact,
            "rows": [[jsonable(v) for v in row] for row in self.entries],
        }


def difference_table(u, J: int) -> DifferenceTable:
    """Build rows 0..J of iterated decrements of u."""
    vals = _values(u)
    if not isinstance(J, int) or isinstance(J, bool) or J < 0:
        raise ValidationError(f"order {J!r} must be a non-negative integer")
    if len(vals) < J + 1:
        raise ValidationError(
            f"need at least J+1 = {J + 1} entries to difference {J} times, have {len(vals)}"
        )
    rows = [tuple(vals)]
    for _ in range(J):
        prev = rows[-1]
        rows.append(tuple(prev[k] - prev[k + 1] for k in range(len(prev) - 1)))
    return DifferenceTable(tuple(rows), all(is_exact(v) for v in vals))


def is_completely_monotone(u, J: int, tol: float = 0) -> tuple[bool, tuple[int, int] | None]:
    """Check all iterated decrements up to order J against -tol.

    Returns (verdict, first_violation) where the violation is the
    lexicographically first (j, k) with a decrement below -tol, or None.
    Use tol=0 for exact input; for float input pass a small tolerance to
    absorb cancellation noise in the higher rows.
    """
    if tol < 0:
        raise ValidationError(f"tolerance {tol} must be non-negative")
    table = difference_table(u, J)
    for j, row in enumerate(table.entries):
        for k, v in enumerate(row):
            if v < -tol:
                return False, (j, k)
    return True, None


def tail_validity(u) -> tuple[bool, str | None]:
    """Whether u is a genuine tail sequence of a positive count."""
    reason = tail_violation(_values(u))
    return reason is None, reason


@dataclass(frozen=True)
class SupportClassification:
    """Where the mass of a mixing distribution sits, and what that implies."""

    verdict: str
    m01: Num
    m12: Num
    m2: Num

    def to_json_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "masses": {"m01": jsonable(self.m01), "m12": jsonable(self.m12), "m2": jsonable(self.m2)},
        }


def classify_support(q: MixingDistribution) -> SupportClassification:
    """Split the mass of q at 1 and 2 and name the resulting regime.

    Mass at or beyond 2 rules the mixture out as a p.g.f. outright; support
    inside (0, 1] makes the tails completely monotone; mass strictly
    between 1 and 2 is the undecided middle ground where the mixture may or
    may not be a p.g.f.
    """
    m01 = mass_on(q, 0, 1, include_hi=True)
    m12 = mass_on(q, 1, 2)
    m2 = mass_on(q, 2, math.inf, include_lo=True)
    if m2 > 0:
        verdict = VERDICT_NOT_PGF
    elif m12 == 0:
        verdict = VERDICT_UNIT_SUPPORT
    else:
        verdict = VERDICT_CANDIDATE
    return SupportClassification(verdict, m01, m12, m2)


def expected_shocks(q: MixingDistribution, tol: float = 1e-10) -> Num:
    """Mean count E[1/Y] under q, math.inf when the integral diverges."""
    return integrate(q, reciprocal(), tol)


@dataclass(frozen=True)
class PgfBounds:
    """Two-sided geometric bounds around the mixture value at one point.

    ``upper_is_geometric`` records whether the upper curve is itself a
    first-success p.g.f., which requires the mean resistance to stay at or
    below one.
    """

    z: Num
    lower: Num
    phi: Num
    upper: Num
    upper_is_geometric: bool
    mean_y: Num
    mean_shocks: Num

    def to_json_dict(self) -> dict:
        return {
            "z": jsonable(self.z),
            "lower": jsonable(self.lower),
            "phi": jsonable(self.phi),
            "upper": jsonable(self.upper),
            "upper_is_geometric": self.upper_is_geometric,
            "mean_y": jsonable(self.mean_y),
            "mean_shocks": jsonable(self.mean_shocks),
        }


def pgf_bounds(q: MixingDistribution, z, tol: float = 1e-10) -> PgfBounds:
    """Pinch phi(z) between the two geometric-type curves it always respects.

    The kernel is concave in y, so the mean resistance gives an upper
    bound; it is convex in 1/y, so the mean shock count gives a lower
    bound (zero when that mean diverges). Both are tight together exactly
    for a point mass at 1.
    """
    z = parse_number(z)
    if not 0 < z < 1:
        raise ValidationError(f"evaluation point z={z} outside (0, 1)")
    mean_y = integrate(q, identity(), tol)
    mean_shocks = expected_shocks(q, tol)
    phi = pgf_eval(q, z, tol)
    upper = z * mean_y / (1 - z + z * mean_y)
    lower = 0.0 if mean_shocks == math.inf else z / (z + (1 - z) * mean_shocks)
    return PgfBounds(z, lower, phi, upper, bool(mean_y <= 1), mean_y, mean_shocks)


@dataclass(frozen=True)
class LaplaceOrderBounds:
    """Transform-order bounds at a single frequency s."""

    s: Num
    lam: Num
    lower: Num
    value: Num
    upper: Num
    upper_is_exponential: bool

    def to_json_dict(self) -> dict:
        return {
            "s": jsonable(self.s),
            "lam": jsonable(self.lam),
            "lower": jsonable(self.lower),
            "value": jsonable(self.value),
            "upper": jsonable(self.upper),
            "upper_is_exponential": self.upper_is_exponential,
        }


def laplace_order_bounds(q: MixingDistribution, lam, s, tol: float = 1e-10) -> LaplaceOrderBounds:
    """Bounds on the failure-time transform via the substitution z = lam/(lam+s).

    The same two-sided pinch as ``pgf_bounds``, read on the transform
    scale; the upper curve is the transform of an exponential time exactly
    when the mean resistance is at most one.
    """
    lam = parse_number(lam)
    s = parse_number(s)
    if lam <= 0:
        raise ValidationError(f"arrival rate lam={lam} must be positive")
    if s <= 0:
        raise ValidationError(f"frequency s={s} must be positive")
    b = pgf_bounds(q, lam / (lam + s), tol)
    return LaplaceOrderBounds(s, lam, b.lower, b.phi, b.upper, b.upper_is_geometric)
