"""Mixture probability generating functions and shock-resistance tails.

The central object is the mixture

    phi(z) = integral of z*y / (1 - z + z*y) against Q(dy),

the p.g.f. of a first-success count when the success chance y is itself
random, provided Q makes the integral a genuine p.g.f. The tail sequence of
the associated shock-resistance process is the moment sequence of 1 - y
under Q, and everything here is computed exactly for rational Q.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import ValidationError
from .measures import (
    MASS_TOL,
    MixingDistribution,
    Num,
    Segment,
    integrate,
    is_exact,
    jsonable,
    parse_number,
    pgf_kernel,
    power_of_a,
    render,
)


def kernel(y, z) -> Num:
    """The mixing kernel z*y / (1 - z + z*y).

    In y it increases from 0 through the fixed point at y = 1 (value z) and
    saturates at 1; exact when both arguments are exact.
    """
    y = parse_number(y)
    z = parse_number(z)
    if y < 0:
        raise ValidationError(f"kernel argument y={y} is negative")
    if not 0 < z <= 1:
        raise ValidationError(f"kernel argument z={z} outside (0, 1]")
    if y == 0:
        return Fraction(0) if is_exact(y) and is_exact(z) else 0.0
    return z * y / (1 - z + z * y)


def pgf_eval(q: MixingDistribution, z, tol: float = 1e-10) -> Num:
    """Candidate p.g.f. value phi(z): the kernel integrated against q.

    Float results are clamped to [0, 1]; exact results are returned as is.
    """
    z = parse_number(z)
    if not 0 < z < 1:
        raise ValidationError(f"evaluation point z={z} outside (0, 1)")
    val = integrate(q, pgf_kernel(z), tol)
    if not is_exact(val):
        val = min(max(val, 0.0), 1.0)
    return val


def resistance_gf(q: MixingDistribution, z, tol: float = 1e-10) -> Num:
    """Generating function of the tail sequence, (1 - phi(z)) / (1 - z)."""
    z = parse_number(z)
    if not 0 < z < 1:
        raise ValidationError(f"evaluation point z={z} outside (0, 1)")
    return (1 - pgf_eval(q, z, tol)) / (1 - z)


def _sequence_entries(values) -> list[dict]:
    return [
        {"k": k, "value": jsonable(v), "decimal": float(v)} for k, v in enumerate(values)
    ]


def _sequence_csv(values) -> str:
    lines = ["k,value,decimal"]
    lines += [f"{k},{render(v)},{float(v)!r}" for k, v in enumerate(values)]
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class TailSequence:
    """Tails u_k = P(count > k), k = 0..K; exact means every entry is rational."""

    values: tuple[Num, ...]
    exact: bool

    @classmethod
    def from_values(cls, values) -> "TailSequence":
        vals = tuple(values)
        if not vals:
            raise ValidationError("tail sequence must have at least one entry")
        return cls(vals, all(is_exact(v) for v in vals))

    @property
    def K(self) -> int:
        return len(self.values) - 1

    def to_json_dict(self) -> dict:
        return {"K": self.K, "exact": self.exact, "entries": _sequence_entries(self.values)}

    def to_csv(self) -> str:
        return _sequence_csv(self.values)


@dataclass(frozen=True)
class PmfSequence:
    """Probability masses q_0..q_N of a count variable.

    ``tail_ratio`` declares a geometric continuation beyond the stored
    range: q_{N+j} = q_N * tail_ratio**j. Leave it None for a genuinely
    truncated sequence.
    """

    values: tuple[Num, ...]
    exact: bool
    tail_ratio: Num | None = None

    @classmethod
    def from_values(cls, values, tail_ratio=None) -> "PmfSequence":
        vals = tuple(values)
        if not vals:
            raise ValidationError("pmf must have at least one entry")
        for n, v in enumerate(vals):
            if v < 0:
                raise ValidationError(f"pmf entry q_{n} = {v} is negative")
        if tail_ratio is not None:
            tail_ratio = parse_number(tail_ratio)
            if not 0 < tail_ratio < 1:
                raise ValidationError(f"tail ratio {tail_ratio} outside (0, 1)")
        total = sum(vals)
        if tail_ratio is not None and vals[-1] > 0:
            total = total + vals[-1] * tail_ratio / (1 - tail_ratio)
        exact = all(is_exact(v) for v in vals) and (tail_ratio is None or is_exact(tail_ratio))
        if exact:
            if total > 1:
                raise ValidationError(f"pmf mass {total} exceeds 1")
        elif total > 1 + MASS_TOL:
            raise ValidationError(f"pmf mass {float(total)!r} exceeds 1")
        return cls(vals, exact, tail_ratio)

    @property
    def N(self) -> int:
        return len(self.values) - 1

    def to_json_dict(self) -> dict:
        doc = {"N": self.N, "exact": self.exact, "entries": _sequence_entries(self.values)}
        doc["tail_ratio"] = None if self.tail_ratio is None else jsonable(self.tail_ratio)
        return doc

    def to_csv(self) -> str:
        return _sequence_csv(self.values)


def tail_violation(values) -> str | None:
    """Why the sequence fails to be the tail of a positive count, or None.

    A valid tail starts at 1, never increases, and stays non-negative.
    """
    vals = tuple(values)
    if not vals:
        return "sequence is empty"
    if vals[0] != 1:
        return f"entry k=0 is {float(vals[0])!r}, expected 1"
    for k, v in enumerate(vals):
        if v < 0:
            return f"entry k={k} is negative ({float(v)!r})"
    for k in range(len(vals) - 1):
        if vals[k + 1] > vals[k]:
            return f"sequence increases from k={k} to k={k + 1}"
    return None


def tail_sequence(q: MixingDistribution, K: int) -> TailSequence:
    """Shock-resistance tails: entry k integrates (1 - y)**k against q.

    The moment formula is applied to whatever support q has; use
    ``tail_violation`` or the analysis helpers to decide whether the result
    is a genuine tail sequence.
    """
    if not isinstance(K, int) or isinstance(K, bool) or K < 0:
        raise ValidationError(f"truncation order {K!r} must be a non-negative integer")
    return TailSequence.from_values(integrate(q, power_of_a(k)) for k in range(K + 1))


def pmf_from_tail(t: TailSequence) -> PmfSequence:
    """Differences of a valid tail sequence: q_n = u_{n-1} - u_n, q_0 = 1 - u_0."""
    reason = tail_violation(t.values)
    if reason is not None:
        raise ValidationError(f"not a valid tail sequence: {reason}")
    vals = [1 - t.values[0]]
    vals += [t.values[n - 1] - t.values[n] for n in range(1, len(t.values))]
    return PmfSequence.from_values(vals)


def geometric_pmf(success, K: int = 16) -> PmfSequence:
    """Pmf of the number of failures before a first success.

    Stores q_n = p * (1-p)**n for n = 0..K and declares the geometric
    continuation, so downstream series against it can be summed in closed
    form.
    """
    p = parse_number(success)
    if not 0 < p <= 1:
        raise ValidationError(f"success chance {p} outside (0, 1]")
    if not isinstance(K, int) or K < 0:
        raise ValidationError(f"truncation order {K!r} must be a non-negative integer")
    r = 1 - p
    vals = [p * r**n for n in range(K + 1)]
    return PmfSequence.from_values(vals, tail_ratio=r if r > 0 else None)


def lemma22_coefficients(q: PmfSequence, K: int, max_tail_mass: float = 1e-9) -> list[Num]:
    """Coefficients c_k of E[(1 - z)**N] = sum_k c_k z**k for the pmf q.

    c_k = (-1)**k * sum_{n >= k} C(n, k) q_n. Terms beyond the stored range
    are summed in closed form when the pmf declares a geometric tail ratio;
    otherwise the undeclared tail mass must stay below max_tail_mass, since
    the binomial weights blow small omissions up.
    """
    if not isinstance(q, PmfSequence):
        raise ValidationError("q must be a PmfSequence")
    if not isinstance(K, int) or isinstance(K, bool) or K < 0:
        raise ValidationError(f"order {K!r} must be a non-negative integer")
    N = q.N
    x = q.tail_ratio
    if x is None or q.values[-1] == 0:
        residual = 1 - sum(q.values)
        if x is None and residual > max_tail_mass:
            raise ValidationError(
                f"pmf leaves mass {float(residual):.3g} beyond n={N} with no declared "
                f"tail ratio; the alternating sums need tail mass below {max_tail_mass:.3g}"
            )
        x = None
    out: list[Num] = []
    for k in range(K + 1):
        inner: Num = sum(math.comb(n, k) * q.values[n] for n in range(k, N + 1))
        if x is not None:
            # closed form of sum_{n >= k} C(n, k) x**n, minus the part already counted
            amp = q.values[N] / x**N
            whole = x**k / (1 - x) ** (k + 1)
            counted = sum(math.comb(n, k) * x**n for n in range(k, N + 1))
            inner += amp * (whole - counted)
        out.append((-1) ** k * inner)
    return out


@dataclass(frozen=True)
class CounterexampleParams:
    """Two parameters of the piecewise-constant family used as a stress case.

    alpha sets the width of the overshoot segment past 1, beta its mass.
    Both must be rational so the family's closed forms stay exact.
    """

    alpha: Fraction
    beta: Fraction

    def __post_init__(self) -> None:
        for name, v in (("alpha", self.alpha), ("beta", self.beta)):
            if not isinstance(v, Fraction):
                raise ValidationError(f"{name} must be a Fraction, got {type(v).__name__}")
            if not 0 < v < 1:
                raise ValidationError(f"{name}={v} outside (0, 1)")

    @property
    def admissible(self) -> bool:
        """Sufficient condition for the tails to be monotone at every order."""
        return self.beta >= Fraction(1, 3) and self.alpha < Fraction(2, 7)


def counterexample_params(alpha, beta) -> CounterexampleParams:
    """Parse and validate family parameters; rational inputs only."""
    a = parse_number(alpha)
    b = parse_number(beta)
    if not is_exact(a) or not is_exact(b):
        raise ValidationError("alpha and beta must be rational, e.g. '1/7'")
    return CounterexampleParams(Fraction(a), Fraction(b))


def counterexample_Q(p: CounterexampleParams) -> MixingDistribution:
    """The stress-case mixing law: density 1 - beta on [0, 1), beta/alpha on [1, 1 + alpha)."""
    return MixingDistribution(
        segments=(
            Segment(Fraction(0), Fraction(1), 1 - p.beta),
            Segment(Fraction(1), 1 + p.alpha, p.beta / p.alpha),
        )
    )


def counterexample_tail(p: CounterexampleParams, k: int) -> Fraction:
    """Closed-form tail entry ((1 - beta) + (-1)**k * beta * alpha**k) / (k + 1)."""
    if not isinstance(k, int) or isinstance(k, bool) or k < 0:
        raise ValidationError(f"index {k!r} must be a non-negative integer")
    return (1 - p.beta + (-1) ** k * p.beta * p.alpha**k) / (k + 1)


def counterexample_tail_sequence(p: CounterexampleParams, K: int) -> TailSequence:
    if not isinstance(K, int) or isinstance(K, bool) or K < 0:
        raise ValidationError(f"truncation order {K!r} must be a non-negative integer")
    return TailSequence.from_values(counterexample_tail(p, k) for k in range(K + 1))


@dataclass(frozen=True)
class MonotonicityCheck:
    """Outcome of the exact no-increase test between entries 2n+1 and 2n+2."""

    n: int
    lhs: Fraction
    rhs: Fraction
    holds: bool


def monotonicity_condition(p: CounterexampleParams, n: int) -> MonotonicityCheck:
    """Exact test that the family tail does not increase from 2n+1 to 2n+2.

    The comparison is beta * alpha**(2n+1) * (2n(1+alpha) + 3 + 2*alpha)
    against 1 - beta; lhs <= rhs is equivalent to the tail step being
    monotone at that odd index.
    """
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise ValidationError(f"index {n!r} must be a non-negative integer")
    lhs = p.beta * p.alpha ** (2 * n + 1) * (2 * n * (1 + p.alpha) + 3 + 2 * p.alpha)
    rhs = 1 - p.beta
    return MonotonicityCheck(n=n, lhs=lhs, rhs=rhs, holds=lhs <= rhs)
