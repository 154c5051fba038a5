"""Poisson shock-count survival, transforms, and Monte Carlo checks.

A device absorbs shocks from a Poisson stream of rate lam and survives the
first k of them with probability u_k, the tail sequence of the failing
shock index J. Conditioning on the number of arrivals by time t gives

    S(t) = sum_k u_k * exp(-lam*t) * (lam*t)**k / k!

and the failure time is the sum of J exponential gaps, which is what the
simulator draws. When the resistance mixture lives on (0, 1] the same
survival function is a mixture of exponentials in disguise; the rate
mixture helpers expose that equivalence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NumericError, ValidationError
from .measures import (
    Atom,
    MASS_TOL,
    MixingDistribution,
    Num,
    Segment,
    exp_decay,
    integrate,
    is_exact,
    mass_on,
    parse_number,
    sample_locations,
)
from .pgf_core import TailSequence, pgf_eval, tail_sequence, tail_violation
from .sdfr_analysis import is_completely_monotone

_BLOCK = 1 << 14
_KEY_MASK = (1 << 64) - 1


@dataclass(frozen=True)
class ShockModelParams:
    """Arrival rate plus numeric knobs for the survival series.

    series_tol bounds the Poisson mass discarded by truncation; tails are
    at most one, so it also bounds the absolute series error. time_grid is
    the default evaluation grid for reports and simulations.
    """

    lam: Num
    series_tol: float = 1e-12
    time_grid: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        lam = parse_number(self.lam)
        object.__setattr__(self, "lam", lam)
        if lam <= 0:
            raise ValidationError(f"arrival rate lam={lam} must be positive")
        if not 0 < self.series_tol < 1:
            raise ValidationError(f"series_tol={self.series_tol} outside (0, 1)")
        grid = tuple(float(t) for t in self.time_grid)
        object.__setattr__(self, "time_grid", grid)
        if any(t < 0 for t in grid):
            raise ValidationError("time grid entries must be non-negative")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ValidationError("time grid must be strictly increasing")


def poisson_truncation_order(mu: float, tol: float) -> int:
    """Smallest K whose Poisson(mu) mass beyond K is below tol.

    Uses the Chernoff bound P(X >= m) <= exp(-mu) * (e*mu/m)**m, valid for
    m > mu, so the returned order is conservative.
    """
    if mu < 0:
        raise ValidationError(f"mean mu={mu} must be non-negative")
    if not 0 < tol < 1:
        raise ValidationError(f"tol={tol} outside (0, 1)")
    if mu == 0:
        return 0
    log_tol = math.log(tol)
    k = max(1, math.ceil(mu))
    while True:
        m = k + 1
        if m > mu and (-mu + m - m * math.log(m / mu)) < log_tol:
            return k
        k += 1


def survival(t_seq: TailSequence, params: ShockModelParams, t) -> float:
    """Shock-model survival at time t, by the Poisson-weighted tail series.

    The series is truncated once the remaining Poisson mass drops below
    params.series_tol; raises if the stored tails do not reach that far.
    """
    t = float(t)
    if t < 0:
        raise ValidationError(f"time t={t} must be non-negative")
    reason = tail_violation(t_seq.values)
    if reason is not None:
        raise ValidationError(f"not a valid tail sequence: {reason}")
    mu = float(params.lam) * t
    if mu == 0:
        return 1.0
    K = poisson_truncation_order(mu, params.series_tol)
    if K > t_seq.K:
        raise ValidationError(
            f"tail sequence too short: series at t={t} needs order {K}, have {t_seq.K}"
        )
    w = math.exp(-mu)
    acc = 0.0
    for k in range(K + 1):
        if k:
            w *= mu / k
        acc += float(t_seq.values[k]) * w
    return min(max(acc, 0.0), 1.0)


def laplace(q: MixingDistribution, lam, s, tol: float = 1e-10) -> Num:
    """Failure-time transform E[exp(-s*T)], read off the p.g.f. at lam/(lam+s)."""
    lam = parse_number(lam)
    s = parse_number(s)
    if lam <= 0:
        raise ValidationError(f"arrival rate lam={lam} must be positive")
    if s <= 0:
        raise ValidationError(f"frequency s={s} must be positive")
    return pgf_eval(q, lam / (lam + s), tol)


def rate_mixture(q: MixingDistribution, lam) -> MixingDistribution:
    """Push q through y -> lam*y, giving the exponential-rate mixture.

    For q supported in (0, 1] the shock model's failure time is exactly an
    exponential with this random rate.
    """
    lam = parse_number(lam)
    if lam <= 0:
        raise ValidationError(f"arrival rate lam={lam} must be positive")
    atoms = tuple(Atom(lam * a.y, a.p) for a in q.atoms)
    segments = tuple(Segment(lam * s.lo, lam * s.hi, s.density / lam) for s in q.segments)
    return MixingDistribution(atoms, segments)


def exp_mixture_survival(g: MixingDistribution, t, tol: float = 1e-10) -> Num:
    """Survival of an exponential mixture with random rate drawn from g."""
    t = parse_number(t)
    if t < 0:
        raise ValidationError(f"time t={t} must be non-negative")
    val = integrate(g, exp_decay(t), tol)
    if not is_exact(val):
        val = min(max(val, 0.0), 1.0)
    return val


def sdfr_skeleton_check(t_seq: TailSequence, params: ShockModelParams, delta, J: int,
                        n_points: int = 40, tol: float | None = None):
    """Complete monotonicity of the survival skeleton S(0), S(delta), S(2*delta), ...

    Restricting a completely monotone function to an arithmetic grid gives
    a completely monotone sequence, so this checks a necessary face of the
    continuous-time property at any grid resolution. Returns the same
    (verdict, first_violation) pair as ``is_completely_monotone``; tol
    defaults to 1e-9 times the largest skeleton value.
    """
    delta = float(delta)
    if delta <= 0:
        raise ValidationError(f"grid step delta={delta} must be positive")
    if not isinstance(J, int) or isinstance(J, bool) or J < 1:
        raise ValidationError(f"order J={J!r} must be a positive integer")
    if n_points < J + 1:
        raise ValidationError(f"need n_points >= J+1 = {J + 1}, have {n_points}")
    u = [survival(t_seq, params, n * delta) for n in range(n_points)]
    if tol is None:
        tol = 1e-9 * max(abs(x) for x in u)
    return is_completely_monotone(u, J, tol)


def _stream(seed: int, index: int) -> np.random.Generator:
    key = np.array([seed & _KEY_MASK, index & _KEY_MASK], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def _blocks(n: int):
    b = 0
    start = 0
    while start < n:
        count = min(_BLOCK, n - start)
        yield b, start, count
        b += 1
        start += count


def _invert_tail(tail: np.ndarray, u: np.ndarray, model: str, ratio: float | None) -> np.ndarray:
    """Map uniforms to failing-shock indices by inverting P(J > k) = tail[k].

    Draws landing beyond the stored range follow the declared continuation
    model; "none" assigns them the first untabulated index, which is why it
    demands negligible leftover mass.
    """
    K = len(tail) - 1
    j = np.empty(len(u), dtype=np.int64)
    body = u > tail[K]
    asc = tail[::-1]
    idx = np.searchsorted(asc, u[body], side="left")
    j[body] = K + 1 - idx
    rest = ~body
    if not np.any(rest):
        return j
    if model == "none":
        j[rest] = K + 1
        return j
    cond = u[rest] / tail[K]
    if model == "harmonic":
        j[rest] = np.floor((K + 1) / cond).astype(np.int64)
        return j
    steps = np.ceil(np.log(cond) / math.log(ratio))
    j[rest] = K + np.maximum(steps.astype(np.int64), 1)
    return j


@dataclass(frozen=True)
class SimulatedSurvival:
    """Empirical shock-model survival on a time grid, with its exact counterpart."""

    times: tuple[float, ...]
    empirical: tuple[float, ...]
    std_err: tuple[float, ...]
    analytic: tuple[float, ...]
    n: int
    seed: int

    def to_csv(self) -> str:
        lines = ["t,empirical,std_err,analytic"]
        for t, e, se, a in zip(self.times, self.empirical, self.std_err, self.analytic):
            lines.append(f"{t!r},{e!r},{se!r},{a!r}")
        return "\n".join(lines) + "\n"

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "seed": self.seed,
            "rows": [
                {"t": t, "empirical": e, "std_err": se, "analytic": a}
                for t, e, se, a in zip(self.times, self.empirical, self.std_err, self.analytic)
            ],
        }


@dataclass(frozen=True)
class SimulatedPgf:
    """Empirical generating function of a simulated first-success count."""

    z: tuple[float, ...]
    empirical: tuple[float, ...]
    std_err: tuple[float, ...]
    analytic: tuple[float, ...]
    n: int
    seed: int

    def to_csv(self) -> str:
        lines = ["z,empirical,std_err,analytic"]
        for z, e, se, a in zip(self.z, self.empirical, self.std_err, self.analytic):
            lines.append(f"{z!r},{e!r},{se!r},{a!r}")
        return "\n".join(lines) + "\n"

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "seed": self.seed,
            "rows": [
                {"z": z, "empirical": e, "std_err": se, "analytic": a}
                for z, e, se, a in zip(self.z, self.empirical, self.std_err, self.analytic)
            ],
        }


def simulate_failure_times(q: MixingDistribution, params: ShockModelParams, n: int, seed: int,
                           tail_model: str = "none", K: int = 200,
                           max_truncation_mass: float = 1e-6) -> SimulatedSurvival:
    """Monte Carlo for the shock model against its analytic survival.

    Each replicate draws the failing shock index J by inverting the tail
    sequence of q, then the failure time as a gamma(J, 1/lam) variate.
    tail_model says how to continue the tails beyond order K: "geometric"
    (ratio matched at K), "harmonic" (1/(k+1) decay matched at K), or
    "none", which insists the leftover mass is below max_truncation_mass.

    Replicates are generated in fixed-size blocks, each from its own
    counter-based stream derived from (seed, block), so the output depends
    only on (q, params, n, seed) and extending n preserves a common prefix.
    """
    _check_sim_args(n, seed)
    if tail_model not in ("none", "geometric", "harmonic"):
        raise ValidationError(f"unknown tail model {tail_model!r}")
    if not params.time_grid:
        raise ValidationError("params.time_grid must be non-empty for a survival report")
    t_seq = tail_sequence(q, K)
    reason = tail_violation(t_seq.values)
    if reason is not None:
        raise ValidationError(f"not a valid tail sequence: {reason}")
    tail = np.array([float(v) for v in t_seq.values])
    leftover = tail[-1]
    ratio = None
    if tail_model == "none" and leftover > max_truncation_mass:
        raise NumericError(
            f"mass {leftover:.3g} survives beyond order K={K}, above the "
            f"{max_truncation_mass:.3g} cutoff; pass a tail_model or raise K"
        )
    if tail_model == "geometric" and leftover > 0:
        if len(tail) < 2 or not 0 < tail[-1] < tail[-2]:
            raise NumericError("geometric tail model needs a strictly decreasing positive tail at K")
        ratio = float(tail[-1] / tail[-2])
    lam = float(params.lam)
    times = np.empty(n)
    for b, start, count in _blocks(n):
        u = np.maximum(_stream(seed, 2 * b).random(count), 1e-300)
        j = _invert_tail(tail, u, tail_model, ratio)
        gaps = _stream(seed, 2 * b + 1).gamma(shape=j.astype(np.float64), scale=1.0 / lam)
        times[start:start + count] = gaps
    emp, se, ana = [], [], []
    for t in params.time_grid:
        p = float(np.mean(times > t))
        emp.append(p)
        se.append(math.sqrt(p * (1.0 - p) / n))
        ana.append(survival(t_seq, params, t))
    return SimulatedSurvival(params.time_grid, tuple(emp), tuple(se), tuple(ana), n, seed)


def simulate_de_finetti(q: MixingDistribution, z_grid, n: int, seed: int,
                        tol: float = 1e-10) -> SimulatedPgf:
    """Simulate the first-success count with success chance drawn from q.

    Requires q supported in (0, 1]. Each replicate draws y from q and then
    a geometric count with success chance y; the empirical mean of z**N is
    compared with the mixture p.g.f. Block structure and determinism match
    ``simulate_failure_times``.
    """
    _check_sim_args(n, seed)
    m = mass_on(q, 0, 1, include_hi=True)
    if (q.exact and m != 1) or abs(float(m) - 1.0) > MASS_TOL:
        raise ValidationError(f"support must sit inside (0, 1]; that region holds mass {m}")
    zs = []
    for z in z_grid:
        zv = parse_number(z)
        if not 0 < zv < 1:
            raise ValidationError(f"grid point z={zv} outside (0, 1)")
        zs.append(float(zv))
    if not zs:
        raise ValidationError("z grid must be non-empty")
    counts = np.empty(n, dtype=np.int64)
    for b, start, count in _blocks(n):
        y = sample_locations(q, count, _stream(seed, 2 * b))
        y = np.clip(y, 1e-12, 1.0)
        counts[start:start + count] = _stream(seed, 2 * b + 1).geometric(y)
    emp, se, ana = [], [], []
    for z in zs:
        vals = np.power(z, counts.astype(np.float64))
        emp.append(float(np.mean(vals)))
        se.append(float(np.std(vals, ddof=1) / math.sqrt(n)) if n > 1 else 0.0)
        ana.append(float(pgf_eval(q, z, tol)))
    return SimulatedPgf(tuple(zs), tuple(emp), tuple(se), tuple(ana), n, seed)


def _check_sim_args(n, seed) -> None:
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ValidationError(f"replicate count n={n!r} must be a positive integer")
    if not isinstance(seed, int) or isinstance(seed, bool) or seed < 0:
        raise ValidationError(f"seed={seed!r} must be a non-negative integer")
