"""Mixing distributions on the half line and integration against them.

A mixing distribution is a probability measure built from point masses plus
a piecewise-constant density. Scalars are kept as ``fractions.Fraction``
whenever the caller supplies rational data, so measure arithmetic, moments,
and polynomial integrals stay exact; floats enter only when the caller uses
them or when an integrand has no rational antiderivative.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import QuadratureError, ValidationError

Num = int | Fraction | float

#: absolute slack allowed when float-valued masses must sum to one
MASS_TOL = 1e-12


def parse_number(x: int | float | str | Fraction) -> Num:
    """Coerce a scalar to Fraction (exact inputs) or float.

    Strings accept both "num/den" and decimal forms and always parse
    exactly. Plain ints are promoted to Fraction so later arithmetic does
    not silently fall into float division.
    """
    if isinstance(x, bool):
        raise ValidationError(f"expected a number, got {x!r}")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return x
    if isinstance(x, str):
        try:
            return Fraction(x)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValidationError(f"cannot parse number {x!r}") from exc
    raise ValidationError(f"expected a number, got {type(x).__name__}")


def is_exact(x: Num) -> bool:
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


def jsonable(x: Num) -> int | float | str:
    """JSON form of a scalar: int or "num/den" when exact, float otherwise."""
    if is_exact(x):
        f = Fraction(x)
        return int(f) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"
    return float(x)


def render(x: Num) -> str:
    """Deterministic text form for CSV cells."""
    v = jsonable(x)
    return v if isinstance(v, str) else repr(v)


@dataclass(frozen=True)
class Atom:
    """Point mass p at location y."""

    y: Num
    p: Num


@dataclass(frozen=True)
class Segment:
    """Constant density on the half-open interval [lo, hi)."""

    lo: Num
    hi: Num
    density: Num

    @property
    def mass(self) -> Num:
        return self.density * (self.hi - self.lo)


@dataclass(frozen=True)
class MixingDistribution:
    """Point masses plus a piecewise-constant density on [0, inf).

    Constructor invariants: every atom has positive mass at a strictly
    positive location, segments are disjoint with finite endpoints and
    non-negative density, and the total mass is one (exactly for rational
    data, within MASS_TOL otherwise). Atoms and segments are stored sorted
    by location.
    """

    atoms: tuple[Atom, ...] = ()
    segments: tuple[Segment, ...] = ()

    def __post_init__(self) -> None:
        atoms = tuple(sorted(self.atoms, key=lambda a: a.y))
        segments = tuple(sorted(self.segments, key=lambda s: s.lo))
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "segments", segments)
        seen = set()
        for a in atoms:
            if a.y < 0:
                raise ValidationError(f"atom location {a.y} is negative")
            if a.y == 0:
                raise ValidationError("atom at the origin: mass at 0 must be zero")
            if not 0 < a.p <= 1:
                raise ValidationError(f"atom mass {a.p} outside (0, 1]")
            if a.y in seen:
                raise ValidationError(f"duplicate atom location {a.y}")
            seen.add(a.y)
        for s in segments:
            if s.lo < 0:
                raise ValidationError(f"segment lower endpoint {s.lo} is negative")
            if not s.lo < s.hi:
                raise ValidationError(f"segment [{s.lo}, {s.hi}) is empty or reversed")
            if math.isinf(float(s.hi)):
                raise ValidationError("segment upper endpoint must be finite")
            if s.density < 0:
                raise ValidationError(f"segment density {s.density} is negative")
        for left, right in zip(segments, segments[1:]):
            if right.lo < left.hi:
                raise ValidationError(
                    f"segments [{left.lo}, {left.hi}) and [{right.lo}, {right.hi}) overlap"
                )
        total = self.total_mass
        if self.exact:
            if total != 1:
                raise ValidationError(f"total mass is {total}, must be exactly 1")
        elif abs(total - 1) > MASS_TOL:
            raise ValidationError(f"total mass is {total!r}, must be 1 within {MASS_TOL}")

    @property
    def exact(self) -> bool:
        return all(is_exact(a.y) and is_exact(a.p) for a in self.atoms) and all(
            is_exact(s.lo) and is_exact(s.hi) and is_exact(s.density) for s in self.segments
        )

    @property
    def total_mass(self) -> Num:
        return sum(a.p for a in self.atoms) + sum(s.mass for s in self.segments)

    def to_json_dict(self) -> dict:
        return {
            "atoms": [{"y": jsonable(a.y), "p": jsonable(a.p)} for a in self.atoms],
            "segments": [
                {"lo": jsonable(s.lo), "hi": jsonable(s.hi), "density": jsonable(s.density)}
                for s in self.segments
            ],
        }

    @classmethod
    def from_json_dict(cls, doc) -> "MixingDistribution":
        if not isinstance(doc, dict):
            raise ValidationError("distribution document must be a JSON object")

        def grab(entry, field: str, where: str) -> Num:
            if not isinstance(entry, dict) or field not in entry:
                raise ValidationError(f"{where} is missing field {field!r}")
            return parse_number(entry[field])

        atoms = []
        for i, entry in enumerate(doc.get("atoms") or []):
            where = f"atoms[{i}]"
            atoms.append(Atom(grab(entry, "y", where), grab(entry, "p", where)))
        segments = []
        for i, entry in enumerate(doc.get("segments") or []):
            where = f"segments[{i}]"
            segments.append(
                Segment(
                    grab(entry, "lo", where),
                    grab(entry, "hi", where),
                    grab(entry, "density", where),
                )
            )
        return cls(tuple(atoms), tuple(segments))


def point_mass(y) -> MixingDistribution:
    """Unit mass at a single location."""
    return MixingDistribution(atoms=(Atom(parse_number(y), Fraction(1)),))


def uniform_density(lo, hi) -> MixingDistribution:
    """Uniform density on [lo, hi)."""
    lo = parse_number(lo)
    hi = parse_number(hi)
    if not lo < hi:
        raise ValidationError(f"uniform endpoints reversed: [{lo}, {hi})")
    return MixingDistribution(segments=(Segment(lo, hi, 1 / (hi - lo)),))


def mix(components: Sequence[tuple[Num, MixingDistribution]]) -> MixingDistribution:
    """Weighted mixture of mixing distributions.

    Coinciding atoms are merged and overlapping density pieces are split at
    the union of their endpoints, so the result satisfies the constructor
    invariants whenever the weights are non-negative and sum to one.
    """
    atom_mass: dict = {}
    pieces = []
    for w, q in components:
        if w < 0:
            raise ValidationError(f"mixture weight {w} is negative")
        if w == 0:
            continue
        for a in q.atoms:
            atom_mass[a.y] = atom_mass.get(a.y, 0) + w * a.p
        for s in q.segments:
            if s.density > 0:
                pieces.append((s.lo, s.hi, w * s.density))
    cuts = sorted({x for lo, hi, _ in pieces for x in (lo, hi)})
    segments: list[Segment] = []
    for a, b in zip(cuts, cuts[1:]):
        d = sum(dens for lo, hi, dens in pieces if lo <= a and b <= hi)
        if d > 0:
            if segments and segments[-1].hi == a and segments[-1].density == d:
                segments[-1] = Segment(segments[-1].lo, b, d)
            else:
                segments.append(Segment(a, b, d))
    atoms = tuple(Atom(y, p) for y, p in sorted(atom_mass.items()))
    return MixingDistribution(atoms, tuple(segments))


_KINDS = ("pgf_kernel", "power_of_a", "reciprocal", "identity", "exp_decay", "custom")


@dataclass(frozen=True)
class IntegrandSpec:
    """One of the integrand families understood by :func:`integrate`.

    Build instances through the factory functions below; they validate the
    parameter domains.
    """

    kind: str
    param: Num | None = None
    func: Callable[[float], float] | None = None

    def evaluate(self, y: Num) -> Num:
        """Pointwise value, exact when both y and the parameter are exact."""
        if isinstance(y, int):
            y = Fraction(y)
        if self.kind == "pgf_kernel":
            z = self.param
            if y == 0:
                return Fraction(0) if is_exact(z) and is_exact(y) else 0.0
            return z * y / (1 - z + z * y)
        if self.kind == "power_of_a":
            return (1 - y) ** self.param
        if self.kind == "reciprocal":
            if y == 0:
                raise ValidationError("reciprocal integrand evaluated at 0")
            return (Fraction(1) if is_exact(y) else 1.0) / y
        if self.kind == "identity":
            return y
        if self.kind == "exp_decay":
            if self.param == 0:
                return Fraction(1) if is_exact(y) else 1.0
            return math.exp(-float(self.param) * float(y))
        return self.func(float(y))

    def segment_primitive(self, lo: Num, hi: Num) -> Num | None:
        """Integral over [lo, hi) against unit density, None if no closed form."""
        if self.kind == "identity":
            return (hi * hi - lo * lo) / 2
        if self.kind == "power_of_a":
            k = self.param
            return ((1 - lo) ** (k + 1) - (1 - hi) ** (k + 1)) / (k + 1)
        if self.kind == "exp_decay":
            if self.param == 0:
                return hi - lo
            t = float(self.param)
            return (math.exp(-t * float(lo)) - math.exp(-t * float(hi))) / t
        return None

    def float_callable(self) -> Callable[[float], float]:
        if self.kind == "pgf_kernel":
            z = float(self.param)
            return lambda y: 0.0 if y == 0 else z * y / (1 - z + z * y)
        if self.kind == "power_of_a":
            k = self.param
            return lambda y: (1.0 - y) ** k
        if self.kind == "reciprocal":
            return lambda y: 1.0 / y
        if self.kind == "identity":
            return lambda y: y
        if self.kind == "exp_decay":
            t = float(self.param)
            return lambda y: math.exp(-t * y)
        return self.func


def pgf_kernel(z) -> IntegrandSpec:
    """y -> z*y / (1 - z + z*y) for a fixed z in (0, 1)."""
    z = parse_number(z)
    if not 0 < z < 1:
        raise ValidationError(f"pgf kernel argument z={z} outside (0, 1)")
    return IntegrandSpec("pgf_kernel", z)


def power_of_a(k: int) -> IntegrandSpec:
    """y -> (1 - y)**k, the k-th resistance moment integrand."""
    if not isinstance(k, int) or isinstance(k, bool) or k < 0:
        raise ValidationError(f"power order {k!r} must be a non-negative integer")
    return IntegrandSpec("power_of_a", k)


def reciprocal() -> IntegrandSpec:
    """y -> 1/y; integrating it against a density positive at 0 diverges."""
    return IntegrandSpec("reciprocal")


def identity() -> IntegrandSpec:
    """y -> y."""
    return IntegrandSpec("identity")


def exp_decay(t) -> IntegrandSpec:
    """y -> exp(-t*y) for a fixed t >= 0."""
    t = parse_number(t)
    if t < 0:
        raise ValidationError(f"exponential decay rate t={t} is negative")
    return IntegrandSpec("exp_decay", t)


def custom(f: Callable[[float], float]) -> IntegrandSpec:
    """Arbitrary tabulated integrand; always integrated by quadrature."""
    if not callable(f):
        raise ValidationError("custom integrand must be callable")
    return IntegrandSpec("custom", None, f)


_NODES, _WEIGHTS = (tuple(float(v) for v in arr) for arr in np.polynomial.legendre.leggauss(15))
_MAX_DEPTH = 48


def _panel(g: Callable[[float], float], a: float, b: float) -> float:
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    return half * math.fsum(w * g(mid + half * x) for x, w in zip(_NODES, _WEIGHTS))


def _refine(g, a: float, b: float, whole: float, tol: float, depth: int) -> float:
    mid = 0.5 * (a + b)
    left = _panel(g, a, mid)
    right = _panel(g, mid, b)
    if abs(whole - (left + right)) <= tol:
        return left + right
    if depth >= _MAX_DEPTH:
        raise QuadratureError(f"quadrature did not converge on [{a}, {b}]")
    return _refine(g, a, mid, left, 0.5 * tol, depth + 1) + _refine(
        g, mid, b, right, 0.5 * tol, depth + 1
    )


def quadrature(g: Callable[[float], float], lo, hi, tol: float) -> float:
    """Adaptive bisection built on a fixed 15-point Gauss-Legendre rule.

    Panels are split until the whole-panel and split-panel estimates agree
    within the (bisected) tolerance budget, so the absolute error of the
    returned value is at most tol for integrands this rule resolves.
    """
    if not tol > 0:
        raise ValidationError(f"quadrature tolerance {tol} must be positive")
    a, b = float(lo), float(hi)
    if b <= a:
        return 0.0
    return _refine(g, a, b, _panel(g, a, b), tol, 0)


def integrate(q: MixingDistribution, f: IntegrandSpec, tol: float = 1e-10,
              force_quadrature: bool = False) -> Num:
    """Integrate an integrand spec against a mixing distribution.

    Atom contributions are summed term by term. Density segments use the
    closed-form antiderivative when the kind has one (and quadrature is not
    forced), otherwise adaptive quadrature with the absolute error budget
    split across segments. Returns a Fraction whenever every contribution
    stays rational, and math.inf for the one non-integrable case: the
    reciprocal integrand against a density positive at the origin.
    """
    if not isinstance(q, MixingDistribution):
        raise ValidationError("q must be a MixingDistribution")
    if not isinstance(f, IntegrandSpec) or f.kind not in _KINDS:
        raise ValidationError("f must be an IntegrandSpec")
    if not tol > 0:
        raise ValidationError(f"tol={tol} must be positive")
    if f.kind == "reciprocal":
        for s in q.segments:
            if s.lo == 0 and s.density > 0:
                return math.inf
    live = [s for s in q.segments if s.density > 0]
    seg_tol = tol / max(1, len(live))
    total: Num = 0
    for a in q.atoms:
        total += a.p * f.evaluate(a.y)
    for s in live:
        part = None if force_quadrature else f.segment_primitive(s.lo, s.hi)
        if part is None:
            part = quadrature(f.float_callable(), s.lo, s.hi, seg_tol / float(s.density))
        total += s.density * part
    return total


def mass_on(q: MixingDistribution, lo, hi, include_lo: bool = False,
            include_hi: bool = False) -> Num:
    """Measure of an interval, with explicit endpoint inclusion flags.

    Exact for exact distributions. ``hi`` may be math.inf.
    """
    if lo > hi:
        raise ValidationError(f"interval endpoints reversed: lo={lo} > hi={hi}")
    total: Num = 0
    for a in q.atoms:
        if lo < a.y < hi or (a.y == lo and include_lo) or (a.y == hi and include_hi):
            total += a.p
    for s in q.segments:
        a = max(lo, s.lo)
        b = min(hi, s.hi)
        if b > a:
            total += s.density * (b - a)
    return total


def sample_locations(q: MixingDistribution, n: int, rng: np.random.Generator) -> np.ndarray:
    """Draw n locations from q using exactly two uniform blocks from rng.

    The first block picks the component by mass, the second places the draw
    inside a segment (it is ignored for atoms), so the stream consumption
    depends only on n.
    """
    if not isinstance(n, int) or n < 0:
        raise ValidationError(f"sample count {n!r} must be a non-negative integer")
    n_atoms = len(q.atoms)
    weights = np.array(
        [float(a.p) for a in q.atoms] + [float(s.mass) for s in q.segments], dtype=float
    )
    cum = np.cumsum(weights)
    u = rng.random(n) * cum[-1]
    v = rng.random(n)
    idx = np.minimum(np.searchsorted(cum, u, side="right"), len(weights) - 1)
    out = np.empty(n, dtype=float)
    is_atom = idx < n_atoms
    if n_atoms:
        atom_y = np.array([float(a.y) for a in q.atoms])
        out[is_atom] = atom_y[idx[is_atom]]
    if q.segments:
        seg_lo = np.array([float(s.lo) for s in q.segments])
        seg_hi = np.array([float(s.hi) for s in q.segments])
        si = idx[~is_atom] - n_atoms
        out[~is_atom] = seg_lo[si] + v[~is_atom] * (seg_hi[si] - seg_lo[si])
    return out
