"""Builders for the Krawtchouk and partial Krawtchouk LP hierarchies.

Two families of models are produced:

* subspace (pseudoprobability) models with one variable ``P_<id>`` per
  subspace S of F_q^n, standing for the pseudoprobability that the code
  equals S; these need level >= n;
* unsymmetrized models over F_2 with one variable ``a_<idx>`` per tuple
  x in (F_2^n)^level, indexed in row-major order.

Every (partial) Fourier row is divided by |U|^r so that all its
coefficients lie in (0, 1].
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Mapping

from .errors import LevelError, ResourceLimitError, UnsupportedFieldError
from .field import FieldSpec, Vector, char_value
from .lattice import Lattice, enumerate_subspaces
from .lp import Constraint, LinearProgram

DEFAULT_MAX_TUPLES = 2**16

KRAW_PSEUDO = "kraw-pseudo"
KRAW_PSEUDO_WEAK = "kraw-pseudo-weak"
PARTIAL_PSEUDO = "partial-pseudo"
FULL_PSEUDO_WEAK = "full-pseudo-weak"
KRAW_UNSYM = "kraw-unsym"
PARTIAL_UNSYM = "partial-unsym"
PROGRAMS = (KRAW_PSEUDO, KRAW_PSEUDO_WEAK, PARTIAL_PSEUDO, FULL_PSEUDO_WEAK, KRAW_UNSYM, PARTIAL_UNSYM)


@dataclass(frozen=True)
class Instance:
    spec: FieldSpec
    n: int
    d: int
    level: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("blocklength must be at least 1")
        if self.d < 1:
            raise ValueError("minimum distance must be at least 1")
        if self.level < 1:
            raise LevelError("level must be at least 1")

    @classmethod
    def of(cls, q: int, n: int, d: int, level: int) -> Instance:
        return cls(FieldSpec.of(q), n, d, level)


@dataclass
class PseudoDistribution:
    """Pseudoprobabilities P[S = C] keyed by subspace id; absent ids are 0."""

    values: dict[int, Fraction]

    def __getitem__(self, s: int) -> Fraction:
        return self.values.get(s, Fraction(0))

    def total(self) -> Fraction:
        return sum(self.values.values(), Fraction(0))

    def to_point(self) -> dict[str, Fraction]:
        return {pvar(s): v for s, v in self.values.items()}

    @classmethod
    def from_point(cls, point: Mapping[str, Fraction], lat: Lattice) -> PseudoDistribution:
        return cls({s: Fraction(point.get(pvar(s), 0)) for s in range(len(lat))})


@dataclass
class CumulativeSolution:
    """Values P[S <= C] keyed by subspace id."""

    values: dict[int, Fraction]

    def __getitem__(self, s: int) -> Fraction:
        return self.values.get(s, Fraction(0))


def pvar(s: int) -> str:
    return f"P_{s}"


def avar(idx: int) -> str:
    return f"a_{idx}"


def _require_level(inst: Instance) -> None:
    if inst.level < inst.n:
        raise LevelError(
            f"pseudoprobability programs need level >= n (got level={inst.level}, n={inst.n}); "
            "use the unsymmetrized builders for lower levels"
        )


def distance_violators(inst: Instance, lat: Lattice) -> list[int]:
    """Subspaces holding a nonzero word of weight at most d - 1."""
    return [s for s in range(len(lat)) if lat.min_weight(s) <= inst.d - 1]


def _pseudo_model(
    inst: Instance, lat: Lattice, zero_rows: list[Constraint], objective_power: int
) -> LinearProgram:
    ids = range(len(lat))
    level = inst.level
    objective = {pvar(s): Fraction(lat.order(s) ** objective_power) for s in ids}
    rows = [Constraint({pvar(s): 1 for s in ids}, "=", 1, "norm")]
    rows += zero_rows
    for u in ids:
        top = lat.order(u) ** level
        rows.append(Constraint({pvar(s): Fraction(lat.order(s) ** level, top) for s in lat.down(u)}, ">=", 0,
                               f"fourier_{u}"))
    for u in ids:
        rows.append(Constraint({pvar(s): 1 for s in lat.up(u)}, ">=", 0, f"nonneg_{u}"))
    return LinearProgram(tuple(pvar(s) for s in ids), "max", objective, tuple(rows))


def _distance_rows(inst: Instance, lat: Lattice) -> list[Constraint]:
    return [Constraint({pvar(s): 1}, "=", 0, f"dist_{s}") for s in distance_violators(inst, lat)]


def _dimension_rows(lat: Lattice, k0: int) -> list[Constraint]:
    return [Constraint({pvar(s): 1}, "=", 0, f"dim_{s}") for s in range(len(lat)) if lat.dim(s) > k0]


def build_kraw_pseudo(inst: Instance, lat: Lattice) -> LinearProgram:
    """Krawtchouk LP in pseudoprobabilities: maximize sum |S|^level P[S]."""
    _require_level(inst)
    return _pseudo_model(inst, lat, _distance_rows(inst, lat), inst.level)


def build_kraw_pseudo_weak(inst: Instance, lat: Lattice, k0: int) -> LinearProgram:
    """As :func:`build_kraw_pseudo` with P[S] = 0 for dim(S) > k0 in place of distance rows."""
    _require_level(inst)
    return _pseudo_model(inst, lat, _dimension_rows(lat, k0), inst.level)


def build_full_pseudo_weak(inst: Instance, lat: Lattice, k0: int) -> LinearProgram:
    _require_level(inst)
    return _pseudo_model(inst, lat, _dimension_rows(lat, k0), 1)


def partial_fourier_triples(inst: Instance, lat: Lattice) -> Iterator[tuple[int, int, int]]:
    """Admissible (T, U, r): T <= U, n - dim U <= r <= level, dim T <= level - r."""
    n, level = inst.n, inst.level
    for t in range(len(lat)):
        for u in lat.up(t):
            for r in range(n - lat.dim(u), level + 1):
                if lat.dim(t) <= level - r:
                    yield t, u, r


def build_partial_pseudo(inst: Instance, lat: Lattice) -> LinearProgram:
    """Partial Krawtchouk LP in pseudoprobabilities: maximize sum |S| P[S].

    Rows that coincide after scaling (e.g. the singleton rows T = U for
    different r) are emitted once, under the smallest (T, U, r) label.
    """
    _require_level(inst)
    ids = range(len(lat))
    rows = [Constraint({pvar(s): 1 for s in ids}, "=", 1, "norm")]
    rows += _distance_rows(inst, lat)
    seen = set()
    for t, u, r in partial_fourier_triples(inst, lat):
        top = lat.order(u) ** r
        coeffs = {pvar(s): Fraction(lat.order(s) ** r, top) for s in lat.interval(t, u)}
        key = tuple(sorted(coeffs.items()))
        if key in seen:
            continue
        seen.add(key)
        rows.append(Constraint(coeffs, ">=", 0, f"pfourier_{t}_{u}_{r}"))
    for u in ids:
        rows.append(Constraint({pvar(s): 1 for s in lat.up(u)}, ">=", 0, f"nonneg_{u}"))
    objective = {pvar(s): Fraction(lat.order(s)) for s in ids}
    return LinearProgram(tuple(pvar(s) for s in ids), "max", objective, tuple(rows))


# ----------------------------------------------------------------------------
# unsymmetrized models over F_2


def max_tuples_from_env(default: int = DEFAULT_MAX_TUPLES) -> int:
    return int(os.environ.get("KRAWLP_MAX_TUPLES", default))


def tuple_count(spec: FieldSpec, n: int, level: int) -> int:
    return spec.q ** (n * level)


def unsym_tuples(spec: FieldSpec, n: int, level: int) -> Iterator[tuple[Vector, ...]]:
    """All of (F_q^n)^level in row-major order; the i-th item has index i."""
    for flat in itertools.product(range(spec.q), repeat=n * level):
        yield tuple(tuple(flat[j * n:(j + 1) * n]) for j in range(level))


def tuple_index(spec: FieldSpec, x: tuple[Vector, ...]) -> int:
    idx = 0
    for v in x:
        for a in v:
            idx = idx * spec.q + a
    return idx


def _check_unsym(inst: Instance, rows_per_var: int, max_tuples: int | None) -> int:
    if inst.spec.q != 2:
        raise UnsupportedFieldError("unsymmetrized models are built for q=2 only")
    cap = max_tuples_from_env() if max_tuples is None else max_tuples
    count = tuple_count(inst.spec, inst.n, inst.level)
    if count * rows_per_var > cap:
        raise ResourceLimitError(
            f"unsymmetrized model needs {count * rows_per_var} tuples/rows, above the cap of {cap}"
        )
    return count


def _unsym_common(inst: Instance, lat: Lattice) -> tuple[list[tuple[Vector, ...]], list[int], list[Constraint]]:
    tuples = list(unsym_tuples(inst.spec, inst.n, inst.level))
    spans = [lat.canonicalize(x) for x in tuples]
    rows = [Constraint({avar(0): 1}, "=", 1, "norm")]
    for idx, s in enumerate(spans):
        if lat.min_weight(s) <= inst.d - 1:
            rows.append(Constraint({avar(idx): 1}, "=", 0, f"dist_{idx}"))
    return tuples, spans, rows


def build_unsym_kraw(inst: Instance, lat: Lattice | None = None, max_tuples: int | None = None) -> LinearProgram:
    """Unsymmetrized Krawtchouk LP over F_2: maximize sum_x a_x.

    Reflection rows a_x = a_{-x} are vacuous over F_2 and are not emitted.
    """
    count = _check_unsym(inst, 1, max_tuples)
    lat = lat or enumerate_subspaces(inst.spec, inst.n)
    tuples, _, rows = _unsym_common(inst, lat)
    for ai, alpha in enumerate(tuples):
        coeffs = {avar(xi): char_value(inst.spec, alpha, x) for xi, x in enumerate(tuples)}
        rows.append(Constraint(coeffs, ">=", 0, f"fourier_{ai}"))
    rows += [Constraint({avar(i): 1}, ">=", 0, f"nonneg_{i}") for i in range(count)]
    variables = tuple(avar(i) for i in range(count))
    return LinearProgram(variables, "max", {v: 1 for v in variables}, tuple(rows))


def build_unsym_partial(inst: Instance, lat: Lattice | None = None, max_tuples: int | None = None) -> LinearProgram:
    """Unsymmetrized partial Krawtchouk LP over F_2: maximize sum_{x1} a_(x1,0,...,0).

    One ``pfourier_<alpha>_<mask>`` row per alpha and per subset I of the
    coordinates (bit i of ``mask`` set when coordinate i uses the character,
    otherwise the indicator of alpha_i), plus GL-symmetry rows
    ``gl_<idx>: a_idx - a_rep = 0`` tying each tuple to the first tuple with
    the same span.
    """
    spec, n, level = inst.spec, inst.n, inst.level
    count = _check_unsym(inst, 2**level, max_tuples)
    lat = lat or enumerate_subspaces(spec, n)
    tuples, spans, rows = _unsym_common(inst, lat)
    cube = list(spec.vectors(n))
    for ai, alpha in enumerate(tuples):
        for mask in range(2**level):
            chars = [i for i in range(level) if mask >> i & 1]
            coeffs = {}
            for part in itertools.product(cube, repeat=len(chars)):
                x = list(alpha)
                for i, v in zip(chars, part):
                    x[i] = v
                sign = char_value(spec, [alpha[i] for i in chars], list(part))
                coeffs[avar(tuple_index(spec, tuple(x)))] = sign
            rows.append(Constraint(coeffs, ">=", 0, f"pfourier_{ai}_{mask}"))
    first_of_span: dict[int, int] = {}
    for idx, s in enumerate(spans):
        rep = first_of_span.setdefault(s, idx)
        if rep != idx:
            rows.append(Constraint({avar(idx): 1, avar(rep): -1}, "=", 0, f"gl_{idx}"))
    rows += [Constraint({avar(i): 1}, ">=", 0, f"nonneg_{i}") for i in range(count)]
    zero = (0,) * n
    objective = {avar(tuple_index(spec, (x1,) + (zero,) * (level - 1))): 1 for x1 in cube}
    return LinearProgram(tuple(avar(i) for i in range(count)), "max", objective, tuple(rows))


def build_program(name: str, inst: Instance, lat: Lattice, k0: int | None = None,
                  max_tuples: int | None = None) -> LinearProgram:
    if name == KRAW_PSEUDO:
        return build_kraw_pseudo(inst, lat)
    if name == PARTIAL_PSEUDO:
        return build_partial_pseudo(inst, lat)
    if name in (KRAW_PSEUDO_WEAK, FULL_PSEUDO_WEAK):
        if k0 is None:
            raise ValueError(f"{name} needs k0")
        build = build_kraw_pseudo_weak if name == KRAW_PSEUDO_WEAK else build_full_pseudo_weak
        return build(inst, lat, k0)
    if name == KRAW_UNSYM:
        return build_unsym_kraw(inst, lat, max_tuples)
    if name == PARTIAL_UNSYM:
        return build_unsym_partial(inst, lat, max_tuples)
    raise ValueError(f"unknown program {name!r}")


# ----------------------------------------------------------------------------
# solution conversions


def pseudo_to_cumulative(p: PseudoDistribution, lat: Lattice) -> CumulativeSolution:
    return CumulativeSolution(lat.zeta_transform(p.values))


def cumulative_to_pseudo(c: CumulativeSolution, lat: Lattice) -> PseudoDistribution:
    return PseudoDistribution(lat.mobius_transform(c.values))


def lift_pseudo_to_unsym(
    p: PseudoDistribution, inst: Instance, lat: Lattice, max_tuples: int | None = None
) -> dict[tuple[Vector, ...], Fraction]:
    """a_x := P[span(x) <= C] for every x in (F_q^n)^level."""
    cap = max_tuples_from_env() if max_tuples is None else max_tuples
    count = tuple_count(inst.spec, inst.n, inst.level)
    if count > cap:
        raise ResourceLimitError(f"{count} tuples exceeds the cap of {cap}")
    cum = lat.zeta_transform(p.values)
    return {x: cum[lat.canonicalize(x)] for x in unsym_tuples(inst.spec, inst.n, inst.level)}


def unsym_point(a: Mapping[tuple[Vector, ...], Fraction], spec: FieldSpec) -> dict[str, Fraction]:
    return {avar(tuple_index(spec, x)): v for x, v in a.items()}


def unsym_to_pseudo(point: Mapping[str, Fraction], inst: Instance, lat: Lattice) -> PseudoDistribution:
    """Symmetrize an unsymmetrized solution over span classes, then Mobius-invert.

    Needs level >= n so that every subspace is the span of some tuple.
    """
    _require_level(inst)
    sums: dict[int, Fraction] = {}
    counts: dict[int, int] = {}
    for idx, x in enumerate(unsym_tuples(inst.spec, inst.n, inst.level)):
        s = lat.canonicalize(x)
        sums[s] = sums.get(s, Fraction(0)) + Fraction(point.get(avar(idx), 0))
        counts[s] = counts.get(s, 0) + 1
    cum = {s: sums[s] / counts[s] for s in sums}
    return PseudoDistribution(lat.mobius_transform(cum))
