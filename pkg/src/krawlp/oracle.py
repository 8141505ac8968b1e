"""Brute-force ground truth and executable checks of the completeness results.

Everything here works with exact rationals; no comparison uses a tolerance.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

from .errors import PreconditionError
from .field import Vector, char_value
from .hierarchy import (
    Instance,
    PseudoDistribution,
    build_kraw_pseudo,
    build_partial_pseudo,
)
from .lattice import Lattice
from .lp import LinearProgram, LpSolution, OPTIMAL, solve, verify_optimality

DEFAULT_MAX_LEVEL = 64


@dataclass(frozen=True)
class OracleReport:
    A: int
    k0: int
    witness: int


@dataclass
class VerificationReport:
    claim: str
    lp_value: Fraction | None
    expected: Fraction | None
    equal: bool
    artifacts: dict[str, Any] = field(default_factory=dict)

    def as_dict(self) -> dict[str, Any]:
        return {
            "claim": self.claim,
            "lp_value": fmt_rational(self.lp_value),
            "expected": fmt_rational(self.expected),
            "equal": self.equal,
            "artifacts": {k: _plain(v) for k, v in sorted(self.artifacts.items())},
        }

    def as_text(self) -> str:
        lines = [
            f"claim: {self.claim}",
            f"lp_value: {self.lp_value}",
            f"expected: {self.expected}",
            f"equal: {str(self.equal).lower()}",
        ]
        lines += [f"{k}: {_plain_text(v)}" for k, v in sorted(self.artifacts.items())]
        return "\n".join(lines)


def fmt_rational(x: Fraction | int | None) -> str | None:
    if x is None:
        return None
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def _plain(v: Any) -> Any:
    if isinstance(v, Fraction):
        return fmt_rational(v)
    if isinstance(v, dict):
        return {str(k): _plain(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    return v


def _plain_text(v: Any) -> str:
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, dict):
        return " ".join(f"{k}={x}" for k, x in v.items())
    if isinstance(v, (list, tuple)):
        return " ".join(str(x) for x in v)
    return str(v)


# ----------------------------------------------------------------------------
# ground truth


def brute_force_A(inst: Instance, lat: Lattice) -> OracleReport:
    """Largest linear code with minimum distance >= d, by scanning every subspace."""
    best = 0
    for s in range(len(lat)):
        if lat.min_weight(s) >= inst.d and lat.dim(s) > lat.dim(best):
            best = s
    k0 = lat.dim(best)
    return OracleReport(inst.spec.q**k0, k0, best)


def true_solution(code: int, lat: Lattice) -> PseudoDistribution:
    return PseudoDistribution({code: Fraction(1)})


def integrality_test(p: PseudoDistribution) -> bool:
    """True iff the pseudoprobabilities form a probability distribution."""
    return all(v >= 0 for v in p.values.values()) and p.total() == 1


def kraw_objective(p: PseudoDistribution, lat: Lattice, level: int) -> Fraction:
    return sum((lat.order(s) ** level * v for s, v in p.values.items()), Fraction(0))


def fourier_row_value(p: PseudoDistribution, u: int, lat: Lattice, level: int) -> Fraction:
    """Unscaled Fourier row sum_{S <= U} |S|^level P[S]."""
    return sum((lat.order(s) ** level * p[s] for s in lat.down(u)), Fraction(0))


def mobius_inductive(lat: Lattice) -> dict[tuple[int, int], int]:
    """mu(S, T) for all S <= T from mu(S, S) = 1 and mu(S, T) = -sum_{S <= U < T} mu(S, U)."""
    mu: dict[tuple[int, int], int] = {}
    for s in range(len(lat)):
        for t in lat.up(s):  # canonical order lists smaller dimensions first
            if t == s:
                mu[s, t] = 1
            else:
                mu[s, t] = -sum(mu[s, u] for u in lat.interval(s, t) if u != t)
    return mu


# ----------------------------------------------------------------------------
# character sums over subspaces (q = 2)


def char_sum_brute(alpha: Sequence[Vector], s: int, lat: Lattice) -> int:
    """sum over x in S^l of the product character chi_alpha(x)."""
    elems = lat.vectors(s)
    return sum(char_value(lat.spec, alpha, x) for x in itertools.product(elems, repeat=len(alpha)))


def char_sum_closed(alpha: Sequence[Vector], s: int, lat: Lattice) -> int:
    """|S|^l if S lies in span(alpha)^perp, else 0."""
    perp = lat.dual(lat.canonicalize(alpha))
    return lat.order(s) ** len(alpha) if lat.leq(s, perp) else 0


def partial_char_sum_brute(alpha: Sequence[Vector], chars: frozenset[int], s: int, lat: Lattice) -> int:
    """sum over x in S^l of prod_{i in I} chi_{alpha_i}(x_i) * prod_{i not in I} 1[x_i = alpha_i]."""
    elems = lat.vectors(s)
    total = 0
    for x in itertools.product(elems, repeat=len(alpha)):
        if any(x[i] != alpha[i] for i in range(len(alpha)) if i not in chars):
            continue
        idx = sorted(chars)
        total += char_value(lat.spec, [alpha[i] for i in idx], [x[i] for i in idx])
    return total


def partial_char_sum_closed(alpha: Sequence[Vector], chars: frozenset[int], s: int, lat: Lattice) -> int:
    perp = lat.dual(lat.canonicalize([alpha[i] for i in sorted(chars)]))
    if not lat.leq(s, perp):
        return 0
    if any(not lat.contains_vector(s, alpha[j]) for j in range(len(alpha)) if j not in chars):
        return 0
    return lat.order(s) ** len(chars)


# ----------------------------------------------------------------------------
# integrality constructions


def nonintegral_point(lat: Lattice, d: int, level: int, eps: Fraction) -> PseudoDistribution:
    """Feasible but non-integral point of the subspace Krawtchouk LP.

    Takes the first maximum-dimension code T of minimum distance >= d and its
    first one-dimensional subspace T' in canonical order, and sets
    P[T] = 1 - eps + eps/|T'|^level, P[T'] = -eps/|T'|^level, P[{0}] = eps.
    """
    eps = Fraction(eps)
    if not 0 < eps < 1:
        raise PreconditionError("epsilon must lie strictly between 0 and 1")
    inst = Instance(lat.spec, lat.n, d, level)
    report = brute_force_A(inst, lat)
    if report.k0 < 2:
        raise PreconditionError(f"construction needs k0 >= 2, got k0 = {report.k0}")
    t = report.witness
    t1 = next(s for s in lat.down(t) if lat.dim(s) == 1)
    shift = eps / lat.order(t1) ** level
    return PseudoDistribution({lat.zero: eps, t1: -shift, t: 1 - eps + shift})


def max_level_from_env(default: int = DEFAULT_MAX_LEVEL) -> int:
    return int(os.environ.get("KRAWLP_MAX_LEVEL", default))


@dataclass(frozen=True)
class Escalation:
    level: int | None
    witness: int
    reached_cap: bool = False


def infeasibility_level(p: PseudoDistribution, lat: Lattice, level: int = 1, max_level: int | None = None) -> Escalation:
    """Smallest level >= ``level`` whose Fourier row at U goes negative.

    U is the maximum-dimension subspace with a negative pseudoprobability
    (first in canonical order on ties).  When no level up to the cap works,
    the result has ``level=None`` and ``reached_cap=True``.
    """
    negative = [s for s, v in p.values.items() if v < 0]
    if not negative:
        raise PreconditionError("point has no negative entry")
    u = min(negative, key=lambda s: (-lat.dim(s), s))
    cap = max_level_from_env() if max_level is None else max_level
    for ell in range(level, cap + 1):
        if fourier_row_value(p, u, lat, ell) < 0:
            return Escalation(ell, u)
    return Escalation(None, u, reached_cap=True)


def mass_transfer_step(p: PseudoDistribution, lat: Lattice, k0: int, level: int) -> PseudoDistribution:
    """Move all mass of the first minimum-dimension support space equally onto its covers."""
    support = sorted(s for s, v in p.values.items() if v)
    if not support:
        raise PreconditionError("empty support")
    s_min = support[0]  # canonical order sorts by dimension first
    if lat.dim(s_min) >= k0:
        raise PreconditionError("support already lies in dimension k0; nothing to transfer")
    mass = p.values[s_min]
    if mass < 0:
        raise PreconditionError("minimum-dimension support entry is negative; point is infeasible")
    covers = lat.covers(s_min)
    out = dict(p.values)
    out[s_min] = Fraction(0)
    share = mass / len(covers)
    for t in covers:
        out[t] = out.get(t, Fraction(0)) + share
    return PseudoDistribution(out)


def mass_transfer_gain(p: PseudoDistribution, lat: Lattice, level: int) -> Fraction:
    """Objective increase of one transfer: |S_min|^level (q^level - 1) P[S_min]."""
    s_min = min(s for s, v in p.values.items() if v)
    return lat.order(s_min) ** level * (lat.spec.q**level - 1) * p.values[s_min]


# ----------------------------------------------------------------------------
# completeness


def _solve_report(claim: str, lp: LinearProgram, expected: Fraction, lat: Lattice) -> tuple[VerificationReport, LpSolution]:
    sol = solve(lp)
    value = sol.objective_value if sol.status == OPTIMAL else None
    artifacts: dict[str, Any] = {"status": sol.status, "variables": len(lp.variables), "rows": len(lp.constraints)}
    if sol.status == OPTIMAL:
        point = PseudoDistribution.from_point(sol.primal, lat)
        artifacts["certified"] = verify_optimality(lp, sol)
        artifacts["vertex_integral"] = integrality_test(point)
        artifacts["possibly_multiple_optima"] = sol.degenerate
        artifacts["support"] = {s: v for s, v in sorted(point.values.items()) if v}
    return VerificationReport(claim, value, Fraction(expected), value == expected, artifacts), sol


def verify_completeness(inst: Instance, lat: Lattice) -> list[VerificationReport]:
    """Solve both subspace models and compare their values with A^level and A."""
    oracle = brute_force_A(inst, lat)
    kraw, _ = _solve_report("kraw-pseudo value equals A^level", build_kraw_pseudo(inst, lat),
                            Fraction(oracle.A) ** inst.level, lat)
    partial, _ = _solve_report("partial-pseudo value equals A", build_partial_pseudo(inst, lat),
                               Fraction(oracle.A), lat)
    return [kraw, partial]
