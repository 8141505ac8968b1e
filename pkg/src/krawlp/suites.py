"""Named verification suites run by ``krawlp verify``.

Each suite returns a list of :class:`Check` records, one per exact
comparison, plus any reports worth printing.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable

from .errors import PreconditionError, UnsupportedFieldError
from .field import FieldSpec
from .hierarchy import (
    Instance,
    PseudoDistribution,
    build_kraw_pseudo,
    build_kraw_pseudo_weak,
    build_partial_pseudo,
    pvar,
)
from .lattice import Lattice, enumerate_subspaces
from .lp import OPTIMAL, check_feasible, solve, verify_optimality
from .oracle import (
    VerificationReport,
    brute_force_A,
    char_sum_brute,
    char_sum_closed,
    fmt_rational,
    fourier_row_value,
    infeasibility_level,
    integrality_test,
    kraw_objective,
    mass_transfer_gain,
    mass_transfer_step,
    max_level_from_env,
    mobius_inductive,
    nonintegral_point,
    partial_char_sum_brute,
    partial_char_sum_closed,
    verify_completeness,
)


@dataclass
class Check:
    label: str
    passed: bool
    lhs: Any = None
    rhs: Any = None
    relation: str = "=="

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        if self.lhs is None and self.rhs is None:
            return f"{status} {self.label}"
        return f"{status} {self.label}: {_text(self.lhs)} {self.relation} {_text(self.rhs)}"

    def as_dict(self) -> dict[str, Any]:
        return {"label": self.label, "passed": self.passed, "lhs": _show(self.lhs),
                "relation": self.relation, "rhs": _show(self.rhs)}


def _show(x: Any) -> Any:
    if isinstance(x, Fraction):
        return fmt_rational(x)
    if isinstance(x, list):
        return [_show(v) for v in x]
    return x


def _text(x: Any) -> str:
    if isinstance(x, list):
        return "[" + ",".join(str(v) for v in x) + "]"
    return str(x)


def _span(lat: Lattice, s: int) -> str:
    return "span{" + ",".join(lat.spaces[s].rows()) + "}"


def _eq(label: str, lhs: Any, rhs: Any) -> Check:
    return Check(label, lhs == rhs, lhs, rhs, "==")


@dataclass
class SuiteResult:
    suite: str
    checks: list[Check] = field(default_factory=list)
    reports: list[VerificationReport] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


@dataclass(frozen=True)
class SuiteParams:
    q: int
    n: int
    d: int | None = None
    level: int | None = None
    epsilon: Fraction = Fraction(1, 2)
    seed: int = 0
    samples: int = 100
    max_subspaces: int | None = None
    max_level: int | None = None


def _inst(p: SuiteParams, lat: Lattice) -> Instance:
    if p.d is None:
        raise PreconditionError("this suite needs --d")
    return Instance(lat.spec, p.n, p.d, p.level if p.level is not None else p.n)


def completeness(p: SuiteParams, lat: Lattice) -> SuiteResult:
    inst = _inst(p, lat)
    res = SuiteResult("completeness")
    for rep in verify_completeness(inst, lat):
        res.reports.append(rep)
        tag = rep.claim.split()[0]
        res.checks.append(Check(f"{tag} value", rep.equal, rep.lp_value, rep.expected))
        res.checks.append(Check(f"{tag} certified by exact strong duality", bool(rep.artifacts.get("certified"))))
        res.checks.append(Check(f"{tag} optimal vertex is a probability distribution",
                                bool(rep.artifacts.get("vertex_integral"))))
    return res


def nonintegral(p: SuiteParams, lat: Lattice) -> SuiteResult:
    inst = _inst(p, lat)
    res = SuiteResult("nonintegral")
    point = nonintegral_point(lat, inst.d, inst.level, p.epsilon)
    oracle = brute_force_A(inst, lat)
    t1 = next(s for s, v in point.values.items() if v < 0)
    lp = build_kraw_pseudo(inst, lat)
    res.checks.append(_eq("violated rows of kraw-pseudo", check_feasible(lp, point.to_point()), []))
    res.checks.append(_eq("sum of P", point.total(), Fraction(1)))
    res.checks.append(_eq(f"P[T'] (T'={_span(lat, t1)}, T={_span(lat, oracle.witness)})", point[t1],
                          -p.epsilon / lat.order(t1) ** inst.level))
    res.checks.append(_eq(f"fourier row at T'={t1}", fourier_row_value(point, t1, lat, inst.level), Fraction(0)))
    res.checks.append(_eq(f"nonneg row at T'={t1}", sum((point[s] for s in lat.up(t1)), Fraction(0)),
                          1 - p.epsilon))
    res.checks.append(_eq("integrality_test", integrality_test(point), False))
    return res


def escalation(p: SuiteParams, lat: Lattice) -> SuiteResult:
    inst = _inst(p, lat)
    res = SuiteResult("escalation")
    point = nonintegral_point(lat, inst.d, inst.level, p.epsilon)
    esc = infeasibility_level(point, lat, inst.level, p.max_level)
    cap = p.max_level if p.max_level is not None else max_level_from_env()
    res.checks.append(Check("escalation level within the cap", not esc.reached_cap, esc.level, cap, "<="))
    if esc.level is None:
        return res
    u, ell = esc.witness, esc.level
    before = fourier_row_value(point, u, lat, ell - 1)
    after = fourier_row_value(point, u, lat, ell)
    res.checks.append(Check(f"fourier row at U={u}, level {ell - 1}", before >= 0, before, 0, ">="))
    res.checks.append(Check(f"fourier row at U={u}, level {ell}", after < 0, after, 0, "<"))
    higher = build_kraw_pseudo(Instance(lat.spec, lat.n, inst.d, max(ell, lat.n)), lat)
    violated = check_feasible(higher, point.to_point())
    res.checks.append(Check(f"point violates fourier_{u} at level {ell}", f"fourier_{u}" in violated,
                            violated, f"fourier_{u}", "contains"))
    return res


def masstransfer(p: SuiteParams, lat: Lattice) -> SuiteResult:
    inst = _inst(p, lat)
    res = SuiteResult("masstransfer")
    k0 = brute_force_A(inst, lat).k0
    weak = build_kraw_pseudo_weak(inst, lat, k0)
    point = PseudoDistribution({lat.zero: Fraction(1)})
    step = 0
    while any(v and lat.dim(s) < k0 for s, v in point.values.items()):
        step += 1
        before = kraw_objective(point, lat, inst.level)
        gain = mass_transfer_gain(point, lat, inst.level)
        point = mass_transfer_step(point, lat, k0, inst.level)
        after = kraw_objective(point, lat, inst.level)
        res.checks.append(_eq(f"step {step} objective increase", after - before, gain))
        res.checks.append(Check(f"step {step} increase is positive", gain > 0, gain, 0, ">"))
        res.checks.append(_eq(f"step {step} violated rows of kraw-pseudo-weak",
                              check_feasible(weak, point.to_point()), []))
    res.checks.append(_eq("final objective", kraw_objective(point, lat, inst.level),
                          Fraction(lat.spec.q) ** (k0 * inst.level)))
    res.checks.append(_eq("final point is a probability distribution", integrality_test(point), True))
    return res


def mobius(p: SuiteParams, lat: Lattice) -> SuiteResult:
    res = SuiteResult("mobius")
    mu = mobius_inductive(lat)
    bad = [(s, t) for (s, t), v in mu.items() if lat.mobius(s, t) != v]
    res.checks.append(_eq("closed-form mu equals inductive mu on all pairs", len(bad), 0))
    left = right = 0
    for s in range(len(lat)):
        for t in lat.up(s):
            between = lat.interval(s, t)
            target = int(s == t)
            left += sum(lat.mobius(s, u) for u in between) != target
            right += sum(lat.mobius(u, t) for u in between) != target
    res.checks.append(_eq("pairs with sum_U mu(S,U) != [S=T]", left, 0))
    res.checks.append(_eq("pairs with sum_U mu(U,T) != [S=T]", right, 0))
    rng = random.Random(p.seed)
    failures = 0
    for _ in range(p.samples):
        v = {s: Fraction(rng.randint(-50, 50), rng.randint(1, 20)) for s in range(len(lat))}
        failures += lat.mobius_transform(lat.zeta_transform(v)) != v
        failures += lat.zeta_transform(lat.mobius_transform(v)) != v
    res.checks.append(_eq(f"round-trip failures over {p.samples} random vectors", failures, 0))
    return res


def charsum(p: SuiteParams, lat: Lattice) -> SuiteResult:
    if lat.spec.q != 2:
        raise UnsupportedFieldError("character sums are checked for q=2 only")
    res = SuiteResult("charsum")
    max_level = p.level if p.level is not None else 2
    for n in range(1, p.n + 1):
        sub = lat if n == lat.n else enumerate_subspaces(lat.spec, n)
        cube = list(sub.spec.vectors(n))
        for ell in range(1, max_level + 1):
            full_bad = partial_bad = cases = 0
            for alpha in itertools.product(cube, repeat=ell):
                for s in range(len(sub)):
                    full_bad += char_sum_brute(alpha, s, sub) != char_sum_closed(alpha, s, sub)
                    for mask in range(2**ell):
                        chars = frozenset(i for i in range(ell) if mask >> i & 1)
                        cases += 1
                        partial_bad += (partial_char_sum_brute(alpha, chars, s, sub)
                                        != partial_char_sum_closed(alpha, chars, s, sub))
            res.checks.append(_eq(f"n={n} level={ell} full character-sum mismatches", full_bad, 0))
            res.checks.append(_eq(f"n={n} level={ell} partial character-sum mismatches ({cases} cases)",
                                  partial_bad, 0))
    return res


def partial_integrality(p: SuiteParams, lat: Lattice) -> SuiteResult:
    inst = _inst(p, lat)
    res = SuiteResult("partial-integrality")
    lp = build_partial_pseudo(inst, lat)
    singles = {next(iter(c.coeffs)) for c in lp.constraints
               if c.rel == ">=" and c.rhs == 0 and len(c.coeffs) == 1 and next(iter(c.coeffs.values())) > 0}
    missing = [v for v in lp.variables if v not in singles]
    res.checks.append(_eq("variables without a singleton nonnegativity row", missing, []))
    for s in range(len(lat)):
        sol = solve(lp.with_objective({pvar(s): 1}, "min"))
        ok = sol.status == OPTIMAL and verify_optimality(lp.with_objective({pvar(s): 1}, "min"), sol)
        value = sol.objective_value if ok else None
        res.checks.append(Check(f"min P[{s}] over partial-pseudo", ok and value >= 0, value, 0, ">="))
    return res


SUITES: dict[str, Callable[[SuiteParams, Lattice], SuiteResult]] = {
    "completeness": completeness,
    "nonintegral": nonintegral,
    "escalation": escalation,
    "masstransfer": masstransfer,
    "mobius": mobius,
    "charsum": charsum,
    "partial-integrality": partial_integrality,
}


def run_suite(name: str, p: SuiteParams) -> SuiteResult:
    lat = enumerate_subspaces(FieldSpec.of(p.q), p.n, p.max_subspaces)
    return SUITES[name](p, lat)

