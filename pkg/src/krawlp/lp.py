"""Exact rational linear programs and a certifying simplex solver.

Variables are free (unbounded in both directions); bounds such as x >= 0 are
ordinary constraint rows.  All arithmetic uses :class:`fractions.Fraction`.

Sign conventions for the dual multipliers ``y`` (one per constraint label):

* every Optimal solution satisfies ``sum_i y_i * a_i == c`` and
  ``sum_i y_i * b_i == objective_value``;
* for ``max`` problems ``y >= 0`` on ``<=`` rows and ``y <= 0`` on ``>=`` rows;
  for ``min`` problems the signs are reversed; ``=`` rows are unrestricted.

An Infeasible solution carries a Farkas ray in ``dual`` with ``y >= 0`` on
``>=`` rows, ``y <= 0`` on ``<=`` rows, ``sum_i y_i * a_i == 0`` and
``sum_i y_i * b_i > 0``, i.e. a derivation of ``0 >= positive``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

RELATIONS = ("<=", "=", ">=")

OPTIMAL = "Optimal"
INFEASIBLE = "Infeasible"
UNBOUNDED = "Unbounded"


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def _check_name(name: str, what: str) -> None:
    if not name or any(ch.isspace() for ch in name) or ":" in name:
        raise ValueError(f"invalid {what} name {name!r}")


def _clean(coeffs: Mapping[str, object]) -> dict[str, Fraction]:
    out = {}
    for k, v in coeffs.items():
        v = _frac(v)
        if v:
            out[k] = v
    return out


@dataclass(frozen=True)
class Constraint:
    coeffs: dict[str, Fraction]
    rel: str
    rhs: Fraction
    label: str

    def __post_init__(self) -> None:
        if self.rel not in RELATIONS:
            raise ValueError(f"unknown relation {self.rel!r}")
        _check_name(self.label, "constraint")
        object.__setattr__(self, "coeffs", _clean(self.coeffs))
        object.__setattr__(self, "rhs", _frac(self.rhs))

    def lhs(self, point: Mapping[str, Fraction]) -> Fraction:
        return sum((a * point.get(v, 0) for v, a in self.coeffs.items()), Fraction(0))

    def holds(self, point: Mapping[str, Fraction]) -> bool:
        lhs = self.lhs(point)
        if self.rel == "<=":
            return lhs <= self.rhs
        if self.rel == ">=":
            return lhs >= self.rhs
        return lhs == self.rhs


@dataclass(frozen=True)
class LinearProgram:
    variables: tuple[str, ...]
    sense: str
    objective: dict[str, Fraction]
    constraints: tuple[Constraint, ...]

    def __post_init__(self) -> None:
        if self.sense not in ("max", "min"):
            raise ValueError(f"sense must be 'max' or 'min', got {self.sense!r}")
        variables = tuple(self.variables)
        for v in variables:
            _check_name(v, "variable")
        if len(set(variables)) != len(variables):
            raise ValueError("duplicate variable names")
        declared = set(variables)
        objective = _clean(self.objective)
        constraints = tuple(self.constraints)
        for v in objective:
            if v not in declared:
                raise ValueError(f"objective uses undeclared variable {v!r}")
        labels = set()
        for con in constraints:
            if con.label in labels:
                raise ValueError(f"duplicate constraint label {con.label!r}")
            labels.add(con.label)
            for v in con.coeffs:
                if v not in declared:
                    raise ValueError(f"constraint {con.label!r} uses undeclared variable {v!r}")
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "objective", objective)
        object.__setattr__(self, "constraints", constraints)

    def constraint(self, label: str) -> Constraint:
        for con in self.constraints:
            if con.label == label:
                return con
        raise KeyError(label)

    def objective_value(self, point: Mapping[str, Fraction]) -> Fraction:
        return sum((a * point.get(v, 0) for v, a in self.objective.items()), Fraction(0))

    def with_objective(self, objective: Mapping[str, object], sense: str | None = None) -> LinearProgram:
        return LinearProgram(self.variables, sense or self.sense, dict(objective), self.constraints)


@dataclass
class LpSolution:
    status: str
    primal: dict[str, Fraction] = field(default_factory=dict)
    objective_value: Fraction | None = None
    dual: dict[str, Fraction] = field(default_factory=dict)
    certificate_kind: str = ""
    ray: dict[str, Fraction] | None = None
    # True when the optimal basis is degenerate, so other optimal vertices may exist.
    degenerate: bool = False


# ----------------------------------------------------------------------------
# feasibility and certificate checks


def check_feasible(lp: LinearProgram, point: Mapping[str, object]) -> list[str]:
    """Labels of the constraints violated by ``point`` (missing variables are 0)."""
    declared = set(lp.variables)
    for v in point:
        if v not in declared:
            raise ValueError(f"unknown variable {v!r}")
    pt = {v: _frac(x) for v, x in point.items()}
    return [con.label for con in lp.constraints if not con.holds(pt)]


def _dual_sign_ok(rel: str, y: Fraction, sense: str) -> bool:
    if rel == "=":
        return True
    nonneg_rel = "<=" if sense == "max" else ">="
    return y >= 0 if rel == nonneg_rel else y <= 0


def verify_optimality(lp: LinearProgram, sol: LpSolution) -> bool:
    """Exact check of primal feasibility, dual feasibility and equal objectives."""
    if sol.status != OPTIMAL:
        return False
    if check_feasible(lp, sol.primal):
        return False
    labels = {con.label for con in lp.constraints}
    if any(k not in labels for k in sol.dual):
        return False
    combo: dict[str, Fraction] = {}
    dual_obj = Fraction(0)
    for con in lp.constraints:
        y = _frac(sol.dual.get(con.label, 0))
        if not _dual_sign_ok(con.rel, y, lp.sense):
            return False
        if y:
            dual_obj += y * con.rhs
            for v, a in con.coeffs.items():
                combo[v] = combo.get(v, 0) + y * a
    for v in lp.variables:
        if combo.get(v, 0) != lp.objective.get(v, 0):
            return False
    primal_obj = lp.objective_value(sol.primal)
    return primal_obj == dual_obj and (sol.objective_value is None or sol.objective_value == primal_obj)


def verify_infeasibility(lp: LinearProgram, sol: LpSolution) -> bool:
    """Check that ``sol.dual`` is a Farkas ray deriving ``0 >= positive``."""
    if sol.status != INFEASIBLE:
        return False
    combo: dict[str, Fraction] = {}
    total = Fraction(0)
    for con in lp.constraints:
        y = _frac(sol.dual.get(con.label, 0))
        if (con.rel == ">=" and y < 0) or (con.rel == "<=" and y > 0):
            return False
        total += y * con.rhs
        for v, a in con.coeffs.items():
            combo[v] = combo.get(v, 0) + y * a
    return all(c == 0 for c in combo.values()) and total > 0


def verify_unboundedness(lp: LinearProgram, sol: LpSolution) -> bool:
    """Check that ``sol.primal`` is feasible and ``sol.ray`` an improving recession direction."""
    if sol.status != UNBOUNDED or sol.ray is None or check_feasible(lp, sol.primal):
        return False
    for con in lp.constraints:
        slope = con.lhs(sol.ray)
        if (con.rel == "<=" and slope > 0) or (con.rel == ">=" and slope < 0) or (con.rel == "=" and slope):
            return False
    gain = lp.objective_value(sol.ray)
    return gain > 0 if lp.sense == "max" else gain < 0


# ----------------------------------------------------------------------------
# simplex on the standard form  min cost.z  s.t.  sum_j z_j col_j = rhs, z >= 0


@dataclass
class _SimplexResult:
    status: str
    values: dict[int, Fraction] = field(default_factory=dict)
    multipliers: list[Fraction] = field(default_factory=list)
    degenerate: bool = False


def _standard_simplex(
    m: int, cols: Sequence[Mapping[int, int]], costs: Sequence[Fraction], rhs: Sequence[Fraction]
) -> _SimplexResult:
    """Two-phase revised simplex with Bland's rule.

    Returns ``optimal`` with basic values and the row multipliers ``pi``
    (``pi . col_j <= cost_j`` for every column), ``infeasible`` with a Farkas
    vector (``pi . col_j <= 0`` for every column, ``pi . rhs > 0``), or
    ``unbounded`` with a ray in ``values``.
    """
    N = len(cols)
    flip = [1 if r >= 0 else -1 for r in rhs]
    A = [{k: flip[k] * a for k, a in col.items()} for col in cols]
    basis = [N + k for k in range(m)]
    in_basis = set(basis)
    binv = [[Fraction(int(i == k)) for k in range(m)] for i in range(m)]
    xb = [Fraction(abs(r)) for r in rhs]

    def column(j: int) -> list[Fraction]:
        if j >= N:
            return [row[j - N] for row in binv]
        col = A[j]
        return [sum((row[k] * a for k, a in col.items()), Fraction(0)) for row in binv]

    def pivot(r: int, j: int, u: list[Fraction]) -> None:
        ur = u[r]
        prow = [x / ur for x in binv[r]]
        binv[r] = prow
        xb[r] /= ur
        for i in range(m):
            if i != r and u[i]:
                f = u[i]
                binv[i] = [a - f * b for a, b in zip(binv[i], prow)]
                xb[i] -= f * xb[r]
        in_basis.discard(basis[r])
        basis[r] = j
        in_basis.add(j)

    def multipliers(cost) -> list[Fraction]:
        pi = [Fraction(0)] * m
        for i in range(m):
            cb = cost(basis[i])
            if cb:
                row = binv[i]
                for k in range(m):
                    if row[k]:
                        pi[k] += cb * row[k]
        return pi

    def run(cost) -> tuple[str, int, list[Fraction], Fraction]:
        while True:
            pi = multipliers(cost)
            entering, reduced = -1, Fraction(0)
            for j in range(N):
                if j in in_basis:
                    continue
                d = cost(j) - sum((pi[k] * a for k, a in A[j].items()), Fraction(0))
                if d < 0:
                    entering, reduced = j, d
                    break
            if entering < 0:
                return "optimal", -1, [], Fraction(0)
            u = column(entering)
            best, leave = None, -1
            for i in range(m):
                if u[i] > 0:
                    ratio = xb[i] / u[i]
                    if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                        best, leave = ratio, i
            if leave < 0:
                return "unbounded", entering, u, reduced
            pivot(leave, entering, u)

    def unflip(pi: list[Fraction]) -> list[Fraction]:
        return [p * f for p, f in zip(pi, flip)]

    phase1 = lambda j: 1 if j >= N else 0  # noqa: E731
    run(phase1)
    infeas = sum((xb[i] for i in range(m) if basis[i] >= N), Fraction(0))
    if infeas > 0:
        return _SimplexResult("infeasible", multipliers=unflip(multipliers(phase1)))

    for r in range(m):
        if basis[r] < N:
            continue
        for j in range(N):
            if j in in_basis:
                continue
            if sum((binv[r][k] * a for k, a in A[j].items()), Fraction(0)):
                pivot(r, j, column(j))
                break

    phase2 = lambda j: costs[j] if j < N else 0  # noqa: E731
    status, entering, u, _ = run(phase2)
    if status == "unbounded":
        ray = {entering: Fraction(1)}
        for i in range(m):
            if basis[i] < N and u[i]:
                ray[basis[i]] = -u[i]
        return _SimplexResult("unbounded", values=ray)
    values = {basis[i]: xb[i] for i in range(m) if basis[i] < N}
    degenerate = any(x == 0 for x in xb)
    return _SimplexResult("optimal", values=values, multipliers=unflip(multipliers(phase2)), degenerate=degenerate)


# ----------------------------------------------------------------------------
# presolve + dual formulation


@dataclass
class _Row:
    coeffs: dict[str, int]
    rel: str
    rhs: Fraction
    scale: Fraction  # scaled row = scale * original row


def _integer_row(coeffs: Mapping[str, Fraction]) -> tuple[dict[str, int], Fraction]:
    if not coeffs:
        return {}, Fraction(1)
    lcm = 1
    for a in coeffs.values():
        lcm = lcm * a.denominator // math.gcd(lcm, a.denominator)
    ints = {v: int(a * lcm) for v, a in coeffs.items()}
    g = 0
    for a in ints.values():
        g = math.gcd(g, a)
    return {v: a // g for v, a in ints.items()}, Fraction(lcm, g)


def _cancel_fixed(
    y: dict[int, Fraction], rows: Sequence[_Row], fix_order: Sequence[str], fix_row: Mapping[str, int],
    target: Mapping[str, Fraction],
) -> None:
    """Choose multipliers on the fixing rows so the combination matches ``target`` on fixed variables."""
    combo: dict[str, Fraction] = {}
    for i, yi in y.items():
        for v, a in rows[i].coeffs.items():
            combo[v] = combo.get(v, 0) + yi * a
    for v in reversed(fix_order):
        i = fix_row[v]
        row = rows[i]
        yi = (target.get(v, 0) - combo.get(v, 0)) / row.coeffs[v]
        y[i] = y.get(i, 0) + yi
        if yi:
            for w, a in row.coeffs.items():
                combo[w] = combo.get(w, 0) + yi * a


def _solve_max(lp: LinearProgram, c: Mapping[str, Fraction]) -> LpSolution:
    """Maximize ``c . x`` over the constraints of ``lp``; duals in max convention."""
    rows = []
    for con in lp.constraints:
        coeffs, scale = _integer_row(con.coeffs)
        rows.append(_Row(coeffs, con.rel, con.rhs * scale, scale))

    # fix variables pinned by singleton equality rows
    fixed: dict[str, Fraction] = {}
    fix_row: dict[str, int] = {}
    fix_order: list[str] = []
    fixing_rows: set[int] = set()
    changed = True
    while changed:
        changed = False
        for i, row in enumerate(rows):
            if row.rel != "=" or i in fixing_rows:
                continue
            loose = [v for v in row.coeffs if v not in fixed]
            if len(loose) != 1:
                continue
            v = loose[0]
            rest = sum((a * fixed[w] for w, a in row.coeffs.items() if w in fixed), Fraction(0))
            fixed[v] = (row.rhs - rest) / row.coeffs[v]
            fix_row[v] = i
            fix_order.append(v)
            fixing_rows.add(i)
            changed = True

    def to_labels(y: Mapping[int, Fraction]) -> dict[str, Fraction]:
        return {lp.constraints[i].label: yi * rows[i].scale for i, yi in y.items() if yi}

    def infeasible(y: dict[int, Fraction]) -> LpSolution:
        # y is in max convention (sum y a = 0, sum y b < 0); report 0 >= positive
        _cancel_fixed(y, rows, fix_order, fix_row, {})
        return LpSolution(INFEASIBLE, dual={k: -v for k, v in to_labels(y).items()},
                          certificate_kind="infeasibility-ray")

    free = [v for v in lp.variables if v not in fixed]
    col_of = {v: k for k, v in enumerate(free)}
    unique: dict[tuple, int] = {}
    reduced: list[tuple[int, dict[int, int], Fraction]] = []
    for i, row in enumerate(rows):
        if i in fixing_rows:
            continue
        red = {col_of[v]: a for v, a in row.coeffs.items() if v not in fixed}
        rhs = row.rhs - sum((a * fixed[v] for v, a in row.coeffs.items() if v in fixed), Fraction(0))
        if not red:
            ok = rhs >= 0 if row.rel == "<=" else rhs <= 0 if row.rel == ">=" else rhs == 0
            if not ok:
                return infeasible({i: Fraction(1 if rhs < 0 else -1)})
            continue
        key = (tuple(sorted(red.items())), row.rel, rhs)
        if key in unique:
            continue
        unique[key] = i
        reduced.append((i, red, rhs))

    cols: list[dict[int, int]] = []
    costs: list[Fraction] = []
    owner: list[tuple[int, int]] = []  # (row index, sign of y per unit of z)
    for i, red, rhs in reduced:
        rel = rows[i].rel
        if rel in ("<=", "="):
            cols.append(red)
            costs.append(rhs)
            owner.append((i, 1))
        if rel in (">=", "="):
            cols.append({k: -a for k, a in red.items()})
            costs.append(-rhs)
            owner.append((i, -1))

    target = [c.get(v, Fraction(0)) for v in free]
    res = _standard_simplex(len(free), cols, costs, target)

    def rows_from_columns(z: Mapping[int, Fraction]) -> dict[int, Fraction]:
        y: dict[int, Fraction] = {}
        for j, zj in z.items():
            i, s = owner[j]
            y[i] = y.get(i, 0) + s * zj
        return y

    if res.status == "unbounded":
        return infeasible(rows_from_columns(res.values))

    if res.status == "infeasible":
        direction = {v: p for v, p in zip(free, res.multipliers) if p}
        start = _solve_max(lp, {})
        if start.status != OPTIMAL:
            return start
        return LpSolution(UNBOUNDED, primal=start.primal, ray={v: direction.get(v, Fraction(0)) for v in lp.variables},
                          certificate_kind="unbounded-ray")

    primal = {}
    values = dict(zip(free, res.multipliers))
    for v in lp.variables:
        primal[v] = fixed[v] if v in fixed else values[v]
    y = rows_from_columns(res.values)
    _cancel_fixed(y, rows, fix_order, fix_row, c)
    value = sum((a * primal[v] for v, a in c.items()), Fraction(0))
    return LpSolution(OPTIMAL, primal=primal, objective_value=value, dual=to_labels(y),
                      certificate_kind="optimality", degenerate=res.degenerate)


def solve(lp: LinearProgram) -> LpSolution:
    """Solve ``lp`` exactly.

    Variables pinned by singleton equality rows are substituted out, duplicate
    rows are merged, and the remaining problem is solved through its dual in
    standard form, which has one equality row per free variable.  The primal
    point is read off the simplex multipliers.
    """
    sign = 1 if lp.sense == "max" else -1
    sol = _solve_max(lp, {v: sign * a for v, a in lp.objective.items()})
    if sol.status == OPTIMAL:
        sol.objective_value = lp.objective_value(sol.primal)
        if sign < 0:
            sol.dual = {k: -v for k, v in sol.dual.items()}
    return sol


# ----------------------------------------------------------------------------
# text format


def _fmt(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _parse_frac(tok: str) -> Fraction:
    num, sep, den = tok.partition("/")
    if not sep:
        raise ValueError(f"expected p/q rational, got {tok!r}")
    return Fraction(int(num), int(den))


def _terms(order: Sequence[str], coeffs: Mapping[str, Fraction]) -> str:
    parts = [f"{v}:{_fmt(coeffs[v])}" for v in order if v in coeffs]
    return " ".join(parts) if parts else "0"


def export_text(lp: LinearProgram) -> str:
    lines = ["lp v1", f"sense {lp.sense}"]
    lines += [f"var {v}" for v in lp.variables]
    lines.append(f"obj {_terms(lp.variables, lp.objective)}")
    for con in lp.constraints:
        lines.append(f"con {con.label} : {_terms(lp.variables, con.coeffs)} {con.rel} {_fmt(con.rhs)}")
    return "\n".join(lines) + "\n"


def _parse_terms(tokens: Sequence[str]) -> dict[str, Fraction]:
    if list(tokens) == ["0"]:
        return {}
    out = {}
    for tok in tokens:
        name, sep, val = tok.partition(":")
        if not sep or name in out:
            raise ValueError(f"bad term {tok!r}")
        out[name] = _parse_frac(val)
    return out


def parse_text(text: str) -> LinearProgram:
    lines = text.splitlines()
    if not lines or lines[0].strip() != "lp v1":
        raise ValueError("missing 'lp v1' header")
    sense = None
    variables: list[str] = []
    objective: dict[str, Fraction] | None = None
    constraints = []
    for lineno, line in enumerate(lines[1:], start=2):
        tokens = line.split()
        if not tokens:
            continue
        head = tokens[0]
        if head == "sense" and len(tokens) == 2:
            sense = tokens[1]
        elif head == "var" and len(tokens) == 2:
            variables.append(tokens[1])
        elif head == "obj":
            objective = _parse_terms(tokens[1:])
        elif head == "con" and len(tokens) >= 6 and tokens[2] == ":":
            constraints.append(Constraint(_parse_terms(tokens[3:-2]), tokens[-2], _parse_frac(tokens[-1]), tokens[1]))
        else:
            raise ValueError(f"line {lineno}: cannot parse {line!r}")
    if sense is None or objective is None:
        raise ValueError("missing sense or obj line")
    return LinearProgram(tuple(variables), sense, objective, tuple(constraints))
