import itertools
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from krawlp.hierarchy import Instance, build_kraw_pseudo
from krawlp.lp import (
    INFEASIBLE,
    OPTIMAL,
    UNBOUNDED,
    Constraint,
    LinearProgram,
    LpSolution,
    check_feasible,
    export_text,
    parse_text,
    solve,
    verify_infeasibility,
    verify_optimality,
    verify_unboundedness,
)

GOLDEN = Path(__file__).parent / "golden"
F = Fraction


def lp(variables, sense, objective, rows):
    cons = [Constraint(c, rel, rhs, f"r{i}") for i, (c, rel, rhs) in enumerate(rows)]
    return LinearProgram(tuple(variables), sense, objective, tuple(cons))


def single_constraint_model():
    return LinearProgram(("x", "y"), "max", {"x": F(3, 2), "y": 1},
                         (Constraint({"x": 1, "y": F(-2, 3)}, "<=", F(5, 7), "cap"),))


# ----------------------------------------------------------------------------
# brute-force vertex oracle


def solve_square(a, b):
    """Exact Gaussian elimination; None when singular."""
    m = [list(r) + [v] for r, v in zip(a, b)]
    k = len(m)
    for col in range(k):
        piv = next((i for i in range(col, k) if m[i][col]), None)
        if piv is None:
            return None
        m[col], m[piv] = m[piv], m[col]
        for i in range(k):
            if i != col and m[i][col]:
                f = m[i][col] / m[col][col]
                m[i] = [x - f * y for x, y in zip(m[i], m[col])]
    return [m[i][k] / m[i][i] for i in range(k)]


def vertex_optimum(prog: LinearProgram):
    """Best objective over all basic feasible points, or None if there is none."""
    names = prog.variables
    rows = [([c.coeffs.get(v, F(0)) for v in names], c.rhs) for c in prog.constraints]
    best = None
    for subset in itertools.combinations(rows, len(names)):
        x = solve_square([r for r, _ in subset], [b for _, b in subset])
        if x is None:
            continue
        point = dict(zip(names, x))
        if check_feasible(prog, point):
            continue
        val = prog.objective_value(point)
        if best is None or (val > best if prog.sense == "max" else val < best):
            best = val
    return best


small = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@st.composite
def boxed_programs(draw):
    """Random LP in 2 or 3 variables with a bounding box, so it is bounded."""
    nvars = draw(st.integers(2, 3))
    names = [f"x{i}" for i in range(nvars)]
    rows = []
    for v in names:
        rows.append(({v: 1}, "<=", draw(st.integers(0, 6))))
        rows.append(({v: 1}, ">=", draw(st.integers(-6, 0))))
    for _ in range(draw(st.integers(0, 4))):
        coeffs = {v: draw(small) for v in names}
        rows.append((coeffs, draw(st.sampled_from(["<=", ">=", "="])), draw(small)))
    obj = {v: draw(small) for v in names}
    return lp(names, draw(st.sampled_from(["max", "min"])), obj, rows)


@settings(max_examples=150, deadline=None)
@given(boxed_programs())
def test_solver_matches_vertex_enumeration(prog):
    sol = solve(prog)
    expected = vertex_optimum(prog)
    if expected is None:
        assert sol.status == INFEASIBLE
        assert verify_infeasibility(prog, sol)
    else:
        assert sol.status == OPTIMAL
        assert sol.objective_value == expected
        assert verify_optimality(prog, sol)


@settings(max_examples=60, deadline=None)
@given(boxed_programs(), st.integers(1, 9), st.integers(1, 9))
def test_scaling_rows_and_objective(prog, row_scale, obj_scale):
    scaled = LinearProgram(
        prog.variables, prog.sense, {v: a * obj_scale for v, a in prog.objective.items()},
        tuple(Constraint({v: a * row_scale for v, a in c.coeffs.items()}, c.rel, c.rhs * row_scale, c.label)
              for c in prog.constraints),
    )
    a, b = solve(prog), solve(scaled)
    assert a.status == b.status
    if a.status == OPTIMAL:
        assert b.objective_value == a.objective_value * obj_scale
        assert verify_optimality(scaled, b)


# ----------------------------------------------------------------------------
# examples


def test_simple_optimum():
    prog = lp(["x"], "max", {"x": 1}, [({"x": 1}, "<=", 1), ({"x": 1}, ">=", 0)])
    sol = solve(prog)
    assert sol.status == OPTIMAL and sol.objective_value == 1
    assert sol.certificate_kind == "optimality"
    assert verify_optimality(prog, sol)


def test_infeasible_with_ray():
    prog = lp(["x"], "max", {"x": 1}, [({"x": 1}, ">=", 1), ({"x": 1}, "<=", 0)])
    sol = solve(prog)
    assert sol.status == INFEASIBLE
    assert sol.certificate_kind == "infeasibility-ray"
    assert verify_infeasibility(prog, sol)
    assert not verify_optimality(prog, sol)


def test_infeasible_equalities():
    prog = lp(["x", "y"], "min", {"x": 1}, [({"x": 1, "y": 1}, "=", 1), ({"x": 2, "y": 2}, "=", 3)])
    sol = solve(prog)
    assert sol.status == INFEASIBLE and verify_infeasibility(prog, sol)


def test_unbounded_with_ray():
    prog = lp(["x", "y"], "max", {"x": 1, "y": 1}, [({"x": 1, "y": -1}, "<=", 2), ({"y": 1}, ">=", 0)])
    sol = solve(prog)
    assert sol.status == UNBOUNDED
    assert sol.certificate_kind == "unbounded-ray"
    assert verify_unboundedness(prog, sol)


def test_minimize_unbounded_below():
    prog = lp(["x"], "min", {"x": 1}, [({"x": 1}, "<=", 3)])
    sol = solve(prog)
    assert sol.status == UNBOUNDED and verify_unboundedness(prog, sol)


def test_no_constraints():
    assert solve(lp(["x"], "max", {}, [])).status == OPTIMAL
    assert solve(lp(["x"], "max", {"x": 1}, [])).status == UNBOUNDED


def test_degenerate_cycling_example():
    # Beale's classic cycling example; Bland's rule must terminate
    prog = lp(
        ["x1", "x2", "x3", "x4"], "max",
        {"x1": F(3, 4), "x2": -150, "x3": F(1, 50), "x4": -6},
        [
            ({"x1": F(1, 4), "x2": -60, "x3": F(-1, 25), "x4": 9}, "<=", 0),
            ({"x1": F(1, 2), "x2": -90, "x3": F(-1, 50), "x4": 3}, "<=", 0),
            ({"x3": 1}, "<=", 1),
        ] + [({v: 1}, ">=", 0) for v in ["x1", "x2", "x3", "x4"]],
    )
    sol = solve(prog)
    assert sol.status == OPTIMAL and sol.objective_value == F(1, 20)
    assert verify_optimality(prog, sol)


def test_kraw_model_value():
    from krawlp.field import FieldSpec
    from krawlp.lattice import enumerate_subspaces
    lat = enumerate_subspaces(FieldSpec.of(2), 3)
    prog = build_kraw_pseudo(Instance.of(2, 3, 2, 3), lat)
    sol = solve(prog)
    assert sol.status == OPTIMAL and sol.objective_value == 64
    assert verify_optimality(prog, sol)


# ----------------------------------------------------------------------------
# feasibility and certificates


def test_check_feasible():
    prog = lp(["x", "y"], "max", {}, [({"x": 1, "y": 1}, "=", 1), ({"x": 1}, ">=", 0)])
    assert check_feasible(prog, {"x": F(1, 2), "y": F(1, 2)}) == []
    assert check_feasible(prog, {"x": F(1, 2), "y": 0}) == ["r0"]
    with pytest.raises(ValueError):
        check_feasible(prog, {"z": 1})


def test_hand_built_certificate():
    prog = lp(["x"], "max", {"x": 1}, [({"x": 1}, "<=", 1)])
    good = LpSolution(OPTIMAL, primal={"x": F(1)}, objective_value=F(1), dual={"r0": F(1)})
    assert verify_optimality(prog, good)
    wrong_sign = LpSolution(OPTIMAL, primal={"x": F(1)}, objective_value=F(1), dual={"r0": F(-1)})
    assert not verify_optimality(prog, wrong_sign)


def test_perturbed_solution_fails_verification():
    prog = single_constraint_model()
    prog = LinearProgram(prog.variables, "max", {"x": 1, "y": 1},
                         prog.constraints + (Constraint({"y": 1}, "<=", 2, "ybound"),))
    sol = solve(prog)
    assert verify_optimality(prog, sol)
    for v in prog.variables:
        for delta in (F(1, 10**6), F(-1, 10**6)):
            bad = LpSolution(sol.status, dict(sol.primal), sol.objective_value, dict(sol.dual))
            bad.primal[v] += delta
            assert not verify_optimality(prog, bad)


def test_invalid_models_rejected():
    with pytest.raises(ValueError):
        Constraint({"x": 1}, "<", 0, "bad")
    with pytest.raises(ValueError):
        LinearProgram(("x",), "maximize", {}, ())
    with pytest.raises(ValueError):
        LinearProgram(("x",), "max", {"y": 1}, ())
    with pytest.raises(ValueError):
        LinearProgram(("x", "x"), "max", {}, ())
    with pytest.raises(ValueError):
        LinearProgram(("x",), "max", {}, (Constraint({"x": 1}, "=", 0, "a"), Constraint({"x": 1}, "=", 0, "a")))


# ----------------------------------------------------------------------------
# text format


def test_golden_single_constraint():
    assert export_text(single_constraint_model()) == (GOLDEN / "single_constraint.lp").read_text()


def test_round_trip_kraw_model():
    from krawlp.field import FieldSpec
    from krawlp.lattice import enumerate_subspaces
    lat = enumerate_subspaces(FieldSpec.of(2), 2)
    prog = build_kraw_pseudo(Instance.of(2, 2, 2, 2), lat)
    again = parse_text(export_text(prog))
    assert again == prog
    assert export_text(again) == export_text(prog)


def test_empty_objective_and_row():
    prog = LinearProgram(("x",), "max", {}, (Constraint({}, "<=", 1, "trivial"),))
    text = export_text(prog)
    assert "obj 0\n" in text
    assert "con trivial : 0 <= 1/1\n" in text
    assert parse_text(text) == prog


@settings(max_examples=50, deadline=None)
@given(boxed_programs())
def test_round_trip_random(prog):
    assert parse_text(export_text(prog)) == prog


@pytest.mark.parametrize("text", [
    "",
    "lp v2\nsense max\nobj 0\n",
    "lp v1\nsense max\nvar x\n",
    "lp v1\nsense max\nvar x\nobj x:1\n",
    "lp v1\nsense max\nvar x\nobj x:1/1\ncon c x:1/1 <= 1/1\n",
])
def test_parse_errors(text):
    with pytest.raises(ValueError):
        parse_text(text)
