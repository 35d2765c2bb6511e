"""Routing tests: permutations, the validator, and every synthesizer.

Plans are always checked through validate_plan here, independently of the
synthesizers' own internal checks.
"""
from __future__ import annotations

import pytest

from fibrocube import (
    add,
    build_cube,
    cyclic_row_shift,
    generate_analytic,
    identity,
    measure_t,
    perm_from_matrix,
    plan_from_json_obj,
    plan_to_json_obj,
    reversal,
    route_coord_transposition,
    route_coordinate_cycle,
    route_linear_fibonacci,
    route_lucas,
    route_reversal,
    route_transposition_triple,
    unit,
    validate_plan,
)
from fibrocube.errors import (
    InvalidCoordinatesError,
    MatrixNotGoodError,
    NotAPathError,
    UnsupportedMatrixError,
)
from fibrocube.route import (
    RoutingPlan,
    Step,
    VertexPermutation,
    _exact_search,
    identity_perm,
)


def bits(s: str) -> int:
    return sum(1 << i for i, ch in enumerate(s) if ch == "1")


def compose_steps(plan):
    g = plan.target.g
    cur = list(range(len(g)))
    for st in plan.steps:
        cur = [st.image[c] for c in cur]
    return tuple(cur)


# ---------------------------------------------------------------------------
# permutations and measurement

def test_perm_from_identity_is_identity():
    g = build_cube("fibonacci", 4)
    assert perm_from_matrix(identity(4), g).image == tuple(range(len(g)))


def test_perm_from_reversal_on_f3():
    g = build_cube("fibonacci", 3)
    p = perm_from_matrix(reversal(3), g)
    fixed = {bits("000"), bits("010"), bits("101")}
    for i, j in enumerate(p.image):
        u, v = g.vertices[i], g.vertices[j]
        if u in fixed:
            assert i == j
    assert p.image[g.index_of[bits("100")]] == g.index_of[bits("001")]
    assert p.image[g.index_of[bits("001")]] == g.index_of[bits("100")]


def test_perm_from_matrix_moves_exactly_x3_vertices():
    g = build_cube("fibonacci", 4)
    p = perm_from_matrix(add(identity(4), unit(4, 1, 3)), g)
    for i, j in enumerate(p.image):
        has_x3 = bool(g.vertices[i] & 0b0100)
        assert (i != j) == has_x3


def test_perm_from_matrix_rejects_bad_matrix_with_witness():
    g = build_cube("lucas", 5)
    from fibrocube.gf2 import BinMatrix

    swap12 = BinMatrix(5, (2, 1, 4, 8, 16))
    with pytest.raises(MatrixNotGoodError) as err:
        perm_from_matrix(swap12, g)
    assert err.value.witness is not None


def test_measure_t_values():
    g = build_cube("fibonacci", 5)
    assert measure_t(identity_perm(g)) == 0
    assert measure_t(perm_from_matrix(add(identity(5), unit(5, 1, 3)), g)) == 1
    two_offsets = add(add(identity(5), unit(5, 1, 3)), unit(5, 5, 3))
    assert measure_t(perm_from_matrix(two_offsets, g)) == 2


@pytest.mark.parametrize("n,expected", [(4, 1), (5, 2), (6, 1), (7, 2), (8, 2)])
def test_measure_t_of_double_offset_depends_on_n(n, expected):
    # displacement is x_3 e_1 + x_{n-2} e_n; for n in {4, 6} coordinates 3
    # and n-2 are equal or adjacent, so both offsets never fire together
    g = build_cube("fibonacci", n)
    a = add(add(identity(n), unit(n, 1, 3)), unit(n, n, n - 2))
    assert measure_t(perm_from_matrix(a, g)) == expected


# ---------------------------------------------------------------------------
# validator

def test_zero_step_identity_plan_is_valid():
    g = build_cube("fibonacci", 4)
    plan = RoutingPlan(target=identity_perm(g), steps=[], declared_bound=0)
    rep = validate_plan(plan)
    assert rep.valid and rep.steps == 0 and rep.bound_ok


def test_validator_flags_move_to_non_neighbor():
    g = build_cube("fibonacci", 4)
    i, j = g.index_of[bits("1000")], g.index_of[bits("0001")]  # distance 2
    image = list(range(len(g)))
    image[i], image[j] = j, i
    plan = RoutingPlan(
        target=VertexPermutation(g, tuple(image)),
        steps=[Step(g, tuple(image))],
    )
    rep = validate_plan(plan)
    assert not rep.valid
    assert rep.failures[0].step == 0
    assert rep.failures[0].vertex == "1000"
    assert rep.failures[0].reason == "move-to-non-neighbor"


def test_validator_flags_composition_mismatch_and_bound():
    g = build_cube("fibonacci", 4)
    plan = RoutingPlan(
        target=perm_from_matrix(reversal(4), g), steps=[], declared_bound=0
    )
    rep = validate_plan(plan)
    assert not rep.valid and rep.bound_ok
    assert rep.failures[0].step == -1
    assert rep.failures[0].reason == "composition-mismatch"
    good = route_reversal(g)
    over = RoutingPlan(target=good.target, steps=good.steps, declared_bound=1)
    rep2 = validate_plan(over)
    assert not rep2.valid and not rep2.bound_ok


def test_validator_flags_non_bijection():
    g = build_cube("fibonacci", 4)
    image = list(range(len(g)))
    image[0] = 1  # two tokens land on vertex 1
    plan = RoutingPlan(target=identity_perm(g), steps=[Step(g, tuple(image))])
    rep = validate_plan(plan)
    assert not rep.valid
    assert rep.failures[0].reason == "not-a-bijection"


# ---------------------------------------------------------------------------
# synthesizers

def test_transposition_triple_on_f2():
    g = build_cube("fibonacci", 2)
    plan = route_transposition_triple(g, bits("10"), bits("00"), bits("01"))
    assert len(plan.steps) == 3
    assert validate_plan(plan).valid
    i, j = g.index_of[bits("10")], g.index_of[bits("01")]
    assert plan.target.image[i] == j and plan.target.image[j] == i


def test_transposition_triple_rejects_degenerate_and_non_paths():
    g = build_cube("fibonacci", 3)
    with pytest.raises(NotAPathError):
        route_transposition_triple(g, bits("100"), bits("000"), bits("100"))
    with pytest.raises(NotAPathError):
        route_transposition_triple(g, bits("100"), bits("001"), bits("000"))


def test_coord_transposition_f4_partial_semantics():
    g = build_cube("fibonacci", 4)
    plan = route_coord_transposition(g, 1, 3)
    assert len(plan.steps) == 3
    assert validate_plan(plan).valid
    img = plan.target.image
    # e_1 and e_3 swap
    assert img[g.index_of[bits("1000")]] == g.index_of[bits("0010")]
    # 1001's swapped partner 0011 is not a vertex, so 1001 stays fixed:
    # the total coordinate swap is not a permutation of the cube
    i1001 = g.index_of[bits("1001")]
    assert img[i1001] == i1001


def test_coord_transposition_l5_and_t_value():
    g = build_cube("lucas", 5)
    plan = route_coord_transposition(g, 1, 3)
    assert len(plan.steps) == 3
    assert validate_plan(plan).valid
    assert measure_t(plan.target) == 2


def test_coord_transposition_always_three_steps_for_n_ge_2():
    for kind in ("fibonacci", "lucas"):
        for n in range(2, 8):
            g = build_cube(kind, n)
            for i, j in ((1, n), (1, 2)):
                if i == j:
                    continue
                plan = route_coord_transposition(g, min(i, j), max(i, j))
                assert len(plan.steps) == 3
                assert validate_plan(plan).valid


def test_coord_transposition_rejects_bad_coordinates():
    g = build_cube("fibonacci", 4)
    with pytest.raises(InvalidCoordinatesError):
        route_coord_transposition(g, 3, 3)
    with pytest.raises(InvalidCoordinatesError):
        route_coord_transposition(g, 0, 2)


@pytest.mark.parametrize("kind", ["fibonacci", "lucas"])
@pytest.mark.parametrize("n", range(2, 9))
def test_route_reversal_valid_and_counts(kind, n):
    g = build_cube(kind, n)
    plan = route_reversal(g)
    assert validate_plan(plan).valid
    assert compose_steps(plan) == perm_from_matrix(reversal(n), g).image
    if kind == "lucas" and n == 4:
        assert len(plan.steps) == 7
    else:
        assert len(plan.steps) == 3 * (n // 2)


def test_l4_reversal_needs_seven_steps():
    # exhaustive: no 6-step factorization exists, 7 is optimal.  0000 is
    # the only vertex joining the two halves; all six moved messages must
    # pass through it at distinct step ends, and the last step end must
    # leave it to its own message.
    g = build_cube("lucas", 4)
    target = perm_from_matrix(reversal(4), g).image
    assert _exact_search(g, target, max_depth=6) is None
    assert len(_exact_search(g, target, max_depth=7)) == 7


def test_route_linear_fibonacci_step_counts():
    for n in (5, 6):
        g = build_cube("fibonacci", n)
        half = 3 * (n // 2)
        expected = {
            identity(n): 0,
            add(identity(n), unit(n, 1, 3)): 1,
            add(identity(n), unit(n, n, n - 2)): 1,
            add(add(identity(n), unit(n, 1, 3)), unit(n, n, n - 2)): 2,
            reversal(n): half,
            add(reversal(n), unit(n, n, 3)): half + 1,
            add(reversal(n), unit(n, 1, n - 2)): half + 1,
            add(add(reversal(n), unit(n, n, 3)), unit(n, 1, n - 2)): half + 2,
        }
        for a, count in expected.items():
            plan = route_linear_fibonacci(g, a)
            assert len(plan.steps) == count, a
            assert validate_plan(plan).valid
            assert compose_steps(plan) == perm_from_matrix(a, g).image


def test_route_linear_fibonacci_rejects_outsiders():
    g = build_cube("fibonacci", 5)
    with pytest.raises(UnsupportedMatrixError):
        route_linear_fibonacci(g, cyclic_row_shift(identity(5), 1))
    with pytest.raises(UnsupportedMatrixError):
        route_linear_fibonacci(build_cube("lucas", 5), identity(5))


def test_route_coordinate_cycle_shift_zero_is_empty():
    g = build_cube("lucas", 5)
    plan = route_coordinate_cycle(g, 0)
    assert plan.steps == [] and validate_plan(plan).valid


@pytest.mark.parametrize("n", [5, 6, 7])
def test_route_coordinate_cycle_valid_within_bound(n):
    g = build_cube("lucas", n)
    for k in range(n):
        plan = route_coordinate_cycle(g, k)
        assert validate_plan(plan).valid
        assert len(plan.steps) <= 3 * (n - 1)
        a = cyclic_row_shift(identity(n), k)
        assert compose_steps(plan) == perm_from_matrix(a, g).image
    assert plan.diagnostics["transposition_t"]["(1,3)"] == 2


def test_route_lucas_covers_rotations_and_reflections():
    for n in (5, 6):
        g = build_cube("lucas", n)
        for a in generate_analytic("lucas", n):
            plan = route_lucas(g, a)
            assert validate_plan(plan).valid
            assert compose_steps(plan) == perm_from_matrix(a, g).image
            assert len(plan.steps) <= 3 * (n - 1)
            assert plan.diagnostics["factored_bound"] == n + 3 * (n // 2)


def test_route_lucas_rejects_outsiders():
    g = build_cube("lucas", 5)
    with pytest.raises(UnsupportedMatrixError):
        route_lucas(g, add(identity(5), unit(5, 1, 3)))


# ---------------------------------------------------------------------------
# serialization

def test_plan_json_round_trip():
    g = build_cube("fibonacci", 5)
    plan = route_linear_fibonacci(g, add(reversal(5), unit(5, 5, 3)))
    obj = plan_to_json_obj(plan)
    assert obj["kind"] == "fibonacci" and obj["n"] == 5
    assert obj["declared_bound"] == 7
    # moves are source-sorted bitstring pairs
    for step in obj["steps"]:
        sources = [m[0] for m in step]
        assert sources == sorted(sources, key=lambda s: bits(s))
    loaded = plan_from_json_obj(obj)
    rep = validate_plan(loaded)
    assert rep.valid and rep.steps == len(plan.steps)


def test_corrupted_plan_file_is_flagged():
    g = build_cube("fibonacci", 5)
    plan = route_linear_fibonacci(g, reversal(5))
    obj = plan_to_json_obj(plan)
    step = next(s for s in obj["steps"] if s)
    victim = step[0]
    src = victim[0]
    far = next(
        lbl
        for lbl in (g.label(i) for i in range(len(g)))
        if sum(a != b for a, b in zip(lbl, src)) > 1
    )
    victim[1] = far
    loaded = plan_from_json_obj(obj)
    rep = validate_plan(loaded)
    assert not rep.valid
    assert any(f.reason in ("move-to-non-neighbor", "not-a-bijection") for f in rep.failures)
