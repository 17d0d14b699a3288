import random
from itertools import product

import pytest

from heapkit.cartan import Orientation, null_and_highest_root, positive_roots, sgn
from heapkit.catalog import TEST_MATRIX, build
from heapkit.errors import AmbiguousMatch, InvalidCut, NoConsistentEpsilon, NotAPositiveRoot, NotConvex
from heapkit.rep import (
    ZERO,
    HeapModule,
    ModuleVector,
    apply_H_alpha,
    apply_root,
    apply_simple,
    apply_T_D,
    affine_epsilon,
    b_pm,
    bracket,
    chevalley_table,
    find_root_heaps,
    finite_roots,
    first_difference,
    _ratio,
    loop_action,
    verify_affine_layer,
    verify_defining_relations,
    verify_maximal_element_cases,
    verify_root_representability,
)

from oracles import norm_two_vectors, oracle_table

SMALL = [("A_nat", 2, ""), ("A_nat", 4, ""), ("C_fold", 2, ""), ("D_nat", 4, ""), ("D_spin", 5, "plain"),
         ("B_fold", 3, ""), ("A2_twist", 3, ""), ("A1_nat", None, ""), ("E6", None, "heap")]


def add(u, v, s=1):
    return tuple(x + s * y for x, y in zip(u, v))


# ---------------------------------------------------------------- simple operators


@pytest.mark.parametrize("key", SMALL)
def test_simple_operators_invert_and_exclude(key):
    h = build(*key)
    m = HeapModule(h)
    for cut in m.sample_cuts():
        for p in range(h.n):
            x = apply_simple(m, "X", p, cut)
            y = apply_simple(m, "Y", p, cut)
            assert not (x and y)
            if x:
                (top, c), = x.items()
                assert c == 1 and h.is_valid(top)
                assert apply_simple(m, "Y", p, top) == ModuleVector.basis(cut)
            hv = apply_simple(m, "H", p, cut).coefficient(cut)
            assert hv == (1 if y else -1 if x else 0)


def test_natural_a2_weight_diagram():
    h = build("A_nat", 2)
    m = HeapModule(h)
    for cut in h.height_zero_ideals:
        raising = [p for p in range(3) if apply_simple(m, "X", p, cut)]
        lowering = [p for p in range(3) if apply_simple(m, "Y", p, cut)]
        assert len(raising) == 1 and len(lowering) == 1


def test_invalid_cut_rejected():
    m = HeapModule(build("A_nat", 2))
    with pytest.raises(InvalidCut):
        apply_simple(m, "X", 0, (0, 5, 0))
    with pytest.raises(InvalidCut):
        apply_T_D(m, "D", (1, 0))


# ---------------------------------------------------------------- b-plus-minus


def test_b_pm_singletons():
    h = build("D_nat", 4)
    x = (2, 0)
    assert b_pm(h, [x], 2) == (1, 1)
    far = [p for p in range(h.n) if p != 2 and not h.cartan.adjacent(p, 2)]
    for p in far:
        assert b_pm(h, [x], p) == (0, 0)


def test_b_pm_not_convex():
    h = build("A_nat", 2)
    with pytest.raises(NotConvex):
        b_pm(h, [(1, 0), (1, 2)], 1)


def random_slabs(h, count, seed=1, size=6):
    rnd = random.Random(seed)
    cuts = h.ideals_in_heights(-1, 1)
    out = []
    while len(out) < count:
        lo, hi = rnd.choice(cuts), rnd.choice(cuts)
        if lo != hi and all(a <= b for a, b in zip(lo, hi)) and sum(hi) - sum(lo) <= size:
            out.append((lo, hi))
    return out, cuts


def bracket_constant(m, p, L, sample):
    XL = m.X_L(L)
    return _ratio(bracket(m.H(p), XL), XL, sample)


@pytest.mark.parametrize("key", [("A_nat", 2, ""), ("A_nat", 4, ""), ("D_nat", 4, ""), ("E6", None, "heap"), ("C_fold", 2, "")])
def test_slab_brackets_are_scalar(key):
    h = build(*key)
    m = HeapModule(h)
    slabs, cuts = random_slabs(h, 25)
    rnd = random.Random(2)
    for lo, hi in slabs:
        L = h.cut_elements(lo, hi)
        XL, YL = m.X_L(L), m.Y_L(L)
        assert XL.on_basis(lo) == ModuleVector.basis(hi)
        sample = [lo, hi] + rnd.sample(cuts, min(48, len(cuts)))
        for p in range(h.n):
            c = bracket_constant(m, p, L, sample)
            assert -2 <= c <= 2
            assert first_difference(bracket(m.H(p), XL), c * XL, sample) is None
            assert first_difference(bracket(m.H(p), YL), -c * YL, sample) is None


@pytest.mark.parametrize("key", [("A_nat", 2, ""), ("A_nat", 4, ""), ("C_fold", 2, ""), ("C_fold", 3, "")])
def test_b_pm_sum_matches_bracket_on_chains(key):
    h = build(*key)
    m = HeapModule(h)
    slabs, cuts = random_slabs(h, 25)
    for lo, hi in slabs:
        L = h.cut_elements(lo, hi)
        for p in range(h.n):
            assert sum(b_pm(h, L, p)) == bracket_constant(m, p, L, [lo] + cuts)


def test_b_pm_sum_at_a_branch_vertex():
    # both neighbours of a leaf singleton on the branch chain extend it convexly,
    # so the arrow cases give -2 while the bracket is a_pq = -1
    h = build("D_nat", 4)
    m = HeapModule(h)
    L = [(1, 0)]
    assert b_pm(h, L, 2) == (-1, -1)
    assert bracket_constant(m, 2, L, m.sample_cuts()) == h.cartan.a[2][1] == -1


def test_bracket_with_Y_L_is_not_a_multiple_of_X_L():
    # the printed right-hand side -c X_L cannot hold: it acts on other ideals
    h = build("A_nat", 2)
    m = HeapModule(h)
    L = [(1, 0)]
    lhs = bracket(m.H(1), m.Y_L(L))
    rhs = -2 * m.X_L(L)
    assert first_difference(lhs, rhs, m.sample_cuts()) is not None


# ---------------------------------------------------------------- root operators


@pytest.mark.parametrize("key", SMALL)
def test_simple_root_matches_simple_operator(key):
    h = build(*key)
    m = HeapModule(h)
    for cut in h.height_zero_ideals:
        for p in range(h.n):
            e = tuple(int(i == p) for i in range(h.n))
            assert apply_root(m, "X", e, cut) == apply_simple(m, "X", p, cut)
            assert apply_root(m, "Y", e, cut) == apply_simple(m, "Y", p, cut)


def test_not_a_positive_root():
    h = build("A_nat", 3)
    m = HeapModule(h)
    cut = h.height_zero_ideals[0]
    delta, _ = null_and_highest_root(h.cartan)
    for bad in [(0, 2, 0, 0), (0, -1, 0, 0), (0, 0, 0, 0), delta, (1, 0, 1, 0)]:
        with pytest.raises(NotAPositiveRoot):
            apply_root(m, "X", bad, cut)
    with pytest.raises(NotAPositiveRoot):
        apply_H_alpha(m, delta, cut)
    # affine real roots are accepted
    assert apply_root(m, "X", add(delta, (0, 1, 0, 0)), cut) is not None


@pytest.mark.parametrize("key", [("A_nat", 3, ""), ("D_nat", 4, ""), ("D_spin", 5, "twisted")])
def test_composition_sign(key):
    h = build(*key)
    m = HeapModule(h)
    roots = finite_roots(h.cartan)
    cuts = m.sample_cuts()
    rnd = random.Random(7)
    hits = 0
    for _ in range(20000):
        I, al, be = rnd.choice(cuts), rnd.choice(roots), rnd.choice(roots)
        inner = m.X_vec(be)(I)
        if not inner:
            continue
        lhs = m.X_vec(al)(inner)
        if lhs:
            hits += 1
            assert lhs == sgn(m.orientation, al, be) * m.X_vec(add(al, be))(I)
            if hits == 200:
                break
    assert hits == 200


def test_every_a3_root_acts():
    h = build("A_nat", 3)
    m = HeapModule(h)
    roots = finite_roots(h.cartan)
    assert len(roots) == 6
    for al in roots:
        assert any(apply_root(m, "X", al, c) for c in h.height_zero_ideals)


def test_H_alpha():
    h = build("D_nat", 4)
    m = HeapModule(h)
    for cut in h.height_zero_ideals:
        for p in range(h.n):
            e = tuple(int(i == p) for i in range(h.n))
            assert apply_H_alpha(m, e, cut).coefficient(cut) in (-1, 0, 1)
    delta, _ = null_and_highest_root(h.cartan)
    for cut in m.sample_cuts():
        assert sum(c * m.H(i).on_basis(cut).coefficient(cut) for i, c in enumerate(delta)) == 0


def test_find_root_heaps_simple_and_affine():
    h = build("A_nat", 2)
    w = h.materialize(1)
    assert find_root_heaps((0, 1, 0), w) == [[x] for x in w.elements if x[0] == 1]
    delta, _ = null_and_highest_root(h.cartan)
    finite = [(0,) + r for r in positive_roots(h.cartan.delete([0]))]
    gammas = finite + [tuple(-x for x in r) for r in finite]
    affine = [g for g in finite] + [add(g, delta) for g in gammas]
    for al in affine:
        assert find_root_heaps(al, w), al


# ---------------------------------------------------------------- affine operators


def test_height_and_shift():
    h = build("E6", None, "heap")
    m = HeapModule(h)
    assert apply_T_D(m, "D", h.base_ideal) == 0 * ModuleVector.basis(h.base_ideal)
    assert h.height(h.base_ideal) == 0
    for cut in h.height_zero_ideals:
        assert m.Tinv(apply_T_D(m, "T", cut)) == ModuleVector.basis(cut)
    rnd = random.Random(3)
    cuts = h.ideals_in_heights(-2, 2)
    for cut in rnd.sample(cuts, 50):
        Tv = m.T(cut)
        assert m.D(Tv) - m.T(m.D(ModuleVector.basis(cut))) == Tv


def test_loop_action():
    h = build("D_nat", 5)
    m = HeapModule(h)
    _, theta = null_and_highest_root(h.cartan)
    P = m.X_root(theta)
    cuts = m.sample_cuts()
    for c in cuts:
        assert loop_action(m, 0, P, ModuleVector.basis(c)) == P(c)
    for j in range(-2, 3):
        assert any(loop_action(m, j, P, ModuleVector.basis(c)) for c in cuts)


@pytest.mark.parametrize("key", TEST_MATRIX)
def test_affine_layer(key):
    rep = verify_affine_layer(build(*key))
    assert rep.passed, rep.failures[:2]


def test_epsilon_a2_and_orientation_change():
    h = build("A_nat", 2)
    eps = affine_epsilon(h)
    assert eps in (1, -1)
    _, theta = null_and_highest_root(h.cartan)
    o = Orientation.default(h.cartan)
    for i, j in sorted(o.arrows):
        if theta[i] and theta[j]:
            flipped = o.flip(i, j)
            assert affine_epsilon(h, flipped) in (1, -1)
            break


def test_epsilon_with_shift_down_is_impossible():
    # X_0 raises the cut by delta - theta, while T^-1 Y_theta lowers it by delta + theta
    h = build("A_nat", 2)
    with pytest.raises(NoConsistentEpsilon):
        affine_epsilon(h, reading="shift down")


def test_epsilon_twisted_not_applicable():
    with pytest.raises(NoConsistentEpsilon):
        affine_epsilon(build("D2_twist", 2))


# ---------------------------------------------------------------- relations


@pytest.mark.parametrize("key", TEST_MATRIX)
def test_defining_relations(key):
    rep = verify_defining_relations(build(*key))
    assert rep.passed, rep.failures[:2]
    assert rep.checks > 0
    printed = rep.meta["relation 3 as printed (-a_pq X_q on the right)"]
    assert printed["fails"] > 0


@pytest.mark.parametrize("key", [("A_nat", 3, ""), ("D_nat", 4, ""), ("E6", None, "heap")])
def test_mutated_heap_fails_relations(key):
    h = build(*key)
    cover = sorted(h.covers)[0]
    bad = h.without_cover(cover)
    rep = verify_defining_relations(bad, sample=h.ideals_in_heights(-1, 1))
    assert not rep.passed
    assert all(f["witness"] for f in rep.failures)


def test_doubly_laced_relation_two():
    h = build("C_fold", 2)
    m = HeapModule(h)
    a = h.cartan.a
    pairs = [(p, q) for p, q in product(range(h.n), repeat=2) if a[p][q] == -2]
    assert pairs
    for p, q in pairs:
        lhs = bracket(m.H(p), m.X(q))
        witness = [c for c in m.sample_cuts() if m.X(q).on_basis(c)]
        assert witness
        for c in witness:
            assert lhs.on_basis(c) == -2 * m.X(q).on_basis(c)


@pytest.mark.parametrize("key", TEST_MATRIX)
def test_maximal_element_cases(key):
    rep = verify_maximal_element_cases(build(*key))
    assert rep.passed and rep.checks > 0


# ---------------------------------------------------------------- chevalley


@pytest.mark.parametrize("flip", [None, (1, 2), (2, 3)])
def test_a3_table_matches_oracle(flip):
    h = build("A_nat", 3)
    assert h.height_zero_ideals == [add(h.base_ideal, (0,) + tuple(int(i < k) for i in range(3))) for k in range(4)]
    o = Orientation.default(h.cartan)
    if flip:
        o = o.flip(*flip)
    table = chevalley_table(h, o)
    constants, coroots = oracle_table(o)
    assert len(constants) == 12 and len(table.constants) == 12
    assert table.constants == constants
    assert table.coroots == coroots
    assert table.report.passed


@pytest.mark.parametrize("key", [("A_nat", 4, ""), ("D_nat", 4, ""), ("D_spin", 5, "plain"), ("E6", None, "heap")])
def test_simply_laced_constants(key):
    table = chevalley_table(build(*key))
    assert table.report.passed, table.report.failures[:2]
    assert set(table.constants.values()) <= {1, -1}
    assert table.rank == table.expected_rank


@pytest.mark.parametrize("key", [("C_fold", 2, ""), ("C_fold", 3, ""), ("B_fold", 3, "")])
def test_doubly_laced_constants(key):
    table = chevalley_table(build(*key))
    assert table.report.passed, table.report.failures[:2]
    assert set(table.constants.values()) <= {1, -1, 2, -2}
    assert {2, -2} & set(table.constants.values())


def test_c2_double_bracket_is_two():
    h = build("C_fold", 2)
    m = HeapModule(h)
    roots = set(finite_roots(h.cartan))
    found = 0
    for p in range(1, h.n):
        e = tuple(int(i == p) for i in range(h.n))
        for b in roots:
            b2 = add(add(b, e), e)
            if add(b, e) in roots and b2 in roots:
                lhs = bracket(m.X(p), bracket(m.X(p), m.X_root(b)))
                assert first_difference(lhs, 2 * m.X_root(b2), m.sample_cuts()) is None
                found += 1
    assert found


def test_rank_counts_and_csv():
    table = chevalley_table(build("A_nat", 3))
    assert (table.rank, table.expected_rank) == (15, 15)
    assert table.report.meta["rank with H_0 added"] == 15
    rows = table.to_csv().strip().splitlines()
    assert rows[0] == "alpha,beta,constant"
    assert len(rows) == 1 + 12 + 6
    assert sum("H:" in r for r in rows) == 6


def test_chevalley_needs_a_sample():
    with pytest.raises(AmbiguousMatch):
        chevalley_table(build("A_nat", 2), cuts=[])


# ---------------------------------------------------------------- root heaps


@pytest.mark.parametrize("key,count", [(("A_nat", 3, ""), 6), (("D_nat", 4, ""), 12), (("E6", None, "heap"), 36)])
def test_root_representability(key, count):
    h = build(*key)
    assert len(norm_two_vectors(h.cartan.delete([0]))) == count
    rep = verify_root_representability(h)
    assert rep.passed, rep.failures[:2]
    assert rep.meta["represented"] == count
    assert rep.checks > count


def test_splitting_count_on_an_example():
    h = build("A_nat", 3)
    w = h.materialize(1)
    L = find_root_heaps((0, 1, 1, 1), w)[0]
    sub = h.finite_heap(L)
    chars = [sub.character(I) for I in sub.ideals()]
    assert chars.count((0, 1, 0, 0)) + chars.count((0, 0, 1, 1)) == 1
    assert chars.count((0, 1, 1, 0)) + chars.count((0, 0, 0, 1)) == 1


def test_zero_operator():
    assert ZERO.on_basis((1, 0, 0)) == 0
