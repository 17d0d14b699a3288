from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from heapkit.cartan import (
    CartanMatrix,
    Orientation,
    affine_cartan,
    all_orientations,
    classify,
    comarks,
    finite_cartan,
    fold_diagram,
    null_and_highest_root,
    pairing,
    positive_roots,
    root_trichotomy,
    sgn,
    sgn_sum,
    simple_reflection,
    simple_root,
)
from heapkit.errors import (
    AdjacentOrbitViolation,
    DimensionMismatch,
    DisconnectedDiagram,
    InvalidCartanMatrix,
    NotAffineType,
    NotAnAutomorphism,
    NotARoot,
    NotFiniteType,
    OrderNotTwo,
)

AFFINE = [("A", 1), ("A", 2), ("A", 3), ("A", 5), ("B", 3), ("B", 4), ("C", 2), ("C", 3),
          ("D", 4), ("D", 5), ("A2", 2), ("A2", 3), ("D2", 2), ("D2", 3), ("E6", None),
          ("E7", None), ("E8", None), ("F4", None), ("E6tw", None)]


def norm_two_roots(cartan, bound):
    # simply laced: positive roots are exactly the nonneg integer vectors of norm 2
    out = []
    for v in product(range(bound + 1), repeat=cartan.n):
        if any(v):
            q = sum(v[i] * cartan.a[i][j] * v[j] for i in range(cartan.n) for j in range(cartan.n))
            if q == 2:
                out.append(v)
    return sorted(out)


def test_classify_examples():
    t = classify(CartanMatrix([[2, -1], [-1, 2]]))
    assert t.kind == "finite" and t.witness == (1, 1)
    t = classify(CartanMatrix([[2, -2], [-2, 2]]))
    assert t.kind == "affine" and t.witness == (1, 1)
    assert classify(CartanMatrix([[2, -1], [-2, 2]])).kind == "finite"


def test_classify_indefinite_witness():
    a = CartanMatrix([[2, -2, 0], [-2, 2, -1], [0, -1, 2]])
    t = classify(a)
    assert t.kind == "indefinite"
    u = t.witness
    assert all(x > 0 for x in u)
    assert all(sum(a.a[i][j] * u[j] for j in range(3)) < 0 for i in range(3))


def test_classify_disconnected():
    with pytest.raises(DisconnectedDiagram):
        classify(CartanMatrix([[2, 0], [0, 2]]))


def test_bad_entries_rejected():
    with pytest.raises(InvalidCartanMatrix):
        CartanMatrix([[2, -3], [-1, 2]])
    with pytest.raises(InvalidCartanMatrix):
        CartanMatrix([[2, -1], [0, 2]])


@pytest.mark.parametrize("fam,l", AFFINE)
def test_catalog_types(fam, l):
    a = affine_cartan(fam, l)
    assert classify(a).kind == "affine"
    assert classify(a.delete([0])).kind == "finite"
    delta, theta = null_and_highest_root(a)
    assert all(sum(a.a[i][j] * delta[j] for j in range(a.n)) == 0 for i in range(a.n))
    assert delta[0] == 1 and theta[0] == 0


def test_pairing_examples():
    a2 = finite_cartan("A", 2)
    assert pairing(a2, (1, 0), (1, 0)) == 2
    assert pairing(a2, (0, 1), (1, 0)) == -1
    with pytest.raises(DimensionMismatch):
        pairing(a2, (1, 0, 0), (1, 0))


@pytest.mark.parametrize("fam,l", AFFINE)
def test_delta_pairs_to_zero(fam, l):
    a = affine_cartan(fam, l)
    delta, _ = null_and_highest_root(a)
    for p in range(a.n):
        assert pairing(a, delta, simple_root(a, p)) == 0


@pytest.mark.parametrize("fam,l", AFFINE)
def test_pairing_recovers_entries(fam, l):
    a = affine_cartan(fam, l)
    for i in range(a.n):
        for j in range(a.n):
            assert pairing(a, simple_root(a, j), simple_root(a, i)) == a.a[i][j]


def test_reflection_examples():
    a2 = finite_cartan("A", 2)
    assert simple_reflection(a2, 0, (1, 0)) == (-1, 0)
    assert simple_reflection(a2, 0, (0, 1)) == (1, 1)


@settings(max_examples=200)
@given(st.sampled_from(AFFINE), st.data())
def test_reflection_involution(key, data):
    a = affine_cartan(*key)
    v = tuple(data.draw(st.lists(st.integers(-20, 20), min_size=a.n, max_size=a.n)))
    i = data.draw(st.integers(0, a.n - 1))
    assert simple_reflection(a, i, simple_reflection(a, i, v)) == v


def test_positive_roots_counts():
    assert positive_roots(finite_cartan("A", 1)) == [(1,)]
    a3 = finite_cartan("A", 3)
    intervals = sorted(tuple(1 if i <= k <= j else 0 for k in range(3)) for i in range(3) for j in range(i, 3))
    assert positive_roots(a3) == intervals
    assert len(positive_roots(finite_cartan("D", 4))) == 12


@pytest.mark.parametrize("fam,l,bound", [("A", 3, 1), ("D", 4, 2), ("D", 5, 2), ("E6", None, 3)])
def test_positive_roots_match_norm_oracle(fam, l, bound):
    a = finite_cartan(fam, l)
    assert positive_roots(a) == norm_two_roots(a, bound)


def test_positive_roots_nonfinite():
    with pytest.raises(NotFiniteType):
        positive_roots(affine_cartan("A", 2))


def test_null_root_examples():
    assert null_and_highest_root(affine_cartan("A", 2)) == ((1, 1, 1), (0, 1, 1))
    assert null_and_highest_root(affine_cartan("E7"))[0] == (1, 2, 3, 4, 3, 2, 1, 2)
    for l in (2, 3, 4, 5):
        delta, _ = null_and_highest_root(affine_cartan("C", l))
        assert delta == (1,) + (2,) * (l - 1) + (1,)
    with pytest.raises(NotAffineType):
        null_and_highest_root(finite_cartan("A", 3))


def test_comarks():
    assert comarks(affine_cartan("C", 2)) == (1, 1, 1)
    assert comarks(affine_cartan("E6")) == null_and_highest_root(affine_cartan("E6"))[0]


def test_sgn_vertex_form():
    a3 = finite_cartan("A", 3)
    o = Orientation.default(a3)
    for p in range(3):
        assert sgn(o, p, p) == -1
    for p, q in a3.edges:
        assert sgn(o, p, q) * sgn(o, q, p) == -1


def test_sgn_sum_example():
    # 1 -> 2 -> 3, with vertices renumbered from zero
    o = Orientation.default(finite_cartan("A", 3))
    assert sgn_sum(o, (1, 1, 0), (0, 0, 1)) == 0
    # the additive form is not antisymmetric on this pair
    assert sgn_sum(o, (0, 0, 1), (1, 1, 0)) == 2


@pytest.mark.parametrize("fam,l,exhaustive", [("A", 2, True), ("A", 3, True), ("D", 4, False), ("E6", None, False)])
def test_sgn_antisymmetry(fam, l, exhaustive):
    a = finite_cartan(fam, l)
    roots = positive_roots(a)
    rs = set(roots)
    orients = list(all_orientations(a)) if exhaustive else [Orientation.default(a)]
    for o in orients:
        for x in roots:
            for y in roots:
                if tuple(p + q for p, q in zip(x, y)) in rs:
                    assert sgn(o, x, y) == -sgn(o, y, x)


def test_sgn_bimultiplicative():
    o = Orientation.default(finite_cartan("A", 3))
    x, y, z = (1, 0, 0), (0, 1, 0), (0, 1, 1)
    xy = tuple(p + q for p, q in zip(x, y))
    assert sgn(o, xy, z) == sgn(o, x, z) * sgn(o, y, z)


def test_trichotomy_examples():
    a2 = finite_cartan("A", 2)
    assert root_trichotomy(a2, (1, 0), (1, 0)) == "i"
    assert root_trichotomy(a2, (1, 0), (0, 1)) == "iv"
    assert root_trichotomy(finite_cartan("A", 3), (1, 0, 0), (0, 0, 1)) == "iii"
    with pytest.raises(NotARoot):
        root_trichotomy(a2, (2, 0), (1, 0))


@pytest.mark.parametrize("fam,l", [("A", 2), ("A", 3), ("D", 4)])
def test_trichotomy_exhaustive(fam, l):
    a = finite_cartan(fam, l)
    roots = positive_roots(a)
    for x in roots:
        for y in roots:
            assert root_trichotomy(a, x, y) in {"i", "ii", "iii", "iv"}


def test_fold_a5_to_c3():
    folded, fmap = fold_diagram(affine_cartan("A", 5), (0, 5, 4, 3, 2, 1))
    assert folded.a == affine_cartan("C", 3).a
    assert fmap == (0, 1, 2, 3, 2, 1)


@pytest.mark.parametrize("l", [2, 3, 4])
def test_fold_d_flip_to_a2(l):
    n = 2 * l
    folded, _ = fold_diagram(affine_cartan("D", n), tuple(n - i for i in range(n + 1)))
    assert folded.a == affine_cartan("A2", l).a


@pytest.mark.parametrize("l", [4, 5, 6])
def test_fold_mu1_to_b(l):
    mu = list(range(l + 1))
    mu[l - 1], mu[l] = l, l - 1
    folded, _ = fold_diagram(affine_cartan("D", l), mu)
    assert folded.a == affine_cartan("B", l - 1).a


@pytest.mark.parametrize("l", [4, 5, 6])
def test_fold_mu2_to_d2(l):
    mu = list(range(l + 1))
    mu[0], mu[1] = 1, 0
    mu[l - 1], mu[l] = l, l - 1
    folded, _ = fold_diagram(affine_cartan("D", l), mu)
    assert folded.a == affine_cartan("D2", l - 2).a
    assert all(x in {2, 0, -1, -2} for row in folded.a for x in row)


def test_fold_errors():
    a = affine_cartan("A", 3)
    with pytest.raises(NotAnAutomorphism):
        fold_diagram(a, (0, 2, 1, 3))
    with pytest.raises(OrderNotTwo):
        fold_diagram(a, (0, 1, 2, 3))
    with pytest.raises(OrderNotTwo):
        fold_diagram(a, (1, 2, 3, 0))
    with pytest.raises(AdjacentOrbitViolation):
        fold_diagram(a, (1, 0, 3, 2))


def test_json_roundtrip():
    a = affine_cartan("C", 3)
    b, o = CartanMatrix.from_json(a.to_json())
    assert b == a and o == Orientation.default(a)


def test_symmetrizer_short_roots():
    # arrow toward the short root
    assert affine_cartan("C", 2).short_roots() == [1]
    assert affine_cartan("B", 3).short_roots() == [3]
