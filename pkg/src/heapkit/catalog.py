"""Catalog of full heaps: explicit constructions, folds and synthesis.

Every family is built over the affine labelling of ``cartan.affine_cartan``.
E6 and E7 heaps come from synthesis and are frozen as JSON fixtures.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from itertools import product

from .cartan import Orientation, affine_cartan, check_involution, classify, fold_diagram, orbits
from .errors import (
    FoldPreconditionViolated,
    NotAffineType,
    RankOutOfBounds,
    SearchBudgetExceeded,
)
from .heap import FoldData, PeriodicHeap, periodic_isomorphism, verify_axioms

MIN_RANK = {"A_nat": 2, "C_fold": 2, "D_nat": 4, "A2_twist": 2, "D_spin": 4, "B_fold": 3, "D2_twist": 2}
FIXED = ("A1_nat", "E6", "E7")
FAMILIES = ("A1_nat", "A_nat", "C_fold", "D_nat", "A2_twist", "D_spin", "B_fold", "D2_twist", "E6", "E7")

# family -> (cartan family, rank of the cartan matrix given the family rank)
DIAGRAM = {
    "A1_nat": ("A", lambda l: 1),
    "A_nat": ("A", lambda l: l),
    "C_fold": ("C", lambda l: l),
    "D_nat": ("D", lambda l: l),
    "A2_twist": ("A2", lambda l: l),
    "D_spin": ("D", lambda l: l),
    "B_fold": ("B", lambda l: l),
    "D2_twist": ("D2", lambda l: l),
    "E6": ("E6", lambda l: None),
    "E7": ("E7", lambda l: None),
}

# the ranks exercised by the test matrix and `catalog list`
TEST_MATRIX = (
    [("A1_nat", None, "")]
    + [("A_nat", l, "") for l in range(2, 7)]
    + [("C_fold", l, "") for l in (2, 3, 4)]
    + [("D_nat", l, "") for l in (4, 5, 6)]
    + [("D_spin", l, v) for l in (4, 5, 6, 7) for v in ("plain", "twisted")]
    + [("B_fold", l, "") for l in (3, 4)]
    + [("D2_twist", l, "") for l in (2, 3)]
    + [("A2_twist", l, "") for l in (2, 3)]
    + [("E6", None, "heap"), ("E6", None, "dual"), ("E7", None, "")]
)


@dataclass(frozen=True)
class CatalogKey:
    family: str
    rank: int | None = None
    variant: str = ""

    def label(self) -> str:
        s = self.family
        if self.rank is not None:
            s += f"({self.rank})"
        if self.variant:
            s += f"[{self.variant}]"
        return s


def diagram_of(family, rank=None):
    fam, f = DIAGRAM[family]
    return affine_cartan(fam, f(rank))


def _check_rank(family, rank):
    if family not in DIAGRAM:
        raise RankOutOfBounds(f"unknown family {family!r}")
    if family in FIXED:
        return
    if rank is None or rank < MIN_RANK[family]:
        raise RankOutOfBounds(f"{family} needs rank >= {MIN_RANK[family]}, got {rank}")


# ---------------------------------------------------------------- words


def a_nat_word(l):
    return tuple(range(l + 1))


def d_spin_word(l, twisted=False):
    """Four layers: X-vertices 2..l-2 by parity plus the extra end vertices."""
    word = []
    for k in range(4):
        layer = [v for v in range(2, l - 1) if v % 2 == k % 2]
        if l % 2:
            layer.append((l - 1, 0, l, 1)[k])
        elif k % 2:
            layer += [1, l] if (k // 2) % 2 == 0 else [0, l - 1]
        word += layer
    if twisted:
        swap = {l - 1: l, l: l - 1}
        word = [swap.get(v, v) for v in word]
    return tuple(word)


def d_nat_word(l):
    """Zigzag: {0,1}, 2, ..., l-2, {l-1,l}, l-2, ..., 2."""
    return tuple([0, 1] + list(range(2, l - 1)) + [l - 1, l] + list(range(l - 2, 1, -1)))


# ---------------------------------------------------------------- folding


def compatible_orientation(cartan, mu):
    """Orientation with p -> q exactly when mu(p) -> mu(q)."""
    arrows = {}
    for i, j in cartan.edges:
        if (i, j) in arrows or (j, i) in arrows:
            continue
        mi, mj = mu[i], mu[j]
        if (mi, mj) == (j, i):
            raise FoldPreconditionViolated(f"edge {i}-{j} is reversed by the involution", witness=(i, j))
        arrows[(i, j)] = True
        arrows[(mi, mj)] = True
    return Orientation(cartan, list(arrows))


def check_fold_precondition(heap, mu):
    """Every p-element is comparable with every q-element when mu(p) is related to q."""
    a = heap.cartan
    for p, t in heap.motif_elements:
        d = heap.down(p, t)
        u = heap.up(p, t)
        for q in range(heap.n):
            if q == p or not a.related(mu[p], q):
                continue
            if d[q] is None or u[q] is None or d[q] != u[q]:
                z = d[q] if d[q] is not None else 0
                raise FoldPreconditionViolated(
                    f"E({p},{t}) and E({q},{z}) are incomparable", witness=((p, t), (q, z)))


def fold_heap(heap: PeriodicHeap, mu, name="", target=None, orientation=None) -> PeriodicHeap:
    """Push labels through the orbit map of mu; target names the folded diagram."""
    mu = check_involution(heap.cartan, mu)
    folded_cartan, fmap = fold_diagram(heap.cartan, mu)
    if target is not None and target.a == folded_cartan.a:
        folded_cartan = target
    check_fold_precondition(heap, mu)
    if orientation is None:
        orient = compatible_orientation(heap.cartan, mu)
    else:
        orient = orientation
        bad = [e for e in orient.arrows if (mu[e[0]], mu[e[1]]) not in orient.arrows]
        if bad:
            raise FoldPreconditionViolated("orientation does not commute with the involution", witness=bad[0])

    def fcoord(x):
        p, s = x
        if mu[p] == p:
            return (fmap[p], s)
        return (fmap[p], s + heap.down(p, s)[mu[p]])

    orbs = orbits(mu)
    orbit_period = tuple(sum(heap.period[p] for p in o) for o in orbs)
    table = {}
    for x in heap.motif_elements:
        P, z = fcoord(x)
        k, r = divmod(z, orbit_period[P])
        table[(P, r)] = (x[0], x[1] - k * heap.period[x[0]])
    rel = [(fcoord(x), fcoord(y)) for x, y in heap.covers]
    fold = FoldData(heap, mu, orient, fmap, table, orbit_period, (0,) * len(orbs))
    out = PeriodicHeap(folded_cartan, orbit_period, rel, name=name or heap.name + "/mu", fold=fold)
    out = out.normalized()
    small = out.minimal_period()
    if small.period != out.period:
        small.note = "period halved relative to the cover"
    return small


def half_turn(n):
    return tuple((i + n // 2) % n for i in range(n))


def cycle_flip(m):
    """i -> -i mod m on the cycle A_{m-1}^(1)."""
    return tuple((-i) % m for i in range(m))


# ---------------------------------------------------------------- build


def build(family, rank=None, variant="") -> PeriodicHeap:
    if isinstance(family, CatalogKey):
        family, rank, variant = family.family, family.rank, family.variant
    _check_rank(family, rank)
    key = CatalogKey(family, rank, variant)
    if family == "A_nat":
        h = PeriodicHeap.from_cyclic_word(affine_cartan("A", rank), a_nat_word(rank), name=key.label())
    elif family == "D_spin":
        if variant not in ("", "plain", "twisted"):
            raise RankOutOfBounds(f"unknown spin variant {variant!r}")
        h = PeriodicHeap.from_cyclic_word(affine_cartan("D", rank), d_spin_word(rank, variant == "twisted"),
                                          name=key.label())
    elif family == "D_nat":
        h = PeriodicHeap.from_cyclic_word(affine_cartan("D", rank), d_nat_word(rank), name=key.label())
    elif family == "A1_nat":
        # the cyclic orientation keeps the half-period shift central
        cyclic = Orientation(affine_cartan("A", 3), [(i, (i + 1) % 4) for i in range(4)])
        h = fold_heap(build("A_nat", 3), half_turn(4), name=key.label(), target=diagram_of(family, rank),
                      orientation=cyclic)
    elif family == "C_fold":
        h = fold_heap(build("A_nat", 2 * rank - 1), cycle_flip(2 * rank), name=key.label(), target=diagram_of(family, rank))
    elif family == "B_fold":
        m = rank + 1
        mu = list(range(m + 1))
        mu[m - 1], mu[m] = m, m - 1
        h = fold_heap(build("D_spin", m, "plain"), mu, name=key.label(), target=diagram_of(family, rank))
    elif family == "D2_twist":
        m = rank + 2
        mu = list(range(m + 1))
        mu[0], mu[1] = 1, 0
        mu[m - 1], mu[m] = m, m - 1
        h = fold_heap(build("D_spin", m, "plain"), mu, name=key.label(), target=diagram_of(family, rank))
    elif family == "A2_twist":
        m = 2 * rank
        h = fold_heap(build("D_nat", m), tuple(m - i for i in range(m + 1)), name=key.label(), target=diagram_of(family, rank))
    elif family == "E6":
        if variant not in ("", "heap", "dual"):
            raise RankOutOfBounds(f"unknown E6 variant {variant!r}")
        h = load_fixture("e6_dual" if variant == "dual" else "e6")
        h.name = key.label()
    elif family == "E7":
        h = load_fixture("e7")
        h.name = key.label()
    return h


def load_fixture(name) -> PeriodicHeap:
    text = resources.files("heapkit").joinpath("fixtures", f"{name}.json").read_text()
    return PeriodicHeap.from_json(text)


# ---------------------------------------------------------------- synthesis


def _fire(cartan, x, p):
    return tuple(v - cartan.a[q][p] for q, v in enumerate(x))


def _step(cartan, x, sign):
    """Fire (sign=+1) or unfire (sign=-1) every vertex that can; None if dead."""
    target = 1 if sign > 0 else -1
    movers = [p for p in range(cartan.n) if x[p] == target]
    if not movers or any(cartan.adjacent(p, q) for p in movers for q in movers):
        return None, movers
    y = list(x)
    for p in movers:
        for q in range(cartan.n):
            y[q] -= sign * cartan.a[q][p]
    if any(v > 1 or v < -1 for v in y):
        return None, movers
    return tuple(y), movers


def _cycle(cartan, x, sign, limit):
    """Follow parallel dynamics; return the cycle of states reached, or None."""
    seen = {}
    path = []
    cur = x
    while cur not in seen:
        if len(path) > limit:
            return None
        seen[cur] = len(path)
        path.append(cur)
        cur, _ = _step(cartan, cur, sign)
        if cur is None:
            return None
    return path[seen[cur]:]


@dataclass
class SynthesisResult:
    heaps: list
    components: int
    cycles: int
    complete: bool = True


def synthesize_full_heaps(cartan, max_solutions=None, max_states=3 ** 10) -> SynthesisResult:
    """All full heaps over an affine diagram, up to isomorphism.

    The state of a proper ideal records, per vertex p, the Cartan-weighted
    count of neighbours since the last p, shifted to {-1, 0, 1}.  A vertex
    may (and must) fire exactly when its count reaches 2, so the heap is
    determined by any one state; full heaps are the cycles of the parallel
    firing map in which every vertex fires.
    """
    kind = classify(cartan).kind
    if kind != "affine":
        raise NotAffineType(f"{cartan.name} is {kind}")
    n = cartan.n
    if 3 ** n > max_states:
        raise SearchBudgetExceeded(f"3^{n} states exceed the budget {max_states}")
    cycles = []
    on_cycle = set()
    for x in product((-1, 0, 1), repeat=n):
        if x in on_cycle:
            continue
        cyc = _cycle(cartan, x, 1, 3 ** n)
        if cyc is None or cyc[0] in on_cycle:
            continue
        on_cycle.update(cyc)
        start = min(range(len(cyc)), key=lambda i: cyc[i])
        cyc = cyc[start:] + cyc[:start]
        cycles.append(cyc)
    heaps = []
    partial = False
    for cyc in cycles:
        word = []
        for x in cyc:
            _, movers = _step(cartan, x, 1)
            word += movers
        if set(word) != set(range(n)):
            continue
        h = PeriodicHeap.from_cyclic_word(cartan, tuple(word), name=f"{cartan.name}#{len(heaps)}").minimal_period()
        if not verify_axioms(h).passed:
            continue
        if any(periodic_isomorphism(g, h) is not None for g in heaps):
            continue
        heaps.append(h)
        if max_solutions is not None and len(heaps) >= max_solutions:
            partial = True
            break
    comps = _count_components(cartan)
    return SynthesisResult(heaps, comps, len(cycles), complete=not partial)


def _count_components(cartan):
    """Components of bi-infinitely extendable states under single fire/unfire moves."""
    n = cartan.n
    good = set()
    for x in product((-1, 0, 1), repeat=n):
        fwd = _cycle(cartan, x, 1, 3 ** n)
        bwd = _cycle(cartan, x, -1, 3 ** n)
        if fwd is None or bwd is None:
            continue
        fired = set()
        for y in fwd:
            fired.update(_step(cartan, y, 1)[1])
        if fired != set(range(n)):
            continue
        good.add(x)
    parent = {x: x for x in good}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for x in good:
        for p in range(n):
            if x[p] == 1:
                y = _fire(cartan, x, p)
                if y in good:
                    parent[find(x)] = find(y)
    return len({find(x) for x in good})


def write_fixtures(directory):
    """Regenerate the E6 and E7 fixtures from synthesis."""
    from pathlib import Path
    d = Path(directory)
    e6 = synthesize_full_heaps(affine_cartan("E6")).heaps
    first = e6[0]
    other = [h for h in e6 if periodic_isomorphism(h, first) is None][0]
    first.name, other.name = "E6", "E6*"
    (d / "e6.json").write_text(json.dumps(first.to_dict(), sort_keys=True, indent=1) + "\n")
    (d / "e6_dual.json").write_text(json.dumps(other.to_dict(), sort_keys=True, indent=1) + "\n")
    e7 = synthesize_full_heaps(affine_cartan("E7")).heaps[0]
    e7.name = "E7"
    (d / "e7.json").write_text(json.dumps(e7.to_dict(), sort_keys=True, indent=1) + "\n")


# ---------------------------------------------------------------- ideals


def base_subheap_E0(heap: PeriodicHeap):
    """(cut of the base ideal E', finite heap E0)."""
    return heap.base_ideal, heap.E0


def enumerate_height_zero_ideals(heap: PeriodicHeap):
    return list(heap.height_zero_ideals)


def catalog_table():
    rows = []
    for fam, l, v in TEST_MATRIX:
        h = build(fam, l, v)
        rows.append({"family": fam, "rank": l, "variant": v, "diagram": h.cartan.name,
                     "motif": len(h.motif_elements), "period": list(h.period),
                     "height_zero_ideals": len(h.height_zero_ideals)})
    return rows
