"""Generalized Cartan matrices, Dynkin diagrams, roots and folding.

Roots and weights are plain integer tuples indexed by diagram vertices.
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import product
from math import gcd

import numpy as np
import sympy

from .errors import (
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

ALLOWED = {2, 0, -1, -2}


class CartanMatrix:
    """A doubly laced generalized Cartan matrix."""

    def __init__(self, entries, name: str = ""):
        a = tuple(tuple(int(x) for x in row) for row in entries)
        n = len(a)
        if any(len(row) != n for row in a):
            raise InvalidCartanMatrix("matrix must be square")
        for i in range(n):
            if a[i][i] != 2:
                raise InvalidCartanMatrix(f"a[{i}][{i}] = {a[i][i]}, expected 2")
            for j in range(n):
                if a[i][j] not in ALLOWED:
                    raise InvalidCartanMatrix(f"entry a[{i}][{j}] = {a[i][j]} is not doubly laced")
                if i != j and (a[i][j] > 0 or (a[i][j] == 0) != (a[j][i] == 0)):
                    raise InvalidCartanMatrix(f"bad off-diagonal pair at ({i},{j})")
        self.a = a
        self.n = n
        self.name = name

    def __getitem__(self, ij):
        i, j = ij
        return self.a[i][j]

    def __eq__(self, other):
        return isinstance(other, CartanMatrix) and self.a == other.a

    def __hash__(self):
        return hash(self.a)

    def __repr__(self):
        return f"CartanMatrix({self.name or list(map(list, self.a))})"

    @property
    def vertices(self):
        return range(self.n)

    def adjacent(self, i, j) -> bool:
        return i != j and self.a[i][j] != 0

    def related(self, i, j) -> bool:
        """Equal or adjacent labels."""
        return i == j or self.a[i][j] != 0

    def neighbours(self, i):
        return [j for j in range(self.n) if self.adjacent(i, j)]

    @cached_property
    def edges(self):
        return [(i, j) for i in range(self.n) for j in range(i + 1, self.n) if self.a[i][j]]

    @property
    def simply_laced(self) -> bool:
        return all(x != -2 for row in self.a for x in row)

    def transpose(self) -> "CartanMatrix":
        return CartanMatrix([[self.a[j][i] for j in range(self.n)] for i in range(self.n)], self.name + "^T")

    def delete(self, removed) -> "CartanMatrix":
        keep = [i for i in range(self.n) if i not in set(removed)]
        return CartanMatrix([[self.a[i][j] for j in keep] for i in keep], self.name + "_0")

    def is_connected(self) -> bool:
        if self.n == 0:
            return False
        seen = {0}
        todo = [0]
        while todo:
            i = todo.pop()
            for j in self.neighbours(i):
                if j not in seen:
                    seen.add(j)
                    todo.append(j)
        return len(seen) == self.n

    @cached_property
    def symmetrizer(self):
        """Positive integers d with d_i a_ij = d_j a_ji, smallest equal to 1."""
        d = [None] * self.n
        for start in range(self.n):
            if d[start] is not None:
                continue
            d[start] = Fraction(1)
            todo = [start]
            while todo:
                i = todo.pop()
                for j in self.neighbours(i):
                    val = d[i] * self.a[i][j] / self.a[j][i]
                    if d[j] is None:
                        d[j] = val
                        todo.append(j)
                    elif d[j] != val:
                        raise InvalidCartanMatrix("matrix is not symmetrizable")
        m = min(d)
        return tuple(int(x / m) for x in d)

    def short_roots(self):
        d = self.symmetrizer
        return [i for i in range(self.n) if d[i] == min(d)]

    def to_json(self, orientation=None) -> str:
        orientation = orientation or Orientation.default(self)
        return json.dumps({
            "name": self.name,
            "cartan": [list(r) for r in self.a],
            "orientation": [list(e) for e in sorted(orientation.arrows)],
        })

    @staticmethod
    def from_json(text: str):
        d = json.loads(text)
        a = CartanMatrix(d["cartan"], d.get("name", ""))
        o = Orientation(a, [tuple(e) for e in d["orientation"]]) if "orientation" in d else Orientation.default(a)
        return a, o


class Orientation:
    """One chosen arrow per adjacent pair of vertices."""

    def __init__(self, cartan: CartanMatrix, arrows):
        arrows = frozenset(tuple(e) for e in arrows)
        for (i, j) in arrows:
            if not cartan.adjacent(i, j):
                raise InvalidCartanMatrix(f"arrow {i}->{j} joins non-adjacent vertices")
        for (i, j) in cartan.edges:
            if ((i, j) in arrows) == ((j, i) in arrows):
                raise InvalidCartanMatrix(f"edge {i}-{j} needs exactly one direction")
        self.cartan = cartan
        self.arrows = arrows

    @classmethod
    def default(cls, cartan):
        return cls(cartan, cartan.edges)

    def flip(self, i, j) -> "Orientation":
        arrows = set(self.arrows)
        if (i, j) in arrows:
            arrows.remove((i, j))
            arrows.add((j, i))
        else:
            arrows.remove((j, i))
            arrows.add((i, j))
        return Orientation(self.cartan, arrows)

    def __eq__(self, other):
        return isinstance(other, Orientation) and self.arrows == other.arrows

    def __hash__(self):
        return hash(self.arrows)

    def __repr__(self):
        return f"Orientation({sorted(self.arrows)})"


# ---------------------------------------------------------------- catalog


def _from_edges(n, edges, name, double=()):
    a = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
    for i, j in edges:
        a[i][j] = a[j][i] = -1
    # (i, j) in double means a_ij = -2, a_ji = -1: arrow toward i, i short
    for i, j in double:
        a[i][j] = -2
        a[j][i] = -1
    return CartanMatrix(a, name)


def _chain(lo, hi):
    return [(i, i + 1) for i in range(lo, hi)]


FAMILIES = ("A", "B", "C", "D", "A2", "D2", "E6", "E7", "E8", "F4", "E6tw")


def affine_cartan(family: str, l: int | None = None) -> CartanMatrix:
    """Affine matrix with the special vertex 0.

    A2 means A_{2l-1}^(2) and D2 means D_{l+1}^(2); both have vertices 0..l.
    """
    if family == "A":
        if l == 1:
            return CartanMatrix([[2, -2], [-2, 2]], "A1^(1)")
        if l is None or l < 2:
            raise InvalidCartanMatrix("A_l^(1) needs l >= 1")
        return _from_edges(l + 1, _chain(0, l) + [(l, 0)], f"A{l}^(1)")
    if family == "C":
        if l is None or l < 2:
            raise InvalidCartanMatrix("C_l^(1) needs l >= 2")
        edges = [e for e in _chain(0, l) if e not in ((0, 1), (l - 1, l))]
        return _from_edges(l + 1, edges, f"C{l}^(1)", double=[(1, 0), (l - 1, l)])
    if family == "B":
        if l is None or l < 3:
            raise InvalidCartanMatrix("B_l^(1) needs l >= 3")
        edges = [(0, 2), (1, 2)] + _chain(2, l - 1)
        return _from_edges(l + 1, edges, f"B{l}^(1)", double=[(l, l - 1)])
    if family == "D":
        if l is None or l < 4:
            raise InvalidCartanMatrix("D_l^(1) needs l >= 4")
        edges = [(0, 2), (1, 2)] + _chain(2, l - 2) + [(l - 2, l - 1), (l - 2, l)]
        return _from_edges(l + 1, edges, f"D{l}^(1)")
    if family == "A2":
        if l is None or l < 2:
            raise InvalidCartanMatrix("A_{2l-1}^(2) needs l >= 2")
        if l == 2:
            return _from_edges(3, [], "A3^(2)", double=[(0, 2), (1, 2)])
        edges = [(0, 2), (1, 2)] + _chain(2, l - 1)
        return _from_edges(l + 1, edges, f"A{2 * l - 1}^(2)", double=[(l - 1, l)])
    if family == "D2":
        if l is None or l < 2:
            raise InvalidCartanMatrix("D_{l+1}^(2) needs l >= 2")
        edges = _chain(1, l - 1)
        return _from_edges(l + 1, edges, f"D{l + 1}^(2)", double=[(0, 1), (l, l - 1)])
    if family == "E6":
        return _from_edges(7, [(1, 2), (2, 3), (3, 4), (4, 5), (3, 6), (6, 0)], "E6^(1)")
    if family == "E7":
        return _from_edges(8, _chain(0, 6) + [(3, 7)], "E7^(1)")
    if family == "E8":
        return _from_edges(9, _chain(0, 7) + [(5, 8)], "E8^(1)")
    if family == "F4":
        return _from_edges(5, [(0, 1), (1, 2), (3, 4)], "F4^(1)", double=[(3, 2)])
    if family == "E6tw":
        return _from_edges(5, [(0, 1), (1, 2), (3, 4)], "E6^(2)", double=[(2, 3)])
    raise InvalidCartanMatrix(f"unknown family {family!r}")


def finite_cartan(family: str, l: int | None = None) -> CartanMatrix:
    """Finite type matrix: the affine one with vertex 0 deleted.

    Vertices are renumbered 1..l -> 0..l-1.
    """
    fams = {"A": "A", "B": "B", "C": "C", "D": "D", "E6": "E6", "E7": "E7", "E8": "E8", "F4": "F4"}
    if family == "A" and l == 1:
        return CartanMatrix([[2]], "A1")
    if family == "B" and l == 2:
        return CartanMatrix([[2, -1], [-2, 2]], "B2")
    if family == "C" and l == 1:
        return CartanMatrix([[2]], "C1")
    if family not in fams:
        raise InvalidCartanMatrix(f"unknown finite family {family!r}")
    m = affine_cartan(family, l).delete([0])
    m.name = f"{family}{l}" if l else family
    return m


# ---------------------------------------------------------------- classification


@dataclass(frozen=True)
class CartanType:
    kind: str  # "finite" | "affine" | "indefinite"
    witness: tuple


def _sym(cartan):
    return sympy.Matrix(cartan.a)


def _coprime(vec, flip=True):
    fr = [Fraction(int(sympy.fraction(x)[0]), int(sympy.fraction(x)[1])) for x in vec]
    den = 1
    for x in fr:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in fr]
    g = 0
    for x in ints:
        g = gcd(g, x)
    ints = [x // g for x in ints]
    if flip and all(x <= 0 for x in ints):
        ints = [-x for x in ints]
    return tuple(ints)


def _mat_vec(cartan, u):
    return [sum(cartan.a[i][j] * u[j] for j in range(cartan.n)) for i in range(cartan.n)]


def classify(cartan: CartanMatrix) -> CartanType:
    if not cartan.is_connected():
        raise DisconnectedDiagram(f"{cartan.name or 'matrix'} is decomposable")
    m = _sym(cartan)
    if m.det() != 0:
        u = _coprime(m.solve(sympy.ones(cartan.n, 1)), flip=False)
        if all(x > 0 for x in u):
            return CartanType("finite", u)
    else:
        ker = m.nullspace()
        if len(ker) == 1:
            u = _coprime(list(ker[0]))
            if all(x > 0 for x in u):
                return CartanType("affine", u)
    return CartanType("indefinite", _indefinite_witness(cartan))


def _indefinite_witness(cartan):
    # Perron vector of 2I - A gives u > 0 with Au < 0; rationalize, then check exactly
    b = 2 * np.eye(cartan.n) - np.array(cartan.a, dtype=float)
    vals, vecs = np.linalg.eig(b)
    k = int(np.argmax(vals.real))
    v = np.abs(vecs[:, k].real)
    for den in (10, 100, 10**4, 10**6, 10**9):
        u = [max(1, round(x / v.max() * den)) for x in v]
        if all(x < 0 for x in _mat_vec(cartan, u)):
            g = 0
            for x in u:
                g = gcd(g, x)
            return tuple(x // g for x in u)
    return ()


def is_affine(cartan) -> bool:
    return cartan.is_connected() and classify(cartan).kind == "affine"


# ---------------------------------------------------------------- roots


def _check_dim(cartan, *vecs):
    for v in vecs:
        if len(v) != cartan.n:
            raise DimensionMismatch(f"vector of length {len(v)} on a diagram with {cartan.n} vertices")


def simple_root(cartan, i):
    return tuple(1 if k == i else 0 for k in range(cartan.n))


def height(v) -> int:
    return sum(v)


def pairing(cartan, beta, coroot) -> int:
    """<beta, coroot^vee> with coroot given by coefficients on the simple coroots."""
    _check_dim(cartan, beta, coroot)
    a = cartan.a
    return sum(coroot[i] * beta[j] * a[i][j] for i in range(cartan.n) if coroot[i] for j in range(cartan.n))


def simple_reflection(cartan, i, v):
    _check_dim(cartan, v)
    c = sum(cartan.a[i][j] * v[j] for j in range(cartan.n))
    return tuple(x - c if k == i else x for k, x in enumerate(v))


def positive_roots(cartan):
    t = classify(cartan)
    if t.kind != "finite":
        raise NotFiniteType(f"{cartan.name} is {t.kind}")
    start = [simple_root(cartan, i) for i in range(cartan.n)]
    seen = set(start)
    todo = deque(start)
    while todo:
        v = todo.popleft()
        for i in range(cartan.n):
            w = simple_reflection(cartan, i, v)
            if all(x >= 0 for x in w) and w not in seen:
                seen.add(w)
                todo.append(w)
    return sorted(seen)


def is_positive_real_root(cartan, alpha) -> bool:
    """Reflect down to a simple root; works for any symmetrizable matrix."""
    _check_dim(cartan, alpha)
    v = tuple(alpha)
    if any(x < 0 for x in v) or not any(v):
        return False
    while sum(v) > 1:
        for i in range(cartan.n):
            if sum(cartan.a[i][j] * v[j] for j in range(cartan.n)) > 0:
                v = simple_reflection(cartan, i, v)
                break
        else:
            return False
        if any(x < 0 for x in v):
            return False
    return True


def null_and_highest_root(cartan):
    t = classify(cartan)
    if t.kind != "affine":
        raise NotAffineType(f"{cartan.name} is {t.kind}")
    delta = t.witness
    theta = tuple(x - (1 if k == 0 else 0) for k, x in enumerate(delta))
    if theta[0] != 0 or theta[1:] not in set(positive_roots(cartan.delete([0]))):
        raise NotARoot(f"delta - alpha_0 = {theta} is not a root of the finite part")
    return delta, theta


def comarks(cartan):
    """Coprime positive kernel vector of the transpose."""
    return null_and_highest_root(cartan.transpose())[0] if cartan.n > 1 else (1,)


def root_trichotomy(cartan, alpha, beta) -> str:
    """Which of the five cases relates two positive roots of a simply laced finite matrix."""
    roots = set(positive_roots(cartan))
    for v in (alpha, beta):
        if tuple(v) not in roots:
            raise NotARoot(f"{v} is not a positive root")
    c = pairing(cartan, beta, alpha)
    s = tuple(x + y for x, y in zip(alpha, beta))
    d = tuple(x - y for x, y in zip(alpha, beta))
    is_root = lambda v: v in roots or tuple(-x for x in v) in roots
    if c == 2 and tuple(alpha) == tuple(beta):
        return "i"
    if c == 1 and is_root(d) and not is_root(s):
        return "ii"
    if c == 0 and not is_root(s) and not is_root(d):
        return "iii"
    if c == -1 and is_root(s) and not is_root(d):
        return "iv"
    if c == -2 and tuple(alpha) == tuple(-x for x in beta):
        return "v"
    raise NotARoot(f"no case applies to {alpha}, {beta}")


# ---------------------------------------------------------------- sign function


def sgn(orientation, x, y) -> int:
    """Vertex pairs give -1 on the diagonal and along arrows, else +1.

    Root vectors extend this bimultiplicatively.
    """
    if isinstance(x, int) and isinstance(y, int):
        return -1 if x == y or (x, y) in orientation.arrows else 1
    flips = 0
    for i, xi in enumerate(x):
        if not xi:
            continue
        for j, yj in enumerate(y):
            if yj and sgn(orientation, i, j) == -1:
                flips += xi * yj
    return -1 if flips % 2 else 1


def sgn_sum(orientation, x, y) -> int:
    """The additive extension: sum of x_p y_q sgn(p, q)."""
    return sum(xi * yj * sgn(orientation, i, j)
               for i, xi in enumerate(x) if xi for j, yj in enumerate(y) if yj)


def all_orientations(cartan):
    for bits in product((False, True), repeat=len(cartan.edges)):
        yield Orientation(cartan, [(j, i) if b else (i, j) for (i, j), b in zip(cartan.edges, bits)])


# ---------------------------------------------------------------- folding


def check_involution(cartan, mu):
    mu = tuple(mu)
    if sorted(mu) != list(range(cartan.n)):
        raise NotAnAutomorphism(f"{mu} is not a permutation of the vertices")
    for i in range(cartan.n):
        for j in range(cartan.n):
            if cartan.a[mu[i]][mu[j]] != cartan.a[i][j]:
                raise NotAnAutomorphism(f"{mu} does not preserve a[{i}][{j}]", witness=(i, j))
    if all(mu[i] == i for i in range(cartan.n)) or any(mu[mu[i]] != i for i in range(cartan.n)):
        raise OrderNotTwo(f"{mu} does not have order two")
    for p in range(cartan.n):
        if cartan.adjacent(p, mu[p]):
            raise AdjacentOrbitViolation(f"{p} and {mu[p]} are adjacent", witness=(p, mu[p]))
    return mu


def orbits(mu):
    seen = set()
    out = []
    for p in range(len(mu)):
        if p not in seen:
            orb = tuple(sorted({p, mu[p]}))
            seen.update(orb)
            out.append(orb)
    return out


def fold_diagram(cartan, mu):
    """Folded matrix and orbit map (orbits sorted by their least vertex)."""
    mu = check_involution(cartan, mu)
    orbs = orbits(mu)
    m = len(orbs)
    a = [[2] * m for _ in range(m)]
    for P, orbP in enumerate(orbs):
        for Q, orbQ in enumerate(orbs):
            if P == Q:
                continue
            vals = {sum(cartan.a[p][q] for p in orbP) for q in orbQ}
            if len(vals) != 1:
                raise NotAnAutomorphism("folded entry depends on the representative")
            a[P][Q] = vals.pop()
    fmap = tuple(next(k for k, o in enumerate(orbs) if p in o) for p in range(cartan.n))
    return CartanMatrix(a, (cartan.name + "/mu") if cartan.name else ""), fmap
