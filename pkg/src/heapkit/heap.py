"""Finite labelled heaps and periodic (infinite) full heaps.

A periodic heap has one chain per vertex p, with elements E(p, z) for all
integers z, and a period c: the shift (p, z) -> (p, z + c_p) is an
automorphism.  The order is generated by the chains together with a finite
list of relations E(q, s) < E(p, t) with 0 <= t < c_p (and their shifts).
Proper ideals are cut vectors N, the ideal holding E(p, t) for t < N_p.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property

from .cartan import CartanMatrix, Orientation, classify, sgn
from .errors import DiagramMismatch, MissingCoverData, NoFullHeap, NotAffineType, NotAHeap, UnsupportedFormat
from .report import Report

CLOSURE_LIMIT = 10_000


def _bits(mask):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


# ---------------------------------------------------------------- finite heaps


class FiniteHeap:
    """A finite labelled poset; element i has label labels[i]."""

    def __init__(self, cartan, labels, relations=(), names=None):
        self.cartan = cartan
        self.labels = tuple(labels)
        n = len(self.labels)
        preds = [0] * n
        for x, y in relations:
            if x == y:
                raise NotAHeap(f"reflexive relation on {x}")
            preds[y] |= 1 << x
        self.below = self._closure(preds)
        self.names = list(names) if names is not None else list(range(n))

    @classmethod
    def _from_masks(cls, cartan, labels, below, names=None):
        obj = cls.__new__(cls)
        obj.cartan = cartan
        obj.labels = tuple(labels)
        obj.below = list(below)
        obj.names = list(names) if names is not None else list(range(len(labels)))
        return obj

    @staticmethod
    def _closure(preds):
        n = len(preds)
        indeg = [bin(m).count("1") for m in preds]
        succ = [[] for _ in range(n)]
        for y in range(n):
            for x in _bits(preds[y]):
                succ[x].append(y)
        order = [i for i in range(n) if indeg[i] == 0]
        below = list(preds)
        k = 0
        while k < len(order):
            x = order[k]
            k += 1
            for y in succ[x]:
                below[y] |= below[x]
                indeg[y] -= 1
                if indeg[y] == 0:
                    order.append(y)
        if len(order) != n:
            raise NotAHeap("relations contain a cycle")
        return below

    @classmethod
    def from_word(cls, cartan, word):
        """Heap of a word: earlier letters lie below later related letters."""
        rel = [(i, j) for j in range(len(word)) for i in range(j) if cartan.related(word[i], word[j])]
        return cls(cartan, word, rel)

    def __len__(self):
        return len(self.labels)

    def __repr__(self):
        return f"FiniteHeap({len(self)} elements)"

    def less(self, x, y) -> bool:
        return bool(self.below[y] >> x & 1)

    def leq(self, x, y) -> bool:
        return x == y or self.less(x, y)

    def comparable(self, x, y) -> bool:
        return self.leq(x, y) or self.leq(y, x)

    @cached_property
    def above(self):
        up = [0] * len(self)
        for y in range(len(self)):
            for x in _bits(self.below[y]):
                up[x] |= 1 << y
        return up

    @cached_property
    def covers(self):
        out = []
        for y in range(len(self)):
            mask = self.below[y]
            inner = 0
            for z in _bits(mask):
                inner |= self.below[z]
            out.extend((x, y) for x in _bits(mask & ~inner))
        return out

    def linear_extension(self):
        return sorted(range(len(self)), key=lambda i: (bin(self.below[i]).count("1"), i))

    @cached_property
    def depths(self):
        d = [0] * len(self)
        for y in self.linear_extension():
            for x in _bits(self.below[y]):
                d[y] = max(d[y], d[x] + 1)
        return d

    def depth(self, x) -> int:
        return self.depths[x]

    @staticmethod
    def _mask(subset):
        m = 0
        for x in subset:
            m |= 1 << x
        return m

    def maximal(self, subset):
        m = self._mask(subset)
        return [x for x in _bits(m) if not (self.above[x] & m)]

    def minimal(self, subset):
        m = self._mask(subset)
        return [x for x in _bits(m) if not (self.below[x] & m)]

    def character(self, subset=None):
        idx = range(len(self)) if subset is None else subset
        v = [0] * self.cartan.n
        for x in idx:
            v[self.labels[x]] += 1
        return tuple(v)

    def parity(self, orientation, subset=None) -> int:
        idx = sorted(range(len(self)) if subset is None else subset)
        m = self._mask(idx)
        flips = 0
        for y in idx:
            for x in _bits(self.below[y] & m):
                if sgn(orientation, self.labels[y], self.labels[x]) == -1:
                    flips += 1
        return -1 if flips % 2 else 1

    def dual(self) -> "FiniteHeap":
        return FiniteHeap._from_masks(self.cartan, self.labels, self.above, self.names)

    def compose(self, other: "FiniteHeap") -> "FiniteHeap":
        if self.cartan != other.cartan:
            raise DiagramMismatch("heaps over different diagrams")
        n = len(self)
        rel = [(x, y) for y in range(n) for x in _bits(self.below[y])]
        rel += [(n + x, n + y) for y in range(len(other)) for x in _bits(other.below[y])]
        rel += [(x, n + y) for x in range(n) for y in range(len(other))
                if self.cartan.related(self.labels[x], other.labels[y])]
        names = [("E", a) for a in self.names] + [("F", b) for b in other.names]
        return FiniteHeap(self.cartan, self.labels + other.labels, rel, names)

    def subheap(self, subset) -> "FiniteHeap":
        """Subset with the order generated by its related comparable pairs."""
        idx = sorted(subset)
        pos = {x: i for i, x in enumerate(idx)}
        rel = [(pos[x], pos[y]) for x in idx for y in idx
               if self.less(x, y) and self.cartan.related(self.labels[x], self.labels[y])]
        return FiniteHeap(self.cartan, [self.labels[x] for x in idx], rel, [self.names[x] for x in idx])

    def is_ideal(self, subset) -> bool:
        m = self._mask(subset)
        return all(self.below[x] & ~m == 0 for x in _bits(m))

    def is_filter(self, subset) -> bool:
        m = self._mask(subset)
        return all(self.above[x] & ~m == 0 for x in _bits(m))

    def is_convex(self, subset) -> bool:
        m = self._mask(subset)
        up = 0
        for x in _bits(m):
            up |= self.above[x]
        return all(self.below[y] & up & ~m == 0 for y in _bits(m))

    def classify_subheap(self, subset) -> dict:
        subset = set(subset)
        ideal = self.is_ideal(subset)
        proper = False
        if ideal:
            proper = True
            for p in range(self.cartan.n):
                chain = {x for x in range(len(self)) if self.labels[x] == p}
                inside = chain & subset
                if not inside or inside == chain:
                    proper = False
        return {"convex": self.is_convex(subset), "ideal": ideal,
                "filter": self.is_filter(subset), "proper": proper}

    def ideals(self):
        """All order ideals, as sorted tuples, by include/exclude recursion."""
        order = self.linear_extension()
        out = []

        def rec(k, mask):
            if k == len(order):
                out.append(tuple(_bits(mask)))
                return
            x = order[k]
            rec(k + 1, mask)
            if self.below[x] & ~mask == 0:
                rec(k + 1, mask | 1 << x)

        rec(0, 0)
        return out

    def heap_violations(self):
        """Pairs breaking the two heap axioms."""
        bad = []
        for x in range(len(self)):
            for y in range(x + 1, len(self)):
                if self.cartan.related(self.labels[x], self.labels[y]) and not self.comparable(x, y):
                    bad.append(("incomparable", x, y))
        for x, y in self.covers:
            if not self.cartan.related(self.labels[x], self.labels[y]):
                bad.append(("unrelated cover", x, y))
        return bad

    def isomorphism(self, other):
        """A label preserving order isomorphism as a list, or None."""
        if len(self) != len(other) or sorted(self.labels) != sorted(other.labels):
            return None

        def inv(h, x):
            return (h.labels[x], bin(h.below[x]).count("1"), bin(h.above[x]).count("1"))

        ka = [inv(self, x) for x in range(len(self))]
        kb = [inv(other, x) for x in range(len(other))]
        if sorted(ka) != sorted(kb):
            return None
        order = self.linear_extension()
        image = [None] * len(self)
        used = [False] * len(other)

        def ok(x, y):
            for x2 in range(len(self)):
                y2 = image[x2]
                if y2 is None:
                    continue
                if self.less(x2, x) != other.less(y2, y) or self.less(x, x2) != other.less(y, y2):
                    return False
            return True

        def rec(k):
            if k == len(order):
                return True
            x = order[k]
            for y in range(len(other)):
                if not used[y] and kb[y] == ka[x] and ok(x, y):
                    image[x] = y
                    used[y] = True
                    if rec(k + 1):
                        return True
                    image[x] = None
                    used[y] = False
            return False

        return list(image) if rec(0) else None

    def is_isomorphic(self, other) -> bool:
        return self.isomorphism(other) is not None


# ---------------------------------------------------------------- periodic heaps


@dataclass
class FoldData:
    """How a folded heap sits inside its simply laced cover."""

    cover: "PeriodicHeap"
    mu: tuple
    orientation: Orientation
    fmap: tuple
    table: dict  # (P, raw folded coordinate) -> cover element, one cover period
    orbit_period: tuple  # per folded vertex: sum of cover periods over the orbit
    offsets: tuple = field(default=())  # normalized = raw - offset

    def lift(self, x):
        P, z = x
        raw = z + (self.offsets[P] if self.offsets else 0)
        k, r = divmod(raw, self.orbit_period[P])
        p, s = self.table[(P, r)]
        return (p, s + k * self.cover.period[p])


class PeriodicHeap:
    """Infinite heap stored through its generating relations over one period."""

    def __init__(self, cartan: CartanMatrix, period, relations, *, name="", fold=None,
                 folded=False, note="", check=True):
        kind = classify(cartan).kind
        if kind == "finite":
            raise NoFullHeap(f"{cartan.name or 'this diagram'} is of finite type and carries no full heap")
        if kind != "affine":
            raise NotAffineType(f"{cartan.name or 'this diagram'} is {kind}")
        period = tuple(int(x) for x in period)
        if len(period) != cartan.n or any(x < 1 for x in period):
            raise NotAHeap(f"bad period {period}")
        self.cartan = cartan
        self.n = cartan.n
        self.period = period
        self.name = name
        self.fold = fold
        self.folded = folded or fold is not None
        self.note = note
        gens = set()
        for (q, s), (p, t) in relations:
            k = t // period[p]
            gens.add((q, s - k * period[q], p, t - k * period[p]))
        self.gens = tuple(sorted(gens))
        self._down = {}
        self._up = {}
        self._valid = {}
        if check:
            self._check_acyclic()

    def __repr__(self):
        return f"PeriodicHeap({self.name or self.cartan.name}, period={self.period})"

    # ---- order

    def _close_down(self, p, t):
        c = self.period
        m = [None] * self.n
        m[p] = t + 1
        for _ in range(CLOSURE_LIMIT):
            changed = False
            for q, s, r, u in self.gens:
                if m[r] is None:
                    continue
                need = s + ((m[r] - 1 - u) // c[r]) * c[q] + 1
                if m[q] is None or need > m[q]:
                    m[q] = need
                    changed = True
            if m[p] > t + 1:
                raise NotAHeap(f"cycle through E({p},{t})", witness=(p, t))
            if not changed:
                return tuple(m)
        raise NotAHeap(f"down-closure of E({p},{t}) does not stabilize")

    def _close_up(self, p, t):
        c = self.period
        u_ = [None] * self.n
        u_[p] = t
        for _ in range(CLOSURE_LIMIT):
            changed = False
            for q, s, r, u in self.gens:
                if u_[q] is None:
                    continue
                k = -((s - u_[q]) // c[q])
                tgt = u + k * c[r]
                if u_[r] is None or tgt < u_[r]:
                    u_[r] = tgt
                    changed = True
            if u_[p] < t:
                raise NotAHeap(f"cycle through E({p},{t})", witness=(p, t))
            if not changed:
                return tuple(u_)
        raise NotAHeap(f"up-closure of E({p},{t}) does not stabilize")

    def down(self, p, z):
        """Cut of the principal ideal below E(p, z); None means no element."""
        k, t = divmod(z, self.period[p])
        base = self._down.get((p, t))
        if base is None:
            base = self._down[(p, t)] = self._close_down(p, t)
        c = self.period
        return tuple(None if m is None else m + k * c[q] for q, m in enumerate(base))

    def up(self, p, z):
        """Per chain, least index of an element >= E(p, z); None means none."""
        k, t = divmod(z, self.period[p])
        base = self._up.get((p, t))
        if base is None:
            base = self._up[(p, t)] = self._close_up(p, t)
        c = self.period
        return tuple(None if m is None else m + k * c[q] for q, m in enumerate(base))

    def leq(self, x, y) -> bool:
        if x == y:
            return True
        m = self.down(*y)[x[0]]
        return m is not None and x[1] < m

    def less(self, x, y) -> bool:
        return x != y and self.leq(x, y)

    def compare(self, x, y) -> str:
        if x == y:
            return "="
        if self.leq(x, y):
            return "<"
        if self.leq(y, x):
            return ">"
        return "||"

    def _check_acyclic(self):
        c = self.period
        for p, t in self.motif_elements:
            self.down(p, t)
            self.up(p, t)
        for q, s, p, t in self.gens:
            if self.leq((p, t), (q, s)):
                raise NotAHeap(f"relation E({q},{s}) < E({p},{t}) closes a cycle", witness=((q, s), (p, t)))

    def shift(self, x, k=1):
        return (x[0], x[1] + k * self.period[x[0]])

    @cached_property
    def motif_elements(self):
        return [(p, t) for p in range(self.n) for t in range(self.period[p])]

    def copy_of(self, x) -> int:
        return x[1] // self.period[x[0]]

    def lower_covers(self, y):
        p, t = y
        m = list(self.down(p, t))
        m[p] -= 1
        tops = [(q, m[q] - 1) for q in range(self.n) if m[q] is not None]
        return [x for x in tops if not any(x != z and self.less(x, z) for z in tops)]

    def upper_covers(self, x):
        p, t = x
        u = list(self.up(p, t))
        u[p] += 1
        bottoms = [(q, u[q]) for q in range(self.n) if u[q] is not None]
        return [y for y in bottoms if not any(y != z and self.less(z, y) for z in bottoms)]

    @cached_property
    def covers(self):
        """Hasse covers (x, y) with y in copy 0."""
        return [(x, y) for y in self.motif_elements for x in self.lower_covers(y)]

    # ---- cuts

    def is_valid(self, cut) -> bool:
        cut = tuple(cut)
        v = self._valid.get(cut)
        if v is None:
            c = self.period
            v = True
            for q, s, r, u in self.gens:
                if s + ((cut[r] - 1 - u) // c[r]) * c[q] >= cut[q]:
                    v = False
                    break
            if len(self._valid) > 500_000:
                self._valid.clear()
            self._valid[cut] = v
        return v

    def cut_elements(self, lo, hi):
        """Elements of the slab between two cuts lo <= hi."""
        return [(p, z) for p in range(self.n) for z in range(lo[p], hi[p])]

    def height(self, cut) -> int:
        return cut[0] - 1

    @cached_property
    def base_ideal(self):
        """Cut of the ideal of all elements <= E(0, 0)."""
        return self.down(0, 0)

    @cached_property
    def E0(self):
        """Elements not above E(0, 1) and outside the base ideal, as a finite heap."""
        lo = self.base_ideal
        hi = self.up(0, 1)
        elems = [(p, z) for p in range(self.n) for z in range(lo[p], hi[p])]
        return self.finite_heap(elems)

    @cached_property
    def height_zero_ideals(self):
        """All proper ideals of height zero, as cuts, sorted."""
        e0 = self.E0
        base = self.base_ideal
        out = []
        for ideal in e0.ideals():
            cut = list(base)
            for x in ideal:
                cut[e0.labels[x]] += 1
            out.append(tuple(cut))
        return sorted(out)

    def ideals_in_heights(self, lo, hi):
        """Proper ideals with heights in [lo, hi]; needs c_0 = 1."""
        if self.period[0] != 1:
            raise NotAHeap("height shifting needs period 1 at vertex 0")
        out = []
        for j in range(lo, hi + 1):
            for cut in self.height_zero_ideals:
                out.append(tuple(x + j * c for x, c in zip(cut, self.period)))
        return out

    # ---- finite views

    def finite_heap(self, elems) -> FiniteHeap:
        elems = list(elems)
        idx = {e: i for i, e in enumerate(elems)}
        below = [0] * len(elems)
        for y in elems:
            m = self.down(*y)
            mask = 0
            for x in elems:
                if x != y and m[x[0]] is not None and x[1] < m[x[0]]:
                    mask |= 1 << idx[x]
            below[idx[y]] = mask
        return FiniteHeap._from_masks(self.cartan, [e[0] for e in elems], below, elems)

    @cached_property
    def motif(self) -> FiniteHeap:
        return self.finite_heap(self.motif_elements)

    def character(self, elems=None):
        elems = self.motif_elements if elems is None else elems
        v = [0] * self.n
        for p, _ in elems:
            v[p] += 1
        return tuple(v)

    def parity(self, elems, orientation=None) -> int:
        elems = list(elems)
        if self.folded:
            if self.fold is None:
                raise MissingCoverData("folded heap has no cover provenance")
            return self.fold.cover.parity([self.fold.lift(x) for x in elems], self.fold.orientation)
        orientation = orientation or Orientation.default(self.cartan)
        flips = 0
        for i, x in enumerate(elems):
            for y in elems[i + 1:]:
                if self.less(y, x):
                    flips += sgn(orientation, x[0], y[0]) == -1
                elif self.less(x, y):
                    flips += sgn(orientation, y[0], x[0]) == -1
        return -1 if flips % 2 else 1

    def materialize(self, k: int = 1) -> "HeapWindow":
        return HeapWindow(self, k)

    # ---- derived heaps

    def normalized(self) -> "PeriodicHeap":
        """Recoordinatize so that the base ideal is the cut (1, 0, ..., 0)."""
        m = self.down(0, 0)
        off = [0 if (q == 0 or m[q] is None) else m[q] for q in range(self.n)]
        rel = [((q, s - off[q]), (p, t - off[p])) for q, s, p, t in self.gens]
        fold = self.fold
        if fold is not None:
            base = fold.offsets or (0,) * self.n
            fold = FoldData(fold.cover, fold.mu, fold.orientation, fold.fmap, fold.table,
                            fold.orbit_period, tuple(b + o for b, o in zip(base, off)))
        return PeriodicHeap(self.cartan, self.period, rel, name=self.name, fold=fold,
                            folded=self.folded, note=self.note)

    def dual(self) -> "PeriodicHeap":
        rel = [((p, -t - 1), (q, -s - 1)) for q, s, p, t in self.gens]
        return PeriodicHeap(self.cartan, self.period, rel, name=self.name + "*", note=self.note).normalized()

    def without_cover(self, cover) -> "PeriodicHeap":
        """Rebuild from Hasse covers with one cover deleted (for mutation tests)."""
        keep = [cv for cv in self.covers if cv != cover]
        return PeriodicHeap(self.cartan, self.period, keep, name=self.name + "-mut", check=True)

    @classmethod
    def from_cyclic_word(cls, cartan, word, **kw) -> "PeriodicHeap":
        """Heap of the bi-infinite repetition of one period word."""
        period = [0] * cartan.n
        for p in word:
            period[p] += 1
        seen = [0] * cartan.n
        rel = []
        for p in word:
            t = seen[p]
            for q in range(cartan.n):
                if q != p and cartan.adjacent(p, q):
                    rel.append(((q, seen[q] - 1), (p, t)))
            seen[p] += 1
        return cls(cartan, period, rel, **kw).normalized()

    def minimal_period(self) -> "PeriodicHeap":
        """Same heap with the least period vector whose shift is an automorphism."""
        from math import gcd
        g = 0
        for c in self.period:
            g = gcd(g, c)
        for k in range(g, 1, -1):
            if g % k:
                continue
            small = tuple(c // k for c in self.period)
            if all(self.down(p, t + small[p]) == tuple(None if m is None else m + sc for m, sc in
                                                        zip(self.down(p, t), small))
                   for p, t in self.motif_elements):
                rel = [(x, y) for x, y in self.covers if y[1] < small[y[0]]]
                return PeriodicHeap(self.cartan, small, rel, name=self.name, note=self.note,
                                    fold=self.fold, folded=self.folded).normalized()
        return self

    # ---- rank

    @cached_property
    def rank_data(self):
        """(rank per motif element, rank shift per period) or None if unranked."""
        from fractions import Fraction
        val = {}
        r = None
        start = self.motif_elements[0]
        val[start] = (Fraction(0), 0)
        edges = {}
        for x, y in self.covers:
            d = self.copy_of(x)
            x0 = (x[0], x[1] - d * self.period[x[0]])
            edges.setdefault(x0, []).append((y, 1, d))
            edges.setdefault(y, []).append((x0, -1, -d))
        todo = [start]
        while todo:
            x = todo.pop()
            a, b = val[x]
            for y, step, d in edges.get(x, []):
                # rank(y) = rank(x) + step + d * r
                cand = (a + step, b + d)
                if y not in val:
                    val[y] = cand
                    todo.append(y)
                    continue
                a2, b2 = val[y]
                if b2 == cand[1]:
                    if a2 != cand[0]:
                        return None
                else:
                    rr = (cand[0] - a2) / (b2 - cand[1])
                    if r is None:
                        r = rr
                    elif r != rr:
                        return None
        if r is None or r.denominator != 1 or r <= 0 or len(val) != len(self.motif_elements):
            return None
        ranks = {x: a + b * r for x, (a, b) in val.items()}
        if any(v.denominator != 1 for v in ranks.values()):
            return None
        lo = min(ranks.values())
        return {x: int(v - lo) for x, v in ranks.items()}, int(r)

    def rank(self, x):
        data = self.rank_data
        if data is None:
            return None
        ranks, r = data
        k = self.copy_of(x)
        return ranks[(x[0], x[1] - k * self.period[x[0]])] + k * r

    # ---- serialization

    def _motif_order(self):
        m = self.motif
        key = {}
        for i, x in enumerate(m.names):
            rk = self.rank(x)
            key[x] = (rk if rk is not None else m.depth(i), x[0], x[1])
        return sorted(self.motif_elements, key=key.get)

    def to_dict(self):
        order = self._motif_order()
        ids = {x: i for i, x in enumerate(order)}
        motif = []
        for x in order:
            item = {"id": ids[x], "label": x[0], "z": x[1]}
            rk = self.rank(x)
            if rk is not None:
                item["rank"] = rk
            motif.append(item)
        covers, boundary = [], []
        for x, y in self.covers:
            d = self.copy_of(x)
            x0 = (x[0], x[1] - d * self.period[x[0]])
            if d == 0:
                covers.append([ids[x0], ids[y]])
            elif d == -1:
                boundary.append([ids[x0], ids[y]])
            else:
                boundary.append([ids[x0], ids[y], -d])
        d = {"diagram": self.cartan.name, "cartan": [list(r) for r in self.cartan.a],
             "name": self.name, "period": list(self.period), "motif": motif,
             "covers": sorted(covers), "boundary_covers": sorted(boundary)}
        if self.folded:
            d["folded"] = True
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d):
        cartan = CartanMatrix(d["cartan"], d.get("diagram", ""))
        period = d["period"]
        coord = {}
        if all("z" in item for item in d["motif"]):
            for item in d["motif"]:
                coord[item["id"]] = (item["label"], item["z"])
        else:
            count = [0] * cartan.n
            for item in sorted(d["motif"], key=lambda it: (it.get("rank", 0), it["id"])):
                coord[item["id"]] = (item["label"], count[item["label"]])
                count[item["label"]] += 1
        rel = [(coord[a], coord[b]) for a, b in d["covers"]]
        for entry in d["boundary_covers"]:
            a, b = entry[:2]
            k = entry[2] if len(entry) > 2 else 1
            p, t = coord[b]
            rel.append((coord[a], (p, t + k * period[p])))
        return cls(cartan, period, rel, name=d.get("name", ""), folded=d.get("folded", False))

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


def periodic_isomorphism(h1: PeriodicHeap, h2: PeriodicHeap):
    """Offsets o with h2's E(p, z) matching h1's E(p, z + o_p), or None."""
    if h1.cartan != h2.cartan or h1.period != h2.period:
        return None
    m2 = h2.down(0, 0)
    for o0 in range(h1.period[0]):
        m1 = h1.down(0, o0)
        if any((a is None) != (b is None) for a, b in zip(m1, m2)):
            continue
        off = tuple(0 if a is None else a - b for a, b in zip(m1, m2))
        if off[0] != o0:
            continue
        ok = True
        for p, t in h2.motif_elements:
            d1 = h1.down(p, t + off[p])
            d2 = h2.down(p, t)
            if any((a is None) != (b is None) or (a is not None and a != b + o)
                   for a, b, o in zip(d1, d2, off)):
                ok = False
                break
        if ok:
            return off
    return None


def isomorphic(h1, h2) -> bool:
    if isinstance(h1, FiniteHeap):
        return h1.is_isomorphic(h2)
    return periodic_isomorphism(h1, h2) is not None


# ---------------------------------------------------------------- windows


class HeapWindow:
    """Copies -k..k of the motif, with the order inherited from the heap."""

    def __init__(self, heap: PeriodicHeap, k: int = 1):
        if k < 1:
            raise ValueError("window needs k >= 1")
        self.source = heap
        self.k = k
        c = heap.period
        self.lo = tuple(-k * x for x in c)
        self.hi = tuple((k + 1) * x for x in c)
        elems = heap.cut_elements(self.lo, self.hi)
        self.heap = heap.finite_heap(elems)
        self.elements = elems
        self.index = {e: i for i, e in enumerate(elems)}

    def __len__(self):
        return len(self.elements)

    def __contains__(self, x):
        return x in self.index

    def comparability(self, x, y) -> str:
        return self.source.compare(x, y)

    def interval(self, x, y, closed=False):
        h = self.heap
        i, j = self.index[x], self.index[y]
        out = [self.elements[z] for z in range(len(h)) if h.less(i, z) and h.less(z, j)]
        if closed and h.leq(i, j):
            out = [x] + out + ([y] if x != y else [])
        return out

    def classify_subheap(self, elems) -> dict:
        return self.heap.classify_subheap([self.index[e] for e in elems])

    def subheap(self, elems) -> FiniteHeap:
        return self.heap.subheap([self.index[e] for e in elems])

    def covers(self):
        return [(self.elements[a], self.elements[b]) for a, b in self.heap.covers]

    def convex_subheaps(self, alpha):
        """Convex subsets with character alpha, as sorted element lists.

        Every such set is the slab between a proper ideal I and I + alpha.
        """
        h = self.source
        lo = min(self.lo[0], 0) - 1
        hi = self.hi[0] + 1
        supp = [p for p in range(h.n) if alpha[p]]
        found = {}
        for cut in h.ideals_in_heights(lo, hi):
            top = tuple(a + b for a, b in zip(cut, alpha))
            if not h.is_valid(top):
                continue
            if any(cut[p] < self.lo[p] or top[p] > self.hi[p] for p in supp):
                continue
            key = tuple(cut[p] for p in supp)
            if key not in found:
                found[key] = sorted(h.cut_elements(cut, top))
        return [found[k] for k in sorted(found)]

    def rank_of(self, x):
        r = self.source.rank(x)
        return r if r is not None else self.heap.depth(self.index[x])

    def to_dot(self) -> str:
        lines = ["digraph heap {", "  rankdir=BT;"]
        by_rank = {}
        for e in self.elements:
            by_rank.setdefault(self.rank_of(e), []).append(e)
        for e in self.elements:
            style = ", style=dashed" if self.source.copy_of(e) == 0 else ""
            lines.append(f'  "{e[0]}@{e[1]}" [label="{e[0]}@{e[1]}"{style}];')
        for r in sorted(by_rank):
            names = " ".join(f'"{p}@{z}";' for p, z in sorted(by_rank[r]))
            lines.append(f"  {{ rank=same; {names} }}")
        for a, b in sorted(self.covers()):
            lines.append(f'  "{a[0]}@{a[1]}" -> "{b[0]}@{b[1]}";')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_text(self) -> str:
        """One line per rank level; motif elements are bracketed."""
        by_rank = {}
        for e in self.elements:
            by_rank.setdefault(self.rank_of(e), []).append(e)
        out = []
        for r in sorted(by_rank, reverse=True):
            cells = []
            marked = False
            for p, z in sorted(by_rank[r]):
                if self.source.copy_of((p, z)) == 0:
                    cells.append(f"[{p}@{z}]")
                    marked = True
                else:
                    cells.append(f" {p}@{z} ")
            out.append(("|" if marked else " ") + f" {r:4d}  " + " ".join(cells))
        return "\n".join(out) + "\n"

    def render(self, fmt="text") -> str:
        if fmt == "text":
            return self.to_text()
        if fmt == "dot":
            return self.to_dot()
        if fmt == "json":
            return json.dumps({"elements": [list(e) for e in self.elements],
                               "covers": [[list(a), list(b)] for a, b in sorted(self.covers())]})
        raise UnsupportedFormat(f"window cannot be rendered as {fmt}")


# ---------------------------------------------------------------- axioms


def verify_axioms(heap: PeriodicHeap, cartan: CartanMatrix | None = None) -> Report:
    """Heap, fibred and full axioms, checked on the central copy."""
    if cartan is not None and cartan != heap.cartan:
        raise DiagramMismatch("heap is over a different diagram")
    a = heap.cartan
    rep = Report("axioms")
    for p in range(heap.n):
        x, y = (p, 0), (p, heap.period[p])
        rep.check(heap.less(x, y), "fibred(a)", witness={"chain": p})
    for p, t in heap.motif_elements:
        d = heap.down(p, t)
        u = heap.up(p, t)
        for q in range(heap.n):
            if q == p or not a.adjacent(p, q):
                continue
            ok = d[q] is not None and u[q] is not None and d[q] == u[q]
            rep.check(ok, "heap(1)", witness={"element": (p, t), "label": q, "below": d[q], "above": u[q]})
    for x, y in heap.covers:
        rep.check(a.related(x[0], y[0]), "heap(2)", witness={"cover": (x, y)})
    for p, t in heap.motif_elements:
        near = {z[0] for z in heap.lower_covers((p, t))} | {z[0] for z in heap.upper_covers((p, t))}
        for q in a.neighbours(p):
            rep.check(q in near, "fibred(b)", witness={"element": (p, t), "label": q})
    for p, t in heap.motif_elements:
        lo = heap.up(p, t)
        hi = heap.down(p, t + 1)
        total = 0
        inside = []
        for q in range(heap.n):
            if q == p or lo[q] is None or hi[q] is None:
                continue
            cnt = max(0, hi[q] - lo[q])
            inside += [(q, s) for s in range(lo[q], lo[q] + cnt)]
            total += a.a[p][q] * cnt
        rep.check(total == -2, "full", witness={"interval": ((p, t), (p, t + 1)), "inside": inside, "sum": total})
    return rep
