"""Weights, crystal graphs, the quantum relations and the Weyl group action."""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field

import networkx as nx

from .cartan import comarks
from .laurent import LaurentPoly, qfactorial, qint
from .rep import ZERO, HeapModule, ModuleVector, Operator, first_difference, power
from .errors import UnsupportedFormat
from .report import Report


def _shift(cut, p, k):
    return tuple(x + k if i == p else x for i, x in enumerate(cut))


def weight(heap, cut):
    """H_i eigenvalues followed by the height."""
    m = tuple(int(heap.is_valid(_shift(cut, i, -1))) - int(heap.is_valid(_shift(cut, i, 1)))
              for i in range(heap.n))
    return m + (heap.height(cut),)


def kashiwara(heap, kind, i, cut):
    """f lowers (removes an i-element), e raises; None when the move is not allowed."""
    new = _shift(cut, i, -1 if kind == "f" else 1)
    return new if heap.is_valid(new) else None


# ---------------------------------------------------------------- crystal graphs


@dataclass
class CrystalGraph:
    heap: object
    nodes: list
    edges: list  # (src, dst, i) with f_i(src) = dst
    heights: tuple = ()
    quotient: bool = False
    wrap: set = field(default_factory=set)

    def components(self):
        g = nx.DiGraph()
        g.add_nodes_from(self.nodes)
        g.add_edges_from((s, d) for s, d, _ in self.edges)
        return sorted(sorted(c) for c in nx.weakly_connected_components(g))

    def to_json(self) -> str:
        return json.dumps({"nodes": [list(c) for c in self.nodes],
                           "edges": [[list(s), list(d), i] for s, d, i in self.edges]})

    def to_dot(self) -> str:
        name = lambda c: '"' + ",".join(map(str, c)) + '"'
        lines = ["digraph crystal {"]
        for c in self.nodes:
            lines.append(f"  {name(c)};")
        for s, d, i in self.edges:
            style = ", style=dashed" if (s, d, i) in self.wrap else ""
            lines.append(f'  {name(s)} -> {name(d)} [label="{i}", colorscheme=set19, color={i % 9 + 1}{style}];')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def render(self, fmt="dot") -> str:
        if fmt == "dot":
            return self.to_dot()
        if fmt == "json":
            return self.to_json()
        raise UnsupportedFormat(f"crystal graphs render as dot or json, not {fmt}")


def build_crystal_graph(heap, heights=range(0, 1), quotient=False) -> CrystalGraph:
    """Proper ideals with height in the range, and the f-edges among them.

    In quotient mode the nodes are the height-zero ideals and an edge that
    leaves height zero is shifted back and marked as a wrap edge.
    """
    if quotient:
        nodes = sorted(heap.height_zero_ideals)
        period = heap.period
        edges, wrap = [], set()
        for c in nodes:
            for i in range(heap.n):
                d = kashiwara(heap, "f", i, c)
                if d is None:
                    continue
                j = heap.height(d)
                if j:
                    d = tuple(x - j * p for x, p in zip(d, period))
                    wrap.add((c, d, i))
                edges.append((c, d, i))
        return CrystalGraph(heap, nodes, edges, (0,), True, wrap)
    heights = tuple(heights)
    nodes = sorted(heap.ideals_in_heights(min(heights), max(heights))) if heights else []
    nodeset = set(nodes)
    edges = []
    for c in nodes:
        for i in range(heap.n):
            d = kashiwara(heap, "f", i, c)
            if d is not None and d in nodeset:
                edges.append((c, d, i))
    return CrystalGraph(heap, nodes, edges, heights)


def verify_crystal_axioms(G: CrystalGraph) -> Report:
    rep = Report("crystal")
    h = G.heap
    if not G.nodes:
        return rep
    a = h.cartan.a
    nodeset = set(G.nodes)
    edgeset = set(G.edges)
    for s, d, i in G.edges:
        if G.quotient:
            continue
        rep.check(kashiwara(h, "f", i, s) == d, "edge is f_i", {"edge": (s, d, i)})
        rep.check(kashiwara(h, "e", i, d) == s, "(vi) f_i b = b' iff e_i b' = b", {"edge": (s, d, i)})
        ws, wd = weight(h, s), weight(h, d)
        want = tuple(ws[j] - a[j][i] for j in range(h.n)) + (ws[-1] - (1 if i == 0 else 0),)
        rep.check(wd == want, "wt(f_i b) = wt(b) - alpha_i", {"edge": (s, d, i), "weights": (ws, wd)})
    marks = comarks(h.cartan)
    for b in G.nodes:
        w = weight(h, b)
        rep.check(all(x in (-1, 0, 1) for x in w[:-1]), "weight entries in {-1,0,1}", {"node": b})
        rep.check(sum(c * x for c, x in zip(marks, w)) == 0, "level zero", {"node": b})
        for i in range(h.n):
            f, e = kashiwara(h, "f", i, b), kashiwara(h, "e", i, b)
            rep.check(f is None or e is None, "e_i and f_i exclusive", {"node": b, "i": i})
            for x in (f, e):
                rep.check(x is None or h.is_valid(x), "(iv)-(v) image in B or 0", {"node": b, "i": i})
            if f is not None:
                rep.check(kashiwara(h, "f", i, f) is None, "i-strings have length <= 2", {"node": b, "i": i})
            if not G.quotient and e is not None and e in nodeset:
                rep.check((e, b, i) in edgeset, "(vi) f_i b = b' iff e_i b' = b", {"node": b, "i": i, "missing": (e, b, i)})
    return rep


def extremal_nodes(G: CrystalGraph):
    """Height-zero nodes killed by every e_i (resp. every f_i) with i != 0."""
    h = G.heap
    zero = [b for b in G.nodes if h.height(b) == 0]
    top = [b for b in zero if all(kashiwara(h, "e", i, b) is None for i in range(1, h.n))]
    bottom = [b for b in zero if all(kashiwara(h, "f", i, b) is None for i in range(1, h.n))]
    return top, bottom


# ---------------------------------------------------------------- Weyl group


def weyl_action(heap, i, cut):
    f = kashiwara(heap, "f", i, cut)
    if f is not None:
        return f
    e = kashiwara(heap, "e", i, cut)
    return e if e is not None else tuple(cut)


def weyl_word(heap, word, cut):
    """S_{w1} ... S_{wk} applied to cut (rightmost letter first)."""
    for i in reversed(word):
        cut = weyl_action(heap, i, cut)
    return cut


def _bond(cartan, i, j):
    return cartan.a[i][j] * cartan.a[j][i]


def _alternating(i, j, k):
    return tuple(i if t % 2 == 0 else j for t in range(k))


def dihedral_elements(i, j, m):
    """One reduced word for each of the 2m elements of <s_i, s_j>."""
    words = [()]
    for k in range(1, m):
        words += [_alternating(i, j, k), _alternating(j, i, k)]
    words.append(_alternating(i, j, m))
    return words


def verify_weyl(heap, cuts=None) -> Report:
    rep = Report("weyl")
    c = heap.cartan
    cuts = cuts if cuts is not None else heap.ideals_in_heights(-1, 1)
    skipped = []
    for b in cuts:
        for i in range(heap.n):
            rep.check(weyl_word(heap, (i, i), b) == tuple(b), "S_i^2 = 1", {"ideal": b, "i": i})
    for i in range(heap.n):
        for j in range(i + 1, heap.n):
            bond = _bond(c, i, j)
            if bond == 0:
                m = 2
            elif bond in (1, 2):
                m = bond + 2
            else:
                skipped.append((i, j))
                continue
            for b in cuts:
                lhs = weyl_word(heap, _alternating(i, j, m), b)
                rhs = weyl_word(heap, _alternating(j, i, m), b)
                rep.check(lhs == rhs, "braid" if m > 2 else "commuting", {"ideal": b, "i": i, "j": j})
    rep.meta["not applicable (infinite dihedral)"] = skipped
    return rep


def verify_tl_annihilation(heap, cuts=None) -> Report:
    """Signed sums over finite rank-two parabolic subgroups kill every basis vector."""
    rep = Report("temperley-lieb")
    c = heap.cartan
    cuts = cuts if cuts is not None else heap.ideals_in_heights(-1, 1)
    terms, skipped = {}, []
    for i in range(heap.n):
        for j in range(i + 1, heap.n):
            bond = _bond(c, i, j)
            if bond == 0:
                continue
            if bond not in (1, 2):
                skipped.append((i, j))
                continue
            words = dihedral_elements(i, j, bond + 2)
            terms[f"{i},{j}"] = len(words)
            for b in cuts:
                total = ModuleVector()
                for w in words:
                    total = total + ModuleVector.basis(weyl_word(heap, w, b), (-1) ** len(w))
                rep.check(not total, "TL sum vanishes", {"ideal": b, "i": i, "j": j, "sum": total.plain()})
    rep.meta["terms per pair"] = terms
    rep.meta["not applicable (infinite dihedral)"] = skipped
    return rep


# ---------------------------------------------------------------- cyclicity


def verify_cyclicity(heap, I, J):
    """Moves ("F", p) down from I to the meet of I and J, then ("E", p) up to J."""
    I, J = tuple(I), tuple(J)
    meet = tuple(min(x, y) for x, y in zip(I, J))
    moves = []
    cur = I
    while cur != meet:
        for p in range(heap.n):
            if cur[p] > meet[p] and heap.is_valid(_shift(cur, p, -1)):
                cur = _shift(cur, p, -1)
                moves.append(("F", p))
                break
        else:
            raise AssertionError(f"no lowering move from {cur}")
    while cur != J:
        for p in range(heap.n):
            if cur[p] < J[p] and heap.is_valid(_shift(cur, p, 1)):
                cur = _shift(cur, p, 1)
                moves.append(("E", p))
                break
        else:
            raise AssertionError(f"no raising move from {cur}")
    return moves


def replay(module: HeapModule, I, moves) -> ModuleVector:
    v = ModuleVector.basis(I)
    for kind, p in moves:
        v = (module.Y(p) if kind == "F" else module.X(p))(v)
    return v


def verify_cyclicity_sample(heap, pairs=100, seed=0) -> Report:
    rep = Report("cyclicity")
    rnd = random.Random(seed)
    cuts = heap.ideals_in_heights(-1, 1)
    m = HeapModule(heap)
    for _ in range(pairs):
        I, J = rnd.choice(cuts), rnd.choice(cuts)
        moves = verify_cyclicity(heap, I, J)
        length = sum(abs(x - y) for x, y in zip(I, J))
        rep.check(len(moves) == length, "sequence length", {"I": I, "J": J, "moves": len(moves)})
        rep.check(replay(m, I, moves) == ModuleVector.basis(J), "replay", {"I": I, "J": J})
    return rep


# ---------------------------------------------------------------- quantum relations


def _diag(rule, tag):
    return Operator(lambda cut: ModuleVector.basis(cut, rule(cut)), tag)


def verify_quantum_relations(heap, sample=None) -> Report:
    """Relations of the quantum affine algebra with exact Laurent coefficients.

    t_i acts on a weight vector by q_i^{m_i}, with q_i = q^{d_i} from the
    symmetrizer (q on short roots).
    """
    rep = Report("quantum")
    m = HeapModule(heap)
    c = heap.cartan
    a = c.a
    n = heap.n
    d = c.symmetrizer
    cuts = list(sample) if sample is not None else m.sample_cuts()
    one = LaurentPoly(1)
    E = [Operator(lambda cut, i=i: one * m.X(i).on_basis(cut), f"E{i}") for i in range(n)]
    F = [Operator(lambda cut, i=i: one * m.Y(i).on_basis(cut), f"F{i}") for i in range(n)]
    wt = lambda cut: weight(heap, cut)
    qh = [(_diag(lambda cut, j=j: LaurentPoly.q(wt(cut)[j]), f"q^h{j}"),
           _diag(lambda cut, j=j: LaurentPoly.q(-wt(cut)[j]), f"q^-h{j}")) for j in range(n + 1)]

    def same(lhs, rhs, name, **where):
        bad = first_difference(lhs, rhs, cuts)
        rep.check(bad is None, name, dict(where, **bad) if bad else None)

    for j in range(n + 1):
        up, down = qh[j]
        for i in range(n):
            k = a[j][i] if j < n else (1 if i == 0 else 0)
            same(up @ E[i] @ down, LaurentPoly.q(k) * E[i], "q^h E_i q^-h = q^<h,a_i> E_i", h=j, i=i)
            same(up @ F[i] @ down, LaurentPoly.q(-k) * F[i], "q^h F_i q^-h = q^-<h,a_i> F_i", h=j, i=i)
        for k in range(n + 1):
            same(up @ qh[k][0], qh[k][0] @ up, "q^h commute", h=j, k=k)
    for i in range(n):
        K = _diag(lambda cut, i=i: qint(wt(cut)[i], d[i]), f"[h{i}]")
        for j in range(n):
            rhs = K if i == j else ZERO
            same(E[i] @ F[j] - F[j] @ E[i], rhs, "E_iF_j - F_jE_i = delta_ij [h_i]", i=i, j=j)
    for i in range(n):
        for j in range(n):
            if i == j or a[i][j] == 0:
                continue
            b = 1 - a[i][j]
            for name, G in (("E", E), ("F", F)):
                total = ZERO
                for p in range(b + 1):
                    total = total + (-1) ** p * (_divided(G[i], p, d[i]) @ G[j] @ _divided(G[i], b - p, d[i]))
                same(total, ZERO, f"quantum serre {name}", i=i, j=j)
    for i in range(n):
        for p in (2, 3):
            same(_divided(E[i], p, d[i]), ZERO, "divided powers vanish", i=i, p=p)
    rep.meta["q_i exponents"] = list(d)
    return rep


def _divided(op, p, di):
    fact = qfactorial(p, di)
    base = power(op, p)
    return Operator(lambda cut: ModuleVector({k: LaurentPoly.lift(v) / fact for k, v in base.on_basis(cut).items()}),
                    f"{op.tag}^({p})")
