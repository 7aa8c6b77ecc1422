"""Stallings graphs of finitely generated subgroups of free groups.

Graphs are stored with vertices ``0..n-1`` and edges ``(src, dst, label)`` for
positive labels.  Traversal uses signed directions: ``+l`` follows an
``l``-edge forwards, ``-l`` follows it backwards.  Every folded graph leaving
this module is canonically numbered by a breadth-first search from the
basepoint that visits directions in the order ``1, -1, 2, -2, ...``, so two
graphs describe the same subgroup exactly when they compare equal.
"""

from __future__ import annotations

import math
import random
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Sequence

from .errors import GraphFormatError, RankMismatch
from .words import Word, check_rank, letter_text

INFINITE = math.inf

Edge = tuple[int, int, int]


def directions(rank: int) -> list[int]:
    """Signed directions in canonical order ``1, -1, 2, -2, ...``."""
    out = []
    for l in range(1, rank + 1):
        out.extend((l, -l))
    return out


@dataclass(frozen=True)
class StallingsGraph:
    num_vertices: int
    base: int
    edges: tuple[Edge, ...]
    rank: int

    @cached_property
    def adjacency(self) -> list[dict[int, int]]:
        """``adjacency[v][d]`` is the vertex reached from ``v`` in direction ``d``.

        Only meaningful on folded graphs; a clash keeps the last edge seen.
        """
        adj: list[dict[int, int]] = [{} for _ in range(self.num_vertices)]
        for s, t, l in self.edges:
            adj[s][l] = t
            adj[t][-l] = s
        return adj

    def degree(self, v: int) -> int:
        return sum((s == v) + (t == v) for s, t, _ in self.edges)

    @property
    def betti(self) -> int:
        """First Betti number of a connected graph."""
        return len(self.edges) - self.num_vertices + 1

    def is_immersed(self) -> bool:
        seen = set()
        for s, t, l in self.edges:
            for key in ((s, l), (t, -l)):
                if key in seen:
                    return False
                seen.add(key)
        return True

    def is_connected(self) -> bool:
        return len(_reachable(self, self.base)) == self.num_vertices

    def follow(self, v: int, letters: Iterable[int]) -> int | None:
        """Endpoint of the path reading ``letters`` from ``v``, or None if it falls off."""
        adj = self.adjacency
        for x in letters:
            nxt = adj[v].get(x)
            if nxt is None:
                return None
            v = nxt
        return v

    def to_text(self) -> str:
        lines = [f"V {self.num_vertices} BASE {self.base}"]
        lines += [f"E {s} {t} {letter_text(l)}" for s, t, l in self.edges]
        return "\n".join(lines) + "\n"

    def to_dot(self, name: str = "stallings") -> str:
        lines = [f"digraph {name} {{"]
        for v in range(self.num_vertices):
            shape = "doublecircle" if v == self.base else "circle"
            lines.append(f"  {v} [shape={shape}];")
        for s, t, l in self.edges:
            lines.append(f'  {s} -> {t} [label="{letter_text(l)}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def graph_from_text(text: str, rank: int | None = None) -> StallingsGraph:
    """Parse the ``V <count> BASE <id>`` / ``E <src> <dst> <label>`` format.

    Labels may be generator letters or 1-based integers.  Without ``rank`` the
    ambient rank is the largest label present (at least 1).
    """
    header = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        parts = raw.split()
        if not parts or parts[0].startswith("#"):
            continue
        if parts[0] == "V" and len(parts) == 4 and parts[2] == "BASE":
            header = (int(parts[1]), int(parts[3]))
        elif parts[0] == "E" and len(parts) == 4:
            lab = parts[3]
            if lab.isdigit():
                l = int(lab)
            elif len(lab) == 1 and lab.isalpha() and lab.islower():
                l = ord(lab) - ord("a") + 1
            else:
                raise GraphFormatError(f"line {lineno}: bad edge label {lab!r}")
            edges.append((int(parts[1]), int(parts[2]), l))
        else:
            raise GraphFormatError(f"line {lineno}: cannot parse {raw!r}")
    if header is None:
        raise GraphFormatError("missing 'V <count> BASE <id>' header")
    n, base = header
    if rank is None:
        rank = max([l for _, _, l in edges], default=1)
    check_rank(rank)
    for s, t, l in edges:
        if not (0 <= s < n and 0 <= t < n and 1 <= l <= rank):
            raise GraphFormatError(f"edge {(s, t, l)} out of range")
    if not 0 <= base < n:
        raise GraphFormatError(f"basepoint {base} out of range")
    return StallingsGraph(n, base, tuple(sorted(edges)), rank)


def _reachable(g: StallingsGraph, start: int) -> set[int]:
    nbrs: list[list[int]] = [[] for _ in range(g.num_vertices)]
    for s, t, _ in g.edges:
        nbrs[s].append(t)
        nbrs[t].append(s)
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for w in nbrs[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return seen


# -- folding -----------------------------------------------------------------

def fold(g: StallingsGraph, rng: random.Random | None = None) -> StallingsGraph:
    """Fold ``g`` to an immersion.

    Union-find over vertices plus a worklist of (vertex, direction) clashes.
    With ``rng`` the clash to resolve and the pair to identify are chosen at
    random; the folded graph is the same either way (up to numbering, which
    ``canonical`` removes).
    """
    n = g.num_vertices
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    adj: list[dict[int, list[int]] | None] = [{} for _ in range(n)]
    for s, t, l in g.edges:
        adj[s].setdefault(l, []).append(t)
        adj[t].setdefault(-l, []).append(s)
    pending = [(v, d) for v in range(n) for d, ts in adj[v].items() if len(ts) > 1]

    while pending:
        k = rng.randrange(len(pending)) if rng else len(pending) - 1
        pending[k], pending[-1] = pending[-1], pending[k]
        v, d = pending.pop()
        v = find(v)
        targets = []
        for t in adj[v].get(d, ()):
            t = find(t)
            if t not in targets:
                targets.append(t)
        if len(targets) <= 1:
            adj[v][d] = targets
            continue
        if rng:
            a, b = rng.sample(targets, 2)
        else:
            a, b = targets[0], targets[1]
        # merge the smaller direction table into the larger
        if sum(map(len, adj[a].values())) < sum(map(len, adj[b].values())):
            a, b = b, a
        parent[b] = a
        for d2, ts in adj[b].items():
            bucket = adj[a].setdefault(d2, [])
            bucket.extend(ts)
            if len(bucket) > 1:
                pending.append((a, d2))
        adj[b] = None
        pending.append((find(v), d))

    edges = {(find(s), find(t), l) for s, t, l in g.edges}
    roots = sorted({find(v) for v in range(n)})
    ids = {r: i for i, r in enumerate(roots)}
    folded = StallingsGraph(
        len(roots), ids[find(g.base)],
        tuple(sorted((ids[s], ids[t], l) for s, t, l in edges)), g.rank)
    assert folded.is_immersed()
    return folded


def prune(g: StallingsGraph, keep_base: bool = True) -> StallingsGraph:
    """Strip degree-1 vertices until none remain.

    With ``keep_base`` the basepoint survives even at degree <= 1 (the based
    core).  Without it the result is the unbased core; its basepoint is then
    the surviving vertex closest to the old one, or the old basepoint if the
    graph is a tree.
    """
    deg = [0] * g.num_vertices
    for s, t, _ in g.edges:
        deg[s] += 1
        deg[t] += 1
    alive = [True] * g.num_vertices
    live_edges = set(range(len(g.edges)))
    inc: list[list[int]] = [[] for _ in range(g.num_vertices)]
    for i, (s, t, _) in enumerate(g.edges):
        inc[s].append(i)
        inc[t].append(i)
    stack = [v for v in range(g.num_vertices) if deg[v] <= 1]
    while stack:
        v = stack.pop()
        if not alive[v] or deg[v] > 1 or (keep_base and v == g.base):
            continue
        alive[v] = False
        for i in inc[v]:
            if i in live_edges:
                live_edges.remove(i)
                s, t, _ = g.edges[i]
                w = t if s == v else s
                deg[w] -= 1
                deg[v] -= 1
                if deg[w] <= 1:
                    stack.append(w)
    if not any(alive):
        return StallingsGraph(1, 0, (), g.rank)
    base = g.base
    if not alive[base]:
        base = _closest_alive(g, alive)
    keep = [v for v in range(g.num_vertices) if alive[v]]
    ids = {v: i for i, v in enumerate(keep)}
    edges = tuple(sorted((ids[g.edges[i][0]], ids[g.edges[i][1]], g.edges[i][2])
                         for i in live_edges))
    return StallingsGraph(len(keep), ids[base], edges, g.rank)


def _closest_alive(g: StallingsGraph, alive: list[bool]) -> int:
    adj = g.adjacency
    seen = {g.base}
    queue = deque([g.base])
    while queue:
        v = queue.popleft()
        if alive[v]:
            return v
        for d in directions(g.rank):
            w = adj[v].get(d)
            if w is not None and w not in seen:
                seen.add(w)
                queue.append(w)
    raise ValueError("no surviving vertex")


def bfs_order(g: StallingsGraph, start: int | None = None) -> tuple[list[int], dict[int, tuple[int, ...]]]:
    """Vertices in canonical BFS order and the tree-path word reaching each."""
    start = g.base if start is None else start
    adj = g.adjacency
    order = [start]
    paths = {start: ()}
    queue = deque([start])
    dirs = directions(g.rank)
    while queue:
        v = queue.popleft()
        for d in dirs:
            w = adj[v].get(d)
            if w is not None and w not in paths:
                paths[w] = paths[v] + (d,)
                order.append(w)
                queue.append(w)
    return order, paths


def canonical(g: StallingsGraph) -> StallingsGraph:
    """Renumber a folded connected graph in canonical BFS order."""
    order, _ = bfs_order(g)
    if len(order) != g.num_vertices:
        raise ValueError("graph is not connected")
    ids = {v: i for i, v in enumerate(order)}
    edges = tuple(sorted((ids[s], ids[t], l) for s, t, l in g.edges))
    return StallingsGraph(g.num_vertices, 0, edges, g.rank)


def wedge(gens: Sequence[Word], rank: int) -> StallingsGraph:
    """Bouquet of loop-paths at vertex 0, one per nontrivial generator."""
    edges = []
    n = 1
    for w in gens:
        if w.rank != rank:
            raise RankMismatch(f"{w!r} does not live in rank {rank}")
        if not w.letters:
            continue
        path = [0] + list(range(n, n + len(w) - 1)) + [0]
        n += len(w) - 1
        for k, x in enumerate(w.letters):
            s, t = path[k], path[k + 1]
            edges.append((s, t, x) if x > 0 else (t, s, -x))
    return StallingsGraph(n, 0, tuple(edges), rank)


# -- subgroups ---------------------------------------------------------------

@dataclass(frozen=True)
class Subgroup:
    """A folded, cored, canonically numbered Stallings graph.

    ``based`` is False for unbased (conjugacy-class) views, in which the
    basepoint is an arbitrary core vertex.
    """
    graph: StallingsGraph
    based: bool = field(default=True, compare=False)

    @property
    def rank(self) -> int:
        return self.graph.betti

    @property
    def ambient_rank(self) -> int:
        return self.graph.rank

    def is_trivial(self) -> bool:
        return not self.graph.edges

    def __str__(self):
        return "<" + ", ".join(str(w) for w in basis(self)) + ">"


def from_graph(g: StallingsGraph, rng: random.Random | None = None, based: bool = True) -> Subgroup:
    """Fold, core and canonically number an arbitrary connected graph."""
    return Subgroup(canonical(prune(fold(g, rng), keep_base=based)), based=based)


def subgroup_graph(gens: Sequence[Word], rank: int, rng: random.Random | None = None) -> Subgroup:
    """Stallings graph of the subgroup generated by ``gens``."""
    check_rank(rank)
    return from_graph(wedge(gens, rank), rng)


def trivial_subgroup(rank: int) -> Subgroup:
    return subgroup_graph([], rank)


def rose(rank: int) -> Subgroup:
    """The whole free group: one vertex with a loop per generator."""
    return Subgroup(StallingsGraph(1, 0, tuple((0, 0, l) for l in range(1, rank + 1)), rank))


def unbased_core(H: Subgroup) -> Subgroup:
    """Conjugacy-class view: the core with the basepoint hair removed."""
    if not H.based:
        return H
    return Subgroup(canonical(prune(H.graph, keep_base=False)), based=False)


def rank(H: Subgroup) -> int:
    return H.rank


def contains(H: Subgroup, w: Word) -> bool:
    """Membership by tracing ``w`` from the basepoint."""
    if w.rank != H.ambient_rank:
        raise RankMismatch(f"{w!r} does not live in rank {H.ambient_rank}")
    return H.graph.follow(H.graph.base, w.letters) == H.graph.base


def is_full_cover(g: StallingsGraph) -> bool:
    want = set(directions(g.rank))
    return all(set(a) == want for a in g.adjacency)


def index(H: Subgroup) -> int | float:
    """Index of ``H`` in the ambient free group, ``INFINITE`` if not a full cover."""
    if is_full_cover(H.graph):
        return H.graph.num_vertices
    return INFINITE


def spanning_tree_basis(g: StallingsGraph, start: int | None = None) -> list[Word]:
    """Free basis of pi_1(g, start) read off a BFS spanning tree.

    One word per non-tree edge, in sorted edge order.
    """
    _, paths = bfs_order(g, start)
    tree = set()
    for v, p in paths.items():
        if p:
            u = g.follow(g.base if start is None else start, p[:-1])
            d = p[-1]
            tree.add((u, v, d) if d > 0 else (v, u, -d))
    out = []
    for s, t, l in g.edges:
        if (s, t, l) in tree:
            tree.discard((s, t, l))
            continue
        letters = paths[s] + (l,) + tuple(-x for x in reversed(paths[t]))
        out.append(Word.reduce(letters, g.rank))
    return out


def basis(H: Subgroup) -> list[Word]:
    return spanning_tree_basis(H.graph)


# -- fiber products ----------------------------------------------------------

@dataclass(frozen=True)
class PullbackComponent:
    """One connected component of core(H) x core(K).

    ``conjugator`` is a word ``c`` with the component describing
    ``H ∩ c^-1 K c``; for non-contractible components ``intersection`` is
    that subgroup and ``graph`` its unbased core.
    """
    vertices: tuple[tuple[int, int], ...]
    edges: tuple[tuple[tuple[int, int], tuple[int, int], int], ...]
    anchor: tuple[int, int]
    conjugator: Word
    betti: int
    intersection: Subgroup | None
    graph: Subgroup | None

    @property
    def non_contractible(self) -> bool:
        return self.betti >= 1

    @property
    def is_based(self) -> bool:
        return (0, 0) in self.vertices


def _check_same_rank(H: Subgroup, K: Subgroup) -> None:
    if H.ambient_rank != K.ambient_rank:
        raise RankMismatch(f"ambient ranks differ: {H.ambient_rank} vs {K.ambient_rank}")


def product_graph(H: Subgroup, K: Subgroup):
    """Vertex pairs and labeled edges of the fiber product of the two graphs."""
    hg, kg = H.graph, K.graph
    verts = [(u, v) for u in range(hg.num_vertices) for v in range(kg.num_vertices)]
    by_label: dict[int, list[Edge]] = {}
    for e in kg.edges:
        by_label.setdefault(e[2], []).append(e)
    edges = []
    for s, t, l in hg.edges:
        for s2, t2, _ in by_label.get(l, ()):
            edges.append(((s, s2), (t, t2), l))
    return verts, sorted(edges)


def pullback(H: Subgroup, K: Subgroup) -> list[PullbackComponent]:
    """Components of the fiber product of the based cores of ``H`` and ``K``.

    Components are ordered by their smallest vertex pair, so the based
    component (containing the pair of basepoints) comes first.
    """
    _check_same_rank(H, K)
    r = H.ambient_rank
    verts, edges = product_graph(H, K)
    parent = {v: v for v in verts}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b, _ in edges:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    groups: dict[tuple[int, int], list[tuple[int, int]]] = {}
    for v in verts:
        groups.setdefault(find(v), []).append(v)
    comp_edges: dict[tuple[int, int], list] = {root: [] for root in groups}
    for e in edges:
        comp_edges[find(e[0])].append(e)

    _, hpaths = bfs_order(H.graph)
    _, kpaths = bfs_order(K.graph)
    out = []
    for root in sorted(groups):
        cverts = sorted(groups[root])
        cedges = comp_edges[root]
        betti = len(cedges) - len(cverts) + 1
        anchor = min(cverts, key=lambda uv: (len(hpaths[uv[0]]) + len(kpaths[uv[1]]), uv))
        alpha = Word.reduce(hpaths[anchor[0]], r)
        beta = Word.reduce(kpaths[anchor[1]], r)
        conj = beta * ~alpha
        inter = core = None
        if betti >= 1:
            ids = {v: i for i, v in enumerate(cverts)}
            cg = StallingsGraph(len(cverts), ids[anchor],
                                tuple(sorted((ids[a], ids[b], l) for a, b, l in cedges)), r)
            loops = spanning_tree_basis(cg, ids[anchor])
            inter = subgroup_graph([alpha * w * ~alpha for w in loops], r)
            core = from_graph(cg, based=False)
        out.append(PullbackComponent(tuple(cverts), tuple(cedges), anchor, conj, betti, inter, core))
    return out


def intersection(H: Subgroup, K: Subgroup) -> Subgroup:
    """``H ∩ K`` as a based subgroup (the based pullback component)."""
    comp = pullback(H, K)[0]
    assert comp.anchor == (0, 0)
    if comp.intersection is None:
        return trivial_subgroup(H.ambient_rank)
    return comp.intersection


def conjugates_meet_trivially(H: Subgroup, K: Subgroup, exempt_diagonal: bool = False) -> bool:
    """True iff ``H ∩ g^-1 K g = 1`` for every ``g``.

    With ``exempt_diagonal`` and ``H == K`` the based component is ignored,
    which leaves the malnormality question for conjugators outside ``H``.
    """
    comps = pullback(H, K)
    if exempt_diagonal and H == K:
        comps = comps[1:]
    return not any(c.non_contractible for c in comps)


def _is_diagonal(comp: PullbackComponent, H: Subgroup) -> bool:
    g = H.graph
    return (len(comp.vertices) == g.num_vertices
            and all(u == v for u, v in comp.vertices)
            and sorted((a[0], b[0], l) for a, b, l in comp.edges) == list(g.edges))


def is_malnormal(H: Subgroup) -> bool:
    if H.is_trivial():
        return True
    comps = pullback(H, H)
    diag = comps[0]
    if not _is_diagonal(diag, H):
        raise AssertionError("based self-pullback is not the diagonal")
    return not any(c.non_contractible for c in comps[1:])


def select_free_subset(gens: Sequence[Word], rank: int) -> list[Word]:
    """Greedy scan keeping each word that stays free together with those already kept."""
    chosen: list[Word] = []
    for w in gens:
        if not w.letters:
            continue
        if subgroup_graph(chosen + [w], rank).rank == len(chosen) + 1:
            chosen.append(w)
    return chosen


# -- finite covers -----------------------------------------------------------

def full_covers(rank: int, n: int) -> Iterator[Subgroup]:
    """Every subgroup of index ``n`` in the free group of the given rank.

    Backtracking over coset tables filled in canonical BFS order; each
    table is produced exactly once, so this lists each subgroup once.
    """
    dirs = directions(rank)
    table: list[dict[int, int]] = [{} for _ in range(n)]

    def first_gap(count):
        for v in range(count):
            for d in dirs:
                if d not in table[v]:
                    return v, d
        return None

    def extend(count):
        gap = first_gap(count)
        if gap is None:
            if count == n:
                edges = tuple(sorted((v, table[v][l], l) for v in range(n) for l in range(1, rank + 1)))
                yield Subgroup(StallingsGraph(n, 0, edges, rank))
            return
        v, d = gap
        for w in range(count + 1 if count < n else count):
            if -d in table[w]:
                continue
            table[v][d] = w
            table[w][-d] = v
            yield from extend(max(count, w + 1))
            del table[v][d]
            if not (w == v and d == -d):
                table[w].pop(-d, None)

    yield from extend(1)
