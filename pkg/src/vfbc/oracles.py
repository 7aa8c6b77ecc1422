"""Brute-force checkers used to cross-examine the graph algorithms.

Nothing here touches fiber products.  Intersections and malnormality are
probed by enumerating conjugators and witness words up to fixed lengths;
membership goes through path tracing in folded graphs only.
"""

from __future__ import annotations

import itertools
import random
from typing import Iterator, Sequence

from .stallings import (StallingsGraph, Subgroup, basis, contains, directions,
                        subgroup_graph, unbased_core)
from .words import Word, cyclic_reduce, free_reduce

MAX_CONJUGATOR = 6
MAX_WITNESS = 12


def reduced_words(rank: int, max_len: int, min_len: int = 0) -> Iterator[Word]:
    """All freely reduced words of length ``min_len..max_len`` in shortlex order."""
    dirs = directions(rank)
    level: list[tuple[int, ...]] = [()]
    for n in range(max_len + 1):
        if n >= min_len:
            for letters in level:
                yield Word(letters, rank)
        level = [w + (d,) for w in level for d in dirs if not w or w[-1] != -d]


def naive_reduce(letters: Sequence[int], rng: random.Random) -> tuple[int, ...]:
    """Free reduction cancelling a randomly chosen adjacent pair each step."""
    letters = list(letters)
    while True:
        spots = [k for k in range(len(letters) - 1) if letters[k] == -letters[k + 1]]
        if not spots:
            return tuple(letters)
        k = rng.choice(spots)
        del letters[k:k + 2]


def random_word(rng: random.Random, rank: int, length: int) -> Word:
    dirs = directions(rank)
    letters: list[int] = []
    while len(letters) < length:
        d = rng.choice(dirs)
        if not letters or letters[-1] != -d:
            letters.append(d)
    return Word(tuple(letters), rank)


def random_subgroup(rng: random.Random, rank: int, max_vertices: int = 6,
                    max_gens: int = 3, max_len: int = 6) -> Subgroup:
    """Random nontrivial subgroup whose based core has at most ``max_vertices`` vertices."""
    while True:
        k = rng.randint(1, max_gens)
        gens = [random_word(rng, rank, rng.randint(1, max_len)) for _ in range(k)]
        H = subgroup_graph(gens, rank)
        if not H.is_trivial() and H.graph.num_vertices <= max_vertices:
            return H


def cover_step(adj: list[dict[int, int]], state: tuple[int, tuple[int, ...]], d: int):
    """One step in the covering space of a core graph.

    A covering-space vertex is ``(c, tail)``: core vertex ``c`` plus the
    reduced path ``tail`` walked into the tree hanging off ``c``.
    """
    c, tail = state
    if tail:
        if d == -tail[-1]:
            return c, tail[:-1]
        return c, tail + (d,)
    nxt = adj[c].get(d)
    if nxt is None:
        return c, (d,)
    return nxt, ()


def cover_follow(g: StallingsGraph, letters) -> tuple[int, tuple[int, ...]]:
    state = (g.base, ())
    for d in letters:
        state = cover_step(g.adjacency, state, d)
    return state


def _distances(g: StallingsGraph) -> list[list[int]]:
    """All-pairs edge distances, ignoring orientation."""
    n = g.num_vertices
    out = []
    for src in range(n):
        dist = [n + 1] * n
        dist[src] = 0
        frontier = [src]
        while frontier:
            nxt = []
            for v in frontier:
                for w in g.adjacency[v].values():
                    if dist[w] > dist[v] + 1:
                        dist[w] = dist[v] + 1
                        nxt.append(w)
            frontier = nxt
        out.append(dist)
    return out


def _common_nontrivial_loop(H: StallingsGraph, K: StallingsGraph, g: Word,
                            max_len: int) -> Word | None:
    """Shortest nontrivial reduced ``w`` with ``|w| <= max_len`` in ``H`` and in
    ``g^-1 K g``, by depth-first enumeration of words.

    ``w`` lies in ``g^-1 K g`` iff it is a loop at the vertex ``x`` reached by
    reading ``g`` in the covering space of ``K``.  A reduced loop at ``x``
    never leaves K's graph together with the tree path out to ``x``, so
    walks leaving that region are cut, as are walks too far from H's
    basepoint to return in time.
    """
    ha, ka = H.adjacency, K.adjacency
    hbase = _distances(H)[H.base]
    start = cover_follow(K, g.letters)
    c0, tail0 = start
    dirs = directions(H.rank)
    for n in range(1, max_len + 1):
        stack = [((), H.base, start)]
        while stack:
            word, v, state = stack.pop()
            if len(word) == n:
                if v == H.base and state == start:
                    return Word(word, H.rank)
                continue
            left = n - len(word) - 1
            for d in reversed(dirs):
                if word and word[-1] == -d:
                    continue
                w = ha[v].get(d)
                if w is None or hbase[w] > left:
                    continue
                c, tail = nxt = cover_step(ka, state, d)
                if tail and (c != c0 or tail0[:len(tail)] != tail):
                    continue
                if len(tail0) - len(tail) > left and c == c0:
                    continue
                stack.append((word + (d,), w, nxt))
    return None


def conjugate_subgroup(K: Subgroup, g: Word) -> Subgroup:
    """``g^-1 K g`` by folding the conjugated basis."""
    return subgroup_graph([w.conjugate(g) for w in basis(K)], K.ambient_rank)


def brute_intersection_witnesses(H: Subgroup, K: Subgroup, max_conj: int = MAX_CONJUGATOR,
                                 max_witness: int = MAX_WITNESS) -> list[tuple[Word, Word]]:
    """Every conjugator ``g`` with ``|g| <= max_conj`` for which some
    ``w != 1`` with ``|w| <= max_witness`` lies in ``H ∩ g^-1 K g``,
    paired with the shortest such ``w``."""
    found = []
    for g in reduced_words(H.ambient_rank, max_conj):
        w = _common_nontrivial_loop(H.graph, K.graph, g, max_witness)
        if w is not None:
            assert contains(H, w) and contains(K, g * w * ~g)
            found.append((g, w))
    return found


def landing_pair(H: Subgroup, K: Subgroup, g: Word, w: Word) -> tuple[int, int]:
    """Vertex pair of core(H) x core(K) carrying the cyclic part of ``w``.

    For ``w`` in ``H ∩ g^-1 K g`` write ``w = t c t^-1`` with ``c``
    cyclically reduced; ``c`` is a closed path at ``u`` (H's basepoint
    moved along ``t``) and at ``v`` (the covering-space vertex of ``K``
    reached by ``g t``), and ``v`` lies in K's graph.
    """
    c, t = cyclic_reduce(w)
    u = H.graph.follow(H.graph.base, t.letters)
    v, tail = cover_follow(K.graph, g.letters + t.letters)
    assert u is not None and not tail
    assert H.graph.follow(u, c.letters) == u and K.graph.follow(v, c.letters) == v
    return u, v


def brute_malnormal_witness(H: Subgroup, max_conj: int = MAX_CONJUGATOR,
                            max_witness: int = MAX_WITNESS) -> tuple[Word, Word] | None:
    """A pair ``(g, w)`` with ``g`` outside ``H`` and ``w != 1`` in ``H ∩ g^-1 H g``."""
    for g in reduced_words(H.ambient_rank, max_conj, min_len=1):
        if contains(H, g):
            continue
        w = _common_nontrivial_loop(H.graph, H.graph, g, max_witness)
        if w is not None:
            return g, w
    return None


def brute_is_malnormal(H: Subgroup, max_conj: int = MAX_CONJUGATOR,
                       max_witness: int = MAX_WITNESS) -> bool:
    return brute_malnormal_witness(H, max_conj, max_witness) is None


def brute_cyclic_malnormal(w: Word, max_conj: int = MAX_CONJUGATOR, max_exp: int = 6) -> bool:
    """Malnormality of ``<w>`` by testing ``g^-1 w^i g = w^j`` directly."""
    powers = {(w ** j).letters: j for j in range(-max_exp, max_exp + 1) if j}
    for g in reduced_words(w.rank, max_conj, min_len=1):
        if g.letters in powers:
            continue
        for i in range(1, max_exp + 1):
            if (w ** i).conjugate(g).letters in powers:
                return False
    return True


def immersed_cycles(g: StallingsGraph, max_len: int) -> Iterator[tuple[int, ...]]:
    """Labels of closed, cyclically reduced walks of length <= max_len from each vertex."""
    adj = g.adjacency
    dirs = directions(g.rank)
    for start in range(g.num_vertices):
        stack = [((), start)]
        while stack:
            word, v = stack.pop()
            if word and v == start and word[0] != -word[-1]:
                yield word
            if len(word) == max_len:
                continue
            for d in dirs:
                if word and word[-1] == -d:
                    continue
                w = adj[v].get(d)
                if w is not None:
                    stack.append((word + (d,), w))


def brute_can_complete(w: Word, F: Subgroup, max_len: int = 12) -> bool:
    """Does ``w`` occur as a subpath of some immersed cycle of length <= max_len
    in the unbased core of ``F``?"""
    core = unbased_core(F).graph
    target = w.letters
    n = len(target)
    for cyc in immersed_cycles(core, max_len):
        if n > len(cyc):
            continue
        doubled = cyc + cyc
        if any(doubled[k:k + n] == target for k in range(len(cyc))):
            return True
    return False


def brute_exits_everywhere(w: Word, F: Subgroup) -> bool:
    """Reading ``w`` from every vertex of the unbased core falls off the core."""
    core = unbased_core(F).graph
    return all(core.follow(v, w.letters) is None for v in range(core.num_vertices))


def brute_products(gens: Sequence[Word], max_len: int) -> set[tuple[int, ...]]:
    """All products of at most ``max_len`` generators and inverses, reduced."""
    if not gens:
        return {()}
    alphabet = [g.letters for g in gens] + [(~g).letters for g in gens]
    out = {()}
    for n in range(1, max_len + 1):
        for combo in itertools.product(alphabet, repeat=n):
            out.add(free_reduce(itertools.chain.from_iterable(combo)))
    return out
