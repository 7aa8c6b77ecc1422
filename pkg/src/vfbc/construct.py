"""Malnormal subgroups of a free group avoiding given subgroups.

Given finitely generated infinite-index subgroups ``F_1..F_k`` of a free
group ``F`` of rank >= 2, build a malnormal subgroup ``H`` of prescribed
rank with ``F_i ∩ g^-1 H g = 1`` for all ``i`` and ``g``.

The word ``f`` produced by ``incompletable_word`` falls off the core of every
``F_i`` from every core vertex, so no power of ``f`` can sit inside a
cyclically reduced element conjugate into some ``F_i``.  Every cyclically
reduced element of ``H = <b a b^q f^2 a b, a b f^2 a^p b a>`` contains
``f^2``, which gives the avoidance; the long runs ``a^p`` and ``b^q`` pin
down where each generator sits, which gives malnormality.
"""

from __future__ import annotations

import json
import random
from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

from . import stallings as st
from .errors import EmptyWord, InvalidAvoidSet, PreconditionViolated, SearchBudgetExhausted
from .stallings import StallingsGraph, Subgroup
from .words import Word, malnormal_generators, max_power, parse_word

ATTEMPT_CAP = 10_000
ATTEMPTS_PER_LENGTH = 8
G1, G2 = 1, 2


@dataclass(frozen=True)
class AvoidanceProblem:
    ambient_rank: int
    target_rank: int
    avoid: tuple[Subgroup, ...] = ()
    rng_seed: int = 0
    attempt_cap: int = ATTEMPT_CAP

    def __post_init__(self):
        if self.ambient_rank < 2:
            raise PreconditionViolated("the ambient free group must be non-cyclic (rank >= 2)")
        if self.target_rank < 1:
            raise PreconditionViolated("target rank must be positive")
        object.__setattr__(self, "avoid", tuple(self.avoid))
        check_avoid_set(self.avoid, self.ambient_rank)


@dataclass
class Certificate:
    subgroup: Subgroup
    generators: list[Word]
    f_word: Word | None = None
    p: int | None = None
    q: int | None = None
    checks: dict[str, bool] = field(default_factory=dict)

    @property
    def valid(self) -> bool:
        return bool(self.checks) and all(self.checks.values())

    def to_json(self) -> dict:
        return {
            "rank": self.subgroup.ambient_rank,
            "generators": [str(w) for w in self.generators],
            "f": None if self.f_word is None else str(self.f_word),
            "p": self.p,
            "q": self.q,
            "checks": dict(self.checks),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, data: dict) -> "Certificate":
        r = data["rank"]
        gens = [parse_word(w, r) for w in data["generators"]]
        f = data.get("f")
        return cls(
            subgroup=st.subgroup_graph(gens, r),
            generators=gens,
            f_word=None if f is None else parse_word(f, r),
            p=data.get("p"),
            q=data.get("q"),
            checks={k: bool(v) for k, v in data.get("checks", {}).items()},
        )

    @classmethod
    def loads(cls, text: str) -> "Certificate":
        return cls.from_json(json.loads(text))


def check_avoid_set(avoid: Sequence[Subgroup], rank: int) -> None:
    for i, F in enumerate(avoid):
        if F.ambient_rank != rank:
            raise InvalidAvoidSet(f"avoid[{i}] lives in rank {F.ambient_rank}, not {rank}")
        if F.is_trivial():
            raise InvalidAvoidSet(f"avoid[{i}] is trivial")
        if st.index(F) != st.INFINITE:
            raise InvalidAvoidSet(f"avoid[{i}] has finite index {st.index(F)}")


# -- completion ---------------------------------------------------------------

def _core(F: Subgroup) -> StallingsGraph:
    return st.unbased_core(F).graph


def completion_cycle(w: Word, F: Subgroup) -> Word | None:
    """A cyclically reduced word labelling an immersed cycle in core(F) that
    contains a lift of ``w`` as a subpath, or None if there is none.

    For each core vertex where ``w`` lifts, search the states
    ``(vertex, last direction)`` for a non-backtracking return path.
    """
    if not w.letters:
        raise EmptyWord("completion is defined for nonempty words")
    core = _core(F)
    adj = core.adjacency
    first, last = w.letters[0], w.letters[-1]
    dirs = st.directions(core.rank)
    for u in range(core.num_vertices):
        end = core.follow(u, w.letters)
        if end is None:
            continue
        if end == u and w.is_cyclically_reduced():
            return w
        # BFS for a reduced path end -> u entering with a direction != -first
        start = (end, last)
        prev = {start: None}
        queue = deque([start])
        hit = None
        while queue and hit is None:
            v, d_in = queue.popleft()
            for d in dirs:
                if d == -d_in:
                    continue
                x = adj[v].get(d)
                if x is None or (x, d) in prev:
                    continue
                prev[(x, d)] = (v, d_in)
                if x == u and d != -first:
                    hit = (x, d)
                    break
                queue.append((x, d))
        if hit is not None:
            path = []
            state = hit
            while state != start:
                path.append(state[1])
                state = prev[state]
            return Word(w.letters + tuple(reversed(path)), w.rank)
    return None


def can_complete(w: Word, F: Subgroup) -> bool:
    return completion_cycle(w, F) is not None


# -- incompletable words ------------------------------------------------------

Exit = tuple[int, int]  # core vertex and a direction missing there


def _exits(core: StallingsGraph) -> list[Exit]:
    """All (vertex, missing direction) pairs in canonical order."""
    dirs = st.directions(core.rank)
    return [(v, d) for v in range(core.num_vertices) for d in dirs if d not in core.adjacency[v]]


def _crosses(edge: tuple[int, int, int] | None, v: int, d: int) -> bool:
    if edge is None:
        return False
    s, t, l = edge
    return (d == l and v == s) or (d == -l and v == t)


def _route(core: StallingsGraph, start: int, target: Exit | None,
           banned: tuple[int, int, int] | None = None,
           first_dir: int | None = None) -> tuple[int, ...] | None:
    """Shortest immersed path from ``start`` that leaves the core.

    With ``target`` the path must leave through that exit, otherwise through
    the nearest one.  The path never crosses edge ``banned``; with
    ``first_dir`` it begins with that direction.  Directions are tried in
    canonical order, so ties go to the smaller label.
    """
    adj = core.adjacency
    wanted: dict[int, int] = {}
    for v, d in ([target] if target else _exits(core)):
        wanted.setdefault(v, d)
    paths = {start: ()}
    queue = deque([start])
    if first_dir is not None:
        x = adj[start][first_dir]
        paths[x] = (first_dir,)
        queue = deque([x])
    while queue:
        v = queue.popleft()
        if v in wanted:
            return paths[v] + (wanted[v],)
        for d in st.directions(core.rank):
            x = adj[v].get(d)
            if x is None or x in paths or _crosses(banned, v, d):
                continue
            paths[x] = paths[v] + (d,)
            queue.append(x)
    return None


def _immersed_loop(core: StallingsGraph, base: int, banned: tuple[int, int, int]) -> tuple[int, ...]:
    """Shortest non-backtracking loop at ``base`` that never crosses ``banned``."""
    adj = core.adjacency
    start = (base, 0)
    prev = {start: None}
    queue = deque([start])
    while queue:
        v, d_in = queue.popleft()
        for d in st.directions(core.rank):
            if d == -d_in or _crosses(banned, v, d):
                continue
            x = adj[v].get(d)
            if x is None:
                continue
            if x == base:
                path = [d]
                state = (v, d_in)
                while state != start:
                    path.append(state[1])
                    state = prev[state]
                return tuple(reversed(path))
            if (x, d) not in prev:
                prev[(x, d)] = (v, d_in)
                queue.append((x, d))
    raise AssertionError("separated side of the core carries no loop")


def continuation(core: StallingsGraph, end: int, last: int,
                 target: Exit | None = None) -> tuple[tuple[int, ...], str]:
    """Letters to append to a path whose lift ends at core vertex ``end``
    after traversing direction ``last``, so that the lift leaves the core.

    Let ``e`` be the edge just traversed.  If the exit is reachable from
    ``end`` without crossing ``e``, go there by a shortest path.  Otherwise
    ``e`` separates the core and the side containing ``end`` has an immersed
    loop at ``end``: walk that loop, cross back over ``e``, then head for
    the exit.  With ``target=None`` the nearest exit is used, and the second
    case never arises (the endpoint's side of a separating edge always has
    a vertex of deficient degree, by parity).

    Returns the letters and which case applied, ``"direct"`` or ``"loop"``.
    """
    src = core.adjacency[end][-last]
    e = (src, end, last) if last > 0 else (end, src, -last)
    direct = _route(core, end, target, banned=e)
    if direct is not None:
        return direct, "direct"
    loop = _immersed_loop(core, end, e)
    back = _route(core, end, target, first_dir=-last)
    assert back is not None
    return loop + back, "loop"


def incompletable_word(avoid: Sequence[Subgroup], rank: int, policy: str = "fixed",
                       trace: list | None = None) -> Word:
    """A reduced word whose lift at every vertex of every core leaves that core.

    Vertices are visited in canonical order, cores in input order; the word
    is extended only when its lift at the current vertex stays in the core.
    ``policy="fixed"`` aims every extension inside one core at that core's
    first exit in canonical order; ``policy="nearest"`` takes the nearest
    exit each time.  If ``trace`` is a list, one ``(core, vertex, step)``
    entry per vertex is appended, step being ``"start"``, ``"exits"``,
    ``"direct"`` or ``"loop"``.
    """
    if policy not in ("fixed", "nearest"):
        raise ValueError(f"unknown policy {policy!r}")
    if rank < 2:
        raise InvalidAvoidSet("ambient rank must be at least 2")
    check_avoid_set(avoid, rank)
    letters: tuple[int, ...] = ()
    for i, F in enumerate(avoid):
        core = _core(F)
        target = _exits(core)[0] if policy == "fixed" else None
        for v in range(core.num_vertices):
            if not letters:
                letters, step = _route(core, v, target), "start"
            elif (end := core.follow(v, letters)) is None:
                step = "exits"
            else:
                more, step = continuation(core, end, letters[-1], target)
                letters += more
            assert core.follow(v, letters) is None
            if trace is not None:
                trace.append((i, v, step))
    return Word(letters, rank)


def _extend_to_ab(f: Word) -> Word:
    """Shortest prefix/suffix over {a, b} making ``f`` start with ``a`` and end with ``b``.

    Prepending or appending keeps the exit property: a lift that already
    left the core cannot come back.
    """
    letters = f.letters
    if not letters:
        return Word((G1, G2), f.rank)
    if letters[0] != G1:
        letters = ((G1, G2) if letters[0] == -G1 else (G1,)) + letters
    if letters[-1] != G2:
        letters = letters + ((G1, G2) if letters[-1] == -G2 else (G2,))
    return Word(letters, f.rank)


def exits_everywhere(w: Word, avoid: Sequence[Subgroup]) -> bool:
    for F in avoid:
        core = _core(F)
        if any(core.follow(v, w.letters) is not None for v in range(core.num_vertices)):
            return False
    return True


# -- randomized branch --------------------------------------------------------

def _random_cyclic_word(rng: random.Random, rank: int, length: int) -> Word:
    dirs = st.directions(rank)
    while True:
        letters = [rng.choice(dirs)]
        while len(letters) < length:
            d = rng.choice(dirs)
            if d != -letters[-1]:
                letters.append(d)
        w = Word(tuple(letters), rank)
        if w.is_cyclically_reduced():
            return w


def random_malnormal(rank: int, n: int, rng: random.Random, cap: int = ATTEMPT_CAP) -> list[Word]:
    """Sample ``n``-tuples of cyclically reduced words of growing length until
    one freely generates a malnormal subgroup."""
    for attempt in range(cap):
        length = 2 + attempt // ATTEMPTS_PER_LENGTH
        gens = [_random_cyclic_word(rng, rank, length) for _ in range(n)]
        H = st.subgroup_graph(gens, rank)
        if H.rank == n and st.is_malnormal(H):
            return gens
    raise SearchBudgetExhausted(f"no malnormal {n}-tuple in {cap} attempts")


def substitute(w: Word, images: Sequence[Word]) -> Word:
    """Image of ``w`` under the homomorphism sending generator i to ``images[i-1]``."""
    rank = images[0].rank
    out = Word.identity(rank)
    for x in w.letters:
        img = images[abs(x) - 1]
        out = out * (img if x > 0 else ~img)
    return out


# -- assembly -----------------------------------------------------------------

def construct_malnormal(problem: AvoidanceProblem) -> Certificate:
    """Build and check a malnormal subgroup solving ``problem``."""
    r, n = problem.ambient_rank, problem.target_rank
    rng = random.Random(problem.rng_seed)
    f = p = q = None
    if not problem.avoid:
        gens = random_malnormal(r, n, rng, problem.attempt_cap)
    else:
        f = _extend_to_ab(incompletable_word(problem.avoid, r))
        assert exits_everywhere(f, problem.avoid)
        p = max(3, max_power(f, G1) + 1)
        q = max(3, max_power(f, G2) + 1)
        pair = list(malnormal_generators(f, p, q))
        if n == 2:
            gens = pair
        else:
            inner = random_malnormal(2, n, rng, problem.attempt_cap)
            gens = [substitute(w, pair) for w in inner]
    cert = Certificate(st.subgroup_graph(gens, r), gens, f, p, q)
    cert = verify_certificate(cert, problem.avoid)
    if not cert.valid:
        failed = sorted(k for k, ok in cert.checks.items() if not ok)
        raise AssertionError(f"constructed subgroup failed checks: {failed}")
    return cert


def verify_certificate(c: Certificate, avoid: Sequence[Subgroup]) -> Certificate:
    """Recompute every check from the generators alone."""
    if not c.generators:
        raise PreconditionViolated("certificate has no generators")
    r = c.generators[0].rank
    H = st.subgroup_graph(c.generators, r)
    checks = {
        "rank_equals_n": H.rank == len(c.generators),
        "is_malnormal": st.is_malnormal(H),
    }
    for i, F in enumerate(avoid):
        checks[f"meets_trivially_{i}"] = st.conjugates_meet_trivially(F, H)
    if c.f_word is not None:
        f = c.f_word
        checks["f_squared_reduced"] = f.is_cyclically_reduced() and len(f) > 0
        checks["f_incompletable"] = all(not can_complete(f, F) for F in avoid)
        checks["generators_cyclically_reduced"] = all(w.is_cyclically_reduced() for w in c.generators)
    return Certificate(H, list(c.generators), c.f_word, c.p, c.q, checks)
