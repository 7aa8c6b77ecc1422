"""L2-independent hierarchies: a small DSL, Euler characteristics and L2-Betti numbers.

Grammar::

    node   := "(" "free" INT ")"
            | "(" "hnn" node "over" INT ")"
            | "(" "amal" node node "over" INT ")"
    pragma := "!no-independence"      (marks the node that follows)

Comments run from ``;`` to the end of the line.  Every splitting is over a
free edge group of the stated rank, and independence of that edge group in
the base (HNN) or left factor (amalgam) is assumed unless the pragma says
otherwise.  All arithmetic is exact.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

from .errors import (HierarchySyntaxError, InconsistentFlags, InconsistentHierarchy,
                     IndependenceNotAssumed, NegativeRank, ParameterOutOfRange,
                     TooFewGenerators, TrivialGroup)


@dataclass(frozen=True)
class FreeLeaf:
    rank: int


@dataclass(frozen=True)
class HNN:
    base: "Node"
    edge_rank: int
    independent: bool = True


@dataclass(frozen=True)
class Amalgam:
    left: "Node"
    right: "Node"
    edge_rank: int
    independent: bool = True


Node = Union[FreeLeaf, HNN, Amalgam]


# -- parsing ------------------------------------------------------------------

_TOKEN = re.compile(r"\s+|;[^\n]*|(?P<tok>\(|\)|!no-independence|-?\d+|[A-Za-z][A-Za-z0-9_-]*)")


def _tokenize(text: str) -> list[tuple[str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise HierarchySyntaxError(f"unexpected character {text[pos]!r}", pos)
        if m.group("tok"):
            tokens.append((m.group("tok"), m.start()))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        if self.i < len(self.tokens):
            return self.tokens[self.i]
        return None, len(self.text)

    def take(self, expected=None):
        tok, pos = self.peek()
        if tok is None:
            raise HierarchySyntaxError("unexpected end of input", pos)
        if expected is not None and tok != expected:
            raise HierarchySyntaxError(f"expected {expected!r}, found {tok!r}", pos)
        self.i += 1
        return tok, pos

    def integer(self) -> int:
        tok, pos = self.take()
        if not re.fullmatch(r"-?\d+", tok):
            raise HierarchySyntaxError(f"expected an integer, found {tok!r}", pos)
        n = int(tok)
        if n < 0:
            raise NegativeRank(f"negative rank {n} at position {pos}")
        return n

    def node(self) -> Node:
        independent = True
        tok, pos = self.peek()
        if tok == "!no-independence":
            self.take()
            independent = False
        self.take("(")
        head, hpos = self.take()
        if head == "free":
            if not independent:
                raise HierarchySyntaxError("!no-independence applies to hnn/amal nodes", pos)
            n = self.integer()
            self.take(")")
            return FreeLeaf(n)
        if head == "hnn":
            base = self.node()
            self.take("over")
            c = self.integer()
            self.take(")")
            return HNN(base, c, independent)
        if head == "amal":
            left = self.node()
            right = self.node()
            self.take("over")
            c = self.integer()
            self.take(")")
            return Amalgam(left, right, c, independent)
        raise HierarchySyntaxError(f"unknown node type {head!r}", hpos)


def parse_hierarchy(text: str) -> Node:
    """Parse DSL text into a hierarchy tree.

    >>> parse_hierarchy("(amal (free 2) (free 2) over 1)")
    Amalgam(left=FreeLeaf(rank=2), right=FreeLeaf(rank=2), edge_rank=1, independent=True)
    """
    p = _Parser(text)
    node = p.node()
    tok, pos = p.peek()
    if tok is not None:
        raise HierarchySyntaxError(f"trailing input {tok!r}", pos)
    return node


def render(h: Node) -> str:
    if isinstance(h, FreeLeaf):
        return f"(free {h.rank})"
    mark = "" if h.independent else "!no-independence "
    if isinstance(h, HNN):
        return f"{mark}(hnn {render(h.base)} over {h.edge_rank})"
    return f"{mark}(amal {render(h.left)} {render(h.right)} over {h.edge_rank})"


# -- invariants ---------------------------------------------------------------

def free_euler_char(n: int) -> Fraction:
    return Fraction(1 - n)


def euler_char(h: Node) -> Fraction:
    """Euler characteristic, additive over splittings along free edge groups."""
    if isinstance(h, FreeLeaf):
        return free_euler_char(h.rank)
    if isinstance(h, HNN):
        return euler_char(h.base) - free_euler_char(h.edge_rank)
    return euler_char(h.left) + euler_char(h.right) - free_euler_char(h.edge_rank)


def is_trivial(h: Node) -> bool:
    if isinstance(h, FreeLeaf):
        return h.rank == 0
    if isinstance(h, HNN):
        return False
    return is_trivial(h.left) and is_trivial(h.right)


def depth(h: Node) -> int:
    """Hierarchy length."""
    if isinstance(h, FreeLeaf):
        return 0
    if isinstance(h, HNN):
        return 1 + depth(h.base)
    return 1 + max(depth(h.left), depth(h.right))


@dataclass
class BettiReport:
    euler_char: Fraction
    betti: dict[int, Fraction]
    cd_bound: int | None
    assumptions: list[str] = field(default_factory=list)

    def alternating_sum(self) -> Fraction:
        return sum(((-1) ** i * b for i, b in self.betti.items()), Fraction(0))

    def to_json(self) -> dict:
        return {
            "euler_char": str(self.euler_char),
            "betti": {str(i): str(b) for i, b in sorted(self.betti.items())},
            "cd_bound": self.cd_bound,
            "assumptions": list(self.assumptions),
        }

    @classmethod
    def from_json(cls, data: dict) -> "BettiReport":
        return cls(
            euler_char=Fraction(data["euler_char"]),
            betti={int(i): Fraction(b) for i, b in data["betti"].items()},
            cd_bound=data["cd_bound"],
            assumptions=list(data.get("assumptions", [])),
        )


def _audit(h: Node, path: str, out: list[str]) -> None:
    """Collect independence assumptions; reject nodes marked as not independent
    and edge groups forced into trivial factors."""
    if isinstance(h, FreeLeaf):
        return
    if not h.independent:
        raise IndependenceNotAssumed(f"{path}: edge group not assumed L2-independent")
    if isinstance(h, HNN):
        if h.edge_rank > 0 and is_trivial(h.base):
            raise InconsistentHierarchy(f"{path}: rank-{h.edge_rank} edge group in a trivial base")
        out.append(f"{path}: rank-{h.edge_rank} edge group assumed L2-independent in the base")
        _audit(h.base, path + ".base", out)
    else:
        if h.edge_rank > 0 and (is_trivial(h.left) or is_trivial(h.right)):
            raise InconsistentHierarchy(f"{path}: rank-{h.edge_rank} edge group in a trivial factor")
        out.append(f"{path}: rank-{h.edge_rank} edge group assumed L2-independent in the left factor")
        _audit(h.left, path + ".left", out)
        _audit(h.right, path + ".right", out)


def free_betti(n: int) -> BettiReport:
    """L2-Betti numbers of the free group of rank ``n >= 1``."""
    if n < 1:
        raise TrivialGroup("the trivial group has b0 = 1 and is excluded")
    return BettiReport(free_euler_char(n), {0: Fraction(0), 1: Fraction(n - 1), 2: Fraction(0)}, 1)


def betti(h: Node) -> BettiReport:
    """L2-Betti numbers of a nontrivial group with an L2-independent hierarchy.

    Only the first can be nonzero and it equals minus the Euler characteristic.
    """
    if is_trivial(h):
        raise TrivialGroup("hierarchy describes the trivial group")
    if isinstance(h, FreeLeaf):
        return free_betti(h.rank)
    assumptions: list[str] = []
    _audit(h, "root", assumptions)
    chi = euler_char(h)
    if -chi < 0:
        raise InconsistentHierarchy(f"Euler characteristic {chi} > 0 would force a negative b1")
    return BettiReport(chi, {0: Fraction(0), 1: -chi, 2: Fraction(0)}, 2, assumptions)


def ascending_hnn_betti(base_rank_a: int, extra_rank_b: int) -> BettiReport:
    """Ascending HNN extension ``<A, B, t | t^-1 a t = psi(a)>`` of free groups,
    with ``|A| = base_rank_a`` and ``|B| = extra_rank_b``."""
    if base_rank_a < 1:
        raise ParameterOutOfRange("the associated subgroup must have rank >= 1")
    if extra_rank_b < 0:
        raise ParameterOutOfRange("extra rank must be non-negative")
    a, b = base_rank_a, extra_rank_b
    chi = free_euler_char(a + b) - free_euler_char(a)
    return BettiReport(chi, {0: Fraction(0), 1: -chi, 2: Fraction(0)}, 2,
                       [f"length-one hierarchy: free factor of rank {a} in the free base of rank {a + b}"])


def one_relator_betti(num_generators: int) -> BettiReport:
    """Torsion-free one-relator group on ``num_generators`` generators.

    The relator is taken to be cyclically reduced, not a proper power and to
    involve at least two generators; this is not checked.
    """
    if num_generators < 2:
        raise TooFewGenerators("need at least two generators")
    b1 = Fraction(num_generators - 2)
    return BettiReport(-b1, {0: Fraction(0), 1: b1, 2: Fraction(0)}, 2,
                       ["relator cyclically reduced, not a proper power, mentions >= 2 generators"])


# -- decisions ----------------------------------------------------------------

YES, NO, INCONCLUSIVE = "Yes", "No", "Inconclusive"


@dataclass(frozen=True)
class Verdict:
    value: str
    reasons: tuple[str, ...]

    def to_json(self) -> dict:
        return {"verdict": self.value, "reasons": list(self.reasons)}


def decide_vfbc(hyperbolic: bool, virtually_compact_special: bool, cd_q_at_most_2: bool,
                b2_zero: bool, cd_q_known_exceeds_2: bool = False) -> Verdict:
    """Is the group virtually free-by-cyclic?

    Virtually free-by-cyclic groups always have rational cohomological
    dimension at most 2 and vanishing second L2-Betti number; for hyperbolic
    virtually compact special groups those two conditions are also enough.
    """
    if cd_q_at_most_2 and cd_q_known_exceeds_2:
        raise InconsistentFlags("cd_Q cannot be both <= 2 and > 2")
    if not b2_zero or cd_q_known_exceeds_2:
        reasons = []
        if not b2_zero:
            reasons.append("second L2-Betti number is nonzero")
        if cd_q_known_exceeds_2:
            reasons.append("rational cohomological dimension exceeds 2")
        reasons.append("virtually free-by-cyclic groups have cd_Q <= 2 and b2 = 0")
        return Verdict(NO, tuple(reasons))
    if hyperbolic and virtually_compact_special and cd_q_at_most_2:
        return Verdict(YES, ("hyperbolic, virtually compact special, cd_Q <= 2 and b2 = 0",))
    missing = [name for name, ok in (("hyperbolic", hyperbolic),
                                     ("virtually compact special", virtually_compact_special),
                                     ("cd_Q <= 2", cd_q_at_most_2)) if not ok]
    return Verdict(INCONCLUSIVE, (
        "not established: " + ", ".join(missing),
        "BS(1, 2^k), k >= 2, has cd_Q = 2 and b2 = 0 but is not virtually free-by-cyclic",
    ))


@dataclass(frozen=True)
class Preset:
    description: str
    hyperbolic: bool
    virtually_compact_special: bool
    cd_q_at_most_2: bool
    b2_zero: bool

    def decide(self) -> Verdict:
        return decide_vfbc(self.hyperbolic, self.virtually_compact_special,
                           self.cd_q_at_most_2, self.b2_zero)


PRESETS: dict[str, Preset] = {
    "surface-quotient": Preset(
        "S/<<w>> for a compact surface group S, assumed hyperbolic and virtually compact special",
        True, True, True, True),
    "one-relator-torsion": Preset(
        "one-relator groups with torsion (hyperbolic by the spelling theorem, virtually compact special)",
        True, True, True, True),
    "one-relator-negative-immersions": Preset(
        "one-relator groups with negative immersions (hyperbolic and virtually compact special)",
        True, True, True, True),
    "small-cancellation-one-relator": Preset(
        "small cancellation one-relator groups", True, True, True, True),
    "ascending-hnn": Preset(
        "f.g. ascending HNN extensions of free groups, assumed hyperbolic and virtually compact special",
        True, True, True, True),
    "two-complex-h2-zero": Preset(
        "pi_1 of a finite 2-complex X with H_2(X) = 0, assumed hyperbolic and compact special",
        True, True, True, True),
    "baumslag-solitar-1-2k": Preset(
        "BS(1, 2^k) with k >= 2: not hyperbolic, cd_Q = 2, b2 = 0", False, False, True, True),
}


def bourdon_vfbc(p: int, q: int) -> bool:
    """Uniform lattices of the Bourdon building X_{p,q} are virtually
    free-by-cyclic exactly when ``q < p - 1``."""
    if p < 5 or q < 2:
        raise ParameterOutOfRange(f"need p >= 5 and q >= 2, got p={p}, q={q}")
    return q < p - 1
