"""Domain types for trees embedded in the integer line.

A step set S (max S = 1) fixes the allowed abscissa increments between a
vertex and its parent.  A profile records how many vertices sit at each
abscissa.  On the structured vertex set V = union of V_i = {i^1, ..., i^{n_i}}
live two kinds of objects: S-functions (partial self-maps moving abscissas by
-s for s in S) and rooted S-trees with a marked vertex at the top abscissa.
Embedded Cayley trees carry ordinary labels 1..n instead, and S-ary trees are
their unlabelled injective shapes.

Everything here is immutable after construction and safe to share.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, NamedTuple

# Sentinel step value for the out-type of the root (distinct from every int).
EPS = "eps"

BigCount = int
Rational = Fraction


# ---------------------------------------------------------------------------
# errors
# ---------------------------------------------------------------------------

class EmbTreesError(Exception):
    """Base class for all library errors."""


class HypothesisViolation(EmbTreesError):
    """A theorem hypothesis (on S, the profile, or a distribution) fails."""


class InvalidProfile(EmbTreesError):
    pass


class NonIntegerResult(EmbTreesError):
    """An allegedly integral closed form evaluated to a non-integer."""


class IncompatibleDistribution(EmbTreesError):
    """A type distribution fails its compatibility identities."""


class NotInjective(EmbTreesError):
    pass


class NonSurjectiveProfile(EmbTreesError):
    pass


class BudgetExceeded(EmbTreesError):
    pass


class PreconditionViolated(EmbTreesError):
    pass


class ConditionViolated(EmbTreesError):
    """A tree fails one of the path conditions (T), (T1), (T2)."""


class ConditionTViolated(ConditionViolated):
    pass


class InfeasibleProfile(EmbTreesError):
    pass


# ---------------------------------------------------------------------------
# step sets and profiles
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StepSet:
    """Allowed abscissa increments, sorted, with max step exactly 1."""

    steps: tuple[int, ...]

    def __init__(self, steps: Iterable[int]):
        ordered = tuple(sorted(set(int(s) for s in steps)))
        if not ordered:
            raise HypothesisViolation("step set must be nonempty")
        if ordered[-1] != 1:
            raise HypothesisViolation(f"max step must be 1, got {ordered[-1]}")
        object.__setattr__(self, "steps", ordered)

    @property
    def m(self) -> int:
        return self.steps[0]

    @property
    def M(self) -> int:
        return self.steps[-1]

    def __contains__(self, s: int) -> bool:
        return s in self.steps

    def __iter__(self) -> Iterator[int]:
        return iter(self.steps)

    def is_interval(self) -> bool:
        return self.steps == tuple(range(self.m, 2))

    @staticmethod
    def parse(text: str) -> "StepSet":
        """Parse "-1,1" or an interval "a..b"."""
        text = text.strip()
        if ".." in text:
            lo, hi = text.split("..")
            return StepSet(range(int(lo), int(hi) + 1))
        return StepSet(int(p) for p in text.split(",") if p.strip())

    def __str__(self) -> str:
        return ",".join(str(s) for s in self.steps)


@dataclass(frozen=True)
class Profile:
    """Vertex counts per abscissa, (n_ell, ..., n_-1; n_0, ..., n_r).

    All stored counts are >= 1 and ell <= 0 <= r.  n(i) returns 0 outside
    [ell, r].
    """

    ell: int
    counts: tuple[int, ...]

    def __init__(self, counts: Iterable[int], ell: int = 0):
        counts = tuple(int(c) for c in counts)
        if not counts:
            raise InvalidProfile("profile must be nonempty")
        if any(c < 1 for c in counts):
            raise InvalidProfile(f"profile counts must be positive: {counts}")
        r = ell + len(counts) - 1
        if not (ell <= 0 <= r):
            raise InvalidProfile(f"profile must cover abscissa 0: ell={ell}, r={r}")
        object.__setattr__(self, "ell", int(ell))
        object.__setattr__(self, "counts", counts)

    @property
    def r(self) -> int:
        return self.ell + len(self.counts) - 1

    @property
    def n(self) -> int:
        return sum(self.counts)

    def count(self, i: int) -> int:
        """n_i, with n_i = 0 outside [ell, r]."""
        if self.ell <= i <= self.r:
            return self.counts[i - self.ell]
        return 0

    def abscissas(self) -> range:
        return range(self.ell, self.r + 1)

    def items(self) -> Iterator[tuple[int, int]]:
        for i in self.abscissas():
            yield i, self.count(i)

    @staticmethod
    def parse(text: str) -> "Profile":
        """Parse paper notation "2;2,1" (semicolon before n_0; none means ell=0)."""
        text = text.strip()
        if ";" in text:
            neg, nonneg = text.split(";")
            negs = [int(p) for p in neg.split(",") if p.strip()]
            rest = [int(p) for p in nonneg.split(",") if p.strip()]
            return Profile(negs + rest, ell=-len(negs))
        return Profile([int(p) for p in text.split(",") if p.strip()], ell=0)

    def __str__(self) -> str:
        pos = ",".join(str(self.count(i)) for i in range(0, self.r + 1))
        if self.ell == 0:
            return pos
        neg = ",".join(str(self.count(i)) for i in range(self.ell, 0))
        return f"{neg};{pos}"


def validate_profile_for(step_set: StepSet, profile: Profile, regime: str) -> None:
    """Check the hypotheses under which the product formulas hold.

    regime="nonneg" requires ell = 0; regime="general" requires min S = -1.
    max S = 1 is enforced by StepSet itself.
    """
    if regime == "nonneg":
        if profile.ell != 0:
            raise HypothesisViolation(
                f"nonneg regime needs ell = 0, got ell = {profile.ell}")
    elif regime == "general":
        if step_set.m != -1:
            raise HypothesisViolation(
                f"general regime needs min S = -1, got min S = {step_set.m}")
    else:
        raise ValueError(f"unknown regime {regime!r}")


# ---------------------------------------------------------------------------
# structured vertices
# ---------------------------------------------------------------------------

class Vertex(NamedTuple):
    """The vertex i^k: abscissa i, 1-based index k.

    Tuple order gives the total order of the construction:
    i^k <= j^p iff i < j, or i = j and k <= p.
    """

    i: int
    k: int

    def __str__(self) -> str:
        return f"{self.i}^{self.k}"


@dataclass(frozen=True)
class VertexSet:
    """V = union of V_i = {i^1, ..., i^{n_i}} for a given profile."""

    profile: Profile

    @property
    def n(self) -> int:
        return self.profile.n

    def vertices(self) -> Iterator[Vertex]:
        for i, ni in self.profile.items():
            for k in range(1, ni + 1):
                yield Vertex(i, k)

    def level(self, i: int) -> list[Vertex]:
        return [Vertex(i, k) for k in range(1, self.profile.count(i) + 1)]

    def __contains__(self, v: Vertex) -> bool:
        return 1 <= v.k <= self.profile.count(v.i)

    def spine(self, i: int) -> Vertex:
        """The vertex i^1."""
        if self.profile.count(i) < 1:
            raise InvalidProfile(f"no vertices at abscissa {i}")
        return Vertex(i, 1)


def allowed_images(vset: VertexSet, step_set: StepSet, v: Vertex) -> list[Vertex]:
    """Union over s in S of V_{a(v)-s}, in canonical order."""
    out: list[Vertex] = []
    for s in sorted(step_set, reverse=True):  # i-s increasing
        out.extend(vset.level(v.i - s))
    return out


# ---------------------------------------------------------------------------
# S-functions and marked S-trees
# ---------------------------------------------------------------------------

class SFunction:
    """An S-function f : V \\ {0^1} -> V, viewed as the digraph v -> f(v)."""

    __slots__ = ("vertex_set", "step_set", "image", "_hash")

    def __init__(self, vertex_set: VertexSet, step_set: StepSet,
                 image: dict[Vertex, Vertex], validate: bool = True):
        self.vertex_set = vertex_set
        self.step_set = step_set
        self.image = dict(image)
        self._hash = None
        if validate:
            self._validate()

    def _validate(self) -> None:
        vset = self.vertex_set
        root = Vertex(0, 1)
        expected = set(vset.vertices()) - {root}
        if set(self.image) != expected:
            raise PreconditionViolated("image must be defined exactly on V \\ {0^1}")
        for v, w in self.image.items():
            if w not in vset:
                raise PreconditionViolated(f"image {w} of {v} outside V")
            if (v.i - w.i) not in self.step_set:
                raise PreconditionViolated(
                    f"arc {v} -> {w} is not an S-edge (step {v.i - w.i})")

    @property
    def profile(self) -> Profile:
        return self.vertex_set.profile

    def preimages(self) -> dict[Vertex, list[Vertex]]:
        pre: dict[Vertex, list[Vertex]] = {v: [] for v in self.vertex_set.vertices()}
        for v in sorted(self.image):
            pre[self.image[v]].append(v)
        return pre

    def _key(self):
        return (self.profile.ell, self.profile.counts, self.step_set.steps,
                tuple(sorted(self.image.items())))

    def __eq__(self, other) -> bool:
        return isinstance(other, SFunction) and self._key() == other._key()

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._key())
        return self._hash

    def __repr__(self) -> str:
        arcs = ", ".join(f"{v}->{w}" for v, w in sorted(self.image.items()))
        return f"SFunction({arcs})"


def satisfies_condition_f(f: SFunction) -> bool:
    """Condition (F) on the spine vertices i^1.

    For ell = 0: f(i^1) = (i-1)^1 for 1 <= i <= r.  For ell < 0 additionally
    f(i^1) = (i+1)^1 for ell <= i <= -2 and f(-1^1) in V_0.
    """
    p = f.profile
    for i in range(1, p.r + 1):
        if f.image[Vertex(i, 1)] != Vertex(i - 1, 1):
            return False
    for i in range(p.ell, -1):
        if f.image[Vertex(i, 1)] != Vertex(i + 1, 1):
            return False
    if p.ell < 0 and f.image[Vertex(-1, 1)].i != 0:
        return False
    return True


class MarkedSTree:
    """A rooted S-tree on V with a marked vertex at the top abscissa r.

    parent maps every non-root vertex to its parent; edges are oriented
    towards the root, so the parent of a vertex of V_i lies in some V_{i-s}.
    """

    __slots__ = ("vertex_set", "step_set", "parent", "root", "mark",
                 "_children", "_hash")

    def __init__(self, vertex_set: VertexSet, step_set: StepSet,
                 parent: dict[Vertex, Vertex], root: Vertex, mark: Vertex,
                 validate: bool = True):
        self.vertex_set = vertex_set
        self.step_set = step_set
        self.parent = dict(parent)
        self.root = root
        self.mark = mark
        self._children = None
        self._hash = None
        if validate:
            self._validate()

    def _validate(self) -> None:
        vset = self.vertex_set
        verts = set(vset.vertices())
        if self.root not in verts:
            raise PreconditionViolated(f"root {self.root} outside V")
        if self.mark not in verts or self.mark.i != self.profile.r:
            raise PreconditionViolated(f"mark {self.mark} not at abscissa r")
        if set(self.parent) != verts - {self.root}:
            raise PreconditionViolated("parent must be defined exactly on V \\ {root}")
        depth: dict[Vertex, int] = {self.root: 0}
        for v in self.parent:
            chain = []
            w = v
            while w not in depth:
                chain.append(w)
                w = self.parent.get(w)
                if w is None or len(chain) > vset.n:
                    raise PreconditionViolated("parent map is not a tree")
            base = depth[w]
            for j, u in enumerate(reversed(chain)):
                depth[u] = base + j + 1
        for v, w in self.parent.items():
            if (v.i - w.i) not in self.step_set:
                raise PreconditionViolated(
                    f"tree edge {v} -> {w} is not an S-edge (step {v.i - w.i})")

    @property
    def profile(self) -> Profile:
        return self.vertex_set.profile

    def children(self) -> dict[Vertex, list[Vertex]]:
        if self._children is None:
            ch: dict[Vertex, list[Vertex]] = {v: [] for v in self.vertex_set.vertices()}
            for v in sorted(self.parent):
                ch[self.parent[v]].append(v)
            self._children = ch
        return self._children

    def path_to_root(self, v: Vertex) -> list[Vertex]:
        """Vertices from v to the root, inclusive."""
        path = [v]
        while path[-1] != self.root:
            path.append(self.parent[path[-1]])
        return path

    def meet(self, u: Vertex, v: Vertex) -> Vertex:
        """Common ancestor of u and v farthest from the root."""
        anc = set(self.path_to_root(v))
        for w in self.path_to_root(u):
            if w in anc:
                return w
        raise AssertionError("tree is connected; meet must exist")

    def _key(self):
        return (self.profile.ell, self.profile.counts, self.step_set.steps,
                self.root, self.mark, tuple(sorted(self.parent.items())))

    def __eq__(self, other) -> bool:
        return isinstance(other, MarkedSTree) and self._key() == other._key()

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._key())
        return self._hash

    def __repr__(self) -> str:
        arcs = ", ".join(f"{v}->{w}" for v, w in sorted(self.parent.items()))
        return f"MarkedSTree(root={self.root}, mark={self.mark}, {arcs})"


# ---------------------------------------------------------------------------
# path conditions (T), (T1), (T2'), (T2'')
# ---------------------------------------------------------------------------

def condition_t(tree: MarkedSTree) -> bool:
    """(T): on the path from the mark to 0^1, the first vertex of V_{i-1} is
    preceded by i^1, for all i in [1, r]."""
    if tree.root != Vertex(0, 1):
        return False
    path = tree.path_to_root(tree.mark)
    return _first_entry_preceded_by_spine(path, tree.profile.r)


def _first_entry_preceded_by_spine(path: list[Vertex], r: int) -> bool:
    for i in range(1, r + 1):
        idx = next((j for j, v in enumerate(path) if v.i == i - 1), None)
        if idx is None or idx == 0 or path[idx - 1] != Vertex(i, 1):
            return False
    return True


def condition_t1(tree: MarkedSTree) -> bool:
    """(T1): same as (T) but on the path from the mark to the root in V_0."""
    if tree.root.i != 0:
        return False
    path = tree.path_to_root(tree.mark)
    return _first_entry_preceded_by_spine(path, tree.profile.r)


def condition_t2_prime(tree: MarkedSTree) -> bool:
    """(T2'): 1^1 strictly before the meet of ell^1 and the mark on the marked
    path (vacuous when r = 0), and on the path from ell^1 to the root the last
    vertex of V_{i-1} is followed by i^1 for i in [ell+1, 0]."""
    p = tree.profile
    if tree.root.i != 0:
        return False
    mark_path = tree.path_to_root(tree.mark)
    meet = tree.meet(Vertex(p.ell, 1), tree.mark)
    if p.r >= 1:
        pos = {v: j for j, v in enumerate(mark_path)}
        if Vertex(1, 1) not in pos or pos[Vertex(1, 1)] >= pos[meet]:
            return False
    ell_path = tree.path_to_root(Vertex(p.ell, 1))
    return _last_exit_followed_by_spine(ell_path, p.ell, 0)


def _last_exit_followed_by_spine(path: list[Vertex], ell: int, top: int) -> bool:
    for i in range(ell + 1, top + 1):
        idx = None
        for j, v in enumerate(path):
            if v.i == i - 1:
                idx = j
        if idx is None or idx + 1 >= len(path) or path[idx + 1] != Vertex(i, 1):
            return False
    return True


def condition_t2_dblprime(tree: MarkedSTree) -> bool:
    """(T2''): 1^1 weakly after the meet (which lies at positive abscissa) on
    the marked path; on the path from ell^1 to the meet, the last vertex of
    V_{i-1} is followed by i^1 for i in [ell+1, -1]; and 0^1 precedes the
    first V_{-1} vertex of the marked path (or is the root if there is none).
    """
    p = tree.profile
    if tree.root.i != 0 or p.r < 1:
        return False
    mark_path = tree.path_to_root(tree.mark)
    pos = {v: j for j, v in enumerate(mark_path)}
    meet = tree.meet(Vertex(p.ell, 1), tree.mark)
    if meet.i < 1:
        return False
    if Vertex(1, 1) not in pos or pos[Vertex(1, 1)] < pos[meet]:
        return False
    ell_path = tree.path_to_root(Vertex(p.ell, 1))
    ell_to_meet = ell_path[:ell_path.index(meet) + 1]
    if not _last_exit_followed_by_spine(ell_to_meet, p.ell, -1):
        return False
    first_neg = next((j for j, v in enumerate(mark_path) if v.i == -1), None)
    if first_neg is None:
        return tree.root == Vertex(0, 1)
    return first_neg >= 1 and mark_path[first_neg - 1] == Vertex(0, 1)


def condition_t2(tree: MarkedSTree) -> bool:
    return condition_t2_prime(tree) or condition_t2_dblprime(tree)


# ---------------------------------------------------------------------------
# embedded Cayley trees and S-ary trees
# ---------------------------------------------------------------------------

class EmbeddedCayleyTree:
    """A rooted Cayley tree on labels 1..n embedded in Z.

    The root sits at abscissa 0 and every child-parent abscissa difference
    belongs to S.
    """

    __slots__ = ("n", "root", "parent", "abscissa", "step_set", "_hash")

    def __init__(self, n: int, root: int, parent: dict[int, int],
                 abscissa: dict[int, int], step_set: StepSet, validate: bool = True):
        self.n = n
        self.root = root
        self.parent = dict(parent)
        self.abscissa = dict(abscissa)
        self.step_set = step_set
        self._hash = None
        if validate:
            self._validate()

    def _validate(self) -> None:
        labels = set(range(1, self.n + 1))
        if self.root not in labels:
            raise PreconditionViolated("root label out of range")
        if set(self.parent) != labels - {self.root}:
            raise PreconditionViolated("parent must be defined exactly on non-root labels")
        if set(self.abscissa) != labels:
            raise PreconditionViolated("abscissa must be defined on all labels")
        if self.abscissa[self.root] != 0:
            raise PreconditionViolated("root must sit at abscissa 0")
        seen = {self.root}
        for v in self.parent:
            chain = []
            w = v
            while w not in seen:
                chain.append(w)
                w = self.parent.get(w)
                if w is None or len(chain) > self.n:
                    raise PreconditionViolated("parent map is not a tree")
            seen.update(chain)
        for v, w in self.parent.items():
            if (self.abscissa[v] - self.abscissa[w]) not in self.step_set:
                raise PreconditionViolated(f"edge {v} -> {w} has step outside S")

    def profile(self) -> Profile:
        lo = min(self.abscissa.values())
        hi = max(self.abscissa.values())
        counts = [0] * (hi - lo + 1)
        for a in self.abscissa.values():
            counts[a - lo] += 1
        return Profile(counts, ell=lo)

    def is_injective(self) -> bool:
        """No two vertices at the same abscissa share a parent."""
        seen = set()
        for v, w in self.parent.items():
            key = (w, self.abscissa[v])
            if key in seen:
                return False
            seen.add(key)
        return True

    def _key(self):
        return (self.n, self.root, tuple(sorted(self.parent.items())),
                tuple(sorted(self.abscissa.items())), self.step_set.steps)

    def __eq__(self, other) -> bool:
        return isinstance(other, EmbeddedCayleyTree) and self._key() == other._key()

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._key())
        return self._hash


@dataclass(frozen=True)
class SAryTree:
    """A plane tree with at most one child per step s in S at each vertex.

    Children are stored as (step, subtree) pairs sorted by step; equality is
    structural, which is exactly equivalence of injective embeddings.
    """

    abscissa: int
    children: tuple[tuple[int, "SAryTree"], ...] = ()

    def size(self) -> int:
        return 1 + sum(c.size() for _, c in self.children)

    def profile(self) -> Profile:
        counts: dict[int, int] = {}

        def walk(node: SAryTree) -> None:
            counts[node.abscissa] = counts.get(node.abscissa, 0) + 1
            for _, c in node.children:
                walk(c)

        walk(self)
        lo, hi = min(counts), max(counts)
        return Profile([counts.get(i, 0) for i in range(lo, hi + 1)], ell=lo)


def shape_key(tree: EmbeddedCayleyTree):
    """Canonical shape of an embedded Cayley tree: equal keys iff the trees
    are equivalent (differ only by a renaming of the labels)."""
    children: dict[int, list[int]] = {v: [] for v in range(1, tree.n + 1)}
    for v, w in tree.parent.items():
        children[w].append(v)

    def encode(v: int):
        return (tree.abscissa[v], tuple(sorted(encode(c) for c in children[v])))

    return encode(tree.root)


def equivalent(t1: EmbeddedCayleyTree, t2: EmbeddedCayleyTree) -> bool:
    return shape_key(t1) == shape_key(t2)


def vertex_type(obj: "MarkedSTree | EmbeddedCayleyTree | SFunction", v,
                m: int | None = None) -> tuple[int, object, CVec]:
    """The complete type (i; s; c) of one vertex; s is the EPS sentinel for
    the root (or for 0^1 in a function)."""
    if m is None:
        m = obj.step_set.m
    if isinstance(obj, SFunction):
        parent, absc, root = obj.image, {u: u.i for u in obj.vertex_set.vertices()}, Vertex(0, 1)
        verts = list(obj.vertex_set.vertices())
    elif isinstance(obj, MarkedSTree):
        parent, absc, root = obj.parent, {u: u.i for u in obj.vertex_set.vertices()}, obj.root
        verts = list(obj.vertex_set.vertices())
    else:
        parent, absc, root = obj.parent, obj.abscissa, obj.root
        verts = list(range(1, obj.n + 1))
    cvec = [0] * (1 - m + 1)
    for u, w in parent.items():
        if w == v:
            cvec[absc[u] - absc[v] - m] += 1
    assert v in verts
    s = EPS if v == root else absc[v] - absc[parent[v]]
    return absc[v], s, tuple(cvec)


def sary_from_injective(tree: MarkedSTree | EmbeddedCayleyTree) -> SAryTree:
    """Canonical S-ary shape of an injective tree (names dropped)."""
    if isinstance(tree, MarkedSTree):
        root = tree.root
        children = tree.children()
        absc = lambda v: v.i
    else:
        if not tree.is_injective():
            raise NotInjective("tree is not injective")
        root = tree.root
        ch: dict[int, list[int]] = {v: [] for v in range(1, tree.n + 1)}
        for v, w in tree.parent.items():
            ch[w].append(v)
        children = ch
        absc = lambda v: tree.abscissa[v]

    def build(v) -> SAryTree:
        kids = []
        seen_steps = set()
        for c in children[v]:
            s = absc(c) - absc(v)
            if s in seen_steps:
                raise NotInjective(f"two children of {v} at step {s}")
            seen_steps.add(s)
            kids.append((s, build(c)))
        return SAryTree(absc(v), tuple(sorted(kids)))

    return build(root)


# ---------------------------------------------------------------------------
# type distributions
# ---------------------------------------------------------------------------

CVec = tuple[int, ...]


@dataclass(frozen=True)
class TypeDistribution:
    """Counts of vertices by out-type, in-type, and complete type.

    c-vectors are dense over the steps m..1 (index s - m), with entries for
    s outside S necessarily 0.  Out and complete counts cover non-root
    vertices only; the root's in-type is kept in root_in_type.
    """

    m: int
    out_counts: tuple[tuple[tuple[int, int], int], ...]
    in_counts: tuple[tuple[tuple[int, CVec], int], ...]
    complete_counts: tuple[tuple[tuple[int, int, CVec], int], ...]
    root_in_type: CVec

    @property
    def out(self) -> dict[tuple[int, int], int]:
        return dict(self.out_counts)

    @property
    def inn(self) -> dict[tuple[int, CVec], int]:
        return dict(self.in_counts)

    @property
    def complete(self) -> dict[tuple[int, int, CVec], int]:
        return dict(self.complete_counts)

    def out_key(self):
        return self.out_counts

    def in_key(self):
        return self.in_counts

    def complete_key(self):
        return (self.root_in_type, self.complete_counts)

    def profile(self) -> Profile:
        counts: dict[int, int] = {0: 1}
        for (i, _s), c in self.out_counts:
            counts[i] = counts.get(i, 0) + c
        lo, hi = min(counts), max(counts)
        return Profile([counts.get(i, 0) for i in range(lo, hi + 1)], ell=lo)


def _check_distribution(dist: TypeDistribution) -> None:
    prof = dist.profile()
    out = dist.out
    # n_i = chi_{i=0} + sum_s n(i,s)
    for i in prof.abscissas():
        total = (1 if i == 0 else 0) + sum(c for (j, _s), c in out.items() if j == i)
        if total != prof.count(i):
            raise IncompatibleDistribution(f"out counts at abscissa {i} do not match")
    # chi_{i=0} + sum_{s,c} c^s n(i-s, c) = sum_c n(i, c)
    inn = dist.inn
    for i in range(prof.ell - 2, prof.r + 3):
        lhs = 1 if i == 0 else 0
        for (j, cv), c in inn.items():
            for s_idx, cs in enumerate(cv):
                s = dist.m + s_idx
                if j + s == i:
                    lhs += cs * c
        rhs = sum(c for (j, _cv), c in inn.items() if j == i)
        if lhs != rhs:
            raise IncompatibleDistribution(f"in counts at abscissa {i} do not match")
    # chi_{i=s} c_0^s + sum_{t,c} c^s n(i-s,t,c) = sum_c n(i,s,c)
    comp = dist.complete
    keys = {(i, s) for (i, s, _cv) in comp}
    keys |= {(i, s) for (i, s) in out}
    c0 = dist.root_in_type
    for s_idx, cs in enumerate(c0):
        if cs:
            keys.add((dist.m + s_idx, dist.m + s_idx))
    for (j, _t, cv) in comp:
        for s_idx, cs in enumerate(cv):
            if cs:
                keys.add((j + dist.m + s_idx, dist.m + s_idx))
    for (i, s) in keys:
        lhs = c0[s - dist.m] if i == s else 0
        for (j, _t, cv), c in comp.items():
            if j == i - s:
                lhs += cv[s - dist.m] * c
        rhs = sum(c for (j, t, _cv), c in comp.items() if (j, t) == (i, s))
        if lhs != rhs:
            raise IncompatibleDistribution(f"complete counts at ({i},{s}) do not match")


def type_distribution_of(obj: "MarkedSTree | EmbeddedCayleyTree | SFunction | SAryTree",
                         m: int | None = None, check: bool = True
                         ) -> TypeDistribution:
    """Exact census of out-, in-, and complete types of a tree or function.

    For S-functions, children means pre-images.  m defaults to min S of the
    object's step set (for S-ary trees it must be given); pass a smaller m to
    embed into a wider interval.  check=False skips the compatibility-identity
    validation (bulk sweeps).
    """
    if isinstance(obj, SAryTree):
        if m is None:
            raise ValueError("S-ary trees need an explicit m")
        verts = []
        absc = {}
        parent = {}

        def walk(node: SAryTree, par_id: int | None) -> None:
            vid = len(verts)
            verts.append(vid)
            absc[vid] = node.abscissa
            if par_id is not None:
                parent[vid] = par_id
            for _s, child in node.children:
                walk(child, vid)

        walk(obj, None)
        root = 0
        return _type_distribution_from(verts, absc, parent, root, m, check)
    if m is None:
        m = obj.step_set.m
    if isinstance(obj, SFunction):
        verts = list(obj.vertex_set.vertices())
        absc = {v: v.i for v in verts}
        parent = obj.image
        root = Vertex(0, 1)
    elif isinstance(obj, MarkedSTree):
        verts = list(obj.vertex_set.vertices())
        absc = {v: v.i for v in verts}
        parent = obj.parent
        root = obj.root
    else:
        verts = list(range(1, obj.n + 1))
        absc = obj.abscissa
        parent = obj.parent
        root = obj.root
    return _type_distribution_from(verts, absc, parent, root, m, check)


def _type_distribution_from(verts, absc, parent, root, m: int,
                            check: bool) -> TypeDistribution:
    width = 1 - m + 1
    cvecs = {v: [0] * width for v in verts}
    for v, w in parent.items():
        s = absc[v] - absc[w]
        assert m <= s <= 1, f"step {s} outside [{m}, 1]"
        cvecs[w][s - m] += 1

    out: dict[tuple[int, int], int] = {}
    inn: dict[tuple[int, CVec], int] = {}
    comp: dict[tuple[int, int, CVec], int] = {}
    root_cv = tuple(cvecs[root])
    for v in verts:
        i = absc[v]
        cv = tuple(cvecs[v])
        inn[(i, cv)] = inn.get((i, cv), 0) + 1
        if v != root:
            s = i - absc[parent[v]]
            out[(i, s)] = out.get((i, s), 0) + 1
            comp[(i, s, cv)] = comp.get((i, s, cv), 0) + 1

    dist = TypeDistribution(
        m=m,
        out_counts=tuple(sorted(out.items())),
        in_counts=tuple(sorted(inn.items())),
        complete_counts=tuple(sorted(comp.items())),
        root_in_type=root_cv,
    )
    if check:
        _check_distribution(dist)
    return dist


# ---------------------------------------------------------------------------
# canonical JSON serialization
# ---------------------------------------------------------------------------

def canonical_json(data) -> str:
    """Bit-exact canonical JSON: sorted keys, no whitespace."""
    return json.dumps(data, sort_keys=True, separators=(",", ":"))


def step_set_to_json(s: StepSet) -> str:
    return canonical_json(list(s.steps))


def step_set_from_json(text: str) -> StepSet:
    return StepSet(json.loads(text))


def profile_to_json(p: Profile) -> str:
    return canonical_json(str(p))


def profile_from_json(text: str) -> Profile:
    return Profile.parse(json.loads(text))


def vertex_to_json(v: Vertex) -> str:
    return canonical_json([v.i, v.k])


def vertex_from_json(text: str) -> Vertex:
    i, k = json.loads(text)
    return Vertex(i, k)


def sfunction_to_json(f: SFunction) -> str:
    image = [[v.i, v.k, w.i, w.k] for v, w in sorted(f.image.items())]
    return canonical_json({
        "profile": str(f.profile),
        "steps": list(f.step_set.steps),
        "image": image,
    })


def sfunction_from_json(text: str) -> SFunction:
    data = json.loads(text)
    profile = Profile.parse(data["profile"])
    steps = StepSet(data["steps"])
    image = {Vertex(i, k): Vertex(j, p) for i, k, j, p in data["image"]}
    return SFunction(VertexSet(profile), steps, image)


def marked_stree_to_json(t: MarkedSTree) -> str:
    parent = [[v.i, v.k, w.i, w.k] for v, w in sorted(t.parent.items())]
    return canonical_json({
        "profile": str(t.profile),
        "steps": list(t.step_set.steps),
        "root": [t.root.i, t.root.k],
        "mark": [t.mark.i, t.mark.k],
        "parent": parent,
    })


def marked_stree_from_json(text: str) -> MarkedSTree:
    data = json.loads(text)
    profile = Profile.parse(data["profile"])
    steps = StepSet(data["steps"])
    parent = {Vertex(i, k): Vertex(j, p) for i, k, j, p in data["parent"]}
    return MarkedSTree(VertexSet(profile), steps, parent,
                       root=Vertex(*data["root"]), mark=Vertex(*data["mark"]))


def embedded_cayley_to_json(t: EmbeddedCayleyTree) -> str:
    parent = [t.parent.get(v, 0) for v in range(1, t.n + 1)]
    abscissa = [t.abscissa[v] for v in range(1, t.n + 1)]
    return canonical_json({
        "n": t.n,
        "root": t.root,
        "parent": parent,
        "abscissa": abscissa,
        "steps": list(t.step_set.steps),
    })


def embedded_cayley_from_json(text: str) -> EmbeddedCayleyTree:
    data = json.loads(text)
    n = data["n"]
    parent = {v: p for v, p in zip(range(1, n + 1), data["parent"]) if p != 0}
    abscissa = {v: a for v, a in zip(range(1, n + 1), data["abscissa"])}
    return EmbeddedCayleyTree(n, data["root"], parent, abscissa,
                              StepSet(data["steps"]))


def sary_to_json(t: SAryTree) -> str:
    def encode(node: SAryTree):
        return {"abscissa": node.abscissa,
                "children": {str(s): encode(c) for s, c in node.children}}
    return canonical_json(encode(t))


def sary_from_json(text: str) -> SAryTree:
    def decode(data) -> SAryTree:
        kids = tuple(sorted((int(s), decode(c)) for s, c in data["children"].items()))
        return SAryTree(data["abscissa"], kids)
    return decode(json.loads(text))


def type_distribution_to_json(d: TypeDistribution) -> str:
    return canonical_json({
        "m": d.m,
        "out": [[i, s, c] for (i, s), c in d.out_counts],
        "in": [[i, list(cv), c] for (i, cv), c in d.in_counts],
        "complete": [[i, s, list(cv), c] for (i, s, cv), c in d.complete_counts],
        "root_in": list(d.root_in_type),
    })


def type_distribution_from_json(text: str) -> TypeDistribution:
    data = json.loads(text)
    return TypeDistribution(
        m=data["m"],
        out_counts=tuple(((i, s), c) for i, s, c in data["out"]),
        in_counts=tuple(((i, tuple(cv)), c) for i, cv, c in data["in"]),
        complete_counts=tuple(((i, s, tuple(cv)), c) for i, s, cv, c in data["complete"]),
        root_in_type=tuple(data["root_in"]),
    )
