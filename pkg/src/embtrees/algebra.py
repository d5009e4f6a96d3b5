"""Algebraic verification routes: cycle-configuration sums and determinants.

Two independent ways to recount what the bijections prove: the signed sums
over configurations of disjoint elementary cycles that appear when the
Lagrange-Good determinant is expanded, and the weighted matrix-tree
determinant over the blown-up vertex set.  All arithmetic is exact (ints and
Fractions); determinants use fraction-free Bareiss elimination over integers
after clearing denominators.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Mapping

import networkx as nx

from .core import (
    BudgetExceeded,
    IncompatibleDistribution,
    Profile,
    StepSet,
    Vertex,
    VertexSet,
)
from .formulas import TargetTree, WeightAssignment, _as_int


# ---------------------------------------------------------------------------
# the cycle digraph G_{l,r}(S) and its configurations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CycleGraph:
    """Digraph on {l..r} with an arc i -> j iff i - j in S.

    With max S = 1 its elementary cycles are exactly the descending runs
    i-s, i-s-1, ..., i for s in S minus {1} (a loop when s = 0).
    """

    ell: int
    r: int
    step_set: StepSet

    def __post_init__(self):
        if self.ell > 0 or self.r < 0:
            raise ValueError("cycle graph needs ell <= 0 <= r")

    def elementary_cycles(self) -> list[tuple[tuple[int, ...], tuple[tuple[int, int], ...]]]:
        """Each cycle as (vertices, arcs); arcs carry (tail, step)."""
        cycles = []
        for s in self.step_set:
            if s == 1:
                continue
            for i in range(self.ell, self.r + 1):
                top = i - s
                if top > self.r:
                    continue
                verts = tuple(range(i, top + 1))
                arcs = [(i, s)] + [(j, 1) for j in range(i + 1, top + 1)]
                cycles.append((verts, tuple(arcs)))
        return cycles

    def elementary_cycles_generic(self) -> list[frozenset[int]]:
        """Johnson-style enumeration on the explicit digraph (debug check)."""
        g = nx.DiGraph()
        g.add_nodes_from(range(self.ell, self.r + 1))
        for i in range(self.ell, self.r + 1):
            for s in self.step_set:
                j = i - s
                if self.ell <= j <= self.r:
                    g.add_edge(i, j)
        return [frozenset(c) for c in nx.simple_cycles(g)]


def enumerate_cycle_configurations(g: CycleGraph
                                   ) -> Iterator[tuple[tuple[tuple[int, ...], tuple[tuple[int, int], ...]], ...]]:
    """All sets of vertex-disjoint elementary cycles, including the empty one."""
    if g.r - g.ell > 12:
        raise BudgetExceeded("cycle graph span exceeds the combinatorial guard")
    cycles = g.elementary_cycles()

    def extend(idx: int, used: frozenset, acc: list) -> Iterator:
        if idx == len(cycles):
            yield tuple(acc)
            return
        yield from extend(idx + 1, used, acc)
        verts, arcs = cycles[idx]
        if not (used & set(verts)):
            acc.append(cycles[idx])
            yield from extend(idx + 1, used | set(verts), acc)
            acc.pop()

    yield from extend(0, frozenset(), [])


def eval_P(g: CycleGraph, y: Mapping[int, Fraction | int]) -> Fraction:
    """The configuration sum P_{l,r}:
    sum_C (-1)^{|C|} prod_i ((sum_s y_{i-s})^{chi_{i not in C}}
                             (y_i - chi_{i=0})^{chi_{i in C}}),
    with y_i = 0 outside [l, r]."""
    def yv(i: int) -> Fraction:
        return Fraction(y.get(i, 0)) if g.ell <= i <= g.r else Fraction(0)

    total = Fraction(0)
    for config in enumerate_cycle_configurations(g):
        in_c = set()
        for verts, _arcs in config:
            in_c.update(verts)
        term = Fraction((-1) ** len(config))
        for i in range(g.ell, g.r + 1):
            if i in in_c:
                term *= yv(i) - (1 if i == 0 else 0)
            else:
                term *= sum(yv(i - s) for s in g.step_set)
        total += term
    return total


def closed_P(g: CycleGraph, y: Mapping[int, Fraction | int]) -> Fraction:
    """Closed form of P_{l,r} under min S = -1 or l = 0:
    chi_{0 in S} when l = r = 0, else (sum_s y_{-s}) prod_{l+1}^{r-1} y_i."""
    if g.ell == 0 and g.r == 0:
        return Fraction(1 if 0 in g.step_set else 0)

    def yv(i: int) -> Fraction:
        return Fraction(y.get(i, 0)) if g.ell <= i <= g.r else Fraction(0)

    total = sum(yv(-s) for s in g.step_set)
    value = Fraction(total)
    for i in range(g.ell + 1, g.r):
        value *= yv(i)
    return value


def eval_P_out(g: CycleGraph, out: Mapping[tuple[int, int], int]) -> Fraction:
    """The out-type configuration sum:
    sum_C (-1)^{|C|} prod_{i not in C} n_i prod_{(i,i-s) in C} n(i,s),
    with n_i = chi_{i=0} + sum_s n(i,s)."""
    n = {i: (1 if i == 0 else 0) + sum(out.get((i, s), 0) for s in g.step_set)
         for i in range(g.ell, g.r + 1)}
    for (i, _s), c in out.items():
        if c and not (g.ell <= i <= g.r):
            raise IncompatibleDistribution(f"out count at abscissa {i} outside graph")
    total = Fraction(0)
    for config in enumerate_cycle_configurations(g):
        term = Fraction((-1) ** len(config))
        in_c = set()
        for verts, arcs in config:
            in_c.update(verts)
            for (tail, s) in arcs:
                term *= out.get((tail, s), 0)
        for i in range(g.ell, g.r + 1):
            if i not in in_c:
                term *= n[i]
        total += term
    return total


def closed_P_out(g: CycleGraph, out: Mapping[tuple[int, int], int]) -> Fraction:
    """Closed form: prod_{i<0} n(i,-1) prod_{i>0} n(i,1)."""
    value = Fraction(1)
    for i in range(g.ell, 0):
        value *= out.get((i, -1), 0)
    for i in range(1, g.r + 1):
        value *= out.get((i, 1), 0)
    return value


def eval_P_refined(g: CycleGraph, y: Mapping[int, Fraction | int],
                   weights: WeightAssignment | Mapping | None = None) -> Fraction:
    """The weighted configuration sum:
    sum_C (-1)^{|C|} (prod_{(i,i-s) in C} x_{i,s})
      prod_i ((sum_s y_{i-s} x_{i,s})^{chi_{i not in C}}
              (y_i - chi_{i=0})^{chi_{i in C}})."""
    if weights is None:
        weights = WeightAssignment()
    elif not isinstance(weights, WeightAssignment):
        weights = WeightAssignment.of(weights)

    def yv(i: int) -> Fraction:
        return Fraction(y.get(i, 0)) if g.ell <= i <= g.r else Fraction(0)

    total = Fraction(0)
    for config in enumerate_cycle_configurations(g):
        term = Fraction((-1) ** len(config))
        in_c = set()
        for verts, arcs in config:
            in_c.update(verts)
            for (tail, s) in arcs:
                term *= weights.get(tail, s)
        for i in range(g.ell, g.r + 1):
            if i in in_c:
                term *= yv(i) - (1 if i == 0 else 0)
            else:
                term *= sum(yv(i - s) * weights.get(i, s) for s in g.step_set)
        total += term
    return total


def closed_P_refined(g: CycleGraph, y: Mapping[int, Fraction | int],
                     weights: WeightAssignment | Mapping | None = None) -> Fraction:
    """Closed form: prod_{i<0} x_{i,-1} prod_{i>0} x_{i,1}
    (sum_s x_{0,s} y_{-s}) prod_{l+1}^{r-1} y_i, with the same base-case
    exception as the unweighted lemma: x_{0,0} chi_{0 in S} when l = r = 0."""
    if weights is None:
        weights = WeightAssignment()
    elif not isinstance(weights, WeightAssignment):
        weights = WeightAssignment.of(weights)
    if g.ell == 0 and g.r == 0:
        return weights.get(0, 0) if 0 in g.step_set else Fraction(0)

    def yv(i: int) -> Fraction:
        return Fraction(y.get(i, 0)) if g.ell <= i <= g.r else Fraction(0)

    value = Fraction(1)
    for i in range(g.ell, 0):
        value *= weights.get(i, -1)
    for i in range(1, g.r + 1):
        value *= weights.get(i, 1)
    value *= sum(weights.get(0, s) * yv(-s) for s in g.step_set)
    for i in range(g.ell + 1, g.r):
        value *= yv(i)
    return value


# ---------------------------------------------------------------------------
# exact determinants: Bareiss elimination
# ---------------------------------------------------------------------------

def bareiss_determinant(matrix: list[list[Fraction | int]]) -> Fraction:
    """Exact determinant by fraction-free Bareiss elimination.

    Rational entries are cleared to integers first; every division inside the
    elimination is then exact integer division (asserted).  det([]) = 1.
    """
    k = len(matrix)
    if k == 0:
        return Fraction(1)
    denom_lcm = 1
    for row in matrix:
        assert len(row) == k
        for x in row:
            if isinstance(x, Fraction):
                denom_lcm = denom_lcm * x.denominator // math.gcd(
                    denom_lcm, x.denominator)
    m = [[int(Fraction(x) * denom_lcm) for x in row] for row in matrix]
    sign = 1
    prev = 1
    for col in range(k - 1):
        if m[col][col] == 0:
            pivot_row = next((r for r in range(col + 1, k) if m[r][col] != 0), None)
            if pivot_row is None:
                return Fraction(0)
            m[col], m[pivot_row] = m[pivot_row], m[col]
            sign = -sign
        for r in range(col + 1, k):
            for c in range(col + 1, k):
                num = m[r][c] * m[col][col] - m[r][col] * m[col][c]
                assert num % prev == 0, "Bareiss division must be exact"
                m[r][c] = num // prev
            m[r][col] = 0
        prev = m[col][col]
    return Fraction(sign * m[k - 1][k - 1], denom_lcm ** k)


# ---------------------------------------------------------------------------
# the Laplacian system of the blown-up digraph K
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LaplacianSystem:
    """Weighted digraph K on V: arc i^p -> j^q iff the vertices differ and
    j = i - s for some s in S, with weight x_{i,s}.  The Laplacian has the
    weighted out-degree on the diagonal; spanning trees of K rooted at a
    vertex are counted by the minor deleting that vertex's row and column."""

    profile: Profile
    step_set: StepSet
    weights: WeightAssignment

    def vertices(self) -> list[Vertex]:
        return list(VertexSet(self.profile).vertices())

    def laplacian(self) -> list[list[Fraction]]:
        p = self.profile
        verts = self.vertices()
        index = {v: i for i, v in enumerate(verts)}
        size = len(verts)
        mat = [[Fraction(0)] * size for _ in range(size)]
        for v in verts:
            diag = sum(Fraction(p.count(v.i - s)) * self.weights.get(v.i, s)
                       for s in self.step_set)
            if 0 in self.step_set:
                diag -= self.weights.get(v.i, 0)
            mat[index[v]][index[v]] = diag
            for s in self.step_set:
                for w in VertexSet(p).level(v.i - s):
                    if w != v:
                        mat[index[v]][index[w]] = -self.weights.get(v.i, s)
        return mat

    def minor_without(self, v: Vertex) -> list[list[Fraction]]:
        verts = self.vertices()
        keep = [i for i, w in enumerate(verts) if w != v]
        mat = self.laplacian()
        return [[mat[r][c] for c in keep] for r in keep]


def laplacian_minor_det(profile: Profile, step_set: StepSet,
                        weights: WeightAssignment | Mapping | None = None
                        ) -> Fraction:
    """det of the Laplacian of K with the row and column of 0^{n_0} removed:
    the generating function of spanning trees of K rooted at 0^{n_0}.

    Equals (prod_{i<0} x_{i,-1}) (prod_{i>0} x_{i,1}) (prod_{l+1}^{r-1} n_i)
    prod_i (sum_s n_{i-s} x_{i,s})^{n_i-1} under min S = -1 or l = 0.
    """
    if profile.n > 60:
        raise BudgetExceeded("dense exact determinant guard: n <= 60")
    if weights is None:
        weights = WeightAssignment()
    elif not isinstance(weights, WeightAssignment):
        weights = WeightAssignment.of(weights)
    system = LaplacianSystem(profile, step_set, weights)
    minor = system.minor_without(Vertex(0, profile.count(0)))
    return bareiss_determinant(minor)


def spanning_product_formula(profile: Profile, step_set: StepSet,
                             weights: WeightAssignment | Mapping | None = None
                             ) -> Fraction:
    """The product the minor determinant factors into.

    For ell = r = 0 the cycle-sum base case applies instead (exactly as for
    the unweighted configuration lemma): the determinant is
    x_{0,0} chi_{0 in S} (sum_s n_{-s} x_{0,s})^{n_0 - 2}, which is what
    reduces to n^{n-2} rooted at a fixed vertex in the pure Cayley case.
    """
    p = profile
    if weights is None:
        weights = WeightAssignment()
    elif not isinstance(weights, WeightAssignment):
        weights = WeightAssignment.of(weights)
    if p.ell == 0 and p.r == 0:
        if p.n == 1:
            return Fraction(1)
        if 0 not in step_set:
            return Fraction(0)
        total = Fraction(p.count(0)) * weights.get(0, 0)
        return weights.get(0, 0) * total ** (p.n - 2)
    value = Fraction(1)
    for i in range(p.ell, 0):
        value *= weights.get(i, -1)
    for i in range(1, p.r + 1):
        value *= weights.get(i, 1)
    for i in range(p.ell + 1, p.r):
        value *= p.count(i)
    for i, ni in p.items():
        value *= sum(Fraction(p.count(i - s)) * weights.get(i, s)
                     for s in step_set) ** (ni - 1)
    return value


def spanning_trees_direct(profile: Profile, step_set: StepSet,
                          weights: WeightAssignment | Mapping | None = None,
                          root: Vertex | None = None) -> Fraction:
    """Direct enumeration of spanning trees of K rooted at `root` (default
    0^{n_0}), summing the product of arc weights; the oracle for the minor."""
    p = profile
    if p.n > 6:
        raise BudgetExceeded("direct spanning-tree enumeration guard: n <= 6")
    if weights is None:
        weights = WeightAssignment()
    elif not isinstance(weights, WeightAssignment):
        weights = WeightAssignment.of(weights)
    vset = VertexSet(p)
    if root is None:
        root = Vertex(0, p.count(0))
    verts = list(vset.vertices())
    others = [v for v in verts if v != root]
    choices = []
    for v in others:
        opts = []
        for s in step_set:
            for w in vset.level(v.i - s):
                if w != v:
                    opts.append((w, weights.get(v.i, s)))
        choices.append(opts)
    total = Fraction(0)
    for combo in itertools.product(*choices):
        parent = {v: w for v, (w, _x) in zip(others, combo)}
        if _parent_is_tree(parent, root, len(verts)):
            term = Fraction(1)
            for _v, (_w, x) in zip(others, combo):
                term *= x
            total += term
    return total


def _parent_is_tree(parent: dict, root, n: int) -> bool:
    depth = {root: 0}
    for v in parent:
        chain = []
        w = v
        while w not in depth:
            chain.append(w)
            w = parent.get(w)
            if w is None or len(chain) > n:
                return False
        base = depth[w]
        for j, u in enumerate(reversed(chain)):
            depth[u] = base + j + 1
    return True


def cayley_from_spanning(profile: Profile, step_set: StepSet,
                         weights: WeightAssignment | Mapping | None = None
                         ) -> Fraction:
    """Embedded-tree generating function from the spanning-tree one:
    n_0 n! / prod_{i=l}^{r} n_i! times the rooted minor determinant."""
    p = profile
    factor = Fraction(p.count(0)) * math.factorial(p.n)
    for _i, ni in p.items():
        factor /= math.factorial(ni)
    return factor * laplacian_minor_det(profile, step_set, weights)


# ---------------------------------------------------------------------------
# tree-in-tree via the matrix-tree theorem
# ---------------------------------------------------------------------------

def tree_in_tree_det(target: TargetTree) -> int:
    """Matrix-tree count of target-embedded Cayley trees: blow each abscissa
    node i up into n_i copies, connect copies of adjacent nodes completely
    (single-node targets blow up to a complete graph), take the Laplacian
    minor at a fixed root copy, and convert by n_rho n! / prod n_i!."""
    t = target
    if t.n > 60:
        raise BudgetExceeded("dense exact determinant guard: n <= 60")
    adj = t.adjacency()
    verts = [(i, p) for i, c in t.counts for p in range(1, c + 1)]
    index = {v: j for j, v in enumerate(verts)}
    size = len(verts)
    mat = [[0] * size for _ in range(size)]
    for (i, p) in verts:
        for j in adj[i]:
            for q in range(1, t.count(j) + 1):
                if (i, p) != (j, q):
                    mat[index[(i, p)]][index[(j, q)]] -= 1
                    mat[index[(i, p)]][index[(i, p)]] += 1
    root_idx = index[(t.root, 1)]
    keep = [j for j in range(size) if j != root_idx]
    minor = [[Fraction(mat[r][c]) for c in keep] for r in keep]
    det = bareiss_determinant(minor)
    factor = Fraction(t.count(t.root)) * math.factorial(t.n)
    for _i, ni in t.counts:
        factor /= math.factorial(ni)
    return _as_int(factor * det, "tree-in-tree determinant count")
