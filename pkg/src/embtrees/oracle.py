"""Brute-force enumerators: the ground truth every formula is checked against.

Everything here is deliberately naive (full enumeration with rejection and
profile pruning, no counting shortcuts) so that it can be audited line by
line.  Budgets cap the work: enumerators count elementary steps and raise
BudgetExceeded past the cap.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator

from .core import (
    BudgetExceeded,
    CVec,
    EmbeddedCayleyTree,
    MarkedSTree,
    Profile,
    SAryTree,
    SFunction,
    StepSet,
    Vertex,
    VertexSet,
    condition_t,
    condition_t1,
    condition_t2,
    allowed_images,
    embedded_cayley_to_json,
    marked_stree_to_json,
    sary_to_json,
    sfunction_to_json,
    type_distribution_of,
)


@dataclass
class EnumerationBudget:
    """Caps for exhaustive searches: max object size and elementary steps."""

    max_size: int = 7
    max_candidates: int = 200_000_000
    on_exceed: str = "error"  # or "skip"

    def __post_init__(self):
        if self.max_size < 1:
            raise ValueError("max_size must be >= 1")
        self._steps = 0

    def charge(self, amount: int = 1) -> bool:
        """Account for work; returns False if the budget says to stop."""
        self._steps += amount
        if self._steps > self.max_candidates:
            if self.on_exceed == "error":
                raise BudgetExceeded(
                    f"enumeration exceeded {self.max_candidates} steps")
            return False
        return True

    def check_size(self, n: int) -> None:
        if n > self.max_size:
            if self.on_exceed == "error":
                raise BudgetExceeded(
                    f"object size {n} exceeds budget {self.max_size}")
            raise StopIteration


DEFAULT_BUDGET = EnumerationBudget()


def _budget(budget: EnumerationBudget | None) -> EnumerationBudget:
    if budget is None:
        return EnumerationBudget()
    return budget


@dataclass(frozen=True)
class LooseStepSet:
    """Step container without the max-step-1 requirement.

    Only the tree/S-ary enumerators accept it: they are used to recount the
    configurations showing that the product formulas NEED max S = 1 (for
    example S = {-1, 1, 2}).  Everything downstream of the bijections keeps
    the strict StepSet.
    """

    steps: tuple[int, ...]

    def __init__(self, steps: Iterable[int]):
        object.__setattr__(self, "steps", tuple(sorted(set(steps))))

    @property
    def m(self) -> int:
        return self.steps[0]

    def __contains__(self, s: int) -> bool:
        return s in self.steps

    def __iter__(self):
        return iter(self.steps)


def _coerce_steps(steps) -> StepSet | LooseStepSet:
    if isinstance(steps, (StepSet, LooseStepSet)):
        return steps
    steps = tuple(sorted(set(steps)))
    if steps and steps[-1] == 1:
        return StepSet(steps)
    return LooseStepSet(steps)


# ---------------------------------------------------------------------------
# S-functions
# ---------------------------------------------------------------------------

def enumerate_sfunctions(step_set: StepSet, profile: Profile, regime: str,
                         constraint=None,
                         budget: EnumerationBudget | None = None,
                         ) -> Iterator[SFunction]:
    """All S-functions on V \\ {0^1} satisfying condition (F), in
    lexicographic order of the image tuple.

    constraint="injective" keeps only functions injective on each V_i.
    constraint="relaxed_spine" drops the clause f(-1^1) in V_0 (the image of
    -1^1 ranges over all S-images instead); used by the in-type lemma tests.
    A pair constraint selects by types (filters, naive on purpose):
    ("out_types", {v: s}) / ("in_types", {v: cvec}) fix per-vertex types;
    ("out_counts", dist) / ("in_counts", dist) / ("complete_counts",
    (root_cvec, dist)) fix the counted distribution.
    """
    budget = _budget(budget)
    budget.check_size(profile.n)
    if regime not in ("nonneg", "general"):
        raise ValueError(f"unknown regime {regime!r}")
    if regime == "nonneg" and profile.ell != 0:
        raise ValueError("nonneg regime needs ell = 0")
    vset = VertexSet(profile)
    forced: dict[Vertex, Vertex] = {}
    for i in range(1, profile.r + 1):
        forced[Vertex(i, 1)] = Vertex(i - 1, 1)
    for i in range(profile.ell, -1):
        forced[Vertex(i, 1)] = Vertex(i + 1, 1)
    free: list[Vertex] = []
    domains: list[list[Vertex]] = []
    for v in vset.vertices():
        if v == Vertex(0, 1) or v in forced:
            continue
        if profile.ell < 0 and v == Vertex(-1, 1):
            continue  # handled below: (F) pins its image to V_0
        free.append(v)
        domains.append(allowed_images(vset, step_set, v))
    if profile.ell < 0:
        v1 = Vertex(-1, 1)
        free.insert(0, v1)
        if constraint == "relaxed_spine":
            domains.insert(0, allowed_images(vset, step_set, v1))
        else:
            domains.insert(0, vset.level(0))
    for choice in itertools.product(*domains):
        if not budget.charge():
            return
        image = dict(forced)
        image.update(zip(free, choice))
        f = SFunction(vset, step_set, image, validate=False)
        if constraint == "injective" and not _injective_per_level(f):
            continue
        if isinstance(constraint, tuple) and not _matches_constraint(f, constraint):
            continue
        yield f


def _matches_constraint(f: SFunction, constraint: tuple) -> bool:
    kind, want = constraint
    if kind == "out_types":
        return all(f.image[v].i == v.i - s for v, s in want.items())
    dist = type_distribution_of(f, check=False)
    if kind == "in_types":
        inn = {v: [0] * (1 - dist.m + 1) for v in f.vertex_set.vertices()}
        for v, w in f.image.items():
            inn[w][v.i - w.i - dist.m] += 1
        return all(tuple(inn[v]) == tuple(cv) for v, cv in want.items())
    if kind == "out_counts":
        return dist.out_key() == tuple(sorted((k, c) for k, c in want.items() if c))
    if kind == "in_counts":
        return dist.in_key() == tuple(sorted((k, c) for k, c in want.items() if c))
    if kind == "complete_counts":
        root_cv, comp = want
        return dist.complete_key() == (tuple(root_cv), tuple(
            sorted((k, c) for k, c in comp.items() if c)))
    raise ValueError(f"unknown constraint {kind!r}")


def _injective_per_level(f: SFunction) -> bool:
    seen = set()
    for v, w in f.image.items():
        key = (v.i, w)
        if key in seen:
            return False
        seen.add(key)
    return True


# ---------------------------------------------------------------------------
# marked S-trees
# ---------------------------------------------------------------------------

def enumerate_marked_strees(step_set: StepSet, profile: Profile, regime: str,
                            budget: EnumerationBudget | None = None,
                            ) -> Iterator[MarkedSTree]:
    """All marked S-trees of the given regime, verified by the explicit
    path-walk predicates: (T) with root 0^1 for nonneg, (T1) and (T2) with
    root in V_0 for general."""
    budget = _budget(budget)
    budget.check_size(profile.n)
    vset = VertexSet(profile)
    if regime == "nonneg":
        if profile.ell != 0:
            raise ValueError("nonneg regime needs ell = 0")
        roots = [Vertex(0, 1)]
        keep = condition_t
    elif regime == "general":
        roots = vset.level(0)
        keep = lambda t: condition_t1(t) and condition_t2(t)
    else:
        raise ValueError(f"unknown regime {regime!r}")
    marks = vset.level(profile.r)
    for tree in _enumerate_strees(vset, step_set, roots, budget):
        for mark in marks:
            marked = MarkedSTree(vset, step_set, tree[1], root=tree[0],
                                 mark=mark, validate=False)
            if keep(marked):
                yield marked


def _enumerate_strees(vset: VertexSet, step_set: StepSet, roots: list[Vertex],
                      budget: EnumerationBudget,
                      ) -> Iterator[tuple[Vertex, dict[Vertex, Vertex]]]:
    verts = list(vset.vertices())
    for root in roots:
        others = [v for v in verts if v != root]
        domains = [[w for w in allowed_images(vset, step_set, v) if w != v]
                   for v in others]
        for choice in itertools.product(*domains):
            if not budget.charge():
                return
            parent = dict(zip(others, choice))
            if _is_tree(parent, root, len(verts)):
                yield root, parent


def _is_tree(parent: dict, root, n: int) -> bool:
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


# ---------------------------------------------------------------------------
# embedded Cayley trees
# ---------------------------------------------------------------------------

_ROOTED_TREE_CACHE: dict[int, list[tuple[int, tuple[tuple[int, int], ...]]]] = {}


def rooted_cayley_trees(n: int) -> list[tuple[int, tuple[tuple[int, int], ...]]]:
    """All n^{n-1} rooted Cayley trees on labels 1..n as (root, parent pairs),
    obtained by decoding every parent sequence and rejecting non-trees."""
    if n not in _ROOTED_TREE_CACHE:
        labels = list(range(1, n + 1))
        trees = []
        for root in labels:
            others = [v for v in labels if v != root]
            for choice in itertools.product(labels, repeat=len(others)):
                parent = dict(zip(others, choice))
                if any(parent[v] == v for v in others):
                    continue
                if _is_tree(parent, root, n):
                    trees.append((root, tuple(zip(others, choice))))
        assert len(trees) == n ** (n - 1)
        _ROOTED_TREE_CACHE[n] = trees
    return _ROOTED_TREE_CACHE[n]


def _rooted_cayley_trees(n: int, budget: EnumerationBudget,
                         ) -> Iterator[tuple[int, dict[int, int]]]:
    for root, pairs in rooted_cayley_trees(n):
        if not budget.charge(n):
            return
        yield root, dict(pairs)


def enumerate_embedded_cayley(step_set: StepSet | LooseStepSet | Iterable[int],
                              profile: Profile,
                              budget: EnumerationBudget | None = None,
                              ) -> Iterator[EmbeddedCayleyTree]:
    """All S-embedded Cayley trees with the given profile: every rooted
    labeled tree crossed with every consistent abscissa assignment, pruned on
    partial profiles."""
    step_set = _coerce_steps(step_set)
    budget = _budget(budget)
    budget.check_size(profile.n)
    n = profile.n
    target = {i: profile.count(i) for i in profile.abscissas()}
    steps = sorted(step_set)
    for root, parent in _rooted_cayley_trees(n, budget):
        children: dict[int, list[int]] = {v: [] for v in range(1, n + 1)}
        for v in sorted(parent):
            children[parent[v]].append(v)
        order = []
        stack = [root]
        while stack:
            v = stack.pop()
            order.append(v)
            stack.extend(reversed(children[v]))
        abscissa = {root: 0}
        remaining = dict(target)
        if remaining.get(0, 0) < 1:
            continue
        remaining[0] -= 1

        def assign(idx: int) -> Iterator[dict[int, int]]:
            if not budget.charge():
                return
            if idx == len(order):
                if all(c == 0 for c in remaining.values()):
                    yield dict(abscissa)
                return
            v = order[idx]
            base = abscissa[parent[v]]
            for s in steps:
                a = base + s
                if remaining.get(a, 0) > 0:
                    remaining[a] -= 1
                    abscissa[v] = a
                    yield from assign(idx + 1)
                    del abscissa[v]
                    remaining[a] += 1

        for full in assign(1):
            yield EmbeddedCayleyTree(n, root, parent, full, step_set,
                                     validate=False)


# ---------------------------------------------------------------------------
# S-ary trees
# ---------------------------------------------------------------------------

def enumerate_sary(step_set: StepSet | LooseStepSet | Iterable[int],
                   profile: Profile,
                   budget: EnumerationBudget | None = None,
                   ) -> Iterator[SAryTree]:
    """All S-ary trees with the given profile, by recursive construction over
    step-indexed child slots with profile pruning."""
    step_set = _coerce_steps(step_set)
    budget = _budget(budget)
    budget.check_size(profile.n)
    steps = sorted(step_set)
    remaining = {i: profile.count(i) for i in profile.abscissas()}
    if remaining.get(0, 0) < 1:
        return
    remaining[0] -= 1

    def grow(abscissa: int) -> Iterator[SAryTree]:
        """All subtrees rooted at a vertex already placed at `abscissa`,
        consuming whatever profile mass each uses."""
        if not budget.charge():
            return

        def slots(idx: int, acc: list[tuple[int, SAryTree]]
                  ) -> Iterator[tuple[tuple[int, SAryTree], ...]]:
            if idx == len(steps):
                yield tuple(acc)
                return
            s = steps[idx]
            yield from slots(idx + 1, acc)  # no child at this step
            a = abscissa + s
            if remaining.get(a, 0) > 0:
                remaining[a] -= 1
                for child in grow(a):
                    acc.append((s, child))
                    yield from slots(idx + 1, acc)
                    acc.pop()
                remaining[a] += 1

        for kids in slots(0, []):
            yield SAryTree(abscissa, kids)

    for tree in grow(0):
        if all(c == 0 for c in remaining.values()):
            yield tree


# ---------------------------------------------------------------------------
# censuses and golden-file dumps
# ---------------------------------------------------------------------------

def census_by_type(stream: Iterable, granularity: str) -> dict:
    """Exact census of a stream of trees or functions.

    granularity: "profile" buckets by vertical profile; "out"/"in"/"complete"
    bucket by the corresponding type distribution (complete keys include the
    root in-type).
    """
    census: dict = {}
    for obj in stream:
        if granularity == "profile":
            prof = obj.profile() if callable(getattr(obj, "profile")) else obj.profile
            key = (prof.ell, prof.counts)
        else:
            dist = type_distribution_of(obj)
            if granularity == "out":
                key = dist.out_key()
            elif granularity == "in":
                key = dist.in_key()
            elif granularity == "complete":
                key = dist.complete_key()
            else:
                raise ValueError(f"unknown granularity {granularity!r}")
        census[key] = census.get(key, 0) + 1
    return census


def dump_ndjson(stream: Iterable, path) -> int:
    """Newline-delimited canonical JSON dump; returns the object count."""
    serializers = {
        SFunction: sfunction_to_json,
        MarkedSTree: marked_stree_to_json,
        EmbeddedCayleyTree: embedded_cayley_to_json,
        SAryTree: sary_to_json,
    }
    count = 0
    with open(path, "w") as handle:
        for obj in stream:
            handle.write(serializers[type(obj)](obj))
            handle.write("\n")
            count += 1
    return count


# ---------------------------------------------------------------------------
# compatible distributions (the index sets of the pointwise formula checks)
# ---------------------------------------------------------------------------

def compatible_out_distributions(step_set: StepSet, profile: Profile
                                 ) -> Iterator[dict[tuple[int, int], int]]:
    """All out-distributions n(i,s) >= 0 with chi_{i=0} + sum_s n(i,s) = n_i
    and n(i,s) = 0 when i - s leaves [ell, r]."""
    p = profile
    per_level: list[list[dict[tuple[int, int], int]]] = []
    for i, ni in p.items():
        need = ni - (1 if i == 0 else 0)
        slots = [s for s in step_set if p.ell <= i - s <= p.r]
        level: list[dict[tuple[int, int], int]] = []
        for split in _compositions(need, len(slots)):
            level.append({(i, s): c for s, c in zip(slots, split) if c})
        if not level and need > 0:
            return
        per_level.append(level or [{}])
    for parts in itertools.product(*per_level):
        out: dict[tuple[int, int], int] = {}
        for part in parts:
            out.update(part)
        yield out


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """All tuples of `parts` nonnegative ints summing to total."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _vector_partitions(vec: tuple[int, ...], parts: int
                       ) -> Iterator[tuple[tuple[tuple[int, ...], int], ...]]:
    """All multisets of `parts` nonnegative vectors summing to vec, as sorted
    ((vector, multiplicity), ...) tuples."""
    found: set = set()

    def split(remaining: tuple[int, ...], parts_left: int,
              floor: tuple[int, ...], acc: list) -> Iterator:
        if parts_left == 0:
            if all(x == 0 for x in remaining):
                key = tuple(sorted(_count_multi(acc).items()))
                if key not in found:
                    found.add(key)
                    yield key
            return
        # next part ranges over vectors <= remaining, >= floor (to kill order)
        for part in _vectors_upto(remaining):
            if part < floor:
                continue
            acc.append(part)
            rem = tuple(a - b for a, b in zip(remaining, part))
            yield from split(rem, parts_left - 1, part, acc)
            acc.pop()

    yield from split(vec, parts, tuple([0] * len(vec)), [])


def _vectors_upto(bound: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
    ranges = [range(b + 1) for b in bound]
    for combo in itertools.product(*ranges):
        yield combo


def _count_multi(items: list) -> dict:
    out: dict = {}
    for x in items:
        out[x] = out.get(x, 0) + 1
    return out


def compatible_in_distributions(step_set: StepSet, profile: Profile
                                ) -> Iterator[dict[tuple[int, CVec], int]]:
    """All in-distributions over dense c-vectors (steps m..1) compatible with
    the profile: for each out-distribution, every way of splitting the child
    mass e_{j,s} = n(j+s, s) among the n_j vertices at abscissa j."""
    p = profile
    m = step_set.m
    width = 1 - m + 1
    for out in compatible_out_distributions(step_set, profile):
        per_level = []
        feasible = True
        for j, nj in p.items():
            evec = tuple(out.get((j + s, s), 0) for s in range(m, 2))
            level = list(_vector_partitions(evec, nj))
            if not level:
                feasible = False
                break
            per_level.append((j, level))
        if not feasible:
            continue
        for parts in itertools.product(*(lv for _j, lv in per_level)):
            inn: dict[tuple[int, CVec], int] = {}
            for (j, _lv), multis in zip(per_level, parts):
                for cv, cnt in multis:
                    assert len(cv) == width
                    inn[(j, cv)] = inn.get((j, cv), 0) + cnt
            yield inn


def compatible_complete_distributions(step_set: StepSet, profile: Profile
                                      ) -> Iterator[tuple[CVec, dict]]:
    """All (root in-type, complete distribution) pairs compatible with a
    non-negative profile for S = [m,-1] union {1}: split each abscissa's
    child mass among its out-type groups and the root."""
    p = profile
    if p.ell != 0:
        raise ValueError("complete distributions are enumerated for ell = 0 only")
    m = step_set.m
    for out in compatible_out_distributions(step_set, profile):
        per_level = []
        feasible = True
        for j, _nj in p.items():
            evec = tuple(out.get((j + s, s), 0) for s in range(m, 2))
            groups = [(s, out.get((j, s), 0)) for s in sorted(step_set)
                      if out.get((j, s), 0) > 0]
            if j == 0:
                groups.append(("root", 1))
            options = list(_group_splits(evec, groups))
            if not options:
                feasible = False
                break
            per_level.append((j, options))
        if not feasible:
            continue
        for parts in itertools.product(*(opt for _j, opt in per_level)):
            comp: dict = {}
            root_cv: CVec | None = None
            ok = True
            for (j, _opt), assignment in zip(per_level, parts):
                for (s, multis) in assignment:
                    for cv, cnt in multis:
                        if s == "root":
                            assert cnt == 1
                            root_cv = cv
                        else:
                            comp[(j, s, cv)] = comp.get((j, s, cv), 0) + cnt
            if root_cv is None or any(root_cv[:-1]):
                ok = root_cv is not None and not any(root_cv[:-1])
            if ok:
                yield root_cv, comp


def _group_splits(evec: tuple[int, ...], groups: list):
    """Distribute the child-mass vector among sized groups; within a group,
    all multiset partitions into exactly that many parts."""
    if not groups:
        if all(x == 0 for x in evec):
            yield []
        return
    (label, size), rest = groups[0], groups[1:]
    for share in _vectors_upto(evec):
        remainder = tuple(a - b for a, b in zip(evec, share))
        for multis in _vector_partitions(share, size):
            for tail in _group_splits(remainder, rest):
                yield [(label, multis)] + tail


# ---------------------------------------------------------------------------
# bulk sweeps (still naive, but enumerated once per size instead of once per
# profile; used by the acceptance suite)
# ---------------------------------------------------------------------------

def sweep_embedded_censuses(step_set: StepSet, n: int,
                            granularities: tuple[str, ...] = ("out",),
                            budget: EnumerationBudget | None = None,
                            ) -> dict[str, dict]:
    """Censuses of ALL S-embedded Cayley trees of size n, bucketed first by
    profile: result[g][(ell, counts)][census_key] = count.  "count" buckets
    just the number of trees per profile.

    Census keys are computed inline from the parent/abscissa arrays (the
    object-level type_distribution_of is exercised separately); c-vectors are
    dense over min S .. 1.
    """
    budget = _budget(budget)
    budget.check_size(n)
    for g in granularities:
        if g not in ("out", "in", "complete"):
            raise ValueError(f"unknown granularity {g!r}")
    result: dict[str, dict] = {g: {} for g in granularities}
    result.setdefault("count", {})
    steps = sorted(step_set)
    m = step_set.m
    width = 1 - m + 1
    for root, pairs in rooted_cayley_trees(n):
        if not budget.charge(n):
            return result
        parent = dict(pairs)
        children: dict[int, list[int]] = {v: [] for v in range(1, n + 1)}
        for v, w in pairs:
            children[w].append(v)
        order = [root]
        stack = [root]
        while stack:
            v = stack.pop()
            for c in children[v]:
                order.append(c)
                stack.append(c)
        absc = {root: 0}
        counts: dict[int, int] = {0: 1}

        def emit() -> None:
            lo = min(counts)
            hi = max(counts)
            pkey = (lo, tuple(counts.get(i, 0) for i in range(lo, hi + 1)))
            result["count"][pkey] = result["count"].get(pkey, 0) + 1
            if not granularities:
                return
            cvecs = {v: [0] * width for v in absc}
            out: dict[tuple[int, int], int] = {}
            for v, w in pairs:
                s = absc[v] - absc[w]
                cvecs[w][s - m] += 1
                out[(absc[v], s)] = out.get((absc[v], s), 0) + 1
            for g in granularities:
                if g == "out":
                    key = tuple(sorted(out.items()))
                elif g == "in":
                    inn: dict = {}
                    for v in absc:
                        k = (absc[v], tuple(cvecs[v]))
                        inn[k] = inn.get(k, 0) + 1
                    key = tuple(sorted(inn.items()))
                else:
                    comp: dict = {}
                    for v in absc:
                        if v == root:
                            continue
                        k = (absc[v], absc[v] - absc[parent[v]], tuple(cvecs[v]))
                        comp[k] = comp.get(k, 0) + 1
                    key = (tuple(cvecs[root]), tuple(sorted(comp.items())))
                bucket = result[g].setdefault(pkey, {})
                bucket[key] = bucket.get(key, 0) + 1

        def assign(idx: int) -> None:
            if idx == len(order):
                emit()
                return
            budget.charge()
            v = order[idx]
            base = absc[parent[v]]
            for s in steps:
                a = base + s
                absc[v] = a
                counts[a] = counts.get(a, 0) + 1
                assign(idx + 1)
                if counts[a] == 1:
                    del counts[a]
                else:
                    counts[a] -= 1
                del absc[v]

        assign(1)
    return result


def enumerate_target_embeddings(target, budget: EnumerationBudget | None = None
                                ) -> Iterator[tuple[int, dict, dict]]:
    """All (root, parent, abscissa) triples of rooted Cayley trees with a
    root-preserving morphism to the target tree (brute force for the
    tree-in-tree formula).  Single-node targets are self-adjacent."""
    budget = _budget(budget)
    n = target.n
    budget.check_size(n)
    adj = target.adjacency()
    counts = dict(target.counts)
    for root, parent in _rooted_cayley_trees(n, budget):
        children: dict[int, list[int]] = {v: [] for v in range(1, n + 1)}
        for v in sorted(parent):
            children[parent[v]].append(v)
        order = []
        stack = [root]
        while stack:
            v = stack.pop()
            order.append(v)
            stack.extend(reversed(children[v]))
        place = {root: target.root}
        remaining = dict(counts)
        remaining[target.root] -= 1
        if remaining[target.root] < 0:
            continue

        def assign(idx: int) -> Iterator[dict[int, int]]:
            if not budget.charge():
                return
            if idx == len(order):
                if all(c == 0 for c in remaining.values()):
                    yield dict(place)
                return
            v = order[idx]
            for node in adj[place[parent[v]]]:
                if remaining.get(node, 0) > 0:
                    remaining[node] -= 1
                    place[v] = node
                    yield from assign(idx + 1)
                    del place[v]
                    remaining[node] += 1

        for full in assign(1):
            yield root, dict(parent), full


def count_tree_in_tree_oracle(target, budget: EnumerationBudget | None = None
                              ) -> int:
    return sum(1 for _ in enumerate_target_embeddings(target, budget))
