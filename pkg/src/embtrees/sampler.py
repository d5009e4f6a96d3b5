"""Exact uniform random generation of embedded trees with a given profile.

A uniform (F)-function costs one independent uniform draw per free vertex;
the bijection turns it into a marked tree; a uniform renaming (one spine swap
per abscissa) plus a uniform order-consistent labeling turn the marked tree
into an embedded Cayley tree.  Every embedded tree with the profile arises
from the same number of (marked tree, renaming, labeling) triples, so the
output is exactly uniform.  Draws use random.Random, whose bounded integers
are rejection-sampled (no modulo bias).

The exact law of the vertical profile of a uniform random tree (the discrete
occupation measure) is computed by enumerating all profiles of a given size
and normalizing the counting formulas by the total.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .core import (
    EmbeddedCayleyTree,
    HypothesisViolation,
    InfeasibleProfile,
    MarkedSTree,
    Profile,
    SAryTree,
    SFunction,
    StepSet,
    Vertex,
    VertexSet,
    allowed_images,
    sary_from_injective,
    validate_profile_for,
)
from . import formulas
from .bijection_nonneg import phi
from .bijection_general import psi


class CountingRandom(random.Random):
    """random.Random that counts its bounded-integer draws (used to check
    that sampling costs Theta(n) draws)."""

    def __init__(self, seed=None):
        super().__init__(seed)
        self.draws = 0

    def _randbelow(self, n, **kwargs):
        self.draws += 1
        return super()._randbelow(n, **kwargs)


def _regime_of(profile: Profile) -> str:
    return "nonneg" if profile.ell == 0 else "general"


def _rng(seed) -> random.Random:
    if isinstance(seed, random.Random):
        return seed
    return random.Random(seed)


# ---------------------------------------------------------------------------
# uniform functions and trees
# ---------------------------------------------------------------------------

def sample_sfunction(step_set: StepSet, profile: Profile, regime: str,
                     seed=None) -> SFunction:
    """Uniform (F)-function: every free vertex's image is drawn independently
    and uniformly from its allowed codomain (v_0 uniformly from V_0 when
    ell < 0)."""
    validate_profile_for(step_set, profile, regime)
    if regime == "general" and profile.ell == 0:
        regime = "nonneg"
    rng = _rng(seed)
    vset = VertexSet(profile)
    image: dict[Vertex, Vertex] = {}
    for i in range(1, profile.r + 1):
        image[Vertex(i, 1)] = Vertex(i - 1, 1)
    for i in range(profile.ell, -1):
        image[Vertex(i, 1)] = Vertex(i + 1, 1)
    if profile.ell < 0:
        image[Vertex(-1, 1)] = Vertex(0, rng.randrange(profile.count(0)) + 1)
    for i, ni in profile.items():
        # draw indices into the disjoint union of the levels V_{i-s}
        sizes = [(s, profile.count(i - s)) for s in sorted(step_set, reverse=True)]
        total = sum(c for _s, c in sizes)
        for k in range(1, ni + 1):
            v = Vertex(i, k)
            if v in image or v == Vertex(0, 1):
                continue
            j = rng.randrange(total)
            for s, c in sizes:
                if j < c:
                    image[v] = Vertex(i - s, j + 1)
                    break
                j -= c
    return SFunction(vset, step_set, image)


def _sample_marked_tree(step_set: StepSet, profile: Profile,
                        rng: random.Random) -> MarkedSTree:
    f = sample_sfunction(step_set, profile, _regime_of(profile), rng)
    return phi(f) if profile.ell == 0 else psi(f)


def _relabel_uniform(tree: MarkedSTree, rng: random.Random
                     ) -> EmbeddedCayleyTree:
    """Uniform renaming (swap i^1 with a uniform i^k at every abscissa) then
    a uniform order-consistent assignment of labels 1..n."""
    p = tree.profile
    rename: dict[Vertex, Vertex] = {}
    for i, ni in p.items():
        k = rng.randrange(ni) + 1
        rename[Vertex(i, 1)] = Vertex(i, k)
        rename[Vertex(i, k)] = Vertex(i, 1)
    # choose which labels land at each abscissa, uniformly
    labels = list(range(1, p.n + 1))
    rng.shuffle(labels)
    assignment: dict[Vertex, int] = {}
    start = 0
    for i, ni in p.items():
        block = sorted(labels[start:start + ni])
        start += ni
        for k, lab in enumerate(block, start=1):
            assignment[Vertex(i, k)] = lab
    out_parent: dict[int, int] = {}
    abscissa: dict[int, int] = {}
    for v in tree.vertex_set.vertices():
        w = rename.get(v, v)
        abscissa[assignment[w]] = v.i
    for v, par in tree.parent.items():
        out_parent[assignment[rename.get(v, v)]] = assignment[rename.get(par, par)]
    root_label = assignment[rename.get(tree.root, tree.root)]
    return EmbeddedCayleyTree(p.n, root_label, out_parent, abscissa,
                              tree.step_set)


def sample_embedded_cayley(step_set: StepSet, profile: Profile,
                           seed=None) -> EmbeddedCayleyTree:
    """Uniform S-embedded Cayley tree with the given profile.

    Pipeline: uniform (F)-function -> bijection -> marked S-tree -> uniform
    renaming -> uniform order-consistent labeling -> drop the mark.  Each
    embedded tree arises from n_r (resp. n_ell n_r) marked trees and each
    marked tree from n!/prod (n_i - 1)! relabelings, so the result is uniform.
    """
    validate_profile_for(step_set, profile, _regime_of(profile))
    rng = _rng(seed)
    tree = _sample_marked_tree(step_set, profile, rng)
    return _relabel_uniform(tree, rng)


def sample_sary(step_set: StepSet, profile: Profile, seed=None) -> SAryTree:
    """Uniform S-ary tree with the given profile: a uniform (F)-function
    injective on each V_i, pushed through the bijection, with names dropped."""
    validate_profile_for(step_set, profile, _regime_of(profile))
    rng = _rng(seed)
    vset = VertexSet(profile)
    image: dict[Vertex, Vertex] = {}
    for i in range(1, profile.r + 1):
        image[Vertex(i, 1)] = Vertex(i - 1, 1)
    for i in range(profile.ell, -1):
        image[Vertex(i, 1)] = Vertex(i + 1, 1)
    if profile.ell < 0:
        image[Vertex(-1, 1)] = Vertex(0, rng.randrange(profile.count(0)) + 1)
    for i, ni in profile.items():
        rest = [Vertex(i, k) for k in range(1, ni + 1) if Vertex(i, k) not in image]
        if i == 0:
            rest = [v for v in rest if v != Vertex(0, 1)]
        codomain = [w for w in allowed_images(vset, step_set, Vertex(i, 1))
                    if image.get(Vertex(i, 1)) != w]
        if len(codomain) < len(rest):
            raise InfeasibleProfile(
                f"not enough distinct images at abscissa {i}")
        chosen = rng.sample(codomain, len(rest))
        image.update(zip(rest, chosen))
    f = SFunction(vset, step_set, image)
    tree = phi(f) if profile.ell == 0 else psi(f)
    return sary_from_injective(tree)


# ---------------------------------------------------------------------------
# the exact profile law
# ---------------------------------------------------------------------------

def enumerate_profiles(n: int) -> Iterator[Profile]:
    """All profiles of total size n: compositions of n into positive parts
    with a marked part for abscissa 0."""
    def comps(total: int, parts: int):
        if parts == 1:
            yield (total,)
            return
        for first in range(1, total - parts + 2):
            for rest in comps(total - first, parts - 1):
                yield (first,) + rest

    for k in range(1, n + 1):
        for c in comps(n, k):
            for ell in range(-(k - 1), 1):
                yield Profile(c, ell=ell)


@dataclass(frozen=True)
class ProfileLaw:
    """Exact law of the vertical profile of a uniform random tree of size n:
    probability(profile) = theorem count / total count."""

    n: int
    family: str
    step_set: StepSet | None
    masses: tuple[tuple[tuple[int, tuple[int, ...]], Fraction], ...]
    total: int

    def probability(self, profile: Profile) -> Fraction:
        key = (profile.ell, profile.counts)
        for k, v in self.masses:
            if k == key:
                return v
        return Fraction(0)

    def items(self) -> Iterator[tuple[Profile, Fraction]]:
        for (ell, counts), prob in self.masses:
            yield Profile(counts, ell=ell), prob


def profile_law(n: int, family: str,
                step_set: StepSet | None = None) -> ProfileLaw:
    """The law over all profiles of size n for family "binary", "sary"
    (needs step_set), or "cayley" (needs step_set)."""
    if family == "binary":
        if n > 14:
            raise HypothesisViolation("binary profile law guard: n <= 14")
        count = formulas.count_binary_profile
        step = StepSet([-1, 1])
    elif family == "sary":
        if step_set is None:
            raise ValueError("sary law needs a step set")
        if n > 14:
            raise HypothesisViolation("S-ary profile law guard: n <= 14")
        count = lambda p: formulas.count_sary_profile(step_set, p)
        step = step_set
    elif family == "cayley":
        if step_set is None:
            raise ValueError("cayley law needs a step set")
        if n > 8:
            raise HypothesisViolation("Cayley profile law guard: n <= 8")
        count = lambda p: formulas.count_cayley_profile(step_set, p)
        step = step_set
    else:
        raise ValueError(f"unknown family {family!r}")
    if step.m < -1:
        raise HypothesisViolation(
            "profile laws need min S >= -1 (no product formula below)")

    masses = []
    total = 0
    for p in enumerate_profiles(n):
        if p.ell < 0 and step.m != -1:
            continue  # steps never decrease abscissas: no such trees
        c = count(p)
        if c:
            masses.append(((p.ell, p.counts), c))
            total += c
    law = ProfileLaw(
        n=n, family=family, step_set=step_set,
        masses=tuple(((k, Fraction(c, total)) for k, c in sorted(masses))),
        total=total)
    assert sum(prob for _k, prob in law.masses) == 1
    return law


def occupation_marginal(law: ProfileLaw, i: int) -> dict[int, Fraction]:
    """Exact distribution of n_i (the occupation count at abscissa i) under
    the law, including the mass at n_i = 0."""
    out: dict[int, Fraction] = {}
    for profile, prob in law.items():
        c = profile.count(i)
        out[c] = out.get(c, 0) + prob
    assert sum(out.values()) == 1
    return dict(sorted(out.items()))
