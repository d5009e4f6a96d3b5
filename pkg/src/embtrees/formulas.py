"""Closed-form counting formulas for embedded trees, in exact arithmetic.

Every operation evaluates the displayed product formula over exact rationals
and asserts integrality at the end where a count is promised.  Conventions:
empty products are 1, 0^0 = 1, and C(a, b) = 0 when b < 0 or b > a, so the
edge cases (r = 0, ell = 0, n_i = 1) evaluate without special-casing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .core import (
    BigCount,
    CVec,
    HypothesisViolation,
    IncompatibleDistribution,
    InvalidProfile,
    NonIntegerResult,
    NonSurjectiveProfile,
    NotInjective,
    Profile,
    StepSet,
    Vertex,
)

OutDist = Mapping[tuple[int, int], int]
InDist = Mapping[tuple[int, CVec], int]
CompleteDist = Mapping[tuple[int, int, CVec], int]


def comb(a: int, b: int) -> int:
    """Binomial coefficient with C(a, b) = 0 for b < 0 or b > a."""
    if b < 0 or b > a:
        return 0
    return math.comb(a, b)


def _as_int(x: Fraction, what: str) -> BigCount:
    if x.denominator != 1:
        raise NonIntegerResult(f"{what} evaluated to non-integer {x}")
    return x.numerator


def neighbor_sum(profile: Profile, step_set: StepSet, i: int) -> int:
    """sum_{s in S} n_{i-s}, with n_j = 0 outside [ell, r]."""
    return sum(profile.count(i - s) for s in step_set)


# ---------------------------------------------------------------------------
# profile formulas
# ---------------------------------------------------------------------------

def count_binary_horizontal(h: Iterable[int]) -> BigCount:
    """Binary trees with horizontal profile (1, h_1, ..., h_k):
    prod_i C(2 h_i, h_{i+1})."""
    h = list(h)
    if not h or h[0] != 1:
        raise InvalidProfile("horizontal profile must start with h_0 = 1")
    if any(c < 1 for c in h):
        raise InvalidProfile("horizontal profile counts must be positive")
    total = 1
    for a, b in zip(h, h[1:]):
        total *= comb(2 * a, b)
    return total


def count_binary_profile(profile: Profile) -> BigCount:
    """Binary trees with a given vertical profile:
    (n_0 / (n_ell n_r)) C(n_-1 + n_1, n_0 - 1)
    prod_{i != 0} C(n_{i-1} + n_{i+1} - 1, n_i - 1)."""
    p = profile
    value = Fraction(p.count(0), p.count(p.ell) * p.count(p.r))
    value *= comb(p.count(-1) + p.count(1), p.count(0) - 1)
    for i in p.abscissas():
        if i != 0:
            value *= comb(p.count(i - 1) + p.count(i + 1) - 1, p.count(i) - 1)
    return _as_int(value, "binary profile count")


def count_cayley_profile(step_set: StepSet, profile: Profile) -> BigCount:
    """S-embedded Cayley trees with a given vertical profile:
    (n_0 / (n_ell n_r)) (n! / prod (n_i - 1)!) prod_i (sum_s n_{i-s})^{n_i-1}.

    Requires min S = -1 or ell = 0.
    """
    p = profile
    _require_profile_hypotheses(step_set, p)
    value = Fraction(p.count(0), p.count(p.ell) * p.count(p.r))
    value *= math.factorial(p.n)
    for i, ni in p.items():
        value /= math.factorial(ni - 1)
        value *= neighbor_sum(p, step_set, i) ** (ni - 1)
    return _as_int(value, "Cayley profile count")


def count_sary_profile(step_set: StepSet, profile: Profile) -> BigCount:
    """S-ary trees with a given vertical profile:
    (n_0 / (n_ell n_r)) C(sum_s n_{-s}, n_0 - 1)
    prod_{i != 0} C(sum_s n_{i-s} - 1, n_i - 1)."""
    p = profile
    _require_profile_hypotheses(step_set, p)
    value = Fraction(p.count(0), p.count(p.ell) * p.count(p.r))
    value *= comb(neighbor_sum(p, step_set, 0), p.count(0) - 1)
    for i, ni in p.items():
        if i != 0:
            value *= comb(neighbor_sum(p, step_set, i) - 1, ni - 1)
    return _as_int(value, "S-ary profile count")


def _require_profile_hypotheses(step_set: StepSet, profile: Profile) -> None:
    if profile.ell < 0 and step_set.m != -1:
        raise HypothesisViolation(
            f"profile with ell = {profile.ell} < 0 needs min S = -1, "
            f"got min S = {step_set.m}")


# ---------------------------------------------------------------------------
# out-type formulas
# ---------------------------------------------------------------------------

def profile_of_out_dist(out: OutDist) -> Profile:
    """Profile determined by an out-distribution: n_i = chi_{i=0} + sum_s n(i,s)."""
    counts: dict[int, int] = {0: 1}
    for (i, _s), c in out.items():
        if c < 0:
            raise IncompatibleDistribution("negative out count")
        if c:
            counts[i] = counts.get(i, 0) + c
    lo, hi = min(counts), max(counts)
    if any(counts.get(i, 0) == 0 for i in range(lo, hi + 1)):
        raise IncompatibleDistribution(
            "out counts leave an empty abscissa inside [ell, r]")
    return Profile([counts[i] for i in range(lo, hi + 1)], ell=lo)


def _check_out_dist(step_set: StepSet, out: OutDist) -> Profile:
    prof = profile_of_out_dist(out)
    for (i, s), c in out.items():
        if c == 0:
            continue
        if s not in step_set:
            raise IncompatibleDistribution(f"out-type ({i};{s}) uses step outside S")
        if not (prof.ell <= i - s <= prof.r):
            raise IncompatibleDistribution(
                f"out-type ({i};{s}) points outside [ell, r]")
    if prof.ell < 0 and step_set.m != -1:
        raise HypothesisViolation(
            "out counts at negative abscissas need min S = -1")
    return prof


def _c_of(out: OutDist, step_set: StepSet, i: int) -> int:
    """c(i) = sum_s n(i+s, s): vertices whose parent lies at abscissa i."""
    return sum(out.get((i + s, s), 0) for s in step_set)


def count_cayley_out(step_set: StepSet, out: OutDist) -> BigCount:
    """S-embedded Cayley trees with n(i,s) non-root vertices of out-type (i;s):
    n! prod_i n_i^{c(i)-1} prod_{i<0} n(i,-1) prod_{i>0} n(i,1) / prod n(i,s)!."""
    prof = _check_out_dist(step_set, out)
    value = Fraction(math.factorial(prof.n))
    for i, ni in prof.items():
        value *= Fraction(ni) ** (_c_of(out, step_set, i) - 1)
    for i in range(prof.ell, 0):
        value *= out.get((i, -1), 0)
    for i in range(1, prof.r + 1):
        value *= out.get((i, 1), 0)
    for c in out.values():
        value /= math.factorial(c)
    return _as_int(value, "Cayley out-type count")


def count_sary_out(step_set: StepSet, out: OutDist) -> BigCount:
    """S-ary trees with n(i,s) non-root vertices of out-type (i;s):
    (prod_{i<0} n(i,-1) prod_{i>0} n(i,1) / prod_i n_i) prod C(n_{i-s}, n(i,s))."""
    prof = _check_out_dist(step_set, out)
    value = Fraction(1)
    for i in range(prof.ell, 0):
        value *= out.get((i, -1), 0)
    for i in range(1, prof.r + 1):
        value *= out.get((i, 1), 0)
    for _i, ni in prof.items():
        value /= ni
    for (i, s), c in out.items():
        value *= comb(prof.count(i - s), c)
    return _as_int(value, "S-ary out-type count")


@dataclass(frozen=True)
class WeightAssignment:
    """Exact rational weights x_{i,s} on out-types, defaulting to 1."""

    weights: tuple[tuple[tuple[int, int], Fraction], ...] = ()

    @staticmethod
    def of(mapping: Mapping[tuple[int, int], Fraction | int]) -> "WeightAssignment":
        return WeightAssignment(tuple(sorted(
            ((i, s), Fraction(w)) for (i, s), w in mapping.items())))

    def get(self, i: int, s: int) -> Fraction:
        for (j, t), w in self.weights:
            if (j, t) == (i, s):
                return w
        return Fraction(1)


def eval_out_gf(step_set: StepSet, profile: Profile,
                weights: WeightAssignment | Mapping | None = None) -> Fraction:
    """Generating function of S-embedded Cayley trees with the given profile,
    x_{i,s} marking vertices of out-type (i;s):
    (n_0/(n_ell n_r)) (n!/prod (n_i-1)!) prod_{i<0} x_{i,-1} prod_{i>0} x_{i,1}
    prod_i (sum_s n_{i-s} x_{i,s})^{n_i-1}."""
    p = profile
    _require_profile_hypotheses(step_set, p)
    if weights is None:
        weights = WeightAssignment()
    elif not isinstance(weights, WeightAssignment):
        weights = WeightAssignment.of(weights)
    value = Fraction(p.count(0), p.count(p.ell) * p.count(p.r))
    value *= math.factorial(p.n)
    for i in range(p.ell, 0):
        value *= weights.get(i, -1)
    for i in range(1, p.r + 1):
        value *= weights.get(i, 1)
    for i, ni in p.items():
        value /= math.factorial(ni - 1)
        value *= sum(p.count(i - s) * weights.get(i, s) for s in step_set) ** (ni - 1)
    return value


# ---------------------------------------------------------------------------
# in-type formulas
# ---------------------------------------------------------------------------

def _check_in_dist(step_set: StepSet, inn: InDist) -> tuple[Profile, int]:
    """Validate an in-distribution against S = [m, 1]; return (profile, m)."""
    if not step_set.is_interval():
        raise HypothesisViolation(
            f"in-type counting needs an interval step set [m, 1], got {step_set}; "
            "embed sparse step sets first")
    m = step_set.m
    width = 1 - m + 1
    counts: dict[int, int] = {}
    for (i, cv), c in inn.items():
        if c < 0:
            raise IncompatibleDistribution("negative in count")
        if len(cv) != width:
            raise IncompatibleDistribution(
                f"c-vector {cv} must be dense over steps {m}..1")
        if c:
            counts[i] = counts.get(i, 0) + c
    if not counts:
        raise IncompatibleDistribution("empty in-distribution")
    lo, hi = min(counts), max(counts)
    if not (lo <= 0 <= hi) or any(counts.get(i, 0) == 0 for i in range(lo, hi + 1)):
        raise IncompatibleDistribution("in counts leave an empty abscissa")
    prof = Profile([counts[i] for i in range(lo, hi + 1)], ell=lo)
    for i in range(lo - 1, hi + 2):
        lhs = 1 if i == 0 else 0
        for (j, cv), c in inn.items():
            if c == 0:
                continue
            for idx, cs in enumerate(cv):
                if j + m + idx == i:
                    lhs += cs * c
        if lhs != prof.count(i):
            raise IncompatibleDistribution(
                f"in-distribution incompatible at abscissa {i}")
    if lo < 0 and m != -1:
        raise HypothesisViolation("in counts at negative abscissas need m = -1")
    return prof, m


def _in_derived(inn: InDist, m: int):
    """n_s(b) and n(i,s) derived from an in-distribution."""
    nsb: dict[tuple[int, int], int] = {}
    out: dict[tuple[int, int], int] = {}
    for (i, cv), c in inn.items():
        if c == 0:
            continue
        for idx, b in enumerate(cv):
            s = m + idx
            nsb[(s, b)] = nsb.get((s, b), 0) + c
            if b:
                out[(i + s, s)] = out.get((i + s, s), 0) + b * c
    return nsb, out


def count_cayley_in(step_set: StepSet, inn: InDist) -> BigCount:
    """S-embedded Cayley trees (S = [m, 1]) with n(i,c) vertices of in-type
    (i;c): n! prod (n_i-1)! prod_{i<0} n(i,-1) prod_{i>0} n(i,1)
    / (prod n(i,c)! prod_{b,s} b!^{n_s(b)})."""
    prof, m = _check_in_dist(step_set, inn)
    nsb, out = _in_derived(inn, m)
    value = Fraction(math.factorial(prof.n))
    for _i, ni in prof.items():
        value *= math.factorial(ni - 1)
    for i in range(prof.ell, 0):
        value *= out.get((i, -1), 0)
    for i in range(1, prof.r + 1):
        value *= out.get((i, 1), 0)
    for c in inn.values():
        value /= math.factorial(c)
    for (_s, b), cnt in nsb.items():
        value /= Fraction(math.factorial(b)) ** cnt
    return _as_int(value, "Cayley in-type count")


def count_sary_in(step_set: StepSet, inn: InDist) -> BigCount:
    """S-ary trees with a prescribed in-type distribution: the Cayley count
    divided by n! (trees with all c-components <= 1 are injective)."""
    for (i, cv), c in inn.items():
        if c and any(b > 1 for b in cv):
            raise NotInjective(f"in-type ({i};{cv}) has a component > 1")
    prof, _m = _check_in_dist(step_set, inn)
    total = count_cayley_in(step_set, inn)
    value = Fraction(total, math.factorial(prof.n))
    return _as_int(value, "S-ary in-type count")


# ---------------------------------------------------------------------------
# complete-type formula
# ---------------------------------------------------------------------------

def _check_complete_dist(step_set: StepSet, root_in: CVec,
                         comp: CompleteDist) -> tuple[Profile, int]:
    m = step_set.m
    expected = tuple(range(m, 0)) + (1,)
    if 0 in step_set or step_set.steps != expected:
        raise HypothesisViolation(
            f"complete-type counting needs S = [m,-1] union {{1}}, got {step_set}")
    width = 1 - m + 1
    if len(root_in) != width or any(root_in[:-1]):
        raise HypothesisViolation(
            f"root in-type must be (0,...,0,c0^1), got {root_in}")
    counts: dict[int, int] = {0: 1}
    for (i, s, cv), c in comp.items():
        if c < 0:
            raise IncompatibleDistribution("negative complete count")
        if c == 0:
            continue
        if i < 0:
            raise HypothesisViolation("complete counts must vanish at i < 0")
        if len(cv) != width:
            raise IncompatibleDistribution(f"c-vector {cv} must be dense over {m}..1")
        if 0 >= m and cv[0 - m] != 0:
            raise HypothesisViolation("complete counts must have c^0 = 0")
        if s not in step_set:
            raise IncompatibleDistribution(f"out step {s} outside S")
        counts[i] = counts.get(i, 0) + c
    lo, hi = min(counts), max(counts)
    if any(counts.get(i, 0) == 0 for i in range(lo, hi + 1)):
        raise IncompatibleDistribution("complete counts leave an empty abscissa")
    prof = Profile([counts[i] for i in range(lo, hi + 1)], ell=lo)
    if prof.r == 0:
        if prof.n != 1 or any(root_in):
            raise HypothesisViolation(
                "r = 0 is supported only for the single-vertex tree")
        return prof, m
    # chi_{i=s} c0^s + sum_{t,c} c^s n(i-s,t,c) = sum_c n(i,s,c)
    pairs = {(i, s) for (i, s, _cv) in comp}
    for (j, _t, cv) in comp:
        for idx, b in enumerate(cv):
            if b:
                pairs.add((j + m + idx, m + idx))
    if root_in[-1]:
        pairs.add((1, 1))
    for (i, s) in pairs:
        lhs = root_in[s - m] if i == s else 0
        for (j, _t, cv), c in comp.items():
            if j == i - s:
                lhs += cv[s - m] * c
        rhs = sum(c for (j, t, _cv), c in comp.items() if (j, t) == (i, s))
        if lhs != rhs:
            raise IncompatibleDistribution(
                f"complete distribution incompatible at out-type ({i};{s})")
    return prof, m


def count_cayley_complete(step_set: StepSet, root_in: CVec,
                          comp: CompleteDist) -> BigCount:
    """Non-negative S-embedded Cayley trees (S = [m,-1] union {1}) whose root
    has in-type (0;c_0) and which have n(i,s,c) non-root vertices of complete
    type (i;s;c):

    c_0^1 n! prod n(i,s)! prod_{i=1}^{r-1} (sum_b b n_1(i,1,b))
    / (prod n(i,s,c)! prod_{i>0} n(i,1) prod_{b,s} b!^{n_s(b)}).
    """
    prof, m = _check_complete_dist(step_set, root_in, comp)
    if prof.r == 0:
        return 1
    out: dict[tuple[int, int], int] = {}
    nsb: dict[tuple[int, int], int] = {}
    n1ib: dict[tuple[int, int], int] = {}
    for (i, s, cv), c in comp.items():
        if c == 0:
            continue
        out[(i, s)] = out.get((i, s), 0) + c
        for idx, b in enumerate(cv):
            t = m + idx
            nsb[(t, b)] = nsb.get((t, b), 0) + c
        if s == 1:
            b = cv[1 - m]
            n1ib[(i, b)] = n1ib.get((i, b), 0) + c
    nsb[(1, root_in[1 - m])] = nsb.get((1, root_in[1 - m]), 0) + 1

    value = Fraction(root_in[1 - m])
    value *= math.factorial(prof.n)
    for cnt in out.values():
        value *= math.factorial(cnt)
    for i in range(1, prof.r):
        value *= sum(b * n1ib.get((i, b), 0) for b in range(1, prof.n + 1))
    for c in comp.values():
        value /= math.factorial(c)
    for i in range(1, prof.r + 1):
        ni1 = out.get((i, 1), 0)
        if ni1 == 0:
            return 0  # no vertex of out-type (i;1): no such tree exists
        value /= ni1
    for (_s, b), cnt in nsb.items():
        value /= Fraction(math.factorial(b)) ** cnt
    return _as_int(value, "Cayley complete-type count")


# ---------------------------------------------------------------------------
# function-family counts (the lemma side of the bijections)
# ---------------------------------------------------------------------------

def count_function_family(kind: str, regime: str, step_set: StepSet, *,
                          profile: Profile | None = None,
                          out: OutDist | None = None,
                          inn: InDist | None = None,
                          complete: CompleteDist | None = None,
                          vertex_in_types: Mapping[Vertex, CVec] | None = None,
                          root_in: CVec | None = None) -> BigCount:
    """Number of S-functions on V \\ {0^1} satisfying (F), under a constraint.

    kinds: profile, injective_profile, out_fixed, out_counted,
    injective_out_fixed, injective_out_counted, in_fixed, in_counted,
    complete_fixed, complete_counted.  The *_fixed kinds prescribe the type
    of every vertex; the *_counted kinds prescribe only the number of
    vertices of each type.  in_fixed with regime="general" counts the relaxed
    family where f(-1^1) need not land in V_0.
    """
    if regime not in ("nonneg", "general"):
        raise ValueError(f"unknown regime {regime!r}")
    dispatch = {
        "profile": _ff_profile,
        "injective_profile": _ff_injective_profile,
        "out_fixed": _ff_out_fixed,
        "out_counted": _ff_out_counted,
        "injective_out_fixed": _ff_injective_out_fixed,
        "injective_out_counted": _ff_injective_out_counted,
        "in_fixed": _ff_in_fixed,
        "in_counted": _ff_in_counted,
        "complete_fixed": _ff_complete_fixed,
        "complete_counted": _ff_complete_counted,
    }
    if kind not in dispatch:
        raise ValueError(f"unknown kind {kind!r}")
    return dispatch[kind](regime, step_set, profile=profile, out=out, inn=inn,
                          complete=complete, vertex_in_types=vertex_in_types,
                          root_in=root_in)


def _general_ok(regime: str, step_set: StepSet, ell: int) -> None:
    if regime == "nonneg" and ell != 0:
        raise HypothesisViolation("nonneg regime needs ell = 0")
    if ell < 0 and step_set.m != -1:
        raise HypothesisViolation("ell < 0 needs min S = -1")


def _ff_profile(regime, step_set, *, profile, **_kw) -> BigCount:
    p = profile
    _general_ok(regime, step_set, p.ell)
    value = p.count(0) if p.ell < 0 else 1
    for i, ni in p.items():
        value *= neighbor_sum(p, step_set, i) ** (ni - 1)
    return value


def _ff_injective_profile(regime, step_set, *, profile, **_kw) -> BigCount:
    p = profile
    _general_ok(regime, step_set, p.ell)
    if p.ell == 0:
        value = comb(neighbor_sum(p, step_set, 0), p.count(0) - 1)
        for i in range(1, p.r + 1):
            value *= comb(neighbor_sum(p, step_set, i) - 1, p.count(i) - 1)
    else:
        value = p.count(0) * comb(neighbor_sum(p, step_set, 0), p.count(0) - 1)
        for i in p.abscissas():
            if i != 0:
                value *= comb(neighbor_sum(p, step_set, i) - 1, p.count(i) - 1)
    for _i, ni in p.items():
        value *= math.factorial(ni - 1)
    return value


def _ff_out_fixed(regime, step_set, *, out, **_kw) -> BigCount:
    prof = _check_out_dist(step_set, out)
    _general_ok(regime, step_set, prof.ell)
    value = prof.count(prof.r)
    if prof.ell < 0:
        value *= prof.count(prof.ell)
    for i, ni in prof.items():
        value *= Fraction(ni) ** (_c_of(out, step_set, i) - 1)
    return _as_int(Fraction(value), "out_fixed function count")


def _ff_out_counted(regime, step_set, *, out, **_kw) -> BigCount:
    prof = _check_out_dist(step_set, out)
    _general_ok(regime, step_set, prof.ell)
    value = Fraction(prof.count(prof.r))
    if prof.ell < 0:
        value *= prof.count(prof.ell)
    for i, ni in prof.items():
        value *= math.factorial(ni - 1)
        value *= Fraction(ni) ** (_c_of(out, step_set, i) - 1)
    for i in range(prof.ell, 0):
        value *= out.get((i, -1), 0)
    for i in range(1, prof.r + 1):
        value *= out.get((i, 1), 0)
    for c in out.values():
        value /= math.factorial(c)
    return _as_int(value, "out_counted function count")


def _ff_injective_out_fixed(regime, step_set, *, out, **_kw) -> BigCount:
    prof = _check_out_dist(step_set, out)
    _general_ok(regime, step_set, prof.ell)
    value = Fraction(1)
    lo = prof.ell + 1 if prof.ell < 0 else 0
    hi = prof.r - 1
    for i in range(lo, hi + 1):
        value /= prof.count(i)
    for (i, s), c in out.items():
        value *= math.factorial(c) * comb(prof.count(i - s), c)
    return _as_int(value, "injective_out_fixed function count")


def _ff_injective_out_counted(regime, step_set, *, out, **_kw) -> BigCount:
    prof = _check_out_dist(step_set, out)
    _general_ok(regime, step_set, prof.ell)
    value = Fraction(1)
    for _i, ni in prof.items():
        value *= math.factorial(ni - 1)
    for i in range(prof.ell, 0):
        value *= out.get((i, -1), 0)
    for i in range(1, prof.r + 1):
        value *= out.get((i, 1), 0)
    lo = prof.ell + 1 if prof.ell < 0 else 0
    for i in range(lo, prof.r):
        value /= prof.count(i)
    for (i, s), c in out.items():
        value *= comb(prof.count(i - s), c)
    return _as_int(value, "injective_out_counted function count")


def _ff_in_fixed(regime, step_set, *, vertex_in_types, **_kw) -> BigCount:
    """Prescribed in-type for every vertex (Lemma side; for the general regime
    this counts the relaxed family where f(-1^1) may leave V_0)."""
    if not step_set.is_interval():
        raise HypothesisViolation("in-type counting needs an interval step set")
    m = step_set.m
    counts: dict[int, int] = {}
    for v in vertex_in_types:
        counts[v.i] = counts.get(v.i, 0) + 1
    lo, hi = min(counts), max(counts)
    prof = Profile([counts.get(i, 0) for i in range(lo, hi + 1)], ell=lo)
    _general_ok(regime, step_set, prof.ell)
    value = Fraction(1)
    if prof.ell < 0:
        value *= prof.count(-1)
    for _i, ni in prof.items():
        value *= math.factorial(ni - 1)
    nsb: dict[tuple[int, int], int] = {}
    for v, cv in vertex_in_types.items():
        for idx, b in enumerate(cv):
            nsb[(m + idx, b)] = nsb.get((m + idx, b), 0) + 1
    for (_s, b), cnt in nsb.items():
        value /= Fraction(math.factorial(b)) ** cnt
    for i in range(0, prof.r):
        value *= vertex_in_types[Vertex(i, 1)][1 - m]
    for i in range(prof.ell + 1, 0):
        value *= vertex_in_types[Vertex(i, 1)][-1 - m]
    return _as_int(value, "in_fixed function count")


def _ff_in_counted(regime, step_set, *, inn, **_kw) -> BigCount:
    prof, m = _check_in_dist(step_set, inn)
    _general_ok(regime, step_set, prof.ell)
    nsb, out = _in_derived(inn, m)
    value = Fraction(prof.count(prof.r))
    if prof.ell < 0:
        value *= prof.count(prof.ell)
    for _i, ni in prof.items():
        value *= math.factorial(ni - 1) ** 2
    for i in range(prof.ell, 0):
        value *= out.get((i, -1), 0)
    for i in range(1, prof.r + 1):
        value *= out.get((i, 1), 0)
    for c in inn.values():
        value /= math.factorial(c)
    for (_s, b), cnt in nsb.items():
        value /= Fraction(math.factorial(b)) ** cnt
    return _as_int(value, "in_counted function count")


def _ff_complete_fixed(regime, step_set, *, vertex_in_types, out, **_kw) -> BigCount:
    """Prescribed complete type for every vertex: in-types per vertex plus the
    induced out-distribution (nonneg, 0 not in S)."""
    if regime != "nonneg":
        raise HypothesisViolation("complete-type counting is nonneg only")
    m = step_set.m
    expected = tuple(range(m, 0)) + (1,)
    if step_set.steps != expected:
        raise HypothesisViolation("complete-type counting needs S = [m,-1] union {1}")
    counts: dict[int, int] = {}
    for v in vertex_in_types:
        counts[v.i] = counts.get(v.i, 0) + 1
    lo, hi = min(counts), max(counts)
    prof = Profile([counts.get(i, 0) for i in range(lo, hi + 1)], ell=lo)
    value = Fraction(1)
    for cnt in out.values():
        value *= math.factorial(cnt)
    nsb: dict[tuple[int, int], int] = {}
    for _v, cv in vertex_in_types.items():
        for idx, b in enumerate(cv):
            nsb[(m + idx, b)] = nsb.get((m + idx, b), 0) + 1
    for (_s, b), cnt in nsb.items():
        value /= Fraction(math.factorial(b)) ** cnt
    for i in range(1, prof.r + 1):
        ni1 = out.get((i, 1), 0)
        if ni1 == 0:
            return 0
        value /= ni1
    for i in range(0, prof.r):
        value *= vertex_in_types[Vertex(i, 1)][1 - m]
    return _as_int(value, "complete_fixed function count")


def _ff_complete_counted(regime, step_set, *, complete, root_in, **_kw) -> BigCount:
    if regime != "nonneg":
        raise HypothesisViolation("complete-type counting is nonneg only")
    prof, m = _check_complete_dist(step_set, root_in, complete)
    if prof.r == 0:
        return 1
    out: dict[tuple[int, int], int] = {}
    nsb: dict[tuple[int, int], int] = {}
    n1ib: dict[tuple[int, int], int] = {}
    for (i, s, cv), c in complete.items():
        if c == 0:
            continue
        out[(i, s)] = out.get((i, s), 0) + c
        for idx, b in enumerate(cv):
            nsb[(m + idx, b)] = nsb.get((m + idx, b), 0) + c
        if s == 1:
            n1ib[(i, cv[1 - m])] = n1ib.get((i, cv[1 - m]), 0) + c
    nsb[(1, root_in[1 - m])] = nsb.get((1, root_in[1 - m]), 0) + 1
    value = Fraction(root_in[1 - m]) * prof.count(prof.r)
    for _i, ni in prof.items():
        value *= math.factorial(ni - 1)
    for cnt in out.values():
        value *= math.factorial(cnt)
    for i in range(1, prof.r):
        value *= sum(b * n1ib.get((i, b), 0) for b in range(1, prof.n + 1))
    for c in complete.values():
        value /= math.factorial(c)
    for (_s, b), cnt in nsb.items():
        value /= Fraction(math.factorial(b)) ** cnt
    for i in range(1, prof.r + 1):
        ni1 = out.get((i, 1), 0)
        if ni1 == 0:
            return 0
        value /= ni1
    return _as_int(value, "complete_counted function count")


# ---------------------------------------------------------------------------
# product formulas beyond min S = -1 (two explicit cases)
# ---------------------------------------------------------------------------

def count_cayley_profile_ell1(step_set: StepSet, profile: Profile) -> BigCount:
    """S-embedded Cayley trees with ell = -1 (any S with max S = 1):
    (n!/prod n_i!) prod_{i=0}^{r-1} n_i prod_i (sum_s n_{i-s})^{n_i-1}
    (sum_{s<=-1} n_{-s-1})."""
    p = profile
    if p.ell != -1:
        raise HypothesisViolation(f"this formula needs ell = -1, got {p.ell}")
    value = Fraction(math.factorial(p.n))
    for _i, ni in p.items():
        value /= math.factorial(ni)
    for i in range(0, p.r):
        value *= p.count(i)
    for i, ni in p.items():
        value *= neighbor_sum(p, step_set, i) ** (ni - 1)
    value *= sum(p.count(-s - 1) for s in step_set if s <= -1)
    return _as_int(value, "ell = -1 profile count")


def count_cayley_profile_ell2(step_set: StepSet, profile: Profile) -> BigCount:
    """S-embedded Cayley trees with ell = -2:
    the same product with bracket n_-2 sum_{s<=-2} n_{-s-2}
    + (sum_{s<=-1} n_{-s-2})(sum_{s<=-1} n_{-s-1})."""
    p = profile
    if p.ell != -2:
        raise HypothesisViolation(f"this formula needs ell = -2, got {p.ell}")
    value = Fraction(math.factorial(p.n))
    for _i, ni in p.items():
        value /= math.factorial(ni)
    for i in range(0, p.r):
        value *= p.count(i)
    for i, ni in p.items():
        value *= neighbor_sum(p, step_set, i) ** (ni - 1)
    bracket = p.count(-2) * sum(p.count(-s - 2) for s in step_set if s <= -2)
    bracket += (sum(p.count(-s - 2) for s in step_set if s <= -1)
                * sum(p.count(-s - 1) for s in step_set if s <= -1))
    value *= bracket
    return _as_int(value, "ell = -2 profile count")


# ---------------------------------------------------------------------------
# trees embedded in trees
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TargetTree:
    """A finite rooted tree of abscissas with positive multiplicities.

    counts[i] is the number of vertices that must sit at abscissa-node i; all
    counts are positive (the embedding is surjective).  A single-node target
    is treated as self-adjacent, so its embedded trees are all rooted Cayley
    trees.
    """

    nodes: tuple[int, ...]
    root: int
    edges: tuple[tuple[int, int], ...]
    counts: tuple[tuple[int, int], ...]

    @staticmethod
    def of(root: int, edges: Iterable[tuple[int, int]],
           counts: Mapping[int, int]) -> "TargetTree":
        edges = tuple(sorted(tuple(sorted(e)) for e in edges))
        nodes = tuple(sorted(counts))
        t = TargetTree(nodes, root, edges, tuple(sorted(counts.items())))
        t._validate()
        return t

    def _validate(self) -> None:
        nodes = set(self.nodes)
        if self.root not in nodes:
            raise InvalidProfile("root must be a target node")
        if any(c < 1 for _i, c in self.counts):
            raise NonSurjectiveProfile("all target multiplicities must be positive")
        if len(self.edges) != len(nodes) - 1:
            raise InvalidProfile("target must be a tree")
        if len(nodes) > 1:
            reached = {self.root}
            frontier = [self.root]
            adj = self.adjacency()
            while frontier:
                v = frontier.pop()
                for w in adj[v]:
                    if w not in reached:
                        reached.add(w)
                        frontier.append(w)
            if reached != nodes:
                raise InvalidProfile("target must be connected")

    def adjacency(self) -> dict[int, list[int]]:
        adj: dict[int, list[int]] = {i: [] for i in self.nodes}
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        if len(self.nodes) == 1:
            adj[self.root].append(self.root)
        return adj

    def count(self, i: int) -> int:
        return dict(self.counts)[i]

    @property
    def n(self) -> int:
        return sum(c for _i, c in self.counts)


def count_tree_in_tree(target: TargetTree) -> BigCount:
    """Surjective target-embedded Cayley trees with the given multiplicities:
    n_rho (n!/prod n_i!) prod_i ((sum_{j~i} n_j)^{n_i-1} n_i^{deg(i)-1})."""
    t = target
    if len(t.nodes) == 1:
        return t.n ** (t.n - 1)  # every rooted Cayley tree embeds
    adj = t.adjacency()
    value = Fraction(t.count(t.root)) * math.factorial(t.n)
    for i, ni in t.counts:
        value /= math.factorial(ni)
        value *= sum(t.count(j) for j in adj[i]) ** (ni - 1)
        value *= Fraction(ni) ** (len(adj[i]) - 1)
    return _as_int(value, "tree-in-tree count")
