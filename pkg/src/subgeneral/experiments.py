"""Desk-scale experiments against the weighted height bounds.

The main experiment samples rational points on a linear subvariety X (dim n)
and, for per-place families of targets in l-subgeneral position, compares

    sum_{v in S} sum_j eps_j * lambda_{j,v}(P)   against   [(l-n+1)(n+1) + eps] h(P),

where eps_j is the exact Seshadri weight of target j.  The baseline runs the
same ledger with n+1 targets per place in general position against the bound
(n+1+eps) h(P).  Points whose ratio exceeds the bound are violators; the
scanner fits minimal linear spans through violator clusters by exact rank,
reporting candidates only (never a certified exceptional set).

chain_check verifies, point by point and place by place, the telescoping
estimate behind the main bound with a fully explicit constant:

    sum_{j=1}^{l+1} lambda_{H_j,v}(P)
        <= (l-n+1) sum_{t=1}^{n+1} lambda_{H'_t,v}(P) + K_v,

    K_v = n*log C_v + l*log B_v + n(l-n)*gamma_v,

where C_v is the chain constant of the certificate rebuilt on the family
re-sorted so that ||H_j(P)||_v ascends (the estimate is false without that
re-sorting), B_v = max_j ||H_j||_v (exactly 1 at finite places), and gamma_v
is log(M+1) at the archimedean place and 0 elsewhere.  Both sides are
compared exactly: integer valuation ledgers at finite places, rational norm
products at the archimedean place; only the reported floats are rounded.

Bulk ledgers (weighted_defect over a sample) run in double precision with
exact integer valuations at finite places; the one-point routines in the
local-value module remain the exact reference.
"""

from __future__ import annotations

import functools
import math
import random
from array import array
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd
from typing import Optional

from .errors import ArgumentError, ConfigRejectedError, DomainError, SupportError
from .jsonio import parse_rat, rat_str, stable_dumps
from .linalg import nullspace, primitive, rank_rows
from .places import Place, parse_place, valuation
from .position import check_general, check_subgeneral
from .projective import (
    LinearForm,
    LinearSubvariety,
    ProjPoint,
    point_from_canonical,
)
from .quang import (
    CombinationCertificate,
    chain_constant,
    quang_combine_cached,
    reorder_by_local_norm,
)
from .seshadri import seshadri_constant
from .weil import SubschemeSpec, Target, is_on_support, target_from_json, target_to_json


def place_sort_key(v: Place):
    return (0, 0) if v.is_archimedean else (1, v.p)


# ---------------------------------------------------------------------------
# configuration


@dataclass(frozen=True)
class ExperimentConfig:
    """Field-for-field mirror of the JSON experiment configuration."""

    variety: LinearSubvariety
    arrangements: tuple[tuple[Place, tuple[Target, ...]], ...]
    level: int
    epsilon: Fraction
    h_min: float
    h_max: float
    sample_count: Optional[int]
    seed: int
    position_asserted: bool = False
    mode: str = "lenient"
    candidate_fraction: Fraction = Fraction(1, 20)
    max_candidates: int = 10
    workers: int = 1
    excluded_supports: tuple[Target, ...] = ()

    def __post_init__(self):
        object.__setattr__(
            self,
            "arrangements",
            tuple(sorted(self.arrangements, key=lambda kv: place_sort_key(kv[0]))),
        )
        places = [v for v, _ in self.arrangements]
        if not places:
            raise ArgumentError("config needs at least one place")
        if len(set(places)) != len(places):
            raise ArgumentError("duplicate places in config")
        for _, targets in self.arrangements:
            if not targets:
                raise ArgumentError("empty target list for a place")
            for t in targets:
                if t.dim != self.variety.ambient_dim:
                    raise ArgumentError("target lives in the wrong ambient space")
        if self.epsilon <= 0:
            raise ArgumentError("epsilon must be positive")
        if self.h_min > self.h_max:
            raise ArgumentError("empty height window")
        if self.h_max > 500:
            raise ArgumentError("height window beyond supported range")
        if self.level < self.variety.dim:
            raise ArgumentError("level below dim X")
        if self.sample_count is not None and self.sample_count < 0:
            raise ArgumentError("sample_count must be >= 0 or null (exhaustive)")
        if self.mode not in ("lenient", "strict"):
            raise ArgumentError("mode must be 'lenient' or 'strict'")
        if not (0 < self.candidate_fraction <= 1):
            raise ArgumentError("candidate_fraction must lie in (0, 1]")
        if self.max_candidates < 1 or self.workers < 1:
            raise ArgumentError("max_candidates and workers must be >= 1")

    @property
    def places(self) -> tuple[Place, ...]:
        return tuple(v for v, _ in self.arrangements)

    def targets_at(self, place: Place) -> tuple[Target, ...]:
        for v, targets in self.arrangements:
            if v == place:
                return targets
        raise ArgumentError("place %s not in config" % place)

    def to_json_dict(self) -> dict:
        return {
            "ambient_dim": self.variety.ambient_dim,
            "x": self.variety.to_json(),
            "arrangements": {
                str(v): [target_to_json(t) for t in targets]
                for v, targets in self.arrangements
            },
            "l": self.level,
            "epsilon": rat_str(self.epsilon),
            "height_window": [self.h_min, self.h_max],
            "sample_count": self.sample_count,
            "seed": self.seed,
            "position_asserted": self.position_asserted,
            "mode": self.mode,
            "candidate_fraction": rat_str(self.candidate_fraction),
            "max_candidates": self.max_candidates,
            "workers": self.workers,
            "excluded_supports": [target_to_json(t) for t in self.excluded_supports],
        }

    @classmethod
    def from_json_dict(cls, data) -> "ExperimentConfig":
        variety = LinearSubvariety.from_json(data["x"])
        if "ambient_dim" in data and int(data["ambient_dim"]) != variety.ambient_dim:
            raise ArgumentError("ambient_dim disagrees with x")
        arrangements = tuple(
            (parse_place(k), tuple(target_from_json(t) for t in targets))
            for k, targets in data["arrangements"].items()
        )
        window = data["height_window"]
        count = data.get("sample_count")
        return cls(
            variety=variety,
            arrangements=arrangements,
            level=int(data["l"]),
            epsilon=parse_rat(data["epsilon"]),
            h_min=float(window[0]),
            h_max=float(window[1]),
            sample_count=None if count is None else int(count),
            seed=int(data["seed"]),
            position_asserted=bool(data.get("position_asserted", False)),
            mode=str(data.get("mode", "lenient")),
            candidate_fraction=parse_rat(data.get("candidate_fraction", "1/20")),
            max_candidates=int(data.get("max_candidates", 10)),
            workers=int(data.get("workers", 1)),
            excluded_supports=tuple(
                target_from_json(t) for t in data.get("excluded_supports", ())
            ),
        )


# ---------------------------------------------------------------------------
# sampling


@dataclass(frozen=True)
class SampleResult:
    points: tuple[ProjPoint, ...]
    partial: bool
    attempts: int


def _int_window(h_min: float, h_max: float) -> tuple[int, int]:
    """Largest integer window [lo, hi] with h_min <= log(m) <= h_max."""
    if h_max > 500:
        raise ArgumentError("height window beyond supported range")
    hi = max(int(math.exp(h_max)), 0)
    while hi >= 1 and math.log(hi) > h_max:
        hi -= 1
    while math.log(hi + 1) <= h_max:
        hi += 1
    lo = max(int(math.ceil(math.exp(h_min))), 1)
    while lo > 1 and math.log(lo - 1) >= h_min:
        lo -= 1
    while math.log(lo) < h_min:
        lo += 1
    return lo, hi


def _coprime_pairs(m: int):
    """Canonical coprime pairs (s, t) with max(|s|, |t|) == m, s-major order."""
    if m == 1:
        yield (0, 1)
    for s in range(1, m + 1):
        if s < m:
            if gcd(s, m) == 1:
                yield (s, -m)
                yield (s, m)
        else:
            for t in range(-m, m + 1):
                if gcd(m, abs(t)) == 1:
                    yield (s, t)


def _line_param_bound(basis, hi: int) -> int:
    """Parameter bound: height <= log(hi) forces max(|s|, |t|) <= bound.

    For any coordinate pair (i, j) with invertible minor, det*(s, t) is the
    adjugate times (x_i, x_j), and the coordinate content divides det, so
    max(|s|, |t|) <= rowsum(adjugate) * hi for that pair.
    """
    b1, b2 = basis
    best = None
    for i in range(len(b1)):
        for j in range(i + 1, len(b1)):
            if b1[i] * b2[j] - b1[j] * b2[i]:
                c = max(abs(b2[i]) + abs(b2[j]), abs(b1[i]) + abs(b1[j]))
                if best is None or c * hi < best:
                    best = c * hi
    if best is None:
        raise ArgumentError("degenerate kernel basis")
    return best


def _exclusion_test(excluded, mode: str):
    """Fast membership test for a list of excluded supports."""
    lin = [t.coeffs for t in excluded if isinstance(t, LinearForm)]
    rest = [t for t in excluded if not isinstance(t, LinearForm)]

    def on_excluded(pt: ProjPoint) -> bool:
        coords = pt.coords
        for cf in lin:
            if not sum(c * x for c, x in zip(cf, coords)):
                return True
        return any(is_on_support(pt, t, mode) for t in rest)

    return on_excluded


def sample_points(
    variety: LinearSubvariety,
    h_min: float,
    h_max: float,
    count: Optional[int],
    seed: int,
    excluded: tuple[Target, ...] = (),
    mode: str = "lenient",
) -> SampleResult:
    """Deterministic point sample on X within a height window.

    Curves get an exhaustive parameter sweep (count=None means every point
    in the window); higher-dimensional X gets seeded uniform draws from the
    coordinate box, deduplicated, with a bounded number of attempts.
    Points on any excluded support are skipped.
    """
    if count == 0:
        return SampleResult((), False, 0)
    lo, hi = _int_window(h_min, h_max)
    if hi < 1 or lo > hi:
        return SampleResult((), False, 0)
    on_excluded = _exclusion_test(excluded, mode)

    if variety.dim == 1:
        basis = variety.kernel_basis()
        out = []
        attempts = 0
        if variety.ambient_dim == 1:
            # the projective line itself: parameters are coordinates
            for m in range(lo, hi + 1):
                for s, t in _coprime_pairs(m):
                    attempts += 1
                    pt = point_from_canonical((s, t))
                    if not on_excluded(pt):
                        out.append(pt)
                        if count is not None and len(out) == count:
                            return SampleResult(tuple(out), False, attempts)
        else:
            b1, b2 = basis
            ncols = len(b1)
            for m in range(1, _line_param_bound(basis, hi) + 1):
                for s, t in _coprime_pairs(m):
                    attempts += 1
                    vec = tuple(s * b1[i] + t * b2[i] for i in range(ncols))
                    if not any(vec):
                        continue
                    pt = ProjPoint(vec)
                    mx = max(abs(c) for c in pt.coords)
                    if lo <= mx <= hi and not on_excluded(pt):
                        out.append(pt)
                        if count is not None and len(out) == count:
                            return SampleResult(tuple(out), False, attempts)
        return SampleResult(
            tuple(out), count is not None and len(out) < count, attempts
        )

    if count is None:
        raise ArgumentError("exhaustive sampling is only available when dim X == 1")
    rng = random.Random(seed)
    basis = variety.kernel_basis()
    ncols = variety.ambient_dim + 1
    seen = set()
    out = []
    attempts = 0
    max_attempts = 200 * count + 1000
    while len(out) < count and attempts < max_attempts:
        attempts += 1
        u = [rng.randint(-hi, hi) for _ in basis]
        vec = [0] * ncols
        for uk, b in zip(u, basis):
            if uk:
                for i in range(ncols):
                    vec[i] += uk * b[i]
        if not any(vec):
            continue
        coords = primitive(vec)
        if coords in seen:
            continue
        mx = max(abs(c) for c in coords)
        if mx < lo or mx > hi:
            continue
        pt = point_from_canonical(coords)
        if not on_excluded(pt):
            seen.add(coords)
            out.append(pt)
    return SampleResult(tuple(out), len(out) < count, attempts)


# ---------------------------------------------------------------------------
# weighted local sums (fast paths shared by both experiments)


class _Evaluator:
    """Prebaked per-config evaluation plan.

    Each distinct target is evaluated once per point; per-place terms reuse
    those integer values.  Archimedean terms run in double precision,
    finite-place terms count exact valuations.
    """

    def __init__(self, config: ExperimentConfig):
        self.mode = config.mode
        targets: list[Target] = []
        index: dict[Target, int] = {}
        # terms: (is_arch, p, log p, target slot, weight)
        self.terms = []
        for place, tlist in config.arrangements:
            is_arch = place.is_archimedean
            p = 0 if is_arch else place.p
            logp = 0.0 if is_arch else math.log(p)
            for t in tlist:
                k = index.get(t)
                if k is None:
                    k = index[t] = len(targets)
                    targets.append(t)
                w = float(seshadri_constant(t).value)
                self.terms.append((is_arch, p, logp, k, w))
        # evals: (target, (coeffs, degree, log max coeff) or None, component metas or None)
        self.evals = []
        for t in targets:
            if isinstance(t, SubschemeSpec):
                comps = tuple(
                    (c.degree, math.log(max(abs(x) for x in c.coeffs)))
                    for c in t.components
                )
                self.evals.append((t, None, comps))
            else:
                meta = (t.coeffs, t.degree, math.log(max(abs(x) for x in t.coeffs)))
                self.evals.append((t, meta, None))

    def defect(self, pt: ProjPoint) -> float:
        coords = pt.coords
        maxx = max(abs(c) for c in coords)
        log_maxx = math.log(maxx)
        values = []
        for target, meta, comps in self.evals:
            if comps is None:
                if target.degree == 1:
                    v = sum(c * x for c, x in zip(meta[0], coords))
                else:
                    v = target.evaluate(pt)
                if v == 0:
                    raise SupportError(
                        "point %s lies on %s" % (pt, target),
                        point=str(pt),
                        subject=str(target),
                    )
                values.append(v)
            else:
                vals = tuple(c.evaluate(pt) for c in target.components)
                zeros = [v == 0 for v in vals]
                if all(zeros) or (self.mode == "strict" and any(zeros)):
                    raise SupportError(
                        "point %s lies on %s" % (pt, target),
                        point=str(pt),
                        subject=str(target),
                    )
                values.append(vals)
        contributions = []
        for is_arch, p, logp, k, w in self.terms:
            _, meta, comps = self.evals[k]
            v = values[k]
            if comps is None:
                lam = self._one(v, meta[1], meta[2], is_arch, p, logp, log_maxx)
            else:
                lam = min(
                    self._one(vc, d, lmc, is_arch, p, logp, log_maxx)
                    for vc, (d, lmc) in zip(v, comps)
                    if vc != 0
                )
            contributions.append(w * lam)
        return math.fsum(contributions)

    @staticmethod
    def _one(val, degree, log_max_coeff, is_arch, p, logp, log_maxx) -> float:
        if is_arch:
            return degree * log_maxx + log_max_coeff - math.log(abs(val))
        e = 0
        v = abs(val)
        while v % p == 0:
            v //= p
            e += 1
        return e * logp


@functools.lru_cache(maxsize=64)
def _evaluator(config: ExperimentConfig) -> _Evaluator:
    return _Evaluator(config)


def weighted_defect(point: ProjPoint, config: ExperimentConfig) -> float:
    """sum over places and targets of eps_j * lambda_{j,v}(P), Seshadri-weighted."""
    return _evaluator(config).defect(point)


def _defect_batch(args):
    config, pts = args
    ev = _evaluator(config)
    out = []
    for pt in pts:
        try:
            out.append(ev.defect(pt))
        except SupportError:
            out.append(None)
    return out


# ---------------------------------------------------------------------------
# delta budget


def delta_budget(level: int, dim: int, epsilon) -> Fraction:
    """Largest dyadic delta = 1/2^k (1 <= k <= 40) with

        delta*(l-n+1) + delta*(l-n+1)*(n+1+delta) < epsilon

    checked in exact rational arithmetic.  delta is a slack parameter, so it
    is capped at 1/2 even when a huge epsilon would admit delta = 1."""
    eps = Fraction(epsilon)
    if dim < 1 or level < dim:
        raise ArgumentError("need l >= n >= 1")
    if eps <= 0:
        raise ArgumentError("epsilon must be positive")
    a = level - dim + 1
    for k in range(1, 41):
        delta = Fraction(1, 2**k)
        if delta * a + delta * a * (dim + 1 + delta) < eps:
            return delta
    raise DomainError(
        "no dyadic delta with exponent <= 40 satisfies the budget for "
        "epsilon=%s" % eps
    )


# ---------------------------------------------------------------------------
# chain check


@dataclass(frozen=True)
class ChainCheckRecord:
    point: str
    place: Place
    perm: tuple[int, ...]
    lhs: float
    rhs: float  # includes the constant
    constant_k: float
    chain_c: str  # C_v for the re-sorted certificate, as a rational string
    slack: float
    passed: bool

    def to_json_dict(self) -> dict:
        return {
            "point": self.point,
            "place": str(self.place),
            "perm": list(self.perm),
            "lhs": self.lhs,
            "rhs": self.rhs,
            "k": self.constant_k,
            "chain_c": self.chain_c,
            "slack": self.slack,
            "passed": self.passed,
        }


def chain_check(
    point: ProjPoint,
    place: Place,
    certificate: CombinationCertificate,
    arrangement=None,
) -> ChainCheckRecord:
    """Exact verification of the telescoping estimate at one (point, place).

    The family is re-sorted by ||H(P)||_v ascending, the combination is
    rebuilt on the sorted family, and both sides are compared exactly.
    Raises SupportError when P sits on an input or on a rebuilt combination;
    that makes the sample point inadmissible, not the estimate false.
    """
    forms = list(arrangement) if arrangement is not None else list(certificate.inputs)
    if sorted(f.coeffs for f in forms) != sorted(f.coeffs for f in certificate.inputs):
        raise ArgumentError("arrangement does not match the certificate inputs")
    variety = certificate.variety
    l = len(forms) - 1
    n = variety.dim
    ordering = reorder_by_local_norm(point, place, forms)
    sorted_forms = tuple(ordering.apply(forms))
    cert = quang_combine_cached(sorted_forms, variety)
    out_vals = []
    for f in cert.outputs:
        v = f.evaluate(point)
        if v == 0:
            raise SupportError(
                "point %s lies on combination %s" % (point, f),
                point=str(point),
                subject=str(f),
            )
        out_vals.append(v)
    in_vals = [f.evaluate(point) for f in forms]
    c_v = chain_constant(cert, place)
    if place.is_archimedean:
        maxx = max(abs(c) for c in point.coords)
        big_b = max(max(abs(c) for c in f.coeffs) for f in forms)
        lhs_q = Fraction(1)
        for f, v in zip(forms, in_vals):
            lhs_q *= Fraction(maxx * max(abs(c) for c in f.coeffs), abs(v))
        prod_hat = Fraction(1)
        for f, v in zip(cert.outputs, out_vals):
            prod_hat *= Fraction(maxx * max(abs(c) for c in f.coeffs), abs(v))
        k_q = (
            c_v**n
            * Fraction(big_b) ** l
            * Fraction(variety.ambient_dim + 1) ** (n * (l - n))
        )
        rhs_q = prod_hat ** (l - n + 1) * k_q
        lhs = math.log(lhs_q.numerator) - math.log(lhs_q.denominator)
        rhs = math.log(rhs_q.numerator) - math.log(rhs_q.denominator)
        k_f = math.log(k_q.numerator) - math.log(k_q.denominator)
        passed = lhs_q <= rhs_q
        ratio = rhs_q / lhs_q
        slack = math.log(ratio.numerator) - math.log(ratio.denominator)
    else:
        p = place.p
        logp = math.log(p)
        lhs_e = sum(valuation(v, p) for v in in_vals)
        hat_e = sum(valuation(v, p) for v in out_vals)
        # K_v = n*log C_v and C_v is a power of p, so log_p C_v = ord_p(C_v)
        k_e = n * valuation(c_v, p) if c_v != 1 else 0
        rhs_e = (l - n + 1) * hat_e + k_e
        lhs, rhs, k_f = lhs_e * logp, rhs_e * logp, k_e * logp
        passed = lhs_e <= rhs_e
        slack = (rhs_e - lhs_e) * logp
    return ChainCheckRecord(
        point=str(point),
        place=place,
        perm=ordering.perm,
        lhs=lhs,
        rhs=rhs,
        constant_k=k_f,
        chain_c=rat_str(c_v),
        slack=slack,
        passed=passed,
    )


# ---------------------------------------------------------------------------
# exceptional candidates


@dataclass(frozen=True)
class Candidate:
    """A linear span through a violator cluster; membership is rank-exact."""

    dim: int
    span_points: tuple[str, ...]
    defining_forms: tuple[tuple[int, ...], ...]
    members: tuple[str, ...]
    coverage: str  # fraction of all violators, canonical rational string

    def to_json_dict(self) -> dict:
        return {
            "dim": self.dim,
            "span_points": list(self.span_points),
            "defining_forms": [list(f) for f in self.defining_forms],
            "members": list(self.members),
            "coverage": self.coverage,
        }


def candidate_targets(candidates) -> tuple[Target, ...]:
    """Exclusion targets (for a re-run) matching the candidates' supports."""
    out = []
    for c in candidates:
        forms = tuple(LinearForm(f) for f in c.defining_forms)
        if len(forms) == 1:
            out.append(forms[0])
        else:
            out.append(SubschemeSpec(forms, label="candidate(dim=%d)" % c.dim))
    return tuple(out)


def exceptional_scan(
    violators,
    variety: LinearSubvariety,
    fraction: Fraction = Fraction(1, 20),
    max_candidates: int = 10,
) -> list[Candidate]:
    """Greedy cover of the violators by small linear spans.

    Spans are fitted through evenly spaced seed subsets by exact rank (a
    reported span of dimension k really is k-dimensional), qualify when they
    hold at least `fraction` of all violators, and are then picked greedily
    by uncovered gain, ties to smaller dimension, then canonical label order.
    """
    pts = sorted({str(p): p for p in violators}.items())
    total = len(pts)
    if total == 0:
        return []
    labels = [s for s, _ in pts]
    coords = [list(p.coords) for _, p in pts]
    max_dim = variety.dim - 1
    nseeds = min(total, 48)
    if nseeds == total:
        seeds = list(range(total))
    else:
        seeds = sorted({round(i * (total - 1) / (nseeds - 1)) for i in range(nseeds)})
    pool = {}
    for k in range(0, max_dim + 1):
        for subset in combinations(seeds, k + 1):
            rows = [coords[i] for i in subset]
            if rank_rows(rows) != k + 1:
                continue
            members = tuple(
                i for i in range(total) if rank_rows(rows + [coords[i]]) == k + 1
            )
            if Fraction(len(members), total) < fraction:
                continue
            key = tuple(labels[i] for i in members)
            prev = pool.get(key)
            if prev is None or k < prev[0]:
                pool[key] = (k, subset, members)
    chosen: list[Candidate] = []
    covered: set[int] = set()
    entries = sorted(pool.items())
    while entries and len(chosen) < max_candidates and len(covered) < total:
        best = None
        for key, (k, subset, members) in entries:
            gain = sum(1 for i in members if i not in covered)
            rank_key = (-gain, k, key)
            if gain > 0 and (best is None or rank_key < best[0]):
                best = (rank_key, key, k, subset, members)
        if best is None:
            break
        _, key, k, subset, members = best
        entries = [e for e in entries if e[0] != key]
        covered.update(members)
        forms = nullspace([coords[i] for i in subset], variety.ambient_dim + 1)
        chosen.append(
            Candidate(
                dim=k,
                span_points=tuple(labels[i] for i in subset),
                defining_forms=tuple(forms),
                members=key,
                coverage=rat_str(Fraction(len(members), total)),
            )
        )
    return chosen


# ---------------------------------------------------------------------------
# experiment runners


@dataclass
class DefectReport:
    kind: str  # "main" or "baseline"
    config: ExperimentConfig
    bound: Fraction
    delta: Fraction
    points: list[str]
    heights: array
    sums: array
    ratios: array
    violators: list[str]
    candidates: list[Candidate]
    unassigned: list[str]
    excluded_support: list[str]
    excluded_height: list[str]
    partial: bool
    attempts: int
    position_checks: dict
    chain_summary: dict

    @property
    def bound_float(self) -> float:
        return float(self.bound)

    def iter_records(self):
        b = self.bound_float
        for i in range(len(self.points)):
            yield {
                "point": self.points[i],
                "height": self.heights[i],
                "weighted_sum": self.sums[i],
                "ratio": self.ratios[i],
                "violator": self.ratios[i] > b,
            }

    def to_json_dict(self, include_records: bool = True) -> dict:
        out = {
            "kind": self.kind,
            "config": self.config.to_json_dict(),
            "bound": rat_str(self.bound),
            "bound_float": self.bound_float,
            "delta": rat_str(self.delta),
            "n_points": len(self.points),
            "violators": list(self.violators),
            "candidates": [c.to_json_dict() for c in self.candidates],
            "unassigned": list(self.unassigned),
            "excluded_support": list(self.excluded_support),
            "excluded_height": list(self.excluded_height),
            "partial": self.partial,
            "attempts": self.attempts,
            "position_checks": self.position_checks,
            "chain_summary": self.chain_summary,
        }
        if include_records:
            out["records"] = [
                [self.points[i], self.heights[i], self.sums[i], self.ratios[i]]
                for i in range(len(self.points))
            ]
        return out

    def to_json(self, include_records: bool = True) -> str:
        return stable_dumps(self.to_json_dict(include_records))

    def write_csv(self, fh) -> None:
        b = self.bound_float
        fh.write("point,height,weighted_sum,ratio,violator\n")
        for i in range(len(self.points)):
            fh.write(
                "%s,%r,%r,%r,%d\n"
                % (
                    self.points[i],
                    self.heights[i],
                    self.sums[i],
                    self.ratios[i],
                    self.ratios[i] > b,
                )
            )


def _validate_positions(config: ExperimentConfig, level: int, general: bool) -> dict:
    checks = {}
    for place, targets in config.arrangements:
        linear = [t for t in targets if isinstance(t, LinearForm)]
        if len(linear) == len(targets):
            report = (
                check_general(linear, config.variety)
                if general
                else check_subgeneral(linear, config.variety, level)
            )
            checks[str(place)] = {
                "verdict": report.verdict,
                "witnesses": len(report.witnesses),
                "asserted": False,
            }
            if not report.verdict:
                raise ConfigRejectedError(
                    "targets at %s fail the position check" % place, report=report
                )
        else:
            if not config.position_asserted:
                raise ConfigRejectedError(
                    "non-linear targets at %s need position_asserted=true" % place
                )
            checks[str(place)] = {"verdict": None, "witnesses": 0, "asserted": True}
    return checks


def _chain_summary(
    config: ExperimentConfig, eff_level: int, pts, cap: int = 200
) -> dict:
    """chain_check over a capped prefix of the sample, per applicable place."""
    summary = {}
    for place, targets in config.arrangements:
        key = str(place)
        if len(targets) != eff_level + 1 or not all(
            isinstance(t, LinearForm) for t in targets
        ):
            summary[key] = {"applicable": False}
            continue
        cert = quang_combine_cached(tuple(targets), config.variety)
        checked = passed = skipped = 0
        min_slack = None
        for pt in pts[:cap]:
            try:
                rec = chain_check(pt, place, cert)
            except SupportError:
                skipped += 1
                continue
            checked += 1
            passed += rec.passed
            if min_slack is None or rec.slack < min_slack:
                min_slack = rec.slack
        summary[key] = {
            "applicable": True,
            "checked": checked,
            "passed": passed,
            "support_skipped": skipped,
            "min_slack": min_slack,
        }
    return summary


def _run(
    config: ExperimentConfig, kind: str, bound: Fraction, eff_level: int, checks: dict
) -> DefectReport:
    supports = tuple(
        t for _, targets in config.arrangements for t in targets
    ) + config.excluded_supports
    sample = sample_points(
        config.variety,
        config.h_min,
        config.h_max,
        config.sample_count,
        config.seed,
        excluded=supports,
        mode=config.mode,
    )
    pts = list(sample.points)
    if config.workers > 1 and len(pts) > 1000:
        chunk = (len(pts) + 4 * config.workers - 1) // (4 * config.workers)
        batches = [(config, pts[i : i + chunk]) for i in range(0, len(pts), chunk)]
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            defects = [d for part in pool.map(_defect_batch, batches) for d in part]
    else:
        defects = _defect_batch((config, pts))
    labels = [str(p) for p in pts]
    order = sorted(range(len(pts)), key=labels.__getitem__)
    points: list[str] = []
    heights = array("d")
    sums = array("d")
    ratios = array("d")
    violators: list[str] = []
    violator_pts: list[ProjPoint] = []
    excluded_support: list[str] = []
    excluded_height: list[str] = []
    bound_f = float(bound)
    for i in order:
        d = defects[i]
        label = labels[i]
        if d is None:
            excluded_support.append(label)
            continue
        hmax = max(abs(c) for c in pts[i].coords)
        if hmax == 1:
            excluded_height.append(label)
            continue
        h = math.log(hmax)
        r = d / h
        points.append(label)
        heights.append(h)
        sums.append(d)
        ratios.append(r)
        if r > bound_f:
            violators.append(label)
            violator_pts.append(pts[i])
    candidates = exceptional_scan(
        violator_pts, config.variety, config.candidate_fraction, config.max_candidates
    )
    assigned = {m for c in candidates for m in c.members}
    unassigned = [v for v in violators if v not in assigned]
    return DefectReport(
        kind=kind,
        config=config,
        bound=bound,
        delta=delta_budget(eff_level, config.variety.dim, config.epsilon),
        points=points,
        heights=heights,
        sums=sums,
        ratios=ratios,
        violators=violators,
        candidates=candidates,
        unassigned=unassigned,
        excluded_support=excluded_support,
        excluded_height=excluded_height,
        partial=sample.partial,
        attempts=sample.attempts,
        position_checks=checks,
        chain_summary=_chain_summary(config, eff_level, pts),
    )


def run_main_experiment(config: ExperimentConfig) -> DefectReport:
    """Weighted ledger against the bound [(l-n+1)(n+1) + eps] h(P)."""
    n = config.variety.dim
    l = config.level
    checks = _validate_positions(config, l, general=False)
    bound = Fraction(l - n + 1) * (n + 1) + config.epsilon
    return _run(config, "main", bound, l, checks)


def run_evertse_ferretti_baseline(config: ExperimentConfig) -> DefectReport:
    """General-position ledger against the bound (n+1+eps) h(P).

    Every place needs exactly n+1 targets in general position on X.
    """
    n = config.variety.dim
    for place, targets in config.arrangements:
        if len(targets) != n + 1:
            raise ConfigRejectedError(
                "baseline needs exactly n+1 targets at %s (got %d)"
                % (place, len(targets))
            )
    checks = _validate_positions(config, n, general=True)
    bound = Fraction(n + 1) + config.epsilon
    return _run(config, "baseline", bound, n, checks)
