"""Subgeneral and general position checks for hyperplane arrangements.

A family of hyperplanes H_1..H_q is in l-subgeneral position on a linear
subvariety X of dimension n when every subfamily J with #J <= l+1 satisfies

    dim( (intersect_{j in J} Supp H_j) intersect X ) <= l - #J,

with dim(empty) = -1.  General position is the case l = n.  All dimensions
come from exact ranks over Q, so verdicts carry no numerical caveats.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .errors import ArgumentError
from .linalg import rank_rows
from .projective import LinearForm, LinearSubvariety
from .jsonio import stable_dumps


@dataclass(frozen=True)
class Witness:
    """One violating subfamily: indices are 1-based into the arrangement."""

    subset: tuple[int, ...]
    dim: int
    allowed: int

    def to_json_dict(self) -> dict:
        return {"subset": list(self.subset), "dim": self.dim, "allowed": self.allowed}


@dataclass(frozen=True)
class PositionReport:
    verdict: bool
    level: int
    q: int
    variety: LinearSubvariety
    witnesses: tuple[Witness, ...] = field(default_factory=tuple)
    complete: bool = True  # False when verdict-only mode stopped early

    def to_json_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "level": self.level,
            "q": self.q,
            "x": self.variety.to_json(),
            "witnesses": [w.to_json_dict() for w in self.witnesses],
            "complete": self.complete,
        }

    def to_json(self) -> str:
        return stable_dumps(self.to_json_dict())


def intersection_dim(forms, variety: LinearSubvariety) -> int:
    """Projective dimension of (common zero locus of forms) meet X; -1 if empty."""
    forms = list(forms)
    for f in forms:
        if f.dim != variety.ambient_dim:
            raise ArgumentError("form lives in the wrong ambient space")
    rows = [f.coeffs for f in variety.forms] + [f.coeffs for f in forms]
    return variety.ambient_dim - rank_rows(rows)


def _violations(forms, variety, level, verdict_only):
    base = [list(f.coeffs) for f in variety.forms]
    rows = [list(f.coeffs) for f in forms]
    ambient = variety.ambient_dim
    q = len(rows)
    witnesses = []
    for size in range(1, min(level + 1, q) + 1):
        allowed = level - size
        for subset in combinations(range(q), size):
            dim = ambient - rank_rows(base + [rows[j] for j in subset])
            if dim > allowed:
                witnesses.append(Witness(tuple(j + 1 for j in subset), dim, allowed))
                if verdict_only:
                    return witnesses, False
    return witnesses, True


def check_subgeneral(
    forms, variety: LinearSubvariety, level: int, verdict_only: bool = False
) -> PositionReport:
    """Full l-subgeneral position report with all violating witnesses.

    Witnesses come out smallest subfamily first, then lexicographically.
    verdict_only stops at the first violation (complete=False in that case).
    """
    forms = list(forms)
    if not forms:
        raise ArgumentError("need at least one form")
    for f in forms:
        if not isinstance(f, LinearForm):
            raise ArgumentError("position checks take linear forms only")
        if f.dim != variety.ambient_dim:
            raise ArgumentError("form lives in the wrong ambient space")
    if level < variety.dim:
        raise ArgumentError(
            "level l=%d below dim X=%d; the position notion needs l >= dim X"
            % (level, variety.dim)
        )
    witnesses, complete = _violations(forms, variety, level, verdict_only)
    return PositionReport(
        verdict=not witnesses,
        level=level,
        q=len(forms),
        variety=variety,
        witnesses=tuple(witnesses),
        complete=complete or not witnesses,
    )


def check_general(forms, variety: LinearSubvariety, verdict_only: bool = False) -> PositionReport:
    """General position == dim(X)-subgeneral position."""
    return check_subgeneral(forms, variety, variety.dim, verdict_only=verdict_only)


def violations_at(forms, variety: LinearSubvariety, level: int) -> tuple[Witness, ...]:
    """Raw subset sweep at any level, without the l >= dim X gate.

    Useful for strictness probes: a family is *strictly* l-subgeneral when
    violations_at(l) is empty and violations_at(l-1) is not.
    """
    if level < 0:
        raise ArgumentError("level must be >= 0")
    witnesses, _ = _violations(list(forms), variety, level, False)
    return tuple(witnesses)
