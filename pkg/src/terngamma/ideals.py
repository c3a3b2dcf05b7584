"""Gamma-ideals, prime ideals, and the spectrum of a finite structure.

Conventions (recorded in every report):
  * every ideal is required to contain 0, so that V({0}) is the whole
    spectrum;
  * ideals are proper subsets, so the full carrier is never a point.

Subsets are enumerated as bitmasks in increasing mask order, which makes
witness selection and the ordering of the prime list deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import PreconditionError, ResourceError
from .structures import GammaSemiring

CONVENTIONS = {
    "zero_in_every_ideal": True,
    "ideals_are_proper": True,
}

DEFAULT_SPEC_CARRIER_BOUND = 16


@dataclass(frozen=True)
class SubsetVerdict:
    """Outcome of the ideal (or prime) predicate with per-flag detail."""

    members: tuple[int, ...]
    contains_zero: bool
    additively_closed: bool
    absorbing: bool
    proper: bool
    verdict: bool
    witness: dict | None = None

    def as_dict(self) -> dict:
        d = {
            "members": list(self.members),
            "contains_zero": self.contains_zero,
            "additively_closed": self.additively_closed,
            "absorbing": self.absorbing,
            "proper": self.proper,
            "verdict": self.verdict,
        }
        if self.witness is not None:
            d["witness"] = self.witness
        return d


@dataclass(frozen=True)
class GammaIdeal:
    members: tuple[int, ...]
    is_ideal: bool
    is_prime: bool
    witness: dict | None = None

    def as_dict(self) -> dict:
        d = {
            "members": list(self.members),
            "is_ideal": self.is_ideal,
            "is_prime": self.is_prime,
        }
        if self.witness is not None:
            d["witness"] = self.witness
        return d


@dataclass(frozen=True)
class SpecGamma:
    """All prime ideals plus the basic opens D(a) = {P : a not in P}."""

    primes: tuple[tuple[int, ...], ...]
    basic_opens: tuple[tuple[int, ...], ...]  # element -> sorted prime indices
    ideals: tuple[tuple[int, ...], ...]

    @property
    def point_count(self) -> int:
        return len(self.primes)

    def open_set(self, a: int) -> frozenset[int]:
        return frozenset(self.basic_opens[a])

    def as_dict(self) -> dict:
        return {
            "conventions": CONVENTIONS,
            "primes": [list(p) for p in self.primes],
            "basic_opens": {str(a): list(v) for a, v in enumerate(self.basic_opens)},
        }


@dataclass(frozen=True)
class ClosedSet:
    ideal_members: tuple[int, ...]
    points: tuple[int, ...]  # prime indices with I contained in P
    complement_cover: tuple[int, ...]  # elements a of I whose D(a) cover the rest
    complement_matches: bool

    def as_dict(self) -> dict:
        return {
            "ideal": list(self.ideal_members),
            "points": list(self.points),
            "complement_cover": list(self.complement_cover),
            "complement_matches": self.complement_matches,
        }


def _normalize_subset(T: GammaSemiring, subset) -> tuple[int, ...]:
    members = tuple(sorted(set(subset)))
    for x in members:
        T._check_element(x, "subset member")
    return members


def is_ideal(T: GammaSemiring, subset) -> SubsetVerdict:
    """Decide whether the subset is a proper, absorbing, additively closed
    ideal containing 0.  A False verdict carries the first refuting tuple."""
    members = _normalize_subset(T, subset)
    inside = set(members)
    n = T.carrier_size
    witness = None

    contains_zero = 0 in inside
    if not contains_zero and witness is None:
        witness = {"law": "contains_zero", "missing": 0}

    additively_closed = True
    for a in members:
        for b in members:
            if T.add[a][b] not in inside:
                additively_closed = False
                if witness is None:
                    witness = {"law": "additively_closed", "a": a, "b": b,
                               "sum": T.add[a][b]}
                break
        if not additively_closed:
            break

    absorbing = True
    for g in T.modes():
        tg = T.tern[g]
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    if (a in inside or b in inside or c in inside) and tg[a][b][c] not in inside:
                        absorbing = False
                        if witness is None:
                            witness = {"law": "absorbing", "gamma": g, "a": a,
                                       "b": b, "c": c, "value": tg[a][b][c]}
                        break
                if not absorbing:
                    break
            if not absorbing:
                break
        if not absorbing:
            break

    proper = len(members) < n
    if not proper and witness is None:
        witness = {"law": "proper", "reason": "subset equals the whole carrier"}
    verdict = contains_zero and additively_closed and absorbing and proper
    return SubsetVerdict(members, contains_zero, additively_closed, absorbing,
                         proper, verdict, witness if not verdict else None)


def is_prime(T: GammaSemiring, subset) -> SubsetVerdict:
    """Primeness on top of :func:`is_ideal`; non-ideals are rejected up front."""
    base = is_ideal(T, subset)
    if not base.verdict:
        raise PreconditionError(
            "is_prime requires a proper Gamma-ideal; failed %s" % (base.witness,))
    inside = set(base.members)
    n = T.carrier_size
    for g in T.modes():
        tg = T.tern[g]
        for a in range(n):
            if a in inside:
                continue
            for b in range(n):
                if b in inside:
                    continue
                for c in range(n):
                    if c in inside:
                        continue
                    if tg[a][b][c] in inside:
                        witness = {"law": "prime", "gamma": g, "a": a, "b": b,
                                   "c": c, "value": tg[a][b][c]}
                        return SubsetVerdict(base.members, True, True, True,
                                             True, False, witness)
    return SubsetVerdict(base.members, True, True, True, True, True, None)


def _reach_masks(T: GammaSemiring) -> list[list[int]]:
    """reach[g][e] = bitmask of tern values with e in at least one slot."""
    n = T.carrier_size
    out = []
    for g in T.modes():
        tg = T.tern[g]
        per = [0] * n
        for a in range(n):
            for b in range(n):
                row = tg[a][b]
                for c in range(n):
                    v = 1 << row[c]
                    per[a] |= v
                    per[b] |= v
                    per[c] |= v
        out.append(per)
    return out


def spec(T: GammaSemiring, carrier_bound: int = DEFAULT_SPEC_CARRIER_BOUND) -> SpecGamma:
    """Enumerate every prime Gamma-ideal and the basic-open map.

    Exact subset enumeration only; carriers above the bound are refused so
    the topology laws can be tested against a complete point set.
    """
    n = T.carrier_size
    if n > carrier_bound:
        raise ResourceError(
            "spectrum enumeration needs carrier <= %d, got %d" % (carrier_bound, n),
            required=n,
        )
    reach = _reach_masks(T)
    add = T.add
    tern = T.tern
    ideals: list[tuple[int, ...]] = []
    primes: list[tuple[int, ...]] = []
    full = (1 << n) - 1
    for mask in range(1, full):  # excludes the full carrier: proper only
        if not mask & 1:  # 0 must be a member
            continue
        members = [i for i in range(n) if mask >> i & 1]
        ok = True
        for a in members:
            ra = add[a]
            for b in members:
                if not mask >> ra[b] & 1:
                    ok = False
                    break
            if not ok:
                break
        if not ok:
            continue
        for g in range(T.gamma_count):
            rg = reach[g]
            acc = 0
            for e in members:
                acc |= rg[e]
            if acc & ~mask:
                ok = False
                break
        if not ok:
            continue
        ideals.append(tuple(members))
        inside = set(members)
        prime = True
        outside = [x for x in range(n) if x not in inside]
        for g in range(T.gamma_count):
            tg = tern[g]
            for a in outside:
                for b in outside:
                    row = tg[a][b]
                    for c in outside:
                        if row[c] in inside:
                            prime = False
                            break
                    if not prime:
                        break
                if not prime:
                    break
            if not prime:
                break
        if prime:
            primes.append(tuple(members))
    basic = []
    for a in range(n):
        basic.append(tuple(i for i, p in enumerate(primes) if a not in p))
    return SpecGamma(tuple(primes), tuple(basic), tuple(ideals))


@dataclass(frozen=True)
class BasisLawReport:
    intersection_law_holds: bool
    zero_open_empty: bool
    intersections_are_basic_unions: bool
    checked: int
    witness: dict | None = None

    @property
    def all_passed(self) -> bool:
        return (self.intersection_law_holds and self.zero_open_empty
                and self.intersections_are_basic_unions)

    def as_dict(self) -> dict:
        d = {
            "intersection_law_holds": self.intersection_law_holds,
            "zero_open_empty": self.zero_open_empty,
            "intersections_are_basic_unions": self.intersections_are_basic_unions,
            "checked": self.checked,
            "all_passed": self.all_passed,
        }
        if self.witness is not None:
            d["witness"] = self.witness
        return d


def check_basis_laws(T: GammaSemiring, sg: SpecGamma) -> BasisLawReport:
    """Verify D(a) & D(b) == D({a,b,b}_g) for all a, b, g, that D(0) is
    empty, and that pairwise intersections are unions of basic opens."""
    n = T.carrier_size
    opens = [frozenset(sg.basic_opens[a]) for a in range(n)]
    witness = None
    law1 = True
    checked = 0
    for g in T.modes():
        tg = T.tern[g]
        for a in range(n):
            for b in range(n):
                checked += 1
                lhs = opens[a] & opens[b]
                rhs = opens[tg[a][b][b]]
                if lhs != rhs:
                    law1 = False
                    if witness is None:
                        witness = {
                            "law": "intersection", "gamma": g, "a": a, "b": b,
                            "product": tg[a][b][b],
                            "lhs": sorted(lhs), "rhs": sorted(rhs),
                        }
    law2 = len(opens[0]) == 0
    if not law2 and witness is None:
        witness = {"law": "zero_open", "D(0)": sorted(opens[0])}
    law3 = True
    for a in range(n):
        for b in range(n):
            inter = opens[a] & opens[b]
            union = frozenset()
            for c in range(n):
                if opens[c] <= inter:
                    union |= opens[c]
            if union != inter:
                law3 = False
                if witness is None:
                    witness = {"law": "basic_union", "a": a, "b": b,
                               "intersection": sorted(inter),
                               "best_union": sorted(union)}
    return BasisLawReport(law1, law2, law3, checked, witness)


def vanishing(T: GammaSemiring, ideal_members, sg: SpecGamma | None = None) -> ClosedSet:
    """V(I) = primes containing I, with its basic-open complement verified."""
    verdict = is_ideal(T, ideal_members)
    if not verdict.verdict:
        raise PreconditionError("vanishing requires an ideal; failed %s" % (verdict.witness,))
    if sg is None:
        sg = spec(T)
    inside = set(verdict.members)
    points = tuple(i for i, p in enumerate(sg.primes) if inside <= set(p))
    # a prime misses I exactly when it avoids some element of I, so the
    # complement of V(I) is the union of D(a) over a in I
    cover = set()
    for a in verdict.members:
        cover |= set(sg.basic_opens[a])
    complement = set(range(len(sg.primes))) - set(points)
    return ClosedSet(verdict.members, points, verdict.members, cover == complement)
