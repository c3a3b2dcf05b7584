"""The binary-shadow obstruction at desk scale.

The search targets the reflection condition on the regular module: cubic
fraction equality in S^-1 T (congruence classes from the localization
machinery, with the raw-versus-closure diagnostic attached) must coincide
with linear clearing-denominators equality of images in a candidate
commutative (semi)ring.  Candidates are all additive monoid morphisms from
T into cyclic rings and two-factor products within a size bound; an
exhaustion certificate counts every candidate with its rejection reason.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InputError, PreconditionError
from .localize import LocalizedSemiring, MultiplicativeSystem, cubic_related, localize
from .modules import enumerate_additive_maps
from .structures import GammaSemiring


@dataclass(frozen=True)
class BinaryRing:
    name: str
    carrier_size: int
    add: tuple[tuple[int, ...], ...]
    mul: tuple[tuple[int, ...], ...]
    one: int
    zero: int = 0

    def verify(self, require_inverses: bool = True) -> dict | None:
        n = self.carrier_size
        a, m = self.add, self.mul
        for x in range(n):
            if a[x][0] != x:
                return {"law": "add_identity", "x": x}
            if m[x][self.one] != x:
                return {"law": "mul_identity", "x": x}
            if m[x][0] != 0:
                return {"law": "zero_absorbs", "x": x}
            for y in range(n):
                if a[x][y] != a[y][x]:
                    return {"law": "add_commutative", "x": x, "y": y}
                if m[x][y] != m[y][x]:
                    return {"law": "mul_commutative", "x": x, "y": y}
                for z in range(n):
                    if a[a[x][y]][z] != a[x][a[y][z]]:
                        return {"law": "add_associative", "x": x, "y": y, "z": z}
                    if m[m[x][y]][z] != m[x][m[y][z]]:
                        return {"law": "mul_associative", "x": x, "y": y, "z": z}
                    if m[x][a[y][z]] != a[m[x][y]][m[x][z]]:
                        return {"law": "distributive", "x": x, "y": y, "z": z}
        if require_inverses:
            for x in range(n):
                if all(a[x][y] != 0 for y in range(n)):
                    return {"law": "add_inverses", "x": x}
        return None

    def neg(self, x: int) -> int:
        for y in range(self.carrier_size):
            if self.add[x][y] == 0:
                return y
        raise InputError("element %d has no additive inverse" % x)

    def as_dict(self) -> dict:
        return {"name": self.name, "size": self.carrier_size}


def cyclic_ring(n: int) -> BinaryRing:
    if n < 1:
        raise InputError("ring size must be positive")
    add = tuple(tuple((x + y) % n for y in range(n)) for x in range(n))
    mul = tuple(tuple((x * y) % n for y in range(n)) for x in range(n))
    return BinaryRing("Z%d" % n, n, add, mul, one=1 % n)


def product_ring(R1: BinaryRing, R2: BinaryRing) -> BinaryRing:
    n1, n2 = R1.carrier_size, R2.carrier_size

    def pid(x, y):
        return x * n2 + y

    add = tuple(
        tuple(pid(R1.add[x1][x2], R2.add[y1][y2]) for x2 in range(n1) for y2 in range(n2))
        for x1 in range(n1) for y1 in range(n2)
    )
    mul = tuple(
        tuple(pid(R1.mul[x1][x2], R2.mul[y1][y2]) for x2 in range(n1) for y2 in range(n2))
        for x1 in range(n1) for y1 in range(n2)
    )
    return BinaryRing(
        "%sx%s" % (R1.name, R2.name), n1 * n2, add, mul,
        one=pid(R1.one, R2.one))


@dataclass(frozen=True)
class ShadowCandidate:
    ring: BinaryRing
    iota: tuple[int, ...]

    def as_dict(self) -> dict:
        return {"ring": self.ring.name, "iota": list(self.iota)}


def binary_fraction_equal(
    R: BinaryRing, Simg, a: int, s: int, b: int, t: int,
    semiring: bool = False,
) -> int | None:
    """Least w in the image system with w(at - bs) = 0; in semiring form,
    least w such that w*a*t + x = w*b*s + x is solvable for some x."""
    Simg = sorted(set(Simg))
    if s not in Simg or t not in Simg:
        raise PreconditionError("denominators must lie in the image system")
    for x in Simg:
        for y in Simg:
            if R.mul[x][y] not in Simg:
                raise PreconditionError(
                    "image system is not multiplicatively closed: %d*%d" % (x, y))
    at = R.mul[a][t]
    bs = R.mul[b][s]
    for w in Simg:
        if semiring:
            wat = R.mul[w][at]
            wbs = R.mul[w][bs]
            if any(R.add[wat][x] == R.add[wbs][x] for x in range(R.carrier_size)):
                return w
        else:
            diff = R.add[at][R.neg(bs)]
            if R.mul[w][diff] == 0:
                return w
    return None


@dataclass(frozen=True)
class ReflectionReport:
    candidate: ShadowCandidate
    valid: bool
    rejection_reason: str | None
    pairs_checked: int
    disagreements: tuple[dict, ...]
    raw_equals_closure: bool | None

    @property
    def satisfies(self) -> bool:
        return self.valid and not self.disagreements

    def as_dict(self) -> dict:
        return {
            "candidate": self.candidate.as_dict(),
            "valid": self.valid,
            "rejection_reason": self.rejection_reason,
            "pairs_checked": self.pairs_checked,
            "disagreement_count": len(self.disagreements),
            "disagreements": list(self.disagreements[:5]),
            "raw_equals_closure": self.raw_equals_closure,
        }


def reflection_check(
    T: GammaSemiring, S: MultiplicativeSystem, cand: ShadowCandidate,
    L: LocalizedSemiring | None = None, semiring: bool = False,
) -> ReflectionReport:
    """Compare cubic equality of fractions with binary equality of images
    over every pair of T x S fractions."""
    R = cand.ring
    iota = cand.iota
    if len(iota) != T.carrier_size or any(
        not (0 <= v < R.carrier_size) for v in iota
    ):
        return ReflectionReport(cand, False, "iota_malformed", 0, (), None)
    if iota[0] != 0:
        return ReflectionReport(cand, False, "iota_not_additive", 0, (), None)
    for x in range(T.carrier_size):
        for y in range(T.carrier_size):
            if iota[T.add[x][y]] != R.add[iota[x]][iota[y]]:
                return ReflectionReport(cand, False, "iota_not_additive", 0, (), None)
    Simg = sorted({iota[s] for s in S.members})
    if 0 in Simg:
        return ReflectionReport(cand, False, "iota_image_contains_zero", 0, (), None)
    for x in Simg:
        for y in Simg:
            if R.mul[x][y] not in Simg:
                return ReflectionReport(
                    cand, False, "iota_image_not_multiplicatively_closed", 0, (), None)
    if L is None:
        L = localize(T, S)
    pairs = L.pairs
    disagreements = []
    checked = 0
    for i in range(len(pairs)):
        a, s = pairs[i]
        for j in range(i, len(pairs)):
            b, t = pairs[j]
            checked += 1
            cubic_eq = L.pair_class[i] == L.pair_class[j]
            w = binary_fraction_equal(
                R, Simg, iota[a], iota[s], iota[b], iota[t], semiring)
            if cubic_eq != (w is not None):
                disagreements.append({
                    "left": [a, s],
                    "right": [b, t],
                    "cubic_equal": cubic_eq,
                    "binary_witness": w,
                })
    return ReflectionReport(
        cand, True, None, checked, tuple(disagreements), L.raw_equals_closure)


@dataclass(frozen=True)
class SearchReport:
    max_ring_size: int
    semiring_mode: bool
    rings: tuple[str, ...]
    candidates_total: int
    rejection_counts: dict
    satisfying: tuple[ShadowCandidate, ...]
    complete: bool

    @property
    def exhausted(self) -> bool:
        return self.complete and not self.satisfying

    def as_dict(self) -> dict:
        return {
            "scope": (
                "searches the reflection of cubic fraction equality on the "
                "regular module, a necessary condition for any "
                "localization-compatible binary shadow; functor-level "
                "conservativity and exactness are not enumerated"),
            "max_ring_size": self.max_ring_size,
            "semiring_mode": self.semiring_mode,
            "rings": list(self.rings),
            "candidates_total": self.candidates_total,
            "rejection_counts": dict(sorted(self.rejection_counts.items())),
            "satisfying": [c.as_dict() for c in self.satisfying],
            "complete": self.complete,
        }


def ring_family(max_size: int) -> list[BinaryRing]:
    """Cyclic rings and two-factor products within the size bound."""
    rings = [cyclic_ring(n) for n in range(1, max_size + 1)]
    for n in range(2, max_size + 1):
        for m in range(n, max_size + 1):
            if n * m <= max_size:
                rings.append(product_ring(cyclic_ring(n), cyclic_ring(m)))
    return rings


def shadow_search(
    T: GammaSemiring, S: MultiplicativeSystem,
    max_ring_size: int = 12, semiring: bool = False,
    extra_rings: list[BinaryRing] | None = None,
    candidate_budget: int = 100_000,
) -> SearchReport:
    """Enumerate (ring, additive iota) candidates; return either satisfying
    candidates or an exhaustion certificate with per-reason counts."""
    L = localize(T, S)
    rings = ring_family(max_ring_size)
    for extra in extra_rings or []:
        bad = extra.verify(require_inverses=not semiring)
        if bad is not None:
            raise InputError("extra ring %s invalid: %s" % (extra.name, bad))
        rings.append(extra)
    counts: dict[str, int] = {}
    satisfying: list[ShadowCandidate] = []
    total = 0
    complete = True
    for R in rings:
        for iota in enumerate_additive_maps(T.add, R.add):
            total += 1
            if total > candidate_budget:
                complete = False
                break
            cand = ShadowCandidate(R, iota)
            rep = reflection_check(T, S, cand, L, semiring)
            if rep.satisfies:
                satisfying.append(cand)
            else:
                reason = rep.rejection_reason or "reflection_disagreement"
                counts[reason] = counts.get(reason, 0) + 1
        if not complete:
            break
    return SearchReport(
        max_ring_size=max_ring_size,
        semiring_mode=semiring,
        rings=tuple(r.name for r in rings),
        candidates_total=min(total, candidate_budget),
        rejection_counts=counts,
        satisfying=tuple(satisfying),
        complete=complete,
    )


def cube_profile(T: GammaSemiring, t: int) -> dict[str, int]:
    """The mode-indexed cube {t,t,t}_g; the denominator data of fractions."""
    T._check_element(t, "t")
    return {T.gamma_labels[g]: T.tern[g][t][t][t] for g in T.modes()}


def witness_gap_demo(
    T: GammaSemiring, S: MultiplicativeSystem, a: int, s: int, b: int, t: int,
) -> dict:
    """Narrative record for one cubically related pair: the witness, the
    mode-dependent cubes, and the structural absence of a linear form."""
    w = cubic_related(T, S, a, s, b, t)
    if w is None:
        raise PreconditionError(
            "pair (%d/%d, %d/%d) is not cubically related" % (a, s, b, t))
    return {
        "pair": {"left": [a, s], "right": [b, t]},
        "witness": {
            "u": w.u,
            "gamma": T.gamma_labels[w.gamma],
            "delta": T.gamma_labels[w.delta],
            "eta": T.gamma_labels[w.eta],
        },
        "cube_of_t": cube_profile(T, t),
        "cube_of_s": cube_profile(T, s),
        "statement": (
            "the structure has no binary product, so no linear clearing "
            "identity of the form a*t = b*s is formable; denominators enter "
            "equality only through the mode-indexed cubes"),
    }
