"""Multiplicative systems and localization by the cubic scaling relation.

A pair (a, s) is raw-related to (b, t) when some u in S and modes g, d, e
satisfy {u, a, {t,t,t}_g}_d == {u, b, {s,s,s}_e}_d, with the same outer mode
d on both sides.  The quotient is built in three steps:

  1. the raw relation on T x S,
  2. its reflexive-symmetric-transitive closure (union-find),
  3. further closure until the induced ternary operation on classes is
     representative-independent; every merge made in this step is recorded
     in the diagnostic log.

Addition is *not* used to merge classes.  It is induced through common
denominator representatives, (a,s) + (b,s) = (a+b, s), and when a class pair
has no common-denominator form, or its candidates land in different classes,
the entry is reported as a construction defect instead.  Closing under
addition as well would identify strictly more fractions than the cubic
relation generates on instances where induced addition is genuinely
ill-defined, which is visible data this module is required to preserve.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import (
    DegenerateSystemError,
    InputError,
    PreconditionError,
    ResourceError,
    StructuralError,
)
from .structures import GammaSemiring


@dataclass(frozen=True)
class MultiplicativeSystem:
    """A 0-free subset closed under every ternary product of its members."""

    members: tuple[int, ...]
    generators: tuple[int, ...]

    def __contains__(self, x: int) -> bool:
        return x in self.members

    def as_dict(self) -> dict:
        return {"members": list(self.members), "generators": list(self.generators)}


def close_multiplicative(T: GammaSemiring, seed: Iterable[int]) -> MultiplicativeSystem:
    """Least superset of the seed closed under all ternary products."""
    seed = tuple(seed)
    if not seed:
        raise InputError("multiplicative seed must be nonempty")
    for x in seed:
        T._check_element(x, "seed element")
    S = set(seed)
    if 0 in S:
        raise DegenerateSystemError("degenerate system: 0 is excluded from multiplicative systems")
    while True:
        new = set()
        for g in T.modes():
            tg = T.tern[g]
            for a in S:
                for b in S:
                    row = tg[a][b]
                    for c in S:
                        v = row[c]
                        if v not in S:
                            new.add(v)
        if not new:
            break
        if 0 in new:
            raise DegenerateSystemError(
                "degenerate system: closure of %s reaches 0" % (sorted(seed),))
        S |= new
    return MultiplicativeSystem(tuple(sorted(S)), tuple(sorted(set(seed))))


@dataclass(frozen=True)
class CubicWitness:
    """The data (u, gamma, delta, eta) certifying one cubic fraction equality."""

    u: int
    gamma: int
    delta: int
    eta: int

    def as_dict(self) -> dict:
        return {"u": self.u, "gamma": self.gamma, "delta": self.delta, "eta": self.eta}


def cubic_related(
    T: GammaSemiring, S: MultiplicativeSystem, a: int, s: int, b: int, t: int
) -> CubicWitness | None:
    """First witness in (u, gamma, delta, eta) order, or None."""
    T._check_element(a, "a")
    T._check_element(b, "b")
    if s not in S:
        raise PreconditionError("denominator s=%d is not in the system" % s)
    if t not in S:
        raise PreconditionError("denominator t=%d is not in the system" % t)
    tern = T.tern
    modes = range(T.gamma_count)
    cube_t = [tern[g][t][t][t] for g in modes]
    cube_s = [tern[g][s][s][s] for g in modes]
    for u in S.members:
        for g in modes:
            ct = cube_t[g]
            for d in modes:
                lhs = tern[d][u][a][ct]
                row = tern[d][u][b]
                for e in modes:
                    if lhs == row[cube_s[e]]:
                        return CubicWitness(u, g, d, e)
    return None


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, x: int, y: int) -> bool:
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        if ry < rx:
            rx, ry = ry, rx
        self.parent[ry] = rx
        return True


@dataclass(frozen=True)
class LocalizedSemiring:
    """The quotient of T x S by the generated ternary congruence.

    ``add_table`` entries are class ids or None where induced addition is
    defective; the corresponding defect records live in ``add_defects``.
    Class 0 is the class of (0, min S).
    """

    base: GammaSemiring
    system: MultiplicativeSystem
    pairs: tuple[tuple[int, int], ...]
    pair_class: tuple[int, ...]
    class_members: tuple[tuple[tuple[int, int], ...], ...]
    class_reps: tuple[tuple[int, int], ...]
    add_table: tuple[tuple[int | None, ...], ...]
    add_defects: tuple[dict, ...]
    tern_tables: tuple[tuple[tuple[tuple[int, ...], ...], ...], ...]
    raw_equals_closure: bool
    diagnostic_log: tuple[dict, ...]

    @property
    def class_count(self) -> int:
        return len(self.class_reps)

    @property
    def zero_class(self) -> int:
        return self.pair_class[self.pairs.index((0, self.system.members[0]))]

    def class_of(self, a: int, s: int) -> int:
        self.base._check_element(a, "a")
        if s not in self.system:
            raise PreconditionError("denominator %d not in the system" % s)
        return self.pair_class[self.pairs.index((a, s))]

    def fraction_label(self, cls: int) -> str:
        a, s = self.class_reps[cls]
        return "%d/%d" % (a, s)

    @property
    def add_is_total(self) -> bool:
        return not self.add_defects

    def class_invertible(self, cls: int) -> tuple[int, int] | None:
        """Least (partner class, mode) acting as identity with cls; works
        even when induced addition is defective."""
        nc = self.class_count
        for partner in range(nc):
            for g in range(len(self.base.gamma_labels)):
                row = self.tern_tables[g][cls][partner]
                if all(row[x] == x for x in range(nc)):
                    return partner, g
        return None

    def as_semiring(self) -> GammaSemiring:
        """View the quotient as a structure; requires defect-free addition."""
        if not self.add_is_total:
            raise InputError(
                "localized addition is defective on %d class pairs; "
                "no total structure exists" % len(self.add_defects))
        return GammaSemiring(
            carrier_size=self.class_count,
            gamma_labels=self.base.gamma_labels,
            add=tuple(tuple(int(v) for v in row) for row in self.add_table),
            tern=self.tern_tables,
        )

    def as_dict(self) -> dict:
        return {
            "system": self.system.as_dict(),
            "class_count": self.class_count,
            "class_reps": [list(r) for r in self.class_reps],
            "fractions": [self.fraction_label(c) for c in range(self.class_count)],
            "raw_equals_closure": self.raw_equals_closure,
            "add_defects": list(self.add_defects),
            "diagnostic_log": list(self.diagnostic_log),
        }


def localize(T: GammaSemiring, S: MultiplicativeSystem) -> LocalizedSemiring:
    """Build S^-1 T as described in the module docstring."""
    n = T.carrier_size
    k = T.gamma_count
    members = S.members
    if not members:
        raise InputError("multiplicative system is empty")
    tern = T.tern
    pairs = tuple((a, s) for a in range(n) for s in members)
    pidx = {p: i for i, p in enumerate(pairs)}
    np_ = len(pairs)

    # profile[u][d][x][y]: set of values {u, x, {y,y,y}_g}_d over g, as bitmask
    cube = [[tern[g][y][y][y] for g in range(k)] for y in range(n)]
    profile: dict[tuple[int, int], list[list[int]]] = {}
    for u in members:
        for d in range(k):
            td = tern[d][u]
            tab = [[0] * n for _ in range(n)]
            for x in range(n):
                row = td[x]
                for y in range(n):
                    m = 0
                    for g in range(k):
                        m |= 1 << row[cube[y][g]]
                    tab[x][y] = m
            profile[(u, d)] = tab

    uf = _UnionFind(np_)
    raw: set[tuple[int, int]] = set()
    keys = [(u, d) for u in members for d in range(k)]
    for i in range(np_):
        a, s = pairs[i]
        for j in range(i + 1, np_):
            b, t = pairs[j]
            for key in keys:
                tab = profile[key]
                if tab[a][t] & tab[b][s]:
                    raw.add((i, j))
                    uf.union(i, j)
                    break

    # close until the induced ternary operation is representative-independent
    log: list[dict] = []
    changed = True
    while changed:
        changed = False
        sig: dict[tuple[int, int, int, int], int] = {}
        rep_of: dict[tuple[int, int, int, int], int] = {}
        for lam in range(k):
            tl = tern[lam]
            for i in range(np_):
                a, s = pairs[i]
                ci = uf.find(i)
                for j in range(np_):
                    b, t = pairs[j]
                    cj = uf.find(j)
                    rab = tl[a][b]
                    rst = tl[s][t]
                    for m in range(np_):
                        c, v = pairs[m]
                        key = (lam, ci, cj, uf.find(m))
                        res = uf.find(pidx[(rab[c], rst[v])])
                        prev = sig.get(key)
                        if prev is None:
                            sig[key] = res
                            rep_of[key] = i * np_ * np_ + j * np_ + m
                        elif uf.find(prev) != res:
                            uf.union(prev, res)
                            log.append({
                                "kind": "tern_compatibility_merge",
                                "mode": lam,
                                "first_args": list(pairs[rep_of[key] // (np_ * np_)])
                                + list(pairs[rep_of[key] // np_ % np_])
                                + list(pairs[rep_of[key] % np_]),
                                "second_args": list(pairs[i]) + list(pairs[j]) + list(pairs[m]),
                                "merged": sorted([uf.find(prev), res]),
                            })
                            changed = True

    roots = sorted({uf.find(i) for i in range(np_)})
    # order classes by minimal pair index; pair 0 is (0, min S), so the zero
    # class comes first
    cls_id = {r: c for c, r in enumerate(roots)}
    pair_class = tuple(cls_id[uf.find(i)] for i in range(np_))
    nclasses = len(roots)
    class_members = tuple(
        tuple(pairs[i] for i in range(np_) if pair_class[i] == c) for c in range(nclasses)
    )
    class_reps = tuple(m[0] for m in class_members)

    # raw relation (with reflexivity) versus the final partition
    same_class = {(i, j) for i in range(np_) for j in range(i + 1, np_)
                  if pair_class[i] == pair_class[j]}
    raw_equals_closure = same_class == raw

    # induced ternary tables; representative independence is certified by the
    # stabilized signature pass above, and re-checked here
    tt: list[list[list[list[int]]]] = []
    for lam in range(k):
        tl = tern[lam]
        table = [[[None] * nclasses for _ in range(nclasses)] for _ in range(nclasses)]
        for i in range(np_):
            a, s = pairs[i]
            for j in range(np_):
                b, t = pairs[j]
                for m in range(np_):
                    c, v = pairs[m]
                    res = pair_class[pidx[(tl[a][b][c], tl[s][t][v])]]
                    cur = table[pair_class[i]][pair_class[j]][pair_class[m]]
                    if cur is None:
                        table[pair_class[i]][pair_class[j]][pair_class[m]] = res
                    elif cur != res:
                        raise StructuralError(
                            "ternary operation not constant on classes after closure")
        tt.append(table)
    tern_tables = tuple(
        tuple(tuple(tuple(x) for x in plane) for plane in table) for table in tt
    )

    # induced addition through common denominators
    add_table: list[list[int | None]] = [[None] * nclasses for _ in range(nclasses)]
    defects: list[dict] = []
    for x in range(nclasses):
        for y in range(nclasses):
            results = {}
            for (a, s) in class_members[x]:
                for (b, t) in class_members[y]:
                    if s != t:
                        continue
                    res = pair_class[pidx[(T.add[a][b], s)]]
                    results.setdefault(res, ((a, s), (b, t)))
            if not results:
                defects.append({
                    "kind": "no_common_denominator",
                    "classes": [x, y],
                    "reps": [list(class_reps[x]), list(class_reps[y])],
                })
            elif len(results) > 1:
                (r1, w1), (r2, w2) = list(results.items())[:2]
                defects.append({
                    "kind": "ill_defined_sum",
                    "classes": [x, y],
                    "results": [r1, r2],
                    "first_operands": [list(w1[0]), list(w1[1])],
                    "second_operands": [list(w2[0]), list(w2[1])],
                })
            else:
                add_table[x][y] = next(iter(results))

    return LocalizedSemiring(
        base=T,
        system=S,
        pairs=pairs,
        pair_class=pair_class,
        class_members=class_members,
        class_reps=class_reps,
        add_table=tuple(tuple(r) for r in add_table),
        add_defects=tuple(defects),
        tern_tables=tern_tables,
        raw_equals_closure=raw_equals_closure,
        diagnostic_log=tuple(log),
    )


@dataclass(frozen=True)
class CanonicalMap:
    """ell: T -> S^-1 T sending a to the class of (a, min S)."""

    values: tuple[int, ...]
    denominator: int
    additive_checks: int
    additive_skipped: int
    tern_checks: int

    @property
    def injective(self) -> bool:
        return len(set(self.values)) == len(self.values)

    def as_dict(self) -> dict:
        return {
            "values": list(self.values),
            "denominator": self.denominator,
            "injective": self.injective,
            "additive_checks": self.additive_checks,
            "additive_skipped": self.additive_skipped,
            "tern_checks": self.tern_checks,
        }


def canonical_map(T: GammaSemiring, L: LocalizedSemiring) -> CanonicalMap:
    """Build and verify the canonical map; failures raise StructuralError."""
    if L.base is not T and L.base != T:
        raise PreconditionError("localization was not built from this structure")
    s0 = L.system.members[0]
    values = tuple(L.class_of(a, s0) for a in range(T.carrier_size))
    if values[0] != L.zero_class:
        raise StructuralError("canonical map does not send 0 to the zero class")
    add_checked = add_skipped = 0
    for a in range(T.carrier_size):
        for b in range(T.carrier_size):
            entry = L.add_table[values[a]][values[b]]
            if entry is None:
                add_skipped += 1
                continue
            add_checked += 1
            if entry != values[T.add[a][b]]:
                raise StructuralError(
                    "canonical map is not additive at (%d, %d)" % (a, b))
    tern_checked = 0
    for g in T.modes():
        tg = T.tern[g]
        lt = L.tern_tables[g]
        for a in range(T.carrier_size):
            for b in range(T.carrier_size):
                for c in range(T.carrier_size):
                    tern_checked += 1
                    if lt[values[a]][values[b]][values[c]] != values[tg[a][b][c]]:
                        raise StructuralError(
                            "canonical map does not preserve the ternary product "
                            "at (%d, %d, %d, mode %d)" % (a, b, c, g))
    return CanonicalMap(values, s0, add_checked, add_skipped, tern_checked)


def is_invertible(R: GammaSemiring, s: int) -> tuple[int, int] | None:
    """Least (partner, mode) making {s, partner, -}_mode the identity."""
    R._check_element(s, "s")
    n = R.carrier_size
    for partner in range(n):
        for g in R.modes():
            row = R.tern[g][s][partner]
            if all(row[x] == x for x in range(n)):
                return partner, g
    return None


@dataclass(frozen=True)
class UniversalPropertyVerdict:
    exists: bool
    unique: bool
    factorization: tuple[int, ...] | None
    candidates_scanned: int

    def as_dict(self) -> dict:
        return {
            "exists": self.exists,
            "unique": self.unique,
            "factorization": list(self.factorization) if self.factorization else None,
            "candidates_scanned": self.candidates_scanned,
        }


def _is_semiring_hom(src: GammaSemiring, dst: GammaSemiring, f: Sequence[int]) -> dict | None:
    """None when f preserves 0, + and every ternary table; else a witness."""
    if len(f) != src.carrier_size:
        return {"reason": "wrong_length"}
    if any(not (0 <= v < dst.carrier_size) for v in f):
        return {"reason": "out_of_range"}
    if f[0] != 0:
        return {"reason": "zero_not_preserved"}
    for a in range(src.carrier_size):
        for b in range(src.carrier_size):
            if f[src.add[a][b]] != dst.add[f[a]][f[b]]:
                return {"reason": "addition", "a": a, "b": b}
    for g in src.modes():
        for a in range(src.carrier_size):
            for b in range(src.carrier_size):
                for c in range(src.carrier_size):
                    if f[src.tern[g][a][b][c]] != dst.tern[g][f[a]][f[b]][f[c]]:
                        return {"reason": "tern", "gamma": g, "a": a, "b": b, "c": c}
    return None


def check_universal_property(
    T: GammaSemiring,
    S: MultiplicativeSystem,
    R: GammaSemiring,
    f: Sequence[int],
    budget: int = 1_000_000,
) -> UniversalPropertyVerdict:
    """Search all maps S^-1 T -> R for factorizations of f through ell."""
    if R.gamma_labels != T.gamma_labels:
        raise InputError("target structure must share the mode set")
    bad = _is_semiring_hom(T, R, f)
    if bad is not None:
        raise PreconditionError("f is not a homomorphism: %s" % (bad,))
    for s in S.members:
        if is_invertible(R, f[s]) is None:
            raise PreconditionError("f(%d)=%d is not invertible in the target" % (s, f[s]))
    L = localize(T, S)
    Lsr = L.as_semiring()
    ell = canonical_map(T, L)

    forced: dict[int, int] = {}
    for a in range(T.carrier_size):
        c = ell.values[a]
        if c in forced and forced[c] != f[a]:
            return UniversalPropertyVerdict(False, False, None, 0)
        forced[c] = f[a]
    free = [c for c in range(Lsr.carrier_size) if c not in forced]
    total = R.carrier_size ** len(free)
    if total > budget:
        raise ResourceError(
            "universal property search needs %d candidates, budget is %d"
            % (total, budget), required=total)

    found: list[tuple[int, ...]] = []
    scanned = 0
    assignment = [0] * len(free)

    def rec(i: int):
        nonlocal scanned
        if len(found) > 1:
            return
        if i == len(free):
            scanned += 1
            g = [0] * Lsr.carrier_size
            for c, v in forced.items():
                g[c] = v
            for c, v in zip(free, assignment):
                g[c] = v
            if _is_semiring_hom(Lsr, R, g) is None:
                found.append(tuple(g))
            return
        for v in range(R.carrier_size):
            assignment[i] = v
            rec(i + 1)

    rec(0)
    exists = len(found) >= 1
    unique = len(found) == 1
    return UniversalPropertyVerdict(exists, unique, found[0] if found else None, scanned)


def trivial_semiring(gamma_labels: tuple[str, ...]) -> GammaSemiring:
    """The one-element structure over a given mode set."""
    return GammaSemiring(
        carrier_size=1,
        gamma_labels=gamma_labels,
        add=((0,),),
        tern=tuple((((0,),),) for _ in gamma_labels),
    )
