"""Bounded chain complexes of group-completed Gamma-modules.

Homological (lower) indexing throughout: the differential d_n maps degree n
to degree n-1.  Cohomological statements translate by negating the index;
reports carry this note.  Degrees absent from a complex are the zero module.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InputError, PreconditionError, StructuralError
from .ideals import SpecGamma, spec
from .localize import close_multiplicative
from .modules import (
    GammaModule,
    ModuleMorphism,
    localize_module,
    localize_morphism,
    product_module,
    zero_module,
)
from .structures import GammaSemiring
from .errors import DegenerateSystemError

INDEXING_NOTE = "homological lower indexing; H^i statements read as H_{-i}"


@dataclass(frozen=True)
class ChainComplex:
    base: GammaSemiring
    modules: dict[int, GammaModule] = field(default_factory=dict)
    diffs: dict[int, ModuleMorphism] = field(default_factory=dict)

    @property
    def support(self) -> tuple[int, int] | None:
        if not self.modules:
            return None
        return min(self.modules), max(self.modules)

    def degrees(self) -> list[int]:
        return sorted(self.modules)

    def module_at(self, n: int) -> GammaModule:
        return self.modules.get(n, zero_module(self.base))

    def diff_at(self, n: int) -> ModuleMorphism:
        d = self.diffs.get(n)
        if d is not None:
            return d
        return ModuleMorphism(
            self.module_at(n), self.module_at(n - 1),
            tuple(0 for _ in range(self.module_at(n).carrier_size)))

    def verify(self) -> dict | None:
        """None when every degree is a group, differentials are morphisms
        matching the adjacent modules, and d о d == 0."""
        for n, M in self.modules.items():
            if not M.is_group:
                return {"kind": "not_a_group", "degree": n}
            if M.over != self.base:
                return {"kind": "wrong_base", "degree": n}
        for n, d in self.diffs.items():
            if d.source != self.module_at(n) or d.target != self.module_at(n - 1):
                return {"kind": "differential_shape", "degree": n}
            bad = d.defect()
            if bad is not None:
                return {"kind": "differential_not_morphism", "degree": n, "detail": bad}
        for n in self.degrees():
            dn = self.diff_at(n)
            dn1 = self.diff_at(n + 1)
            for x in range(dn1.source.carrier_size):
                if dn(dn1(x)) != 0:
                    return {"kind": "d_squared_nonzero", "degree": n + 1, "element": x}
        return None


def bounded_complex(base: GammaSemiring, modules: dict[int, GammaModule],
                    diffs: dict[int, tuple[int, ...]]) -> ChainComplex:
    """Assemble and verify a complex from module tables and value rows."""
    K = ChainComplex(base, dict(modules), {})
    built = {}
    for n, values in diffs.items():
        built[n] = ModuleMorphism(K.module_at(n), K.module_at(n - 1), tuple(values))
    K = ChainComplex(base, dict(modules), built)
    bad = K.verify()
    if bad is not None:
        raise InputError("invalid chain complex: %s" % (bad,))
    return K


@dataclass(frozen=True)
class ChainMap:
    source: ChainComplex
    target: ChainComplex
    maps: dict[int, ModuleMorphism] = field(default_factory=dict)

    def map_at(self, n: int) -> ModuleMorphism:
        f = self.maps.get(n)
        if f is not None:
            return f
        return ModuleMorphism(
            self.source.module_at(n), self.target.module_at(n),
            tuple(0 for _ in range(self.source.module_at(n).carrier_size)))

    def degrees(self) -> list[int]:
        out = set(self.source.modules) | set(self.target.modules) | set(self.maps)
        return sorted(out)

    def verify(self) -> dict | None:
        for n, f in self.maps.items():
            if f.source != self.source.module_at(n) or f.target != self.target.module_at(n):
                return {"kind": "map_shape", "degree": n}
            bad = f.defect()
            if bad is not None:
                return {"kind": "map_not_morphism", "degree": n, "detail": bad}
        for n in self.degrees():
            fn = self.map_at(n)
            fn1 = self.map_at(n - 1)
            ds = self.source.diff_at(n)
            dt = self.target.diff_at(n)
            for x in range(fn.source.carrier_size):
                if dt(fn(x)) != fn1(ds(x)):
                    return {"kind": "does_not_commute", "degree": n, "element": x}
        return None


def identity_chain_map(K: ChainComplex) -> ChainMap:
    maps = {n: ModuleMorphism(M, M, tuple(range(M.carrier_size)))
            for n, M in K.modules.items()}
    return ChainMap(K, K, maps)


def compose_chain_maps(g: ChainMap, f: ChainMap) -> ChainMap:
    if g.source.modules != f.target.modules:
        raise InputError("chain maps do not compose")
    maps = {}
    for n in set(f.maps) | set(g.maps):
        fn = f.map_at(n)
        gn = g.map_at(n)
        maps[n] = ModuleMorphism(fn.source, gn.target,
                                 tuple(gn.values[v] for v in fn.values))
    return ChainMap(f.source, g.target, maps)


def zero_chain_map(K: ChainComplex, L: ChainComplex) -> ChainMap:
    return ChainMap(K, L, {})


# --- subquotients -------------------------------------------------------------


def _submodule(M: GammaModule, members: list[int]) -> tuple[GammaModule, dict[int, int]]:
    """Reindex a subset closed under addition and the action."""
    members = sorted(set(members))
    if members[0] != 0:
        raise StructuralError("submodule must contain 0")
    index = {x: i for i, x in enumerate(members)}
    T = M.over
    n = T.carrier_size
    k = T.gamma_count
    add = tuple(tuple(index[M.add[x][y]] for y in members) for x in members)
    action = tuple(
        tuple(
            tuple(tuple(index[M.action[a][b][x][g]] for g in range(k)) for x in members)
            for b in range(n)
        )
        for a in range(n)
    )
    return GammaModule(over=T, carrier_size=len(members), add=add, action=action), index


def _quotient_module(M: GammaModule, sub: list[int]) -> tuple[GammaModule, tuple[int, ...]]:
    """Quotient by a subgroup closed under the action; returns the module and
    the coset id of every original element."""
    if not M.is_group:
        raise PreconditionError("quotients need additive inverses")
    subset = set(sub)
    coset_of: list[int | None] = [None] * M.carrier_size
    reps = []
    for x in range(M.carrier_size):
        if coset_of[x] is None:
            cid = len(reps)
            reps.append(x)
            for s in subset:
                coset_of[M.add[x][s]] = cid
    size = len(reps)
    T = M.over
    n = T.carrier_size
    k = T.gamma_count
    add = tuple(
        tuple(coset_of[M.add[reps[i]][reps[j]]] for j in range(size)) for i in range(size)
    )
    action = tuple(
        tuple(
            tuple(
                tuple(coset_of[M.action[a][b][reps[i]][g]] for g in range(k))
                for i in range(size)
            )
            for b in range(n)
        )
        for a in range(n)
    )
    # well-definedness across coset members
    for i in range(size):
        members = [x for x in range(M.carrier_size) if coset_of[x] == i]
        for x in members:
            for y in range(M.carrier_size):
                if coset_of[M.add[x][y]] != coset_of[M.add[reps[i]][y]]:
                    raise StructuralError("quotient addition not well defined")
        for a in range(n):
            for b in range(n):
                for g in range(k):
                    vals = {coset_of[M.action[a][b][x][g]] for x in members}
                    if len(vals) != 1:
                        raise StructuralError("quotient action not well defined; "
                                              "the action is not Gamma-linear")
    Q = GammaModule(over=T, carrier_size=size, add=add, action=action)
    return Q, tuple(coset_of)


@dataclass(frozen=True)
class HomologyResult:
    degree: int
    module: GammaModule
    kernel: tuple[int, ...]
    image: tuple[int, ...]
    coset_of: dict          # kernel element -> homology element
    rep_of: tuple[int, ...]  # homology element -> kernel element

    def as_dict(self) -> dict:
        return {
            "degree": self.degree,
            "size": self.module.carrier_size,
            "kernel_size": len(self.kernel),
            "image_size": len(self.image),
        }


def homology(K: ChainComplex, n: int) -> HomologyResult:
    """H_n = ker(d_n) / im(d_{n+1}) with the induced action verified."""
    bad = K.verify()
    if bad is not None:
        raise InputError("complex invalid: %s" % (bad,))
    M = K.module_at(n)
    dn = K.diff_at(n)
    dn1 = K.diff_at(n + 1)
    kernel = [x for x in range(M.carrier_size) if dn(x) == 0]
    image = sorted({dn1(x) for x in range(dn1.source.carrier_size)})
    if any(v not in set(kernel) for v in image):
        raise StructuralError("image not contained in kernel")
    sub, index = _submodule(M, kernel)
    sub_image = [index[v] for v in image]
    H, coset_vec = _quotient_module(sub, sub_image)
    coset_of = {kernel[i]: coset_vec[index[kernel[i]]] for i in range(len(kernel))}
    rep_of = []
    seen = {}
    for x in kernel:
        c = coset_of[x]
        if c not in seen:
            seen[c] = x
    rep_of = tuple(seen[c] for c in range(H.carrier_size))
    return HomologyResult(n, H, tuple(kernel), tuple(image), coset_of, rep_of)


def homology_map(f: ChainMap, n: int,
                 hs: HomologyResult | None = None,
                 ht: HomologyResult | None = None) -> tuple[int, ...]:
    """The induced map on degree-n homology, as a value table."""
    hs = hs if hs is not None else homology(f.source, n)
    ht = ht if ht is not None else homology(f.target, n)
    fn = f.map_at(n)
    out = []
    for c in range(hs.module.carrier_size):
        x = hs.rep_of[c]
        y = fn(x)
        if y not in ht.coset_of:
            raise StructuralError("chain map does not preserve cycles")
        out.append(ht.coset_of[y])
    # well-definedness across coset members
    for x, c in hs.coset_of.items():
        if ht.coset_of[fn(x)] != out[c]:
            raise StructuralError("induced homology map not well defined")
    return tuple(out)


def is_quasi_iso(f: ChainMap) -> bool:
    bad = f.verify()
    if bad is not None:
        raise PreconditionError("not a chain map: %s" % (bad,))
    for n in f.degrees():
        hs = homology(f.source, n)
        ht = homology(f.target, n)
        values = homology_map(f, n, hs, ht)
        if len(set(values)) != hs.module.carrier_size or \
           hs.module.carrier_size != ht.module.carrier_size:
            return False
    return True


# --- shift and cone -----------------------------------------------------------


def shift(K: ChainComplex, k: int) -> ChainComplex:
    """Degrees move up by k; differentials pick up the sign (-1)^k."""
    modules = {n + k: M for n, M in K.modules.items()}
    diffs = {}
    for n, d in K.diffs.items():
        if k % 2 == 0:
            values = d.values
        else:
            values = tuple(d.target.neg(v) for v in d.values)
        diffs[n + k] = ModuleMorphism(d.source, d.target, values)
    out = ChainComplex(K.base, modules, diffs)
    bad = out.verify()
    if bad is not None:
        raise StructuralError("shift broke the complex: %s" % (bad,))
    return out


def cone(f: ChainMap) -> ChainComplex:
    """Degreewise L_n (+) K_{n-1} with d(l, x) = (d l + f x, -d x)."""
    bad = f.verify()
    if bad is not None:
        raise PreconditionError("not a chain map: %s" % (bad,))
    K, L = f.source, f.target
    degrees = set()
    for n in K.degrees():
        degrees.add(n + 1)
    degrees |= set(L.degrees())
    modules = {}
    for n in sorted(degrees):
        modules[n] = product_module(L.module_at(n), K.module_at(n - 1))
    diffs = {}
    for n in sorted(degrees):
        target = modules.get(n - 1)
        if target is None:
            # below support the product of zero modules equals the zero module
            target = product_module(L.module_at(n - 1), K.module_at(n - 2))
        src = modules[n]
        Ln = L.module_at(n)
        Kn1 = K.module_at(n - 1)
        m2 = Kn1.carrier_size
        t2 = K.module_at(n - 2).carrier_size
        dl = L.diff_at(n)
        dk = K.diff_at(n - 1)
        fn1 = f.map_at(n - 1)
        values = []
        for e in range(src.carrier_size):
            l, x = divmod(e, m2)
            left = L.module_at(n - 1).add[dl(l)][fn1(x)]
            right = K.module_at(n - 2).neg(dk(x))
            values.append(left * t2 + right)
        diffs[n] = ModuleMorphism(src, target, tuple(values))
    out = ChainComplex(K.base, modules, diffs)
    bad = out.verify()
    if bad is not None:
        raise StructuralError("cone differential broken: %s" % (bad,))
    return out


def cone_exactness(f: ChainMap) -> dict:
    """Exactness of H_n(L) -> H_n(C) -> H_{n-1}(K) -> H_{n-1}(L) at every
    joint, checked by enumeration; returns per-degree verdicts."""
    C = cone(f)
    K, L = f.source, f.target
    results = {}
    degrees = sorted(set(C.degrees()) | set(L.degrees()) | {n + 1 for n in K.degrees()})
    for n in degrees:
        hL = homology(L, n)
        hC = homology(C, n)
        hK1 = homology(K, n - 1)
        hL1 = homology(L, n - 1)
        m2 = K.module_at(n - 1).carrier_size
        # inclusion l -> (l, 0) and projection (l, x) -> x
        incl = {}
        for c in range(hL.module.carrier_size):
            l = hL.rep_of[c]
            incl[c] = hC.coset_of[l * m2 + 0]
        proj = {}
        for c in range(hC.module.carrier_size):
            e = hC.rep_of[c]
            proj[c] = hK1.coset_of[e % m2]
        conn = {}
        fm = f.map_at(n - 1)
        for c in range(hK1.module.carrier_size):
            conn[c] = hL1.coset_of[fm(hK1.rep_of[c])]
        hK = homology(K, n)
        fmap = dict(enumerate(homology_map(f, n, hK, hL)))
        im_f = set(fmap.values())
        ker_incl = {c for c in range(hL.module.carrier_size) if incl[c] == 0}
        im_incl = set(incl.values())
        ker_proj = {c for c in range(hC.module.carrier_size) if proj[c] == 0}
        im_proj = set(proj.values())
        ker_conn = {c for c in range(hK1.module.carrier_size) if conn[c] == 0}
        results[n] = {
            "exact_at_target": im_f == ker_incl,
            "exact_at_cone": im_incl == ker_proj,
            "exact_at_shifted_source": im_proj == ker_conn,
        }
    return results


# --- truncation and the heart -------------------------------------------------


def truncate(K: ChainComplex, side: str) -> ChainComplex:
    """Smart truncation at degree 0: 'ge0' keeps homology in degrees >= 0
    (kernel replacement), 'le0' keeps degrees <= 0 (cokernel replacement)."""
    bad = K.verify()
    if bad is not None:
        raise InputError("complex invalid: %s" % (bad,))
    if side not in ("le0", "ge0"):
        raise InputError("side must be 'le0' or 'ge0'")
    if side == "ge0":
        M0 = K.module_at(0)
        d0 = K.diff_at(0)
        kernel = [x for x in range(M0.carrier_size) if d0(x) == 0]
        sub, index = _submodule(M0, kernel)
        modules = {n: M for n, M in K.modules.items() if n > 0}
        modules[0] = sub
        diffs = {}
        for n, d in K.diffs.items():
            if n > 1:
                diffs[n] = d
            elif n == 1:
                diffs[1] = ModuleMorphism(
                    K.module_at(1), sub, tuple(index[v] for v in d.values))
        out = ChainComplex(K.base, modules, diffs)
    else:
        M0 = K.module_at(0)
        d1 = K.diff_at(1)
        image = sorted({d1(x) for x in range(d1.source.carrier_size)})
        Q, coset_of = _quotient_module(M0, image)
        modules = {n: M for n, M in K.modules.items() if n < 0}
        modules[0] = Q
        diffs = {}
        for n, d in K.diffs.items():
            if n < 0:
                diffs[n] = d
            elif n == 0:
                # induced map on cosets; well defined since d0(im d1) = 0
                values = []
                for c in range(Q.carrier_size):
                    rep = next(x for x in range(M0.carrier_size) if coset_of[x] == c)
                    values.append(d.values[rep])
                diffs[0] = ModuleMorphism(Q, K.module_at(-1), tuple(values))
        out = ChainComplex(K.base, modules, diffs)
    bad = out.verify()
    if bad is not None:
        raise StructuralError("truncation broke the complex: %s" % (bad,))
    return out


def heart_check(K: ChainComplex) -> dict:
    """True exactly when homology is concentrated in degree 0 and the zigzag
    K <- tau_{>=0} K -> tau_{<=0} tau_{>=0} K consists of quasi-isomorphisms."""
    bad = K.verify()
    if bad is not None:
        raise InputError("complex invalid: %s" % (bad,))
    concentrated = True
    for n in K.degrees():
        if n != 0 and homology(K, n).module.carrier_size != 1:
            concentrated = False
    up = truncate(K, "ge0")
    bottom = truncate(up, "le0")
    # inclusion tau_{>=0} K -> K
    incl_maps = {}
    for n, M in up.modules.items():
        if n > 0:
            incl_maps[n] = ModuleMorphism(M, K.module_at(n),
                                          tuple(range(M.carrier_size)))
        else:
            M0 = K.module_at(0)
            d0 = K.diff_at(0)
            kernel = [x for x in range(M0.carrier_size) if d0(x) == 0]
            incl_maps[0] = ModuleMorphism(M, M0, tuple(kernel))
    incl = ChainMap(up, K, incl_maps)
    # projection tau_{>=0} K -> tau_{<=0} tau_{>=0} K
    d1 = up.diff_at(1)
    image = sorted({d1(x) for x in range(d1.source.carrier_size)})
    _, coset_of = _quotient_module(up.module_at(0), image)
    proj_maps = {0: ModuleMorphism(up.module_at(0), bottom.module_at(0),
                                   tuple(coset_of))}
    proj = ChainMap(up, bottom, proj_maps)
    incl_ok = incl.verify() is None and is_quasi_iso(incl)
    proj_ok = proj.verify() is None and is_quasi_iso(proj)
    return {
        "concentrated_in_degree_0": concentrated,
        "zigzag_quasi_iso": incl_ok and proj_ok,
        "verdict": concentrated and incl_ok and proj_ok,
        "indexing": INDEXING_NOTE,
    }


# --- sections of complexes over the basis --------------------------------------


def tilde_complex_check(T: GammaSemiring, f: ChainMap,
                        sg: SpecGamma | None = None) -> dict:
    """Compare quasi-isomorphism globally and over every basic open; the
    equivalence of the two answers is the affine ingredient under test."""
    bad = f.verify()
    if bad is not None:
        raise PreconditionError("not a chain map: %s" % (bad,))
    if sg is None:
        sg = spec(T)
    global_verdict = is_quasi_iso(f)
    per_open = {}
    skipped = {}
    for a in range(T.carrier_size):
        try:
            S = close_multiplicative(T, [a])
        except DegenerateSystemError:
            per_open[a] = True  # zero sections: every map is a quasi-iso
            continue
        try:
            locK = {n: localize_module(T, S, M) for n, M in f.source.modules.items()}
            locL = {n: localize_module(T, S, M) for n, M in f.target.modules.items()}
        except InputError as exc:
            skipped[a] = str(exc)
            continue
        lmodK = {n: lm.module for n, lm in locK.items()}
        lmodL = {n: lm.module for n, lm in locL.items()}
        ldiffK = {}
        ok = True
        for n, d in f.source.diffs.items():
            if n in locK and (n - 1) in locK:
                lm = localize_morphism(locK[n], locK[n - 1], d)
            elif n in locK:
                lm = ModuleMorphism(lmodK[n], zero_module(T),
                                    tuple(0 for _ in range(lmodK[n].carrier_size)))
            else:
                continue
            if lm is None:
                ok = False
                break
            ldiffK[n] = lm
        ldiffL = {}
        if ok:
            for n, d in f.target.diffs.items():
                if n in locL and (n - 1) in locL:
                    lm = localize_morphism(locL[n], locL[n - 1], d)
                elif n in locL:
                    lm = ModuleMorphism(lmodL[n], zero_module(T),
                                        tuple(0 for _ in range(lmodL[n].carrier_size)))
                else:
                    continue
                if lm is None:
                    ok = False
                    break
                ldiffL[n] = lm
        lmaps = {}
        if ok:
            for n in f.degrees():
                if n in locK and n in locL:
                    lm = localize_morphism(locK[n], locL[n], f.map_at(n))
                    if lm is None:
                        ok = False
                        break
                    lmaps[n] = lm
        if not ok:
            skipped[a] = "localized morphism not well defined"
            continue
        Ka = ChainComplex(T, lmodK, ldiffK)
        La = ChainComplex(T, lmodL, ldiffL)
        fa = ChainMap(Ka, La, lmaps)
        bad = Ka.verify() or La.verify() or fa.verify()
        if bad is not None:
            skipped[a] = "localized complex defective: %s" % (bad,)
            continue
        per_open[a] = is_quasi_iso(fa)
    agreement = global_verdict == all(per_open.values()) if per_open else True
    return {
        "global_quasi_iso": global_verdict,
        "per_open": per_open,
        "skipped": skipped,
        "preserved_and_reflected": agreement,
        "indexing": INDEXING_NOTE,
    }
