"""The tilde presheaf on basic opens and the affine-equivalence ingredients.

Sections over the basic open D(a) are the localized modules at the system
generated by a; a degenerate system (closure reaching 0) yields the zero
section, which is consistent because such an element lies in every prime.
Restriction maps are the unique section morphisms commuting with the unit
maps from the underlying module; nonexistence or non-uniqueness is recorded
as a presheaf defect rather than raised, so the hypotheses of the affine
theorem stay observable per instance.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .errors import DegenerateSystemError, InputError, ResourceError
from .ideals import SpecGamma, spec
from .localize import close_multiplicative
from .modules import (
    GammaModule,
    GroupCompletionResult,
    LocalizedModuleResult,
    ModuleMorphism,
    enumerate_module_homs,
    group_completion,
    localize_module,
    localize_morphism,
    zero_module,
)
from .structures import GammaSemiring


@dataclass(frozen=True)
class Section:
    element: int
    kind: str  # "zero" | "module" | "defective"
    module: GammaModule
    loc: LocalizedModuleResult | None = None
    defect: dict | None = None

    @property
    def unit_values(self) -> tuple[int, ...] | None:
        if self.kind == "zero":
            return None
        if self.loc is not None and self.loc.unit is not None:
            return self.loc.unit.values
        return None


@dataclass(frozen=True)
class Restriction:
    source: int
    target: int
    morphism: ModuleMorphism | None
    defect: dict | None = None


@dataclass(frozen=True)
class BasisPresheaf:
    base: GammaSemiring
    original: GammaModule
    completed: GroupCompletionResult
    spectrum: SpecGamma
    sections: tuple[Section, ...]
    inclusions: tuple[tuple[int, int], ...]
    restrictions: dict
    defects: tuple[dict, ...]

    def section(self, a: int) -> Section:
        return self.sections[a]

    def restriction(self, a: int, b: int) -> Restriction:
        return self.restrictions[(a, b)]

    @property
    def defect_free(self) -> bool:
        return not self.defects

    def as_dict(self) -> dict:
        return {
            "sections": [
                {
                    "element": s.element,
                    "kind": s.kind,
                    "size": s.module.carrier_size,
                    "invariant_factors": (
                        [d for d in s.loc.tensor_result.invariant_factors if d > 1]
                        if s.loc is not None else []
                    ),
                }
                for s in self.sections
            ],
            "inclusions": [list(p) for p in self.inclusions],
            "defects": list(self.defects),
        }


def tilde(T: GammaSemiring, M: GammaModule, sg: SpecGamma | None = None,
          hom_budget: int = 200_000) -> BasisPresheaf:
    """Sections on every D(a) with unit-compatible restriction maps."""
    if sg is None:
        sg = spec(T)
    completed = group_completion(M)
    Mgp = completed.module
    n = T.carrier_size
    defects: list[dict] = []
    sections: list[Section] = []
    for a in range(n):
        try:
            S = close_multiplicative(T, [a])
        except DegenerateSystemError:
            sections.append(Section(a, "zero", zero_module(T)))
            continue
        try:
            lm = localize_module(T, S, Mgp)
        except InputError as exc:
            d = {"kind": "section_unconstructible", "element": a, "detail": str(exc)}
            defects.append(d)
            sections.append(Section(a, "defective", zero_module(T), None, d))
            continue
        sec = Section(a, "module", lm.module, lm)
        if lm.unit is None:
            d = {"kind": "section_missing_unit", "element": a,
                 "detail": list(lm.defects)}
            defects.append(d)
            sec = Section(a, "defective", lm.module, lm, d)
        sections.append(sec)

    opens = [frozenset(sg.basic_opens[a]) for a in range(n)]
    inclusions = tuple(
        (a, b) for a in range(n) for b in range(n) if opens[b] <= opens[a]
    )

    restrictions: dict = {}
    for (a, b) in inclusions:
        sa, sb = sections[a], sections[b]
        if sa.kind == "defective" or sb.kind == "defective":
            restrictions[(a, b)] = Restriction(a, b, None,
                                               {"kind": "endpoint_defective"})
            continue
        if sa.kind == "zero":
            h = ModuleMorphism(sa.module, sb.module, (0,))
            # from the zero section, only the zero map exists; it commutes
            # with units only when the target unit is zero
            if sb.kind != "zero" and sb.unit_values is not None and any(
                v != 0 for v in sb.unit_values
            ):
                d = {"kind": "restriction_nonexistent", "pair": [a, b],
                     "reason": "zero source with nonzero target unit"}
                defects.append(d)
                restrictions[(a, b)] = Restriction(a, b, None, d)
            else:
                restrictions[(a, b)] = Restriction(a, b, h)
            continue
        if sb.kind == "zero":
            h = ModuleMorphism(sa.module, sb.module,
                               tuple(0 for _ in range(sa.module.carrier_size)))
            restrictions[(a, b)] = Restriction(a, b, h)
            continue
        ua, ub = sa.unit_values, sb.unit_values
        candidates = [
            h for h in enumerate_module_homs(sa.module, sb.module, hom_budget)
            if all(h(ua[m]) == ub[m] for m in range(Mgp.carrier_size))
        ]
        if not candidates:
            d = {"kind": "restriction_nonexistent", "pair": [a, b]}
            defects.append(d)
            restrictions[(a, b)] = Restriction(a, b, None, d)
        elif len(candidates) > 1:
            d = {"kind": "restriction_not_unique", "pair": [a, b],
                 "count": len(candidates)}
            defects.append(d)
            restrictions[(a, b)] = Restriction(a, b, None, d)
        else:
            restrictions[(a, b)] = Restriction(a, b, candidates[0])

    # identity, cocycle, and generator-independence checks
    for a in range(n):
        r = restrictions.get((a, a))
        if r is not None and r.morphism is not None:
            if r.morphism.values != tuple(range(sections[a].module.carrier_size)):
                defects.append({"kind": "restriction_identity_violated", "element": a})
    incl_set = set(inclusions)
    for (a, b) in inclusions:
        for c in range(n):
            if (b, c) in incl_set and (a, c) in incl_set:
                rab = restrictions[(a, b)].morphism
                rbc = restrictions[(b, c)].morphism
                rac = restrictions[(a, c)].morphism
                if rab is None or rbc is None or rac is None:
                    continue
                comp = tuple(rbc.values[v] for v in rab.values)
                if comp != rac.values:
                    defects.append({
                        "kind": "restriction_triangle_violated",
                        "triple": [a, b, c],
                    })
    for a in range(n):
        for b in range(n):
            if a < b and opens[a] == opens[b]:
                rab = restrictions.get((a, b))
                rba = restrictions.get((b, a))
                if rab is None or rba is None or rab.morphism is None or rba.morphism is None:
                    defects.append({"kind": "equal_open_sections_incomparable",
                                    "pair": [a, b]})
                    continue
                fwd = rab.morphism.values
                bwd = rba.morphism.values
                if tuple(bwd[v] for v in fwd) != tuple(range(len(fwd))) or \
                   tuple(fwd[v] for v in bwd) != tuple(range(len(bwd))):
                    defects.append({"kind": "equal_open_sections_not_isomorphic",
                                    "pair": [a, b]})

    return BasisPresheaf(
        base=T,
        original=M,
        completed=completed,
        spectrum=sg,
        sections=tuple(sections),
        inclusions=inclusions,
        restrictions=restrictions,
        defects=tuple(defects),
    )


def minimal_basic_cover(P: BasisPresheaf) -> tuple[int, ...] | None:
    """Smallest (then lexicographically least) element set whose basic opens
    cover the spectrum; the empty cover when the spectrum is empty."""
    points = set(range(P.spectrum.point_count))
    if not points:
        return ()
    n = P.base.carrier_size
    opens = [set(P.spectrum.basic_opens[a]) for a in range(n)]
    for size in range(1, n + 1):
        for combo in combinations(range(n), size):
            union = set()
            for a in combo:
                union |= opens[a]
            if union == points:
                return combo
    return None


def _compatible_families(P: BasisPresheaf, cover, budget: int):
    """Enumerate tuples of sections agreeing on pairwise basic overlaps."""
    T = P.base
    sizes = [P.sections[a].module.carrier_size for a in cover]
    total = 1
    for s in sizes:
        total *= s
    if total > budget:
        raise ResourceError(
            "family enumeration needs %d tuples, budget %d" % (total, budget),
            required=total)
    # overlap constraints through the basis law D(a) & D(b) = D({a,b,b}_g)
    constraints = []
    for i, a in enumerate(cover):
        for j, b in enumerate(cover):
            if i >= j:
                continue
            for g in T.modes():
                c = T.tern[g][a][b][b]
                ra = P.restrictions.get((a, c))
                rb = P.restrictions.get((b, c))
                if ra is None or rb is None or ra.morphism is None or rb.morphism is None:
                    return None, {"kind": "overlap_restriction_missing",
                                  "pair": [a, b], "overlap": c}
                constraints.append((i, j, ra.morphism.values, rb.morphism.values))
    families = []
    idx = [0] * len(cover)

    def rec(pos):
        if pos == len(cover):
            families.append(tuple(idx))
            return
        for v in range(sizes[pos]):
            idx[pos] = v
            ok = True
            for (i, j, ra, rb) in constraints:
                if i < pos and j == pos and ra[idx[i]] != rb[v]:
                    ok = False
                    break
                if j < pos and i == pos and ra[v] != rb[idx[j]]:
                    ok = False
                    break
            if ok:
                rec(pos + 1)

    rec(0)
    return families, None


@dataclass(frozen=True)
class GlobalSectionsResult:
    cover: tuple[int, ...] | None
    equalizer_size: int | None
    comparison_is_bijective: bool
    witness: dict | None

    def as_dict(self) -> dict:
        return {
            "cover": list(self.cover) if self.cover is not None else None,
            "equalizer_size": self.equalizer_size,
            "isomorphic_to_completed_module": self.comparison_is_bijective,
            "witness": self.witness,
        }


def global_sections(P: BasisPresheaf, cover=None, budget: int = 200_000) -> GlobalSectionsResult:
    """Equalizer over a minimal basic cover, compared with the completed
    module through the unit maps."""
    if cover is None:
        cover = minimal_basic_cover(P)
    if cover is None:
        return GlobalSectionsResult(None, None, False, {"kind": "no_basic_cover"})
    Mgp = P.completed.module
    if len(cover) == 0:
        # empty spectrum: the equalizer over the empty cover is the zero module
        return GlobalSectionsResult(
            (), 1, Mgp.carrier_size == 1,
            None if Mgp.carrier_size == 1 else {"kind": "module_not_zero_over_empty_spec"})
    families, err = _compatible_families(P, cover, budget)
    if families is None:
        return GlobalSectionsResult(tuple(cover), None, False, err)
    units = []
    for a in cover:
        uv = P.sections[a].unit_values
        if uv is None:
            return GlobalSectionsResult(tuple(cover), len(families), False,
                                        {"kind": "unit_missing", "element": a})
        units.append(uv)
    family_set = set(families)
    image = []
    for m in range(Mgp.carrier_size):
        tup = tuple(units[i][m] for i in range(len(cover)))
        if tup not in family_set:
            return GlobalSectionsResult(
                tuple(cover), len(families), False,
                {"kind": "unit_tuple_not_compatible", "element": m})
        image.append(tup)
    injective = len(set(image)) == Mgp.carrier_size
    surjective = len(set(image)) == len(family_set)
    witness = None
    if not injective:
        witness = {"kind": "comparison_not_injective"}
    elif not surjective:
        missing = sorted(family_set - set(image))[0]
        witness = {"kind": "comparison_not_surjective", "family": list(missing)}
    return GlobalSectionsResult(tuple(cover), len(families),
                                injective and surjective, witness)


@dataclass(frozen=True)
class GlueReport:
    cover: tuple[int, ...]
    target: int | None
    families: int
    glue_exists_for_all: bool
    glue_unique_for_all: bool
    witness: dict | None

    @property
    def passed(self) -> bool:
        return self.glue_exists_for_all and self.glue_unique_for_all

    def as_dict(self) -> dict:
        return {
            "cover": list(self.cover),
            "target": self.target,
            "families": self.families,
            "exists": self.glue_exists_for_all,
            "unique": self.glue_unique_for_all,
            "witness": self.witness,
        }


def check_gluing(P: BasisPresheaf, cover, budget: int = 200_000) -> GlueReport:
    """Every compatible family over the cover must glue to exactly one
    section over the covered open (realized as some D(a0))."""
    cover = tuple(cover)
    n = P.base.carrier_size
    opens = [set(P.spectrum.basic_opens[a]) for a in range(n)]
    covered = set()
    for a in cover:
        covered |= opens[a]
    target = None
    for a in range(n):
        if opens[a] == covered:
            target = a
            break
    if target is None:
        return GlueReport(cover, None, 0, False, False,
                          {"kind": "covered_open_not_basic"})
    families, err = _compatible_families(P, cover, budget)
    if families is None:
        return GlueReport(cover, target, 0, False, False, err)
    res = []
    for a in cover:
        r = P.restrictions.get((target, a))
        if r is None or r.morphism is None:
            return GlueReport(cover, target, len(families), False, False,
                              {"kind": "restriction_to_cover_missing", "element": a})
        res.append(r.morphism.values)
    counts: dict[tuple, int] = {f: 0 for f in families}
    size = P.sections[target].module.carrier_size
    for s in range(size):
        tup = tuple(res[i][s] for i in range(len(cover)))
        if tup in counts:
            counts[tup] += 1
        else:
            return GlueReport(cover, target, len(families), False, False,
                              {"kind": "restricted_section_incompatible", "section": s})
    missing = [f for f, c in counts.items() if c == 0]
    multiple = [f for f, c in counts.items() if c > 1]
    witness = None
    if missing:
        witness = {"kind": "family_without_glue", "family": list(missing[0])}
    elif multiple:
        witness = {"kind": "family_with_multiple_glues", "family": list(multiple[0])}
    return GlueReport(cover, target, len(families), not missing, not multiple, witness)


@dataclass(frozen=True)
class FullFaithfulnessVerdict:
    hom_count: int
    family_count: int
    bijective: bool
    witness: dict | None

    def as_dict(self) -> dict:
        return {
            "hom_count": self.hom_count,
            "natural_family_count": self.family_count,
            "bijective": self.bijective,
            "witness": self.witness,
        }


def check_full_faithfulness(
    T: GammaSemiring, M: GammaModule, N: GammaModule,
    sg: SpecGamma | None = None, budget: int = 200_000,
) -> FullFaithfulnessVerdict:
    """Compare |Hom(M^gp, N^gp)| with the number of basis-natural families of
    section morphisms, exhibiting the bijection by localizing morphisms."""
    if sg is None:
        sg = spec(T)
    PM = tilde(T, M, sg)
    PN = tilde(T, N, sg)
    homs = enumerate_module_homs(PM.completed.module, PN.completed.module, budget)
    n = T.carrier_size

    per_element: list[list[ModuleMorphism]] = []
    for a in range(n):
        per_element.append(
            enumerate_module_homs(PM.sections[a].module, PN.sections[a].module, budget))

    incl = [p for p in PM.inclusions]
    families: list[tuple[int, ...]] = []
    choice = [0] * n

    def natural_so_far(pos) -> bool:
        for (a, b) in incl:
            if a > pos or b > pos:
                continue
            rM = PM.restrictions[(a, b)].morphism
            rN = PN.restrictions[(a, b)].morphism
            if rM is None or rN is None:
                return False
            ha = per_element[a][choice[a]].values
            hb = per_element[b][choice[b]].values
            for x in range(len(rM.values)):
                if rN.values[ha[x]] != hb[rM.values[x]]:
                    return False
        return True

    def rec(pos):
        if pos == n:
            families.append(tuple(choice))
            return
        for i in range(len(per_element[pos])):
            choice[pos] = i
            if natural_so_far(pos):
                rec(pos + 1)

    if all(per_element[a] for a in range(n)):
        rec(0)

    # forward map: localize each hom degreewise
    family_keys = {f for f in families}
    images = set()
    witness = None
    for h in homs:
        key = []
        ok = True
        for a in range(n):
            sa, sb = PM.sections[a], PN.sections[a]
            if sa.kind == "zero" or sb.kind == "zero":
                loc = ModuleMorphism(sa.module, sb.module,
                                     tuple(0 for _ in range(sa.module.carrier_size)))
            elif sa.loc is None or sb.loc is None:
                ok = False
                break
            else:
                locm = localize_morphism(sa.loc, sb.loc, h)
                if locm is None:
                    ok = False
                    break
                loc = locm
            try:
                key.append(next(
                    i for i, cand in enumerate(per_element[a])
                    if cand.values == loc.values))
            except StopIteration:
                ok = False
                break
        if not ok:
            witness = {"kind": "hom_does_not_localize", "map": list(h.values)}
            break
        tkey = tuple(key)
        if tkey not in family_keys:
            witness = {"kind": "localized_hom_not_natural", "map": list(h.values)}
            break
        if tkey in images:
            witness = {"kind": "forward_map_not_injective", "map": list(h.values)}
            break
        images.add(tkey)
    bijective = witness is None and len(images) == len(family_keys) == len(homs)
    if witness is None and not bijective:
        witness = {"kind": "counts_differ"}
    return FullFaithfulnessVerdict(len(homs), len(families), bijective, witness)
