"""Finite commutative ternary Gamma-semirings as dense tables.

A structure is a carrier {0, ..., n-1} with an addition table and, for every
mode in Gamma, a total ternary multiplication table.  Everything is immutable
after construction, and every law is decided by scanning the full finite
quantifier range.  The six checked laws are:

  i    (carrier, +, 0) is a commutative monoid
  ii   every ternary table is total (guaranteed by the representation)
  iii  distributivity of the ternary product in each of its three slots
  iv   ternary associativity across modes:
         {a, b, {c, d, e}_g}_d  ==  {{a, b, c}_g, d, e}_d
  v    absorption by zero: {a, 0, b}_g == 0
  vi   symmetry in the three slots (both generating transpositions)

Failure witnesses are lexicographically minimal in the documented scan order
of each law (mode indices before element indices, row-major), so identical
inputs always produce identical reports.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable

import numpy as np

from .errors import InputError

AXIOM_KEYS = ("i", "ii", "iii", "iv", "v", "vi")

AXIOM_NAMES = {
    "i": "additive commutative monoid",
    "ii": "ternary operations total",
    "iii": "distributivity in each slot",
    "iv": "ternary associativity across modes",
    "v": "absorption by zero",
    "vi": "symmetry in the three slots",
}


@dataclass(frozen=True)
class Witness:
    """A refuting assignment: named slots plus the two unequal values."""

    law: str
    slots: tuple[tuple[str, int], ...]
    lhs: int
    rhs: int

    def as_dict(self) -> dict:
        return {
            "law": self.law,
            "slots": {k: v for k, v in self.slots},
            "lhs": self.lhs,
            "rhs": self.rhs,
        }


@dataclass(frozen=True)
class AxiomVerdict:
    passed: bool
    checked: int
    witness: Witness | None = None

    def as_dict(self) -> dict:
        d = {"passed": self.passed, "checked": self.checked}
        if self.witness is not None:
            d["witness"] = self.witness.as_dict()
        return d


@dataclass(frozen=True)
class AxiomReport:
    """Per-axiom verdicts for the six structure laws."""

    verdicts: dict[str, AxiomVerdict]
    scan_mode: str = "exhaustive"

    @property
    def all_passed(self) -> bool:
        return all(v.passed for v in self.verdicts.values())

    def failing(self) -> list[str]:
        return [k for k in AXIOM_KEYS if not self.verdicts[k].passed]

    def as_dict(self) -> dict:
        return {
            "scan_mode": self.scan_mode,
            "all_passed": self.all_passed,
            "axioms": {
                k: dict(name=AXIOM_NAMES[k], **self.verdicts[k].as_dict())
                for k in AXIOM_KEYS
            },
        }


@dataclass(frozen=True)
class GammaSemiring:
    """Dense-table model of a finite ternary Gamma-semiring.

    ``add[a][b]`` is the sum and ``tern[g][a][b][c]`` the mode-``g`` ternary
    product.  Element 0 is required to be the additive zero; that it really
    is neutral is checked by :func:`check_axioms`, not assumed.
    """

    carrier_size: int
    gamma_labels: tuple[str, ...]
    add: tuple[tuple[int, ...], ...]
    tern: tuple[tuple[tuple[tuple[int, ...], ...], ...], ...]
    zero: int = 0

    def __post_init__(self):
        n = self.carrier_size
        if n < 1:
            raise InputError("carrier size must be at least 1")
        if self.zero != 0:
            raise InputError("element 0 must be the additive zero")
        if not self.gamma_labels:
            raise InputError("at least one mode is required")
        if len(set(self.gamma_labels)) != len(self.gamma_labels):
            raise InputError("mode labels must be unique")
        if len(self.add) != n or any(len(r) != n for r in self.add):
            raise InputError("addition table must be %d x %d" % (n, n))
        if any(not (0 <= v < n) for r in self.add for v in r):
            raise InputError("addition table entry out of range")
        if len(self.tern) != len(self.gamma_labels):
            raise InputError("one ternary table per mode is required")
        for g, tg in enumerate(self.tern):
            if len(tg) != n or any(
                len(p) != n or any(len(q) != n for q in p) for p in tg
            ):
                raise InputError(
                    "ternary table for mode %r must be %d^3" % (self.gamma_labels[g], n)
                )
            if any(not (0 <= v < n) for p in tg for q in p for v in q):
                raise InputError(
                    "ternary table for mode %r has an entry out of range"
                    % (self.gamma_labels[g],)
                )

    @cached_property
    def add_np(self) -> np.ndarray:
        return np.array(self.add, dtype=np.int64)

    @cached_property
    def tern_np(self) -> tuple[np.ndarray, ...]:
        return tuple(np.array(t, dtype=np.int64) for t in self.tern)

    @property
    def gamma_count(self) -> int:
        return len(self.gamma_labels)

    def elements(self) -> range:
        return range(self.carrier_size)

    def modes(self) -> range:
        return range(len(self.gamma_labels))

    def _check_element(self, x: int, name: str) -> None:
        if not isinstance(x, (int, np.integer)) or not (0 <= x < self.carrier_size):
            raise InputError("%s=%r is not a carrier index < %d" % (name, x, self.carrier_size))

    def _check_mode(self, g: int) -> None:
        if not isinstance(g, (int, np.integer)) or not (0 <= g < len(self.gamma_labels)):
            raise InputError("mode index %r out of range < %d" % (g, len(self.gamma_labels)))

    def plus(self, a: int, b: int) -> int:
        self._check_element(a, "a")
        self._check_element(b, "b")
        return self.add[a][b]

    def evaluate(self, a: int, b: int, c: int, g: int) -> int:
        """Evaluate {a, b, c}_g with full index validation."""
        self._check_element(a, "a")
        self._check_element(b, "b")
        self._check_element(c, "c")
        self._check_mode(g)
        return self.tern[g][a][b][c]


def evaluate_tern(T: GammaSemiring, a: int, b: int, c: int, g: int) -> int:
    """Functional alias for :meth:`GammaSemiring.evaluate`."""
    return T.evaluate(a, b, c, g)


def _first_mismatch(lhs: np.ndarray, rhs: np.ndarray) -> tuple[tuple[int, ...], int, int] | None:
    """Lexicographically first index where the arrays differ, with both values."""
    bad = lhs != rhs
    if not bad.any():
        return None
    idx = tuple(int(i) for i in np.argwhere(bad)[0])
    return idx, int(lhs[idx]), int(rhs[idx])


def check_axioms(T: GammaSemiring) -> AxiomReport:
    """Exhaustively verify or refute the six structure laws."""
    n = T.carrier_size
    k = T.gamma_count
    A = T.add_np
    idx = np.arange(n)
    verdicts: dict[str, AxiomVerdict] = {}

    # (i) additive commutative monoid: identity, commutativity, associativity.
    checked_i = n + n * n + n**3
    witness_i = None
    m = _first_mismatch(A[:, 0], idx)
    if m is None:
        m = _first_mismatch(A[0, :], idx)
        if m is not None:
            (a,), lhs, rhs = m
            witness_i = Witness("zero_identity", (("a", a),), lhs, rhs)
    else:
        (a,), lhs, rhs = m
        witness_i = Witness("zero_identity", (("a", a),), lhs, rhs)
    if witness_i is None:
        m = _first_mismatch(A, A.T)
        if m is not None:
            (a, b), lhs, rhs = m
            witness_i = Witness("add_commutativity", (("a", a), ("b", b)), lhs, rhs)
    if witness_i is None:
        # A[A,:][a,b,c] = (a+b)+c and A[:,A][a,b,c] = a+(b+c)
        m = _first_mismatch(A[A, :], A[:, A])
        if m is not None:
            (a, b, c), lhs, rhs = m
            witness_i = Witness(
                "add_associativity", (("a", a), ("b", b), ("c", c)), lhs, rhs
            )
    verdicts["i"] = AxiomVerdict(witness_i is None, checked_i, witness_i)

    # (ii) totality of the ternary tables holds by construction.
    verdicts["ii"] = AxiomVerdict(True, k * n**3, None)

    # (iii) distributivity in each slot.
    witness_iii = None
    checked_iii = 3 * k * n**4
    for g in range(k):
        Tg = T.tern_np[g]
        if witness_iii is not None:
            break
        for slot in range(3):
            moved = np.moveaxis(Tg, slot, 0)  # moved[x, rest...] with x in slot
            lhs = moved[A]  # [a, a2, rest...]
            rhs = A[moved[:, None], moved[None, :]]
            m = _first_mismatch(lhs, rhs)
            if m is not None:
                (a, a2, *rest), l, r = m
                others = [v for i, v in enumerate(("a", "b", "c")) if i != slot]
                slots = (
                    ("gamma", g),
                    ("slot", slot),
                    ("x", a),
                    ("x2", a2),
                    (others[0], rest[0]),
                    (others[1], rest[1]),
                )
                witness_iii = Witness("distributivity", slots, l, r)
                break
    verdicts["iii"] = AxiomVerdict(witness_iii is None, checked_iii, witness_iii)

    # (iv) ternary associativity across every ordered mode pair.
    witness_iv = None
    checked_iv = k * k * n**5
    for g in range(k):
        Tg = T.tern_np[g]
        for d in range(k):
            Td = T.tern_np[d]
            lhs = Td[:, :, Tg]  # [a, b, c, d, e] = {a, b, {c,d,e}_g}_d
            rhs = Td[Tg]       # [a, b, c, d, e] = {{a,b,c}_g, d, e}_d
            m = _first_mismatch(lhs, rhs)
            if m is not None:
                (a, b, c, dd, e), l, r = m
                witness_iv = Witness(
                    "associativity",
                    (("gamma", g), ("delta", d), ("a", a), ("b", b),
                     ("c", c), ("d", dd), ("e", e)),
                    l,
                    r,
                )
                break
        if witness_iv is not None:
            break
    verdicts["iv"] = AxiomVerdict(witness_iv is None, checked_iv, witness_iv)

    # (v) absorption by zero in the middle slot.
    witness_v = None
    checked_v = k * n * n
    for g in range(k):
        mid = T.tern_np[g][:, 0, :]
        m = _first_mismatch(mid, np.zeros_like(mid))
        if m is not None:
            (a, b), l, r = m
            witness_v = Witness("absorption", (("gamma", g), ("a", a), ("b", b)), l, r)
            break
    verdicts["v"] = AxiomVerdict(witness_v is None, checked_v, witness_v)

    # (vi) symmetry: the two generating transpositions.
    witness_vi = None
    checked_vi = 2 * k * n**3
    for g in range(k):
        Tg = T.tern_np[g]
        for name, perm in (("swap_first_two", (1, 0, 2)), ("swap_last_two", (0, 2, 1))):
            m = _first_mismatch(Tg, Tg.transpose(perm))
            if m is not None:
                (a, b, c), l, r = m
                witness_vi = Witness(
                    name, (("gamma", g), ("a", a), ("b", b), ("c", c)), l, r
                )
                break
        if witness_vi is not None:
            break
    verdicts["vi"] = AxiomVerdict(witness_vi is None, checked_vi, witness_vi)

    return AxiomReport(verdicts)


def generate_standard_family(modulus: int, gamma_subset: Iterable[int]) -> GammaSemiring:
    """The modular product family: {a,b,c}_g = a*b*c*g mod ``modulus``.

    Valid for every modulus >= 1 and nonempty set of residues, since modular
    multiplication is commutative and associative and 0 annihilates.
    """
    if not isinstance(modulus, int) or modulus < 1:
        raise InputError("modulus must be a positive integer")
    residues = sorted({g % modulus for g in gamma_subset})
    if not residues:
        raise InputError("gamma_subset must be nonempty")
    n = modulus
    add = tuple(tuple((a + b) % n for b in range(n)) for a in range(n))
    tern = tuple(
        tuple(
            tuple(tuple((a * b * c * g) % n for c in range(n)) for b in range(n))
            for a in range(n)
        )
        for g in residues
    )
    return GammaSemiring(
        carrier_size=n,
        gamma_labels=tuple(str(g) for g in residues),
        add=add,
        tern=tern,
    )


def build_z6_z4modes() -> GammaSemiring:
    """The Z6 carrier with Z4 modes and product {a,b,c}_g = abc + c*g mod 6.

    Shipped as a fixture; the axiom checker refutes absorption and symmetry
    for it, and those verdicts are themselves part of the deliverable.
    """
    n, modes = 6, range(4)
    add = tuple(tuple((a + b) % n for b in range(n)) for a in range(n))
    tern = tuple(
        tuple(
            tuple(tuple((a * b * c + c * g) % n for c in range(n)) for b in range(n))
            for a in range(n)
        )
        for g in modes
    )
    return GammaSemiring(
        carrier_size=n,
        gamma_labels=tuple(str(g) for g in modes),
        add=add,
        tern=tern,
    )


# ---------------------------------------------------------------------------
# Formula families over the natural numbers, checked on a finite window.
# ---------------------------------------------------------------------------

def _pairwise_products_plus_mode(a: int, b: int, c: int, g: int) -> int:
    return a * b + b * c + c * a + g


#: Formula families over (N, +) keyed by document name.  Each maps
#: (a, b, c, gamma) to a natural number; evaluation is exact and unbounded.
FORMULA_FAMILIES: dict[str, Callable[[int, int, int, int], int]] = {
    "pairwise-products-plus-mode": _pairwise_products_plus_mode,
}


@dataclass(frozen=True)
class FormulaFamily:
    """An unbounded structure over N given by a closed formula."""

    name: str
    func: Callable[[int, int, int, int], int] = field(compare=False)

    @staticmethod
    def by_name(name: str) -> "FormulaFamily":
        try:
            return FormulaFamily(name, FORMULA_FAMILIES[name])
        except KeyError:
            raise InputError("unknown formula family %r; known: %s"
                             % (name, sorted(FORMULA_FAMILIES))) from None


def check_axioms_sampled(
    family: FormulaFamily,
    range_bound: int,
    sample_budget: int = 1_000_000,
    gammas: Iterable[int] | None = None,
    seed: int = 0,
) -> AxiomReport:
    """Check the six laws for a formula family on the window [0, range_bound].

    Values are computed exactly in N, so a failure inside the window is a
    genuine counterexample for the unbounded structure.  When the quantifier
    space of a law exceeds ``sample_budget`` the law is spot-checked on a
    seeded uniform sample and the report is marked ``sampled``.
    """
    if not isinstance(range_bound, int) or range_bound < 1:
        raise InputError("window too small to evaluate nested terms; need range_bound >= 1")
    if sample_budget < 1:
        raise InputError("sample_budget must be positive")
    w = range_bound + 1
    elems = range(w)
    modes = sorted(set(gammas)) if gammas is not None else list(range(w))
    if not modes or any(g < 0 for g in modes):
        raise InputError("gamma window must be a nonempty set of naturals")
    f = family.func
    rng = np.random.default_rng(seed)
    sampled = False

    def scan(space_sizes, check, names, law):
        """Return (verdict, checked) scanning tuples in row-major order."""
        nonlocal sampled
        total = 1
        for s in space_sizes:
            total *= len(s)
        if total <= sample_budget:
            it = _product_lex(space_sizes)
            count = total
        else:
            sampled = True
            count = sample_budget
            it = (
                tuple(s[int(rng.integers(len(s)))] for s in space_sizes)
                for _ in range(sample_budget)
            )
        for tup in it:
            res = check(*tup)
            if res is not None:
                lhs, rhs = res
                return (
                    AxiomVerdict(
                        False, count,
                        Witness(law, tuple(zip(names, tup)), lhs, rhs),
                    ),
                    count,
                )
        return AxiomVerdict(True, count, None), count

    verdicts: dict[str, AxiomVerdict] = {}

    def chk_monoid(a, b, c):
        if a + b != b + a:
            return a + b, b + a
        if (a + b) + c != a + (b + c):
            return (a + b) + c, a + (b + c)
        if a + 0 != a:
            return a + 0, a
        return None

    verdicts["i"], _ = scan([elems, elems, elems], chk_monoid, ("a", "b", "c"), "monoid")
    verdicts["ii"] = AxiomVerdict(True, 0, None)

    def chk_dist(slot, g, x2, a, b, c):
        # base triple (a, b, c); x2 adds into the slot being tested
        base = [a, b, c]
        left = list(base)
        left[slot] = base[slot] + x2
        alt = list(base)
        alt[slot] = x2
        lhs = f(*(left + [g]))
        rhs = f(*(base + [g])) + f(*(alt + [g]))
        if lhs != rhs:
            return lhs, rhs
        return None

    verdicts["iii"], _ = scan(
        [[0, 1, 2], modes, elems, elems, elems, elems],
        chk_dist,
        ("slot", "gamma", "x2", "a", "b", "c"),
        "distributivity",
    )

    def chk_assoc(g, d, a, b, c, dd, e):
        lhs = f(a, b, f(c, dd, e, g), d)
        rhs = f(f(a, b, c, g), dd, e, d)
        if lhs != rhs:
            return lhs, rhs
        return None

    verdicts["iv"], _ = scan(
        [modes, modes, elems, elems, elems, elems, elems],
        chk_assoc,
        ("gamma", "delta", "a", "b", "c", "d", "e"),
        "associativity",
    )

    def chk_absorb(g, a, b):
        v = f(a, 0, b, g)
        if v != 0:
            return v, 0
        return None

    verdicts["v"], _ = scan([modes, elems, elems], chk_absorb, ("gamma", "a", "b"), "absorption")

    def chk_sym(g, a, b, c):
        v = f(a, b, c, g)
        if v != f(b, a, c, g):
            return v, f(b, a, c, g)
        if v != f(a, c, b, g):
            return v, f(a, c, b, g)
        return None

    verdicts["vi"], _ = scan([modes, elems, elems, elems], chk_sym, ("gamma", "a", "b", "c"), "symmetry")

    return AxiomReport(verdicts, scan_mode="sampled" if sampled else "exhaustive-window")


def _product_lex(spaces):
    """Row-major cartesian product of index lists."""
    if not spaces:
        yield ()
        return
    head, *rest = spaces
    for h in head:
        for tail in _product_lex(rest):
            yield (h,) + tail
