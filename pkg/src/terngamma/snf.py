"""Smith normal form over the integers, with exact transform tracking.

Plain Python integers throughout, so there is no overflow to guard against.
The routine returns unimodular U, V with U * A * V = D diagonal,
d1 | d2 | ... , plus the inverse of V, which quotient constructions need to
move between generator coordinates and diagonal coordinates.  The product
identity is re-verified exactly before returning.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InputError, StructuralError


def _identity(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def _matmul(A: list[list[int]], B: list[list[int]]) -> list[list[int]]:
    if not A or not B:
        return []
    n, mid, m = len(A), len(B), len(B[0])
    out = [[0] * m for _ in range(n)]
    for i in range(n):
        Ai = A[i]
        Oi = out[i]
        for t in range(mid):
            a = Ai[t]
            if a:
                Bt = B[t]
                for j in range(m):
                    Oi[j] += a * Bt[j]
    return out


@dataclass(frozen=True)
class SmithNormalForm:
    diag: tuple[int, ...]          # full main diagonal of D, d1 | d2 | ... then zeros
    U: tuple[tuple[int, ...], ...]
    V: tuple[tuple[int, ...], ...]
    Vinv: tuple[tuple[int, ...], ...]
    rows: int
    cols: int

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diag if d != 0)

    @property
    def invariant_factors(self) -> tuple[int, ...]:
        return self.diag

    def as_dict(self) -> dict:
        return {"diag": list(self.diag), "rank": self.rank}


def smith_normal_form(matrix) -> SmithNormalForm:
    rows = [list(r) for r in matrix]
    m = len(rows)
    n = len(rows[0]) if m else 0
    if any(len(r) != n for r in rows):
        raise InputError("matrix rows must have equal length")
    if any(not isinstance(v, int) for r in rows for v in r):
        raise InputError("matrix entries must be exact integers")
    D = [list(r) for r in rows]
    U = _identity(m)
    V = _identity(n)
    Vinv = _identity(n)

    def row_swap(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def row_neg(i):
        D[i] = [-v for v in D[i]]
        U[i] = [-v for v in U[i]]

    def row_add(i, j, q):
        # row_i += q * row_j
        Di, Dj = D[i], D[j]
        Ui, Uj = U[i], U[j]
        for t in range(n):
            Di[t] += q * Dj[t]
        for t in range(m):
            Ui[t] += q * Uj[t]

    def col_swap(i, j):
        for r in D:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]
        Vinv[i], Vinv[j] = Vinv[j], Vinv[i]

    def col_add(j, i, q):
        # col_j += q * col_i ; Vinv row_i -= q * row_j
        for r in D:
            r[j] += q * r[i]
        for r in V:
            r[j] += q * r[i]
        Ri, Rj = Vinv[i], Vinv[j]
        for t in range(n):
            Ri[t] -= q * Rj[t]

    def submatrix_pivot(s):
        best = None
        for i in range(s, m):
            Di = D[i]
            for j in range(s, n):
                v = abs(Di[j])
                if v and (best is None or v < best[0]):
                    best = (v, i, j)
                    if v == 1:
                        return best
        return best

    for s in range(min(m, n)):
        while True:
            best = submatrix_pivot(s)
            if best is None:
                break
            _, pi, pj = best
            if pi != s:
                row_swap(s, pi)
            if pj != s:
                col_swap(s, pj)
            if D[s][s] < 0:
                row_neg(s)
            pivot = D[s][s]
            dirty = False
            for i in range(s + 1, m):
                if D[i][s]:
                    row_add(i, s, -(D[i][s] // pivot))
                    if D[i][s]:
                        dirty = True
            for j in range(s + 1, n):
                if D[s][j]:
                    col_add(j, s, -(D[s][j] // pivot))
                    if D[s][j]:
                        dirty = True
            if dirty:
                continue
            # cross is clear; enforce that the pivot divides the rest
            fix = None
            for i in range(s + 1, m):
                Di = D[i]
                for j in range(s + 1, n):
                    if Di[j] % pivot:
                        fix = i
                        break
                if fix is not None:
                    break
            if fix is None:
                break
            row_add(s, fix, 1)
        if submatrix_pivot(s) is None:
            break

    diag = tuple(D[i][i] for i in range(min(m, n)))
    # exact verification of the product identity and the tracked inverse
    check = _matmul(_matmul(U, rows), V) if m and n else []
    for i in range(m):
        for j in range(n):
            expect = diag[i] if i == j and i < len(diag) else 0
            if check[i][j] != expect:
                raise StructuralError("smith normal form product identity violated")
    ident = _matmul(V, Vinv) if n else []
    for i in range(n):
        for j in range(n):
            if ident[i][j] != (1 if i == j else 0):
                raise StructuralError("tracked inverse of V is wrong")
    for i in range(len(diag) - 1):
        if diag[i + 1] and diag[i] and diag[i + 1] % diag[i]:
            raise StructuralError("divisibility chain violated")
        if diag[i] == 0 and diag[i + 1] != 0:
            raise StructuralError("zero diagonal entry precedes a nonzero one")
    return SmithNormalForm(
        diag=diag,
        U=tuple(tuple(r) for r in U),
        V=tuple(tuple(r) for r in V),
        Vinv=tuple(tuple(r) for r in Vinv),
        rows=m,
        cols=n,
    )


@dataclass(frozen=True)
class AbelianPresentation:
    """Generator labels plus an integer relation matrix (rows = relations)."""

    generators: tuple[str, ...]
    relations: tuple[tuple[int, ...], ...]

    def smith(self) -> SmithNormalForm:
        if not self.relations:
            return smith_normal_form([[0] * len(self.generators)])
        return smith_normal_form(self.relations)


class PresentedGroup:
    """Z^k modulo the row lattice of a relation matrix, in table form.

    Only finite quotients can be tabled; a nonzero free rank raises.
    Element 0 is the zero coset, and ids enumerate the diagonal-coordinate
    tuples in mixed-radix order, which names every coset canonically.
    """

    def __init__(self, presentation: AbelianPresentation):
        self.presentation = presentation
        self.k = len(presentation.generators)
        snf = presentation.smith()
        self.snf = snf
        diag = list(snf.diag) + [0] * (self.k - len(snf.diag))
        if any(d == 0 for d in diag):
            raise InputError(
                "presented group has free rank %d; only finite groups can "
                "be tabled" % sum(1 for d in diag if d == 0))
        self.moduli = diag  # per V-coordinate
        self.positions = [j for j, d in enumerate(diag) if d > 1]
        self.orders = [diag[j] for j in self.positions]
        self.size = 1
        for o in self.orders:
            self.size *= o

    def coords_of_vec(self, x) -> tuple[int, ...]:
        V = self.snf.V
        return tuple(
            sum(x[i] * V[i][j] for i in range(self.k)) % self.moduli[j]
            for j in self.positions
        )

    def elem_of_vec(self, x) -> int:
        return self.elem_of_coords(self.coords_of_vec(x))

    def elem_of_coords(self, coords) -> int:
        e = 0
        for c, o in zip(coords, self.orders):
            e = e * o + (c % o)
        return e

    def coords_of_elem(self, e: int) -> tuple[int, ...]:
        out = []
        for o in reversed(self.orders):
            out.append(e % o)
            e //= o
        return tuple(reversed(out))

    def vec_of_elem(self, e: int) -> list[int]:
        coords = self.coords_of_elem(e)
        y = [0] * self.k
        for j, c in zip(self.positions, coords):
            y[j] = c
        Vinv = self.snf.Vinv
        return [sum(y[j] * Vinv[j][i] for j in range(self.k)) for i in range(self.k)]

    def add(self, e1: int, e2: int) -> int:
        c1 = self.coords_of_elem(e1)
        c2 = self.coords_of_elem(e2)
        return self.elem_of_coords(tuple((a + b) % o for a, b, o in zip(c1, c2, self.orders)))

    def neg(self, e: int) -> int:
        c = self.coords_of_elem(e)
        return self.elem_of_coords(tuple((-a) % o for a, o in zip(c, self.orders)))

    def lattice_basis(self) -> list[list[int]]:
        """Rows spanning the relation lattice: d_j times row j of Vinv."""
        rows = []
        for j, d in enumerate(self.moduli):
            if d != 0:
                rows.append([d * v for v in self.snf.Vinv[j]])
        return rows

    def contains_vec(self, x) -> bool:
        V = self.snf.V
        for j in range(self.k):
            y = sum(x[i] * V[i][j] for i in range(self.k))
            d = self.moduli[j]
            if d == 0:
                if y != 0:
                    return False
            elif y % d:
                return False
        return True

    def nontrivial_invariant_factors(self) -> tuple[int, ...]:
        return tuple(self.orders)
