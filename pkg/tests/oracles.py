"""Independent brute-force oracles, written before the library internals.

Everything here computes directly from modular arithmetic or raw tables with
naive loops, deliberately sharing no code with the package, so that oracle
and implementation can disagree.
"""

from itertools import product


def std_tern(n):
    """Ternary product of the modular standard family: a*b*c*g mod n."""

    def f(a, b, c, g):
        return (a * b * c * g) % n

    return f


def axiom_failures(n, gammas, tern):
    """Scan the six laws naively; returns the set of failing law names."""
    failing = set()
    elems = range(n)
    for a, b, c in product(elems, repeat=3):
        if (a + b) % n != (b + a) % n or ((a + b) % n + c) % n != (a + (b + c) % n) % n:
            failing.add("monoid")
        if (a + 0) % n != a:
            failing.add("monoid")
    for g in gammas:
        for a, b, c in product(elems, repeat=3):
            if tern(a, b, c, g) != tern(b, a, c, g) or tern(a, b, c, g) != tern(a, c, b, g):
                failing.add("symmetry")
        for a, b in product(elems, repeat=2):
            if tern(a, 0, b, g) != 0:
                failing.add("absorption")
        for a, a2, b, c in product(elems, repeat=4):
            s = (a + a2) % n
            if tern(s, b, c, g) != (tern(a, b, c, g) + tern(a2, b, c, g)) % n:
                failing.add("distributivity")
            if tern(b, s, c, g) != (tern(b, a, c, g) + tern(b, a2, c, g)) % n:
                failing.add("distributivity")
            if tern(b, c, s, g) != (tern(b, c, a, g) + tern(b, c, a2, g)) % n:
                failing.add("distributivity")
    for g in gammas:
        for d in gammas:
            for a, b, c, dd, e in product(elems, repeat=5):
                if tern(a, b, tern(c, dd, e, g), d) != tern(tern(a, b, c, g), dd, e, d):
                    failing.add("associativity")
    return failing


def enumerate_ideals_and_primes(n, gammas, tern):
    """All proper ideals and prime ideals of a table structure, by subset scan."""
    ideals, primes = [], []
    for mask in range(1, 1 << n):
        S = {i for i in range(n) if mask >> i & 1}
        if 0 not in S or len(S) == n:
            continue
        if any((a + b) % n not in S for a in S for b in S):
            continue
        absorbing = all(
            tern(a, b, c, g) in S
            for g in gammas
            for a, b, c in product(range(n), repeat=3)
            if a in S or b in S or c in S
        )
        if not absorbing:
            continue
        ideals.append(tuple(sorted(S)))
        prime = all(
            not (tern(a, b, c, g) in S and a not in S and b not in S and c not in S)
            for g in gammas
            for a, b, c in product(range(n), repeat=3)
        )
        if prime:
            primes.append(tuple(sorted(S)))
    return ideals, primes


def multiplicative_closure(n, gammas, tern, seed):
    """Least tern-closed superset of the seed; returns None if 0 is reached."""
    S = set(seed)
    while True:
        new = {tern(a, b, c, g) for a in S for b in S for c in S for g in gammas} - S
        if not new:
            break
        S |= new
    if 0 in S:
        return None
    return tuple(sorted(S))


def fraction_classes(n, gammas, tern, S):
    """Equivalence closure of the cubic relation on T x S.

    Returns (number of classes, raw relation already an equivalence).
    """
    pairs = [(a, s) for a in range(n) for s in S]
    pidx = {p: i for i, p in enumerate(pairs)}

    def related(p, q):
        (a, s), (b, t) = p, q
        for u in S:
            for g in gammas:
                ct = tern(t, t, t, g)
                for e in gammas:
                    cs = tern(s, s, s, e)
                    for d in gammas:
                        if tern(u, a, ct, d) == tern(u, b, cs, d):
                            return True
        return False

    raw = {(i, i) for i in range(len(pairs))}
    for i, p in enumerate(pairs):
        for j, q in enumerate(pairs):
            if i < j and related(p, q):
                raw.add((i, j))
                raw.add((j, i))

    # transitive closure via repeated squaring of the relation
    closure = set(raw)
    while True:
        extra = {(i, k) for (i, j) in closure for (j2, k) in closure if j == j2} - closure
        if not extra:
            break
        closure |= extra
    reps = {}
    for i in range(len(pairs)):
        reps[i] = min(j for j in range(len(pairs)) if (i, j) in closure)
    n_classes = len(set(reps.values()))
    return n_classes, closure == raw
