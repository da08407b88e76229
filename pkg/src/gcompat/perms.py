"""Permutations of {0..n-1} as tuples, with a small stabilizer-chain engine.

p[i] is the image of point i. Products apply the left factor first:
x^(p*q) = (x^p)^q, i.e. mul(p, q)[i] == q[p[i]]. All group machinery in this
package rides on these right-action conventions.
"""

from __future__ import annotations

from math import gcd

Perm = tuple


def identity_perm(n: int) -> Perm:
    return tuple(range(n))


def is_perm(p, n=None) -> bool:
    if n is not None and len(p) != n:
        return False
    return sorted(p) == list(range(len(p)))


def mul(p: Perm, q: Perm) -> Perm:
    """Apply p, then q."""
    return tuple(q[i] for i in p)


def mul_many(ps) -> Perm:
    it = iter(ps)
    out = next(it)
    for p in it:
        out = mul(out, p)
    return out


def inv(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def perm_pow(p: Perm, k: int) -> Perm:
    n = len(p)
    if k < 0:
        return perm_pow(inv(p), -k)
    out = identity_perm(n)
    base = p
    while k:
        if k & 1:
            out = mul(out, base)
        base = mul(base, base)
        k >>= 1
    return out


def cycles(p: Perm):
    """Nontrivial cycles of p, each starting at its least point."""
    seen = [False] * len(p)
    out = []
    for i in range(len(p)):
        if seen[i] or p[i] == i:
            seen[i] = True
            continue
        cyc = [i]
        seen[i] = True
        j = p[i]
        while j != i:
            cyc.append(j)
            seen[j] = True
            j = p[j]
        out.append(tuple(cyc))
    return out


def perm_from_cycles(n: int, cycs) -> Perm:
    out = list(range(n))
    for cyc in cycs:
        for a, b in zip(cyc, cyc[1:]):
            out[a] = b
        if cyc:
            out[cyc[-1]] = cyc[0]
    return tuple(out)


def perm_order(p: Perm) -> int:
    o = 1
    for cyc in cycles(p):
        o = o * len(cyc) // gcd(o, len(cyc))
    return o


def cycle_str(p: Perm) -> str:
    cs = cycles(p)
    if not cs:
        return "()"
    return "".join("(" + " ".join(map(str, c)) + ")" for c in cs)


def closure(generators, *, bound=None, seed=()):
    """BFS closure of a generator set (plus optional seed subgroup).

    Returns a frozenset of permutations. Raises UndecidedError when the
    closure grows past `bound`.
    """
    from .bounds import UndecidedError

    gens = [g for g in generators]
    if not gens and not seed:
        raise ValueError("closure needs at least one permutation")
    n = len(gens[0]) if gens else len(next(iter(seed)))
    ident = identity_perm(n)
    elems = set(seed) or {ident}
    elems.add(ident)
    frontier = list(elems)
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = mul(x, g)
                if y not in elems:
                    elems.add(y)
                    nxt.append(y)
                    if bound is not None and len(elems) > bound:
                        raise UndecidedError(
                            f"closure exceeded bound {bound} (degree {n})"
                        )
        frontier = nxt
    return frozenset(elems)


class StabilizerChain:
    """Deterministic Schreier-Sims. Supports order and membership only.

    Scale target is degree in the low hundreds and orders up to ~1e9, which
    the witness constructions stay comfortably inside.
    """

    def __init__(self, degree: int, gens=()):
        self.degree = degree
        self.base = []
        self.sgens = []   # strong generators known at each level
        self.orbits = []  # per level: point -> transversal perm
        for g in gens:
            self.add(g)

    # -- queries ---------------------------------------------------------

    @property
    def order(self) -> int:
        o = 1
        for tr in self.orbits:
            o *= len(tr)
        return o

    def _strip(self, p, start=0):
        for i in range(start, len(self.base)):
            x = p[self.base[i]]
            t = self.orbits[i].get(x)
            if t is None:
                return p, i
            p = mul(p, inv(t))
        return p, len(self.base)

    def contains(self, p) -> bool:
        if len(p) != self.degree:
            return False
        r, lev = self._strip(p)
        return lev == len(self.base) and r == identity_perm(self.degree)

    # -- construction ----------------------------------------------------

    def add(self, p):
        if is_perm(p) and len(p) != self.degree:
            raise ValueError("degree mismatch")
        self._add_at(p, 0)
        self._verify()

    def _add_at(self, p, level):
        r, lev = self._strip(p, level)
        if r == identity_perm(self.degree):
            return False
        if lev == len(self.base):
            moved = min(i for i in range(self.degree) if r[i] != i)
            self.base.append(moved)
            self.sgens.append([])
            self.orbits.append({moved: identity_perm(self.degree)})
        self.sgens[lev].append(r)
        self._rebuild_orbit(lev)
        return True

    def _rebuild_orbit(self, i):
        b = self.base[i]
        gens = [g for lv in range(i, len(self.sgens)) for g in self.sgens[lv]]
        tr = {b: identity_perm(self.degree)}
        frontier = [b]
        while frontier:
            nxt = []
            for x in frontier:
                tx = tr[x]
                for g in gens:
                    y = g[x]
                    if y not in tr:
                        tr[y] = mul(tx, g)
                        nxt.append(y)
            frontier = nxt
        self.orbits[i] = tr

    def _verify(self):
        """Close under Schreier generators until every level is stabilized."""
        changed = True
        while changed:
            changed = False
            for i in range(len(self.base)):
                self._rebuild_orbit(i)
                gens = [g for lv in range(i, len(self.sgens)) for g in self.sgens[lv]]
                for x, tx in list(self.orbits[i].items()):
                    for g in gens:
                        y = g[x]
                        ty = self.orbits[i].get(y)
                        if ty is None:
                            self._rebuild_orbit(i)
                            ty = self.orbits[i][y]
                        schreier = mul(mul(tx, g), inv(ty))
                        if self._add_at(schreier, i + 1):
                            changed = True
                if changed:
                    break
