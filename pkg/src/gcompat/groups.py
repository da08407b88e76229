"""Finite groups as faithful permutation groups, plus structure machinery.

Every group acts on {0..degree-1}; elements are permutation tuples (see
perms.py for the conventions). The canonical element ordering used for
deterministic choices everywhere is lexicographic on those tuples.
"""

from __future__ import annotations

import random
import threading
from math import gcd

from .bounds import DEFAULT_BOUNDS, HypothesisError, UndecidedError
from .perms import (
    StabilizerChain,
    closure,
    identity_perm,
    inv,
    is_perm,
    mul,
    perm_from_cycles,
    perm_order,
    perm_pow,
)


class FiniteGroup:
    """A finite group with an explicit faithful permutation realization.

    Element enumeration is cached once computed and is bounded: operations
    needing the full element list past the bound raise UndecidedError.
    Order and membership stay available at any size via a stabilizer chain.
    """

    def __init__(self, degree, generators, label="G", *, elements=None):
        self.degree = int(degree)
        if self.degree < 1:
            raise ValueError("degree must be >= 1")
        ident = identity_perm(self.degree)
        gens = []
        for g in generators:
            g = tuple(g)
            if not is_perm(g, self.degree):
                raise ValueError(f"not a permutation of degree {self.degree}: {g}")
            if g != ident and g not in gens:
                gens.append(g)
        self.generators = tuple(gens)
        self.label = str(label)
        self._lock = threading.Lock()
        self._elements = None
        self._sorted = None
        self._chain = None
        self._order = None
        self._rattle = None
        if elements is not None:
            elems = frozenset(tuple(e) for e in elements)
            if ident not in elems:
                raise ValueError("element set must contain the identity")
            self._elements = elems
            self._order = len(elems)

    # -- basics ------------------------------------------------------------

    @property
    def identity(self):
        return identity_perm(self.degree)

    def mul(self, a, b):
        return mul(a, b)

    def inv(self, a):
        return inv(a)

    def power(self, a, k):
        return perm_pow(a, k)

    def conjugate(self, a, g):
        """g a g^-1."""
        return mul(mul(g, a), inv(g))

    def commutator(self, a, b):
        """a b a^-1 b^-1."""
        return mul(mul(a, b), mul(inv(a), inv(b)))

    def element_order(self, a):
        return perm_order(a)

    def __repr__(self):
        return f"FiniteGroup({self.label!r}, degree={self.degree}, order={self.order()})"

    # -- enumeration and size ----------------------------------------------

    def elements(self, bound=None):
        """The full element set (frozenset), computed by generator closure.

        The cache is populated once behind a lock; values are immutable
        afterwards, so concurrent reads are safe.
        """
        if self._elements is None:
            with self._lock:
                if self._elements is None:
                    limit = bound if bound is not None else DEFAULT_BOUNDS.enum
                    if not self.generators:
                        elems = frozenset([self.identity])
                    else:
                        elems = closure(self.generators, bound=limit)
                    self._order = len(elems)
                    self._elements = elems
        return self._elements

    def sorted_elements(self, bound=None):
        """Elements in canonical (lexicographic) order."""
        if self._sorted is None:
            elems = sorted(self.elements(bound))
            with self._lock:
                if self._sorted is None:
                    self._sorted = elems
        return self._sorted

    def chain(self):
        if self._chain is None:
            built = StabilizerChain(self.degree, self.generators)
            with self._lock:
                if self._chain is None:
                    self._chain = built
        return self._chain

    def order(self):
        """Group order; uses cached elements or a stabilizer chain."""
        if self._order is None:
            self._order = self.chain().order
        return self._order

    def is_enumerable(self, bound=None):
        limit = bound if bound is not None else DEFAULT_BOUNDS.enum
        if self._elements is not None:
            return True
        return self.order() <= limit

    def contains(self, p):
        if len(p) != self.degree:
            return False
        if self._elements is not None:
            return p in self._elements
        return self.chain().contains(p)

    def random_element(self, rng: random.Random):
        """Random element by product replacement over an accumulated pool."""
        if not self.generators:
            return self.identity
        if self._rattle is None:
            pool = list(self.generators) * 3 + [self.identity]
            for _ in range(60 * len(pool)):
                i = rng.randrange(len(pool))
                j = rng.randrange(len(pool))
                if i != j:
                    pool[i] = mul(pool[i], pool[j])
            self._rattle = pool
        pool = self._rattle
        i = rng.randrange(len(pool))
        j = rng.randrange(len(pool))
        if i != j:
            pool[i] = mul(pool[i], pool[j])
        return pool[i]

    # -- cheap structural predicates -----------------------------------------

    def is_abelian(self):
        gens = self.generators
        for i, a in enumerate(gens):
            for b in gens[i + 1:]:
                if mul(a, b) != mul(b, a):
                    return False
        return True

    def order_histogram(self, bound=None):
        """Multiset of element orders as a sorted tuple of (order, count)."""
        counts = {}
        for e in self.elements(bound):
            o = perm_order(e)
            counts[o] = counts.get(o, 0) + 1
        return tuple(sorted(counts.items()))

    def exponent(self, bound=None):
        e = 1
        for o, _ in self.order_histogram(bound):
            e = e * o // gcd(e, o)
        return e

    # -- subgroups -----------------------------------------------------------

    def subgroup(self, gens=None, members=None, label=None):
        return Subgroup(self, gens=gens, members=members, label=label)

    def trivial_subgroup(self):
        return Subgroup(self, members=[self.identity], label="1")

    def full_subgroup(self):
        return Subgroup(self, gens=self.generators, members=self._elements,
                        label=self.label)

    def center(self, bound=None):
        gens = self.generators
        members = [e for e in self.elements(bound)
                   if all(mul(e, g) == mul(g, e) for g in gens)]
        return Subgroup(self, members=members, label=f"Z({self.label})")

    def centralizer(self, subset, bound=None):
        subset = list(subset)
        members = [e for e in self.elements(bound)
                   if all(mul(e, s) == mul(s, e) for s in subset)]
        return Subgroup(self, members=members)

    def normal_closure(self, seed, bound=None):
        """Smallest normal subgroup containing `seed` elements."""
        limit = bound if bound is not None else DEFAULT_BOUNDS.enum
        gens = list(dict.fromkeys(tuple(s) for s in seed))
        while True:
            extra = []
            for s in gens:
                for g in self.generators:
                    c = self.conjugate(s, g)
                    if c not in gens and c not in extra:
                        extra.append(c)
            if not extra:
                break
            gens.extend(extra)
            if len(gens) > limit:
                raise UndecidedError("normal closure generator blow-up")
        members = closure(gens, bound=limit) if gens else frozenset([self.identity])
        return Subgroup(self, gens=gens, members=members)

    def derived_subgroup(self, bound=None):
        comms = [self.commutator(a, b)
                 for a in self.generators for b in self.generators]
        return self.normal_closure(comms, bound)

    def is_nilpotent(self, bound=None):
        """Lower central series descends to 1."""
        current = self.full_subgroup()
        while current.order() > 1:
            comms = [self.commutator(a, g)
                     for a in current.group.generators for g in self.generators]
            nxt = self.normal_closure(comms, bound)
            if nxt.order() == current.order():
                return False
            current = nxt
        return True

    def small_generating_set(self, bound=None):
        """Greedy canonical generating set, preferring high-order elements."""
        elems = self.sorted_elements(bound)
        if len(elems) == 1:
            return ()
        by_pref = sorted(elems, key=lambda e: (-perm_order(e), e))
        gens = []
        have = {self.identity}
        for e in by_pref:
            if e not in have:
                gens.append(e)
                have = closure(gens)
                if len(have) == len(elems):
                    break
        return tuple(gens)


def from_elements(perms, label="G", generators=None):
    """Group from an explicit element set; finds small generators if needed.

    Supplied generators must generate exactly the given set (checked).
    """
    perms = [tuple(p) for p in perms]
    degree = len(perms[0])
    g = FiniteGroup(degree, generators or (), label, elements=perms)
    if generators is None:
        g = FiniteGroup(degree, g.small_generating_set(), label, elements=perms)
    elif g.generators and closure(g.generators) != g.elements():
        raise ValueError(f"{label}: generators do not span the element set")
    return g


class Subgroup:
    """A subgroup presented inside a parent group (same permutation domain)."""

    def __init__(self, parent, gens=None, members=None, label=None):
        if gens is None and members is None:
            raise ValueError("need generators or members")
        self.parent = parent
        name = label or f"{parent.label}-sub"
        if members is not None:
            members = frozenset(tuple(m) for m in members)
            sub = from_elements(members, name, generators=gens)
        else:
            sub = FiniteGroup(parent.degree, gens, name)
        if sub.degree != parent.degree:
            raise ValueError("subgroup domain mismatch")
        self.group = sub

    def members(self, bound=None):
        return self.group.elements(bound)

    def order(self):
        return self.group.order()

    def contains(self, p):
        return self.group.contains(p)

    def __le__(self, other):
        if isinstance(other, Subgroup):
            other = other.group
        return all(other.contains(g) for g in self.group.generators) \
            and other.contains(self.group.identity)

    def same_as(self, other):
        return self <= other and other <= self

    def is_normal(self):
        """Conjugation by parent generators keeps subgroup generators inside."""
        gens = self.group.generators or (self.group.identity,)
        for g in self.parent.generators:
            for s in gens:
                if not self.contains(self.parent.conjugate(s, g)):
                    return False
        return True

    def is_central(self):
        for s in self.group.generators:
            for g in self.parent.generators:
                if mul(s, g) != mul(g, s):
                    return False
        return True

    def index(self):
        return self.parent.order() // self.order()

    def __repr__(self):
        return f"Subgroup({self.group.label!r}, order={self.order()} in {self.parent.label!r})"


# -- constructors -----------------------------------------------------------


def trivial_group(label="1"):
    return FiniteGroup(1, [], label, elements=[(0,)])


def cyclic(n, label=None):
    if n < 1:
        raise ValueError("cyclic order must be >= 1")
    if n == 1:
        return trivial_group(label or "Z1")
    gen = tuple((i + 1) % n for i in range(n))
    return FiniteGroup(n, [gen], label or f"Z{n}")


def symmetric(n, label=None):
    if n < 1:
        raise ValueError("symmetric degree must be >= 1")
    if n == 1:
        return trivial_group(label or "S1")
    gens = [perm_from_cycles(n, [(0, 1)])]
    if n > 2:
        gens.append(tuple((i + 1) % n for i in range(n)))
    return FiniteGroup(n, gens, label or f"S{n}")


def alternating(n, label=None):
    if n < 1:
        raise ValueError("alternating degree must be >= 1")
    if n <= 2:
        return trivial_group(label or f"A{n}")
    gens = [perm_from_cycles(n, [(i, i + 1, i + 2)]) for i in range(n - 2)]
    return FiniteGroup(n, gens, label or f"A{n}")


def dihedral(order, label=None):
    """Dihedral group of the given (even) order, acting on the n-gon."""
    if order < 2 or order % 2:
        raise ValueError("dihedral order must be even and >= 2")
    n = order // 2
    if n == 1:
        return cyclic(2, label or "D2")
    if n == 2:
        return direct_product(cyclic(2), cyclic(2), label or "D4")
    rot = tuple((i + 1) % n for i in range(n))
    ref = tuple((-i) % n for i in range(n))
    return FiniteGroup(n, [rot, ref], label or f"D{order}")


def elementary_abelian(p, k, label=None):
    if k < 0 or p < 2 or any(p % d == 0 for d in range(2, p)):
        raise ValueError("need a prime p and k >= 0")
    if k == 0:
        return trivial_group(label or "1")
    degree = p * k
    gens = []
    for i in range(k):
        cyc = tuple(range(i * p, (i + 1) * p))
        gens.append(perm_from_cycles(degree, [cyc]))
    return FiniteGroup(degree, gens, label or f"E({p}^{k})")


def direct_product(g, h, label=None):
    """Direct product acting on the disjoint union of the two domains."""
    d = g.degree + h.degree

    def lift_g(p):
        return tuple(p) + tuple(range(g.degree, d))

    def lift_h(p):
        return tuple(range(g.degree)) + tuple(x + g.degree for x in p)

    gens = [lift_g(p) for p in g.generators] + [lift_h(p) for p in h.generators]
    out = FiniteGroup(d, gens, label or f"{g.label}x{h.label}")
    out._order = g.order() * h.order()
    return out


def direct_power(g, k, label=None):
    out = g
    for _ in range(k - 1):
        out = direct_product(out, g)
    out.label = label or f"{g.label}^{k}"
    return out


def pair_embeddings(g, h, product):
    """The two canonical injections of g, h into their direct product."""
    d = product.degree

    def lift_g(p):
        return tuple(p) + tuple(range(g.degree, d))

    def lift_h(p):
        return tuple(range(g.degree)) + tuple(x + g.degree for x in p)

    return lift_g, lift_h


def semidirect(p_group, q_group, twist, label=None):
    """Semidirect product P x| Q from a twist table q-perm -> (P automorphism).

    The twist maps each element of Q to a dict sending P-elements to
    P-elements; it must be an action of Q on P by automorphisms (validated
    by the caller, e.g. catalog.construct). Realized on the disjoint union
    of P's element list and Q's domain, which is always faithful.
    """
    p_elems = p_group.sorted_elements()
    p_index = {e: i for i, e in enumerate(p_elems)}
    np = len(p_elems)
    degree = np + q_group.degree

    def embed(p, q):
        # point x in P goes to twist(q)^{-1}(x * p); Q-block moves by q
        back = twist_inverse(twist, q)
        img = [0] * degree
        for x, i in p_index.items():
            img[i] = p_index[back[mul(x, p)]]
        for j in range(q_group.degree):
            img[np + j] = np + q[j]
        return tuple(img)

    def twist_inverse(tw, q):
        fwd = tw[q]
        return {v: k for k, v in fwd.items()}

    gens = [embed(p, q_group.identity) for p in p_group.generators]
    gens += [embed(p_group.identity, q) for q in q_group.generators]
    out = FiniteGroup(degree, gens, label or f"{p_group.label}:{q_group.label}")
    out._order = p_group.order() * q_group.order()
    return out


# -- structure operations ----------------------------------------------------


def central_subgroup_of_order_p(g, p, bound=None):
    """An order-p subgroup inside the computed center.

    The center is computed directly rather than trusted from a nilpotency
    claim; absence of an order-p central element is reported as a refuted
    hypothesis.
    """
    if g.order() % p:
        raise HypothesisError(f"{p} does not divide |{g.label}| = {g.order()}")
    z = g.center(bound)
    for e in sorted(z.members()):
        o = perm_order(e)
        if o % p == 0:
            x = perm_pow(e, o // p)
            return Subgroup(g, members=closure([x]), label=f"Z_{p}")
    raise HypothesisError(
        f"no central element of order {p} in {g.label} (non-nilpotent input?)")


def _is_square_free(n):
    d = 2
    while d * d <= n:
        if n % (d * d) == 0:
            return False
        if n % d == 0:
            n //= d
        else:
            d += 1
    return True


def _largest_prime_factor(n):
    best, d = 1, 2
    while d * d <= n:
        while n % d == 0:
            best, n = d, n // d
        d += 1
    return max(best, n) if n > 1 else best


def normal_sylow_and_complement(g, bound=None):
    """For square-free |G|: the normal Sylow subgroup for the largest prime
    and a complement found by exhaustive subgroup search."""
    n = g.order()
    if not _is_square_free(n):
        raise HypothesisError(f"|{g.label}| = {n} is not square-free")
    p = _largest_prime_factor(n)
    p_elems = [e for e in g.elements(bound) if perm_order(e) == p]
    members = closure(p_elems, bound=bound or DEFAULT_BOUNDS.enum)
    if len(members) != p:
        raise HypothesisError(f"Sylow {p}-subgroup of {g.label} is not normal")
    sylow = Subgroup(g, members=members, label=f"P{p}")
    if not sylow.is_normal():
        raise HypothesisError(f"Sylow {p}-subgroup of {g.label} is not normal")
    m = n // p
    comp = _find_subgroup_of_order(g, m, avoid=sylow, bound=bound)
    if comp is None:
        raise HypothesisError(f"no complement of order {m} found in {g.label}")
    return sylow, comp


def _find_subgroup_of_order(g, m, avoid=None, bound=None):
    """Exhaustive search for a subgroup of order m meeting `avoid` trivially."""
    if m == 1:
        return g.trivial_subgroup()
    elems = [e for e in g.sorted_elements(bound)
             if perm_order(e) != 1 and m % perm_order(e) == 0]

    def extend(current_gens, current_members, pool_start):
        if len(current_members) == m:
            if avoid is not None:
                if any(x != g.identity and avoid.contains(x) for x in current_members):
                    return None
            return Subgroup(g, gens=current_gens, members=current_members)
        for idx in range(pool_start, len(elems)):
            e = elems[idx]
            if e in current_members:
                continue
            new_gens = current_gens + [e]
            new_members = closure(new_gens, bound=bound or DEFAULT_BOUNDS.enum)
            if len(new_members) > m or m % len(new_members):
                continue
            found = extend(new_gens, new_members, idx + 1)
            if found is not None:
                return found
        return None

    return extend([], frozenset([g.identity]), 0)


def all_subgroups(g, bound=None):
    """Every subgroup of g, as a list of Subgroups in a deterministic order.

    Breadth-first over one-generator extensions; intended for small groups
    (the count is capped by the `subgroups` bound).
    """
    cap = (bound.subgroups if hasattr(bound, "subgroups") else bound) \
        or DEFAULT_BOUNDS.subgroups
    elems = g.sorted_elements()
    seen = {frozenset([g.identity])}
    queue = [frozenset([g.identity])]
    out = [frozenset([g.identity])]
    while queue:
        current = queue.pop(0)
        for e in elems:
            if e in current:
                continue
            new = closure(list(current) + [e])
            if new not in seen:
                seen.add(new)
                out.append(new)
                queue.append(new)
                if len(out) > cap:
                    raise UndecidedError(
                        f"subgroup enumeration of {g.label} exceeded {cap}")
    out.sort(key=lambda s: (len(s), sorted(s)))
    return [Subgroup(g, members=s) for s in out]


def cyclic_normal_subgroup_of_order(g, m):
    """First (canonical) cyclic normal subgroup of the given order, or None."""
    for e in g.sorted_elements():
        if perm_order(e) == m:
            sub = Subgroup(g, members=closure([e]), label=f"<{m}>")
            if sub.is_normal():
                return sub
    return None
