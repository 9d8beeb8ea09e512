"""Permutation groups with a stabilizer chain (deterministic Schreier-Sims).

Permutations are tuples p of length `degree` with p[i] = image of i; they
compose as functions acting on the left: (p * q)(x) = p(q(x)).
"""

from __future__ import annotations


def identity_perm(n):
    return tuple(range(n))


def compose(p, q):
    return tuple(p[x] for x in q)


def inverse(p):
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


def is_identity(p):
    return all(i == x for i, x in enumerate(p))


def perm_order(p):
    n = len(p)
    seen = [False] * n
    order = 1
    for i in range(n):
        if seen[i]:
            continue
        length = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = p[j]
            length += 1
        if length > 1:
            g = _gcd(order, length)
            order = order // g * length
    return order


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


class PermGroup:
    """A permutation group certified by a stabilizer chain."""

    def __init__(self, degree: int):
        self.degree = degree
        self.base = []
        self.level_gens = []  # level_gens[l]: generators stabilizing base[:l]
        self.transversals = []  # transversals[l]: dict point -> coset rep u, u(base[l]) = point
        self.generators = []  # the externally supplied generators

    @classmethod
    def from_generators(cls, gens, degree=None, base_hint=None):
        gens = [tuple(g) for g in gens]
        if degree is None:
            if not gens:
                raise ValueError("need degree for the trivial group")
            degree = len(gens[0])
        grp = cls(degree)
        if base_hint:
            for b in base_hint:
                grp._append_base_point(b)
        for g in gens:
            grp.add_generator(g)
        return grp

    # -- chain maintenance -------------------------------------------------
    def _append_base_point(self, b):
        self.base.append(b)
        self.level_gens.append([])
        self.transversals.append({b: identity_perm(self.degree)})

    def _rebuild_orbit(self, l):
        """BFS orbit of base[l] under level_gens[l]; returns new points."""
        trans = self.transversals[l]
        queue = list(trans)
        new_points = []
        qi = 0
        while qi < len(queue):
            beta = queue[qi]
            qi += 1
            u = trans[beta]
            for g in self.level_gens[l]:
                gamma = g[beta]
                if gamma not in trans:
                    trans[gamma] = compose(g, u)
                    queue.append(gamma)
                    new_points.append(gamma)
        return new_points

    def _sift(self, p, start=0):
        for l in range(start, len(self.base)):
            beta = p[self.base[l]]
            u = self.transversals[l].get(beta)
            if u is None:
                return p, l
            p = compose(inverse(u), p)
        return p, len(self.base)

    def sift(self, p):
        """Residue of p against the chain; identity iff p is a member."""
        residue, _ = self._sift(tuple(p))
        return residue

    def contains(self, p):
        return is_identity(self.sift(p))

    __contains__ = contains

    def add_generator(self, g):
        """Insert g (and all induced Schreier generators) into the chain."""
        g = tuple(g)
        if len(g) != self.degree:
            raise ValueError("degree mismatch")
        self.generators.append(g)
        stack = [(0, g)]
        while stack:
            start, p = stack.pop()
            residue, l = self._sift(p, start)
            if is_identity(residue):
                continue
            if l == len(self.base):
                b = next(i for i, x in enumerate(residue) if x != i)
                self._append_base_point(b)
            # the residue stabilizes base[:l], so it strengthens levels <= l
            for i in range(l, -1, -1):
                self.level_gens[i].append(residue)
            for i in range(l + 1):
                new_pts = self._rebuild_orbit(i)
                # Schreier generators: new generator against the whole orbit,
                # old generators against the newly reached points
                trans = self.transversals[i]
                for beta, u in trans.items():
                    s = compose(inverse(trans[residue[beta]]), compose(residue, u))
                    if not is_identity(s):
                        stack.append((i + 1, s))
                for beta in new_pts:
                    u = trans[beta]
                    for h in self.level_gens[i]:
                        s = compose(inverse(trans[h[beta]]), compose(h, u))
                        if not is_identity(s):
                            stack.append((i + 1, s))

    def order(self) -> int:
        n = 1
        for trans in self.transversals:
            n *= len(trans)
        return n

    def orbit_of(self, l, points):
        """Orbit of a point set under the level-l stabilizer generators."""
        gens = self.level_gens[l] if l < len(self.level_gens) else []
        seen = set(points)
        queue = list(points)
        while queue:
            beta = queue.pop()
            for g in gens:
                gamma = g[beta]
                if gamma not in seen:
                    seen.add(gamma)
                    queue.append(gamma)
        return seen

    def to_json(self):
        strong = self.level_gens[0] if self.level_gens else []
        return {
            "degree": self.degree,
            "order": str(self.order()),
            "base": list(self.base),
            "strong_generators": [list(g) for g in strong],
        }


def schreier_sims(gens, degree=None) -> PermGroup:
    """Build a certified PermGroup (stabilizer chain) from generators."""
    return PermGroup.from_generators(gens, degree=degree)
