"""Folding a simply-laced root system along a diagram automorphism.

The fixed-point subalgebra of a pinned diagram automorphism has a root system
whose simple roots are indexed by the node orbits. Restriction of weights
sends the ambient fundamental weight of a node to the folded fundamental
weight of its orbit. Every structural claim (Cartan matrix, fibre sizes of
restricted roots) is audited when a :class:`FoldedPair` is built.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Sequence

from .errors import InvalidInput
from .rootsys import (
    LieType,
    RootSystem,
    RootVector,
    Weight,
    build_root_system,
    invert_fraction_matrix,
)

SUPPORTED_PAIRS = ("A3C2", "A5C3", "A7C4", "A9C5", "D4B3", "D5B4", "D6B5", "E6F4", "D4G2")


@dataclass(frozen=True)
class DiagramAutomorphism:
    """A permutation of Dynkin nodes (0-based images) preserving the Cartan matrix."""

    permutation: tuple[int, ...]

    @property
    def order(self) -> int:
        k, p = 1, self.permutation
        cur = p
        while cur != tuple(range(len(p))):
            cur = tuple(p[i] for i in cur)
            k += 1
        return k

    def orbits(self) -> list[tuple[int, ...]]:
        seen, out = set(), []
        for i in range(len(self.permutation)):
            if i in seen:
                continue
            orb, j = [], i
            while j not in orb:
                orb.append(j)
                j = self.permutation[j]
            seen.update(orb)
            out.append(tuple(sorted(orb)))
        return out

    def preserves(self, cartan) -> bool:
        p = self.permutation
        n = len(p)
        return all(cartan[i][j] == cartan[p[i]][p[j]] for i in range(n) for j in range(n))

    def cycles(self) -> str:
        """Cycle notation with Bourbaki (1-based) node labels."""
        parts = []
        seen = set()
        for i in range(len(self.permutation)):
            if i in seen or self.permutation[i] == i:
                continue
            cyc, j = [], i
            while j not in cyc:
                cyc.append(j)
                j = self.permutation[j]
            seen.update(cyc)
            parts.append("(" + " ".join(str(k + 1) for k in cyc) + ")")
        return "".join(parts) or "()"


def _cartan_automorphisms(cartan) -> list[tuple[int, ...]]:
    n = len(cartan)
    out = []
    image = [None] * n

    def extend(i, used):
        if i == n:
            out.append(tuple(image))
            return
        for j in range(n):
            if j in used:
                continue
            if all(cartan[i][k] == cartan[j][image[k]] and cartan[k][i] == cartan[image[k]][j]
                   for k in range(i)):
                image[i] = j
                extend(i + 1, used | {j})
        image[i] = None

    extend(0, frozenset())
    return out


def enumerate_automorphisms(rs: RootSystem) -> list[DiagramAutomorphism]:
    """Non-trivial diagram automorphisms, ordered by (order, permutation).

    For D4 only the 3-cycle 1 -> 3 -> 4 -> 1 is kept; its inverse gives an
    isomorphic folding.
    """
    ident = tuple(range(rs.rank))
    autos = [DiagramAutomorphism(p) for p in _cartan_automorphisms(rs.cartan) if p != ident]
    if rs.type == LieType("D", 4):
        autos = [a for a in autos if a.order == 2 or a.permutation == (2, 1, 3, 0)]
    return sorted(autos, key=lambda a: (a.order, a.permutation))


def _folded_type(ambient: LieType, order: int) -> LieType:
    f, n = ambient.family, ambient.rank
    if order == 2:
        if f == "A":
            if n % 2 == 0:
                raise InvalidInput(
                    f"{ambient} folds to a non-reduced (BC) system, which is not supported")
            return LieType("C", (n + 1) // 2)
        if f == "D":
            return LieType("B", n - 1)
        if f == "E" and n == 6:
            return LieType("F", 4)
    if order == 3 and ambient == LieType("D", 4):
        return LieType("G", 2)
    raise InvalidInput(f"no supported folding of {ambient} by an automorphism of order {order}")


def _cartan_isomorphism(a, b, n):
    image = [None] * n

    def extend(i, used):
        if i == n:
            return tuple(image)
        for j in range(n):
            if j in used or a[i][i] != b[j][j]:
                continue
            if all(a[i][k] == b[j][image[k]] and a[k][i] == b[image[k]][j] for k in range(i)):
                image[i] = j
                hit = extend(i + 1, used | {j})
                if hit:
                    return hit
        image[i] = None
        return None

    return extend(0, frozenset())


@dataclass(frozen=True)
class ShortSubsystem:
    roots: tuple[RootVector, ...]
    positive: tuple[RootVector, ...]
    simple: tuple[RootVector, ...]
    label: str
    components: tuple[LieType, ...]


def _classify_simply_laced(cartan) -> tuple[LieType, ...]:
    n = len(cartan)
    adj = {i: [j for j in range(n) if j != i and cartan[i][j] != 0] for i in range(n)}
    seen, comps = set(), []
    for s in range(n):
        if s in seen:
            continue
        stack, comp = [s], []
        seen.add(s)
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        k = len(comp)
        branch = [v for v in comp if len(adj[v]) >= 3]
        if not branch:
            comps.append(LieType("A", k))
        else:
            arms = sorted(_arm_length(adj, branch[0], w) for w in adj[branch[0]])
            comps.append(LieType("D", k) if arms[:2] == [1, 1] else LieType("E", k))
    return tuple(sorted(comps))


def _arm_length(adj, centre, start):
    length, prev, cur = 1, centre, start
    while True:
        nxt = [w for w in adj[cur] if w != prev]
        if not nxt:
            return length
        prev, cur = cur, nxt[0]
        length += 1


def _expected_short_components(folded: LieType) -> tuple[LieType, ...]:
    f, n = folded.family, folded.rank
    if f == "C":
        if n == 2:
            return (LieType("A", 1), LieType("A", 1))
        if n == 3:
            return (LieType("A", 3),)
        return (LieType("D", n),)
    if f == "B":
        return tuple(LieType("A", 1) for _ in range(n))
    if f == "F":
        return (LieType("D", 4),)
    return (LieType("A", 2),)


@dataclass(frozen=True, eq=False)
class FoldedPair:
    """Ambient system, automorphism, folded system and the restriction map p.

    ``orbit_map[i]`` is the folded node (0-based) of ambient node ``i``; the
    restriction on fundamental coordinates sums ambient coordinates over each
    orbit.
    """

    ambient: RootSystem
    theta: DiagramAutomorphism
    folded: RootSystem
    orbit_map: tuple[int, ...]
    multiplicities: dict = field(repr=False)

    @property
    def pair_id(self) -> str:
        return f"{self.ambient.type}{self.folded.type}"

    @property
    def order(self) -> int:
        return self.theta.order

    @property
    def restriction(self) -> tuple[tuple[int, ...], ...]:
        r = self.folded.rank
        return tuple(tuple(int(self.orbit_map[i] == k) for k in range(r))
                     for i in range(self.ambient.rank))

    def multiplicity(self, beta: Sequence[int]) -> int:
        """Number of ambient positive roots restricting to the folded root beta."""
        return self.multiplicities.get(tuple(beta), 0)

    # -- restriction -------------------------------------------------------

    def _restrict(self, x: tuple[int, ...]) -> tuple[int, ...]:
        out = [0] * self.folded.rank
        for i, c in enumerate(x):
            out[self.orbit_map[i]] += c
        return tuple(out)

    def restrict_root(self, alpha: Sequence[int]) -> RootVector:
        """p on simple-root coordinates: alpha_i restricts to the simple root of its orbit."""
        return self._restrict(tuple(alpha))

    def restrict_weight(self, lam) -> Weight:
        return self.folded.weight(self._restrict(self.ambient._coords(lam)))

    def p_rho(self) -> Weight:
        return self.restrict_weight(self.ambient.rho())

    # -- short and long ---------------------------------------------------

    def is_short(self, beta: Sequence[int]) -> bool:
        return self.folded.root_norm(beta) == 1

    @cached_property
    def short_simple_nodes(self) -> tuple[int, ...]:
        return tuple(i for i, b in enumerate(self.folded.simple_roots) if self.is_short(b))

    @cached_property
    def long_simple_nodes(self) -> tuple[int, ...]:
        return tuple(i for i in range(self.folded.rank) if i not in self.short_simple_nodes)

    def rho_s(self) -> Weight:
        return self.folded.weight(int(i in self.short_simple_nodes)
                                  for i in range(self.folded.rank))

    def rho_l(self) -> Weight:
        return self.folded.rho() - self.rho_s()

    def p_rho_defect(self) -> Weight:
        defect = self.p_rho() - self.folded.rho()
        expected = self.rho_s() * (1 if self.order == 2 else 2)
        assert defect == expected, f"p(rho)-rho_0 = {defect}, expected {expected}"
        return defect

    @cached_property
    def short_subsystem(self) -> ShortSubsystem:
        fs = self.folded
        pos = tuple(b for b in fs.positive_roots if self.is_short(b))
        pos_set = set(pos)
        decomposable = {tuple(x + y for x, y in zip(a, b))
                        for a in pos for b in pos} & pos_set
        simple = tuple(b for b in pos if b not in decomposable)
        roots = pos + tuple(tuple(-c for c in b) for b in pos)
        sub_cartan = [[fs.pairing(fs.root_to_weight(a), b) for b in simple] for a in simple]
        comps = _classify_simply_laced(sub_cartan)
        fam, n = fs.type.family, fs.type.rank
        label = {"C": f"D{n}", "B": f"A1^{n}", "F": "D4", "G": "A2"}[fam]
        if comps != _expected_short_components(fs.type):
            raise AssertionError(f"short roots of {fs.type} form {comps}, expected {label}")
        return ShortSubsystem(roots, pos, simple, label, comps)

    @cached_property
    def _short_basis_inverse(self):
        simple = self.short_subsystem.simple
        if len(simple) != self.folded.rank:
            raise AssertionError("short simple roots do not span")
        return invert_fraction_matrix(simple)

    def short_coordinates(self, lam) -> tuple[Fraction, ...]:
        """Coordinates of lam in the basis of short simple roots."""
        c = self.folded.to_root_coords(lam)
        inv = self._short_basis_inverse
        n = self.folded.rank
        return tuple(sum((c[i] * inv[i][j] for i in range(n)), Fraction(0)) for j in range(n))

    def dominance_leq_short(self, mu, lam) -> bool:
        """mu <=_s lam: lam - mu is a non-negative integral sum of positive short roots."""
        fs = self.folded
        diff = fs.weight(fs._coords(lam)) - fs.weight(fs._coords(mu))
        return all(x.denominator == 1 and x >= 0 for x in self.short_coordinates(diff))

    def is_dominant_short(self, mu) -> bool:
        """mu pairs non-negatively with every positive short coroot."""
        return all(self.folded.pairing(mu, b) >= 0 for b in self.short_subsystem.simple)

    def in_root_lattice(self, mu) -> bool:
        return self.folded.in_root_lattice(mu)


def fold(rs: RootSystem, theta: DiagramAutomorphism) -> FoldedPair:
    n = rs.rank
    if len(theta.permutation) != n or sorted(theta.permutation) != list(range(n)):
        raise InvalidInput(f"{theta.permutation} is not a permutation of the {n} nodes of {rs.type}")
    if not theta.preserves(rs.cartan):
        raise InvalidInput(f"{theta.cycles()} is not a diagram automorphism of {rs.type}")
    if theta.order == 1:
        raise InvalidInput("the identity automorphism does not fold anything")
    target = _folded_type(rs.type, theta.order)
    folded = build_root_system(target)

    orbits = theta.orbits()
    small = []
    for oi in orbits:
        row = []
        for oj in orbits:
            vals = {sum(rs.cartan[i][j] for j in oj) for i in oi}
            assert len(vals) == 1
            row.append(vals.pop())
        small.append(row)
    match = _cartan_isomorphism(small, folded.cartan, len(small))
    if match is None:
        raise AssertionError(f"orbit Cartan matrix {small} is not of type {target}")
    orbit_map = [0] * n
    for k, orb in enumerate(orbits):
        for i in orb:
            orbit_map[i] = match[k]

    fp = FoldedPair(rs, theta, folded, tuple(orbit_map), {})
    _audit_fibres(fp)
    return fp


def _audit_fibres(fp: FoldedPair) -> None:
    amb, fs = fp.ambient, fp.folded
    counts = Counter()
    for alpha in amb.positive_roots:
        beta = fp.restrict_root(alpha)
        # restriction on root coordinates and on weight coordinates must agree
        assert fp._restrict(amb.root_to_weight(alpha)) == fs.root_to_weight(beta)
        if beta not in fs.positive_roots:
            raise AssertionError(f"p({alpha}) = {beta} is not a positive root of {fs.type}")
        counts[beta] += 1
    for beta in fs.positive_roots:
        want = fp.order if fp.is_short(beta) else 1
        if counts[beta] != want:
            raise AssertionError(f"fibre over {beta} has {counts[beta]} roots, expected {want}")
    assert sum(counts.values()) == amb.n_positive
    fp.multiplicities.update(counts)


_PAIR_RE = re.compile(r"^([A-G])(\d+)([A-G])(\d+)$")


def parse_pair(pair_id: str) -> tuple[LieType, LieType]:
    m = _PAIR_RE.match(pair_id.strip().upper())
    if not m:
        raise InvalidInput(f"cannot parse pair id {pair_id!r}; expected e.g. A3C2")
    return LieType(m[1], int(m[2])), LieType(m[3], int(m[4]))


@lru_cache(maxsize=None)
def folded_pair(pair_id: str) -> FoldedPair:
    """Build the folding named like ``"A3C2"`` or ``"D4G2"``."""
    ambient_t, folded_t = parse_pair(pair_id)
    rs = build_root_system(ambient_t)
    for theta in _preferred_order(rs):
        try:
            if _folded_type(ambient_t, theta.order) == folded_t:
                return fold(rs, theta)
        except InvalidInput:
            continue
    raise InvalidInput(f"{ambient_t} does not fold to {folded_t} under a diagram automorphism")


def _preferred_order(rs: RootSystem) -> list[DiagramAutomorphism]:
    # for D_n prefer the swap of the two spin nodes, so D4 -> B3 matches D_n -> B_{n-1}
    autos = enumerate_automorphisms(rs)
    if rs.type.family == "D":
        n = rs.rank
        spin = tuple(list(range(n - 2)) + [n - 1, n - 2])
        autos.sort(key=lambda a: a.permutation != spin)
    return autos
