"""Exact sparse formal characters.

A character is a finite map from weights (fundamental coordinates) to
non-zero integers. Hot loops pack weight tuples into single Python integers
with balanced base-R digits so that adding weights is integer addition; the
public API only ever exposes tuples and :class:`~foldbranch.rootsys.Weight`.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager
from contextvars import ContextVar
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache
from math import lcm
from types import MappingProxyType
from typing import Any, Iterable, Iterator, Mapping

from .errors import InvalidInput, ResourceGuardExceeded
from .folding import FoldedPair
from .rootsys import RootSystem, Weight

log = logging.getLogger(__name__)

DEFAULT_TERM_GUARD = 5 * 10**7


@dataclass(frozen=True)
class Settings:
    term_guard: int = DEFAULT_TERM_GUARD
    workers: int = 1
    store: Any = None  # object with load(rs, lam) / save(rs, lam, ch), see foldbranch.cache


_settings: ContextVar[Settings] = ContextVar("foldbranch_settings", default=Settings())


def current_settings() -> Settings:
    return _settings.get()


@contextmanager
def configured(**changes) -> Iterator[Settings]:
    """Temporarily override term guard, worker count or character store."""
    new = replace(_settings.get(), **changes)
    if new.workers < 1:
        raise InvalidInput("workers must be positive")
    token = _settings.set(new)
    try:
        yield new
    finally:
        _settings.reset(token)


def _check_guard(size: int, what: str) -> None:
    guard = _settings.get().term_guard
    if size > guard:
        raise ResourceGuardExceeded(f"{what} reached {size} terms (term guard {guard})")


class _Packer:
    """Bijection between integer vectors with |x_i| <= bound and Python ints, additive."""

    def __init__(self, rank: int, bound: int):
        self.rank = rank
        self.half = bound
        self.radix = 2 * bound + 1
        self._powers = [self.radix**i for i in range(rank)]

    def pack(self, x: Iterable[int]) -> int:
        return sum(c * p for c, p in zip(x, self._powers))

    def unpack(self, v: int) -> tuple[int, ...]:
        out, r, h = [], self.radix, self.half
        for _ in range(self.rank):
            c = (v + h) % r - h
            out.append(c)
            v = (v - c) // r
        return tuple(out)


class FormalCharacter:
    """Immutable sparse map weight -> multiplicity over one root system."""

    __slots__ = ("system", "_terms")

    def __init__(self, system: RootSystem, terms: Mapping):
        self.system = system
        clean = {}
        for w, c in terms.items():
            if c:
                clean[system._coords(w)] = int(c)
        self._terms = clean

    @classmethod
    def _trusted(cls, system: RootSystem, terms: dict) -> "FormalCharacter":
        obj = object.__new__(cls)
        obj.system = system
        obj._terms = terms
        return obj

    @property
    def terms(self) -> Mapping[tuple[int, ...], int]:
        return MappingProxyType(self._terms)

    def __getitem__(self, w) -> int:
        return self._terms.get(self.system._coords(w), 0)

    def __len__(self):
        return len(self._terms)

    def __iter__(self):
        return iter(self._terms)

    def items(self):
        return self._terms.items()

    def __eq__(self, other):
        if not isinstance(other, FormalCharacter):
            return NotImplemented
        return self.system == other.system and self._terms == other._terms

    def __repr__(self):
        return f"FormalCharacter({self.system.type}, {len(self)} terms, mass {self.mass})"

    @property
    def mass(self) -> int:
        return sum(self._terms.values())

    def sorted_items(self) -> list[tuple[tuple[int, ...], int]]:
        return sorted(self._terms.items())

    def is_weyl_invariant(self) -> bool:
        rs, t = self.system, self._terms
        for w, c in t.items():
            for i in range(rs.rank):
                if t.get(rs._reflect(w, i), 0) != c:
                    return False
        return True

    def dominant_part(self) -> dict[tuple[int, ...], int]:
        return {w: c for w, c in self._terms.items() if all(x >= 0 for x in w)}

    def _combine(self, other, sign):
        if self.system != other.system:
            raise InvalidInput("characters live on different root systems")
        out = dict(self._terms)
        for w, c in other._terms.items():
            v = out.get(w, 0) + sign * c
            if v:
                out[w] = v
            else:
                out.pop(w, None)
        return FormalCharacter._trusted(self.system, out)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def scaled(self, k: int) -> "FormalCharacter":
        if k == 0:
            return FormalCharacter._trusted(self.system, {})
        return FormalCharacter._trusted(self.system, {w: k * c for w, c in self._terms.items()})

    def shifted(self, lam) -> "FormalCharacter":
        s = self.system._coords(lam)
        return FormalCharacter._trusted(
            self.system,
            {tuple(a + b for a, b in zip(w, s)): c for w, c in self._terms.items()})

    def max_abs_coord(self) -> int:
        return max((abs(x) for w in self._terms for x in w), default=0)


@dataclass(frozen=True)
class IrrDecomposition:
    """Multiset of irreducible constituents, highest first."""

    system: RootSystem
    entries: tuple[tuple[Weight, int], ...]

    @classmethod
    def from_mapping(cls, rs: RootSystem, mults: Mapping) -> "IrrDecomposition":
        items = []
        for w, m in mults.items():
            coords = rs._coords(w)
            if m == 0:
                continue
            if m < 0:
                raise InvalidInput(f"negative multiplicity {m} at {coords}")
            if any(x < 0 for x in coords):
                raise InvalidInput(f"constituent {coords} is not dominant")
            items.append((coords, int(m)))
        key = _level_key(rs)
        items.sort(key=lambda it: (key(it[0]), it[0]), reverse=True)
        return cls(rs, tuple((rs.weight(w), m) for w, m in items))

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def as_dict(self) -> dict[tuple[int, ...], int]:
        return {w.coords: m for w, m in self.entries}

    def highest_weights(self) -> set[tuple[int, ...]]:
        return {w.coords for w, _ in self.entries}

    def multiplicity(self, lam) -> int:
        return self.as_dict().get(self.system._coords(lam), 0)

    def total_dim(self) -> int:
        return sum(m * self.system.weyl_dim(w) for w, m in self.entries)

    def to_character(self) -> FormalCharacter:
        total = FormalCharacter._trusted(self.system, {})
        for w, m in self.entries:
            total = total + char_freudenthal(self.system, w).scaled(m)
        return total


@lru_cache(maxsize=None)
def _level_vector(rs: RootSystem) -> tuple[tuple[int, ...], int]:
    inv = rs._inv_cartan
    rows = [sum(row, Fraction(0)) for row in inv]
    den = lcm(*(r.denominator for r in rows))
    return tuple(int(r * den) for r in rows), den


def _level_key(rs: RootSystem):
    """Scaled height: sum of simple-root coordinates times a fixed positive integer."""
    vec, _ = _level_vector(rs)
    return lambda x: sum(a * b for a, b in zip(x, vec))


@lru_cache(maxsize=None)
def _gram(rs: RootSystem) -> tuple[tuple[tuple[int, ...], ...], int]:
    """Scaled Gram matrix of fundamental weights: N * (w_i, w_j), short roots of norm 2."""
    inv, d, n = rs._inv_cartan, rs.symmetrizer, rs.rank
    g = [[inv[j][i] * d[i] for j in range(n)] for i in range(n)]
    den = lcm(*(x.denominator for row in g for x in row))
    return tuple(tuple(int(x * den) for x in row) for row in g), den


def _norm(g, x) -> int:
    return sum(x[i] * sum(gij * xj for gij, xj in zip(row, x)) for i, row in enumerate(g))


# -- Freudenthal -----------------------------------------------------------


def _dominant_weights_below(rs: RootSystem, lam: tuple[int, ...]) -> list[tuple[int, ...]]:
    """Dominant weights mu <= lam, ordered by increasing height of lam - mu."""
    levels = {lam: 0}
    frontier = [lam]
    pos = list(zip(rs._pos_weights, (sum(a) for a in rs.positive_roots)))
    while frontier:
        nxt = []
        for mu in frontier:
            h = levels[mu]
            for a, ht in pos:
                nu = tuple(x - y for x, y in zip(mu, a))
                if min(nu) >= 0 and nu not in levels:
                    levels[nu] = h + ht
                    nxt.append(nu)
        frontier = nxt
        _check_guard(len(levels), f"dominant weights of V{lam}")
    return sorted(levels, key=lambda w: (levels[w], w))


@lru_cache(maxsize=4096)
def _dominant_multiplicities_cached(rs: RootSystem, lam: tuple[int, ...]) -> dict:
    g, N = _gram(rs)
    d = rs.symmetrizer
    rho = (1,) * rs.rank
    lr = tuple(a + 1 for a in lam)
    top = _norm(g, lr)
    # (x, alpha) * N for x in fundamental coordinates: sum_j x_j c_j d_j N
    roots = [(w, tuple(c * dj * N for c, dj in zip(alpha, d)))
             for w, alpha in zip(rs._pos_weights, rs.positive_roots)]
    dominant = rs._dominant
    mult = {lam: 1}
    for mu in _dominant_weights_below(rs, lam)[1:]:
        total = 0
        for a, pa in roots:
            x = tuple(p + q for p, q in zip(mu, a))
            while True:
                m = mult.get(dominant(x))
                if not m:
                    break
                total += m * sum(p * q for p, q in zip(x, pa))
                x = tuple(p + q for p, q in zip(x, a))
        denom = top - _norm(g, tuple(a + b for a, b in zip(mu, rho)))
        val, rem = divmod(2 * total, denom)
        assert rem == 0 and val > 0, (lam, mu, total, denom)
        mult[mu] = val
    return mult


def dominant_multiplicities(rs: RootSystem, lam) -> dict[tuple[int, ...], int]:
    """Multiplicities of the dominant weights of V(lam) by Freudenthal's recursion."""
    x = rs._coords(lam)
    if min(x) < 0:
        raise InvalidInput(f"highest weight {x} is not dominant")
    return dict(_dominant_multiplicities_cached(rs, x))


def char_freudenthal(rs: RootSystem, lam) -> FormalCharacter:
    x = rs._coords(lam)
    if min(x) < 0:
        raise InvalidInput(f"highest weight {x} is not dominant")
    store = _settings.get().store
    if store is not None:
        hit = store.load(rs, x)
        if hit is not None:
            return hit
    ch = _char_full(rs, x)
    if store is not None:
        store.save(rs, x, ch)
    return ch


@lru_cache(maxsize=256)
def _char_full(rs: RootSystem, lam: tuple[int, ...]) -> FormalCharacter:
    terms = {}
    guard = _settings.get().term_guard
    for mu, m in _dominant_multiplicities_cached(rs, lam).items():
        for w in rs._orbit_of_dominant(mu, guard):
            terms[w] = m
        _check_guard(len(terms), f"character of V{lam}")
    return FormalCharacter._trusted(rs, terms)


def weight_multiplicity(rs: RootSystem, lam, mu) -> int:
    """dim V(lam)_mu."""
    x = rs._coords(lam)
    if min(x) < 0:
        raise InvalidInput(f"highest weight {x} is not dominant")
    return _dominant_multiplicities_cached(rs, x).get(rs._dominant(rs._coords(mu)), 0)


def is_weight_of(rs: RootSystem, lam, mu) -> bool:
    """mu is a weight of V(lam): its dominant conjugate lies below lam in the root lattice."""
    return rs.dominance_leq(rs.dominant_representative(mu), lam)


# -- products -------------------------------------------------------------


def _chunks(items: list, k: int) -> list[list]:
    size = -(-len(items) // k) if items else 1
    return [items[i:i + size] for i in range(0, len(items), size)] or [[]]


def _merge(parts: list[dict]) -> dict:
    out = parts[0]
    for p in parts[1:]:
        for key, c in p.items():
            out[key] = out.get(key, 0) + c
    return {k: c for k, c in out.items() if c}


def _convolve_packed(a: dict[int, int], b: dict[int, int]) -> dict[int, int]:
    workers = _settings.get().workers
    b_items = sorted(b.items())

    def part(chunk):
        out: dict[int, int] = {}
        get = out.get
        for ka, ca in chunk:
            for kb, cb in b_items:
                k = ka + kb
                out[k] = get(k, 0) + ca * cb
        return out

    a_items = sorted(a.items())
    if workers == 1 or len(a_items) < 2 * workers:
        parts = [part(a_items)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(part, _chunks(a_items, workers)))
    return _merge(parts)


def char_product(a: FormalCharacter, b: FormalCharacter) -> FormalCharacter:
    if a.system != b.system:
        raise InvalidInput("characters live on different root systems")
    rs = a.system
    packer = _Packer(rs.rank, a.max_abs_coord() + b.max_abs_coord() + 1)
    pa = {packer.pack(w): c for w, c in a.items()}
    pb = {packer.pack(w): c for w, c in b.items()}
    out = _convolve_packed(pa, pb)
    _check_guard(len(out), "character product")
    return FormalCharacter._trusted(rs, {packer.unpack(k): c for k, c in out.items()})


def folded_rho_character(fp: FoldedPair, d: int = 1) -> FormalCharacter:
    """Restriction of ch V(d rho) written as a product over folded positive roots.

    Each factor e^{-d beta/2}(1 + e^beta + ... + e^{d beta}) is applied without
    its half-weight prefactor; the accumulated shift d * p(rho) is applied
    up front so every exponent stays integral.
    """
    if d < 1:
        raise InvalidInput("d must be a positive integer")
    fs = fp.folded
    shift = tuple(-d * c for c in fp.p_rho())
    roots = [(fs.root_to_weight(b), fp.multiplicity(b)) for b in fs.positive_roots]
    bound = max(abs(c) for c in shift) + d * sum(
        m * max(abs(c) for c in w) for w, m in roots) + 1
    packer = _Packer(fs.rank, bound)
    cur = {packer.pack(shift): 1}
    workers = _settings.get().workers
    for w, m in roots:  # positive_roots is sorted by height
        step = packer.pack(w)
        for _ in range(m):
            cur = _geometric_step(cur, step, d, workers)
            _check_guard(len(cur), f"folded product for {fp.pair_id}, d={d}")
    return FormalCharacter._trusted(fs, {packer.unpack(k): c for k, c in cur.items()})


def _geometric_step(cur: dict[int, int], step: int, d: int, workers: int) -> dict[int, int]:
    """Multiply by 1 + x^step + ... + x^{d step}."""

    def part(chunk):
        out = dict(chunk)
        get = out.get
        for k in range(1, d + 1):
            s = k * step
            for key, c in chunk:
                t = key + s
                out[t] = get(t, 0) + c
        return out

    items = sorted(cur.items())
    if workers == 1 or len(items) < 2 * workers:
        return part(items)
    with ThreadPoolExecutor(max_workers=workers) as ex:
        parts = list(ex.map(part, _chunks(items, workers)))
    return _merge(parts)


def restrict_character(fp: FoldedPair, ch: FormalCharacter) -> FormalCharacter:
    if ch.system != fp.ambient:
        raise InvalidInput(f"character of {ch.system.type} cannot be restricted along {fp.pair_id}")
    out: dict[tuple[int, ...], int] = {}
    r = fp._restrict
    for w, c in ch.items():
        k = r(w)
        out[k] = out.get(k, 0) + c
    return FormalCharacter(fp.folded, out)


# -- decompositions ---------------------------------------------------------


def klimyk_tensor(rs: RootSystem, lam, mu) -> IrrDecomposition:
    """V(lam) (x) V(mu) by signed rectification of lam + nu + rho over weights nu of V(mu)."""
    x, y = rs._coords(lam), rs._coords(mu)
    if min(x) < 0 or min(y) < 0:
        raise InvalidInput("tensor factors must have dominant highest weights")
    out: dict[tuple[int, ...], int] = {}
    shift = tuple(a + 1 for a in x)
    for nu, m in char_freudenthal(rs, y).items():
        z = tuple(a + b for a, b in zip(nu, shift))
        dom, sign = rs._dominant_with_sign(z)
        if min(dom) == 0:
            continue
        hw = tuple(a - 1 for a in dom)
        out[hw] = out.get(hw, 0) + sign * m
    return IrrDecomposition.from_mapping(rs, out)


def decompose_character(rs: RootSystem, ch: FormalCharacter, check: bool = True) -> IrrDecomposition:
    """Write a Weyl-invariant character as a sum of irreducible characters.

    Works on the dominant part only. Subtracting ch(top) changes only weights
    strictly below top, so one pass in order of decreasing height (ties broken
    lexicographically) peels off every constituent.
    """
    if ch.system != rs:
        raise InvalidInput("character belongs to another root system")
    if check and not ch.is_weyl_invariant():
        raise InvalidInput("character is not Weyl-invariant")
    remaining = ch.dominant_part()
    key = _level_key(rs)
    order = sorted(remaining, key=lambda w: (key(w), w), reverse=True)
    found: dict[tuple[int, ...], int] = {}
    for top in order:
        n = remaining.pop(top, 0)
        if n == 0:
            continue
        if n < 0:
            raise InvalidInput(f"negative coefficient {n} at {top}: not a character")
        found[top] = n
        _check_guard(len(found), "decomposition constituents")
        for w, m in _dominant_multiplicities_cached(rs, top).items():
            if w == top:
                continue
            v = remaining.get(w, 0) - n * m
            if v:
                remaining[w] = v
            else:
                remaining.pop(w, None)
    if remaining:
        w = next(iter(sorted(remaining)))
        raise InvalidInput(f"leftover coefficient {remaining[w]} at {w}: not a character")
    return IrrDecomposition.from_mapping(rs, found)
