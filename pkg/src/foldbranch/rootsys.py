"""Simple root systems in Bourbaki numbering.

Weights live in the fundamental-weight basis as integer tuples; roots live in
the simple-root basis. The Cartan matrix follows the convention
``cartan[i][j] = <alpha_i, alpha_j^vee>``, so row ``i`` of the matrix is the
simple root ``alpha_i`` written in fundamental-weight coordinates.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import lcm
from typing import Iterable, Sequence

from .errors import InvalidInput, ResourceGuardExceeded

RootVector = tuple[int, ...]

ORBIT_GUARD = 10**6

_MIN_RANK = {"A": 1, "B": 2, "C": 2, "D": 3}


@dataclass(frozen=True, order=True)
class LieType:
    family: str
    rank: int

    def __post_init__(self):
        f, n = self.family, self.rank
        if f in _MIN_RANK:
            ok = n >= _MIN_RANK[f]
        elif f == "E":
            ok = n in (6, 7, 8)
        elif f == "F":
            ok = n == 4
        elif f == "G":
            ok = n == 2
        else:
            ok = False
        if not ok:
            raise InvalidInput(f"no simple root system of type {f}{n}")

    @classmethod
    def parse(cls, label: str) -> "LieType":
        label = label.strip()
        if len(label) < 2 or not label[1:].isdigit():
            raise InvalidInput(f"cannot parse Lie type {label!r}")
        return cls(label[0].upper(), int(label[1:]))

    def __str__(self):
        return f"{self.family}{self.rank}"


def cartan_matrix(t: LieType) -> tuple[tuple[int, ...], ...]:
    n = t.rank
    a = [[2 if i == j else 0 for j in range(n)] for i in range(n)]

    def bond(i, j, aij=-1, aji=-1):
        a[i][j], a[j][i] = aij, aji

    if t.family in "ABC":
        for i in range(n - 1):
            bond(i, i + 1)
        if t.family == "B":
            # alpha_n = e_n is short
            bond(n - 2, n - 1, aij=-2, aji=-1)
        elif t.family == "C":
            # alpha_n = 2 e_n is long
            bond(n - 2, n - 1, aij=-1, aji=-2)
    elif t.family == "D":
        for i in range(n - 2):
            bond(i, i + 1)
        bond(n - 3, n - 1)
    elif t.family == "E":
        bond(0, 2)
        bond(1, 3)
        for i in range(2, n - 1):
            bond(i, i + 1)
    elif t.family == "F":
        bond(0, 1)
        bond(1, 2, aij=-2, aji=-1)
        bond(2, 3)
    elif t.family == "G":
        bond(0, 1, aij=-1, aji=-3)
    return tuple(tuple(row) for row in a)


def invert_fraction_matrix(m: Sequence[Sequence]) -> list[list[Fraction]]:
    """Exact Gauss-Jordan inverse of a small square matrix."""
    n = len(m)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(m)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise InvalidInput("singular matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [x / p for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def _symmetrizer(cartan) -> tuple[int, ...]:
    """Integers d_j with cartan[i][j]*d_j symmetric; d_j = (alpha_j, alpha_j)/2, short = 1."""
    n = len(cartan)
    d: list[Fraction | None] = [None] * n
    d[0] = Fraction(1)
    queue = deque([0])
    while queue:
        i = queue.popleft()
        for j in range(n):
            if j != i and cartan[i][j] != 0 and d[j] is None:
                d[j] = d[i] * cartan[j][i] / cartan[i][j]
                queue.append(j)
    smallest = min(d)
    scaled = [x / smallest for x in d]
    den = lcm(*(x.denominator for x in scaled))
    return tuple(int(x * den) for x in scaled)


def _vec_add(x, y):
    return tuple(a + b for a, b in zip(x, y))


def _vec_sub(x, y):
    return tuple(a - b for a, b in zip(x, y))


def _vec_scale(k, x):
    return tuple(k * a for a in x)


@dataclass(frozen=True)
class Weight:
    """An integral weight in fundamental-weight coordinates of ``system``."""

    coords: tuple[int, ...]
    system: "RootSystem"

    def __post_init__(self):
        if len(self.coords) != self.system.rank:
            raise InvalidInput(
                f"weight {self.coords} has wrong length for {self.system.type}")

    def _other(self, other) -> tuple[int, ...]:
        if isinstance(other, Weight):
            if other.system != self.system:
                raise InvalidInput(
                    f"weights of {self.system.type} and {other.system.type} do not mix")
            return other.coords
        return tuple(other)

    def __add__(self, other):
        return Weight(_vec_add(self.coords, self._other(other)), self.system)

    def __sub__(self, other):
        return Weight(_vec_sub(self.coords, self._other(other)), self.system)

    def __neg__(self):
        return Weight(_vec_scale(-1, self.coords), self.system)

    def __mul__(self, k: int):
        return Weight(_vec_scale(k, self.coords), self.system)

    __rmul__ = __mul__

    def __iter__(self):
        return iter(self.coords)

    def __len__(self):
        return len(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def __repr__(self):
        return f"Weight({self.system.type}: {list(self.coords)})"


class RootSystem:
    """Root datum of one simple type together with its Weyl-group combinatorics.

    Build instances with :func:`build_root_system`; they are immutable and
    cached, so two systems of the same type compare equal.
    """

    def __init__(self, t: LieType):
        self.type = t
        self.rank = t.rank
        self.cartan = cartan_matrix(t)
        self.symmetrizer = _symmetrizer(self.cartan)
        self._inv_cartan = invert_fraction_matrix(self.cartan)
        n = self.rank
        self.simple_roots: tuple[RootVector, ...] = tuple(
            tuple(int(i == j) for j in range(n)) for i in range(n))
        self.positive_roots = self._close_positive_roots()
        self.n_positive = len(self.positive_roots)
        self._root_set = frozenset(self.positive_roots) | frozenset(
            _vec_scale(-1, r) for r in self.positive_roots)
        # <x, alpha^vee> = sum_j x_j * coroot_coeffs[alpha][j] for x in fundamental coords
        self._coroot = {a: self._coroot_coeffs(a) for a in self.positive_roots}
        self._pos_weights = tuple(self.root_to_weight(a) for a in self.positive_roots)
        self._dominant_cache: dict = {}

    def __eq__(self, other):
        return isinstance(other, RootSystem) and other.type == self.type

    def __hash__(self):
        return hash(("RootSystem", self.type))

    def __repr__(self):
        return f"RootSystem({self.type})"

    # -- construction -----------------------------------------------------

    def _close_positive_roots(self) -> tuple[RootVector, ...]:
        n, a = self.rank, self.cartan
        found = set(self.simple_roots)
        layer = list(self.simple_roots)
        while layer:
            nxt = []
            for beta in layer:
                for i in range(n):
                    # alpha_i-string through beta: beta - p*alpha_i, ..., beta + q*alpha_i
                    pr = sum(beta[j] * a[j][i] for j in range(n))
                    p = 0
                    down = list(beta)
                    while True:
                        down[i] -= 1
                        if tuple(down) in found:
                            p += 1
                        else:
                            break
                    if p - pr > 0:
                        up = list(beta)
                        up[i] += 1
                        up = tuple(up)
                        if up not in found:
                            found.add(up)
                            nxt.append(up)
            layer = nxt
        return tuple(sorted(found, key=lambda r: (sum(r), r)))

    def _coroot_coeffs(self, alpha: RootVector) -> tuple[int, ...]:
        d = self.symmetrizer
        norm = self.root_norm(alpha)  # (alpha, alpha)/2
        out = []
        for j, c in enumerate(alpha):
            q = Fraction(c * d[j], norm)
            assert q.denominator == 1
            out.append(int(q))
        return tuple(out)

    # -- basic data -------------------------------------------------------

    def weight(self, coords: Iterable[int]) -> Weight:
        return Weight(tuple(int(c) for c in coords), self)

    def zero(self) -> Weight:
        return self.weight([0] * self.rank)

    def rho(self) -> Weight:
        return self.weight([1] * self.rank)

    def fundamental_weight(self, i: int) -> Weight:
        """The i-th fundamental weight, 1-based as in Bourbaki."""
        return self.weight([int(j == i - 1) for j in range(self.rank)])

    @property
    def highest_root(self) -> RootVector:
        return self.positive_roots[-1]

    def height(self, alpha: RootVector) -> int:
        return sum(alpha)

    def is_root(self, alpha: Sequence[int]) -> bool:
        return tuple(alpha) in self._root_set

    def root_to_weight(self, alpha: Sequence[int]) -> tuple[int, ...]:
        n = self.rank
        return tuple(sum(alpha[i] * self.cartan[i][j] for i in range(n)) for j in range(n))

    def root_norm(self, alpha: Sequence[int]) -> int:
        """Half the squared length, with short simple roots normalised to 1."""
        n, a, d = self.rank, self.cartan, self.symmetrizer
        twice = sum(alpha[i] * alpha[j] * a[i][j] * d[j] for i in range(n) for j in range(n))
        assert twice % 2 == 0
        return twice // 2

    def _coords(self, lam) -> tuple[int, ...]:
        if isinstance(lam, Weight):
            if lam.system != self:
                raise InvalidInput(f"weight of {lam.system.type} used with {self.type}")
            return lam.coords
        coords = tuple(int(c) for c in lam)
        if len(coords) != self.rank:
            raise InvalidInput(f"expected {self.rank} coordinates, got {len(coords)}")
        return coords

    # -- pairings and changes of basis --------------------------------------

    def pairing(self, lam, alpha: Sequence[int]) -> int:
        """<lam, alpha^vee> for a root ``alpha`` given in simple-root coordinates."""
        x = self._coords(lam)
        alpha = tuple(alpha)
        if alpha not in self._root_set:
            raise InvalidInput(f"{alpha} is not a root of {self.type}")
        if alpha in self._coroot:
            k = self._coroot[alpha]
            return sum(a * b for a, b in zip(x, k))
        k = self._coroot[_vec_scale(-1, alpha)]
        return -sum(a * b for a, b in zip(x, k))

    def to_root_coords(self, lam) -> tuple[Fraction, ...]:
        x = self._coords(lam)
        inv, n = self._inv_cartan, self.rank
        return tuple(sum((x[i] * inv[i][j] for i in range(n)), Fraction(0)) for j in range(n))

    def from_root_coords(self, c: Sequence) -> Weight:
        n = self.rank
        vals = [sum(Fraction(c[i]) * self.cartan[i][j] for i in range(n)) for j in range(n)]
        if any(v.denominator != 1 for v in vals):
            raise InvalidInput("root-coordinate vector is not an integral weight")
        return self.weight(int(v) for v in vals)

    def inner(self, lam, mu) -> Fraction:
        """Invariant form with (alpha, alpha) = 2 for short roots."""
        x = self._coords(lam)
        c = self.to_root_coords(mu)
        d = self.symmetrizer
        return sum((c[j] * x[j] * d[j] for j in range(self.rank)), Fraction(0))

    def in_root_lattice(self, lam) -> bool:
        return all(c.denominator == 1 for c in self.to_root_coords(lam))

    # -- Weyl group -------------------------------------------------------

    def reflect(self, lam, i: int) -> Weight:
        """Simple reflection s_{i+1} (0-based index) applied to lam."""
        return self.weight(self._reflect(self._coords(lam), i))

    def _reflect(self, x: tuple[int, ...], i: int) -> tuple[int, ...]:
        k = x[i]
        if k == 0:
            return x
        row = self.cartan[i]
        return tuple(a - k * b for a, b in zip(x, row))

    def _dominant_with_sign(self, x: tuple[int, ...]) -> tuple[tuple[int, ...], int]:
        sign = 1
        while True:
            for i, c in enumerate(x):
                if c < 0:
                    x = self._reflect(x, i)
                    sign = -sign
                    break
            else:
                return x, sign

    def _dominant(self, x: tuple[int, ...]) -> tuple[int, ...]:
        cache = self._dominant_cache
        hit = cache.get(x)
        if hit is None:
            hit = self._dominant_with_sign(x)[0]
            if len(cache) < 2_000_000:
                cache[x] = hit
        return hit

    def is_dominant(self, lam) -> bool:
        return all(c >= 0 for c in self._coords(lam))

    def dominant_representative(self, lam) -> Weight:
        return self.weight(self._dominant(self._coords(lam)))

    def dominance_leq(self, mu, lam) -> bool:
        """mu <= lam: lam - mu is a non-negative integral combination of simple roots."""
        diff = _vec_sub(self._coords(lam), self._coords(mu))
        return all(c.denominator == 1 and c >= 0 for c in self.to_root_coords(diff))

    def level(self, lam) -> Fraction:
        """Height of lam: the sum of its simple-root coordinates."""
        return sum(self.to_root_coords(lam), Fraction(0))

    def weyl_dim(self, lam) -> int:
        x = self._coords(lam)
        if any(c < 0 for c in x):
            raise InvalidInput(f"weyl_dim needs a dominant weight, got {x}")
        num = den = 1
        for alpha in self.positive_roots:
            k = self._coroot[alpha]
            r = sum(k)
            num *= sum(a * b for a, b in zip(x, k)) + r
            den *= r
        assert num % den == 0
        return num // den

    def _orbit_of_dominant(self, x: tuple[int, ...], guard: int) -> list[tuple[int, ...]]:
        seen = {x}
        out = [x]
        i = 0
        while i < len(out):
            y = out[i]
            i += 1
            for j, c in enumerate(y):
                if c > 0:
                    z = self._reflect(y, j)
                    if z not in seen:
                        seen.add(z)
                        out.append(z)
                        if len(out) > guard:
                            raise ResourceGuardExceeded(
                                f"Weyl orbit in {self.type} exceeds {guard} elements")
        return out

    def weyl_orbit(self, lam, guard: int = ORBIT_GUARD) -> set[Weight]:
        x = self._dominant(self._coords(lam))
        return {self.weight(y) for y in self._orbit_of_dominant(x, guard)}

    def weyl_group_order(self) -> int:
        return len(self._orbit_of_dominant(tuple([1] * self.rank), 10**9))


@lru_cache(maxsize=None)
def build_root_system(t: LieType | str) -> RootSystem:
    if isinstance(t, str):
        t = LieType.parse(t)
    return RootSystem(t)


def positive_root_count(t: LieType) -> int:
    """Closed-form |Phi^+| used to audit the closure algorithm."""
    n = t.rank
    return {
        "A": n * (n + 1) // 2,
        "B": n * n,
        "C": n * n,
        "D": n * (n - 1),
        "E": {6: 36, 7: 63, 8: 120}.get(n, 0),
        "F": 24,
        "G": 6,
    }[t.family]


__all__ = [
    "LieType", "RootSystem", "RootVector", "Weight", "build_root_system",
    "cartan_matrix", "positive_root_count",
]
