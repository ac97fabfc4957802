"""Branching of V(d rho) to the fixed-point subalgebra and the checks built on it.

Everything here is a composition of :mod:`foldbranch.charalg` primitives:
the constituents come from decomposing the folded product character, and
each claim about them (candidate set, subset sums, short-dominance criterion,
tensor identity) is checked against an independently computed side.
"""

from __future__ import annotations

import itertools
import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

from .charalg import (
    IrrDecomposition,
    char_freudenthal,
    char_product,
    decompose_character,
    folded_rho_character,
    klimyk_tensor,
    weight_multiplicity,
)
from .errors import InvalidInput, ResourceGuardExceeded
from .folding import FoldedPair, folded_pair
from .rootsys import Weight

log = logging.getLogger(__name__)

# pairs whose branch is only computed on explicit request
LARGE_PAIRS = frozenset({"E6F4"})


def _require_order_two(fp: FoldedPair, what: str) -> None:
    if fp.order != 2:
        raise InvalidInput(f"{what} assumes an automorphism of order 2; {fp.pair_id} has order {fp.order}")


def branch_rho(fp: FoldedPair, d: int = 1, allow_large: bool = False) -> IrrDecomposition:
    """Constituents of res V(d rho) with multiplicities."""
    if d < 1:
        raise InvalidInput("d must be a positive integer")
    if fp.pair_id in LARGE_PAIRS and not allow_large:
        raise ResourceGuardExceeded(
            f"branching for {fp.pair_id} is large; pass allow_large=True (--allow-large) to run it")
    ch = folded_rho_character(fp, d)
    dec = decompose_character(fp.folded, ch)
    expected = (d + 1) ** fp.ambient.n_positive
    if dec.total_dim() != expected:
        raise AssertionError(f"dimension audit failed: {dec.total_dim()} != {expected}")
    return dec


def central_condition_violations(fp: FoldedPair, d: int, dec: IrrDecomposition) -> list[tuple[int, ...]]:
    """Constituents whose highest weight differs from d*p(rho) by a non-root-lattice weight."""
    top = fp.p_rho() * d
    return [w.coords for w, _ in dec if not fp.in_root_lattice(top - w)]


def theorem_candidate_set(fp: FoldedPair) -> frozenset[Weight]:
    """{rho_0 + beta dominant : beta a weight of V_0(p(rho) - rho_0)}."""
    fs = fp.folded
    rho0 = fs.rho()
    ch = char_freudenthal(fs, fp.p_rho() - rho0)
    out = set()
    for beta in ch:
        mu = rho0 + beta
        if fs.is_dominant(mu):
            out.add(mu)
    return frozenset(out)


def subset_weights(fp: FoldedPair) -> Counter:
    """Multiset {p(rho) - rho_0 - sum(S) : S a subset of the positive short roots}."""
    _require_order_two(fp, "the subset-sum description")
    fs = fp.folded
    top = (fp.p_rho() - fs.rho()).coords
    sums = [top]
    for beta in fp.short_subsystem.positive:
        b = fs.root_to_weight(beta)
        sums = sums + [tuple(x - y for x, y in zip(s, b)) for s in sums]
    return Counter(sums)


def proposition_criterion(fp: FoldedPair, mu) -> bool:
    """mu <=_s p(rho) and mu - (2 rho_0 - p(rho)) is dominant for the short roots."""
    _require_order_two(fp, "the short-dominance criterion")
    fs = fp.folded
    mu = fs.weight(fs._coords(mu))
    if not fs.is_dominant(mu):
        raise InvalidInput(f"{mu} is not dominant")
    prho = fp.p_rho()
    shifted = mu - (fs.rho() * 2 - prho)
    return fp.dominance_leq_short(mu, prho) and fp.is_dominant_short(shifted)


def _weights(ws) -> list[list[int]]:
    return [list(w.coords if isinstance(w, Weight) else w) for w in sorted(
        (w.coords if isinstance(w, Weight) else tuple(w)) for w in ws)]


@dataclass
class BranchReport:
    pair: str
    d: int
    constituents: IrrDecomposition
    candidate_set: frozenset
    agreement: bool
    witnesses: list = field(default_factory=list)
    # witnesses mu with p(rho) - mu outside the root lattice (mu(z) rho(z) != 1 on the centre)
    central_witnesses: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.agreement

    def scaled_set(self) -> set[tuple[int, ...]]:
        """{mu : V_0(d mu) is a constituent}."""
        return _divisible_by(self.constituents, self.d)

    def to_dict(self) -> dict:
        return {
            "pair": self.pair,
            "d": self.d,
            "agreement": self.agreement,
            "constituent_count": len(self.constituents),
            "occurring_mu": _weights(self.scaled_set()),
            "candidate_set": _weights(self.candidate_set),
            "witnesses": _weights(self.witnesses),
            "witnesses_failing_central_condition": _weights(self.central_witnesses),
        }


def _divisible_by(dec: IrrDecomposition, d: int) -> set[tuple[int, ...]]:
    return {tuple(c // d for c in w.coords) for w, _ in dec if all(c % d == 0 for c in w.coords)}


def verify_theorem(fp: FoldedPair, d: int = 1, allow_large: bool = False) -> BranchReport:
    """Compare {mu : V_0(d mu) occurs in res V(d rho)} with the candidate set."""
    dec = branch_rho(fp, d, allow_large=allow_large)
    occurring = _divisible_by(dec, d)
    candidate_set = theorem_candidate_set(fp)
    candidates = {w.coords for w in candidate_set}
    witnesses = sorted(occurring ^ candidates)
    log.info("theorem check %s d=%d: %d occurring, %d candidates", fp.pair_id, d,
             len(occurring), len(candidates))
    prho = fp.p_rho()
    central = [w for w in witnesses if not fp.in_root_lattice(prho - fp.folded.weight(w))]
    return BranchReport(fp.pair_id, d, dec, candidate_set, not witnesses,
                        witnesses, central)


def verify_panyushev(fp: FoldedPair) -> bool:
    """res V(rho) has the character of V_0(rho_0) (x) V_0(p(rho) - rho_0)."""
    _require_order_two(fp, "the tensor-product identity")
    fs = fp.folded
    rhs = char_product(char_freudenthal(fs, fs.rho()), char_freudenthal(fs, fp.p_rho() - fs.rho()))
    return folded_rho_character(fp, 1) == rhs


def verify_lemma(fp: FoldedPair) -> bool:
    """Subset sums of positive short roots reproduce ch V_0(p(rho) - rho_0) with multiplicity."""
    subsets = subset_weights(fp)
    fs = fp.folded
    ch = char_freudenthal(fs, fp.p_rho() - fs.rho())
    return dict(subsets) == dict(ch.items())


@dataclass
class PropositionReport:
    pair: str
    box: tuple[int, ...]
    checked: int
    criterion_true: int
    mismatches: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.mismatches

    def to_dict(self) -> dict:
        return {
            "pair": self.pair,
            "box": list(self.box),
            "checked": self.checked,
            "criterion_true": self.criterion_true,
            "mismatches": _weights(self.mismatches),
        }


def default_box(fp: FoldedPair) -> tuple[int, ...]:
    return tuple(c + 2 for c in fp.p_rho())


def verify_proposition(fp: FoldedPair, box: Sequence[int] | None = None) -> PropositionReport:
    """Scan dominant mu in a box: criterion(mu) iff mu - rho_0 is a weight of V_0(p(rho)-rho_0)."""
    _require_order_two(fp, "the short-dominance criterion")
    fs = fp.folded
    box = tuple(box) if box is not None else default_box(fp)
    if len(box) != fs.rank or min(box) < 0:
        raise InvalidInput(f"box must have {fs.rank} non-negative entries")
    top = fp.p_rho() - fs.rho()
    rho0 = fs.rho()
    checked = hits = 0
    mismatches = []
    for coords in itertools.product(*(range(b + 1) for b in box)):
        mu = fs.weight(coords)
        crit = proposition_criterion(fp, mu)
        truth = weight_multiplicity(fs, top, mu - rho0) > 0
        checked += 1
        hits += crit
        if crit != truth:
            mismatches.append(coords)
    return PropositionReport(fp.pair_id, box, checked, hits, mismatches)


@dataclass
class TrialityReport:
    pair: str
    branch_set: frozenset
    tensor_set: frozenset
    candidate_set: frozenset
    mass: int
    expected_mass: int

    @property
    def passed(self) -> bool:
        return (self.branch_set == self.tensor_set == self.candidate_set
                and self.mass == self.expected_mass)

    def to_dict(self) -> dict:
        return {
            "pair": self.pair,
            "branch_set": _weights(self.branch_set),
            "tensor_set": _weights(self.tensor_set),
            "candidate_set": _weights(self.candidate_set),
            "sets_equal": self.branch_set == self.tensor_set == self.candidate_set,
            "mass_audit": {"expected": self.expected_mass, "actual": self.mass},
        }


def triality_demo(d: int = 1) -> TrialityReport:
    """Constituent sets of res V(rho), V_0(rho_0) (x) V_0(2 rho_s) and the candidates for D4 -> G2."""
    fp = folded_pair("D4G2")
    fs = fp.folded
    dec = branch_rho(fp, d)
    tensor = klimyk_tensor(fs, fs.rho(), fp.rho_s() * 2)
    return TrialityReport(
        fp.pair_id,
        frozenset(_divisible_by(dec, d)),
        frozenset(tensor.highest_weights()),
        frozenset(w.coords for w in theorem_candidate_set(fp)),
        dec.total_dim(),
        (d + 1) ** fp.ambient.n_positive,
    )


@dataclass
class CounterexampleReport:
    pair: str
    mu: tuple[int, ...]
    short_leq: bool
    weight_mult: int
    criterion: bool
    in_branch: bool | None

    @property
    def passed(self) -> bool:
        return self.short_leq and self.weight_mult == 0 and self.in_branch in (False, None)

    def to_dict(self) -> dict:
        return {
            "pair": self.pair,
            "mu": list(self.mu),
            "short_dominance_holds": self.short_leq,
            "weight_multiplicity": self.weight_mult,
            "criterion": self.criterion,
            "in_branch": self.in_branch,
        }


COUNTEREXAMPLE_RANKS = (3, 5)


def counterexample_demo(n: int) -> CounterexampleReport:
    """For (A_{2n-1}, C_n) with n odd: mu = (2n-1) w_1 is short-below p(rho) yet not a candidate."""
    if n % 2 == 0 or n not in COUNTEREXAMPLE_RANKS:
        raise InvalidInput(f"the counterexample needs odd n in {COUNTEREXAMPLE_RANKS}, got {n}")
    fp = folded_pair(f"A{2 * n - 1}C{n}")
    fs = fp.folded
    mu = fs.fundamental_weight(1) * (2 * n - 1)
    prho = fp.p_rho()
    short_leq = fp.dominance_leq_short(mu, prho)
    mult = weight_multiplicity(fs, prho - fs.rho(), mu - fs.rho())
    in_branch = None
    if n <= 3:
        in_branch = mu.coords in branch_rho(fp, 1).highest_weights()
    return CounterexampleReport(fp.pair_id, mu.coords, short_leq, mult,
                                proposition_criterion(fp, mu), in_branch)
