"""F_2-spaces of square classes attached to a finite set of removed places.

Removing a finite set S of places from the complete curve singles out
the functions whose order is even at every place that remains.  Modulo
squares they form a finite F_2-vector space; inside it sits the
subspace of classes that are additionally local squares at each removed
place.  This module computes explicit generating functions for both
spaces, the rank of the removed classes in the divisor class group
modulo doubles, executable forms of the identities tying these ranks
together, and the compatibility relation between 2-divisible places
that later drives the assembly of large wild sets.

All linear algebra over F_2 runs on integer bitmasks.  Questions about
the class group modulo doubles are answered by the backend's
two_divisible on subset sums, so no coordinates on the class group are
ever chosen.  Independence of square classes is established by their
local data (order parity and residue character) at a finite separating
set of places, with an exact fallback through is_square when the local
fingerprints alone are inconclusive.
"""

from __future__ import annotations

import math
from typing import Dict, List, NamedTuple, Sequence, Tuple

from .errors import HypothesisError, VerificationError
from .local_symbols import local_square_class
from .projective_line import Divisor

__all__ = [
    "GYRank",
    "SquareClassSpace",
    "sing_space",
    "delta_space",
    "g_rank",
    "check_lin_dep_lemma",
    "check_pic_rank_formula",
    "check_odd_degree_transfer",
    "smile",
]


# -- F_2 linear algebra on bitmasks

def _xor_insert(basis: Dict[int, int], v: int) -> int:
    """Reduce v against a triangular basis keyed by leading bit.

    Returns the reduced vector, inserting it when nonzero; zero means
    v was already in the span.
    """
    while v:
        top = v.bit_length() - 1
        if top not in basis:
            basis[top] = v
            return v
        v ^= basis[top]
    return 0


def _f2_rank(vectors: Sequence[int]) -> int:
    basis: Dict[int, int] = {}
    for v in vectors:
        _xor_insert(basis, v)
    return len(basis)


def _mask_basis(masks: Sequence[int]) -> List[int]:
    """An independent basis of the F_2 span of the masks, in insertion order."""
    basis: Dict[int, int] = {}
    out = []
    for m in masks:
        reduced = _xor_insert(basis, m)
        if reduced:
            out.append(reduced)
    return out


def _xor_rows(rows: Sequence[int], mask: int) -> int:
    out = 0
    for i, r in enumerate(rows):
        if mask >> i & 1:
            out ^= r
    return out


# -- shared helpers

def _clean_places(S) -> List:
    places = list(S)
    if not places:
        raise ValueError("the removed set must contain at least one place")
    if len(set(places)) != len(places):
        raise ValueError("the removed set has repeated places")
    return places


def _subset_divisor(S: Sequence, mask: int) -> Divisor:
    return Divisor({P: 1 for i, P in enumerate(S) if mask >> i & 1})


def _dependency_masks(model, S: Sequence) -> List[int]:
    """Nonempty subsets of S whose class sum is divisible by 2.

    These are exactly the F_2 linear relations among the classes of the
    places of S in the class group modulo doubles.
    """
    return [m for m in range(1, 1 << len(S))
            if model.two_divisible(_subset_divisor(S, m))]


def _product(model, gens: Sequence, mask: int):
    out = model.one()
    for i, g in enumerate(gens):
        if mask >> i & 1:
            out = out * g
    return out


def _local_bits(fn, places: Sequence) -> int:
    """Order parity and residue characters packed two bits per place."""
    bits = 0
    for j, P in enumerate(places):
        e, s = local_square_class(fn, P)
        bits |= e << (2 * j) | s << (2 * j + 1)
    return bits


def _separating_places(model, gens, removed) -> List:
    places = list(removed)
    seen = set(places)
    for g in gens:
        for P, _ in g.divisor().items():
            if P not in seen:
                seen.add(P)
                places.append(P)
    for d in (1, 2):
        for P in model.places_of_degree(d):
            if P not in seen:
                seen.add(P)
                places.append(P)
    return places


def _independent_modulo_squares(model, gens, places) -> bool:
    """Whether no nonempty product of the functions is a global square.

    Local data at the given places decides most cases; when its rank
    falls short the answer comes from the exact square test on every
    subset product.
    """
    if _f2_rank([_local_bits(g, places) for g in gens]) == len(gens):
        return True
    return not any(_product(model, gens, mask).is_square()
                   for mask in range(1, 1 << len(gens)))


# -- the two spaces

class SquareClassSpace:
    """A space of square classes with even order outside the removed set.

    Generators are explicit functions; their classes are verified to be
    independent modulo squares and to have even order at every place
    not in the removed set, so the object really is an embedded basis.
    """

    __slots__ = ("model", "removed", "generators")

    def __init__(self, model, removed, generators):
        self.model = model
        self.removed = tuple(removed)
        self.generators = tuple(generators)
        outside = set(self.removed)
        for g in self.generators:
            for P, n in g.divisor().items():
                if P not in outside and n % 2:
                    raise VerificationError(
                        "generator %s has odd order at the retained place %s"
                        % (g, P))
        places = _separating_places(model, self.generators, self.removed)
        if not _independent_modulo_squares(model, self.generators, places):
            raise VerificationError("generators are dependent modulo squares")

    @property
    def rank(self) -> int:
        return len(self.generators)

    def __str__(self) -> str:
        body = ", ".join(str(g) for g in self.generators) or "trivial"
        return "rank %d: %s" % (self.rank, body)

    def __repr__(self) -> str:
        return "SquareClassSpace(rank %d, %d places removed)" % (
            self.rank, len(self.removed))


def sing_space(model, S) -> SquareClassSpace:
    """The classes with even order at every place outside S.

    The basis consists of the smallest non-square constant, one witness
    per independent 2-torsion class of the degree-zero class group, and
    one function per F_2 relation among the classes of S: the relation
    makes the subset sum 2-divisible, and dividing out twice a half
    leaves a principal divisor realized by an explicit function whose
    odd-order places are exactly the subset.
    """
    S = _clean_places(S)
    gens = [model.constant(model.field.nonsquare())]
    gens.extend(model.two_torsion_witnesses())
    for mask in _mask_basis(_dependency_masks(model, S)):
        D = _subset_divisor(S, mask)
        half = model.halve_in_pic(D)
        gens.append(model.function_with_divisor(D - 2 * half))
    return SquareClassSpace(model, S, gens)


def delta_space(model, S) -> SquareClassSpace:
    """The subspace of sing_space(S) of local squares at every place of S.

    Computed as the kernel of the local-data map on the basis of the
    enclosing space: a subset product lands in the subspace exactly
    when its packed local bits over S cancel.
    """
    S = _clean_places(S)
    base = sing_space(model, S)
    rows = [_local_bits(g, S) for g in base.generators]
    relations = [m for m in range(1, 1 << len(rows))
                 if _xor_rows(rows, m) == 0]
    gens = [_product(model, base.generators, mask)
            for mask in _mask_basis(relations)]
    space = SquareClassSpace(model, S, gens)
    for g in space.generators:
        for P in S:
            if local_square_class(g, P) != (0, 0):
                raise VerificationError(
                    "generator %s is not a local square at %s" % (g, P))
    expected = 1 + model.pic_zero_two_rank() - g_rank(model, S).rank
    if space.rank != expected:
        raise VerificationError(
            "computed rank %d, but the class-group identity gives %d"
            % (space.rank, expected))
    return space


# -- ranks in the class group modulo doubles

class GYRank(NamedTuple):
    """Rank data for the classes of a removed set in Pic modulo doubles."""

    removed: Tuple
    rank: int
    independent: Tuple

    def __str__(self) -> str:
        return "rank %d of %d places" % (self.rank, len(self.removed))


def g_rank(model, S) -> GYRank:
    """Rank of the span of the classes of S, with an independent sublist.

    The sublist is chosen greedily in the given order, so it is the
    lexicographically first maximal independent subset.
    """
    S = _clean_places(S)
    deps = _dependency_masks(model, S)
    rank = len(S) - len(_mask_basis(deps))
    picked = 0
    chosen = []
    for i, P in enumerate(S):
        trial = picked | 1 << i
        if not any(m >> i & 1 and not m & ~trial for m in deps):
            picked = trial
            chosen.append(P)
    assert len(chosen) == rank
    return GYRank(tuple(S), rank, tuple(chosen))


# -- executable identities

def check_lin_dep_lemma(model, S) -> dict:
    """Classes of S independent iff removing S adds no new even classes.

    Both sides are computed: independence through subset sums in the
    class group, the right side by comparing the rank of sing_space(S)
    with the rank over the complete curve.  A discrepancy raises.
    """
    info = g_rank(model, S)
    independent = info.rank == len(info.removed)
    complete_rank = 1 + model.pic_zero_two_rank()
    space = sing_space(model, S)
    unchanged = space.rank == complete_rank
    if independent != unchanged:
        raise VerificationError(
            "independence (%s) and space comparison (%s) disagree on %s"
            % (independent, unchanged, [str(P) for P in info.removed]))
    return {
        "classes_independent": independent,
        "space_unchanged": unchanged,
        "removed_rank": space.rank,
        "complete_rank": complete_rank,
    }


def check_pic_rank_formula(model, S) -> dict:
    """Rank of the punctured class group, by formula and directly.

    The formula side is 1 + (2-rank of the degree-zero part) - (rank of
    the removed classes).  The direct side rebuilds the punctured class
    group: on the line it is cyclic of order gcd of the degrees; on the
    curve the quotient of the point group by the subgroup the removed
    places generate is enumerated, which needs the infinite place to be
    removed.  The backend's own pic_complement_two_rank is compared as
    a third route.
    """
    S = _clean_places(S)
    formula = 1 + model.pic_zero_two_rank() - g_rank(model, S).rank
    direct = _pic_two_rank_direct(model, S)
    backend = model.pic_complement_two_rank(S)
    if not (formula == direct == backend):
        raise VerificationError(
            "punctured class group ranks disagree: formula %d, direct %d, "
            "backend %d" % (formula, direct, backend))
    return {"formula_rank": formula, "direct_rank": direct,
            "backend_rank": backend}


def _pic_two_rank_direct(model, S) -> int:
    if not hasattr(model, "rational_points"):
        g = 0
        for P in S:
            g = math.gcd(g, P.degree)
        return 1 if g % 2 == 0 else 0
    if model.infinity not in S:
        raise HypothesisError(
            "direct computation unavailable: removing the infinite place "
            "is required to enumerate the punctured class group")
    subgroup = {None}
    gens = [model.pic_class_of_place(P) for P in S if not P.is_infinite]
    changed = True
    while changed:
        changed = False
        for g in gens:
            for h in list(subgroup):
                s = model.add_points(g, h)
                if s not in subgroup:
                    subgroup.add(s)
                    changed = True
    points = model.rational_points()
    halves = sum(1 for P in points if model.add_points(P, P) in subgroup)
    assert halves % len(subgroup) == 0
    torsion = halves // len(subgroup)
    rank = torsion.bit_length() - 1
    assert 1 << rank == torsion
    return rank


def check_odd_degree_transfer(model, place, D: Divisor) -> dict:
    """2-divisibility transfers through the removal of an odd-degree place.

    The class of D is 2-divisible on the complete curve exactly when it
    is 2-divisible off the chosen place and has even degree; the two
    sides are computed separately and compared.
    """
    if place.degree % 2 == 0:
        raise ValueError("the transfer needs a place of odd degree")
    if D.get(place):
        raise ValueError("the divisor must avoid the chosen place")
    complete = model.two_divisible(D)
    even = D.degree % 2 == 0
    punctured = (model.two_divisible(D)
                 or model.two_divisible(D - Divisor({place: 1})))
    if complete != (punctured and even):
        raise VerificationError(
            "transfer identity fails: complete %s, punctured %s, degree "
            "parity %s" % (complete, punctured, even))
    return {"divisible_complete": complete, "divisible_punctured": punctured,
            "even_degree": even}


# -- the compatibility relation on 2-divisible places

def smile(model, q1, q2) -> bool:
    """Whether the new even-order classes at q1 are local squares at q2.

    Removing a single 2-divisible place q1 enlarges the even-order
    classes of the complete curve by one coset; the relation holds when
    every member of that coset is a local square at q2.  Defined only
    for distinct places with 2-divisible classes, and symmetric there.
    """
    if q1 == q2:
        raise ValueError("the relation compares two distinct places")
    for P in (q1, q2):
        if not model.two_divisible(Divisor({P: 1})):
            raise HypothesisError(
                "the class of %s is not 2-divisible, so the relation is "
                "undefined" % P)
    D = Divisor({q1: 1})
    lam = model.function_with_divisor(D - 2 * model.halve_in_pic(D))
    base = [model.constant(model.field.nonsquare())]
    base.extend(model.two_torsion_witnesses())
    for mask in range(1 << len(base)):
        if local_square_class(_product(model, base, mask) * lam, q2) != (0, 0):
            return False
    return True
