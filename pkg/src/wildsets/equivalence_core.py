"""Finite certificates for self-equivalences and their wild sets.

A self-equivalence of the function field pairs a permutation of places
with a square-class automorphism preserving Hilbert symbols; a place is
wild when order parity is not preserved there.  Everything this module
handles is a finite fragment of such a map: a matching of a removed set
with target places, square-class data on the even-order classes, and
one Klein-four isomorphism per removed place.

Two certificate shapes appear.  A pre-equivalence records the map only
modulo the everywhere-locally-trivial classes, which is the natural
granularity for prescribing wild behavior.  A small equivalence, whose
removed set must kill the punctured class group modulo doubles, records
the map on the even-order classes themselves, and extension results for
such data produce an actual self-equivalence of the field realizing it.
The bridge between the two -- attach one auxiliary place per basis
element of the locally trivial subspace, chosen to see exactly that
element, and patch the basis to be locally trivial at the new places --
is followed step by step in extend_pre_equivalence.

Verification never trusts the certificate: bases are rechecked for
membership and independence through their local data, the local/global
compatibility square is evaluated on every basis element, and symbol
preservation and the fate of -1 are spot-checked on all basis pairs.
Composition glues two certificates with disjoint wild loci; when the
prescribed local maps cannot be realized by any global basis map, tame
twists -- which never change wildness -- are searched for by an F_2
solve, and failing that the wild locus alone is rebuilt from the
quotient level, since the tame bookkeeping of a composite is partly
convention while its wild locus is not.
"""

from __future__ import annotations

import itertools
import json
from typing import Dict, List, Optional, Sequence, Tuple

from .base_algebra import Fq, poly_parse, poly_str
from .elliptic_curve import EllipticModel
from .errors import HypothesisError, SearchExhausted, VerificationError
from .local_symbols import (
    ONE,
    LocalMap,
    hilbert_symbol,
    local_square_class,
    square_class_parse,
    square_class_str,
)
from .projective_line import ProjectiveLine
from .square_class_spaces import (
    _clean_places,
    _f2_rank,
    _local_bits,
    _product,
    _xor_insert,
    delta_space,
    g_rank,
    sing_space,
)

__all__ = [
    "PreEquivalence",
    "SmallEquivalence",
    "WildSetCertificate",
    "quotient_basis",
    "verify_pre_equivalence",
    "verify_small_equivalence",
    "wild_points",
    "certify",
    "compose",
    "extend_pre_equivalence",
    "check_necessary_condition",
    "check_rank_preservation",
    "certificate_to_json",
    "certificate_from_json",
]


# -- certificate data types

class _PlaceMatching:
    """Shared shape of both certificate types: places, images, local maps."""

    __slots__ = ("model", "places", "images", "local_maps")

    def __init__(self, model, places, images, local_maps):
        self.model = model
        self.places = tuple(places)
        self.images = tuple(images)
        self.local_maps = tuple(local_maps)
        if not self.places:
            raise ValueError("the removed set must contain at least one place")
        if len(set(self.places)) != len(self.places):
            raise ValueError("the removed set has repeated places")
        if len(self.images) != len(self.places):
            raise ValueError("need exactly one image per removed place")
        if len(self.local_maps) != len(self.places):
            raise ValueError("need exactly one local map per removed place")
        for m in self.local_maps:
            if not isinstance(m, LocalMap):
                raise TypeError("local maps must be LocalMap instances, got %r" % (m,))

    def image_of(self, place):
        return self.images[self.places.index(place)]

    def local_map_at(self, place):
        return self.local_maps[self.places.index(place)]


class PreEquivalence(_PlaceMatching):
    """Square-class data prescribed modulo the locally trivial classes.

    The recorded basis spans the even-order classes modulo those that
    are local squares at every removed place, and the images span the
    same quotient on the target side.  Construct freely; nothing is
    checked beyond shape until verify_pre_equivalence runs.
    """

    __slots__ = ("quotient_basis", "quotient_images")

    def __init__(self, model, places, images, quotient_basis, quotient_images,
                 local_maps):
        super().__init__(model, places, images, local_maps)
        self.quotient_basis = tuple(quotient_basis)
        self.quotient_images = tuple(quotient_images)
        if len(self.quotient_images) != len(self.quotient_basis):
            raise ValueError("basis and images must have the same length")

    def __repr__(self) -> str:
        return "PreEquivalence(%d places, basis of %d)" % (
            len(self.places), len(self.quotient_basis))


class SmallEquivalence(_PlaceMatching):
    """Square-class data on the full group of even-order classes.

    Valid only over a removed set whose classes exhaust the class group
    modulo doubles; then the even-order classes embed into the product
    of the local square-class groups and the recorded basis determines
    the map completely.
    """

    __slots__ = ("sing_basis", "sing_images")

    def __init__(self, model, places, images, sing_basis, sing_images,
                 local_maps):
        super().__init__(model, places, images, local_maps)
        self.sing_basis = tuple(sing_basis)
        self.sing_images = tuple(sing_images)
        if len(self.sing_images) != len(self.sing_basis):
            raise ValueError("basis and images must have the same length")

    def __repr__(self) -> str:
        return "SmallEquivalence(%d places, basis of %d)" % (
            len(self.places), len(self.sing_basis))


class WildSetCertificate:
    """A verified small equivalence packaged with its wild set.

    The wild set is computed, never claimed: it is read off the local
    maps after verification.  Holding an instance means the necessary
    size bound against the rank of the wild classes has been checked.
    """

    __slots__ = ("equivalence", "wild_set", "report")

    def __init__(self, equivalence, wild_set, report):
        self.equivalence = equivalence
        self.wild_set = tuple(wild_set)
        self.report = dict(report)
        members = set(equivalence.places)
        for P in self.wild_set:
            if P not in members:
                raise VerificationError(
                    "wild point %s lies outside the removed set" % P)
        if self.wild_set and not check_necessary_condition(
                equivalence.model, self.wild_set):
            raise VerificationError(
                "a wild set of %d places cannot have class rank %d"
                % (len(self.wild_set),
                   g_rank(equivalence.model, self.wild_set).rank))

    def __repr__(self) -> str:
        return "WildSetCertificate(wild {%s} in %d places)" % (
            ", ".join(str(P) for P in self.wild_set), len(self.equivalence.places))


# -- bases of the quotient

def quotient_basis(model, S) -> Tuple:
    """Even-order classes spanning them modulo the locally trivial ones.

    Greedy over the generators of the enclosing space: keep each one
    whose local data at the removed places is not already spanned.  The
    quotient has one dimension per removed place, so the result always
    has exactly len(S) elements.
    """
    S = _clean_places(S)
    space = sing_space(model, S)
    seen: Dict[int, int] = {}
    out = []
    for g in space.generators:
        if _xor_insert(seen, _local_bits(g, S)):
            out.append(g)
    if len(out) != len(S):
        raise VerificationError(
            "quotient of rank %d over %d removed places" % (len(out), len(S)))
    return tuple(out)


# -- verification

def _basis_check(model, places, elements, failures, side) -> bool:
    """Even order outside the places, independent local data, full count."""
    ok = True
    if len(elements) != len(places):
        failures.append("%s basis has %d elements for %d places"
                        % (side, len(elements), len(places)))
        ok = False
    removed = set(places)
    for b in elements:
        for P, n in b.divisor().items():
            if P not in removed and n % 2:
                failures.append("%s basis element %s has odd order at %s"
                                % (side, b, P))
                ok = False
                break
    rows = [_local_bits(b, places) for b in elements]
    if _f2_rank(rows) != len(elements):
        failures.append("%s basis is dependent modulo the locally trivial "
                        "classes" % side)
        ok = False
    return ok


def _diagram_check(matching, basis, images, failures) -> bool:
    """The local data of each image matches the mapped data of its source."""
    ok = True
    for b, m in zip(basis, images):
        for P, Q, lm in zip(matching.places, matching.images,
                            matching.local_maps):
            if lm.apply(local_square_class(b, P)) != local_square_class(m, Q):
                failures.append("diagram breaks at %s on %s" % (P, b))
                ok = False
    return ok


def _unit_class_check(local_maps) -> bool:
    return all(m.apply(ONE) == ONE for m in local_maps)


def verify_pre_equivalence(pe: PreEquivalence) -> dict:
    """Check the four defining conditions of a pre-equivalence.

    Returns one boolean per condition -- injectivity of the place map,
    the recorded data being a basis of each quotient, local maps fixing
    the trivial class, and commutation of the local/global square --
    plus the list of specific failures.  Nothing is repaired silently.
    """
    failures: List[str] = []
    injective = len(set(pe.images)) == len(pe.images)
    if not injective:
        failures.append("two places share an image")
    source = _basis_check(pe.model, pe.places, pe.quotient_basis,
                          failures, "source")
    target = _basis_check(pe.model, pe.images, pe.quotient_images,
                          failures, "target")
    units = _unit_class_check(pe.local_maps)
    diagram = _diagram_check(pe, pe.quotient_basis, pe.quotient_images,
                             failures)
    return {
        "injective": injective,
        "source_basis": source,
        "target_basis": target,
        "unit_class_fixed": units,
        "diagram_commutes": diagram,
        "passes": injective and source and target and units and diagram,
        "failures": tuple(failures),
    }


def verify_small_equivalence(se: SmallEquivalence) -> dict:
    """Check the defining conditions of a small equivalence.

    The domain condition -- the removed classes must exhaust the class
    group modulo doubles -- is a hard failure, raised instead of
    reported, because every later statement silently depends on it.
    On top of the four conditions shared with pre-equivalences this
    spot-checks Hilbert symbol preservation on all basis pairs at all
    removed places, and that every local map fixes the class of -1.
    """
    model = se.model
    leftover = model.pic_complement_two_rank(se.places)
    if leftover != 0:
        raise HypothesisError(
            "the removed set leaves class rank %d; a small equivalence "
            "needs rank 0" % leftover)
    failures: List[str] = []
    injective = len(set(se.images)) == len(se.images)
    if not injective:
        failures.append("two places share an image")
    source = _basis_check(model, se.places, se.sing_basis, failures, "source")
    target = _basis_check(model, se.images, se.sing_images, failures, "target")
    units = _unit_class_check(se.local_maps)
    diagram = _diagram_check(se, se.sing_basis, se.sing_images, failures)

    symbols = True
    pairs = [(a, b) for i, a in enumerate(se.sing_basis)
             for b in se.sing_basis[i:]]
    image_pairs = [(a, b) for i, a in enumerate(se.sing_images)
                   for b in se.sing_images[i:]]
    for (a, b), (ta, tb) in zip(pairs, image_pairs):
        for P, Q in zip(se.places, se.images):
            if hilbert_symbol(a, b, P) != hilbert_symbol(ta, tb, Q):
                failures.append("symbol of (%s, %s) changes at %s" % (a, b, P))
                symbols = False

    minus_one = model.constant(model.field.neg(1))
    fixed = True
    for P, Q, lm in zip(se.places, se.images, se.local_maps):
        if lm.apply(local_square_class(minus_one, P)) != local_square_class(
                minus_one, Q):
            failures.append("the class of -1 is not preserved at %s" % P)
            fixed = False

    return {
        "domain_rank_zero": True,
        "injective": injective,
        "source_basis": source,
        "target_basis": target,
        "unit_class_fixed": units,
        "diagram_commutes": diagram,
        "symbols_preserved": symbols,
        "minus_one_fixed": fixed,
        "passes": (injective and source and target and units and diagram
                   and symbols and fixed),
        "failures": tuple(failures),
    }


def wild_points(se: SmallEquivalence) -> frozenset:
    """The removed places where the local map breaks order parity.

    Wildness is read off the recorded Klein-four maps: a place is wild
    exactly when its map moves the even classes off themselves, which
    does not depend on the choice of local generators.  Certificates
    that fail verification are rejected.
    """
    report = verify_small_equivalence(se)
    if not report["passes"]:
        raise VerificationError(
            "refusing to read wild points off an invalid certificate: %s"
            % report["failures"][0])
    return frozenset(P for P, lm in zip(se.places, se.local_maps)
                     if lm.is_wild)


def check_necessary_condition(model, S) -> bool:
    """Whether S is large enough to be wild: twice its class rank."""
    return len(tuple(S)) >= 2 * g_rank(model, S).rank


def _rank_preservation_report(se: SmallEquivalence) -> dict:
    """Rank bookkeeping that any genuine certificate must satisfy."""
    model = se.model
    src = g_rank(model, se.places).rank
    dst = g_rank(model, se.images).rank
    removed = set(se.images)
    in_target = all(
        all(P in removed or n % 2 == 0 for P, n in m.divisor().items())
        for m in se.sing_images)
    delta_src = delta_space(model, se.places).rank
    delta_dst = delta_space(model, se.images).rank
    return {
        "g_rank_source": src,
        "g_rank_target": dst,
        "g_ranks_equal": src == dst,
        "sing_images_in_target": in_target,
        "delta_rank_source": delta_src,
        "delta_rank_target": delta_dst,
        "delta_ranks_equal": delta_src == delta_dst,
        "passes": src == dst and in_target and delta_src == delta_dst,
    }


def check_rank_preservation(cert: WildSetCertificate) -> dict:
    """Recheck that the certificate preserves the three rank invariants.

    The class rank of the removed set, membership of the basis images
    in the target even-order classes, and the rank of the locally
    trivial subspace must all carry over; each is recomputed from
    scratch on both sides.
    """
    return _rank_preservation_report(cert.equivalence)


def certify(se: SmallEquivalence) -> WildSetCertificate:
    """Verify a small equivalence and package it with its wild set."""
    report = verify_small_equivalence(se)
    if not report["passes"]:
        raise VerificationError("certificate is invalid: %s"
                                % report["failures"][0])
    ranks = _rank_preservation_report(se)
    if not ranks["passes"]:
        raise VerificationError("certificate does not preserve ranks: %r"
                                % (ranks,))
    wild = sorted(P for P, lm in zip(se.places, se.local_maps) if lm.is_wild)
    merged = dict(report)
    merged.update(ranks)
    merged["passes"] = True
    return WildSetCertificate(se, tuple(wild), merged)


# -- realizing prescribed local maps

def _sandwich_solve(model, places, images, local_maps, src_gens, dst_gens):
    """Match prescribed local data to the embedded target, up to twists.

    Pushing the local classes of each source generator through the
    prescribed maps dictates where it must land -- provided the
    prescription stays inside the span of the target generators' local
    data.  When it does not, sandwiching a map between tame twists can
    repair it: neither side of the sandwich moves the parity of the
    image of u, so no wildness changes.  With x, y the pre- and
    post-twist bits at a place, a prescribed vector shifts linearly in
    x, y and the product xy, so the patterns solve an F_2 linear
    system with one extra consistency constraint, checked over the
    solution set in a fixed order.  Returns the adjusted maps and the
    generator images; raises when no pattern works.
    """
    # triangular basis of the embedded target, remembering combinations
    triangular: Dict[int, Tuple[int, int]] = {}
    for k, c in enumerate(dst_gens):
        v, combo = _local_bits(c, images), 1 << k
        while v:
            top = v.bit_length() - 1
            if top not in triangular:
                triangular[top] = (v, combo)
                break
            bv, bc = triangular[top]
            v ^= bv
            combo ^= bc
        else:
            raise VerificationError("the target generators are dependent "
                                    "in their local data")

    def reduce(v: int) -> Tuple[int, int]:
        residual, combo = 0, 0
        while v:
            top = v.bit_length() - 1
            if top in triangular:
                bv, bc = triangular[top]
                v ^= bv
                combo ^= bc
            else:
                residual |= 1 << top
                v &= (1 << top) - 1
        return residual, combo

    # unknowns per place j: pre-twist 3j, post-twist 3j+1, product 3j+2
    prescribed = []
    twist_flips = []
    for b in src_gens:
        v = 0
        flips = []
        for j, (P, lm) in enumerate(zip(places, local_maps)):
            e0, s0 = local_square_class(b, P)
            e, s = lm.apply((e0, s0))
            v |= e << (2 * j) | s << (2 * j + 1)
            iu_e, iu_s = lm.image_of_u
            # pre-twist feeds the map u times the class instead
            flips.append((iu_e << (2 * j) | iu_s << (2 * j + 1))
                         if e0 else 0)
            # post-twist flips the residue bit of odd-parity values,
            # whose parity the pre-twist may itself have moved
            flips.append(e << (2 * j + 1) if e else 0)
            flips.append(1 << (2 * j + 1) if e0 and iu_e else 0)
        prescribed.append(v)
        twist_flips.append(flips)

    nvars = 3 * len(places)
    equations = []
    for v, flips in zip(prescribed, twist_flips):
        r_v = reduce(v)[0]
        r_flips = [reduce(w)[0] if w else 0 for w in flips]
        bits = r_v
        for r in r_flips:
            bits |= r
        while bits:
            pos = bits.bit_length() - 1
            bits &= (1 << pos) - 1
            coeffs = 0
            for k, r in enumerate(r_flips):
                coeffs |= (r >> pos & 1) << k
            rhs = r_v >> pos & 1
            if coeffs or rhs:
                equations.append(coeffs << 1 | rhs)

    no_pattern = VerificationError(
        "the prescribed local maps cannot be realized, even after "
        "tame adjustment")
    solved: Dict[int, int] = {}
    for eq in equations:
        while eq:
            top = eq.bit_length() - 1
            if top == 0:
                raise no_pattern
            if top not in solved:
                solved[top] = eq
                break
            eq ^= solved[top]
    for top in sorted(solved, reverse=True):
        row = solved[top]
        for other in solved:
            if other != top and solved[other] >> top & 1:
                solved[other] ^= row

    particular = 0
    for top, row in solved.items():
        particular |= (row & 1) << (top - 1)
    free = [k for k in range(nvars) if k + 1 not in solved]
    kernel = []
    for f in free:
        vec = 1 << f
        for top, row in solved.items():
            vec |= (row >> (f + 1) & 1) << (top - 1)
        kernel.append(vec)

    def consistent(assign: int) -> bool:
        for j in range(len(places)):
            x, y, z = (assign >> 3 * j & 1, assign >> (3 * j + 1) & 1,
                       assign >> (3 * j + 2) & 1)
            if z != (x & y):
                return False
        return True

    twists = None
    for pick in range(1 << min(len(kernel), 20)):
        assign = particular
        for k, vec in enumerate(kernel):
            if pick >> k & 1:
                assign ^= vec
        if consistent(assign):
            twists = assign
            break
    if twists is None:
        raise no_pattern

    final_maps = []
    for j, lm in enumerate(local_maps):
        m = lm
        if twists >> 3 * j & 1:
            m = m.compose(LocalMap.tame_twist())
        if twists >> (3 * j + 1) & 1:
            m = LocalMap.tame_twist().compose(m)
        final_maps.append(m)
    basis_images = []
    for v, flips in zip(prescribed, twist_flips):
        for k, w in enumerate(flips):
            if twists >> k & 1:
                v ^= w
        residual, combo = reduce(v)
        assert residual == 0
        basis_images.append(_product(model, dst_gens, combo))
    return tuple(final_maps), tuple(basis_images)


def _realize_small_equivalence(model, places, images, local_maps
                               ) -> SmallEquivalence:
    """Solve for basis images matching the prescribed local maps.

    The even-order classes inject into the product of local square
    class groups over a removed set of rank zero, so the prescribed
    local data determines a small equivalence when the tame-twist
    solve succeeds.
    """
    places = tuple(places)
    images = tuple(images)
    for side, removed in (("source", places), ("target", images)):
        leftover = model.pic_complement_two_rank(removed)
        if leftover != 0:
            raise HypothesisError(
                "the %s set leaves class rank %d; realization needs rank 0"
                % (side, leftover))
    src = sing_space(model, places)
    dst = sing_space(model, images)
    final_maps, basis_images = _sandwich_solve(
        model, places, images, local_maps, src.generators, dst.generators)
    return SmallEquivalence(model, places, images, src.generators,
                            basis_images, final_maps)


# -- composition

def _same_model(a, b) -> bool:
    if type(a) is not type(b) or a.field.q != b.field.q:
        return False
    return getattr(a, "f", None) == getattr(b, "f", None)


def compose(c1: WildSetCertificate, c2: WildSetCertificate
            ) -> WildSetCertificate:
    """Glue two certificates into one for the composed equivalence.

    The composite removes the first set together with the part of the
    second untouched by the first map, composes local maps where the
    image of the first lands in the second's territory, and realizes
    the result from scratch; when that prescription is unsatisfiable
    the wild locus alone is rebuilt and re-extended.  The wild loci
    must be disjoint -- two wild maps would compose to a tame one --
    and a place of the second set that the first set contains but does
    not map into the second has no consistent reading, so it is
    rejected as misaligned.
    """
    se1, se2 = c1.equivalence, c2.equivalence
    if not _same_model(se1.model, se2.model):
        raise ValueError("certificates live over different fields")
    model = se1.model
    forward = dict(zip(se1.places, se1.images))
    hit = set(se1.images)
    extra = [Q for Q in se2.places if Q not in hit]
    clash = [Q for Q in extra if Q in forward]
    if clash:
        raise ValueError("misaligned domains: %s is removed by both "
                         "certificates but not matched" % clash[0])

    wild2 = set(c2.wild_set)
    pulled_back = {P for P in se1.places if forward[P] in wild2}
    pulled_back.update(Q for Q in extra if Q in wild2)
    overlap = set(c1.wild_set) & pulled_back
    if overlap:
        raise ValueError("wild sets overlap at %s" % sorted(overlap)[0])

    places, images, maps = [], [], []
    for P, Q, lm in zip(se1.places, se1.images, se1.local_maps):
        places.append(P)
        if Q in set(se2.places):
            images.append(se2.image_of(Q))
            maps.append(se2.local_map_at(Q).compose(lm))
        else:
            images.append(Q)
            maps.append(lm)
    for Q in extra:
        places.append(Q)
        images.append(se2.image_of(Q))
        maps.append(se2.local_map_at(Q))

    try:
        se = _realize_small_equivalence(model, places, images, maps)
    except VerificationError:
        se = _wild_union_fallback(model, places, images, maps)
    cert = certify(se)
    expected = set(c1.wild_set) | pulled_back
    if set(cert.wild_set) != expected:
        raise VerificationError(
            "composition computed wild set {%s}, expected {%s}"
            % (", ".join(map(str, cert.wild_set)),
               ", ".join(map(str, sorted(expected)))))
    return cert


def _wild_union_fallback(model, places, images, maps) -> SmallEquivalence:
    """Fresh certificate on the wild part when the rigid glue fails.

    A certificate says nothing about its extension off the stored
    domain, so the composite matching at a tame place -- and even the
    assumption that an unmatched place stays put -- can be collectively
    unsatisfiable as written.  Only the wild locus is binding: rebuild
    a pre-equivalence there with the composed wild maps, searching the
    injective matchings into the recorded image pool in a fixed order
    starting from the faithful one, and extend the first that solves.
    """
    keep = [j for j, m in enumerate(maps) if m.is_wild]
    if not keep:
        raise VerificationError(
            "the composite data cannot be realized and has no wild part "
            "to rebuild")
    wild_places = tuple(places[j] for j in keep)
    wild_maps = tuple(maps[j] for j in keep)
    pool = tuple(images[j] for j in keep)
    src_gens = quotient_basis(model, wild_places)
    for number, cand in enumerate(itertools.permutations(pool)):
        if number == 40320:
            break
        dst_gens = quotient_basis(model, cand)
        try:
            final_maps, gen_images = _sandwich_solve(
                model, wild_places, cand, wild_maps, src_gens, dst_gens)
        except VerificationError:
            continue
        pe = PreEquivalence(model, wild_places, cand, src_gens, gen_images,
                            final_maps)
        return extend_pre_equivalence(pe)
    raise VerificationError(
        "no matching of the wild locus {%s} into its image pool realizes "
        "the composed local maps" % ", ".join(str(P) for P in wild_places))


# -- extension of a pre-equivalence

def _auxiliary_places(model, lams, forbidden, degree_cap) -> Tuple:
    """One place per function, seeing it and none of the others.

    Scans places by increasing degree -- finite ones before the
    infinite one -- for residues that make exactly one of the given
    locally-trivial functions a nonsquare.  Existence is guaranteed
    only in the limit, so running past the degree cap raises instead
    of returning something wrong.
    """
    found: List[Optional[object]] = [None] * len(lams)
    missing = len(lams)
    for d in range(1, degree_cap + 1):
        for P in sorted(model.places_of_degree(d),
                        key=lambda Q: bool(Q.is_infinite)):
            if P in forbidden or P in found:
                continue
            nonsquare = [i for i, lam in enumerate(lams)
                         if local_square_class(lam, P) != ONE]
            if len(nonsquare) == 1 and found[nonsquare[0]] is None:
                found[nonsquare[0]] = P
                missing -= 1
                if missing == 0:
                    return tuple(found)
    raise SearchExhausted(
        "no places of degree <= %d separate the %d locally trivial classes; "
        "raise the degree cap" % (degree_cap, len(lams)))


def _make_locally_trivial(mus, lams, spots):
    """Multiply by the matching basis element wherever one is seen.

    Each of the given functions may be a nonsquare at some of the
    spots; the spot's own basis element is a nonsquare exactly there,
    so multiplying repairs that spot without disturbing the others.
    """
    out = []
    for mu in mus:
        for lam, P in zip(lams, spots):
            if local_square_class(mu, P) != ONE:
                mu = mu * lam
        out.append(mu)
    return out


def extend_pre_equivalence(pe: PreEquivalence, degree_cap: int = 6
                           ) -> SmallEquivalence:
    """Complete a pre-equivalence to a small equivalence, literally.

    Requires the class ranks of the two removed sets to coincide; then
    the locally trivial subspaces have a common rank m, and attaching
    one auxiliary place per basis element on each side -- the place
    seeing exactly that element -- kills the punctured class group.
    The auxiliary places join the removed set carrying the identity
    local map, the quotient basis is patched to be locally trivial at
    them, and the combined data is a small equivalence, which is
    verified before being returned.
    """
    report = verify_pre_equivalence(pe)
    if not report["passes"]:
        raise VerificationError("cannot extend an invalid pre-equivalence: %s"
                                % report["failures"][0])
    model = pe.model
    src_rank = g_rank(model, pe.places).rank
    dst_rank = g_rank(model, pe.images).rank
    if src_rank != dst_rank:
        raise HypothesisError(
            "removed classes span ranks %d and %d; extension needs them "
            "equal" % (src_rank, dst_rank))

    src_delta = delta_space(model, pe.places)
    dst_delta = delta_space(model, pe.images)
    assert src_delta.rank == dst_delta.rank
    if src_delta.rank == 0:
        se = SmallEquivalence(model, pe.places, pe.images, pe.quotient_basis,
                              pe.quotient_images, pe.local_maps)
    else:
        spots = _auxiliary_places(model, src_delta.generators,
                                  set(pe.places), degree_cap)
        spots2 = _auxiliary_places(model, dst_delta.generators,
                                   set(pe.images), degree_cap)
        mus = _make_locally_trivial(pe.quotient_basis,
                                    src_delta.generators, spots)
        mus2 = _make_locally_trivial(pe.quotient_images,
                                     dst_delta.generators, spots2)
        se = SmallEquivalence(
            model,
            pe.places + spots,
            pe.images + spots2,
            tuple(src_delta.generators) + tuple(mus),
            tuple(dst_delta.generators) + tuple(mus2),
            pe.local_maps + (LocalMap.identity(),) * len(spots))
    final = verify_small_equivalence(se)
    if not final["passes"]:
        raise VerificationError("extension produced an invalid certificate: "
                                "%s" % final["failures"][0])
    return se


# -- serialization

def _backend_name(model) -> str:
    return ("elliptic_curve" if hasattr(model, "rational_points")
            else "projective_line")


def certificate_to_json(cert: WildSetCertificate) -> str:
    """Serialize a certificate to the interchange JSON form."""
    se = cert.equivalence
    model = se.model
    data = {"backend": _backend_name(model), "q": model.field.q}
    if data["backend"] == "elliptic_curve":
        data["curve"] = poly_str(model.f, "t", model.field)
    data["S"] = [str(P) for P in se.places]
    data["T"] = [str(Q) for Q in se.images]
    data["quotient_basis"] = [str(b) for b in se.sing_basis]
    data["quotient_images"] = [str(m) for m in se.sing_images]
    data["local_maps"] = [
        {"place": str(P),
         "image_of_u": square_class_str(lm.image_of_u),
         "image_of_pi": square_class_str(lm.image_of_pi)}
        for P, lm in zip(se.places, se.local_maps)]
    data["claimed_wild_set"] = [str(P) for P in cert.wild_set]
    return json.dumps(data, indent=2)


def certificate_from_json(text: str) -> WildSetCertificate:
    """Rebuild and re-verify a certificate from its JSON form.

    The model is reconstructed from the backend fields, every place and
    function is reparsed, and the whole certificate goes through
    certify again -- the claimed wild set is compared against the
    recomputed one and a mismatch is an error, not a warning.
    """
    data = json.loads(text)
    try:
        backend = data["backend"]
        field = Fq(data["q"])
        if backend == "projective_line":
            model = ProjectiveLine(field)
        elif backend == "elliptic_curve":
            model = EllipticModel(field, poly_parse(data["curve"], field))
        else:
            raise ValueError("unknown backend %r" % backend)
        places = [model.parse_place(s) for s in data["S"]]
        images = [model.parse_place(s) for s in data["T"]]
        basis = [model.parse(s) for s in data["quotient_basis"]]
        imaged = [model.parse(s) for s in data["quotient_images"]]
        by_place = {entry["place"]: LocalMap(
            square_class_parse(entry["image_of_u"]),
            square_class_parse(entry["image_of_pi"]))
            for entry in data["local_maps"]}
        maps = [by_place[str(P)] for P in places]
        claimed = {model.parse_place(s) for s in data["claimed_wild_set"]}
    except KeyError as missing:
        raise ValueError("certificate is missing the %s field" % missing)
    se = SmallEquivalence(model, places, images, basis, imaged, maps)
    cert = certify(se)
    if set(cert.wild_set) != claimed:
        raise VerificationError(
            "claimed wild set {%s} differs from the computed {%s}"
            % (", ".join(sorted(map(str, claimed))),
               ", ".join(map(str, cert.wild_set))))
    return cert
