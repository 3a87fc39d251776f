"""Local square classes, Hilbert symbols, and Klein-four local maps.

At a place P with odd residue field, the completion's nonzero elements
modulo squares form a Klein four-group generated by a fixed nonsquare
unit u and the canonical uniformizer pi.  We encode the class of an
element as a pair of bits

    (ord parity, nonsquare bit of the unit-part residue)

so 1 = (0,0), u = (0,1), pi = (1,0), and u*pi = (1,1).  Multiplication
of classes is XOR.  Everything downstream -- symbols, local maps, and
their wildness -- is bookkeeping on these pairs.
"""

from __future__ import annotations

from typing import Tuple

SquareClass = Tuple[int, int]

ONE: SquareClass = (0, 0)
U: SquareClass = (0, 1)
PI: SquareClass = (1, 0)
U_PI: SquareClass = (1, 1)

_CLASS_NAMES = {ONE: "1", U: "u", PI: "pi", U_PI: "u*pi"}
_CLASS_BY_NAME = {name: cls for cls, name in _CLASS_NAMES.items()}


def square_class_mul(a: SquareClass, b: SquareClass) -> SquareClass:
    return (a[0] ^ b[0], a[1] ^ b[1])


def square_class_str(a: SquareClass) -> str:
    return _CLASS_NAMES[a]


def square_class_parse(s: str) -> SquareClass:
    try:
        return _CLASS_BY_NAME[s.strip().replace(" ", "")]
    except KeyError:
        raise ValueError("unknown square class %r; expected one of 1, u, pi, u*pi" % s)


def residue_field_size(place) -> int:
    """Number of elements of the residue field at a place."""
    return place.field.q ** place.degree


def minus_one_is_square(place) -> bool:
    """Whether -1 is a square in the residue field (size 1 mod 4)."""
    return residue_field_size(place) % 4 == 1


def local_square_class(elem, place) -> SquareClass:
    """The square class of a function in the completion at a place."""
    e = elem.ord_at(place) & 1
    chi = place.residue_field().quad_char(elem.unit_residue(place))
    assert chi != 0, "unit residue of a nonzero function cannot vanish"
    return (e, 1 if chi < 0 else 0)


def is_local_square(elem, place) -> bool:
    return local_square_class(elem, place) == ONE


def square_class_hilbert(a: SquareClass, b: SquareClass,
                         minus_one_square: bool) -> int:
    """Hilbert symbol of two square classes, +1 or -1.

    The pairing is chi(-1)^(ord_a ord_b) * chi(ua)^(ord_b) * chi(ub)^(ord_a)
    with u* the unit parts; on bit pairs that is a symmetric F_2 form.
    """
    ea, sa = a
    eb, sb = b
    sign = (sa & eb) ^ (sb & ea)
    if not minus_one_square:
        sign ^= ea & eb
    return -1 if sign else 1


def hilbert_symbol(a, b, place) -> int:
    """The quadratic Hilbert symbol of two functions at a place."""
    return square_class_hilbert(local_square_class(a, place),
                                local_square_class(b, place),
                                minus_one_is_square(place))


def reciprocity_product(a, b) -> int:
    """Product of Hilbert symbols over all places; always +1.

    The symbol is +1 wherever both functions have order zero, so the
    product runs over the union of the two divisor supports.
    """
    places = set(a.divisor().coeffs) | set(b.divisor().coeffs)
    prod = 1
    for P in places:
        prod *= hilbert_symbol(a, b, P)
    return prod


class LocalMap:
    """An automorphism of the local square-class group at one place.

    Recorded by the images of u and pi.  Any pair of distinct nontrivial
    classes determines one (the group is Klein four), and the map acts
    F_2-linearly on (ord, nonsquare) pairs.  A map is *wild* when it
    moves u, i.e. fails to come from a square-class-scaling of the
    completion's multiplicative group.
    """

    __slots__ = ("image_of_u", "image_of_pi")

    def __init__(self, image_of_u: SquareClass, image_of_pi: SquareClass):
        if image_of_u == ONE or image_of_pi == ONE or image_of_u == image_of_pi:
            raise ValueError("images of u and pi must be distinct nontrivial classes")
        self.image_of_u = image_of_u
        self.image_of_pi = image_of_pi

    @classmethod
    def identity(cls) -> "LocalMap":
        return cls(U, PI)

    @classmethod
    def tame_twist(cls) -> "LocalMap":
        """The nonidentity map with image_of_u = u: pi goes to u*pi."""
        return cls(U, U_PI)

    @classmethod
    def all_maps(cls):
        """All six automorphisms, in a fixed order."""
        out = []
        for iu in (U, PI, U_PI):
            for ip in (U, PI, U_PI):
                if iu != ip:
                    out.append(cls(iu, ip))
        return out

    def apply(self, a: SquareClass) -> SquareClass:
        e, s = a
        out = ONE
        if e:
            out = square_class_mul(out, self.image_of_pi)
        if s:
            out = square_class_mul(out, self.image_of_u)
        return out

    @property
    def is_wild(self) -> bool:
        return self.image_of_u != U

    @property
    def is_identity(self) -> bool:
        return self.image_of_u == U and self.image_of_pi == PI

    def compose(self, inner: "LocalMap") -> "LocalMap":
        """The map 'self after inner'."""
        return LocalMap(self.apply(inner.image_of_u), self.apply(inner.image_of_pi))

    def inverse(self) -> "LocalMap":
        for m in self.all_maps():
            if self.compose(m).is_identity:
                return m
        raise AssertionError("unreachable: Klein-four automorphisms form a group")

    def __eq__(self, other) -> bool:
        return (isinstance(other, LocalMap) and self.image_of_u == other.image_of_u
                and self.image_of_pi == other.image_of_pi)

    def __hash__(self) -> int:
        return hash((self.image_of_u, self.image_of_pi))

    def __repr__(self) -> str:
        return "LocalMap(u -> %s, pi -> %s)" % (square_class_str(self.image_of_u),
                                                square_class_str(self.image_of_pi))

    def preserves_hilbert_pairing(self, minus_one_square: bool) -> bool:
        """Whether the map respects the symbol at a place with this chi(-1).

        When -1 is a local square every automorphism does; otherwise only
        the two tame ones survive.
        """
        classes = (ONE, U, PI, U_PI)
        for a in classes:
            for b in classes:
                if (square_class_hilbert(self.apply(a), self.apply(b), minus_one_square)
                        != square_class_hilbert(a, b, minus_one_square)):
                    return False
        return True
