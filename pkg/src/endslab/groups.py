"""Canonical computable representations of the base group families.

Every element is an immutable value in a canonical form, so equality and
hashing are structural.  The families implemented here are free groups
(reduced words), free abelian groups (integer vectors), cyclic groups
(residues), symmetric groups (permutations in one-line notation) and
finite tori (integer vectors with per-coordinate moduli).  Wreath
products live in :mod:`endslab.wreath`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Any, Iterator, Optional, Sequence

LETTERS = "abcdefghijklmnopqrstuvwxyz"


class GroupError(Exception):
    """Base class for group-kernel errors."""


class FamilyMismatchError(GroupError):
    """Operands belong to different group families or parameters."""


class InvalidParameterError(GroupError):
    """Group parameters out of range (e.g. modulus 0)."""


# ---------------------------------------------------------------------------
# elements


@dataclass(frozen=True, slots=True)
class FreeWord:
    """Reduced word over a ranked alphabet.

    Letters are nonzero signed indices: +i is the i-th letter (1-based),
    -i its inverse.  The letter sequence never contains an adjacent
    (l, -l) pair.
    """

    rank: int
    letters: tuple[int, ...] = ()

    def __post_init__(self):
        if self.rank < 1:
            raise InvalidParameterError(f"free group rank must be >= 1, got {self.rank}")
        prev = 0
        for l in self.letters:
            if l == 0 or abs(l) > self.rank:
                raise InvalidParameterError(f"letter {l} out of range for rank {self.rank}")
            if l == -prev:
                raise InvalidParameterError(f"word {self.letters} is not reduced")
            prev = l


@dataclass(frozen=True, slots=True)
class IntVector:
    """Element of a free abelian group, one coordinate per factor."""

    coords: tuple[int, ...]

    def __post_init__(self):
        if len(self.coords) < 1:
            raise InvalidParameterError("integer vector needs at least one coordinate")


@dataclass(frozen=True, slots=True)
class CyclicInt:
    """Residue modulo n, stored in [0, n)."""

    modulus: int
    value: int

    def __post_init__(self):
        if self.modulus < 1:
            raise InvalidParameterError(f"cyclic modulus must be >= 1, got {self.modulus}")
        if not 0 <= self.value < self.modulus:
            raise InvalidParameterError(
                f"residue {self.value} not in [0, {self.modulus})")


@dataclass(frozen=True, slots=True)
class Perm:
    """Permutation of {0..n-1} in one-line notation: image[i] = sigma(i)."""

    image: tuple[int, ...]

    def __post_init__(self):
        n = len(self.image)
        if n < 1:
            raise InvalidParameterError("permutation degree must be >= 1")
        if sorted(self.image) != list(range(n)):
            raise InvalidParameterError(f"{self.image} is not a permutation of 0..{n - 1}")


@dataclass(frozen=True, slots=True)
class ModVector:
    """Element of a product of cyclic groups, coordinate i taken mod moduli[i]."""

    moduli: tuple[int, ...]
    coords: tuple[int, ...]

    def __post_init__(self):
        if len(self.moduli) < 1:
            raise InvalidParameterError("torus needs at least one factor")
        if len(self.moduli) != len(self.coords):
            raise InvalidParameterError("moduli/coords length mismatch")
        for m, c in zip(self.moduli, self.coords):
            if m < 1:
                raise InvalidParameterError(f"torus modulus must be >= 1, got {m}")
            if not 0 <= c < m:
                raise InvalidParameterError(f"coordinate {c} not in [0, {m})")


# WreathElement (endslab.wreath) is also a valid GroupElement.
GroupElement = Any


def _check_same_family(a, b) -> None:
    if type(a) is not type(b):
        raise FamilyMismatchError(
            f"cannot combine {type(a).__name__} with {type(b).__name__}")
    if isinstance(a, FreeWord) and a.rank != b.rank:
        raise FamilyMismatchError(f"free ranks differ: {a.rank} vs {b.rank}")
    if isinstance(a, IntVector) and len(a.coords) != len(b.coords):
        raise FamilyMismatchError(
            f"vector lengths differ: {len(a.coords)} vs {len(b.coords)}")
    if isinstance(a, CyclicInt) and a.modulus != b.modulus:
        raise FamilyMismatchError(f"moduli differ: {a.modulus} vs {b.modulus}")
    if isinstance(a, Perm) and len(a.image) != len(b.image):
        raise FamilyMismatchError(
            f"permutation degrees differ: {len(a.image)} vs {len(b.image)}")
    if isinstance(a, ModVector) and a.moduli != b.moduli:
        raise FamilyMismatchError(f"torus moduli differ: {a.moduli} vs {b.moduli}")


def reduce_letters(letters: Sequence[int]) -> tuple[int, ...]:
    """Freely reduce a letter sequence (cancel adjacent l, -l pairs)."""
    out: list[int] = []
    for l in letters:
        if out and out[-1] == -l:
            out.pop()
        else:
            out.append(l)
    return tuple(out)


def _raw_freeword(rank: int, letters: tuple[int, ...]) -> FreeWord:
    # internal fast constructor for letter sequences already known reduced
    w = object.__new__(FreeWord)
    object.__setattr__(w, "rank", rank)
    object.__setattr__(w, "letters", letters)
    return w


def _freeword_mul(a: FreeWord, b: FreeWord) -> FreeWord:
    # both inputs reduced, so cancellation happens only at the seam
    x, y = a.letters, b.letters
    i, j, ny = len(x), 0, len(y)
    while i > 0 and j < ny and x[i - 1] == -y[j]:
        i -= 1
        j += 1
    return _raw_freeword(a.rank, x[:i] + y[j:])


def multiply(a: GroupElement, b: GroupElement) -> GroupElement:
    """Canonical-form product a*b for the base families."""
    _check_same_family(a, b)
    if isinstance(a, FreeWord):
        return _freeword_mul(a, b)
    if isinstance(a, IntVector):
        return IntVector(tuple(x + y for x, y in zip(a.coords, b.coords)))
    if isinstance(a, CyclicInt):
        return CyclicInt(a.modulus, (a.value + b.value) % a.modulus)
    if isinstance(a, Perm):
        return Perm(tuple(a.image[i] for i in b.image))
    if isinstance(a, ModVector):
        return ModVector(a.moduli,
                         tuple((x + y) % m for x, y, m in zip(a.coords, b.coords, a.moduli)))
    raise FamilyMismatchError(f"unsupported element type {type(a).__name__}")


def inverse(a: GroupElement) -> GroupElement:
    """Inverse element for the base families."""
    if isinstance(a, FreeWord):
        return _raw_freeword(a.rank, tuple(-l for l in reversed(a.letters)))
    if isinstance(a, IntVector):
        return IntVector(tuple(-x for x in a.coords))
    if isinstance(a, CyclicInt):
        return CyclicInt(a.modulus, (-a.value) % a.modulus)
    if isinstance(a, Perm):
        img = [0] * len(a.image)
        for i, j in enumerate(a.image):
            img[j] = i
        return Perm(tuple(img))
    if isinstance(a, ModVector):
        return ModVector(a.moduli, tuple((-x) % m for x, m in zip(a.coords, a.moduli)))
    raise FamilyMismatchError(f"unsupported element type {type(a).__name__}")


def sort_key(a: GroupElement):
    """Total order within one family; used for canonical coset representatives."""
    if isinstance(a, FreeWord):
        return (len(a.letters), a.letters)
    if isinstance(a, IntVector):
        return a.coords
    if isinstance(a, CyclicInt):
        return a.value
    if isinstance(a, Perm):
        return a.image
    if isinstance(a, ModVector):
        return a.coords
    raise FamilyMismatchError(f"no sort key for {type(a).__name__}")


def element_label(a: GroupElement) -> str:
    """Short human-readable label (uppercase letter = inverse letter)."""
    if isinstance(a, FreeWord):
        if not a.letters:
            return "1"
        return "".join(LETTERS[l - 1] if l > 0 else LETTERS[-l - 1].upper()
                       for l in a.letters)
    if isinstance(a, IntVector):
        if len(a.coords) == 1:
            return str(a.coords[0])
        return "(" + ",".join(map(str, a.coords)) + ")"
    if isinstance(a, CyclicInt):
        return str(a.value)
    if isinstance(a, Perm):
        return perm_cycle_notation(a)
    if isinstance(a, ModVector):
        return "(" + ",".join(map(str, a.coords)) + ")"
    return str(a)


def perm_cycle_notation(p: Perm) -> str:
    seen: set[int] = set()
    parts = []
    for i in range(len(p.image)):
        if i in seen or p.image[i] == i:
            continue
        cyc = [i]
        j = p.image[i]
        while j != i:
            seen.add(j)
            cyc.append(j)
            j = p.image[j]
        parts.append("(" + " ".join(map(str, cyc)) + ")")
    return "".join(parts) if parts else "()"


def perm_parity(p: Perm) -> int:
    """0 for even permutations, 1 for odd."""
    seen: set[int] = set()
    parity = 0
    for i in range(len(p.image)):
        if i in seen:
            continue
        length = 0
        j = i
        while j not in seen:
            seen.add(j)
            j = p.image[j]
            length += 1
        parity ^= (length - 1) & 1
    return parity


# ---------------------------------------------------------------------------
# generating sets


@dataclass(frozen=True)
class SymmetricGenSet:
    """Indexed generator list closed under inverse.

    ``pairing`` is an involution p with elements[p[i]] == elements[i]^-1.
    Duplicate elements are legal (they produce parallel edges in graphs);
    identity generators are legal only when flagged and produce loops.
    """

    elements: tuple[GroupElement, ...]
    pairing: tuple[int, ...]
    names: tuple[str, ...]
    identity_indices: frozenset[int] = frozenset()

    def __post_init__(self):
        n = len(self.elements)
        if len(self.pairing) != n or len(self.names) != n:
            raise GroupError("generator list, pairing and names must have equal length")
        if sorted(self.pairing) != list(range(n)):
            raise GroupError(f"pairing {self.pairing} is not a permutation")
        for i, j in enumerate(self.pairing):
            if self.pairing[j] != i:
                raise GroupError(f"pairing {self.pairing} is not an involution")

    def __len__(self) -> int:
        return len(self.elements)

    def pair_of(self, i: int) -> int:
        return self.pairing[i]


def make_gen_set(group: "Group",
                 items: Sequence[GroupElement],
                 names: Optional[Sequence[str]] = None,
                 allow_identity: bool = False) -> SymmetricGenSet:
    """Close ``items`` under inverse, one pair per listed item.

    Items are not deduplicated: listing both s and s^-1 yields two pairs
    and therefore doubled edges in orbital graphs (collapsed by simplify).
    """
    ident = group.identity()
    elements: list[GroupElement] = []
    pairing: list[int] = []
    out_names: list[str] = []
    identity_idx: set[int] = set()
    for pos, item in enumerate(items):
        if not group.contains(item):
            raise FamilyMismatchError(f"{item!r} is not an element of {group}")
        inv = group.inverse(item)
        name = names[pos] if names is not None else element_label(item)
        if item == ident:
            if not allow_identity:
                raise GroupError(
                    "identity generator requires allow_identity=True (it only adds loops)")
            identity_idx.add(len(elements))
        if inv == item:
            pairing.append(len(elements))
            elements.append(item)
            out_names.append(name)
        else:
            i = len(elements)
            pairing.extend([i + 1, i])
            elements.extend([item, inv])
            inv_name = names[pos] + "^-1" if names is not None else element_label(inv)
            out_names.extend([name, inv_name])
    return SymmetricGenSet(tuple(elements), tuple(pairing), tuple(out_names),
                           frozenset(identity_idx))


def verify_gen_set(group: "Group", gens: SymmetricGenSet) -> None:
    """Check the inverse-pairing invariant against the group law."""
    for i, g in enumerate(gens.elements):
        if group.inverse(g) != gens.elements[gens.pairing[i]]:
            raise GroupError(f"generator {i} is not paired with its inverse")


# ---------------------------------------------------------------------------
# group descriptors


class Group:
    """A group family with fixed parameters: knows its law and identity."""

    def identity(self) -> GroupElement:
        raise NotImplementedError

    def multiply(self, a: GroupElement, b: GroupElement) -> GroupElement:
        raise NotImplementedError

    def inverse(self, a: GroupElement) -> GroupElement:
        raise NotImplementedError

    def contains(self, a: GroupElement) -> bool:
        raise NotImplementedError

    def standard_gens(self) -> SymmetricGenSet:
        raise NotImplementedError

    def order(self) -> Optional[int]:
        """Group order, or None when infinite."""
        return None

    def elements(self) -> Iterator[GroupElement]:
        raise GroupError(f"{self} is not finitely enumerable")


class _BaseFamily(Group):
    def multiply(self, a, b):
        if not (self.contains(a) and self.contains(b)):
            raise FamilyMismatchError(f"operands do not belong to {self}")
        return multiply(a, b)

    def inverse(self, a):
        if not self.contains(a):
            raise FamilyMismatchError(f"operand does not belong to {self}")
        return inverse(a)


@dataclass(frozen=True)
class FreeGroup(_BaseFamily):
    rank: int

    def __post_init__(self):
        if self.rank < 1:
            raise InvalidParameterError("free group rank must be >= 1")

    def identity(self):
        return FreeWord(self.rank, ())

    def multiply(self, a, b):
        if not (self.contains(a) and self.contains(b)):
            raise FamilyMismatchError(f"operands do not belong to {self}")
        return _freeword_mul(a, b)

    def contains(self, a):
        return isinstance(a, FreeWord) and a.rank == self.rank

    def letter(self, i: int, power: int = 1) -> FreeWord:
        """The i-th letter (0-based) or its inverse."""
        return FreeWord(self.rank, ((i + 1) if power > 0 else -(i + 1),))

    def standard_gens(self):
        elements, pairing, names = [], [], []
        for i in range(self.rank):
            base = LETTERS[i] if i < len(LETTERS) else f"g{i}"
            k = len(elements)
            elements.extend([self.letter(i), self.letter(i, -1)])
            pairing.extend([k + 1, k])
            names.extend([base, base + "^-1"])
        return SymmetricGenSet(tuple(elements), tuple(pairing), tuple(names))

    def __str__(self):
        return f"F({self.rank})"


@dataclass(frozen=True)
class FreeAbelian(_BaseFamily):
    rank: int

    def __post_init__(self):
        if self.rank < 1:
            raise InvalidParameterError("free abelian rank must be >= 1")

    def identity(self):
        return IntVector((0,) * self.rank)

    def contains(self, a):
        return isinstance(a, IntVector) and len(a.coords) == self.rank

    def unit(self, i: int, sign: int = 1) -> IntVector:
        coords = [0] * self.rank
        coords[i] = 1 if sign > 0 else -1
        return IntVector(tuple(coords))

    def standard_gens(self):
        elements, pairing, names = [], [], []
        for i in range(self.rank):
            k = len(elements)
            elements.extend([self.unit(i), self.unit(i, -1)])
            pairing.extend([k + 1, k])
            if self.rank == 1:
                names.extend(["+1", "-1"])
            else:
                names.extend([f"+e{i + 1}", f"-e{i + 1}"])
        return SymmetricGenSet(tuple(elements), tuple(pairing), tuple(names))

    def __str__(self):
        return "Z" if self.rank == 1 else f"Z^{self.rank}"


@dataclass(frozen=True)
class Cyclic(_BaseFamily):
    modulus: int

    def __post_init__(self):
        if self.modulus < 1:
            raise InvalidParameterError(f"cyclic modulus must be >= 1, got {self.modulus}")

    def identity(self):
        return CyclicInt(self.modulus, 0)

    def contains(self, a):
        return isinstance(a, CyclicInt) and a.modulus == self.modulus

    def standard_gens(self):
        n = self.modulus
        one = CyclicInt(n, 1 % n)
        if one == self.identity():
            # trivial group: the only "generator" is the identity, kept flagged
            return SymmetricGenSet((one,), (0,), ("+1",), frozenset({0}))
        if inverse(one) == one:
            return SymmetricGenSet((one,), (0,), ("+1",))
        return SymmetricGenSet((one, inverse(one)), (1, 0), ("+1", "-1"))

    def order(self):
        return self.modulus

    def elements(self):
        return (CyclicInt(self.modulus, v) for v in range(self.modulus))

    def __str__(self):
        return f"C({self.modulus})"


@dataclass(frozen=True)
class SymmetricGroup(_BaseFamily):
    degree: int

    def __post_init__(self):
        if self.degree < 1:
            raise InvalidParameterError("symmetric group degree must be >= 1")

    def identity(self):
        return Perm(tuple(range(self.degree)))

    def contains(self, a):
        return isinstance(a, Perm) and len(a.image) == self.degree

    def transposition(self, i: int, j: int) -> Perm:
        img = list(range(self.degree))
        img[i], img[j] = img[j], img[i]
        return Perm(tuple(img))

    def standard_gens(self):
        elements, pairing, names = [], [], []
        for i in range(self.degree - 1):
            elements.append(self.transposition(i, i + 1))
            pairing.append(i)
            names.append(f"({i} {i + 1})")
        return SymmetricGenSet(tuple(elements), tuple(pairing), tuple(names))

    def order(self):
        n = 1
        for k in range(2, self.degree + 1):
            n *= k
        return n

    def elements(self):
        return (Perm(img) for img in itertools.permutations(range(self.degree)))

    def __str__(self):
        return f"Sym({self.degree})"


@dataclass(frozen=True)
class Torus(_BaseFamily):
    """Product of cyclic groups Z/d1 x ... x Z/dk."""

    moduli: tuple[int, ...]

    def __post_init__(self):
        if len(self.moduli) < 1 or any(m < 1 for m in self.moduli):
            raise InvalidParameterError(f"torus moduli must be >= 1, got {self.moduli}")

    def identity(self):
        return ModVector(self.moduli, (0,) * len(self.moduli))

    def contains(self, a):
        return isinstance(a, ModVector) and a.moduli == self.moduli

    def unit(self, i: int, sign: int = 1) -> ModVector:
        coords = [0] * len(self.moduli)
        coords[i] = (1 if sign > 0 else -1) % self.moduli[i]
        return ModVector(self.moduli, tuple(coords))

    def standard_gens(self):
        items = [self.unit(i) for i in range(len(self.moduli))]
        return make_gen_set(self, items,
                            names=[f"+e{i + 1}" for i in range(len(self.moduli))],
                            allow_identity=True)

    def order(self):
        n = 1
        for m in self.moduli:
            n *= m
        return n

    def elements(self):
        return (ModVector(self.moduli, c)
                for c in itertools.product(*(range(m) for m in self.moduli)))

    def __str__(self):
        return "T(" + ",".join(map(str, self.moduli)) + ")"


def identity(group: Group) -> GroupElement:
    return group.identity()


def standard_gens(group: Group) -> SymmetricGenSet:
    return group.standard_gens()


def nonidentity_gens(group: Group) -> SymmetricGenSet:
    """All non-identity elements of a finite group as one symmetric set."""
    if group.order() is None:
        raise GroupError(f"{group} is infinite; cannot form the full generating set")
    ident = group.identity()
    elements = [g for g in group.elements() if g != ident]
    elements.sort(key=sort_key)
    seen: set[GroupElement] = set()
    items = []
    for g in elements:
        if g in seen:
            continue
        seen.add(g)
        seen.add(group.inverse(g))
        items.append(g)
    return make_gen_set(group, items)
