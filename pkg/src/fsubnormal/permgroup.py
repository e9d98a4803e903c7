"""Permutation groups held as fully enumerated element tables.

Every group is small enough to list: a :class:`PermGroup` stores its elements
as rows of an integer array in lexicographic (canonical) order, so element
``0`` is always the identity.  A :class:`Subgroup` is a set of row indices
of its parent, stored as a Python ``int`` bitmask; equality, hashing, subset
tests and intersections are then plain integer operations.

Permutations compose left to right: ``p * q`` applies ``p`` first, and
``H ** g`` is ``g^-1 H g``.  Points are 1-based at the public surface
(constructors, ``Permutation.images``, group files) and 0-based inside the
arrays.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Sequence, Union

import numpy as np

from .errors import InvalidPermutation, NotNormal, OrderCapExceeded, SubgroupNotContained
from .primes import is_prime

__all__ = [
    "DEFAULT_ORDER_CAP",
    "DEFAULT_INTERVAL_BOUND",
    "DEFAULT_COMPLEMENT_BUDGET",
    "Permutation",
    "PermGroup",
    "Subgroup",
    "QuotientMap",
    "as_subgroup",
    "closure",
    "generate",
    "join",
    "normal_closure",
    "normalizer",
    "centralizer",
    "intersection",
    "product_set",
    "conjugate",
    "is_normal",
    "core",
    "minimal_overgroups",
    "interval",
    "maximal_overgroups",
    "maximal_subgroups",
    "complements",
    "quotient",
    "conjugacy_classes_of_subgroups",
]

DEFAULT_ORDER_CAP = 20_000
DEFAULT_INTERVAL_BOUND = 100_000
DEFAULT_COMPLEMENT_BUDGET = 2_000_000
# multiplication tables are materialised up to this order (int16 entries)
TABLE_LIMIT = 4096


class Permutation:
    """An immutable bijection of ``{1..n}`` given by its image list."""

    __slots__ = ("images", "_hash")

    def __init__(self, images: Iterable[int]):
        imgs = tuple(int(i) for i in images)
        n = len(imgs)
        if n == 0:
            raise InvalidPermutation("a permutation needs degree at least 1")
        if sorted(imgs) != list(range(1, n + 1)):
            raise InvalidPermutation(f"images {list(imgs)} are not a bijection of 1..{n}")
        self.images = imgs
        self._hash = hash(imgs)

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        return cls(range(1, degree + 1))

    @classmethod
    def from_array(cls, arr: Sequence[int]) -> "Permutation":
        """Build from 0-based images."""
        return cls(int(a) + 1 for a in arr)

    @classmethod
    def from_cycles(cls, degree: int, *cycles: Sequence[int]) -> "Permutation":
        """``Permutation.from_cycles(4, (1, 2, 3))`` is the 3-cycle 1->2->3->1 on four points."""
        img = list(range(1, degree + 1))
        seen: set[int] = set()
        for cyc in cycles:
            for a in cyc:
                if not 1 <= a <= degree or a in seen:
                    raise InvalidPermutation(f"bad cycle {cyc!r} for degree {degree}")
                seen.add(a)
            for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
                img[a - 1] = b
        return cls(img)

    @property
    def degree(self) -> int:
        return len(self.images)

    @property
    def array_form(self) -> tuple[int, ...]:
        return tuple(i - 1 for i in self.images)

    def __mul__(self, other: "Permutation") -> "Permutation":
        if other.degree != self.degree:
            raise InvalidPermutation("degree mismatch")
        return Permutation(other.images[i - 1] for i in self.images)

    def inverse(self) -> "Permutation":
        inv = [0] * self.degree
        for i, j in enumerate(self.images, 1):
            inv[j - 1] = i
        return Permutation(inv)

    def __pow__(self, k: int) -> "Permutation":
        if k < 0:
            return self.inverse() ** (-k)
        out = Permutation.identity(self.degree)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __call__(self, point: int) -> int:
        return self.images[point - 1]

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images, 1))

    def order(self) -> int:
        return math.lcm(*(len(c) for c in self.cycles())) if not self.is_identity() else 1

    def cycles(self) -> list[tuple[int, ...]]:
        """Non-trivial cycles, each starting at its smallest point."""
        seen = set()
        out = []
        for start in range(1, self.degree + 1):
            if start in seen:
                continue
            cyc = [start]
            seen.add(start)
            j = self.images[start - 1]
            while j != start:
                cyc.append(j)
                seen.add(j)
                j = self.images[j - 1]
            if len(cyc) > 1:
                out.append(tuple(cyc))
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self.images == other.images

    def __lt__(self, other: "Permutation") -> bool:
        return self.images < other.images

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        cyc = self.cycles()
        body = "".join("(" + " ".join(map(str, c)) + ")" for c in cyc) or "()"
        return f"Permutation<{self.degree}>{body}"


def _to_array_rows(gens: Sequence[Permutation], degree: int) -> list[tuple[int, ...]]:
    rows = []
    for g in gens:
        if not isinstance(g, Permutation):
            g = Permutation(g)
        if g.degree != degree:
            raise InvalidPermutation(f"generator {g!r} does not have degree {degree}")
        rows.append(g.array_form)
    return rows


class PermGroup:
    """A permutation group with its full, canonically ordered element list.

    Use :func:`closure` (or the constructors in :mod:`fsubnormal.builder`) to
    make one.  Derived data (multiplication table, conjugacy classes, normal
    subgroups, subgroup intervals, ...) is cached lazily in ``_cache``.  Cache
    entries are deterministic functions of the group, and are published with
    ``dict.setdefault`` so a racing duplicate computation is harmless.
    """

    def __init__(self, degree: int, generators: Sequence[Permutation], elements: np.ndarray, name: str | None = None):
        self.degree = int(degree)
        self.generators: tuple[Permutation, ...] = tuple(generators)
        self.elements = elements
        self.elements.setflags(write=False)
        self.order = len(elements)
        self.name = name
        self.interval_bound = DEFAULT_INTERVAL_BOUND
        self._cache: dict = {}
        self._build_lookup()
        self._table = None
        self.inv = self.index_of(np.argsort(self.elements, axis=1))

    # element lookup -------------------------------------------------------

    def _build_lookup(self):
        E = self.elements
        ident = np.arange(self.degree)
        alive = np.ones(self.order, dtype=bool)
        base = []
        for pt in range(self.degree):
            if alive.sum() <= 1:
                break
            fixes = E[:, pt] == ident[pt]
            if not fixes[alive].all():
                base.append(pt)
                alive &= fixes
        self._base = np.array(base, dtype=np.int64)
        radix = max(self.degree, 2)
        if len(base) == 0 or len(base) * math.log2(radix) < 62:
            self._radix = np.array([radix**i for i in range(len(base))], dtype=np.int64)
            keys = E[:, self._base].astype(np.int64) @ self._radix if len(base) else np.zeros(self.order, np.int64)
            order = np.argsort(keys, kind="stable")
            self._keys = keys[order]
            self._key_pos = order
            self._dict = None
        else:
            self._radix = None
            self._dict = {E[i, self._base].tobytes(): i for i in range(self.order)}

    def index_of(self, rows: np.ndarray) -> np.ndarray:
        """Element indices of the permutations given as 0-based rows (any leading shape).

        Only images of a base are inspected, so ``rows`` must lie in the group.
        """
        rows = np.asarray(rows)
        shape = rows.shape[:-1]
        flat = rows.reshape(-1, self.degree)[:, self._base]
        if self._dict is None:
            keys = flat.astype(np.int64) @ self._radix if len(self._base) else np.zeros(len(flat), np.int64)
            pos = np.searchsorted(self._keys, keys)
            out = self._key_pos[np.minimum(pos, self.order - 1)]
        else:
            flat = np.ascontiguousarray(flat.astype(self.elements.dtype))
            out = np.array([self._dict[r.tobytes()] for r in flat], dtype=np.int64)
        return out.reshape(shape)

    def contains_rows(self, rows: np.ndarray) -> np.ndarray:
        idx = self.index_of(rows)
        return np.all(self.elements[idx] == rows, axis=-1)

    def index(self, perm: Permutation) -> int:
        if perm.degree != self.degree:
            raise InvalidPermutation("degree mismatch")
        row = np.array(perm.array_form)
        i = int(self.index_of(row[None, :])[0])
        if not np.array_equal(self.elements[i], row):
            raise SubgroupNotContained(f"{perm!r} is not an element of this group")
        return i

    def element(self, i: int) -> Permutation:
        return Permutation.from_array(self.elements[int(i)])

    def __iter__(self) -> Iterator[Permutation]:
        return (self.element(i) for i in range(self.order))

    def __len__(self) -> int:
        return self.order

    def __contains__(self, perm: Permutation) -> bool:
        try:
            self.index(perm)
        except (SubgroupNotContained, InvalidPermutation):
            return False
        return True

    # arithmetic -----------------------------------------------------------

    @property
    def table(self) -> np.ndarray | None:
        if self._table is None and self.order <= TABLE_LIMIT:
            E = self.elements
            T = np.empty((self.order, self.order), dtype=np.int16 if self.order < 32768 else np.int32)
            for i in range(self.order):
                # row i: E[i] followed by E[j]
                T[i] = self.index_of(E[:, E[i]])
            T.setflags(write=False)
            self._table = T
        return self._table

    def mul(self, a, b) -> np.ndarray:
        """Indices of ``a*b`` (broadcasting over index arrays)."""
        T = self.table
        if T is not None:
            return T[a, b].astype(np.int64) if np.ndim(a) or np.ndim(b) else int(T[a, b])
        a, b = np.broadcast_arrays(np.asarray(a), np.asarray(b))
        rows = np.take_along_axis(self.elements[b], self.elements[a], axis=-1)
        out = self.index_of(rows)
        return out if out.ndim else int(out)

    def conj(self, x, g) -> np.ndarray:
        """Indices of ``g^-1 x g``."""
        return self.mul(self.mul(self.inv[g], x), g)

    def power(self, x: int, k: int) -> int:
        out = 0
        base = int(x)
        while k:
            if k & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            k >>= 1
        return int(out)

    def element_order(self, x: int) -> int:
        k, y = 1, int(x)
        while y != 0:
            y = self.mul(y, int(x))
            k += 1
        return k

    # subgroups ------------------------------------------------------------

    @property
    def whole(self) -> "Subgroup":
        return Subgroup(self, (1 << self.order) - 1)

    @property
    def trivial(self) -> "Subgroup":
        return Subgroup(self, 1)

    def subgroup(self, gens: Iterable[Permutation | int]) -> "Subgroup":
        """Subgroup generated by permutations or element indices."""
        idx = [g if isinstance(g, (int, np.integer)) else self.index(g) for g in gens]
        return generate(self, idx)

    def cached(self, key, compute: Callable):
        try:
            return self._cache[key]
        except KeyError:
            return self._cache.setdefault(key, compute())

    def __repr__(self) -> str:
        label = f" {self.name!r}" if self.name else ""
        return f"<PermGroup{label} degree={self.degree} order={self.order}>"


class Subgroup:
    """A subgroup of ``parent``, identified by the set of its element indices."""

    __slots__ = ("parent", "mask", "_indices")

    def __init__(self, parent: PermGroup, mask: int):
        self.parent = parent
        self.mask = int(mask)
        self._indices = None

    @classmethod
    def from_indices(cls, parent: PermGroup, indices) -> "Subgroup":
        return cls(parent, _mask_from_indices(parent.order, indices))

    @property
    def order(self) -> int:
        return self.mask.bit_count()

    def __len__(self) -> int:
        return self.order

    @property
    def indices(self) -> np.ndarray:
        if self._indices is None:
            self._indices = _indices_from_mask(self.parent.order, self.mask)
        return self._indices

    @property
    def member_flags(self) -> np.ndarray:
        flags = np.zeros(self.parent.order, dtype=bool)
        flags[self.indices] = True
        return flags

    @property
    def gens(self) -> tuple[int, ...]:
        return self.parent.cached(("gens", self.mask), lambda: _small_generating_set(self))

    @property
    def generators(self) -> list[Permutation]:
        return [self.parent.element(i) for i in self.gens]

    def elements(self) -> list[Permutation]:
        return [self.parent.element(i) for i in self.indices]

    def has(self, i: int) -> bool:
        return bool(self.mask >> int(i) & 1)

    def __contains__(self, item) -> bool:
        if isinstance(item, Permutation):
            try:
                item = self.parent.index(item)
            except SubgroupNotContained:
                return False
        return self.has(item)

    def __le__(self, other: "Subgroup") -> bool:
        _same_parent(self, other)
        return self.mask & ~other.mask == 0

    def __lt__(self, other: "Subgroup") -> bool:
        return self.mask != other.mask and self <= other

    def __ge__(self, other: "Subgroup") -> bool:
        return other <= self

    def __gt__(self, other: "Subgroup") -> bool:
        return other < self

    def __and__(self, other: "Subgroup") -> "Subgroup":
        _same_parent(self, other)
        return Subgroup(self.parent, self.mask & other.mask)

    def __eq__(self, other) -> bool:
        return isinstance(other, Subgroup) and other.parent is self.parent and other.mask == self.mask

    def __hash__(self) -> int:
        return hash((id(self.parent), self.mask))

    def sort_key(self) -> tuple:
        return (self.order, tuple(self.indices.tolist()))

    def is_trivial(self) -> bool:
        return self.mask == 1

    def index_in(self, other: "Subgroup") -> int:
        return other.order // self.order

    def __repr__(self) -> str:
        return f"<Subgroup order={self.order} of {self.parent!r}>"


GroupLike = Union[PermGroup, Subgroup]


def as_subgroup(G: GroupLike) -> Subgroup:
    """Treat a PermGroup as the whole subgroup of itself; Subgroups pass through."""
    if isinstance(G, PermGroup):
        return G.whole
    if isinstance(G, Subgroup):
        return G
    raise TypeError(f"expected PermGroup or Subgroup, got {type(G).__name__}")


def _same_parent(A: Subgroup, B: Subgroup):
    if A.parent is not B.parent:
        raise SubgroupNotContained("subgroups live in different parent groups")


def _require_sub(G: Subgroup, H: Subgroup):
    _same_parent(G, H)
    if H.mask & ~G.mask:
        raise SubgroupNotContained("H is not contained in G")


def _mask_from_indices(n: int, indices) -> int:
    flags = np.zeros(n, dtype=bool)
    flags[np.asarray(indices, dtype=np.int64)] = True
    return int.from_bytes(np.packbits(flags, bitorder="little").tobytes(), "little")


def _mask_from_flags(flags: np.ndarray) -> int:
    return int.from_bytes(np.packbits(flags, bitorder="little").tobytes(), "little")


def _indices_from_mask(n: int, mask: int) -> np.ndarray:
    nbytes = (n + 7) // 8
    bits = np.unpackbits(np.frombuffer(mask.to_bytes(nbytes, "little"), dtype=np.uint8), bitorder="little")
    return np.flatnonzero(bits[:n])


# closure ------------------------------------------------------------------


def closure(degree: int, gens: Sequence[Permutation], cap: int = DEFAULT_ORDER_CAP, name: str | None = None) -> PermGroup:
    """The permutation group of the given degree generated by ``gens``.

    Raises :class:`OrderCapExceeded` as soon as more than ``cap`` elements
    have been produced.
    """
    if degree < 1:
        raise InvalidPermutation("degree must be positive")
    if cap < 1:
        raise ValueError("cap must be positive")
    rows = _to_array_rows(gens, degree)
    ident = tuple(range(degree))
    gen_rows = [r for r in dict.fromkeys(rows) if r != ident]
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gen_rows:
                y = tuple(g[i] for i in x)
                if y not in seen:
                    seen.add(y)
                    if len(seen) > cap:
                        raise OrderCapExceeded(f"group order exceeds cap {cap}")
                    nxt.append(y)
        frontier = nxt
    dtype = np.int16 if degree < 32768 else np.int32
    elements = np.array(sorted(seen), dtype=dtype).reshape(len(seen), degree)
    perms = [Permutation.from_array(r) for r in rows]
    return PermGroup(degree, perms, elements, name=name)


def _close(parent: PermGroup, seed_flags: np.ndarray, gens: np.ndarray) -> np.ndarray:
    """Flags of the subgroup generated by the seed set (containing 1) and ``gens``."""
    flags = seed_flags.copy()
    flags[0] = True
    gens = np.unique(np.asarray(gens, dtype=np.int64))
    if gens.size == 0:
        return flags
    frontier = np.flatnonzero(flags)
    while frontier.size:
        prods = parent.mul(frontier[:, None], gens[None, :]).ravel()
        new = np.unique(prods[~flags[prods]])
        flags[new] = True
        frontier = new
    return flags


def generate(parent: PermGroup, gens: Iterable[int]) -> Subgroup:
    """Subgroup of ``parent`` generated by element indices."""
    gens = np.array([int(g) for g in gens], dtype=np.int64)
    seed = np.zeros(parent.order, dtype=bool)
    seed[0] = True
    return Subgroup(parent, _mask_from_flags(_close(parent, seed, gens)))


def _extend(H: Subgroup, extra: Iterable[int]) -> Subgroup:
    """Subgroup generated by H together with ``extra``."""
    extra = [int(x) for x in extra if not H.has(int(x))]
    if not extra:
        return H
    gens = np.array(list(H.gens) + extra, dtype=np.int64)
    return Subgroup(H.parent, _mask_from_flags(_close(H.parent, H.member_flags, gens)))


def _small_generating_set(H: Subgroup) -> tuple[int, ...]:
    parent = H.parent
    gens: list[int] = []
    flags = np.zeros(parent.order, dtype=bool)
    flags[0] = True
    count = 1
    # try elements of large order first, it keeps generating sets short
    idx = H.indices
    orders = parent.cached(("element_orders",), lambda: _element_orders(parent))
    for x in idx[np.argsort(-orders[idx], kind="stable")]:
        if count == H.order:
            break
        if not flags[x]:
            gens.append(int(x))
            flags = _close(parent, flags, np.array(gens))
            count = int(flags.sum())
    return tuple(gens)


def _element_orders(G: PermGroup) -> np.ndarray:
    out = np.ones(G.order, dtype=np.int64)
    cur = np.arange(G.order)
    k = 1
    pending = cur != 0
    while pending.any():
        k += 1
        cur = G.mul(cur, np.arange(G.order))
        hit = pending & (cur == 0)
        out[hit] = k
        pending &= ~hit
    out[0] = 1
    return out


def join(*subs: Subgroup) -> Subgroup:
    """Subgroup generated by the union of the arguments."""
    subs = [as_subgroup(s) for s in subs]
    out = max(subs, key=lambda S: S.order)
    for S in subs:
        _same_parent(out, S)
        if not S <= out:
            out = _extend(out, S.gens)
    return out


def normal_closure(G: GroupLike, S: GroupLike | Iterable[int]) -> Subgroup:
    """Smallest normal subgroup of G containing S (a subgroup or element indices)."""
    G = as_subgroup(G)
    parent = G.parent
    K = as_subgroup(S) if isinstance(S, (PermGroup, Subgroup)) else generate(parent, S)
    _require_sub(G, K)
    while True:
        gens = np.array(K.gens, dtype=np.int64)
        if gens.size == 0:
            return K
        conj = parent.conj(gens[:, None], np.array(G.gens, dtype=np.int64)[None, :]).ravel()
        missing = [int(c) for c in conj if not K.has(int(c))]
        if not missing:
            return K
        K = _extend(K, missing)


# basic subgroup operations ---------------------------------------------------


def normalizer(G: GroupLike, H: Subgroup) -> Subgroup:
    """{g in G : H^g = H}."""
    G = as_subgroup(G)
    _require_sub(G, H)
    parent = G.parent

    def compute():
        hg = np.array(H.gens, dtype=np.int64)
        if hg.size == 0:
            return G
        gs = G.indices
        images = parent.conj(hg[None, :], gs[:, None])
        ok = H.member_flags[images].all(axis=1)
        return Subgroup(parent, _mask_from_indices(parent.order, gs[ok]))

    return parent.cached(("normalizer", G.mask, H.mask), compute)


def centralizer(G: GroupLike, S: Subgroup) -> Subgroup:
    """{g in G : gs = sg for all s in S}."""
    G = as_subgroup(G)
    _require_sub(G, S)
    parent = G.parent
    sg = np.array(S.gens, dtype=np.int64)
    gs = G.indices
    if sg.size == 0:
        return G
    ok = (parent.mul(gs[:, None], sg[None, :]) == parent.mul(sg[None, :], gs[:, None])).all(axis=1)
    return Subgroup(parent, _mask_from_indices(parent.order, gs[ok]))


def intersection(A: Subgroup, B: Subgroup) -> Subgroup:
    return A & B


def product_set(A: Subgroup, B: Subgroup) -> tuple[frozenset[int], bool]:
    """The set AB as element indices, and whether it is a subgroup."""
    _same_parent(A, B)
    prods = np.unique(A.parent.mul(A.indices[:, None], B.indices[None, :]).ravel())
    # |AB| = |A||B|/|A∩B|; AB is a subgroup iff AB = BA
    back = np.unique(A.parent.mul(B.indices[:, None], A.indices[None, :]).ravel())
    closed = prods.size == back.size and bool(np.array_equal(prods, back))
    return frozenset(int(x) for x in prods), closed


def product(A: Subgroup, B: Subgroup) -> Subgroup:
    """AB as a Subgroup; raises ValueError when the product set is not closed."""
    elems, closed = product_set(A, B)
    if not closed:
        raise ValueError("product set is not a subgroup")
    return Subgroup.from_indices(A.parent, sorted(elems))


def conjugate(H: Subgroup, g: int | Permutation) -> Subgroup:
    """H^g = {g^-1 h g : h in H}."""
    parent = H.parent
    if isinstance(g, Permutation):
        g = parent.index(g)
    images = parent.conj(H.indices, int(g))
    return Subgroup(parent, _mask_from_indices(parent.order, images))


def is_normal(H: Subgroup, G: GroupLike) -> bool:
    G = as_subgroup(G)
    _require_sub(G, H)
    if H.mask == G.mask or H.is_trivial():
        return True
    parent = G.parent

    def compute():
        hg = np.array(H.gens, dtype=np.int64)
        gg = np.array(G.gens, dtype=np.int64)
        return bool(H.member_flags[parent.conj(hg[:, None], gg[None, :])].all())

    return parent.cached(("is_normal", G.mask, H.mask), compute)


def core(G: GroupLike, H: Subgroup) -> Subgroup:
    """Largest normal subgroup of G contained in H."""
    G = as_subgroup(G)
    _require_sub(G, H)
    mask = H.mask
    for g in G.indices:
        mask &= conjugate(H, int(g)).mask
    return Subgroup(G.parent, mask)


# lattice -------------------------------------------------------------------


def minimal_overgroups(G: GroupLike, H: Subgroup) -> list[Subgroup]:
    """Inclusion-minimal subgroups K with H < K <= G."""
    G = as_subgroup(G)
    _require_sub(G, H)
    parent = G.parent

    def compute():
        candidates: dict[int, Subgroup] = {}
        done = H.member_flags.copy()
        hidx = H.indices
        for g in G.indices:
            if done[g]:
                continue
            # <H, g> depends only on the double coset HgH
            dc = parent.mul(hidx[:, None], parent.mul(int(g), hidx)[None, :]).ravel()
            done[dc] = True
            K = _extend(H, [int(g)])
            candidates.setdefault(K.mask, K)
        found = sorted(candidates.values(), key=Subgroup.sort_key)
        minimal = []
        for K in found:
            if not any(M.mask & ~K.mask == 0 for M in minimal):
                minimal.append(K)
        return tuple(minimal)

    return list(parent.cached(("min_over", G.mask, H.mask), compute))


def interval(G: GroupLike, H: Subgroup, bound: int | None = None) -> list[Subgroup]:
    """All subgroups K with H <= K <= G, in canonical order.

    ``bound`` defaults to the parent group's ``interval_bound``.
    """
    G = as_subgroup(G)
    _require_sub(G, H)
    parent = G.parent
    bound = parent.interval_bound if bound is None else bound

    def compute():
        seen = {H.mask: H}
        queue = deque([H])
        while queue:
            K = queue.popleft()
            for M in minimal_overgroups(G, K):
                if M.mask not in seen:
                    seen[M.mask] = M
                    if len(seen) > bound:
                        raise OrderCapExceeded(f"interval has more than {bound} subgroups")
                    queue.append(M)
        return tuple(sorted(seen.values(), key=Subgroup.sort_key))

    return list(parent.cached(("interval", G.mask, H.mask), compute))


def maximal_overgroups(G: GroupLike, H: Subgroup, method: str = "maximal") -> list[Subgroup]:
    """Maximal subgroups of G containing H.

    ``method="maximal"`` filters :func:`maximal_subgroups`; ``method="interval"``
    reads them off the full interval [H, G].  Both give the same list.
    """
    G = as_subgroup(G)
    _require_sub(G, H)
    if H == G:
        return []
    if method == "maximal":
        return [M for M in maximal_subgroups(G) if H <= M]
    if method != "interval":
        raise ValueError(f"unknown method {method!r}")
    members = [K for K in interval(G, H) if K != G]
    out = []
    for M in members:
        if not any(M < K for K in members):
            out.append(M)
    return out


def maximal_subgroups(G: GroupLike, budget: int = DEFAULT_COMPLEMENT_BUDGET) -> list[Subgroup]:
    """All maximal subgroups of G, in canonical order.

    Soluble groups recurse through a minimal normal subgroup N: the maximal
    subgroups containing N are lifted from G/N, the others are exactly the
    complements of N.  Insoluble groups fall back to lattice intervals above
    cyclic subgroups.
    """
    from .structure import is_soluble, minimal_normal_subgroups

    G = as_subgroup(G)
    parent = G.parent

    def compute():
        if G.order == 1:
            return ()
        if is_prime(G.order):
            return (parent.trivial,)
        if is_soluble(G):
            N = minimal_normal_subgroups(G)[0]
            Q = quotient(G, N)
            found = [Q.preimage(M) for M in maximal_subgroups(Q.group, budget)]
            found += complements(G, N, budget)
        else:
            found = _maximal_by_intervals(G)
        return tuple(sorted(set(found), key=Subgroup.sort_key))

    return list(parent.cached(("maximal", G.mask), compute))


def _maximal_by_intervals(G: Subgroup) -> list[Subgroup]:
    from .structure import conjugacy_classes

    parent = G.parent
    found: dict[int, Subgroup] = {}
    for cls in conjugacy_classes(G):
        x = int(cls[0])
        if x == 0:
            continue
        C = generate(parent, [x])
        for M in maximal_overgroups(G, C, method="interval"):
            for g in G.indices:
                Mg = conjugate(M, int(g))
                found.setdefault(Mg.mask, Mg)
    return list(found.values())


def complements(G: GroupLike, N: Subgroup, budget: int = DEFAULT_COMPLEMENT_BUDGET) -> list[Subgroup]:
    """All complements of the normal subgroup N in G (subgroups K with KN = G, K ∩ N = 1).

    Backtracks over choices ``x_i n_i`` for coset representatives ``x_i`` of a
    generating set of G/N; at most ``|N| ** k`` nodes, and
    :class:`OrderCapExceeded` past ``budget``.
    """
    G = as_subgroup(G)
    _require_sub(G, N)
    if not is_normal(N, G):
        raise NotNormal("complements are only searched for normal subgroups")
    parent = G.parent
    target = G.order // N.order
    if N.is_trivial():
        return [G]
    if target == 1:
        return [parent.trivial]
    Q = quotient(G, N)
    reps = [int(Q.representative(q)) for q in Q.group.whole.gens]
    nidx = N.indices
    found: dict[int, Subgroup] = {}
    nodes = 0

    def search(K: Subgroup, depth: int):
        nonlocal nodes
        if depth == len(reps):
            if K.order == target:
                found.setdefault(K.mask, K)
            return
        for c in parent.mul(reps[depth], nidx):
            nodes += 1
            if nodes > budget:
                raise OrderCapExceeded(f"complement search exceeded {budget} nodes")
            K2 = _extend(K, [int(c)])
            if K2.mask & N.mask == 1 and target % K2.order == 0:
                search(K2, depth + 1)

    search(parent.trivial, 0)
    return sorted(found.values(), key=Subgroup.sort_key)


def conjugacy_classes_of_subgroups(G: GroupLike, subgroups: Iterable[Subgroup]) -> list[list[Subgroup]]:
    """Partition ``subgroups`` into G-conjugacy classes (classes keep input order)."""
    G = as_subgroup(G)
    classes: list[list[Subgroup]] = []
    where: dict[int, int] = {}
    for S in subgroups:
        if S.mask in where:
            classes[where[S.mask]].append(S)
            continue
        conj_masks = {conjugate(S, int(g)).mask for g in G.indices}
        hit = next((where[m] for m in conj_masks if m in where), None)
        if hit is None:
            hit = len(classes)
            classes.append([])
        classes[hit].append(S)
        for m in conj_masks:
            where.setdefault(m, hit)
    return classes


# quotients -----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class QuotientMap:
    """G/N as a permutation group on the right cosets of N, with its projection."""

    source: Subgroup
    kernel: Subgroup
    group: PermGroup
    elem_map: np.ndarray  # parent index -> quotient index, -1 outside source
    coset_reps: np.ndarray  # minimal element of each coset, in label order

    def image(self, H: Subgroup) -> Subgroup:
        """HN/N."""
        _require_sub(self.source, H)
        return Subgroup.from_indices(self.group, np.unique(self.elem_map[H.indices]))

    def preimage(self, K: GroupLike) -> Subgroup:
        """The full preimage of a subgroup of the quotient."""
        K = as_subgroup(K)
        if K.parent is not self.group:
            raise SubgroupNotContained("subgroup does not belong to this quotient")
        src = self.source.indices
        keep = K.member_flags[self.elem_map[src]]
        return Subgroup.from_indices(self.source.parent, src[keep])

    def element_image(self, x: int) -> int:
        return int(self.elem_map[int(x)])

    def representative(self, q: int) -> int:
        """Canonical (minimal) preimage of a quotient element."""
        src = self.source.indices
        return int(src[np.argmax(self.elem_map[src] == int(q))])


def quotient(G: GroupLike, N: Subgroup) -> QuotientMap:
    """G/N acting by right multiplication on the right cosets of N.

    Cosets are labelled 1..k by increasing minimal element, so the result is
    reproducible bit for bit.
    """
    G = as_subgroup(G)
    _require_sub(G, N)
    if not is_normal(N, G):
        raise NotNormal("quotient requires a normal subgroup")
    parent = G.parent

    def compute():
        gidx = G.indices
        nidx = N.indices
        mins = parent.mul(nidx[:, None], gidx[None, :]).min(axis=0)
        reps = np.unique(mins)
        label = np.full(parent.order, -1, dtype=np.int64)
        label[gidx] = np.searchsorted(reps, mins)
        # action of x on cosets: N r_i -> N r_i x
        action = label[parent.mul(reps[None, :], gidx[:, None])]
        uniq, inverse = np.unique(action, axis=0, return_inverse=True)
        k = len(reps)
        dtype = np.int16 if k < 32768 else np.int32
        elements = np.ascontiguousarray(uniq.astype(dtype)).reshape(len(uniq), k)
        elem_map = np.full(parent.order, -1, dtype=np.int64)
        elem_map[gidx] = inverse.ravel()
        gens = [Permutation.from_array(elements[elem_map[g]]) for g in G.gens] or [Permutation.identity(k)]
        Qg = PermGroup(k, gens, elements)
        Qg.interval_bound = parent.interval_bound
        return QuotientMap(G, N, Qg, elem_map, reps)

    return parent.cached(("quotient", G.mask, N.mask), compute)
