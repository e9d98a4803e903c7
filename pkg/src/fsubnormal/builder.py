"""Group constructions and the line-oriented group-file format.

Group files look like::

    # comment
    group s3
    degree 3
    gen 2 1 3
    gen 2 3 1
    end

Each ``gen`` line lists the images of points 1..n.
"""
from __future__ import annotations

import itertools
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidPermutation, ParseError, SingularMatrix, UnknownExample
from .permgroup import DEFAULT_ORDER_CAP, Permutation, PermGroup, closure
from .primes import is_prime

__all__ = [
    "affine_semidirect",
    "cyclic",
    "dihedral",
    "symmetric",
    "alternating",
    "direct_product",
    "named_example",
    "NAMED_EXAMPLES",
    "parse",
    "serialize",
    "header_comments",
    "read_group_file",
]


def _rank_mod_p(M: np.ndarray, p: int) -> int:
    A = np.array(M, dtype=np.int64) % p
    rows, cols = A.shape
    rank = 0
    for c in range(cols):
        piv = next((r for r in range(rank, rows) if A[r, c]), None)
        if piv is None:
            continue
        A[[rank, piv]] = A[[piv, rank]]
        A[rank] = A[rank] * pow(int(A[rank, c]), -1, p) % p
        for r in range(rows):
            if r != rank and A[r, c]:
                A[r] = (A[r] - A[r, c] * A[rank]) % p
        rank += 1
    return rank


def affine_semidirect(
    p: int, d: int, matrices: Sequence[Sequence[Sequence[int]]] = (), cap: int = DEFAULT_ORDER_CAP, name: str | None = None
) -> PermGroup:
    """[U]M acting on the p**d vectors of U = GF(p)^d.

    Vectors act as row vectors (``v -> v A``); vector ``v`` is the point
    ``1 + sum(v[i] * p**i)``.  Generators are the d coordinate translations
    followed by the given matrices.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if d < 1:
        raise ValueError("dimension must be positive")
    vecs = np.array(list(itertools.product(range(p), repeat=d)))[:, ::-1]  # vecs[k] has index k
    weights = p ** np.arange(d)

    def perm_of(images: np.ndarray) -> Permutation:
        return Permutation.from_array((images % p) @ weights)

    gens = []
    for i in range(d):
        shift = np.zeros(d, dtype=np.int64)
        shift[i] = 1
        gens.append(perm_of(vecs + shift))
    for A in matrices:
        A = np.array(A, dtype=np.int64)
        if A.shape != (d, d):
            raise ValueError(f"matrix shape {A.shape} does not match dimension {d}")
        if _rank_mod_p(A, p) < d:
            raise SingularMatrix(f"matrix {A.tolist()} is singular mod {p}")
        gens.append(perm_of(vecs @ A))
    return closure(p**d, gens, cap=cap, name=name)


def cyclic(n: int, cap: int = DEFAULT_ORDER_CAP) -> PermGroup:
    if n < 1:
        raise ValueError("order must be positive")
    return closure(n, [Permutation([*range(2, n + 1), 1])], cap=cap, name=f"C{n}")


def dihedral(order: int, cap: int = DEFAULT_ORDER_CAP) -> PermGroup:
    """Dihedral group of the given (even) order; order 4 gives the Klein four-group."""
    if order < 2 or order % 2:
        raise ValueError("dihedral groups have even order >= 2")
    n = order // 2
    if n == 1:
        return closure(2, [Permutation([2, 1])], cap=cap, name="D2")
    if n == 2:
        gens = [Permutation([2, 1, 4, 3]), Permutation([3, 4, 1, 2])]
        return closure(4, gens, cap=cap, name="D4")
    rot = Permutation([*range(2, n + 1), 1])
    ref = Permutation([1, *range(n, 1, -1)])
    return closure(n, [rot, ref], cap=cap, name=f"D{order}")


def symmetric(n: int, cap: int = DEFAULT_ORDER_CAP) -> PermGroup:
    if n < 1:
        raise ValueError("degree must be positive")
    if n <= 2:
        return closure(n, [Permutation([*range(2, n + 1), 1])], cap=cap, name=f"S{n}")
    gens = [Permutation([*range(2, n + 1), 1]), Permutation([2, 1, *range(3, n + 1)])]
    return closure(n, gens, cap=cap, name=f"S{n}")


def alternating(n: int, cap: int = DEFAULT_ORDER_CAP) -> PermGroup:
    if n < 1:
        raise ValueError("degree must be positive")
    if n < 3:
        return closure(n, [Permutation.identity(n)], cap=cap, name=f"A{n}")
    gens = [Permutation.from_cycles(n, (1, 2, k)) for k in range(3, n + 1)]
    return closure(n, gens, cap=cap, name=f"A{n}")


def direct_product(A: PermGroup, B: PermGroup, cap: int = DEFAULT_ORDER_CAP) -> PermGroup:
    """A x B acting on the disjoint union of their point sets (A's points first)."""
    a, b = A.degree, B.degree
    gens = [Permutation([*g.images, *range(a + 1, a + b + 1)]) for g in A.generators]
    gens += [Permutation([*range(1, a + 1), *(a + i for i in h.images)]) for h in B.generators]
    name = f"{A.name}x{B.name}" if A.name and B.name else None
    return closure(a + b, gens, cap=cap, name=name)


# Pinned matrices for the two named affine examples (row-vector action).
# intro-s3-f7: the 2-dimensional representation of S3 over GF(7), spanned by
# r = [[0,-1],[1,-1]] (order 3) and s = [[0,1],[1,0]] (order 2); irreducible
# and faithful since 7 does not divide 6.
_S3_F7 = ([[0, 6], [1, 6]], [[0, 1], [1, 0]])
# ex21-s4-f3: S4 on the sum-zero vectors of GF(3)^4 in the basis e_i - e_4;
# rows give the images of the basis under (1 2 3 4) and (1 2).
_S4_F3 = ([[2, 1, 0], [2, 0, 1], [2, 0, 0]], [[0, 1, 0], [1, 0, 0], [0, 0, 1]])

NAMED_EXAMPLES = {
    "intro-s3-f7": (7, 2, _S3_F7),
    "ex21-s4-f3": (3, 3, _S4_F3),
}


def named_example(name: str, cap: int = DEFAULT_ORDER_CAP) -> PermGroup:
    """``intro-s3-f7`` (order 294) or ``ex21-s4-f3`` (order 648)."""
    try:
        p, d, mats = NAMED_EXAMPLES[name]
    except KeyError:
        raise UnknownExample(f"unknown example {name!r}; known: {sorted(NAMED_EXAMPLES)}") from None
    return affine_semidirect(p, d, mats, cap=cap, name=name)


# group files ---------------------------------------------------------------


def header_comments(text: str) -> list[str]:
    """Leading comment lines of a group file, without the ``#``."""
    out = []
    for line in text.splitlines():
        s = line.strip()
        if not s:
            continue
        if not s.startswith("#"):
            break
        out.append(s[1:].strip())
    return out


def parse(text: str, cap: int = DEFAULT_ORDER_CAP) -> list[tuple[str, PermGroup]]:
    """Parse group-file text into ``(name, group)`` pairs, in file order."""
    records = []
    current = None  # [name, degree, gens, start line]
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, rest = line.partition(" ")
        rest = rest.strip()
        if key == "group":
            if current is not None:
                raise ParseError("'group' inside an unterminated record", lineno)
            if not rest or len(rest.split()) != 1:
                raise ParseError("expected 'group <name>'", lineno)
            current = [rest, None, [], lineno]
        elif current is None:
            raise ParseError(f"{key!r} outside a group record", lineno)
        elif key == "degree":
            if current[1] is not None:
                raise ParseError("duplicate degree", lineno)
            try:
                n = int(rest)
            except ValueError:
                raise ParseError(f"bad degree {rest!r}", lineno) from None
            if n < 1:
                raise ParseError("degree must be positive", lineno)
            current[1] = n
        elif key == "gen":
            if current[1] is None:
                raise ParseError("'gen' before 'degree'", lineno)
            try:
                images = [int(t) for t in rest.split()]
            except ValueError:
                raise ParseError(f"non-integer image in {rest!r}", lineno) from None
            if len(images) != current[1]:
                raise ParseError(f"expected {current[1]} images, got {len(images)}", lineno)
            try:
                current[2].append(Permutation(images))
            except InvalidPermutation as exc:
                raise InvalidPermutation(f"line {lineno}: {exc}") from None
        elif key == "end":
            name, degree, gens, start = current
            if degree is None:
                raise ParseError(f"record {name!r} has no degree", lineno)
            if not gens:
                raise ParseError(f"record {name!r} has no generators", lineno)
            records.append((name, closure(degree, gens, cap=cap, name=name)))
            current = None
        else:
            raise ParseError(f"unknown keyword {key!r}", lineno)
    if current is not None:
        raise ParseError(f"record {current[0]!r} is missing 'end'", current[3])
    return records


def serialize(name: str, G: PermGroup) -> str:
    """One group record; generators sorted by image list, identity if there are none."""
    gens = sorted({g for g in G.generators if not g.is_identity()}) or [Permutation.identity(G.degree)]
    lines = [f"group {name}", f"degree {G.degree}"]
    lines += ["gen " + " ".join(map(str, g.images)) for g in gens]
    lines.append("end")
    return "\n".join(lines) + "\n"


def read_group_file(path: str | Path, cap: int = DEFAULT_ORDER_CAP) -> tuple[list[tuple[str, PermGroup]], list[str]]:
    text = Path(path).read_text(encoding="utf-8")
    return parse(text, cap=cap), header_comments(text)
