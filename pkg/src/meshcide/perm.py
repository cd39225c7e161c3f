"""Permutations in one-line notation, classical patterns, and grid symmetries.

A permutation is a plain tuple of the integers ``1..n``.  Positions and
values are both 1-based, matching the usual combinatorics convention: the
letter at position ``i`` is ``w[i - 1]``, and the graph of ``w`` is the
point set ``{(i, w(i))}`` inside the ``[1, n] x [1, n]`` grid.
"""

from __future__ import annotations

import itertools
from math import factorial
from typing import Iterator, Sequence

Perm = tuple[int, ...]
Occurrence = tuple[int, ...]


class ParseError(ValueError):
    """Malformed text for a permutation or a mesh pattern."""


def make_perm(values: Sequence[int]) -> Perm:
    """Validate one-line notation: the entries must be a bijection on 1..n.

    >>> make_perm([4, 2, 1, 3, 5])
    (4, 2, 1, 3, 5)
    """
    word = tuple(values)
    if not word:
        raise ParseError("empty permutation is not supported")
    n = len(word)
    seen: set[int] = set()
    for v in word:
        if v in seen:
            raise ParseError(f"not a permutation of 1..{n}: value {v} appears twice")
        seen.add(v)
    for v in range(1, n + 1):
        if v not in seen:
            raise ParseError(f"not a permutation of 1..{n}: value {v} is missing")
    return word


def parse_perm(text: str) -> Perm:
    """Parse ``42135`` (digits, values at most 9) or ``4,8,2,9,...``."""
    s = text.strip()
    if not s:
        raise ParseError("empty permutation")
    if "," in s:
        vals = []
        for part in s.split(","):
            part = part.strip()
            if not part or not part.isdigit():
                raise ParseError(f"bad permutation entry {part!r}")
            vals.append(int(part))
    else:
        if not s.isdigit():
            raise ParseError(
                f"bad permutation {s!r}: expected digits or comma-separated values"
            )
        vals = [int(ch) for ch in s]
    return make_perm(vals)


def perm_text(w: Sequence[int]) -> str:
    """Compact text form; falls back to commas once values exceed one digit."""
    return "".join(map(str, w)) if max(w) <= 9 else ",".join(map(str, w))


def all_perms(n: int) -> Iterator[Perm]:
    """All of S_n in lexicographic order of the one-line words."""
    return itertools.permutations(range(1, n + 1))


def lex_rank(w: Sequence[int]) -> int:
    """0-based index of ``w`` in the lexicographic listing of S_n.

    >>> lex_rank((1, 2, 3)), lex_rank((3, 2, 1))
    (0, 5)
    """
    n = len(w)
    r = 0
    for i in range(n):
        smaller = sum(1 for j in range(i + 1, n) if w[j] < w[i])
        r += smaller * factorial(n - 1 - i)
    return r


def lex_unrank(n: int, rank: int) -> Perm:
    """Inverse of :func:`lex_rank`."""
    avail = list(range(1, n + 1))
    out = []
    for i in range(n):
        idx, rank = divmod(rank, factorial(n - 1 - i))
        out.append(avail.pop(idx))
    return tuple(out)


def iter_classical_occurrences(p: Perm, w: Perm) -> Iterator[Occurrence]:
    """Yield position tuples of every occurrence of ``p`` in ``w``.

    Tuples come out in lexicographic order.  The search extends partial
    position choices left to right and prunes as soon as the chosen prefix
    stops being order isomorphic to the matching prefix of ``p``.
    """
    k, n = len(p), len(w)
    if k > n:
        return
    # rank[m]: how many earlier letters of p are below p[m]; a candidate
    # letter extends an order-isomorphic prefix iff it matches this count.
    rank = [sum(1 for j in range(m) if p[j] < p[m]) for m in range(k)]
    positions: list[int] = []
    values: list[int] = []

    def extend(start: int, depth: int) -> Iterator[Occurrence]:
        if depth == k:
            yield tuple(positions)
            return
        want = rank[depth]
        for x in range(start, n - (k - depth) + 2):
            v = w[x - 1]
            if sum(1 for c in values if c < v) == want:
                positions.append(x)
                values.append(v)
                yield from extend(x + 1, depth + 1)
                positions.pop()
                values.pop()

    yield from extend(1, 0)


def classical_occurrences(p: Perm, w: Perm) -> list[Occurrence]:
    """All occurrences of the classical pattern ``p`` in ``w``."""
    return list(iter_classical_occurrences(p, w))


def contains_classical(p: Perm, w: Perm) -> bool:
    return next(iter_classical_occurrences(p, w), None) is not None


def is_occurrence(p: Perm, w: Perm, positions: Sequence[int]) -> bool:
    """Do the given positions select a subsequence of ``w`` order isomorphic to ``p``?"""
    k, n = len(p), len(w)
    if len(positions) != k:
        return False
    if any(not 1 <= x <= n for x in positions):
        return False
    if any(positions[i] >= positions[i + 1] for i in range(k - 1)):
        return False
    vals = [w[x - 1] for x in positions]
    return all(
        (vals[s] < vals[t]) == (p[s] < p[t])
        for s in range(k)
        for t in range(s + 1, k)
    )


# ---------------------------------------------------------------------------
# The dihedral symmetries generated by reverse, complement, and inverse.
# A symmetry is named by a word over the generators {r, c, i}, applied left
# to right; "id" is the identity.  The eight canonical names below exhaust
# the group.

SYMMETRIES = ("id", "r", "c", "rc", "i", "ri", "ci", "rci")

_LONG_NAMES = {
    "identity": "id",
    "reverse": "r",
    "complement": "c",
    "inverse": "i",
}


def symmetry_word(name: str) -> str:
    """Normalize a symmetry name to its generator word ('' for the identity)."""
    s = _LONG_NAMES.get(name.strip().lower(), name.strip().lower())
    if s in ("id", "e", ""):
        return ""
    if any(ch not in "rci" for ch in s):
        raise ValueError(f"unknown symmetry {name!r}")
    return s


def apply_symmetry_perm(name: str, w: Perm) -> Perm:
    """Apply a dihedral symmetry to a permutation.

    >>> apply_symmetry_perm("r", (2, 3, 1))
    (1, 3, 2)
    >>> apply_symmetry_perm("c", (2, 3, 1))
    (2, 1, 3)
    """
    out = tuple(w)
    n = len(out)
    for ch in symmetry_word(name):
        if ch == "r":
            out = out[::-1]
        elif ch == "c":
            out = tuple(n + 1 - v for v in out)
        else:
            inv = [0] * n
            for i, v in enumerate(out):
                inv[v - 1] = i + 1
            out = tuple(inv)
    return out


def apply_symmetry_point(name: str, n: int, point: tuple[int, int]) -> tuple[int, int]:
    """Act on a point of the ``[0, n+1] x [0, n+1]`` grid."""
    x, y = point
    for ch in symmetry_word(name):
        if ch == "r":
            x = n + 1 - x
        elif ch == "c":
            y = n + 1 - y
        else:
            x, y = y, x
    return (x, y)


def inverse_symmetry(name: str) -> str:
    """Generator word undoing ``name`` (each generator is an involution)."""
    return symmetry_word(name)[::-1] or "id"


def canonical_symmetry(name: str) -> str:
    """Fold an arbitrary generator word onto one of the eight canonical names."""
    # (1,3,4,2) has trivial stabilizer, so its image pins the group element.
    probe = (1, 3, 4, 2)
    image = apply_symmetry_perm(name, probe)
    for s in SYMMETRIES:
        if apply_symmetry_perm(s, probe) == image:
            return s
    raise AssertionError("dihedral group closure violated")


def direct_sum(u: Perm, v: Perm) -> Perm:
    """Concatenate ``u`` and ``v`` with ``v`` shifted above ``u``.

    >>> direct_sum((1,), (2, 1))
    (1, 3, 2)
    """
    m = len(u)
    return tuple(u) + tuple(x + m for x in v)


def is_sum_decomposable(w: Perm) -> bool:
    """True iff ``w = u (+) v`` for nonempty ``u``, ``v``; i.e. some proper
    prefix of ``w`` uses exactly the values ``1..m``."""
    top = 0
    for m in range(1, len(w)):
        top = max(top, w[m - 1])
        if top == m:
            return True
    return False
