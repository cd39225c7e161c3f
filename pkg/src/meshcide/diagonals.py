"""Enclosed diagonals, the classical-coincidence criterion, distinguishing
witnesses, and the symmetry action on meshes.

An enclosed diagonal is a run of shaded squares threaded through consecutive
graph points along a 45-degree line: the interior corner lattice points of
the run belong to G(p) and the two end corners do not.  A single shaded
square with no corner on G(p) ("pointless") counts as a run of length one
and is simultaneously NE and SE.  These configurations are exactly what a
mesh can never shed: two patterns over the same p with different enclosed
diagonals are never coincident, and a pattern is coincident with its bare
classical pattern exactly when it has none.
"""

from __future__ import annotations

from dataclasses import dataclass

from .perm import Perm, apply_symmetry_perm, symmetry_word
from .mesh import (
    MeshPattern,
    Square,
    contains,
    mask_to_squares,
    square_bit,
)


@dataclass(frozen=True, order=True)
class EnclosedDiagonal:
    orientation: str  # "NE", "SE", or "PT" for a pointless square
    anchor: Square  # first square of the run
    length: int
    squares: tuple[Square, ...]

    def square_set(self) -> frozenset[Square]:
        return frozenset(self.squares)


def graph_points(p: Perm) -> frozenset[tuple[int, int]]:
    return frozenset((i, v) for i, v in enumerate(p, start=1))


def enclosed_diagonals(pi: MeshPattern) -> frozenset[EnclosedDiagonal]:
    """All enclosed diagonals of the pattern.

    Proper runs are found by walking each maximal diagonal run of graph
    points once, so maximality needs no separate filter; a run is enclosed
    iff its full square set is shaded.  No square can sit in two returned
    diagonals: distinct runs claim disjoint squares and a pointless square
    has no graph corner at all.
    """
    p = pi.perm
    points = graph_points(p)
    out = set()
    for a, b in pi.squares:
        corners = {(a, b), (a + 1, b), (a, b + 1), (a + 1, b + 1)}
        if not corners & points:
            out.add(EnclosedDiagonal("PT", (a, b), 1, ((a, b),)))
    for x, y in sorted(points):
        if (x - 1, y - 1) not in points:  # (x, y) starts a rising run
            c = 1
            while (x + c, y + c) in points:
                c += 1
            squares = tuple((x - 1 + i, y - 1 + i) for i in range(c + 1))
            if all(pi.has_square(a, b) for a, b in squares):
                out.add(EnclosedDiagonal("NE", squares[0], c + 1, squares))
        if (x - 1, y + 1) not in points:  # (x, y) starts a falling run
            c = 1
            while (x + c, y - c) in points:
                c += 1
            squares = tuple((x - 1 + i, y - i) for i in range(c + 1))
            if all(pi.has_square(a, b) for a, b in squares):
                out.add(EnclosedDiagonal("SE", squares[0], c + 1, squares))
    return frozenset(out)


def sorted_diagonals(pi: MeshPattern) -> list[EnclosedDiagonal]:
    return sorted(enclosed_diagonals(pi), key=lambda d: (d.anchor, d.orientation))


def enc_square_sets(pi: MeshPattern) -> frozenset[frozenset[Square]]:
    """Comparison form of the diagonal set.  Orientation is dropped: a
    pointless square carries both labels, and a proper run's square set
    already determines its direction."""
    return frozenset(d.square_set() for d in enclosed_diagonals(pi))


def same_enc(pi: MeshPattern, pi2: MeshPattern) -> bool:
    if pi.perm != pi2.perm:
        raise ValueError("patterns have different underlying permutations")
    return enc_square_sets(pi) == enc_square_sets(pi2)


def is_coincident_with_classical(pi: MeshPattern) -> bool:
    """True iff the whole mesh is superfluous (no enclosed diagonal)."""
    return not enclosed_diagonals(pi)


def diagonal_text(d: EnclosedDiagonal) -> str:
    if d.orientation == "PT":
        return f"PT ({d.anchor[0]},{d.anchor[1]})"
    last = d.squares[-1]
    return (
        f"{d.orientation} ({d.anchor[0]},{d.anchor[1]})-({last[0]},{last[1]})"
        f" len={d.length}"
    )


def diagonal_to_json(d: EnclosedDiagonal) -> dict:
    return {"orientation": d.orientation, "squares": [[a, b] for a, b in d.squares]}


# ---------------------------------------------------------------------------
# Symmetry action on meshes.

def apply_symmetry_square(name: str, k: int, square: Square) -> Square:
    a, b = square
    for ch in symmetry_word(name):
        if ch == "r":
            a = k - a
        elif ch == "c":
            b = k - b
        else:
            a, b = b, a
    return (a, b)


def apply_symmetry_mask(name: str, k: int, mask: int) -> int:
    out = 0
    for a, b in mask_to_squares(k, mask):
        a2, b2 = apply_symmetry_square(name, k, (a, b))
        out |= square_bit(k, a2, b2)
    return out


def apply_symmetry_mesh(name: str, pi: MeshPattern) -> MeshPattern:
    """Transform pattern and mesh together; containment is equivariant."""
    return MeshPattern(
        apply_symmetry_perm(name, pi.perm),
        apply_symmetry_mask(name, pi.k, pi.mask),
    )


# ---------------------------------------------------------------------------
# Constructive witness for patterns with different enclosed diagonals.


@dataclass(frozen=True)
class DistinguishingWitness:
    perm: Perm
    contains_first: bool  # the witness contains the first pattern iff True


def _insert_between(p: Perm, a: int, b: int) -> Perm:
    """Flatten p(1)..p(a), b + 1/2, p(a+1)..p(k) to a permutation of k+1."""
    word: list[float] = list(p[:a]) + [b + 0.5] + list(p[a:])
    ranks = {v: i + 1 for i, v in enumerate(sorted(word))}
    return tuple(ranks[v] for v in word)


def enc_witness(pi: MeshPattern, pi2: MeshPattern) -> DistinguishingWitness:
    """A permutation of length k+1 separating two patterns whose enclosed
    diagonals differ.

    Take a diagonal D present in only one mesh and insert a new letter just
    below D's run, right after position a.  Every occurrence of p in the
    result omits one letter sitting over a square of D, so the D-owning
    pattern is avoided, while the other mesh misses some square of D and
    therefore is contained.  Falling runs go through the complement
    symmetry first.  The result is verified by direct containment before
    being returned.
    """
    if pi.perm != pi2.perm:
        raise ValueError("patterns have different underlying permutations")
    by_set = {}
    for side, pattern in ((0, pi), (1, pi2)):
        for d in enclosed_diagonals(pattern):
            by_set.setdefault(d.square_set(), (side, d))
    sets1 = enc_square_sets(pi)
    sets2 = enc_square_sets(pi2)
    sym_diff = sorted(sets1 ^ sets2, key=lambda s: sorted(s))
    if not sym_diff:
        raise ValueError("patterns have the same enclosed diagonals")
    # Prefer a diagonal owned by the first pattern, for determinism only.
    owned_first = [s for s in sym_diff if s in sets1]
    chosen_set = owned_first[0] if owned_first else sym_diff[0]
    owner_is_first = chosen_set in sets1
    _, diag = by_set[chosen_set]

    if diag.orientation in ("NE", "PT"):
        a, b = diag.anchor
        q = _insert_between(pi.perm, a, b)
    else:
        k = pi.k
        cp = apply_symmetry_perm("c", pi.perm)
        ca, cb = apply_symmetry_square("c", k, diag.anchor)
        q = apply_symmetry_perm("c", _insert_between(cp, ca, cb))

    c1, c2 = contains(pi, q), contains(pi2, q)
    expected = (False, True) if owner_is_first else (True, False)
    if (c1, c2) != expected:
        raise RuntimeError(
            f"witness construction failed verification for {pi} vs {pi2}: "
            f"got contains={c1, c2}, expected {expected}"
        )
    return DistinguishingWitness(q, contains_first=c1)
