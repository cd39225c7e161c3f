"""Shading moves: single squares, adjacent pairs, simultaneous combinations,
the constructive occurrence-repair walk, and closure of meshes under all of
these.

Adding a square next to a graph point keeps the avoidance set unchanged when
the mesh around that point is permissive enough.  Only the northeast
single-square conditions and the east pair conditions are spelled out; the
other directions are obtained by conjugating the pattern with the grid
symmetry that maps the direction onto the spelled one.  That is both shorter
and safer than transcribing four condition tables by hand.
"""

from __future__ import annotations

import itertools
from bisect import bisect_right
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from .perm import (
    Occurrence,
    Perm,
    apply_symmetry_point,
    inverse_symmetry,
    is_occurrence,
    make_perm,
)
from .mesh import (
    MeshPattern,
    Square,
    occurrence_region_mask,
    squares_to_mask,
)
from .diagonals import apply_symmetry_mesh

SINGLE_DIRECTIONS = ("NE", "NW", "SE", "SW")
PAIR_DIRECTIONS = ("E", "N", "W", "S")

# Symmetry conjugating each direction onto the one with explicit conditions.
_SINGLE_TO_NE = {"NE": "id", "NW": "r", "SE": "c", "SW": "rc"}
_PAIR_TO_E = {"E": "id", "W": "r", "N": "i", "S": "ci"}


def single_candidate(point: tuple[int, int], direction: str) -> Square:
    """The square incident to a graph point on the given corner."""
    i, v = point
    return {
        "NE": (i, v),
        "NW": (i - 1, v),
        "SE": (i, v - 1),
        "SW": (i - 1, v - 1),
    }[direction]


def pair_candidate(point: tuple[int, int], direction: str) -> tuple[Square, Square]:
    """The two squares incident to a graph point on the given side."""
    i, v = point
    return {
        "E": ((i, v), (i, v - 1)),
        "W": ((i - 1, v), (i - 1, v - 1)),
        "N": ((i - 1, v), (i, v)),
        "S": ((i - 1, v - 1), (i, v - 1)),
    }[direction]


def _ne_single_ok(pi: MeshPattern, i: int) -> bool:
    """Northeast single-square conditions at the graph point (i, p(i))."""
    k = pi.k
    v = pi.perm[i - 1]
    has = pi.has_square
    if has(i, v) or has(i - 1, v - 1):
        return False
    if has(i, v - 1) and has(i - 1, v):
        return False
    for x in range(k + 1):
        if x not in (i - 1, i) and has(x, v - 1) and not has(x, v):
            return False
    for y in range(k + 1):
        if y not in (v - 1, v) and has(i - 1, y) and not has(i, y):
            return False
    return True


def _e_pair_ok(pi: MeshPattern, i: int) -> bool:
    """East pair conditions at the graph point (i, p(i))."""
    k = pi.k
    v = pi.perm[i - 1]
    has = pi.has_square
    if has(i, v) or has(i - 1, v) or has(i, v - 1) or has(i - 1, v - 1):
        return False
    for x in range(k + 1):
        if has(x, v - 1) != has(x, v):
            return False
    for y in range(k + 1):
        if has(i - 1, y) and not has(i, y):
            return False
    return True


def shadeable_singles(pi: MeshPattern) -> list[tuple[tuple[int, int], Square, str]]:
    """(point, square, direction) for every single square addable to the mesh
    without changing the avoidance set."""
    out = []
    k = pi.k
    for direction in SINGLE_DIRECTIONS:
        sym = _SINGLE_TO_NE[direction]
        image = apply_symmetry_mesh(sym, pi)
        back = inverse_symmetry(sym)
        for j in range(1, k + 1):
            if _ne_single_ok(image, j):
                point = apply_symmetry_point(back, k, (j, image.perm[j - 1]))
                out.append((point, single_candidate(point, direction), direction))
    out.sort(key=lambda t: (t[0], SINGLE_DIRECTIONS.index(t[2])))
    return out


def shadeable_pairs(
    pi: MeshPattern,
) -> list[tuple[tuple[int, int], tuple[Square, Square], str]]:
    """(point, square pair, direction) for every addable adjacent pair."""
    out = []
    k = pi.k
    for direction in PAIR_DIRECTIONS:
        sym = _PAIR_TO_E[direction]
        image = apply_symmetry_mesh(sym, pi)
        back = inverse_symmetry(sym)
        for j in range(1, k + 1):
            if _e_pair_ok(image, j):
                point = apply_symmetry_point(back, k, (j, image.perm[j - 1]))
                out.append((point, pair_candidate(point, direction), direction))
    out.sort(key=lambda t: (t[0], PAIR_DIRECTIONS.index(t[2])))
    return out


@dataclass(frozen=True)
class Assignment:
    """One chosen shadeable square or pair at one graph point."""

    point: tuple[int, int]
    kind: str  # "single" | "pair"
    direction: str
    squares: tuple[Square, ...]


@dataclass(frozen=True)
class ShadeMove:
    """A simultaneous choice: at most one assignment per graph point."""

    assignments: tuple[Assignment, ...]
    added: int  # union of all assigned squares, as a mask

    def added_squares(self, k: int) -> tuple[Square, ...]:
        from .mesh import mask_to_squares

        return mask_to_squares(k, self.added)


def ssl_moves(pi: MeshPattern) -> list[ShadeMove]:
    """Every simultaneous-shading move of the pattern.

    Choice functions assign to each graph point at most one of its shadeable
    singles or pairs; distinct choices adding the same square set collapse
    to one move, since only the union matters downstream.
    """
    k = pi.k
    options: dict[int, list[Assignment | None]] = {i: [None] for i in range(1, k + 1)}
    for point, sq, direction in shadeable_singles(pi):
        options[point[0]].append(Assignment(point, "single", direction, (sq,)))
    for point, pair, direction in shadeable_pairs(pi):
        options[point[0]].append(Assignment(point, "pair", direction, pair))
    seen: dict[int, ShadeMove] = {}
    for combo in itertools.product(*(options[i] for i in range(1, k + 1))):
        chosen = tuple(a for a in combo if a is not None)
        if not chosen:
            continue
        added = 0
        for a in chosen:
            added |= squares_to_mask(k, a.squares)
        if added not in seen:
            assert added & pi.mask == 0
            seen[added] = ShadeMove(chosen, added)
    return sorted(seen.values(), key=lambda m: (m.added.bit_count(), m.added))


# ---------------------------------------------------------------------------
# The occurrence-repair walk.

def _region_points(
    w: Perm, positions: Sequence[int], squares: frozenset[Square]
) -> list[tuple[int, int]]:
    """Host points currently inside the regions of the given squares."""
    occ = tuple(positions)
    vals = sorted(w[i - 1] for i in occ)
    width = len(occ) + 1
    pts = []
    for x in range(1, len(w) + 1):
        if x in positions:
            continue
        cell = (bisect_right(occ, x), bisect_right(vals, w[x - 1]))
        if cell in squares:
            pts.append((x, w[x - 1]))
    return pts


# For a single square the two squares flanking the candidate may not both be
# shaded, but one may be.  Taking the vertical extreme sweeps the leftover
# region points into the flank vertically adjacent to the candidate; taking
# the horizontal extreme sweeps them into the horizontally adjacent one.  The
# walk must therefore pick the extreme whose receiving flank is unshaded.
_VERTICAL_FLANK = {
    "NE": lambda i, v: (i, v - 1),
    "NW": lambda i, v: (i - 1, v - 1),
    "SE": lambda i, v: (i, v),
    "SW": lambda i, v: (i - 1, v),
}


def _pick_replacement(
    pi: MeshPattern, assignment: Assignment, pts: list[tuple[int, int]]
) -> int:
    """Extreme candidate in the move's direction; pts is x-sorted."""
    direction = assignment.direction
    if assignment.kind == "pair":
        if direction in ("E", "W"):
            return pts[-1][0] if direction == "E" else pts[0][0]
        chooser = max if direction == "N" else min
        return chooser(pts, key=lambda t: t[1])[0]
    vertical_ok = not pi.has_square(*_VERTICAL_FLANK[direction](*assignment.point))
    if vertical_ok:
        chooser = max if direction in ("NE", "NW") else min
        return chooser(pts, key=lambda t: t[1])[0]
    return pts[-1][0] if direction in ("NE", "SE") else pts[0][0]


def ssl_repair_occurrence(
    pi: MeshPattern, move: ShadeMove, w: Perm, occ: Occurrence
) -> Occurrence:
    """Convert a mesh occurrence of ``pi`` into one of the enlarged pattern.

    Walk: take the lowest-index graph point whose assigned region still holds
    host points and slide the occurrence point there to the extreme candidate
    in the move's direction; every step pushes a horizontal or vertical
    boundary line monotonically, so at most 2kn steps happen.
    """
    p = pi.perm
    k = pi.k
    n = len(w)
    occ = tuple(occ)
    if not is_occurrence(p, w, occ) or occurrence_region_mask(w, occ) & pi.mask:
        raise ValueError(f"{occ} is not a mesh occurrence of {pi} in {w}")
    plan = [
        (a, frozenset(a.squares))
        for a in sorted(move.assignments, key=lambda a: a.point[0])
    ]
    positions = list(occ)
    for _ in range(2 * k * n + 1):
        busy = None
        for assignment, squares in plan:
            pts = _region_points(w, positions, squares)
            if pts:
                busy = (assignment, pts)
                break
        if busy is None:
            break
        assignment, pts = busy
        positions[assignment.point[0] - 1] = _pick_replacement(pi, assignment, pts)
        assert positions == sorted(positions)
    else:
        raise RuntimeError("repair walk exceeded its 2kn step bound")
    result = tuple(positions)
    enlarged = pi.mask | move.added
    if not is_occurrence(p, w, result) or occurrence_region_mask(w, result) & enlarged:
        raise RuntimeError("repair walk produced an invalid occurrence")
    return result


# ---------------------------------------------------------------------------
# Machine-checkable proof steps.

@dataclass(frozen=True)
class TraceStep:
    """One re-checkable inference.  ``before``/``after`` are mesh masks over
    ``perm``'s grid; the pair is asserted coincident by ``rule``."""

    rule: str  # SL | DSL | SSL | CLOSURE | GAMMA | SYMMETRY | VINCULAR | ISOLATING | CLASSICAL
    perm: Perm
    before: int
    after: int
    detail: tuple = ()


@dataclass(frozen=True)
class ProofTrace:
    perm: Perm
    source: int
    target: int
    steps: tuple[TraceStep, ...]


def trace_step_to_json(step: TraceStep) -> dict:
    from .mesh import mask_to_squares, mesh_pattern_to_json

    k = len(step.perm)
    sq = lambda mask: [[a, b] for a, b in mask_to_squares(k, mask)]
    obj: dict = {"rule": step.rule}
    if step.rule in ("SL", "DSL", "SSL"):
        obj["from"] = mesh_pattern_to_json(MeshPattern(step.perm, step.before))
        obj["added"] = sq(step.after & ~step.before)
        obj["assignments"] = [
            {
                "point": list(a.point),
                "shape": a.kind,
                "dir": a.direction,
                "squares": [[x, y] for x, y in a.squares],
            }
            for a in step.detail
        ]
    elif step.rule == "CLOSURE":
        lo, hi = step.detail
        obj["mesh"] = sq(step.after)
        obj["between"] = [sq(lo), sq(hi)]
    elif step.rule == "SYMMETRY":
        sym, src_perm, src_before, src_after = step.detail
        obj["symmetry"] = sym
        obj["of"] = {
            "perm": list(src_perm),
            "pair": [
                [[a, b] for a, b in mask_to_squares(len(src_perm), src_before)],
                [[a, b] for a, b in mask_to_squares(len(src_perm), src_after)],
            ],
        }
        obj["pair"] = [sq(step.before), sq(step.after)]
    else:  # GAMMA / VINCULAR / ISOLATING / CLASSICAL relate a pair directly
        obj["pair"] = [sq(step.before), sq(step.after)]
        if step.detail:
            obj["detail"] = list(step.detail)
    return obj


def trace_to_json(trace: ProofTrace) -> list[dict]:
    return [trace_step_to_json(s) for s in trace.steps]


# ---------------------------------------------------------------------------
# Closure of a set of meshes under simultaneous shading and sandwiching.

class UnionFind:
    """Plain dict-backed union-find over hashable items."""

    def __init__(self) -> None:
        self.parent: dict = {}

    def find(self, x):
        parent = self.parent
        if x not in parent:
            parent[x] = x
            return x
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, x, y) -> bool:
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        if ry < rx:  # keep the smaller representative, for determinism
            rx, ry = ry, rx
        self.parent[ry] = rx
        return True


@dataclass(frozen=True)
class ClosureClass:
    meshes: tuple[int, ...]
    steps: tuple[TraceStep, ...]


@dataclass(frozen=True)
class ClosureResult:
    perm: Perm
    classes: tuple[ClosureClass, ...]
    complete: bool

    def class_of(self, mask: int) -> ClosureClass | None:
        for cls in self.classes:
            if mask in cls.meshes:
                return cls
        return None


def _as_mask(k: int, mesh) -> int:
    if isinstance(mesh, int):
        if not 0 <= mesh < 1 << (k + 1) ** 2:
            raise ValueError(f"mesh mask {mesh} out of range for grid size {k}")
        return mesh
    return squares_to_mask(k, mesh)


def ssl_closure(
    p: Perm, seeds: Iterable, budget: int | None = None
) -> ClosureResult:
    """Partition every mesh reachable from the seeds into proven-coincident
    groups.

    Two kinds of inference alternate until neither moves: every
    simultaneous-shading move joins a mesh with its enlargement, and any
    mesh sandwiched between two meshes already in one group joins that group.
    Groups merged by sandwiching can enable new shading edges, so newly seen
    meshes re-enter the expansion queue.  ``budget`` caps the number of
    meshes expanded; exceeding it returns the partial partition flagged
    incomplete.
    """
    p = make_perm(p)
    k = len(p)
    known = {_as_mask(k, s) for s in seeds}
    if not known:
        raise ValueError("at least one seed mesh is required")
    uf = UnionFind()
    for m in known:
        uf.find(m)
    steps: list[TraceStep] = []
    frontier = deque(sorted(known))
    expanded: set[int] = set()
    spent = 0
    complete = True

    def expand_all() -> None:
        nonlocal spent, complete
        while frontier:
            mesh = frontier.popleft()
            if mesh in expanded:
                continue
            if budget is not None and spent >= budget:
                complete = False
                frontier.clear()
                return
            spent += 1
            expanded.add(mesh)
            for move in ssl_moves(MeshPattern(p, mesh)):
                grown = mesh | move.added
                if uf.union(mesh, grown):
                    steps.append(TraceStep("SSL", p, mesh, grown, move.assignments))
                if grown not in known:
                    known.add(grown)
                    frontier.append(grown)

    def sandwich_pass() -> bool:
        changed = False
        components: dict[int, list[int]] = {}
        for m in known:
            components.setdefault(uf.find(m), []).append(m)
        for root in sorted(components):
            members = sorted(components[root])
            for lo, hi in itertools.combinations(members, 2):
                if lo & hi != lo:
                    continue
                diff = hi & ~lo
                sub = diff
                while True:
                    mid = lo | sub
                    if mid not in known or uf.find(mid) != uf.find(lo):
                        steps.append(TraceStep("CLOSURE", p, lo, mid, (lo, hi)))
                        uf.union(mid, lo)
                        if mid not in known:
                            known.add(mid)
                            frontier.append(mid)
                        changed = True
                    if sub == 0:
                        break
                    sub = (sub - 1) & diff
        return changed

    while True:
        expand_all()
        if not complete:
            break
        if not sandwich_pass() and not frontier:
            break

    groups: dict[int, list[int]] = {}
    for m in known:
        groups.setdefault(uf.find(m), []).append(m)
    classes = []
    for root in sorted(groups):
        meshes = tuple(sorted(groups[root]))
        mesh_set = set(meshes)
        relevant = tuple(
            s for s in steps if s.before in mesh_set or s.after in mesh_set
        )
        classes.append(ClosureClass(meshes, relevant))
    return ClosureResult(p, tuple(classes), complete)
