"""Brute-force reference implementations, straight from the definitions.

These deliberately avoid the library's shortcuts: occurrences come from raw
position combinations, and mesh containment uses the closed corresponding
rectangles written with the pattern-inverse value lookup rather than sorted
occurrence values.  Tests compare the fast paths against these.
"""

import itertools


def occurrences_brute(p, w):
    k, n = len(p), len(w)
    out = []
    for combo in itertools.combinations(range(1, n + 1), k):
        vals = [w[i - 1] for i in combo]
        if all(
            (vals[s] < vals[t]) == (p[s] < p[t])
            for s in range(k)
            for t in range(s + 1, k)
        ):
            out.append(combo)
    return out


def region_brute(p, w, occ, square):
    """Closed corresponding rectangle of a square, by the inverse-pattern
    formulation: the row interval comes from the occurrence letters playing
    the pattern values b and b+1."""
    k, n = len(p), len(w)
    a, b = square
    pinv = {v: i for i, v in enumerate(p, start=1)}
    pinv[0] = 0
    pinv[k + 1] = k + 1
    ext = (0,) + tuple(occ) + (n + 1,)

    def host_value(idx):
        if idx == 0:
            return 0
        if idx == k + 1:
            return n + 1
        return w[ext[idx] - 1]

    return (ext[a], ext[a + 1]), (host_value(pinv[b]), host_value(pinv[b + 1]))


def mesh_contains_brute(p, squares, w):
    n = len(w)
    for occ in occurrences_brute(p, w):
        good = True
        for square in squares:
            (x_lo, x_hi), (y_lo, y_hi) = region_brute(p, w, occ, square)
            if any(
                x_lo < x < x_hi and y_lo < w[x - 1] < y_hi for x in range(1, n + 1)
            ):
                good = False
                break
        if good:
            return True
    return False


def first_distinguisher_brute(p, squares1, squares2, n_max):
    """Lexicographically least permutation separating two meshes, or None."""
    for n in range(1, n_max + 1):
        for w in itertools.permutations(range(1, n + 1)):
            if mesh_contains_brute(p, squares1, w) != mesh_contains_brute(
                p, squares2, w
            ):
                return w
    return None
