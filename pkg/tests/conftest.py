"""Shared oracle helpers for the test suite.

Everything here is deliberately independent of the package internals:
exact Gaussian elimination gives kernel dimensions over the rationals,
breadth-first permutation closure gives group orders, and discrete
Fourier analysis gives circulant spectra.  Tests compare package output
against these.
"""

from fractions import Fraction
from random import Random

from coholap import GroupRingElement, Word


def random_word(rng: Random, generator_count: int, max_length: int = 6) -> Word:
    letters = []
    for _ in range(rng.randint(0, max_length)):
        letter = rng.randint(1, generator_count)
        letters.append(letter if rng.random() < 0.5 else -letter)
    return Word(letters)


def random_element(rng: Random, generator_count: int, terms: int = 4,
                   max_length: int = 4) -> GroupRingElement:
    out = GroupRingElement.zero()
    for _ in range(terms):
        coeff = Fraction(rng.randint(-6, 6), rng.randint(1, 6))
        out = out + GroupRingElement.from_word(
            random_word(rng, generator_count, max_length), coeff)
    return out


def exact_rank(matrix) -> int:
    """Rank of a tuple-of-tuples Fraction matrix by Gaussian elimination."""
    rows = [list(row) for row in matrix]
    if not rows or not rows[0]:
        return 0
    cols = len(rows[0])
    rank = 0
    for c in range(cols):
        pivot = next((r for r in range(rank, len(rows)) if rows[r][c] != 0),
                     None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = rows[rank][c]
        rows[rank] = [x / inv for x in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][c] != 0:
                factor = rows[r][c]
                rows[r] = [x - factor * y
                           for x, y in zip(rows[r], rows[rank])]
        rank += 1
        if rank == len(rows):
            break
    return rank


def exact_kernel_dim(matrix) -> int:
    """Nullity of a square Fraction matrix, exactly."""
    if not matrix:
        return 0
    return len(matrix[0]) - exact_rank(matrix)


def closure_order(generator_perms) -> int:
    """Order of the permutation group generated by the given permutations."""
    degree = len(generator_perms[0])
    identity = tuple(range(degree))
    seen = {identity}
    frontier = [identity]
    while frontier:
        fresh = []
        for p in frontier:
            for g in generator_perms:
                q = tuple(g[x] for x in p)
                if q not in seen:
                    seen.add(q)
                    fresh.append(q)
        frontier = fresh
    return len(seen)


def tree_walk_counts(branching: int, max_length: int) -> list[int]:
    """Closed-walk counts at the root of the (branching)-regular tree.

    ``result[i]`` is the number of length-``i`` walks that start and end
    at the root: a distance-profile dynamic program (1 step back, the
    remaining degree steps out).
    """
    counts = []
    state = {0: 1}
    for length in range(max_length + 1):
        counts.append(state.get(0, 0))
        nxt: dict[int, int] = {}
        for dist, ways in state.items():
            if dist == 0:
                nxt[1] = nxt.get(1, 0) + ways * branching
            else:
                nxt[dist - 1] = nxt.get(dist - 1, 0) + ways
                nxt[dist + 1] = nxt.get(dist + 1, 0) + ways * (branching - 1)
        state = nxt
    return counts
