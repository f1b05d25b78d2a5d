"""Pure-Python kernels; reference behaviour for the compiled ``_ckernels``.

Moves act on an n x n skew matrix over Z/N by congruence M -> E M E^T:

* ``(0, i, j)``: transvection, E = I + e_ij (row i += row j, then col i += col j)
* ``(1, i, j)``: swap coordinates i and j
* ``(2, i, i)``: negate coordinate i
"""
from collections import deque
from itertools import product


def generator_moves(n):
    moves = [(0, i, j) for i in range(n) for j in range(n) if i != j]
    moves += [(1, i, j) for i in range(n) for j in range(i + 1, n)]
    moves += [(2, i, i) for i in range(n)]
    return moves


def apply_move(state, n, modulus, move):
    kind, i, j = move
    m = list(state)
    if kind == 0:
        for k in range(n):
            m[i * n + k] = (m[i * n + k] + m[j * n + k]) % modulus
        for k in range(n):
            m[k * n + i] = (m[k * n + i] + m[k * n + j]) % modulus
    elif kind == 1:
        for k in range(n):
            m[i * n + k], m[j * n + k] = m[j * n + k], m[i * n + k]
        for k in range(n):
            m[k * n + i], m[k * n + j] = m[k * n + j], m[k * n + i]
    else:
        for k in range(n):
            m[i * n + k] = -m[i * n + k] % modulus
            m[k * n + i] = -m[k * n + i] % modulus
    return tuple(m)


def congruence_bfs(start, target, n, modulus, budget):
    """Breadth-first search from ``start`` to ``target`` over generator moves.

    ``start``/``target`` are flat row-major tuples reduced mod ``modulus``.
    Returns ``(path, visited)``; ``path`` is the list of move indices into
    ``generator_moves(n)`` (first applied first) or None if ``budget``
    states were visited without reaching the target.
    """
    start, target = tuple(start), tuple(target)
    if start == target:
        return [], 1
    moves = generator_moves(n)
    parent = {start: None}
    queue = deque([start])
    while queue:
        state = queue.popleft()
        for idx, mv in enumerate(moves):
            nxt = apply_move(state, n, modulus, mv)
            if nxt in parent:
                continue
            parent[nxt] = (state, idx)
            if nxt == target:
                path = []
                while parent[nxt] is not None:
                    nxt, idx = parent[nxt]
                    path.append(idx)
                return path[::-1], len(parent)
            if len(parent) >= budget:
                return None, len(parent)
            queue.append(nxt)
    return None, len(parent)


def finite_field_has_zero(coeffs, add, mul):
    """Exhaustive search for nonzero v in F_q^d with sum coeffs[i]*v[i]^2 == 0."""
    q = len(add)
    d = len(coeffs)
    sq = [mul[x][x] for x in range(q)]
    for v in product(range(q), repeat=d):
        if not any(v):
            continue
        s = 0
        for a, x in zip(coeffs, v):
            s = add[s][mul[a][sq[x]]]
        if s == 0:
            return True
    return False
