#!/usr/bin/env python3
"""Semidefinite-program adapter: SDPA sparse file in, plain-text solution out.

Usage: solve_sdpa.py PROBLEM.dat-s ANSWER.txt

Solves  min c'x  s.t.  sum_v x_v F_v - F_0 >= 0  (block diagonal) with cvxopt
and writes ANSWER.txt as::

    status optimal|infeasible|numerical_failure
    objective <min c'x>
    iterations <n>
    residual <r>
    x
    <one value per line, M lines>

The adapter exits 0 whenever it produced an answer file (even for infeasible
or failed solves); nonzero exit means the adapter itself failed.
"""

import sys


def parse_sdpa_sparse(path):
    """Returns (m, block_sizes, c, entries) with entries as a list of
    (matno, blkno, i, j, value), all 1-based except matno 0 = constant."""
    tokens = []
    with open(path) as f:
        for line in f:
            stripped = line.strip()
            if not stripped or stripped[0] in '"*':
                continue
            for ch in ',(){}':
                stripped = stripped.replace(ch, ' ')
            tokens.extend(stripped.split())

    pos = 0

    def take(count):
        nonlocal pos
        chunk = tokens[pos:pos + count]
        if len(chunk) != count:
            raise ValueError('truncated SDPA file')
        pos += count
        return chunk

    m = int(take(1)[0])
    nblocks = int(take(1)[0])
    # Negative sizes denote diagonal blocks; treat them as dense of |size|.
    sizes = [abs(int(t)) for t in take(nblocks)]
    c = [float(t) for t in take(m)]
    entries = []
    while pos + 5 <= len(tokens):
        matno, blkno, i, j = (int(t) for t in take(4))
        entries.append((matno, blkno, i, j, float(take(1)[0])))
    if pos != len(tokens):
        raise ValueError('trailing tokens in SDPA file')
    return m, sizes, c, entries


def solve(m, sizes, c, entries):
    from cvxopt import matrix, solvers

    # Dense symmetric matrices per (matno, block).
    F = {}
    for matno, blkno, i, j, value in entries:
        key = (matno, blkno - 1)
        if key not in F:
            F[key] = [[0.0] * sizes[blkno - 1] for _ in range(sizes[blkno - 1])]
        F[key][i - 1][j - 1] = value
        F[key][j - 1][i - 1] = value

    # cvxopt form: min c'x s.t. h_k - mat(G_k x) >= 0, so G_k[:, v] = -vec(F_v)
    # and h_k = -F_0 gives sum_v x_v F_v - F_0 >= 0.
    Gs, hs = [], []
    for k, size in enumerate(sizes):
        G = matrix(0.0, (size * size, m))
        for v in range(m):
            block = F.get((v + 1, k))
            if block is None:
                continue
            for r in range(size):
                for s in range(size):
                    G[r * size + s, v] = -block[r][s]
        h = matrix(0.0, (size, size))
        block = F.get((0, k))
        if block is not None:
            for r in range(size):
                for s in range(size):
                    h[r, s] = -block[r][s]
        Gs.append(G)
        hs.append(h)

    solvers.options['show_progress'] = False
    solvers.options['maxiters'] = 200
    try:
        sol = solvers.sdp(matrix(c), Gs=Gs, hs=hs)
    except (ValueError, ArithmeticError, ZeroDivisionError) as exc:
        print('cvxopt raised: %s' % exc, file=sys.stderr)
        return 'numerical_failure', 0.0, 0, 0.0, [0.0] * m

    raw = sol.get('status', 'unknown')
    if raw == 'optimal':
        status = 'optimal'
    elif raw == 'primal infeasible':
        status = 'infeasible'
    else:
        status = 'numerical_failure'

    x = [0.0] * m
    if status == 'optimal' and sol.get('x') is not None:
        x = [float(sol['x'][v]) for v in range(m)]
    objective = float(sol['primal objective']) if status == 'optimal' else 0.0
    iterations = int(sol.get('iterations', 0) or 0)
    residual = max(float(sol.get('primal infeasibility') or 0.0),
                   float(sol.get('dual infeasibility') or 0.0))
    return status, objective, iterations, residual, x


def main(argv):
    if len(argv) != 3:
        print('usage: solve_sdpa.py PROBLEM.dat-s ANSWER.txt', file=sys.stderr)
        return 2
    problem_path, answer_path = argv[1], argv[2]
    m, sizes, c, entries = parse_sdpa_sparse(problem_path)
    status, objective, iterations, residual, x = solve(m, sizes, c, entries)
    with open(answer_path, 'w') as out:
        out.write('status %s\n' % status)
        out.write('objective %.17g\n' % objective)
        out.write('iterations %d\n' % iterations)
        out.write('residual %.17g\n' % residual)
        out.write('x\n')
        for value in x:
            out.write('%.17g\n' % value)
    return 0


if __name__ == '__main__':
    sys.exit(main(sys.argv))
