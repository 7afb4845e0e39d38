"""Pure-Python hot loops. _ckernels.pyx mirrors these signatures exactly."""

import itertools

BACKEND = "python"


def order_mul(table, n, x, y):
    """Product of coordinate vectors x, y under a sparse structure tensor.

    table[i*n + j] is a tuple of (k, c) pairs meaning b_i b_j = sum c b_k.
    """
    out = [0] * n
    nz_y = [(j, b) for j, b in enumerate(y) if b]
    for i, a in enumerate(x):
        if not a:
            continue
        base = i * n
        for j, b in nz_y:
            ab = a * b
            for k, c in table[base + j]:
                out[k] += ab * c
    return out


def _hom_matrices(steps, sizes, nrows, ncols):
    for raw in itertools.product(*(range(s) for row in sizes for s in row)):
        yield [[raw[i * ncols + j] * steps[i][j] for j in range(ncols)] for i in range(nrows)]


def id0_scan(d_mat, mu_inv, gam_inv, steps, sizes):
    """All f in Hom(gamma, mu) with f d f = f, as flat row-major tuples.

    d_mat is the len(gam_inv) x len(mu_inv) matrix of d: mu -> gamma;
    steps/sizes parametrize Hom(gamma, mu) entrywise.
    """
    nm, ng = len(mu_inv), len(gam_inv)
    out = []
    for f in _hom_matrices(steps, sizes, nm, ng):
        df = [[sum(d_mat[a][b] * f[b][j] for b in range(nm)) % gam_inv[a] for j in range(ng)] for a in range(ng)]
        ok = True
        for i in range(nm):
            mi = mu_inv[i]
            fi = f[i]
            for j in range(ng):
                if (sum(fi[a] * df[a][j] for a in range(ng)) - fi[j]) % mi:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append(tuple(v for row in f for v in row))
    return out


def unit_scan(d_mat, mu_inv, gam_inv, steps, sizes):
    """All f in Hom(gamma, mu) with 1 + d f invertible on gamma."""
    nm, ng = len(mu_inv), len(gam_inv)
    nonzero = [x for x in itertools.product(*(range(e) for e in gam_inv)) if any(x)]
    out = []
    for f in _hom_matrices(steps, sizes, nm, ng):
        h = [
            [(int(a == j) + sum(d_mat[a][b] * f[b][j] for b in range(nm))) % gam_inv[a] for j in range(ng)]
            for a in range(ng)
        ]
        ok = True
        for x in nonzero:
            if not any(sum(h[a][j] * x[j] for j in range(ng)) % gam_inv[a] for a in range(ng)):
                ok = False
                break
        if ok:
            out.append(tuple(v for row in f for v in row))
    return out
