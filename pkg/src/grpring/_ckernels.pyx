# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled twins of the loops in _pykernels; same signatures and results."""

from libc.stdlib cimport malloc, free

BACKEND = "cython"

cdef long long LIMIT = 1LL << 62


def order_mul(table, Py_ssize_t n, x, y):
    cdef Py_ssize_t i, j, k
    cdef long long a, b, c
    cdef long long *out
    cdef long long *xs
    cdef long long *ys
    bx = max((abs(v) for v in x), default=0)
    by = max((abs(v) for v in y), default=0)
    bc = max((abs(p[1]) for entry in table for p in entry), default=0)
    # each output coordinate collects at most n*n terms; fall back on overflow risk
    if n * n * bx * by * bc >= LIMIT:
        from ._pykernels import order_mul as slow
        return slow(table, n, x, y)
    out = <long long *> malloc((n + 1) * sizeof(long long))
    xs = <long long *> malloc((n + 1) * sizeof(long long))
    ys = <long long *> malloc((n + 1) * sizeof(long long))
    try:
        for i in range(n):
            out[i] = 0
            xs[i] = x[i]
            ys[i] = y[i]
        for i in range(n):
            a = xs[i]
            if a == 0:
                continue
            for j in range(n):
                b = ys[j]
                if b == 0:
                    continue
                for pair in table[i * n + j]:
                    k = pair[0]
                    c = pair[1]
                    out[k] += a * b * c
        return [out[i] for i in range(n)]
    finally:
        free(out)
        free(xs)
        free(ys)


cdef class _HomEnum:
    cdef int nm, ng, nent
    cdef long long *steps
    cdef long long *sizes
    cdef long long *raw
    cdef long long *f

    def __cinit__(self, steps, sizes, int nm, int ng):
        cdef int i, j
        self.nm = nm
        self.ng = ng
        self.nent = nm * ng
        self.steps = <long long *> malloc((self.nent + 1) * sizeof(long long))
        self.sizes = <long long *> malloc((self.nent + 1) * sizeof(long long))
        self.raw = <long long *> malloc((self.nent + 1) * sizeof(long long))
        self.f = <long long *> malloc((self.nent + 1) * sizeof(long long))
        for i in range(nm):
            for j in range(ng):
                self.steps[i * ng + j] = steps[i][j]
                self.sizes[i * ng + j] = sizes[i][j]
                self.raw[i * ng + j] = 0
                self.f[i * ng + j] = 0

    def __dealloc__(self):
        free(self.steps)
        free(self.sizes)
        free(self.raw)
        free(self.f)

    cdef bint advance(self):
        cdef int t = self.nent - 1
        while t >= 0:
            self.raw[t] += 1
            if self.raw[t] < self.sizes[t]:
                self.f[t] = self.raw[t] * self.steps[t]
                return True
            self.raw[t] = 0
            self.f[t] = 0
            t -= 1
        return False

    cdef tuple current(self):
        return tuple([self.f[t] for t in range(self.nent)])


cdef long long *_load(mat, int rows, int cols):
    cdef long long *out = <long long *> malloc((rows * cols + 1) * sizeof(long long))
    cdef int i, j
    for i in range(rows):
        for j in range(cols):
            out[i * cols + j] = mat[i][j]
    return out


def id0_scan(d_mat, mu_inv, gam_inv, steps, sizes):
    cdef int nm = len(mu_inv), ng = len(gam_inv)
    cdef int i, j, a, b
    cdef long long s
    cdef bint ok
    cdef long long *d = _load(d_mat, ng, nm)
    cdef long long *mi = <long long *> malloc((nm + 1) * sizeof(long long))
    cdef long long *gi = <long long *> malloc((ng + 1) * sizeof(long long))
    cdef long long *df = <long long *> malloc((ng * ng + 1) * sizeof(long long))
    cdef _HomEnum it = _HomEnum(steps, sizes, nm, ng)
    out = []
    try:
        for i in range(nm):
            mi[i] = mu_inv[i]
        for a in range(ng):
            gi[a] = gam_inv[a]
        while True:
            for a in range(ng):
                for j in range(ng):
                    s = 0
                    for b in range(nm):
                        s += d[a * nm + b] * it.f[b * ng + j]
                    df[a * ng + j] = s % gi[a]
            ok = True
            for i in range(nm):
                for j in range(ng):
                    s = -it.f[i * ng + j]
                    for a in range(ng):
                        s += it.f[i * ng + a] * df[a * ng + j]
                    if s % mi[i] != 0:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                out.append(it.current())
            if not it.advance():
                break
        return out
    finally:
        free(d)
        free(mi)
        free(gi)
        free(df)


def unit_scan(d_mat, mu_inv, gam_inv, steps, sizes):
    cdef int nm = len(mu_inv), ng = len(gam_inv)
    cdef int i, j, a, b, t
    cdef long long s, total = 1
    cdef bint ok, zero
    for e in gam_inv:
        total *= e
    cdef long long *d = _load(d_mat, ng, nm)
    cdef long long *gi = <long long *> malloc((ng + 1) * sizeof(long long))
    cdef long long *h = <long long *> malloc((ng * ng + 1) * sizeof(long long))
    cdef long long *x = <long long *> malloc((ng + 1) * sizeof(long long))
    cdef _HomEnum it = _HomEnum(steps, sizes, nm, ng)
    out = []
    try:
        for a in range(ng):
            gi[a] = gam_inv[a]
        while True:
            for a in range(ng):
                for j in range(ng):
                    s = 1 if a == j else 0
                    for b in range(nm):
                        s += d[a * nm + b] * it.f[b * ng + j]
                    h[a * ng + j] = s % gi[a]
            ok = True
            for j in range(ng):
                x[j] = 0
            # walk every nonzero x in gamma; 1 + d f is invertible iff h x != 0
            for t in range(1, total):
                j = ng - 1
                while j >= 0:
                    x[j] += 1
                    if x[j] < gi[j]:
                        break
                    x[j] = 0
                    j -= 1
                zero = True
                for a in range(ng):
                    s = 0
                    for j in range(ng):
                        s += h[a * ng + j] * x[j]
                    if s % gi[a] != 0:
                        zero = False
                        break
                if zero:
                    ok = False
                    break
            if ok:
                out.append(it.current())
            if not it.advance():
                break
        return out
    finally:
        free(d)
        free(gi)
        free(h)
        free(x)
