# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled arborescence search kernel.

Same contract as _kernel_py: depth-first walk over parent assignments with
immediate cycle rejection, lexicographic emission order. Coefficient sums
run in C int64 when an a-priori L1 bound proves no overflow is possible,
otherwise with Python integers (exact either way).
"""

from libc.stdlib cimport free, malloc

BACKEND = "compiled"

# int64 path only when every intermediate provably stays below 2**62
_SAFE_LIMIT = 1 << 62


cdef inline bint _walk_ok(int u, int v, int root, int *parent) noexcept nogil:
    cdef int w = v
    while True:
        if w == u:
            return False
        if w == root or parent[w] < 0:
            return True
        w = parent[w]


def enumerate_parents(int n, int root, cands):
    """All acyclic parent assignments as tuples of length n (root slot -1)."""
    cdef int k = 0, u, lev, pos = 0, total_c = 0
    cdef int level = 0, ci, vv, i
    cdef bint descend
    cdef int *nodes = NULL
    cdef int *parent = NULL
    cdef int *cflat = NULL
    cdef int *coff = NULL
    cdef int *idx = NULL

    nodes_py = [u for u in range(n) if u != root]
    k = len(nodes_py)
    for u in nodes_py:
        total_c += len(cands[u])

    out = []
    if k == 0:
        vec = [-1] * n
        out.append(tuple(vec))
        return out

    nodes = <int *> malloc(k * sizeof(int))
    parent = <int *> malloc(n * sizeof(int))
    cflat = <int *> malloc((total_c if total_c else 1) * sizeof(int))
    coff = <int *> malloc((k + 1) * sizeof(int))
    idx = <int *> malloc(k * sizeof(int))
    if nodes == NULL or parent == NULL or cflat == NULL or coff == NULL or idx == NULL:
        free(nodes); free(parent); free(cflat); free(coff); free(idx)
        raise MemoryError()
    try:
        for u in range(n):
            parent[u] = -1
        for lev in range(k):
            nodes[lev] = nodes_py[lev]
        coff[0] = 0
        for lev in range(k):
            for v in cands[nodes[lev]]:
                cflat[pos] = v
                pos += 1
            coff[lev + 1] = pos

        idx[0] = coff[0]
        while level >= 0:
            if level == k:
                res = [0] * n
                for i in range(n):
                    res[i] = parent[i]
                res[root] = -1
                out.append(tuple(res))
                level -= 1
                continue
            u = nodes[level]
            descend = False
            ci = idx[level]
            while ci < coff[level + 1]:
                vv = cflat[ci]
                if _walk_ok(u, vv, root, parent):
                    parent[u] = vv
                    idx[level] = ci + 1
                    level += 1
                    if level < k:
                        idx[level] = coff[level]
                    descend = True
                    break
                ci += 1
            if descend:
                continue
            parent[u] = -1
            level -= 1
            if level >= 0:
                parent[nodes[level]] = -1
        return out
    finally:
        free(nodes); free(parent); free(cflat); free(coff); free(idx)


def sum_tree_products(int n, int root, cands, factors, int width):
    """Sum over spanning arborescences rooted at root of the product of the
    per-edge integer coefficient tuples in factors (aligned with cands).
    Returns the coefficient list, length (n-1)*(width-1) + 1, of ints."""
    nodes_py = [u for u in range(n) if u != root]
    k = len(nodes_py)
    out_len = k * (width - 1) + 1

    # a-priori L1 bound on every partial product and accumulator
    bound = 1
    for u in nodes_py:
        s = 0
        for f in factors[u]:
            for c in f:
                s += c if c >= 0 else -c
        bound *= s
        if bound == 0:
            return [0] * out_len
    if bound < _SAFE_LIMIT:
        return _sum_int64(n, root, cands, factors, width, nodes_py)
    return _sum_object(n, root, cands, factors, width, nodes_py)


cdef _sum_int64(int n, int root, cands, factors, int width, nodes_py):
    cdef int k = len(nodes_py)
    cdef int out_len = k * (width - 1) + 1
    cdef int total_c = 0, u, lev, pos = 0, i, j
    cdef int level = 0, ci, vv, blen, nlen
    cdef long long c
    cdef long long *base
    cdef long long *nxt
    cdef int *nodes = NULL
    cdef int *parent = NULL
    cdef int *cflat = NULL
    cdef int *coff = NULL
    cdef int *idx = NULL
    cdef long long *ff = NULL
    cdef long long *prods = NULL
    cdef long long *acc = NULL

    if k == 0:
        return [1]
    for u in nodes_py:
        total_c += len(cands[u])

    nodes = <int *> malloc(k * sizeof(int))
    parent = <int *> malloc(n * sizeof(int))
    cflat = <int *> malloc((total_c if total_c else 1) * sizeof(int))
    coff = <int *> malloc((k + 1) * sizeof(int))
    idx = <int *> malloc(k * sizeof(int))
    ff = <long long *> malloc((total_c * width if total_c else 1) * sizeof(long long))
    prods = <long long *> malloc((k + 1) * out_len * sizeof(long long))
    acc = <long long *> malloc(out_len * sizeof(long long))
    if (nodes == NULL or parent == NULL or cflat == NULL or coff == NULL
            or idx == NULL or ff == NULL or prods == NULL or acc == NULL):
        free(nodes); free(parent); free(cflat); free(coff); free(idx)
        free(ff); free(prods); free(acc)
        raise MemoryError()
    try:
        for u in range(n):
            parent[u] = -1
        for lev in range(k):
            nodes[lev] = nodes_py[lev]
        coff[0] = 0
        for lev in range(k):
            u = nodes[lev]
            fl = factors[u]
            i = 0
            for v in cands[u]:
                cflat[pos] = v
                ft = fl[i]
                for j in range(width):
                    ff[pos * width + j] = ft[j]
                pos += 1
                i += 1
            coff[lev + 1] = pos
        for i in range(out_len):
            acc[i] = 0
        for i in range((k + 1) * out_len):
            prods[i] = 0
        prods[0] = 1  # level-0 running product is the constant 1

        idx[0] = coff[0]
        while level >= 0:
            if level == k:
                base = prods + k * out_len
                for i in range(out_len):
                    acc[i] += base[i]
                level -= 1
                parent[nodes[level]] = -1
                continue
            u = nodes[level]
            ci = idx[level]
            vv = -1
            while ci < coff[level + 1]:
                if _walk_ok(u, cflat[ci], root, parent):
                    vv = cflat[ci]
                    break
                ci += 1
            if vv < 0:
                parent[u] = -1
                level -= 1
                if level >= 0:
                    parent[nodes[level]] = -1
                continue
            base = prods + level * out_len
            nxt = prods + (level + 1) * out_len
            blen = level * (width - 1) + 1
            nlen = blen + width - 1
            for i in range(nlen):
                nxt[i] = 0
            for i in range(blen):
                c = base[i]
                if c != 0:
                    for j in range(width):
                        if ff[ci * width + j] != 0:
                            nxt[i + j] += c * ff[ci * width + j]
            parent[u] = vv
            idx[level] = ci + 1
            level += 1
            if level < k:
                idx[level] = coff[level]
        return [acc[i] for i in range(out_len)]
    finally:
        free(nodes); free(parent); free(cflat); free(coff); free(idx)
        free(ff); free(prods); free(acc)


cdef _sum_object(int n, int root, cands, factors, int width, nodes_py):
    # arbitrary precision: C state for the search, Python ints for coefficients
    cdef int k = len(nodes_py)
    cdef int out_len = k * (width - 1) + 1
    cdef int total_c = 0, u, lev, pos = 0, i, j
    cdef int level = 0, ci, vv, blen, nlen
    cdef int *nodes = NULL
    cdef int *parent = NULL
    cdef int *cflat = NULL
    cdef int *coff = NULL
    cdef int *idx = NULL

    if k == 0:
        return [1]
    for u in nodes_py:
        total_c += len(cands[u])

    nodes = <int *> malloc(k * sizeof(int))
    parent = <int *> malloc(n * sizeof(int))
    cflat = <int *> malloc((total_c if total_c else 1) * sizeof(int))
    coff = <int *> malloc((k + 1) * sizeof(int))
    idx = <int *> malloc(k * sizeof(int))
    if nodes == NULL or parent == NULL or cflat == NULL or coff == NULL or idx == NULL:
        free(nodes); free(parent); free(cflat); free(coff); free(idx)
        raise MemoryError()
    ffobj = []  # per flat candidate: tuple of width Python ints
    try:
        for u in range(n):
            parent[u] = -1
        for lev in range(k):
            nodes[lev] = nodes_py[lev]
        coff[0] = 0
        for lev in range(k):
            u = nodes[lev]
            fl = factors[u]
            i = 0
            for v in cands[u]:
                cflat[pos] = v
                ffobj.append(tuple(fl[i]))
                pos += 1
                i += 1
            coff[lev + 1] = pos
        acc = [0] * out_len
        prods = [[0] * out_len for _ in range(k + 1)]
        prods[0][0] = 1

        idx[0] = coff[0]
        while level >= 0:
            if level == k:
                row = prods[k]
                for i in range(out_len):
                    acc[i] += row[i]
                level -= 1
                parent[nodes[level]] = -1
                continue
            u = nodes[level]
            ci = idx[level]
            vv = -1
            while ci < coff[level + 1]:
                if _walk_ok(u, cflat[ci], root, parent):
                    vv = cflat[ci]
                    break
                ci += 1
            if vv < 0:
                parent[u] = -1
                level -= 1
                if level >= 0:
                    parent[nodes[level]] = -1
                continue
            base = prods[level]
            nxt = prods[level + 1]
            blen = level * (width - 1) + 1
            nlen = blen + width - 1
            f = ffobj[ci]
            for i in range(nlen):
                nxt[i] = 0
            for i in range(blen):
                cc = base[i]
                if cc:
                    for j in range(width):
                        if f[j]:
                            nxt[i + j] = nxt[i + j] + cc * f[j]
            parent[u] = vv
            idx[level] = ci + 1
            level += 1
            if level < k:
                idx[level] = coff[level]
        return acc
    finally:
        free(nodes); free(parent); free(cflat); free(coff); free(idx)
