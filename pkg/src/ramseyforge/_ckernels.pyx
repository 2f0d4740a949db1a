# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled search kernels; same contracts as ``_pykernels``."""

from libc.stdlib cimport malloc, calloc, free
from libc.string cimport memcpy

cdef enum:
    MAXN = 32
    MAXAR = 8


cdef inline long _index(const int* t, int arity, int n) noexcept nogil:
    cdef long idx = 0
    cdef int i
    for i in range(arity):
        idx = idx * n + t[i]
    return idx


cdef inline int _pattern_code(const int* t, int arity) noexcept nogil:
    # base-MAXAR code of the first-occurrence normal form of t
    cdef int seen[MAXAR]
    cdef int lab[MAXAR]
    cdef int nseen = 0, i, j, code = 0, c
    for i in range(arity):
        c = -1
        for j in range(nseen):
            if seen[j] == t[i]:
                c = lab[j]
                break
        if c < 0:
            seen[nseen] = t[i]
            lab[nseen] = nseen
            c = nseen
            nseen += 1
        code = code * MAXAR + c
    return code


def embed_search(int m, int n, arities, src_tables, tgt_tables, fixed, bint first_only):
    if m > n:
        return []
    if n > MAXN:
        raise ValueError("structure too large for compiled kernel")
    cdef int nrel = len(arities)
    cdef int r, i, a, x
    out = []
    if m == 0:
        return [()]
    # flattened check lists per source element
    cdef int* ar = <int*>malloc(nrel * sizeof(int))
    cdef const unsigned char** tgt = <const unsigned char**>malloc(nrel * sizeof(char*))
    cdef int* image = <int*>malloc(m * sizeof(int))
    cdef int* pinned = <int*>malloc(m * sizeof(int))
    cdef int* used = <int*>calloc(n, sizeof(int))
    cdef int* cand = <int*>malloc(m * sizeof(int))
    tgt_keep = [bytes(tb) for tb in tgt_tables]
    checks = [[] for _ in range(m)]
    for r in range(nrel):
        ar[r] = arities[r]
        tgt[r] = <const unsigned char*>(<bytes>tgt_keep[r])
        src = bytes(src_tables[r])
        total = (<object>m) ** ar[r]
        for idx in range(total):
            t = []
            rest = idx
            for a in range(ar[r]):
                t.append(rest % m)
                rest //= m
            t.reverse()
            checks[max(t)].append((r, t, 1 if src[idx] else 0))
    cdef int* cstart = <int*>malloc((m + 1) * sizeof(int))
    ncheck = sum(len(c) for c in checks)
    cdef int* crel = <int*>malloc((ncheck + 1) * sizeof(int))
    cdef int* cbit = <int*>malloc((ncheck + 1) * sizeof(int))
    cdef int* ctup = <int*>malloc((ncheck + 1) * MAXAR * sizeof(int))
    cdef int k = 0
    for i in range(m):
        cstart[i] = k
        for (r, t, bit) in checks[i]:
            crel[k] = r
            cbit[k] = bit
            for a in range(len(t)):
                ctup[k * MAXAR + a] = t[a]
            k += 1
    cstart[m] = k
    for i in range(m):
        pinned[i] = fixed[i]
        image[i] = -1
        cand[i] = -1
    cdef int depth = 0
    cdef int v, ok, c
    cdef long idx2
    try:
        while depth >= 0:
            # advance candidate at this depth
            if cand[depth] >= 0:
                used[cand[depth]] = 0
            if pinned[depth] >= 0:
                v = pinned[depth] if cand[depth] < 0 else n
            else:
                v = cand[depth] + 1
            found = False
            while v < n:
                if not used[v]:
                    image[depth] = v
                    ok = 1
                    for c in range(cstart[depth], cstart[depth + 1]):
                        idx2 = 0
                        for a in range(ar[crel[c]]):
                            idx2 = idx2 * n + image[ctup[c * MAXAR + a]]
                        if (tgt[crel[c]][idx2] != 0) != (cbit[c] != 0):
                            ok = 0
                            break
                    if ok:
                        found = True
                        break
                if pinned[depth] >= 0:
                    v = n
                else:
                    v += 1
            if not found:
                cand[depth] = -1
                image[depth] = -1
                depth -= 1
                continue
            cand[depth] = v
            used[v] = 1
            if depth == m - 1:
                out.append(tuple([image[i] for i in range(m)]))
                if first_only:
                    break
            else:
                depth += 1
                cand[depth] = -1
    finally:
        free(ar); free(tgt); free(image); free(pinned); free(used); free(cand)
        free(cstart); free(crel); free(cbit); free(ctup)
    return out


cdef struct CanonState:
    int n
    int nrel
    int* ar
    const unsigned char** tab
    int** pats       # per relation: flag array over pattern codes
    int* sigma
    int* assigned
    unsigned char* best
    int* best_sigma
    int have_best
    long veclen


cdef int _compare(CanonState* st, int k) noexcept nogil:
    cdef int n = st.n
    cdef int r, arity, x, j, ones, bit, b, v, i
    cdef long pos = 0, base, p, nprefix, rest
    cdef int prefix[MAXAR]
    cdef int full[MAXAR]
    cdef int known
    for r in range(st.nrel):
        arity = st.ar[r]
        nprefix = 1
        for i in range(arity - 1):
            nprefix *= n
        for p in range(nprefix):
            rest = p
            known = 1
            for i in range(arity - 2, -1, -1):
                prefix[i] = rest % n
                rest //= n
                if prefix[i] >= k:
                    known = 0
            if known:
                base = 0
                for i in range(arity - 1):
                    base = base * n + st.sigma[prefix[i]]
                base *= n
                for x in range(k):
                    bit = 1 if st.tab[r][base + st.sigma[x]] else 0
                    b = st.best[pos]
                    if bit != b:
                        return 1 if bit > b else -1
                    pos += 1
                if k < n:
                    ones = 0
                    for v in range(n):
                        if not st.assigned[v] and st.tab[r][base + v]:
                            ones += 1
                    for j in range(n - k):
                        bit = 1 if j < ones else 0
                        b = st.best[pos]
                        if bit != b:
                            return 1 if bit > b else -1
                        pos += 1
            else:
                for i in range(arity - 1):
                    full[i] = prefix[i]
                for x in range(n):
                    full[arity - 1] = x
                    bit = st.pats[r][_pattern_code(full, arity)]
                    b = st.best[pos]
                    if bit != b:
                        return 1 if bit > b else -1
                    pos += 1
    return 0


cdef void _store_best(CanonState* st) noexcept nogil:
    cdef int n = st.n
    cdef int r, arity, i
    cdef long pos = 0, t, total, rest, idx, mult
    for r in range(st.nrel):
        arity = st.ar[r]
        total = 1
        for i in range(arity):
            total *= n
        for t in range(total):
            # tuple of new labels t -> original index
            rest = t
            idx = 0
            mult = 1
            for i in range(arity):
                idx += st.sigma[rest % n] * mult
                mult *= n
                rest //= n
            st.best[pos] = 1 if st.tab[r][idx] else 0
            pos += 1
    for i in range(n):
        st.best_sigma[i] = st.sigma[i]
    st.have_best = 1


cdef void _extend(CanonState* st, int k) noexcept nogil:
    cdef int v
    if k == st.n:
        if not st.have_best or _compare(st, k) > 0:
            _store_best(st)
        return
    for v in range(st.n):
        if st.assigned[v]:
            continue
        st.sigma[k] = v
        st.assigned[v] = 1
        if not st.have_best or _compare(st, k + 1) >= 0:
            _extend(st, k + 1)
        st.assigned[v] = 0


def canon_search(int n, arities, tables):
    if n == 0:
        return ()
    if n > MAXN:
        raise ValueError("structure too large for compiled kernel")
    cdef CanonState st
    cdef int r, i, a, npat
    st.n = n
    st.nrel = len(arities)
    st.ar = <int*>malloc(st.nrel * sizeof(int))
    st.tab = <const unsigned char**>malloc(st.nrel * sizeof(char*))
    st.pats = <int**>malloc(st.nrel * sizeof(int*))
    st.sigma = <int*>calloc(n, sizeof(int))
    st.assigned = <int*>calloc(n, sizeof(int))
    st.best_sigma = <int*>calloc(n, sizeof(int))
    st.have_best = 0
    keep = [bytes(tb) for tb in tables]
    cdef int tup[MAXAR]
    st.veclen = 0
    for r in range(st.nrel):
        st.ar[r] = arities[r]
        if st.ar[r] > MAXAR:
            raise ValueError("arity too large for compiled kernel")
        st.tab[r] = <const unsigned char*>(<bytes>keep[r])
        npat = 1
        for i in range(st.ar[r]):
            npat *= MAXAR
        st.pats[r] = <int*>calloc(npat, sizeof(int))
        total = (<object>n) ** st.ar[r]
        st.veclen += total
        tb = keep[r]
        for idx in range(total):
            if tb[idx]:
                rest = idx
                for a in range(st.ar[r] - 1, -1, -1):
                    tup[a] = <int>(rest % n)
                    rest //= n
                st.pats[r][_pattern_code(tup, st.ar[r])] = 1
    st.best = <unsigned char*>calloc(st.veclen + 1, 1)
    try:
        with nogil:
            _extend(&st, 0)
        sigma = [st.best_sigma[i] for i in range(n)]
    finally:
        for r in range(st.nrel):
            free(st.pats[r])
        free(st.ar); free(st.tab); free(st.pats); free(st.sigma)
        free(st.assigned); free(st.best_sigma); free(st.best)
    perm = [0] * n
    for label, orig in enumerate(sigma):
        perm[orig] = label
    return tuple(perm)


def defeat_search(int p, masks):
    if p > 62:
        raise ValueError("too many items for compiled kernel")
    cdef int ncopies = len(masks)
    cdef unsigned long long* cm = <unsigned long long*>malloc((ncopies + 1) * sizeof(unsigned long long))
    cdef int* full = <int*>calloc(ncopies + 1, sizeof(int))
    cdef int* blue = <int*>calloc(ncopies + 1, sizeof(int))
    cdef int* bstart = <int*>calloc(p + 1, sizeof(int))
    cdef int* blist
    cdef int c, bit, j, k, before, after
    cdef long long mono, count = 0
    cdef unsigned long long col = 0, i, total, least = 0
    cdef int have_least = 0
    for c in range(ncopies):
        cm[c] = masks[c]
        full[c] = bin(masks[c]).count("1")
    nentries = sum(full[c] for c in range(ncopies))
    blist = <int*>malloc((nentries + 1) * sizeof(int))
    k = 0
    for bit in range(p):
        bstart[bit] = k
        for c in range(ncopies):
            if (cm[c] >> bit) & 1:
                blist[k] = c
                k += 1
    bstart[p] = k
    mono = ncopies
    if mono == 0:
        count = 1
        least = 0
        have_least = 1
    total = (<unsigned long long>1) << p
    try:
        with nogil:
            i = 1
            while i < total:
                bit = 0
                while not ((i >> bit) & 1):
                    bit += 1
                col ^= (<unsigned long long>1) << bit
                if (col >> bit) & 1:
                    for j in range(bstart[bit], bstart[bit + 1]):
                        c = blist[j]
                        before = blue[c] == 0 or blue[c] == full[c]
                        blue[c] += 1
                        after = blue[c] == full[c]
                        mono += after - before
                else:
                    for j in range(bstart[bit], bstart[bit + 1]):
                        c = blist[j]
                        before = blue[c] == full[c]
                        blue[c] -= 1
                        after = blue[c] == 0
                        mono += after - before
                if mono == 0:
                    count += 1
                    if not have_least or col < least:
                        least = col
                        have_least = 1
                i += 1
    finally:
        free(cm); free(full); free(blue); free(bstart); free(blist)
    return int(count), (int(least) if have_least else -1)
