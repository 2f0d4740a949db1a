"""Pure-Python search kernels.

These mirror ``_ckernels.pyx`` exactly (same arguments, same results, same
enumeration order); :mod:`ramseyforge.kernels` picks one at import.

Structures reach the kernels in dense form: one ``bytes`` table per relation,
of length ``n ** arity``, indexed by ``sum(t[i] * n ** (arity - 1 - i))``.
"""

from __future__ import annotations

from itertools import product


def _index(t, n):
    idx = 0
    for x in t:
        idx = idx * n + x
    return idx


def _patterns(arity, n, table):
    """Equality patterns (first-occurrence normal form) of present tuples."""
    found = set()
    for idx, bit in enumerate(table):
        if bit:
            t = []
            rest = idx
            for _ in range(arity):
                t.append(rest % n)
                rest //= n
            t.reverse()
            found.add(_pattern(t))
    return found


def _pattern(t):
    seen = {}
    return tuple(seen.setdefault(x, len(seen)) for x in t)


def embed_search(m, n, arities, src_tables, tgt_tables, fixed, first_only):
    """All injective maps {0..m-1} -> {0..n-1} preserving and reflecting every
    relation, in lexicographic order of the map. ``fixed[i] >= 0`` pins source
    ``i``. With ``first_only`` at most one map is returned."""
    if m > n:
        return []
    # checks[i]: (relation, source tuple, source bit) for tuples over {0..i}
    # that contain i
    checks = [[] for _ in range(m)]
    for r, (arity, table) in enumerate(zip(arities, src_tables)):
        for t in product(range(m), repeat=arity):
            hi = max(t)
            checks[hi].append((r, t, table[_index(t, m)]))
    out = []
    image = [-1] * m
    used = [False] * n

    def consistent(i):
        for r, t, bit in checks[i]:
            idx = 0
            for x in t:
                idx = idx * n + image[x]
            if (tgt_tables[r][idx] != 0) != (bit != 0):
                return False
        return True

    def extend(i):
        if i == m:
            out.append(tuple(image))
            return first_only
        pinned = fixed[i]
        candidates = (pinned,) if pinned >= 0 else range(n)
        for v in candidates:
            if used[v]:
                continue
            image[i] = v
            if consistent(i):
                used[v] = True
                if extend(i + 1):
                    return True
                used[v] = False
        image[i] = -1
        return False

    extend(0)
    return out


def canon_search(n, arities, tables):
    """Relabeling ``perm`` (original -> new label) that makes the relabeled
    structure's characteristic vector lexicographically greatest.

    The vector lists, relation by relation, one bit per tuple of new labels in
    lexicographic tuple order. For equal per-relation tuple counts, a greatest
    vector is the same thing as a least sorted-tuple serialization.
    Branch and bound: labels are assigned in order 0, 1, ...; a partial
    labeling is pruned when an optimistic completion already loses to the
    best complete vector.
    """
    if n == 0:
        return ()
    pats = [_patterns(a, n, tb) for a, tb in zip(arities, tables)]
    sigma = []  # new label -> original
    assigned = [False] * n
    best = [None]
    best_sigma = [None]

    def compare(k):
        # -1: cannot beat best, 0: ties best so far, 1: beats best
        bvec = best[0]
        pos = 0
        for r, arity in enumerate(arities):
            table = tables[r]
            pset = pats[r]
            for prefix in product(range(n), repeat=arity - 1):
                if all(x < k for x in prefix):
                    base = _index([sigma[x] for x in prefix], n) * n
                    for x in range(k):
                        bit = 1 if table[base + sigma[x]] else 0
                        b = bvec[pos]
                        if bit != b:
                            return 1 if bit > b else -1
                        pos += 1
                    if k < n:
                        ones = 0
                        for v in range(n):
                            if not assigned[v] and table[base + v]:
                                ones += 1
                        for j in range(n - k):
                            bit = 1 if j < ones else 0
                            b = bvec[pos]
                            if bit != b:
                                return 1 if bit > b else -1
                            pos += 1
                else:
                    for x in range(n):
                        bit = 1 if _pattern(prefix + (x,)) in pset else 0
                        b = bvec[pos]
                        if bit != b:
                            return 1 if bit > b else -1
                        pos += 1
        return 0

    def full_vector():
        vec = []
        for arity, table in zip(arities, tables):
            for t in product(range(n), repeat=arity):
                vec.append(1 if table[_index([sigma[x] for x in t], n)] else 0)
        return vec

    def extend(k):
        if k == n:
            if best[0] is None or compare(n) > 0:
                best[0] = full_vector()
                best_sigma[0] = tuple(sigma)
            return
        for v in range(n):
            if assigned[v]:
                continue
            sigma.append(v)
            assigned[v] = True
            if best[0] is None or compare(k + 1) >= 0:
                extend(k + 1)
            assigned[v] = False
            sigma.pop()

    extend(0)
    perm = [0] * n
    for label, orig in enumerate(best_sigma[0]):
        perm[orig] = label
    return tuple(perm)


def defeat_search(p, masks):
    """Scan all 2-colourings of ``p`` items in Gray-code order.

    A colouring is an int; item ``j`` sits at bit ``p - 1 - j`` (1 = blue), so
    integer order is lexicographic order of the colour sequence with
    red < blue. ``masks`` are copies in the same bit layout; a copy is
    monochromatic when its items are all red or all blue.
    Returns ``(count of defeating colourings, least defeating colouring or -1)``.
    """
    ncopies = len(masks)
    full = [bin(m).count("1") for m in masks]
    blue = [0] * ncopies
    by_bit = [[] for _ in range(p)]
    for c, m in enumerate(masks):
        for bit in range(p):
            if m >> bit & 1:
                by_bit[bit].append(c)
    mono = ncopies  # all red at start: every copy is monochromatic
    count = 0
    least = -1
    col = 0
    if mono == 0:
        count = 1
        least = 0
    for i in range(1, 1 << p):
        bit = (i & -i).bit_length() - 1
        col ^= 1 << bit
        if col >> bit & 1:
            for c in by_bit[bit]:
                before = blue[c] == 0 or blue[c] == full[c]
                blue[c] += 1
                after = blue[c] == full[c]
                mono += after - before
        else:
            for c in by_bit[bit]:
                before = blue[c] == full[c]
                blue[c] -= 1
                after = blue[c] == 0
                mono += after - before
        if mono == 0:
            count += 1
            if least < 0 or col < least:
                least = col
    return count, least
