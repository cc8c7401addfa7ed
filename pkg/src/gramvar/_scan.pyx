# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled matcher kernel.

Mirrors gramvar._scan_py; see that module for the contract.  Keep the two
implementations behaviorally identical.
"""

KERNEL = "compiled"

ctypedef unsigned long long u64


cdef long _match_at(const u64[::1] masks, const u64[::1] lmasks, long n,
                    const u64[::1] e_class, const u64[::1] e_lemma,
                    const signed char[::1] e_star,
                    long base, long ne, long s1e, long s2e,
                    long e, long p, long* s1, long* s2) noexcept:
    cdef long run, k, end
    cdef u64 cm, lm
    if e == ne:
        return p
    cm = e_class[base + e]
    lm = e_lemma[base + e]
    if e_star[base + e]:
        run = p
        while run < n and (masks[run] & cm) and (lm == 0 or (lmasks[run] & lm)):
            run += 1
        k = run
        while k >= p:
            end = _match_at(masks, lmasks, n, e_class, e_lemma, e_star,
                            base, ne, s1e, s2e, e + 1, k, s1, s2)
            if end >= 0:
                return end
            k -= 1
        return -1
    if p < n and (masks[p] & cm) and (lm == 0 or (lmasks[p] & lm)):
        if e == s1e:
            s1[0] = p
        elif e == s2e:
            s2[0] = p
        return _match_at(masks, lmasks, n, e_class, e_lemma, e_star,
                         base, ne, s1e, s2e, e + 1, p + 1, s1, s2)
    return -1


def scan(masks_obj, lmasks_obj, meta_obj, e_class_obj, e_lemma_obj, e_star_obj):
    cdef long n = len(masks_obj)
    out = []
    if n == 0:
        return out
    cdef const u64[::1] masks = masks_obj
    cdef const u64[::1] lmasks = lmasks_obj
    cdef const long[::1] meta = meta_obj
    cdef const u64[::1] e_class = e_class_obj
    cdef const u64[::1] e_lemma = e_lemma_obj
    cdef const signed char[::1] e_star = e_star_obj
    cdef long n_rules = len(meta_obj) // 4
    cdef long r, base, ne, s1e, s2e, pos, end
    cdef long s1, s2
    for r in range(n_rules):
        base = meta[4 * r]
        ne = meta[4 * r + 1]
        s1e = meta[4 * r + 2]
        s2e = meta[4 * r + 3]
        s1 = -1
        s2 = -1
        pos = 0
        while pos < n:
            end = _match_at(masks, lmasks, n, e_class, e_lemma, e_star,
                            base, ne, s1e, s2e, 0, pos, &s1, &s2)
            if end < 0:
                pos += 1
            else:
                out.append((r, s1, s2))
                pos = end
    return out
