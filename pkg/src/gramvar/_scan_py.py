"""Pure-Python matcher kernel.

Reference implementation of the scan in gramvar._scan (Cython);
gramvar.grammar picks whichever is importable.  Keep the two behaviorally
identical: both take one encoded sentence (per-token tag-class and
lemma-set bitmasks) plus the flattened rule program, and return
``(rule_index, slot1_pos, slot2_pos)`` triples for leftmost-longest,
per-rule non-overlapping matches.
"""

KERNEL = "python"


def scan(masks, lmasks, meta, e_class, e_lemma, e_star):
    n = len(masks)
    out = []
    n_rules = len(meta) // 4
    for r in range(n_rules):
        base = meta[4 * r]
        ne = meta[4 * r + 1]
        s1e = meta[4 * r + 2]
        s2e = meta[4 * r + 3]
        slots = [-1, -1]
        pos = 0
        while pos < n:
            end = _match_at(
                masks, lmasks, n, e_class, e_lemma, e_star,
                base, ne, s1e, s2e, 0, pos, slots,
            )
            if end < 0:
                pos += 1
            else:
                out.append((r, slots[0], slots[1]))
                pos = end
    return out


def _match_at(masks, lmasks, n, e_class, e_lemma, e_star,
              base, ne, s1e, s2e, e, p, slots):
    """Longest match of elements e.. anchored at p; -1 if none.

    Stars are explored longest-first, which yields the overall-longest match
    because every element's admissible positions form a contiguous run.
    """
    if e == ne:
        return p
    cm = e_class[base + e]
    lm = e_lemma[base + e]
    if e_star[base + e]:
        run = p
        while run < n and (masks[run] & cm) and (lm == 0 or (lmasks[run] & lm)):
            run += 1
        for k in range(run, p - 1, -1):
            end = _match_at(masks, lmasks, n, e_class, e_lemma, e_star,
                            base, ne, s1e, s2e, e + 1, k, slots)
            if end >= 0:
                return end
        return -1
    if p < n and (masks[p] & cm) and (lm == 0 or (lmasks[p] & lm)):
        if e == s1e:
            slots[0] = p
        elif e == s2e:
            slots[1] = p
        return _match_at(masks, lmasks, n, e_class, e_lemma, e_star,
                         base, ne, s1e, s2e, e + 1, p + 1, slots)
    return -1
