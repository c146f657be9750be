# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled twin of _kernels_py; same API, bit-identical results.

Limited to bases with at most 64 generators (the backend selector falls
back to the pure-Python kernels beyond that).
"""


def parity_of(e, odd_mask):
    cdef unsigned long long mask = odd_mask
    cdef int n = 0
    cdef int i = 0
    for k in e:
        if k and (mask >> i) & 1:
            n += 1
        i += 1
    return n & 1


def degree_of(e):
    cdef long long s = 0
    for k in e:
        s += k
    return s


def mul_exps(e1, e2, odd_mask):
    cdef unsigned long long mask = odd_mask
    cdef unsigned long long m1 = 0, m2 = 0, m
    cdef int i = 0, j, swaps = 0
    for k in e1:
        if k and (mask >> i) & 1:
            m1 |= 1ULL << i
        i += 1
    i = 0
    for k in e2:
        if k and (mask >> i) & 1:
            m2 |= 1ULL << i
        i += 1
    if m1 & m2:
        return None
    m = m2
    while m:
        j = _ctz(m)
        swaps += _popcount_ull(m1 >> (j + 1))
        m &= m - 1
    out = tuple(a + b for a, b in zip(e1, e2))
    return out, (-1 if swaps & 1 else 1)


def contract_pair(eA, eB, pairs, odd_mask):
    cdef unsigned long long mask = odd_mask
    cdef int i, j, x, sa, sb
    cdef int d1 = len(eA)
    out = []
    for ij in pairs:
        i = ij[0]
        j = ij[1]
        ka = eA[i]
        if not ka:
            continue
        kb = eB[j]
        if not kb:
            continue
        if (mask >> i) & 1:
            sa = 0
            for x in range(i + 1, d1):
                if eA[x] and (mask >> x) & 1:
                    sa += 1
            sb = 0
            for x in range(j):
                if eB[x] and (mask >> x) & 1:
                    sb += 1
            weight = -1 if (sa + sb) & 1 else 1
        else:
            weight = ka * kb
        eA2 = eA[:i] + (ka - 1,) + eA[i + 1:]
        eB2 = eB[:j] + (kb - 1,) + eB[j + 1:]
        out.append((i, j, weight, eA2, eB2))
    return out


def laplace_terms(e, pairs, odd_mask):
    cdef unsigned long long mask = odd_mask
    cdef int i, j, x, below_i, below_j
    out = []
    for ij in pairs:
        i = ij[0]
        j = ij[1]
        ki = e[i]
        if not ki:
            continue
        if i == j:
            if (mask >> i) & 1 or ki < 2:
                continue
            weight = ki * (ki - 1) // 2
            e2 = e[:i] + (ki - 2,) + e[i + 1:]
        else:
            kj = e[j]
            if not kj:
                continue
            if (mask >> i) & 1:
                below_i = 0
                for x in range(i):
                    if e[x] and (mask >> x) & 1:
                        below_i += 1
                below_j = 0
                for x in range(j):
                    if e[x] and (mask >> x) & 1:
                        below_j += 1
                weight = -1 if (below_i + below_j - 1) & 1 else 1
            else:
                weight = ki * kj
            lst = list(e)
            lst[i] = ki - 1
            lst[j] = kj - 1
            e2 = tuple(lst)
        out.append((i, j, weight, e2))
    return out


def mul_terms(t1, t2, odd_mask):
    cdef unsigned long long mask = odd_mask
    out = {}
    for e1, c1 in t1.items():
        for e2, c2 in t2.items():
            prod = _mul_exps_c(e1, e2, mask)
            if prod is None:
                continue
            e, sign = prod
            c = c1 * c2
            if sign < 0:
                c = -c
            prev = out.get(e)
            if prev is None:
                out[e] = c
            else:
                s = prev + c
                if s:
                    out[e] = s
                else:
                    del out[e]
    return out


def mu_terms(pair_terms, odd_mask):
    cdef unsigned long long mask = odd_mask
    out = {}
    for key, c in pair_terms.items():
        prod = _mul_exps_c(key[0], key[1], mask)
        if prod is None:
            continue
        e, sign = prod
        if sign < 0:
            c = -c
        prev = out.get(e)
        if prev is None:
            out[e] = c
        else:
            s = prev + c
            if s:
                out[e] = s
            else:
                del out[e]
    return out


def contract_terms(pair_terms, entries, odd_mask):
    cdef unsigned long long mask = odd_mask
    cdef int i, j, x, sa, sb, d1
    out = {}
    for key, c in pair_terms.items():
        eA = key[0]
        eB = key[1]
        d1 = len(eA)
        for entry in entries:
            i = entry[0]
            j = entry[1]
            lam = entry[2]
            ka = eA[i]
            if not ka:
                continue
            kb = eB[j]
            if not kb:
                continue
            if (mask >> i) & 1:
                sa = 0
                for x in range(i + 1, d1):
                    if eA[x] and (mask >> x) & 1:
                        sa += 1
                sb = 0
                for x in range(j):
                    if eB[x] and (mask >> x) & 1:
                        sb += 1
                contrib = c * lam
                if (sa + sb) & 1:
                    contrib = -contrib
            else:
                contrib = c * lam * (ka * kb)
            out_key = (
                eA[:i] + (ka - 1,) + eA[i + 1:],
                eB[:j] + (kb - 1,) + eB[j + 1:],
            )
            prev = out.get(out_key)
            if prev is None:
                if contrib:
                    out[out_key] = contrib
            else:
                s = prev + contrib
                if s:
                    out[out_key] = s
                else:
                    del out[out_key]
    return out


def laplace_bulk(terms, entries, odd_mask):
    cdef unsigned long long mask = odd_mask
    cdef int i, j, x, below
    out = {}
    for e, c in terms.items():
        for entry in entries:
            i = entry[0]
            j = entry[1]
            val = entry[2]
            ki = e[i]
            if not ki:
                continue
            if i == j:
                if (mask >> i) & 1 or ki < 2:
                    continue
                contrib = c * val * (ki * (ki - 1) // 2)
                e2 = e[:i] + (ki - 2,) + e[i + 1:]
            else:
                kj = e[j]
                if not kj:
                    continue
                if (mask >> i) & 1:
                    below = 0
                    for x in range(i):
                        if e[x] and (mask >> x) & 1:
                            below += 1
                    for x in range(j):
                        if e[x] and (mask >> x) & 1:
                            below += 1
                    contrib = c * val
                    if (below - 1) & 1:
                        contrib = -contrib
                else:
                    contrib = c * val * (ki * kj)
                lst = list(e)
                lst[i] = ki - 1
                lst[j] = kj - 1
                e2 = tuple(lst)
            prev = out.get(e2)
            if prev is None:
                if contrib:
                    out[e2] = contrib
            else:
                s = prev + contrib
                if s:
                    out[e2] = s
                else:
                    del out[e2]
    return out


cdef _mul_exps_c(e1, e2, unsigned long long mask):
    cdef unsigned long long m1 = 0, m2 = 0, m
    cdef int i = 0, j, swaps = 0
    for k in e1:
        if k and (mask >> i) & 1:
            m1 |= 1ULL << i
        i += 1
    i = 0
    for k in e2:
        if k and (mask >> i) & 1:
            m2 |= 1ULL << i
        i += 1
    if m1 & m2:
        return None
    m = m2
    while m:
        j = _ctz(m)
        swaps += _popcount_ull(m1 >> (j + 1))
        m &= m - 1
    out = tuple(a + b for a, b in zip(e1, e2))
    return out, (-1 if swaps & 1 else 1)


cdef inline int _popcount_ull(unsigned long long x):
    cdef int n = 0
    while x:
        x &= x - 1
        n += 1
    return n


cdef inline int _ctz(unsigned long long x):
    cdef int n = 0
    while not (x & 1):
        x >>= 1
        n += 1
    return n
