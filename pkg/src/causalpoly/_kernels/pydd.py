"""Pure-Python twin of ``_dd.dd_core``: exact integers, exact Bareiss rank."""
import time
from math import gcd

OK, RAY_BUDGET, TIME_BUDGET, OVERFLOW = 0, 1, 2, 3


def exact_rank(rows, target=None):
    """Rank of an integer matrix by fraction-free elimination (capped at target)."""
    M = [list(map(int, r)) for r in rows]
    if not M:
        return 0
    d = len(M[0])
    cap = min(len(M), d) if target is None else target
    r, prev = 0, 1
    for col in range(d):
        piv = next((i for i in range(r, len(M)) if M[i][col]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        p = M[r][col]
        for i in range(r + 1, len(M)):
            f = M[i][col]
            M[i] = [(p * M[i][j] - f * M[r][j]) // prev for j in range(d)]
        prev = p
        r += 1
        if r >= cap:
            break
    return r


def dd_core(A, init_rays, max_rays=0, time_limit=0.0, progress=None):
    A = [[int(v) for v in row] for row in A]
    m, d = len(A), len(A[0])
    rays = [[int(v) for v in r] for r in init_rays]
    zs = [sum(1 << i for i in range(d) if i != j) for j in range(d)]
    start = time.monotonic()
    peak = len(rays)
    k = d
    status = OK
    while k < m:
        row = A[k]
        s = [sum(a * b for a, b in zip(row, r)) for r in rays]
        pos = [i for i, v in enumerate(s) if v > 0]
        neg = [i for i, v in enumerate(s) if v < 0]
        bit = 1 << k
        new_rays, new_zs = [], []
        for i, v in enumerate(s):
            if v >= 0:
                new_rays.append(rays[i])
                new_zs.append(zs[i] | bit if v == 0 else zs[i])
        for a in pos:
            for b in neg:
                c = zs[a] & zs[b]
                if bin(c).count("1") < d - 2:
                    continue
                tight = [A[i] for i in range(k) if (c >> i) & 1]
                if exact_rank(tight, d - 2) < d - 2:
                    continue
                r = [s[a] * y - s[b] * x for x, y in zip(rays[a], rays[b])]
                g = 0
                for v in r:
                    g = gcd(g, v)
                new_rays.append([v // g for v in r])
                new_zs.append(c | bit)
        rays, zs = new_rays, new_zs
        k += 1
        peak = max(peak, len(rays))
        if progress is not None:
            progress(k, m, len(rays))
        if max_rays and len(rays) > max_rays:
            status = RAY_BUDGET
            break
        if time_limit > 0 and time.monotonic() - start > time_limit:
            status = TIME_BUDGET
            break
    return rays, status, k, peak

