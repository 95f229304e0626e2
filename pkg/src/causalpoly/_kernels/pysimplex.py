"""Pure-Python twin of ``_simplex.phase1`` on unbounded integers."""

FEASIBLE, INFEASIBLE, PIVOT_LIMIT, OVERFLOW = 0, 1, 2, 3


def phase1(A, b, max_pivots=100000):
    A = [[int(v) for v in row] for row in A]
    b = [int(v) for v in b]
    r = len(A)
    m = len(A[0]) if r else 0
    W = m + r + 1
    T = []
    Z = [0] * W
    for i in range(r):
        row = A[i] + [1 if i == j else 0 for j in range(r)] + [b[i]]
        T.append(row)
        for j in range(m):
            Z[j] -= row[j]
        Z[W - 1] -= b[i]
    T.append(Z)
    basis = [m + i for i in range(r)]
    det = 1
    for _ in range(max_pivots):
        Z = T[r]
        pc = next((j for j in range(m + r) if Z[j] < 0), -1)
        if pc < 0:
            return ((FEASIBLE if Z[W - 1] == 0 else INFEASIBLE), basis, [T[i][W - 1] for i in range(r)],
                    [Z[m + i] for i in range(r)], det)
        pr, bn, bd = -1, 0, 1
        for i in range(r):
            den = T[i][pc]
            if den <= 0:
                continue
            num = T[i][W - 1]
            if pr < 0 or num * bd < bn * den or (num * bd == bn * den and basis[i] < basis[pr]):
                pr, bn, bd = i, num, den
        if pr < 0:
            raise ArithmeticError("phase-I objective unbounded")
        piv = T[pr][pc]
        prow = T[pr]
        for i in range(r + 1):
            if i == pr:
                continue
            row = T[i]
            f = row[pc]
            if f == 0:
                T[i] = [piv * v // det for v in row]
            else:
                T[i] = [(piv * v - f * p) // det for v, p in zip(row, prow)]
        det = piv
        basis[pr] = pc
    return PIVOT_LIMIT, basis, [T[i][W - 1] for i in range(r)], [T[r][m + i] for i in range(r)], det
