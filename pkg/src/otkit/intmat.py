"""Exact integer matrix algebra: products, determinants, HNF, SNF, kernels.

Matrices are plain ``list[list[int]]`` in row-major layout.  Sizes here are
tiny (at most ~12 rows), so everything uses arbitrary-precision pivoting and
no modular shortcuts.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd


def identity(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def zeros(rows: int, cols: int) -> list[list[int]]:
    return [[0] * cols for _ in range(rows)]


def copy(M) -> list[list[int]]:
    return [row[:] for row in M]


def transpose(M) -> list[list[int]]:
    return [list(col) for col in zip(*M)]


def mat_mul(A, B) -> list[list[int]]:
    n, k, m = len(A), len(B), len(B[0])
    Bt = list(zip(*B))
    return [[sum(A[i][t] * Bt[j][t] for t in range(k)) for j in range(m)] for i in range(n)]


def mat_vec(A, v) -> list[int]:
    return [sum(row[j] * v[j] for j in range(len(v))) for row in A]


def mat_add(A, B) -> list[list[int]]:
    return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_sub(A, B) -> list[list[int]]:
    return [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_eq(A, B) -> bool:
    return A == B


def mat_pow(A, e: int) -> list[list[int]]:
    if e < 0:
        raise ValueError("use an explicit inverse for negative powers")
    n = len(A)
    out = identity(n)
    base = copy(A)
    while e:
        if e & 1:
            out = mat_mul(out, base)
        e >>= 1
        if e:
            base = mat_mul(base, base)
    return out


def det_bareiss(M) -> int:
    """Exact determinant by fraction-free Gaussian elimination."""
    n = len(M)
    if n == 0:
        return 1
    A = copy(M)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k] != 0:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
            A[i][k] = 0
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def _xgcd(a: int, b: int):
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    return old_r, old_s, old_t


def hnf_with_transform(M) -> tuple[list[list[int]], list[list[int]], list[int]]:
    """Column-style Hermite normal form.

    Returns ``(H, U, pivots)`` where ``U`` is a unimodular k-by-k matrix with
    ``M @ U = [0 | H]`` (zero columns on the left), ``H`` keeps only the pivot
    columns in upper-echelon shape (pivot rows strictly increasing, pivots
    positive, entries right of a pivot reduced into ``[0, pivot)``), and
    ``pivots`` lists the pivot row of each column of ``H``.
    """
    n = len(M)
    k = len(M[0]) if n else 0
    cols = [list(c) for c in zip(*M)] if n else []
    U = identity(k)
    j = k - 1
    pivots: list[int] = []
    for i in range(n - 1, -1, -1):
        if j < 0:
            break
        # gcd-combine the active columns so only column j is nonzero in row i
        for c in range(j):
            if cols[c][i] == 0:
                continue
            a, b = cols[j][i], cols[c][i]
            g, x, y = _xgcd(a, b)
            aa, bb = a // g, b // g
            new_j = [x * cols[j][t] + y * cols[c][t] for t in range(n)]
            new_c = [aa * cols[c][t] - bb * cols[j][t] for t in range(n)]
            cols[j], cols[c] = new_j, new_c
            new_ju = [x * U[t][j] + y * U[t][c] for t in range(k)]
            new_cu = [aa * U[t][c] - bb * U[t][j] for t in range(k)]
            for t in range(k):
                U[t][j], U[t][c] = new_ju[t], new_cu[t]
        if cols[j][i] == 0:
            continue
        if cols[j][i] < 0:
            cols[j] = [-v for v in cols[j]]
            for t in range(k):
                U[t][j] = -U[t][j]
        p = cols[j][i]
        for c in range(j + 1, k):
            q = cols[c][i] // p
            if q:
                cols[c] = [cols[c][t] - q * cols[j][t] for t in range(n)]
                for t in range(k):
                    U[t][c] -= q * U[t][j]
        pivots.append(i)
        j -= 1
    pivots.reverse()
    H = [[cols[c][i] for c in range(j + 1, k)] for i in range(n)]
    return H, U, pivots


def hnf(M) -> list[list[int]]:
    """Canonical column-HNF basis of the column lattice of ``M``."""
    return hnf_with_transform(M)[0]


def hnf_is_full_rank(H) -> bool:
    return len(H) > 0 and len(H[0]) == len(H)


def lattice_det(H) -> int:
    """Index of a full-rank column-HNF lattice inside Z^n (product of pivots)."""
    if not hnf_is_full_rank(H):
        raise ValueError("lattice is not of full rank")
    return _prod(H[i][i] for i in range(len(H)))


def _prod(it):
    out = 1
    for v in it:
        out *= v
    return out


def solve_hnf(H, v) -> list[int] | None:
    """Solve ``H x = v`` over Z for a full-rank upper-triangular HNF basis.

    Returns the integer coordinate vector, or None when ``v`` is outside the
    lattice spanned by the columns of ``H``.
    """
    n = len(H)
    x = [0] * n
    r = list(v)
    for i in range(n - 1, -1, -1):
        num = r[i]
        if num % H[i][i]:
            return None
        x[i] = num // H[i][i]
        if x[i]:
            for t in range(i + 1):
                r[t] -= x[i] * H[t][i]
    return x


def hnf_contains(H, v) -> bool:
    return solve_hnf(H, v) is not None


def snf_with_transforms(M) -> tuple[list[list[int]], list[list[int]], list[list[int]]]:
    """Smith normal form ``S @ M @ T = D`` with unimodular ``S`` and ``T``."""
    m = len(M)
    n = len(M[0]) if m else 0
    A = copy(M)
    S = identity(m)
    T = identity(n)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        S[i], S[j] = S[j], S[i]

    def swap_cols(i, j):
        for r in range(m):
            A[r][i], A[r][j] = A[r][j], A[r][i]
        for r in range(n):
            T[r][i], T[r][j] = T[r][j], T[r][i]

    def addmul_row(dst, src, q):
        A[dst] = [a + q * b for a, b in zip(A[dst], A[src])]
        S[dst] = [a + q * b for a, b in zip(S[dst], S[src])]

    def addmul_col(dst, src, q):
        for r in range(m):
            A[r][dst] += q * A[r][src]
        for r in range(n):
            T[r][dst] += q * T[r][src]

    t = 0
    while True:
        # locate the nonzero entry of smallest magnitude in the trailing block
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if A[i][j] and (best is None or abs(A[i][j]) < best[0]):
                    best = (abs(A[i][j]), i, j)
        if best is None:
            break
        _, bi, bj = best
        if bi != t:
            swap_rows(t, bi)
        if bj != t:
            swap_cols(t, bj)
        dirty = False
        for i in range(t + 1, m):
            if A[i][t]:
                q = A[i][t] // A[t][t]
                addmul_row(i, t, -q)
                if A[i][t]:
                    dirty = True
        for j in range(t + 1, n):
            if A[t][j]:
                q = A[t][j] // A[t][t]
                addmul_col(j, t, -q)
                if A[t][j]:
                    dirty = True
        if dirty:
            continue
        # pivot must divide the remaining block for the invariant-factor chain
        p = A[t][t]
        offender = None
        for i in range(t + 1, m):
            for j in range(t + 1, n):
                if A[i][j] % p:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            addmul_row(t, offender, 1)
            continue
        if A[t][t] < 0:
            A[t] = [-v for v in A[t]]
            S[t] = [-v for v in S[t]]
        t += 1
        if t == m or t == n:
            break
    return S, A, T


def snf(M) -> tuple[list[int], int]:
    """Invariant factors ``d_1 | d_2 | ...`` and the free rank of the cokernel.

    The cokernel of ``M`` (an m-by-n matrix mapping Z^n -> Z^m) is isomorphic
    to ``(+) Z/d_i  (+)  Z^defect``.
    """
    m = len(M)
    _, D, _ = snf_with_transforms(M)
    factors = []
    for i in range(min(m, len(D[0]) if m else 0)):
        if D[i][i]:
            factors.append(D[i][i])
    return factors, m - len(factors)


def kernel_mod_p(M, p: int) -> list[list[int]]:
    """Basis of the right kernel of ``M`` over F_p (vectors with entries in [0, p))."""
    m = len(M)
    n = len(M[0]) if m else 0
    A = [[v % p for v in row] for row in M]
    pivots = {}
    r = 0
    for j in range(n):
        piv = None
        for i in range(r, m):
            if A[i][j] % p:
                piv = i
                break
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = pow(A[r][j], -1, p)
        A[r] = [(v * inv) % p for v in A[r]]
        for i in range(m):
            if i != r and A[i][j]:
                c = A[i][j]
                A[i] = [(a - c * b) % p for a, b in zip(A[i], A[r])]
        pivots[j] = r
        r += 1
    basis = []
    free = [j for j in range(n) if j not in pivots]
    for j in free:
        v = [0] * n
        v[j] = 1
        for pj, pr in pivots.items():
            v[pj] = (-A[pr][j]) % p
        basis.append(v)
    return basis


def solve_exact(M, b) -> list[Fraction] | None:
    """Solve ``M x = b`` over Q; None when ``M`` is singular."""
    n = len(M)
    A = [[Fraction(v) for v in row] + [Fraction(b[i])] for i, row in enumerate(M)]
    for k in range(n):
        piv = None
        for i in range(k, n):
            if A[i][k]:
                piv = i
                break
        if piv is None:
            return None
        A[k], A[piv] = A[piv], A[k]
        for i in range(n):
            if i != k and A[i][k]:
                f = A[i][k] / A[k][k]
                A[i] = [a - f * c for a, c in zip(A[i], A[k])]
    return [A[i][n] / A[i][i] for i in range(n)]


def inverse_fraction(M) -> list[list[Fraction]]:
    n = len(M)
    cols = []
    for j in range(n):
        e = [0] * n
        e[j] = 1
        x = solve_exact(M, e)
        if x is None:
            raise ValueError("matrix is singular")
        cols.append(x)
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def solve_int(M, b) -> list[int] | None:
    """Integer solution of ``M x = b`` when one exists (M square, nonsingular)."""
    x = solve_exact(M, b)
    if x is None:
        return None
    out = []
    for v in x:
        if v.denominator != 1:
            return None
        out.append(v.numerator)
    return out


def charpoly(M) -> list[int]:
    """Characteristic polynomial ``det(x I - M)``, ascending coefficients.

    Exact, by evaluating the determinant at ``n + 1`` integer points and
    interpolating over Q.
    """
    n = len(M)
    pts = list(range(n + 1))
    vals = []
    for x in pts:
        B = [[(x if i == j else 0) - M[i][j] for j in range(n)] for i in range(n)]
        vals.append(det_bareiss(B))
    coeffs = _interpolate_integer(pts, vals, n)
    return coeffs


def _interpolate_integer(xs, ys, degree) -> list[int]:
    n = degree + 1
    A = [[Fraction(x) ** j for j in range(n)] for x in xs[:n]]
    # solve Vandermonde system
    rhs = [Fraction(y) for y in ys[:n]]
    aug = [row + [rhs[i]] for i, row in enumerate(A)]
    for k in range(n):
        piv = next(i for i in range(k, n) if aug[i][k])
        aug[k], aug[piv] = aug[piv], aug[k]
        for i in range(n):
            if i != k and aug[i][k]:
                f = aug[i][k] / aug[k][k]
                aug[i] = [a - f * c for a, c in zip(aug[i], aug[k])]
    out = []
    for i in range(n):
        v = aug[i][n] / aug[i][i]
        if v.denominator != 1:
            raise ArithmeticError("interpolation of an integer polynomial went non-integral")
        out.append(v.numerator)
    return out


def minpoly_matrix(M) -> list[int]:
    """Minimal polynomial of an integer matrix, ascending integer coefficients."""
    n = len(M)
    poly = [1]  # constant 1, the minimal polynomial of nothing; lcm below
    for start in range(n):
        e = [Fraction(1 if i == start else 0) for i in range(n)]
        krylov = [e]
        v = e
        rel = None
        for _ in range(n):
            v = [sum(Fraction(M[i][j]) * v[j] for j in range(n)) for i in range(n)]
            rel = _linear_relation(krylov, v)
            if rel is not None:
                break
            krylov.append(v)
        if rel is None:
            raise ArithmeticError("no Krylov relation found")
        local = rel + [Fraction(1)]
        poly = _poly_lcm_fraction(poly, local)
        if len(poly) == n + 1:
            break
    return _fraction_poly_to_int(poly)


def _linear_relation(basis, v):
    """Coefficients c with v + sum c_i basis_i = 0, or None if independent."""
    n = len(v)
    k = len(basis)
    aug = [[basis[j][i] for j in range(k)] + [Fraction(v[i])] for i in range(n)]
    piv_cols = []
    r = 0
    for j in range(k):
        piv = None
        for i in range(r, n):
            if aug[i][j]:
                piv = i
                break
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        for i in range(n):
            if i != r and aug[i][j]:
                f = aug[i][j] / aug[r][j]
                aug[i] = [a - f * c for a, c in zip(aug[i], aug[r])]
        piv_cols.append(j)
        r += 1
    for i in range(r, n):
        if aug[i][k]:
            return None  # v independent of basis
    coeffs = [Fraction(0)] * k
    for idx, j in enumerate(piv_cols):
        coeffs[j] = aug[idx][k] / aug[idx][j]
    return [-c for c in coeffs]


def _poly_lcm_fraction(a, b):
    g = _poly_gcd_fraction(a, b)
    q, r = _poly_divmod_fraction(a, g)
    assert not any(r), "gcd must divide"
    return _poly_mul_fraction(q, b)


def _poly_mul_fraction(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return out


def _poly_divmod_fraction(a, b):
    a = [Fraction(v) for v in a]
    b = [Fraction(v) for v in b]
    while b and not b[-1]:
        b.pop()
    q = [Fraction(0)] * max(1, len(a) - len(b) + 1)
    r = a[:]
    while len(r) >= len(b) and any(r):
        while r and not r[-1]:
            r.pop()
        if len(r) < len(b):
            break
        c = r[-1] / b[-1]
        d = len(r) - len(b)
        q[d] = c
        for i, bv in enumerate(b):
            r[i + d] -= c * bv
    while r and not r[-1]:
        r.pop()
    return q, r


def _poly_gcd_fraction(a, b):
    a = [Fraction(v) for v in a]
    b = [Fraction(v) for v in b]
    while any(b):
        _, r = _poly_divmod_fraction(a, b)
        a, b = b, r
    # normalize monic
    while a and not a[-1]:
        a.pop()
    lead = a[-1]
    return [v / lead for v in a]


def _fraction_poly_to_int(p) -> list[int]:
    lead = p[-1]
    mon = [v / lead for v in p]
    out = []
    for v in mon:
        if v.denominator != 1:
            raise ArithmeticError("expected an integer minimal polynomial")
        out.append(v.numerator)
    return out


def content(v) -> int:
    g = 0
    for a in v:
        g = gcd(g, a)
    return g
