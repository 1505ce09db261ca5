"""Unit groups: search, certification, totally positive generators, J(U).

Units are found two ways: a coordinate box search (fast when fundamental
units are small) and a sweep of skewed-Minkowski LLL reductions (finds units
of any size in logarithmic steps, needed when regulators are large).  Every
numeric decision funnels through exact integer verification; floats and
intervals only steer the search.

A found independent system is certified fundamental with proven regulator
lower bounds: the quotient regulator/floor bounds the index, and prime-power
root extraction shrinks the bound to 1 or finds the missing unit.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np
from mpmath import mp

from . import intmat
from .balls import RealBall, ball_det
from .config import PrecisionError, precision, working_precision
from .embeddings import EmbeddingTable
from .intmat import hnf, kernel_mod_p, lattice_det, snf
from .orders import OrderElement, SubOrder
from .roots import EmbeddingSet, isolate_roots


class InsufficientUnitsError(RuntimeError):
    """The search did not reach full unit rank; raise the bounds."""


# Proven regulator lower bounds by number of real places (t = 1 fields),
# valid below the listed |disc| ceilings; outside them fall back to the
# universal 1/4 bound (valid except for three degree-6 fields).
FRIEDMAN_FLOORS = {
    1: Fraction(28, 100),
    2: Fraction(367, 1000),
    3: Fraction(6218, 10000),
    4: Fraction(12376, 10000),
    5: Fraction(27822, 10000),
}
FRIEDMAN_CEILINGS = {
    1: 6539,        # 18.7^3
    2: 1679616,     # 36^4
    3: 10 ** 7,
    4: 10 ** 7,
    5: 10 ** 7,
}
UNIVERSAL_FLOOR = Fraction(1, 4)


def regulator_floor(s: int, t: int, disc_abs: int, degree: int) -> Fraction | None:
    """Best applicable proven lower bound for the regulator, or None."""
    if t == 1 and s in FRIEDMAN_FLOORS and disc_abs <= FRIEDMAN_CEILINGS[s]:
        return FRIEDMAN_FLOORS[s]
    if degree != 6:
        return UNIVERSAL_FLOOR
    return None


class UnitGroupData:
    """A certified (or flagged) fundamental system with its regulator."""

    def __init__(self, order, generators, regulator, certified_index_bound,
                 totally_positive, table):
        self.order = order
        self.generators = generators
        self.regulator = regulator
        self.certified_index_bound = certified_index_bound
        self.totally_positive_generators = totally_positive
        self.torsion_sign_present = True
        self.table = table

    @property
    def certified(self) -> bool:
        return self.certified_index_bound == 1

    def to_dict(self) -> dict:
        return {
            "generators": [list(map(str, g.coords)) for g in self.generators],
            "regulator": {"mid": mp.nstr(self.regulator.mid(), 24),
                          "rad": mp.nstr(self.regulator.rad(), 6)},
            "certified_index_bound": self.certified_index_bound,
            "totally_positive_generators":
                [list(map(str, g.coords)) for g in self.totally_positive_generators],
        }


class IdealHNF:
    """An integral ideal as an HNF column lattice inside the order."""

    def __init__(self, order: SubOrder, basis, norm: int):
        self.order = order
        self.basis = basis
        self.norm = norm

    def contains(self, x: OrderElement) -> bool:
        return intmat.hnf_contains(self.basis, list(x.coords))

    def module_closed(self) -> bool:
        """O-module check: every basis-column times every order generator stays inside."""
        n = self.order.n
        for c in range(n):
            col = self.order.element([self.basis[r][c] for r in range(n)])
            for i in range(n):
                e = self.order.element([1 if j == i else 0 for j in range(n)])
                if not self.contains(col * e):
                    return False
        return True

    def __eq__(self, other):
        return isinstance(other, IdealHNF) and self.basis == other.basis

    def __repr__(self):
        return f"IdealHNF(norm={self.norm})"


class AbelianGroupInvariants:
    def __init__(self, free_rank: int, factors):
        self.free_rank = free_rank
        self.factors = [f for f in factors if f > 1]
        self.order_of_torsion = 1
        for f in self.factors:
            self.order_of_torsion *= f

    def __eq__(self, other):
        return (self.free_rank, self.factors) == (other.free_rank, other.factors)

    def __repr__(self):
        return f"AbelianGroupInvariants(free={self.free_rank}, factors={self.factors})"


# -- coordinate box search ----------------------------------------------------


def find_units(order: SubOrder, coord_bound: int,
               table: EmbeddingTable | None = None) -> list[OrderElement]:
    """All units with coordinates in [-B, B], deduplicated up to sign, sorted."""
    if coord_bound < 1:
        raise ValueError("coord_bound must be >= 1")
    if table is None:
        table = EmbeddingTable(order, isolate_roots(order.ambient.f))
    realf, cplxf = table.float_rows()
    n = order.n
    B = coord_bound
    W = 2 * B + 1
    total = W ** n
    found: set[tuple[int, ...]] = set()
    chunk = 1 << 18
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
        coords = np.empty((len(idx), n), dtype=np.int64)
        rem = idx
        for k in range(n):
            coords[:, k] = rem % W - B
            rem = rem // W
        logn = np.zeros(len(idx))
        ok = np.ones(len(idx), dtype=bool)
        for j in range(table.s):
            v = coords @ realf[j]
            av = np.abs(v)
            ok &= av > 1e-14
            logn += np.log(np.maximum(av, 1e-300))
        for j in range(table.t):
            v = coords @ cplxf[j]
            a2 = v.real * v.real + v.imag * v.imag
            ok &= a2 > 1e-28
            logn += np.log(np.maximum(a2, 1e-300))
        for i in np.nonzero(ok & (np.abs(logn) < 0.4))[0]:
            c = tuple(int(v) for v in coords[i])
            x = order.element(c)
            if abs(order.norm(x)) == 1:
                nz = next((v for v in c if v), 1)
                found.add(c if nz > 0 else tuple(-v for v in c))
    return [order.element(c) for c in sorted(found)]


# -- the unit lattice accumulator ---------------------------------------------


class _UnitLattice:
    """Independent generators with exactness-backed reduction decisions."""

    def __init__(self, order: SubOrder, table: EmbeddingTable, rank: int):
        self.order = order
        self.table = table
        self.rank = rank
        self.gens: list[OrderElement] = []
        self._logs: list[list[float]] = []

    def _logvec(self, u) -> list[float]:
        out = [float(x.mid()) for x in self.table.log_vector(u)[: self.rank]]
        if not all(np.isfinite(v) for v in out):
            # an embedding enclosure touched zero: logs are unusable
            raise PrecisionError("log vector not finite at this precision")
        return out

    def log_matrix_balls(self):
        return [self.table.log_vector(g)[: self.rank] for g in self.gens]

    def _mul_power(self, u: OrderElement, exps) -> OrderElement:
        out = u
        for g, e in zip(self.gens, exps):
            if e:
                out = out * (g ** e)
        return out

    @staticmethod
    def _lstsq(A, lam):
        try:
            c, *_ = np.linalg.lstsq(A, lam, rcond=None)
        except np.linalg.LinAlgError as exc:
            raise PrecisionError(f"least squares failed: {exc}") from exc
        if not np.all(np.isfinite(c)):
            raise PrecisionError("least squares produced non-finite coefficients")
        return c

    def insert(self, u: OrderElement, depth: int = 0) -> bool:
        if depth > 40:
            raise PrecisionError("unit lattice reduction did not settle")
        if not self.order.is_unit(u):
            raise ValueError("inserting a non-unit into the unit lattice")
        if u.is_pm_one():
            return False
        for _ in range(200):
            if not self.gens:
                break
            lam = np.array(self._logvec(u))
            A = np.array(self._logs).T
            c = self._lstsq(A, lam)
            q = np.rint(c).astype(int)
            if not q.any():
                break
            u = self._mul_power(u, [-int(t) for t in q])
            if u.is_pm_one():
                return False
        lam = np.array(self._logvec(u))
        if not self.gens:
            self.gens.append(u)
            self._logs.append(list(lam))
            return True
        A = np.array(self._logs).T
        c = self._lstsq(A, lam)
        resid = float(np.linalg.norm(lam - A @ c))
        scale = max(1.0, float(np.linalg.norm(lam)))
        if resid > 1e-6 * scale:
            if len(self.gens) >= self.rank:
                return self._absorb(u, depth)
            self.gens.append(u)
            self._logs.append(list(lam))
            return True
        # rational dependence suspected: find the denominator and verify exactly
        for d in range(2, 33):
            dc = d * c
            if np.all(np.abs(dc - np.rint(dc)) < 1e-4):
                q = [int(v) for v in np.rint(dc)]
                lhs = u ** d
                rhs = self.order.one()
                for g, e in zip(self.gens, q):
                    if e:
                        rhs = rhs * (g ** e)
                if lhs == rhs or lhs == -rhs:
                    return self._absorb(u, depth)
                break
        raise PrecisionError("ambiguous unit dependence")

    def _absorb(self, u: OrderElement, depth: int) -> bool:
        pool = self.gens + [u]
        pool.sort(key=lambda g: float(np.linalg.norm(self._logvec(g))))
        self.gens = []
        self._logs = []
        changed = False
        for g in pool:
            changed |= self.insert(g, depth + 1)
        return changed

    def element_from_exponents(self, exps) -> OrderElement:
        out = self.order.one()
        for g, e in zip(self.gens, exps):
            if e:
                out = out * (g ** e)
        return out


def regulator_of(table: EmbeddingTable, gens) -> RealBall:
    """|det| of the weighted log matrix over the first s+t-1 places."""
    r = len(gens)
    rows = [table.log_vector(g)[:r] for g in gens]
    M = [[rows[i][j] for i in range(r)] for j in range(r)]
    try:
        det = ball_det(M)
    except ArithmeticError as exc:
        raise PrecisionError(str(exc)) from exc
    reg = abs(det)
    if reg.contains_zero():
        raise PrecisionError("regulator enclosure touches zero")
    return reg


# -- skewed-LLL sweep ----------------------------------------------------------


def _ideal_key(order: SubOrder, x: OrderElement):
    return tuple(tuple(row) for row in hnf(order.mult_matrix(x)))


def _ring_vectors(r: int, radius: int):
    if radius == 0:
        yield (0,) * r
        return
    rng = range(-radius, radius + 1)
    if r == 1:
        yield (radius,)
        yield (-radius,)
        return

    def rec(prefix, touched):
        if len(prefix) == r:
            if touched:
                yield tuple(prefix)
            return
        for v in rng:
            yield from rec(prefix + [v], touched or abs(v) == radius)

    yield from rec([], False)


def _sweep_lll(order: SubOrder, table: EmbeddingTable, weights_log):
    """LLL-reduce the Minkowski lattice with per-place log-weights; returns coord rows."""
    from sympy import ZZ
    from sympy.polys.matrices import DomainMatrix

    n = order.n
    mink = table.minkowski_matrix()
    row_weight = []
    for j in range(table.s):
        row_weight.append(weights_log[j])
    for j in range(table.t):
        row_weight.append(weights_log[table.s + j])
        row_weight.append(weights_log[table.s + j])
    # enough scale bits that the most downweighted row keeps ~160 bits
    spread = max(row_weight) - min(row_weight)
    scale_bits = 320 + int(1.5 * spread)
    with mp.workprec(scale_bits + 64):
        W = [mp.exp(w) for w in row_weight]
        ent = [[mp.mpf(mink[r][c].mid()) * W[r] for c in range(n)] for r in range(n)]
        mx = max(abs(v) for row in ent for v in row)
        scl = mp.mpf(2) ** scale_bits / mx
        Z = [[int(mp.nint(v * scl)) for v in row] for row in ent]
    # rows of the LLL input are the basis element embeddings
    A = DomainMatrix([[ZZ(Z[r][c]) for r in range(n)] for c in range(n)], (n, n), ZZ)
    try:
        _, T = A.lll_transform()
    except Exception:
        return []
    Tm = T.to_Matrix().tolist()
    rows = [[int(v) for v in row] for row in Tm]
    combos = list(rows)
    for i in range(min(4, n)):
        for j in range(i + 1, min(4, n)):
            combos.append([a + b for a, b in zip(rows[i], rows[j])])
            combos.append([a - b for a, b in zip(rows[i], rows[j])])
    return combos


def sweep_units(order: SubOrder, table: EmbeddingTable, lattice: _UnitLattice,
                step: float = 1.0, max_radius: int = 220, rings_after: int = 1) -> None:
    """Walk skew directions, harvesting units as equal-ideal element quotients."""
    s, t = table.s, table.t
    r = s + t - 1
    mults = [1] * s + [2] * t
    norm_bound = int(2 ** ((order.n + 3) / 2) * (2 / 3.14159) ** t
                     * abs(order.disc) ** 0.5) + 8
    reps: dict = {}
    full_at = None
    grid_radius_cap = max_radius if r == 1 else min(max_radius, 8)
    for radius in range(0, grid_radius_cap + 1):
        for v in _ring_vectors(r, radius):
            tau = [step * x for x in v]
            last = -sum(m * x for m, x in zip(mults, tau)) / mults[-1]
            weights = tau + [last]
            for coords in _sweep_lll(order, table, weights):
                if not any(coords):
                    continue
                x = order.element(coords)
                nx = abs(order.norm(x))
                if nx == 0 or nx > norm_bound:
                    continue
                key = _ideal_key(order, x)
                rep = reps.get(key)
                if rep is None:
                    reps[key] = x
                    continue
                q = order.divide_exact(x, rep)
                if q is None or q.is_pm_one():
                    continue
                lattice.insert(q)
        if len(lattice.gens) >= r:
            if full_at is None:
                full_at = radius
            elif radius - full_at >= rings_after:
                return
    if len(lattice.gens) < r:
        raise InsufficientUnitsError(
            "insufficient units, raise coord_bound or the sweep radius")


# -- k-th root refinement -------------------------------------------------------


def _try_kth_root(order: SubOrder, table: EmbeddingTable, v: OrderElement,
                  k: int) -> OrderElement | None:
    """A unit w with w^k = +-v, reconstructed from embeddings, or None."""
    s, t = table.s, table.t
    n = order.n
    logs = table.log_vector(v)
    max_log = max(abs(float(x.mid())) for x in logs) if logs else 1.0
    bits = max(working_precision(), int(max_log / 0.693 / k) + 160)
    with precision(bits):
        emb = table.emb.refine(bits) if table.emb.precision_bits < bits else table.emb
        tb = EmbeddingTable(order, emb) if emb is not table.emb else table
        rvals = [tb.real_value(v, j) for j in range(s)]
        cvals = [tb.complex_value(v, j) for j in range(t)]
        signs = [b.sign() for b in rvals]
        if any(sg is None for sg in signs):
            raise PrecisionError("undecided embedding sign in root extraction")
        targets = [v]
        if k % 2 == 0:
            if all(sg > 0 for sg in signs):
                sign_choices = _sign_combos(s)
            elif all(sg < 0 for sg in signs):
                targets = [-v]
                rvals = [-b for b in rvals]
                sign_choices = _sign_combos(s)
            else:
                return None
        else:
            sign_choices = [tuple(signs)]
        with mp.workprec(bits):
            mink = tb.minkowski_matrix()
            M = mp.matrix([[mink[i][j].mid() for j in range(n)] for i in range(n)])
            mags = [mp.exp(mp.log(abs(b).mid()) / k) for b in rvals]
            cparams = []
            for j in range(t):
                z = cvals[j]
                rho = mp.exp(mp.log(z.abs2().mid()) / (2 * k))
                phi = mp.atan2(z.im.mid(), z.re.mid())
                cparams.append((rho, phi))
            target_v = targets[0]
            for sgn in sign_choices:
                for phase in _phase_combos(k, t):
                    rhs = [sgn[j] * mags[j] for j in range(s)]
                    for j in range(t):
                        rho, phi = cparams[j]
                        ang = phi / k + 2 * mp.pi * phase[j] / k
                        rhs.extend([rho * mp.cos(ang), rho * mp.sin(ang)])
                    try:
                        sol = mp.lu_solve(M, mp.matrix(rhs))
                    except Exception:
                        continue
                    coords = [int(mp.nint(sol[i])) for i in range(n)]
                    if not any(coords):
                        continue
                    w = order.element(coords)
                    wk = w ** k
                    if wk == target_v or wk == -target_v:
                        return w
    return None


def _sign_combos(s: int):
    out = []
    for mask in range(1 << s):
        out.append(tuple(1 if mask & (1 << j) == 0 else -1 for j in range(s)))
    return out


def _phase_combos(k: int, t: int):
    if t == 0:
        return [()]
    out = [()]
    for _ in range(t):
        out = [p + (l,) for p in out for l in range(k)]
    return out


def _primes_up_to(n: int):
    sieve = [True] * (n + 1)
    out = []
    for p in range(2, n + 1):
        if sieve[p]:
            out.append(p)
            for q in range(p * p, n + 1, p):
                sieve[q] = False
    return out


def _projective_classes(k: int, r: int):
    """Representatives of (F_k^r - 0) / F_k^*: first nonzero coordinate is 1."""
    out = []

    def rec(prefix, seen_one):
        if len(prefix) == r:
            if seen_one:
                out.append(tuple(prefix))
            return
        if not seen_one:
            rec(prefix + [0], False)
            rec(prefix + [1], True)
        else:
            for v in range(k):
                rec(prefix + [v], True)

    rec([], False)
    return out


# -- certification ---------------------------------------------------------------


def units_from_generators(order: SubOrder, gens,
                          table: EmbeddingTable | None = None) -> UnitGroupData:
    """Wrap a user-supplied multiplicatively independent system, uncertified.

    No reduction, no refinement: the group is exactly the one generated.
    Serves covering-manifold computations and high-rank fields where
    certification is out of reach (certified_index_bound = 0).
    """
    if table is None:
        table = EmbeddingTable(order, isolate_roots(order.ambient.f))
    for g in gens:
        if not order.is_unit(g):
            raise ValueError("supplied generator is not a unit")
    if len(gens) != table.s + table.t - 1:
        raise InsufficientUnitsError("supplied system does not have full rank")
    reg = regulator_of(table, list(gens))
    tp = totally_positive_generators(order, table, list(gens))
    return UnitGroupData(order, list(gens), reg, 0, tp, table)


def certify_units(order: SubOrder, candidates, friedman_floor: Fraction | None = None,
                  table: EmbeddingTable | None = None) -> UnitGroupData:
    """Reduce candidates to an independent system and certify it fundamental.

    ``certified_index_bound`` is 1 for a certified fundamental system, k > 1
    when the system may still have index up to k (root refinement exhausted),
    and 0 when no proven floor applies (rank >= 4, best effort).
    """
    if table is None:
        table = EmbeddingTable(order, isolate_roots(order.ambient.f))
    s, t = table.s, table.t
    r = s + t - 1
    lattice = _UnitLattice(order, table, r)
    cands = sorted(candidates,
                   key=lambda u: float(np.linalg.norm(
                       [float(x.mid()) for x in table.log_vector(u)[:r]])))
    for u in cands:
        if not order.is_unit(u):
            raise ValueError("candidate is not a unit")
        lattice.insert(u)
    if len(lattice.gens) < r:
        raise InsufficientUnitsError("insufficient units, raise coord_bound")
    return _certify_lattice(order, table, lattice, friedman_floor)


def _certify_lattice(order, table, lattice, friedman_floor=None) -> UnitGroupData:
    s, t = table.s, table.t
    r = s + t - 1
    reg = regulator_of(table, lattice.gens)
    floor = friedman_floor
    if floor is None:
        floor = regulator_floor(s, t, abs(order.disc), order.n)
    if r >= 4 or floor is None:
        bound = 0
    else:
        bound = int(mp.floor(reg.upper / mp.mpf(floor.numerator) * floor.denominator))
        # with several complex places each root test costs k^t phase combos;
        # cap the explored primes there and keep the honest residual bound
        max_k = 3 if t > 1 else bound
        while bound > 1:
            improved = False
            for k in _primes_up_to(min(bound, max_k)):
                for cls in _projective_classes(k, r):
                    v = lattice.element_from_exponents(cls)
                    w = _try_kth_root(order, table, v, k)
                    if w is not None and lattice.insert(w):
                        reg = regulator_of(table, lattice.gens)
                        bound = int(mp.floor(reg.upper / mp.mpf(floor.numerator)
                                             * floor.denominator))
                        improved = True
                        break
                if improved:
                    break
            if not improved:
                if t > 1 and bound > max_k:
                    break  # roots beyond max_k unexplored: keep the honest bound
                bound = 1  # no prime index can survive the exhaustive root search
    tp = totally_positive_generators(order, table, lattice.gens)
    return UnitGroupData(order, list(lattice.gens), reg, bound, tp, table)


# -- totally positive subgroup -----------------------------------------------------


def _solve_mod2(A, b):
    """One solution of A x = b over F_2, or None."""
    m = len(A)
    n = len(A[0]) if m else 0
    M = [row[:] + [b[i]] for i, row in enumerate(A)]
    piv = []
    row = 0
    for col in range(n):
        sel = next((i for i in range(row, m) if M[i][col] & 1), None)
        if sel is None:
            continue
        M[row], M[sel] = M[sel], M[row]
        for i in range(m):
            if i != row and M[i][col] & 1:
                M[i] = [(a ^ c) for a, c in zip(M[i], M[row])]
        piv.append(col)
        row += 1
    for i in range(row, m):
        if M[i][n] & 1:
            return None
    x = [0] * n
    for i, col in enumerate(piv):
        x[col] = M[i][n] & 1
    return x


def totally_positive_generators(order: SubOrder, table: EmbeddingTable,
                                gens) -> list[OrderElement]:
    """Generators of the totally positive subgroup of <+-1, gens>.

    Computed as the kernel of the sign map over F_2; each returned element is
    verified positive at every real place.
    """
    s = table.s
    r = len(gens)
    sign_cols = []
    for g in gens:
        sv = table.sign_vector(g)
        if sv is None:
            raise PrecisionError("undecided unit sign")
        sign_cols.append(sv)
    if s == 0:
        return list(gens)
    A = [[sign_cols[j][i] for j in range(r)] for i in range(s)]
    ones = [1] * s
    kernel = kernel_mod_p(A, 2)
    part = _solve_mod2(A, ones)
    cols = [[2 if i == j else 0 for j in range(r)] for i in range(r)]
    for v in kernel:
        for i in range(r):
            cols[i].append(v[i] & 1)
    if part is not None:
        for i in range(r):
            cols[i].append(part[i] & 1)
    H = hnf(cols)
    out = []
    for c in range(r):
        exps = [H[i][c] for i in range(r)]
        u = order.one()
        for g, e in zip(gens, exps):
            if e:
                u = u * (g ** e)
        sv = table.sign_vector(u)
        if sv is None:
            raise PrecisionError("undecided sign for totally positive generator")
        if all(b == 1 for b in sv):
            u = -u
            sv = [0] * s
        if any(sv):
            raise ArithmeticError("sign-kernel element is not totally positive")
        out.append(u)
    return out


# -- the ideal J(U) ------------------------------------------------------------------


def _stacked_one_minus(order: SubOrder, gens):
    n = order.n
    stacked = [[] for _ in range(n)]
    for g in gens:
        if not order.is_unit(g):
            raise ValueError("J(U) generators must be units")
        M = order.mult_matrix(g)
        for i in range(n):
            for j in range(n):
                stacked[i].append((1 if i == j else 0) - M[i][j])
    return stacked


def j_ideal(order: SubOrder, gens) -> IdealHNF:
    """HNF of the ideal generated by 1-g over the given units g."""
    if not gens:
        raise ValueError("J(U) needs a nontrivial unit subgroup")
    H = hnf(_stacked_one_minus(order, gens))
    if not intmat.hnf_is_full_rank(H):
        raise ValueError("unit subgroup is trivial: J(U) would be the zero ideal")
    return IdealHNF(order, H, lattice_det(H))


def torsion_group(order: SubOrder, gens) -> AbelianGroupInvariants:
    """Invariant factors of O/J(U) (the torsion part of first homology)."""
    if not gens:
        raise ValueError("J(U) needs a nontrivial unit subgroup")
    factors, defect = snf(_stacked_one_minus(order, gens))
    if defect:
        raise ValueError("unit subgroup is trivial: quotient has free rank")
    return AbelianGroupInvariants(0, factors)


# -- orchestration --------------------------------------------------------------------


def default_coord_bound(n: int) -> int:
    if n <= 3:
        return 12
    if n <= 5:
        return 6
    return 2


def unit_group(order: SubOrder, emb: EmbeddingSet | None = None,
               coord_bound: int | None = None,
               friedman_floor: Fraction | None = None,
               max_bits: int = 8192) -> UnitGroupData:
    """Find, reduce, and certify the unit group of an order.

    Box-search first; if the rank is short, sweep skewed LLL reductions.
    Precision escalates automatically whenever a decision was ambiguous.
    """
    f = order.ambient.f
    bits = working_precision()
    if coord_bound is None:
        coord_bound = default_coord_bound(order.n)
    base_emb = emb
    while bits <= max_bits:
        try:
            with precision(bits):
                emb_l = (base_emb or isolate_roots(f, bits)).refine(bits)
                table = EmbeddingTable(order, emb_l)
                r = table.s + table.t - 1
                lattice = _UnitLattice(order, table, r)
                for u in find_units(order, coord_bound, table):
                    lattice.insert(u)
                if len(lattice.gens) < r:
                    sweep_units(order, table, lattice)
                return _certify_lattice(order, table, lattice, friedman_floor)
        except PrecisionError:
            bits *= 2
    raise PrecisionError(f"unit group undecidable below {max_bits} bits")
