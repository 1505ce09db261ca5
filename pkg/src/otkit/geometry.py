"""Volumes and fundamental domains of the quotient manifolds.

Three independent volume routes: the closed form in discriminant and
regulator, the raw determinant path through Minkowski and log-embedding
matrices, and Monte-Carlo integration of the invariant density over the
fundamental cell.  Plus the torsion bound, the dimension-wise lower bound,
and the minimal-volume scan.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

import numpy as np
from mpmath import mp

from .balls import RealBall, ball_det, ball_pi, ball_solve
from .config import PrecisionError, precision, working_precision
from .embeddings import EmbeddingTable
from .orders import SubOrder, build_order, maximalize, signature
from .polynomials import IntPolynomial, integer_roots
from .unitgroup import (InsufficientUnitsError, UnitGroupData,
                        torsion_group, unit_group)


def volume_prefactor(s: int) -> Fraction:
    return Fraction(s + 1, 4 ** s * 2 ** (s * s))


def density_prefactor(s: int) -> Fraction:
    return Fraction(s + 1, 2 ** (2 * s + s * s - 1))


@dataclass
class VolumeResult:
    value: RealBall
    s: int
    disc_abs: int
    regulator: RealBall | None
    prefactor: Fraction
    method: str
    stderr: float | None = None
    meta: dict = field(default_factory=dict)

    def mid_float(self) -> float:
        return float(self.value.mid())

    def __repr__(self):
        return (f"VolumeResult({self.method}: {mp.nstr(self.value.mid(), 10)}"
                + (f" +- {self.stderr:.2e}" if self.stderr else "") + ")")


def ot_volume(s: int, disc_abs: int, regulator: RealBall) -> VolumeResult:
    """Closed-form volume (s+1)/(4^s 2^(s^2)) sqrt|disc| R."""
    if s < 1 or disc_abs <= 0:
        raise ValueError("need s >= 1 and a positive discriminant")
    if not regulator.is_positive():
        raise ValueError("regulator must be positive")
    pref = volume_prefactor(s)
    value = RealBall(Fraction(pref)) * RealBall(disc_abs).sqrt() * regulator
    return VolumeResult(value, s, disc_abs, regulator, pref, "closed_form")


def log_matrix_of_squares(table: EmbeddingTable, gens) -> list[list[RealBall]]:
    """s x s matrix of log|sigma_j| columns for the squares of the generators.

    Squares of any fundamental system are totally positive, and their log
    lattice has covolume exactly 2^s times the regulator; this is the
    normalization behind the closed-form volume.  (The squares of the
    totally positive generators span a finer quantity whenever the unit
    sign group is nontrivial, so they are not used here.)
    """
    s = table.s
    cols = []
    for g in gens:
        eps = g * g
        cols.append([abs(table.real_value(eps, j)).log() for j in range(s)])
    return [[cols[i][j] for i in range(len(cols))] for j in range(s)]


def volume_determinant_path(order: SubOrder, units: UnitGroupData,
                            table: EmbeddingTable | None = None) -> VolumeResult:
    """Volume from raw numeric matrices: no discriminant or regulator symbols.

    (1/2^s) * (s+1)/2^(2s+s^2-1) * |det Minkowski| * |det logs of squares|.
    """
    table = table or units.table
    if table.t != 1:
        raise ValueError("volume is defined for one complex place")
    s = table.s
    B = log_matrix_of_squares(table, units.generators)
    detB = abs(ball_det(B))
    detA = abs(ball_det(table.minkowski_matrix()))
    pref = Fraction(1, 2 ** s) * density_prefactor(s)
    value = RealBall(pref) * detA * detB
    return VolumeResult(value, s, abs(order.disc), units.regulator,
                        pref, "determinant_path",
                        meta={"det_minkowski": float(detA.mid()),
                              "det_log_squares": float(detB.mid())})


def metric_det_check(s: int, ys) -> dict:
    """Determinant identity of the metric matrix built from the potential.

    Builds the (s+1) x (s+1) Hermitian-metric matrix at y and compares its
    determinant with (s+1)/2^(2s+s^2-1) * prod y_j^-(s+2).
    """
    if len(ys) != s:
        raise ValueError("expected one y per real place")
    y = [RealBall(v) if not isinstance(v, RealBall) else v for v in ys]
    if any(not v.is_positive() for v in y):
        raise ValueError("y coordinates must be positive")
    phi1 = RealBall(Fraction(1, 2 ** s))
    for v in y:
        phi1 = phi1 / v
    M = [[None] * (s + 1) for _ in range(s + 1)]
    for k in range(s):
        for l in range(s):
            scale = 2 if k == l else 1
            M[k][l] = phi1 * scale / (y[k] * y[l] * 4)
    for k in range(s):
        M[k][s] = RealBall(0)
        M[s][k] = RealBall(0)
    M[s][s] = RealBall(2)
    det = ball_det(M)
    expected = RealBall(density_prefactor(s))
    for v in y:
        expected = expected / (v ** (s + 2))
    rel = abs(det - expected) / expected
    return {"det": det, "expected": expected,
            "relative_deviation": float(rel.upper)}


def torsion_upper_bound(vol, disc_abs: int) -> RealBall:
    """3(z + z^2) with z = exp(2 vol / sqrt|disc|).

    The generator is normalized with real embedding below one, which gives
    the sharper of the two admissible bounds (the one the reference tables
    use).
    """
    v = vol if isinstance(vol, RealBall) else RealBall(vol)
    if not v.is_positive():
        raise ValueError("volume must be positive")
    R = v * 4 / RealBall(disc_abs).sqrt()
    z = (R / 2).exp()
    return (z + z * z) * 3


def volume_lower_bound(s: int) -> RealBall:
    """pi (s+2)^(s+1) / (4^(s+2) 2^(s^2) s!)."""
    if s < 1:
        raise ValueError("s must be >= 1")
    import math

    num = (s + 2) ** (s + 1)
    den = 4 ** (s + 2) * 2 ** (s * s) * math.factorial(s)
    return ball_pi() * RealBall(Fraction(num, den))


def inoue_closed_form(m: int) -> VolumeResult:
    """Closed-form volume of the surface built on the equation order of
    T^3 + mT - 1 with the group generated by the polynomial root."""
    if m < 1:
        raise ValueError("m must be >= 1")
    f = IntPolynomial([-1, m, 0, 1])
    if integer_roots(f):
        raise ValueError("polynomial is reducible")
    D = 4 * m ** 3 + 27
    sqD = RealBall(D).sqrt()
    z = (RealBall(Fraction(1, 2)) + RealBall(3).sqrt() / 18 * sqD).cbrt()
    t = z - RealBall(m) / (z * 3)
    reg = abs(t.log())
    value = sqD / 4 * reg
    return VolumeResult(value, 1, D, reg, Fraction(1, 4), "inoue_closed_form",
                        meta={"m": m, "real_root": float(t.mid())})


# -- fundamental domain ---------------------------------------------------------


@dataclass
class FundamentalDomainData:
    order: SubOrder
    units: UnitGroupData
    table: EmbeddingTable
    eps: list            # generators of the squared totally positive group
    B: list              # s x s ball matrix: log columns of the squares
    L: list              # s x s ball matrix: log columns of the tp generators
    A: list              # n x n ball Minkowski matrix (basis columns)
    density: Fraction

    @property
    def s(self) -> int:
        return self.table.s


def fundamental_domain(order: SubOrder, units: UnitGroupData,
                       table: EmbeddingTable | None = None) -> FundamentalDomainData:
    """The cell of the squared-unit group action: unit part spanned by the
    generator log vectors (y scales by sigma(g^2), so r = log(y)/2 shifts by
    one generator log per group step), fibers by the Minkowski cell."""
    table = table or units.table
    if table.t != 1:
        raise ValueError("fundamental domain implemented for one complex place")
    gens = units.generators
    B = log_matrix_of_squares(table, gens)
    s = table.s
    L = [[B[j][i] / 2 for i in range(s)] for j in range(s)]
    A = table.minkowski_matrix()
    if abs(ball_det(B)).contains_zero() or abs(ball_det(A)).contains_zero():
        raise PrecisionError("degenerate domain matrices")
    eps = [g * g for g in gens]
    return FundamentalDomainData(order, units, table, eps, B, L, A,
                                 density_prefactor(table.s))


def _floor_vector(balls) -> list[int] | None:
    out = []
    for b in balls:
        v = b.floor_strict()
        if v is None:
            return None
        out.append(v)
    return out


def reduce_to_domain(point, dom: FundamentalDomainData):
    """Move a point of H^s x C into the fundamental cell.

    ``point`` is a sequence of s+1 complex numbers (the first s with positive
    imaginary part).  Returns ``(reduced_point, (translation, unit_exponents))``
    with the group element acting as z |-> sigma(eps^e) z + sigma(a).
    """
    s = dom.s
    order = dom.order
    table = dom.table
    n = order.n
    pts = [(_to_ball(z.real), _to_ball(z.imag)) for z in _as_complex_list(point, s)]
    for j in range(s):
        if not pts[j][1].is_positive():
            raise ValueError("upper-half-plane coordinates need positive imaginary part")

    bits = working_precision()
    while bits <= 1 << 14:
        try:
            with precision(bits):
                out = _reduce_once(pts, dom, s, order, table, n)
        except ArithmeticError:
            out = None
        if out is not None:
            return out
        bits *= 2
    raise PrecisionError("point reduction undecidable (cell boundary)")


def _reduce_once(pts, dom, s, order, table, n):
    r = [pts[j][1].log() / 2 for j in range(s)]
    beta = ball_solve(dom.L, r)
    ns = _floor_vector(beta)
    if ns is None:
        return None
    w = order.one()
    for g, e in zip(dom.eps, ns):
        if e:
            w = w * (g ** (-e))
    scale_r = [table.real_value(w, j) for j in range(s)]
    scale_c = table.complex_value(w, 0)
    zs = []
    for j in range(s):
        zs.append((pts[j][0] * scale_r[j], pts[j][1] * scale_r[j]))
    from .balls import ComplexBall

    zc = ComplexBall(pts[s][0], pts[s][1]) * scale_c
    # fiber coordinates: x_j (real places) and the complex coordinate
    target = [zs[j][0] for j in range(s)] + [zc.re, zc.im]
    alpha = ball_solve(dom.A, target)
    ms = _floor_vector(alpha)
    if ms is None:
        return None
    a = order.zero()
    basis_elems = [order.element([1 if i == c else 0 for i in range(n)])
                   for c in range(n)]
    for c, m_i in enumerate(ms):
        if m_i:
            a = a + basis_elems[c] * (-m_i)
    shift_r = [table.real_value(a, j) for j in range(s)]
    shift_c = table.complex_value(a, 0)
    reduced = []
    for j in range(s):
        reduced.append(complex(float(zs[j][0] + shift_r[j]), float(zs[j][1])))
    out_c = zc + shift_c
    reduced.append(complex(float(out_c.re.mid()), float(out_c.im.mid())))
    return reduced, (a, [-e for e in ns], w)


def _as_complex_list(point, s):
    pts = [complex(z) for z in point]
    if len(pts) != s + 1:
        raise ValueError("expected s+1 coordinates")
    return pts


def _to_ball(x) -> RealBall:
    return RealBall(mp.mpf(x))


def apply_group_element(point, elem, dom: FundamentalDomainData):
    """Act by (translation a, unit exponents e): z |-> sigma(eps^e) z + sigma(a)."""
    a, exps, *_ = elem
    s = dom.s
    table = dom.table
    w = dom.order.one()
    for g, e in zip(dom.eps, exps):
        if e:
            w = w * (g ** e)
    pts = _as_complex_list(point, s)
    out = []
    for j in range(s):
        sc = float(table.real_value(w, j).mid())
        sh = float(table.real_value(a, j).mid())
        out.append(pts[j] * sc + sh)
    scz = table.complex_value(w, 0)
    shz = table.complex_value(a, 0)
    zc = pts[s] * complex(float(scz.re.mid()), float(scz.im.mid())) \
        + complex(float(shz.re.mid()), float(shz.im.mid()))
    out.append(zc)
    return out


def domain_contains(point, dom: FundamentalDomainData) -> bool:
    s = dom.s
    pts = _as_complex_list(point, s)
    Bf = np.array([[float(v.mid()) for v in row] for row in dom.L])
    Af = np.array([[float(v.mid()) for v in row] for row in dom.A])
    r = np.array([0.5 * np.log(pts[j].imag) for j in range(s)])
    beta = np.linalg.solve(Bf, r)
    x = np.array([pts[j].real for j in range(s)] + [pts[s].real, pts[s].imag])
    alpha = np.linalg.solve(Af, x)
    return bool(np.all(beta >= -1e-12) and np.all(beta < 1 + 1e-12)
                and np.all(alpha >= -1e-12) and np.all(alpha < 1 + 1e-12))


# -- Monte Carlo -----------------------------------------------------------------


def mc_volume(dom: FundamentalDomainData, samples: int, seed: int) -> VolumeResult:
    """Monte-Carlo volume: rejection-sample the cell in (x, y) coordinates.

    Samples are drawn from a counter-based generator keyed by the seed, in
    fixed-size blocks, so reruns with the same (seed, samples) are bit-exact.
    The integrand is the invariant density over the cell; the quotient by the
    ambient unit group contributes an exact 1/2^s.
    """
    if samples < 1000:
        raise ValueError("Monte Carlo runs need at least 10^3 samples")
    s = dom.s
    n = dom.order.n
    Bf = np.array([[float(v.mid()) for v in row] for row in dom.L])
    Af = np.array([[float(v.mid()) for v in row] for row in dom.A])
    Binv = np.linalg.inv(Bf)
    Ainv = np.linalg.inv(Af)
    r_lo = np.minimum(Bf, 0).sum(axis=1)
    r_hi = np.maximum(Bf, 0).sum(axis=1)
    x_lo = np.minimum(Af, 0).sum(axis=1)
    x_hi = np.maximum(Af, 0).sum(axis=1)
    y_lo, y_hi = np.exp(2 * r_lo), np.exp(2 * r_hi)
    vbox = float(np.prod(x_hi - x_lo) * np.prod(y_hi - y_lo))
    dens = float(dom.density)
    gen = np.random.Generator(np.random.Philox(key=seed))
    total = 0.0
    total_sq = 0.0
    block = 1 << 16
    done = 0
    while done < samples:
        k = min(block, samples - done)
        u = gen.random((k, n + s))
        xs = x_lo + u[:, :n] * (x_hi - x_lo)
        ys = y_lo + u[:, n:] * (y_hi - y_lo)
        alpha = xs @ Ainv.T
        beta = (0.5 * np.log(ys)) @ Binv.T
        inside = (np.all((alpha >= 0) & (alpha < 1), axis=1)
                  & np.all((beta >= 0) & (beta < 1), axis=1))
        f = np.where(inside, dens / np.prod(ys, axis=1), 0.0)
        total += float(f.sum())
        total_sq += float((f * f).sum())
        done += k
    scale = vbox / 2 ** s
    mean = total / samples
    var = max(total_sq / samples - mean * mean, 0.0)
    est = scale * mean
    stderr = scale * (var / samples) ** 0.5
    value = RealBall.from_endpoints(mp.mpf(est - 3 * stderr), mp.mpf(est + 3 * stderr))
    return VolumeResult(value, s, abs(dom.order.disc), dom.units.regulator,
                        Fraction(1, 2 ** s), "monte_carlo", stderr=stderr,
                        meta={"seed": seed, "samples": samples, "estimate": est})


# -- minimal volume scan -----------------------------------------------------------


@dataclass
class ScanRecord:
    poly: IntPolynomial
    disc: int
    index: int
    regulator: RealBall
    certified: bool
    volume: RealBall
    torsion_factors: list[int]

    def csv_row(self) -> list[str]:
        return [self.poly.format(), str(self.disc), str(self.index),
                mp.nstr(self.regulator.mid(), 15), str(self.certified).lower(),
                mp.nstr(self.volume.mid(), 12),
                " ".join(map(str, self.torsion_factors)) or "1"]


SCAN_CSV_COLUMNS = ["poly", "disc", "index", "regulator", "certified",
                    "volume", "torsion_factors"]


def _scan_polynomials(degree: int, coeff_bound: int):
    rng = range(-coeff_bound, coeff_bound + 1)
    for tail in product(rng, repeat=degree):
        if tail[0] == 0:
            continue
        yield IntPolynomial(list(tail) + [1])


def min_volume_scan(s: int, coeff_bound: int, disc_bound: int,
                    certified_only: bool = False) -> list[ScanRecord]:
    """Enumerate fields with signature (s, 1), |disc| bounded, sorted by volume.

    Certified unit systems are required for ordering claims; a field whose
    units stay uncertified only poisons its own record (flagged), never the
    rest.
    """
    if s not in (1, 2, 3):
        raise ValueError("certified scans cover s in {1, 2, 3}")
    degree = s + 2
    seen: dict = {}
    for f in _scan_polynomials(degree, coeff_bound):
        if integer_roots(f):
            continue
        from .polynomials import is_irreducible

        ok, _ = is_irreducible(f)
        if not ok:
            continue
        sig = signature(f)
        if (sig.s, sig.t) != (s, 1):
            continue
        mo = build_order(f)
        order, index, order_cert = maximalize(mo)
        if abs(order.disc) > disc_bound:
            continue
        try:
            ug = unit_group(order)
        except (InsufficientUnitsError, PrecisionError):
            continue
        tp = ug.totally_positive_generators
        tors = torsion_group(order, tp)
        vol = ot_volume(s, abs(order.disc), ug.regulator)
        rec = ScanRecord(f, order.disc, index, ug.regulator,
                         order_cert and ug.certified, vol.value, tors.factors)
        key = _dedup_key(order.disc, ug.regulator, tors.factors, seen)
        if key not in seen or _poly_key(f) < _poly_key(seen[key].poly):
            seen[key] = rec
    records = sorted(seen.values(), key=lambda r: float(r.volume.mid()))
    if certified_only:
        records = [r for r in records if r.certified]
    return records


def _poly_key(f: IntPolynomial):
    return tuple(f.coeffs)


def _dedup_key(disc, reg, torsion, seen):
    """Fields merge when discriminants match, regulator intervals overlap, and
    torsion invariants agree."""
    for key, rec in seen.items():
        if key[0] != disc:
            continue
        if rec.torsion_factors != torsion:
            continue
        if rec.regulator.overlaps(reg):
            return key
    return (disc, float(reg.mid()), tuple(torsion))


def field_volumes(order: SubOrder, ug: UnitGroupData, mc_samples: int = 0,
                  seed: int = 0):
    """Closed-form and determinant-path volumes (plus MC when requested)."""
    s = ug.table.s
    closed = ot_volume(s, abs(order.disc), ug.regulator)
    det = volume_determinant_path(order, ug)
    out = {"closed_form": closed, "determinant_path": det}
    if mc_samples:
        dom = fundamental_domain(order, ug)
        out["monte_carlo"] = mc_volume(dom, mc_samples, seed)
    return out
