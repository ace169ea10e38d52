"""Exact verification of the C5 lower-bound certificate at p = 1 - 1/k.

Everything here is a rational function of ``k``: the multiplier alpha, the
target density lambda, the 3x3 matrix A, the 3x6 matrix B, M = 3/(2k^4) B^T A B,
and the 34 per-graph coefficients

    c_F = c_F^OPT + alpha * p - alpha * p(K2, F) - c_F^M.

The certificate is valid when A is positive definite for k >= 3 and every
c_F is at least 120 * lambda.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .flagalg import ROW_PAIRS, CoeffTable, cf_opt_vector, pk2_vector, product_table
from .polyk import PolyK, RatFnK, matmul, nullspace, rref, transpose
from .smallgraph import enumerate_classes, write_graph6

K = PolyK.k()
KR = RatFnK.k()
TAIL = PolyK((240, -600, 600, -300))  # 5k^4 c_F minus its k^4 term, for every F
TIGHT_M = 60


class CertificateError(RuntimeError):
    """The certificate failed to verify; the message describes the mismatch."""


class DomainError(ValueError):
    pass


def alpha_fn() -> RatFnK:
    return RatFnK(60 * K**3 - 240 * K**2 + 360 * K - 192, K**3)


def lambda_fn() -> RatFnK:
    return Fraction(1, 10) - 1 / (2 * KR) + 1 / KR**2 - 1 / KR**3 + Fraction(2, 5) / KR**4


def p_fn() -> RatFnK:
    return 1 - 1 / KR


def matrix_A() -> list[list[PolyK]]:
    a00 = 32 * K**2 - 96 * K + 96
    a02 = 4 * K**2 - 16 * K
    a11 = 10 * K**4 - 30 * K**3 - 8 * K**2 + 96 * K - 96
    a12 = -10 * K**4 + 35 * K**3 - 4 * K**2 - 80 * K + 96
    a22 = 10 * K**4 - 40 * K**3 + 24 * K**2 + 64 * K - 96
    zero = PolyK()
    return [[a00, zero, a02], [zero, a11, a12], [a02, a12, a22]]


def matrix_B() -> list[list[PolyK]]:
    c = PolyK.const
    return [
        [K - 1, c(1), K - 2, c(0), K - 3, c(-1)],
        [c(0), c(2), K - 2, c(0), 2 * K - 4, c(-2)],
        [c(0), c(0), K - 1, c(-1), 2 * K - 2, c(-2)],
    ]


@lru_cache(maxsize=None)
def _matrix_M() -> tuple[tuple[RatFnK, ...], ...]:
    b = [[RatFnK(x) for x in r] for r in matrix_B()]
    a = [[RatFnK(x) for x in r] for r in matrix_A()]
    bab = matmul(transpose(b), matmul(a, b))
    scale = RatFnK(Fraction(3, 2), K**4)
    return tuple(tuple(scale * x for x in r) for r in bab)


def matrix_M() -> list[list[RatFnK]]:
    return [list(r) for r in _matrix_M()]


def matrix_M_at(k: int) -> list[list[Fraction]]:
    return [[x(k) for x in r] for r in _matrix_M()]


def leading_minors_A() -> list[PolyK]:
    a = matrix_A()
    m1 = a[0][0]
    m2 = a[0][0] * a[1][1] - a[0][1] * a[1][0]
    m3 = (a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
          - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
          + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]))
    return [m1, m2, m3]


def _check_k(k) -> int:
    if isinstance(k, bool) or not isinstance(k, int):
        raise DomainError(f"k must be an integer, got {k!r}")
    if k < 3:
        raise DomainError(f"the certificate is stated for k >= 3, got k={k}")
    return k


def psd_check_A(mode: str = "shift-certificate", k: int | None = None, kmax: int = 1000) -> dict:
    """Positive definiteness of A via its leading principal minors.

    ``per-k`` evaluates the minors exactly at one integer k; ``shift-certificate``
    rewrites each minor in t = k - 3 and passes if every coefficient is
    nonnegative with a positive constant term (so the minor is positive for all
    real k >= 3), otherwise it is inconclusive; ``range`` runs ``per-k`` for
    every integer 3 <= k <= kmax.
    """
    minors = leading_minors_A()
    if mode == "per-k":
        k = _check_k(k)
        values = [m(k) for m in minors]
        return {"mode": mode, "k": k, "minors": [str(v) for v in values],
                "ok": all(v > 0 for v in values)}
    if mode == "shift-certificate":
        report = []
        for m in minors:
            shifted = m.shift(3)
            passed = bool(shifted.coeffs) and shifted.coeffs[0] > 0 and all(c >= 0 for c in shifted.coeffs)
            report.append({"minor": str(m), "shifted": str(shifted).replace("k", "t"),
                           "verdict": "pass" if passed else "inconclusive"})
        return {"mode": mode, "minors": report, "ok": all(r["verdict"] == "pass" for r in report)}
    if mode == "range":
        kmax = _check_k(kmax)
        for kk in range(3, kmax + 1):
            if not all(m(kk) > 0 for m in minors):
                return {"mode": mode, "kmax": kmax, "ok": False, "first_failure": kk}
        return {"mode": mode, "kmax": kmax, "ok": True, "first_failure": None}
    raise ValueError(f"unknown PSD mode {mode!r}")


def cf_m_symbolic(table: CoeffTable | None = None) -> list[RatFnK]:
    table = table or product_table()
    M = _matrix_M()
    out = []
    for col in range(len(table.classes)):
        acc = RatFnK(0)
        for r, (i, j) in enumerate(table.rows):
            v = table.values[r][col]
            if v:
                mult = 1 if i == j else 2
                acc = acc + M[i - 1][j - 1] * (mult * v)
        out.append(acc)
    return out


def cf_symbolic(table: CoeffTable | None = None) -> list[RatFnK]:
    """c_F for every 5-vertex class, in the table's column order."""
    table = table or product_table()
    alpha, p = alpha_fn(), p_fn()
    copt, pk2 = cf_opt_vector(), pk2_vector()
    cfm = cf_m_symbolic(table)
    return [copt[c] + alpha * p - alpha * pk2[c] - cfm[c] for c in range(len(cfm))]


def reference_kernel() -> list[list[RatFnK]]:
    """Reference row-reduced basis of the null space of B."""
    k = KR
    return [
        [RatFnK(1), RatFnK(0), RatFnK(0), 2 * (k - 1), k - 1, k * k - 3 * k + 2],
        [RatFnK(0), RatFnK(1), RatFnK(0), RatFnK(-2), RatFnK(0), RatFnK(1)],
        [RatFnK(0), RatFnK(0), RatFnK(1), k - 1, (k - 2) / 2, (k * k - 3 * k + 2) / 2],
    ]


def kernel_rref() -> list[list[RatFnK]]:
    b = matrix_B()
    _, pivots = rref(b)
    if len(pivots) != 3:
        raise CertificateError(f"B has rank {len(pivots)} over Q(k), expected 3")
    basis = nullspace(b)
    red, _ = rref(basis)
    return red


@dataclass
class CertReport:
    cf: list[RatFnK]
    m_values: list[int]
    tight: list[int]
    nontight: list[tuple[int, Fraction]]
    psd: dict = field(default_factory=dict)
    kernel_ok: bool = False
    min_cf_equals_120lambda: bool = False

    @property
    def ok(self) -> bool:
        return self.psd.get("ok", False) and self.kernel_ok and self.min_cf_equals_120lambda


def verify_certificate(kmax: int = 1000, psd: bool = True) -> CertReport:
    """Check every structural claim of the certificate; raise on any failure."""
    cf = cf_symbolic()
    target = 120 * lambda_fn()
    problems = []
    m_values, tight, nontight = [], [], []
    scaled_k4 = RatFnK(5 * K**4)
    for c, f in enumerate(cf):
        poly = f * scaled_k4
        if not poly.is_polynomial():
            problems.append(f"class {c}: 5k^4 c_F = {poly} is not a polynomial")
            continue
        poly = poly.as_poly()
        m = poly.coeffs[4] if len(poly.coeffs) > 4 else Fraction(0)
        if poly.degree > 4 or poly - PolyK((0, 0, 0, 0, m)) != TAIL or m.denominator != 1:
            problems.append(f"class {c}: 5k^4 c_F = {poly} is not of the form m*k^4 + ({TAIL})")
            continue
        m_values.append(int(m))
        excess = f - target
        if not excess.is_constant():
            problems.append(f"class {c}: c_F - 120*lambda = {excess} is not constant")
            continue
        e = excess.constant()
        if e < 0:
            problems.append(f"class {c}: c_F - 120*lambda = {e} < 0")
        elif e == 0:
            tight.append(c)
        else:
            nontight.append((c, e))
    if problems:
        raise CertificateError("certificate failed:\n  " + "\n  ".join(problems))
    report = CertReport(cf, m_values, tight, nontight)
    report.min_cf_equals_120lambda = min(cf_at_k_min(cf, target)) == 0 and bool(tight)
    if psd:
        shift = psd_check_A("shift-certificate")
        sweep = psd_check_A("range", kmax=kmax)
        report.psd = {"shift_certificate": shift, "range": sweep,
                      "ok": shift["ok"] or sweep["ok"],
                      "symbolic_gap": not shift["ok"]}
        if not report.psd["ok"]:
            raise CertificateError(f"A is not positive definite: {report.psd}")
    try:
        report.kernel_ok = kernel_rref() == reference_kernel()
    except CertificateError:
        report.kernel_ok = False
    if not report.kernel_ok:
        raise CertificateError("null space of B does not match the reference basis")
    return report


def cf_at_k_min(cf: list[RatFnK], target: RatFnK) -> list[Fraction]:
    """Excess constants c_F - target (each must be constant)."""
    return [(f - target).constant() for f in cf]


def lower_bound(k: int) -> Fraction:
    k = _check_k(k)
    check = psd_check_A("per-k", k=k)
    if not check["ok"]:
        raise CertificateError(f"A({k}) is not positive definite: {check['minors']}")
    return min(f(k) for f in cf_symbolic()) / 120


def nontight_export(report: CertReport | None = None) -> list[tuple[str, Fraction]]:
    report = report or verify_certificate(psd=False)
    classes = enumerate_classes(5)
    return [(write_graph6(classes[c]), e) for c, e in report.nontight]
