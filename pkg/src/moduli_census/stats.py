"""Arithmetic statistics over the families H_{gamma,q}.

Per curve: the truncated Lambda-weighted character sums, the random
variables R^(k) built from them, and the centered log-count residuals of
the moduli formulas.  In the limit: the moments H^(k)(n) as sums over
tuples of distinct monic irreducibles, the limiting covariance, and the
characteristic functions, all aggregated by prime degree through pi_q.

Symbol convention.  The Dirichlet character attached to y^2 = F(x) takes
the value (F/f) at f, and only that orientation satisfies the exact trace
identity sum_{deg f = m} Lambda(f) (F/f) = -p_m - delta against the point
counts when q = 3 (mod 4) (the two orientations differ by the reciprocity
sign (-1)^(deg f * deg F)).  The default is therefore "F_over_f"; the
mirrored "f_over_F" variant stays available for sensitivity analysis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .curvezeta import CurveZeta
from .errors import DomainError
from .ffield import extend_field
from .moduli import (
    count_higgs,
    count_ms20,
    count_ntilde,
    count_stable_fixed_det,
    family_constant,
)
from .polyring import MonicPoly, _irreducible_ivs, _iv, _iv_jacobi, is_squarefree, prime_count

CONVENTIONS = ("F_over_f", "f_over_F")


def default_cutoff(gamma: int) -> int:
    """The truncation depth Z = floor(gamma / 3)."""
    return gamma // 3


def character_sum(F: MonicPoly, m: int, convention: str = "F_over_f") -> int:
    """sum over monic f of degree m of Lambda(f) * symbol(f).

    Only prime powers f = P^j contribute, so the sum runs over the cached
    irreducibles of each degree e | m with weight e * symbol(P)^(m/e).
    """
    if m < 1:
        raise DomainError("need m >= 1")
    if convention not in CONVENTIONS:
        raise DomainError(f"unknown symbol convention {convention!r}")
    if not is_squarefree(F):
        raise DomainError("F must be square-free")
    K = F.field
    F_iv = _iv(F)
    total = 0
    for e in range(1, m + 1):
        if m % e:
            continue
        j = m // e
        sub = 0
        for piv in _irreducible_ivs(K, e):
            if convention == "F_over_f":
                s = _iv_jacobi(F_iv, list(piv), K)
            else:
                s = _iv_jacobi(list(piv), F_iv, K)
            sub += s if j % 2 else abs(s)
        total += e * sub
    return total


def _charsums(F: MonicPoly, Z: int, convention: str) -> list[int]:
    return [character_sum(F, m, convention) for m in range(1, Z + 1)]


def r_variable(F: MonicPoly, k: int, Z: int, convention: str = "F_over_f",
               charsums: list[int] | None = None) -> float:
    """R^(k) = sum_{m<=Z} q^(-(k+1)m) m^-1 * character_sum(F, m)."""
    if k < 0:
        raise DomainError("need k >= 0")
    if Z < 1:
        raise DomainError("need Z >= 1")
    q = F.field.order
    if charsums is None:
        charsums = _charsums(F, Z, convention)
    return math.fsum(charsums[m - 1] / (m * q ** ((k + 1) * m))
                     for m in range(1, Z + 1))


def _log_frac(x: Fraction) -> float:
    if x <= 0:
        return math.nan
    return math.log(x.numerator) - math.log(x.denominator)


def decomposition_residual(z: CurveZeta, variant: str, Z: int | None = None,
                           convention: str = "F_over_f",
                           rank: int = 2, degree: int = 1,
                           charsums: list[int] | None = None) -> float:
    """Centered log-count residual for one decomposition variant.

    m_rd:   log N(M(r,d))      - (r^2-1)(g-1) log q - C_q(r) - sum_{k<r} R^(k)
    ms20:   log N(M^s(2,0))    - 3(g-1) log q - C_q(2) - R^(1)
    ntilde: log N(Ntilde(4,0)) - (4g-4) log q + delta log(1-1/q^2) - R^(0) over F_{q^2}
    higgs:  log N(Higgs_2)     - (8g-6) log q - C_q^Higgs - R^(0) - R^(1)
    """
    curve = z.curve
    q = z.q
    g = z.genus
    gamma = curve.gamma
    if Z is None:
        Z = default_cutoff(gamma)
    if charsums is None and variant != "ntilde":
        charsums = _charsums(curve.F, Z, convention)
    lq = math.log(q)
    if variant == "m_rd":
        value = count_stable_fixed_det(z, rank, degree).value
        rsum = math.fsum(r_variable(curve.F, k, Z, convention, charsums)
                         for k in range(1, rank))
        return (_log_frac(value) - (rank * rank - 1) * (g - 1) * lq
                - family_constant(q, gamma, "base", rank) - rsum)
    if variant == "ms20":
        value = count_ms20(z).value
        return (_log_frac(value) - 3 * (g - 1) * lq
                - family_constant(q, gamma, "thm15")
                - r_variable(curve.F, 1, Z, convention, charsums))
    if variant == "ntilde":
        value = count_ntilde(z).value
        E = extend_field(curve.field, 2)
        F_ext = MonicPoly(E, tuple(E.embed_raw(c) for c in curve.F.coeffs))
        r0_ext = r_variable(F_ext, 0, Z, convention)
        return (_log_frac(value) - (4 * g - 4) * lq
                + family_constant(q, gamma, "thm16") - r0_ext)
    if variant == "higgs":
        value = count_higgs(z).value
        rsum = math.fsum(r_variable(curve.F, k, Z, convention, charsums)
                         for k in (0, 1))
        return (_log_frac(value) - (8 * g - 6) * lq
                - family_constant(q, gamma, "higgs") - rsum)
    raise DomainError(f"unknown residual variant {variant!r}")


def residual_envelope(q: int, g: int, C: float = 10.0, c: float = 0.5) -> float:
    """Configured decay envelope C * q^(-c g) for residual magnitude checks."""
    return C * q ** (-c * g)


# -- per-curve records and their aggregation --------------------------------

@dataclass
class FamilyRecord:
    """Everything the sweeps keep per curve."""

    q: int
    gamma: int
    F_text: str
    genus: int
    N: tuple[int, ...]
    jacobian: int
    Z: int
    R: dict[int, float]
    delta_Z: float
    residuals: dict[str, float] = dc_field(default_factory=dict)
    flags: dict[str, bool] = dc_field(default_factory=dict)


@dataclass
class SweepReport:
    """Aggregated empirical statistics with their theoretical counterparts."""

    family: dict
    count: int
    moments: dict            # k -> {n -> float}
    covariance: dict         # "i,j" -> float
    gaussian: dict           # k -> diagnostics of q^((2k+1)/2) R^(k)
    theoretical_moments: dict = dc_field(default_factory=dict)
    theoretical_covariance: dict = dc_field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "family": self.family,
            "count": self.count,
            "moments": {str(k): {str(n): v for n, v in mv.items()}
                        for k, mv in self.moments.items()},
            "covariance": dict(self.covariance),
            "gaussian": {str(k): dict(v) for k, v in self.gaussian.items()},
            "theoretical_moments": self.theoretical_moments,
            "theoretical_covariance": self.theoretical_covariance,
        }


def _normal_cdf(x: float) -> float:
    return 0.5 * (1.0 + math.erf(x / math.sqrt(2.0)))


def gaussian_diagnostics(values: list[float]) -> dict:
    """Mean/variance/skewness/excess kurtosis and the KS distance to the
    normal fitted by moments."""
    n = len(values)
    mean = math.fsum(values) / n
    m2 = math.fsum((v - mean) ** 2 for v in values) / n
    if m2 == 0.0:
        return {"mean": mean, "variance": 0.0, "skewness": math.nan,
                "excess_kurtosis": math.nan, "ks_stat": math.nan}
    m3 = math.fsum((v - mean) ** 3 for v in values) / n
    m4 = math.fsum((v - mean) ** 4 for v in values) / n
    sd = math.sqrt(m2)
    ks = 0.0
    for i, v in enumerate(sorted(values)):
        cdf = _normal_cdf((v - mean) / sd)
        ks = max(ks, abs((i + 1) / n - cdf), abs(i / n - cdf))
    return {
        "mean": mean,
        "variance": m2,
        "skewness": m3 / sd**3,
        "excess_kurtosis": m4 / m2**2 - 3.0,
        "ks_stat": ks,
    }


def empirical_stats(records: list[FamilyRecord], max_n: int = 4) -> SweepReport:
    """Moments, covariances and Gaussian diagnostics of the R^(k) columns.

    Aggregation is a single fsum over the records in their given order, so
    the result does not depend on how the records were produced.
    """
    if not records:
        raise DomainError("empty record set")
    ks = sorted(records[0].R.keys())
    n = len(records)
    q = records[0].q
    moments = {}
    for k in ks:
        col = [rec.R[k] for rec in records]
        moments[k] = {m: math.fsum(v**m for v in col) / n for m in range(1, max_n + 1)}
    covariance = {}
    for i in ks:
        for j in ks:
            if j < i:
                continue
            cij = (math.fsum(rec.R[i] * rec.R[j] for rec in records) / n
                   - moments[i][1] * moments[j][1])
            covariance[f"{i},{j}"] = cij
    gaussian = {}
    for k in ks:
        scale = q ** ((2 * k + 1) / 2.0)
        gaussian[k] = gaussian_diagnostics([scale * rec.R[k] for rec in records])
    family = {"q": q, "gamma": records[0].gamma, "count": n}
    return SweepReport(family=family, count=n, moments=moments,
                       covariance=covariance, gaussian=gaussian)


# -- limiting moments, covariance, characteristic functions -----------------

def _compositions(n: int, s: int):
    """Ordered tuples of s positive integers summing to n."""
    if s == 1:
        yield (n,)
        return
    for first in range(1, n - s + 2):
        for rest in _compositions(n - first, s - 1):
            yield (first,) + rest


def _set_partitions(items: tuple):
    """All partitions of `items` into nonempty blocks."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [part[i] + (first,)] + part[i + 1:]
        yield part + [(first,)]


def theoretical_moment(q: int, k: int, n: int, D: int) -> tuple[float, float]:
    """Limiting n-th moment H^(k)(n), primes truncated at degree D.

    Returns (value, tail_bound).  Distinct-tuple sums are aggregated by
    prime degree: within a block of indices forced to share one prime the
    degree sum is weighted by pi_q(e), and distinctness across blocks is
    unwound by the Moebius weights over set partitions.  The tail bound
    uses |w_1| <= 2 x^2 and |w_lam| <= 2 (2x)^lam / lam! with
    x = |P|^-(k+1).
    """
    if not 1 <= n <= 6:
        raise DomainError("moment order limited to 1 <= n <= 6")
    if D < 1 or k < 0:
        raise DomainError("need D >= 1 and k >= 0")
    kk = k + 1
    pis = [0] + [prime_count(q, e) for e in range(1, D + 1)]
    u = [0.0] + [-math.log1p(-q ** (-kk * e)) for e in range(1, D + 1)]
    v = [0.0] + [math.log1p(q ** (-kk * e)) for e in range(1, D + 1)]
    wfac = [0.0] + [1.0 / (1.0 + q ** (-e)) for e in range(1, D + 1)]
    fact = [math.factorial(i) for i in range(n + 1)]

    def w(lam: int, e: int) -> float:
        return (u[e] ** lam + (-1) ** lam * v[e] ** lam) * wfac[e] / fact[lam]

    def w_bound_coeff(lam: int) -> tuple[float, int]:
        # |w_lam(e)| <= coeff * x^expo with x = q^(-(k+1)e)
        if lam == 1:
            return 2.0, 2
        return 2.0 * 2**lam / fact[lam], lam

    def block_sum(lams_in_block: tuple[int, ...]) -> float:
        return math.fsum(
            pis[e] * math.prod(w(lam, e) for lam in lams_in_block)
            for e in range(1, D + 1))

    def block_bounds(lams_in_block: tuple[int, ...]) -> tuple[float, float]:
        # (bound of the full series, bound of the tail beyond D)
        coeff = 1.0
        expo = 0
        for lam in lams_in_block:
            c, x = w_bound_coeff(lam)
            coeff *= c
            expo += x
        y = q ** (1 - kk * expo)  # pi_q(e) <= q^e
        if y >= 1.0:  # pragma: no cover - expo >= 2 keeps y <= 1/q
            return math.inf, math.inf
        full = coeff * y / (1.0 - y)
        tail = coeff * y ** (D + 1) / (1.0 - y)
        return full, tail

    total = 0.0
    tail_total = 0.0
    for s in range(1, n + 1):
        coeff = fact[n] / (2**s * fact[s])
        for comp in _compositions(n, s):
            for part in _set_partitions(tuple(range(s))):
                weight = math.prod((-1) ** (len(B) - 1) * fact[len(B) - 1]
                                   for B in part)
                blocks = [tuple(comp[i] for i in B) for B in part]
                total += coeff * weight * math.prod(block_sum(b) for b in blocks)
                bounds = [block_bounds(b) for b in blocks]
                for t_idx in range(len(blocks)):
                    tail_piece = bounds[t_idx][1]
                    for o_idx, (full, _) in enumerate(bounds):
                        if o_idx != t_idx:
                            tail_piece *= full
                    tail_total += coeff * abs(weight) * tail_piece
    return total, tail_total


def limit_covariance(q: int, i: int, j: int, D: int) -> tuple[float, float]:
    """Limiting covariance of R^(i), R^(j) for i != j, truncated at D.

    sum over P of tau_i tau_j / (1 + |P|^-1) + eta_i eta_j / (|P| (1+|P|^-1)^2).
    """
    if i == j:
        raise DomainError("equal indices are served by the moments")
    if min(i, j) < 1 or D < 1:
        raise DomainError("need i, j >= 1 and D >= 1")
    total = 0.0
    for e in range(1, D + 1):
        pe = prime_count(q, e)
        xi = q ** (-(i + 1) * e)
        xj = q ** (-(j + 1) * e)
        eta_i = -0.5 * math.log1p(-xi * xi)
        eta_j = -0.5 * math.log1p(-xj * xj)
        tau_i = -math.log1p(-xi) - eta_i
        tau_j = -math.log1p(-xj) - eta_j
        term = (tau_i * tau_j / (1.0 + q ** (-e))
                + eta_i * eta_j / (q**e * (1.0 + q ** (-e)) ** 2))
        total += pe * term
    # tails: tau_k <= 2 x_k, eta_k <= x_k^2, pi_q(e) <= q^e
    y1 = q ** (-(i + j + 1))
    y2 = q ** (-(2 * i + 2 * j + 5))
    tail = 4.0 * y1 ** (D + 1) / (1.0 - y1) + y2 ** (D + 1) / (1.0 - y2)
    return total, tail


def characteristic_function(q: int, k: int, t: float, D: int,
                            n_max: int = 40) -> complex:
    """phi(t) of the limiting variable: distinct-prime expansion.

    `q` is the order of the coefficient field of the primes (pass q^2 for
    the desingularization variant, whose primes live over F_{q^2}).
    """
    if D < 1:
        raise DomainError("need D >= 1")
    if abs(t) > 50:
        raise DomainError("|t| <= 50")
    if t == 0.0:
        return complex(1.0, 0.0)
    kk = k + 1
    weights = []
    counts = []
    for e in range(1, D + 1):
        x = q ** (-kk * e)
        w = ((1.0 - x) ** complex(0, -t) + (1.0 + x) ** complex(0, -t) - 2.0) \
            / (1.0 + q ** (-e))
        weights.append(w)
        counts.append(prime_count(q, e))
    # elementary symmetric functions of the weight multiset via Newton
    pw = [complex(0)] * (n_max + 1)
    for jj in range(1, n_max + 1):
        pw[jj] = sum(c * w**jj for c, w in zip(counts, weights))
    es = [complex(1)] + [complex(0)] * n_max
    phi = complex(1.0, 0.0)
    for s in range(1, n_max + 1):
        acc = complex(0)
        for jj in range(1, s + 1):
            acc += (-1) ** (jj - 1) * es[s - jj] * pw[jj]
        es[s] = acc / s
        term = es[s] / 2**s
        phi += term
        if abs(term) < 1e-17:
            break
    return phi
