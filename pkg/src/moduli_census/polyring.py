"""The polynomial ring F_q[x]: arithmetic, predicates, symbols, families.

MonicPoly is the public carrier (monic by construction, coefficients from
degree 0 upward).  Internally most routines work on "index vectors": plain
Python lists of element indices with trailing zeros stripped, driven by a
field's dense add/mul tables.  For a prime field the index of a residue is
the residue itself, so the hot paths are pure small-int arithmetic.

The Jacobi symbol comes in two independent implementations that the test
suite plays against each other: a Euclidean reduction using the monic
reciprocity law

    (f/g) = (g/f) * (-1)^((q-1)/2 * deg f * deg g),   (c/g) = chi(c)^deg g,

and a factor-the-modulus route that reduces to Euler's criterion prime by
prime.  The reciprocity route is the one used in anger.

Family enumeration is total-ordered: coefficient vectors of monic
square-free polynomials read as base-q integers, degree-0 digit least
significant.  Sampling is rejection from all monic polynomials of the
requested degree, with draw i a pure function of (seed, i).
"""

from __future__ import annotations

import functools
import random
from dataclasses import dataclass

from . import ffield
from .errors import DomainError, PolyParseError
from .ffield import FieldHandle

_SQUAREFREE_REJECTION_SALT = 0x9E3779B97F4A7C15


class MonicPoly:
    """A monic polynomial over a FieldHandle; immutable."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: FieldHandle, coeffs):
        coeffs = tuple(coeffs)
        if not coeffs or coeffs[-1] != field.one_raw:
            raise DomainError("leading coefficient must be 1")
        self.field = field
        self.coeffs = coeffs

    @classmethod
    def from_indices(cls, field: FieldHandle, indices) -> "MonicPoly":
        return cls(field, tuple(field.raw_of_index(i) for i in indices))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def norm(self) -> int:
        return self.field.order ** self.degree

    def indices(self) -> list[int]:
        idx = self.field.index_of_raw
        return [idx(c) for c in self.coeffs]

    def code(self) -> int:
        """Coefficient vector read as a base-q integer (leading 1 dropped)."""
        q = self.field.order
        c = 0
        for i in reversed(self.indices()[:-1]):
            c = c * q + i
        return c

    def __mul__(self, other: "MonicPoly") -> "MonicPoly":
        if other.field is not self.field:
            raise DomainError("polynomials over different fields")
        K = self.field
        z = K.zero_raw
        prod = [z] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == z:
                continue
            for j, b in enumerate(other.coeffs):
                prod[i + j] = K.add_raw(prod[i + j], K.mul_raw(a, b))
        return MonicPoly(K, prod)

    def __pow__(self, e: int) -> "MonicPoly":
        result = MonicPoly(self.field, (self.field.one_raw,))
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __call__(self, a):
        """Evaluate at a raw element of the same field (Horner)."""
        K = self.field
        acc = K.zero_raw
        for c in reversed(self.coeffs):
            acc = K.add_raw(K.mul_raw(acc, a), c)
        return acc

    def __eq__(self, other):
        return (
            isinstance(other, MonicPoly)
            and other.field is self.field
            and other.coeffs == self.coeffs
        )

    def __hash__(self):
        return hash((id(self.field), self.coeffs))

    def __repr__(self):
        return f"MonicPoly({self.field!r}, {self.indices()})"


# -- text format: comma-separated coefficients, degree 0 first, leading 1 --

def parse_poly(field: FieldHandle, text: str) -> MonicPoly:
    """Parse "c0,c1,...,1" with prime-field coefficients as decimals in [0,p)."""
    parts = [s.strip() for s in text.split(",")]
    indices = []
    for i, part in enumerate(parts):
        try:
            v = int(part)
        except ValueError:
            raise PolyParseError(f"coefficient {i} is not an integer: {part!r}", i) from None
        if not 0 <= v < field.order:
            raise PolyParseError(
                f"coefficient {i} out of range [0, {field.order}): {v}", i)
        indices.append(v)
    if len(indices) < 2:
        raise PolyParseError("need at least two coefficients (degree >= 1)", 0)
    if indices[-1] != 1:
        raise PolyParseError(f"coefficient {len(indices) - 1} (leading) must be 1",
                             len(indices) - 1)
    return MonicPoly.from_indices(field, indices)


def format_poly(f: MonicPoly, sep: str = ",") -> str:
    return sep.join(str(i) for i in f.indices())


# -- index-vector helpers (trailing zeros stripped; [] is the zero poly) --

def _iv(f: MonicPoly) -> list[int]:
    return f.indices()


def _iv_trim(u: list[int]) -> list[int]:
    while u and u[-1] == 0:
        u.pop()
    return u


def _iv_mod(u: list[int], v: list[int], add, mul, neg, n: int) -> list[int]:
    """u mod v in place; v monic (last index 1)."""
    dv = len(v) - 1
    while len(u) > dv:
        c = u.pop()
        if c == 0:
            continue
        base = len(u) - dv
        cn = neg[c]
        for j in range(dv):
            vj = v[j]
            if vj:
                u[base + j] = add[u[base + j] * n + mul[cn * n + vj]]
    return _iv_trim(u)


def _iv_make_monic(u: list[int], mul, inv, n: int) -> int:
    """Scale u monic in place, returning the original leading index."""
    c = u[-1]
    if c != 1:
        ic = inv[c]
        for i, a in enumerate(u):
            if a:
                u[i] = mul[ic * n + a]
    return c


def _iv_gcd(u: list[int], v: list[int], K: FieldHandle) -> list[int]:
    add, mul, inv, _chi, neg = K.tables()
    n = K.order
    u, v = list(u), list(v)
    while v:
        _iv_make_monic(v, mul, inv, n)
        u, v = v, _iv_mod(u, v, add, mul, neg, n)
    if u:
        _iv_make_monic(u, mul, inv, n)
    return u


def _iv_deriv(u: list[int], K: FieldHandle) -> list[int]:
    add, mul, _inv, _chi, _neg = K.tables()
    n = K.order
    p = K.p
    out = []
    for i in range(1, len(u)):
        k = i % p
        ci = u[i]
        if k == 0 or ci == 0:
            out.append(0)
        else:
            out.append(mul[k * n + ci])  # constant k has element index k (< p)
    return _iv_trim(out)


def _iv_mulmod(a: list[int], b: list[int], m: list[int], K: FieldHandle) -> list[int]:
    add, mul, _inv, _chi, neg = K.tables()
    n = K.order
    prod = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        row = ai * n
        for j, bj in enumerate(b):
            if bj:
                prod[i + j] = add[prod[i + j] * n + mul[row + bj]]
    return _iv_mod(prod, m, add, mul, neg, n)


def _iv_powmod(a: list[int], e: int, m: list[int], K: FieldHandle) -> list[int]:
    add, mul, _inv, _chi, neg = K.tables()
    n = K.order
    result = [1]
    a = _iv_mod(list(a), m, add, mul, neg, n)
    while e:
        if e & 1:
            result = _iv_mulmod(result, a, m, K)
        a = _iv_mulmod(a, a, m, K)
        e >>= 1
    return result


# -- predicates ------------------------------------------------------------

def is_squarefree(f: MonicPoly) -> bool:
    """gcd(f, f') = 1; equivalent to square-freeness in odd characteristic."""
    if f.degree < 1:
        raise DomainError("degree must be >= 1")
    K = f.field
    u = _iv(f)
    d = _iv_deriv(list(u), K)
    if not d:
        return False
    return len(_iv_gcd(u, d, K)) == 1


def is_irreducible(f: MonicPoly) -> bool:
    """Rabin test: x^(q^n) = x mod f and gcd(x^(q^(n/l)) - x, f) = 1."""
    n = f.degree
    if n < 1:
        raise DomainError("degree must be >= 1")
    if n == 1:
        return True
    K = f.field
    if K.order > ffield.TABLE_LIMIT:
        return ffield.raw_poly_irreducible(K, list(f.coeffs))
    q = K.order
    m = _iv(f)
    t = _iv_powmod([0, 1], q**n, m, K)
    if _iv_sub_x(t, K):
        return False
    for ell in ffield._prime_divisors(n):
        diff = _iv_sub_x(_iv_powmod([0, 1], q ** (n // ell), m, K), K)
        if len(_iv_gcd(m, diff, K)) != 1:
            return False
    return True


def _iv_sub_x(t: list[int], K: FieldHandle) -> list[int]:
    add, _mul, _inv, _chi, neg = K.tables()
    n = K.order
    t = list(t)
    while len(t) < 2:
        t.append(0)
    t[1] = add[t[1] * n + neg[1]]
    return _iv_trim(t)


def _pth_root(u: list[int], K: FieldHandle) -> list[int] | None:
    """Exact p-th root of a monic index vector, or None."""
    p = K.p
    if (len(u) - 1) % p:
        return None
    out = []
    e = K.order // p  # Frobenius inverse exponent: a -> a^(q/p)
    for i, c in enumerate(u):
        if i % p == 0:
            out.append(K.index_of_raw(K.pow_raw(K.raw_of_index(c), e)) if c else 0)
        elif c != 0:
            return None
    return out


def _iv_divexact(u: list[int], v: list[int], K: FieldHandle) -> list[int] | None:
    """u / v for monic index vectors, or None if the division is not exact."""
    add, mul, _inv, _chi, neg = K.tables()
    n = K.order
    u = list(u)
    dv = len(v) - 1
    du = len(u) - 1
    if du < dv:
        return None
    quot = [0] * (du - dv + 1)
    for pos in range(du - dv, -1, -1):
        c = u[pos + dv]
        quot[pos] = c
        if c:
            cn = neg[c]
            for j in range(dv + 1):
                vj = v[j]
                if vj:
                    u[pos + j] = add[u[pos + j] * n + mul[cn * n + vj]]
    return quot if not _iv_trim(u) else None


def von_mangoldt(f: MonicPoly) -> int:
    """deg P if f = P^k for an irreducible P, else 0."""
    if f.degree < 1:
        raise DomainError("degree must be >= 1")
    K = f.field
    u = _iv(f)
    # peel Frobenius powers (f in F_q[x^p]) until the derivative is nonzero
    while len(u) > 2:
        if _iv_deriv(list(u), K):
            break
        root = _pth_root(u, K)
        if root is None:  # pragma: no cover - impossible for zero derivative
            return 0
        u = root
    if len(u) == 2:
        return 1  # the radical is linear and f is an exact power of it
    d = _iv_deriv(list(u), K)
    g = _iv_gcd(list(u), d, K)
    s = _iv_divexact(u, g, K)
    if s is None or len(s) < 2:
        return 0
    sp = MonicPoly.from_indices(K, s)
    if not is_irreducible(sp):
        return 0
    k, rem = divmod(f.degree, sp.degree)
    if rem:
        return 0
    return sp.degree if sp**k == f else 0


# -- Jacobi symbol -----------------------------------------------------------

def _iv_jacobi(u: list[int], v: list[int], K: FieldHandle) -> int:
    """(u/v) for a monic index vector v; u need not be reduced or monic."""
    add, mul, inv, chi, neg = K.tables()
    n = K.order
    twist = K.order % 4 == 3
    result = 1
    u = list(u)
    v = list(v)
    while True:
        dv = len(v) - 1
        if dv == 0:
            return result
        u = _iv_mod(u, v, add, mul, neg, n)
        if not u:
            return 0
        c = u[-1]
        if c != 1:
            # (c*u1/v) = chi(c)^deg(v) * (u1/v)
            if dv & 1 and chi[c] < 0:
                result = -result
            ic = inv[c]
            u = [mul[ic * n + a] if a else 0 for a in u]
        du = len(u) - 1
        if du == 0:
            return result
        if twist and (du & 1) and (dv & 1):
            result = -result
        u, v = v, u


def jacobi_symbol(f: MonicPoly, F: MonicPoly) -> int:
    """(f/F): product of quadratic-residue symbols over the factors of F.

    0 exactly when gcd(f, F) != 1.  Computed by reciprocity reduction.
    """
    if f.field is not F.field:
        raise DomainError("polynomials over different fields")
    if F.degree < 1 or not is_squarefree(F):
        raise DomainError("modulus must be monic square-free of degree >= 1")
    return _iv_jacobi(_iv(f), _iv(F), f.field)


def factor_squarefree(F: MonicPoly) -> list[MonicPoly]:
    """Factor a monic square-free polynomial by cached trial division."""
    K = F.field
    u = _iv(F)
    out = []
    e = 1
    while 2 * e <= len(u) - 1:
        for piv in _irreducible_ivs(K, e):
            if len(u) - 1 < 2 * e:
                break
            quot = _iv_divexact(u, list(piv), K)
            if quot is not None:
                out.append(MonicPoly.from_indices(K, piv))
                u = quot
        e += 1
    if len(u) - 1 >= 1:
        out.append(MonicPoly.from_indices(K, u))
    return out


def jacobi_symbol_via_factorization(f: MonicPoly, F: MonicPoly) -> int:
    """(f/F) by factoring F and applying Euler's criterion per factor.

    Independent of the reciprocity route; used as its cross-check.
    """
    if f.field is not F.field:
        raise DomainError("polynomials over different fields")
    if F.degree < 1 or not is_squarefree(F):
        raise DomainError("modulus must be monic square-free of degree >= 1")
    K = f.field
    q = K.order
    result = 1
    minus_one = K.tables()[4][1]  # neg[1]
    for P in factor_squarefree(F):
        t = _iv_powmod(_iv(f), (q**P.degree - 1) // 2, _iv(P), K)
        if not t:
            return 0
        if t == [1]:
            continue
        if t == [minus_one]:
            result = -result
        else:  # pragma: no cover
            raise AssertionError("Euler criterion produced a non-unit")
    return result


# -- counting and listing irreducibles --------------------------------------

def _moebius(n: int) -> int:
    mu = 1
    d = 2
    while d * d <= n:
        if n % d == 0:
            n //= d
            if n % d == 0:
                return 0
            mu = -mu
        d += 1
    if n > 1:
        mu = -mu
    return mu


def prime_count(q: int, n: int) -> int:
    """Number of monic irreducibles of degree n over F_q (Gauss/Moebius)."""
    if n < 1:
        raise DomainError("degree must be >= 1")
    total = 0
    d = 1
    while d <= n:
        if n % d == 0:
            total += _moebius(d) * q ** (n // d)
        d += 1
    return total // n


@functools.lru_cache(maxsize=None)
def _irreducible_ivs(K: FieldHandle, e: int) -> tuple[tuple[int, ...], ...]:
    q = K.order
    out = []
    for code in range(q**e):
        indices = []
        c = code
        for _ in range(e):
            c, rem = divmod(c, q)
            indices.append(rem)
        indices.append(1)
        if is_irreducible(MonicPoly.from_indices(K, indices)):
            out.append(tuple(indices))
    if len(out) != prime_count(q, e):  # pragma: no cover
        raise AssertionError(f"irreducible enumeration disagrees with the "
                             f"Moebius count for q={q}, n={e}")
    return tuple(out)


def irreducible_polys(K: FieldHandle, e: int) -> list[MonicPoly]:
    """All monic irreducibles of degree e over K, in code order."""
    return [MonicPoly.from_indices(K, iv) for iv in _irreducible_ivs(K, e)]


# -- the family of monic square-free polynomials ----------------------------

@dataclass(frozen=True)
class FamilySpec:
    """One family H_{gamma,q}: all monic square-free F of degree gamma.

    enumerate mode walks every member once, ordered by the coefficient
    vector read as a base-q integer; sample mode draws `count` members
    uniformly, draw i depending only on (seed, i).
    """

    field: FieldHandle
    gamma: int
    mode: str = "enumerate"
    count: int | None = None
    seed: int = 0

    def __post_init__(self):
        if self.mode not in ("enumerate", "sample"):
            raise DomainError(f"unknown family mode {self.mode!r}")
        if self.mode == "sample" and (self.count is None or self.count < 1):
            raise DomainError("sample mode needs a positive count")


def family_size(q: int, gamma: int) -> int:
    """|H_{gamma,q}| = q^gamma - q^(gamma-1) for gamma >= 2."""
    return q**gamma - q ** (gamma - 1)


def poly_from_code(K: FieldHandle, code: int, gamma: int) -> MonicPoly:
    indices = []
    for _ in range(gamma):
        code, rem = divmod(code, K.order)
        indices.append(rem)
    indices.append(1)
    return MonicPoly.from_indices(K, indices)


def _iv_squarefree(u: list[int], K: FieldHandle) -> bool:
    d = _iv_deriv(list(u), K)
    if not d:
        return False
    return len(_iv_gcd(list(u), d, K)) == 1


def sample_member(spec: FamilySpec, i: int) -> MonicPoly:
    """Draw i of the sample stream; a pure function of (seed, i)."""
    K = spec.field
    q = K.order
    rng = random.Random(((spec.seed & (2**64 - 1)) << 64) | (i & (2**64 - 1)))
    space = q**spec.gamma
    while True:
        f = poly_from_code(K, rng.randrange(space), spec.gamma)
        if _iv_squarefree(_iv(f), K):
            return f


def family(spec: FamilySpec):
    """Deterministic stream of the family members (generator)."""
    if spec.gamma < 3:
        raise DomainError("family degree must be >= 3")
    K = spec.field
    if spec.mode == "enumerate":
        for code in range(K.order**spec.gamma):
            f = poly_from_code(K, code, spec.gamma)
            if _iv_squarefree(_iv(f), K):
                yield f
    else:
        for i in range(spec.count):
            yield sample_member(spec, i)
