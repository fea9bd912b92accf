"""Rational-function model of the negative half: kernels, symmetrization, star product.

A ``RationalFn`` in z1..zn keeps its denominator factored into linear forms
``z_i - c z_j`` (i < j, c a monomial in q1, q2) so that poles stay visible.
``contour_integral`` evaluates constant terms on equal contours by iterated
residues; the equal-radius degeneracy is broken by a fixed chamber
(|q1| = e^L, |q2| = e^{sqrt(2) L}) and slightly perturbed radii.
"""
from __future__ import annotations

import math
from collections import Counter
from fractions import Fraction
from functools import lru_cache
from itertools import permutations, product

from .heisfock import apply_psi_H, floor_exponents
from .reports import Report, parallel_map
from .scalar import ONE, ZERO, Scalar, _unify, q, split_monomials, var
from .symm import SymFunc, degree_cap, e_poly, partitions, translate

__all__ = [
    "CapabilityError",
    "RationalFn",
    "ShuffleElement",
    "zeta_fn",
    "r_kernel",
    "R",
    "symmetrize",
    "star",
    "contour_integral",
    "apply_equal_contour",
    "EqualContourOperator",
    "check_associativity",
    "zeta_inverse_fn",
    "star_vs_fock",
    "check_jp_vs_kp",
]

EXACT_LIMIT = 3


class CapabilityError(RuntimeError):
    """The request exceeds the exact-mode variable limit."""


def zname(i: int) -> str:
    return f"z{i + 1}"


@lru_cache(maxsize=None)
def _qmono(a: int, b: int) -> Scalar:
    return Scalar.monomial({"q1": a, "q2": b})


def _linear(key) -> Scalar:
    i, j, a, b = key
    return var(zname(i)) - _qmono(a, b) * var(zname(j))


def _canonical_factor(i, j, a, b):
    """(z_i - c z_j) as (scalar, key) with key oriented i < j."""
    if i == j:
        raise ValueError("degenerate linear factor")
    if i < j:
        return ONE, (i, j, a, b)
    # z_i - c z_j = -c (z_j - c^{-1} z_i)
    return -_qmono(a, b), (j, i, -a, -b)


def _has_factor(num: Scalar, key) -> bool:
    if num.is_zero():
        return False
    a, b = _unify(num.num, _linear(key).num)
    return a.gcd(b).total_degree() > 0


class RationalFn:
    """num / prod (z_i - c z_j)^e in the variables z1..zn."""

    __slots__ = ("n", "num", "factors")

    def __init__(self, n: int, num, factors=None, _reduced=False):
        self.n = n
        self.num = Scalar.coerce(num)
        self.factors = Counter({k: e for k, e in (factors or {}).items() if e})
        if not _reduced:
            self._reduce()

    def _reduce(self):
        if self.num.is_zero():
            self.factors = Counter()
            return
        for key in list(self.factors):
            while self.factors[key] > 0 and _has_factor(self.num, key):
                self.num = self.num / _linear(key)
                self.factors[key] -= 1
            if not self.factors[key]:
                del self.factors[key]

    @classmethod
    def const(cls, n, c=1):
        return cls(n, Scalar.coerce(c), _reduced=True)

    def is_zero(self):
        return self.num.is_zero()

    def value(self) -> Scalar:
        den = ONE
        for k, e in self.factors.items():
            den = den * _linear(k) ** e
        return self.num / den

    def __mul__(self, other):
        if not isinstance(other, RationalFn):
            return RationalFn(self.n, self.num * Scalar.coerce(other), self.factors, _reduced=True)
        return RationalFn(max(self.n, other.n), self.num * other.num, self.factors + other.factors)

    __rmul__ = __mul__

    def __add__(self, other):
        if not isinstance(other, RationalFn):
            other = RationalFn.const(self.n, other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        common = self.factors | other.factors
        a = self.num
        for k, e in (common - self.factors).items():
            a = a * _linear(k) ** e
        b = other.num
        for k, e in (common - other.factors).items():
            b = b * _linear(k) ** e
        return RationalFn(max(self.n, other.n), a + b, common)

    def __neg__(self):
        return RationalFn(self.n, -self.num, self.factors, _reduced=True)

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        if not isinstance(other, RationalFn):
            other = RationalFn.const(self.n, other)
        return (self - other).is_zero()

    def __hash__(self):
        return hash(self.value())

    def permute(self, sigma) -> "RationalFn":
        """Substitute z_i -> z_{sigma[i]}."""
        num = self.num.subs({zname(i): var(zname(s)) for i, s in enumerate(sigma) if s != i})
        factors: Counter = Counter()
        for (i, j, a, b), e in self.factors.items():
            c, key = _canonical_factor(sigma[i], sigma[j], a, b)
            num = num * c ** (-e)
            factors[key] += e
        return RationalFn(self.n, num, factors, _reduced=True)

    def shift(self, k: int, n: int) -> "RationalFn":
        """Rename z_i -> z_{i+k} inside n variables."""
        sigma = list(range(k, k + self.n))
        num = self.num.subs({zname(i): var(zname(s)) for i, s in enumerate(sigma)})
        factors = Counter({(i + k, j + k, a, b): e for (i, j, a, b), e in self.factors.items()})
        return RationalFn(n, num, factors, _reduced=True)

    def degree(self) -> int:
        """Homogeneous degree in z (raises if not homogeneous)."""
        terms = split_monomials(self.num, [zname(i) for i in range(self.n)])
        degs = {sum(e) for e in terms}
        if len(degs) > 1:
            raise ValueError("not homogeneous")
        return (degs.pop() if degs else 0) - sum(self.factors.values())

    def __str__(self):
        den = "*".join(
            f"({zname(i)} - ({_qmono(a, b)})*{zname(j)})" + (f"^{e}" if e > 1 else "")
            for (i, j, a, b), e in sorted(self.factors.items())
        )
        return f"{self.num}" + (f" / [{den}]" if den else "")

    __repr__ = __str__


def _linear_ratio(n, num_keys, den_keys) -> RationalFn:
    """prod (z_i - c z_j) over num_keys / prod over den_keys; keys (i, j, a, b) in any orientation."""
    num = ONE
    for i, j, a, b in num_keys:
        num = num * (var(zname(i)) - _qmono(a, b) * var(zname(j)))
    factors: Counter = Counter()
    for i, j, a, b in den_keys:
        c, key = _canonical_factor(i, j, a, b)
        num = num / c
        factors[key] += 1
    return RationalFn(n, num, factors)


def zeta_fn(i: int, j: int, n: int) -> RationalFn:
    """zeta(z_i/z_j) = (1 - x q1)(1 - x q2) / ((1 - x)(1 - x q)) with x = z_i/z_j."""
    return _linear_ratio(n, [(j, i, 1, 0), (j, i, 0, 1)], [(j, i, 0, 0), (j, i, 1, 1)])


def zeta_inverse_fn(i: int, j: int, n: int) -> RationalFn:
    """1/zeta(z_i/z_j)."""
    return _linear_ratio(n, [(j, i, 0, 0), (j, i, 1, 1)], [(j, i, 1, 0), (j, i, 0, 1)])


def zeta_scalar(x: Scalar) -> Scalar:
    """zeta at a Scalar argument."""
    from .scalar import q1, q2

    return (1 - x * q1) * (1 - x * q2) / ((1 - x) * (1 - x * q))


def r_kernel(n: int, m: int) -> RationalFn:
    """(-q)^n prod z_i^{d_i} / (prod (1 - q z_{i+1}/z_i) prod_{i<j} zeta(z_j/z_i))."""
    if n < 1:
        raise ValueError("n >= 1")
    d = floor_exponents(n, m)
    num = (-q) ** n * Scalar.monomial({zname(i): d[i] for i in range(n)})
    out = RationalFn(n, num, _reduced=True)
    for i in range(n - 1):
        # 1/(1 - q z_{i+1}/z_i) = z_i / (z_i - q z_{i+1})
        out = out * RationalFn(n, var(zname(i)), Counter({(i, i + 1, 1, 1): 1}), _reduced=True)
    for i in range(n):
        for j in range(i + 1, n):
            out = out * zeta_inverse_fn(j, i, n)
    return out


def _check_exact(n):
    if n > EXACT_LIMIT:
        raise CapabilityError(f"exact mode supports at most {EXACT_LIMIT} variables, got {n}")


def symmetrize(f: RationalFn) -> "ShuffleElement":
    """Sum over all permutations of z1..zn."""
    _check_exact(f.n)
    out = RationalFn.const(f.n, 0)
    for sigma in permutations(range(f.n)):
        out = out + f.permute(sigma)
    return ShuffleElement(out)


class ShuffleElement:
    """A symmetric RationalFn; symmetry is checked exactly on construction."""

    def __init__(self, fn: RationalFn, check: bool = True):
        self.fn = fn
        self.n = fn.n
        if check and self.n >= 2:
            for i in range(self.n - 1):
                sigma = list(range(self.n))
                sigma[i], sigma[i + 1] = sigma[i + 1], sigma[i]
                if not fn.permute(sigma) == fn:
                    raise ValueError("rational function is not symmetric")

    @classmethod
    def unit(cls):
        return cls(RationalFn.const(0, 1), check=False)

    def __eq__(self, other):
        return self.n == other.n and self.fn == other.fn

    def __add__(self, other):
        return ShuffleElement(self.fn + other.fn, check=False)

    def scale(self, c):
        return ShuffleElement(self.fn * Scalar.coerce(c), check=False)

    def __str__(self):
        return str(self.fn)


@lru_cache(maxsize=None)
def R(n: int, m: int) -> ShuffleElement:
    """R_{n,m} = Sym r_{n,m}."""
    return symmetrize(r_kernel(n, m))


def _cross_kernel(n: int, n2: int, kernel: str) -> RationalFn:
    tot = n + n2
    out = RationalFn.const(tot, 1)
    for i in range(n):
        for j in range(n, tot):
            if kernel == "zeta":
                out = out * zeta_fn(i, j, tot)  # zeta(z_i/z_j)
            elif kernel == "inverse":
                out = out * zeta_inverse_fn(j, i, tot)  # zeta(z_j/z_i)^{-1}
            else:
                raise ValueError(f"unknown kernel {kernel!r}")
    return out


def star(A: ShuffleElement, B: ShuffleElement, kernel: str = "inverse") -> ShuffleElement:
    """(1/(n! n'!)) Sym[A(z_1..z_n) B(z_{n+1}..z_{n+n'}) * cross kernel]."""
    n, n2 = A.n, B.n
    if n == 0:
        return B
    if n2 == 0:
        return A
    tot = n + n2
    _check_exact(tot)
    prod_ = A.fn.shift(0, tot) * B.fn.shift(n, tot) * _cross_kernel(n, n2, kernel)
    s = symmetrize(prod_)
    return s.scale(Fraction(1, math.factorial(n) * math.factorial(n2)))


# equal-contour integrals ------------------------------------------------------

_SQRT2 = math.sqrt(2)


def _log_sign(a: int, b: int) -> int:
    """Sign of a + b sqrt(2)."""
    if a == 0 and b == 0:
        return 0
    if a >= 0 and b >= 0:
        return 1
    if a <= 0 and b <= 0:
        return -1
    # opposite signs: compare a^2 with 2 b^2
    big_a = a * a > 2 * b * b
    return (1 if a > 0 else -1) if big_a else (1 if b > 0 else -1)


def _inside(ra, rb, k, v, eps) -> bool:
    """Is the pole z_v = q1^ra q2^rb z_k inside the contour of z_v?"""
    s = _log_sign(ra, rb)
    if s:
        return s < 0
    return eps[k] < eps[v]


def _binom(a: int, s: int) -> Fraction:
    out = Fraction(1)
    for t in range(s):
        out *= Fraction(a - t, t + 1)
    return out


def _add_term(acc, key, c):
    if c.is_zero():
        return
    if key in acc:
        s = acc[key] + c
        if s.is_zero():
            del acc[key]
        else:
            acc[key] = s
    else:
        acc[key] = c


def _power_series(kind, c, obj, e, order):
    """Coefficients of (c * w + t)^{-e}, t^0..t^order.

    kind 'mono': w = z_obj; kind 'lin': w is the linear form with key obj.
    Each coefficient is (Scalar, dmono items, dfactor items).
    """
    out = []
    for s in range(order + 1):
        p = -e - s
        coef = c**p * _binom(-e, s)
        if kind == "mono":
            out.append((coef, ((obj, p),), ()))
        else:
            out.append((coef, (), ((obj, -p),)))
    return tuple(out)


def _alpha(ak) -> Scalar:
    return ONE if ak is None else -_qmono(*ak)


@lru_cache(maxsize=None)
def _series_zero(ak, ra, rb, k, e, order):
    """alpha (x - r z_k) to the power -e, expanded at x = 0."""
    s = _power_series("mono", -_qmono(ra, rb), k, e, order)
    al = _alpha(ak) ** (-e)
    return tuple((c * al, m, f) for c, m, f in s)


@lru_cache(maxsize=None)
def _series_root(ra, rb, k, ak2, ra2, rb2, k2, e2, order):
    """alpha2 (x - r2 z_k2) to the power -e2, expanded at x = r z_k + t."""
    if k2 == k:
        s = _power_series("mono", _qmono(ra, rb) - _qmono(ra2, rb2), k, e2, order)
    else:
        c, key = _canonical_factor(k, k2, ra2 - ra, rb2 - rb)
        s = _power_series("lin", _qmono(ra, rb) * c, key, e2, order)
    al = _alpha(ak2) ** (-e2)
    return tuple((c_ * al, m, f) for c_, m, f in s)


@lru_cache(maxsize=None)
def _series_x(ra, rb, k, a, order):
    """x^a at x = r z_k + t."""
    return tuple(
        (_qmono(ra, rb) ** (a - s) * _binom(a, s), ((k, a - s),), ()) for s in range(order + 1)
    )


def _integrate_var(terms: dict, v: int, eps) -> dict:
    out: dict = {}
    for (mono, facs), C in terms.items():
        for key, c in _integrate_term(mono, facs, v, eps):
            _add_term(out, key, c * C)
    return out


@lru_cache(maxsize=200000)
def _integrate_term(mono, facs, v, eps) -> tuple:
    """Sum of inside residues in z_v of z^mono / prod facs, as ((mono, facs), coeff) pairs."""
    out: dict = {}
    C = ONE
    a = mono[v]
    involved, rest = [], []
    for key, e in facs:
        (involved if v in (key[0], key[1]) else rest).append((key, e))
    # each involved factor as alpha * (x - r z_k); alpha = 1 or -q1^fa q2^fb
    roots = []
    for key, e in involved:
        i, j, fa, fb = key
        if i == v:
            roots.append((None, fa, fb, j, e))
        else:
            roots.append(((fa, fb), -fa, -fb, i, e))
    poles = [(idx, r) for idx, r in enumerate(roots) if _inside(r[1], r[2], r[3], v, eps)]
    if a >= 0 and not poles:
        return ()
    base_mono = list(mono)
    base_mono[v] = 0
    rest_c = Counter(dict(rest))

    def emit(coef, dmono, dfac):
        m2 = list(base_mono)
        for k, x in dmono.items():
            m2[k] += x
        f2 = rest_c.copy()
        for k, x in dfac.items():
            f2[k] += x
        f2 = tuple(sorted((k, x) for k, x in f2.items() if x))
        _add_term(out, (tuple(m2), f2), coef)

    def convolve(series_list, order, prefactor):
        # sum over distributions of total t-order `order`
        partial = [(prefactor, {}, {}, 0)]
        for series in series_list:
            nxt = []
            for coef, dm, df, used in partial:
                for s in range(order - used + 1):
                    c2, m2, f2 = series[s]
                    dm2 = dict(dm)
                    for k, x in m2:
                        dm2[k] = dm2.get(k, 0) + x
                    df2 = dict(df)
                    for k, x in f2:
                        df2[k] = df2.get(k, 0) + x
                    nxt.append((coef * c2, dm2, df2, used + s))
            partial = nxt
        for coef, dm, df, used in partial:
            if used == order:
                emit(coef, dm, df)

    # residue at 0
    if a < 0:
        series_list = [_series_zero(ak, ra, rb, k, e, -a - 1) for ak, ra, rb, k, e in roots]
        convolve(series_list, -a - 1, C)
    # residues at inside roots
    for idx, (ak, ra, rb, k, e) in poles:
        order = e - 1
        series_list = [_series_x(ra, rb, k, a, order)]
        for idx2, (ak2, ra2, rb2, k2, e2) in enumerate(roots):
            if idx2 != idx:
                series_list.append(_series_root(ra, rb, k, ak2, ra2, rb2, k2, e2, order))
        convolve(series_list, order, C * _alpha(ak) ** (-e))
    return tuple(out.items())


def _terms_of(F: RationalFn) -> dict:
    names = [zname(i) for i in range(F.n)]
    facs = tuple(sorted(F.factors.items()))
    return {(e, facs): c for e, c in split_monomials(F.num, names).items()}


def contour_integral(F: RationalFn, gamma, eps=None, _terms=None) -> Scalar:
    """Integral of F * z^gamma over |z_1| = ... = |z_n| with the measure prod dz_i/(2 pi i z_i)."""
    n = F.n
    eps = tuple(range(n, 0, -1)) if eps is None else tuple(eps)
    base = _terms if _terms is not None else _terms_of(F)
    terms: dict = {}
    for (mono, facs), c in base.items():
        terms[(tuple(x + g - 1 for x, g in zip(mono, gamma)), facs)] = c
    for v in range(n - 1):
        terms = _integrate_var(terms, v, eps)
    total = ZERO
    for (mono, facs), c in terms.items():
        if facs or any(mono[:-1]):
            raise AssertionError("residue engine left unintegrated variables")
        if mono[-1] == -1:
            total = total + c
    return total


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


@lru_cache(maxsize=None)
def _eprod(alpha: tuple[int, ...]) -> SymFunc:
    out = SymFunc.one()
    tot = sum(alpha)
    for a in alpha:
        out = out * e_poly(a)
    return out.scale(Scalar.monomial({"q1": -tot, "q2": -tot}, (-1) ** tot))


class EqualContourOperator:
    """f -> (1/n!) * integral over equal contours of F(z) X(z) f, with X the negative vertex operator."""

    def __init__(self, F: RationalFn, eps=None, prefactor=None, symmetric=False):
        # for symmetric F the torus integral is invariant under permuting gamma
        self.symmetric = symmetric
        self.F = F
        self.n = F.n
        self.deg = F.degree()
        self.eps = eps
        self.prefactor = Fraction(1, math.factorial(self.n)) if prefactor is None else prefactor
        self._terms = _terms_of(F)
        self._I: dict = {}

    def integral(self, gamma) -> Scalar:
        gamma = tuple(sorted(gamma)) if self.symmetric else tuple(gamma)
        if gamma not in self._I:
            self._I[gamma] = contour_integral(self.F, gamma, self.eps, self._terms)
        return self._I[gamma]

    def __call__(self, f: SymFunc) -> SymFunc:
        out = SymFunc.zero()
        for la, c in f.terms.items():
            if sum(la) + self.deg < 0:
                continue
            shifted = translate(SymFunc({la: ONE}, _clean=True), 1, self.n)
            for beta, g in shifted.items():
                tot = sum(beta) + self.deg
                if tot < 0:
                    continue
                for alpha in _compositions(tot, self.n):
                    gamma = tuple(b - a for a, b in zip(alpha, beta))
                    val = self.integral(gamma)
                    if val.is_zero():
                        continue
                    out = out + (_eprod(tuple(sorted(alpha))) * g).scale(val * c)
        return out.scale(Scalar.coerce(self.prefactor))


def apply_equal_contour(F: RationalFn, f: SymFunc, eps=None) -> SymFunc:
    return EqualContourOperator(F, eps)(f)


def _vectors(cap):
    return [SymFunc({la: ONE}, _clean=True) for k in range(cap + 1) for la in partitions(k)]


def star_vs_fock(A, B, cap: int = 4, kernel: str = "inverse", eps=None) -> Report:
    """Equal-contour integral of R_A * R_B against Psi(H_{-n,m}) Psi(H_{-n',m'}).

    A and B are (n, m) index pairs of R_{n,m}.
    """
    (n, m), (n2, m2) = A, B
    report = Report("shuffle")
    prod_ = star(R(n, m), R(n2, m2), kernel)
    op = EqualContourOperator(prod_.fn, eps, symmetric=True)
    with degree_cap(cap + 2 * (abs(m) + abs(m2)) + 4):

        def one(v):
            lhs = op(v)
            rhs = apply_psi_H(-n, m, apply_psi_H(-n2, m2, v))
            return v, lhs, rhs

        for v, lhs, rhs in parallel_map(one, _vectors(cap)):
            if lhs != rhs:
                report.add("star vs Fock composition", {"A": A, "B": B, "kernel": kernel}, False,
                           witness=f"vector {v}: lhs - rhs = {lhs - rhs}")
                return report
    report.add("star vs Fock composition", {"A": list(A), "B": list(B)}, True,
               detail=f"all p_lambda with |lambda| <= {cap}")
    return report


def check_jp_vs_kp(n: int = 2, mrange=range(-2, 3), cap: int = 4, eps=None) -> Report:
    """Equal-contour symmetrized form against the nested-contour form of Psi(H_{-n,m})."""
    report = Report("jp-vs-kp")
    for m in mrange:
        op = EqualContourOperator(R(n, m).fn, eps, symmetric=True)
        with degree_cap(cap + abs(m) + 4):
            bad = None
            for v in _vectors(cap):
                lhs, rhs = op(v), apply_psi_H(-n, m, v)
                if lhs != rhs:
                    bad = f"vector {v}: lhs - rhs = {lhs - rhs}"
                    break
        report.add("equal contours = nested contours", {"n": n, "m": m}, bad is None, witness=bad)
    return report


def check_associativity(ms=range(-2, 3), kernel: str = "inverse") -> Report:
    report = Report("associativity")
    ms = list(ms)
    for a, b, c in product(ms, repeat=3):
        A, B, C = R(1, a), R(1, b), R(1, c)
        left = star(star(A, B, kernel), C, kernel)
        right = star(A, star(B, C, kernel), kernel)
        report.add("(A*B)*C = A*(B*C)", {"m": [a, b, c]}, left == right)
    return report
