"""Symmetric functions in the power-sum basis, plethysm, and the Frobenius bridge.

Partitions are plain tuples of positive integers in weakly decreasing order.
"""
from __future__ import annotations

import contextlib
import itertools
import math
import re
from collections import Counter
from functools import lru_cache

from .scalar import ONE, ZERO, Monomial, Scalar, parse_expression, parse_scalar, q1, q2

__all__ = [
    "DegreeCapError",
    "degree_cap",
    "get_degree_cap",
    "partitions",
    "z_lambda",
    "merge",
    "SymFunc",
    "ClassFunction",
    "TorusCharacter",
    "p",
    "p_lambda",
    "h_poly",
    "e_poly",
    "pairing_standard",
    "pairing_plane",
    "kappa",
    "plethysm_eval",
    "plethysm_shift",
    "translate",
    "frobenius",
    "frobenius_inverse",
    "induce",
    "restrict_hom",
    "cycle_trace_exterior",
    "class_inner",
    "parse_symfunc",
    "check_frobenius",
    "check_trace",
]


class DegreeCapError(ValueError):
    """A computation would exceed the configured degree cap."""


_DEGREE_CAP = [8]


def get_degree_cap() -> int:
    return _DEGREE_CAP[0]


@contextlib.contextmanager
def degree_cap(n: int):
    """Temporarily change the degree cap (default 8)."""
    old = _DEGREE_CAP[0]
    _DEGREE_CAP[0] = max(int(n), 0)
    try:
        yield
    finally:
        _DEGREE_CAP[0] = old


def check_degree(k: int):
    if k > _DEGREE_CAP[0]:
        raise DegreeCapError(f"degree {k} exceeds cap {_DEGREE_CAP[0]}")


# partitions -----------------------------------------------------------------

@lru_cache(maxsize=None)
def partitions(n: int, maxpart: int | None = None) -> tuple[tuple[int, ...], ...]:
    """All partitions of ``n`` in reverse lexicographic order."""
    if n < 0:
        return ()
    if maxpart is None:
        maxpart = n
    if n == 0:
        return ((),)
    out = []
    for first in range(min(n, maxpart), 0, -1):
        for rest in partitions(n - first, first):
            out.append((first,) + rest)
    return tuple(out)


@lru_cache(maxsize=None)
def z_lambda(la: tuple[int, ...]) -> int:
    """Order of the centralizer of a permutation of cycle type ``la``."""
    out = 1
    for part, mult in Counter(la).items():
        out *= math.factorial(mult) * part**mult
    return out


def merge(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    if not a:
        return b
    if not b:
        return a
    return tuple(sorted(a + b, reverse=True))


def _multiset_diff(big: tuple[int, ...], small: tuple[int, ...]):
    c = Counter(big)
    c.subtract(small)
    if any(v < 0 for v in c.values()):
        return None
    return tuple(sorted(c.elements(), reverse=True))


@lru_cache(maxsize=None)
def kappa(k: int) -> Scalar:
    """(1 - q1^k)(1 - q2^k)."""
    return (1 - q1**k) * (1 - q2**k)


# SymFunc ---------------------------------------------------------------------

class SymFunc:
    """Element of Λ with Scalar coefficients, stored in the p-basis."""

    __slots__ = ("terms",)

    def __init__(self, terms=None, _clean=False):
        if _clean:
            self.terms = terms
            return
        t = {}
        for la, c in dict(terms or {}).items():
            la = tuple(sorted((int(x) for x in la), reverse=True))
            if any(x <= 0 for x in la):
                raise ValueError(f"invalid partition {la}")
            c = Scalar.coerce(c)
            t[la] = t[la] + c if la in t else c
        self.terms = {la: c for la, c in t.items() if not c.is_zero()}

    @classmethod
    def one(cls) -> "SymFunc":
        return cls({(): ONE}, _clean=True)

    @classmethod
    def zero(cls) -> "SymFunc":
        return cls({}, _clean=True)

    @classmethod
    def scalar(cls, c) -> "SymFunc":
        c = Scalar.coerce(c)
        return cls({(): c} if c else {}, _clean=True)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def coeff(self, la) -> Scalar:
        return self.terms.get(tuple(la), ZERO)

    def degrees(self) -> set[int]:
        return {sum(la) for la in self.terms}

    def degree(self) -> int:
        """Top degree; -1 for the zero function."""
        return max(self.degrees(), default=-1)

    def is_homogeneous(self, k: int | None = None) -> bool:
        ds = self.degrees()
        if not ds:
            return True
        return len(ds) == 1 and (k is None or ds == {k})

    def component(self, k: int) -> "SymFunc":
        return SymFunc({la: c for la, c in self.terms.items() if sum(la) == k}, _clean=True)

    def map_coeffs(self, fn) -> "SymFunc":
        return SymFunc({la: fn(la, c) for la, c in self.terms.items()})

    def _add_into(self, acc: dict, other: "SymFunc", scale=None):
        for la, c in other.terms.items():
            if scale is not None:
                c = c * scale
            if la in acc:
                s = acc[la] + c
                if s.is_zero():
                    del acc[la]
                else:
                    acc[la] = s
            elif not c.is_zero():
                acc[la] = c

    def __add__(self, other):
        if not isinstance(other, SymFunc):
            try:
                other = SymFunc.scalar(other)
            except TypeError:
                return NotImplemented
        acc = dict(self.terms)
        self._add_into(acc, other)
        return SymFunc(acc, _clean=True)

    __radd__ = __add__

    def __neg__(self):
        return SymFunc({la: -c for la, c in self.terms.items()}, _clean=True)

    def __sub__(self, other):
        if not isinstance(other, SymFunc):
            other = SymFunc.scalar(other)
        acc = dict(self.terms)
        self._add_into(acc, other, -ONE)
        return SymFunc(acc, _clean=True)

    def __rsub__(self, other):
        return SymFunc.scalar(other) - self

    def scale(self, c) -> "SymFunc":
        c = Scalar.coerce(c)
        if c.is_zero():
            return SymFunc.zero()
        if c.is_one():
            return self
        return SymFunc({la: v * c for la, v in self.terms.items()}, _clean=True)

    def __mul__(self, other):
        if not isinstance(other, SymFunc):
            try:
                return self.scale(other)
            except TypeError:
                return NotImplemented
        acc: dict = {}
        for la, a in self.terms.items():
            for mu, b in other.terms.items():
                nu = merge(la, mu)
                c = a * b
                if nu in acc:
                    s = acc[nu] + c
                    if s.is_zero():
                        del acc[nu]
                    else:
                        acc[nu] = s
                else:
                    acc[nu] = c
        return SymFunc(acc, _clean=True)

    def __rmul__(self, other):
        return self.scale(other)

    def __truediv__(self, other):
        if isinstance(other, SymFunc):
            if set(other.terms) - {()}:
                raise ValueError("division by a non-constant symmetric function")
            other = other.coeff(())
        return self.scale(Scalar.coerce(other).inv())

    def __pow__(self, n: int):
        out = SymFunc.one()
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, SymFunc):
            try:
                other = SymFunc.scalar(other)
            except TypeError:
                return NotImplemented
        if self.terms.keys() != other.terms.keys():
            return False
        return all(self.terms[k] == other.terms[k] for k in self.terms)

    def __hash__(self):
        return hash(frozenset(self.terms))

    def variables(self) -> set[str]:
        out = set()
        for c in self.terms.values():
            out |= c.variables()
        return out

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: (sum(kv[0]), kv[0]))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for la, c in self.sorted_terms():
            basis = "1" if not la else "p" + str(list(la)).replace(" ", "")
            parts.append(f"({c})*{basis}")
        return " + ".join(parts)

    __repr__ = __str__

    # JSON ---------------------------------------------------------------
    def to_json(self) -> dict:
        return {
            "terms": [
                {"partition": list(la), "coeff": str(c)} for la, c in self.sorted_terms()
            ]
        }

    @classmethod
    def from_json(cls, data: dict) -> "SymFunc":
        from .scalar import parse_scalar

        return cls({tuple(t["partition"]): parse_scalar(t["coeff"]) for t in data["terms"]})


def p(k: int) -> SymFunc:
    if k < 1:
        raise ValueError("power sums are indexed by k >= 1")
    return SymFunc({(k,): ONE}, _clean=True)


def p_lambda(la) -> SymFunc:
    return SymFunc({tuple(la): ONE})


def pairing_standard(f: SymFunc, g: SymFunc) -> Scalar:
    acc = ZERO
    for la, c in f.terms.items():
        d = g.terms.get(la)
        if d is not None:
            acc = acc + c * d * z_lambda(la)
    return acc


@lru_cache(maxsize=None)
def plane_norm(la: tuple[int, ...]) -> Scalar:
    """<p_la, p_la> in the deformed pairing."""
    out = Scalar.const(z_lambda(la))
    for k in la:
        out = out * kappa(k)
    return out


def pairing_plane(f: SymFunc, g: SymFunc) -> Scalar:
    acc = ZERO
    for la, c in f.terms.items():
        d = g.terms.get(la)
        if d is not None:
            acc = acc + c * d * plane_norm(la)
    return acc


@lru_cache(maxsize=None)
def _h_cached(k: int) -> SymFunc:
    return SymFunc({la: Scalar.const(1) / z_lambda(la) for la in partitions(k)})


@lru_cache(maxsize=None)
def _e_cached(k: int) -> SymFunc:
    return SymFunc(
        {la: Scalar.const((-1) ** (k - len(la))) / z_lambda(la) for la in partitions(k)}
    )


def h_poly(k: int) -> SymFunc:
    """Complete symmetric function h_k = sum over |la| = k of p_la / z_la."""
    if k < 0:
        raise ValueError("h_k needs k >= 0")
    check_degree(k)
    return _h_cached(k)


def e_poly(k: int) -> SymFunc:
    """Elementary symmetric function e_k."""
    if k < 0:
        raise ValueError("e_k needs k >= 0")
    check_degree(k)
    return _e_cached(k)


# torus characters and plethysm ----------------------------------------------

class TorusCharacter:
    """Finite signed sum of Laurent monomials (a K-theory class via Chern roots)."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        t: Counter = Counter()
        for m, c in dict(terms or {}).items():
            if not isinstance(m, Monomial):
                m = Monomial(m)
            t[m] += int(c)
        self.terms = {m: c for m, c in t.items() if c}

    @classmethod
    def monomial(cls, exps: dict, mult: int = 1) -> "TorusCharacter":
        return cls({Monomial(exps): mult})

    def __add__(self, other: "TorusCharacter") -> "TorusCharacter":
        t = Counter(self.terms)
        for m, c in other.terms.items():
            t[m] += c
        return TorusCharacter(t)

    def __neg__(self):
        return TorusCharacter({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return TorusCharacter({m: c * other for m, c in self.terms.items()})
        if isinstance(other, Monomial):
            return TorusCharacter({m * other: c for m, c in self.terms.items()})
        if isinstance(other, TorusCharacter):
            t: Counter = Counter()
            for m, c in self.terms.items():
                for n, d in other.terms.items():
                    t[m * n] += c * d
            return TorusCharacter(t)
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, TorusCharacter) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def rank(self) -> int:
        return sum(self.terms.values())

    def power_sum(self, n: int) -> Scalar:
        """p_n of the class: sum of signed n-th powers of the Chern roots."""
        acc = ZERO
        for m, c in self.terms.items():
            acc = acc + (m**n).to_scalar() * c
        return acc

    def positive_roots(self):
        return [m for m, c in self.terms.items() if c > 0]

    def negative_roots(self):
        return [m for m, c in self.terms.items() if c < 0]

    def to_scalar(self) -> Scalar:
        return self.power_sum(1)

    def __repr__(self):
        if not self.terms:
            return "0"
        items = sorted(self.terms.items(), key=lambda mc: repr(mc[0]))
        return " + ".join(f"{c}*{m}" if c != 1 else repr(m) for m, c in items)


def plethysm_eval(f: SymFunc, A: TorusCharacter) -> Scalar:
    """Evaluate f at the alphabet A: the ring map p_n -> p_n[A]."""
    cache: dict[int, Scalar] = {}
    acc = ZERO
    for la, c in f.terms.items():
        t = c
        for k in la:
            v = cache.get(k)
            if v is None:
                v = cache[k] = A.power_sum(k)
            t = t * v
            if t.is_zero():
                break
        acc = acc + t
    return acc


def _expand_partition(la, coeff_of, nvars):
    """f = p_la under p_k -> p_k + coeff_of(k) * (z_1^k + ... + z_n^k).

    Returns {exponent tuple: SymFunc}.
    """
    states: dict[tuple, dict[tuple, Scalar]] = {(0,) * nvars: {(): ONE}}
    for k in la:
        c = coeff_of(k)
        nxt: dict[tuple, dict[tuple, Scalar]] = {}

        def put(e, mu, v):
            bucket = nxt.setdefault(e, {})
            if mu in bucket:
                s = bucket[mu] + v
                if s.is_zero():
                    del bucket[mu]
                else:
                    bucket[mu] = s
            else:
                bucket[mu] = v

        for e, bucket in states.items():
            for mu, v in bucket.items():
                put(e, merge(mu, (k,)), v)
                if not c.is_zero():
                    cv = v * c
                    for i in range(nvars):
                        e2 = e[:i] + (e[i] + k,) + e[i + 1 :]
                        put(e2, mu, cv)
        states = nxt
    return {e: SymFunc(b, _clean=True) for e, b in states.items() if b}


@lru_cache(maxsize=4096)
def _translate_basis(la, key, nvars):
    sign, kind = key
    if kind == "kappa":
        coeff_of = lambda k: kappa(k) * sign  # noqa: E731
    else:
        raise ValueError(kind)
    return _expand_partition(la, coeff_of, nvars)


def translate(f: SymFunc, sign: int, nvars: int, coeff_of=None) -> dict[tuple, SymFunc]:
    """f[X + sign*(1-q1)(1-q2)(z_1+...+z_n)] as {z-exponent tuple: SymFunc}.

    With ``coeff_of`` given, p_k -> p_k + coeff_of(k)*(sum z_i^k) instead.
    """
    out: dict[tuple, SymFunc] = {}
    for la, c in f.terms.items():
        if coeff_of is None:
            parts = _translate_basis(la, (sign, "kappa"), nvars)
        else:
            parts = _expand_partition(la, coeff_of, nvars)
        for e, g in parts.items():
            g = g.scale(c)
            out[e] = out[e] + g if e in out else g
    return {e: g for e, g in out.items() if g}


def plethysm_shift(f: SymFunc, sign: int, zs) -> SymFunc:
    """f[X + sign*(1-q1)(1-q2)*sum(z)] with the z-variables folded into coefficients."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    zs = list(zs)
    acc = SymFunc.zero()
    for e, g in translate(f, sign, len(zs)).items():
        mono = Scalar.monomial({z: k for z, k in zip(zs, e) if k})
        acc = acc + g.scale(mono)
    return acc


# class functions and Frobenius ----------------------------------------------

class ClassFunction:
    """A function on the cycle types of S(k)."""

    __slots__ = ("k", "values")

    def __init__(self, k: int, values=None):
        self.k = k
        vals = {tuple(la): Scalar.coerce(v) for la, v in dict(values or {}).items()}
        for la in vals:
            if sum(la) != k:
                raise ValueError(f"{la} is not a cycle type of S({k})")
        self.values = {la: vals.get(la, ZERO) for la in partitions(k)}

    def __call__(self, la) -> Scalar:
        return self.values[tuple(la)]

    def __eq__(self, other):
        return (
            isinstance(other, ClassFunction)
            and self.k == other.k
            and all(self.values[la] == other.values[la] for la in self.values)
        )

    def __add__(self, other):
        return ClassFunction(self.k, {la: v + other.values[la] for la, v in self.values.items()})

    def scale(self, c):
        return ClassFunction(self.k, {la: v * c for la, v in self.values.items()})

    @classmethod
    def trivial(cls, k):
        return cls(k, {la: 1 for la in partitions(k)})

    @classmethod
    def sign(cls, k):
        return cls(k, {la: (-1) ** (k - len(la)) for la in partitions(k)})

    @classmethod
    def regular(cls, k):
        return cls(k, {(1,) * k: math.factorial(k)})

    @classmethod
    def indicator(cls, la):
        """The class function whose Frobenius image is p_la."""
        la = tuple(la)
        return cls(sum(la), {la: z_lambda(la)})

    @classmethod
    def power_sum(cls, k):
        return cls.indicator((k,))

    def __repr__(self):
        return f"ClassFunction({self.k}, {{{', '.join(f'{la}: {v}' for la, v in self.values.items())}}})"


def frobenius(M: ClassFunction) -> SymFunc:
    return SymFunc({la: v / z_lambda(la) for la, v in M.values.items() if v})


def frobenius_inverse(f: SymFunc, k: int | None = None) -> ClassFunction:
    if k is None:
        ds = f.degrees() or {0}
        if len(ds) != 1:
            raise ValueError("frobenius_inverse needs a homogeneous function")
        (k,) = ds
    if not f.is_homogeneous(k):
        raise ValueError(f"function is not homogeneous of degree {k}")
    return ClassFunction(k, {la: c * z_lambda(la) for la, c in f.terms.items()})


def _splittings(nu, k):
    """Sub-multisets alpha of nu with |alpha| = k; yields (alpha, nu - alpha)."""
    counts = sorted(Counter(nu).items(), reverse=True)
    ranges = [range(m + 1) for _, m in counts]
    for choice in itertools.product(*ranges):
        if sum(part * c for (part, _), c in zip(counts, choice)) != k:
            continue
        alpha = tuple(part for (part, _), c in zip(counts, choice) for _ in range(c))
        beta = tuple(part for (part, m), c in zip(counts, choice) for _ in range(m - c))
        yield alpha, beta


def induce(A: ClassFunction, B: ClassFunction) -> ClassFunction:
    """Ind from the Young subgroup S(k) x S(l) to S(k+l) of A ⊠ B."""
    n = A.k + B.k
    vals = {}
    for nu in partitions(n):
        acc = ZERO
        for alpha, beta in _splittings(nu, A.k):
            a, b = A.values[alpha], B.values[beta]
            if a and b:
                acc = acc + a * b * Scalar.const(z_lambda(nu)) / (z_lambda(alpha) * z_lambda(beta))
        vals[nu] = acc
    return ClassFunction(n, vals)


def restrict_hom(P: ClassFunction, M: ClassFunction) -> ClassFunction:
    """Character of Hom_{S(k)}(P, Res M) as an S(l)-module (characters are real)."""
    k, l = P.k, M.k - P.k
    if l < 0:
        raise ValueError("P lives on a larger group than M")
    vals = {}
    for beta in partitions(l):
        acc = ZERO
        for alpha in partitions(k):
            a = P.values[alpha]
            if a:
                acc = acc + a * M.values[merge(alpha, beta)] / z_lambda(alpha)
        vals[beta] = acc
    return ClassFunction(l, vals)


# exterior-algebra trace -----------------------------------------------------

def _sort_sign(seq) -> int:
    """Sign of the permutation that sorts a sequence of distinct items."""
    sign = 1
    seq = list(seq)
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


def cycle_trace_exterior(k: int) -> Scalar:
    """Signed trace of a k-cycle on the total exterior power of L1^k + L2^k.

    Basis wedges are indexed by subsets I, J of Z/k (copies of l_1, l_2); the
    cycle shifts indices by one and contributes only on wedges it fixes up to
    sign.  Exterior degree carries the K-theoretic sign (-1)^{|I|+|J|}.
    """
    if k <= 0:
        raise ValueError("k must be positive")
    acc = ZERO
    for mask1 in range(1 << k):
        I = [i for i in range(k) if mask1 >> i & 1]
        shifted1 = [(i + 1) % k for i in I]
        if sorted(shifted1) != I:
            continue
        for mask2 in range(1 << k):
            J = [j for j in range(k) if mask2 >> j & 1]
            shifted2 = [(j + 1) % k for j in J]
            if sorted(shifted2) != J:
                continue
            # wedge l1^(I) ^ l2^(J) maps to l1^(I+1) ^ l2^(J+1); reorder each block
            sign = _sort_sign(shifted1) * _sort_sign(shifted2)
            sign *= (-1) ** (len(I) + len(J))
            acc = acc + Scalar.monomial({"q1": len(I), "q2": len(J)}, sign)
    return acc


# verification suites -----------------------------------------------------------

def class_inner(A: ClassFunction, B: ClassFunction) -> Scalar:
    """<A, B> = sum over cycle types A(la) B(la) / z_la (real characters)."""
    if A.k != B.k:
        raise ValueError("class functions on different groups")
    acc = ZERO
    for la, a in A.values.items():
        b = B.values[la]
        if a and b:
            acc = acc + a * b / z_lambda(la)
    return acc


def check_frobenius(max_total: int = 6):
    """Induction product and Frobenius reciprocity on all cycle-type indicators."""
    from .reports import Report

    report = Report("frobenius")
    for n in range(0, max_total + 1):
        for k in range(0, n + 1):
            l = n - k
            prod_ok = recip_ok = True
            witness = None
            for alpha in partitions(k):
                A = ClassFunction.indicator(alpha)
                for beta in partitions(l):
                    B = ClassFunction.indicator(beta)
                    ind = induce(A, B)
                    if frobenius(ind) != frobenius(A) * frobenius(B):
                        prod_ok, witness = False, f"alpha={alpha}, beta={beta}"
                    for nu in partitions(n):
                        C = ClassFunction.indicator(nu)
                        if class_inner(ind, C) != class_inner(B, restrict_hom(A, C)):
                            recip_ok, witness = False, f"alpha={alpha}, beta={beta}, nu={nu}"
            report.add("frobenius(Ind(A, B)) = frobenius(A) frobenius(B)", {"k": k, "l": l}, prod_ok,
                       witness=witness)
            report.add("<Ind(A, B), C> = <B, Hom(A, Res C)>", {"k": k, "l": l}, recip_ok, witness=witness)
    return report


def check_trace(kmax: int = 6):
    """Signed exterior trace of the k-cycle equals (1-q1^k)(1-q2^k)."""
    from .reports import Report

    report = Report("trace")
    for k in range(1, kmax + 1):
        got = cycle_trace_exterior(k)
        report.add("trace of k-cycle on exterior algebra = (1-q1^k)(1-q2^k)", {"k": k},
                   got == kappa(k), witness=str(got), detail=str(got))
    return report


_SYM_RE = re.compile(r"^([phe])([0-9]+)$")


def _resolve_sym_name(name: str) -> "SymFunc":
    m = _SYM_RE.match(name)
    if m:
        kind, k = m.group(1), int(m.group(2))
        if kind == "p":
            if k == 0:
                return SymFunc.one()
            return p(k)
        return h_poly(k) if kind == "h" else e_poly(k)
    return SymFunc.scalar(parse_scalar(name))


def parse_symfunc(text: str) -> "SymFunc":
    """Parse expressions in p<k>, h<k>, e<k> and scalar symbols, e.g. "(q1-1)*p2*p1 + h2/2"."""
    return parse_expression(text, _resolve_sym_name, SymFunc.scalar)
