"""Exact arithmetic in Q(q1, q2, u1..ur, z1..zn).

Every coefficient in the package is a :class:`Scalar`: a reduced fraction of
two integer polynomials over a growing, append-only alphabet.  The alphabet
always starts ``q1, q2``; framing variables ``u<i>`` and auxiliary
integration variables ``z<a>`` are registered on first use.  Polynomials are
backed by FLINT (``python-flint``) multivariate integer polynomials, which
supply exact division and gcd.
"""
from __future__ import annotations

import ast
import re
import threading
from fractions import Fraction
from numbers import Rational

import flint

__all__ = [
    "Alphabet",
    "ALPHABET",
    "DivisionByZero",
    "EvaluationPole",
    "Monomial",
    "LaurentPoly",
    "Scalar",
    "normalize",
    "split_monomials",
    "eval_at",
    "parse_scalar",
    "var",
    "q1",
    "q2",
    "q",
    "ONE",
    "ZERO",
]

_VAR_RE = re.compile(r"^(q1|q2|u[1-9][0-9]*|z[1-9][0-9]*)$")


class DivisionByZero(ZeroDivisionError):
    pass


class EvaluationPole(ArithmeticError):
    """Raised by :func:`eval_at` when the denominator vanishes at the point."""


class Alphabet:
    """Append-only ordered registry of variable names.

    Lex order of the FLINT contexts follows registration order, so ``q1 > q2 >
    (anything registered later)``.
    """

    def __init__(self, names=("q1", "q2")):
        self._names = list(names)
        self._index = {n: i for i, n in enumerate(self._names)}
        self._lock = threading.Lock()
        self._ctxs: dict[int, flint.fmpz_mpoly_ctx] = {}

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(self._names)

    def __len__(self):
        return len(self._names)

    def index(self, name: str) -> int:
        return self._index[name]

    def ensure(self, name: str) -> int:
        if name in self._index:
            return self._index[name]
        if not _VAR_RE.match(name):
            raise ValueError(f"invalid variable name {name!r}")
        with self._lock:
            if name not in self._index:
                self._index[name] = len(self._names)
                self._names.append(name)
        return self._index[name]

    def ctx(self, nvars: int | None = None) -> flint.fmpz_mpoly_ctx:
        n = len(self._names) if nvars is None else nvars
        c = self._ctxs.get(n)
        if c is None:
            c = flint.fmpz_mpoly_ctx.get(tuple(self._names[:n]), "lex")
            self._ctxs[n] = c
        return c


ALPHABET = Alphabet()


def _lift(p, ctx):
    if p.context() is ctx:
        return p
    return p.project_to_context(ctx)


def _common(a, b):
    ca, cb = a.context(), b.context()
    if ca is cb:
        return a, b
    if ca.nvars() >= cb.nvars():
        return a, _lift(b, ca)
    return _lift(a, cb), b


def _unify(*ps):
    ctx = max((p.context() for p in ps), key=lambda c: c.nvars())
    return [_lift(p, ctx) for p in ps]


def _is_monomial(p) -> bool:
    return len(p) == 1


class Monomial:
    """Laurent monomial: a map variable name -> nonzero integer exponent."""

    __slots__ = ("_exps", "_hash")

    def __init__(self, exps=None):
        items = {}
        for k, v in dict(exps or {}).items():
            v = int(v)
            if v:
                ALPHABET.ensure(k)
                items[k] = v
        self._exps = tuple(sorted(items.items(), key=lambda kv: ALPHABET.index(kv[0])))
        self._hash = hash(self._exps)

    @property
    def exponents(self) -> dict[str, int]:
        return dict(self._exps)

    def __getitem__(self, name):
        return dict(self._exps).get(name, 0)

    def __eq__(self, other):
        return isinstance(other, Monomial) and self._exps == other._exps

    def __hash__(self):
        return self._hash

    def __mul__(self, other: "Monomial") -> "Monomial":
        e = dict(self._exps)
        for k, v in other._exps:
            e[k] = e.get(k, 0) + v
        return Monomial(e)

    def __pow__(self, n: int) -> "Monomial":
        return Monomial({k: v * n for k, v in self._exps})

    def inverse(self) -> "Monomial":
        return self ** -1

    def is_one(self) -> bool:
        return not self._exps

    def to_scalar(self) -> "Scalar":
        return Scalar.monomial(dict(self._exps))

    def __repr__(self):
        if not self._exps:
            return "1"
        return "*".join(k if v == 1 else f"{k}^{v}" for k, v in self._exps)


class LaurentPoly:
    """Finite sum of Laurent monomials with rational coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        t = {}
        for m, c in dict(terms or {}).items():
            c = Fraction(c)
            if c:
                t[m] = t.get(m, 0) + c
        self.terms = {m: c for m, c in t.items() if c}

    def to_scalar(self) -> "Scalar":
        acc = ZERO
        for m, c in self.terms.items():
            acc = acc + m.to_scalar() * c
        return acc

    def __repr__(self):
        return f"LaurentPoly({self.terms!r})"


class Scalar:
    """Element of the rational function field in canonical form.

    ``num/den`` with ``gcd(num, den) = 1`` (integer content included) and the
    lex-leading coefficient of ``den`` positive.  Instances are immutable.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, _canonical=False):
        if den is None:
            den = num.context().constant(1)
        if _canonical:
            self.num, self.den = num, den
            return
        num, den = _common(num, den)
        if den.is_zero():
            raise DivisionByZero("zero denominator")
        if num.is_zero():
            self.num, self.den = num, num.context().constant(1)
            return
        g = num.gcd(den)
        if not g.is_one():
            num, den = num / g, den / g
        if den.leading_coefficient() < 0:
            num, den = -num, -den
        self.num, self.den = num, den

    # construction -------------------------------------------------------
    @classmethod
    def const(cls, c) -> "Scalar":
        ctx = ALPHABET.ctx(2)
        c = Fraction(c)
        return cls(ctx.constant(c.numerator), ctx.constant(c.denominator), _canonical=True)

    @classmethod
    def monomial(cls, exps: dict, coeff=1) -> "Scalar":
        idx = [ALPHABET.ensure(k) for k in exps]
        n = max([2] + [i + 1 for i in idx])
        ctx = ALPHABET.ctx(n)
        up = [0] * n
        dn = [0] * n
        for i, e in zip(idx, exps.values()):
            if e > 0:
                up[i] += e
            elif e < 0:
                dn[i] -= e
        c = Fraction(coeff)
        if c == 0:
            return cls(ctx.constant(0), ctx.constant(1), _canonical=True)
        num = ctx.term(exp_vec=up, coeff=c.numerator)
        den = ctx.term(exp_vec=dn, coeff=c.denominator)
        return cls(num, den, _canonical=True)

    @classmethod
    def coerce(cls, x) -> "Scalar":
        if isinstance(x, Scalar):
            return x
        if isinstance(x, (int, Rational)):
            return cls.const(x)
        if isinstance(x, Monomial):
            return x.to_scalar()
        if isinstance(x, str):
            return parse_scalar(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to Scalar")

    # predicates ---------------------------------------------------------
    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return self.num.is_one() and self.den.is_one()

    def __bool__(self):
        return not self.num.is_zero()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def is_laurent(self) -> bool:
        """True when the denominator is a single monomial."""
        return _is_monomial(self.den)

    def variables(self) -> set[str]:
        names = self.num.context().names()
        used = set()
        for p in (self.num, self.den):
            degs = p.degrees()
            nm = p.context().names()
            used.update(n for n, d in zip(nm, degs) if d > 0)
        return used

    def to_fraction(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("not a constant")
        return Fraction(int(self.num.leading_coefficient()) if not self.num.is_zero() else 0,
                        int(self.den.leading_coefficient()))

    # arithmetic ---------------------------------------------------------
    def __add__(self, other):
        try:
            other = Scalar.coerce(other)
        except TypeError:
            return NotImplemented
        if other.num.is_zero():
            return self
        if self.num.is_zero():
            return other
        a, da, b, db = _unify(self.num, self.den, other.num, other.den)
        if da == db:
            num = a + b
            if da.is_one():
                return Scalar(num, da, _canonical=True)
            return Scalar(num, da)
        if _is_monomial(da) and _is_monomial(db):
            # lcm of monomial denominators without a gcd
            ea, eb = next(iter(da.monoms())), next(iter(db.monoms()))
            ca, cb = int(da.leading_coefficient()), int(db.leading_coefficient())
            ctx = da.context()
            from math import lcm

            c = lcm(ca, cb)
            e = [max(x, y) for x, y in zip(ea, eb)]
            den = ctx.term(exp_vec=e, coeff=c)
            fa = ctx.term(exp_vec=[x - y for x, y in zip(e, ea)], coeff=c // ca)
            fb = ctx.term(exp_vec=[x - y for x, y in zip(e, eb)], coeff=c // cb)
            return Scalar(a * fa + b * fb, den)
        g = da.gcd(db)
        if g.is_one():
            return Scalar(a * db + b * da, da * db)
        da_, db_ = da / g, db / g
        return Scalar(a * db_ + b * da_, da_ * db)

    __radd__ = __add__

    def __neg__(self):
        return Scalar(-self.num, self.den, _canonical=True)

    def __sub__(self, other):
        try:
            other = Scalar.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return Scalar.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, int):
            if other == 0:
                return ZERO
            if self.den.is_one():
                return Scalar(self.num * other, self.den, _canonical=True)
        try:
            other = Scalar.coerce(other)
        except TypeError:
            return NotImplemented
        if self.num.is_zero() or other.num.is_zero():
            return ZERO
        a, da, b, db = _unify(self.num, self.den, other.num, other.den)
        if da.is_one() and db.is_one():
            return Scalar(a * b, da, _canonical=True)
        g1 = a.gcd(db) if not db.is_one() else None
        g2 = b.gcd(da) if not da.is_one() else None
        if g1 is not None and not g1.is_one():
            a, db = a / g1, db / g1
        if g2 is not None and not g2.is_one():
            b, da = b / g2, da / g2
        num, den = a * b, da * db
        if den.leading_coefficient() < 0:
            num, den = -num, -den
        return Scalar(num, den, _canonical=True)

    __rmul__ = __mul__

    def inv(self) -> "Scalar":
        if self.num.is_zero():
            raise DivisionByZero("inversion of zero")
        num, den = self.den, self.num
        if den.leading_coefficient() < 0:
            num, den = -num, -den
        return Scalar(num, den, _canonical=True)

    def __truediv__(self, other):
        try:
            other = Scalar.coerce(other)
        except TypeError:
            return NotImplemented
        return self * other.inv()

    def __rtruediv__(self, other):
        return Scalar.coerce(other) * self.inv()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inv() ** (-n)
        if n == 0:
            return ONE
        return Scalar(self.num ** n, self.den ** n, _canonical=True)

    # comparison ---------------------------------------------------------
    def __eq__(self, other):
        try:
            other = Scalar.coerce(other)
        except TypeError:
            return NotImplemented
        a, b = _common(self.num, other.num)
        if a != b:
            return False
        da, db = _common(self.den, other.den)
        return da == db

    def __hash__(self):
        nd = tuple(sorted(_strip_zeros(self.num.to_dict(), self.num.context().names()).items()))
        dd = tuple(sorted(_strip_zeros(self.den.to_dict(), self.den.context().names()).items()))
        return hash((nd, dd))

    # substitution -------------------------------------------------------
    def subs(self, mapping: dict) -> "Scalar":
        """Substitute variables by Scalars (ring homomorphism on the field)."""
        mapping = {k: Scalar.coerce(v) for k, v in mapping.items()}
        names = set(self.num.context().names()) | set(self.den.context().names())
        if not any(k in names for k in mapping):
            return self
        return _poly_subs(self.num, mapping) / _poly_subs(self.den, mapping)

    def __str__(self):
        return format_scalar(self)

    def __repr__(self):
        return f"Scalar({format_scalar(self)!r})"


def _strip_zeros(d, names):
    # canonical, context-independent key: tuple of (name, exp)
    out = {}
    for exps, c in d.items():
        out[tuple((n, e) for n, e in zip(names, exps) if e)] = int(c)
    return out


def _poly_subs(p, mapping: dict) -> Scalar:
    names = p.context().names()
    cache: dict[tuple[str, int], Scalar] = {}
    acc = ZERO
    for exps, c in p.to_dict().items():
        fixed = {}
        t = Scalar.const(int(c))
        for n, e in zip(names, exps):
            e = int(e)
            if not e:
                continue
            if n in mapping:
                key = (n, e)
                v = cache.get(key)
                if v is None:
                    v = cache[key] = mapping[n] ** e
                t = t * v
            else:
                fixed[n] = e
        if fixed:
            t = t * Scalar.monomial(fixed)
        acc = acc + t
    return acc


def normalize(num, den) -> Scalar:
    """Canonical form of ``num/den`` for any two Scalar-coercible values."""
    num, den = Scalar.coerce(num), Scalar.coerce(den)
    if den.is_zero():
        raise DivisionByZero("zero denominator")
    return num / den


def var(name: str) -> Scalar:
    return Scalar.monomial({name: 1})


def _eval_poly(p, point: dict) -> Fraction:
    names = p.context().names()
    total = Fraction(0)
    for exps, c in p.to_dict().items():
        t = Fraction(int(c))
        for n, e in zip(names, exps):
            if e:
                t *= point[n] ** int(e)
        total += t
    return total


def eval_at(x: Scalar, assignment: dict) -> Fraction:
    """Exact rational value of ``x`` at a rational point."""
    point = {k: Fraction(v) for k, v in assignment.items()}
    missing = x.variables() - set(point)
    if missing:
        raise KeyError(f"assignment does not cover {sorted(missing)}")
    d = _eval_poly(x.den, point)
    if d == 0:
        raise EvaluationPole("denominator vanishes at the given point")
    return _eval_poly(x.num, point) / d


# serialization -------------------------------------------------------------

def _format_poly(p) -> str:
    s = str(p)
    return s


def format_scalar(x: Scalar) -> str:
    if x.den.is_one():
        return _format_poly(x.num)
    return f"({_format_poly(x.num)})/({_format_poly(x.den)})"


class _Evaluator(ast.NodeVisitor):
    """Evaluates a restricted arithmetic AST over a ring.

    ``resolve`` maps a bare name to a ring element; integers are passed through
    ``const``.  Only ``+ - * /``, unary minus and integer powers are accepted.
    """

    def __init__(self, resolve, const, text):
        self.resolve = resolve
        self.const = const
        self.text = text

    def fail(self, node, msg):
        col = getattr(node, "col_offset", 0)
        raise SyntaxError(f"{msg} at position {col}: {self.text!r}")

    def visit_Expression(self, node):
        return self.visit(node.body)

    def visit_Constant(self, node):
        if isinstance(node.value, bool) or not isinstance(node.value, int):
            self.fail(node, "only integer constants are allowed")
        return self.const(node.value)

    def visit_Name(self, node):
        try:
            return self.resolve(node.id)
        except (KeyError, ValueError):
            self.fail(node, f"unknown symbol {node.id!r}")

    def visit_UnaryOp(self, node):
        v = self.visit(node.operand)
        if isinstance(node.op, ast.USub):
            return -v
        if isinstance(node.op, ast.UAdd):
            return v
        self.fail(node, "unsupported unary operator")

    def _int_exponent(self, node):
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return node.value
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
            return -self._int_exponent(node.operand)
        self.fail(node, "exponent must be an integer")

    def visit_BinOp(self, node):
        if isinstance(node.op, ast.Pow):
            return self.visit(node.left) ** self._int_exponent(node.right)
        a, b = self.visit(node.left), self.visit(node.right)
        if isinstance(node.op, ast.Add):
            return a + b
        if isinstance(node.op, ast.Sub):
            return a - b
        if isinstance(node.op, ast.Mult):
            return a * b
        if isinstance(node.op, ast.Div):
            return a / b
        self.fail(node, "unsupported operator")

    def generic_visit(self, node):
        self.fail(node, f"unsupported syntax {type(node).__name__}")


def parse_expression(text: str, resolve, const):
    src = text.strip().replace("^", "**")
    if not src:
        raise SyntaxError("empty expression")
    try:
        tree = ast.parse(src, mode="eval")
    except SyntaxError as e:
        raise SyntaxError(f"parse error at position {e.offset}: {text!r}") from None
    return _Evaluator(resolve, const, text).visit(tree)


def _resolve_scalar_name(name: str) -> Scalar:
    if name == "q":
        return var("q1") * var("q2")
    if not _VAR_RE.match(name):
        raise KeyError(name)
    return var(name)


def parse_scalar(text: str) -> Scalar:
    """Parse the scalar grammar (integers, q1 q2 q u<i> z<a>, ^ * + - /); q means q1*q2."""
    return parse_expression(text, _resolve_scalar_name, Scalar.const)


ONE = Scalar.const(1)
ZERO = Scalar.const(0)
q1 = var("q1")
q2 = var("q2")
q = q1 * q2


def split_monomials(x: Scalar, names) -> dict[tuple[int, ...], Scalar]:
    """Write x = sum_e c_e * prod(names ** e) with each c_e free of ``names``.

    The denominator of x may involve ``names`` only through a monomial factor.
    """
    names = tuple(names)

    def parts(p):
        pn = p.context().names()
        pos = [pn.index(n) if n in pn else None for n in names]
        rest = [i for i, n in enumerate(pn) if n not in names]
        for exps, c in p.to_dict().items():
            key = tuple(int(exps[i]) if i is not None else 0 for i in pos)
            other = {pn[i]: int(exps[i]) for i in rest if exps[i]}
            yield key, Scalar.monomial(other, int(c))

    den_key = None
    den_rest = ZERO
    for key, c in parts(x.den):
        if den_key is None:
            den_key = key
        elif key != den_key:
            raise ValueError("denominator is not monomial in the split variables")
        den_rest = den_rest + c
    out: dict = {}
    for key, c in parts(x.num):
        e = tuple(a - b for a, b in zip(key, den_key))
        out[e] = out.get(e, ZERO) + c
    return {e: c / den_rest for e, c in out.items() if not c.is_zero()}
