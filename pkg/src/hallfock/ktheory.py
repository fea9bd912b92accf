"""Localized equivariant K-theory of framed sheaves on the plane, at torus fixed points.

Classes are compared entrywise at fixed points, indexed by r-partitions.
A universal class f[U] is evaluated at a fixed point by plethysm at the
character of U there.  Phi(H_{+-1,m}) is computed as a sum of residues of
a one-variable integrand; its residue at z = 0 certifies when the
Fock-side and fixed-point-side contours agree.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .heisfock import Generator, apply_generator, apply_p, in_Ar, parse_generator
from .reports import Report, parallel_map
from .scalar import ONE, ZERO, Monomial, Scalar, parse_scalar, split_monomials, var
from .symm import (
    SymFunc,
    TorusCharacter,
    degree_cap,
    kappa,
    partitions,
    plethysm_eval,
    translate,
)

__all__ = [
    "RPartition",
    "FixedPointVector",
    "DegenerateInput",
    "rpartitions",
    "box_weight",
    "fixed_point_character",
    "gamma_eval",
    "residue",
    "phi_H1_residues",
    "phi_at",
    "residue_at_zero",
    "add_boxes",
    "vandermonde_select",
    "intertwine_check",
    "boundary_check",
    "deg_rescale",
    "check_distinct_weights",
    "check_spanning",
    "count_rpartitions",
]


class DegenerateInput(ValueError):
    """Two Chern roots collide, so the residue sum is not well defined."""


@dataclass(frozen=True, order=True)
class RPartition:
    components: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.components) < 1:
            raise ValueError("r >= 1")
        for la in self.components:
            if any(a < b for a, b in zip(la, la[1:])) or any(x <= 0 for x in la):
                raise ValueError(f"not a partition: {la}")

    @classmethod
    def of(cls, *components):
        return cls(tuple(tuple(c) for c in components))

    @property
    def r(self) -> int:
        return len(self.components)

    @property
    def size(self) -> int:
        return sum(sum(la) for la in self.components)

    def boxes(self):
        """Cells (i, x, y): x the position in row y of the i-th partition."""
        for i, la in enumerate(self.components):
            for y, row in enumerate(la):
                for x in range(row):
                    yield i, x, y

    def to_json(self):
        return [list(la) for la in self.components]

    @classmethod
    def from_json(cls, data):
        return cls(tuple(tuple(int(x) for x in la) for la in data))

    def __str__(self):
        return "(" + ", ".join(str(list(la)) for la in self.components) + ")"


def rpartitions(r: int, d: int) -> list[RPartition]:
    """All r-tuples of partitions of total size d."""
    if r < 1:
        raise ValueError("r >= 1")

    def rec(r, d):
        if r == 1:
            for la in partitions(d):
                yield (la,)
            return
        for k in range(d + 1):
            for la in partitions(k):
                for rest in rec(r - 1, d - k):
                    yield (la,) + rest

    return [RPartition(c) for c in rec(r, d)]


def count_rpartitions(r: int, d: int) -> int:
    """[x^d] of the r-th power of the partition generating function."""
    p = [len(partitions(k)) for k in range(d + 1)]
    series = [1] + [0] * d
    for _ in range(r):
        series = [sum(series[j] * p[k - j] for j in range(k + 1)) for k in range(d + 1)]
    return series[d]


def box_weight(i: int, x: int, y: int) -> Monomial:
    return Monomial({f"u{i + 1}": 1, "q1": x, "q2": y})


def fixed_point_character(lam: RPartition) -> TorusCharacter:
    """sum_i u_i (1 - (1-q1)(1-q2) sum_{boxes of lambda_i} q1^x q2^y)."""
    terms: dict = {}

    def put(m, c):
        terms[m] = terms.get(m, 0) + c

    for i in range(lam.r):
        put(Monomial({f"u{i + 1}": 1}), 1)
    for i, x, y in lam.boxes():
        b = box_weight(i, x, y)
        put(b, -1)
        put(b * Monomial({"q1": 1}), 1)
        put(b * Monomial({"q2": 1}), 1)
        put(b * Monomial({"q1": 1, "q2": 1}), -1)
    return TorusCharacter(terms)


class FixedPointVector:
    """A class on the moduli space of size d, as its values at the fixed points."""

    def __init__(self, r: int, d: int, entries: dict | None = None):
        self.r, self.d = r, d
        self.entries: dict[RPartition, Scalar] = {}
        for lam, c in (entries or {}).items():
            if lam.r != r or lam.size != d:
                raise ValueError(f"{lam} is not an {r}-partition of size {d}")
            self.entries[lam] = Scalar.coerce(c)

    def __getitem__(self, lam):
        return self.entries.get(lam, ZERO)

    def __eq__(self, other):
        if (self.r, self.d) != (other.r, other.d):
            return False
        keys = set(self.entries) | set(other.entries)
        return all(self[k] == other[k] for k in keys)

    def __mul__(self, other: "FixedPointVector"):
        return FixedPointVector(self.r, self.d, {k: v * other[k] for k, v in self.entries.items()})

    def diff(self, other):
        """Fixed points where the two vectors disagree."""
        keys = sorted(set(self.entries) | set(other.entries))
        return [(k, self[k] - other[k]) for k in keys if self[k] != other[k]]

    def to_json(self) -> dict:
        return {
            "r": self.r,
            "d": self.d,
            "entries": [
                {"rpartition": lam.to_json(), "coeff": str(c)}
                for lam, c in sorted(self.entries.items())
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "FixedPointVector":
        return cls(
            data["r"],
            data["d"],
            {RPartition.from_json(e["rpartition"]): parse_scalar(e["coeff"]) for e in data["entries"]},
        )

    def __str__(self):
        return "\n".join(f"{lam}: {c}" for lam, c in sorted(self.entries.items()))


@lru_cache(maxsize=None)
def _character(lam: RPartition) -> TorusCharacter:
    return fixed_point_character(lam)


def gamma_eval(f: SymFunc, r: int, d: int) -> FixedPointVector:
    """f[U] at every fixed point of size d."""
    return FixedPointVector(r, d, {lam: plethysm_eval(f, _character(lam)) for lam in rpartitions(r, d)})


# residues -----------------------------------------------------------------------

_T = "z99"  # local coordinate near a pole


def residue(expr: Scalar, name: str, point: Scalar | None = None) -> Scalar:
    """Residue of expr (a rational function of `name`) at name = point."""
    point = Scalar.coerce(point) if point is not None else ZERO
    if point.is_zero():
        t = name
    else:
        t = _T
        expr = expr.subs({name: var(_T) + point})
    if expr.is_zero():
        return ZERO
    num = split_monomials(Scalar(expr.num), [t])
    den = split_monomials(Scalar(expr.den), [t])
    n0 = min(e for (e,) in num)
    k0 = min(e for (e,) in den)
    order = k0 - n0 - 1
    if order < 0:
        return ZERO
    N = [num.get((n0 + i,), ZERO) for i in range(order + 1)]
    D = [den.get((k0 + i,), ZERO) for i in range(order + 1)]
    inv = [ONE / D[0]]
    for i in range(1, order + 1):
        s = ZERO
        for j in range(1, i + 1):
            if not D[j].is_zero():
                s = s + D[j] * inv[i - j]
        inv.append(-s * inv[0])
    out = ZERO
    for i in range(order + 1):
        if not N[i].is_zero():
            out = out + N[i] * inv[order - i]
    return out


def _wedge(chi: TorusCharacter, zs: Scalar, dual_sign: int, shift: Scalar) -> Scalar:
    """prod_y (1 - y/(z shift))^{dual_sign * mult(y)}."""
    out = ONE
    for m, c in chi.terms.items():
        out = out * (1 - m.to_scalar() / (zs * shift)) ** (dual_sign * c)
    return out


def _shifted_poly(f: SymFunc, chi: TorusCharacter, sign: int, names) -> Scalar:
    """f[U + sign (1-q1)(1-q2) sum z] as a polynomial in the named z's."""
    parts = translate(f, sign, len(names))
    out = ZERO
    for e, g in parts.items():
        c = plethysm_eval(g, chi)
        if not c.is_zero():
            out = out + c * Scalar.monomial(dict(zip(names, e)))
    return out


def _integrand_1(sign: int, m: int, f: SymFunc, chi: TorusCharacter) -> Scalar:
    """The one-variable integrand of Phi(H_{sign,m}), including the dz/z."""
    z = var("z1")
    F = _shifted_poly(f, chi, -sign, ["z1"])
    from .scalar import q

    if sign > 0:
        return z ** (m - 1) * _wedge(chi, z, -1, ONE) * F
    return -q * z ** (m - 1) * _wedge(chi, z, 1, q) * F


def _poles_1(sign: int, chi: TorusCharacter) -> list[Scalar]:
    from .scalar import q

    if sign > 0:
        roots = [m.to_scalar() for m in chi.positive_roots()]
    else:
        roots = [m.to_scalar() / q for m in chi.negative_roots()]
    if len(set(roots)) != len(roots):
        raise DegenerateInput("colliding Chern roots")
    return roots


def phi_at(sign: int, m: int, f: SymFunc, chi: TorusCharacter) -> Scalar:
    """Phi(H_{sign,m})(f[U]) at a fixed point with character chi."""
    g = _integrand_1(sign, m, f, chi)
    out = ZERO
    for y in _poles_1(sign, chi):
        out = out + residue(g, "z1", y)
    return out


def phi_H1_residues(sign: int, m: int, f: SymFunc, r: int, d: int) -> FixedPointVector:
    """Phi(H_{+-1,m})(f[U]) at every fixed point of size d, as a residue sum at Chern roots."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    return FixedPointVector(r, d, {lam: phi_at(sign, m, f, _character(lam)) for lam in rpartitions(r, d)})


def residue_at_zero(sign: int, n: int, m: int, f: SymFunc, chi: TorusCharacter) -> Scalar:
    """Residue at 0 of the Phi(H_{sign n, m}) integrand; zero iff the two contours agree.

    n = 2 takes the z1 residue first, then z2.
    """
    if n == 1:
        return residue(_integrand_1(sign, m, f, chi), "z1")
    if n != 2:
        raise NotImplementedError("residue_at_zero supports n = 1, 2")
    from .heisfock import floor_exponents
    from .scalar import q, q1, q2

    z1, z2 = var("z1"), var("z2")
    d1, d2 = floor_exponents(2, m)
    x = z2 / z1
    zeta = (1 - x * q1) * (1 - x * q2) / ((1 - x) * (1 - x * q))
    F = _shifted_poly(f, chi, -sign, ["z1", "z2"])
    g = z1 ** (d1 - 1) * z2 ** (d2 - 1) / ((1 - x * q) * zeta) * F
    if sign > 0:
        g = g * _wedge(chi, z1, -1, ONE) * _wedge(chi, z2, -1, ONE)
    else:
        g = g * q**2 * _wedge(chi, z1, 1, q) * _wedge(chi, z2, 1, q)
    return residue(residue(g, "z1"), "z2")


# uniqueness engine ------------------------------------------------------------

def _addable(la: tuple[int, ...]):
    for y in range(len(la) + 1):
        row = la[y] if y < len(la) else 0
        if y == 0 or la[y - 1] > row:
            new = list(la)
            if y < len(la):
                new[y] += 1
            else:
                new.append(1)
            yield (row, y), tuple(new)


def add_boxes(mu: RPartition) -> list[tuple[RPartition, Monomial]]:
    """All mu + box, with the box weight u_i q1^x q2^y."""
    out = []
    for i, la in enumerate(mu.components):
        for (x, y), new in _addable(la):
            comps = list(mu.components)
            comps[i] = new
            out.append((RPartition(tuple(comps)), box_weight(i, x, y)))
    return out


def vandermonde_select(mu: RPartition, target: RPartition) -> list[Scalar]:
    """c_1..c_s with sum_m c_m w^m equal to 1 at the target's box weight and 0 at the others."""
    options = add_boxes(mu)
    weights = [w for _, w in options]
    if len(set(weights)) != len(weights):
        raise DegenerateInput("addable box weights are not distinct")
    idx = [k for k, (lam, _) in enumerate(options) if lam == target]
    if not idx:
        raise ValueError(f"{target} is not obtained by adding a box to {mu}")
    t = idx[0]
    ws = [w.to_scalar() for w in weights]
    # P(x) = (x / w_t) prod_{k != t} (x - w_k) / (w_t - w_k), coefficients of x^0..x^s
    poly = [ZERO, ONE / ws[t]]
    for k, w in enumerate(ws):
        if k == t:
            continue
        denom = ws[t] - w
        new = [ZERO] * (len(poly) + 1)
        for i, c in enumerate(poly):
            new[i + 1] = new[i + 1] + c / denom
            new[i] = new[i] - c * w / denom
        poly = new
    return poly[1:]


def check_distinct_weights(max_size: int = 5, max_r: int = 3) -> Report:
    """Distinct addable weights and exact Lagrange selection for every mu."""
    report = Report("distinct-weights")
    for r in range(1, max_r + 1):
        for d in range(max_size + 1):
            ok, bad = True, None
            for mu in rpartitions(r, d):
                options = add_boxes(mu)
                weights = [w for _, w in options]
                if len(set(weights)) != len(weights):
                    ok, bad = False, f"{mu}: repeated weight"
                    break
                ws = [w.to_scalar() for w in weights]
                for lam, _ in options:
                    c = vandermonde_select(mu, lam)
                    vals = [sum((c[i] * w ** (i + 1) for i in range(len(c))), ZERO) for w in ws]
                    want = [ONE if l2 == lam else ZERO for l2, _ in options]
                    if vals != want:
                        ok, bad = False, f"{mu} -> {lam}: selection gives {vals}"
                        break
                if not ok:
                    break
            report.add("distinct weights and Lagrange selection", {"r": r, "|mu|": d}, ok, witness=bad)
    return report


def _rank(rows: list[list[Scalar]]) -> int:
    rows = [list(r) for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if not rows[i][c].is_zero()), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        p = rows[rank][c]
        for i in range(len(rows)):
            if i != rank and not rows[i][c].is_zero():
                f = rows[i][c] / p
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def check_spanning(r: int = 1, max_d: int = 2) -> Report:
    """Phi(H_{-1,m}), m = 1..#targets, from size d-1 spans size d (tau set to 1)."""
    report = Report("spanning")
    for d in range(1, max_d + 1):
        targets = rpartitions(r, d)
        cols = []
        for mu in rpartitions(r, d - 1):
            opts = dict(add_boxes(mu))
            for m in range(1, len(targets) + 1):
                cols.append([opts[lam].to_scalar() ** m if lam in opts else ZERO for lam in targets])
        rows = [[col[i] for col in cols] for i in range(len(targets))]
        rk = _rank(rows)
        covered = all(any(lam in dict(add_boxes(mu)) for mu in rpartitions(r, d - 1)) for lam in targets)
        report.add("Phi(H(-1,m)) spans", {"r": r, "d": d}, rk == len(targets) and covered,
                   detail=f"rank {rk} of {len(targets)}")
    return report


def deg_rescale(f: SymFunc, sign: int) -> SymFunc:
    """Scale the degree-k component by ((1-q1)(1-q2))^{sign k}."""
    k1 = kappa(1)
    return SymFunc({la: c * k1 ** (sign * sum(la)) for la, c in f.terms.items()})


# intertwining -------------------------------------------------------------------

def _basis(max_degree):
    return [SymFunc({la: ONE}, _clean=True) for k in range(max_degree + 1) for la in partitions(k)]


def _gen(g) -> Generator:
    if isinstance(g, Generator):
        return g
    if isinstance(g, str):
        return parse_generator(g)
    n, m = g
    return Generator("H", n, m)


def intertwine_check(r: int, d: int, generator, allow_boundary: bool = False) -> Report:
    """Gamma(Psi(g) f) = Phi(g) Gamma(f) at every fixed point of size <= d, f = p_lambda, |lambda| <= d."""
    g = _gen(generator)
    report = Report("intertwine")
    if g.kind == "H" and g.n != 0 and not in_Ar(g.n, g.m, r) and not allow_boundary:
        raise ValueError(f"{g} is not in A^({r}): needs m > -n r")
    if g.kind not in ("H", "P") or abs(g.n) > 1 or (g.kind == "P" and g.n != 0):
        raise NotImplementedError("the residue side covers H(+-1, m) and P(0, m)")
    if g.kind == "P" and g.m < 1:
        raise NotImplementedError("P(0, m) needs m >= 1")
    fs = _basis(d)
    cap = d + abs(g.m) + 2
    with degree_cap(max(cap, 8)):
        images = {id(f): apply_generator(g, f) for f in fs}

    def at_point(lam):
        chi = _character(lam)
        out = []
        for f in fs:
            lhs = plethysm_eval(images[id(f)], chi)
            if g.n == 0:
                rhs = chi.power_sum(g.m) * plethysm_eval(f, chi)
            else:
                rhs = phi_at(g.n, g.m, f, chi)
            if lhs != rhs:
                out.append((f, lhs - rhs))
        return lam, out

    points = [lam for size in range(d + 1) for lam in rpartitions(r, size)]
    bad = [(lam, o) for lam, o in parallel_map(at_point, points) if o]
    if bad:
        lam, o = bad[0]
        report.add("Gamma Psi = Phi Gamma", {"r": r, "d": d, "g": str(g)}, False,
                   witness=f"f={o[0][0]}, lambda'={lam}, difference={o[0][1]}")
    else:
        report.add("Gamma Psi = Phi Gamma", {"r": r, "d": d, "g": str(g)}, True,
                   detail=f"{len(fs)} vectors x {len(points)} fixed points")
    return report


def boundary_check(r: int, d: int, generator) -> Report:
    """Residue-at-zero certificates: Psi-side minus Phi-side, which vanish inside A^(r)."""
    g = _gen(generator)
    report = Report("boundary")
    fs = _basis(d)
    nonzero = []
    for size in range(d + 1):
        for lam in rpartitions(r, size):
            chi = _character(lam)
            for f in fs:
                if g.n == 0:
                    cert = ZERO
                else:
                    cert = residue_at_zero(g.n, 1, g.m, f, chi) if abs(g.n) == 1 else \
                        residue_at_zero(1 if g.n > 0 else -1, abs(g.n), g.m, f, chi)
                if not cert.is_zero():
                    nonzero.append((lam, f, cert))
    inside = g.n == 0 or in_Ar(g.n, g.m, r)
    detail = "all certificates zero" if not nonzero else \
        f"{len(nonzero)} nonzero, e.g. lambda'={nonzero[0][0]}, f={nonzero[0][1]}: {nonzero[0][2]}"
    report.add("residue at 0 vanishes iff m > -n r", {"r": r, "d": d, "g": str(g), "in A^(r)": inside},
               (not nonzero) == inside, detail=detail)
    return report
