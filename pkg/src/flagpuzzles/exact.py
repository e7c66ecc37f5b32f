"""Exact arithmetic over fields of multivariate rational functions.

Two variable regimes, chosen by a :class:`VarSet`:

* mode ``"K"``: variables ``q, z1..zn`` with exponents in ``Z`` (Laurent);
* mode ``"H"``: variables ``hbar, x1..xn`` with exponents in ``N``.

A :class:`Scalar` is a quotient ``num/den`` of sparse integer-coefficient
polynomials.  Scalars are kept in a canonical form (no zero coefficients,
joint monomial shift, coprime integer contents, positive leading denominator
coefficient) but are deliberately *not* reduced to lowest terms: no
multivariate GCD is ever computed.  Equality is decided by
cross-multiplication, with a seeded random-evaluation pre-filter that can
only rule equality out, never confirm it.

Polynomials are plain dicts mapping exponent tuples to nonzero ints; the
``p_*`` helpers operate on these and are reused by the higher layers for
common-denominator bookkeeping.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction as Q
from math import gcd

__all__ = [
    "VarSet",
    "Scalar",
    "DivergentLimit",
    "VanishingDenominator",
    "reduced",
    "p_add",
    "p_sub",
    "p_neg",
    "p_mul",
    "p_scale",
    "p_const",
    "p_exact_div",
    "p_eval",
    "p_render",
]

_EVAL_PRIME = (1 << 61) - 1


class VanishingDenominator(ZeroDivisionError):
    """A denominator became identically zero (division or substitution)."""


class DivergentLimit(ArithmeticError):
    """A q-limit does not exist; carries the offending leading exponent."""

    def __init__(self, message: str, leading_exponent: int):
        super().__init__(message)
        self.leading_exponent = leading_exponent


@dataclass(frozen=True)
class VarSet:
    """Variable universe: mode "K" gives (q, z1..zn), mode "H" (hbar, x1..xn)."""

    mode: str
    n: int

    def __post_init__(self):
        if self.mode not in ("K", "H"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.n < 0:
            raise ValueError("n must be nonnegative")

    @property
    def names(self) -> tuple[str, ...]:
        if self.mode == "K":
            return ("q",) + tuple(f"z{i}" for i in range(1, self.n + 1))
        return ("hbar",) + tuple(f"x{i}" for i in range(1, self.n + 1))

    @property
    def k(self) -> int:
        # number of variables including the distinguished first one
        return self.n + 1

    @property
    def laurent(self) -> bool:
        return self.mode == "K"

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"variable {name!r} not in {self.names}") from None


# ---------------------------------------------------------------------------
# polynomial layer: dict[tuple[int,...], int], zero coefficients never stored


def p_const(k: int, c: int) -> dict:
    return {(0,) * k: c} if c else {}


def p_add(a: dict, b: dict) -> dict:
    if not a:
        return dict(b)
    out = dict(a)
    for e, c in b.items():
        s = out.get(e, 0) + c
        if s:
            out[e] = s
        else:
            out.pop(e, None)
    return out


def p_neg(a: dict) -> dict:
    return {e: -c for e, c in a.items()}


def p_sub(a: dict, b: dict) -> dict:
    return p_add(a, p_neg(b))


def p_scale(a: dict, c: int) -> dict:
    if not c:
        return {}
    return {e: c * x for e, x in a.items()}


def p_mul(a: dict, b: dict) -> dict:
    if not a or not b:
        return {}
    if len(a) > len(b):
        a, b = b, a
    out: dict = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            s = out.get(e, 0) + ca * cb
            if s:
                out[e] = s
            else:
                del out[e]
    return out


def p_content(a: dict) -> int:
    g = 0
    for c in a.values():
        g = gcd(g, c)
        if g == 1:
            break
    return g


def _var_span(a: dict, k: int):
    lo = list(next(iter(a.keys())))
    hi = list(lo)
    for e in a:
        for v in range(k):
            if e[v] < lo[v]:
                lo[v] = e[v]
            if e[v] > hi[v]:
                hi[v] = e[v]
    return lo, hi


def _root_reject(a: dict, b: dict, k: int) -> bool:
    """True if a is certainly not divisible by b.

    Picks a variable occurring with exponent 1 in exactly one term of b,
    solves b = 0 at a seeded random point mod p for that variable, and
    evaluates a there: a nonzero value rules the division out in O(|a|).
    A false pass only means the long division below runs and fails.
    """
    pivot = -1
    for v in range(k):
        hits = [e for e in b if e[v]]
        if len(hits) == 1 and hits[0][v] == 1:
            pivot = v
            pivot_e = hits[0]
            break
    if pivot < 0:
        return False
    p = _EVAL_PRIME
    rng = random.Random(f"divroot:{sorted(b.items())!r}")
    vals = [rng.randrange(2, p - 2) for _ in range(k)]

    def mono(e, skip_pivot):
        m = 1
        for v, x in enumerate(e):
            if v == pivot and skip_pivot:
                continue
            if x:
                m = m * pow(vals[v], x % (p - 1), p) % p
        return m

    rest = 0
    lead = 0
    for e, c in b.items():
        if e == pivot_e:
            lead = c * mono(e, True) % p
        else:
            rest = (rest + c * mono(e, False)) % p
    if lead == 0:
        return False
    vals[pivot] = -rest * pow(lead, -1, p) % p
    if vals[pivot] == 0:  # root degenerated; stay inconclusive
        return False
    total = 0
    for e, c in a.items():
        total = (total + c * mono(e, False)) % p
    return total != 0


def p_exact_div(a: dict, b: dict) -> dict | None:
    """Quotient a/b if b divides a exactly, else None.

    Long division by the lex-leading term of b.  For a true quotient every
    quotient exponent lies in the per-variable box determined by the spans
    of a and b, which also bounds the number of steps.
    """
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if not a:
        return {}
    k = len(next(iter(a.keys())))
    alo, ahi = _var_span(a, k)
    blo, bhi = _var_span(b, k)
    qlo = [x - y for x, y in zip(alo, blo)]
    qhi = [x - y for x, y in zip(ahi, bhi)]
    if any(l > h for l, h in zip(qlo, qhi)):
        return None
    if len(a) > 16 and len(b) > 1 and _root_reject(a, b, k):
        return None
    eb = max(b)
    cb = b[eb]
    rem = dict(a)
    quot: dict = {}
    # each step emits one quotient term, strictly decreasing in lex order
    while rem:
        ea = max(rem)
        ca = rem[ea]
        if ca % cb:
            return None
        eq = tuple(x - y for x, y in zip(ea, eb))
        if any(e < l or e > h for e, l, h in zip(eq, qlo, qhi)):
            return None
        cq = ca // cb
        quot[eq] = cq
        for e, c in b.items():
            key = tuple(x + y for x, y in zip(eq, e))
            s = rem.get(key, 0) - cq * c
            if s:
                rem[key] = s
            else:
                rem.pop(key, None)
    return quot


def p_eval(a: dict, point) -> Q:
    """Evaluate at a sequence of Fractions (Laurent exponents allowed)."""
    total = Q(0)
    for e, c in a.items():
        v = Q(c)
        for x, ex in zip(point, e):
            if ex:
                v *= Q(x) ** ex
        total += v
    return total


def _p_eval_mod(a: dict, point: tuple[int, ...], p: int) -> int:
    total = 0
    for e, c in a.items():
        v = c % p
        for x, ex in zip(point, e):
            if ex:
                v = v * pow(x, ex, p) % p
        total = (total + v) % p
    return total


def p_render(a: dict, names: tuple[str, ...]) -> str:
    if not a:
        return "0"
    bits = []
    for e in sorted(a, reverse=True):
        c = a[e]
        factors = []
        for name, ex in zip(names, e):
            if ex == 1:
                factors.append(name)
            elif ex:
                factors.append(f"{name}^{ex}")
        if not factors:
            term = str(abs(c))
        else:
            mono = "*".join(factors)
            term = mono if abs(c) == 1 else f"{abs(c)}*{mono}"
        if not bits:
            bits.append(term if c > 0 else f"-{term}")
        else:
            bits.append(f"+ {term}" if c > 0 else f"- {term}")
    return " ".join(bits)


# ---------------------------------------------------------------------------


def _eval_point(vs: VarSet) -> tuple[int, ...]:
    rng = random.Random(f"eqfilter:{vs.mode}:{vs.n}")
    return tuple(rng.randrange(2, _EVAL_PRIME - 2) for _ in range(vs.k))


class Scalar:
    """Element of the rational-function field over a VarSet."""

    __slots__ = ("vs", "num", "den")

    def __init__(self, vs: VarSet, num: dict, den: dict):
        num = {e: c for e, c in num.items() if c}
        den = {e: c for e, c in den.items() if c}
        if not den:
            raise VanishingDenominator("zero denominator")
        if not num:
            den = p_const(vs.k, 1)
        else:
            # joint monomial shift: per variable, drop the common minimum
            # exponent of num and den (divides both by the same monomial)
            k = vs.k
            nlo, _ = _var_span(num, k)
            dlo, _ = _var_span(den, k)
            shift = tuple(min(x, y) for x, y in zip(nlo, dlo))
            if any(shift):
                num = {tuple(x - s for x, s in zip(e, shift)): c for e, c in num.items()}
                den = {tuple(x - s for x, s in zip(e, shift)): c for e, c in den.items()}
            g = gcd(p_content(num), p_content(den))
            if den[max(den)] < 0:
                g = -g
            if g != 1:
                num = {e: c // g for e, c in num.items()}
                den = {e: c // g for e, c in den.items()}
        self.vs = vs
        self.num = num
        self.den = den

    # -- constructors ------------------------------------------------------

    @classmethod
    def const(cls, vs: VarSet, value) -> "Scalar":
        value = Q(value)
        return cls(vs, p_const(vs.k, value.numerator), p_const(vs.k, value.denominator))

    @classmethod
    def zero(cls, vs: VarSet) -> "Scalar":
        return cls(vs, {}, p_const(vs.k, 1))

    @classmethod
    def one(cls, vs: VarSet) -> "Scalar":
        return cls.const(vs, 1)

    @classmethod
    def var(cls, vs: VarSet, name: str, power: int = 1) -> "Scalar":
        e = [0] * vs.k
        e[vs.index(name)] = power
        if power >= 0 or vs.laurent:
            return cls(vs, {tuple(e): 1}, p_const(vs.k, 1))
        # H mode keeps exponents nonnegative by moving them downstairs
        e[vs.index(name)] = -power
        return cls(vs, p_const(vs.k, 1), {tuple(e): 1})

    @classmethod
    def monomial(cls, vs: VarSet, exps: dict[str, int], coeff: int = 1) -> "Scalar":
        e = [0] * vs.k
        for name, p in exps.items():
            e[vs.index(name)] = p
        return cls(vs, {tuple(e): coeff}, p_const(vs.k, 1))

    # -- predicates --------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.num

    def is_one(self) -> bool:
        return self.num == self.den

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other) -> "Scalar":
        if isinstance(other, Scalar):
            if other.vs != self.vs:
                raise ValueError("VarSet mismatch")
            return other
        if isinstance(other, (int, Q)):
            return Scalar.const(self.vs, other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self.den == o.den:
            return Scalar(self.vs, p_add(self.num, o.num), self.den)
        return Scalar(
            self.vs,
            p_add(p_mul(self.num, o.den), p_mul(o.num, self.den)),
            p_mul(self.den, o.den),
        )

    __radd__ = __add__

    def __neg__(self):
        return Scalar(self.vs, p_neg(self.num), self.den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Scalar(self.vs, p_mul(self.num, o.num), p_mul(self.den, o.den))

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        if self.is_zero():
            raise VanishingDenominator("inverting zero")
        return Scalar(self.vs, self.den, self.num)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if k == 0:
            return Scalar.one(self.vs)
        base = self if k > 0 else self.inverse()
        out = base
        for _ in range(abs(k) - 1):
            out = out * base
        return out

    # -- equality ----------------------------------------------------------

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self.den == o.den:
            # canonical forms with one denominator represent one value
            # exactly when the numerators agree termwise
            return self.num == o.num
        # seeded random evaluation: can only refute equality
        pt = _eval_point(self.vs)
        p = _EVAL_PRIME
        lhs = _p_eval_mod(self.num, pt, p) * _p_eval_mod(o.den, pt, p) % p
        rhs = _p_eval_mod(o.num, pt, p) * _p_eval_mod(self.den, pt, p) % p
        if lhs != rhs:
            return False
        # confirm by cross-multiplication
        return p_mul(self.num, o.den) == p_mul(o.num, self.den)

    __hash__ = None  # mathematical equality is not hash-compatible

    # -- structure ---------------------------------------------------------

    def substitute(self, mapping: dict) -> "Scalar":
        """Simultaneous substitution; a field homomorphism on its image.

        Values may be Scalars (of a common VarSet), ints or Fractions.
        Raises VanishingDenominator, naming the offending factor, if the
        denominator of self vanishes under the substitution.
        """
        target = None
        vals: dict[int, Scalar] = {}
        for name, v in mapping.items():
            i = self.vs.index(name)
            if isinstance(v, Scalar):
                if target is None:
                    target = v.vs
                elif v.vs != target:
                    raise ValueError("substitution values disagree on VarSet")
                vals[i] = v
            else:
                vals[i] = v  # coerce once target is known
        if target is None:
            target = self.vs
        for i, v in list(vals.items()):
            if not isinstance(v, Scalar):
                vals[i] = Scalar.const(target, v)
        if target == self.vs:
            for i in range(self.vs.k):
                vals.setdefault(i, Scalar.var(self.vs, self.vs.names[i]))
        elif set(vals) != set(range(self.vs.k)):
            missing = [self.vs.names[i] for i in range(self.vs.k) if i not in vals]
            raise ValueError(f"substitution into a different VarSet must cover {missing}")

        simple = _monomial_substitution(self.vs, target, vals)
        if simple is not None:
            num = _apply_monomial_map(self.num, simple, target)
            den = _apply_monomial_map(self.den, simple, target)
        else:
            num = _eval_poly_scalar(self.num, vals, target)
            den = _eval_poly_scalar(self.den, vals, target)
            if den.is_zero():
                raise VanishingDenominator(
                    f"denominator {p_render(self.den, self.vs.names)} vanishes under substitution"
                )
            return num / den
        if not den:
            raise VanishingDenominator(
                f"denominator {p_render(self.den, self.vs.names)} vanishes under substitution"
            )
        return Scalar(target, num, den)

    def limit_q(self, direction) -> "Scalar":
        """Limit q->0 (direction 0) or q->infinity (direction "inf").

        Works layer by layer in the q-adic valuation; raises DivergentLimit
        (carrying the leading exponent) when the limit does not exist.
        """
        if self.vs.mode != "K":
            raise ValueError("limit_q requires mode K")
        to_zero = direction in (0, "0")
        if not to_zero and direction not in ("inf", "infinity", "oo"):
            raise ValueError(f"unknown direction {direction!r}")
        if self.is_zero():
            return self
        if to_zero:
            a = min(e[0] for e in self.num)
            b = min(e[0] for e in self.den)
            if a < b:
                raise DivergentLimit(
                    f"q->0 limit divergent: leading exponent {a - b}", a - b
                )
        else:
            a = max(e[0] for e in self.num)
            b = max(e[0] for e in self.den)
            if a > b:
                raise DivergentLimit(
                    f"q->infinity limit divergent: leading exponent {a - b}", a - b
                )
        if a != b:
            return Scalar.zero(self.vs)
        num = {(0,) + e[1:]: c for e, c in self.num.items() if e[0] == a}
        den = {(0,) + e[1:]: c for e, c in self.den.items() if e[0] == b}
        return Scalar(self.vs, num, den)

    def homogeneous_degree(self):
        """Total degree num minus den if both are homogeneous, else None."""
        if self.vs.mode != "H":
            raise ValueError("homogeneity is an H-mode notion")
        if self.is_zero():
            return 0
        ndeg = {sum(e) for e in self.num}
        ddeg = {sum(e) for e in self.den}
        if len(ndeg) > 1 or len(ddeg) > 1:
            return None
        return ndeg.pop() - ddeg.pop()

    def is_homogeneous(self, degree: int) -> bool:
        if self.is_zero():
            return True
        return self.homogeneous_degree() == degree

    # -- evaluation, serialization, rendering ------------------------------

    def eval_at(self, point: dict[str, Q]) -> Q:
        vals = [Q(point[name]) for name in self.vs.names]
        d = p_eval(self.den, vals)
        if d == 0:
            raise VanishingDenominator(
                f"denominator {p_render(self.den, self.vs.names)} vanishes at {point}"
            )
        return p_eval(self.num, vals) / d

    def to_obj(self) -> dict:
        names = self.vs.names

        def side(p: dict) -> list:
            out = []
            for e in sorted(p):
                entry = {"c": str(p[e])}
                exps = {names[i]: x for i, x in enumerate(e) if x}
                entry["e"] = exps
                out.append(entry)
            return out

        return {"num": side(self.num), "den": side(self.den)}

    @classmethod
    def from_obj(cls, vs: VarSet, obj: dict) -> "Scalar":
        def side(terms: list) -> dict:
            p: dict = {}
            for t in terms:
                e = [0] * vs.k
                for name, x in t.get("e", {}).items():
                    x = int(x)
                    if x < 0 and not vs.laurent:
                        raise ValueError("negative exponent in H mode")
                    e[vs.index(name)] = x
                c = int(t["c"])
                key = tuple(e)
                p[key] = p.get(key, 0) + c
            return p

        return cls(vs, side(obj["num"]), side(obj["den"]))

    def __str__(self):
        n = p_render(self.num, self.vs.names)
        if self.den == p_const(self.vs.k, 1):
            return n
        d = p_render(self.den, self.vs.names)
        return f"({n}) / ({d})"

    def __repr__(self):
        return f"Scalar({self})"


def reduced(s: Scalar) -> Scalar:
    """Cancel common polynomial factors of num and den.

    Size control only: nothing downstream depends on values being in
    lowest terms (equality stays cross-multiplication based).  The field
    itself avoids multivariate gcd, so sympy does the canceling; iterated
    products and linear solves would otherwise drag around huge cofactors.
    """
    if len(s.num) <= 1 and len(s.den) <= 1:
        return s
    import sympy

    gens = sympy.symbols(s.vs.names)
    num = sympy.Poly.from_dict(s.num, *gens, domain=sympy.ZZ)
    den = sympy.Poly.from_dict(s.den, *gens, domain=sympy.ZZ)
    g = num.gcd(den)
    if g.is_one:
        return s
    nred = {e: int(c) for e, c in num.exquo(g).rep.to_dict().items()}
    dred = {e: int(c) for e, c in den.exquo(g).rep.to_dict().items()}
    return Scalar(s.vs, nred, dred)


def _monomial_substitution(src: VarSet, target: VarSet, vals: dict):
    """If every value is a +-1-coefficient monomial, return the exponent map."""
    table = {}
    for i, v in vals.items():
        if len(v.num) != 1 or len(v.den) != 1:
            return None
        (en, cn), = v.num.items()
        (ed, cd), = v.den.items()
        if cd != 1 or cn not in (1, -1):
            return None
        table[i] = (tuple(a - b for a, b in zip(en, ed)), cn)
    if set(table) != set(range(src.k)):
        return None
    return table


def _apply_monomial_map(p: dict, table: dict, target: VarSet) -> dict:
    out: dict = {}
    for e, c in p.items():
        acc = [0] * target.k
        sign = 1
        for i, x in enumerate(e):
            if not x:
                continue
            exps, s = table[i]
            if s < 0 and x % 2:
                sign = -sign
            for j, y in enumerate(exps):
                acc[j] += x * y
        key = tuple(acc)
        v = out.get(key, 0) + sign * c
        if v:
            out[key] = v
        else:
            out.pop(key, None)
    return out


def _eval_poly_scalar(p: dict, vals: dict, target: VarSet) -> Scalar:
    total = Scalar.zero(target)
    powers: dict[tuple[int, int], Scalar] = {}

    def power(i: int, x: int) -> Scalar:
        key = (i, x)
        got = powers.get(key)
        if got is None:
            got = vals[i] ** x
            powers[key] = got
        return got

    for e, c in p.items():
        term = Scalar.const(target, c)
        for i, x in enumerate(e):
            if x:
                term = term * power(i, x)
        total = total + term
    return total
