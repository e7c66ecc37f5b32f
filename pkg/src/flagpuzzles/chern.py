"""Fixed-point model of d-step flag varieties and their cotangent bundles.

Classes are indexed by strings over {0..d} (letter i = which step of the
flag a coordinate line lands in); the torus fixed points are the distinct
rearrangements of the content.  A class is stored through its restrictions
to all fixed points: an associative map string -> Scalar.

Restrictions are computed as transfer-matrix evaluations of the
single-number R-matrix along a wiring diagram of the fixed point, one
crossing per inversion.  Two independent implementations are provided
(wiring sweep and exchange-relation recursion) plus a third R-matrix
(nilHecke) whose sweeps give Grothendieck/Schubert restrictions directly;
they cross-check each other and the q->0 twist limit.

Modes: "K" (multiplicative, variables q, z1..zn) and "H" (additive,
variables hbar, x1..xn).

Everything here is single-threaded; the per-content master tables are
memoized module-wide, so concurrent use would need external locking.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache

from sympy.utilities.iterables import multiset_permutations

from .exact import Scalar, VarSet, p_const, p_exact_div, p_mul, p_sub, reduced

__all__ = [
    "RestrictionTable",
    "CoeffExpansion",
    "InconsistentRecursion",
    "content_of",
    "all_strings",
    "inversions",
    "coinversions",
    "bruhat_leq",
    "solve_order",
    "restrict_S",
    "restrict_S_dual",
    "restrict_via_recursion",
    "kappa_table",
    "kappa_dual_table",
    "stable_class",
    "stable_class_dual",
    "euler_value",
    "pushforward",
    "pointwise_product",
    "expand_product",
    "twist_exponent",
    "schubert_restrict",
    "schubert_expand",
]


class InconsistentRecursion(ValueError):
    """Exchange recursion reached a fixed point twice with different values."""


# ---------------------------------------------------------------------------
# strings and Bruhat order


def content_of(s: str) -> str:
    """Weakly increasing rearrangement (the letter multiset, as a string)."""
    return "".join(sorted(s))


def dominant_of(s: str) -> str:
    """Weakly decreasing rearrangement."""
    return "".join(sorted(s, reverse=True))


@lru_cache(maxsize=None)
def all_strings(content: str) -> tuple[str, ...]:
    """Distinct rearrangements of the content, by (inversions, lex)."""
    if content != content_of(content):
        raise ValueError(f"content must be weakly increasing, got {content!r}")
    out = ["".join(p) for p in multiset_permutations(list(content))]
    out.sort(key=lambda s: (inversions(s), s))
    return tuple(out)


def inversions(s: str) -> int:
    """Number of pairs i<j with s_i > s_j (the coset length)."""
    return sum(1 for i in range(len(s)) for j in range(i + 1, len(s)) if s[i] > s[j])


def coinversions(s: str) -> int:
    """Number of pairs i<j with s_i < s_j; the length of the reversed string."""
    return inversions(s[::-1])


def bruhat_leq(sigma: str, tau: str) -> bool:
    """Dominance criterion for Bruhat order on strings of equal content.

    sigma <= tau iff every prefix of sigma has, for every threshold t,
    at most as many letters >= t as the same prefix of tau.  The weakly
    increasing string is the minimum, the weakly decreasing one the
    maximum.  Validated elsewhere against the covering-relation closure.
    """
    if content_of(sigma) != content_of(tau):
        raise ValueError(f"content mismatch: {sigma!r} vs {tau!r}")
    letters = sorted(set(sigma))
    a = b = 0
    for t in letters[1:]:
        a = b = 0
        for x, y in zip(sigma, tau):
            a += x >= t
            b += y >= t
            if a > b:
                return False
    return True


def solve_order(content: str) -> tuple[str, ...]:
    """The linear extension of Bruhat order used by triangular solves."""
    return all_strings(content)


def _varset(content: str, mode: str) -> VarSet:
    return VarSet(mode, len(content))


def _zvars(vs: VarSet) -> list[Scalar]:
    # 1-based: _zvars(vs)[i] is z_i (K) or x_i (H)
    return [None] + [Scalar.var(vs, name) for name in vs.names[1:]]


def _sigma_bar(s: str) -> tuple[int, ...]:
    """Bottom parameter assignment of the wiring diagram of s.

    bar[j] (1-based) is the position in s of the letter that the stable
    sort sends to slot j of the weakly increasing boundary; bottom slot j
    carries spectral parameter z_{bar[j]}.  Of the two inverse
    conventions the fixtures admit, this is the one matching the printed
    diagonal restrictions (the two-letter tables cannot tell them apart).
    """
    order = sorted(range(len(s)), key=lambda j: (s[j], j))
    return tuple(j + 1 for j in order)


# ---------------------------------------------------------------------------
# wiring words

# A word is a list of 0-based positions p, each crossing slots (p, p+1),
# read top to bottom.  Applied to the top parameter list (1..n) it must
# produce the bottom parameter list; reduced words arise from sorting
# networks where each pair of wires crosses at most once.


def _word_to(target: tuple[int, ...], scheme: int = 0) -> list[int]:
    """Reduced word turning (1..n) into target by adjacent swaps."""
    n = len(target)
    cur = list(range(1, n + 1))
    word: list[int] = []
    if scheme == 0:
        # insertion: bring target[i] to slot i, left over the smaller block
        for i in range(n):
            j = cur.index(target[i])
            for p in range(j - 1, i - 1, -1):
                cur[p], cur[p + 1] = cur[p + 1], cur[p]
                word.append(p)
    elif scheme == 1:
        # bubble passes; same crossings, different order
        rank = {v: i for i, v in enumerate(target)}
        changed = True
        while changed:
            changed = False
            for p in range(n - 1):
                if rank[cur[p]] > rank[cur[p + 1]]:
                    cur[p], cur[p + 1] = cur[p + 1], cur[p]
                    word.append(p)
                    changed = True
    else:
        raise ValueError(f"unknown word scheme {scheme}")
    assert cur == list(target)
    return word


# ---------------------------------------------------------------------------
# crossing weights

# Values of one crossing, top letters (k,l) -> bottom letters (i,j), with
# spectral parameters a (left wire) and b (right wire) read above the
# crossing.  All weights are cleared to the common denominator den(a,b);
# sweeps multiply the cleared numerators and divide once at the end.
#
#   kind "K":   den = a - q^2 b;  equal letters: den;
#               stay k<l: (1-q^2)a;  stay k>l: (1-q^2)b;  exchange: q(a-b)
#   kind "H":   den = hbar + a - b;  equal: den;  stay: hbar;  exchange: b-a
#   kind "nil": den = a;  equal or stay k<l: a;  stay k>l: b;
#               exchange only for k>l: a-b     (q->0 limit of twisted "K")


def _cross_maps(vs: VarSet, kind: str, alphabet: str, a: Scalar, b: Scalar):
    """(den, down, up): transfer maps of one crossing.

    down[(k, l)] lists ((i, j), w) over bottom pairs reachable from top
    (k, l); up[(i, j)] lists ((k, l), w) over top pairs feeding bottom
    (i, j).  Weights w are the cleared numerators.
    """
    if kind == "K":
        q = Scalar.var(vs, "q")
        den = a - q * q * b
        stay_lo, stay_hi = (1 - q * q) * a, (1 - q * q) * b
        exch_lo = exch_hi = q * (a - b)
    elif kind == "H":
        h = Scalar.var(vs, "hbar")
        den = h + a - b
        stay_lo = stay_hi = h
        exch_lo = exch_hi = b - a
    elif kind == "nil":
        den = a
        stay_lo, stay_hi = a, b
        exch_lo, exch_hi = None, a - b  # no exchange off an ascent
    else:
        raise ValueError(f"unknown crossing kind {kind!r}")
    down: dict = {}
    up: dict = {}
    for k in alphabet:
        for l in alphabet:
            if k == l:
                entries = [((k, l), den)]
            elif k < l:
                entries = [((k, l), stay_lo)]
                if exch_lo is not None:
                    entries.append(((l, k), exch_lo))
            else:
                entries = [((k, l), stay_hi)]
                if exch_hi is not None:
                    entries.append(((l, k), exch_hi))
            down[(k, l)] = entries
            for (i, j), w in entries:
                up.setdefault((i, j), []).append(((k, l), w))
    return den, down, up


def _apply_word(vs, kind, word, params, state, transpose):
    """Sweep a state dict {string: Scalar} through the crossings of word.

    params is the top parameter list (variable indices).  With
    transpose=False the state lives on the top boundary and is pushed
    down; with transpose=True it lives on the bottom boundary and is
    pulled up (crossings applied in reverse, transposed).  Returns
    (state, dens) with the cleared denominators as a list of linear
    factors, one per crossing.
    """
    zs = _zvars(vs)
    alphabet = "".join(sorted({c for s in state for c in s}))
    P = list(params)
    steps = []
    for p in word:
        steps.append((p, P[p], P[p + 1]))
        P[p], P[p + 1] = P[p + 1], P[p]
    if transpose:
        steps.reverse()
    dens: list[Scalar] = []
    for p, ia, ib in steps:
        dfac, down, up = _cross_maps(vs, kind, alphabet, zs[ia], zs[ib])
        dens.append(dfac)
        table = up if transpose else down
        new: dict[str, Scalar] = {}
        for s, c in state.items():
            for (x, y), w in table[(s[p], s[p + 1])]:
                t = s[:p] + x + y + s[p + 2 :]
                acc = new.get(t)
                new[t] = c * w if acc is None else acc + c * w
        state = {t: v for t, v in new.items() if not v.is_zero()}
    return state, dens


# All denominators in this module are products of primitive linear
# factors (one per wiring crossing), so reduction to lowest terms never
# needs a gcd: it is a sequence of exact-division attempts.  Factors are
# interned by a hashable key so multisets of them compare and merge
# cheaply.

_FACTOR_BY_KEY: dict[tuple, dict] = {}


def _reg(f: dict) -> tuple:
    """Intern a polynomial factor, returning its multiset key."""
    key = tuple(sorted(f.items()))
    _FACTOR_BY_KEY.setdefault(key, f)
    return key


def _cancel(num: dict, fdicts) -> tuple[dict, list]:
    """Divide num by whichever factors divide exactly; return survivors."""
    kept = []
    for f in fdicts:
        g = p_exact_div(num, f)
        if g is None:
            kept.append(f)
        else:
            num = g
    return num, kept


def _assemble(vs: VarSet, val: Scalar, dens) -> Scalar:
    """val divided by the product of linear factors, in lowest terms.

    val must be polynomial (the cleared numerator of a sweep).  Each
    factor is primitive and linear in some variable, so cancellation
    reduces to exact-division attempts; whatever survives multiplies
    into the denominator.
    """
    assert len(val.den) == 1
    num, kept = _cancel(val.num, [f.num for f in dens])
    rest = p_const(vs.k, 1)
    for f in kept:
        rest = p_mul(rest, f)
    return Scalar(vs, num, rest)


def _swap_vars(s: Scalar, a: int, b: int) -> Scalar:
    """Transpose two variable slots in every exponent of s."""

    def sw(p: dict) -> dict:
        out = {}
        for e, c in p.items():
            l = list(e)
            l[a], l[b] = l[b], l[a]
            out[tuple(l)] = c
        return out

    return Scalar(s.vs, sw(s.num), sw(s.den))


# A factored rational ("fr") is a pair (num, fac): polynomial dict over
# the product of the interned factors in the multiset key tuple fac.
# Additions align denominators by multiset lcm and re-cancel, so values
# stay in lowest terms without any gcd computation.

_FR_ZERO = ({}, ())


def _fr_scalar(vs: VarSet, a) -> Scalar:
    num, fac = a
    den = p_const(vs.k, 1)
    for key in fac:
        den = p_mul(den, _FACTOR_BY_KEY[key])
    return Scalar(vs, num, den)


def _fr_mul(a, b):
    na, fa = a
    nb, fb = b
    if not na or not nb:
        return _FR_ZERO
    return p_mul(na, nb), tuple(sorted(fa + fb))


def _fr_sub(a, b):
    na, fa = a
    nb, fb = b
    if not nb:
        return a
    ca, cb = Counter(fa), Counter(fb)
    lcm = ca | cb
    for key, m in (lcm - ca).items():
        for _ in range(m):
            na = p_mul(na, _FACTOR_BY_KEY[key])
    for key, m in (lcm - cb).items():
        for _ in range(m):
            nb = p_mul(nb, _FACTOR_BY_KEY[key])
    num = p_sub(na, nb)
    if not num:
        return _FR_ZERO
    num, kept = _cancel(num, [_FACTOR_BY_KEY[k] for k in sorted(lcm.elements())])
    return num, tuple(_reg(f) for f in kept)


@lru_cache(maxsize=None)
def _linear_candidates(mode: str, n: int) -> tuple:
    """Primitive linear polynomials that can divide diagonal numerators."""
    vs = VarSet(mode, n)
    zs = _zvars(vs)
    out = []
    if mode == "K":
        q = Scalar.var(vs, "q")
        for u in range(1, n + 1):
            for v in range(u + 1, n + 1):
                out.append((zs[u] - zs[v]).num)
                out.append((zs[u] - q * q * zs[v]).num)
                out.append((zs[v] - q * q * zs[u]).num)
    else:
        h = Scalar.var(vs, "hbar")
        for u in range(1, n + 1):
            for v in range(u + 1, n + 1):
                out.append((zs[u] - zs[v]).num)
                out.append((h + zs[u] - zs[v]).num)
                out.append((h + zs[v] - zs[u]).num)
    return tuple(out)


@lru_cache(maxsize=None)
def _master_factored(content: str, kind: str, scheme: int = 0):
    """All direct restrictions, in factored form.

    {sigma: {lam: (num, fac)}} with num a polynomial dict and fac the
    multiset key tuple of surviving linear denominator factors; the
    value is num over the product of the factors, in lowest terms.
    """
    vs = _varset(content, "K" if kind == "nil" else kind)
    out = {}
    for sigma in all_strings(content):
        bar = _sigma_bar(sigma)
        word = _word_to(bar, scheme)
        n = len(content)
        state, dens = _apply_word(
            vs, kind, word, range(1, n + 1), {content: Scalar.one(vs)}, True
        )
        fdicts = [f.num for f in dens]
        col = {}
        for lam, v in state.items():
            num, kept = _cancel(v.num, fdicts)
            col[lam] = (num, tuple(sorted(_reg(f) for f in kept)))
        out[sigma] = col
    return out


@lru_cache(maxsize=None)
def _master(content: str, kind: str, scheme: int = 0):
    """All direct restrictions of one content: {sigma: {lam: Scalar}}.

    Column sigma is one transposed sweep: the functional on the weakly
    increasing bottom boundary is pulled up through the wiring of sigma,
    and its top coefficients are the values S^lam|_sigma for every lam.
    Missing keys are exact zeros (Bruhat triangularity).
    """
    vs = _varset(content, "K" if kind == "nil" else kind)
    out = {}
    for sigma, col in _master_factored(content, kind, scheme).items():
        out[sigma] = {lam: _fr_scalar(vs, v) for lam, v in col.items()}
    return out


@lru_cache(maxsize=None)
def _master_dual(content: str, kind: str, scheme: int = 0):
    """All dual restrictions: {sigma: {lam: S_lam|_sigma}}.

    The dual class puts the weakly decreasing string on the top boundary,
    with top slot i carrying z_{bar(n+1-i)}, and reads the coefficient of
    e_lam on the bottom boundary at parameters (z_1..z_n); one forward
    sweep per sigma yields the whole column.
    """
    vs = _varset(content, "K" if kind == "nil" else kind)
    alpha = dominant_of(content)
    out = {}
    for sigma in all_strings(content):
        bar = _sigma_bar(sigma)
        top = tuple(reversed(bar))
        # word sorting the top parameter list into (1..n): conjugate the
        # sorting word of top by the ambient relabeling
        word = _sort_to_identity(top)
        state, dens = _apply_word(vs, kind, word, top, {alpha: Scalar.one(vs)}, False)
        out[sigma] = {lam: _assemble(vs, v, dens) for lam, v in state.items()}
    return out


def _sort_to_identity(start: tuple[int, ...]) -> list[int]:
    """Reduced word turning the list start into (1..n) by adjacent swaps."""
    cur = list(start)
    n = len(cur)
    word: list[int] = []
    for i in range(n):
        j = cur.index(i + 1)
        for p in range(j - 1, i - 1, -1):
            cur[p], cur[p + 1] = cur[p + 1], cur[p]
            word.append(p)
    assert cur == list(range(1, n + 1))
    return word


# ---------------------------------------------------------------------------
# restriction tables


@dataclass
class RestrictionTable:
    """Restrictions of one class to every fixed point of its content."""

    d: int
    n: int
    content: str
    mode: str
    values: dict[str, Scalar]

    def __getitem__(self, sigma: str) -> Scalar:
        return self.values[sigma]

    def items(self):
        return [(s, self.values[s]) for s in all_strings(self.content)]


def _table(content: str, mode: str, values: dict[str, Scalar]) -> RestrictionTable:
    vs = _varset(content, mode)
    zero = Scalar.zero(vs)
    full = {s: values.get(s, zero) for s in all_strings(content)}
    return RestrictionTable(int(max(content)), len(content), content, mode, full)


def restrict_S(lam: str, mode: str = "K") -> RestrictionTable:
    """Restrictions S^lam|_sigma of the direct class, by wiring sweeps."""
    content = content_of(lam)
    master = _master(content, mode)
    return _table(content, mode, {s: col[lam] for s, col in master.items() if lam in col})


def restrict_S_dual(lam: str, mode: str = "K") -> RestrictionTable:
    """Restrictions S_lam|_sigma of the dual class."""
    content = content_of(lam)
    master = _master_dual(content, mode)
    return _table(content, mode, {s: col[lam] for s, col in master.items() if lam in col})


def schubert_restrict(lam: str) -> RestrictionTable:
    """Grothendieck/Schubert restrictions by the nilHecke wiring (q-free)."""
    content = content_of(lam)
    master = _master(content, "nil")
    return _table(content, "K", {s: col[lam] for s, col in master.items() if lam in col})


def twist_exponent(lam: str) -> int:
    """Power of q separating a direct class from its Schubert limit."""
    return inversions(lam)


# ---------------------------------------------------------------------------
# exchange-relation recursion (independent of the wiring sweeps)


@lru_cache(maxsize=None)
def _recursion_tables(content: str, mode: str):
    """Columns {sigma: {lam: value}} grown by exchange relations.

    Base: at the weakly increasing fixed point the column is the
    indicator of omega (triangularity plus the normalized diagonal).
    Step: the column at sigma*tau_i is a two-term combination of the
    column at sigma followed by the variable swap z_i <-> z_{i+1}.  The
    combination is carried in cleared form, polynomial numerators over a
    shared list of linear denominator factors, so no rational additions
    happen mid-stream.  Every available descent is used and compared; a
    disagreement raises InconsistentRecursion.
    """
    vs = _varset(content, mode)
    zs = _zvars(vs)
    one = Scalar.one(vs)
    strings = all_strings(content)
    if mode == "K":
        q = Scalar.var(vs, "q")

        def weights(i):
            # cleared over den_w = z_{i+1} - q^2 z_i (0-based i); stays
            # multiply S^lam|_sigma, exch multiplies the letter flip
            den_w = zs[i + 2] - q * q * zs[i + 1]
            stay_asc = (1 - q * q) * zs[i + 2]
            stay_desc = (1 - q * q) * zs[i + 1]
            return den_w, stay_asc, stay_desc, q * (zs[i + 2] - zs[i + 1])
    else:
        h = Scalar.var(vs, "hbar")

        def weights(i):
            den_w = h + zs[i + 2] - zs[i + 1]  # hbar + x_{i+1} - x_i
            return den_w, h, h, zs[i + 1] - zs[i + 2]

    raw: dict[str, tuple[dict[str, Scalar], list[Scalar]]] = {
        content: ({content: one}, [])
    }
    columns: dict[str, dict[str, Scalar]] = {content: {content: one}}
    for tgt in strings[1:]:
        candidates = []
        for i in range(len(tgt) - 1):
            if tgt[i] <= tgt[i + 1]:
                continue
            src = tgt[:i] + tgt[i + 1] + tgt[i] + tgt[i + 2 :]
            nums_src, dens_src = raw[src]
            den_w, stay_asc, stay_desc, exch = weights(i)
            a, b = i + 1, i + 2  # exponent slots of z_i and z_{i+1}
            nums: dict[str, Scalar] = {}
            for lam in strings:
                li, lj = lam[i], lam[i + 1]
                if li == lj:
                    v = nums_src.get(lam)
                    val = None if v is None else den_w * v
                else:
                    flip = lam[:i] + lj + li + lam[i + 2 :]
                    stay = stay_asc if li < lj else stay_desc
                    v, w = nums_src.get(lam), nums_src.get(flip)
                    if v is None and w is None:
                        val = None
                    elif w is None:
                        val = stay * v
                    elif v is None:
                        val = exch * w
                    else:
                        val = stay * v + exch * w
                if val is not None and not val.is_zero():
                    nums[lam] = _swap_vars(val, a, b)
            dens = [_swap_vars(f, a, b) for f in [den_w] + dens_src]
            key = sorted(tuple(sorted(f.num.items())) for f in dens)
            candidates.append((i, nums, dens, key))
        i0, nums0, dens0, key0 = candidates[0]
        for i, nums, dens, key in candidates[1:]:
            if key == key0:
                # identical denominators: cleared numerators must agree
                same = nums == nums0
            else:
                col = {lam: _assemble(vs, v, dens) for lam, v in nums.items()}
                ref = {lam: _assemble(vs, v, dens0) for lam, v in nums0.items()}
                same = col == ref
            if not same:
                raise InconsistentRecursion(
                    f"columns at {tgt} via descents {i0} and {i} disagree"
                )
        raw[tgt] = (nums0, dens0)
        columns[tgt] = {lam: _assemble(vs, v, dens0) for lam, v in nums0.items()}
    return columns


def restrict_via_recursion(lam: str, mode: str = "K") -> RestrictionTable:
    """Restrictions from the diagonal-and-exchange characterization."""
    content = content_of(lam)
    cols = _recursion_tables(content, mode)
    return _table(content, mode, {s: col[lam] for s, col in cols.items() if lam in col})


# ---------------------------------------------------------------------------
# kappa, stable classes, Euler classes, pushforward


def _kappa_value(vs, tau: str, dual: bool) -> Scalar:
    """Restriction of the zero-section class (dual: its opposite twin).

    One factor per ordered position pair (u,v) with tau_u < tau_v:
      K:  1 - q^2 z_u/z_v     (dual:  q(1 - q^-2 z_v/z_u))
      H:  hbar + x_v - x_u    (dual: the same; the K monomial ratio
                               degenerates to 1 in the additive limit)
    """
    zs = _zvars(vs)
    out = Scalar.one(vs)
    if vs.mode == "K":
        q = Scalar.var(vs, "q")
        for u in range(len(tau)):
            for v in range(len(tau)):
                if tau[u] < tau[v]:
                    if dual:
                        out = out * q * (1 - zs[v + 1] / (q * q * zs[u + 1]))
                    else:
                        out = out * (1 - q * q * zs[u + 1] / zs[v + 1])
    else:
        h = Scalar.var(vs, "hbar")
        for u in range(len(tau)):
            for v in range(len(tau)):
                if tau[u] < tau[v]:
                    out = out * (h + zs[v + 1] - zs[u + 1])
    return out


def kappa_table(content: str, mode: str = "K") -> RestrictionTable:
    vs = _varset(content, mode)
    return _table(
        content, mode, {s: _kappa_value(vs, s, False) for s in all_strings(content)}
    )


def kappa_dual_table(content: str, mode: str = "K") -> RestrictionTable:
    vs = _varset(content, mode)
    return _table(
        content, mode, {s: _kappa_value(vs, s, True) for s in all_strings(content)}
    )


def pointwise_product(a: RestrictionTable, b: RestrictionTable) -> RestrictionTable:
    if (a.content, a.mode) != (b.content, b.mode):
        raise ValueError("tables live on different spaces")
    return _table(
        a.content, a.mode, {s: a.values[s] * b.values[s] for s in a.values}
    )


def stable_class(lam: str, mode: str = "K") -> RestrictionTable:
    """kappa * S^lam: the class supported above lam with normalized diagonal."""
    return pointwise_product(kappa_table(content_of(lam), mode), restrict_S(lam, mode))


def stable_class_dual(lam: str, mode: str = "K") -> RestrictionTable:
    return pointwise_product(
        kappa_dual_table(content_of(lam), mode), restrict_S_dual(lam, mode)
    )


def euler_value(sigma: str, mode: str = "K") -> Scalar:
    """Euler class of the cotangent-bundle tangent space at a fixed point.

    One factor pair per position pair with distinct letters, ordered so
    the smaller letter sits at position a and the larger at position b:
      K: (1 - z_b/z_a)(1 - q^2 z_a/z_b)
      H: (x_a - x_b)(hbar + x_b - x_a)
    The overall convention is pinned by the duality anchor
    <St^lam St_mu> = delta on the two-letter contents and then frozen.
    """
    vs = _varset(sigma, mode)
    zs = _zvars(vs)
    out = Scalar.one(vs)
    for u in range(len(sigma)):
        for v in range(u + 1, len(sigma)):
            if sigma[u] == sigma[v]:
                continue
            a, b = (u, v) if sigma[u] < sigma[v] else (v, u)
            if mode == "K":
                q = Scalar.var(vs, "q")
                out = out * (1 - zs[b + 1] / zs[a + 1]) * (1 - q * q * zs[a + 1] / zs[b + 1])
            else:
                h = Scalar.var(vs, "hbar")
                out = out * (zs[a + 1] - zs[b + 1]) * (h + zs[b + 1] - zs[a + 1])
    return out


def pushforward(t: RestrictionTable) -> Scalar:
    """Pushforward to a point: sum of restrictions over Euler classes."""
    vs = _varset(t.content, t.mode)
    out = Scalar.zero(vs)
    for sigma in all_strings(t.content):
        val = t.values[sigma]
        if not val.is_zero():
            out = out + val / euler_value(sigma, t.mode)
    return reduced(out)


# ---------------------------------------------------------------------------
# product expansion (the localization oracle) and Schubert limits


@dataclass
class CoeffExpansion:
    """Coefficients of a product in the basis of direct classes."""

    d: int
    n: int
    content: str
    mode: str
    lam: str
    mu: str
    coeffs: dict[str, Scalar]

    def __getitem__(self, nu: str) -> Scalar:
        if nu in self.coeffs:
            return self.coeffs[nu]
        if nu not in all_strings(self.content):
            raise KeyError(nu)
        return Scalar.zero(_varset(self.content, self.mode))


@lru_cache(maxsize=None)
def _diag_split(content: str, kind: str, sigma: str):
    """Factor a diagonal numerator into a unit times candidate linears.

    Returns (exp, coeff, keys): the residual monomial (coeff is +-1) and
    the multiset of extracted factor keys.  The diagonal of the
    restriction system always factors this way; anything else means the
    model is broken, so the failure is loud.
    """
    mode = "K" if kind == "nil" else kind
    num, _ = _master_factored(content, kind)[sigma][sigma]
    keys = []
    for f in _linear_candidates(mode, len(content)):
        if len(f) == 1:
            continue  # monomials are units here; the residual absorbs them
        g = p_exact_div(num, f)
        while g is not None:
            keys.append(_reg(f))
            num = g
            g = p_exact_div(num, f)
    if len(num) != 1:
        raise RuntimeError(f"diagonal at {sigma} does not split into linears")
    ((e, c),) = num.items()
    if c not in (1, -1):
        raise RuntimeError(f"diagonal at {sigma} has non-unit content {c}")
    return e, c, tuple(sorted(keys))


def _fr_div_diag(g, content: str, kind: str, sigma: str):
    """Divide a factored pair by the diagonal restriction at sigma."""
    e0, c0, dkeys = _diag_split(content, kind, sigma)
    _, dfac = _master_factored(content, kind)[sigma][sigma]
    num, fac = g
    for key in dfac:  # the diagonal's denominator joins the numerator
        num = p_mul(num, _FACTOR_BY_KEY[key])
    num = {
        tuple(x - y for x, y in zip(e, e0)): (c if c0 == 1 else -c)
        for e, c in num.items()
    }
    num, kept = _cancel(num, [_FACTOR_BY_KEY[k] for k in sorted(fac + dkeys)])
    return num, tuple(_reg(f) for f in kept)


def _solve_expansion(content, kind, lam, mu):
    """Back-substitute c_nu from the restriction system at every sigma.

    The system is triangular along (inversions, lex): S^nu|_sigma = 0
    unless nu <= sigma, with nonzero diagonal.  Candidates are pruned to
    the upper set of both factors; everything below is exactly zero.
    All arithmetic stays in factored form until the final conversion.
    """
    mode = "K" if kind == "nil" else kind
    vs = _varset(content, mode)
    master = _master_factored(content, kind)
    cands = [
        s
        for s in all_strings(content)
        if bruhat_leq(lam, s) and bruhat_leq(mu, s)
    ]
    coeffs: dict[str, tuple] = {}
    for sigma in cands:
        col = master[sigma]
        va, vb = col.get(lam), col.get(mu)
        g = _fr_mul(va, vb) if va is not None and vb is not None else _FR_ZERO
        for nu, c in coeffs.items():
            v = col.get(nu)
            if v is not None:
                g = _fr_sub(g, _fr_mul(c, v))
        if not g[0]:
            continue
        if sigma not in col:
            raise RuntimeError(f"singular diagonal restriction at {sigma}")
        coeffs[sigma] = _fr_div_diag(g, content, kind, sigma)
    return {nu: _fr_scalar(vs, c) for nu, c in coeffs.items()}


def expand_product(lam: str, mu: str, mode: str = "K") -> CoeffExpansion:
    """Structure constants of S^lam S^mu in the direct basis, exactly."""
    content = content_of(lam)
    if content != content_of(mu):
        raise ValueError(f"content mismatch: {lam!r} vs {mu!r}")
    coeffs = _solve_expansion(content, mode, lam, mu)
    return CoeffExpansion(
        int(max(content)), len(content), content, mode, lam, mu, coeffs
    )


def schubert_expand(lam: str, mu: str) -> CoeffExpansion:
    """Structure constants of the Schubert product via the nilHecke tables."""
    content = content_of(lam)
    if content != content_of(mu):
        raise ValueError(f"content mismatch: {lam!r} vs {mu!r}")
    coeffs = _solve_expansion(content, "nil", lam, mu)
    return CoeffExpansion(
        int(max(content)), len(content), content, "K", lam, mu, coeffs
    )
