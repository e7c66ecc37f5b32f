"""Root systems, quiver weights, the order-3 twist, and multinumber labels.

The boundary and edge labels of puzzles name weight vectors in the root
lattice of X_{2d} = A2, D4, E6, E8 for d = 1..4.  This module builds those
root systems, derives the single-number weights f_i from quiver dimension
data, solves for the order-3 orthogonal map tau, generates the full weight
sets, and assigns canonical multinumber names.

Weight vectors are tuples of ints or Fractions in simple-root coordinates.
Two bilinear forms appear: ``gram`` (roots have squared norm 2) and the
rescaled ``killing`` = a*gram (weights have squared norm 2), with
a = 3, 2, 3/2, 1 for d = 1..4.  All printed fugacity and validity tables
use the rescaled form.
"""

from __future__ import annotations

from fractions import Fraction as Q
from functools import lru_cache


class LatticeError(ValueError):
    pass


# ---------------------------------------------------------------------------
# exact linear algebra on tuples of ints/Fractions

def _coord(x):
    x = Q(x)
    return int(x) if x.denominator == 1 else x


def vec(*xs):
    return tuple(_coord(x) for x in xs)


def vadd(u, v):
    return tuple(a + b for a, b in zip(u, v))


def vsub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def vneg(u):
    return tuple(-a for a in u)


def _mat_vec(m, v):
    return tuple(sum(r[j] * v[j] for j in range(len(v))) for r in m)


def _mat_mul(a, b):
    n, k, m = len(a), len(b), len(b[0])
    return tuple(
        tuple(sum(a[i][t] * b[t][j] for t in range(k)) for j in range(m))
        for i in range(n)
    )


def _mat_inv(m):
    # Gauss-Jordan over the rationals; m must be square and invertible.
    n = len(m)
    aug = [[Q(x) for x in row] + [Q(int(i == j)) for j in range(n)]
           for i, row in enumerate(m)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise LatticeError("singular matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return tuple(tuple(_coord(x) for x in row[n:]) for row in aug)


# ---------------------------------------------------------------------------
# Dynkin data.  Node order is the quiver-slot order of the defining figures
# (framing-carrying node first); the epsilon-sign order is separate.

_NODES = {
    1: ("a", "a'"),
    2: ("b", "a", "a'", "b'"),
    3: ("c", "b", "a", "a'", "c'", "b'"),
    4: ("d", "c", "b", "a", "a'", "b'", "c'", "d'"),
}

_EDGES = {
    1: (("a", "a'"),),
    2: (("b", "a"), ("a", "a'"), ("a", "b'")),
    3: (("c", "b"), ("b", "a"), ("a", "a'"), ("a'", "c'"), ("a", "b'")),
    4: (("d", "c"), ("c", "b"), ("b", "a"), ("a", "a'"),
        ("a'", "b'"), ("b'", "c'"), ("a'", "d'")),
}

_EPS_ORDER = ("c'", "b'", "a'", "a", "b", "c", "d", "d'")

_SCALE = {1: Q(3), 2: Q(2), 3: Q(3, 2), 4: Q(1)}

_COXETER = {1: 3, 2: 6, 3: 12, 4: 30}

# Quiver dimension vectors: node -> coefficients of (n, j, k, l, m).
# Each entry is (framing node, dims); params beyond position d are unused.

_QUIVERS = {
    1: {
        "1": ("a", {"a": (0, 1, 0, 0, 0)}),
        "2": ("a", {"a": (1, 0, 0, 0, 0), "a'": (0, 1, 0, 0, 0)}),
        "3": ("a'", {"a": (0, 1, 0, 0, 0), "a'": (0, 1, 0, 0, 0)}),
        "1'": ("a'", {"a'": (0, 1, 0, 0, 0)}),
    },
    2: {
        "1": ("b", {"b": (0, 0, 1, 0, 0), "a": (0, 1, 0, 0, 0)}),
        "2": ("a'", {"b": (1, 0, 0, 0, 0), "a": (1, 0, 1, 0, 0),
                     "a'": (1, 1, 0, 0, 0), "b'": (0, 0, 1, 0, 0)}),
        "3": ("b'", {"b": (0, 0, 1, 0, 0), "a": (0, 1, 1, 0, 0),
                     "a'": (0, 1, 0, 0, 0), "b'": (0, 0, 1, 0, 0)}),
        "1'": ("a'", {"a": (0, 1, 0, 0, 0), "a'": (0, 0, 1, 0, 0)}),
        "1''": ("b'", {"a": (0, 1, 0, 0, 0), "b'": (0, 0, 1, 0, 0)}),
    },
    3: {
        "1": ("c", {"c": (0, 0, 0, 1, 0), "b": (0, 0, 1, 0, 0),
                    "a": (0, 1, 0, 0, 0)}),
        "2": ("c", {"c": (2, 0, 0, 0, 0), "b": (2, 0, 0, 1, 0),
                    "a": (2, 0, 1, 1, 0), "a'": (1, 1, 0, 1, 0),
                    "c'": (0, 0, 0, 1, 0), "b'": (1, 0, 1, 0, 0)}),
        "3": ("c'", {"c": (0, 0, 0, 1, 0), "b": (0, 0, 1, 1, 0),
                     "a": (0, 1, 1, 1, 0), "a'": (0, 1, 0, 1, 0),
                     "c'": (0, 0, 0, 1, 0), "b'": (0, 0, 1, 0, 0)}),
        "1'": ("c'", {"a": (0, 1, 0, 0, 0), "a'": (0, 0, 1, 0, 0),
                      "c'": (0, 0, 0, 1, 0)}),
    },
    4: {
        "1": ("d", {"d": (0, 0, 0, 0, 1), "c": (0, 0, 0, 1, 0),
                    "b": (0, 0, 1, 0, 0), "a": (0, 1, 0, 0, 0)}),
        "2": ("d", {"d": (3, 0, 0, 0, 0), "c": (4, 0, 0, 0, 1),
                    "b": (5, 0, 0, 1, 1), "a": (6, 0, 1, 1, 1),
                    "a'": (7, 1, 1, 1, 1), "b'": (5, 1, 1, 0, 1),
                    "c'": (2, 1, 0, 0, 1), "d'": (3, 0, 1, 0, 1)}),
        "3": ("d", {"d": (1, 0, 0, 0, 1), "c": (1, 0, 0, 1, 1),
                    "b": (1, 0, 1, 1, 1), "a": (1, 1, 1, 1, 1),
                    "a'": (1, 1, 1, 1, 1), "b'": (1, 1, 1, 0, 1),
                    "c'": (0, 1, 0, 0, 1), "d'": (0, 0, 1, 0, 1)}),
    },
}

# Weyl words relating the quivers, applied right to left.
_WORDS = {
    1: (("2", "1", ("a", "a'")),
        ("3", "1'", ("a",))),
    2: (("2", "1'", ("b", "a", "b", "b'", "a'", "a", "b", "b'")),
        ("3", "1''", ("b", "a", "b", "a'"))),
    3: (("2", "1", ("c", "b", "a", "a'", "b'", "c'") * 4),
        ("3", "1'", ("c", "b", "a", "a'", "b",
                     "c", "b", "b'", "a", "b", "b'"))),
    4: (("2", "1", ("b'", "c'", "d", "c", "b", "a", "a'", "d'") * 10),
        ("3", "1", ("b'", "c'", "d", "c", "b", "a", "a'", "d'") * 5)),
}

ZERO_NAME = "0⃗"


class RootSystem:
    """Simply-laced root system with the figure's node names."""

    def __init__(self, d):
        if d not in (1, 2, 3, 4):
            raise LatticeError(f"d must be 1..4, got {d!r}")
        self.d = d
        self.rank = 2 * d
        self.nodes = _NODES[d]
        self.index = {s: i for i, s in enumerate(self.nodes)}
        self.scale = _SCALE[d]
        self.coxeter = _COXETER[d]
        edges = {frozenset(e) for e in _EDGES[d]}
        self.adjacency = {
            s: tuple(t for t in self.nodes if frozenset((s, t)) in edges)
            for s in self.nodes
        }
        self.cartan = tuple(
            tuple(2 if s == t else (-1 if t in self.adjacency[s] else 0)
                  for t in self.nodes)
            for s in self.nodes
        )
        inv = _mat_inv(self.cartan)
        # fundamental weight omega_i has simple-root coordinates inv[:, i]
        self.fundamental = {
            s: tuple(inv[j][i] for j in range(self.rank))
            for i, s in enumerate(self.nodes)
        }
        self.zero = (0,) * self.rank

    def alpha(self, node):
        i = self._node_index(node)
        return tuple(int(i == j) for j in range(self.rank))

    def omega(self, node):
        return self.fundamental[self._check_node(node)]

    def _check_node(self, node):
        if node not in self.index:
            raise LatticeError(f"unknown node {node!r} for d={self.d}")
        return node

    def _node_index(self, node):
        return self.index[self._check_node(node)]

    def gram(self, u, v):
        """Bilinear form with simple roots of squared norm 2."""
        c = self.cartan
        cv = _mat_vec(c, v)
        return sum(a * b for a, b in zip(u, cv))

    def killing(self, u, v):
        """The rescaled form in which all nonzero weights have norm 2."""
        return _coord(self.scale * self.gram(u, v))

    def reflect(self, node, v):
        """Weyl reflection of a weight vector in the simple root at node."""
        i = self._node_index(node)
        c = self.gram(v, self.alpha(node))
        return tuple(x - c * int(j == i) for j, x in enumerate(v))


def build_root_system(d):
    return RootSystem(d)


def quiver_weight(rs, w, v):
    """Sum of w[i]*omega_i minus sum of v[i]*alpha_i."""
    for node in (*w, *v):
        rs._check_node(node)
    acc = rs.zero
    for node, m in w.items():
        if m:
            acc = vadd(acc, tuple(m * x for x in rs.omega(node)))
    for node, m in v.items():
        if m:
            acc = vsub(acc, tuple(m * x for x in rs.alpha(node)))
    return acc


def quiver_dims(rs, key, n=1, params=()):
    """Dimension vector of the printed quiver (key) at the given parameters.

    params lists (j, k, l, m) up to position d; missing entries are zero.
    Returns (framing node, dims dict).
    """
    fr, table = _QUIVERS[rs.d][key]
    p = list(params) + [0] * (4 - len(params))
    coeffs = (n, *p)
    dims = {}
    for node, cs in table.items():
        val = sum(a * b for a, b in zip(cs, coeffs))
        if val:
            dims[node] = val
    return fr, dims


def reflect_dims(rs, node, fr_node, n, dims):
    """Quiver reflection at a gauge node: v_i -> w_i + sum(adj v) - v_i."""
    rs._check_node(node)
    w = n if node == fr_node else 0
    new = dict(dims)
    new[node] = w + sum(dims.get(t, 0) for t in rs.adjacency[node]) - dims.get(node, 0)
    if new[node] == 0:
        del new[node]
    return new


def apply_word(rs, word, fr_node, n, dims):
    for node in reversed(word):
        dims = reflect_dims(rs, node, fr_node, n, dims)
    return dims


def e_weight(rs, role, i):
    """Weight of the basis vector e_{role,i}, i = 0..d.

    Role 1 gives f_i, role 2 gives tau^2 f_i, role 3 gives -tau f_i.
    Parameters of the role's quiver switch on from the framing end:
    e_{a,d} has all parameters zero, e_{a,0} has all of them equal to 1.
    """
    d = rs.d
    if role not in (1, 2, 3):
        raise LatticeError(f"role must be 1..3, got {role!r}")
    if not 0 <= i <= d:
        raise LatticeError(f"index {i!r} out of range 0..{d}")
    params = [1 if s + 1 > i else 0 for s in range(d)]
    fr, dims = quiver_dims(rs, str(role), n=1, params=params)
    return quiver_weight(rs, {fr: 1}, dims)


def build_tau(rs):
    """The orthogonal order-3 map determined by the three quiver weights.

    Solves tau(f_i) = -w3_i and tau(-w3_i) = w2_i where w2_i, w3_i are the
    weights of quivers (2) and (3) at parameter i, then checks order 3,
    orthogonality, and full rank of the constraint span.
    """
    d, r = rs.d, rs.rank
    ins, outs = [], []
    for i in range(d + 1):
        f = e_weight(rs, 1, i)
        w2 = e_weight(rs, 2, i)
        w3 = e_weight(rs, 3, i)
        ins.append(f)
        outs.append(vneg(w3))
        ins.append(vneg(w3))
        outs.append(w2)
    # pick a basis among the constraint inputs by Gaussian elimination
    basis, basis_out, reduced = [], [], []
    for u, t in zip(ins, outs):
        row = [Q(x) for x in u]
        for b, _ in reduced:
            lead = next(j for j in range(r) if b[j] != 0)
            if row[lead] != 0:
                f = row[lead] / b[lead]
                row = [x - f * y for x, y in zip(row, b)]
        if any(x != 0 for x in row):
            reduced.append((row, None))
            basis.append(u)
            basis_out.append(t)
    if len(basis) < r:
        raise LatticeError(
            f"tau constraints span rank {len(basis)} of {r} at d={d}")
    m = tuple(tuple(u[i] for u in basis) for i in range(r))       # columns
    p = tuple(tuple(t[i] for t in basis_out) for i in range(r))
    tau = _mat_mul(p, _mat_inv(m))
    tau = tuple(tuple(_coord(x) for x in row) for row in tau)
    for u, t in zip(ins, outs):
        if _mat_vec(tau, u) != t:
            raise LatticeError(f"inconsistent tau constraints at d={d}")
    t3 = _mat_mul(tau, _mat_mul(tau, tau))
    ident = tuple(tuple(int(i == j) for j in range(r)) for i in range(r))
    if t3 != ident:
        raise LatticeError(f"tau is not of order 3 at d={d}")
    for i in range(r):
        ei = tuple(int(i == j) for j in range(r))
        for j in range(r):
            ej = tuple(int(j == k) for k in range(r))
            if rs.gram(_mat_vec(tau, ei), _mat_vec(tau, ej)) != rs.gram(ei, ej):
                raise LatticeError(f"tau is not orthogonal at d={d}")
    return tau


def _name_key(name):
    return (len(name), name)


def _digit_span(name):
    ds = [c for c in name if c.isdigit()]
    return min(ds), max(ds)


def _wrap(name):
    return name if len(name) == 1 else "(" + name + ")"


def _tokens(name):
    out, i = [], 0
    while i < len(name):
        c = name[i]
        if c.isdigit():
            out.append(c)
            i += 1
        elif c == "(":
            depth, j = 1, i + 1
            while j < len(name) and depth:
                depth += {"(": 1, ")": -1}.get(name[j], 0)
                j += 1
            if depth:
                raise LatticeError(f"unbalanced parentheses in {name!r}")
            out.append(name[i + 1:j - 1])
            i = j
        else:
            raise LatticeError(f"bad character {c!r} in label {name!r}")
    return out


class Lattice:
    """Root system, tau, weight sets, and the canonical label dictionary."""

    def __init__(self, d):
        rs = RootSystem(d)
        self.rs = rs
        self.d = d
        self.tau_matrix = build_tau(rs)
        self.tau2_matrix = _mat_mul(self.tau_matrix, self.tau_matrix)
        self.f = tuple(e_weight(rs, 1, i) for i in range(d + 1))
        self.W = self._orbit(self.f[d])
        sizes = {1: 3, 2: 8, 3: 27, 4: 240}
        if len(self.W) != sizes[d]:
            raise LatticeError(
                f"weight orbit has {len(self.W)} elements at d={d}, "
                f"expected {sizes[d]}")
        self.has_zero = d == 4
        self._names, self._by_name = self._build_names()

    # -- construction ------------------------------------------------------

    def _orbit(self, start):
        seen = {start}
        frontier = [start]
        while frontier:
            nxt = []
            for v in frontier:
                for node in self.rs.nodes:
                    w = self.rs.reflect(node, v)
                    if w not in seen:
                        seen.add(w)
                        nxt.append(w)
            frontier = nxt
            if len(seen) > 100000:
                raise LatticeError("weight orbit failed to close")
        return frozenset(seen)

    def _name_pass(self, names, frozen, check_span):
        """Grow `names` to a (length, lex) fixed point over valid pairings.

        A pairing (Y, X) produces the weight -tau f_X - tau^2 f_Y and the
        candidate string wrap(Y)+wrap(X).  It is admissible when
        <f_X, tau f_Y> = -1 (the result then has norm 2) and, in the strict
        grammar, when the concatenated digit sequence stays weakly
        decreasing.  Weights in `frozen` keep their existing names.
        """
        tau_of = {w: self.tau(w) for w in names}
        c_of = {w: _mat_vec(self.rs.cartan, w) for w in names}
        changed = True
        while changed:
            changed = False
            current = sorted(names.items(), key=lambda kv: _name_key(kv[1]))
            for wy, ny in current:
                for wx, nx in current:
                    if check_span and _digit_span(ny)[0] < _digit_span(nx)[1]:
                        continue
                    g = sum(a * b for a, b in zip(tau_of[wy], c_of[wx]))
                    if self.rs.scale * g != -1:
                        continue
                    w = vneg(vadd(tau_of[wx], self.tau2(wy)))
                    if w not in self.W or w in frozen:
                        continue
                    cand = _wrap(ny) + _wrap(nx)
                    old = names.get(w)
                    if old is None or _name_key(cand) < _name_key(old):
                        names[w] = cand
                        tau_of[w] = self.tau(w)
                        c_of[w] = _mat_vec(self.rs.cartan, w)
                        changed = True
        return names

    def _build_names(self):
        # strict grammar: digits weakly decreasing across the whole name.
        # This names every weight for d <= 3 (uniquely, before the minimum
        # is even taken) and reproduces the printed label tables.
        names = self._name_pass(
            {self.f[i]: str(i) for i in range(self.d + 1)},
            frozenset(), check_span=True)
        missing = self.W - set(names)
        if missing:
            if self.d < 4:
                raise LatticeError(
                    f"{len(missing)} weights received no multinumber name "
                    f"at d={self.d}")
            # At d=4 the strict grammar reaches only part of the E8 root
            # system.  The remaining roots still need printable names, so a
            # second pass drops the digit-order requirement for them while
            # keeping every strict-grammar name fixed.
            names = self._name_pass(names, frozenset(names), check_span=False)
            missing = self.W - set(names)
            if missing:
                raise LatticeError(
                    f"{len(missing)} weights received no multinumber name "
                    f"at d={self.d}")
        by_name = {n: w for w, n in names.items()}
        if len(by_name) != len(names):
            raise LatticeError("multinumber names are not distinct")
        return names, by_name

    # -- basic maps --------------------------------------------------------

    def tau(self, v):
        return _mat_vec(self.tau_matrix, v)

    def tau2(self, v):
        return _mat_vec(self.tau2_matrix, v)

    def killing(self, u, v):
        return self.rs.killing(u, v)

    def labels(self):
        """Canonical names in canonical order."""
        return sorted(self._by_name, key=_name_key)

    def _to_role1(self, w, role):
        if role == 1:
            return w
        if role == 2:
            return self.tau(w)
        if role == 3:
            return vneg(self.tau2(w))
        raise LatticeError(f"role must be 1..3, got {role!r}")

    def _from_role1(self, f, role):
        if role == 1:
            return f
        if role == 2:
            return self.tau2(f)
        if role == 3:
            return vneg(self.tau(f))
        raise LatticeError(f"role must be 1..3, got {role!r}")

    def weight_set(self, role):
        base = set(self.W)
        if self.has_zero:
            base.add(self.rs.zero)
        return frozenset(self._from_role1(w, role) for w in base)

    def name(self, w, role=1):
        if self.has_zero and w == self.rs.zero:
            return ZERO_NAME
        f = self._to_role1(tuple(w), role)
        try:
            return self._names[f]
        except KeyError:
            raise LatticeError(f"weight {w!r} not in the role-{role} set") from None

    def parse(self, name, role=1):
        if name == ZERO_NAME:
            if not self.has_zero:
                raise LatticeError(f"zero label only exists at d=4, not d={self.d}")
            return self.rs.zero
        f = self._parse_role1(name)
        if f not in self.W:
            raise LatticeError(f"label {name!r} is not a weight at d={self.d}")
        return self._from_role1(f, role)

    def _parse_role1(self, name):
        toks = _tokens(name)
        if len(toks) == 1:
            t = toks[0]
            if t.isdigit():
                i = int(t)
                if i > self.d:
                    raise LatticeError(f"single number {t!r} exceeds d={self.d}")
                return self.f[i]
            return self._parse_role1(t)
        if len(toks) == 2:
            fy = self._parse_role1(toks[0])
            fx = self._parse_role1(toks[1])
            return vneg(vadd(self.tau(fx), self.tau2(fy)))
        raise LatticeError(f"label {name!r} does not split into two parts")

    def scal(self, x, y):
        """<f_X, tau f_Y> for role-1 labels or weight vectors."""
        fx = self._by_name[x] if isinstance(x, str) else tuple(x)
        fy = self._by_name[y] if isinstance(y, str) else tuple(y)
        return self.killing(fx, self.tau(fy))

    def epsilon(self, x, y):
        """Product-of-signs cocycle on the E8 root lattice.

        The exponent pairs the simple-root expansion coefficients of the two
        arguments over adjacent node pairs in a fixed node order; this makes
        epsilon_{X,Y} epsilon_{Y,X} = (-1)^{<X,Y>} an identity of the lattice.
        """
        if self.d != 4:
            raise LatticeError("epsilon is defined for d=4 only")
        vx = self.parse(x) if isinstance(x, str) else tuple(x)
        vy = self.parse(y) if isinstance(y, str) else tuple(y)
        if vx == self.rs.zero or vy == self.rs.zero:
            raise LatticeError("epsilon is undefined on the zero weight")
        idx = [self.rs.index[s] for s in _EPS_ORDER]
        sign = 1
        for p, i in enumerate(idx):
            for j in idx[p + 1:]:
                if self.rs.cartan[i][j] == -1 and (vx[i] * vy[j]) % 2:
                    sign = -sign
        return sign

    def label_table_obj(self, role):
        rows = []
        for n in self.labels():
            w = self._from_role1(self._by_name[n], role)
            rows.append({"name": n, "coords": [str(Q(x)) for x in w]})
        if self.has_zero:
            rows.append({"name": ZERO_NAME,
                         "coords": ["0"] * self.rs.rank})
        return {"d": self.d, "role": role, "labels": rows}


@lru_cache(maxsize=None)
def build_lattice(d):
    return Lattice(d)


def weight_set(d, role):
    return build_lattice(d).weight_set(role)


def name(d, w, role=1):
    return build_lattice(d).name(w, role)


def parse(d, s, role=1):
    return build_lattice(d).parse(s, role)


def epsilon(d, x, y):
    return build_lattice(d).epsilon(x, y)
