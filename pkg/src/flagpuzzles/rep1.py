"""Quantized loop algebra data for the one-step case.

The three-node affine quiver carries three inequivalent 3-dimensional
evaluation modules V_1(z), V_2(z), V_3(z), cyclically related by the
diagram rotation.  This module stores their generator matrices in the
basis (e_1, e_0, e_10), solves for the 9x9 intertwiners ("R-matrices")
between tensor products of any two of them, and exposes the rank-3
factorization of the (1,2) intertwiner at the resonant parameter ratio
q^-2 into an up tensor U and a down tensor D.  Exact checkers for the
identities the puzzle calculus relies on (Yang-Baxter, unitarity,
equal-parameter, bootstrap, intertwining) live here as well.

Everything is computed over the exact scalar field; no floats anywhere.
"""

from __future__ import annotations

from functools import lru_cache

from .exact import Scalar, VarSet
from .exact import reduced as _reduced

__all__ = [
    "GENERATORS",
    "SLOTS",
    "ROLES",
    "PRINTED_PAIRS",
    "CheckError",
    "RepMatrices",
    "RMatrix9",
    "rep_matrices",
    "rmatrix",
    "ud_factor",
    "check_ybe",
    "check_unitarity",
    "check_equal_param",
    "check_bootstrap",
    "check_intertwiner",
]

GENERATORS = ("E0", "E1", "E2", "F0", "F1", "F2", "K0", "K1", "K2")

# basis order of every 3-dimensional module, and of tensor squares
# (lexicographic: index of e_i (x) e_j is 3*slot(i) + slot(j))
SLOTS = ("1", "0", "10")

ROLES = (1, 2, 3)

# the tensor pairs whose 9x9 matrices are part of the frozen interface
PRINTED_PAIRS = ((1, 1), (2, 2), (3, 3), (1, 2))


class CheckError(ValueError):
    """An exact identity failed; the message pins the first mismatch."""


# ---------------------------------------------------------------------------
# generator matrices
#
# Stored as {(row, col): (coeff, qpow)} meaning entry coeff * q**qpow.
# The e_10 basis vectors are normalized with powers of -q; this skews the
# E/F entries away from 0/1 but makes every nonequivariant puzzle piece
# carry fugacity 1 later on.

_GEN = {
    1: {
        "E0": {(2, 0): (-1, 1)},
        "E1": {(0, 1): (1, 0)},
        "E2": {(1, 2): (-1, -1)},
        "F0": {(0, 2): (-1, -1)},
        "F1": {(1, 0): (1, 0)},
        "F2": {(2, 1): (-1, 1)},
        "K0": {(0, 0): (1, -1), (1, 1): (1, 0), (2, 2): (1, 1)},
        "K1": {(0, 0): (1, 1), (1, 1): (1, -1), (2, 2): (1, 0)},
        "K2": {(0, 0): (1, 0), (1, 1): (1, 1), (2, 2): (1, -1)},
    },
    2: {
        "E0": {(1, 2): (-1, -1)},
        "E1": {(2, 0): (-1, 1)},
        "E2": {(0, 1): (1, 0)},
        "F0": {(2, 1): (-1, 1)},
        "F1": {(0, 2): (-1, -1)},
        "F2": {(1, 0): (1, 0)},
        "K0": {(0, 0): (1, 0), (1, 1): (1, 1), (2, 2): (1, -1)},
        "K1": {(0, 0): (1, -1), (1, 1): (1, 0), (2, 2): (1, 1)},
        "K2": {(0, 0): (1, 1), (1, 1): (1, -1), (2, 2): (1, 0)},
    },
    3: {
        "E0": {(1, 0): (-1, 0)},
        "E1": {(2, 1): (1, 0)},
        "E2": {(0, 2): (1, 0)},
        "F0": {(0, 1): (-1, 0)},
        "F1": {(1, 2): (1, 0)},
        "F2": {(2, 0): (1, 0)},
        "K0": {(0, 0): (1, -1), (1, 1): (1, 1), (2, 2): (1, 0)},
        "K1": {(0, 0): (1, 0), (1, 1): (1, -1), (2, 2): (1, 1)},
        "K2": {(0, 0): (1, 1), (1, 1): (1, 0), (2, 2): (1, -1)},
    },
}

# gradation: rho_{a,z}(g) = z**(-delta(g)) rho_a(g), delta nonzero on E0, F0 only
_ZPOW = {"E0": -1, "F0": 1}


def _gen_matrix(a: int, g: str, vs: VarSet, z: Scalar | None = None):
    """3x3 matrix of rho_{a,z}(g); z=None means the untwisted rho_a(g)."""
    zero = Scalar.zero(vs)
    rows = [[zero] * 3 for _ in range(3)]
    for (r, c), (coeff, k) in _GEN[a][g].items():
        rows[r][c] = Scalar.monomial(vs, {"q": k}, coeff)
    if z is not None and g in _ZPOW:
        zf = z ** _ZPOW[g]
        rows = [[e * zf for e in row] for row in rows]
    return tuple(tuple(row) for row in rows)


def _k_exponents(a: int):
    """Per-slot triples of q-exponents of (K0, K1, K2); the slot's weight."""
    out = []
    for s in range(3):
        out.append(tuple(_GEN[a]["K%d" % m][(s, s)][1] for m in range(3)))
    return tuple(out)


_KEXP = {a: _k_exponents(a) for a in ROLES}


class RepMatrices:
    """The nine generator matrices of one evaluation module."""

    def __init__(self, a: int, vs: VarSet | None = None):
        if a not in ROLES:
            raise ValueError(f"role must be 1, 2 or 3, got {a!r}")
        self.a = a
        self.vs = vs if vs is not None else VarSet("K", 0)
        self.matrices = {g: _gen_matrix(a, g, self.vs) for g in GENERATORS}

    def matrix(self, g: str):
        return self.matrices[g]

    def twisted(self, g: str, z: Scalar):
        """rho_{a,z}(g), built over the variable set of z."""
        return _gen_matrix(self.a, g, z.vs, z)


def rep_matrices(a: int, vs: VarSet | None = None) -> RepMatrices:
    return RepMatrices(a, vs)


# ---------------------------------------------------------------------------
# dense matrix helpers (sizes here never exceed 27x27)


def _mat_id(n: int, vs: VarSet):
    zero, one = Scalar.zero(vs), Scalar.one(vs)
    return tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n))


def _mat_add(A, B):
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(A, B))


def _mat_mul(A, B):
    n, m, p = len(A), len(B), len(B[0])
    zero = Scalar.zero(A[0][0].vs)
    out = []
    for i in range(n):
        Ai = A[i]
        row = []
        for j in range(p):
            acc = zero
            for k in range(m):
                x = Ai[k]
                if x.is_zero():
                    continue
                y = B[k][j]
                if y.is_zero():
                    continue
                acc = acc + x * y
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def _mat_tensor(A, B):
    ma, na = len(A), len(A[0])
    mb, nb = len(B), len(B[0])
    zero = Scalar.zero(A[0][0].vs)
    out = []
    for ra in range(ma):
        for rb in range(mb):
            row = []
            for ca in range(na):
                x = A[ra][ca]
                if x.is_zero():
                    row.extend([zero] * nb)
                else:
                    row.extend(x * y for y in B[rb])
            out.append(tuple(row))
    return tuple(out)


def _diag_inverse(A):
    n = len(A)
    zero = Scalar.zero(A[0][0].vs)
    return tuple(
        tuple(A[i][i].inverse() if i == j else zero for j in range(n)) for i in range(n)
    )


def _first_mismatch(A, B):
    """Coordinates of the first differing entry, or None if equal."""
    for i, (ra, rb) in enumerate(zip(A, B)):
        for j, (x, y) in enumerate(zip(ra, rb)):
            if x != y:
                return (i, j)
    return None


# ---------------------------------------------------------------------------
# coproduct action and the intertwiner solve


def _pair_action(g: str, a: int, b: int, zp: Scalar, zs: Scalar):
    """Action of the coproduct of g on V_a(zp) (x) V_b(zs), as 9x9.

    Time flows downward in the diagrammatic calculus, which forces the
    reversed coproduct: Delta(E_i) = K_i (x) E_i + E_i (x) 1 and
    Delta(F_i) = 1 (x) F_i + F_i (x) K_i^-1.  The frozen 9x9 matrices
    are intertwiners for this choice and not for its opposite.
    """
    vs = zp.vs
    A = _gen_matrix(a, g, vs, zp)
    B = _gen_matrix(b, g, vs, zs)
    if g[0] == "K":
        return _mat_tensor(A, B)
    if g[0] == "E":
        KA = _gen_matrix(a, "K" + g[1], vs, zp)
        return _mat_add(_mat_tensor(KA, B), _mat_tensor(A, _mat_id(3, vs)))
    KBi = _diag_inverse(_gen_matrix(b, "K" + g[1], vs, zs))
    return _mat_add(_mat_tensor(_mat_id(3, vs), B), _mat_tensor(A, KBi))


def _nullspace_1d(eq_rows, n_unknowns: int, vs: VarSet):
    """Solve the homogeneous system; the solution space must be a line."""
    zero, one = Scalar.zero(vs), Scalar.one(vs)
    pivots: dict[int, dict[int, Scalar]] = {}
    for raw in eq_rows:
        row = {i: c for i, c in raw.items() if not c.is_zero()}
        for i in [i for i in row if i in pivots]:
            c = row.pop(i)
            for j, pc in pivots[i].items():
                if j == i:
                    continue
                v = row.get(j, zero) - c * pc
                if v.is_zero():
                    row.pop(j, None)
                else:
                    row[j] = v
        if not row:
            continue
        p = min(row)
        inv = row[p].inverse()
        newrow = {j: _reduced(c * inv) for j, c in row.items()}
        newrow[p] = one
        for prow in pivots.values():
            if p in prow:
                c = prow.pop(p)
                for j, pc in newrow.items():
                    if j == p:
                        continue
                    v = prow.get(j, zero) - c * pc
                    if v.is_zero():
                        prow.pop(j, None)
                    else:
                        prow[j] = v
        pivots[p] = newrow
    free = [i for i in range(n_unknowns) if i not in pivots]
    if len(free) != 1:
        raise CheckError(
            f"intertwiner solution space has dimension {len(free)}, expected 1"
        )
    f = free[0]
    sol = [zero] * n_unknowns
    sol[f] = one
    for i, prow in pivots.items():
        sol[i] = zero - prow.get(f, zero)
    return sol


@lru_cache(maxsize=None)
def _rmatrix_symbolic(a: int, b: int):
    """The 9x9 intertwiner V_a(z1) (x) V_b(z2) -> V_b(z2) (x) V_a(z1).

    Normalized so that the e_0 (x) e_0 diagonal entry is 1, except for
    the pair (2,1) where that convention is inconsistent: the weight
    space of e_0 (x) e_0 in V_2 (x) V_1 is two dimensional, so unitarity
    against the (1,2) crossing forces a nontrivial scalar there.  We
    rescale (2,1) so that R_21(z', z'') is the inverse of R_12(z'', z').
    Unique up to scale by irreducibility of the tensor product at
    generic parameters; the uniqueness is verified, not assumed (the
    solve fails otherwise).
    """
    vs = VarSet("K", 2)
    zp, zs = Scalar.var(vs, "z1"), Scalar.var(vs, "z2")
    zero = Scalar.zero(vs)

    def cwt(i, j):
        return tuple(_KEXP[a][i][m] + _KEXP[b][j][m] for m in range(3))

    def rwt(k, l):
        return tuple(_KEXP[b][k][m] + _KEXP[a][l][m] for m in range(3))

    pairs = [(i, j) for i in range(3) for j in range(3)]
    unknowns = [
        (3 * k + l, 3 * i + j)
        for (k, l) in pairs
        for (i, j) in pairs
        if rwt(k, l) == cwt(i, j)
    ]
    unk_index = {u: t for t, u in enumerate(unknowns)}

    rows = []
    for g in ("E0", "E1", "E2", "F0", "F1", "F2"):
        A = _pair_action(g, a, b, zp, zs)
        B = _pair_action(g, b, a, zs, zp)
        for r in range(9):
            for c in range(9):
                coeffs: dict[int, Scalar] = {}
                for k in range(9):
                    t = unk_index.get((r, k))
                    if t is not None and not A[k][c].is_zero():
                        coeffs[t] = coeffs.get(t, zero) + A[k][c]
                    t = unk_index.get((k, c))
                    if t is not None and not B[r][k].is_zero():
                        coeffs[t] = coeffs.get(t, zero) - B[r][k]
                if coeffs:
                    rows.append(coeffs)

    sol = _nullspace_1d(rows, len(unknowns), vs)
    norm = sol[unk_index[(4, 4)]]
    if norm.is_zero():
        raise CheckError(f"pair ({a},{b}): normalizing entry vanishes")
    inv = norm.inverse()
    if (a, b) == (2, 1):
        q = Scalar.var(vs, "q")
        u = zs / zp
        one = Scalar.one(vs)
        inv = inv * (q**2 * (one - u) ** 2) / ((one - q**2 * u) * (q**2 - u))
    M = [[zero] * 9 for _ in range(9)]
    for (r, c), t in unk_index.items():
        M[r][c] = _reduced(sol[t] * inv)
    return tuple(tuple(row) for row in M)


def _rmat(a: int, b: int, zp: Scalar, zs: Scalar):
    """Intertwiner at explicit parameters; any of the nine role pairs."""
    M = _rmatrix_symbolic(a, b)
    vs = zp.vs
    mapping = {"q": Scalar.var(vs, "q"), "z1": zp, "z2": zs}
    return tuple(tuple(e.substitute(mapping) for e in row) for row in M)


class RMatrix9:
    """A 9x9 intertwiner in the (e_1, e_0, e_10) tensor basis order."""

    __slots__ = ("pair", "entries")

    def __init__(self, pair, entries):
        self.pair = pair
        self.entries = entries

    def __getitem__(self, rc):
        r, c = rc
        return self.entries[r][c]


def rmatrix(a: int, b: int, zp: Scalar, zs: Scalar) -> RMatrix9:
    """The printed-basis matrix of the (a,b) crossing at parameters (zp, zs).

    Only the four pairs that the puzzle calculus consumes are exposed;
    the remaining pairs exist internally for identity checking.
    """
    if (a, b) not in PRINTED_PAIRS:
        raise ValueError(f"unsupported pair ({a},{b}); supported: {PRINTED_PAIRS}")
    return RMatrix9((a, b), _rmat(a, b, zp, zs))


# ---------------------------------------------------------------------------
# the rank-3 factorization at parameter ratio q^-2

# U: V_1(q z) (x) V_2(q^-1 z) -> V_3(z), rows indexed by SLOTS
_U_DATA = {
    (0, 0): (1, 0),  # e_1 (x) e_1 -> e_1
    (0, 5): (1, 0),  # e_0 (x) e_10 -> e_1
    (1, 4): (1, 0),  # e_0 (x) e_0 -> e_0
    (1, 6): (1, 0),  # e_10 (x) e_1 -> e_0
    (2, 1): (1, 0),  # e_1 (x) e_0 -> e_10
    (2, 8): (-1, -1),  # e_10 (x) e_10 -> -q^-1 e_10
}

# D: V_3(z) -> V_2(q^-1 z) (x) V_1(q z), columns indexed by SLOTS
_D_DATA = {
    (0, 0): (1, 0),  # e_1 -> e_1 (x) e_1
    (2, 1): (1, 0),  # e_0 -> e_1 (x) e_10
    (3, 2): (1, 0),  # e_10 -> e_0 (x) e_1
    (4, 1): (1, 0),  # e_0 -> e_0 (x) e_0
    (7, 0): (1, 0),  # e_1 -> e_10 (x) e_0
    (8, 2): (-1, 1),  # e_10 -> -q e_10 (x) e_10
}


def _from_table(data, shape, vs: VarSet):
    m, n = shape
    zero = Scalar.zero(vs)
    rows = [[zero] * n for _ in range(m)]
    for (r, c), (coeff, k) in data.items():
        rows[r][c] = Scalar.monomial(vs, {"q": k}, coeff)
    return tuple(tuple(row) for row in rows)


def ud_factor(vs: VarSet | None = None):
    """The up and down tensors: U as 3x9 and D as 9x3 Scalar matrices.

    Their product D.U equals the (1,2) crossing at parameter ratio q^-2,
    and both are intertwiners V_1(q z) (x) V_2(q^-1 z) <-> V_3(z).
    """
    if vs is None:
        vs = VarSet("K", 0)
    return _from_table(_U_DATA, (3, 9), vs), _from_table(_D_DATA, (9, 3), vs)


# ---------------------------------------------------------------------------
# identity checkers; all raise CheckError with the first failing entry


def _sym(n: int):
    vs = VarSet("K", n)
    return (vs,) + tuple(Scalar.var(vs, f"z{i}") for i in range(1, n + 1))


def check_intertwiner(a: int, b: int, zp: Scalar | None = None, zs: Scalar | None = None) -> bool:
    """Crossing commutes with the coproduct action of every generator."""
    if zp is None or zs is None:
        _, zp, zs = _sym(2)
    M = _rmat(a, b, zp, zs)
    for g in GENERATORS:
        lhs = _mat_mul(M, _pair_action(g, a, b, zp, zs))
        rhs = _mat_mul(_pair_action(g, b, a, zs, zp), M)
        bad = _first_mismatch(lhs, rhs)
        if bad is not None:
            raise CheckError(f"intertwining fails for {g} on pair ({a},{b}) at {bad}")
    return True


def check_ybe(
    a: int,
    b: int,
    c: int,
    z1: Scalar | None = None,
    z2: Scalar | None = None,
    z3: Scalar | None = None,
) -> bool:
    """Yang-Baxter equation on V_a(z1) (x) V_b(z2) (x) V_c(z3)."""
    if z1 is None or z2 is None or z3 is None:
        _, z1, z2, z3 = _sym(3)
    vs = z1.vs
    I3 = _mat_id(3, vs)

    def left(M):
        return _mat_tensor(M, I3)

    def right(M):
        return _mat_tensor(I3, M)

    lhs = _mat_mul(
        left(_rmat(b, c, z2, z3)),
        _mat_mul(right(_rmat(a, c, z1, z3)), left(_rmat(a, b, z1, z2))),
    )
    rhs = _mat_mul(
        right(_rmat(a, b, z1, z2)),
        _mat_mul(left(_rmat(a, c, z1, z3)), right(_rmat(b, c, z2, z3))),
    )
    bad = _first_mismatch(lhs, rhs)
    if bad is not None:
        raise CheckError(f"Yang-Baxter fails for roles ({a},{b},{c}) at {bad}")
    return True


def check_unitarity(a: int, b: int, zp: Scalar | None = None, zs: Scalar | None = None) -> bool:
    """The (a,b) crossing inverts the (b,a) crossing with swapped parameters."""
    if zp is None or zs is None:
        _, zp, zs = _sym(2)
    prod = _mat_mul(_rmat(a, b, zp, zs), _rmat(b, a, zs, zp))
    bad = _first_mismatch(prod, _mat_id(9, zp.vs))
    if bad is not None:
        raise CheckError(f"unitarity fails for pair ({a},{b}) at {bad}")
    return True


def check_equal_param(a: int, z: Scalar | None = None) -> bool:
    """Equal spectral parameters turn the (a,a) crossing into the identity."""
    if z is None:
        _, z = _sym(1)
    prod = _rmat(a, a, z, z)
    bad = _first_mismatch(prod, _mat_id(9, z.vs))
    if bad is not None:
        raise CheckError(f"equal-parameter value fails for role {a} at {bad}")
    return True


def check_bootstrap(z: Scalar | None = None, w: Scalar | None = None) -> bool:
    """The four triangle-vs-crossing exchange identities for all roles.

    With U: V_1(q z) (x) V_2(q^-1 z) -> V_3(z) and D its reverse, a line of
    any role b at parameter w can be pulled through the triangle, trading
    one crossing with the merged line for two crossings with its legs.
    """
    if z is None or w is None:
        _, z, w = _sym(2)
    vs = z.vs
    q = Scalar.var(vs, "q")
    qz, qiz = q * z, z / q
    U, D = ud_factor(vs)
    I3 = _mat_id(3, vs)
    for b in ROLES:
        pairs = [
            (
                "up, line from the right",
                _mat_mul(_rmat(3, b, z, w), _mat_tensor(U, I3)),
                _mat_mul(
                    _mat_tensor(I3, U),
                    _mat_mul(
                        _mat_tensor(_rmat(1, b, qz, w), I3),
                        _mat_tensor(I3, _rmat(2, b, qiz, w)),
                    ),
                ),
            ),
            (
                "up, line from the left",
                _mat_mul(_rmat(b, 3, w, z), _mat_tensor(I3, U)),
                _mat_mul(
                    _mat_tensor(U, I3),
                    _mat_mul(
                        _mat_tensor(I3, _rmat(b, 2, w, qiz)),
                        _mat_tensor(_rmat(b, 1, w, qz), I3),
                    ),
                ),
            ),
            (
                "down, line from the right",
                _mat_mul(_mat_tensor(I3, D), _rmat(3, b, z, w)),
                _mat_mul(
                    _mat_tensor(_rmat(2, b, qiz, w), I3),
                    _mat_mul(_mat_tensor(I3, _rmat(1, b, qz, w)), _mat_tensor(D, I3)),
                ),
            ),
            (
                "down, line from the left",
                _mat_mul(_mat_tensor(D, I3), _rmat(b, 3, w, z)),
                _mat_mul(
                    _mat_tensor(I3, _rmat(b, 1, w, qz)),
                    _mat_mul(_mat_tensor(_rmat(b, 2, w, qiz), I3), _mat_tensor(I3, D)),
                ),
            ),
        ]
        for tag, lhs, rhs in pairs:
            bad = _first_mismatch(lhs, rhs)
            if bad is not None:
                raise CheckError(f"bootstrap ({tag}) fails for role {b} at {bad}")
    return True
