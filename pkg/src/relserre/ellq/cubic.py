"""Conductor of a cyclic cubic field from a defining monic integral cubic.

The field discriminant is disc(f) / [O_K : Z[theta]]^2.  The index is found one
prime at a time: Dedekind's criterion decides p-maximality of Z[theta], and
when it fails the order is enlarged by the ring of multipliers of its
p-radical until it stabilises (Round 2).  For a cyclic cubic f(K) = sqrt(disc K).
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt

from sympy import GF, Poly, factorint, symbols

from ..errors import InconsistencyError, ParseError
from .curves import cubic_disc

_T = symbols("T")


# ---- Dedekind criterion ----------------------------------------------------

def dedekind_p_maximal(f_high: list, p: int) -> bool:
    """True when Z[theta] is maximal at p (f given high degree first, monic)."""
    fp = Poly(f_high, _T, domain=GF(p))
    _, facs = fp.factor_list()
    g = Poly(1, _T, domain=GF(p))
    h = Poly(1, _T, domain=GF(p))
    for fac, e in facs:
        g *= fac
        h *= fac ** (e - 1)
    gz = Poly([int(c) % p for c in g.all_coeffs()], _T)
    hz = Poly([int(c) % p for c in h.all_coeffs()], _T)
    diff = Poly(f_high, _T) - gz * hz
    coeffs = [int(c) for c in diff.all_coeffs()]
    if any(c % p for c in coeffs):
        raise InconsistencyError("Dedekind lift is not congruent to f mod p")
    F = Poly([c // p for c in coeffs] or [0], _T, domain=GF(p))
    common = F.gcd(Poly(g.all_coeffs(), _T, domain=GF(p))).gcd(Poly(h.all_coeffs(), _T, domain=GF(p)))
    return common.degree() <= 0


# ---- orders as lattices in the power basis ---------------------------------

def _mul_mod(u, v, f_low):
    """Product of power-basis coordinate vectors modulo monic f (low degree first)."""
    n = len(f_low) - 1
    out = [Fraction(0)] * (2 * n - 1)
    for i, a in enumerate(u):
        if a:
            for j, b in enumerate(v):
                out[i + j] += a * b
    for k in range(2 * n - 2, n - 1, -1):
        c = out[k]
        if c:
            for j in range(n):
                out[k - n + j] -= c * f_low[j]
            out[k] = Fraction(0)
    return out[:n]


def _echelon(vectors, n):
    """Lower-triangular Z-basis (row i has last nonzero entry at column i) of a rational lattice."""
    den = 1
    for v in vectors:
        for x in v:
            den = den * x.denominator // gcd(den, x.denominator)
    rows = [[int(x * den) for x in v] for v in vectors]
    out = [None] * n
    for col in range(n - 1, -1, -1):
        cand = [r for r in rows if r[col] != 0]
        rows = [r for r in rows if r[col] == 0]
        while len(cand) > 1:
            cand.sort(key=lambda r: abs(r[col]))
            a = cand[0]
            nxt = [a]
            for b in cand[1:]:
                q = b[col] // a[col]
                b = [x - q * y for x, y in zip(b, a)]
                if b[col] != 0:
                    nxt.append(b)
                elif any(b):
                    rows.append(b)
            cand = nxt
        if not cand:
            raise InconsistencyError("lattice is not of full rank")
        out[col] = cand[0]
    return [[Fraction(x, den) for x in r] for r in out]


def _coords(basis, vec):
    n = len(basis)
    x = [Fraction(0)] * n
    for j in range(n - 1, -1, -1):
        s = vec[j] - sum(x[i] * basis[i][j] for i in range(j + 1, n))
        x[j] = s / basis[j][j]
    return x


def _kernel_mod_p(rows, p):
    """Vectors x over F_p with sum_i x_i * rows[i] = 0."""
    m = len(rows)
    width = len(rows[0])
    # solve M^T x = 0 where M has the given rows
    A = [[rows[i][c] % p for i in range(m)] for c in range(width)]
    pivots, r = [], 0
    for c in range(m):
        piv = next((i for i in range(r, len(A)) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = pow(A[r][c], -1, p)
        A[r] = [v * inv % p for v in A[r]]
        for i in range(len(A)):
            if i != r and A[i][c]:
                t = A[i][c]
                A[i] = [(a - t * b) % p for a, b in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
    out = []
    for fc in (c for c in range(m) if c not in pivots):
        v = [0] * m
        v[fc] = 1
        for i, pc in enumerate(pivots):
            v[pc] = (-A[i][fc]) % p
        out.append(v)
    return out


def _p_maximal_basis(f_low, p, max_iter=30):
    n = len(f_low) - 1
    basis = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    j = 1
    while p**j < n:
        j += 1

    def mul(u, v):  # coordinates in the current basis
        pu = [sum(u[i] * basis[i][k] for i in range(n)) for k in range(n)]
        pv = [sum(v[i] * basis[i][k] for i in range(n)) for k in range(n)]
        return _coords(basis, _mul_mod(pu, pv, f_low))

    def power(u, e):
        acc = _coords(basis, [Fraction(1)] + [Fraction(0)] * (n - 1))
        while e:
            if e & 1:
                acc = mul(acc, u)
            u = mul(u, u)
            e >>= 1
        return acc

    unit = [[Fraction(int(i == k)) for k in range(n)] for i in range(n)]
    for _ in range(max_iter):
        frob = [[int(x) for x in power(e, p**j)] for e in unit]
        ker = _kernel_mod_p(frob, p)
        rad = _echelon([[Fraction(v) for v in k] for k in ker] + [[p * x for x in e] for e in unit], n)
        # U = {u : u * rad subset p * rad}; the new order is U / p
        rows = []
        for e in unit:
            row = []
            for r in rad:
                c = _coords(rad, mul(e, r))
                if any(x.denominator != 1 for x in c):
                    raise InconsistencyError("p-radical is not an ideal")
                row.extend(int(x) for x in c)
            rows.append(row)
        U = _kernel_mod_p(rows, p)
        new = _echelon([[Fraction(v, p) for v in u] for u in U] + unit, n)
        if all(new[i][i] == 1 for i in range(n)):
            return basis
        basis = _echelon([[sum(c[i] * basis[i][k] for i in range(n)) for k in range(n)] for c in new], n)
    raise InconsistencyError("Round 2 did not stabilise")


def order_index(cubic) -> int:
    """[O_K : Z[theta]] for the monic cubic (1, a, b, c)."""
    _, a, b, c = (int(x) for x in cubic)
    f_high = [1, a, b, c]
    f_low = [Fraction(c), Fraction(b), Fraction(a), Fraction(1)]
    D = cubic_disc(cubic)
    idx = 1
    for p, e in factorint(abs(D)).items():
        if e < 2 or dedekind_p_maximal(f_high, p):
            continue
        basis = _p_maximal_basis(f_low, p)
        det = Fraction(1)
        for i in range(3):
            det *= basis[i][i]
        idx *= int(1 / det)
    return idx


def field_discriminant(cubic) -> int:
    D = cubic_disc(cubic)
    idx = order_index(cubic)
    if D % (idx * idx):
        raise InconsistencyError("index squared does not divide the polynomial discriminant")
    return D // (idx * idx)


def cubic_field_conductor(cubic) -> int:
    """Conductor of the cyclic cubic field cut out by a monic integral cubic with square discriminant."""
    D = cubic_disc(cubic)
    if D <= 0 or isqrt(D) ** 2 != D:
        raise ParseError(f"cubic {tuple(cubic)} does not have a nonzero square discriminant")
    dK = field_discriminant(cubic)
    f = isqrt(dK)
    if f * f != dK:
        raise InconsistencyError(f"field discriminant {dK} of a cyclic cubic is not a square")
    structural = 1
    for p in factorint(dK):
        if p == 3:
            structural *= 9
        elif p % 3 == 1:
            structural *= p
        else:
            raise InconsistencyError(f"prime {p} ramifies in a cyclic cubic field but is not 1 mod 3")
    if structural != f:
        raise InconsistencyError(f"conductor {f} disagrees with the ramification structure {structural}")
    return f
