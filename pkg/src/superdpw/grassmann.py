"""Exact arithmetic in the finite Grassmann algebra B_L = R[η₁,…,η_L], complexified.

Two layers live here:

* ``GrassmannNumber`` — an exact, dict-backed element of B_L ⊗ C keyed by
  strictly increasing generator multi-indices (stored as bitmasks).  This is
  the user-facing scalar type; all its operations are exact (no tolerance).
* ``GrassmannContext`` — precomputed numpy tables for a fixed L: the sign
  table of the basis, parity/degree masks, and the left-regular embedding
  B_L ⊗ C → End(C^{2^L}).  Matrices over the algebra embed as block matrices
  of left-multiplication operators, turning every product, inverse and
  exponential downstream into plain complex linear algebra.

Coefficient arrays downstream follow the convention ``[..., G, *shape]``
with G = 2^L the Grassmann-basis axis placed right before the matrix axes.
"""

from __future__ import annotations

import numpy as np


class GrassmannError(Exception):
    pass


class DimensionMismatch(GrassmannError):
    pass


class NotInvertible(GrassmannError):
    pass


def _mask_sign(a: int, b: int) -> int:
    """Sign of e_a · e_b from counting inversions when merging index tuples."""
    sign = 1
    bb = b
    while bb:
        j = bb & -bb          # lowest generator of b
        # generators of a strictly above j must hop over it
        above = a >> (j.bit_length())
        if bin(above).count("1") % 2:
            sign = -sign
        bb ^= j
    return sign


def _mask_indices(mask: int) -> tuple[int, ...]:
    """1-based, strictly increasing generator indices of a basis mask."""
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


class GrassmannNumber:
    """Element of B_L ⊗ C with sparse multi-index coefficients.

    Coefficients are held in a dict keyed by generator bitmask; absent key
    means exactly zero.  All arithmetic is exact.
    """

    __slots__ = ("L", "coeffs")

    def __init__(self, L, coeffs=None):
        if L < 0:
            raise GrassmannError("number of generators must be >= 0")
        self.L = int(L)
        self.coeffs = {}
        if coeffs:
            top = 1 << self.L
            for mask, c in coeffs.items():
                if not 0 <= mask < top:
                    raise GrassmannError(f"index mask {mask} out of range for L={L}")
                c = complex(c)
                if c != 0:
                    self.coeffs[int(mask)] = c

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, L):
        return cls(L)

    @classmethod
    def scalar(cls, value, L):
        return cls(L, {0: complex(value)})

    @classmethod
    def generator(cls, i, L):
        """η_i, 1-based."""
        if not 1 <= i <= L:
            raise GrassmannError(f"generator index {i} not in 1..{L}")
        return cls(L, {1 << (i - 1): 1.0})

    @classmethod
    def from_indices(cls, indices, value, L):
        mask = 0
        prev = 0
        for i in indices:
            if not prev < i <= L:
                raise GrassmannError("indices must be strictly increasing in 1..L")
            mask |= 1 << (i - 1)
            prev = i
        return cls(L, {mask: value})

    # -- ring structure ----------------------------------------------------

    def _check(self, other):
        if self.L != other.L:
            raise DimensionMismatch(f"mixed generator counts {self.L} != {other.L}")

    def __add__(self, other):
        if not isinstance(other, GrassmannNumber):
            other = GrassmannNumber.scalar(other, self.L)
        self._check(other)
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            s = out.get(m, 0) + c
            if s == 0:
                out.pop(m, None)
            else:
                out[m] = s
        return GrassmannNumber(self.L, out)

    __radd__ = __add__

    def __neg__(self):
        return GrassmannNumber(self.L, {m: -c for m, c in self.coeffs.items()})

    def __sub__(self, other):
        if not isinstance(other, GrassmannNumber):
            other = GrassmannNumber.scalar(other, self.L)
        return self + (-other)

    def __rsub__(self, other):
        return GrassmannNumber.scalar(other, self.L) + (-self)

    def __mul__(self, other):
        if not isinstance(other, GrassmannNumber):
            return GrassmannNumber(self.L, {m: c * other for m, c in self.coeffs.items()})
        self._check(other)
        out = {}
        for ma, ca in self.coeffs.items():
            for mb, cb in other.coeffs.items():
                if ma & mb:
                    continue  # repeated generator annihilates
                m = ma | mb
                c = out.get(m, 0) + _mask_sign(ma, mb) * ca * cb
                if c == 0:
                    out.pop(m, None)
                else:
                    out[m] = c
        return GrassmannNumber(self.L, out)

    def __rmul__(self, other):
        # scalars commute with everything
        return self.__mul__(other)

    def __eq__(self, other):
        if isinstance(other, (int, float, complex)):
            other = GrassmannNumber.scalar(other, self.L)
        return isinstance(other, GrassmannNumber) and self.L == other.L \
            and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.L, tuple(sorted(self.coeffs.items()))))

    def __repr__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for m in sorted(self.coeffs):
            c = self.coeffs[m]
            mono = "".join(f"η{i}" for i in _mask_indices(m)) or "1"
            parts.append(f"({c:g})·{mono}" if mono != "1" else f"({c:g})")
        return " + ".join(parts)

    # -- structure maps ----------------------------------------------------

    def body(self):
        return self.coeffs.get(0, 0j)

    def soul(self):
        return GrassmannNumber(self.L, {m: c for m, c in self.coeffs.items() if m})

    def parity(self):
        """'even' | 'odd' | 'mixed' from the support; zero counts as even."""
        has = {bin(m).count("1") % 2 for m in self.coeffs}
        if has == {0} or not has:
            return "even"
        if has == {1}:
            return "odd"
        return "mixed"

    def conj(self):
        """Complex-conjugate coefficients; generators are fixed (a ring automorphism)."""
        return GrassmannNumber(self.L, {m: c.conjugate() for m, c in self.coeffs.items()})

    def inverse(self):
        """b⁻¹ Σ_{k≤L} (−soul/b)^k, exact; requires nonzero body."""
        b = self.body()
        if b == 0:
            raise NotInvertible("zero body: element is not invertible")
        t = self.soul() * (-1.0 / b)
        acc = GrassmannNumber.scalar(1.0, self.L)
        power = GrassmannNumber.scalar(1.0, self.L)
        for _ in range(self.L):
            power = power * t
            if not power.coeffs:
                break
            acc = acc + power
        return acc * (1.0 / b)

    def norm(self):
        return max((abs(c) for c in self.coeffs.values()), default=0.0)

    # -- serialization (records used by config and report files) -----------

    def to_records(self):
        recs = []
        for m in sorted(self.coeffs):
            c = self.coeffs[m]
            recs.append({"indices": list(_mask_indices(m)), "re": c.real, "im": c.imag})
        return recs

    @classmethod
    def from_records(cls, records, L):
        out = cls(L)
        for rec in records:
            val = complex(rec.get("re", 0.0), rec.get("im", 0.0))
            out = out + cls.from_indices(tuple(rec["indices"]), val, L)
        return out

    # -- context interop ----------------------------------------------------

    def to_vector(self, ctx):
        if ctx.L != self.L:
            raise DimensionMismatch(f"context L={ctx.L} != element L={self.L}")
        v = np.zeros(ctx.G, dtype=complex)
        for m, c in self.coeffs.items():
            v[m] = c
        return v

    @classmethod
    def from_vector(cls, v, L):
        return cls(L, {m: c for m, c in enumerate(np.asarray(v)) if c != 0})


# convenience aliases matching the operation names of the public surface
def gr_mul(x, y):
    return x * y


def gr_inverse(x):
    return x.inverse()


def gr_parity(x):
    return x.parity()


def gr_body(x):
    return x.body()


def gr_conj(x):
    return x.conj()


class GrassmannContext:
    """Vectorized tables for B_L ⊗ C with G = 2^L basis monomials.

    Arrays over the algebra use axis layout ``[..., G, *shape]``.  Products go
    through the left-regular embedding: an (n × n) matrix over B_L becomes an
    (nG × nG) complex block matrix, so batched products, inverses and
    exponentials are plain BLAS/LAPACK calls.
    """

    def __init__(self, L):
        self.L = int(L)
        self.G = 1 << self.L
        G = self.G
        self.degree = np.array([bin(m).count("1") for m in range(G)])
        self.parity = self.degree % 2
        sign = np.zeros((G, G))
        target = np.zeros((G, G), dtype=int)
        for a in range(G):
            for b in range(G):
                if a & b:
                    continue
                sign[a, b] = _mask_sign(a, b)
                target[a, b] = a | b
        self.sign = sign
        self.target = target
        # left-multiplication tensor: Ltab[g, r, c] = sign(g, c) when r = g|c
        Ltab = np.zeros((G, G, G))
        for g in range(G):
            for c in range(G):
                if g & c:
                    continue
                Ltab[g, g | c, c] = sign[g, c]
        self.Ltab = Ltab

    # -- embeddings ---------------------------------------------------------

    def embed(self, A):
        """[..., G, n, n] -> [..., nG, nG] block matrix of left multiplications."""
        A = np.asarray(A)
        n = A.shape[-1]
        big = np.einsum("...gij,grc->...irjc", A, self.Ltab)
        return big.reshape(A.shape[:-3] + (n * self.G, n * self.G))

    def cols(self, B):
        """[..., G, n, m] -> [..., nG, m]: the e_∅ block columns of embed(B)."""
        B = np.asarray(B)
        n, m = B.shape[-2], B.shape[-1]
        arr = np.moveaxis(B, -3, -2)  # (..., n, G, m)
        return arr.reshape(B.shape[:-3] + (n * self.G, m))

    def uncols(self, C, n):
        m = C.shape[-1]
        arr = C.reshape(C.shape[:-2] + (n, self.G, m))
        return np.moveaxis(arr, -2, -3)

    def extract(self, big, n):
        """Inverse of embed: read coefficients off the e_∅ columns."""
        arr = big.reshape(big.shape[:-2] + (n, self.G, n, self.G))
        return np.moveaxis(arr[..., 0], -2, -3)

    # -- products -----------------------------------------------------------

    def matmul(self, A, B):
        """Product of Grassmann matrices [..., G, n, k] @ [..., G, k, m]."""
        n = A.shape[-2]
        return self.uncols(self.embed(A) @ self.cols(B), n)

    def smul(self, s, A, nshape=2):
        """Grassmann scalar [..., G] times array [..., G, *shape(nshape axes)]."""
        A = np.asarray(A)
        Ls = np.einsum("...g,grc->...rc", np.asarray(s), self.Ltab)
        Lse = Ls.reshape(Ls.shape + (1,) * nshape)
        out_axes = [Ellipsis, 0] + list(range(2, 2 + nshape))
        return np.einsum(Lse, [Ellipsis, 0, 1] + list(range(2, 2 + nshape)),
                         A, [Ellipsis, 1] + list(range(2, 2 + nshape)),
                         out_axes)

    # -- coefficient maps ----------------------------------------------------

    def gconj(self, A):
        """Coefficientwise complex conjugation (generators fixed)."""
        return np.conj(A)

    def body(self, A):
        return np.asarray(A)[..., 0, :, :] if np.asarray(A).ndim >= 3 else np.asarray(A)[..., 0]

    def parity_project(self, A, parity, axis):
        """Keep only coefficients of the given parity (0 even, 1 odd)."""
        A = np.asarray(A)
        mask = (self.parity == parity)
        sl = [slice(None)] * A.ndim
        out = np.zeros_like(A)
        idx = np.nonzero(mask)[0]
        sl[axis] = idx
        out[tuple(sl)] = A[tuple(sl)]
        return out

    def degree_slice(self, A, d, axis):
        """Keep only coefficients of Grassmann degree d."""
        A = np.asarray(A)
        out = np.zeros_like(A)
        sl = [slice(None)] * A.ndim
        sl[axis] = np.nonzero(self.degree == d)[0]
        out[tuple(sl)] = A[tuple(sl)]
        return out

    def star(self, A):
        """Conjugate transpose over the algebra: gconj then swap matrix axes."""
        return np.swapaxes(np.conj(A), -1, -2)

    def norm(self, A):
        return float(np.max(np.abs(A))) if np.asarray(A).size else 0.0

    def identity(self, n, lead=()):
        out = np.zeros(tuple(lead) + (self.G, n, n), dtype=complex)
        out[..., 0, :, :] = np.eye(n)
        return out

    def lift(self, M, lead=()):
        """Plain complex matrix -> body-only Grassmann matrix."""
        M = np.asarray(M, dtype=complex)
        out = np.zeros(tuple(lead) + (self.G,) + M.shape, dtype=complex)
        out[..., 0, :, :] = M
        return out

    def number_to_vec(self, x: GrassmannNumber):
        return x.to_vector(self)

    def vec_to_number(self, v):
        return GrassmannNumber.from_vector(v, self.L)
