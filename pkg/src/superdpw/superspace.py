"""Calculus on the superspace R^{2|2}.

A superspace function with values in Grassmann matrices is stored as its
θ-expansion  A = a₀ + θ¹a₁ + θ²a₂ + θ¹θ²a₁₂, with each coefficient a field
on R² (exact polynomial in (z, z̄) or grid samples with finite-difference
jets).  The left-invariant derivations are

    D₁ = ∂_θ¹ − θ¹∂_x − θ²∂_y,      D₂ = ∂_θ² − θ¹∂_y + θ²∂_x,
    D  = ½(D₁ − iD₂),               D̄ = ½(D₁ + iD₂),

acting through the component formulas obtained by expanding in θ.  The θ's
anticommute with odd Grassmann coefficients, which is what the parity
bookkeeping in ``SuperExpansion.mul`` implements.
"""

from __future__ import annotations

import numpy as np

from .grassmann import GrassmannContext, GrassmannError


class ParityError(GrassmannError):
    pass


# ---------------------------------------------------------------------------
# grids and finite differences
# ---------------------------------------------------------------------------

def fd4_matrix(x):
    """Dense 4th-order first-derivative matrix on a uniform 1-D grid."""
    n = len(x)
    if n < 5:
        raise ValueError("need at least 5 points for 4th-order stencils")
    h = x[1] - x[0]
    D = np.zeros((n, n))
    D[0, :5] = np.array([-25, 48, -36, 16, -3]) / 12.0
    D[1, :5] = np.array([-3, -10, 18, -6, 1]) / 12.0
    for i in range(2, n - 2):
        D[i, i - 2:i + 3] = np.array([1, -8, 0, 8, -1]) / 12.0
    D[-2, -5:] = -np.array([-3, -10, 18, -6, 1])[::-1] / 12.0
    D[-1, -5:] = -np.array([-25, 48, -36, 16, -3])[::-1] / 12.0
    return D / h


class Grid:
    """Uniform rectangular grid on [-extent, extent]² with FD-4 derivative operators."""

    def __init__(self, nx=32, ny=32, extent=1.0):
        self.nx, self.ny, self.extent = nx, ny, float(extent)
        self.xs = np.linspace(-extent, extent, nx)
        self.ys = np.linspace(-extent, extent, ny)
        self.hx = self.xs[1] - self.xs[0]
        self.hy = self.ys[1] - self.ys[0]
        self.Dx = fd4_matrix(self.xs)
        self.Dy = fd4_matrix(self.ys)
        X, Y = np.meshgrid(self.xs, self.ys)  # [ny, nx]
        self.Z = X + 1j * Y

    def ddx(self, data):
        """∂/∂x of samples [ny, nx, ...]."""
        return np.einsum("ab,yb...->ya...", self.Dx, data)

    def ddy(self, data):
        return np.einsum("ab,bx...->ax...", self.Dy, data)

    def __eq__(self, other):
        return isinstance(other, Grid) and (self.nx, self.ny, self.extent) == \
            (other.nx, other.ny, other.extent)


# ---------------------------------------------------------------------------
# fields: exact polynomial and grid-sampled
# ---------------------------------------------------------------------------

class PolyField:
    """Polynomial map R² → Grassmann matrices, Σ c_{ij} z^i z̄^j, c_{ij} ∈ [G, r, c].

    The analytic jet provider: derivatives of any order are exact, so nested
    D-operators can be checked at residual ~1e-15.
    """

    def __init__(self, ctx: GrassmannContext, shape, coeffs=None):
        self.ctx = ctx
        self.shape = tuple(shape)  # (r, c)
        self.coeffs = {}
        if coeffs:
            for key, cube in coeffs.items():
                cube = np.asarray(cube, dtype=complex)
                if cube.shape != (ctx.G,) + self.shape:
                    raise ValueError(f"coefficient shape {cube.shape} mismatch")
                if np.any(cube):
                    self.coeffs[(int(key[0]), int(key[1]))] = cube

    @classmethod
    def constant(cls, ctx, cube):
        cube = np.asarray(cube, dtype=complex)
        return cls(ctx, cube.shape[1:], {(0, 0): cube})

    @classmethod
    def zeros(cls, ctx, shape):
        return cls(ctx, shape)

    def _binop(self, other, op):
        if isinstance(other, PolyField):
            if other.shape != self.shape:
                raise ValueError("shape mismatch")
            out = dict(self.coeffs)
            for k, v in other.coeffs.items():
                out[k] = op(out.get(k, 0), v)
            return PolyField(self.ctx, self.shape, out)
        raise TypeError

    def __add__(self, other):
        return self._binop(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._binop(other, lambda a, b: a - b)

    def __neg__(self):
        return PolyField(self.ctx, self.shape,
                         {k: -v for k, v in self.coeffs.items()})

    def scale(self, c):
        return PolyField(self.ctx, self.shape,
                         {k: c * v for k, v in self.coeffs.items()})

    def mul(self, other):
        """Pointwise product; scalar-shaped factors act by Grassmann scaling."""
        ctx = self.ctx
        out = {}
        if self.shape == (1, 1) and other.shape != (1, 1):
            comb, shape = (lambda a, b: ctx.smul(a[..., 0, 0], b)), other.shape
        elif other.shape == (1, 1) and self.shape != (1, 1):
            comb = lambda a, b: ctx.matmul(a, _scalar_to_matrix(ctx, b, self.shape[1]))
            shape = self.shape
        else:
            comb, shape = ctx.matmul, (self.shape[0], other.shape[1])
        for (i1, j1), c1 in self.coeffs.items():
            for (i2, j2), c2 in other.coeffs.items():
                k = (i1 + i2, j1 + j2)
                v = comb(c1, c2)
                out[k] = out.get(k, 0) + v
        return PolyField(ctx, shape, out)

    def dz(self):
        out = {}
        for (i, j), c in self.coeffs.items():
            if i:
                out[(i - 1, j)] = i * c
        return PolyField(self.ctx, self.shape, out)

    def dzb(self):
        out = {}
        for (i, j), c in self.coeffs.items():
            if j:
                out[(i, j - 1)] = j * c
        return PolyField(self.ctx, self.shape, out)

    def dx(self):
        return self.dz() + self.dzb()

    def dy(self):
        return self.dz().scale(1j) + self.dzb().scale(-1j)

    def conj(self):
        """conj(z^i z̄^j c) = z^j z̄^i conj(c); generators fixed."""
        return PolyField(self.ctx, self.shape,
                         {(j, i): np.conj(c) for (i, j), c in self.coeffs.items()})

    def transpose(self):
        return PolyField(self.ctx, (self.shape[1], self.shape[0]),
                         {k: np.swapaxes(c, -1, -2) for k, c in self.coeffs.items()})

    def sample(self, grid: Grid):
        out = np.zeros((grid.ny, grid.nx, self.ctx.G) + self.shape, dtype=complex)
        Z, Zb = grid.Z, np.conj(grid.Z)
        for (i, j), c in self.coeffs.items():
            out += (Z ** i * Zb ** j)[:, :, None, None, None] * c
        return out

    def eval_at(self, z):
        out = np.zeros((self.ctx.G,) + self.shape, dtype=complex)
        for (i, j), c in self.coeffs.items():
            out += (z ** i * np.conj(z) ** j) * c
        return out

    def to_grid(self, grid):
        return GridField(self.ctx, grid, self.sample(grid))

    def zero_like(self):
        return PolyField(self.ctx, self.shape)


def _right_smul(ctx, A, s):
    """A · s for Grassmann scalar s: embed both and multiply (keeps signs right)."""
    return ctx.matmul(A, np.broadcast_to(
        s.reshape(s.shape[:-2] + (ctx.G, 1, 1)) if s.ndim >= 3 else s, s.shape))


class GridField:
    """Grid-sampled field with 4th-order finite-difference jets."""

    def __init__(self, ctx, grid, data):
        self.ctx = ctx
        self.grid = grid
        self.data = np.asarray(data, dtype=complex)  # [ny, nx, G, r, c]
        self.shape = self.data.shape[-2:]

    def _wrap(self, data):
        return GridField(self.ctx, self.grid, data)

    def __add__(self, other):
        return self._wrap(self.data + other.data)

    def __sub__(self, other):
        return self._wrap(self.data - other.data)

    def __neg__(self):
        return self._wrap(-self.data)

    def scale(self, c):
        return self._wrap(c * self.data)

    def mul(self, other):
        if self.shape == (1, 1) and other.shape != (1, 1):
            return other._wrap(self.ctx.smul(self.data[..., 0, 0], other.data))
        if other.shape == (1, 1) and self.shape != (1, 1):
            big = self.ctx.embed(self.data)
            cols = self.ctx.cols(np.broadcast_to(
                other.data, other.data.shape[:-2] + (1, 1)))
            return self._wrap(self.ctx.uncols(big @ np.broadcast_to(
                cols, big.shape[:-1] + (1,)), self.shape[0])) if False else \
                self._wrap(_gridwise_matmul(self.ctx, self.data,
                                            _scalar_to_matrix(self.ctx, other.data,
                                                              self.shape[1])))
        return self._wrap(_gridwise_matmul(self.ctx, self.data, other.data))

    def dx(self):
        return self._wrap(self.grid.ddx(self.data))

    def dy(self):
        return self._wrap(self.grid.ddy(self.data))

    def dz(self):
        return self._wrap(0.5 * (self.grid.ddx(self.data) - 1j * self.grid.ddy(self.data)))

    def dzb(self):
        return self._wrap(0.5 * (self.grid.ddx(self.data) + 1j * self.grid.ddy(self.data)))

    def conj(self):
        return self._wrap(np.conj(self.data))

    def transpose(self):
        return self._wrap(np.swapaxes(self.data, -1, -2))

    def inv(self):
        """Pointwise inverse over the Grassmann algebra via the regular embedding."""
        big = self.ctx.embed(self.data)
        return self._wrap(self.ctx.extract(np.linalg.inv(big), self.shape[0]))

    def sample(self, grid=None):
        return self.data

    def zero_like(self):
        return self._wrap(np.zeros_like(self.data))


def _scalar_to_matrix(ctx, sdata, n):
    """[..., G, 1, 1] scalar samples -> [..., G, n, n] multiples of the identity."""
    eye = np.eye(n)
    return sdata[..., :, 0, 0][..., :, None, None] * eye


def _gridwise_matmul(ctx, A, B):
    return ctx.uncols(ctx.embed(A) @ ctx.cols(B), A.shape[-2])


# ---------------------------------------------------------------------------
# θ-expansions
# ---------------------------------------------------------------------------

_MERGE_SIGN = {(0, 0): 1, (0, 1): 1, (0, 2): 1, (0, 3): 1,
               (1, 0): 1, (1, 2): 1,
               (2, 0): 1, (2, 1): -1,
               (3, 0): 1}
_NTHETA = {0: 0, 1: 1, 2: 1, 3: 2}


class SuperExpansion:
    """a₀ + θ¹a₁ + θ²a₂ + θ¹θ²a₁₂ with pure total parity (0 even, 1 odd).

    Components are fields (PolyField/GridField or loop-valued equivalents)
    sharing one arithmetic protocol.  Component a_I has Grassmann parity
    (total + |I|) mod 2.
    """

    def __init__(self, comps, parity):
        self.comps = dict(comps)  # int mask in {0,1,2,3} -> field
        self.parity = parity % 2

    def __getitem__(self, key):
        return self.comps[key]

    def _template(self):
        return next(iter(self.comps.values()))

    def filled(self):
        z = self._template().zero_like()
        return {k: self.comps.get(k, z) for k in range(4)}

    def __add__(self, other):
        if self.parity != other.parity:
            raise ParityError("cannot add expansions of different parity")
        a, b = self.filled(), other.filled()
        return SuperExpansion({k: a[k] + b[k] for k in range(4)}, self.parity)

    def __sub__(self, other):
        return self + other.scale(-1.0)

    def __neg__(self):
        return self.scale(-1.0)

    def scale(self, c):
        return SuperExpansion({k: v.scale(c) for k, v in self.comps.items()},
                              self.parity)

    def mul(self, other):
        """Product with θ-reordering signs: θ^J a = (−1)^{|J|p(a)} a θ^J."""
        out = {}
        for I, aI in self.comps.items():
            pa = (self.parity + _NTHETA[I]) % 2
            for J, bJ in other.comps.items():
                if I & J:
                    continue
                sign = _MERGE_SIGN[(I, J)]
                if _NTHETA[J] % 2 and pa:
                    sign = -sign
                term = aI.mul(bJ) if sign == 1 else aI.mul(bJ).scale(sign)
                K = I | J
                out[K] = out.get(K, None) + term if K in out else term
        return SuperExpansion(out, (self.parity + other.parity) % 2)

    def conj(self):
        """Complex conjugation; θ-coordinates are real."""
        return SuperExpansion({k: v.conj() for k, v in self.comps.items()},
                              self.parity)

    def transpose(self):
        return SuperExpansion({k: v.transpose() for k, v in self.comps.items()},
                              self.parity)

    def restrict(self):
        """i*: restriction to R² (the θ⁰ component)."""
        return self.comps.get(0, self._template().zero_like())

    def inverse(self):
        """Inverse of an even expansion with invertible body component."""
        if self.parity != 0:
            raise ParityError("only even expansions are invertible")
        comps = self.filled()
        u_inv = comps[0].inv()
        uinv_exp = SuperExpansion({0: u_inv}, 0)
        nil = SuperExpansion({k: u_inv.mul(v) for k, v in comps.items() if k != 0}, 0)
        # (1 + N)^{-1} = 1 - N + N², N³ = 0 in two θ's
        n2 = nil.mul(nil)
        out = uinv_exp._one_like() - nil + n2
        return out.mul(uinv_exp)

    def _one_like(self):
        z = self._template()
        eye = z.zero_like()
        if isinstance(eye, GridField):
            data = np.zeros_like(eye.data)
            data[..., 0, :, :] = np.eye(data.shape[-1])
            eye = GridField(eye.ctx, eye.grid, data)
        else:
            cube = np.zeros((z.ctx.G,) + z.shape, dtype=complex)
            cube[0] = np.eye(z.shape[0])
            eye = PolyField.constant(z.ctx, cube)
        return SuperExpansion({0: eye}, 0)

    # -- complex θ-basis ------------------------------------------------------

    def theta_components(self):
        """(x₀, x_θ, x_θ̄, x_θθ̄) with θ = θ¹ + iθ², θθ̄ = −2iθ¹θ²."""
        c = self.filled()
        x_t = (c[1] + c[2].scale(-1j)).scale(0.5)
        x_tb = (c[1] + c[2].scale(1j)).scale(0.5)
        x_ttb = c[3].scale(0.5j)
        return c[0], x_t, x_tb, x_ttb

    @staticmethod
    def from_theta(x0, x_t, x_tb, x_ttb, parity):
        return SuperExpansion({0: x0,
                               1: x_t + x_tb,
                               2: (x_t - x_tb).scale(1j),
                               3: x_ttb.scale(-2j)}, parity)

    def sup_norm(self, grid=None):
        m = 0.0
        for v in self.comps.values():
            arr = v.sample(grid)
            if arr.size:
                m = max(m, float(np.max(np.abs(arr))))
        return m


# ---------------------------------------------------------------------------
# the derivations of R^{2|2}
# ---------------------------------------------------------------------------

def apply_D1(A: SuperExpansion) -> SuperExpansion:
    c = A.filled()
    return SuperExpansion({0: c[1],
                           1: -c[0].dx(),
                           2: c[3] - c[0].dy(),
                           3: c[1].dy() - c[2].dx()}, A.parity + 1)


def apply_D2(A: SuperExpansion) -> SuperExpansion:
    c = A.filled()
    return SuperExpansion({0: c[2],
                           1: -c[3] - c[0].dy(),
                           2: c[0].dx(),
                           3: -c[2].dy() - c[1].dx()}, A.parity + 1)


def apply_D(A: SuperExpansion) -> SuperExpansion:
    return (apply_D1(A) + apply_D2(A).scale(-1j)).scale(0.5)


def apply_Dbar(A: SuperExpansion) -> SuperExpansion:
    return (apply_D1(A) + apply_D2(A).scale(1j)).scale(0.5)


def apply_dx(A: SuperExpansion) -> SuperExpansion:
    return SuperExpansion({k: v.dx() for k, v in A.comps.items()}, A.parity)


def apply_dy(A: SuperExpansion) -> SuperExpansion:
    return SuperExpansion({k: v.dy() for k, v in A.comps.items()}, A.parity)


def apply_dz(A: SuperExpansion) -> SuperExpansion:
    return SuperExpansion({k: v.dz() for k, v in A.comps.items()}, A.parity)


def apply_dzb(A: SuperExpansion) -> SuperExpansion:
    return SuperExpansion({k: v.dzb() for k, v in A.comps.items()}, A.parity)
