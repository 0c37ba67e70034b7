"""Fourier analysis over a finite group and its direct powers.

Functions live on ``G^D`` as dense tables in row-major tuple order. The
Fourier basis is the set of matrix entries of product representations,
identified with tuples of irreducibles of the base group.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import CapExceeded, DimensionMismatch, IncompleteTable, InvalidParams
from .groups import GroupPower
from .reps import IrrepSet

_DENSE_DIM_LIMIT = 64  # above this, representations stay entrywise


@dataclass(frozen=True, eq=False)
class ProductIrrep:
    """An irreducible of ``G^D``: one base irreducible per index position.

    Entries are indexed by tuples; a flat entry index decodes through the
    mixed-radix system given by the component dimensions.
    """

    base: IrrepSet
    labels: tuple[str, ...]
    comps: tuple[int, ...]

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(self.base.irreps[c].dim for c in self.comps)

    @property
    def dim(self) -> int:
        out = 1
        for d in self.dims:
            out *= d
        return out

    @property
    def degree(self) -> int:
        """Number of non-trivial components."""
        return sum(1 for c in self.comps if c != 0)

    def entry_coords(self, i: int) -> tuple[int, ...]:
        out = []
        for d in reversed(self.dims):
            out.append(i % d)
            i //= d
        return tuple(reversed(out))

    def matrices(self, power: GroupPower) -> np.ndarray:
        """Dense (n, dim, dim) matrices; components combine by tensor product.

        Refused above the dense limit; use ``entry_table`` there instead.
        """
        self._check_power(power)
        if self.dim > _DENSE_DIM_LIMIT:
            raise CapExceeded(
                f"dimension {self.dim} above the dense limit; use entry_table"
            )
        coords = power.coords_matrix()
        out = np.ones((power.n, 1, 1), dtype=complex)
        for pos, c in enumerate(self.comps):
            comp = self.base.irreps[c].matrices[coords[:, pos]]
            out = np.einsum("gab,gcd->gacbd", out, comp).reshape(
                power.n, out.shape[1] * comp.shape[1], out.shape[2] * comp.shape[2]
            )
        return out

    def entry_table(self, power: GroupPower, i: int, j: int) -> np.ndarray:
        """The scalar function g -> rho_{i,j}(g) as a dense table."""
        self._check_power(power)
        coords = power.coords_matrix()
        ci, cj = self.entry_coords(i), self.entry_coords(j)
        out = np.ones(power.n, dtype=complex)
        for pos, c in enumerate(self.comps):
            out = out * self.base.irreps[c].matrices[coords[:, pos], ci[pos], cj[pos]]
        return out

    def character_table(self, power: GroupPower) -> np.ndarray:
        self._check_power(power)
        coords = power.coords_matrix()
        out = np.ones(power.n, dtype=complex)
        for pos, c in enumerate(self.comps):
            out = out * self.base.irreps[c].character()[coords[:, pos]]
        return out

    def _check_power(self, power: GroupPower) -> None:
        if power.labels != self.labels or power.group != self.base.group:
            raise DimensionMismatch("representation and power disagree")


def product_irreps(base: IrrepSet, labels) -> tuple[ProductIrrep, ...]:
    """All irreducibles of ``G^D`` in row-major component order."""
    labels = tuple(str(x) for x in labels)
    k = len(base.irreps)
    return tuple(
        ProductIrrep(base, labels, comps)
        for comps in itertools.product(range(k), repeat=len(labels))
    )


@dataclass(frozen=True, eq=False)
class ScalarFn:
    """A complex-valued function on ``G^D`` as a dense table."""

    power: GroupPower
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        if v.shape != (self.power.n,):
            raise DimensionMismatch(f"expected {self.power.n} values, got {v.shape}")
        object.__setattr__(self, "values", v)

    @property
    def matrix_size(self) -> int | None:
        return None


@dataclass(frozen=True, eq=False)
class MatrixFn:
    """A square-matrix-valued function on ``G^D`` as a dense table."""

    power: GroupPower
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        if v.ndim != 3 or v.shape[0] != self.power.n or v.shape[1] != v.shape[2]:
            raise DimensionMismatch(f"expected ({self.power.n}, N, N), got {v.shape}")
        object.__setattr__(self, "values", v)

    @property
    def matrix_size(self) -> int:
        return self.values.shape[1]


GroupFn = ScalarFn | MatrixFn


def coeff(fn: GroupFn, rho: ProductIrrep, i: int, j: int):
    """Fourier coefficient <F, rho_{i,j}>: scalar, or an NxN matrix."""
    entry = rho.entry_table(fn.power, i, j)
    if isinstance(fn, ScalarFn):
        return complex(np.mean(fn.values * np.conj(entry)))
    return np.einsum("g,gxy->xy", np.conj(entry), fn.values) / fn.power.n


@dataclass(frozen=True, eq=False)
class FourierTable:
    """All Fourier coefficients of one function, grouped by representation."""

    power: GroupPower
    base: IrrepSet
    blocks: dict  # comps tuple -> (d, d) or (d, d, N, N) array
    matrix_size: int | None

    def get(self, rho: ProductIrrep, i: int, j: int):
        block = self.blocks.get(rho.comps)
        if block is None:
            raise IncompleteTable(f"no block for components {rho.comps}")
        return block[i, j]


def _coefficient_block(fn: GroupFn, rho: ProductIrrep) -> np.ndarray:
    if rho.dim <= _DENSE_DIM_LIMIT:
        mats = rho.matrices(fn.power)
        if isinstance(fn, ScalarFn):
            return np.einsum("g,gij->ij", fn.values, np.conj(mats)) / fn.power.n
        return np.einsum("gxy,gij->ijxy", fn.values, np.conj(mats)) / fn.power.n
    shape = (rho.dim, rho.dim) + fn.values.shape[1:]
    block = np.empty(shape, dtype=complex)
    for i in range(rho.dim):
        for j in range(rho.dim):
            block[i, j] = coeff(fn, rho, i, j)
    return block


def transform(fn: GroupFn, rhos: tuple[ProductIrrep, ...]) -> FourierTable:
    """The full Fourier transform of ``fn``."""
    if not rhos:
        raise InvalidParams("pass the product representations to expand in")
    base = rhos[0].base
    blocks = {rho.comps: _coefficient_block(fn, rho) for rho in rhos}
    return FourierTable(fn.power, base, blocks, fn.matrix_size)


def inverse(table: FourierTable, rhos: tuple[ProductIrrep, ...]) -> GroupFn:
    """Fourier inversion: F(g) = sum_rho dim_rho sum_ij F^(rho_ij) rho_ij(g)."""
    power = table.power
    if table.matrix_size is None:
        out = np.zeros(power.n, dtype=complex)
    else:
        out = np.zeros((power.n, table.matrix_size, table.matrix_size), dtype=complex)
    seen = set()
    for rho in rhos:
        block = table.blocks.get(rho.comps)
        if block is None:
            raise IncompleteTable(f"no block for components {rho.comps}")
        seen.add(rho.comps)
        if rho.dim <= _DENSE_DIM_LIMIT:
            mats = rho.matrices(power)
            if table.matrix_size is None:
                out += rho.dim * np.einsum("ij,gij->g", block, mats)
            else:
                out += rho.dim * np.einsum("ijxy,gij->gxy", block, mats)
        else:
            for i in range(rho.dim):
                for j in range(rho.dim):
                    entry = rho.entry_table(power, i, j)
                    if table.matrix_size is None:
                        out += rho.dim * block[i, j] * entry
                    else:
                        out += rho.dim * entry[:, None, None] * block[i, j]
    if len(seen) < len(table.blocks):
        raise IncompleteTable("representations passed do not cover the table")
    if table.matrix_size is None:
        return ScalarFn(power, out)
    return MatrixFn(power, out)


def plancherel_gap(fn: GroupFn, rhos: tuple[ProductIrrep, ...]) -> float:
    """| ||F||^2 - sum_rho dim_rho sum_ij |F^(rho_ij)|^2 |."""
    table = transform(fn, rhos)
    lhs = float(np.mean(np.sum(np.abs(np.reshape(fn.values, (fn.power.n, -1))) ** 2, axis=1)))
    rhs = 0.0
    for rho in rhos:
        block = table.blocks[rho.comps]
        rhs += rho.dim * float(np.sum(np.abs(block) ** 2))
    return abs(lhs - rhs)


def convolve(f: GroupFn, h: GroupFn) -> GroupFn:
    """(F*H)(g) = |G^D|^-1 sum_t F(t) H(t^-1 g)."""
    if f.power is not h.power and (
        f.power.labels != h.power.labels or f.power.group != h.power.group
    ):
        raise DimensionMismatch("convolution needs a common power")
    if f.matrix_size != h.matrix_size:
        raise DimensionMismatch("matrix sizes differ")
    power = f.power
    out = np.zeros_like(h.values if f.matrix_size else f.values, dtype=complex)
    all_g = np.arange(power.n)
    for t in range(power.n):
        idx = power.mul_with(power.inv(t), all_g)
        if f.matrix_size is None:
            out += f.values[t] * h.values[idx]
        else:
            out += np.einsum("xy,gyz->gxz", f.values[t], h.values[idx])
    out /= power.n
    if f.matrix_size is None:
        return ScalarFn(power, out)
    return MatrixFn(power, out)


def noise_weights(power: GroupPower, eps: Fraction) -> list[Fraction]:
    """Exact probability of each noise tuple: per coordinate the tuple is the
    identity with probability 1-eps and uniform otherwise."""
    if not 0 < eps < 1:
        raise InvalidParams(f"noise rate must be in (0,1), got {eps}")
    size = len(power.group)
    w_id = (1 - eps) + Fraction(eps, size)
    w_other = Fraction(eps, size)
    e = power.group.identity
    out = []
    for nu in range(power.n):
        w = Fraction(1)
        for c in power.coords(nu):
            w *= w_id if c == e else w_other
        out.append(w)
    return out


def noise_apply(fn: GroupFn, eps: Fraction) -> GroupFn:
    """H(a) = E_nu[F(a * nu)] with the exact product noise distribution."""
    power = fn.power
    weights = noise_weights(power, Fraction(eps))
    out = np.zeros_like(fn.values, dtype=complex)
    for nu, w in enumerate(weights):
        if w == 0:
            continue
        out += float(w) * fn.values[power.mul_all_right(nu)]
    if fn.matrix_size is None:
        return ScalarFn(power, out)
    return MatrixFn(power, out)


@dataclass(frozen=True, eq=False)
class PullbackRep:
    """``rho^pi``: a representation of ``G^E`` pulled back along pi: D -> E.

    Entries keep the index tuples of ``rho``; the matrix at ``g`` is the
    tensor product over D-positions of the components evaluated at g(pi(d)).
    """

    rho: ProductIrrep
    positions: tuple[int, ...]  # for each D-slot, the E-slot pi maps it to
    e_labels: tuple[str, ...]

    @property
    def dim(self) -> int:
        return self.rho.dim

    def matrices(self, e_power: GroupPower) -> np.ndarray:
        self._check(e_power)
        coords = e_power.coords_matrix()
        out = np.ones((e_power.n, 1, 1), dtype=complex)
        for pos, c in enumerate(self.rho.comps):
            comp = self.rho.base.irreps[c].matrices[coords[:, self.positions[pos]]]
            out = np.einsum("gab,gcd->gacbd", out, comp).reshape(
                e_power.n, out.shape[1] * comp.shape[1], out.shape[2] * comp.shape[2]
            )
        return out

    def entry_table(self, e_power: GroupPower, i: int, j: int) -> np.ndarray:
        self._check(e_power)
        coords = e_power.coords_matrix()
        ci, cj = self.rho.entry_coords(i), self.rho.entry_coords(j)
        out = np.ones(e_power.n, dtype=complex)
        for pos, c in enumerate(self.rho.comps):
            mats = self.rho.base.irreps[c].matrices
            out = out * mats[coords[:, self.positions[pos]], ci[pos], cj[pos]]
        return out

    def _check(self, e_power: GroupPower) -> None:
        if e_power.labels != self.e_labels or e_power.group != self.rho.base.group:
            raise DimensionMismatch("pullback and power disagree")


def pullback(rho: ProductIrrep, pi: dict, e_labels) -> PullbackRep:
    """The representation of ``G^E`` obtained by precomposing with pi."""
    e_labels = tuple(str(x) for x in e_labels)
    epos = {l: k for k, l in enumerate(e_labels)}
    positions = []
    for d in rho.labels:
        e = pi.get(d, pi.get(str(d)))
        if e is None or str(e) not in epos:
            raise InvalidParams(f"pi does not map label {d} into E")
        positions.append(epos[str(e)])
    return PullbackRep(rho, tuple(positions), e_labels)


def similar(tau: ProductIrrep, rho: ProductIrrep, pi: dict) -> bool:
    """True iff every position where ``tau`` is non-trivial has a non-trivial
    ``rho`` component mapping onto it under pi."""
    epos = {l: k for k, l in enumerate(tau.labels)}
    hit = [False] * len(tau.labels)
    for pos, d in enumerate(rho.labels):
        e = str(pi.get(d, pi.get(str(d))))
        if e in epos and rho.comps[pos] != 0:
            hit[epos[e]] = True
    return all(hit[k] for k, c in enumerate(tau.comps) if c != 0)
