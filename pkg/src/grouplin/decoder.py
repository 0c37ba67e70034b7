"""Soundness decoder: from a side-2 assignment family that beats the random
threshold, extract a randomized Label Cover strategy via penalized characters
and low-degree Fourier influences, together with the measurable quantities
the analysis bounds."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace
from fractions import Fraction

import numpy as np

from .errors import InvalidParams, NoOmega
from .fourier import MatrixFn, ScalarFn, convolve, noise_weights, product_irreps
from .groups import GroupPower, Template, fold
from .reduction import (
    AssignmentFamily,
    LabelCoverInstance,
    ReductionParams,
    lc_value,
    payoff_distribution,
    powers,
)
from .reps import IrrepSet, UnitaryRep, eta, irreps

log = logging.getLogger(__name__)

_TIE = 1e-12


def kappa(delta: Fraction, eps: Fraction, d_size: int | None = None) -> int:
    """Truncation degree ceil((log2 delta - 2) / log2(1 - eps)).

    When ``d_size`` is given the result is clamped to [1, d_size], since no
    representation of the power has a larger degree; a clamp is logged.
    """
    delta, eps = Fraction(delta), Fraction(eps)
    if not 0 < eps < 1:
        raise InvalidParams(f"eps must be in (0,1), got {eps}")
    if not 0 < delta < 4:
        raise InvalidParams(f"delta must be in (0,4), got {delta}")
    ratio = (math.log2(float(delta)) - 2.0) / math.log2(1.0 - float(eps))
    if abs(ratio - round(ratio)) < 1e-9:
        value = int(round(ratio))
    else:
        value = int(math.ceil(ratio))
    value = max(value, 1)
    if d_size is None:
        return value
    clamped = min(value, d_size)
    if clamped != value:
        log.warning("truncation degree %d clamped to |D| = %d", value, d_size)
    return clamped


def alpha(delta: Fraction, eps: Fraction, g1_size: int, g2_size: int) -> Fraction:
    """The guaranteed Label Cover value delta^2 / (4 k |G1|^k |G2|^4)."""
    delta = Fraction(delta)
    k = kappa(delta, eps)
    return delta**2 / (4 * k * Fraction(g1_size) ** k * Fraction(g2_size) ** 4)


@dataclass(frozen=True, eq=False)
class DecoderContext:
    """Everything the decoder needs, with the payoff distribution cached."""

    lc: LabelCoverInstance
    template: Template
    eps: Fraction
    delta: Fraction
    family: AssignmentFamily
    seed: int
    leftover: str
    g1_irreps: IrrepSet
    g2_irreps: IrrepSet
    pe: GroupPower
    pd: GroupPower
    prod_e: tuple
    prod_d: tuple
    z_mass: dict  # element of G2 -> Fraction
    value: Fraction

    @property
    def threshold(self) -> Fraction:
        return Fraction(1, len(self.template.h2)) + self.delta


def make_context(
    lc: LabelCoverInstance,
    template: Template,
    eps: Fraction,
    delta: Fraction,
    family: AssignmentFamily,
    seed: int = 0,
    leftover: str = "giveup",
    cap: int | None = None,
) -> DecoderContext:
    eps, delta = Fraction(eps), Fraction(delta)
    if leftover not in ("giveup", "normalize"):
        raise InvalidParams(f"unknown leftover rule {leftover}")
    if family.side != 2:
        raise InvalidParams("the decoder consumes side-2 families")
    h2 = len(template.h2)
    if Fraction(1, h2) + delta > 1 - eps:
        raise InvalidParams(
            f"need 1/|Im(phi)| + delta <= 1 - eps, got {Fraction(1, h2) + delta} > {1 - eps}"
        )
    params = ReductionParams(eps, cap=cap)
    mass = payoff_distribution(lc, template, params, family, side=2)
    value = mass.get(template.g2.identity, Fraction(0))
    if value < Fraction(1, h2) + delta:
        log.warning(
            "family value %s is below the promise threshold %s",
            value,
            Fraction(1, h2) + delta,
        )
    g1_ir = irreps(template.g1, seed=seed)
    g2_ir = irreps(template.g2, seed=seed)
    pe, pd = powers(lc, template)
    return DecoderContext(
        lc=lc,
        template=template,
        eps=eps,
        delta=delta,
        family=family,
        seed=seed,
        leftover=leftover,
        g1_irreps=g1_ir,
        g2_irreps=g2_ir,
        pe=pe,
        pd=pd,
        prod_e=product_irreps(g1_ir, lc.e_labels),
        prod_d=product_irreps(g1_ir, lc.d_labels),
        z_mass=mass,
        value=value,
    )


@dataclass(frozen=True)
class OmegaChoice:
    """The selected representation with its penalty, margin, and entry indices."""

    index: int
    omega: UnitaryRep
    eta: int
    margin: float
    x: int = 0
    y: int = 0
    z: int = 0


def expected_character(ctx: DecoderContext, omega: UnitaryRep) -> complex:
    """E[chi_omega(z)] under the exact payoff distribution."""
    chi = omega.character()
    return sum(float(p) * complex(chi[g]) for g, p in ctx.z_mass.items())


def penalized_margin(ctx: DecoderContext, omega: UnitaryRep) -> float:
    """|E[chi_omega(z)]| - dim * delta - eta(omega, Im(phi))."""
    expectation = expected_character(ctx, omega)
    penalty = eta(omega, ctx.template.h2)
    return abs(expectation) - omega.dim * float(ctx.delta) - penalty


def select_omega(ctx: DecoderContext) -> OmegaChoice:
    """The non-trivial representation of largest penalized margin.

    Raises NoOmega when every margin is negative, which means the family
    value is below the promise threshold.
    """
    best: OmegaChoice | None = None
    for idx, omega in enumerate(ctx.g2_irreps.irreps):
        if idx == 0:
            continue
        margin = penalized_margin(ctx, omega)
        if margin < 0:
            continue
        if best is None or margin > best.margin + _TIE:
            best = OmegaChoice(idx, omega, eta(omega, ctx.template.h2), margin)
    if best is None:
        raise NoOmega("no non-trivial representation has non-negative margin")
    return best


def right_table(ctx: DecoderContext, omega: UnitaryRep, v: str) -> MatrixFn:
    """omega composed with the folded right-vertex table."""
    a_folded = fold(ctx.family.a_tables[v], ctx.pe, ctx.template.phi)
    return MatrixFn(ctx.pe, omega.matrices[a_folded])


def left_table(ctx: DecoderContext, omega: UnitaryRep, u: str) -> MatrixFn:
    """The sign-averaged composition for a left vertex; skew-symmetric."""
    w = omega.matrices
    b_table = np.asarray(ctx.family.b_tables[u], dtype=np.int64)
    inv_d = ctx.pd.inv_array()
    direct = w[b_table]
    reflected = w[b_table[inv_d]].conj().transpose(0, 2, 1)
    return MatrixFn(ctx.pd, (direct + reflected) / 2)


def build_fns(ctx: DecoderContext, omega: UnitaryRep, v: str, u: str):
    """The matrix tables the analysis works with, for one edge's endpoints."""
    return right_table(ctx, omega, v), left_table(ctx, omega, u)


def _edge_geometry(ctx: DecoderContext, pi: dict) -> np.ndarray:
    """Flat index of (a o pi)^-1 for every a in G1^E."""
    positions = ctx.pd.compose_positions(pi, ctx.lc.e_labels)
    out = np.empty(ctx.pe.n, dtype=np.int64)
    for a in range(ctx.pe.n):
        coords = ctx.pe.coords(a)
        out[a] = ctx.pd.inv(ctx.pd.index([coords[p] for p in positions]))
    return out


def _subgroup_average(omega: UnitaryRep, members) -> np.ndarray:
    return np.mean(omega.matrices[np.array(members)], axis=0)


def trivial_term_bound(ctx: DecoderContext, omega: UnitaryRep):
    """Measured trivial-coefficient term of the payoff expansion.

    Returns (measured, eta); the analysis guarantees measured <= eta. Also
    verifies that averaging omega over Im(phi) yields a Hermitian projection
    of trace eta.
    """
    penalty = eta(omega, ctx.template.h2)
    avg = _subgroup_average(omega, ctx.template.h2.members)
    if np.abs(avg - avg.conj().T).max() > 1e-9:
        raise InvalidParams("subgroup average of a unitary rep must be Hermitian")
    eigvals = np.linalg.eigvalsh(avg)
    if np.abs(eigvals * (1 - eigvals)).max() > 1e-9:
        raise InvalidParams("subgroup average must have eigenvalues in {0,1}")
    if abs(float(np.real(np.trace(avg))) - penalty) > 1e-9:
        raise InvalidParams("trace of the subgroup average must equal eta")

    nu_w = [float(w) for w in noise_weights(ctx.pd, ctx.eps)]
    total = 0.0 + 0.0j
    for u, v, pi in ctx.lc.edge_maps():
        a_fn, b_fn = build_fns(ctx, omega, v, u)
        m = convolve(b_fn, b_fn).values
        a_hat_1 = np.mean(a_fn.values, axis=0)
        ap_inv = _edge_geometry(ctx, pi)
        edge_sum = 0.0 + 0.0j
        for a in range(ctx.pe.n):
            base = ap_inv[a]
            for nu in range(ctx.pd.n):
                idx = ctx.pd.mul(int(base), nu)
                edge_sum += nu_w[nu] * np.trace(a_hat_1 @ m[idx])
        total += edge_sum / ctx.pe.n
    measured = abs(total / len(ctx.lc.edges))
    return measured, penalty


def high_degree_mass(ctx: DecoderContext, omega: UnitaryRep, kappa_value: int) -> float:
    """Contribution of representations of degree >= kappa to the expansion,
    after the noise attenuation is absorbed as (1-eps)^degree factors."""
    one_minus_eps = 1.0 - float(ctx.eps)
    total = 0.0 + 0.0j
    for u, v, pi in ctx.lc.edge_maps():
        a_fn, b_fn = build_fns(ctx, omega, v, u)
        m = convolve(b_fn, b_fn).values
        n_mat = m.shape[1]
        w_table = np.zeros((ctx.pd.n, n_mat, n_mat), dtype=complex)
        for rho in ctx.prod_d:
            mats = rho.matrices(ctx.pd)
            block = np.einsum("gxy,gij->ijxy", m, np.conj(mats)) / ctx.pd.n
            diag_trace = float(
                np.real(np.einsum("iixx->", block))
            )
            if diag_trace < -1e-9:
                raise InvalidParams(
                    f"diagonal coefficient trace {diag_trace} is negative"
                )
            if rho.degree >= kappa_value:
                w_table += (
                    rho.dim
                    * one_minus_eps**rho.degree
                    * np.einsum("ijxy,gij->gxy", block, mats)
                )
        a_hat_1 = np.mean(a_fn.values, axis=0)
        centered = a_fn.values - a_hat_1
        ap_inv = _edge_geometry(ctx, pi)
        edge_sum = np.einsum("gxy,gyx->", centered, w_table[ap_inv])
        total += edge_sum / ctx.pe.n
    return abs(total / len(ctx.lc.edges))


def influence_probs(ctx: DecoderContext, omega: UnitaryRep, which, kappa_value: int) -> dict:
    """Low-degree influence of each coordinate of a vertex table entry.

    ``which`` is ("v", name, x, y) for a right vertex (uses the folded table
    composed with omega) or ("u", name, y, z) for a left vertex (uses the
    sign-averaged table). Labels map to the truncated Fourier mass of the
    representations non-trivial at that coordinate; the total is at most 1.
    """
    side, name, r, c = which
    if side == "v":
        fn_values = right_table(ctx, omega, name).values
        power, rhos, labels = ctx.pe, ctx.prod_e, ctx.lc.e_labels
    elif side == "u":
        fn_values = left_table(ctx, omega, name).values
        power, rhos, labels = ctx.pd, ctx.prod_d, ctx.lc.d_labels
    else:
        raise InvalidParams("which must start with 'v' or 'u'")
    scalar = ScalarFn(power, fn_values[:, r, c])
    out = {l: 0.0 for l in labels}
    for rho in rhos:
        deg = rho.degree
        if deg == 0 or deg >= kappa_value:
            continue
        mats = rho.matrices(power)
        block = np.einsum("g,gij->ij", scalar.values, np.conj(mats)) / power.n
        mass = rho.dim * float(np.sum(np.abs(block) ** 2)) / deg
        if mass == 0.0:
            continue
        for pos, comp in enumerate(rho.comps):
            if comp != 0:
                out[labels[pos]] += mass
    return out


@dataclass(frozen=True)
class Strategy:
    """Sub-probability label distributions per vertex, plus the leftover rule."""

    v_probs: dict
    u_probs: dict
    kappa: int
    leftover: str

    def __post_init__(self):
        for probs in list(self.v_probs.values()) + list(self.u_probs.values()):
            total = sum(probs.values())
            if total > 1 + 1e-9 or any(p < -1e-12 for p in probs.values()):
                raise InvalidParams(f"not a sub-probability map: {probs}")


def _apply_leftover(probs: dict, rule: str) -> dict:
    if rule == "normalize":
        total = sum(probs.values())
        if total > 0:
            return {k: p / total for k, p in probs.items()}
    return dict(probs)


def expected_strategy_value(lc: LabelCoverInstance, strategy: Strategy) -> float:
    """E over edges of the probability that the sampled labels agree."""
    total = 0.0
    for u, v, pi in lc.edge_maps():
        pu, pv = strategy.u_probs[u], strategy.v_probs[v]
        total += sum(pu.get(d, 0.0) * pv.get(str(pi[d]), 0.0) for d in lc.d_labels)
    return total / len(lc.edges)


def decode(ctx: DecoderContext):
    """Search the entry indices maximizing the truncated-influence strategy.

    Returns (strategy, expected_value, omega_choice). The existence argument
    only promises a good triple of indices; searching all of them dominates
    it at cubic cost in the dimension.
    """
    choice = select_omega(ctx)
    omega = choice.omega
    k = kappa(ctx.delta, ctx.eps, d_size=len(ctx.lc.d_labels))
    dim = omega.dim
    v_cache: dict[tuple[int, int], dict] = {}
    u_cache: dict[tuple[int, int], dict] = {}

    def v_maps(x, y):
        if (x, y) not in v_cache:
            v_cache[(x, y)] = {
                v: _apply_leftover(
                    influence_probs(ctx, omega, ("v", v, x, y), k), ctx.leftover
                )
                for v in ctx.lc.v_names
            }
        return v_cache[(x, y)]

    def u_maps(y, z):
        if (y, z) not in u_cache:
            u_cache[(y, z)] = {
                u: _apply_leftover(
                    influence_probs(ctx, omega, ("u", u, y, z), k), ctx.leftover
                )
                for u in ctx.lc.u_names
            }
        return u_cache[(y, z)]

    best = None
    for x in range(dim):
        for y in range(dim):
            for z in range(dim):
                strategy = Strategy(v_maps(x, y), u_maps(y, z), k, ctx.leftover)
                value = expected_strategy_value(ctx.lc, strategy)
                if best is None or value > best[1] + _TIE:
                    best = (strategy, value, (x, y, z))
    strategy, value, (x, y, z) = best
    return strategy, value, replace(choice, x=x, y=y, z=z)


def derandomize_strategy(lc: LabelCoverInstance, strategy: Strategy):
    """Greedy conditional-expectation rounding of the randomized strategy.

    Fixes right vertices then left vertices, each to the label that keeps the
    expected agreement maximal (ties to the first label); returns the
    labeling and its exact Label Cover value.
    """
    v_dist = {v: dict(strategy.v_probs[v]) for v in lc.v_names}
    u_dist = {u: dict(strategy.u_probs[u]) for u in lc.u_names}

    def expectation() -> float:
        total = 0.0
        for u, v, pi in lc.edge_maps():
            pu, pv = u_dist[u], v_dist[v]
            total += sum(
                pu.get(d, 0.0) * pv.get(str(pi[d]), 0.0) for d in lc.d_labels
            )
        return total / len(lc.edges)

    h_e: dict[str, str] = {}
    for v in lc.v_names:
        best_label, best_val = None, None
        for e in lc.e_labels:
            v_dist[v] = {e: 1.0}
            val = expectation()
            if best_val is None or val > best_val + _TIE:
                best_label, best_val = e, val
        v_dist[v] = {best_label: 1.0}
        h_e[v] = best_label
    h_d: dict[str, str] = {}
    for u in lc.u_names:
        best_label, best_val = None, None
        for d in lc.d_labels:
            u_dist[u] = {d: 1.0}
            val = expectation()
            if best_val is None or val > best_val + _TIE:
                best_label, best_val = d, val
        u_dist[u] = {best_label: 1.0}
        h_d[u] = best_label
    return h_d, h_e, lc_value(lc, h_d, h_e)


def simulate_strategy(
    lc: LabelCoverInstance, strategy: Strategy, samples: int, seed: int = 0
):
    """Monte-Carlo estimate of the expected agreement; returns (mean, sigma)
    where sigma is the standard error of the mean."""
    rng = np.random.default_rng(seed)

    def draw(probs, labels):
        p = np.array([max(probs.get(l, 0.0), 0.0) for l in labels])
        give_up = max(0.0, 1.0 - p.sum())
        full = np.append(p, give_up)
        full /= full.sum()
        return rng.choice(len(labels) + 1, size=samples, p=full)

    v_draws = {v: draw(strategy.v_probs[v], lc.e_labels) for v in lc.v_names}
    u_draws = {u: draw(strategy.u_probs[u], lc.d_labels) for u in lc.u_names}
    epos = {l: k for k, l in enumerate(lc.e_labels)}
    acc = np.zeros(samples)
    for u, v, pi in lc.edge_maps():
        du, ev = u_draws[u], v_draws[v]
        ok = np.zeros(samples, dtype=bool)
        for k, d in enumerate(lc.d_labels):
            ok |= (du == k) & (ev == epos[str(pi[d])])
        acc += ok
    values = acc / len(lc.edges)
    mean = float(values.mean())
    sigma = float(values.std(ddof=1) / math.sqrt(samples))
    return mean, sigma
