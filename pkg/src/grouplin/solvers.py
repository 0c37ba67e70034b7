"""Baseline algorithms for weighted 3-variable equation systems over a
template: exhaustive optimum, the exact expectation of the random subgroup
assignment, its derandomization, and the accept/reject routine that handles
unsatisfiable cube equations."""

from __future__ import annotations

import itertools
from fractions import Fraction

from .errors import CapExceeded, InvalidParams, enum_cap
from .groups import Template, is_unsatisfiable_equation
from .reduction import LinEquation, LinSystem, evaluate


def _side_group(template: Template, side: int):
    if side == 1:
        return template.g1, template.h1
    if side == 2:
        return template.g2, template.h2
    raise InvalidParams("side must be 1 or 2")


def _rhs(template: Template, eq: LinEquation, side: int) -> int:
    return eq.rhs if side == 1 else template.phi.apply(eq.rhs)


def brute_force_opt(system: LinSystem, side: int, cap: int | None = None):
    """Exact optimum over all assignments into the side's full group.

    Returns (value, assignment); among optima the lexicographically first
    assignment (variables in system order, values ascending) wins.
    """
    group, _ = _side_group(system.template, side)
    n_assign = len(group) ** len(system.variables)
    limit = enum_cap(cap)
    if n_assign > limit:
        raise CapExceeded(f"{n_assign} assignments exceed the cap {limit}")
    best_val = None
    best = None
    for combo in itertools.product(range(len(group)), repeat=len(system.variables)):
        assignment = dict(zip(system.variables, combo))
        val = evaluate(system, assignment, side)
        if best_val is None or val > best_val:
            best_val, best = val, assignment
    return best_val, best


def _equation_probability(
    system: LinSystem,
    eq: LinEquation,
    side: int,
    fixed: dict[str, int],
    domain: tuple[int, ...],
) -> Fraction:
    """P(eq satisfied) when unfixed variables are uniform on ``domain``."""
    group, _ = _side_group(system.template, side)
    rhs = _rhs(system.template, eq, side)
    free = sorted({v for v, _ in eq.terms if v not in fixed})
    hits = 0
    for combo in itertools.product(domain, repeat=len(free)):
        local = dict(zip(free, combo))
        acc = group.identity
        for var, sign in eq.terms:
            val = fixed.get(var, local.get(var))
            acc = group.mul(acc, group.pow_sign(val, sign))
        if acc == rhs:
            hits += 1
    return Fraction(hits, len(domain) ** len(free)) if free else Fraction(hits)


def random_expectation(system: LinSystem, template: Template, side: int) -> Fraction:
    """Exact expected weight satisfied by independent uniform values from the
    constants subgroup (Dom(phi) on side 1, Im(phi) on side 2)."""
    _, h = _side_group(template, side)
    return sum(
        (
            eq.weight * _equation_probability(system, eq, side, {}, h.members)
            for eq in system.equations
        ),
        Fraction(0),
    )


def derandomize(system: LinSystem, template: Template, side: int) -> dict[str, int]:
    """Fix variables one at a time, keeping the conditional expectation of the
    satisfied weight maximal; ties go to the smallest element index."""
    _, h = _side_group(template, side)
    by_var: dict[str, list[LinEquation]] = {x: [] for x in system.variables}
    for eq in system.equations:
        for v, _ in eq.terms:
            by_var[v].append(eq)
    fixed: dict[str, int] = {}
    for x in system.variables:
        eqs = [eq for eq in dict.fromkeys(by_var[x])]
        best_val = None
        best_elem = None
        for elem in h.members:
            fixed[x] = elem
            score = sum(
                (
                    eq.weight * _equation_probability(system, eq, side, fixed, h.members)
                    for eq in eqs
                ),
                Fraction(0),
            )
            if best_val is None or score > best_val:
                best_val, best_elem = score, elem
        fixed[x] = best_elem
    return fixed


def non_cubic_solve(system: LinSystem, template: Template, c: Fraction) -> dict:
    """Reject when unsatisfiable equations outweigh 1-c; otherwise return the
    derandomized subgroup assignment on side 2 with its exact value."""
    c = Fraction(c)
    if not 0 < c <= 1:
        raise InvalidParams(f"c must be in (0,1], got {c}")
    unsat = sum(
        (eq.weight for eq in system.equations if is_unsatisfiable_equation(eq, template)),
        Fraction(0),
    )
    if unsat > 1 - c:
        return {"status": "reject", "unsat_weight": unsat}
    assignment = derandomize(system, template, 2)
    value = evaluate(system, assignment, 2)
    return {
        "status": "accept",
        "unsat_weight": unsat,
        "assignment": assignment,
        "value": value,
    }
