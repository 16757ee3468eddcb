"""Choosing which variable pairs to substitute.

Collapsing a pair of variables that share a clause removes that clause's
cubic term, at the price of a fresh variable and three penalty constraints.
Which pairs to collapse is a covering problem: every clause needs one of its
three pairs substituted, and the choice drives the maximum interaction
degree, hence the depth bound.

Three solvers live here.  `solve_ip_exact` builds an integer program whose
objective is the max degree plus a tie-break on the number of substitutions
(scaled by 1/(10 |C|) so it can never outweigh a degree step) and hands it
to HiGHS through scipy; results are re-scored in exact rational arithmetic,
so the reported optimum never inherits float error.  `greedy_cover` is the
cheap randomized heuristic: repeatedly substitute a pair covering the most
uncovered clauses.  `enumerate_exact` brute-forces all 3^|C| covers and
exists to cross-check the integer program on small inputs.

The degree model inside the program counts one interaction per clause
occurrence, matching the closed-form degree table rather than the deduped
interaction graph; the two agree whenever no two clauses share all three
variables.
"""

from __future__ import annotations

import math
import random
import statistics
import time
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from typing import Iterable, Sequence

import numpy as np
from scipy import sparse
from scipy.optimize import Bounds, LinearConstraint, milp

from .cnf import Instance
from .gvs import Cover, gvs_max_degree, make_cover
from .linear import linear_max_degree
from .product import (
    Covering,
    candidate_pairs,
    coverings,
    covering_graph,
    iter_pairs_sorted,
    quadratic_pairs,
)
from .reports import ComparisonRow

DEFAULT_BUDGET_SECS = 300.0

# float dual bounds get this much slack before the integer rounding, so a
# last-digit wobble cannot inflate the claimed lower bound
DUAL_BOUND_FUZZ = Fraction(1, 10**9)


class ModelError(RuntimeError):
    """The solver returned something the model rules out (infeasible etc.)."""


def _pair_tag(pair: Iterable[int]) -> str:
    a, b = sorted(pair)
    return f"{a}_{b}"


@dataclass(frozen=True)
class IpModel:
    """Pair-selection integer program, held in exact arithmetic.

    Variables are ordered: obj (the max degree, a nonnegative integer),
    then one binary y per candidate pair, then one binary z per covering
    (clause-major).  Rows are (name, coeffs, sense, rhs) with coeffs keyed
    by variable index and senses "<=" or "=".
    """

    instance: Instance
    names: tuple[str, ...]
    objective: tuple[Fraction, ...]
    rows: tuple[tuple[str, tuple[tuple[int, Fraction], ...], str, Fraction], ...]
    pairs: tuple[tuple[int, int], ...]
    covers: tuple[Covering, ...]

    @property
    def num_variables(self) -> int:
        return len(self.names)

    def row(self, name: str):
        for row in self.rows:
            if row[0] == name:
                return row
        raise KeyError(name)


def build_ip(instance: Instance) -> IpModel:
    """Assemble the exact degree-minimization program for an instance.

    Per problem variable: the degree it would reach under the selection must
    stay at or below obj.  Per pair: likewise for the pair's substitution
    variable, 5 from its penalty block plus one per clause it absorbs.  Per
    clause: exactly one of its three pairs is chosen.  Choosing a covering
    requires building its pair's gadget (z <= y).
    """
    m = instance.num_clauses
    pairs = list(iter_pairs_sorted(candidate_pairs(instance)))
    quad = {tuple(sorted(p)) for p in quadratic_pairs(instance)}
    covs = coverings(instance)

    names = ["obj"]
    names += [f"y_{_pair_tag(p)}" for p in pairs]
    names += [f"z_c{c.clause}_{_pair_tag(c.pair)}" for c in covs]

    y_index = {p: 1 + i for i, p in enumerate(pairs)}
    z_base = 1 + len(pairs)

    tiebreak = Fraction(1, 10 * m)
    objective = [Fraction(1)]
    objective += [tiebreak] * len(pairs)
    objective += [Fraction(0)] * len(covs)

    rows = []
    for a in instance.used_variables():
        coeffs: dict[int, Fraction] = {0: Fraction(-1)}
        for p in pairs:
            if a in p:
                coeffs[y_index[p]] = Fraction(4 - (p in quad))
        num_quad = sum(1 for p in quad if a in p)
        for k, cov in enumerate(covs):
            if cov.free == a:
                coeffs[z_base + k] = Fraction(1)
        rows.append((f"deg_v_{a}", tuple(sorted(coeffs.items())), "<=",
                     Fraction(-num_quad)))

    for p in pairs:
        coeffs = {0: Fraction(-1)}
        for k, cov in enumerate(covs):
            if tuple(sorted(cov.pair)) == p:
                coeffs[z_base + k] = Fraction(1)
        rows.append((f"deg_s_{_pair_tag(p)}", tuple(sorted(coeffs.items())),
                     "<=", Fraction(-5)))

    for c in range(m):
        coeffs = {
            z_base + k: Fraction(1)
            for k, cov in enumerate(covs)
            if cov.clause == c
        }
        rows.append((f"cover_c{c}", tuple(sorted(coeffs.items())), "=",
                     Fraction(1)))

    for k, cov in enumerate(covs):
        coeffs = {z_base + k: Fraction(1),
                  y_index[tuple(sorted(cov.pair))]: Fraction(-1)}
        rows.append((f"link_{_pair_tag(cov.pair)}_c{cov.clause}",
                     tuple(sorted(coeffs.items())), "<=", Fraction(0)))

    return IpModel(
        instance=instance,
        names=tuple(names),
        objective=tuple(objective),
        rows=tuple(rows),
        pairs=tuple(pairs),
        covers=tuple(covs),
    )


@dataclass(frozen=True)
class IpSolution:
    """Outcome of one exact-solver run.

    status is "optimal" when optimality was proven within budget,
    "feasible_bound" when time ran out with an incumbent in hand (then
    lower_bound brackets the true optimum from below), and "timed_out" when
    not even an incumbent was found.  Degree, cover and objective are exact
    values recomputed from the extracted cover, never the solver's floats.
    """

    status: str
    cover: Cover | None
    max_degree: int | None
    num_substitutions: int | None
    objective: Fraction | None
    lower_bound: int | None

    @property
    def proved_optimal(self) -> bool:
        return self.status == "optimal"


def _degree_lower_bound(dual_bound: float, num_pairs: int, m: int) -> int | None:
    if dual_bound is None or not math.isfinite(dual_bound):
        return None
    # obj >= dual bound minus the largest possible tie-break mass
    slack = Fraction(num_pairs, 10 * m)
    bound = Fraction(dual_bound).limit_denominator(10**12) - slack - DUAL_BOUND_FUZZ
    return max(0, math.ceil(bound))


def _extract_cover(model: IpModel, x: np.ndarray) -> Cover:
    m = model.instance.num_clauses
    z_base = 1 + len(model.pairs)
    choice: list[tuple[int, int] | None] = [None] * m
    best = [-1.0] * m
    for k, cov in enumerate(model.covers):
        val = float(x[z_base + k])
        if val > best[cov.clause]:
            best[cov.clause] = val
            choice[cov.clause] = tuple(sorted(cov.pair))
    if any(v < 0.5 for v in best):
        raise ModelError("incumbent leaves a clause uncovered")
    return make_cover(model.instance, choice)


def score_cover(instance: Instance, cover: Cover) -> Fraction:
    """Exact objective value of a cover: max degree plus the tie-break mass."""
    return Fraction(gvs_max_degree(instance, cover)) + Fraction(
        cover.num_substitutions, 10 * instance.num_clauses
    )


def solve_ip_exact(
    instance: Instance, budget_secs: float = DEFAULT_BUDGET_SECS
) -> IpSolution:
    """Minimize the substituted max degree, exactly, within a time budget."""
    model = build_ip(instance)
    n = model.num_variables

    c = np.array([float(v) for v in model.objective])
    integrality = np.ones(n)
    lb = np.zeros(n)
    ub = np.ones(n)
    ub[0] = np.inf

    senses = {"<=": [], "=": []}
    for name, coeffs, sense, rhs in model.rows:
        senses[sense].append((coeffs, rhs))
    constraints = []
    for sense, rows in senses.items():
        if not rows:
            continue
        data, ri, ci = [], [], []
        for i, (coeffs, _) in enumerate(rows):
            for j, v in coeffs:
                ri.append(i)
                ci.append(j)
                data.append(float(v))
        mat = sparse.csr_matrix((data, (ri, ci)), shape=(len(rows), n))
        rhs = np.array([float(r) for _, r in rows])
        if sense == "<=":
            constraints.append(LinearConstraint(mat, -np.inf, rhs))
        else:
            constraints.append(LinearConstraint(mat, rhs, rhs))

    res = milp(
        c,
        constraints=constraints,
        integrality=integrality,
        bounds=Bounds(lb, ub),
        options={"time_limit": float(budget_secs), "mip_rel_gap": 0.0},
    )

    if res.status == 0:
        status = "optimal"
    elif res.status == 1 and res.x is not None:
        status = "feasible_bound"
    elif res.status == 1:
        status = "timed_out"
    else:
        raise ModelError(f"solver failed on a feasible model: {res.message}")

    lower = _degree_lower_bound(
        getattr(res, "mip_dual_bound", None),
        len(model.pairs),
        instance.num_clauses,
    )
    if res.x is None:
        return IpSolution(status, None, None, None, None, lower)

    cover = _extract_cover(model, res.x)
    degree = gvs_max_degree(instance, cover)
    if status == "optimal":
        lower = degree
    return IpSolution(
        status=status,
        cover=cover,
        max_degree=degree,
        num_substitutions=cover.num_substitutions,
        objective=score_cover(instance, cover),
        lower_bound=lower,
    )


def enumerate_exact(instance: Instance) -> IpSolution:
    """Try every per-clause pair choice; only sensible for small |C|.

    Scores covers with its own inline degree count instead of the shared
    degree-table code, so agreement with the integer program is a genuine
    cross-check.  Ties resolve to the first minimizer in lexicographic
    choice order, making the returned cover deterministic.
    """
    m = instance.num_clauses
    quad = {tuple(sorted(p)) for p in quadratic_pairs(instance)}
    p_count = Counter(v for p in quad for v in p)
    variables = instance.used_variables()
    clause_options = []
    for c in range(m):
        vs = sorted(instance.clause_vars(c))
        clause_options.append(
            [(pair, next(v for v in vs if v not in pair))
             for pair in combinations(vs, 2)]
        )

    best: Fraction | None = None
    best_choice = None
    for choice in product(*clause_options):
        used: dict[tuple[int, int], int] = {}
        free_counts: Counter = Counter()
        for pair, free in choice:
            used[pair] = used.get(pair, 0) + 1
            free_counts[free] += 1
        delta = 0
        for pair, covered in used.items():
            if 5 + covered > delta:
                delta = 5 + covered
        for a in variables:
            d = p_count[a] + free_counts[a]
            for p in used:
                if a in p:
                    d += 3 if p in quad else 4
            if d > delta:
                delta = d
        value = Fraction(delta) + Fraction(len(used), 10 * m)
        if best is None or value < best:
            best = value
            best_choice = choice

    assert best_choice is not None
    cover = make_cover(instance, [pair for pair, _ in best_choice])
    degree = gvs_max_degree(instance, cover)
    value = score_cover(instance, cover)
    if value != best:
        raise ModelError("inline degree count disagrees with the degree table")
    return IpSolution(
        status="optimal",
        cover=cover,
        max_degree=degree,
        num_substitutions=cover.num_substitutions,
        objective=value,
        lower_bound=degree,
    )


def _coef_text(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return repr(float(value))


def export_lp(model: IpModel) -> str:
    """Render the program in CPLEX LP format (for external solvers)."""
    names = model.names

    def terms(coeffs: Sequence[tuple[int, Fraction]]) -> str:
        # positive terms first so rows read "degree stuff - obj <= rhs"
        ordered = [t for t in coeffs if t[1] > 0] + [t for t in coeffs if t[1] < 0]
        parts = []
        for idx, (j, v) in enumerate(ordered):
            mag = abs(v)
            body = names[j] if mag == 1 else f"{_coef_text(mag)} {names[j]}"
            if idx == 0:
                parts.append(body if v > 0 else f"- {body}")
            else:
                parts.append(f"+ {body}" if v > 0 else f"- {body}")
        return " ".join(parts)

    obj_coeffs = [(j, v) for j, v in enumerate(model.objective) if v != 0]
    lines = ["Minimize", f" total: {terms(obj_coeffs)}", "Subject To"]
    for name, coeffs, sense, rhs in model.rows:
        op = "<=" if sense == "<=" else "="
        lines.append(f" {name}: {terms(coeffs)} {op} {_coef_text(rhs)}")
    lines.append("Bounds")
    lines.append(" obj >= 0")
    lines.append("Binary")
    for name in names[1:]:
        lines.append(f" {name}")
    lines.append("General")
    lines.append(" obj")
    lines.append("End")
    return "\n".join(lines) + "\n"


def greedy_cover(instance: Instance, seed: int | random.Random = 0) -> Cover:
    """Pick the pair covering the most uncovered clauses, repeat, tie-break
    uniformly at random."""
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    reach = {
        tuple(sorted(p)): frozenset(cs)
        for p, cs in covering_graph(instance).items()
    }
    uncovered = set(range(instance.num_clauses))
    available = set(reach)
    assignment: list[tuple[int, int] | None] = [None] * instance.num_clauses
    while uncovered:
        gains = {p: len(reach[p] & uncovered) for p in available}
        top = max(gains.values())
        pick = rng.choice(sorted(p for p, g in gains.items() if g == top))
        for c in reach[pick] & uncovered:
            assignment[c] = pick
        uncovered -= reach[pick]
        available.remove(pick)
    return make_cover(instance, assignment)


@dataclass(frozen=True)
class GreedySummary:
    """Median depth and substitution count over a batch of seeded runs."""

    depths: tuple[int, ...]
    substitutions: tuple[int, ...]

    @property
    def median_depth(self) -> int:
        return statistics.median_low(self.depths)

    @property
    def median_substitutions(self) -> int:
        return statistics.median_low(self.substitutions)


def greedy_batch(
    instance: Instance, seeds: Iterable[int] = range(20)
) -> GreedySummary:
    depths, subs = [], []
    for seed in seeds:
        cover = greedy_cover(instance, seed)
        depths.append(gvs_max_degree(instance, cover) + 2)
        subs.append(cover.num_substitutions)
    return GreedySummary(tuple(depths), tuple(subs))


def compare_instance(
    name: str,
    instance: Instance,
    budget_secs: float = DEFAULT_BUDGET_SECS,
    seeds: Iterable[int] = range(20),
    timings: bool = False,
) -> ComparisonRow:
    """One table row: dualized-linear depth vs exact vs greedy substitution."""
    started = time.perf_counter()
    lin_depth = linear_max_degree(instance) + 2
    ip = solve_ip_exact(instance, budget_secs)
    seeds = tuple(seeds)
    summary = greedy_batch(instance, seeds)
    elapsed = time.perf_counter() - started
    return ComparisonRow(
        name=name,
        num_vars=instance.num_vars,
        num_clauses=instance.num_clauses,
        linear_depth=lin_depth,
        ip_depth=None if ip.max_degree is None else ip.max_degree + 2,
        ip_substitutions=ip.num_substitutions,
        ip_status=ip.status,
        greedy_depth=summary.median_depth,
        greedy_substitutions=summary.median_substitutions,
        num_seeds=len(seeds),
        wall_time=elapsed if timings else None,
    )
