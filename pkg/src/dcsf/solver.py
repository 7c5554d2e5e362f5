"""Alternating-optimization solvers for the three-objective deployment problem.

The main pipeline alternates four stages per outer iteration: greedy cluster
merging on f2 (GCA), an advisor-guided NSGA-II pass over positions and weights,
an exhaustive per-cluster sweep of the symbol count (GSO), and an elitist
sort/truncate assessment. Two baselines share the machinery: the same loop
with a static advisor, and a flat NSGA-II over every variable at once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from . import advisor as advisor_mod
from . import metrics, problem
from .problem import ClusterAssignment, Individual, canonicalize_labels


class SolverError(RuntimeError):
    pass


@dataclass(frozen=True)
class SolverConfig:
    population_size: int = 30
    t_ao: int = 50            # outer alternating-optimization iterations
    t_local: int = 10         # NSGA-II generations per outer iteration
    p_c: float = 0.8          # initial crossover probability
    p_m: float = 0.4          # initial mutation probability
    sbx_eta: float = 15.0
    poly_eta: float = 20.0
    advisor_mode: str = "static"  # "llm" | "fallback" | "static"
    gca_baseline: str = "stale"   # "stale" | "refreshed"
    seed: int = 0

    def __post_init__(self):
        if self.population_size < 4 or self.population_size % 2:
            raise ValueError("population size must be even and >= 4")
        if not (0 < self.p_c <= 1 and 0 < self.p_m <= 1):
            raise ValueError("initial probabilities must be in (0, 1]")
        if self.t_ao < 1 or self.t_local < 1:
            raise ValueError("iteration counts must be >= 1")
        if self.advisor_mode not in ("llm", "fallback", "static"):
            raise ValueError(f"unknown advisor mode {self.advisor_mode!r}")
        if self.gca_baseline not in ("stale", "refreshed"):
            raise ValueError(f"unknown gca baseline {self.gca_baseline!r}")


@dataclass
class RunResult:
    mode: str
    population: list[Individual]
    history: list[dict]
    final_p_c: float
    final_p_m: float


# ---------------------------------------------------------------------------
# Initialization

def initialize_population(scenario, params, config: SolverConfig, rng=None) -> list[Individual]:
    """Mixed initialization: random labels, uniform positions/weights, random k."""
    rng = rng if rng is not None else np.random.default_rng(config.seed)
    n_v = scenario.n_uavs
    lower, upper = scenario.bounds.lower, scenario.bounds.upper
    population = []
    for _ in range(config.population_size):
        raw_labels = rng.integers(1, n_v + 1, size=n_v)
        # placeholder k sized to the raw max label, then relabeled with the clusters
        k_raw = rng.integers(params.k_min, params.k_max + 1, size=int(raw_labels.max()))
        assignment, k = canonicalize_labels(raw_labels, k_raw)
        q = lower + rng.random((n_v, 3)) * (upper - lower)
        w = rng.uniform(params.w_min, params.w_max, size=n_v)
        population.append(Individual(assignment, q, w, k))
    return population


def evaluate_population(population, scenario, params) -> None:
    for ind in population:
        if ind.objectives is None:
            try:
                problem.evaluate(ind, scenario, params)
            except ValueError as exc:
                raise SolverError(f"non-finite objective during evaluation: {exc}") from exc


# ---------------------------------------------------------------------------
# Stage 1: greedy cluster merging

def merge_clusters(assignment: ClusterAssignment, k: np.ndarray, survivor: int, absorbed: int):
    """Merge cluster `absorbed` into `survivor` (1-based labels), renumbering
    the remaining labels consecutively.

    The merged cluster keeps the lower-indexed cluster's k; the choice is
    transient because the symbol sweep re-optimizes k right afterwards.
    """
    if survivor == absorbed:
        raise ValueError("cannot merge a cluster with itself")
    new_labels = []
    for label in assignment.labels:
        if label == absorbed:
            label = survivor
        if label > absorbed:
            label -= 1
        new_labels.append(label)
    k = np.asarray(k)
    new_k = np.delete(k, absorbed - 1)
    if survivor > absorbed:
        new_k[survivor - 2] = k[absorbed - 1]
    return ClusterAssignment(tuple(new_labels)), new_k


def _f2_of(assignment, q, w, k, scenario, params) -> float:
    temp = Individual(assignment, q, w, k)
    rates, _ = problem.cluster_semantic_terms(temp, scenario, params)
    return float(rates.sum())


def enumerate_merge_gains(ind: Individual, scenario, params, baseline_f2: float):
    """All ordered-pair merges with their f2 gain versus the baseline.

    Yields (survivor, absorbed, gain, merged assignment, merged k).
    """
    n = ind.assignment.n_clusters
    for b in range(1, n + 1):
        for b2 in range(1, n + 1):
            if b == b2:
                continue
            assignment, k = merge_clusters(ind.assignment, ind.k, b, b2)
            f2 = _f2_of(assignment, ind.q, ind.w, k, scenario, params)
            yield b, b2, f2 - baseline_f2, assignment, k, f2


def gca_step(population, scenario, params, baseline_mode: str = "stale") -> None:
    """Greedy best-gain cluster merging on f2, per individual, in place.

    The merge gain is measured against the individual's f2 from the previous
    iteration; with `baseline_mode="refreshed"` the baseline tracks each
    applied merge instead.
    """
    evaluate_population(population, scenario, params)
    for ind in population:
        baseline = ind.objectives.f2
        changed = False
        while ind.assignment.n_clusters > 1:
            best_gain = -math.inf
            best = None
            for _, _, gain, assignment, k, f2 in enumerate_merge_gains(ind, scenario, params, baseline):
                if gain > best_gain:
                    best_gain = gain
                    best = (assignment, k, f2)
            if best_gain > 0:
                ind.assignment, ind.k = best[0], best[1]
                if baseline_mode == "refreshed":
                    baseline = best[2]
                changed = True
            else:
                break
        if changed:
            problem.evaluate(ind, scenario, params)


# ---------------------------------------------------------------------------
# Stage 2: NSGA-II over positions and weights

def nondominated_sort(pool) -> list[list[int]]:
    """Fast non-dominated sort under constrained dominance; returns index fronts."""
    n = len(pool)
    dominated_by: list[list[int]] = [[] for _ in range(n)]
    domination_count = [0] * n
    for i in range(n):
        for j in range(i + 1, n):
            if problem.dominates(pool[i], pool[j]):
                dominated_by[i].append(j)
                domination_count[j] += 1
            elif problem.dominates(pool[j], pool[i]):
                dominated_by[j].append(i)
                domination_count[i] += 1
    fronts = [[i for i in range(n) if domination_count[i] == 0]]
    while True:
        next_front = []
        for i in fronts[-1]:
            for j in dominated_by[i]:
                domination_count[j] -= 1
                if domination_count[j] == 0:
                    next_front.append(j)
        if not next_front:
            break
        fronts.append(next_front)
    return fronts


def crowding_distance(front) -> np.ndarray:
    """Crowding distances for one front of evaluated individuals.

    Boundary members per objective get +inf; interior members accumulate
    normalized neighbor gaps.
    """
    n = len(front)
    if n <= 2:
        return np.full(n, np.inf)
    objs = np.array([ind.objectives.as_tuple() for ind in front])
    distance = np.zeros(n)
    for m in range(objs.shape[1]):
        order = np.argsort(objs[:, m], kind="stable")
        lo, hi = objs[order[0], m], objs[order[-1], m]
        distance[order[0]] = distance[order[-1]] = np.inf
        if hi > lo:
            for pos in range(1, n - 1):
                i = order[pos]
                distance[i] += (objs[order[pos + 1], m] - objs[order[pos - 1], m]) / (hi - lo)
    return distance


def _rank_and_crowd(pool):
    fronts = nondominated_sort(pool)
    rank = np.empty(len(pool), dtype=int)
    crowd = np.empty(len(pool))
    for r, front in enumerate(fronts):
        rank[front] = r
        crowd[front] = crowding_distance([pool[i] for i in front])
    return fronts, rank, crowd


def select_best(pool, m: int):
    """Elitist selection of m individuals by (front rank, crowding)."""
    fronts, _, crowd = _rank_and_crowd(pool)
    chosen: list[int] = []
    for front in fronts:
        if len(chosen) + len(front) <= m:
            chosen.extend(front)
        else:
            remaining = m - len(chosen)
            order = sorted(front, key=lambda i: (-crowd[i], i))
            chosen.extend(order[:remaining])
            break
    return [pool[i] for i in chosen]


def _tournament(pool, rank, crowd, rng) -> int:
    i, j = rng.integers(0, len(pool), size=2)
    if rank[i] != rank[j]:
        return i if rank[i] < rank[j] else j
    if crowd[i] != crowd[j]:
        return i if crowd[i] > crowd[j] else j
    return min(i, j)


def _gene_bounds(scenario, params):
    lower = np.concatenate([np.tile(scenario.bounds.lower, scenario.n_uavs),
                            np.full(scenario.n_uavs, params.w_min)])
    upper = np.concatenate([np.tile(scenario.bounds.upper, scenario.n_uavs),
                            np.full(scenario.n_uavs, params.w_max)])
    return lower, upper


def _genes_of(ind: Individual) -> np.ndarray:
    return np.concatenate([ind.q.ravel(), ind.w])


def _with_genes(ind: Individual, genes: np.ndarray) -> Individual:
    n_v = len(ind.w)
    child = Individual(ind.assignment, genes[: 3 * n_v].reshape(n_v, 3).copy(),
                       genes[3 * n_v:].copy(), ind.k.copy())
    return child


def sbx_crossover(g1, g2, lower, upper, eta, rng):
    c1, c2 = g1.copy(), g2.copy()
    for i in range(len(g1)):
        if rng.random() <= 0.5 and abs(g1[i] - g2[i]) > 1e-14:
            u = rng.random()
            if u <= 0.5:
                beta = (2.0 * u) ** (1.0 / (eta + 1.0))
            else:
                beta = (1.0 / (2.0 * (1.0 - u))) ** (1.0 / (eta + 1.0))
            c1[i] = 0.5 * ((1 + beta) * g1[i] + (1 - beta) * g2[i])
            c2[i] = 0.5 * ((1 - beta) * g1[i] + (1 + beta) * g2[i])
    return np.clip(c1, lower, upper), np.clip(c2, lower, upper)


def polynomial_mutation(genes, lower, upper, eta, rng):
    out = genes.copy()
    n = len(genes)
    for i in range(n):
        if rng.random() < 1.0 / n:
            u = rng.random()
            if u < 0.5:
                delta = (2.0 * u) ** (1.0 / (eta + 1.0)) - 1.0
            else:
                delta = 1.0 - (2.0 * (1.0 - u)) ** (1.0 / (eta + 1.0))
            out[i] = genes[i] + delta * (upper[i] - lower[i])
    return np.clip(out, lower, upper)


def nsga2_generation(population, scenario, params, config: SolverConfig,
                     p_c: float, p_m: float, rng) -> list[Individual]:
    """One generation over (Q, w): SBX offspring, polynomial mutants, elitist
    selection of the best M from the merged pool. c and k are untouched."""
    evaluate_population(population, scenario, params)
    m = len(population)
    lower, upper = _gene_bounds(scenario, params)
    _, rank, crowd = _rank_and_crowd(population)

    offspring: list[Individual] = []
    n_cross = int(round(p_c * m))
    for _ in range(n_cross // 2):
        p1 = population[_tournament(population, rank, crowd, rng)]
        p2 = population[_tournament(population, rank, crowd, rng)]
        g1, g2 = sbx_crossover(_genes_of(p1), _genes_of(p2), lower, upper, config.sbx_eta, rng)
        offspring.append(_with_genes(p1, g1))
        offspring.append(_with_genes(p2, g2))

    n_mut = int(round(p_m * m))
    for _ in range(n_mut):
        parent = population[_tournament(population, rank, crowd, rng)]
        genes = polynomial_mutation(_genes_of(parent), lower, upper, config.poly_eta, rng)
        offspring.append(_with_genes(parent, genes))

    pool = population + offspring
    evaluate_population(pool, scenario, params)
    return select_best(pool, m)


# ---------------------------------------------------------------------------
# Stage 3: greedy symbol optimization

def gso_step(population, scenario, params) -> None:
    """Per cluster, set k to the exhaustive argmax of f2 (ties toward smaller k).

    Candidates violating the similarity threshold are skipped; if no candidate
    reaches it, the max-similarity value is taken and the violation stands.
    Under the literal C7 mode, individuals with f1 <= f2 are left untouched.
    """
    from . import beamforming, semantic

    evaluate_population(population, scenario, params)
    for ind in population:
        if params.c7_mode == "literal-compare" and ind.objectives.f1 <= ind.objectives.f2:
            continue
        clusters = ind.assignment.clusters()
        snrs = [
            beamforming.cluster_snr(members, ind.q, ind.w, scenario.uav_tx,
                                    scenario.bs_pos.as_array(), params)
            for members in clusters
        ]
        rates, xis = problem.cluster_semantic_terms(ind, scenario, params)
        for i in range(len(clusters)):
            best_f2 = -math.inf
            best_xi = -math.inf
            best_k = None
            best_feasible = False
            for k in range(params.k_min, params.k_max + 1):
                if snrs[i] > 0:
                    xi = semantic.semantic_similarity(params.similarity, k, snrs[i])
                    sr = params.bandwidth * params.info_per_sentence / (k * params.words_per_sentence) * xi
                else:
                    xi, sr = 0.0, 0.0
                trial = rates.copy()
                trial[i] = sr
                f2 = float(trial.sum())
                feasible = xi >= params.xi_threshold
                if feasible and not best_feasible:
                    # first threshold-meeting candidate resets the search
                    best_feasible, best_f2, best_xi, best_k = True, f2, xi, k
                elif feasible == best_feasible:
                    if (feasible and f2 > best_f2) or (not feasible and xi > best_xi):
                        best_f2, best_xi, best_k = f2, xi, k
                if best_k is None:
                    best_f2, best_xi, best_k = f2, xi, k
            ind.k[i] = best_k
            if snrs[i] > 0:
                xis[i] = semantic.semantic_similarity(params.similarity, best_k, snrs[i])
                rates[i] = (params.bandwidth * params.info_per_sentence
                            / (best_k * params.words_per_sentence) * xis[i])
            else:
                xis[i], rates[i] = 0.0, 0.0
        problem.evaluate(ind, scenario, params)


# ---------------------------------------------------------------------------
# Full runs

def final_front(population) -> list[Individual]:
    """Feasible first front of the population (all-infeasible fallback: best front)."""
    feasible = [ind for ind in population if ind.violation == 0.0]
    base = feasible if feasible else list(population)
    fronts = nondominated_sort(base)
    return [base[i] for i in fronts[0]]


def _front_metrics(population) -> tuple[float, float, float, int]:
    front = final_front(population)
    objs = np.array([ind.objectives.as_tuple() for ind in front])
    sp = metrics.spacing_metric(objs)
    m3 = metrics.max_spread_metric(objs)
    hv = metrics.hypervolume(objs)
    return sp, m3, hv, len(front)


def run(mode: str, scenario, params, config: SolverConfig,
        endpoint=None, transport=None) -> RunResult:
    """Execute a full optimization run.

    Modes: "llm-aoa" (advisor per config), "aoa" (static advisor), and
    "monolithic-nsga2" (flat NSGA-II over all variables). History carries one
    record per outer iteration.
    """
    if mode == "aoa":
        config = replace(config, advisor_mode="static")
    elif mode == "monolithic-nsga2":
        return _run_monolithic(scenario, params, config)
    elif mode != "llm-aoa":
        raise ValueError(f"unknown mode {mode!r}")

    rng = np.random.default_rng(config.seed)
    population = initialize_population(scenario, params, config, rng)
    evaluate_population(population, scenario, params)

    p_c, p_m = config.p_c, config.p_m
    window: list[tuple[float, float]] = []
    history: list[dict] = []
    for t in range(1, config.t_ao + 1):
        gca_step(population, scenario, params, config.gca_baseline)
        for gen in range(config.t_local):
            population = nsga2_generation(population, scenario, params, config, p_c, p_m, rng)
            sp, m3, _, _ = _front_metrics(population)
            objs = np.array([ind.objectives.as_tuple() for ind in final_front(population)])
            inp = advisor_mod.AdvisorInput(
                generation=(t - 1) * config.t_local + gen + 1,
                p_c=p_c, p_m=p_m, sp=sp, m3=m3,
                objective_ranges=tuple((float(objs[:, i].min()), float(objs[:, i].max())) for i in range(3)),
                history=tuple(window[-5:]),
            )
            update = advisor_mod.advise(inp, config.advisor_mode, endpoint=endpoint, transport=transport)
            p_c, p_m = update.p_c, update.p_m
            window.append((sp, m3))
        gso_step(population, scenario, params)
        population = select_best(population, config.population_size)
        sp, m3, hv, front_size = _front_metrics(population)
        history.append({
            "iteration": t, "sp": sp, "m3": m3, "hypervolume": hv,
            "p_c": p_c, "p_m": p_m, "front_size": front_size,
        })
    return RunResult(mode, population, history, p_c, p_m)


# ---------------------------------------------------------------------------
# Monolithic baseline: flat NSGA-II over (c, Q, w, k)

def _monolithic_bounds(scenario, params):
    n_v = scenario.n_uavs
    lower = np.concatenate([
        np.full(n_v, 1.0),
        np.tile(scenario.bounds.lower, n_v),
        np.full(n_v, params.w_min),
        np.full(n_v, float(params.k_min)),
    ])
    upper = np.concatenate([
        np.full(n_v, float(n_v)),
        np.tile(scenario.bounds.upper, n_v),
        np.full(n_v, params.w_max),
        np.full(n_v, float(params.k_max)),
    ])
    return lower, upper


def _run_monolithic(scenario, params, config: SolverConfig) -> RunResult:
    rng = np.random.default_rng(config.seed)
    n_v = scenario.n_uavs
    lower, upper = _monolithic_bounds(scenario, params)
    dim = len(lower)

    def decode(genes: np.ndarray) -> Individual:
        raw_labels = np.clip(np.rint(genes[:n_v]).astype(int), 1, n_v)
        q = genes[n_v: 4 * n_v].reshape(n_v, 3).copy()
        w = genes[4 * n_v: 5 * n_v].copy()
        k_full = np.clip(np.rint(genes[5 * n_v:]).astype(int), params.k_min, params.k_max)
        k_raw = np.resize(k_full, int(raw_labels.max()))
        assignment, k = canonicalize_labels(raw_labels, k_raw)
        return Individual(assignment, q, w, k)

    genomes = [lower + rng.random(dim) * (upper - lower) for _ in range(config.population_size)]
    population = [decode(g) for g in genomes]
    evaluate_population(population, scenario, params)

    p_c, p_m = config.p_c, config.p_m
    history: list[dict] = []
    for t in range(1, config.t_ao + 1):
        for _ in range(config.t_local):
            _, rank, crowd = _rank_and_crowd(population)
            pool_genomes = list(genomes)
            n_cross = int(round(p_c * config.population_size))
            for _ in range(n_cross // 2):
                i1 = _tournament(population, rank, crowd, rng)
                i2 = _tournament(population, rank, crowd, rng)
                g1, g2 = sbx_crossover(genomes[i1], genomes[i2], lower, upper, config.sbx_eta, rng)
                pool_genomes.extend([g1, g2])
            n_mut = int(round(p_m * config.population_size))
            for _ in range(n_mut):
                i = _tournament(population, rank, crowd, rng)
                pool_genomes.append(polynomial_mutation(genomes[i], lower, upper, config.poly_eta, rng))
            pool = [decode(g) for g in pool_genomes]
            evaluate_population(pool, scenario, params)
            fronts, _, crowd2 = _rank_and_crowd(pool)
            chosen: list[int] = []
            for front in fronts:
                if len(chosen) + len(front) <= config.population_size:
                    chosen.extend(front)
                else:
                    order = sorted(front, key=lambda i: (-crowd2[i], i))
                    chosen.extend(order[: config.population_size - len(chosen)])
                    break
            genomes = [pool_genomes[i] for i in chosen]
            population = [pool[i] for i in chosen]
        sp, m3, hv, front_size = _front_metrics(population)
        history.append({
            "iteration": t, "sp": sp, "m3": m3, "hypervolume": hv,
            "p_c": p_c, "p_m": p_m, "front_size": front_size,
        })
    return RunResult("monolithic-nsga2", population, history, p_c, p_m)
