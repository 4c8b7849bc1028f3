"""Build the establishment-level network from firm links.

Pipeline per client establishment, in ascending id order: gather the
candidate supplier establishments (all establishments of all supplier
firms), intersect the recipes of the client's outputs with what those
candidates actually offer, and solve one grouped prioritized set cover.
Every chosen candidate contributes one directed establishment link.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .cover import Candidate, CoverInstance, solve_greedy
from .domain import ConfigError, Economy, ESTABLISHMENT, ProductionNetwork
from .recipe import RecipeBook, RecipeConfig, candidate_edge_count, infer_recipes

GLOBAL_SCOPE = "global"
PER_INSTANCE_SCOPE = "per_instance"


@dataclass(frozen=True)
class BuildConfig:
    recipe: RecipeConfig = field(default_factory=RecipeConfig)
    priority_scope: str = GLOBAL_SCOPE
    max_uncovered_samples: int = 20

    def validate(self) -> None:
        self.recipe.validate()
        if self.priority_scope not in (GLOBAL_SCOPE, PER_INSTANCE_SCOPE):
            raise ConfigError(f"unknown priority scope {self.priority_scope!r}")
        if self.max_uncovered_samples < 0:
            raise ConfigError("max_uncovered_samples must be >= 0")


@dataclass
class BuildReport:
    candidate_edge_count: int = 0
    admitted_recipe_pairs: int = 0
    final_edge_count: int = 0
    clients_with_uncovered_inputs: int = 0
    uncovered_samples: list[tuple[int, tuple[int, ...]]] = field(default_factory=list)
    firm_pairs_projected: int = 0
    firm_links_total: int = 0

    def to_json(self) -> str:
        return json.dumps(
            {
                "candidate_edge_count": self.candidate_edge_count,
                "admitted_recipe_pairs": self.admitted_recipe_pairs,
                "final_edge_count": self.final_edge_count,
                "clients_with_uncovered_inputs": self.clients_with_uncovered_inputs,
                "uncovered_samples": [
                    {"client": c, "missing": list(m)} for c, m in self.uncovered_samples
                ],
                "firm_pairs_projected": self.firm_pairs_projected,
                "firm_links_total": self.firm_links_total,
            },
            indent=2,
            sort_keys=True,
        )


def build_establishment_network(
    economy: Economy,
    config: BuildConfig | None = None,
    recipes: RecipeBook | None = None,
) -> tuple[ProductionNetwork, BuildReport]:
    """Infer establishment links; returns the network and pipeline stats.

    Uncoverable inputs (recipe demands no candidate supplier of a given
    client can meet) are clipped out of the cover universe and recorded in
    the report; they are not fatal.
    """
    config = config or BuildConfig()
    config.validate()
    if recipes is None:
        recipes = infer_recipes(economy, config.recipe)

    report = BuildReport(
        candidate_edge_count=candidate_edge_count(economy),
        admitted_recipe_pairs=recipes.admitted_pairs,
        firm_links_total=len(economy.firm_links),
    )

    suppliers_by_firm = economy.suppliers_of_firm()
    global_priorities: dict[int, int] = {}
    edges: list[tuple[int, int]] = []

    for c_est in economy.establishments:  # ascending id by construction
        supplier_firms = suppliers_by_firm[c_est.firm]
        if not supplier_firms:
            continue
        candidates: list[Candidate] = []
        available: set[int] = set()
        for fs in supplier_firms:
            for s in economy.firms[fs].establishments:
                offer = economy.establishments[s].products
                available |= offer
                candidates.append(Candidate(id=s, group=fs, offer=offer))

        needed: set[int] = set()
        for g in c_est.products:
            needed |= recipes.admitted_for(g)
        universe = frozenset(needed & available)
        missing = needed - available
        if missing:
            report.clients_with_uncovered_inputs += 1
            if len(report.uncovered_samples) < config.max_uncovered_samples:
                report.uncovered_samples.append(
                    (c_est.id, tuple(sorted(missing)))
                )

        if config.priority_scope == GLOBAL_SCOPE:
            priorities = global_priorities
        else:
            priorities = {}
        instance = CoverInstance(
            universe=universe, candidates=candidates, priorities=priorities
        )
        solution = solve_greedy(instance)
        for s in sorted(solution.chosen):
            edges.append((s, c_est.id))

    report.final_edge_count = len(edges)
    report.firm_pairs_projected = len(
        {(economy.establishments[s].firm, economy.establishments[c].firm) for s, c in edges}
    )

    net = ProductionNetwork.from_edges(
        ESTABLISHMENT,
        economy.n_establishments,
        edges,
        [e.products for e in economy.establishments],
        [e.region for e in economy.establishments],
        [e.firm for e in economy.establishments],
        [e.industry for e in economy.establishments],
    )
    return net, report
