"""Recipe inference: which input products does each output product need?

For an output product g produced by e(g) establishments, an input product h
enters g's recipe when strictly more than threshold_fraction * e(g) of those
establishments are observed (under the complete supplier-establishment
expansion of the firm links) with at least one candidate supplier that
outputs h. Observations are binary per producing establishment, so
obs(g, h) <= e(g) and the cutoff comparison is well defined.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np
import scipy.sparse as sp

from .domain import ConfigError, Economy


@dataclass(frozen=True)
class RecipeConfig:
    threshold_fraction: float = 0.5

    def validate(self) -> None:
        if not (0.0 <= self.threshold_fraction <= 1.0):
            raise ConfigError("threshold_fraction must lie in [0,1]")


@dataclass(frozen=True)
class RecipeBook:
    """Observation counts and admitted inputs per output product."""

    threshold_fraction: float
    producer_count: dict[int, int]          # g -> e(g), products with >= 1 producer
    entries: dict[int, dict[int, int]]      # g -> {h: obs(g, h)}, obs > 0 only
    admitted: dict[int, frozenset[int]]     # g -> admitted input products

    def admitted_for(self, g: int) -> frozenset[int]:
        return self.admitted.get(g, frozenset())

    @property
    def observed_pairs(self) -> int:
        return sum(len(v) for v in self.entries.values())

    @property
    def admitted_pairs(self) -> int:
        return sum(len(v) for v in self.admitted.values())

    def rows(self) -> Iterator[tuple[int, int, int, int, bool]]:
        """(output_product, input_product, producer_count, obs, admitted)."""
        for g in sorted(self.entries):
            adm = self.admitted.get(g, frozenset())
            for h in sorted(self.entries[g]):
                yield g, h, self.producer_count[g], self.entries[g][h], h in adm


def complete_expansion(economy: Economy) -> Iterator[tuple[int, int]]:
    """All candidate establishment links implied by the firm links.

    For every firm link (S -> C), every establishment of S is paired with
    every establishment of C. Yielded lazily: the full set can be orders of
    magnitude larger than anything worth materializing.
    """
    for fs, fc in economy.firm_links:
        for s in economy.firms[fs].establishments:
            for c in economy.firms[fc].establishments:
                yield s, c


def candidate_edge_count(economy: Economy) -> int:
    """len(complete_expansion(...)) computed arithmetically."""
    sizes = [len(f.establishments) for f in economy.firms]
    return sum(sizes[fs] * sizes[fc] for fs, fc in economy.firm_links)


def infer_recipes(economy: Economy, config: RecipeConfig | None = None) -> RecipeBook:
    """Count observations per (output, input) pair and apply the cutoff.

    All establishments of one client firm share the same candidate supplier
    set (every establishment of every supplier firm), so the count
    aggregates at firm level: obs(g, h) = sum over client firms F of
    (#establishments of F producing g) * [h available to F's suppliers].
    """
    config = config or RecipeConfig()
    config.validate()
    nf, np_ = economy.n_firms, economy.n_products

    # C: establishment x product producer incidence.
    e_rows, e_cols = [], []
    for est in economy.establishments:
        for q in est.products:
            e_rows.append(est.id)
            e_cols.append(q)
    C = sp.csr_matrix(
        (np.ones(len(e_rows), dtype=np.int64), (e_rows, e_cols)),
        shape=(economy.n_establishments, np_),
    )

    # S: firm x establishment membership; G = S @ C counts producers per firm.
    f_rows = [est.firm for est in economy.establishments]
    f_cols = [est.id for est in economy.establishments]
    S = sp.csr_matrix(
        (np.ones(len(f_rows), dtype=np.int64), (f_rows, f_cols)),
        shape=(nf, economy.n_establishments),
    )
    G = S @ C                      # G[F, g] = establishments of F producing g
    P = (G > 0).astype(np.int64)   # P[F, h] = firm F outputs h somewhere

    # B: client firm x supplier firm; H = availability of h to F's clients.
    if economy.firm_links:
        links = np.asarray(economy.firm_links, dtype=np.int64)
        B = sp.csr_matrix(
            (np.ones(len(links), dtype=np.int64), (links[:, 1], links[:, 0])),
            shape=(nf, nf),
        )
        H = ((B @ P) > 0).astype(np.int64)  # H[F, h] = some supplier of F outputs h
        obs = (G.T @ H).tocsr()             # obs[g, h]
    else:
        obs = sp.csr_matrix((np_, np_), dtype=np.int64)

    e_count = np.asarray(C.sum(axis=0)).ravel()

    entries: dict[int, dict[int, int]] = {}
    admitted: dict[int, frozenset[int]] = {}
    producer_count: dict[int, int] = {
        int(g): int(e_count[g]) for g in np.nonzero(e_count)[0]
    }
    obs_coo = obs.tocoo()
    for g, h, c in zip(obs_coo.row, obs_coo.col, obs_coo.data):
        entries.setdefault(int(g), {})[int(h)] = int(c)
    tau = config.threshold_fraction
    for g, hs in entries.items():
        cutoff = tau * producer_count[g]
        adm = frozenset(h for h, c in hs.items() if c > cutoff)
        if adm:
            admitted[g] = adm
    return RecipeBook(
        threshold_fraction=tau,
        producer_count=producer_count,
        entries=entries,
        admitted=admitted,
    )
