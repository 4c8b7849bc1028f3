"""Synthetic economy generation and degree diagnostics.

Real establishment-level trade data is proprietary, so experiments run on
generated economies whose gross statistics echo observed production
networks: power-law-tailed firm degrees, multi-establishment firms, one
over-represented hub region whose firms get extra out-degree propensity,
and product pools nested inside industries (products strictly finer than
industries).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from collections import Counter

import numpy as np

from .domain import ConfigError, Economy, Establishment, Firm, ProductionNetwork

POINT = "point"
ZIPF = "zipf"


@dataclass(frozen=True)
class DistSpec:
    """Discrete count distribution: a point mass or a truncated zipf.

    zipf: P(k) proportional to k**(-exponent) for k in 1..max_value.
    """

    kind: str = POINT
    value: int = 1
    exponent: float = 2.0
    max_value: int = 10

    def validate(self) -> None:
        if self.kind not in (POINT, ZIPF):
            raise ConfigError(f"unknown distribution kind {self.kind!r}")
        if self.kind == POINT and self.value < 1:
            raise ConfigError("point mass must be >= 1")
        if self.kind == ZIPF:
            if self.exponent <= 1.0:
                raise ConfigError("zipf exponent must be > 1")
            if self.max_value < 1:
                raise ConfigError("zipf max_value must be >= 1")

    def mean(self) -> float:
        """Analytic mean by direct summation over the support."""
        if self.kind == POINT:
            return float(self.value)
        ks = np.arange(1, self.max_value + 1, dtype=np.float64)
        w = ks ** (-self.exponent)
        return float((ks * w).sum() / w.sum())

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        if self.kind == POINT:
            return np.full(size, self.value, dtype=np.int64)
        ks = np.arange(1, self.max_value + 1, dtype=np.float64)
        w = ks ** (-self.exponent)
        w /= w.sum()
        return rng.choice(np.arange(1, self.max_value + 1), size=size, p=w)


@dataclass(frozen=True)
class GeneratorConfig:
    n_firms: int = 1000
    establishments_per_firm: DistSpec = field(default_factory=DistSpec)
    products_per_establishment: DistSpec = field(default_factory=DistSpec)
    n_products: int = 100
    n_industries: int = 10
    n_regions: int = 4
    hub_region: int = 0
    hub_region_share: float = 0.3
    hub_extra_out_degree_factor: float = 1.0
    firm_degree_exponent: float = 2.3
    mean_firm_out_degree: float = 4.0
    seed: int = 0

    def validate(self) -> None:
        if self.n_firms < 1:
            raise ConfigError("n_firms must be >= 1")
        if self.n_products < 1 or self.n_industries < 1 or self.n_regions < 1:
            raise ConfigError("counts must be >= 1")
        if self.n_products < self.n_industries:
            raise ConfigError("need n_products >= n_industries (nested pools)")
        if not (0 <= self.hub_region < self.n_regions):
            raise ConfigError("hub_region out of range")
        if not (0.0 <= self.hub_region_share <= 1.0):
            raise ConfigError("hub_region_share must be in [0,1]")
        if self.hub_extra_out_degree_factor < 1.0:
            raise ConfigError("hub_extra_out_degree_factor must be >= 1")
        if self.firm_degree_exponent <= 1.0:
            raise ConfigError("firm_degree_exponent must be > 1")
        if self.mean_firm_out_degree < 0:
            raise ConfigError("mean_firm_out_degree must be >= 0")
        if self.n_firms > 1 and self.mean_firm_out_degree > self.n_firms - 1:
            raise ConfigError("mean out-degree unreachable for this firm count")
        if self.n_firms == 1 and self.mean_firm_out_degree > 0:
            raise ConfigError("a single firm cannot have outgoing links")
        self.establishments_per_firm.validate()
        self.products_per_establishment.validate()


def _region_labels(n: int) -> tuple[str, ...]:
    width = max(1, len(str(n - 1)))
    return tuple(f"R{i:0{width}d}" for i in range(n))


def _industry_labels(n: int) -> tuple[str, ...]:
    width = max(1, len(str(n - 1)))
    return tuple(f"I{i:0{width}d}" for i in range(n))


def _product_labels(n: int) -> tuple[str, ...]:
    width = max(1, len(str(n - 1)))
    return tuple(f"P{i:0{width}d}" for i in range(n))


def industry_pool(industry: int, n_products: int, n_industries: int) -> range:
    """Contiguous block of products owned by one industry."""
    lo = industry * n_products // n_industries
    hi = (industry + 1) * n_products // n_industries
    return range(lo, hi)


def generate(config: GeneratorConfig) -> Economy:
    """Generate a synthetic economy. Deterministic for a given seed."""
    config.validate()
    rng = np.random.default_rng(config.seed)
    nf = config.n_firms

    # Headquarters regions: hub with fixed share, the rest uniform.
    if config.n_regions == 1:
        firm_region = np.zeros(nf, dtype=np.int64)
    else:
        others = np.array(
            [r for r in range(config.n_regions) if r != config.hub_region]
        )
        firm_region = others[rng.integers(0, len(others), size=nf)]
        in_hub = rng.random(nf) < config.hub_region_share
        firm_region[in_hub] = config.hub_region
    firm_industry = rng.integers(0, config.n_industries, size=nf)

    # Establishments: the first one per firm is the headquarters and keeps
    # the firm's region/industry; extras get uniform region and industry so
    # multi-establishment firms are industrially diverse.
    est_counts = config.establishments_per_firm.sample(rng, nf)
    firms: list[Firm] = []
    establishments: list[Establishment] = []
    for f in range(nf):
        member_ids = []
        for k in range(int(est_counts[f])):
            e_id = len(establishments)
            member_ids.append(e_id)
            if k == 0:
                region = int(firm_region[f])
                industry = int(firm_industry[f])
            else:
                region = int(rng.integers(0, config.n_regions))
                industry = int(rng.integers(0, config.n_industries))
            pool = industry_pool(industry, config.n_products, config.n_industries)
            m = int(config.products_per_establishment.sample(rng, 1)[0])
            m = min(m, len(pool))
            prods = rng.choice(np.asarray(pool), size=m, replace=False)
            establishments.append(
                Establishment(
                    id=e_id,
                    firm=f,
                    region=region,
                    industry=industry,
                    products=frozenset(int(q) for q in prods),
                )
            )
        firms.append(
            Firm(
                id=f,
                region=int(firm_region[f]),
                industry=int(firm_industry[f]),
                establishments=tuple(member_ids),
            )
        )

    links = _sample_firm_links(config, rng, firm_region)

    return Economy(
        firms=tuple(firms),
        establishments=tuple(establishments),
        firm_links=links,
        region_labels=_region_labels(config.n_regions),
        industry_labels=_industry_labels(config.n_industries),
        product_labels=_product_labels(config.n_products),
    )


def _sample_firm_links(
    config: GeneratorConfig, rng: np.random.Generator, firm_region: np.ndarray
) -> tuple[tuple[int, int], ...]:
    """Power-law-propensity link sampling, configuration-model style.

    Out-degree quotas follow a Pareto-tailed weight (exponent - 1), boosted
    for hub-region firms; clients are drawn from an independent Pareto
    weight so in-degrees are heavy-tailed too. Self-links and duplicates
    are rejected and redrawn a bounded number of times.
    """
    nf = config.n_firms
    total = int(round(nf * config.mean_firm_out_degree))
    if total == 0 or nf < 2:
        return ()
    alpha = config.firm_degree_exponent - 1.0
    out_w = rng.pareto(alpha, size=nf) + 1.0
    out_w[firm_region == config.hub_region] *= config.hub_extra_out_degree_factor
    in_w = rng.pareto(alpha, size=nf) + 1.0

    quota = np.floor(out_w / out_w.sum() * total).astype(np.int64)
    shortfall = total - int(quota.sum())
    if shortfall > 0:
        frac = out_w / out_w.sum() * total - quota
        order = np.argsort(-frac, kind="stable")
        quota[order[:shortfall]] += 1
    quota = np.minimum(quota, nf - 1)

    cdf = np.cumsum(in_w)
    cdf /= cdf[-1]
    suppliers = np.repeat(np.arange(nf, dtype=np.int64), quota)
    chosen: set[int] = set()
    pending = suppliers
    for _ in range(40):
        if pending.size == 0:
            break
        clients = np.searchsorted(cdf, rng.random(pending.size)).astype(np.int64)
        keys = pending * nf + clients
        ok = clients != pending
        retry = []
        for key, good in zip(keys.tolist(), ok.tolist()):
            if good and key not in chosen:
                chosen.add(key)
            else:
                retry.append(key // nf)
        pending = np.asarray(retry, dtype=np.int64)
    # leftovers after the retry budget are dropped; quotas stay approximate
    links = sorted((int(k // nf), int(k % nf)) for k in chosen)
    return tuple(links)


@dataclass(frozen=True)
class DegreeReport:
    """Degree diagnostics over the undirected view of a network."""

    degree_histogram: dict[int, int]
    p90_degree: int
    avg_links_per_node: float
    mean_out_degree_by_region: dict[int, float]

    def rows(self) -> list[tuple[str, str, str]]:
        out = [("avg_links_per_node", "", repr(self.avg_links_per_node))]
        out.append(("p90_degree", "", str(self.p90_degree)))
        for d in sorted(self.degree_histogram):
            out.append(("degree_histogram", str(d), str(self.degree_histogram[d])))
        for r in sorted(self.mean_out_degree_by_region):
            out.append(
                (
                    "mean_out_degree_by_region",
                    str(r),
                    repr(self.mean_out_degree_by_region[r]),
                )
            )
        return out


def degree_report(net: ProductionNetwork) -> DegreeReport:
    """Histogram of undirected degrees (distinct neighbors), the 90th
    percentile degree, average links per node (2E/N, links counted at both
    endpoints), and mean out-degree grouped by region."""
    n = net.n
    deg = np.zeros(n, dtype=np.int64)
    if net.n_edges:
        src = np.repeat(np.arange(n, dtype=np.int64), np.diff(net.out_ptr))
        dst = net.out_dst
        lo = np.minimum(src, dst)
        hi = np.maximum(src, dst)
        und = np.unique(lo * n + hi)
        np.add.at(deg, und // n, 1)
        np.add.at(deg, und % n, 1)
    hist = Counter(deg.tolist())
    sorted_deg = np.sort(deg)
    p90 = int(sorted_deg[int(np.ceil(0.9 * n)) - 1]) if n else 0
    avg = 2.0 * net.n_edges / n if n else 0.0
    out_deg = np.diff(net.out_ptr)
    by_region: dict[int, float] = {}
    for r in np.unique(net.entity_region):
        mask = net.entity_region == r
        by_region[int(r)] = float(out_deg[mask].mean())
    return DegreeReport(
        degree_histogram=dict(hist),
        p90_degree=p90,
        avg_links_per_node=avg,
        mean_out_degree_by_region=by_region,
    )
