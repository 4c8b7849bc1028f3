"""Core data types: economies, entities, and production networks.

Identifiers of every kind (firm, establishment, region, industry, product)
are dense integers 0..N-1 so that adjacency and product-membership tests in
the cascade inner loop stay array-indexed. All structures are immutable
after construction and safe for unsynchronized concurrent reads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np


class ConfigError(ValueError):
    """Invalid configuration or arguments (CLI exit code 1)."""


class DataError(ValueError):
    """Invalid or inconsistent input data (CLI exit code 2)."""


FIRM = "firm"
ESTABLISHMENT = "establishment"


@dataclass(frozen=True)
class Establishment:
    id: int
    firm: int
    region: int
    industry: int
    products: frozenset[int]

    def __post_init__(self) -> None:
        if not self.products:
            raise DataError(f"establishment {self.id} has no output products")


@dataclass(frozen=True)
class Firm:
    id: int
    region: int
    industry: int
    establishments: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.establishments:
            raise DataError(f"firm {self.id} has no establishments")


@dataclass(frozen=True)
class Economy:
    """A firm/establishment universe plus the firm-level trade links."""

    firms: tuple[Firm, ...]
    establishments: tuple[Establishment, ...]
    firm_links: tuple[tuple[int, int], ...]  # (supplier -> client), sorted, unique
    region_labels: tuple[str, ...]
    industry_labels: tuple[str, ...]
    product_labels: tuple[str, ...]

    @property
    def n_firms(self) -> int:
        return len(self.firms)

    @property
    def n_establishments(self) -> int:
        return len(self.establishments)

    @property
    def n_products(self) -> int:
        return len(self.product_labels)

    @property
    def n_regions(self) -> int:
        return len(self.region_labels)

    @property
    def n_industries(self) -> int:
        return len(self.industry_labels)

    def validate(self) -> None:
        for i, f in enumerate(self.firms):
            if f.id != i:
                raise DataError(f"firm ids not dense: slot {i} holds id {f.id}")
            if not (0 <= f.region < self.n_regions):
                raise DataError(f"firm {i}: region {f.region} out of range")
            if not (0 <= f.industry < self.n_industries):
                raise DataError(f"firm {i}: industry {f.industry} out of range")
            for e in f.establishments:
                if not (0 <= e < self.n_establishments):
                    raise DataError(f"firm {i}: unknown establishment {e}")
                if self.establishments[e].firm != i:
                    raise DataError(
                        f"establishment {e} does not point back to firm {i}"
                    )
        for j, est in enumerate(self.establishments):
            if est.id != j:
                raise DataError(
                    f"establishment ids not dense: slot {j} holds id {est.id}"
                )
            if not (0 <= est.firm < self.n_firms):
                raise DataError(f"establishment {j}: unknown firm {est.firm}")
            if j not in self.firms[est.firm].establishments:
                raise DataError(
                    f"establishment {j} missing from firm {est.firm} roster"
                )
            if not (0 <= est.region < self.n_regions):
                raise DataError(f"establishment {j}: region out of range")
            if not (0 <= est.industry < self.n_industries):
                raise DataError(f"establishment {j}: industry out of range")
            for q in est.products:
                if not (0 <= q < self.n_products):
                    raise DataError(f"establishment {j}: product {q} out of range")
        seen = set()
        for s, c in self.firm_links:
            if s == c:
                raise DataError(f"self link on firm {s}")
            if not (0 <= s < self.n_firms and 0 <= c < self.n_firms):
                raise DataError(f"firm link ({s},{c}) out of range")
            if (s, c) in seen:
                raise DataError(f"duplicate firm link ({s},{c})")
            seen.add((s, c))

    def suppliers_of_firm(self) -> list[list[int]]:
        """Per client firm, the sorted list of its supplier firms."""
        sup: list[list[int]] = [[] for _ in range(self.n_firms)]
        for s, c in self.firm_links:
            sup[c].append(s)
        for lst in sup:
            lst.sort()
        return sup


@dataclass(frozen=True)
class ProductionNetwork:
    """Directed supplier->client graph over firms or establishments.

    Adjacency is held in CSR form twice (out-lists and in-lists over the
    same edge set). `outputs[i]` is the node's set of output products;
    input products are derived, never stored.
    """

    entity_kind: str
    n: int
    out_ptr: np.ndarray
    out_dst: np.ndarray
    in_ptr: np.ndarray
    in_src: np.ndarray
    outputs: tuple[frozenset[int], ...]
    entity_region: np.ndarray
    entity_firm: np.ndarray
    entity_industry: np.ndarray

    @property
    def n_edges(self) -> int:
        return int(self.out_dst.shape[0])

    def out_neighbors(self, v: int) -> np.ndarray:
        return self.out_dst[self.out_ptr[v] : self.out_ptr[v + 1]]

    def in_neighbors(self, v: int) -> np.ndarray:
        return self.in_src[self.in_ptr[v] : self.in_ptr[v + 1]]

    def edges(self) -> Iterator[tuple[int, int]]:
        for s in range(self.n):
            for c in self.out_neighbors(s):
                yield s, int(c)

    @staticmethod
    def from_edges(
        entity_kind: str,
        n: int,
        edges: Sequence[tuple[int, int]],
        outputs: Sequence[frozenset[int]],
        entity_region: Sequence[int],
        entity_firm: Sequence[int],
        entity_industry: Sequence[int],
    ) -> "ProductionNetwork":
        if entity_kind not in (FIRM, ESTABLISHMENT):
            raise ConfigError(f"unknown entity kind {entity_kind!r}")
        if len(outputs) != n or len(entity_region) != n or len(entity_firm) != n:
            raise DataError("per-node attribute length mismatch")
        for i, out in enumerate(outputs):
            if not out:
                raise DataError(f"node {i} has an empty output-product set")
        if edges:
            arr = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        else:
            arr = np.empty((0, 2), dtype=np.int64)
        if arr.size:
            if arr.min() < 0 or arr.max() >= n:
                raise DataError("edge endpoint out of range")
            if np.any(arr[:, 0] == arr[:, 1]):
                raise DataError("self loop in edge list")
            keys = arr[:, 0] * n + arr[:, 1]
            uniq = np.unique(keys)
            if uniq.shape[0] != keys.shape[0]:
                raise DataError("duplicate edge in edge list")
            arr = np.column_stack((uniq // n, uniq % n))  # canonical sort
        out_ptr = np.zeros(n + 1, dtype=np.int64)
        np.add.at(out_ptr, arr[:, 0] + 1, 1)
        np.cumsum(out_ptr, out=out_ptr)
        out_dst = arr[:, 1].copy()
        order = np.lexsort((arr[:, 0], arr[:, 1]))
        in_ptr = np.zeros(n + 1, dtype=np.int64)
        np.add.at(in_ptr, arr[:, 1] + 1, 1)
        np.cumsum(in_ptr, out=in_ptr)
        in_src = arr[order, 0].copy()
        net = ProductionNetwork(
            entity_kind=entity_kind,
            n=n,
            out_ptr=out_ptr,
            out_dst=out_dst,
            in_ptr=in_ptr,
            in_src=in_src,
            outputs=tuple(frozenset(o) for o in outputs),
            entity_region=np.asarray(entity_region, dtype=np.int64),
            entity_firm=np.asarray(entity_firm, dtype=np.int64),
            entity_industry=np.asarray(entity_industry, dtype=np.int64),
        )
        return net


def derive_inputs(net: ProductionNetwork, v: int) -> frozenset[int]:
    """Input products of node v: union of its suppliers' output sets."""
    if not (0 <= v < net.n):
        raise ValueError(f"node {v} out of range for network of size {net.n}")
    acc: set[int] = set()
    for j in net.in_neighbors(v):
        acc |= net.outputs[j]
    return frozenset(acc)


INDUSTRY_RULE = "industry"
UNION_RULE = "union"


def firm_network_from(economy: Economy, product_mode: str = UNION_RULE) -> ProductionNetwork:
    """Firm-level network: nodes are firms, edges are the firm links.

    product_mode "industry" assigns each firm the singleton set of its
    primary industry (treated as a pseudo-product); "union" assigns the
    union of its establishments' product sets.
    """
    if product_mode not in (INDUSTRY_RULE, UNION_RULE):
        raise ConfigError(f"unknown firm product mode {product_mode!r}")
    outputs: list[frozenset[int]] = []
    for f in economy.firms:
        if product_mode == INDUSTRY_RULE:
            outputs.append(frozenset((f.industry,)))
        else:
            acc: set[int] = set()
            for e in f.establishments:
                acc |= economy.establishments[e].products
            outputs.append(frozenset(acc))
    return ProductionNetwork.from_edges(
        FIRM,
        economy.n_firms,
        economy.firm_links,
        outputs,
        [f.region for f in economy.firms],
        [f.id for f in economy.firms],
        [f.industry for f in economy.firms],
    )
