"""Seeded random network generation for property suites.

Topologies are built as a uniform random labeled spanning tree (decoded
from a random Prüfer sequence) plus extra edges sampled without
replacement, so every generated network is connected and free of
self-loops and duplicate pairs.  All randomness flows through one
``numpy.random.default_rng`` (PCG64) instance seeded from
``GenSpec.seed``, so a ``GenSpec`` value determines the network
completely.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import StructuralError
from .network_model import Branch, Network, Shunt
from .partition import Partition

PHASE_POLICIES = ("re_positive", "arbitrary", "pure_imaginary")


@dataclass(frozen=True)
class GenSpec:
    """Parameters of one random network draw.

    ``node_range`` is inclusive on both ends.  ``edge_density`` is the
    fraction of non-tree node pairs added on top of the spanning tree.
    ``magnitude_range`` bounds are sampled log-uniformly so the decades in
    between are covered evenly.  ``min_shunts`` forces at least that many
    shunts regardless of the per-node probability draw.
    """

    node_range: tuple[int, int] = (5, 50)
    edge_density: float = 0.1
    shunt_probability: float = 0.0
    magnitude_range: tuple[float, float] = (1e-2, 1e2)
    phase_policy: str = "re_positive"
    seed: int = 0
    min_shunts: int = 0

    def __post_init__(self):
        lo, hi = (int(v) for v in self.node_range)
        object.__setattr__(self, "node_range", (lo, hi))
        if lo < 1 or hi < lo:
            raise StructuralError(f"degenerate node range ({lo}, {hi})")
        if not 0.0 <= float(self.edge_density) <= 1.0:
            raise StructuralError(f"edge density {self.edge_density} outside [0, 1]")
        if not 0.0 <= float(self.shunt_probability) <= 1.0:
            raise StructuralError(
                f"shunt probability {self.shunt_probability} outside [0, 1]"
            )
        mlo, mhi = (float(v) for v in self.magnitude_range)
        object.__setattr__(self, "magnitude_range", (mlo, mhi))
        if not (math.isfinite(mlo) and math.isfinite(mhi) and 0.0 < mlo <= mhi):
            raise StructuralError(f"degenerate magnitude range ({mlo}, {mhi})")
        if self.phase_policy not in PHASE_POLICIES:
            raise StructuralError(
                f"unknown phase policy {self.phase_policy!r}; choose from {PHASE_POLICIES}"
            )
        object.__setattr__(self, "seed", int(self.seed))
        object.__setattr__(self, "min_shunts", int(self.min_shunts))
        if self.min_shunts < 0:
            raise StructuralError("min_shunts must be nonnegative")


def _tree_from_prufer(seq: list[int], n: int) -> list[tuple[int, int]]:
    """Decode a Prüfer sequence into the edge list of a labeled tree."""
    degree = [1] * n
    for v in seq:
        degree[v] += 1
    edges: list[tuple[int, int]] = []
    ptr = 0
    while degree[ptr] != 1:
        ptr += 1
    leaf = ptr
    for v in seq:
        edges.append((min(leaf, v), max(leaf, v)))
        degree[v] -= 1
        if degree[v] == 1 and v < ptr:
            leaf = v
        else:
            ptr += 1
            while degree[ptr] != 1:
                ptr += 1
            leaf = ptr
    edges.append((min(leaf, n - 1), max(leaf, n - 1)))
    return edges


def _draw_admittance(rng: np.random.Generator, spec: GenSpec) -> complex:
    lo, hi = spec.magnitude_range
    log_lo, log_hi = math.log(lo), math.log(hi)

    def magnitude() -> float:
        return float(np.exp(rng.uniform(log_lo, log_hi)))

    if spec.phase_policy == "re_positive":
        re = magnitude()
        im = magnitude() * (1.0 if rng.random() < 0.5 else -1.0)
        return complex(re, im)
    if spec.phase_policy == "pure_imaginary":
        return complex(0.0, magnitude() * (1.0 if rng.random() < 0.5 else -1.0))
    # arbitrary: magnitude in range, phase uniform on the circle
    theta = rng.uniform(-math.pi, math.pi)
    return magnitude() * complex(math.cos(theta), math.sin(theta))


def generate(spec: GenSpec) -> Network:
    """Draw one random connected network.

    The node count is uniform over ``node_range``; a spanning tree
    guarantees connectivity; extra edges are sampled without replacement
    from the non-tree pairs; each node receives a shunt with probability
    ``shunt_probability`` (topped up to ``min_shunts`` if the draw came
    up short).  Same spec, same network.
    """
    rng = np.random.default_rng(spec.seed)
    lo, hi = spec.node_range
    n = int(rng.integers(lo, hi + 1))
    if spec.min_shunts > n:
        raise StructuralError(f"min_shunts={spec.min_shunts} exceeds node count {n}")

    if n == 1:
        edges: list[tuple[int, int]] = []
    else:
        prufer = rng.integers(0, n, size=max(n - 2, 0)).tolist()
        edges = _tree_from_prufer(prufer, n)

    tree_set = set(edges)
    candidates = [
        (i, j) for i in range(n) for j in range(i + 1, n) if (i, j) not in tree_set
    ]
    extra = int(round(spec.edge_density * len(candidates)))
    if extra:
        picks = rng.choice(len(candidates), size=extra, replace=False)
        edges.extend(candidates[int(k)] for k in sorted(picks))

    branches = tuple(Branch(i, j, _draw_admittance(rng, spec)) for i, j in edges)

    shunted = rng.random(n) < spec.shunt_probability
    deficit = spec.min_shunts - int(np.count_nonzero(shunted))
    if deficit > 0:
        bare = np.flatnonzero(~shunted)
        for k in rng.choice(bare.size, size=deficit, replace=False):
            shunted[bare[int(k)]] = True
    shunts = tuple(
        Shunt(int(v), _draw_admittance(rng, spec)) for v in np.flatnonzero(shunted)
    )
    return Network(node_count=n, branches=branches, shunts=shunts)


def random_partition(node_count: int, class_count: int, rng: np.random.Generator) -> Partition:
    """Uniform-ish random partition into exactly ``class_count`` nonempty classes.

    One node seeds each class, the rest are assigned uniformly.
    """
    if class_count < 2 or class_count > node_count:
        raise StructuralError(
            f"cannot split {node_count} nodes into {class_count} nonempty classes"
        )
    labels = np.empty(node_count, dtype=np.intp)
    seeds = rng.permutation(node_count)[:class_count]
    labels[:] = rng.integers(0, class_count, size=node_count)
    labels[seeds] = np.arange(class_count)
    return Partition.from_labels(labels.tolist())


def counterexample_block_singular() -> tuple[Network, Partition]:
    """Instance showing why positive branch real parts matter.

    A purely imaginary branch cancels an equal-and-opposite shunt exactly,
    so the 1x1 diagonal block of the first class is the zero matrix even
    though the network is connected and every admittance is nonzero.
    """
    net = Network(
        node_count=2,
        branches=(Branch(0, 1, 1j),),
        shunts=(Shunt(0, -1j),),
    )
    part = Partition(classes=((0,), (1,)), node_count=2)
    return net, part
