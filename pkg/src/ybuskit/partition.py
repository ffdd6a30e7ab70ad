"""Node partitions, block addressing and diagonal-block rank verification.

Partitioning the node set and reordering the nodal matrix accordingly
exposes blocks Y_ij relating the currents of class i to the voltages of
class j.  When the network is connected, branch admittances are nonzero
and every branch has positive real part, each diagonal block is
invertible: grounding the other classes turns boundary branches into
shunts, and every connected piece of a class then owns at least one
effective shunt.  ``verify_block_rank`` checks exactly that argument,
component by component.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import PreconditionError, StructuralError
from .linalg_core import full_rank_certificate
from .network_model import (
    DEFAULT_ZERO_TOL,
    Branch,
    Network,
    Shunt,
    components,
    validate,
)
from .ybus import AdmittanceMatrix, assemble, reorder


@dataclass(frozen=True)
class Partition:
    """Ordered partition of the node set into at least two nonempty classes."""

    classes: tuple[tuple[int, ...], ...]
    node_count: int

    def __post_init__(self):
        cls = tuple(tuple(int(v) for v in c) for c in self.classes)
        object.__setattr__(self, "classes", cls)
        object.__setattr__(self, "node_count", int(self.node_count))
        if len(cls) < 2:
            raise StructuralError("a partition needs at least two classes")
        seen: set[int] = set()
        total = 0
        for i, c in enumerate(cls):
            if not c:
                raise StructuralError(f"partition class {i} is empty")
            for v in c:
                if v in seen:
                    raise StructuralError(f"node {v} appears in more than one class")
                seen.add(v)
            total += len(c)
        if total != self.node_count or seen != set(range(self.node_count)):
            raise StructuralError(
                f"classes must cover exactly the nodes 0..{self.node_count - 1}"
            )

    @classmethod
    def from_labels(cls, labels) -> "Partition":
        """Build from a per-node class-label vector.

        Classes are ordered by ascending label; nodes within a class keep
        ascending order.
        """
        labels = [int(x) for x in labels]
        by_label: dict[int, list[int]] = {}
        for node, lab in enumerate(labels):
            by_label.setdefault(lab, []).append(node)
        ordered = tuple(tuple(by_label[lab]) for lab in sorted(by_label))
        return cls(classes=ordered, node_count=len(labels))

    @property
    def class_count(self) -> int:
        return len(self.classes)

    def labels(self) -> list[int]:
        """Per-node class-index vector (inverse of :meth:`from_labels`)."""
        out = [0] * self.node_count
        for i, c in enumerate(self.classes):
            for v in c:
                out[v] = i
        return out


@dataclass(frozen=True, eq=False)
class BlockView:
    """A matrix brought to block order under a partition.

    ``permuted`` reorders ``source`` so that class i occupies the
    contiguous row/column range starting at ``offsets[i]``.
    """

    source: AdmittanceMatrix
    partition: Partition
    permuted: AdmittanceMatrix
    offsets: tuple[int, ...]

    def block(self, i: int, j: int) -> np.ndarray:
        return block(self, i, j)


def block_view(source: AdmittanceMatrix, part: Partition) -> BlockView:
    """Reorder a matrix into block form under a partition of its nodes."""
    if part.node_count != source.size:
        raise StructuralError(
            f"partition covers {part.node_count} nodes but matrix has {source.size}"
        )
    order: list[int] = []
    offsets: list[int] = []
    for c in part.classes:
        offsets.append(len(order))
        order.extend(c)
    permuted = reorder(source, order)
    return BlockView(source=source, partition=part, permuted=permuted, offsets=tuple(offsets))


def block(view: BlockView, i: int, j: int) -> np.ndarray:
    """The block relating class-i currents to class-j voltages."""
    p = view.partition
    if not (0 <= i < p.class_count and 0 <= j < p.class_count):
        raise StructuralError(
            f"block index ({i},{j}) out of range for {p.class_count} classes"
        )
    ri = slice(view.offsets[i], view.offsets[i] + len(p.classes[i]))
    rj = slice(view.offsets[j], view.offsets[j] + len(p.classes[j]))
    return view.permuted.matrix[ri, rj].copy()


def grounded_equivalent(net: Network, keep) -> Network:
    """The network seen by a node subset when everything else is grounded.

    Branches inside ``keep`` are retained; each branch leaving ``keep``
    becomes a shunt at its inside endpoint; original shunts on ``keep``
    are retained.  Nodes are relabeled 0..len(keep)-1 following the order
    of ``keep`` (sets are sorted first), so assembling the result
    reproduces the corresponding diagonal block.
    """
    if isinstance(keep, (set, frozenset)):
        keep_order = sorted(int(v) for v in keep)
    else:
        keep_order = [int(v) for v in keep]
    if not keep_order:
        raise PreconditionError("keep set must be nonempty")
    if len(set(keep_order)) != len(keep_order):
        raise StructuralError("keep set contains duplicates")
    for v in keep_order:
        if v < 0 or v >= net.node_count:
            raise StructuralError(f"keep node {v} outside [0, {net.node_count})")
    if len(keep_order) == net.node_count:
        raise PreconditionError("keep set must be a proper subset of the nodes")

    new_index = {v: i for i, v in enumerate(keep_order)}
    branches: list[Branch] = []
    shunts: list[Shunt] = []
    for b in net.branches:
        fin = b.from_node in new_index
        tin = b.to_node in new_index
        if fin and tin:
            branches.append(Branch(new_index[b.from_node], new_index[b.to_node], b.admittance))
        elif fin:
            shunts.append(Shunt(new_index[b.from_node], b.admittance))
        elif tin:
            shunts.append(Shunt(new_index[b.to_node], b.admittance))
    for s in net.shunts:
        if s.node in new_index:
            shunts.append(Shunt(new_index[s.node], s.admittance))
    return Network(node_count=len(keep_order), branches=tuple(branches), shunts=tuple(shunts))


@dataclass(frozen=True)
class ComponentReport:
    """Verification outcome for one connected component of a class."""

    nodes: tuple[int, ...]
    full_rank: bool
    grounded: bool  # touches a boundary branch or a nonzero original shunt
    condition_estimate: float


@dataclass(frozen=True)
class ClassBlockReport:
    """Verification outcome for one diagonal block."""

    class_index: int
    nodes: tuple[int, ...]
    components: tuple[ComponentReport, ...]
    each_component_full_rank: bool
    block_condition_estimate: float


@dataclass(frozen=True)
class BlockRankReport:
    """Hypothesis findings plus per-class diagonal-block verification.

    Hypothesis status and measured invertibility are reported separately:
    the hypotheses are sufficient, not necessary, so verification proceeds
    even when they fail (as a falsification probe).
    """

    connected: bool
    hypothesis1_ok: bool
    branches_re_positive: bool
    classes: tuple[ClassBlockReport, ...]
    findings: tuple[str, ...]

    @property
    def all_full_rank(self) -> bool:
        return all(c.each_component_full_rank for c in self.classes)


def verify_block_rank(
    net: Network,
    part: Partition,
    zero_tol: float = DEFAULT_ZERO_TOL,
    use_svd: bool = False,
) -> BlockRankReport:
    """Verify that every diagonal block of the partition has full rank.

    Each class is decomposed into the connected components of its induced
    subgraph; the block is block-diagonal across them, so every component
    sub-block is certified separately (LU condition certificate by
    default, singular values with ``use_svd=True``).  The structural claim
    that every component touches a boundary branch or a nonzero shunt is
    checked as well.
    """
    if part.node_count != net.node_count:
        raise StructuralError(
            f"partition covers {part.node_count} nodes but network has {net.node_count}"
        )
    report = validate(net, zero_tol=zero_tol)
    findings = list(report.messages)

    class_reports: list[ClassBlockReport] = []
    for ci, cls_nodes in enumerate(part.classes):
        keep = list(cls_nodes)
        sub = grounded_equivalent(net, keep)
        y_pp = assemble(sub, zero_tol=0.0).matrix
        pos = {v: i for i, v in enumerate(keep)}

        comp_reports: list[ComponentReport] = []
        for comp in components(net, keep):
            idx = np.array([pos[v] for v in comp.nodes], dtype=np.intp)
            cert = full_rank_certificate(y_pp[np.ix_(idx, idx)], use_svd=use_svd)
            comp_set = set(comp.nodes)
            keep_set = set(keep)
            # a boundary branch has one endpoint in this component and the
            # other outside the class
            boundary = any(
                ((b.from_node in comp_set) and (b.to_node not in keep_set))
                or ((b.to_node in comp_set) and (b.from_node not in keep_set))
                for b in net.branches
            )
            shunted = any(
                s.node in comp_set and abs(s.admittance) > zero_tol for s in net.shunts
            )
            comp_reports.append(
                ComponentReport(
                    nodes=comp.nodes,
                    full_rank=cert.full_rank,
                    grounded=boundary or shunted,
                    condition_estimate=cert.condition_estimate,
                )
            )
            if not cert.full_rank:
                findings.append(
                    f"class {ci}: component {comp.nodes} is rank deficient "
                    f"(condition estimate {cert.condition_estimate:.3e})"
                )
            if not (boundary or shunted):
                findings.append(
                    f"class {ci}: component {comp.nodes} touches no boundary branch or shunt"
                )

        block_cert = full_rank_certificate(y_pp, use_svd=use_svd)
        class_reports.append(
            ClassBlockReport(
                class_index=ci,
                nodes=tuple(keep),
                components=tuple(comp_reports),
                each_component_full_rank=all(c.full_rank for c in comp_reports),
                block_condition_estimate=block_cert.condition_estimate,
            )
        )

    return BlockRankReport(
        connected=report.connected,
        hypothesis1_ok=report.hypothesis1_ok,
        branches_re_positive=report.theorem2_preconditions_ok,
        classes=tuple(class_reports),
        findings=tuple(findings),
    )
