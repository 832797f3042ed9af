"""Partition directed links into sub-slots with node-disjoint groups.

Within a group no node appears twice, as transmitter or receiver, so links
in one group can share the air concurrently while every node still only
sends or receives one stream at a time.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class SubSlotPlan:
    groups: tuple[tuple, ...]   # tuple of link tuples, one per sub-slot

    @property
    def m(self):
        return len(self.groups)


def decompose(links, seed):
    """Greedy first-fit matching decomposition of the link set.

    Links are visited in a seed-shuffled order; each goes into the first
    group where neither endpoint is already used, opening a new group when
    none fits. Deterministic per seed.
    """
    rng = np.random.default_rng(seed)
    order = [links[i] for i in rng.permutation(len(links))]

    groups = []
    used = []   # per-group set of occupied nodes
    for link in order:
        for g, nodes in zip(groups, used):
            if link.tx not in nodes and link.rx not in nodes:
                g.append(link)
                nodes.add(link.tx)
                nodes.add(link.rx)
                break
        else:
            groups.append([link])
            used.append({link.tx, link.rx})
    return SubSlotPlan(groups=tuple(tuple(g) for g in groups))
