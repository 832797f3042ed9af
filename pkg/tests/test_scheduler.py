import numpy as np

from wigsim.graphs import DirectedLink, directed_links, generate_synthetic
from wigsim.scheduler import decompose


def _check_plan(plan, links):
    seen = []
    for group in plan.groups:
        nodes = set()
        for link in group:
            assert link.tx not in nodes and link.rx not in nodes
            nodes.add(link.tx)
            nodes.add(link.rx)
            seen.append(link)
    assert sorted(seen) == sorted(links)
    assert len(seen) == len(set(seen))


def test_mutual_links_need_two_groups():
    links = [DirectedLink(0, 1), DirectedLink(1, 0)]
    plan = decompose(links, seed=0)
    assert plan.m == 2
    _check_plan(plan, links)


def test_perfect_matching_single_group():
    links = [DirectedLink(0, 1), DirectedLink(2, 3), DirectedLink(4, 5)]
    plan = decompose(links, seed=1)
    assert plan.m == 1
    _check_plan(plan, links)


def test_star_needs_one_group_per_link():
    links = []
    for leaf in range(1, 5):
        links.append(DirectedLink(0, leaf))
        links.append(DirectedLink(leaf, 0))
    plan = decompose(links, seed=2)
    # the center node sits in every link, so no two links can share a group
    assert plan.m == 8
    _check_plan(plan, links)


def test_deterministic_per_seed():
    g = generate_synthetic(n=15, c=3, p_in=0.5, p_out=0.1, d=2, seed=0)
    links = directed_links(g)
    a = decompose(links, seed=7)
    b = decompose(links, seed=7)
    assert a.groups == b.groups


def test_invariants_on_random_graphs():
    rng = np.random.default_rng(0)
    for trial in range(100):
        n = int(rng.integers(2, 25))
        p = float(rng.uniform(0.05, 0.9))
        g = generate_synthetic(n=n, c=2, p_in=p, p_out=p, d=2,
                               seed=int(rng.integers(1 << 30)))
        links = directed_links(g)
        plan = decompose(links, seed=trial)
        _check_plan(plan, links)
        assert plan.m <= max(len(links), 1) or not links
        if links:
            occupancy = np.zeros(n, dtype=int)
            for l in links:
                occupancy[l.tx] += 1
                occupancy[l.rx] += 1
            assert plan.m >= occupancy.max()
