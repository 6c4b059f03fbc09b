import numpy as np
import pytest

from ncsync.codec import KnowledgeSet
from ncsync.topology import complete_graph, path_graph, star_graph


@pytest.fixture
def path3():
    return path_graph(3)


@pytest.fixture
def k5():
    return complete_graph(5)


@pytest.fixture
def star5():
    return star_graph(5)


def knowledge(held_per_node):
    """Build per-node KnowledgeSets from a list of held-block iterables."""
    return [KnowledgeSet(i, set(h)) for i, h in enumerate(held_per_node)]


def rng(seed=0):
    return np.random.default_rng(np.random.SeedSequence(seed))
