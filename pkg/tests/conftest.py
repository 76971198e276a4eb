import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from collabnet.corpus import generate_fixture, parse_corpus
from collabnet.networks import build_affiliation, project_collaboration
from collabnet.synthetic import gnm_random_network


@pytest.fixture
def fixture_network():
    """Mid-size collaboration network from a seed-7 synthetic corpus."""
    xml = generate_fixture(seed=7, n_authors=60, n_papers=150)
    return project_collaboration(build_affiliation(parse_corpus(xml)))


@pytest.fixture
def sparse_network():
    return gnm_random_network(80, 100, seed=11)
