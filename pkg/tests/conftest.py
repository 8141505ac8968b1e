import pytest

from krawlp.field import FieldSpec
from krawlp.lattice import enumerate_subspaces


@pytest.fixture(scope="session")
def lattices():
    cache = {}

    def get(q: int, n: int):
        if (q, n) not in cache:
            cache[q, n] = enumerate_subspaces(FieldSpec.of(q), n)
        return cache[q, n]

    return get
