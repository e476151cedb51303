import pytest

from semicanonical.idealkit import ideal_presentation
from semicanonical.inputs import load_fixture
from semicanonical.tgeom import build_embedding


class Pipeline:
    def __init__(self, name):
        self.problem = load_fixture(name)
        self.divisor = self.problem.divisor
        self.line = self.problem.line
        self.embedding = build_embedding(self.divisor)
        self._pres = None

    @property
    def presentation(self):
        if self._pres is None:
            self._pres = ideal_presentation(self.embedding, self.line, self.divisor, 6)
        return self._pres


@pytest.fixture(scope="session")
def d6():
    return Pipeline("d6")


@pytest.fixture(scope="session")
def pomega():
    return Pipeline("pomega")
