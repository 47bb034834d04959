import json

import pytest

from pencilpairs.varieties import default_catalog

A2 = {
    "n": 2,
    "gram": [[-2, 1], [1, -2]],
    "spheres": [{"id": "e1", "v": [1, 0]}, {"id": "e2", "v": [0, 1]}],
    "relations": [{"a": "e1", "b": "e2", "rel": "one_point"}],
}


@pytest.fixture(scope="session")
def catalog():
    return default_catalog()


@pytest.fixture
def a2_path(tmp_path):
    p = tmp_path / "a2.json"
    p.write_text(json.dumps(A2), encoding="utf-8")
    return p
