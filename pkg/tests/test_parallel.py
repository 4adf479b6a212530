import pytest

from lowsens.parallel import pmap, worker_count


def _square(x):
    return x * x


def test_pmap_preserves_order():
    items = list(range(50))
    assert pmap(_square, items, 1) == pmap(_square, items, 4) == [x * x for x in items]


def test_worker_count_from_env(monkeypatch):
    monkeypatch.setenv("THREADS", "3")
    assert worker_count() == 3
    monkeypatch.setenv("THREADS", "x")
    with pytest.raises(ValueError):
        worker_count()
    monkeypatch.delenv("THREADS")
    assert worker_count() >= 1
