import pytest

from ramseyforge._parallel import ENV_VAR, pmap, worker_count


def square(x):
    return x * x


def test_worker_count(monkeypatch):
    monkeypatch.delenv(ENV_VAR, raising=False)
    assert worker_count() == 1
    monkeypatch.setenv(ENV_VAR, "3")
    assert worker_count() == 3
    for bad in ("0", "-2", "many"):
        monkeypatch.setenv(ENV_VAR, bad)
        with pytest.raises(ValueError):
            worker_count()


@pytest.mark.parametrize("workers", ["1", "2", "4"])
def test_pmap_preserves_order(monkeypatch, workers):
    monkeypatch.setenv(ENV_VAR, workers)
    items = list(range(200, 0, -1))
    assert pmap(square, items) == [x * x for x in items]
    assert pmap(square, []) == []
