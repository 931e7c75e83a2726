import threading

import numpy as np
import pytest

from tlsnoise.random_streams import RandomStream


def test_same_address_gives_same_draws():
    a = RandomStream(5, (1, 2)).quantiles(10)
    b = RandomStream(5, (1, 2)).quantiles(10)
    np.testing.assert_array_equal(a, b)


def test_children_do_not_depend_on_consumption_order():
    root = RandomStream(5)
    first = root.child(0).quantiles(5)
    root.child(1).quantiles(1000)
    root.quantiles(3)
    np.testing.assert_array_equal(root.child(0).quantiles(5), first)


def test_siblings_differ():
    root = RandomStream(5)
    assert not np.array_equal(root.child(0).quantiles(5), root.child(1).quantiles(5))
    assert not np.array_equal(
        RandomStream(5).quantiles(5), RandomStream(6).quantiles(5)
    )


def test_child_key_extends_parent():
    assert RandomStream(5, (1,)).child(2, 3).key == (1, 2, 3)


def test_counter():
    stream = RandomStream(0)
    stream.quantiles()
    stream.quantiles(4)
    stream.normal(1.0, 3)
    stream.poisson(2.0)
    stream.coin()
    assert stream.counter == 10
    assert "counter=10" in repr(stream)


def test_draw_ranges():
    stream = RandomStream(1)
    q = stream.quantiles(1000)
    assert np.all((q >= 0) & (q < 1))
    assert isinstance(stream.poisson(3.0), int)
    assert isinstance(stream.coin(), bool)


def test_seeds_wrap_to_64_bits():
    assert RandomStream(-1).seed == 2**64 - 1
    np.testing.assert_array_equal(
        RandomStream(2**64 + 3).quantiles(4), RandomStream(3).quantiles(4)
    )


def test_rejects_non_integer_seeds():
    with pytest.raises(TypeError):
        RandomStream(1.5)  # type: ignore
    with pytest.raises(TypeError):
        RandomStream(True)


def test_draws_do_not_depend_on_threads():
    expected = [RandomStream(9, (k,)).quantiles(100) for k in range(8)]
    results = [np.empty(0)] * 8

    def draw(k: int) -> None:
        results[k] = RandomStream(9, (k,)).quantiles(100)

    threads = [threading.Thread(target=draw, args=(k,)) for k in range(8)]
    for thread in threads:
        thread.start()
    for thread in threads:
        thread.join()
    for k in range(8):
        np.testing.assert_array_equal(results[k], expected[k])
