import random
import threading

import pytest

from datalog_types import *
from syntax import print_value


def random_tree(rng: random.Random, depth: int):
    if depth == 0 or rng.random() < 0.4:
        return rng.randint(-2, 3)
    symbol = rng.choice(["f", "g"])
    return symbol, tuple(random_tree(rng, depth - 1) for _ in range(rng.randint(0, 2)))


def intern_tree(tree) -> ValueId:
    if isinstance(tree, int):
        return intern_int(tree)
    symbol, args = tree
    return intern_ctor(symbol, *(intern_tree(a) for a in args))


def test_small_integers_are_preinterned_in_order():
    assert [intern_int(i) for i in range(5)] == [0, 1, 2, 3, 4]
    assert intern_int(1023) == 1023
    assert resolve(ValueId(7)) == IntLit(value=7)


def test_intern_is_idempotent():
    a = intern(IntLit(value=-40))
    assert intern(IntLit(value=-40)) == a
    pair = intern_ctor("pair", intern_int(1), intern_int(2))
    assert intern_ctor("pair", intern_int(1), intern_int(2)) == pair
    assert intern_ctor("pair", intern_int(2), intern_int(1)) != pair


def test_resolve_returns_the_interned_value():
    pair = intern_ctor("pair", intern_int(1), intern_int(2))
    value = resolve(pair)
    assert isinstance(value, Ctor)
    assert value.symbol == "pair"
    assert [resolve(a) for a in value.args] == [IntLit(value=1), IntLit(value=2)]


def test_resolve_unknown_id():
    with pytest.raises(InternerError):
        resolve(ValueId(10 ** 12))
    with pytest.raises(InternerError):
        resolve(ValueId(-1))


def test_constructor_with_unknown_argument():
    with pytest.raises(InternerError):
        intern(Ctor(symbol="f", args=(ValueId(10 ** 12),)))


def test_int_range():
    assert resolve(intern_int(I64_MAX)) == IntLit(value=I64_MAX)
    assert resolve(intern_int(I64_MIN)) == IntLit(value=I64_MIN)
    with pytest.raises(OverflowError):
        intern_int(I64_MAX + 1)


def test_interning_is_a_bijection_on_random_trees():
    rng = random.Random(11)
    trees = [random_tree(rng, 5) for _ in range(400)]
    ids = [intern_tree(t) for t in trees]
    for i in range(len(trees)):
        for j in range(i, len(trees)):
            assert (ids[i] == ids[j]) == (trees[i] == trees[j])


def test_concurrent_interning_hands_out_one_id():
    results: list[ValueId] = []
    lock = threading.Lock()
    barrier = threading.Barrier(8)

    def worker():
        barrier.wait()
        id_ = intern_ctor("concurrent", intern_int(123456789))
        with lock:
            results.append(id_)

    threads = [threading.Thread(target=worker) for _ in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert len(results) == 8
    assert len(set(results)) == 1


def test_canonical_order():
    one, minus = intern_int(1), intern_int(-5)
    big = intern_int(5000)
    ctor = intern_ctor("a", one)
    ordered = sorted([(ctor,), (big,), (one,), (minus,)], key=tuple_sort_key)
    assert ordered == [(minus,), (one,), (big,), (ctor,)]
    assert tuple_sort_key((one, ctor)) < tuple_sort_key((one, intern_ctor("b")))
    assert compare_values(intern_ctor("f", one), intern_ctor("f", one, one)) < 0
    assert compare_values(intern_ctor("f", intern_ctor("g", one), intern_int(2)),
                          intern_ctor("f", intern_ctor("g", one, intern_int(2)))) < 0
    assert compare_values(ctor, ctor) == 0


def chain(depth: int, innermost: int) -> ValueId:
    value = intern_ctor("conj", intern_ctor("true"), intern_int(innermost))
    for i in range(1, depth):
        value = intern_ctor("conj", value, intern_int(i))
    return value


def test_deep_values_print_and_compare():
    low, high = chain(3000, 0), chain(3000, 1)
    assert compare_values(low, high) < 0
    assert compare_values(high, low) > 0
    assert sorted([(high,), (low,)], key=tuple_sort_key) == [(low,), (high,)]
    text = print_value(low)
    assert text.startswith("@conj(" * 3000 + "@true(), 0), 1)")
    assert text.endswith(", 2999)")
    assert str(resolve(low)).startswith("conj(conj(conj(")
