import json
import math
from fractions import Fraction

import numpy as np
import pytest

from precycles import perm, recognize


def _twenty_cycle_powers():
    return [
        perm.Permutation(tuple(((i - 1 + j) % 20) + 1 for i in range(1, 21)))
        for j in range(1, 21)
    ]


def test_uniform_source_finds_and_verifies():
    src = recognize.UniformSource(20, "any", 42)
    out = recognize.run_recognizer(src, Fraction(1, 100))
    assert out.found
    assert out.prime is not None and 2 <= out.prime <= 17
    counts = perm.cycle_type(out.cycle).counts
    assert counts == {out.prime: 1, 1: 20 - out.prime}
    assert out.draws_used >= 1
    # the witness really is the claimed power
    order = math.lcm(*(len(c) for c in out.element.cycles()))
    h = perm.identity(20)
    for _ in range(out.exponent % order or order):
        h = perm.Permutation(
            tuple(out.element.images[x - 1] for x in h.images))
    assert h == out.cycle


def test_recognizer_deterministic():
    a = recognize.run_recognizer(
        recognize.UniformSource(20, "any", 7), Fraction(1, 100))
    b = recognize.run_recognizer(
        recognize.UniformSource(20, "any", 7), Fraction(1, 100))
    assert a.draws_used == b.draws_used
    assert a.prime == b.prime
    assert a.element == b.element
    assert a.exponent == b.exponent


def test_cycle_power_source_never_hits():
    src = recognize.ListSource(_twenty_cycle_powers(), 0)
    out = recognize.run_recognizer(src, Fraction(1, 100))
    assert out.status == "not_found"
    assert out.draws_used == 86


def test_identity_source_never_hits():
    src = recognize.ListSource([perm.identity(10)], 3)
    out = recognize.run_recognizer(src, Fraction(1, 10))
    assert out.status == "not_found"
    # ceil(log(1/10) / log(18/19)) = 43
    assert out.draws_used == 43


def test_epsilon_one_draws_nothing():
    src = recognize.ListSource([perm.identity(10)], 0)
    out = recognize.run_recognizer(src, 1)
    assert out.status == "not_found"
    assert out.draws_used == 0


def test_p_range_restricts_target():
    out = recognize.run_recognizer(
        recognize.UniformSource(30, "any", 11), Fraction(1, 1000),
        p_range=(7, 7))
    assert out.found and out.prime == 7
    out2 = recognize.run_recognizer(
        recognize.UniformSource(20, "any", 1), Fraction(1, 10),
        p_range=(4, 4))
    assert out2.status == "not_found"


def test_alt_source():
    src = recognize.UniformSource(21, "even", 5)
    out = recognize.run_recognizer(src, Fraction(1, 100))
    assert out.found
    assert perm.cycle_type(out.element).sign == 1


def test_degree_floor():
    with pytest.raises(ValueError):
        recognize.run_recognizer(
            recognize.UniformSource(6, "any", 0), Fraction(1, 10))


def test_list_source_validation():
    with pytest.raises(ValueError):
        recognize.ListSource([])
    with pytest.raises(ValueError):
        recognize.ListSource([perm.identity(3), perm.identity(4)])


def test_element_list_round_trip(tmp_path):
    rng = np.random.default_rng(8)
    elements = [perm.sample_uniform(12, "any", rng) for _ in range(25)]
    path = tmp_path / "draws.txt"
    recognize.save_element_list(elements, path)
    back = recognize.load_element_list(path)
    assert back == elements


def test_replay_source_bit_identical(tmp_path):
    rng = np.random.default_rng(31)
    elements = [perm.sample_uniform(15, "any", rng) for _ in range(200)]
    path = tmp_path / "draws.txt"
    recognize.save_element_list(elements, path)
    out1 = recognize.run_recognizer(
        recognize.ReplaySource(path), Fraction(1, 100))
    out2 = recognize.run_recognizer(
        recognize.ReplaySource(path), Fraction(1, 100))
    assert out1.status == out2.status
    assert out1.draws_used == out2.draws_used
    assert out1.element == out2.element
    assert out1.cycle == out2.cycle


def test_replay_exhaustion(tmp_path):
    path = tmp_path / "short.txt"
    recognize.save_element_list([perm.identity(10)] * 3, path)
    src = recognize.ReplaySource(path)
    with pytest.raises(recognize.SourceError, match="exhausted"):
        recognize.run_recognizer(src, Fraction(1, 100))
    src.reset()
    # budget 2 for epsilon 9/10 fits in the three recorded draws
    out = recognize.run_recognizer(src, Fraction(9, 10))
    assert out.status == "not_found"
    assert out.draws_used == 2


def test_replay_file_errors(tmp_path):
    empty = tmp_path / "empty.txt"
    empty.write_text("# only a comment\n")
    with pytest.raises(recognize.SourceError):
        recognize.ReplaySource(empty)
    mixed = tmp_path / "mixed.txt"
    mixed.write_text("1 2 3\n2 1\n")
    with pytest.raises(ValueError):
        recognize.ReplaySource(mixed)


def test_outcome_json():
    out = recognize.run_recognizer(
        recognize.UniformSource(20, "any", 42), Fraction(1, 100))
    d = out.to_json_dict()
    blob = json.loads(json.dumps(d, sort_keys=True))
    assert blob["status"] == "found"
    assert blob["epsilon"] == "1/100"
    assert blob["c0"] == "1/19"
    assert blob["degree"] == 20
    assert isinstance(blob["exponent"], int)
    assert blob["cycle"].startswith("(")
    missing = recognize.run_recognizer(
        recognize.ListSource([perm.identity(10)], 0), Fraction(1, 2))
    d2 = missing.to_json_dict()
    assert "prime" not in d2 and d2["status"] == "not_found"
