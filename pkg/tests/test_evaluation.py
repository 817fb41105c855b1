import itertools

import numpy as np
import pytest

from layersynth.errors import EvaluationError, ShapeMismatchError
from layersynth.evaluation import confusion, metrics

from oracles import confusion_tally


def test_perfect_prediction():
    m = np.array([[0, 1], [2, 3]], dtype=np.uint8)
    cm = confusion(m, m)
    assert np.count_nonzero(cm - np.diag(np.diag(cm))) == 0
    r = metrics(cm)
    assert r.accuracy == 1.0
    for s in r.per_class.values():
        assert (s.precision, s.recall, s.f1) == (1.0, 1.0, 1.0)


def test_all_wrong_class():
    truth = np.full((2, 2), 1, dtype=np.uint8)
    pred = np.full((2, 2), 2, dtype=np.uint8)
    cm = confusion(pred, truth)
    assert cm[1, 2] == 4 and cm.sum() == 4


def test_hand_computed_four_pixels():
    truth = np.array([[1, 1], [1, 2]], dtype=np.uint8)
    pred = np.ones((2, 2), dtype=np.uint8)
    r = metrics(confusion(pred, truth))
    assert r.accuracy == 0.75
    t = r.per_class["text"]
    assert t.precision == 0.75 and t.recall == 1.0
    assert t.f1 == pytest.approx(6 / 7)  # 2 * .75 / 1.75
    f = r.per_class["figure"]
    assert (f.precision, f.recall, f.f1) == (0, 0, 0)
    assert r.macro_f1 == pytest.approx((6 / 7) / 3)
    assert r.zero_support == ["table"]


def test_all_background():
    z = np.zeros((3, 3), dtype=np.uint8)
    r = metrics(confusion(z, z))
    assert r.accuracy == 1.0
    assert (r.macro_precision, r.macro_recall, r.macro_f1) == (0, 0, 0)
    assert r.zero_support == ["text", "figure", "table"]


def test_absent_class_counts_zero_in_macro():
    m = np.array([[1, 2]], dtype=np.uint8)
    r = metrics(confusion(m, m))
    assert r.macro_f1 == pytest.approx(2 / 3)


def test_shape_mismatch():
    with pytest.raises(ShapeMismatchError, match=r"\(2, 3\).*\(3, 2\)"):
        confusion(np.zeros((2, 3)), np.zeros((3, 2)))


def test_zero_total():
    with pytest.raises(EvaluationError):
        metrics(np.zeros((4, 4), dtype=int))


def test_out_of_range_values():
    with pytest.raises(EvaluationError):
        confusion(np.full((2, 2), 4), np.zeros((2, 2), dtype=int))


def test_random_8x8_against_tally():
    rng = np.random.default_rng(0)
    for _ in range(200):
        p, t = rng.integers(0, 4, (2, 8, 8))
        assert np.array_equal(confusion(p, t), confusion_tally(p, t))


def test_exhaustive_small_binary_masks():
    # every 2x2 pair over {0, 1}; the 4x4 sweep lives in the acceptance suite
    masks = [np.array(b).reshape(2, 2) for b in itertools.product((0, 1), repeat=4)]
    for p in masks:
        for t in masks:
            assert np.array_equal(confusion(p, t), confusion_tally(p, t))


def test_invariants_hold():
    rng = np.random.default_rng(3)
    for _ in range(100):
        p, t = rng.integers(0, 4, (2, 6, 6))
        r = metrics(confusion(p, t))
        cm = confusion(p, t)
        assert r.accuracy == np.trace(cm) / cm.sum()
        for s in r.per_class.values():
            if s.precision + s.recall > 0:
                assert s.f1 == pytest.approx(2 * s.precision * s.recall / (s.precision + s.recall))
            else:
                assert s.f1 == 0
        assert metrics(confusion(t, t)).accuracy == 1.0


def test_permutation_consistency():
    rng = np.random.default_rng(4)
    names = ["text", "figure", "table"]
    for perm in itertools.permutations([1, 2, 3]):
        lut = np.array([0, *perm])
        p, t = rng.integers(0, 4, (2, 7, 7))
        a = metrics(confusion(p, t))
        b = metrics(confusion(lut[p], lut[t]))
        assert a.accuracy == b.accuracy
        for c in (1, 2, 3):
            sa = a.per_class[names[c - 1]]
            sb = b.per_class[names[lut[c] - 1]]
            assert (sa.precision, sa.recall, sa.f1) == (sb.precision, sb.recall, sb.f1)


def test_flipping_a_correct_pixel_never_raises_accuracy():
    rng = np.random.default_rng(6)
    for _ in range(200):
        p, t = rng.integers(0, 4, (2, 5, 5))
        correct = np.argwhere(p == t)
        if not len(correct):
            continue
        y, x = correct[rng.integers(len(correct))]
        q = p.copy()
        q[y, x] = (q[y, x] + 1 + rng.integers(3)) % 4
        assert metrics(confusion(q, t)).accuracy < metrics(confusion(p, t)).accuracy
