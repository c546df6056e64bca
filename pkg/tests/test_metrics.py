import pytest

from sste.classifiers import confusion_matrix, evaluate


def test_hand_confusion_fixture():
    result = evaluate([1, 1, 0, 0], [1, 0, 0, 0])
    assert result.accuracy == 0.75
    assert result.precision == 1.0
    assert result.recall == 0.5
    assert result.f1 == pytest.approx(2 / 3, abs=1e-15)
    assert result.confusion == ((2, 0), (1, 1))


def test_perfect_prediction():
    result = evaluate([0, 1, 1, 0], [0, 1, 1, 0])
    assert result.accuracy == 1.0
    assert result.f1 == 1.0


def test_all_wrong_balanced():
    result = evaluate([0, 0, 1, 1], [1, 1, 0, 0])
    assert result.accuracy == 0.0
    assert result.f1 == 0.0


def test_length_mismatch():
    with pytest.raises(ValueError, match="length mismatch"):
        evaluate([0, 1], [0])


def test_empty_rejected():
    with pytest.raises(ValueError, match="empty"):
        evaluate([], [])


def test_confusion_layout():
    matrix = confusion_matrix([0, 0, 1, 1, 1], [0, 1, 1, 1, 0])
    assert matrix.tolist() == [[1, 1], [1, 2]]
    assert matrix.sum() == 5


def test_fake_is_positive_class():
    # All predictions fake: recall 1, precision = base rate.
    result = evaluate([0, 0, 1], [1, 1, 1])
    assert result.recall == 1.0
    assert result.precision == pytest.approx(1 / 3, abs=1e-15)
    assert result.f1 == pytest.approx(0.5, abs=1e-15)


def test_degenerate_no_predicted_positives():
    result = evaluate([1, 1, 0], [0, 0, 0])
    assert result.precision == 0.0
    assert result.recall == 0.0
    assert result.f1 == 0.0
