import pytest
from hypothesis import given, strategies as st

from horsenet.surface_group import (WordError, abelianize, compose, conjugate, cyclic_reduce,
                                    format_word, free_reduce, homology_vector, invert, is_primitive,
                                    parse_word, power, primitive_root, reduced_words, relator,
                                    same_cyclic_word)


def words(genus=2, max_len=12):
    letters = [s * k for k in range(1, 2 * genus + 1) for s in (1, -1)]
    return st.lists(st.sampled_from(letters), max_size=max_len).map(lambda ls: free_reduce(ls, genus))


def test_parse_and_format_roundtrip():
    w = parse_word("a1 B1 a2 b2", 2)
    assert format_word(w) == "a1 B1 a2 b2"
    assert parse_word("1", 2).is_identity
    assert parse_word("", 3).is_identity


@pytest.mark.parametrize("text", ["a3", "x1", "a0", "a1 c2"])
def test_parse_rejects(text):
    with pytest.raises(WordError):
        parse_word(text, 2)


def test_free_reduction_cancels():
    assert parse_word("a1 A1 b1", 2) == parse_word("b1", 2)
    assert parse_word("a1 b2 B2 A1", 2).is_identity


def test_relator_abelianizes_to_zero():
    for g in (2, 3, 4):
        r = relator(g)
        assert len(r.letters) == 4 * g
        assert abelianize(r) == (0,) * (2 * g)


def test_abelianize_values():
    assert abelianize(parse_word("a1 a1 B2", 2)) == (2, 0, 0, -1)
    assert homology_vector(parse_word("a1 b1", 2), 4) == (0.25, 0.25, 0, 0)


@given(words(), words())
def test_abelianize_is_a_homomorphism(u, v):
    a, b, c = abelianize(u), abelianize(v), abelianize(compose(u, v))
    assert c == tuple(x + y for x, y in zip(a, b))


@given(words())
def test_inverse(w):
    assert compose(w, invert(w)).is_identity
    assert abelianize(invert(w)) == tuple(-x for x in abelianize(w))


@given(words(), words())
def test_conjugation_keeps_cyclic_word(w, c):
    assert same_cyclic_word(cyclic_reduce(w), cyclic_reduce(conjugate(w, c)))


@given(words(max_len=6), st.integers(1, 4))
def test_primitive_root_of_power(w, k):
    w = cyclic_reduce(w)
    if w.is_identity:
        return
    root, m = primitive_root(power(w, k))
    r0, m0 = primitive_root(w)
    assert m == k * m0
    assert same_cyclic_word(root, r0)
    assert is_primitive(root)


def test_reduced_word_count():
    # 4g letters, each next letter avoids one inverse: 8 * 7^(n-1) for g = 2
    for n in range(1, 4):
        assert sum(1 for w in reduced_words(2, n) if len(w.letters) == n) == 8 * 7 ** (n - 1)


def test_cyclic_reduce_strips_conjugation():
    assert cyclic_reduce(parse_word("b1 a1 a2 B1", 2)) == parse_word("a1 a2", 2)
