import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from metric_menger.cnf import ParseError
from metric_menger.formats import parse_instance, parse_solution, write_instance, write_solution
from metric_menger.generators import random_mm_instance
from metric_menger.graph import Graph, MMInstance, MMPInstance

PATH_INSTANCE = "c a path\np mm 3 2 2 1\ne 1 2\ne 2 3\na 1\nz 3\n"


class TestInstances:
    def test_parse_example(self):
        inst = parse_instance(PATH_INSTANCE)
        assert isinstance(inst, MMInstance)
        assert inst.graph == Graph(3, [(0, 1), (1, 2)])
        assert inst.A == {0} and inst.Z == {2} and inst.r == 2 and inst.k == 1

    def test_canonical_output(self):
        inst = parse_instance("p mm 3 2 2 1\ne 3 2\ne 2 1\nz 3\na 1\n")
        assert write_instance(inst) == "p mm 3 2 2 1\ne 1 2\ne 2 3\na 1\nz 3\n"

    def test_comments_written(self):
        text = write_instance(parse_instance(PATH_INSTANCE), comments=["hello"])
        assert text.startswith("c hello\np mm")

    def test_random_roundtrip(self):
        rng = random.Random(3)
        for _ in range(100):
            inst = random_mm_instance(rng)
            text = write_instance(inst)
            again = parse_instance(text)
            assert again == inst and write_instance(again) == text

    def test_terminal_pairs(self):
        inst = parse_instance("p mmp 4 3 2 2\ne 1 2\ne 2 3\ne 3 4\nt 2 3 4\nt 1 1 2\n")
        assert isinstance(inst, MMPInstance) and inst.terminals == ((0, 1), (2, 3))
        assert parse_instance(write_instance(inst)) == inst

    @settings(max_examples=50, deadline=None)
    @given(st.integers(1, 8).flatmap(lambda n: st.tuples(
        st.just(n),
        st.sets(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)).filter(lambda e: e[0] < e[1])),
        st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), min_size=1, max_size=3),
        st.integers(1, 6),
    )))
    def test_terminal_pair_roundtrip(self, data):
        n, edges, terms, r = data
        inst = MMPInstance(Graph(n, edges), tuple(terms), r)
        assert parse_instance(write_instance(inst)) == inst

    @pytest.mark.parametrize(
        "text, line",
        [
            ("p mm 2 1 1 1\ne 1 3\n", 2),
            ("e 1 2\np mm 2 1 1 1\n", 1),
            ("p mm 2 1 1\n", 1),
            ("p mm 2 1 0 1\n", 1),
            ("p mm 2 1 1 1\np mm 2 1 1 1\n", 2),
            ("c x\np mm 2 1 1 1\ne 1 2\nq 1\n", 4),
            ("p mm 2 1 1 1\ne 1 x\n", 2),
            ("p mm 2 1 1 1\nt 1 1 2\n", 2),
            ("p mmp 2 0 1 1\nt 2 1 2\n", 2),
            ("p mmp 2 0 1 2\nt 1 1 2\nt 1 2 1\n", 3),
        ],
    )
    def test_errors_carry_line(self, text, line):
        with pytest.raises(ParseError) as info:
            parse_instance(text)
        assert info.value.line == line and str(info.value).startswith(f"line {line}:")

    @pytest.mark.parametrize(
        "text, match",
        [
            ("", "missing"),
            ("p mm 2 2 1 1\ne 1 2\n", "declares 2 edges"),
            ("p mm 2 1 1 1\ne 1 1\n", "loop"),
            ("p mmp 2 0 1 2\nt 1 1 2\n", "terminal pairs"),
        ],
    )
    def test_whole_file_errors(self, text, match):
        with pytest.raises(ParseError, match=match):
            parse_instance(text)


class TestSolutions:
    def test_yes(self):
        text = "s yes\nP 1 1 2 3\nP 2 5\n"
        assert parse_solution(text) == (True, ((0, 1, 2), (4,)))
        assert write_solution(*parse_solution(text)) == text

    def test_no(self):
        assert parse_solution("c nothing\ns no\n") == (False, None)
        assert write_solution(False) == "s no\n"

    def test_truncated(self):
        with pytest.raises(ParseError, match="truncated") as info:
            parse_solution("s yes\nP 1 1 2 3\nP 2 5 6")
        assert info.value.line == 3

    @pytest.mark.parametrize(
        "text, match",
        [
            ("P 1 1 2\ns yes\n", "preceding"),
            ("s no\nP 1 1\n", "preceding"),
            ("s yes\nP 2 1 2\n", "expected path 1"),
            ("s yes\nP 1\n", "without vertices"),
            ("s yes\nP 1 0 1\n", "1-indexed"),
            ("s maybe\n", "status"),
            ("s yes\ns no\n", "status"),
            ("s yes\n", "without any path"),
            ("c only\n", "missing"),
            ("s yes\nQ 1 2\n", "unexpected"),
        ],
    )
    def test_errors(self, text, match):
        with pytest.raises(ParseError, match=match):
            parse_solution(text)

    @settings(max_examples=80, deadline=None)
    @given(st.lists(st.lists(st.integers(0, 50), min_size=1, max_size=6), min_size=1, max_size=4))
    def test_roundtrip(self, paths):
        paths = tuple(tuple(p) for p in paths)
        assert parse_solution(write_solution(True, paths)) == (True, paths)
