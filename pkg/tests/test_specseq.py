import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from cubeflow.diagram import named, unknot
from cubeflow.f2core import rank_of_rows
from cubeflow.khcube import build_complex, homology
from cubeflow.linkmat import signature_formula
from cubeflow.oracles import kauffman_jones
from cubeflow import specseq as S


def two_cell(t0=0, t1=1):
    return S.FilteredComplex((S.Generator(t0, 0), S.Generator(t1, 1)), (0b10, 0))


def test_pair_cancels_on_the_right_page():
    ps = S.pages(two_cell(0, 2), 3)
    assert [p.total() for p in ps] == [2, 2, 0]
    assert ps[1].d[(0, 0)].nrows == 1


def test_same_filtration_pair_cancels_at_once():
    assert S.pages(two_cell(1, 1), 1)[0].total() == 0


def test_filtration_must_not_drop():
    with pytest.raises(S.FiltrationError):
        two_cell(2, 1)


def test_parity_must_flip():
    with pytest.raises(S.FiltrationError):
        S.FilteredComplex((S.Generator(0, 0), S.Generator(1, 0)), (0b10, 0))


def test_d_squared_checked():
    gens = (S.Generator(0, 0), S.Generator(1, 1), S.Generator(2, 0))
    with pytest.raises(S.FiltrationError):
        S.FilteredComplex(gens, (0b010, 0b100, 0))


def test_size_mismatch():
    with pytest.raises(ValueError):
        S.FilteredComplex((S.Generator(0, 0),), (0, 0))


def test_json_round_trip(tmp_path):
    c = S.random_filtered_complex(random.Random(3), 12)
    p = tmp_path / "c.json"
    p.write_text(json.dumps(c.to_json()))
    assert S.load_complex(str(p)) == c


def test_json_ids_checked():
    with pytest.raises(ValueError):
        S.FilteredComplex.from_json({"generators": [{"id": 1, "t": 0, "delta": 0}], "d": []})


@given(st.integers(0, 10 ** 6), st.integers(1, 20), st.integers(1, 5))
def test_random_complex_converges_to_graded_homology(seed, n, span):
    c = S.random_filtered_complex(random.Random(seed), n, tspan=span)
    ps = S.pages(c, S.converged_r(c))
    assert ps[-1].ranks == S.e_infinity_bruteforce(c)
    assert ps[-1].total() == S.homology_ranks(c)


@given(st.integers(0, 10 ** 6), st.integers(1, 20))
def test_pages_are_homology_of_previous(seed, n):
    c = S.random_filtered_complex(random.Random(seed), n)
    ps = S.pages(c, S.converged_r(c))
    for a, b in zip(ps, ps[1:]):
        for (t, delta), m in a.d.items():
            assert (t + a.r, 1 - delta) in a.ranks
            assert m.nrows == a.ranks[(t, delta)]
            assert m.ncols == a.ranks[(t + a.r, 1 - delta)]
        for key, rank in a.ranks.items():
            out = rank_of_rows(a.d[key].rows) if key in a.d else 0
            src = (key[0] - a.r, 1 - key[1])
            inn = rank_of_rows(a.d[src].rows) if src in a.d else 0
            assert b.ranks.get(key, 0) == rank - out - inn
        for key in b.ranks:
            assert key in a.ranks


def test_khovanov_pages():
    for name in ("3_1", "4_1", "8_19"):
        d = named(name)
        ps = S.pages(S.from_pd(d), 3)
        table = homology(build_complex(d))
        assert ps[1].by_t_q() == table
        assert ps[2].ranks == ps[1].ranks


def test_unknot_pages():
    ps = S.pages(S.from_pd(unknot()), 2)
    assert ps[1].by_t_q() == {(0, 0): 1}


def test_page_polynomials_recover_jones_and_det():
    d = named("5_2")
    sigma, det, nul = signature_formula(d)
    e2 = S.pages(S.from_pd(d, sigma, nul), 2)[1]
    _, v, u = S.page_polynomials(e2)
    assert v == kauffman_jones(d)
    assert S.euler_characteristic_delta(e2, nul) == det
    assert list(u) == [Fraction(sigma, 2)]


def test_positive_nullity_gives_zero():
    e2 = S.pages(S.from_pd(named("3_1")), 2)[1]
    assert S.euler_characteristic_delta(e2, nullity=1) == 0


def test_page_polynomials_need_bigrading():
    with pytest.raises(ValueError):
        S.page_polynomials(S.pages(two_cell(), 1)[0])


def test_grading_bookkeeping():
    w = S.CobordismData(chi=-1, sigma=0, b1_in=0, b1_out=1)
    assert S.iota(w) == 0
    assert S.delta_check(Fraction(3), 1, 0, 0) == 1
    assert S.delta_check(Fraction(2), 1, 2, 1) == 0
    assert S.edge_shift(Fraction(1, 2), 0, 2) == Fraction(3, 2)
    with pytest.raises(ValueError):
        S.delta_check(Fraction(1, 2), 0, 1, 0)
