import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lattice_llt import (
    DegenerateLaw,
    LatticePmf,
    NonMaximalSpan,
    SumNotOne,
    normalize_span,
    validate,
)
from lattice_llt.lattice import load_pmf


def test_validate_coin(coin):
    s = validate(coin)
    assert (s.mu, s.sigma2, s.vartheta, s.basber) == (0.5, 0.25, 0.5, True)


def test_validate_three_point(three):
    s = validate(three)
    # 0.3*1 + 0.2*2 ; 0.5*0.49 + 0.3*0.09 + 0.2*1.69
    assert s.mu == pytest.approx(0.7, abs=1e-15)
    assert s.sigma2 == pytest.approx(0.61, abs=1e-15)
    assert s.vartheta == pytest.approx(0.5, abs=1e-15)
    assert s.basber


def test_non_maximal_span_rejected():
    with pytest.raises(NonMaximalSpan):
        validate(LatticePmf(0, 1, {0: 0.5, 2: 0.5}))


def test_gapped_support_has_no_bernoulli_part():
    s = validate(LatticePmf(0, 1, {0: 0.3, 2: 0.3, 5: 0.4}))
    assert s.vartheta == 0 and not s.basber


def test_mass_tolerance():
    with pytest.raises(SumNotOne):
        LatticePmf(0, 1, {0: 0.5, 1: 0.499})
    pmf = LatticePmf(0, 1, {0: 0.5, 1: 0.5 + 5e-13})
    assert math.fsum(pmf.probs.values()) == pytest.approx(1.0, abs=1e-15)


def test_degenerate():
    with pytest.raises(DegenerateLaw):
        validate(LatticePmf(0, 1, {3: 1.0}))
    with pytest.raises(DegenerateLaw):
        normalize_span(LatticePmf(0, 1, {3: 1.0}))


def test_zero_masses_dropped():
    pmf = LatticePmf(0, 1, {0: 0.5, 1: 0.0, 2: 0.5})
    assert list(pmf.probs) == [0, 2]


@pytest.mark.parametrize(
    "pmf, expected",
    [
        (LatticePmf(0, 1, {0: 0.5, 2: 0.5}), LatticePmf(0, 2, {0: 0.5, 1: 0.5})),
        (LatticePmf(1, 0.5, {0: 1 / 3, 1: 1 / 3, 2: 1 / 3}), LatticePmf(1, 0.5, {0: 1 / 3, 1: 1 / 3, 2: 1 / 3})),
        (LatticePmf(0, 1, {1: 0.5, 4: 0.5}), LatticePmf(1, 3, {0: 0.5, 1: 0.5})),
    ],
)
def test_normalize_span(pmf, expected):
    assert normalize_span(pmf) == expected


def test_load_pmf(tmp_path):
    path = tmp_path / "p.json"
    path.write_text('{"v0": 0, "D": 1, "probs": {"0": 0.5, "1": 0.3, "2": 0.2}}')
    assert load_pmf(path) == LatticePmf(0, 1, {0: 0.5, 1: 0.3, 2: 0.2})


def test_bad_inputs():
    with pytest.raises(ValueError):
        LatticePmf(0, -1, {0: 1.0})
    with pytest.raises(ValueError):
        LatticePmf(0, 1, {0: 1.5, 1: -0.5})
    with pytest.raises(ValueError):
        LatticePmf(0, 1, {})


laws = st.builds(
    lambda offs, w, v0, D: LatticePmf(v0, D, dict(zip(sorted(offs), (np.array(w[: len(offs)]) / sum(w[: len(offs)])).tolist()))),
    st.sets(st.integers(-10, 10), min_size=2, max_size=6),
    st.lists(st.floats(0.01, 1.0), min_size=6, max_size=6),
    st.floats(-5, 5),
    st.floats(0.1, 4),
)


@settings(max_examples=200, deadline=None)
@given(laws)
def test_vartheta_bounds_and_basber(pmf):
    s = validate(normalize_span(pmf))
    assert 0 <= s.vartheta < 1
    assert s.basber == (s.vartheta > 0)


@settings(max_examples=200, deadline=None)
@given(laws)
def test_normalize_idempotent_and_law_preserving(pmf):
    once = normalize_span(pmf)
    assert normalize_span(once) == once
    orig, new = pmf.as_values(), once.as_values()
    assert sorted(orig.values()) == sorted(new.values())
    for x_new, p in new.items():
        assert any(abs(x_new - x) < 1e-9 and q == p for x, q in orig.items())
