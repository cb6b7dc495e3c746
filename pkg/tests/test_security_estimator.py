import math

import pytest

from ranksign import security_estimator as se
from ranksign.params import PRESETS, TABLE1_ROWS


def test_row2_report():
    rep = se.full_report(PRESETS["table1-row2"])
    assert (rep.pk_bits, rep.sig_bits, rep.gvr) == (11520, 1728, 5)
    assert rep.attack_bits["ds"] == 80
    assert rep.best_attack == "ds"
    assert rep.density_exp == 0
    assert rep.lp_quoted == "110"
    keys = dict(rep.lines())
    assert keys["pk_bits"] == 11520 and keys["published_ds"] == 80


def test_ds_column():
    got = [se.ds_attack_bits(PRESETS[n]) for n in TABLE1_ROWS]
    assert got == [400, 80, 160, 104, 120, 164, 180]


@pytest.mark.parametrize("name", ["table1-row1", "table1-row2", "table1-row3", "table1-row4", "table1-row6"])
def test_sizes_match_table(name):
    assert se.sizes(PRESETS[name]) == se.TABLE1[name][2:4]


def test_augmented_gvr_column():
    for name in TABLE1_ROWS:
        assert se.full_report(PRESETS[name]).gvr == se.TABLE1[name][0]


def test_combinatorial_formula():
    # (n-k)^3 m^3 q^((r-1) floor((k+1)m/n)) by hand for a tiny case
    bits = se.combinatorial_attack_bits(10, 5, 6, 4, 2)
    assert bits == pytest.approx(math.log2(30**3 * 4 ** (1 * (6 * 6 // 10))))
    with pytest.raises(ValueError):
        se.combinatorial_attack_bits(10, 5, 6, 4, 0)


def test_dual_and_direct_attack_rows_1_to_4():
    # within the documented 16-bit tolerance on the rows where the formula applies
    for name in TABLE1_ROWS[:4]:
        p = PRESETS[name]
        pub = dict(zip(se.TABLE1_COLUMNS, se.TABLE1[name]))
        assert abs(se.dual_attack_bits(p) - pub["dual"]) <= 16
        assert abs(se.direct_attack_bits(p) - pub["da"]) <= 16


def test_app_rsd_threshold():
    assert se.app_rsd_threshold(18, 10, 18) == 8
    assert se.app_rsd_verdict(18, 10, 18, 8) == "easy"
    assert se.app_rsd_verdict(18, 10, 18, 6) == "hard"


def test_costs_are_non_negative_and_best_is_min():
    for name in PRESETS:
        rep = se.full_report(PRESETS[name])
        assert all(v >= 0 for v in rep.attack_bits.values())
        assert rep.attack_bits[rep.best_attack] == min(rep.attack_bits.values())


def test_toy_warning():
    rep = se.full_report(PRESETS["toy-q2"])
    assert any("80 bits" in note for note in rep.notes)
    assert any("below 128" in note for note in rep.notes)


def test_singleton_divergence_is_reported():
    rep = se.full_report(PRESETS["table1-row2"])
    assert rep.singleton == 9
    assert any("singleton" in note for note in rep.notes)


def test_encoded_sizes_in_report():
    rep = se.full_report(PRESETS["table1-row2"])
    assert rep.encoded_public_bytes == 6 + 2610
    assert rep.encoded_signature_bytes == 6 + 334
