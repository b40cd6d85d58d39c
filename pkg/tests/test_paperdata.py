import shutil

import pytest

from relserre.errors import DataIntegrityError, ParseError
from relserre.fingroup import gl2, reduce_mod
from relserre.modmat import gl2_order
from relserre.paperdata import (
    ADELIC_INDEX, S_G, TwoAdicLabel, builtin_group, data_dir, labeled_group, load_appendix, load_groups,
    obstruction_of_label,
)
from relserre.paperdata.groups import parse_groups_dat
from relserre.paperdata.verify import commutator_indices, verify_2b_mod4_facts, verify_sg_membership


def test_label_parsing():
    lab = TwoAdicLabel.parse("8.24.0.5")
    assert (lab.level, lab.index, str(lab)) == (8, 24, "8.24.0.5")
    for bad in ("8.24.0", "3.6.0.1", "a.b.c.d"):
        with pytest.raises(ParseError):
            TwoAdicLabel.parse(bad)


def test_s_sets():
    assert [len(S_G[g]) for g in ("2Cs", "2B", "2Cn")] == [15, 7, 3]
    assert obstruction_of_label("4.4.0.2") == "2Cn"
    with pytest.raises(ParseError):
        obstruction_of_label("2.6.0.2")


def test_appendix_table():
    rows = load_appendix()
    assert len(rows) == 25
    assert sum(r.obstruction == "2Cs" for r in rows) == 15
    assert {r.name: r.m_E for r in rows}["315.a2"] == 420
    assert all(r.correction is None for r in rows if r.obstruction == "2Cs")


def test_builtin_groups():
    assert builtin_group("2.6.0.1").order == 256
    assert builtin_group("2Cs-hat(8)").order == gl2_order(8) // 6
    assert builtin_group("GL2(Z/4)").same_set(gl2(4))
    assert builtin_group("K₁").order == 24
    with pytest.raises(ParseError):
        builtin_group("nope")


def test_labeled_groups_consistent():
    for g, labels in S_G.items():
        for label in labels:
            H = labeled_group(label).slice
            assert gl2_order(8) // H.order == TwoAdicLabel.parse(label).index
            assert reduce_mod(H, 2).same_set(load_groups()[g])
    assert ADELIC_INDEX == {"2Cs": 48, "2B": 12, "2Cn": 12}


def test_parse_groups_dat_errors():
    with pytest.raises(DataIntegrityError):
        parse_groups_dat("2B\n")
    with pytest.raises(DataIntegrityError):
        parse_groups_dat("2B 2 1,1,0,1\n2B 2 1,1,0,1\n")
    with pytest.raises(DataIntegrityError):
        parse_groups_dat("X 4 1,2,x,4\n")


def _tampered(tmp_path, label, new_line):
    d = tmp_path / "data"
    shutil.copytree(data_dir(), d)
    lines = (d / "groups.dat").read_text().splitlines()
    lines = [new_line if ln.split(" ", 1)[0] == label else ln for ln in lines]
    (d / "groups.dat").write_text("\n".join(lines) + "\n")
    return d


def test_tampered_data_is_rejected(tmp_path):
    d = _tampered(tmp_path, "8.24.0.5", "8.24.0.5 8 7,2,4,5;3,0,2,3")
    with pytest.raises(DataIntegrityError):
        load_groups(d)


def test_verify_small_suites():
    assert commutator_indices() == {"2Cs": 48, "2B": 12, "2Cn": 12}
    assert verify_sg_membership().ok
    assert verify_2b_mod4_facts().ok
