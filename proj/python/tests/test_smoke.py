import pytest

import maass


def test_tetra_163():
    r = maass.tetra_record(163)
    assert r["status"] == "ok"
    assert r["class_group"] == "(2,2)"
    assert r["n_forms"] == 1
    assert r["conductor_exponent"] == 1
    assert r["splitting"] == "3,1,4"
    assert r["shanks_a"] == 11


def test_class_groups():
    assert maass.cyclotomic_cubic_class_group(313)[:2] == ("(7)", "7")
    assert maass.cyclotomic_cubic_class_group(7687)[0] == "(2,2,2,2)"
    assert maass.form_class_group(2777) == "(3)"


def test_octa_2777():
    r = maass.octa_record(2777)
    assert r["n_forms"] == 3
    assert r["k_L"] == [2]


def test_census_primes():
    assert maass.census_primes("tetra", 2, 40) == [7, 13, 19, 31, 37]
    assert maass.census_primes("octa", 2, 30) == [5, 13, 17, 29]


def test_decompose():
    # sigma on U_2 + 1: e0 -> e1, e1 -> e0 + e1, e2 -> e2
    assert maass.decompose([[0, 1, 0], [1, 1, 0], [0, 0, 1]]) == (1, 1)


def test_conductor_and_errors():
    assert maass.conductor_exponent("A4", 163, 3, 1, 4) == 1
    assert maass.conductor_exponent("S4", 13, 2, 2, 6, 1) == 2
    with pytest.raises(NotImplementedError):
        maass.conductor_exponent("S4", 13, 2, 2, 6)
    with pytest.raises(ValueError):
        maass.census_primes("dihedral", 2, 10)
    assert maass.tetra_record(11)["status"] == "unsupported"


def test_csv_columns_match_record_keys():
    r = maass.tetra_record(7)
    assert set(maass.csv_columns("tetra")) == set(r)
    assert maass.shanks_a(163) == 11
    assert maass.shanks_a(277) is None
