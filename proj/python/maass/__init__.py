"""Tetrahedral and octahedral parameters of prime level."""

import json

from ._core import (
    DomainError,
    IncompleteError,
    IntegrityError,
    UnsupportedError,
    census_primes,
    conductor_exponent,
    csv_columns,
    cubic_polynomial,
    cyclotomic_cubic_class_group,
    decompose,
    engine_version,
    form_class_group,
    shanks_a,
)
from ._core import census_record_json as _census_record_json


def census_record(kind, ell, grh=False, seed=0, budget=0.0, construct_fields=True):
    """Census record for one prime as a dict (same keys as the JSON store)."""
    return json.loads(_census_record_json(kind, ell, grh, seed, budget, construct_fields))


def tetra_record(ell, **kw):
    return census_record("tetra", ell, **kw)


def octa_record(ell, **kw):
    return census_record("octa", ell, **kw)


__all__ = [
    "DomainError",
    "IncompleteError",
    "IntegrityError",
    "UnsupportedError",
    "census_primes",
    "census_record",
    "conductor_exponent",
    "csv_columns",
    "cubic_polynomial",
    "cyclotomic_cubic_class_group",
    "decompose",
    "engine_version",
    "form_class_group",
    "octa_record",
    "shanks_a",
    "tetra_record",
]
