"""Cached pipeline runs shared across test modules."""

from __future__ import annotations

from functools import lru_cache

from telesigma.bilinear_form import BilinearData
from telesigma.curve_model import build_curve
from telesigma.local_expansion import ExpansionSet
from telesigma.pipeline import bilinear_cap
from telesigma.semigroup import validate_telescopic
from telesigma.sigma_series import sigma


@lru_cache(maxsize=None)
def td_of(a):
    return validate_telescopic(a)


@lru_cache(maxsize=None)
def expansion(a, b=None, active=None):
    td = td_of(a)
    return ExpansionSet(build_curve(td, active), b)


@lru_cache(maxsize=None)
def bilinear(a, W, b=None, active=None, cap=None):
    es = expansion(a, b, active)
    return BilinearData(es, bilinear_cap(es.td, W) if cap is None else cap)


@lru_cache(maxsize=None)
def sigma_run(a, W, b=None, active=None):
    es = expansion(a, b, active)
    return sigma(es, bilinear(a, W, b, active).q, W)
