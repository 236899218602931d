#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Fixtures partagées par la suite de tests.
"""

import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

from measures.finite_space import FiniteSpace, ProbMeasure, uniform  # noqa: E402
from transport.cost import hamming, line_metric  # noqa: E402


@pytest.fixture
def two_points() -> FiniteSpace:
    return FiniteSpace(2)


@pytest.fixture
def uniform2(two_points) -> ProbMeasure:
    return uniform(two_points)


@pytest.fixture
def hamming2(two_points):
    return hamming(two_points)


@pytest.fixture
def line3():
    return line_metric(FiniteSpace(3))


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)
