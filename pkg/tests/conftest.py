"""Shared fixtures: the shipped presentations and measures, loaded once per test."""

import pytest

import guardrails
from fixtures import fixture_path
from markov_measures import load_measure_file
from shift_core import load_presentation_file, tmc_from_blocks


def load_fixture(name):
    return load_presentation_file(fixture_path(name))


@pytest.fixture(autouse=True)
def no_ledger():
    # a SOFICLAB_LEDGER_DB from the environment must not collect test runs
    guardrails.configure(None)
    yield
    guardrails.configure(None)


@pytest.fixture
def goldenmean():
    return load_fixture("goldenmean")


@pytest.fixture
def goldenmean_sft():
    return load_fixture("goldenmean_sft")


@pytest.fixture
def even():
    return load_fixture("even")


@pytest.fixture
def xnot():
    return load_fixture("xnot")


@pytest.fixture
def full_a():
    return load_fixture("full_a")


@pytest.fixture
def full_ab():
    return load_fixture("full_ab")


@pytest.fixture
def three_cycle():
    return load_fixture("three_cycle")


@pytest.fixture
def period2():
    return load_fixture("period2")


@pytest.fixture
def two_loops():
    return load_fixture("two_loops")


@pytest.fixture
def one_way():
    return load_fixture("one_way")


@pytest.fixture
def full_binary():
    return tmc_from_blocks(["0", "1"], [("0", "0"), ("0", "1"), ("1", "0"), ("1", "1")])


@pytest.fixture
def goldenmean_chain():
    return load_measure_file(fixture_path("goldenmean_chain"))


@pytest.fixture
def even_hmm():
    return load_measure_file(fixture_path("even_hmm"))


@pytest.fixture
def two_loops_chain():
    return load_measure_file(fixture_path("two_loops_chain"))


@pytest.fixture
def period2_chain():
    return load_measure_file(fixture_path("period2_chain"))
