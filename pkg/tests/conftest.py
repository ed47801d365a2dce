import pytest

from idealconv import build_factor_table


@pytest.fixture(scope="session")
def table_1e4():
    return build_factor_table(10_000)


@pytest.fixture(scope="session")
def table_1e6():
    return build_factor_table(1_000_000)
