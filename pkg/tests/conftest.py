import pytest

from pqcdse.catalog import default_catalog


@pytest.fixture(scope="session")
def catalog():
    return default_catalog()


@pytest.fixture(scope="session")
def catalog_by_id(catalog):
    return {t.id: t for t in catalog}
