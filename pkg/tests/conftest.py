import pytest

from siegeleis import scalars


@pytest.fixture(autouse=True)
def _restore_precision():
    """CLI tests may change the working precision; keep tests independent."""
    saved = scalars.get_precision()
    yield
    scalars.set_precision(saved)
