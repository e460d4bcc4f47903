import pytest

from matbeta._backend import active_backend, set_backend


@pytest.fixture
def backend_guard():
    """Restore the kernel backend after tests that switch it."""
    before = active_backend()
    yield
    set_backend(before)
