import pytest

from depthtv import kernels


@pytest.fixture(params=kernels.available_backends())
def backend(request):
    """Run a test once per built kernel lane, restoring the default after."""
    previous = kernels.backend_name()
    kernels.set_backend(request.param)
    yield request.param
    kernels.set_backend(previous)
