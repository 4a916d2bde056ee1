import pytest

from hqam.constellation import stretch, uniform_profile, validate_profile


@pytest.fixture
def qam16():
    return uniform_profile(2, 2)


@pytest.fixture
def qam128_stretched():
    return stretch(uniform_profile(3, 4), 2.0)


@pytest.fixture
def bpsk():
    return validate_profile([], [1.0])


# profiles used across modules; ids keep test names readable
PROFILES = {
    "bpsk": ([], [1.0]),
    "4pam": ([], [1.0, 2.0]),
    "qpsk": ([1.0], [1.0]),
    "8qam": ([1.0], [1.0, 2.0]),
    "8qam_r2": ([2.0], [1.0, 2.0]),
    "16qam": ([1.0, 2.0], [1.0, 2.0]),
    "32qam_irregular": ([0.7, 1.9], [0.3, 0.5, 1.3]),
    "64qam": ([1.0, 2.0, 4.0], [1.0, 2.0, 4.0]),
    "128qam_r2": ([2.0, 4.0, 8.0], [1.0, 2.0, 4.0, 8.0]),
    "128qam_r1.5": ([1.5, 3.0, 6.0], [1.0, 2.0, 4.0, 8.0]),
}


@pytest.fixture(params=sorted(PROFILES), ids=sorted(PROFILES))
def profile(request):
    i, q = PROFILES[request.param]
    return validate_profile(i, q)


def pytest_terminal_summary(terminalreporter):
    from tests.test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
