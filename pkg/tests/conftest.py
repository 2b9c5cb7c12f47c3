import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "ci",
    derandomize=True,
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("ci")


@pytest.fixture(scope="session")
def f1_presentation():
    from reeskit import PresentationInput, VarSet, matrix_from_strings

    ring = VarSet(("x", "y", "z"))
    matrix = matrix_from_strings(ring, [
        ["x", "0", "0"],
        ["-y", "y", "0"],
        ["0", "-(x+y)", "x+y"],
        ["0", "0", "-z"],
    ])
    return PresentationInput(ring, matrix, 1)


@pytest.fixture(scope="session")
def f1_report(f1_presentation):
    from reeskit import check_setting

    return check_setting(f1_presentation)


@pytest.fixture(scope="session")
def f1_context(f1_report):
    from reeskit import build_context

    return build_context(f1_report)


@pytest.fixture(scope="session")
def f2_presentation():
    from reeskit import PresentationInput, VarSet, matrix_from_strings

    ring = VarSet(("x", "y", "z"))
    matrix = matrix_from_strings(ring, [
        ["0", "0", "0"],
        ["x", "0", "0"],
        ["-y", "y", "0"],
        ["0", "-(x+y)", "x+y"],
        ["0", "0", "-z"],
    ])
    return PresentationInput(ring, matrix, 2)


@pytest.fixture(scope="session")
def f2_context(f2_presentation):
    from reeskit import build_context, check_setting

    return build_context(check_setting(f2_presentation))


@pytest.fixture(scope="session")
def ex39_presentation():
    from reeskit import PresentationInput, VarSet, matrix_from_strings

    ring = VarSet(("x1", "x2", "x3"))
    matrix = matrix_from_strings(ring, [
        ["x1", "x2", "x1", "x3"],
        ["x2", "x1", "x1-x3", "x1"],
        ["0", "x1", "x1-x2", "x1"],
        ["0", "x1", "x1", "x2"],
        ["0", "x2", "x1", "x1"],
    ])
    return PresentationInput(ring, matrix, 1)


@pytest.fixture(scope="session")
def ex38_presentation():
    from reeskit import PresentationInput, VarSet, matrix_from_strings

    ring = VarSet(("x1", "x2", "x3"))
    matrix = matrix_from_strings(ring, [
        ["x1-x2", "x2+x3", "0", "x1-x2"],
        ["0", "0", "x2", "0"],
        ["x2", "x3", "x2", "0"],
        ["x3", "0", "x2+x3", "x2"],
        ["x2+x3", "0", "x3", "x1"],
    ])
    return PresentationInput(ring, matrix, 1)
