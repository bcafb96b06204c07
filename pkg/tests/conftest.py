import pytest

from apzeros.zerotable import load_bundled_certify_table, load_bundled_search_table


@pytest.fixture(scope="session")
def search_table():
    return load_bundled_search_table()


@pytest.fixture(scope="session")
def certify_table():
    return load_bundled_certify_table()


@pytest.fixture(scope="session")
def paper_candidate():
    from apzeros.search import Candidate

    return Candidate(14685.516156148412 + 0.0798324450j, 14685.5, 108, 1000)


@pytest.fixture(scope="session")
def paper_contour():
    """The corrected reproduction contour (bottom edge fixes the published
    transcription slip; see README)."""
    from fractions import Fraction

    u = Fraction(14685.516156148412)
    return (
        u - Fraction(1, 20),
        u + Fraction(1, 20),
        Fraction("0.0669574675"),
        Fraction("0.121953870"),
    )
