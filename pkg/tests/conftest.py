import pytest
from importlib import resources

from toxlex import Lexicon, compile_lexicon, parse_lexicon


@pytest.fixture(scope="session")
def demo_tsv() -> str:
    return resources.files("toxlex.data").joinpath("demo_lexicon.tsv").read_text("utf-8")


@pytest.fixture(scope="session")
def demo_lexicon(demo_tsv) -> Lexicon:
    return parse_lexicon(demo_tsv)


@pytest.fixture(scope="session")
def demo_compiled(demo_lexicon):
    return compile_lexicon(demo_lexicon)


@pytest.fixture(scope="session")
def secret() -> bytes:
    return bytes(range(32))


# Expose each test's outcome on the item so the acceptance module can print
# one PASS/FAIL line per criterion.
@pytest.hookimpl(tryfirst=True, hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    setattr(item, f"rep_{report.when}", report)
