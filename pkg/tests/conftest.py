import pytest
from hypothesis import settings

from lexforge.config import PipelineConfig
from lexforge.corpus import load_tagged_text
from lexforge.pipeline import run_sides
from lexforge.synth import generate_fixture

# first calls may pay for loading the compiled DTW kernel
settings.register_profile("lexforge", deadline=None)
settings.load_profile("lexforge")

# filled by test_acceptance, printed at the end of the session
ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])


def sides_of(fx):
    return (load_tagged_text(" ".join(fx.source)),
            load_tagged_text(" ".join(fx.target), None))


@pytest.fixture(scope="session")
def fixture42():
    return generate_fixture(seed=42)


@pytest.fixture(scope="session")
def run42(fixture42):
    source, target = sides_of(fixture42)
    return run_sides(PipelineConfig(), source, target)


@pytest.fixture(scope="session")
def fixture_dir(tmp_path_factory, fixture42):
    out = tmp_path_factory.mktemp("fixture42")
    fixture42.write(out)
    return out
