from pathlib import Path

import pytest

from oracles import ACCEPTANCE_LINES

from enverif.costmodel import load_model
from enverif.hcir import parse_program
from enverif.sizedtypes import parse_signatures

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"



def fixture_text(name):
    return (FIXTURES / name).read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def fixtures_dir():
    return FIXTURES


@pytest.fixture(scope="session")
def biquad():
    return (parse_program(fixture_text("biquad.hcir")),
            parse_signatures(fixture_text("biquad.sig")),
            load_model(fixture_text("biquad.json")))


@pytest.fixture(scope="session")
def list_sigs():
    return parse_signatures(fixture_text("lists.sig"))


@pytest.fixture(scope="session")
def programs():
    return {name: parse_program(fixture_text(f"{name}.hcir"))
            for name in ("append", "fact", "nrev")}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
