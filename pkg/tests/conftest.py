import pytest

from relserre.adelic.classify import ClassificationInput, adelic_image, is_relative_serre
from relserre.paperdata.labels import load_appendix

_IMAGES = {}
_RESULTS = {}


@pytest.fixture(scope="session")
def appendix():
    return load_appendix()


@pytest.fixture(scope="session")
def rows(appendix):
    return {r.name: r for r in appendix}


def classified(row):
    """Classification of an appendix row at its stated label (cached across the session)."""
    if row.name not in _RESULTS:
        inp = ClassificationInput(row.curve, row.label)
        _RESULTS[row.name] = (inp, is_relative_serre(inp))
    return _RESULTS[row.name]


def image_of(row):
    if row.name not in _IMAGES:
        inp, res = classified(row)
        _IMAGES[row.name] = adelic_image(inp, res)
    return _IMAGES[row.name]


ACCEPTANCE = {}


def record(criterion: int, ok: bool, detail: str) -> bool:
    line = f"criterion {criterion}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE.setdefault(criterion, []).append((ok, line))
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for c in sorted(ACCEPTANCE):
        entries = ACCEPTANCE[c]
        ok = all(e[0] for e in entries)
        terminalreporter.write_line(f"criterion {c}: {'PASS' if ok else 'FAIL'}")
        for _, line in entries:
            terminalreporter.write_line(f"    {line}")
