import pytest

_RESULTS: list[tuple[int, bool, str]] = []


class _Recorder:
    def __init__(self, number):
        self.number = number

    def __call__(self, passed: bool, detail: str):
        line = f"criterion {self.number:2d}: {'PASS' if passed else 'FAIL'}  {detail}"
        _RESULTS.append((self.number, passed, line))
        print(line)
        assert passed, line


@pytest.fixture
def criterion(request):
    """``criterion(ok, detail)`` logs one pass/fail line and asserts ``ok``."""
    marker = request.node.get_closest_marker("criterion")
    return _Recorder(marker.args[0])


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for _, _, line in sorted(_RESULTS, key=lambda r: r[0]):
        terminalreporter.write_line(line)
