import pytest
from typer.testing import CliRunner

CROSSING_SDP = (
    "#SDP 2015\n"
    "#crossing\n"
    "1\tw1\t_\t_\t-\t+\t_\t_\t_\ta\t_\n"
    "2\tw2\t_\t_\t-\t+\t_\t_\t_\t_\t_\n"
    "3\tw3\t_\t_\t+\t+\t_\t_\t_\t_\t_\n"
    "4\tw4\t_\t_\t-\t-\t_\tb\t_\t_\tc\n"
    "5\tw5\t_\t_\t-\t+\t_\t_\td\t_\t_\n"
    "\n"
)


@pytest.fixture
def runner() -> CliRunner:
    return CliRunner()


@pytest.fixture
def crossing_sdp_file(tmp_path):
    path = tmp_path / "crossing.sdp"
    path.write_text(CROSSING_SDP, encoding="utf-8")
    return path
