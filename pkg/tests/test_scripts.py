import subprocess
import sys
from pathlib import Path

import pytest

SCRIPTS = Path(__file__).resolve().parent.parent / "scripts"


@pytest.mark.parametrize("argv", [
    ["slope_table.py", "--m-list", "20", "40"],
    ["korsunov.py", "--letters", "2", "--n-list", "1", "3"],
    ["convergence.py", "--kinds", "stirling1", "--m-list", "50", "--paths", "5"],
])
def test_script_runs(argv):
    res = subprocess.run([sys.executable, str(SCRIPTS / argv[0]), *argv[1:]], capture_output=True, text=True,
                         cwd=SCRIPTS, check=False)
    assert res.returncode == 0, res.stderr
    assert res.stdout


def test_averaged_paths_script(tmp_path):
    res = subprocess.run([sys.executable, str(SCRIPTS / "averaged_paths.py"), "--m", "30", "--paths", "3",
                          "--kinds", "pascal", "--out-dir", str(tmp_path)], capture_output=True, text=True,
                         cwd=SCRIPTS, check=False)
    assert res.returncode == 0, res.stderr
    assert (tmp_path / "pascal_m30.csv").read_text().startswith("t_start,ell,j,t,mean,field_line\n")
