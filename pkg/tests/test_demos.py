import pathlib
import subprocess
import sys

import pytest

DEMOS = pathlib.Path(__file__).resolve().parent.parent / "demos"


@pytest.mark.parametrize("script,args,expect", [
    ("01_exact_limit.py", [], "arccos(3/4)/pi    = 0.230053456162616"),
    ("02_method_comparison.py", ["1"], "0.132809509896688"),
    ("03_mahler_measures.py", [], "M(Lehmer) = 1.1762808182"),
    ("04_root_plot.py", ["20", "plot.svg"], "wrote plot.svg"),
])
def test_demo_runs(script, args, expect, tmp_path):
    r = subprocess.run([sys.executable, str(DEMOS / script), *args], cwd=tmp_path,
                       capture_output=True, text=True, check=False)
    assert r.returncode == 0, r.stderr
    assert expect in r.stdout
