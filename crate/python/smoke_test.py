"""Smoke test for the pyrigidlab extension module.

Build first with `cargo build -p rigidlab-py --release`. The script imports
`pyrigidlab` from the path if it is installed, and otherwise loads the
freshly built shared library from the cargo target directory.
"""

import importlib.util
import json
import shutil
import sys
import tempfile
from fractions import Fraction
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def load():
    try:
        import pyrigidlab

        return pyrigidlab
    except ImportError:
        pass
    for profile in ("release", "debug"):
        built = ROOT / "target" / profile / "libpyrigidlab.so"
        if built.exists():
            staged = Path(tempfile.mkdtemp()) / "pyrigidlab.so"
            shutil.copy(built, staged)
            spec = importlib.util.spec_from_file_location("pyrigidlab", staged)
            module = importlib.util.module_from_spec(spec)
            spec.loader.exec_module(module)
            return module
    sys.exit("pyrigidlab not found; run `cargo build -p rigidlab-py --release` first")


def main():
    rl = load()
    eq = [[0, 1, 1], [1, 0, 1], [1, 1, 0]]
    mu = [-2, 1, 1]

    assert rl.kr_norm(eq, mu) == "2"
    assert rl.kr_norm_via_dual(eq, mu) == "2"
    assert rl.hk(eq, mu) == "2"
    assert rl.dp(eq, mu) == "3/2"
    assert rl.dp(eq, [1, -1, 0]) == "1"

    half = [[0, Fraction(1, 2)], ["1/2", 0]]
    assert rl.kr_norm(half, [1, -1]) == "1/2"
    assert rl.wlr_check(half)
    assert not rl.dp_rigid(eq)

    extremal = rl.extremal_functions(eq)
    assert len(extremal) == 6 and ["0", "1", "1"] in extremal
    assert rl.rigidity_defect(eq) == "1/2"
    assert rl.rigidity_defect([[0, 3], [3, 0]]) == "0"

    bigger = rl.realize(eq, [0, 1, 2], ["0", "1", "0"])
    assert bigger[3][:3] == ["1/2", "3/2", "1/2"]
    assert rl.representability(bigger, [0, 1, 2], [0, 1, 0]) == "0"

    report = rl.lemma1([[0, 1, 3], [1, 0, 1], [3, 1, 0]])
    assert not report["is_metric"] and report["agreement"]
    assert report["coefficient_sum"] == "2/3"

    assert rl.cone_extremality([[0, 1], [1, 0]]) == (True, 1)
    assert rl.cone_extremality(eq)[1] == 3
    assert len(rl.katetov_extend(eq, [1, 1, 1])) == 4
    assert rl.random_metric(4, "integer-uniform", 3) == rl.random_metric(4, "integer-uniform", 3)

    for bad in ([0.5, -0.5], ["1/0", 0]):
        try:
            rl.kr_norm([[0, 1], [1, 0]], bad)
        except ValueError:
            pass
        else:
            raise AssertionError(f"{bad!r} should be rejected")
    try:
        rl.katetov_extend(eq, [0, 0, 0])
    except ValueError:
        pass
    else:
        raise AssertionError("inadmissible extension accepted")

    code, out, err = rl.run_cli(["--omit-timing", "search", "--target", "extremal-cone", "--n", "2", "--budget", "3"])
    assert code == 0, err
    assert json.loads(out)["results"]["hits"] == 3
    assert rl.run_cli(["norms", "--nope"])[0] == 2

    print("pyrigidlab smoke test passed")


if __name__ == "__main__":
    main()
