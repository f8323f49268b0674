"""Build the extension module and exercise it from Python.

    python3 python/smoke_test.py [path/to/liblooplab_py.so]

Without an argument the module is built with cargo (release profile).
"""

import importlib.util
import json
import shutil
import subprocess
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def load(lib):
    if lib is None:
        subprocess.run(
            ["cargo", "build", "--release", "-p", "looplab-py", "--features", "extension-module"],
            cwd=ROOT,
            check=True,
        )
        lib = ROOT / "target" / "release" / "liblooplab_py.so"
    tmp = Path(tempfile.mkdtemp()) / "looplab.so"
    shutil.copy(lib, tmp)
    spec = importlib.util.spec_from_file_location("looplab", tmp)
    mod = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(mod)
    return mod


def main():
    ll = load(sys.argv[1] if len(sys.argv) > 1 else None)

    binary = ll.Law("binary")
    geo = ll.Law('{"kind": "geometric", "p": 0.5}')
    assert binary.is_critical() and abs(geo.mean - 1.0) < 1e-12
    assert binary.c_mu() == 1.0 and abs(geo.c_mu() - 4 / 3) < 1e-12
    assert binary.c_bar_mu() == 0.5
    assert abs(geo.b_n([100])[0] - 10.0) < 1e-12

    t = ll.sample_tree(binary, 9, seed=1)
    assert len(t) == 9 and sum(t.degrees) == 8
    assert ll.Tree.from_dsv1(t.to_dsv1()) == t
    assert t.mirror().mirror() == t
    w = t.lukasiewicz()
    assert w[0] == 0 and w[-1] == -1 and min(w[:-1]) >= 0
    assert ll.sample_tree(binary, 9, seed=1) == t

    tau = ll.Tree([2, 1, 0, 0])
    lt = tau.looptree()
    assert lt.vertex_count() == 4 and lt.largest_cycle() == (3, 0)
    assert tau.hcirc() == lt.profile_hcirc()
    assert lt.dist(3, 2) == 2
    assert len(tau.looptree("loop-bar").class_of()) == 4

    big = ll.sample_tree(geo, 2000, seed=2)
    v = len(big) - 1
    sk = big.trunk(v)
    assert sk.h == big.depths[v]
    tree, tip = sk.to_tree()
    assert tree.leaf_count() == sk.leaf_count()

    star = ll.sample_trunk_star(geo, 10, seed=3)
    assert star.leaf_count() == sum(star.child_counts) - star.h + 1

    heavy = ll.Law("heavy-tail")
    path = ll.sample_walk(heavy, 50, seed=4, n=40)
    assert min(path[1:40]) >= 0

    for n in range(1, 9):
        a, b = ll.kemperman(geo, n)
        assert abs(a - b) < 1e-12
    assert ll.bias_identity(geo, 6) < 1e-10
    assert ll.ks_two_sample([1.0, 2.0], [3.0, 4.0]) == 1.0

    try:
        ll.sample_tree(binary, 4, seed=0)
    except ValueError as e:
        assert "feasible" in str(e)
    else:
        raise AssertionError("infeasible size accepted")

    records = ll.run_suite("exact-identities", 7)
    assert records and all(r["pass"] for r in records if r["gate"])
    print(json.dumps({"module": ll.__version__, "suites": ll.SUITES, "records": len(records)}))
    print("smoke test ok")


if __name__ == "__main__":
    main()
