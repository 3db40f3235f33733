"""Smoke test for the `dimer` extension module.

Build first:  cargo build -p dimer-py --features extension-module
Then run:     python3 python/smoke_test.py
"""

import importlib.machinery
import importlib.util
import json
import pathlib
import sys


def load_dimer():
    try:
        import dimer

        return dimer
    except ImportError:
        pass
    root = pathlib.Path(__file__).resolve().parent.parent
    for profile in ("release", "debug"):
        lib = root / "target" / profile / "libdimer.so"
        if lib.exists():
            loader = importlib.machinery.ExtensionFileLoader("dimer", str(lib))
            spec = importlib.util.spec_from_loader("dimer", loader)
            module = importlib.util.module_from_spec(spec)
            loader.exec_module(module)
            sys.modules["dimer"] = module
            return module
    sys.exit("dimer extension not found; build it with cargo first")


def main():
    dimer = load_dimer()
    conifold = dimer.Model.example("conifold")
    assert conifold.validate()["valid"]

    terms = conifold.charpoly()
    assert sorted((t["hx"], t["hy"], t["coeff"]) for t in terms) == [
        (0, 0, 1),
        (0, 1, 1),
        (1, 0, 1),
        (1, 1, 1),
    ]
    assert conifold.matchings()["count"] == 4
    assert len(conifold.quiver()["relations"]) == 4
    assert set(conifold.rcharge()["edges"].values()) == {"1/2"}

    fp = conifold.fixed_points()
    assert fp["count"] == 2 and fp["certificate"]["passed"]
    assert len(conifold.toric()["hilbert_basis"]) == 4

    again = dimer.Model.from_json(conifold.to_json())
    assert again.charpoly() == terms
    assert conifold.render() == again.render()

    assert not dimer.Model.example("degenerate").check()["non_degenerate"]
    try:
        dimer.Model.from_json(json.dumps({"vertices": [], "edges": [], "rotation": {}, "x": 1}))
    except ValueError:
        pass
    else:
        raise AssertionError("unknown field accepted")

    honeycomb = dimer.Model.example("honeycomb")
    assert honeycomb.fixed_points()["count"] == 1
    print("python smoke test: ok", conifold, honeycomb)


if __name__ == "__main__":
    main()
