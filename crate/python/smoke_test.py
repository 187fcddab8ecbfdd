"""Smoke test for the wittstone_py extension module.

Build the module first:

    cargo build --release -p wittstone-py --features extension-module

The script imports an installed `wittstone_py` if there is one, and otherwise loads the
shared library from target/release or target/debug.
"""

import importlib.machinery
import importlib.util
import json
import pathlib
import sys

ROOT = pathlib.Path(__file__).resolve().parent.parent


def load():
    try:
        import wittstone_py

        return wittstone_py
    except ImportError:
        pass
    for profile in ("release", "debug"):
        for name in ("libwittstone_py.so", "libwittstone_py.dylib", "wittstone_py.dll"):
            path = ROOT / "target" / profile / name
            if path.exists():
                loader = importlib.machinery.ExtensionFileLoader("wittstone_py", str(path))
                spec = importlib.util.spec_from_file_location("wittstone_py", path, loader=loader)
                module = importlib.util.module_from_spec(spec)
                loader.exec_module(module)
                return module
    sys.exit("wittstone_py not found; build it with --features extension-module")


def main():
    ws = load()

    # W_2(F_2) is Z/4: digits (a0, a1) stand for a0 + 2 a1
    for a in range(4):
        for b in range(4):
            s = ws.witt_add(2, [a % 2, a // 2], [b % 2, b // 2])
            assert s[0] + 2 * s[1] == (a + b) % 4, (a, b, s)

    cantor = ws.Tower.cantor(3)
    assert cantor.level_sizes() == [1, 2, 4, 8]
    assert cantor.is_replete()
    assert cantor.duality_round_trip(3, 2, 2)
    assert ws.Tower.from_json(cantor.to_json()).level_sizes() == cantor.level_sizes()

    algebra = ws.Algebra.functions(3, 2)
    assert algebra.is_p_boolean() and len(algebra.characters()) == 2

    assert ws.faithfully_flat(2, 2, [0, 1, 1])
    assert not ws.faithfully_flat(2, 2, [1, 1])

    report = json.loads(ws.verify(json.dumps({"criteria": [3, 6], "max_level_size": 2})))
    assert all(check["passed"] for check in report["checks"])
    assert "acceptance criterion: 4" in ws.explain("duality.roundtrip")

    try:
        ws.explain("nope")
    except ValueError:
        pass
    else:
        raise AssertionError("unknown check ids must raise")

    print(f"wittstone_py {ws.__version__}: smoke test passed ({len(report['checks'])} checks)")


if __name__ == "__main__":
    main()
