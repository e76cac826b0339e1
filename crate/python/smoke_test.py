"""Smoke test for the `rado` Python module.

Build and install first:
    pip install maturin
    pip install --no-build-isolation -e crates/py
"""

import rado


def main():
    v = rado.decide([[1, 1, -1]])
    assert v["status"] == "PR-with-witness", v
    assert rado.verify(v)["sound"]

    cert = rado.refute([[1, 1, -3]])
    assert cert["p"] == 5
    assert rado.verify(cert)["sound"]
    assert rado.refute([[1, 1, -1]]) is None

    r = rado.search([[1, 1, -3]], {"kind": "cp", "p": 5}, {"kind": "positive", "n": 2000})
    assert not r["found"], r

    w = rado.witness([[1, 1, -1]], colours=2)
    assert w["set"] == [1, 2, 3, 4, 5]
    assert w["bad_colouring"] == [[1, 4], [2, 3]]

    n = rado.nonhom([[3, -1]], [2])
    assert n["status"] == "PR-with-witness" and n["constant"] == "1"

    h = rado.hmodule("nonprincipal-h", p=3)
    assert h["dim_h"] == 1 and h["representative_verified"]

    v = rado.decide({"ring": "mod:4[x]", "rows": [[1, 2]]})
    assert v["status"] == "NotPR-with-refutation", v

    try:
        rado.decide([[1, "x"]])
    except ValueError as e:
        assert "/matrix/0/1" in str(e)
    else:
        raise AssertionError("expected ValueError")

    print("python smoke test: ok")


if __name__ == "__main__":
    main()
