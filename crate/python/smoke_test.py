"""Smoke test for the `entangle` extension module."""

import json
import sys

import entangle


def main():
    m = entangle.Mat2(1, 1, 0, 1, 6)
    assert m.order() == 6, m
    assert (m * m.inv()).rows() == [[1, 0], [0, 1]]

    g = entangle.Group.gl2(3)
    assert g.order == 48
    assert g.identify() == "GL2(3)", g.identify()

    ctx = entangle.Context.from_spec(json.dumps({"kind": "gl2", "modulus": 6}))
    assert ctx.order == 288 and ctx.d == 6
    assert ctx.entanglement_type() == "1"
    types = ctx.ent_set()
    assert types == ctx.ent_set("direct"), types
    assert "S3" in types and "Z/2" in types, types

    sigma, tau, ok = entangle.s3_witness(5)
    assert ok, (sigma, tau)
    assert entangle.gl2_gcd(2, 3) == 6

    try:
        entangle.Context.from_spec('{"kind": "gl2", "modulus": 7}')
    except ValueError:
        pass
    else:
        raise AssertionError("prime modulus should be rejected")

    code, out, _ = entangle.run(["type", "--spec", "fixture:gl2-3"])
    assert code == 2, code
    code, out, _ = entangle.run(["--no-cache", "ent-set", "--spec", "fixture:prod-gl2-2-gl2-3"])
    assert code == 0, code
    assert json.loads(out)["command"] == "ent-set"

    print("smoke test ok:", types)
    return 0


if __name__ == "__main__":
    sys.exit(main())
