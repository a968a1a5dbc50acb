"""Smoke test for the hpt extension module.

Build and install it with `maturin build --release` in crates/py and
`pip install` the wheel, or `maturin develop` inside a virtualenv.
"""

import hpt


def circle():
    s = hpt.cochain_dga(["a", "b", "c"], [[0, 1], [1, 2], [0, 2]], arity=3)
    assert s.is_valid()
    c = hpt.Contraction.gaussian(s.complex)
    assert sorted(c.small.homology()) == [(0, 0, 1), (1, 0, 1)]
    assert all(v == 0 for v in c.check().values())
    res = hpt.transfer(c, s)
    assert all(n == 0 for _, n in res.verify())
    print("circle: small dim", c.small.dim, "m2 entries", len(res.structure.m(2)))


def massey():
    s, (x, y, z) = hpt.massey_instance(arity=3)
    c = hpt.Contraction.gaussian(s.complex)
    res = hpt.transfer(c, s)
    assert all(n == 0 for _, n in res.verify())
    t = res.structure
    r = dict(((frm, to), coeff) for frm, to, coeff in c.r())
    lift = lambda label: [(to, coeff) for (frm, to), coeff in r.items() if frm == label]
    nonzero, cls, indet = hpt.massey_triple(t, lift(x), lift(y), lift(z))
    assert nonzero and indet == 0
    print("massey: class", cls, "indeterminacy rank", indet)


def prime_field_pair():
    d = hpt.Complex([("x", 0, 1), ("y", 1, 1)], [("x", "y", "3")], field="Fp:7")
    c = hpt.Contraction.gaussian(d)
    assert c.small.dim == 0 and c.h() == [("y", "x", "5")]
    try:
        hpt.Complex([("x", 0, 0), ("y", 2, 0)], [("x", "y", "1")])
    except ValueError as e:
        print("rejected:", e)
    else:
        raise AssertionError("bidegree violation accepted")


def suite():
    rows = hpt.random_suite(seed=5, count=8, arity=4)
    for complex_, structure, contraction in rows:
        if structure is None:
            continue
        res = hpt.transfer(contraction, structure)
        assert all(n == 0 for _, n in res.verify())
    print("suite: %d instances transferred" % len(rows))


if __name__ == "__main__":
    circle()
    massey()
    prime_field_pair()
    suite()
    print("ok")
