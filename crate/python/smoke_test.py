"""Quick check that the zklat_py extension imports and agrees with known values."""

import zklat_py as z


def main():
    names = z.catalog_names()
    assert "C_{12,32}" in names and "C_{5,48}" in names

    seed = z.Code.from_catalog("S_{4,8}")
    assert seed.modulus == 4 and seed.length == 8
    assert seed.is_self_dual() and seed.is_type_ii()
    assert seed.theta(8).agrees_with(z.e4(8))

    e8 = seed.construction_a()
    inv = e8.invariants()
    assert inv["even"] and inv["unimodular"]
    shells = dict(e8.shell_sizes(4))
    assert shells[(2, 1)] == 240 and shells[(4, 1)] == 2160
    assert e8.min_norm() == (2, 1)
    assert z.Lattice.from_text(e8.to_text()).same_lattice(e8)

    assert z.euclidean_weight([1, 2, 3], 4) == 1 + 4 + 1
    assert z.extremal_bound(32, 6) == 48
    assert z.extremal_defect(8, 1) == 224
    assert z.extremal_theta(24, 6).coeff(4) == 196560
    assert z.decompose_e4_delta(z.e4(6) * z.e4(6) * z.e4(6), 3, 1) == [1, 0]

    report = z.verify("C_{12,32}", certify_min_weight=True)
    assert report["checks"]["d_e"] == 48 and report["checks"]["extremal"] == "true"

    try:
        z.Code.from_catalog("NoSuchCode")
    except KeyError:
        pass
    else:
        raise AssertionError("missing catalog entry should raise KeyError")

    print("zklat_py smoke test passed")


if __name__ == "__main__":
    main()
