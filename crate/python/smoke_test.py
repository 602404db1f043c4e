"""Quick end-to-end check of the pyqrank extension module."""

import json

import pyqrank


def main():
    full = pyqrank.Code.full(2, 2, 2)
    assert full.dim == 4
    assert full.rank_distribution() == [1, 9, 6]
    assert full.enumerator() == "x^2 + 9*x*y + 6*y^2"

    zero = pyqrank.Code.zero(2, 2, 2)
    assert zero.macwilliams_dual_enumerator() == "x^2 + 9*x*y + 6*y^2"
    assert zero.dual() == full

    e11 = pyqrank.Code(2, 2, 2, [[[1, 0], [0, 0]]])
    assert e11.restrict([[1, 0]]) == e11
    assert e11.restrict([[0, 1]]).dim == 0

    p = full.polymatroid()
    assert p.ranks() == {"": 0, "0,1": 2, "1,0": 2, "1,1": 2, "1,0;0,1": 4}
    assert p.rank([[1, 1]]) == 2
    assert p.verify_axioms() == []
    assert p.rgf() == "X1^4 + 3*X1^2*X3 - 3*X1^2*X4 + X3^2 - 3*X3*X4 + 2*X4^2"
    assert ([4, 0, 0, 0], 1) in p.rgf_terms()

    code = pyqrank.Code.random(4, 2, 2, seed=7)
    reports = code.check()
    assert len(reports) == 8 and all(r.passed for r in reports), [str(r) for r in reports]
    assert pyqrank.Code.from_json(code.to_json()) == code
    assert json.loads(code.to_json(seed=7))["seed"] == 7

    assert pyqrank.gaussian_binomial(4, 2, 2) == 35
    assert pyqrank.moebius_coefficient(3, 2) == -8
    assert pyqrank.p_j_coeff(0, 1, 2, 2, 2) == 9
    assert pyqrank.count_subspaces(6, 2) == 2825
    assert pyqrank.gaussian_binomial(40, 20, 7) > 2**64

    try:
        pyqrank.Code.full(6, 2, 2)
    except ValueError:
        pass
    else:
        raise AssertionError("q = 6 should be rejected")

    print("pyqrank smoke test passed")


if __name__ == "__main__":
    main()
