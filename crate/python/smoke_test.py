"""Smoke test for the `rpp` Python module.

Build and install first:

    pip install --no-build-isolation -e crates/py

then run `python3 python/smoke_test.py`.
"""

import cmath
import itertools
from fractions import Fraction

import rpp


def brute_bias(m, n, items):
    """Largest nontrivial character sum over Z_m^n, summed directly."""
    total = sum(c for _, c in items)
    worst = 0.0
    for a in itertools.product(range(m), repeat=n):
        if not any(a):
            continue
        s = sum(c * cmath.exp(2j * cmath.pi * sum(ai * xi for ai, xi in zip(a, x)) / m) for x, c in items)
        worst = max(worst, abs(s) / total)
    return worst


def brute_distance(x, members):
    return min(sum(a != b for a, b in zip(x, y)) for y in members)


def span_z2(gens, n):
    out = {tuple([0] * n)}
    for g in gens:
        out |= {tuple((a + b) % 2 for a, b in zip(y, g)) for y in out}
    return out


def main():
    z2, z3 = rpp.Group.cyclic(2), rpp.Group.cyclic(3)
    s3 = rpp.Group.symmetric(3)
    assert rpp.Group.abelian([2, 4]).order == 8
    assert s3.order == 6 and not s3.is_abelian()
    assert z3.mul([1, 2], [2, 2]) == [0, 1]
    assert z3.inverse([1, 2]) == [2, 1]

    space = rpp.BiasedSpace.construct(z3, 3, Fraction(1, 2))
    assert space.is_symmetric()
    bias = space.bias()
    assert bias <= 0.5 + 1e-9
    assert abs(bias - brute_bias(3, 3, space.items())) < 1e-9
    assert abs(space.spectral_gap_lambda() - min(bias, 1.0)) < 1e-9
    again = rpp.BiasedSpace.from_dict(space.to_dict())
    assert again.items() == space.items()

    # Every walk step stays inside the full group.
    assert abs(space.confinement([[1, 0, 0], [0, 1, 0], [0, 0, 1]], 4) - 1.0) < 1e-12

    assert rpp.perm_group_order(4, [[1, 0, 2, 3], [1, 2, 3, 0]]) == 24
    assert rpp.perm_member(4, [[1, 2, 3, 0]], [2, 3, 0, 1])
    assert not rpp.perm_member(4, [[1, 2, 3, 0]], [1, 0, 2, 3])

    assert rpp.subgroup_order(z2, 3, [[1, 1, 0]]) == 2
    dim = rpp.dimension(z2, 2, [[1, 1]])
    assert dim["order"] == 2 and dim["delta"] == 1.0
    assert rpp.distance(z2, [0, 1, 1], [[1, 1, 0]]) == 2

    sol = rpp.solve(z2, 4, [[1, 1, 1, 1]], 1)
    assert sol["x"] == [0, 1, 0, 1], sol["x"]
    assert rpp.verify(z2, 4, [[1, 1, 1, 1]], 1, sol)["distance"] == 2

    gens = [[1, 0, 1, 1, 0, 0, 0, 1], [0, 1, 1, 0, 1, 0, 1, 0]]
    sol = rpp.solve(z2, 8, gens, 2)
    assert brute_distance(sol["x"], span_z2(gens, 8)) > 2

    tampered = dict(sol, x=[0] * 8)
    try:
        rpp.verify(z2, 8, gens, 2, tampered)
    except ValueError:
        pass
    else:
        raise AssertionError("tampered solution accepted")

    print("python smoke test: ok")


if __name__ == "__main__":
    main()
