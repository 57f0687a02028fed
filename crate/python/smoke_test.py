"""Smoke test for the compiled `dynperc` module.

Build and install first:  pip install --no-build-isolation ./crates/py
"""

import math

import dynperc


def main():
    theta = dynperc.solve_theta(2.0)
    assert abs(theta - 0.4063757) < 1e-6, theta
    assert abs(dynperc.giant_fraction(2.0) - 0.79681) < 1e-5

    assert dynperc.stationarity_residual(4, 2.0, 0.2) < 1e-10

    bound = dynperc.isolation_tail_bound(1000, 1e-5, 3e5)
    assert 0.0 < bound < 2.0

    curve = dynperc.mixing_curve(60, 2.0, 1.0, [1.0, 5.0, 20.0], replicas=400, seed=1, start_vertex=0)
    assert [t for t, _, _ in curve] == [1.0, 5.0, 20.0]
    assert all(0.0 <= v <= 1.0 and math.isfinite(se) for _, v, se in curve)
    assert curve[-1][1] <= curve[0][1]

    report = dynperc.structure(2000, 2.0, seed=1)
    assert report["is_good"] is True
    assert 0.7 < report["giant_size"] / 2000 < 0.9

    try:
        dynperc.solve_theta(-1.0)
    except ValueError:
        pass
    else:
        raise AssertionError("negative lambda must raise")

    print("dynperc smoke test passed")


if __name__ == "__main__":
    main()
