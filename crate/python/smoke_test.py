"""Smoke test for the bbshift extension module.

Build and install first:
    maturin build --release -m crates/py/Cargo.toml -o dist && pip install dist/bbshift-*.whl
"""
import math

import bbshift


def close(a, b, rel):
    return abs(a - b) <= rel * abs(b)


def main():
    # free-electron level shift at room temperature, about 2.4 kHz
    hz = bbshift.rydberg_frequency_shift(300.0)
    assert 2.28e3 <= hz <= 2.52e3, hz

    g = 1e-6
    model = bbshift.ShiftModel(g)
    assert close(model.u1(1000.0), 4500.0, 1e-2)
    de = model.delta_e(500.0)
    assert de < 0 and close(de, -0.5 * math.pi * g * 500.0**2, 1e-2)
    df, bound = model.free_energy_shift(500.0)
    assert df > 0 and bound < 1e-6 * df

    rows = bbshift.sweep(1e-5, "10:1000:5:log", threads=2)
    assert [r.theta for r in rows] == sorted(r.theta for r in rows)
    assert all(r.delta_e < 0 < r.delta_f for r in rows)
    assert all(abs(r.thermo_residual) <= 1e-3 * abs(r.delta_e) for r in rows)

    csv = bbshift.sweep_csv(1e-5, "10:1000:5:log")
    assert csv.splitlines()[0].startswith("theta,u1,u2")
    assert csv == bbshift.sweep_csv(1e-5, "10:1000:5:log", threads=1)

    a = bbshift.polarizability(1.0, 1e-3)
    assert isinstance(a, complex) and close(a.imag, 1e3, 1e-12)
    n = bbshift.refractive_index(0.5, 1e-3, 1e-3)
    assert n.real > 1 and n.imag >= 0

    p = bbshift.reduce(1e15, 300.0)
    assert close(p["theta"], 3.93e-2, 2e-3) and close(p["g"], 6.26e-9, 2e-3)

    for bad in (lambda: bbshift.ShiftModel(0.1), lambda: bbshift.sweep(1e-5, "5:4:1")):
        try:
            bad()
        except ValueError:
            pass
        else:
            raise AssertionError("expected ValueError")

    print("bbshift", bbshift.__version__, "smoke test ok")


if __name__ == "__main__":
    main()
