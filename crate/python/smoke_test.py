"""Smoke test for the bergshape extension module.

Build and install first:
    pip install --no-build-isolation -e crates/python
"""

import math

import bergshape


def check(label, ok, detail=""):
    print(f"{'PASS' if ok else 'FAIL'} {label} {detail}".rstrip())
    if not ok:
        raise SystemExit(1)


def main():
    disk = bergshape.MomentMatrix.from_domain("disk", 21)
    check("disk area", abs(disk.area - math.pi) < 1e-15, f"{disk.area!r}")
    check("moment symmetry", disk[1, 2] == disk[2, 1].conjugate())

    fit = bergshape.reconstruct(disk, 20, 10)
    worst = max(abs(c) for c in fit.coeffs)
    check("disk exactness", abs(fit.b - 1) < 1e-12 and worst < 1e-12, f"b={fit.b!r}")

    csv = disk.to_csv()
    again = bergshape.MomentMatrix.from_csv(csv)
    check("csv round trip", again.to_csv() == csv)

    ellipse = bergshape.MomentMatrix.from_domain("ellipse(1.25,1.0)", 21)
    est = bergshape.reconstruct(ellipse, 20)
    exact = bergshape.LaurentMap.ellipse(1.25, 1.0)
    dist = bergshape.sup_distance(exact, est)
    check("ellipse sup distance", dist <= 0.05, f"{dist:.3e}")
    check("ellipse at w=i", abs(exact(1j) - 1j) < 1e-15)

    square = bergshape.MomentMatrix.from_domain([-1 - 1j, 1 - 1j, 1 + 1j, -1 + 1j], 10)
    check("square area", abs(square.area - 4) < 1e-15)

    h = bergshape.arnoldi(ellipse, 12)
    eig = sorted(h.eigenvalues(8), key=lambda z: (z.real, z.imag))
    zeros = sorted(bergshape.polynomial_zeros(h.recurrence_polynomial(8)), key=lambda z: (z.real, z.imag))
    check("eigenvalues match zeros", max(abs(a - b) for a, b in zip(eig, zeros)) < 1e-8)

    hypo = bergshape.LaurentMap.hypocycloid()
    roots = hypo.toeplitz(3).eigenvalues(3)
    check("hypocycloid Toeplitz", all(abs(abs(z) - 2 ** (-1 / 3)) < 1e-10 for z in roots))
    check("hypocycloid cusp", abs(hypo.curve(12)[0] - 1.5) < 1e-15)

    rows = bergshape.rate_table("triangle", [20, 30, 40], k=2)
    check("triangle rate table", len(rows) == 3 and rows[0]["s"] is not None and rows[-1]["s"] is None)
    check("triangle capacity error shrinks", abs(rows[2]["t"]) < abs(rows[0]["t"]))

    try:
        bergshape.reconstruct(disk, 5, 10)
    except ValueError as e:
        check("order check", "1 < m < n" in str(e))
    else:
        check("order check", False)

    mapped = bergshape.LaurentMap.from_json(est.to_json())
    check("laurent json round trip", bergshape.sup_distance(mapped, est) < 1e-30)


if __name__ == "__main__":
    main()
