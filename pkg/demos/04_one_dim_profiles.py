"""One-dimensional stationary analysis: fronts, first integral, quadrature.

Four short exercises on u'' + (u - u^3) - b = 0:

1. The b = 0 heteroclinic front is tanh(x / sqrt(2)), not tanh(x): the
   closed-form residual of each candidate makes the sqrt(2) width
   unambiguous.
2. Shooting from (u, u') = (0, 1/sqrt 2) reproduces the front to 1e-6.
3. The conserved quantity E = u'^2/2 - ((1-u^2)^2/4 + b u) drifts below
   1e-9 along integrated trajectories, and the implicit quadrature
   x(u) = int du / sqrt(2(C - F)) inverts the front.
4. Launching from (0, 0.5): the profile is concave up for b = +1 and
   concave down for b = -1 (the positive-b trajectory escapes; the
   integrator reports where).
"""

import pathlib

import numpy as np

import acsurf as ac
from acsurf.output import write_profile_csv

OUT = pathlib.Path(__file__).resolve().parent / "output"
OUT.mkdir(exist_ok=True)

x = np.linspace(-4.0, 4.0, 801)
print("front residuals |u'' + u - u^3| on [-4, 4]:")
print(f"  width sqrt(2): {np.abs(ac.tanh_front_residual(x, np.sqrt(2))).max():.2e}")
print(f"  width 1      : {np.abs(ac.tanh_front_residual(x, 1.0)).max():.2f}\n")

prof = ac.integrate_stationary(0.0, 1.0 / np.sqrt(2.0), 0.0, (0.0, 5.0))
ref, _ = ac.kink_profile(prof.x)
fi = ac.first_integral(prof)
print(f"shot front vs tanh(x/sqrt 2): max error {np.abs(prof.u - ref).max():.2e}")
print(f"first integral C = {fi.C:.2e}, drift = {fi.drift:.2e}")
write_profile_csv(OUT / "front_profile.csv", prof, fi.residuals,
                  comments=["b = 0", "u0 = 0", "du0 = 1/sqrt(2)"])

u_grid = np.linspace(-0.9, 0.9, 19)
x_of_u = ac.quadrature_solution(0.0, 0.0, 0.0, u_grid)
err = np.abs(x_of_u - np.sqrt(2.0) * np.arctanh(u_grid)).max()
print(f"quadrature inversion of the front: max error {err:.2e}\n")

for b in (1.0, -1.0):
    prof = ac.integrate_stationary(0.0, 0.5, b, (0.0, 4.0))
    sign = {1: "concave up", -1: "concave down", 0: "flat"}[ac.concavity_sign(prof)]
    note = ""
    if prof.blowup_x is not None:
        note = f" (escapes at x = {prof.blowup_x:.2f})"
    print(f"b = {b:+.0f}: {sign}{note}")
    fi = ac.first_integral(prof)
    write_profile_csv(OUT / f"profile_b{b:+.0f}.csv", prof, fi.residuals,
                      comments=[f"b = {b}", "u0 = 0", "du0 = 0.5"])

print(f"\nwrote CSV files to {OUT}")
