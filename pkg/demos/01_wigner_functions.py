# Wigner functions of odd and even cat states, with and without loss.
#
# Phase-space points are complex numbers lam = x + i p. Every function in
# catqng.phase_space accepts arrays, so a whole grid is one call.
import numpy as np

from catqng.phase_space import CatParams, cat_wigner, lossy_cat_wigner

odd = CatParams.odd(1.0)
even = CatParams.even(1.0)

# Parity pins the origin: -2/pi for the odd cat, +2/pi for the even one
print("odd  W(0) =", cat_wigner(odd, 0.0), " -2/pi =", -2 / np.pi)
print("even W(0) =", cat_wigner(even, 0.0), " +2/pi =", 2 / np.pi)

# A coarse character plot of the odd cat: '-' marks negative values
x = np.linspace(-2.5, 2.5, 41)
p = np.linspace(-1.5, 1.5, 15)
grid = x[None, :] + 1j * p[:, None]


def show(w):
    chars = np.where(w < -0.05, "-", np.where(w > 0.05, "#", np.where(w > 0.01, "+", ".")))
    print("\n".join("".join(row) for row in chars[::-1]))


print("\nodd cat, no loss")
show(cat_wigner(odd, grid))

# Loss washes the fringes out; at eps = 0.5 the origin is already positive
for eps in (0.2, 0.5, 1.0):
    print(f"\nodd cat, loss {eps}: W(0) = {lossy_cat_wigner(odd, eps, 0.0):+.5f}")
show(lossy_cat_wigner(odd, 0.5, grid))

# The same grid is available from the command line as plot-ready CSV:
#   catqng wigner-grid --alpha 1 --xi -1 --epsilon 0.5 --x-range=-3:3:61 --p-range=-3:3:61
