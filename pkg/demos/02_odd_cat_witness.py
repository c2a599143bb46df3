# Detecting non-Gaussianity of a lossy odd cat with optimal squeezing.
#
# The witness compares W(0) of the transformed state with the smallest value
# any Gaussian mixture with the same photon number can have. Squeezing does
# not move the origin, so the best squeeze is the one minimising the photon
# number, and that has a closed form.
import numpy as np

from catqng.optimize import optimize_odd, s_opt_analytic
from catqng.phase_space import CatParams
from catqng.witness import GaussianOp, witness_delta

alpha = 1.0
cat = CatParams.odd(alpha)

print(" eps     s_opt     delta(no op)     delta(s_opt)")
for eps in np.linspace(0.1, 0.9, 9):
    plain = witness_delta(cat, eps).delta
    best = optimize_odd(alpha, eps)
    print(f"{eps:4.1f}  {best.op.s:+.5f}  {plain:+.6e}  {best.delta:+.6e}")

# Without squeezing the witness turns positive around eps = 0.5; with it the
# witness stays negative up to full loss, only shrinking in magnitude.
report = witness_delta(cat, 0.95, GaussianOp(s_opt_analytic(alpha, 0.95)))
print("\nat eps = 0.95:", report.as_dict())
print("detects non-Gaussianity:", report.detects_qng)

# CLI equivalent:  catqng sweep-odd --alpha 0.5,1,1.5 --epsilon 0.01:0.99:99
