# Cross-checking the closed forms against independent numerics.
#
# Two oracles share no algebra with the closed forms: a truncated Fock-space
# simulator (Kraus loss, matrix exponentials, displaced parity) and direct 2D
# quadrature of the loss kernel.
from catqng import fock
from catqng.phase_space import CatParams, convolve_wigner_quadrature, lossy_cat_wigner
from catqng.verify import run_checks
from catqng.witness import GaussianOp, hull_bound, witness_delta

cat = CatParams.even(1.0)
eps, lam = 0.4, 0.3 + 0.6j

closed = lossy_cat_wigner(cat, eps, lam)
quad = convolve_wigner_quadrature(cat, eps, lam)
state = fock.apply_loss(fock.cat_fock(cat), eps)
print(f"W closed form {closed:.15f}")
print(f"W quadrature  {quad:.15f}")
print(f"W Fock        {fock.wigner_at(state, lam):.15f}  (cutoff {state.n_cut})")

# The whole witness pipeline in Fock space: loss, then D(i beta) S(s), then parity
op = GaussianOp(0.3, 0.8)
out = fock.apply_gaussian_op(state, op.s, op.beta)
print("\nwitness closed form", witness_delta(cat, eps, op).delta)
print("witness Fock       ", fock.parity_w0(out) - hull_bound(fock.expectation_nbar(out)))

# The packaged suite, also available as `catqng verify`
print()
for r in run_checks():
    print(f"{r.name:18s} cases {r.cases:3d}  max error {r.max_error:.1e}  tol {r.tol:.0e}  "
          f"{'ok' if r.passed else 'FAILED'}")

# Forcing a tiny cutoff makes the Fock oracle refuse rather than return junk
try:
    fock.cat_fock(CatParams.even(2.0), n_cut=6)
except fock.CutoffError as exc:
    print("\nexpected failure:", exc)
