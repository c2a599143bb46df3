# Largest detectable loss, eps_max, for the three operation strategies.
#
# eps_max scans the loss downward from 0.9999 and bisects the first sign
# change. The sign is read from log(W0 / bound), which stays finite where the
# witness itself is too small to represent.
from catqng.optimize import epsilon_max

print("odd cats")
print(" alpha   none     squeeze")
for alpha in (0.5, 1.0, 1.5, 2.0):
    none = epsilon_max(alpha, -1.0, "none")
    sq = epsilon_max(alpha, -1.0, "squeeze")
    print(f"  {alpha:.2f}  {none.eps_max:.4f}   {sq.eps_max:.4f}{' (saturated)' if sq.saturated else ''}")

print("\neven cats")
print(" alpha   none     disp-squeeze")
for alpha in (0.1, 0.3, 0.5, 0.8, 1.0):
    none = epsilon_max(alpha, 1.0, "none")
    ds = epsilon_max(alpha, 1.0, "disp-squeeze")
    print(f"  {alpha:.2f}  {none.eps_max:.4f}   {ds.eps_max:.4f}  bracket {ds.bracket:.1e}")

# CLI equivalent:  catqng eps-max --alpha 0.1:1.0:10 --xi 1 --strategy disp-squeeze
