# %% [markdown]
# How the gap scales with N for two generalized CNOTs.
#
# Family 1 is the single multi-controlled NOT, family 2 the ladder of
# C^(k)-NOT gates. Pass a larger nmax (up to 8) for the full curve.

# %%
import sys

from seqgap.runner import run_scaling

nmax = int(sys.argv[1]) if len(sys.argv) > 1 else 6

# %%
for family in ("1", "2"):
    curve = run_scaling(family, nmax)
    print(f"GEN_CNOT_{family}")
    for n, g in curve:
        print(f"  N={n}  gap={g:.5f}  " + "#" * int(round(g * 100)))

# %% [markdown]
# The single multi-controlled NOT becomes easier with N: it differs from
# the identity on a shrinking fraction of basis states, and the gap halves
# with each extra qubit. The ladder saturates near 0.438.
