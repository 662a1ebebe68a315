# %% [markdown]
# Isometries: fix some inputs to reference states and decompose what is left.
#
# For M -> N maps only qubits 1..M are free. The remaining qubits and the
# ancilla are fed initial states (|0> unless given).

# %%
import numpy as np

from seqgap import GateSpec, SystemShape, build_isometry, optimize_isometry
from seqgap.optimizer import OptimizerConfig

cfg = OptimizerConfig(restarts=5)


def gap(kind, n, d, m, seed=0, psi=None):
    shape = SystemShape(n, d, m)
    v = build_isometry(GateSpec(kind, shape, seed=seed), psi)
    res = optimize_isometry(v, shape, psi, cfg=cfg)
    return res.cost / (2 * 2**m)


# %%
print("Toffoli 1->3, D=2:", gap("TOFFOLI", 3, 2, 1))
print("Fredkin 1->3, D=2:", gap("FREDKIN", 3, 2, 1))
for s in range(3):
    print(f"random 1->3 seed {s}:  D=2 {gap('RANDOM_ISOMETRY', 3, 2, 1, s):.4f}"
          f"   D=4 {gap('RANDOM_ISOMETRY', 3, 4, 1, s):.2e}")

# %% [markdown]
# Any 1 -> N isometry becomes exact once D is large enough. For 2 -> 3
# maps even D = 4 leaves random isometries with a gap.

# %%
for s in range(3):
    print(f"random 2->3 seed {s}, D=4: {gap('RANDOM_ISOMETRY', 3, 4, 2, s):.4f}")

# %% [markdown]
# The Toffoli 2->3 map depends on what the third qubit is fed. On |+> the
# target flip does nothing and the gap closes. On |0> the map is a
# controlled-controlled copy and a gap of 1 - cos(pi/8) remains.

# %%
plus = [np.array([1, 1]) / np.sqrt(2)]
print("Toffoli 2->3, D=4, |0>:", gap("TOFFOLI", 3, 4, 2))
print("Toffoli 2->3, D=4, |+>:", gap("TOFFOLI", 3, 4, 2, psi=plus))
