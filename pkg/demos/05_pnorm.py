# %% [markdown]
# Gaps in the spectral norm.
#
# The spectral norm is not smooth, so there is no closed-form site update.
# Each run starts from the Frobenius optimum and then does a coordinate
# search along the generator directions of every site. It first uses
# Schatten-q norms of rising q, then the spectral norm itself.

# %%
import numpy as np

from seqgap import GateSpec, SystemShape, build_gate, contract_to_dense, embed_with_ancilla
from seqgap.metrics import gap_pnorm
from seqgap.optimizer import InitMode, Metric, OptimizerConfig, optimize_pnorm

cfg = OptimizerConfig(metric=Metric.PNORM2, init_mode=InitMode.FROBENIUS, restarts=2,
                      max_sweeps=20, rel_tol=1e-6)

# %%
for kind in ("CNOT", "CPHASE", "SWAP"):
    t = embed_with_ancilla(build_gate(GateSpec(kind, SystemShape(2))), 2)
    res = optimize_pnorm(t, SystemShape(2, 2), cfg)
    print(f"{kind:7s} best {res.cost / 4:.4f}  per restart {np.round(res.costs / 4, 4)}")

# %% [markdown]
# Toffoli needs no ancilla at all to get within 0.25: write it as
# H_3 CCZ H_3 and replace CCZ by single-qubit phases. The phase
# pi/3 (1 - x1 - x2 - x3) is never more than pi/3 away from pi x1 x2 x3.

# %%
a = -np.pi / 3
ph = np.diag([1, np.exp(1j * a)])
had = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
local = np.kron(np.kron(np.exp(-1j * a) * ph, ph), had @ ph @ had)
tof = build_gate(GateSpec("TOFFOLI", SystemShape(3)))
print("local-phase approximation of Toffoli, spectral gap:", gap_pnorm(tof, local))
