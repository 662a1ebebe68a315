# %% [markdown]
# Building blocks: gates, generator bases and sequential chains.
#
# A chain on N qubits is N site matrices of size 2D x 2D. Site k couples
# qubit k to a shared D-level ancilla, and site 1 acts first.

# %%
import numpy as np

from seqgap import GateSpec, SystemShape, SequentialMPO, build_gate, contract_to_dense
from seqgap.numerics import generalized_gell_mann, generator_coefficients, matrix_exp_hermitian_generator
from seqgap.seqmpo import overlap_with_target, environment

# %%
cnot = build_gate(GateSpec("CNOT", SystemShape(2)))
print(cnot.real.astype(int))

toffoli = build_gate(GateSpec("TOFFOLI", SystemShape(3)))
print("Toffoli permutes", np.argmax(toffoli, axis=0))

# %% [markdown]
# Site unitaries can be written as exp(-i sum h G) over products of
# Gell-Mann matrices: 4 D^2 real numbers per site.

# %%
bq, ba = generalized_gell_mann(2), generalized_gell_mann(3)
h = np.random.default_rng(0).uniform(-0.5, 0.5, 4 * 9)
w = matrix_exp_hermitian_generator(h, bq, ba)
print("round trip error", np.abs(generator_coefficients(w, bq, ba) - h).max())

# %% [markdown]
# Contract a random chain. The overlap with a target is computed without
# forming the dense operator; the environment of a site is the linear form
# the overlap becomes once that site is cut out.

# %%
shape = SystemShape(3, 2)
mpo = SequentialMPO.random(shape, seed=1)
v = contract_to_dense(mpo)
print("chain is unitary:", np.allclose(v.conj().T @ v, np.eye(shape.dim)))

t = np.kron(toffoli, np.eye(2))
print("overlap", overlap_with_target(mpo, t), "dense", np.vdot(t, v))
e2 = environment(mpo, t, 2)
print("via environment of site 2", np.vdot(e2, mpo.matrices[1]))
