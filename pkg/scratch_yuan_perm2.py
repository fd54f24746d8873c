import numpy as np
from qcqp_tight.slemma import yuan_lemma_three, yuan_lemma_four_complex

A0 = np.array([[0.0, -1.0], [-1.0, -2.0]])
A1 = np.array([[0.0, 1.0], [1.0, 0.0]])
A2 = np.diag([-1.0, 1.0])
res = yuan_lemma_three(A0, A1, A2)
print("real:", res.kind, "perm", res.permutation)
print("  mu_breve", res.mu_breve)
print("  x1", res.x1, " x2", res.x2)

# complex analog: A0 + A1 + A2 + A3 + I = 0 with the IC pattern
B1 = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
B2 = np.array([[0.0, 1j], [-1j, 0.0]])
B3 = np.diag([-1.0, 1.0]).astype(complex)
B0 = -(B1 + B2 + B3 + np.eye(2))
res = yuan_lemma_four_complex(B0, B1, B2, B3)
print("complex:", res.kind, "perm", res.permutation)
print("  mu_breve", res.mu_breve)
