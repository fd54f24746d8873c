import numpy as np
from qcqp_tight.slemma import (s_lemma_three, s_lemma_four_complex,
                               yuan_lemma_three, yuan_lemma_four_complex,
                               KIND_PSD_CERTIFICATE, KIND_SYSTEM_SOLVABLE)

I2 = np.eye(2)
# A0 = I psd on its own -> psd certificate with small mu
r = s_lemma_three(I2, -I2, np.diag([-1.0, 1.0]), [1.0, 0.0])
print("slemma A0=I:", r.kind, r.mu0)
assert r.kind == KIND_PSD_CERTIFICATE

# all -I -> system solvable
r = s_lemma_three(-I2, -I2, -I2, [1.0, 0.0])
print("slemma all -I:", r.kind, r.x)
assert r.kind == KIND_SYSTEM_SOLVABLE

# yuan: I, I, I -> convex psd
r = yuan_lemma_three(I2, I2, I2)
print("yuan I,I,I:", r.kind, r.mu0, r.convex)
assert r.kind == KIND_PSD_CERTIFICATE and abs(sum(r.mu0) - 1) < 1e-9

# yuan: diag(1,-1), diag(-1,1), 0 -> psd via sum of first two
r = yuan_lemma_three(np.diag([1.0, -1.0]), np.diag([-1.0, 1.0]), np.zeros((2, 2)))
print("yuan mix:", r.kind, r.mu0)
assert r.kind == KIND_PSD_CERTIFICATE

# yuan all -I -> solvable
r = yuan_lemma_three(-I2, -I2, -I2)
print("yuan all -I:", r.kind, r.x)
assert r.kind == KIND_SYSTEM_SOLVABLE

# complex four: A0=I -> psd
r = s_lemma_four_complex(I2, -I2, np.diag([-1.0, 0.0]) - 0.5 * I2, -2 * I2,
                         [1.0, 0.0])
print("slemma4 A0=I:", r.kind, r.mu0)
assert r.kind == KIND_PSD_CERTIFICATE

# yuan four complex: -I, I, I, I -> psd with weight off the first
r = yuan_lemma_four_complex(-I2, I2, I2, I2)
print("yuan4:", r.kind, r.mu0)
assert r.kind == KIND_PSD_CERTIFICATE

# yuan four complex all -I -> solvable
r = yuan_lemma_four_complex(-I2, -I2, -I2, -I2)
print("yuan4 all -I:", r.kind)
assert r.kind == KIND_SYSTEM_SOLVABLE
print("trivial smoke OK")
