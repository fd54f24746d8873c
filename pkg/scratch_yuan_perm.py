import numpy as np
from qcqp_tight.linalg import REAL, COMPLEX
from qcqp_tight.slemma import (yuan_lemma_three, yuan_lemma_four_complex,
                               plant_witness_instance, CertificateError)

for field, fn in ((REAL, yuan_lemma_three), (COMPLEX, yuan_lemma_four_complex)):
    tally = {}
    for s in range(12):
        rng = np.random.default_rng(1000 + s)
        mats, x0 = plant_witness_instance(rng, 4, field)
        try:
            res = fn(*mats, seed=s)
            key = (res.kind, res.permutation)
        except CertificateError as exc:
            key = ("inconclusive", None)
        tally[key] = tally.get(key, 0) + 1
    print(field, tally)
