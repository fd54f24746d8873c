import collections, time
import numpy as np
from qcqp_tight.linalg import REAL, COMPLEX
from qcqp_tight.slemma import (yuan_lemma_three, yuan_lemma_four_complex,
                               _rand_herm, CertificateError)

for field, fn, k in ((REAL, yuan_lemma_three, 3),
                     (COMPLEX, yuan_lemma_four_complex, 4)):
    rng = np.random.default_rng(7)
    tally = collections.Counter()
    t0 = time.time()
    for i in range(40):
        n = int(rng.integers(2, 6))
        mats = [_rand_herm(rng, n, field, 1.5) for _ in range(k)]
        try:
            res = fn(*mats, seed=i)
            tally[res.kind] += 1
        except CertificateError as exc:
            tally["inconclusive"] += 1
        except Exception as exc:
            tally[f"ERR {type(exc).__name__}"] += 1
            print("  ", i, n, exc)
    print(field, dict(tally), f"{time.time()-t0:.1f}s")
