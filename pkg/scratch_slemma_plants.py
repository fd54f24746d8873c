import time
import numpy as np
from qcqp_tight.linalg import REAL, COMPLEX
from qcqp_tight.slemma import (s_lemma_three, s_lemma_four_complex,
                               plant_psd_instance, plant_witness_instance,
                               plant_negative_instance,
                               KIND_PSD_CERTIFICATE, KIND_PROPERTY_WITNESS,
                               KIND_SYSTEM_SOLVABLE, CertificateError)

PLANTS = [(plant_psd_instance, KIND_PSD_CERTIFICATE),
          (plant_witness_instance, KIND_PROPERTY_WITNESS),
          (plant_negative_instance, KIND_SYSTEM_SOLVABLE)]

for field, fn in ((REAL, s_lemma_three), (COMPLEX, s_lemma_four_complex)):
    for plant, expect in PLANTS:
        rng = np.random.default_rng(20260823)
        t0 = time.time()
        bad = []
        for i in range(50):
            n = int(rng.integers(3, 7))
            mats, x0 = plant(rng, n, field)
            try:
                res = fn(*mats, x0)
                if res.kind != expect:
                    bad.append((i, n, res.kind))
            except Exception as exc:
                bad.append((i, n, f"{type(exc).__name__}: {exc}"))
        dt = time.time() - t0
        ok = 50 - len(bad)
        print(f"{field:8s} {expect:18s} {ok}/50  {dt:5.1f}s")
        for b in bad[:6]:
            print("    ", b)
