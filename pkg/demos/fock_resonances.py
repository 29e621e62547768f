"""
Resonances of a detector crossing an excited cavity
===================================================

With n quanta in cavity mode k the excitation probability, scanned over the
detector gap, shows k peaks.  Lower accelerations give taller, narrower peaks
because the detector spends longer inside the cavity.
"""

import math
import warnings

import numpy as np

from udw import DetectorParams, Fock, PerturbativeWarning, ScenarioConfig, ScenarioKind
from udw.response import resonance_scan

state = Fock(k=3, n_k=3)
gaps = np.linspace(0.02, 5 * math.pi, 400)

for a in (1.0, 0.5, 0.1):
    config = ScenarioConfig(ScenarioKind.ACCELERATING_DETECTOR, a, 1.0)
    # near resonance at small a the leading-order result exceeds 0.1; silence the reminder
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", PerturbativeWarning)
        scan = resonance_scan(config, state, DetectorParams(math.pi), gaps)
    peaks = ", ".join(f"Omega={p.omega:.2f} (height {p.height:.3g}, width {p.width:.2f})"
                      for p in scan.peaks)
    print(f"a = {a}: {len(scan.peaks)} peaks: {peaks}")
