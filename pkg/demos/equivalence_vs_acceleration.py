"""
Accelerating detector versus accelerating cavity
=================================================

Two set-ups that the equivalence principle would identify: a detector
accelerating through a cavity at rest, and a detector at rest inside a
uniformly accelerating cavity.  The vacuum excitation probabilities agree as
the acceleration goes to zero and separate as it grows.
"""

import math

import numpy as np

from udw import DetectorParams, ScenarioConfig, ScenarioKind, Vacuum, transition_probability

D, C = ScenarioKind.ACCELERATING_DETECTOR, ScenarioKind.ACCELERATING_CAVITY
detector = DetectorParams(omega=math.pi)   # gap pi/L with L = 1

# A log grid, since the differences span several decades
accelerations = np.geomspace(0.01, 2, 8)

print(f"{'a':>8} {'P_D':>12} {'P_C':>12} {'|P_C - P_D|':>12}")
for a in accelerations:
    pd = transition_probability(ScenarioConfig(D, a, 1.0), Vacuum(), detector).probability_over_lambda2
    pc = transition_probability(ScenarioConfig(C, a, 1.0), Vacuum(), detector).probability_over_lambda2
    print(f"{a:8.3f} {pd:12.4e} {pc:12.4e} {abs(pc - pd):12.4e}")

# The same comparison for a massive field: the trend is unchanged
for a in (0.05, 0.5, 2.0):
    pd = transition_probability(ScenarioConfig(D, a, 1.0, m=1.0), Vacuum(), detector)
    pc = transition_probability(ScenarioConfig(C, a, 1.0, m=1.0), Vacuum(), detector)
    print(f"m = 1, a = {a}: difference {abs(pc.probability_over_lambda2 - pd.probability_over_lambda2):.3e}")
