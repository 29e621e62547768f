"""
Mode truncation and the instantaneous transition rate
======================================================

The vacuum probability is a sum of nonnegative per-mode terms.  With sharp
switching the terms decay only like a power of the mode number, so the sum
creeps up slowly with the truncation N.  The rate dF/dtau of a detector
switched on at tau = 0 integrates back to the probability.
"""

import math

import numpy as np
from scipy.integrate import trapezoid

from udw import DetectorParams, ScenarioConfig, ScenarioKind, Vacuum
from udw.experiments import convergence_report
from udw.kinematics import traversal_time_detector
from udw.response import transition_probability, transition_rate

cavity = ScenarioConfig(ScenarioKind.ACCELERATING_CAVITY, 1.0, 1.0)
report = convergence_report(cavity, Vacuum(), DetectorParams(math.pi), [5, 15, 50, 100, 200])
print(report.table())

# Per-mode contributions fall off roughly as n^-3
res = transition_probability(cavity, Vacuum(), DetectorParams(math.pi), N=200)
n = np.arange(50, 201)
slope = np.polyfit(np.log(n), np.log(res.per_mode[49:]), 1)[0]
print(f"fitted tail exponent: {slope:.2f}")

# Rate along the traversal of an accelerating detector
detector_cfg = ScenarioConfig(ScenarioKind.ACCELERATING_DETECTOR, 1.0, 1.0)
tmax = traversal_time_detector(1.0, 1.0)
tau = np.linspace(0, tmax, 401)
rate = transition_rate(detector_cfg, Vacuum(), DetectorParams(math.pi), tau).rate
P = transition_probability(detector_cfg, Vacuum(), DetectorParams(math.pi)).probability_over_lambda2
print(f"rate at switch-on: {rate[0]}")
print(f"trapezoid integral of the rate: {trapezoid(rate, tau):.6e}, probability: {P:.6e}")
