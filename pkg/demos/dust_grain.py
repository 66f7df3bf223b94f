"""
A dust grain in sunlight
========================

From grain size, dielectric constant, separation and irradiance to the
number of copies of the grain's position held by the scattered photons.
"""

import json
import warnings

from qdarwin.cli import scenario_report
from qdarwin.scattering import bundled_scenario

grain = bundled_scenario("dust-grain")
print(json.dumps(grain.to_dict(), indent=2))

# The grain is not small against the thermal wavelength; the report carries
# that warning rather than hiding it.
with warnings.catch_warnings():
    warnings.simplefilter("ignore")
    report = scenario_report(grain, t=1e-6, delta=0.1)

for name, q in report["quantities"].items():
    print(f"{name:>24}  {q['value']!s:>24}  {q['unit']}")
for message in report["warnings"]:
    print("warning:", message)

# Longer exposure, more copies: R is proportional to t once decohered.
for t in (1e-9, 1e-6, 1e-3):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        r = scenario_report(grain, t=t, delta=0.1)["quantities"]["R_exact"]["value"]
    print(f"t = {t:g} s  ->  R = {r:.3e}")
