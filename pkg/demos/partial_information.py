"""
Partial information plots
=========================

Mutual information between a system and a growing fraction of the photons
that scattered off it, for point-source and isotropic illumination.
"""

import numpy as np

from qdarwin import DecoherenceFactor, branch_entropy, info_curve

fractions = np.linspace(0, 1, 101)
times = [0.3, 1, 3, 10, 30]  # in units of the decoherence time

# Point source: a steep rise, then a plateau near ln 2 that widens with time.
# Isotropic light: records never form, so the curve hugs zero until f -> 1.
curves = {
    ill: {x: info_curve(DecoherenceFactor(x), ill, fractions).values for x in times}
    for ill in ("point", "isotropic")
}

print(f"{'t/tau':>6} {'H_S':>8} {'I(0.1) pt':>10} {'I(0.5) pt':>10} {'I(0.5) iso':>10} {'I(0.9) iso':>10}")
for x in times:
    pt, iso = curves["point"][x], curves["isotropic"][x]
    h_s = branch_entropy(DecoherenceFactor(x))
    print(f"{x:6g} {h_s:8.5f} {pt[10]:10.5f} {pt[50]:10.5f} {iso[50]:10.5f} {iso[90]:10.5f}")

try:
    import matplotlib.pyplot as plt
except ImportError:
    raise SystemExit

fig, axes = plt.subplots(1, 2, figsize=(9, 3.5), sharey=True)
for ax, ill in zip(axes, curves):
    for x, values in curves[ill].items():
        ax.plot(fractions, values / np.log(2), label=f"t = {x:g} tau_D")
    ax.set_title(ill)
    ax.set_xlabel("fragment fraction f")
axes[0].set_ylabel("I(S:F) [bits]")
axes[0].legend()
fig.tight_layout()
fig.savefig("partial_information.png", dpi=150)
