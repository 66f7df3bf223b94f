"""
Checking the formulas against brute force
=========================================

Build the full state of a system and N two-level photon records, take
partial traces, and compare against the closed-form mutual information.
"""

from qdarwin import mutual_information_isotropic, mutual_information_point
from qdarwin import oracle

n, gamma = 10, 0.7
point = oracle.build_point_source(n, gamma)
mixed = oracle.build_isotropic(8, gamma)

print(f"coherence left: {oracle.oracle_decoherence_check(point):.6f} (expected {gamma ** (n / 2):.6f})")
print(f"{'m':>3} {'oracle':>12} {'formula':>12} {'diff':>9}")
for m in range(n + 1):
    exact = oracle.oracle_mutual_information(point, m)
    formula = mutual_information_point(gamma**n, m / n)
    print(f"{m:3d} {exact:12.9f} {formula:12.9f} {abs(exact - formula):9.1e}")

# Maximally mixed records: the fragment entropy stays at m ln 2 and almost
# nothing about the system gets through until the fragment is nearly everything.
for m in range(9):
    exact = oracle.oracle_mutual_information(mixed, m)
    print(f"isotropic m={m}: {exact:.3e} vs {mutual_information_isotropic(gamma**8, m / 8):.3e}")

report = oracle.spectrum_report(oracle.build_point_source(4, 0.5))
print(report.to_json(indent=1)[:400], "...")
