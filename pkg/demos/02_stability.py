"""Special, nilpotent and relative families are closed under t, dt^-1 and
dt^-1 d_si.  Each membership comes with an explicit witness.

Run: python3 demos/02_stability.py
"""
from brieskorn import GMSystem, MultiSeries, RelativeFamilySpec, stability_check
from brieskorn import nilpotent_family, relative_family, special_deformation

h = MultiSeries.univariate([0, 0, 1, 1], 8)
lat = special_deformation(GMSystem.constant(4, 8, 8), h)
print(lat)
for j, v in enumerate(lat.generators):
    print(f"  v{j} = {v}")

report = stability_check(lat)
print(f"special: {len(report.checks)} checks, passed = {report.passed}")
c = next(c for c in report.checks if c.name == "t v0 in B")
print("  witness for t v0:", c.witness.to_text())

nil = nilpotent_family(GMSystem.shifted(3, 7, 5))
print("nilpotent r=3:", stability_check(nil).passed)

spec = RelativeFamilySpec({2: MultiSeries.univariate([0, 0, 1, 2], 8),
                           3: MultiSeries.univariate([0, 0, 0, 1], 8),
                           4: MultiSeries.univariate([0, 0, 0, 0, 1], 8)})
print("relative r=4:", stability_check(relative_family(GMSystem.constant(4, 8, 8), spec)).passed)
