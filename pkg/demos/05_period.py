"""Sample the period map s -> w0(s) at rational points.

Run: python3 demos/05_period.py
"""
from fractions import Fraction as F

from brieskorn import Frame, GMSystem, MultiSeries, period_support, special_deformation

lat = special_deformation(GMSystem.constant(4, 8, 8), MultiSeries.univariate([0, 0, 1, 1], 8))
pts = [(F(1, 2), 0, 0, 0), (0, F(1, 3), 0, 0), (F(-1, 5), F(2, 7), 1, F(1, 9))]
ps = period_support(lat, Frame.identity(4), pts)
print("support (weight, index):", sorted(ps.support))
print("outside the reference span:", sorted(ps.outside_span))
for pt, vals in ps.samples.items():
    print(" ", [str(x) for x in pt], "->", [str(v) for v in vals])
print("pairwise distinct:", ps.distinct)
