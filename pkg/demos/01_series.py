"""Truncated power series: products, unit inverses and reversion.

Run: python3 demos/01_series.py
"""
from fractions import Fraction

from brieskorn import MultiSeries, PolyRing, compositional_inverse
from brieskorn.series import compose_univariate

N = 6
f = MultiSeries.univariate([0, 2, 1, Fraction(-1, 3)], N)
print("f          =", f)

# a series with nonzero constant term is a unit
u = MultiSeries.univariate([1, 1], N)
print("1/(1+s)    =", u.inverse())

g = compositional_inverse(f)
print("f^<-1>     =", g)
print("f(f^<-1>)  =", compose_univariate(f, g))

# the same code runs over a polynomial coefficient ring
R = PolyRing(["a"])
a = R.gen("a")
fa = MultiSeries.univariate([0, 1, a], N, ring=R)
print("(s + a s^2)^<-1> =", compositional_inverse(fa))
