"""Canonical generators relative to the opposite filtration of a frame.

Run: python3 demos/03_canonical.py
"""
from brieskorn import Frame, GMSystem, MultiSeries, canonical_generators, residual_law, special_deformation

lat = special_deformation(GMSystem.constant(4, 8, 8), MultiSeries.univariate([0, 0, 1, 1], 8))

ident = canonical_generators(lat, Frame.identity(4))
print("identity frame reproduces the generators:",
      all(s.w.equal_through(v, s.bound) for s, v in zip(ident.solutions, lat.generators)))

frame = Frame.from_params(4, 1, 0, -1)
cs = canonical_generators(lat, frame)
for j, s in enumerate(cs.solutions):
    print(f"w{j}: residual law {residual_law(s, frame)[0]}")
print("w0 =", cs.solutions[0].w)
print("canonical elements generate the lattice:", cs.generates)
