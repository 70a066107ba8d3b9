"""Verification suites run by the command-line driver.

Each suite takes a validated :class:`~brieskorn.cli.RunConfig` and returns a
list of check dictionaries ``{"name", "passed", ...}``.  A failing check
carries an ``inputs`` entry with the concrete data needed to rerun it.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .canonical import (
    canonical_element,
    canonical_generators,
    extract_invariants,
    period_support,
    residual_law,
)
from .gamma import (
    GammaParams,
    act_on_h,
    compose_params,
    full_pipeline_action,
    inverse_params,
    orbit_rank,
    symbolic_orbit,
)
from .gmsystem import GMSystem
from .lattice import (
    is_monomial_spec,
    monomial_prediction,
    nilpotent_family,
    relative_family,
    relative_origin_formula,
    relative_origin_values,
    special_deformation,
    stability_check,
)
from .opposite import Frame, frame_from_matrix
from .series import MultiSeries, PolyRing, compose_univariate, format_rational


def _fmt(x) -> str:
    return format_rational(x) if isinstance(x, (int, Fraction)) else str(x)


def random_h(rng: random.Random, degree: int, lo: int = -5, hi: int = 5) -> MultiSeries:
    """``sum c_k s^k`` with integer ``c_k`` in ``[lo, hi]`` and ``c_2 != 0``."""
    c2 = 0
    while c2 == 0:
        c2 = rng.randint(lo, hi)
    return MultiSeries.univariate([0, 0, c2] + [rng.randint(lo, hi) for _ in range(3, degree + 1)], degree)


def random_frame(rng: random.Random, r: int, lo: int = -3, hi: int = 3) -> Frame:
    rows = [[Fraction(int(i == j)) if i <= j else Fraction(rng.randint(lo, hi)) for j in range(r + 1)]
            for i in range(r + 1)]
    return frame_from_matrix(rows)


def random_params(rng: random.Random, lo: int = -5, hi: int = 5) -> GammaParams:
    return GammaParams(*(Fraction(rng.randint(lo, hi), rng.randint(1, 3)) for _ in range(3)))


def h_text(h: MultiSeries) -> list[str]:
    return [_fmt(c) for c in h.univariate_coefficients()]


def frame_text(frame: Frame) -> list[list[str]]:
    return [[_fmt(x) for x in row] for row in frame.A]


def build_lattice(cfg):
    if cfg.family == "special":
        sys = GMSystem.constant(cfg.r, cfg.K, cfg.N)
        return special_deformation(sys, cfg.h)
    if cfg.family == "nilpotent":
        return nilpotent_family(GMSystem.shifted(cfg.r, cfg.K, cfg.N))
    return relative_family(GMSystem.constant(cfg.r, cfg.K, cfg.N), cfg.relative)


def _check(name, passed, **extra) -> dict:
    out = {"name": name, "passed": bool(passed)}
    out.update({k: v for k, v in extra.items() if v is not None})
    return out


# ---------------------------------------------------------------------------


def suite_stability(cfg) -> list[dict]:
    lat = build_lattice(cfg)
    report = stability_check(lat)
    out = []
    for c in report.checks:
        d = c.to_dict()
        if c.passed and c.witness is not None:
            d["witness"] = c.witness.to_text()
        out.append(d)
    if cfg.family == "relative":
        got = relative_origin_values(lat)
        out.append(_check("s=0 value matches the general formula", got == relative_origin_formula(cfg.relative)))
        mono = got == monomial_prediction(cfg.relative)
        out.append(_check("s=0 value equals h_j^(j)(0) dt^-j e_j iff every h_i is a monomial",
                          mono == is_monomial_spec(cfg.relative),
                          detail=f"equal={mono}, monomial={is_monomial_spec(cfg.relative)}"))
    return out


def suite_canonical(cfg) -> list[dict]:
    lat = build_lattice(cfg)
    frame = cfg.frame
    out = []
    first = canonical_generators(lat, frame)
    second = canonical_generators(lat, frame, order="reversed", check_generation=False)
    for j, (a, b) in enumerate(zip(first.solutions, second.solutions)):
        ok, bad = residual_law(a, frame)
        out.append(_check(f"residual law for f{j}", ok, detail=None if ok else f"fails at weight {bad}"))
        same = a.w.equal_through(b.w, a.bound)
        out.append(_check(f"pivot order independence for f{j}", same,
                          residual=None if same else (a.w - b.w).to_text()))
        back = a.witness.expand(lat)
        out.append(_check(f"witness re-expands for f{j}", back.equal_through(a.w, a.bound)))
    out.append(_check("canonical elements generate the lattice", first.generates))
    if frame.A == Frame.identity(cfg.r).A:
        same = [s.w.equal_through(v, s.bound) for s, v in zip(first.solutions, lat.generators)]
        if cfg.family == "relative":
            # these generators need not be canonical; report only
            out.append(_check("identity frame vs generators (report only)", True,
                              detail="equal for " + str([j for j, ok in enumerate(same) if ok])))
        else:
            for j, (ok, s, v) in enumerate(zip(same, first.solutions, lat.generators)):
                out.append(_check(f"identity frame returns v{j}", ok,
                                  residual=None if ok else (s.w - v).to_text()))
    out.append(_check("canonical.w", True, value=first.solutions[0].w.to_text(),
                      witness=first.solutions[0].witness.to_text()))
    return out


def invariant_sample(h: MultiSeries, frame: Frame):
    """Return ``(ok, invariants, hA)`` for one ``(h, frame)`` pair."""
    r = frame.r
    sys = GMSystem.constant(r, r + 2, h.degree)
    lat = special_deformation(sys, h)
    sol = canonical_element(lat, frame, frame.tilde_vector(0), 0, r - 1)
    inv = extract_invariants(sol, frame)
    hA = act_on_h(GammaParams.from_frame(frame), h)
    predicted = compose_univariate(hA, inv.g[0].restrict([1])).embed(sys.nvars)
    return inv.g_tilde == predicted and inv.is_coordinate_system(), inv, hA


def suite_theorem2(cfg) -> list[dict]:
    rng = random.Random(cfg.seed)
    out = []
    samples = [(cfg.h, cfg.frame)] + [(random_h(rng, cfg.N), random_frame(rng, cfg.r)) for _ in range(cfg.samples)]
    for k, (h, frame) in enumerate(samples):
        ok, inv, hA = invariant_sample(h, frame)
        extra = {}
        if k == 0:
            extra["invariants"] = {"g": [str(g) for g in inv.g], "g_tilde": str(inv.g_tilde)}
        if not ok:
            extra["inputs"] = {"h": h_text(h), "frame": frame_text(frame)}
        out.append(_check(f"g~ = h^A o g1, sample {k}", ok, **extra))
    return out


def suite_theorem1(cfg) -> list[dict]:
    rng = random.Random(cfg.seed)
    out = []
    h = cfg.h
    base = cfg.frame
    reference = str(full_pipeline_action(base, h))
    free = [(i, j) for i in range(cfg.r + 1) for j in range(i) if (i, j) not in {(1, 0), (2, 0), (2, 1)}]
    for k in range(cfg.samples):
        other = base.with_entries({ij: rng.randint(-5, 5) for ij in free})
        got = str(full_pipeline_action(other, h))
        out.append(_check(f"h^A ignores entries outside (alpha, beta, gamma), sample {k}", got == reference,
                          inputs=None if got == reference else {"frame": frame_text(other), "h": h_text(h)}))
    rank_h = MultiSeries.univariate([0, 0, 1, 1], cfg.N)
    rk = orbit_rank(rank_h, [3, 4, 5])
    out.append(_check("orbit Jacobian of (c3, c4, c5) at 0 for h = s^2 + s^3 has rank 3", rk == 3,
                      detail=f"rank {rk}", inputs=None if rk == 3 else {"h": h_text(rank_h), "levels": [3, 4, 5]}))
    if cfg.N >= 6:
        rk6 = orbit_rank(rank_h, [3, 4, 5, 6])
        out.append(_check("orbit Jacobian of (c3, ..., c6) has rank 3", rk6 == 3, detail=f"rank {rk6}"))
    return out


def suite_gamma(cfg) -> list[dict]:
    rng = random.Random(cfg.seed)
    bad_comp, bad_axioms = [], []
    zero = GammaParams()
    for _ in range(cfg.triples):
        p, q, t = random_params(rng), random_params(rng), random_params(rng)
        h = random_h(rng, cfg.N)
        lhs = act_on_h(q, act_on_h(p, h))
        if lhs != act_on_h(compose_params(p, q), h):
            bad_comp.append({"p": [_fmt(x) for x in p.as_tuple()], "q": [_fmt(x) for x in q.as_tuple()],
                             "h": h_text(h)})
        ok = (compose_params(compose_params(p, q), t) == compose_params(p, compose_params(q, t))
              and compose_params(p, zero) == p == compose_params(zero, p)
              and compose_params(p, inverse_params(p)) == zero == compose_params(inverse_params(p), p))
        if not ok:
            bad_axioms.append([_fmt(x) for x in p.as_tuple()])
    out = [
        _check(f"composition law over {cfg.triples} random triples", not bad_comp,
               inputs=bad_comp[:3] or None),
        _check("group axioms and closed-form inverse", not bad_axioms, inputs=bad_axioms[:3] or None),
    ]
    R = PolyRing(["alpha", "beta", "gamma", "c2", "c3"])
    (c2A, c3A), log = symbolic_orbit(3, R, with_log=True)
    a, _, g = R.gen("alpha"), R.gen("beta"), R.gen("gamma")
    c2, c3 = R.gen("c2"), R.gen("c3")
    out.append(_check("c^A_2 = c2", c2A == c2, detail=str(c2A)))
    out.append(_check("c^A_3 = c3 + alpha c2 - 2 gamma c2^2", c3A == c3 + a * c2 - 2 * g * c2 ** 2, detail=str(c3A)))
    out.append(_check("symbolic inversions only invert 1", set(log) <= {1}))
    return out


def suite_period(cfg) -> list[dict]:
    rng = random.Random(cfg.seed)
    lat = build_lattice(cfg)
    points = set()
    while len(points) < cfg.samples:
        points.add(tuple(Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(lat.system.nvars)))
    pts = sorted(points)
    ps = period_support(lat, cfg.frame, pts)
    d = ps.to_dict()
    return [
        _check("sampled period images are pairwise distinct", ps.distinct,
               inputs=None if ps.distinct else {"points": [[_fmt(x) for x in p] for p in pts]}),
        # the containment is reported, never asserted
        _check("period.support", True, value=d["support"], in_reference_span=d["in_span"],
               outside_reference_span=d["outside_span"]),
    ]


SUITES = {
    "stability": suite_stability,
    "canonical": suite_canonical,
    "theorem2": suite_theorem2,
    "theorem1": suite_theorem1,
    "gamma": suite_gamma,
    "period": suite_period,
}
