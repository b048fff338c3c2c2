import math

import numpy as np
import pytest

import oracles
from boundary_triples import extensions as ext
from boundary_triples import models
from boundary_triples import relations as rel
from boundary_triples import triple_core as core
from boundary_triples.errors import PoleProximityError, RelationError, SingularSystemError


def test_zero_theta_gives_weyl_at_eta(interval):
    h = ext.build_extension(interval, rel.graph(np.zeros((2, 2))))
    assert rel.subspace_equal(h.vartheta, rel.graph(h.triple.m_eta))[0]
    assert h.classification.self_adjoint


def test_vertical_theta_is_dirichlet(interval):
    h = ext.build_extension(interval, rel.multivalued(2))
    assert rel.subspace_equal(h.vartheta, rel.multivalued(2))[0]


def test_from_vartheta_round_trip(disk4):
    g = disk4.boundary_dim
    h = ext.from_vartheta(disk4, rel.graph(np.eye(g)))
    again = ext.build_extension(disk4, h.theta, scale=h.scale)
    assert rel.subspace_equal(again.vartheta, h.vartheta, tol=1e-8)[0]


def test_eta_on_pole_rejected(interval):
    with pytest.raises(PoleProximityError):
        ext.build_extension(interval, rel.graph(np.zeros((2, 2))), eta=math.pi**2)


def test_krein_dirichlet_reduces_to_a0(interval, rng):
    h = ext.from_vartheta(interval, rel.multivalued(2))
    f = interval.sample_functions(rng, 2)
    lam = 1.0 + 1j
    assert np.allclose(ext.krein_resolvent(h, lam, f), interval.resolvent_A0(lam, f), atol=1e-12)


def test_krein_against_direct_bvp(interval, frozen):
    ref = frozen["interval_robin_resolvent_one"]
    h = models.robin_extension(interval, ref["alpha"])
    one = interval.from_callable(lambda x: np.ones_like(x))
    g = ext.krein_resolvent(h, ref["lambda"], one)
    vals = interval.evaluate(g, np.array(ref["x"]))
    assert np.abs(vals - np.array(ref["g"])).max() < 1e-7


def test_krein_against_radial_solve(disk4):
    # mode-0 data f = 1; the Robin solution is radial: g = -1/lam + c I_0(r)
    from scipy.special import iv, ivp

    h = models.robin_extension(disk4, 1.0)
    f = disk4.from_modes({0: lambda s: np.full_like(s, math.sqrt(2 * math.pi))})
    g = ext.krein_resolvent(h, -1.0, f)
    # -g'(1) = g(1): -c I_0'(1) = 1 + c I_0(1)
    c = -1.0 / (ivp(0, 1.0) + iv(0, 1.0))
    s = np.linspace(0.0, 1.0, 6)
    exact = 1.0 + c * iv(0, np.sqrt(s))
    block = g.reshape(disk4.blocks, disk4.degree)[list(disk4.modes).index(0)]
    got = np.polynomial.legendre.legval(2 * s - 1, block)
    assert np.abs(got / math.sqrt(2 * math.pi) - exact).max() < 1e-7


def test_krein_rejects_eigenvalue(interval):
    h = models.robin_extension(interval, 1.0)
    lam = oracles.interval_robin_roots(1.0, 0.0, 10.0)[0]
    with pytest.raises(SingularSystemError):
        ext.krein_resolvent(h, lam, interval.from_callable(np.cos))


def test_classify_point_examples(interval):
    neumann = ext.from_vartheta(interval, rel.graph(np.zeros((2, 2))))
    rep = ext.classify_point(neumann, 0.0)
    assert rep.classification == "eigenvalue" and rep.kernel_dim == 1
    v = rep.kernel_basis[:, 0]
    assert abs(abs(v[0]) - abs(v[1])) < 1e-10 and abs(v[0] - v[1]) < 1e-10
    assert ext.classify_point(neumann, math.pi**2).classification == "excluded_pole"
    robin = models.robin_extension(interval, 1.0)
    rep = ext.classify_point(robin, -1.0)
    assert rep.classification == "resolvent"
    d = rep.to_dict()
    assert set(d) == {"lambda", "class", "kernel_dim", "residuals", "caveats"}


def test_eigenvalues_dirichlet_and_neumann(interval):
    dirichlet = ext.from_vartheta(interval, rel.multivalued(2))
    vals = [e.value for e in ext.eigenvalues_in(dirichlet, 1.0, 100.0)]
    assert np.allclose(vals, [math.pi**2, 4 * math.pi**2, 9 * math.pi**2], atol=1e-9)
    neumann = ext.from_vartheta(interval, rel.graph(np.zeros((2, 2))))
    found = ext.eigenvalues_in(neumann, -1.0, 50.0)
    assert np.allclose([e.value for e in found], [0.0, math.pi**2, 4 * math.pi**2], atol=1e-9)
    assert [e.tag for e in found][1:] == [ext.OUTSIDE_WEYL] * 2


def test_eigenvalues_match_classify(interval):
    h = models.robin_extension(interval, -2.0)
    for e in ext.eigenvalues_in(h, -10.0, 60.0):
        if not e.tag:
            assert ext.classify_point(h, e.value).classification == "eigenvalue"


def test_eigenvalues_non_self_adjoint_fallback(interval):
    # dissipative Robin with complex alpha has no real eigenvalues
    h = models.robin_extension(interval, 1.0 + 1.0j)
    assert [e for e in ext.eigenvalues_in(h, 0.5, 30.0, grid=100) if not e.tag] == []


def test_krein_von_neumann_disk():
    d = models.make_disk_model(modes=3)
    handle, rep = ext.krein_von_neumann(d)
    assert rep.classification == "eigenvalue" and rep.kernel_dim == 7
    assert handle.classification.self_adjoint


def test_bound_test_zero_and_multivalued(disk4):
    r = ext.selfadjointness_bound_test(ext.from_vartheta(disk4, rel.graph(np.zeros((9, 9)))))
    assert r.c1 == 0 and r.c2 == 0 and r.verdict == "self_adjoint_by_iii"
    with pytest.raises(RelationError):
        ext.selfadjointness_bound_test(ext.from_vartheta(disk4, rel.multivalued(9)))


def test_bound_test_inconclusive_beyond_one(disk4):
    m = core.weyl(disk4, -1.0).matrix
    r = ext.selfadjointness_bound_test(ext.from_vartheta(disk4, rel.graph(2.0 * m)))
    assert abs(r.c2 - 2.0) < 1e-8 and r.verdict == "inconclusive"


def test_compactness_diagnostic_families():
    disks = [models.make_disk_model(modes=n, degree=24) for n in (6, 12, 24)]
    smooth = ext.compactness_diagnostic([models.robin_extension(d, lambda t: 1 + 0.5 * np.cos(t)) for d in disks])
    weyl = ext.compactness_diagnostic([ext.from_vartheta(d, rel.graph(core.weyl(d, -1.0).matrix)) for d in disks])
    assert smooth["compact"] and not weyl["compact"]


def _realization_cases(rng, g):
    a = rng.standard_normal((g, g)) + 1j * rng.standard_normal((g, g))
    v = rng.standard_normal((2 * g, 1)) + 0j
    v[g:] = v[:g] * rng.standard_normal()
    return {
        "self_adjoint": rel.graph(a + a.conj().T),
        "dissipative": rel.graph(a + a.conj().T + 1j * a @ a.conj().T),
        "accumulative": rel.graph(a + a.conj().T - 1j * a @ a.conj().T),
        "symmetric": rel.make_relation(v, g),
        "general": rel.graph(a),
        "dirichlet": rel.multivalued(g),
    }


def test_realization_matches_classification(interval_small, rng):
    scale = core.gelfand_scale(interval_small)
    for name, theta in _realization_cases(rng, 2).items():
        h = ext.build_extension(interval_small, theta, scale=scale)
        assert ext.realized_classification(h).flags() == h.classification.flags(), name


def test_realization_numerical_range_of_dissipative(interval_small):
    h = ext.build_extension(interval_small, rel.graph(1j * np.eye(2)))
    k = ext.realize(h).compression
    rng = np.random.default_rng(1)
    for _ in range(20):
        x = rng.standard_normal(k.shape[0]) + 1j * rng.standard_normal(k.shape[0])
        assert np.vdot(x, k @ x).imag >= -1e-9 * np.vdot(x, x).real


def test_adjoint_correspondence(interval_small, rng):
    for theta in _realization_cases(rng, 2).values():
        h = ext.build_extension(interval_small, theta)
        assert ext.adjoint_correspondence_check(h)["residual"] < 1e-9


def test_monotone_parameterization(interval_small):
    # a one-dimensional symmetric theta inside a self-adjoint one gives nested domains
    big = rel.graph(np.diag([1.0, -2.0]))
    small = rel.make_relation(big.basis[:, :1], 2)
    assert rel.contains(big, small)
    hb = ext.build_extension(interval_small, big)
    hs = ext.build_extension(interval_small, small, scale=hb.scale)
    db, ds = ext.realize(hb).domain, ext.realize(hs).domain
    qb = np.linalg.qr(db)[0]
    assert np.linalg.norm(ds - qb @ (qb.conj().T @ ds)) < 1e-8 * np.linalg.norm(ds)
