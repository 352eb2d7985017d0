"""End-to-end acceptance suite.

Each test covers one acceptance criterion at its stated tolerance and prints
one pass/fail line (visible with ``pytest -s``); criteria with a runtime
budget assert it.
"""

import math
import time
from contextlib import contextmanager

import numpy as np
import pytest
from conftest import random_density

from twopol.analytic import dop_second_analytic, ntilde_analytic, ntilde_quadrature
from twopol.dop import (
    METHOD_FIRST,
    METHOD_SECOND,
    dop_first,
    dop_second,
    extremize_intensity,
    intensity_first,
    intensity_second,
    perfect_polarization_index,
)
from twopol.fock import (
    Mode,
    apply_annihilation,
    apply_inverse_annihilation_x,
    apply_vacuum_projector,
    density_from_pure,
    directional_moment,
    normally_ordered_moment,
)
from twopol.poincare import PolarizationVector, fock_basis_change, stokes_parameters
from twopol.states import (
    UnpolarizedWeights,
    biphoton_qutrit,
    coherent_state,
    hidden_polarized,
    phase_randomized_coherent,
    thermal_product,
    unpolarized,
)

THETA_GRID = (0.0, math.pi / 8, math.pi / 4, 3 * math.pi / 8, math.pi / 2)


@contextmanager
def criterion(label, budget=None):
    started = time.perf_counter()
    try:
        yield
    except Exception:
        print(f"criterion {label}: FAIL")
        raise
    elapsed = time.perf_counter() - started
    if budget is not None:
        assert elapsed < budget, f"criterion {label} took {elapsed:.3f}s, budget {budget}s"
    print(f"criterion {label}: PASS ({elapsed:.3f}s)")


def test_criterion_1_qutrit_perfect_polarization():
    with criterion("1 qutrit perfect polarization", budget=0.1):
        psi = biphoton_qutrit()
        result = perfect_polarization_index(psi)
        assert result.polarized
        assert result.p == pytest.approx(math.sqrt(2.0), abs=1e-9)
        assert result.residual < 1e-12
        # Operator identity: inverse-annihilation route equals p (1 - V_x)|psi>.
        lhs = apply_inverse_annihilation_x(apply_annihilation(psi, Mode.Y))
        kept = apply_vacuum_projector(psi, Mode.X)
        rhs = result.p * (psi.amps - kept.amps)
        assert float(np.max(np.abs(lhs.amps - rhs))) < 1e-10


def test_criterion_2_isotropy_of_plain_intensity():
    with criterion("2 plain-intensity isotropy", budget=1.0):
        rho = phase_randomized_coherent(2.0, cutoff=40)
        rng = np.random.default_rng(101)
        for _ in range(20):
            v = PolarizationVector(rng.uniform(0, math.pi), rng.uniform(-math.pi, math.pi))
            assert intensity_first(rho, v) == pytest.approx(2.0, abs=1e-8)
        assert dop_first(rho).dop < 1e-8


def test_criterion_3_conditioned_intensity_matches_closed_form():
    with criterion("3 conditioned intensity vs closed form", budget=2.0):
        rho = phase_randomized_coherent(2.0, cutoff=40)
        for chi in THETA_GRID:
            values = []
            for delta in (0.0, math.pi / 3):
                value = intensity_second(rho, PolarizationVector(chi, delta))
                assert value == pytest.approx(ntilde_analytic(2.0, chi), abs=1e-8)
                values.append(value)
            assert abs(values[0] - values[1]) < 1e-10


def test_criterion_4_quadrature_route_consistency():
    with criterion("4 quadrature vs closed form"):
        for n0 in (0.5, 1.0, 2.0, 4.0):
            for chi in (0.0, math.pi / 6, math.pi / 3, math.pi / 2):
                assert ntilde_quadrature(n0, chi, panels=512) == pytest.approx(
                    ntilde_analytic(n0, chi), abs=1e-10
                )


def test_criterion_5_dop_reproduction_and_limits():
    with criterion("5 conditioned DOP vs closed form", budget=5.0):
        for n0 in (0.1, 1.0, 2.0, 4.0):
            from twopol.states import StateFamily, Family

            rho = StateFamily(Family.PHASE_RANDOMIZED_COHERENT, {"n0": n0}).build()
            assert dop_second(rho).dop == pytest.approx(dop_second_analytic(n0), abs=1e-6)
        assert dop_second_analytic(0.01) < 0.01
        assert dop_second_analytic(100.0) > 0.95


def test_criterion_6_hidden_polarization():
    with criterion("6 hidden polarization"):
        rho = hidden_polarized(2.0, cutoff=30)
        for chi in THETA_GRID:
            value = intensity_second(rho, PolarizationVector(chi, 0.4))
            assert value == pytest.approx(ntilde_analytic(2.0, chi), abs=1e-6)
        _, s1, s2, s3 = stokes_parameters(rho)
        assert max(abs(s1), abs(s2), abs(s3)) < 1e-10
        pair = normally_ordered_moment(rho, (0, 0, 1, 1))
        assert abs(pair) == pytest.approx(2.0, abs=1e-6)


def test_criterion_7_fourth_order_directional_moment():
    with criterion("7 fourth-order moment"):
        rho = phase_randomized_coherent(1.0, cutoff=30)
        for theta in THETA_GRID:
            value = directional_moment(rho, theta, 2, 2)
            assert value.real == pytest.approx(
                0.25 * (5.0 - math.cos(4.0 * theta)), abs=1e-8
            )


def test_criterion_8_block_uniform_state_is_unpolarized():
    with criterion("8 block-uniform zero DOP"):
        rho = unpolarized(UnpolarizedWeights(np.array([0.5, 0.25])), cutoff=3)
        assert dop_second(rho).dop < 1e-10
        rng = np.random.default_rng(102)
        reference = intensity_second(rho, PolarizationVector(0.0, 0.0))
        for _ in range(10):
            v = PolarizationVector(rng.uniform(0, math.pi), rng.uniform(-math.pi, math.pi))
            assert intensity_second(rho, v) == pytest.approx(reference, abs=1e-12)


def test_criterion_9_weak_field_correspondence():
    with criterion("9 weak-field correspondence"):
        rho = thermal_product(0.05, cutoff=16)
        assert abs(dop_first(rho).dop - dop_second(rho).dop) < 1e-6
        rho = density_from_pure(coherent_state(1.0, 1.0, cutoff=25))
        assert dop_first(rho).dop == pytest.approx(1.0, abs=1e-8)
        assert dop_second(rho).dop == pytest.approx(1.0, abs=1e-8)


def test_criterion_10_property_suites():
    with criterion("10 property suites"):
        rng = np.random.default_rng(103)

        # Density invariants on every constructor output.
        built = [
            density_from_pure(coherent_state(0.8, 0.5j, cutoff=12)),
            phase_randomized_coherent(1.0, cutoff=15),
            hidden_polarized(1.0, cutoff=15),
            unpolarized(UnpolarizedWeights(np.array([0.5, 0.25])), cutoff=4),
            thermal_product(0.3, cutoff=20),
            density_from_pure(biphoton_qutrit()),
        ]
        for rho in built:
            rho.validate()
            assert rho.tail_mass < 1e-12

        # Conditioned intensity never exceeds the plain one.
        for _ in range(50):
            rho = random_density(rng, cutoff=6)
            v = PolarizationVector(rng.uniform(0, math.pi), rng.uniform(-math.pi, math.pi))
            assert intensity_second(rho, v) <= intensity_first(rho, v) + 1e-10

        # Rotation covariance of both DOPs.
        cutoff = 6
        rho = random_density(rng, cutoff, sector=True)
        base = (dop_first(rho).dop, dop_second(rho).dop)
        for _ in range(10):
            v = PolarizationVector(rng.uniform(0, math.pi), rng.uniform(-math.pi, math.pi))
            u = fock_basis_change(v, cutoff)
            rotated = type(rho)(cutoff, u @ rho.matrix @ u.conj().T)
            assert dop_first(rotated).dop == pytest.approx(base[0], abs=1e-6)
            assert dop_second(rotated).dop == pytest.approx(base[1], abs=1e-6)

        # Extremizer local optimality spot check.
        rho = random_density(rng, cutoff=5, sector=True)
        for method in (METHOD_FIRST, METHOD_SECOND):
            report = extremize_intensity(rho, method, refine_tol=1e-10)
            evaluate = intensity_first if method == METHOD_FIRST else intensity_second
            for dchi in 1e-3 * np.arange(-2, 3):
                for ddelta in 1e-3 * np.arange(-2, 3):
                    chi = min(max(report.argmax.chi + dchi, 0.0), math.pi)
                    probe = evaluate(rho, PolarizationVector(chi, report.argmax.delta + ddelta))
                    assert probe <= report.max_intensity + 1e-10
                    chi = min(max(report.argmin.chi + dchi, 0.0), math.pi)
                    probe = evaluate(rho, PolarizationVector(chi, report.argmin.delta + ddelta))
                    assert probe >= report.min_intensity - 1e-10
