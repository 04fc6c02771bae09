import json
from fractions import Fraction

import numpy as np
import pytest

from HigherSpin.calculus import OperatorSpec, apply
from HigherSpin.geometry import QuadratureRule
from HigherSpin.harness import (CHECK_TABLE, CHECKS, CheckReport, HarnessError, Perturbation, RunConfig, Verifier,
                                borel_pompeiu_defect, build_d2_harmonic, convergence_study, d2_kernel_basis,
                                decay_defects, exit_code, judge, run_all, run_borel_pompeiu, run_eq_one_reproduction,
                                summary, verifier, write_reports)
from HigherSpin.polynomials import CliffPoly
from HigherSpin.spaces import basis


def test_config_validation():
    with pytest.raises(HarnessError):
        RunConfig(pairs=((2, 1),))
    with pytest.raises(HarnessError):
        RunConfig(mode='approx')
    with pytest.raises(HarnessError):
        RunConfig(tol=0.)
    with pytest.raises(HarnessError):
        RunConfig(xdeg=1)
    with pytest.raises(HarnessError):
        RunConfig(checks=('nope',))
    assert RunConfig(xdeg=1, checks=('clifford',)).xdeg == 1


def test_perturbations():
    assert Perturbation.parse('a_k').factor == Fraction(101, 100)
    omega = Perturbation.parse('omega:2')
    assert omega.factor == Fraction(2)
    assert str(omega) == 'omega:2'
    assert omega.constants().omega_scale == Fraction(2)
    with pytest.raises(HarnessError):
        Perturbation.parse('gravity')


def test_empty_run():
    reports = run_all(RunConfig(pairs=()))
    assert reports == []
    assert exit_code(reports) == 0


def test_judge():
    assert judge([0, CliffPoly.zero(3)], 'exact', 1e-8) == ('pass', 0.)
    assert judge([CliffPoly.constant(3, 1)], 'exact', 1e-8)[0] == 'fail'
    assert judge([1e-3], 'float', 1e-2)[0] == 'pass'
    assert judge([1e-1], 'float', 1e-2)[0] == 'fail'


@pytest.mark.parametrize('check', ['clifford', 'lemma72', 'decomposition', 'stokes-rk', 'reproduction'])
def test_checks_pass(check, exact_config):
    report = verifier(check, 3, 1, exact_config)
    assert report.status == 'pass'
    assert report.residual == 0.


def test_unavailable_checks_are_skipped(exact_config):
    report = verifier('fundamental', 3, 1, exact_config)
    assert report.status == 'skip'
    assert report.reason == 'm<5 for H_k'
    assert verifier('commutation', 3, 0, exact_config).status == 'skip'
    with pytest.raises(HarnessError):
        verifier('fundamental', 3, 1, exact_config, raise_errors=True)
    with pytest.raises(HarnessError):
        verifier('nope', 3, 1, exact_config)


def test_negative_controls():
    cfg = RunConfig(pairs=((3, 1),), perturbation=Perturbation('a_k'))
    assert verifier('lemma72', 3, 1, cfg).status == 'fail'
    cfg = RunConfig(pairs=((5, 1),), perturbation=Perturbation('omega'))
    assert verifier('fundamental', 5, 1, cfg).status == 'fail'


def test_runs_are_deterministic(exact_config):
    first = verifier('decomposition', 3, 2, exact_config)
    second = verifier('decomposition', 3, 2, exact_config)
    assert (first.status, first.residual) == (second.status, second.residual)


def test_reports(tmp_path):
    reports = [CheckReport('clifford', 3, 1, 'exact', 'pass', 0., 1.5, 0),
               CheckReport('green', 3, 1, 'exact', 'skip', 0., 0.1, 0, 'm<5 for H_k')]
    assert 'reason' not in json.loads(reports[0].to_json())
    target = write_reports(reports, tmp_path / 'out' / 'report.jsonl')
    lines = (tmp_path / 'out' / 'report.jsonl').read_text(encoding='utf-8').splitlines()
    assert [CheckReport.from_json(line) for line in lines] == reports
    assert target.suffix == '.md'
    assert '1 pass, 0 fail, 1 skip' in target.read_text(encoding='utf-8')
    assert exit_code(reports) == 0
    assert exit_code(reports + [CheckReport('kernels', 3, 1, 'exact', 'fail', 1., 1., 0)]) == 1
    assert summary(reports).startswith('| check |')


def test_d2_kernel():
    kernel = d2_kernel_basis(3, 1, 2)
    assert len(kernel) >= 12
    d2 = OperatorSpec('D2', 3, 1)
    assert all(apply(d2, f).is_zero for f in kernel)
    f = build_d2_harmonic(3, 1, 2, np.random.default_rng(1))
    assert apply(d2, f).is_zero
    with pytest.raises(HarnessError):
        build_d2_harmonic(4, 0, 2, np.random.default_rng(1))


def test_integral_formula_needs_m5():
    with pytest.raises(HarnessError):
        borel_pompeiu_defect(3, 1, CliffPoly.constant(3), (0, 0, 0), 1, (0, 0, 0), RunConfig().rule(3))


def test_reproduction_entry_point(exact_config):
    assert run_eq_one_reproduction(exact_config).status == 'pass'


def test_every_check_is_registered():
    assert set(CHECKS) == set(verifier.checks)


@pytest.mark.slow
def test_integral_formula_at_the_center(exact_config):
    assert run_borel_pompeiu(exact_config, centered=True).status == 'pass'
    assert verifier('green', 5, 1, RunConfig(pairs=((5, 1),))).status == 'pass'


@pytest.mark.slow
def test_off_center_quadrature_converges():
    reports, converged = convergence_study(RunConfig(pairs=((5, 1),), tol=1e-6), degrees=(6, 10, 20))
    residuals = [r.residual for r in reports]
    assert all(r.mode == 'float' for r in reports)
    assert residuals[1] * 10 <= residuals[0]
    assert residuals[2] * 10 <= residuals[1]
    assert residuals[2] <= 1e-6
    assert converged


def test_reproduction_defect_decays_quadratically():
    density = basis(3, 1, 'Mk').elements[0]
    outer, inner = decay_defects(3, 1, density, QuadratureRule(3))
    assert outer > 0
    assert inner == pytest.approx(outer / 4)


def test_decay_defect_for_scalar_density():
    outer, inner = decay_defects(3, 0, CliffPoly.constant(3), QuadratureRule(3))
    assert outer > 0
    assert inner == pytest.approx(outer / 4)


@pytest.mark.parametrize('check', ['decomposition', 'fundamental'])
def test_c4_perturbation_is_caught(check):
    cfg = RunConfig(pairs=((5, 1),), perturbation=Perturbation('c4'))
    assert verifier(check, 5, 1, cfg).status == 'fail'


def test_h_constant_perturbation_is_caught():
    cfg = RunConfig(pairs=((5, 1),), perturbation=Perturbation('h_constant'))
    assert verifier('fundamental', 5, 1, cfg).status == 'fail'


def test_unexpected_errors_fail_the_check(exact_config):
    def broken(m, k, cfg, rng):
        return [1 / 0]

    local = Verifier({**CHECK_TABLE, 'clifford': broken})
    report = local('clifford', 3, 1, exact_config)
    assert report.status == 'fail'
    assert report.reason.startswith('ZeroDivisionError')
    with pytest.raises(ZeroDivisionError):
        local('clifford', 3, 1, exact_config, raise_errors=True)


@pytest.mark.parametrize('check', ['spaces', 'kernels', 'commutation', 'stokes-tk', 'stokes-qk', 'conformal'])
def test_checks_pass_at_3_1(check, exact_config):
    assert verifier(check, 3, 1, exact_config).status == 'pass'


@pytest.mark.slow
@pytest.mark.parametrize('check,m,k', [('stokes-rk', 5, 1), ('stokes-tk', 5, 1), ('stokes-qk', 5, 1),
                                       ('conformal', 5, 1), ('spaces', 5, 1), ('kernels', 5, 1),
                                       ('commutation', 5, 1), ('green', 5, 1), ('reproduction', 5, 1),
                                       ('decomposition', 6, 1), ('fundamental', 6, 1), ('fundamental', 6, 2),
                                       ('kernels', 6, 2)])
def test_checks_pass_at_acceptance_pairs(check, m, k):
    report = verifier(check, m, k, RunConfig(pairs=((m, k),)))
    assert report.status == 'pass', report.reason
