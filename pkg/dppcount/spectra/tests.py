import math
from unittest.mock import patch

import numpy as np
from django.test import SimpleTestCase
from numpy.testing import assert_allclose
from scipy.special import jv, kv, roots_legendre

from spectra import ensembles, kernels
from spectra.counting import (
    CountDistribution,
    clt_distance,
    distribution_from_spectrum,
    gaussian_approximation,
    lclt_distance,
    lclt_report,
    log_concavity_check,
    mean_variance,
    poisson_binomial,
)
from spectra.exceptions import (
    ConventionError,
    DegenerateConditioning,
    DegenerateDistribution,
    DomainError,
    InvalidArgument,
    NonContractiveOperator,
    TruncationError,
)
from spectra.fredholm import (
    Spectrum,
    fredholm_det,
    nystrom_matrix,
    nystrom_spectrum,
    trace_mean_variance,
    xi_zeros,
)
from spectra.quadrature import (
    default_order,
    gauss_legendre,
    map_to_interval,
    rule_on,
    truncated_interval,
)
from spectra.special_functions import (
    AIRY_CONTRACT,
    airy_ai,
    airy_ai_prime,
    airy_pair,
    gaussian_cdf,
    gaussian_pdf,
    regularized_lower_gamma,
)

AI_0 = 0.355028053887817239
AIP_0 = -0.258819403792806798


def maclaurin_airy(x, terms=60):
    """Ai(x), Ai'(x) from the two Maclaurin series, summed with math.fsum."""
    x3 = x ** 3
    a, b = 1.0, 1.0
    f, g, df, dg = [], [], [], []
    for k in range(terms):
        f.append(a * x ** (3 * k))
        g.append(b * x ** (3 * k + 1))
        if k > 0:
            df.append(3 * k * a * x ** (3 * k - 1))
        dg.append((3 * k + 1) * b * x3 ** k)
        a /= (3 * k + 2) * (3 * k + 3)
        b /= (3 * k + 3) * (3 * k + 4)
    ai = AI_0 * math.fsum(f) + AIP_0 * math.fsum(g)
    aip = AI_0 * math.fsum(df) + AIP_0 * math.fsum(dg)
    return ai, aip


def bessel_airy(x):
    """Ai(x), Ai'(x) through Bessel functions of order 1/3 and 2/3."""
    z = abs(x)
    zeta = 2.0 * z ** 1.5 / 3.0
    if x > 0:
        ai = math.sqrt(z / 3.0) * kv(1.0 / 3.0, zeta) / math.pi
        aip = -z * kv(2.0 / 3.0, zeta) / (math.pi * math.sqrt(3.0))
    else:
        ai = math.sqrt(z) * (jv(1.0 / 3.0, zeta) + jv(-1.0 / 3.0, zeta)) / 3.0
        aip = z * (jv(2.0 / 3.0, zeta) - jv(-2.0 / 3.0, zeta)) / 3.0
    return float(ai), float(aip)


def poisson_tail(a, x):
    """exp(-x) sum_{j<a} x^j / j!, terms by recurrence and math.fsum."""
    term = math.exp(-x)
    terms = [term]
    for j in range(1, a):
        term *= x / j
        terms.append(term)
    return math.fsum(terms)


def brute_force_counts(lambdas):
    """E(k) by enumerating all 2^n outcomes of the Bernoulli variables."""
    n = len(lambdas)
    masks = (np.arange(2 ** n)[:, None] >> np.arange(n)) & 1
    probs = np.prod(np.where(masks == 1, lambdas, 1.0 - np.asarray(lambdas)), axis=1)
    return np.bincount(masks.sum(axis=1), weights=probs, minlength=n + 1)


def doubled_real_eigenvalues(matrix):
    """Eigenvalues of [[Re, -Im], [Im, Re]]; each eigenvalue of ``matrix`` twice."""
    re, im = matrix.real, matrix.imag
    return np.linalg.eigvalsh(np.block([[re, -im], [im, re]]))


class QuadratureTests(SimpleTestCase):
    def test_rule_integrates_polynomials_exactly(self):
        rule = gauss_legendre(10)
        self.assertAlmostEqual(rule.integrate(lambda x: x ** 18), 2.0 / 19.0, delta=1e-14)
        self.assertAlmostEqual(rule.integrate(lambda x: x ** 7), 0.0, delta=1e-15)

    def test_nodes_and_weights_match_scipy(self):
        for n in (1, 2, 7, 20, 61):
            rule = gauss_legendre(n)
            nodes, weights = roots_legendre(n)
            assert_allclose(rule.nodes, nodes, atol=1e-13)
            assert_allclose(rule.weights, weights, atol=1e-13)

    def test_rules_are_symmetric(self):
        for n in (8, 9):
            rule = gauss_legendre(n)
            self.assertTrue(np.all(rule.nodes == -rule.nodes[::-1]))
            self.assertTrue(np.all(rule.weights == rule.weights[::-1]))
        self.assertEqual(gauss_legendre(9).nodes[4], 0.0)

    def test_weights_sum_to_interval_length(self):
        for n in (1, 5, 60, 500):
            self.assertAlmostEqual(gauss_legendre(n).weights.sum(), 2.0, delta=1e-13)

    def test_mapped_rule(self):
        rule = map_to_interval(gauss_legendre(30), 0.0, 10.0)
        self.assertEqual(rule.interval, (0.0, 10.0))
        self.assertAlmostEqual(rule.integrate(np.exp) / (math.exp(10.0) - 1.0), 1.0, delta=1e-12)

    def test_invalid_orders(self):
        for n in (0, 2001, 2.5, True):
            with self.assertRaises(InvalidArgument):
                gauss_legendre(n)

    def test_invalid_intervals(self):
        with self.assertRaises(InvalidArgument):
            map_to_interval(gauss_legendre(4), 1.0, 1.0)
        with self.assertRaises(InvalidArgument):
            map_to_interval(gauss_legendre(4), 0.0, math.inf)

    def test_truncated_interval(self):
        self.assertEqual(truncated_interval(-5.0, math.inf), (-5.0, 12.0))
        self.assertEqual(truncated_interval(-5.0, math.inf, truncation=8.0), (-5.0, 8.0))
        self.assertEqual(truncated_interval(0.0, 10.0), (0.0, 10.0))
        with self.assertRaises(InvalidArgument):
            truncated_interval(13.0, math.inf)

    def test_default_order_policy(self):
        self.assertEqual(default_order(10.0), 60)
        self.assertEqual(default_order(25.0), 150)
        self.assertEqual(default_order(160.0), 960)
        self.assertEqual(default_order(1000.0), 2000)
        self.assertEqual(rule_on(0.0, 10.0).order, 60)


class SpecialFunctionTests(SimpleTestCase):
    def test_airy_at_origin(self):
        self.assertAlmostEqual(airy_ai(0.0), AI_0, delta=1e-15)
        self.assertAlmostEqual(airy_ai_prime(0.0), AIP_0, delta=1e-15)

    def test_airy_matches_maclaurin_series(self):
        for x in (-3.0, -1.0, -0.25, 0.5, 2.0):
            ai, aip = maclaurin_airy(x)
            self.assertTrue(AIRY_CONTRACT.accepts(airy_ai(x), ai), x)
            self.assertTrue(AIRY_CONTRACT.accepts(airy_ai_prime(x), aip), x)

    def test_airy_matches_bessel_form_in_asymptotic_ranges(self):
        for x in (-30.0, -20.0, -12.0, -7.0, 6.5, 8.0, 10.0, 15.0):
            ai, aip = bessel_airy(x)
            self.assertTrue(AIRY_CONTRACT.accepts(airy_ai(x), ai), x)
            self.assertTrue(AIRY_CONTRACT.accepts(airy_ai_prime(x), aip), x)

    def test_airy_equation_residual(self):
        h = 1e-5
        xs = np.linspace(-10.0, 5.0, 61)
        ai, _ = airy_pair(xs)
        _, aip_right = airy_pair(xs + h)
        _, aip_left = airy_pair(xs - h)
        second = (aip_right - aip_left) / (2.0 * h)
        assert_allclose(second, xs * ai, rtol=0.0, atol=1e-7)

    def test_derivative_matches_difference_quotient(self):
        h = 1e-5
        xs = np.linspace(-10.0, 5.0, 61)
        quotient = (airy_ai(xs + h) - airy_ai(xs - h)) / (2.0 * h)
        assert_allclose(quotient, airy_ai_prime(xs), rtol=0.0, atol=1e-7)

    def test_airy_pair_is_vectorised(self):
        xs = np.linspace(-10.0, 5.0, 7)
        ai, aip = airy_pair(xs)
        self.assertEqual(ai.shape, (7,))
        self.assertAlmostEqual(ai[3], airy_ai(xs[3]), delta=0.0)
        self.assertIsInstance(airy_pair(1.0)[0], float)

    def test_airy_outside_supported_range(self):
        for x in (-50.0, 25.0):
            with self.assertRaises(DomainError):
                airy_ai(x)

    def test_regularized_lower_gamma(self):
        self.assertAlmostEqual(regularized_lower_gamma(1, 4.0), 1.0 - math.exp(-4.0), delta=1e-15)
        self.assertAlmostEqual(regularized_lower_gamma(3, 2.0), 1.0 - 5.0 * math.exp(-2.0), delta=1e-14)
        self.assertEqual(regularized_lower_gamma(5, 0.0), 0.0)
        values = regularized_lower_gamma(np.arange(1, 4), 1.0)
        self.assertEqual(values.shape, (3,))

    def test_regularized_lower_gamma_complements_poisson_tail(self):
        for a in (1, 2, 5, 30, 120):
            for x in (0.5, 3.0, 10.0, 100.0, 130.0):
                total = regularized_lower_gamma(a, x) + poisson_tail(a, x)
                self.assertAlmostEqual(total, 1.0, delta=1e-13, msg=f"a={a} x={x}")

    def test_regularized_lower_gamma_is_monotone(self):
        xs = np.linspace(0.0, 60.0, 241)
        for a in (1, 4, 25):
            self.assertTrue(np.all(np.diff(regularized_lower_gamma(a, xs)) >= -1e-15), a)
        by_order = regularized_lower_gamma(np.arange(1, 80), 30.0)
        self.assertTrue(np.all(np.diff(by_order) <= 1e-15))

    def test_regularized_lower_gamma_rejects_bad_arguments(self):
        for a, x in ((0, 1.0), (1.5, 1.0), (2, -1.0)):
            with self.assertRaises(InvalidArgument):
                regularized_lower_gamma(a, x)

    def test_gaussian(self):
        self.assertAlmostEqual(gaussian_pdf(0.0), 1.0 / math.sqrt(2.0 * math.pi), delta=1e-16)
        self.assertAlmostEqual(gaussian_cdf(1.0), 0.841344746068543, delta=1e-12)
        self.assertAlmostEqual(gaussian_cdf(0.0), 0.5, delta=0.0)

    def test_gaussian_cdf_symmetry(self):
        xs = np.linspace(-12.0, 12.0, 97)
        assert_allclose(gaussian_cdf(xs) + gaussian_cdf(-xs), 1.0, rtol=0.0, atol=1e-15)


class KernelTests(SimpleTestCase):
    def test_sine_kernel(self):
        kernel = kernels.sine_kernel()
        self.assertEqual(kernel.name, "sine")
        self.assertAlmostEqual(kernel.evaluate(0.5, 0.0), 2.0 / math.pi, delta=1e-15)
        self.assertEqual(kernel.evaluate(3.0, 3.0), 1.0)
        assert_allclose(kernels.sine_kernel(density=2.0).diagonal([0.0, 1.5]), [2.0, 2.0])

    def test_sine_kernel_rejects_non_positive_density(self):
        with self.assertRaises(InvalidArgument):
            kernels.sine_kernel(density=0.0)

    def test_plus_minus_kernels(self):
        plus = kernels.sine_pm_kernel("+")
        minus = kernels.sine_pm_kernel(-1)
        x, y = 0.3, 1.1
        self.assertAlmostEqual(plus.evaluate(x, y), 0.5 * (np.sinc(x - y) + np.sinc(x + y)), delta=1e-15)
        self.assertAlmostEqual(minus.evaluate(x, y), 0.5 * (np.sinc(x - y) - np.sinc(x + y)), delta=1e-15)
        with self.assertRaises(InvalidArgument):
            kernels.sine_pm_kernel("*")

    def test_airy_kernel_matches_integral_representation(self):
        # K(x, y) = int_0^inf Ai(x + t) Ai(y + t) dt
        rule = map_to_interval(gauss_legendre(200), 0.0, 18.0)
        kernel = kernels.airy_kernel()
        for x, y in ((-1.0, 0.5), (-2.0, -2.0 + 5e-5), (0.7, 0.7)):
            reference = rule.integrate(lambda t: airy_ai(x + t) * airy_ai(y + t))
            self.assertAlmostEqual(kernel.evaluate(x, y), reference, delta=1e-12)

    def test_airy_diagonal(self):
        kernel = kernels.airy_kernel()
        ai, aip = airy_pair(1.0)
        self.assertAlmostEqual(kernel.evaluate(1.0, 1.0), aip ** 2 - ai ** 2, delta=1e-16)
        matrix = kernel.matrix(np.array([-3.0, 0.0, 2.0]))
        assert_allclose(matrix, matrix.T, atol=1e-15)

    def test_ginibre_kernel_is_hermitian(self):
        kernel = kernels.ginibre_kernel()
        w, z = 0.3 + 0.4j, -0.2 + 1.0j
        self.assertTrue(kernel.is_complex)
        self.assertAlmostEqual(kernel.evaluate(w, z), np.conj(kernel.evaluate(z, w)), delta=1e-16)
        assert_allclose(kernel.diagonal(np.array([0.0, 1.0 + 1.0j])), [1.0 / math.pi] * 2)

    def test_deflate_vanishes_through_the_point(self):
        kernel = kernels.deflate(kernels.sine_kernel(), 0.0)
        self.assertEqual(kernel.name, "sine|0")
        self.assertAlmostEqual(kernel.evaluate(0.0, 0.7), 0.0, delta=1e-16)
        self.assertAlmostEqual(kernel.evaluate(0.4, 0.4), 1.0 - np.sinc(0.4) ** 2, delta=1e-15)

    def test_deflate_twice(self):
        kernel = kernels.deflate(kernels.deflate(kernels.sine_kernel(), 0.0), 2.0)
        self.assertAlmostEqual(kernel.evaluate(2.0, 1.0), 0.0, delta=1e-15)
        self.assertAlmostEqual(kernel.evaluate(0.0, 1.0), 0.0, delta=1e-15)

    def test_nystrom_matrices_are_contractive(self):
        cases = (
            (kernels.sine_kernel(), (0.0, 10.0)),
            (kernels.sine_kernel(density=2.0), (0.0, 3.0)),
            (kernels.sine_pm_kernel("+"), (-5.0, 5.0)),
            (kernels.sine_pm_kernel("-"), (-5.0, 5.0)),
            (kernels.airy_kernel(), (-8.0, 12.0)),
            (kernels.ginibre_kernel(), (0.0, 3.0)),
        )
        for kernel, region in cases:
            eigenvalues = np.linalg.eigvalsh(nystrom_matrix(kernel, rule_on(*region)))
            self.assertGreaterEqual(eigenvalues.min(), -1e-10, kernel.name)
            self.assertLessEqual(eigenvalues.max(), 1.0 + 1e-10, kernel.name)

    def test_deflated_kernels_stay_positive(self):
        cases = (
            (kernels.deflate(kernels.sine_kernel(), 0.0), (0.0, 4.0)),
            (kernels.deflate(kernels.deflate(kernels.sine_kernel(), 0.0), 2.0), (0.0, 2.0)),
            (kernels.deflate(kernels.airy_kernel(), -3.0), (-3.0, 12.0)),
            (kernels.deflate(kernels.airy_kernel(), 1.0), (1.0, 12.0)),
        )
        for kernel, region in cases:
            eigenvalues = np.linalg.eigvalsh(nystrom_matrix(kernel, rule_on(*region)))
            self.assertGreaterEqual(eigenvalues.min(), -1e-9, kernel.name)
            self.assertLessEqual(eigenvalues.max(), 1.0 + 1e-10, kernel.name)

    def test_deflate_where_density_vanishes(self):
        with self.assertRaises(DegenerateConditioning):
            kernels.deflate(kernels.airy_kernel(), 15.0)


class FredholmTests(SimpleTestCase):
    def test_sine_spectrum_lies_in_unit_interval_and_sums_to_length(self):
        spectrum = nystrom_spectrum(kernels.sine_kernel(), (0.0, 10.0), order=60)
        self.assertEqual(spectrum.quad_order, 60)
        self.assertEqual(spectrum.lambdas.size, 60)
        self.assertTrue(np.all(np.diff(spectrum.lambdas) <= 0.0))
        self.assertTrue(np.all((spectrum.lambdas >= 0.0) & (spectrum.lambdas <= 1.0)))
        self.assertLessEqual(spectrum.max_excursion, 1e-9)
        self.assertAlmostEqual(spectrum.lambdas.sum(), 10.0, delta=1e-9)

    def test_trace_route_matches_spectrum(self):
        for kernel, region in ((kernels.sine_kernel(), (0.0, 10.0)), (kernels.airy_kernel(), (-8.0, 12.0))):
            spectrum = nystrom_spectrum(kernel, region)
            mu, sigma2 = trace_mean_variance(kernel, region)
            lam = spectrum.lambdas
            self.assertAlmostEqual(mu, lam.sum(), delta=1e-9)
            self.assertAlmostEqual(sigma2, np.sum(lam * (1.0 - lam)), delta=1e-9)

    def test_trace_grows_with_the_region(self):
        sine = [nystrom_spectrum(kernels.sine_kernel(), (0.0, s)).lambdas.sum() for s in (2.0, 4.0, 8.0)]
        self.assertTrue(np.all(np.diff(sine) > 0.0))
        airy = [nystrom_spectrum(kernels.airy_kernel(), (-s, math.inf)).lambdas.sum() for s in (1.0, 3.0, 5.0)]
        self.assertTrue(np.all(np.diff(airy) > 0.0))

    def test_top_eigenvalues_converged_in_order(self):
        cases = (
            (kernels.sine_kernel(), (0.0, 10.0)),
            (kernels.sine_pm_kernel("+"), (-10.0, 10.0)),
            (kernels.sine_pm_kernel("-"), (-10.0, 10.0)),
            (kernels.airy_kernel(), (-5.0, math.inf)),
        )
        for kernel, region in cases:
            coarse = nystrom_spectrum(kernel, region, order=60).lambdas[:30]
            fine = nystrom_spectrum(kernel, region, order=120).lambdas[:30]
            assert_allclose(coarse, fine, rtol=0.0, atol=1e-9, err_msg=kernel.name)

    def test_half_infinite_region_is_truncated(self):
        spectrum = nystrom_spectrum(kernels.airy_kernel(), (-5.0, math.inf))
        self.assertEqual(spectrum.region, (-5.0, 12.0))
        self.assertEqual(spectrum.quad_order, 102)
        self.assertTrue(np.all((spectrum.lambdas >= 0.0) & (spectrum.lambdas <= 1.0)))

    def test_fredholm_determinant_is_the_gap_probability(self):
        spectrum = nystrom_spectrum(kernels.sine_kernel(), (0.0, 2.0))
        dist = distribution_from_spectrum(spectrum)
        self.assertAlmostEqual(fredholm_det(spectrum, 1.0), dist[0], delta=1e-13)
        self.assertAlmostEqual(fredholm_det(spectrum, 0.0), 1.0, delta=0.0)

    def test_xi_zeros_are_negative(self):
        spectrum = nystrom_spectrum(kernels.sine_kernel(), (0.0, 10.0))
        zeros = xi_zeros(spectrum)
        self.assertTrue(np.all(zeros < 0.0))

    def test_saturated_eigenvalue_keeps_zero_negative(self):
        spectrum = Spectrum.from_eigenvalues([0.5, 1.0])
        zeros = xi_zeros(spectrum)
        self.assertTrue(np.all(zeros < 0.0))
        self.assertAlmostEqual(zeros[1], -1.0, delta=1e-15)
        self.assertEqual(spectrum.mu_l[0], math.inf)

    def test_explicit_eigenvalues_are_checked(self):
        with self.assertRaises(InvalidArgument):
            Spectrum.from_eigenvalues([0.5, 1.5])

    def test_non_contractive_operator(self):
        doubled = kernels.Kernel(name="double-sine", function=lambda x, y: 2.0 * np.sinc(x - y))
        with self.assertRaises(NonContractiveOperator) as ctx:
            nystrom_spectrum(doubled, (0.0, 10.0))
        self.assertGreater(ctx.exception.excursion, 0.5)

    def test_order_floor(self):
        with self.assertRaises(InvalidArgument):
            nystrom_spectrum(kernels.sine_kernel(), (0.0, 1.0), order=10)

    def test_complex_hermitian_kernel(self):
        # A phase rotation of the sine kernel: unitarily equivalent, same spectrum.
        twisted = kernels.Kernel(
            name="twisted-sine",
            function=lambda x, y: np.exp(1j * (x - y)) * np.sinc(x - y),
            symmetry=kernels.COMPLEX_HERMITIAN,
        )
        region = (0.0, 4.0)
        direct = nystrom_spectrum(twisted, region).lambdas
        reference = nystrom_spectrum(kernels.sine_kernel(), region).lambdas
        assert_allclose(direct, reference, atol=1e-12)

        matrix = nystrom_matrix(twisted, rule_on(*region))
        doubled = np.sort(doubled_real_eigenvalues(matrix))[::-1]
        assert_allclose(doubled[0::2], direct, atol=1e-12)
        assert_allclose(doubled[1::2], direct, atol=1e-12)

    def test_retained_drops_negligible_eigenvalues(self):
        spectrum = Spectrum.from_eigenvalues([0.9, 0.2, 1e-20, 0.0])
        assert_allclose(spectrum.retained(), [0.9, 0.2])


class CountingTests(SimpleTestCase):
    def test_matches_brute_force_enumeration(self):
        rng = np.random.default_rng(20240601)
        for _ in range(200):
            n = int(rng.integers(0, 17))
            lambdas = rng.random(n)
            dist = poisson_binomial(lambdas)
            oracle = brute_force_counts(lambdas)
            self.assertEqual(len(dist), n + 1)
            assert_allclose(dist.probabilities, oracle, rtol=0.0, atol=1e-13)

    def test_moments(self):
        lambdas = [0.9, 0.5, 0.25, 0.01]
        dist = poisson_binomial(lambdas)
        mu, sigma2 = mean_variance(lambdas)
        self.assertAlmostEqual(dist.probabilities.sum(), 1.0, delta=1e-15)
        self.assertAlmostEqual(dist.mu, mu, delta=1e-15)
        self.assertAlmostEqual(dist.sigma2, sigma2, delta=1e-15)
        self.assertAlmostEqual(mu, 1.66, delta=1e-15)
        from_moments = CountDistribution.from_probabilities(dist.probabilities)
        self.assertAlmostEqual(from_moments.mu, mu, delta=1e-14)
        self.assertAlmostEqual(from_moments.sigma2, sigma2, delta=1e-14)

    def test_order_of_eigenvalues_does_not_matter(self):
        rng = np.random.default_rng(7)
        lambdas = rng.random(40)
        reference = poisson_binomial(lambdas).probabilities
        for _ in range(5):
            shuffled = poisson_binomial(rng.permutation(lambdas)).probabilities
            assert_allclose(shuffled, reference, rtol=0.0, atol=1e-14)

    def test_reflected_spectrum_gives_symmetric_law(self):
        half = np.random.default_rng(11).random(12)
        dist = poisson_binomial(np.concatenate([half, 1.0 - half]))
        n = len(dist) - 1
        for k in range(n + 1):
            self.assertAlmostEqual(dist[k], dist[n - k], delta=1e-14, msg=f"k={k}")
        self.assertAlmostEqual(dist.mu, 12.0, delta=1e-12)

    def test_out_of_range_probabilities(self):
        with self.assertRaises(InvalidArgument):
            poisson_binomial([0.5, 1.5])
        with self.assertRaises(InvalidArgument):
            poisson_binomial([np.nan])

    def test_empty_spectrum_is_a_point_mass(self):
        dist = poisson_binomial([])
        assert_allclose(dist.probabilities, [1.0])
        self.assertEqual(dist[3], 0.0)

    def test_log_concavity(self):
        self.assertTrue(log_concavity_check(poisson_binomial([0.3, 0.6, 0.9, 0.2])))
        bimodal = CountDistribution.from_probabilities([0.45, 0.1, 0.45])
        result = log_concavity_check(bimodal)
        self.assertFalse(result)
        self.assertEqual(result.first_violation, 1)
        with self.assertRaises(InvalidArgument):
            log_concavity_check(bimodal, floor=0.0)

    def test_clt_distance_with_deterministic_part(self):
        dist = poisson_binomial([1.0, 1.0, 0.5])
        self.assertAlmostEqual(clt_distance(dist), 0.341345, delta=1e-6)

    def test_clt_distance_symmetric_binomial(self):
        self.assertAlmostEqual(clt_distance(poisson_binomial([0.5, 0.5])), 0.25, delta=1e-12)

    def test_lclt_distance_single_coin(self):
        self.assertAlmostEqual(lclt_distance(poisson_binomial([0.5])), 0.008030, delta=1e-6)

    def test_gaussian_approximation(self):
        dist = poisson_binomial([0.5] * 4)
        values = gaussian_approximation(dist, [2])
        self.assertAlmostEqual(values[0], gaussian_pdf(0.0), delta=1e-15)

    def test_degenerate_distribution(self):
        dist = poisson_binomial([1.0, 1.0])
        with self.assertRaises(DegenerateDistribution):
            lclt_distance(dist)
        with self.assertRaises(DegenerateDistribution):
            lclt_report(dist)

    def test_report_rows(self):
        dist = poisson_binomial([0.2, 0.5, 0.7])
        report = lclt_report(dist)
        self.assertEqual([row[0] for row in report.per_k], [0, 1, 2, 3])
        for k, e, gauss, diff in report.per_k:
            self.assertAlmostEqual(e - gauss, diff, delta=1e-16)
        self.assertTrue(report.log_concave)
        self.assertAlmostEqual(report.lclt_sup, lclt_distance(dist), delta=0.0)


class BulkGueTests(SimpleTestCase):
    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.result = ensembles.bulk_gue(10.0)

    def test_published_probabilities(self):
        dist = self.result.distribution
        expected = ensembles.PUBLISHED_TABLES["table1"]["rows"]["beta=2"]["exact"]
        for k, value in zip(range(7, 14), expected):
            self.assertAlmostEqual(dist[k], value, delta=5e-4, msg=f"E({k})")

    def test_mean_and_spread(self):
        dist = self.result.distribution
        self.assertAlmostEqual(dist.mu, 10.0, delta=1e-6)
        self.assertAlmostEqual(dist.sigma, 0.761, delta=1e-3)
        self.assertAlmostEqual(dist.probabilities.sum(), 1.0, delta=1e-12)
        self.assertTrue(log_concavity_check(dist))

    def test_variance_asymptotics(self):
        self.assertAlmostEqual(math.sqrt(ensembles.sine_variance_asymptotic(10.0)), 0.7612, delta=5e-4)
        self.assertAlmostEqual(
            ensembles.sine_variance_asymptotic(100.0) - ensembles.sine_variance_asymptotic(10.0),
            math.log(10.0) / math.pi ** 2,
            delta=1e-12,
        )
        self.assertAlmostEqual(self.result.asymptotic_mu, 10.0, delta=0.0)
        with self.assertRaises(InvalidArgument):
            ensembles.sine_variance_asymptotic(1.0)

    def test_variance_asymptotics_against_numeric_trace(self):
        _, sigma2 = trace_mean_variance(kernels.sine_kernel(), (0.0, 10.0))
        asymptotic = ensembles.sine_variance_asymptotic(10.0)
        self.assertLessEqual(abs(asymptotic - sigma2) / sigma2, 5e-3)

    def test_short_interval(self):
        dist = ensembles.bulk_gue(1e-3).distribution
        self.assertAlmostEqual(dist[0], 1.0 - 1e-3, delta=1e-5)

    def test_converged_in_order(self):
        coarse = ensembles.bulk_gue(10.0, order=60).distribution
        fine = ensembles.bulk_gue(10.0, order=120).distribution
        for k in range(7, 14):
            self.assertAlmostEqual(coarse[k], fine[k], delta=1e-8)

    def test_lclt_distance_decreases_with_length(self):
        distances = [ensembles.bulk_gue(s).lclt.lclt_sup for s in (10.0, 40.0, 160.0)]
        self.assertGreater(distances[0], distances[1])
        self.assertGreater(distances[1], distances[2])

    def test_rejects_non_positive_length(self):
        for s in (0.0, -1.0, math.nan):
            with self.assertRaises(InvalidArgument):
                ensembles.bulk_gue(s)


class SoftEdgeTests(SimpleTestCase):
    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.result = ensembles.soft_edge(ensembles.SOFT_EDGE_REFERENCE_S)

    def test_published_values(self):
        dist = self.result.distribution
        self.assertAlmostEqual(dist[10], 0.6405, delta=5e-4)
        self.assertAlmostEqual(dist.mu, 9.99, delta=1e-2)
        self.assertAlmostEqual(dist.sigma2, 0.377, delta=2e-3)
        self.assertAlmostEqual(gaussian_approximation(dist, [10])[0], 0.649, delta=2e-3)

    def test_asymptotic_mean(self):
        self.assertAlmostEqual(self.result.asymptotic_mu, 10.0, delta=1e-12)
        self.assertGreater(self.result.asymptotic_sigma2, 0.0)

    def test_spectrum_properties(self):
        spectrum = self.result.spectrum
        self.assertEqual(spectrum.region[1], 12.0)
        self.assertTrue(np.all((spectrum.lambdas >= 0.0) & (spectrum.lambdas <= 1.0)))
        self.assertTrue(np.all(xi_zeros(spectrum) < 0.0))
        self.assertTrue(log_concavity_check(self.result.distribution))

    def test_soft_edge_density(self):
        self.assertAlmostEqual(
            ensembles.soft_edge_density(-30.0), ensembles.soft_edge_density_asymptotic(-30.0), delta=2e-2
        )

    def test_largest_eigenvalue_density_integrates_to_one(self):
        grid = np.arange(-6.0, 6.0 + 1e-9, 0.05)
        values = ensembles.density_table("kth-largest-soft", 0, grid)
        integral, _ = ensembles.density_moments(grid, values)
        self.assertAlmostEqual(integral, 1.0, delta=2e-3)
        self.assertTrue(np.all(values > 0.0))
        significant = np.diff(values[values > 1e-8])
        signs = np.sign(significant[significant != 0.0])
        self.assertEqual(np.count_nonzero(np.diff(signs)), 1)

    def test_largest_eigenvalue_density_over_the_wide_grid(self):
        grid = np.arange(-10.0, 6.0 + 1e-9, 0.02)
        values = ensembles.density_table("kth-largest-soft", 0, grid, workers=4)
        integral, _ = ensembles.density_moments(grid, values)
        self.assertAlmostEqual(integral, 1.0, delta=2e-3)
        self.assertEqual(values[0], 0.0)
        self.assertTrue(np.all(values >= 0.0))

    def test_converged_in_order(self):
        s = ensembles.SOFT_EDGE_REFERENCE_S
        coarse = ensembles.soft_edge(s, order=60).distribution
        fine = ensembles.soft_edge(s, order=120).distribution
        for k in range(7, 14):
            self.assertAlmostEqual(coarse[k], fine[k], delta=1e-8)

    def test_profile_is_gaussian_after_recentring(self):
        xs = np.arange(-6.0, 6.0 + 1e-9, 0.1)
        _, _, values = ensembles.soft_edge_lclt_profile(10, xs)
        integral, first = ensembles.density_moments(xs, values)
        self.assertAlmostEqual(integral, 1.0, delta=2e-2)
        centre = first / integral
        spread = math.sqrt(ensembles.density_moments(xs, (xs - centre) ** 2 * values)[0] / integral)
        # The leading-order location leaves the profile an O(1) step left of 0.
        self.assertTrue(-1.5 < centre < 0.0, centre)
        peak = spread * float(np.interp(centre, xs, values))
        self.assertAlmostEqual(peak, 1.0 / math.sqrt(2.0 * math.pi), delta=0.1 / math.sqrt(2.0 * math.pi))

    def test_profile_integrates_to_one(self):
        xs = np.arange(-6.0, 6.0 + 1e-9, 0.1)
        mu_ell, sigma_ell, values = ensembles.soft_edge_lclt_profile(2, xs)
        self.assertAlmostEqual(mu_ell, (3.0 * math.pi) ** (2.0 / 3.0), delta=1e-12)
        self.assertGreater(sigma_ell, 0.0)
        self.assertAlmostEqual(ensembles.density_moments(xs, values)[0], 1.0, delta=2e-2)


class BulkSpacingTests(SimpleTestCase):
    def test_nearest_neighbour_spacing_is_normalised(self):
        grid = np.arange(0.0, 6.0 + 1e-9, 0.05)
        values = ensembles.density_table("spacing-bulk", 0, grid)
        self.assertEqual(values[0], 0.0)
        integral, mean = ensembles.density_moments(grid, values)
        self.assertAlmostEqual(integral, 1.0, delta=2e-3)
        self.assertAlmostEqual(mean, 1.0, delta=5e-3)

    def test_level_repulsion(self):
        value = ensembles.bulk_spacing_density(0, 0.05)
        self.assertGreater(value, 0.0)
        self.assertLess(value, 1e-2)

    def test_pair_density_vanishes_at_zero_separation(self):
        with self.assertRaises(DegenerateConditioning):
            ensembles.bulk_spacing_density(0, 1e-9)

    def test_pool_keeps_grid_order(self):
        grid = [0.5, 1.0, 1.5, 2.0]
        serial = ensembles.density_table("spacing-bulk", 1, grid, workers=1)
        pooled = ensembles.density_table("spacing-bulk", 1, grid, workers=3)
        self.assertTrue(np.array_equal(serial, pooled))

    def test_unknown_density(self):
        with self.assertRaises(InvalidArgument):
            ensembles.density_table("spacing-soft", 0, [1.0])
        with self.assertRaises(InvalidArgument):
            ensembles.bulk_spacing_density(-1, 1.0)


class OrthogonalSymplecticTests(SimpleTestCase):
    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.gse = ensembles.gse_counts(10.0)
        cls.goe = ensembles.goe_counts(5.0)

    def test_gse_published_row(self):
        self.assertAlmostEqual(self.gse[10], 0.6307, delta=5e-4)
        self.assertAlmostEqual(self.gse[9], 0.1819, delta=5e-4)
        self.assertAlmostEqual(self.gse[11], 0.1818, delta=5e-4)
        self.assertAlmostEqual(self.gse.sigma2, 0.387, delta=2e-3)
        self.assertAlmostEqual(self.gse.probabilities.sum(), 1.0, delta=1e-10)

    def test_gse_is_the_average_of_the_parity_laws(self):
        plus = ensembles.plus_minus_distribution("+", 10.0)
        minus = ensembles.plus_minus_distribution("-", 10.0)
        for n in range(len(self.gse)):
            self.assertAlmostEqual(2.0 * self.gse[n] - plus[n] - minus[n], 0.0, delta=1e-12)

    def test_parity_laws_share_the_mean(self):
        plus = ensembles.plus_minus_distribution("+", 10.0)
        minus = ensembles.plus_minus_distribution("-", 10.0)
        # The even part carries the extra quarter of the diagonal mass.
        self.assertAlmostEqual(plus.mu, 10.25, delta=5e-2)
        self.assertAlmostEqual(minus.mu, 9.75, delta=5e-2)
        self.assertAlmostEqual(plus.mu + minus.mu, 20.0, delta=1e-9)

    def test_goe_published_row(self):
        self.assertAlmostEqual(self.goe[10], 0.4169, delta=1e-3)
        self.assertAlmostEqual(self.goe[9], 0.2427, delta=1e-3)
        self.assertAlmostEqual(self.goe[11], 0.2416, delta=1e-3)
        self.assertAlmostEqual(self.goe.sigma2, 0.908, delta=3e-3)
        self.assertAlmostEqual(self.goe.probabilities.sum(), 1.0, delta=1e-9)

    def test_goe_recursion_identity(self):
        minus = ensembles.plus_minus_distribution("-", 5.0)
        for n in range(len(self.goe) // 2):
            self.assertAlmostEqual(self.goe[2 * n] + self.goe[2 * n + 1], minus[n], delta=1e-12)

    def test_goe_convention_error(self):
        broken = CountDistribution.from_probabilities([0.2, 0.3])
        with patch("spectra.ensembles.plus_minus_distribution", return_value=broken):
            with self.assertRaises(ConventionError):
                ensembles.goe_counts(5.0)

    def test_converged_in_order(self):
        for counts, s in ((ensembles.gse_counts, 10.0), (ensembles.goe_counts, 5.0)):
            coarse = counts(s, order=60)
            fine = counts(s, order=120)
            for k in range(7, 14):
                self.assertAlmostEqual(coarse[k], fine[k], delta=1e-8, msg=f"{counts.__name__} E({k})")

    def test_e_plus_minus(self):
        plus = ensembles.plus_minus_distribution("+", 10.0)
        self.assertAlmostEqual(ensembles.e_plus_minus("+", 10, 10.0), plus[10], delta=0.0)

    def test_parity_convolution_is_gue(self):
        parity = ensembles.gue_from_parity(5.0, order=120)
        direct = ensembles.bulk_gue(10.0, order=120).distribution
        for k in range(min(len(parity), len(direct))):
            self.assertAlmostEqual(parity[k], direct[k], delta=1e-10)

    def test_parity_variance_halves(self):
        plus = ensembles.plus_minus_distribution("+", 50.0)
        full = ensembles.bulk_gue(100.0).distribution
        self.assertAlmostEqual(plus.sigma2 / full.sigma2, 0.5, delta=0.05)

    def test_run_dispatch(self):
        result = ensembles.run("gse-bulk", s=10.0)
        self.assertEqual(result.ensemble, "gse-bulk")
        self.assertAlmostEqual(result.distribution[10], self.gse[10], delta=0.0)
        with self.assertRaises(InvalidArgument):
            ensembles.run("cue-bulk", s=1.0)


class GinibreTests(SimpleTestCase):
    def test_explicit_eigenvalues(self):
        for radius in (1.5, 2.0, 6.0):
            spectrum = ensembles.ginibre_spectrum(radius)
            self.assertAlmostEqual(spectrum.lambdas[0], 1.0 - math.exp(-radius ** 2), delta=1e-15)
            self.assertAlmostEqual(spectrum.lambdas.sum(), radius ** 2, delta=1e-10)
            self.assertTrue(np.all(np.diff(spectrum.lambdas) <= 0.0), radius)

    def test_matches_polar_nystrom(self):
        radius = 1.5
        r_rule = map_to_interval(gauss_legendre(30), 0.0, radius)
        angles = 2.0 * math.pi * np.arange(40) / 40
        points = (r_rule.nodes[:, None] * np.exp(1j * angles)[None, :]).ravel()
        weights = (r_rule.nodes * r_rule.weights)[:, None] * np.full(40, 2.0 * math.pi / 40)[None, :]
        root_w = np.sqrt(weights.ravel())
        matrix = root_w[:, None] * kernels.ginibre_kernel().matrix(points) * root_w[None, :]
        oracle = np.sort(np.linalg.eigvalsh(0.5 * (matrix + matrix.conj().T)))[::-1][:11]
        explicit = ensembles.ginibre_spectrum(radius).lambdas[:11]
        assert_allclose(explicit, oracle, atol=1e-6)

    def test_variance_follows_perimeter_law(self):
        result = ensembles.ginibre_disk(6.0)
        asymptotic = math.sqrt(ensembles.ginibre_sigma_asymptotic(2.0 * math.pi * 6.0))
        self.assertAlmostEqual(asymptotic, math.sqrt(6.0 / math.sqrt(math.pi)), delta=1e-12)
        self.assertLessEqual(abs(result.distribution.sigma - asymptotic) / asymptotic, 0.05)
        self.assertAlmostEqual(result.asymptotic_mu, 36.0, delta=0.0)
        self.assertTrue(log_concavity_check(result.distribution))

    def test_truncation(self):
        with self.assertRaises(TruncationError):
            ensembles.ginibre_spectrum(2.0, l_max=2)
        spectrum = ensembles.ginibre_spectrum(2.0, l_max=60)
        self.assertEqual(spectrum.lambdas.size, 61)

    def test_rejects_bad_radius(self):
        with self.assertRaises(InvalidArgument):
            ensembles.ginibre_disk(0.0)
