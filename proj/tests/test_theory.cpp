#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "cspin/dnp.hpp"
#include "cspin/observables.hpp"
#include "cspin/theory.hpp"

using namespace cspin;

namespace {

// Independent 2x2 matrix exponential of -i tau H via a scaled Taylor series.
// H = (a sigma_z + b sigma_x + c sigma_y)/2 in the (down, up) basis, where
// sigma_z = diag(-1, +1) and sigma_y = [[0, i], [-i, 0]].
Mat2 expm_segment(const ClassicalField& f, double tau) {
    const cplx i(0.0, 1.0);
    Mat2 h;
    h(0, 0) = -0.5 * f.a;
    h(1, 1) = 0.5 * f.a;
    h(0, 1) = 0.5 * (f.b + i * f.c);
    h(1, 0) = 0.5 * (f.b - i * f.c);

    int squarings = 0;
    double scale = tau;
    while (std::abs(scale) * f.magnitude() > 0.5) {
        scale *= 0.5;
        ++squarings;
    }
    Mat2 a;  // -i * scale * h
    for (int k = 0; k < 4; ++k) a.m[k] = -i * scale * h.m[k];
    Mat2 u = Mat2::identity();
    Mat2 term = Mat2::identity();
    for (int n = 1; n <= 24; ++n) {
        term = term * a;
        term = (cplx(1.0 / double(n)) * term);
        u = u + term;
    }
    for (int s = 0; s < squarings; ++s) u = u * u;
    return u;
}

Mat2 pulse_y() {
    Mat2 y;
    y(0, 1) = 1.0;
    y(1, 0) = -1.0;
    return y;
}

double off_identity(const Mat2& u) { return phase_distance(u, Mat2::identity()); }

}  // namespace

TEST_CASE("exact_cycle matches an independent matrix-exponential oracle") {
    const std::vector<ClassicalField> fields = {
        {2.0, 0.3, -0.7}, {10.0, 1.0, 2.0}, {0.1, 0.0, 5.0}, {-3.0, 2.5, 0.4}};
    for (const ClassicalField& f : fields) {
        for (double tau : {0.05, 0.6, 2.0}) {
            const Mat2 u = expm_segment(f, tau);
            const Mat2 oracle = pulse_y() * u * pulse_y() * u;
            const Mat2 got = exact_cycle(f, tau);
            CHECK(frobenius_norm(got - oracle) < 1e-13);
        }
    }
}

TEST_CASE("exact_cycle is unitary") {
    const ClassicalField f{7.3, -1.2, 0.8};
    for (double tau : {0.01, 0.5, 3.0}) {
        const Mat2 u = exact_cycle(f, tau);
        CHECK(frobenius_norm(u * u.dagger() - Mat2::identity()) < 1e-14);
    }
}

TEST_CASE("exact_cycle is trivial at the magic condition for any field axis") {
    // When tau * |field| = 2*pi the segment unitary is -I, so the cycle
    // collapses to the square of the pulse: identity up to a global phase.
    const std::vector<ClassicalField> fields = {
        {125.0, 2.0, 1.5}, {100.0, 0.0, 0.0}, {50.0, 30.0, -20.0}};
    for (const ClassicalField& f : fields) {
        const double tau = 2.0 * std::numbers::pi / f.magnitude();
        CHECK(off_identity(exact_cycle(f, tau)) < 1e-12);
    }
}

TEST_CASE("exact_cycle rejects degenerate inputs") {
    CHECK_THROWS_AS(exact_cycle({1.0, 0.0, 0.0}, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(exact_cycle({0.0, 0.0, 0.0}, 0.1), std::invalid_argument);
}

TEST_CASE("first_order_cycle identity cases") {
    // Without a transverse y component the first-order cycle is exactly I.
    const ClassicalField f{125.0, 4.0, 0.0};
    const double tau = 2.0 * std::numbers::pi / f.magnitude();
    const Mat2 u = first_order_cycle(f, tau);
    CHECK(frobenius_norm(u - Mat2::identity()) == 0.0);

    // Exactly at the magic angle theta' = 0 and the cycle is I for any axis.
    const ClassicalField g{90.0, 3.0, 7.0};
    const Mat2 v = first_order_cycle(g, 2.0 * std::numbers::pi / g.magnitude());
    CHECK(frobenius_norm(v - Mat2::identity()) < 1e-12);
}

TEST_CASE("first_order_cycle error shrinks quadratically near the magic angle") {
    const ClassicalField f{120.0, 2.0, 3.0};
    const double tau_magic = 2.0 * std::numbers::pi / f.magnitude();
    std::vector<double> log_eps, log_err;
    for (double eps : {0.04, 0.02, 0.01, 0.005}) {
        const double tau = tau_magic * (1.0 + eps);
        const double err = phase_distance(exact_cycle(f, tau), first_order_cycle(f, tau));
        log_eps.push_back(std::log(eps));
        log_err.push_back(std::log(err));
    }
    // Least-squares slope of log err vs log eps.
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < log_eps.size(); ++i) {
        mx += log_eps[i];
        my += log_err[i];
    }
    mx /= double(log_eps.size());
    my /= double(log_err.size());
    double num = 0, den = 0;
    for (std::size_t i = 0; i < log_eps.size(); ++i) {
        num += (log_eps[i] - mx) * (log_err[i] - my);
        den += (log_eps[i] - mx) * (log_eps[i] - mx);
    }
    const double slope = num / den;
    CHECK(slope == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("first_order_cycle enforces its domain of validity") {
    const ClassicalField f{10.0, 0.0, 1.0};
    // theta = tau * |field| far from 2*pi.
    CHECK_THROWS_AS(first_order_cycle(f, 0.01), std::invalid_argument);
    CHECK_THROWS_AS(first_order_cycle({0.0, 0.0, 0.0}, 0.1), std::invalid_argument);
}

TEST_CASE("effective_suppression reproduces its defining ratios") {
    const double omega = 100.0;
    const double h_bar_z = 6.0;
    const double h_oz = 1.4;
    // field.a = omega + full z Overhauser component.
    const ClassicalField g{omega + h_oz, 0.9, -2.2};
    const SuppressionFactors s = effective_suppression(g, 0.05, omega, h_bar_z);
    CHECK(s.hybrid == doctest::Approx(h_oz / (omega + h_bar_z)).epsilon(1e-14));
    CHECK(s.uni_dd == doctest::Approx(h_oz / omega).epsilon(1e-14));
    CHECK(s.avg_ham_coeff ==
          doctest::Approx(std::abs(h_bar_z * g.c / (omega + h_bar_z))).epsilon(1e-14));
    // A polarized mean field strictly improves on the bare ratio.
    CHECK(s.hybrid < s.uni_dd);

    CHECK_THROWS_AS(effective_suppression(g, 0.05, -1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(effective_suppression(g, 0.05, 1.0, -2.0), std::invalid_argument);
}

TEST_CASE("predict_magic_peak at zero polarization is 2*pi/tau") {
    const HyperfineSet set = compute_couplings({4, 5, 1.5, 2.0});
    const std::vector<double> p0(set.size(), 0.0);
    CHECK(predict_magic_peak(set, p0, 0.05) ==
          doctest::Approx(2.0 * std::numbers::pi / 0.05).epsilon(1e-14));
}

TEST_CASE("predict_magic_peak shifts by the mean Overhauser field") {
    const HyperfineSet set = compute_couplings({4, 5, 1.5, 2.0});
    for (double beta : {0.2, 0.8, 2.0}) {
        const std::vector<double> p = polarization_profile(beta, set);
        const OverhauserStats st = overhauser_stats(set, p);
        CHECK(predict_magic_peak(set, p, 0.05) ==
              doctest::Approx(2.0 * std::numbers::pi / 0.05 - st.mean_z)
                  .epsilon(1e-13));
    }
    // Monotone: stronger polarization moves the peak further down.
    const double f1 = predict_magic_peak(set, polarization_profile(0.3, set), 0.05);
    const double f2 = predict_magic_peak(set, polarization_profile(1.0, set), 0.05);
    CHECK(f2 < f1);

    CHECK_THROWS_AS(predict_magic_peak(set, {0.0}, 0.05), std::invalid_argument);
    CHECK_THROWS_AS(predict_magic_peak(set, std::vector<double>(set.size(), 0.0), 0.0),
                    std::invalid_argument);
}
