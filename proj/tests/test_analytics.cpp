#include <doctest.h>

#include <cmath>
#include <random>

#include "sbs/analytics.hpp"
#include "sbs/errors.hpp"
#include "test_support.hpp"

using namespace sbs;
using namespace sbs::analytics;
using testsup::make_dual;
using testsup::ref_params;

TEST_CASE("single-channel gain: worked values") {
    const auto p = ref_params();
    CHECK(gain_single(p, {2.5e7, 0.5, PumpRole::upper}) * p.length ==
          doctest::Approx(40.0).epsilon(1e-12));
    CHECK(gain_single(p, {0.0, 0.7, PumpRole::upper}) == 0.0);
    // Independent evaluation of the formula at Delta = 0.
    CHECK(gain_single(p, {1e8, 0.0, PumpRole::upper}) * p.length ==
          doctest::Approx(200.0).epsilon(1e-12));
    // Lower channel uses the identical formula.
    CHECK(gain_single(p, {1e8, 2.0, PumpRole::lower}) * p.length ==
          doctest::Approx(40.0).epsilon(1e-12));
}

TEST_CASE("wavenumber shift: worked values and antisymmetry") {
    const auto p = ref_params();
    CHECK(wavenumber_shift_single(p, {1e8, 0.0, PumpRole::upper}) == 0.0);
    // Oracle: kappa = G * Delta = 4000 * 2 = 8000 1/m.
    CHECK(wavenumber_shift_single(p, {1e8, 2.0, PumpRole::upper}) ==
          doctest::Approx(8e3).epsilon(1e-12));
    CHECK(wavenumber_shift_single(p, {1e8, -0.5, PumpRole::upper}) ==
          doctest::Approx(-wavenumber_shift_single(p, {1e8, 0.5, PumpRole::upper}))
              .epsilon(1e-14));
}

TEST_CASE("lorentzian symmetry at random detunings") {
    const auto p = ref_params();
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> delta(0.01, 20.0);
    for (int i = 0; i < 50; ++i) {
        const double d = delta(rng);
        const PumpChannel plus{1e8, d, PumpRole::upper};
        const PumpChannel minus{1e8, -d, PumpRole::upper};
        CHECK(gain_single(p, plus) == doctest::Approx(gain_single(p, minus)).epsilon(1e-14));
        CHECK(wavenumber_shift_single(p, plus) ==
              doctest::Approx(-wavenumber_shift_single(p, minus)).epsilon(1e-14));
    }
}

TEST_CASE("gain peaks at zero detuning") {
    const auto p = ref_params();
    const double peak = gain_single(p, {1e8, 0.0, PumpRole::upper});
    for (int i = 1; i <= 500; ++i) {
        const double d = 10.0 * i / 500.0;
        CHECK(gain_single(p, {1e8, d, PumpRole::upper}) < peak);
    }
}

TEST_CASE("effective velocity: worked values and crossover") {
    const auto p = ref_params();
    CHECK(effective_velocity_single(p, {2.5e7, 0.5, PumpRole::upper}) ==
          doctest::Approx(2.0829e-4).epsilon(1e-3));
    CHECK(effective_velocity_single(p, {1e8, 2.0, PumpRole::lower}) ==
          doctest::Approx(2.0829e-4).epsilon(1e-3));
    auto q = p;
    q.g = 0.0;
    CHECK(effective_velocity_single(q, {1e8, 0.5, PumpRole::upper}) == 1.0);
    // (1 - Delta^2) vanishes at |Delta| = 1.
    CHECK(effective_velocity_single(p, {1e8, 1.0, PumpRole::upper}) == 1.0);
    CHECK(effective_velocity_single(p, {1e8, -1.0, PumpRole::upper}) == 1.0);
}

TEST_CASE("lower channel near Delta ~ 1 at high intensity is reported unstable") {
    const auto p = ref_params();
    CHECK_THROWS_AS(effective_velocity_single(p, {1e8, 0.9, PumpRole::lower}),
                    NumericalError);
}

TEST_CASE("gain slope: worked values") {
    const auto p = ref_params();
    CHECK(gain_slope_single(p, {2.5e7, 0.5, PumpRole::upper}) ==
          doctest::Approx(6.4e-5).epsilon(1e-12));
    CHECK(gain_slope_single(p, {1e8, 2.0, PumpRole::lower}) ==
          doctest::Approx(-6.4e-5).epsilon(1e-12));
    CHECK(gain_slope_single(p, {1e8, 0.0, PumpRole::upper}) == 0.0);
}

TEST_CASE("slope sign convention pinned by finite differences") {
    // dG/dw_s through the detuning maps: Delta_u decreases with w_s,
    // Delta_l increases. Central differences at 20 random configurations.
    const auto p = ref_params();
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> delta(-3.0, 3.0), inten(1e6, 1e8);
    for (int i = 0; i < 20; ++i) {
        const double d0 = delta(rng);
        const double intensity = inten(rng);
        const double h = 1e-2 * p.gamma; // dw_s step
        for (PumpRole role : {PumpRole::upper, PumpRole::lower}) {
            const double sign = role == PumpRole::upper ? -1.0 : +1.0;
            const PumpChannel hi{intensity, d0 + sign * 2.0 * h / p.gamma, role};
            const PumpChannel lo{intensity, d0 - sign * 2.0 * h / p.gamma, role};
            const double numeric = (gain_single(p, hi) - gain_single(p, lo)) / (2.0 * h);
            const double analytic = gain_slope_single(p, {intensity, d0, role});
            const double scale = std::max(std::abs(analytic), 1e-30);
            // Central differences are second-order: h^2 curvature term only.
            CHECK(std::abs(numeric - analytic) / scale < 1e-3);
            if (std::abs(d0) > 0.1) {
                const double h2 = h / 100.0;
                const PumpChannel hi2{intensity, d0 + sign * 2.0 * h2 / p.gamma, role};
                const PumpChannel lo2{intensity, d0 - sign * 2.0 * h2 / p.gamma, role};
                const double numeric2 =
                    (gain_single(p, hi2) - gain_single(p, lo2)) / (2.0 * h2);
                CHECK(std::abs(numeric2 - analytic) / scale < 1e-6);
            }
        }
    }
}

TEST_CASE("dual response: worked example and composition") {
    const auto p = ref_params();
    const auto d = testsup::ref_dual();
    const auto r = dual_response(p, d);
    CHECK(std::abs(r.gain_per_length * p.length) < 1e-10);
    CHECK(r.regime == Regime::balanced);
    CHECK(r.velocity_ratio == doctest::Approx(1.0415582e-4).epsilon(1e-4));
    CHECK(r.gain_slope == doctest::Approx(1.28e-4).epsilon(1e-12));

    // Composition against the single-channel formulas.
    const double gu = gain_single(p, d.upper), gl = gain_single(p, d.lower);
    CHECK(r.gain_per_length == doctest::Approx(gu - gl).epsilon(1e-14));
    CHECK(r.kappa == doctest::Approx(wavenumber_shift_single(p, d.upper) +
                                     wavenumber_shift_single(p, d.lower))
                         .epsilon(1e-14));
}

TEST_CASE("dual response: degenerate cases") {
    auto p = ref_params();
    SUBCASE("g = 0") {
        p.g = 0.0;
        const auto r = dual_response(p, testsup::ref_dual());
        CHECK(r.gain_per_length == 0.0);
        CHECK(r.kappa == 0.0);
        CHECK(r.velocity_ratio == 1.0);
        CHECK(r.gain_slope == 0.0);
    }
    SUBCASE("symmetric config cancels gain, doubles slope") {
        const auto d = make_dual(3e7, 1.2, 3e7, 1.2);
        const auto r = dual_response(p, d);
        CHECK(r.gain_per_length == 0.0);
        CHECK(r.gain_slope ==
              doctest::Approx(2.0 * gain_slope_single(p, d.upper)).epsilon(1e-14));
    }
}

TEST_CASE("signal frequency shift helper moves detunings oppositely") {
    const auto p = ref_params();
    const auto d = testsup::ref_dual();
    const auto s = shift_signal_frequency(p, d, 1e7);
    CHECK(s.upper.detuning_scaled == doctest::Approx(0.5 - 0.2).epsilon(1e-14));
    CHECK(s.lower.detuning_scaled == doctest::Approx(2.0 + 0.2).epsilon(1e-14));
}

TEST_CASE("thermal density: boundary zeros") {
    const auto p = ref_params();
    const PumpChannel upper{2.5e7, 0.5, PumpRole::upper};
    CHECK(thermal_density_single(p, upper, 0.5 * p.length, 0.0).value == 0.0);
    CHECK(thermal_density_single(p, upper, 0.0, 1e-7).value == 0.0);
    CHECK(thermal_density_dual(p, testsup::ref_dual(), p.length, 0.0).value == 0.0);
}

TEST_CASE("thermal density: algebraic simplification oracle") {
    // Substitute the G definition into N_u: the closed form must equal
    // Gamma (1+D^2)(n_bar+1)(1-e^{-Gt})(e^{2Gz}-1)/(4 v_g) to 1e-12 relative.
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> ug(1e5, 5e6), ud(-3.0, 3.0),
        ui(1e5, 1e7), uz(0.0, 1.0), ut(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        auto p = ref_params();
        p.g = ug(rng);
        const PumpChannel ch{ui(rng), ud(rng), PumpRole::upper};
        const double z = uz(rng) * p.length;
        const double t = ut(rng) * 5.0 / p.gamma;
        const double direct = thermal_density_single(p, ch, z, t).value;
        const double g_u = gain_single(p, ch);
        const double simplified = p.gamma * (1.0 + ch.detuning_scaled * ch.detuning_scaled) *
                                  (p.n_bar + 1.0) * (-std::expm1(-p.gamma * t)) *
                                  std::expm1(2.0 * g_u * z) / (4.0 * p.v_g);
        const double scale = std::max(std::abs(direct), std::abs(simplified));
        if (scale > 0.0)
            CHECK(std::abs(direct - simplified) / scale < 1e-12);
    }
}

TEST_CASE("thermal positivity over a (z, t) grid for random configs") {
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> ug(1e5, 3e6), ud(-3.0, 3.0), ui(0.0, 1e8);
    for (int cfg = 0; cfg < 5; ++cfg) {
        auto p = ref_params();
        p.g = ug(rng);
        const auto d = make_dual(ui(rng), ud(rng), ui(rng), ud(rng));
        for (int iz = 0; iz < 100; ++iz) {
            for (int it = 0; it < 100; ++it) {
                const double z = p.length * iz / 99.0;
                const double t = (5.0 / p.gamma) * it / 99.0;
                CHECK(thermal_density_dual(p, d, z, t).value >= 0.0);
                CHECK(thermal_density_single(p, d.upper, z, t).value >= 0.0);
                CHECK(thermal_density_single(p, d.lower, z, t).value >= 0.0);
            }
        }
    }
}

TEST_CASE("thermal density dual: balanced series limit") {
    const auto p = ref_params();
    const auto balanced = testsup::ref_dual(); // exact balance, G = 0
    const double t = 1.0; // t >> 1/Gamma
    const double n_balanced = thermal_density_dual(p, balanced, p.length, t).value;
    // Series-limit oracle: nudge the balance so G*L = +/-1e-8 and compare.
    for (double nudge : {1.0 + 1e-10, 1.0 - 1e-10}) {
        auto d = balanced;
        d.upper.intensity *= nudge;
        const double n_nudged = thermal_density_dual(p, d, p.length, t).value;
        CHECK(n_nudged == doctest::Approx(n_balanced).epsilon(1e-6));
    }
    // Exact-balance closed form: weight * z at z = L.
    const double weight = p.g * p.g *
        (balanced.lower.intensity * p.n_bar +
         balanced.upper.intensity * (p.n_bar + 1.0)) / (p.v_g * p.v_g);
    CHECK(n_balanced == doctest::Approx(weight * p.length).epsilon(1e-9));
}

TEST_CASE("thermal density: no spontaneous channel") {
    auto p = ref_params();
    p.temperature.reset();
    p.n_bar = 0.0;
    const auto d = make_dual(0.0, 0.5, 1e8, 2.0);
    CHECK(thermal_density_dual(p, d, p.length, 1.0).value == 0.0);
}

TEST_CASE("thermal out: reference value and scaling") {
    const auto p = ref_params();
    const auto d = testsup::ref_dual();
    const auto rep = thermal_out_report(p, d);
    CHECK(rep.number == doctest::Approx(2.78e-3).epsilon(0.02));
    CHECK(rep.density == doctest::Approx(0.278).epsilon(0.02));
    CHECK(rep.warnings.empty());

    auto p0 = p;
    p0.temperature.reset();
    p0.n_bar = 0.0;
    CHECK(thermal_out(p0, make_dual(0.0, 0.5, 1e8, 2.0)) == 0.0);

    // Doubling L quadruples the density prefactor and gives x8 on the number.
    auto p2 = p;
    p2.length *= 2.0;
    const auto rep2 = thermal_out_report(p2, d);
    CHECK(rep2.density == doctest::Approx(4.0 * rep.density).epsilon(1e-12));
    CHECK(rep2.number == doctest::Approx(8.0 * rep.number).epsilon(1e-12));
}

TEST_CASE("thermal out warns outside the expansion's validity") {
    auto p = ref_params();
    p.length = 1.0; // Gamma L / v_g = 1
    const auto rep = thermal_out_report(p, testsup::upper_only(2.5e7, 0.5));
    CHECK(rep.warnings.size() == 2); // transit and |GL| both strained
}

TEST_CASE("gain weighted growth series handoff is continuous") {
    for (double k : {4e3, -4e3, 1e-8, -1e-8, 0.0}) {
        const double z = 1e-7; // |kz| around the 1e-6 switch for the large k
        const double direct = k != 0.0 ? std::expm1(k * z) / k : z;
        CHECK(analytics::gain_weighted_growth(k, z) ==
              doctest::Approx(direct).epsilon(1e-12));
    }
}
