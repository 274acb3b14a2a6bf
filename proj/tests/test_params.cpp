#include <doctest.h>

#include <cmath>
#include <random>

#include "sbs/constants.hpp"
#include "sbs/params.hpp"
#include "test_support.hpp"

using namespace sbs;

TEST_CASE("thermal occupation matches Bose-Einstein") {
    // 50 GHz (angular) at 0.1 K is the reference operating point.
    CHECK(thermal_occupation(5e10, 0.1) == doctest::Approx(0.0224).epsilon(0.005));
    CHECK(thermal_occupation(5e10, 0.0) == 0.0);
    // Independent high-precision evaluation of 1/expm1(hbar*W/(kB*T)).
    CHECK(thermal_occupation(5e10, 1.0) == doctest::Approx(2.150).epsilon(0.001));
}

TEST_CASE("thermal occupation monotonicity and classical limit") {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> omega(1e9, 1e12), temp(0.01, 10.0);
    for (int i = 0; i < 200; ++i) {
        const double w = omega(rng), t = temp(rng);
        CHECK(thermal_occupation(w, t * 1.01) > thermal_occupation(w, t));
        CHECK(thermal_occupation(w * 1.01, t) < thermal_occupation(w, t));
    }
    // k_B T / (hbar W) > 20: n_bar * hbar W / (k_B T) within 5% of 1.
    for (double ratio : {21.0, 50.0, 500.0}) {
        const double w = 5e10;
        const double t = ratio * constants::hbar * w / constants::k_boltzmann;
        const double x = constants::hbar * w / (constants::k_boltzmann * t);
        CHECK(thermal_occupation(w, t) * x == doctest::Approx(1.0).epsilon(0.05));
    }
}

TEST_CASE("scaled detuning") {
    CHECK(scaled_detuning(2.5e7, 1e8) == 0.5);
    CHECK(scaled_detuning(0.0, 3.7e9) == 0.0);
    CHECK(scaled_detuning(-1e8, 1e8) == -2.0);
}

TEST_CASE("validate: reference example tree") {
    const auto cfg = validate(testsup::ref_tree());
    CHECK(cfg.pumps.a == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(cfg.pumps.b == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(cfg.waveguide.n_bar == doctest::Approx(0.0224).epsilon(0.005));
    CHECK(cfg.pumps.upper.role == PumpRole::upper);
    CHECK(cfg.pumps.lower.role == PumpRole::lower);
}

TEST_CASE("validate: rejection paths") {
    auto tree = testsup::ref_tree();
    SUBCASE("non-positive length") {
        tree["waveguide.length"] = "0";
        CHECK_THROWS_WITH_AS(validate(tree), doctest::Contains("non-positive length"),
                             ConfigError);
    }
    SUBCASE("temperature/n_bar disagreement") {
        tree["waveguide.n_bar"] = "0.5"; // Bose-Einstein gives ~0.0224
        CHECK_THROWS_WITH_AS(validate(tree), doctest::Contains("disagreement"),
                             ConfigError);
    }
    SUBCASE("missing required field") {
        tree.erase("waveguide.gamma");
        CHECK_THROWS_AS(validate(tree), ConfigError);
    }
    SUBCASE("negative intensity") {
        tree["pump.upper.intensity"] = "-1";
        CHECK_THROWS_AS(validate(tree), ConfigError);
    }
}

TEST_CASE("validate: consistent temperature/n_bar pair and amplitude form") {
    auto tree = testsup::ref_tree();
    tree["waveguide.n_bar"] = "0.02243967505389444";
    CHECK_NOTHROW(validate(tree));

    auto amp = testsup::ref_tree();
    amp.erase("pump.upper.intensity");
    amp["pump.upper.amplitude"] = "5e4"; // I = L |E|^2 = 1e-2 * 2.5e9 = 2.5e7
    const auto cfg = validate(amp);
    CHECK(cfg.pumps.upper.intensity == doctest::Approx(2.5e7).epsilon(1e-12));
}

TEST_CASE("validate is idempotent on its canonical echo") {
    const auto cfg = validate(testsup::ref_tree());
    const auto again = validate(canonical_echo(cfg));
    CHECK(again.waveguide.g == cfg.waveguide.g);
    CHECK(again.waveguide.n_bar == cfg.waveguide.n_bar);
    CHECK(again.pumps.upper.intensity == cfg.pumps.upper.intensity);
    CHECK(again.pumps.upper.detuning_scaled == cfg.pumps.upper.detuning_scaled);
    CHECK(again.pumps.lower.detuning_scaled == cfg.pumps.lower.detuning_scaled);
    CHECK(again.pumps.a == cfg.pumps.a);
    CHECK(again.pumps.b == cfg.pumps.b);
    CHECK(canonical_echo(again) == canonical_echo(cfg));
}

TEST_CASE("noise spec strengths") {
    const auto cfg = validate(testsup::ref_tree());
    const auto noise = cfg.noise();
    CHECK(noise.normal_strength() == cfg.waveguide.gamma * cfg.waveguide.n_bar);
    CHECK(noise.antinormal_strength() ==
          cfg.waveguide.gamma * (cfg.waveguide.n_bar + 1.0));
}
