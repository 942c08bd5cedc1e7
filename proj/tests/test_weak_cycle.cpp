#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "test_support.hpp"

using namespace otto;
using otto_test::reference_spec;
using doctest::Approx;

namespace {

// Closed-form scalar oracle for the reference two-level instance:
// Q_in = (1/(1+e^{0.8}) - 1/(1+e^{1.6})) * (2.8 - 1.2).
const double kQinOracle = (1.0 / (1.0 + std::exp(0.8)) - 1.0 / (1.0 + std::exp(1.6))) * 1.6;

} // namespace

TEST_CASE("reference instance: eta_weak = 1/2 and the closed-form heats") {
    const WeakReport r = weak_cycle(reference_spec());
    REQUIRE(r.engine_valid);
    CHECK(std::abs(*r.eta_ratio - 0.5) < 1e-12);
    CHECK(std::abs(*r.eta_entropy - 0.5) < 1e-12);

    CHECK(std::abs(kQinOracle - 0.22727024641009927) < 1e-15);
    CHECK(r.q_in == Approx(kQinOracle).epsilon(1e-12));
    CHECK(r.q_out == Approx(kQinOracle / 2.0).epsilon(1e-12));
    CHECK(r.w_out == Approx(kQinOracle / 2.0).epsilon(1e-12));
    CHECK(r.w_com == Approx(0.7343852918928604).epsilon(1e-12));
    CHECK(r.w_exp == Approx(-0.84802041509791).epsilon(1e-12));
    CHECK(r.w_out == Approx(r.q_in - r.q_out).epsilon(1e-12));
}

TEST_CASE("zero temperature gradient is not an engine") {
    SystemSpec spec = reference_spec();
    spec.beta_h = InverseTemperature(2.0); // equal to beta_c
    spec.e_hot = spec.e_cold;              // no compression either
    const WeakReport r = weak_cycle(spec);
    CHECK(std::abs(r.q_in) < 1e-14);
    CHECK(std::abs(r.q_out) < 1e-14);
    CHECK_FALSE(r.engine_valid);
    CHECK_FALSE(r.eta_ratio.has_value());
    CHECK_FALSE(r.eta_entropy.has_value());
}

TEST_CASE("spec validation rejects malformed instances") {
    SystemSpec spec = reference_spec();
    spec.beta_h = InverseTemperature(3.0); // hotter than cold
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);

    spec = reference_spec();
    spec.e_hot = RealVector(3);
    spec.e_hot << 1.0, 2.0, 3.0; // size mismatch
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);

    spec = reference_spec();
    spec.e_cold(1) = spec.e_cold(0); // degenerate
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
}

TEST_CASE("heat-entropy identities on the reference instance") {
    const SystemSpec spec = reference_spec();
    const WeakReport r = weak_cycle(spec);
    CHECK(spec.beta_h.value() * r.q_in == Approx(r.delta_s - r.d_hot).epsilon(1e-12));
    CHECK(spec.beta_c.value() * r.q_out == Approx(r.delta_s + r.d_cold).epsilon(1e-12));
}

TEST_CASE("entropy-form efficiency routed through density matrices") {
    CHECK(std::abs(eta_weak_entropy_form(reference_spec()) - 0.5) < 1e-10);

    // E_hot = E_cold: no compression, Q_in = Q_out, rejected as invalid.
    SystemSpec flat = reference_spec();
    flat.e_hot = flat.e_cold;
    CHECK_FALSE(weak_cycle(flat).engine_valid);
    CHECK_THROWS_AS(eta_weak_entropy_form(flat), std::invalid_argument);
}

TEST_CASE("entropy form agrees with the ratio form on random valid specs") {
    RandomStream rng(20250301);
    int checked = 0;
    for (int it = 0; it < 1000; ++it) {
        const SystemSpec spec = otto_test::random_valid_spec(rng);
        const WeakReport r = weak_cycle(spec);
        REQUIRE(r.engine_valid);
        ++checked;
        CHECK(std::abs(*r.eta_ratio - *r.eta_entropy) < 1e-10);
        CHECK(std::abs(eta_weak_entropy_form(spec) - *r.eta_ratio) < 1e-10);
        CHECK(std::abs(r.w_out - (r.q_in - r.q_out)) < 1e-10);
        CHECK(*r.eta_ratio < 1.0 - spec.beta_h.value() / spec.beta_c.value());
        CHECK(spec.beta_h.value() * r.q_in == Approx(r.delta_s - r.d_hot).epsilon(1e-9));
        CHECK(spec.beta_c.value() * r.q_out == Approx(r.delta_s + r.d_cold).epsilon(1e-9));
    }
    CHECK(checked == 1000);
}

TEST_CASE("efficiency is invariant under a joint energy/temperature rescale") {
    RandomStream rng(20250302);
    for (int it = 0; it < 200; ++it) {
        const SystemSpec spec = otto_test::random_valid_spec(rng);
        const double c = rng.uniform(0.3, 4.0);
        const SystemSpec scaled{RealVector(c * spec.e_cold),
                                RealVector(c * spec.e_hot),
                                RealVector(c * spec.bath_cold),
                                RealVector(c * spec.bath_hot),
                                InverseTemperature(spec.beta_c.value() / c),
                                InverseTemperature(spec.beta_h.value() / c)};
        CHECK(std::abs(*weak_cycle(scaled).eta_ratio - *weak_cycle(spec).eta_ratio) < 1e-12);
    }
}

TEST_CASE("two-level closed form") {
    const InverseTemperature beta_c(2.0), beta_h(0.5);
    const TwoLevelEfficiency k2 = two_level_closed_form(0.6, 1.4, 2.0, beta_c, beta_h);
    CHECK(k2.engine_valid);
    CHECK(k2.eta == Approx(0.5).epsilon(1e-15));

    const TwoLevelEfficiency k1 = two_level_closed_form(0.6, 1.4, 1.0, beta_c, beta_h);
    CHECK_FALSE(k1.engine_valid); // no work extracted
    CHECK(k1.eta == Approx(0.0).epsilon(1e-15));

    const TwoLevelEfficiency k3 = two_level_closed_form(0.6, 1.4, 3.0, beta_c, beta_h);
    CHECK(k3.engine_valid);
    CHECK(k3.eta == Approx(2.0 / 3.0).epsilon(1e-15));

    // Scale at or beyond beta_c/beta_h stops the engine (populations no
    // longer reorder).
    CHECK_FALSE(two_level_closed_form(0.6, 1.4, 4.5, beta_c, beta_h).engine_valid);

    CHECK_THROWS_AS(two_level_closed_form(1.4, 0.6, 2.0, beta_c, beta_h),
                    std::invalid_argument);
    CHECK_THROWS_AS(two_level_closed_form(0.6, 1.4, 0.0, beta_c, beta_h),
                    std::invalid_argument);
}

TEST_CASE("closed form matches the full cycle for proportional two-level specs") {
    RandomStream rng(20250303);
    for (int it = 0; it < 200; ++it) {
        const double eg = rng.uniform(0.1, 1.0);
        const double ee = eg + rng.uniform(0.3, 1.5);
        const double beta_c = rng.uniform(1.2, 2.6);
        const double beta_h = rng.uniform(0.25, 0.45) * beta_c;
        const double k = rng.uniform(1.1, 0.9 * beta_c / beta_h);
        RealVector e_cold(2);
        e_cold << eg, ee;
        SystemSpec spec{e_cold,
                        RealVector(k * e_cold),
                        otto_test::random_spectrum(3, rng, 0.3, 1.0),
                        otto_test::random_spectrum(3, rng, 0.5, 1.0),
                        InverseTemperature(beta_c),
                        InverseTemperature(beta_h)};
        const TwoLevelEfficiency closed = two_level_closed_form(
            eg, ee, k, InverseTemperature(beta_c), InverseTemperature(beta_h));
        const WeakReport r = weak_cycle(spec);
        REQUIRE(closed.engine_valid == r.engine_valid);
        if (r.engine_valid)
            CHECK(*r.eta_ratio == Approx(closed.eta).epsilon(1e-12));
    }
}
