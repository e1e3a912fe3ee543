#include <cmath>
#include <complex>
#include <random>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "photonic/state.hpp"

using namespace photonic;

namespace {

BasisConfig config_of(std::vector<std::uint8_t> occ, std::vector<Letter> modes = {}) {
    BasisConfig c;
    c.occ = std::move(occ);
    c.modes = std::move(modes);
    return c;
}

}  // namespace

TEST_CASE("letters render as fixed characters") {
    CHECK(letter_char(Letter::Vac) == '-');
    CHECK(letter_char(Letter::R) == 'R');
    CHECK(letter_char(Letter::L) == 'L');
}

TEST_CASE("configuration strings show occupations then mode letters") {
    CHECK(to_string(config_of({1, 0, 1, 0}, {Letter::R, Letter::L})) == "1010|RL");
    CHECK(to_string(config_of({0, 1}, {Letter::Vac, Letter::R})) == "01|-R");
    CHECK(to_string(config_of({1, 1})) == "11|");
}

TEST_CASE("configurations order by occupation then by modes") {
    const BasisConfig a = config_of({0, 1}, {Letter::R});
    const BasisConfig b = config_of({1, 0}, {Letter::R});
    const BasisConfig c = config_of({1, 0}, {Letter::L});
    CHECK(a < b);
    CHECK(b < c);  // R (=1) sorts before L (=2)

    EnsembleState::AmplitudeMap map;
    map.emplace(c, 0.5);
    map.emplace(a, 0.5);
    map.emplace(b, 0.5);
    const EnsembleState state = EnsembleState::from_amplitudes(2, std::move(map));
    std::vector<BasisConfig> order;
    for (const auto& [config, amp] : state.amplitudes())
        order.push_back(config);
    REQUIRE(order.size() == 3);
    CHECK(order[0] == a);
    CHECK(order[1] == b);
    CHECK(order[2] == c);
}

TEST_CASE("fresh states hold the vacuum register with unit amplitude") {
    const EnsembleState state = new_state(4);
    CHECK(state.level_count() == 4);
    CHECK(state.mode_count() == 0);
    REQUIRE(state.amplitudes().size() == 1);
    const auto& [config, amp] = *state.amplitudes().begin();
    CHECK(config == config_of({0, 0, 0, 0}));
    CHECK(amp == Amplitude{1.0, 0.0});
    CHECK(norm(state) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("construction prunes amplitudes under the threshold") {
    EnsembleState::AmplitudeMap map;
    map.emplace(config_of({1, 0}), 1.0);
    map.emplace(config_of({0, 1}), Amplitude{0.0, 5e-15});
    const EnsembleState state = EnsembleState::from_amplitudes(2, std::move(map));
    CHECK(state.amplitudes().size() == 1);

    EnsembleState::AmplitudeMap kept;
    kept.emplace(config_of({1, 0}), 1.0);
    kept.emplace(config_of({0, 1}), Amplitude{0.0, 5e-15});
    const EnsembleState custom = EnsembleState::from_amplitudes(2, std::move(kept), 1e-16);
    CHECK(custom.amplitudes().size() == 2);
}

TEST_CASE("construction rejects mismatched shapes") {
    EnsembleState::AmplitudeMap bad_levels;
    bad_levels.emplace(config_of({1, 0}), 1.0);
    bad_levels.emplace(config_of({0, 1, 0}), 1.0);
    CHECK_THROWS_AS(EnsembleState::from_amplitudes(2, std::move(bad_levels)),
                    std::invalid_argument);

    EnsembleState::AmplitudeMap bad_modes;
    bad_modes.emplace(config_of({1, 0}, {Letter::R}), 1.0);
    bad_modes.emplace(config_of({0, 1}), 1.0);
    CHECK_THROWS_AS(EnsembleState::from_amplitudes(2, std::move(bad_modes)),
                    std::invalid_argument);
}

TEST_CASE("amplitude lookup returns zero off the support") {
    EnsembleState::AmplitudeMap map;
    map.emplace(config_of({1, 0}), Amplitude{0.0, 0.5});
    const EnsembleState state = EnsembleState::from_amplitudes(2, std::move(map));
    CHECK(state.amplitude(config_of({1, 0})) == Amplitude{0.0, 0.5});
    CHECK(state.amplitude(config_of({0, 1})) == Amplitude{0.0, 0.0});
}

TEST_CASE("norm and inner product agree with direct sums") {
    EnsembleState::AmplitudeMap map_a;
    map_a.emplace(config_of({1, 0}), Amplitude{0.6, 0.0});
    map_a.emplace(config_of({0, 1}), Amplitude{0.0, 0.8});
    const EnsembleState a = EnsembleState::from_amplitudes(2, std::move(map_a));

    EnsembleState::AmplitudeMap map_b;
    map_b.emplace(config_of({1, 0}), Amplitude{1.0, 0.0});
    const EnsembleState b = EnsembleState::from_amplitudes(2, std::move(map_b));

    CHECK(norm(a) == doctest::Approx(1.0).epsilon(1e-15));
    // <a|b> = conj(0.6) * 1.0
    CHECK(inner_product(a, b).real() == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(inner_product(a, b).imag() == doctest::Approx(0.0).epsilon(1e-15));
    // Conjugate symmetry.
    CHECK(inner_product(b, a) == std::conj(inner_product(a, b)));
}

TEST_CASE("ensembles validate weight positivity and unit total") {
    StateEnsemble good;
    good.branches.push_back({0.5, new_state(2)});
    good.branches.push_back({0.5, new_state(2)});
    CHECK_NOTHROW(good.validate());

    StateEnsemble short_total;
    short_total.branches.push_back({0.5, new_state(2)});
    CHECK_THROWS_AS(short_total.validate(), std::invalid_argument);

    StateEnsemble negative;
    negative.branches.push_back({1.5, new_state(2)});
    negative.branches.push_back({-0.5, new_state(2)});
    CHECK_THROWS_AS(negative.validate(), std::invalid_argument);
}
