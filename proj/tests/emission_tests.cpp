#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "photonic/emission.hpp"

using namespace photonic;

namespace {

constexpr double kPi = std::numbers::pi;

/// Independent recomputation of the directional probability:
/// |sum_j exp(i (k_match - k) . r_j)|^2 / K, written with raw loops.
double direct_probability(const AtomCloud& cloud, const Vec3& k_match, const Vec3& k) {
    std::complex<double> sum{0.0, 0.0};
    for (const Vec3& r : cloud.positions) {
        const double phase =
            (k_match.x - k.x) * r.x + (k_match.y - k.y) * r.y + (k_match.z - k.z) * r.z;
        sum += std::complex<double>(std::cos(phase), std::sin(phase));
    }
    return std::norm(sum) / static_cast<double>(cloud.atom_count());
}

Vec3 unit_from_angles(double theta, double phi) {
    return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
            std::cos(theta)};
}

double wave_number(double wavelength_um) { return 2.0 * kPi / wavelength_um; }

}  // namespace

TEST_CASE("vector helpers behave like textbook algebra") {
    const Vec3 a{1.0, 2.0, 2.0};
    const Vec3 b{0.0, -1.0, 1.0};
    CHECK(dot(a, b) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(length(a) == doctest::Approx(3.0).epsilon(1e-15));
    const Vec3 n = normalized(a);
    CHECK(length(n) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(n.x == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK_THROWS_AS(normalized(Vec3{0.0, 0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("pairwise diameter is the maximum over all pairs") {
    AtomCloud cloud;
    cloud.positions = {{0.0, 0.0, 0.0}, {3.0, 0.0, 0.0}, {0.0, 4.0, 0.0}};
    CHECK(cloud.max_pairwise_distance() == doctest::Approx(5.0).epsilon(1e-15));
    AtomCloud single;
    single.positions = {{1.0, 1.0, 1.0}};
    CHECK(single.max_pairwise_distance() == 0.0);
}

TEST_CASE("cloud sampling is reproducible and confined to the ball") {
    for (CloudGeometry geometry : {CloudGeometry::UniformBall, CloudGeometry::Gaussian}) {
        const AtomCloud a = sample_cloud(200, geometry, 10.0, 42u);
        const AtomCloud b = sample_cloud(200, geometry, 10.0, 42u);
        const AtomCloud c = sample_cloud(200, geometry, 10.0, 43u);
        REQUIRE(a.atom_count() == 200);
        CHECK(a.positions == b.positions);
        CHECK(a.positions != c.positions);
        for (const Vec3& r : a.positions)
            CHECK(length(r) <= 5.0 + 1e-12);
        CHECK(a.max_pairwise_distance() <= 10.0 + 1e-12);
    }
}

TEST_CASE("cloud sampling validates its arguments") {
    CHECK_THROWS_AS(sample_cloud(0, CloudGeometry::UniformBall, 10.0, 1u),
                    std::invalid_argument);
    CHECK_THROWS_AS(sample_cloud(10, CloudGeometry::UniformBall, 0.0, 1u),
                    std::invalid_argument);
    CHECK_THROWS_AS(sample_cloud(10, CloudGeometry::UniformBall, 12.0, 1u),
                    std::invalid_argument);  // beyond the blockade bound
    CHECK_NOTHROW(sample_cloud(10, CloudGeometry::UniformBall, 12.0, 1u, 20.0));
}

TEST_CASE("ledger resultant sums signed wave vectors plus the excitation") {
    WaveVectorLedger ledger;
    ledger.entries.push_back({{1.0, 0.0, 0.0}, +1});
    ledger.entries.push_back({{0.0, 2.0, 0.0}, -1});
    ledger.excitation_k = {0.0, 0.0, 3.0};
    const Vec3 k = resultant_wavevector(ledger);
    CHECK(k.x == 1.0);
    CHECK(k.y == -2.0);
    CHECK(k.z == 3.0);

    WaveVectorLedger bad;
    bad.entries.push_back({{1.0, 0.0, 0.0}, 2});
    CHECK_THROWS_AS(resultant_wavevector(bad), std::invalid_argument);
}

TEST_CASE("directional probability matches a direct sum on small clouds") {
    std::mt19937_64 rng(17u);
    std::uniform_real_distribution<double> angle(0.0, kPi);
    for (std::size_t atoms : {1u, 3u, 10u}) {
        const AtomCloud cloud = sample_cloud(atoms, CloudGeometry::UniformBall, 8.0, rng());
        const double k0 = wave_number(kDefaultWavelengthUm);
        const Vec3 k_match = Vec3{0.0, 0.0, 1.0} * k0;
        for (int trial = 0; trial < 25; ++trial) {
            const Vec3 k = unit_from_angles(angle(rng), 2.0 * angle(rng)) * k0;
            const double expected = direct_probability(cloud, k_match, k);
            CHECK(emission_probability(cloud, k_match, k) ==
                  doctest::Approx(expected).epsilon(1e-12));
        }
    }
}

TEST_CASE("probability peaks at exactly the atom count in the matched direction") {
    for (std::size_t atoms : {1u, 7u, 1000u}) {
        const AtomCloud cloud = sample_cloud(atoms, CloudGeometry::UniformBall, 10.0, 3u);
        const Vec3 k_match = Vec3{0.2, -0.4, 0.9} * wave_number(0.78);
        // The phase differences cancel identically, so the equality is exact.
        CHECK(emission_probability(cloud, k_match, k_match) ==
              static_cast<double>(atoms));
    }
}

TEST_CASE("probability is invariant under rigid translation of the cloud") {
    const AtomCloud cloud = sample_cloud(50, CloudGeometry::Gaussian, 6.0, 11u);
    AtomCloud shifted = cloud;
    const Vec3 offset{12.0, -7.0, 3.5};
    for (Vec3& r : shifted.positions)
        r = r + offset;

    const double k0 = wave_number(kDefaultWavelengthUm);
    const Vec3 k_match = Vec3{0.0, 0.0, 1.0} * k0;
    std::mt19937_64 rng(4u);
    std::uniform_real_distribution<double> angle(0.0, kPi);
    for (int trial = 0; trial < 30; ++trial) {
        const Vec3 k = unit_from_angles(angle(rng), 2.0 * angle(rng)) * k0;
        const double original = emission_probability(cloud, k_match, k);
        const double moved = emission_probability(shifted, k_match, k);
        CHECK(moved == doctest::Approx(original).epsilon(1e-9));
    }
}

TEST_CASE("duplicating every atom doubles the relative probability") {
    const AtomCloud cloud = sample_cloud(40, CloudGeometry::UniformBall, 9.0, 23u);
    AtomCloud doubled = cloud;
    doubled.positions.insert(doubled.positions.end(), cloud.positions.begin(),
                             cloud.positions.end());

    const double k0 = wave_number(kDefaultWavelengthUm);
    const Vec3 k_match = Vec3{0.0, 0.0, 1.0} * k0;
    std::mt19937_64 rng(31u);
    std::uniform_real_distribution<double> angle(0.0, kPi);
    for (int trial = 0; trial < 30; ++trial) {
        const Vec3 k = unit_from_angles(angle(rng), 2.0 * angle(rng)) * k0;
        // |2S|^2 / 2K = 2 |S|^2 / K.
        CHECK(emission_probability(doubled, k_match, k) ==
              doctest::Approx(2.0 * emission_probability(cloud, k_match, k)).epsilon(1e-11));
    }
}

TEST_CASE("incoherent reference is one and collective coupling scales as sqrt(K)") {
    const AtomCloud cloud = sample_cloud(64, CloudGeometry::UniformBall, 10.0, 2u);
    CHECK(incoherent_emission(cloud, Vec3{0.0, 0.0, 1.0}) == 1.0);
    CHECK(collective_rabi(2.5, 64) == doctest::Approx(8.0 * 2.5).epsilon(1e-15));
    CHECK(collective_rabi(1.0, 1) == 1.0);
}

TEST_CASE("pattern scan covers the sphere grid including both poles") {
    const AtomCloud cloud = sample_cloud(30, CloudGeometry::UniformBall, 10.0, 8u);
    const double k0 = wave_number(kDefaultWavelengthUm);
    const Vec3 k_match = Vec3{0.0, 0.0, 1.0} * k0;
    const int grid = 12;
    const EmissionPattern pattern = pattern_scan(cloud, k_match, k0, grid);
    REQUIRE(pattern.samples.size() == static_cast<std::size_t>((grid / 2 + 1) * grid));
    CHECK(pattern.samples.front().theta == 0.0);
    CHECK(pattern.samples.back().theta == doctest::Approx(kPi).epsilon(1e-15));
    for (const EmissionSample& sample : pattern.samples)
        CHECK(length(sample.direction) == doctest::Approx(1.0).epsilon(1e-12));

    // The matched direction is the +z pole, so the peak sits there with
    // probability exactly K.
    CHECK(pattern.peak().probability == 30.0);
    CHECK(pattern.peak().theta == 0.0);
    CHECK(pattern.mean_probability() > 0.0);
    CHECK_THROWS_AS(pattern_scan(cloud, k_match, k0, 6), std::invalid_argument);
}

TEST_CASE("angular peak narrows as the cloud grows") {
    const double k0 = wave_number(kDefaultWavelengthUm);
    const Vec3 k_match = Vec3{0.0, 0.0, 1.0} * k0;
    std::vector<double> widths;
    for (double diameter : {2.0, 5.0, 10.0}) {
        const AtomCloud cloud = sample_cloud(400, CloudGeometry::UniformBall, diameter, 7u);
        const double peak = emission_probability(cloud, k_match, k_match);
        double width = kPi / 2.0;
        for (double theta = 0.0; theta <= kPi / 2.0; theta += 0.002) {
            const Vec3 k = unit_from_angles(theta, 0.0) * k0;
            if (emission_probability(cloud, k_match, k) < peak / 2.0) {
                width = theta;
                break;
            }
        }
        widths.push_back(width);
    }
    REQUIRE(widths.size() == 3);
    CHECK(widths[0] > widths[1]);
    CHECK(widths[1] > widths[2]);
}

TEST_CASE("schedule timing sums fixed per-instruction costs") {
    std::vector<PulseInstruction> instructions = {
        PulseInstruction::load(1),
        PulseInstruction::raman(1, 2, 1.0),
        PulseInstruction::feed(3, 2),
        PulseInstruction::cphase(1, 2),
        PulseInstruction::toggle(1),
        PulseInstruction::emit({{1, Letter::R}}),
        PulseInstruction::random_emit(),
        PulseInstruction::measure_last(),
    };
    // Four gate pulses and one raman at 1 us each, two emissions at
    // 0.1 us, and a free measurement.
    CHECK(estimate_duration(instructions) == doctest::Approx(5.2e-6).epsilon(1e-12));

    TimingModel slow;
    slow.gate_s = 2e-6;
    slow.raman_s = 3e-6;
    slow.emission_s = 1e-6;
    slow.measure_s = 5e-7;
    const double expected = 4 * 2e-6 + 1 * 3e-6 + 2 * 1e-6 + 1 * 5e-7;
    CHECK(estimate_duration(instructions, slow) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(estimate_duration({}) == 0.0);
}
