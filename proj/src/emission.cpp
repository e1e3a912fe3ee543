#include "photonic/emission.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <stdexcept>

namespace photonic {

double dot(const Vec3& a, const Vec3& b) {
    return a.x * b.x + a.y * b.y + a.z * b.z;
}

double length(const Vec3& a) {
    return std::sqrt(dot(a, a));
}

Vec3 normalized(const Vec3& a) {
    const double len = length(a);
    if (len == 0.0)
        throw std::invalid_argument("cannot normalize a zero vector");
    return a * (1.0 / len);
}

double AtomCloud::max_pairwise_distance() const {
    double max_sq = 0.0;
    for (std::size_t i = 0; i < positions.size(); ++i)
        for (std::size_t j = i + 1; j < positions.size(); ++j) {
            const Vec3 d = positions[i] - positions[j];
            max_sq = std::max(max_sq, dot(d, d));
        }
    return std::sqrt(max_sq);
}

namespace {

double next_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Marsaglia polar method; deterministic for a fixed seed.
double next_normal(std::mt19937_64& rng, double& spare, bool& has_spare) {
    if (has_spare) {
        has_spare = false;
        return spare;
    }
    double u, v, s;
    do {
        u = 2.0 * next_unit(rng) - 1.0;
        v = 2.0 * next_unit(rng) - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double scale = std::sqrt(-2.0 * std::log(s) / s);
    spare = v * scale;
    has_spare = true;
    return u * scale;
}

}  // namespace

AtomCloud sample_cloud(std::size_t atom_count, CloudGeometry geometry, double diameter_um,
                       std::uint64_t seed, double max_diameter) {
    if (atom_count == 0)
        throw std::invalid_argument("sample_cloud: atom_count must be positive");
    if (!(diameter_um > 0.0))
        throw std::invalid_argument("sample_cloud: diameter must be positive");
    if (diameter_um > max_diameter)
        throw std::invalid_argument("sample_cloud: diameter exceeds the blockade bound");

    const double radius = diameter_um / 2.0;
    std::mt19937_64 rng(seed);
    AtomCloud cloud;
    cloud.positions.reserve(atom_count);

    double spare = 0.0;
    bool has_spare = false;
    while (cloud.positions.size() < atom_count) {
        Vec3 p;
        if (geometry == CloudGeometry::UniformBall) {
            p = {2.0 * next_unit(rng) - 1.0, 2.0 * next_unit(rng) - 1.0,
                 2.0 * next_unit(rng) - 1.0};
            if (dot(p, p) > 1.0)
                continue;
            p = p * radius;
        } else {
            const double sigma = diameter_um / 4.0;
            p = {sigma * next_normal(rng, spare, has_spare),
                 sigma * next_normal(rng, spare, has_spare),
                 sigma * next_normal(rng, spare, has_spare)};
            if (dot(p, p) > radius * radius)
                continue;
        }
        cloud.positions.push_back(p);
    }
    return cloud;
}

Vec3 resultant_wavevector(const WaveVectorLedger& ledger) {
    if (ledger.entries.empty())
        throw std::invalid_argument("resultant_wavevector: ledger has no entries");
    Vec3 sum;
    for (const LedgerEntry& entry : ledger.entries) {
        if (entry.delta_n != 1 && entry.delta_n != -1)
            throw std::invalid_argument("resultant_wavevector: delta_n must be +1 or -1");
        sum = sum + entry.k * static_cast<double>(entry.delta_n);
    }
    return sum + ledger.excitation_k;
}

double emission_probability(const AtomCloud& cloud, const Vec3& k_match, const Vec3& k) {
    const std::size_t count = cloud.atom_count();
    if (count == 0)
        throw std::invalid_argument("emission_probability: empty cloud");
    const Vec3 delta = k_match - k;
    std::complex<double> sum{0.0, 0.0};
    for (const Vec3& r : cloud.positions)
        sum += std::polar(1.0, dot(delta, r));
    return std::norm(sum) / static_cast<double>(count);
}

double incoherent_emission(const AtomCloud& cloud, const Vec3&) {
    if (cloud.atom_count() == 0)
        throw std::invalid_argument("incoherent_emission: empty cloud");
    return 1.0;
}

double collective_rabi(double single_atom_rabi, std::size_t atom_count) {
    if (atom_count == 0)
        throw std::invalid_argument("collective_rabi: atom_count must be positive");
    return single_atom_rabi * std::sqrt(static_cast<double>(atom_count));
}

const EmissionSample& EmissionPattern::peak() const {
    if (samples.empty())
        throw std::invalid_argument("empty emission pattern");
    const EmissionSample* best = &samples.front();
    for (const EmissionSample& s : samples)
        if (s.probability > best->probability)
            best = &s;
    return *best;
}

double EmissionPattern::mean_probability() const {
    if (samples.empty())
        throw std::invalid_argument("empty emission pattern");
    double sum = 0.0;
    for (const EmissionSample& s : samples)
        sum += s.probability;
    return sum / static_cast<double>(samples.size());
}

EmissionPattern pattern_scan(const AtomCloud& cloud, const Vec3& k_match, double k_magnitude,
                             int grid) {
    if (grid < 8)
        throw std::invalid_argument("pattern_scan: grid must be at least 8 points per circle");
    if (!(k_magnitude > 0.0))
        throw std::invalid_argument("pattern_scan: |k| must be positive");

    const int theta_rows = grid / 2 + 1;
    EmissionPattern pattern;
    pattern.samples.reserve(static_cast<std::size_t>(theta_rows) * static_cast<std::size_t>(grid));
    for (int ti = 0; ti < theta_rows; ++ti) {
        const double theta = std::numbers::pi * static_cast<double>(ti) /
                             static_cast<double>(theta_rows - 1);
        for (int pi_idx = 0; pi_idx < grid; ++pi_idx) {
            const double phi = 2.0 * std::numbers::pi * static_cast<double>(pi_idx) /
                               static_cast<double>(grid);
            const Vec3 dir{std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
                           std::cos(theta)};
            const double p = emission_probability(cloud, k_match, dir * k_magnitude);
            pattern.samples.push_back({dir, theta, phi, p});
        }
    }
    return pattern;
}

double estimate_duration(const std::vector<PulseInstruction>& instructions,
                         const TimingModel& model) {
    double total = 0.0;
    for (const PulseInstruction& instruction : instructions) {
        switch (instruction.kind) {
            case PulseKind::Load:
            case PulseKind::SuperpositionLoad:
            case PulseKind::Feed:
            case PulseKind::Toggle:
            case PulseKind::Cphase:
                total += model.gate_s;
                break;
            case PulseKind::Raman:
                total += model.raman_s;
                break;
            case PulseKind::Emit:
            case PulseKind::RandomEmit:
                total += model.emission_s;
                break;
            case PulseKind::Measure:
                total += model.measure_s;
                break;
        }
    }
    return total;
}

}  // namespace photonic
