#pragma once

#include <cstdint>
#include <vector>

#include "photonic/pulses.hpp"

namespace photonic {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    bool operator==(const Vec3&) const = default;
};

double dot(const Vec3& a, const Vec3& b);
double length(const Vec3& a);
Vec3 normalized(const Vec3& a);

/// Alkali D2 scale; used for |k| when no wavelength is given.
inline constexpr double kDefaultWavelengthUm = 0.78;

/// Blockade geometry: all atoms within this pairwise distance.
inline constexpr double kDefaultDiameterUm = 10.0;

/// K atom positions in micrometers, max pairwise distance bounded.
struct AtomCloud {
    std::vector<Vec3> positions;

    std::size_t atom_count() const { return positions.size(); }
    double max_pairwise_distance() const;
};

enum class CloudGeometry : std::uint8_t { UniformBall, Gaussian };

/// Samples K positions inside a ball of the given diameter, reproducibly
/// for a fixed seed. Gaussian clouds (sigma = diameter/4) are truncated
/// to the ball by rejection. Diameters beyond `max_diameter` are
/// rejected; pass a larger cap to override the blockade bound.
AtomCloud sample_cloud(std::size_t atom_count, CloudGeometry geometry, double diameter_um,
                       std::uint64_t seed, double max_diameter = kDefaultDiameterUm);

/// One laser pulse in the phase ledger: wave vector in rad/um and
/// delta_n = +1 for an absorbed photon, -1 for an emitted one.
struct LedgerEntry {
    Vec3 k;
    int delta_n;
};

struct WaveVectorLedger {
    std::vector<LedgerEntry> entries;
    Vec3 excitation_k;  // k_e of the final pi-pulse to the excited state
};

/// Phase-matched wave vector: sum of delta_n * k over the ledger plus
/// the excitation pulse wave vector.
Vec3 resultant_wavevector(const WaveVectorLedger& ledger);

/// Directional emission probability relative to the single-atom value:
///   P(k) = |sum_j exp(i (k_match - k) . r_j)|^2 / K.
/// Equals K exactly at k = k_match; the dipole matrix element is a unit
/// constant.
double emission_probability(const AtomCloud& cloud, const Vec3& k_match, const Vec3& k);

/// Per-atom incoherent reference value (hyperfine-changing decay carries
/// no collective sum), so coherent peak / incoherent = K.
double incoherent_emission(const AtomCloud& cloud, const Vec3& k);

/// sqrt(K) enhancement of the reservoir -> Rydberg transition.
double collective_rabi(double single_atom_rabi, std::size_t atom_count);

struct EmissionSample {
    Vec3 direction;      // unit vector
    double theta;        // polar angle, radians
    double phi;          // azimuth, radians
    double probability;  // relative to the single-atom value
};

struct EmissionPattern {
    std::vector<EmissionSample> samples;

    const EmissionSample& peak() const;
    double mean_probability() const;
};

/// Evaluates P over a full theta-phi sphere grid at fixed |k|.
/// `grid` is the number of azimuthal points per great circle (>= 8);
/// theta runs over grid/2 + 1 rows including both poles.
EmissionPattern pattern_scan(const AtomCloud& cloud, const Vec3& k_match, double k_magnitude,
                             int grid);

/// Per-instruction wall-clock costs in seconds.
struct TimingModel {
    double gate_s = 1e-6;      // Rydberg-mediated transfers and phases
    double raman_s = 1e-6;
    double emission_s = 1e-7;  // single-photon release
    double measure_s = 0.0;
};

double estimate_duration(const std::vector<PulseInstruction>& instructions,
                         const TimingModel& model = {});

}  // namespace photonic
