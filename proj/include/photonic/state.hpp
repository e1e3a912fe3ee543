#pragma once

#include <complex>
#include <compare>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace photonic {

using Amplitude = std::complex<double>;

/// Letter stored per emitted mode. Number-encoded modes use {Vac, R}
/// (R meaning "one photon"); polarization-encoded modes use {R, L}.
enum class Letter : std::uint8_t { Vac = 0, R = 1, L = 2 };

char letter_char(Letter l);

/// Base class for domain errors raised by pulse operations.
class SimError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A level that must be empty is already occupied in some support
/// configuration. Protocol schedules never legally reach this.
class BlockadeViolation : public SimError {
public:
    using SimError::SimError;
};

/// Two levels of an emission map are simultaneously occupied.
class AmbiguousEmission : public SimError {
public:
    using SimError::SimError;
};

/// A configuration outside an operation's supported subspace.
class UnsupportedConfiguration : public SimError {
public:
    using SimError::SimError;
};

/// Requested postselection outcome has (near) zero probability.
class ImpossiblePostselection : public SimError {
public:
    using SimError::SimError;
};

/// One basis label: occupation bit per atomic level plus one letter per
/// emitted mode. The occupation vector has fixed length for a given
/// simulation; the mode list only grows (one entry per emission event).
struct BasisConfig {
    std::vector<std::uint8_t> occ;   // level j stored at occ[j-1], values 0/1
    std::vector<Letter> modes;

    auto operator<=>(const BasisConfig&) const = default;

    bool occupied(int level) const { return occ[static_cast<std::size_t>(level) - 1] != 0; }
    void set(int level, bool value) { occ[static_cast<std::size_t>(level) - 1] = value ? 1 : 0; }
};

/// Renders "1010|RL"; vacuum letters print as '-'.
std::string to_string(const BasisConfig& config);

/// Sparse wavefunction over BasisConfig labels. Value semantics: every
/// pulse operation returns a new state. Amplitudes below the prune
/// threshold are dropped on construction.
class EnsembleState {
public:
    using AmplitudeMap = std::map<BasisConfig, Amplitude>;

    static constexpr double kDefaultPruneThreshold = 1e-14;

    /// Builds a state from an explicit amplitude map. All configurations
    /// must share the level count and a common mode count. No
    /// normalization is applied.
    static EnsembleState from_amplitudes(int level_count, AmplitudeMap amplitudes,
                                         double prune_threshold = kDefaultPruneThreshold);

    int level_count() const { return level_count_; }
    int mode_count() const { return mode_count_; }
    double prune_threshold() const { return prune_threshold_; }

    const AmplitudeMap& amplitudes() const { return amplitudes_; }
    bool empty() const { return amplitudes_.empty(); }

    /// Amplitude of one configuration (zero if not in support).
    Amplitude amplitude(const BasisConfig& config) const;

private:
    EnsembleState() = default;

    int level_count_ = 0;
    int mode_count_ = 0;
    double prune_threshold_ = kDefaultPruneThreshold;
    AmplitudeMap amplitudes_;
};

/// Vacuum register: single all-zeros configuration, no modes, amplitude 1.
EnsembleState new_state(int level_count, double prune_threshold = EnsembleState::kDefaultPruneThreshold);

/// Sum of squared amplitude magnitudes.
double norm(const EnsembleState& state);

/// <a|b> over the configuration basis. Shapes must match.
Amplitude inner_product(const EnsembleState& a, const EnsembleState& b);

/// Weighted list of pure states; used when classical randomness is
/// tracked exhaustively. Weights are positive and sum to one.
struct StateEnsemble {
    struct Branch {
        double weight;
        EnsembleState state;
    };

    std::vector<Branch> branches;

    /// Checks weight positivity and unit sum within 1e-12.
    void validate() const;
};

}  // namespace photonic
