#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "photonic/state.hpp"

namespace photonic {

/// Level -> polarization letter pairs handed to emit(). Keys distinct,
/// letters restricted to {R, L}.
using EmissionMap = std::vector<std::pair<int, Letter>>;

enum class PulseKind : std::uint8_t {
    Load,
    SuperpositionLoad,
    Raman,
    Feed,
    Toggle,
    Cphase,
    Emit,
    RandomEmit,
    Measure,
};

/// One schedule entry. Field use per kind:
///   Load/Toggle:         level
///   SuperpositionLoad:   level, theta, phi
///   Raman:               level (j), level2 (j2), theta, phi
///   Feed:                level (target), level2 (control)
///   Cphase:              level, level2
///   Emit:                emission_map
///   RandomEmit:          -
///   Measure:             mode_index (1-based; 0 means last emitted mode)
struct PulseInstruction {
    PulseKind kind = PulseKind::Load;
    int level = 0;
    int level2 = 0;
    double theta = 0.0;
    double phi = 0.0;
    EmissionMap emission_map;
    int mode_index = 0;

    bool operator==(const PulseInstruction&) const = default;

    static PulseInstruction load(int level);
    static PulseInstruction superposition_load(int level, double theta, double phi = 0.0);
    static PulseInstruction raman(int j, int j2, double theta, double phi = 0.0);
    static PulseInstruction feed(int target, int control);
    static PulseInstruction toggle(int level);
    static PulseInstruction cphase(int j, int j2);
    static PulseInstruction emit(EmissionMap map);
    static PulseInstruction random_emit();
    static PulseInstruction measure(int mode_index);      // explicit 1-based index
    static PulseInstruction measure_last();
};

bool is_emission_kind(PulseKind kind);

/// Stable lowercase keyword for a kind ("load", "supload", "raman",
/// "feed", "toggle", "cphase", "emit", "random-emit", "measure"); used
/// in the schedule text format and in error messages.
const char* kind_keyword(PulseKind kind);

/// Moves one atom into an empty level. Every support configuration must
/// have the level unoccupied, otherwise BlockadeViolation.
EnsembleState load(const EnsembleState& state, int level);

/// Splits each configuration c into
///   cos(theta/2) c + e^{i phi} sin(theta/2) c[level := 1].
/// The level must be empty in every support configuration.
EnsembleState superposition_load(const EnsembleState& state, int level, double theta,
                                 double phi = 0.0);

/// Rotation on the two-dimensional subspace spanned by (j occupied,
/// j2 occupied). The matrix on that ordered basis is
///
///   [ -cos(theta/2)            e^{-i phi} sin(theta/2) ]
///   [  e^{i phi} sin(theta/2)  cos(theta/2)            ]
///
/// so theta = pi/2, phi = 0 gives [[-1, 1], [1, 1]]/sqrt(2), i.e. the
/// transfer |j> -> (|j2> - |j>)/sqrt(2). Configurations with both levels
/// empty are untouched; both occupied raises UnsupportedConfiguration.
EnsembleState raman(const EnsembleState& state, int j, int j2, double theta, double phi = 0.0);

/// Moves an atom into `target` in every configuration where `control` is
/// unoccupied; configurations with the control occupied pass unchanged.
/// No phase is acquired on either branch. The target must be empty in
/// every support configuration.
EnsembleState feed(const EnsembleState& state, int target, int control);

/// Flips the occupation of a level in every configuration, phase-free.
EnsembleState toggle(const EnsembleState& state, int level);

/// Multiplies the amplitude by -1 unless both levels are unoccupied.
EnsembleState cphase(const EnsembleState& state, int j, int j2);

/// Appends one mode. Per configuration: the occupied mapped level (at
/// most one allowed) sets the new letter and is cleared; with no mapped
/// level occupied the new letter is Vac. Levels occupied in
/// superposition must map to distinct letters — otherwise two
/// configurations would merge into one emission outcome, which is not
/// an isometry; such merges raise UnsupportedConfiguration.
EnsembleState emit(const EnsembleState& state, const EmissionMap& map);

/// Appends one mode carrying `letter` to every configuration.
EnsembleState append_mode(const EnsembleState& state, Letter letter);

/// Trajectory form: a seeded coin picks R or L, the chosen letter is
/// appended to every configuration.
EnsembleState random_emit(const EnsembleState& state, std::mt19937_64& rng);

/// Branch form: both outcomes kept with weight 1/2 each.
StateEnsemble random_emit_branches(const EnsembleState& state);

struct MeasurementOutcome {
    Letter outcome;
    EnsembleState state;      // projected and renormalized
    double probability;
};

/// Projective measurement of one mode in the letter basis. The outcome is
/// sampled from the seeded generator unless `postselect` forces it; a
/// forced outcome with probability below 1e-12 raises
/// ImpossiblePostselection.
MeasurementOutcome measure(const EnsembleState& state, int mode_index, std::mt19937_64& rng,
                           std::optional<Letter> postselect = std::nullopt);

/// Outcome distribution of a mode measurement without collapsing.
/// Indexed by Letter value; entries sum to the state norm.
std::array<double, 3> mode_weights(const EnsembleState& state, int mode_index);

}  // namespace photonic
