#pragma once

#include <Eigen/Dense>

#include <array>
#include <map>
#include <utility>
#include <vector>

#include "photonic/state.hpp"

namespace photonic {

/// A mode under polarization verification still carries a vacuum letter
/// in some support configuration.
class NotPolarizationEncoded : public SimError {
public:
    using SimError::SimError;
};

/// The exhaustive local-correction search found no admissible gates —
/// the state is not locally equivalent to the requested graph state.
class NoCorrectionFound : public SimError {
public:
    using SimError::SimError;
};

/// Undirected simple graph over photonic modes 1..vertex_count, plus the
/// polarization letter chosen to represent logical 0 (the remaining
/// letter of {R, L} is logical 1).
struct GraphSpec {
    int vertex_count = 0;
    std::vector<std::pair<int, int>> edges;
    Letter zero_letter = Letter::R;

    /// Chain 1-2-...-n.
    static GraphSpec path(int vertex_count);

    /// Two rails with one rung per column; column t holds vertices
    /// 2t-1 (upper) and 2t (lower), matching an interleaved emission
    /// order.
    static GraphSpec ladder(int columns);

    std::vector<int> neighbours(int vertex) const;

    /// Simple graph, no self-loops, endpoints in range, zero_letter
    /// polarized. Throws std::invalid_argument.
    void validate() const;
};

/// 2x2 unitary acting on one polarization-encoded mode, row-major over
/// the logical basis. clifford_index is the gate's position in
/// clifford_gates() when it was taken from there, -1 otherwise.
struct ModeGate {
    std::array<Amplitude, 4> m{1.0, 0.0, 0.0, 1.0};
    int clifford_index = -1;
};

ModeGate identity_gate();
ModeGate pauli_x_gate();
ModeGate pauli_z_gate();
ModeGate hadamard_gate();
ModeGate phase_gate();  // diag(1, i)

/// The 24 single-qubit Clifford gates up to global phase, identity
/// first, in a fixed deterministic order.
const std::vector<ModeGate>& clifford_gates();

/// One gate per verified mode (modes 1..n in order).
using LocalCorrection = std::vector<ModeGate>;

LocalCorrection identity_correction(int mode_count);

/// Applies the gate to the letter of one mode. Every support
/// configuration must be polarization-encoded ({R, L}) on that mode.
EnsembleState apply_mode_gate(const EnsembleState& state, int mode_index, const ModeGate& gate,
                              Letter zero_letter = Letter::R);

/// Pure photonic target: amplitudes over per-mode letter strings.
class TargetState {
public:
    using PhotonAmplitudes = std::map<std::vector<Letter>, Amplitude>;

    /// (|photon...photon> + |vac...vac>)/sqrt(2), number-encoded
    /// (photon = R). Requires mode_count >= 2.
    static TargetState ghz(int mode_count);

    /// (|RL> - |LR>)/sqrt(2).
    static TargetState bell_psi_minus();

    /// Graph state: |+>^n then a controlled-Z per edge, built densely
    /// over the 2^n polarization strings. Requires vertex_count <= 16.
    static TargetState graph_state(const GraphSpec& spec);

    /// Explicit amplitudes; all strings must share a length and the
    /// norm must be 1 within 1e-9.
    static TargetState from_amplitudes(PhotonAmplitudes amplitudes);

    int mode_count() const { return mode_count_; }
    const PhotonAmplitudes& amplitudes() const { return amplitudes_; }

    /// Materializes the target as a register state whose atomic levels
    /// (default one) are all empty.
    EnsembleState to_state(int level_count = 1) const;

private:
    TargetState() = default;

    int mode_count_ = 0;
    PhotonAmplitudes amplitudes_;
};

/// |<target|state>|^2. The state's photonic mode count must equal the
/// target's and its atomic register must be entirely empty (measure or
/// emit everything first).
double fidelity(const EnsembleState& state, const TargetState& target);

/// Weighted branch average of the pure fidelity.
double fidelity(const StateEnsemble& ensemble, const TargetState& target);

/// Reduced density matrix over a mode subset; rows/columns run over the
/// per-mode letters actually present anywhere in the support (axis
/// order Vac < R < L), in mixed-radix order with the last listed mode
/// fastest.
struct DensityMatrix {
    std::vector<int> modes;                         // ascending, 1-based
    std::vector<std::vector<Letter>> axis_letters;  // per mode in `modes`
    Eigen::MatrixXcd matrix;

    double trace_value() const;
    double hermiticity_error() const;  // max |rho - rho^dagger| entry
    double min_eigenvalue() const;

    /// Hermitian within hermitian_tol, trace 1 within trace_tol,
    /// eigenvalues >= -eigenvalue_tol. Throws std::runtime_error.
    void validate(double hermitian_tol = 1e-12, double trace_tol = 1e-12,
                  double eigenvalue_tol = 1e-10) const;
};

/// Partial trace over the atomic register and the unselected modes.
DensityMatrix reduced_density(const EnsembleState& state, std::vector<int> modes);
DensityMatrix reduced_density(const StateEnsemble& ensemble, std::vector<int> modes);

/// (1/2) tr |a - b|. Requires identical modes and axes.
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

/// I/2 on `mixed_slot` tensored with |Psi-><Psi-| on the other two
/// slots of a three-photon register; {R, L} axes.
DensityMatrix trine_density(int mixed_slot);

/// Expectation of X_a prod_{b in nbr(a)} Z_b per vertex, after applying
/// the per-mode correction (empty = identity). Vertices are modes 1..V;
/// the state may carry further (already measured) modes, which are left
/// untouched. All +1 iff the corrected state is the graph state.
std::vector<double> stabilizer_expectations(const EnsembleState& state, const GraphSpec& graph,
                                            const LocalCorrection& correction = {});

/// Depth-first search over the 24 Clifford gates per mode (modes in
/// order, gate index ascending, pruned by every stabilizer whose support
/// is fully assigned), returning the first — lexicographically smallest
/// — correction with all expectations >= 1 - tolerance. Limited to 5
/// modes. Throws NoCorrectionFound when the search is exhausted.
LocalCorrection find_local_correction(const EnsembleState& state, const GraphSpec& graph,
                                      double tolerance = 1e-10);

/// Outcome-dependent correction discovered on a small cluster instance
/// and reusable at any size: identity on every retained mode except the
/// trailing ones, where the i-th trailing mode's gate depends only on
/// the i-th decoupling measurement outcome (each measured photon is the
/// redundant partner of exactly one boundary vertex).
struct FrozenClusterCorrection {
    int boundary_mode_count = 0;
    /// per_outcome[i][letter] = gate on the i-th trailing retained mode
    /// when the i-th measurement gave `letter`.
    std::vector<std::map<Letter, ModeGate>> per_outcome;

    /// Identity gates with the outcome-selected trailing gates at the end.
    LocalCorrection expand(int mode_count, const std::vector<Letter>& outcomes) const;
};

/// Discovers the frozen correction from the branches of a small
/// instance: a full exhaustive search on the branch with the smallest
/// outcome vector anchors the reference frame (its gates away from the
/// boundary must be identity), branches differing in a single outcome
/// pin that outcome's boundary gate by a constrained search, and every
/// remaining branch must pass with the already-frozen gates. Any failure
/// signals a protocol bug and raises NoCorrectionFound.
FrozenClusterCorrection freeze_cluster_correction(
    const std::vector<std::pair<std::vector<Letter>, EnsembleState>>& outcome_branches,
    const GraphSpec& graph, int boundary_mode_count, double tolerance = 1e-10);

/// Weights of the all-photon pattern, the all-vacuum pattern, and
/// everything else, over `mode_count` number-encoded modes.
struct GhzReport {
    double all_photon = 0.0;
    double all_vacuum = 0.0;
    double mixed = 0.0;
};

GhzReport ghz_correlation_check(const EnsembleState& state, int mode_count);
GhzReport ghz_correlation_check(const StateEnsemble& ensemble, int mode_count);

}  // namespace photonic
