#include "photonic/verify.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>

namespace photonic {

namespace {

Letter one_letter_of(Letter zero_letter) {
    return zero_letter == Letter::R ? Letter::L : Letter::R;
}

int letter_logical(Letter letter, Letter zero_letter, int mode_index) {
    if (letter == Letter::Vac)
        throw NotPolarizationEncoded("mode " + std::to_string(mode_index) +
                                     " carries a vacuum letter in the support");
    return letter == zero_letter ? 0 : 1;
}

void check_polarized(const EnsembleState& state, int mode_count) {
    for (const auto& [config, amp] : state.amplitudes())
        for (int m = 1; m <= mode_count; ++m)
            letter_logical(config.modes[static_cast<std::size_t>(m) - 1], Letter::R, m);
}

void accumulate(EnsembleState::AmplitudeMap& map, BasisConfig config, Amplitude amp) {
    auto [it, inserted] = map.emplace(std::move(config), amp);
    if (!inserted)
        it->second += amp;
}

ModeGate make_gate(Amplitude a, Amplitude b, Amplitude c, Amplitude d, int index = -1) {
    ModeGate gate;
    gate.m = {a, b, c, d};
    gate.clifford_index = index;
    return gate;
}

std::array<Amplitude, 4> mat_mul(const std::array<Amplitude, 4>& a,
                                 const std::array<Amplitude, 4>& b) {
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
            a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

// Scales away the global phase: first entry of significant magnitude
// becomes real positive.
std::array<Amplitude, 4> canonical_phase(std::array<Amplitude, 4> m) {
    for (const Amplitude& entry : m) {
        const double magnitude = std::abs(entry);
        if (magnitude > 1e-9) {
            const Amplitude phase = std::conj(entry) / magnitude;
            for (Amplitude& x : m)
                x *= phase;
            return m;
        }
    }
    return m;
}

std::string gate_key(const std::array<Amplitude, 4>& m) {
    std::string key;
    for (const Amplitude& entry : m) {
        key += std::to_string(std::llround(entry.real() * 1e6)) + ",";
        key += std::to_string(std::llround(entry.imag() * 1e6)) + ";";
    }
    return key;
}

}  // namespace

GraphSpec GraphSpec::path(int vertex_count) {
    if (vertex_count < 1)
        throw std::invalid_argument("path: vertex count must be positive");
    GraphSpec graph;
    graph.vertex_count = vertex_count;
    for (int v = 1; v < vertex_count; ++v)
        graph.edges.emplace_back(v, v + 1);
    return graph;
}

GraphSpec GraphSpec::ladder(int columns) {
    if (columns < 1)
        throw std::invalid_argument("ladder: column count must be positive");
    GraphSpec graph;
    graph.vertex_count = 2 * columns;
    for (int t = 1; t <= columns; ++t)
        graph.edges.emplace_back(2 * t - 1, 2 * t);
    for (int t = 1; t < columns; ++t) {
        graph.edges.emplace_back(2 * t - 1, 2 * t + 1);
        graph.edges.emplace_back(2 * t, 2 * t + 2);
    }
    return graph;
}

std::vector<int> GraphSpec::neighbours(int vertex) const {
    std::vector<int> out;
    for (const auto& [a, b] : edges) {
        if (a == vertex)
            out.push_back(b);
        else if (b == vertex)
            out.push_back(a);
    }
    std::sort(out.begin(), out.end());
    return out;
}

void GraphSpec::validate() const {
    if (vertex_count < 1)
        throw std::invalid_argument("graph: vertex count must be positive");
    if (zero_letter == Letter::Vac)
        throw std::invalid_argument("graph: logical 0 must be a polarization letter");
    std::set<std::pair<int, int>> seen;
    for (const auto& [a, b] : edges) {
        if (a < 1 || a > vertex_count || b < 1 || b > vertex_count)
            throw std::invalid_argument("graph: edge endpoint out of range");
        if (a == b)
            throw std::invalid_argument("graph: self-loop");
        if (!seen.insert(std::minmax(a, b)).second)
            throw std::invalid_argument("graph: duplicate edge");
    }
}

ModeGate identity_gate() {
    return make_gate(1.0, 0.0, 0.0, 1.0, 0);
}

ModeGate pauli_x_gate() {
    return make_gate(0.0, 1.0, 1.0, 0.0);
}

ModeGate pauli_z_gate() {
    return make_gate(1.0, 0.0, 0.0, -1.0);
}

ModeGate hadamard_gate() {
    const double s = 1.0 / std::numbers::sqrt2;
    return make_gate(s, s, s, -s);
}

ModeGate phase_gate() {
    return make_gate(1.0, 0.0, 0.0, Amplitude(0.0, 1.0));
}

const std::vector<ModeGate>& clifford_gates() {
    static const std::vector<ModeGate> table = [] {
        const double s = 1.0 / std::numbers::sqrt2;
        const std::array<Amplitude, 4> hadamard{s, s, s, -s};
        const std::array<Amplitude, 4> phase{1.0, 0.0, 0.0, Amplitude(0.0, 1.0)};

        // Breadth-first closure of {H, S} acting by left multiplication,
        // deduplicated up to global phase; identity seeds the search.
        std::vector<std::array<Amplitude, 4>> found;
        std::set<std::string> seen;
        auto add = [&](std::array<Amplitude, 4> m) {
            m = canonical_phase(m);
            if (seen.insert(gate_key(m)).second)
                found.push_back(m);
        };
        add({1.0, 0.0, 0.0, 1.0});
        for (std::size_t i = 0; i < found.size(); ++i) {
            add(mat_mul(hadamard, found[i]));
            add(mat_mul(phase, found[i]));
        }
        if (found.size() != 24)
            throw std::logic_error("single-qubit Clifford closure has " +
                                   std::to_string(found.size()) + " elements, expected 24");

        std::vector<ModeGate> gates;
        gates.reserve(found.size());
        for (std::size_t i = 0; i < found.size(); ++i)
            gates.push_back(make_gate(found[i][0], found[i][1], found[i][2], found[i][3],
                                      static_cast<int>(i)));
        return gates;
    }();
    return table;
}

LocalCorrection identity_correction(int mode_count) {
    return LocalCorrection(static_cast<std::size_t>(mode_count), identity_gate());
}

EnsembleState apply_mode_gate(const EnsembleState& state, int mode_index, const ModeGate& gate,
                              Letter zero_letter) {
    if (mode_index < 1 || mode_index > state.mode_count())
        throw std::invalid_argument("apply_mode_gate: mode index out of range");
    const std::size_t slot = static_cast<std::size_t>(mode_index) - 1;
    const std::array<Letter, 2> letters{zero_letter, one_letter_of(zero_letter)};

    EnsembleState::AmplitudeMap map;
    for (const auto& [config, amp] : state.amplitudes()) {
        const int c = letter_logical(config.modes[slot], zero_letter, mode_index);
        for (int r = 0; r < 2; ++r) {
            const Amplitude coefficient = gate.m[static_cast<std::size_t>(2 * r + c)];
            if (coefficient == Amplitude{})
                continue;
            BasisConfig next = config;
            next.modes[slot] = letters[static_cast<std::size_t>(r)];
            accumulate(map, std::move(next), amp * coefficient);
        }
    }
    return EnsembleState::from_amplitudes(state.level_count(), std::move(map),
                                          state.prune_threshold());
}

TargetState TargetState::ghz(int mode_count) {
    if (mode_count < 2)
        throw std::invalid_argument("ghz target: mode count must be at least 2");
    const double s = 1.0 / std::numbers::sqrt2;
    PhotonAmplitudes amplitudes;
    amplitudes.emplace(std::vector<Letter>(static_cast<std::size_t>(mode_count), Letter::R), s);
    amplitudes.emplace(std::vector<Letter>(static_cast<std::size_t>(mode_count), Letter::Vac),
                       s);
    return from_amplitudes(std::move(amplitudes));
}

TargetState TargetState::bell_psi_minus() {
    const double s = 1.0 / std::numbers::sqrt2;
    PhotonAmplitudes amplitudes;
    amplitudes.emplace(std::vector<Letter>{Letter::R, Letter::L}, s);
    amplitudes.emplace(std::vector<Letter>{Letter::L, Letter::R}, -s);
    return from_amplitudes(std::move(amplitudes));
}

TargetState TargetState::graph_state(const GraphSpec& spec) {
    spec.validate();
    if (spec.vertex_count > 16)
        throw std::invalid_argument("graph target: dense construction limited to 16 vertices");
    const int n = spec.vertex_count;
    const Letter zero = spec.zero_letter;
    const Letter one = one_letter_of(zero);
    const double scale = std::pow(2.0, -0.5 * n);

    PhotonAmplitudes amplitudes;
    for (std::uint32_t bits = 0; bits < (std::uint32_t{1} << n); ++bits) {
        std::vector<Letter> letters(static_cast<std::size_t>(n));
        for (int v = 0; v < n; ++v)
            letters[static_cast<std::size_t>(v)] = ((bits >> v) & 1u) ? one : zero;
        int sign = 0;
        for (const auto& [a, b] : spec.edges)
            if (((bits >> (a - 1)) & 1u) && ((bits >> (b - 1)) & 1u))
                sign ^= 1;
        amplitudes.emplace(std::move(letters), sign ? -scale : scale);
    }
    return from_amplitudes(std::move(amplitudes));
}

TargetState TargetState::from_amplitudes(PhotonAmplitudes amplitudes) {
    if (amplitudes.empty())
        throw std::invalid_argument("target: no amplitudes");
    const std::size_t n = amplitudes.begin()->first.size();
    double squared_norm = 0.0;
    for (const auto& [letters, amp] : amplitudes) {
        if (letters.size() != n)
            throw std::invalid_argument("target: inconsistent mode counts");
        squared_norm += std::norm(amp);
    }
    if (std::abs(squared_norm - 1.0) > 1e-9)
        throw std::invalid_argument("target: amplitudes are not normalized");
    TargetState target;
    target.mode_count_ = static_cast<int>(n);
    target.amplitudes_ = std::move(amplitudes);
    return target;
}

EnsembleState TargetState::to_state(int level_count) const {
    EnsembleState::AmplitudeMap map;
    for (const auto& [letters, amp] : amplitudes_) {
        BasisConfig config;
        config.occ.assign(static_cast<std::size_t>(level_count), 0);
        config.modes = letters;
        map.emplace(std::move(config), amp);
    }
    return EnsembleState::from_amplitudes(level_count, std::move(map));
}

double fidelity(const EnsembleState& state, const TargetState& target) {
    if (state.mode_count() != target.mode_count())
        throw std::invalid_argument("fidelity: mode counts differ");
    Amplitude overlap{};
    for (const auto& [config, amp] : state.amplitudes()) {
        for (std::uint8_t bit : config.occ)
            if (bit != 0)
                throw std::invalid_argument(
                    "fidelity: atomic register still occupied; compare fully emitted states");
        auto it = target.amplitudes().find(config.modes);
        if (it != target.amplitudes().end())
            overlap += std::conj(it->second) * amp;
    }
    return std::norm(overlap);
}

double fidelity(const StateEnsemble& ensemble, const TargetState& target) {
    double sum = 0.0;
    for (const auto& branch : ensemble.branches)
        sum += branch.weight * fidelity(branch.state, target);
    return sum;
}

namespace {

// Letters present per selected mode anywhere in the support, Vac < R < L.
std::vector<std::vector<Letter>> collect_axes(const StateEnsemble& ensemble,
                                              const std::vector<int>& modes) {
    std::vector<std::array<bool, 3>> present(modes.size(), std::array<bool, 3>{});
    for (const auto& branch : ensemble.branches)
        for (const auto& [config, amp] : branch.state.amplitudes())
            for (std::size_t k = 0; k < modes.size(); ++k) {
                const Letter letter = config.modes[static_cast<std::size_t>(modes[k]) - 1];
                present[k][static_cast<std::size_t>(letter)] = true;
            }
    std::vector<std::vector<Letter>> axes(modes.size());
    for (std::size_t k = 0; k < modes.size(); ++k)
        for (std::size_t l = 0; l < 3; ++l)
            if (present[k][l])
                axes[k].push_back(static_cast<Letter>(l));
    return axes;
}

}  // namespace

DensityMatrix reduced_density(const StateEnsemble& ensemble, std::vector<int> modes) {
    if (modes.empty())
        throw std::invalid_argument("reduced_density: empty mode subset");
    if (ensemble.branches.empty())
        throw std::invalid_argument("reduced_density: empty ensemble");
    std::sort(modes.begin(), modes.end());
    if (std::adjacent_find(modes.begin(), modes.end()) != modes.end())
        throw std::invalid_argument("reduced_density: repeated mode");
    for (const auto& branch : ensemble.branches)
        if (modes.front() < 1 || modes.back() > branch.state.mode_count())
            throw std::invalid_argument("reduced_density: mode index out of range");

    DensityMatrix density;
    density.modes = modes;
    density.axis_letters = collect_axes(ensemble, modes);

    // Per mode: letter value -> digit on that axis (-1 when absent).
    std::vector<std::array<Eigen::Index, 3>> digit(modes.size(),
                                                   std::array<Eigen::Index, 3>{-1, -1, -1});
    Eigen::Index dim = 1;
    for (std::size_t k = 0; k < modes.size(); ++k) {
        const auto& axis = density.axis_letters[k];
        for (std::size_t d = 0; d < axis.size(); ++d)
            digit[k][static_cast<std::size_t>(axis[d])] = static_cast<Eigen::Index>(d);
        dim *= static_cast<Eigen::Index>(axis.size());
    }
    density.matrix = Eigen::MatrixXcd::Zero(dim, dim);

    for (const auto& branch : ensemble.branches) {
        // Group amplitudes by everything traced out: atomic occupations
        // plus the letters of the unselected modes.
        std::map<BasisConfig, std::vector<std::pair<Eigen::Index, Amplitude>>> groups;
        for (const auto& [config, amp] : branch.state.amplitudes()) {
            Eigen::Index index = 0;
            for (std::size_t k = 0; k < modes.size(); ++k) {
                const Letter letter = config.modes[static_cast<std::size_t>(modes[k]) - 1];
                index = index * static_cast<Eigen::Index>(density.axis_letters[k].size()) +
                        digit[k][static_cast<std::size_t>(letter)];
            }
            BasisConfig rest = config;
            for (std::size_t k = modes.size(); k-- > 0;)
                rest.modes.erase(rest.modes.begin() + (modes[k] - 1));
            groups[std::move(rest)].emplace_back(index, amp);
        }
        for (const auto& [rest, entries] : groups)
            for (const auto& [i, ai] : entries)
                for (const auto& [j, aj] : entries)
                    density.matrix(i, j) += branch.weight * ai * std::conj(aj);
    }
    return density;
}

DensityMatrix reduced_density(const EnsembleState& state, std::vector<int> modes) {
    StateEnsemble single;
    single.branches.push_back({1.0, state});
    return reduced_density(single, std::move(modes));
}

double DensityMatrix::trace_value() const {
    return matrix.trace().real();
}

double DensityMatrix::hermiticity_error() const {
    return (matrix - matrix.adjoint().eval()).cwiseAbs().maxCoeff();
}

double DensityMatrix::min_eigenvalue() const {
    const Eigen::MatrixXcd hermitian = 0.5 * (matrix + matrix.adjoint().eval());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(hermitian);
    return solver.eigenvalues().minCoeff();
}

void DensityMatrix::validate(double hermitian_tol, double trace_tol,
                             double eigenvalue_tol) const {
    if (hermiticity_error() > hermitian_tol)
        throw std::runtime_error("density matrix is not Hermitian");
    if (std::abs(matrix.trace() - Amplitude{1.0}) > trace_tol)
        throw std::runtime_error("density matrix trace differs from one");
    if (min_eigenvalue() < -eigenvalue_tol)
        throw std::runtime_error("density matrix has a negative eigenvalue");
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
    if (a.modes != b.modes || a.axis_letters != b.axis_letters)
        throw std::invalid_argument("trace_distance: operands span different bases");
    const Eigen::MatrixXcd difference = a.matrix - b.matrix;
    const Eigen::MatrixXcd hermitian = 0.5 * (difference + difference.adjoint().eval());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(hermitian);
    return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

DensityMatrix trine_density(int mixed_slot) {
    if (mixed_slot < 1 || mixed_slot > 3)
        throw std::invalid_argument("trine_density: slot must be 1, 2, or 3");
    std::array<int, 2> bell_slots{};
    std::size_t next = 0;
    for (int m = 1; m <= 3; ++m)
        if (m != mixed_slot)
            bell_slots[next++] = m;

    DensityMatrix density;
    density.modes = {1, 2, 3};
    density.axis_letters = {{Letter::R, Letter::L},
                            {Letter::R, Letter::L},
                            {Letter::R, Letter::L}};
    density.matrix = Eigen::MatrixXcd::Zero(8, 8);

    const double s = 1.0 / std::numbers::sqrt2;
    for (int mixed_value = 0; mixed_value < 2; ++mixed_value) {
        Eigen::VectorXcd vec = Eigen::VectorXcd::Zero(8);
        for (int bits = 0; bits < 8; ++bits) {
            // Mode 1 is the most significant digit, matching reduced_density.
            const auto digit_of = [bits](int mode) { return (bits >> (3 - mode)) & 1; };
            if (digit_of(mixed_slot) != mixed_value)
                continue;
            const int x = digit_of(bell_slots[0]);
            const int y = digit_of(bell_slots[1]);
            if (x == 0 && y == 1)
                vec(bits) = s;
            else if (x == 1 && y == 0)
                vec(bits) = -s;
        }
        density.matrix += 0.5 * (vec * vec.adjoint());
    }
    return density;
}

namespace {

// X on the vertex mode, Z on each neighbour mode.
EnsembleState apply_stabilizer(const EnsembleState& state, const GraphSpec& graph, int vertex) {
    const std::vector<int> nbrs = graph.neighbours(vertex);
    const Letter zero = graph.zero_letter;
    const Letter one = one_letter_of(zero);
    const std::size_t slot = static_cast<std::size_t>(vertex) - 1;

    EnsembleState::AmplitudeMap map;
    for (const auto& [config, amp] : state.amplitudes()) {
        double sign = 1.0;
        for (int b : nbrs)
            if (letter_logical(config.modes[static_cast<std::size_t>(b) - 1], zero, b) == 1)
                sign = -sign;
        BasisConfig next = config;
        next.modes[slot] = (config.modes[slot] == zero) ? one : zero;
        map.emplace(std::move(next), sign * amp);
    }
    return EnsembleState::from_amplitudes(state.level_count(), std::move(map),
                                          state.prune_threshold());
}

}  // namespace

std::vector<double> stabilizer_expectations(const EnsembleState& state, const GraphSpec& graph,
                                            const LocalCorrection& correction) {
    graph.validate();
    if (state.mode_count() < graph.vertex_count)
        throw std::invalid_argument(
            "stabilizer_expectations: state has fewer modes than the graph has vertices");
    if (!correction.empty() && static_cast<int>(correction.size()) != graph.vertex_count)
        throw std::invalid_argument(
            "stabilizer_expectations: correction size differs from the vertex count");
    check_polarized(state, graph.vertex_count);

    EnsembleState corrected = state;
    for (std::size_t k = 0; k < correction.size(); ++k)
        corrected = apply_mode_gate(corrected, static_cast<int>(k) + 1, correction[k],
                                    graph.zero_letter);

    const double squared_norm = norm(corrected);
    std::vector<double> expectations;
    expectations.reserve(static_cast<std::size_t>(graph.vertex_count));
    for (int a = 1; a <= graph.vertex_count; ++a) {
        const EnsembleState phi = apply_stabilizer(corrected, graph, a);
        expectations.push_back(inner_product(corrected, phi).real() / squared_norm);
    }
    return expectations;
}

namespace {

// Depth-first search over per-mode Clifford gates. Modes with a pinned
// gate are not searched; free modes try gates in ascending table order,
// so the first full assignment is the lexicographically smallest one.
// Returns std::nullopt when no assignment reaches every stabilizer.
std::optional<LocalCorrection> search_correction(
    const EnsembleState& state, const GraphSpec& graph,
    const std::vector<std::optional<ModeGate>>& pinned, double tolerance) {
    const int vertex_count = graph.vertex_count;
    // Vertices whose stabilizer support is fully assigned once the given
    // mode's gate is chosen.
    std::vector<std::vector<int>> due(static_cast<std::size_t>(vertex_count) + 1);
    for (int a = 1; a <= vertex_count; ++a) {
        int max_mode = a;
        for (int b : graph.neighbours(a))
            max_mode = std::max(max_mode, b);
        due[static_cast<std::size_t>(max_mode)].push_back(a);
    }

    const std::vector<ModeGate>& gates = clifford_gates();
    const double floor = 1.0 - tolerance;
    const double squared_norm = norm(state);
    LocalCorrection chosen(static_cast<std::size_t>(vertex_count));

    std::vector<EnsembleState> stack;
    stack.reserve(static_cast<std::size_t>(vertex_count) + 1);
    stack.push_back(state);

    const auto admissible = [&](const EnsembleState& candidate, int mode) {
        for (int a : due[static_cast<std::size_t>(mode)]) {
            const EnsembleState phi = apply_stabilizer(candidate, graph, a);
            if (inner_product(candidate, phi).real() / squared_norm < floor)
                return false;
        }
        return true;
    };

    std::function<bool(int)> dfs = [&](int mode) -> bool {
        if (mode > vertex_count)
            return true;
        const std::optional<ModeGate>& pin = pinned[static_cast<std::size_t>(mode) - 1];
        const std::size_t first = pin ? static_cast<std::size_t>(pin->clifford_index) : 0;
        const std::size_t last = pin ? first + 1 : gates.size();
        for (std::size_t g = first; g < last; ++g) {
            EnsembleState candidate =
                apply_mode_gate(stack.back(), mode, gates[g], graph.zero_letter);
            if (!admissible(candidate, mode))
                continue;
            chosen[static_cast<std::size_t>(mode) - 1] = gates[g];
            stack.push_back(std::move(candidate));
            if (dfs(mode + 1))
                return true;
            stack.pop_back();
        }
        return false;
    };

    if (!dfs(1))
        return std::nullopt;
    return chosen;
}

void check_search_preconditions(const EnsembleState& state, const GraphSpec& graph) {
    graph.validate();
    if (graph.vertex_count > 5)
        throw std::invalid_argument("find_local_correction: exhaustive search limited to 5 modes");
    if (state.mode_count() < graph.vertex_count)
        throw std::invalid_argument("find_local_correction: state has fewer modes than vertices");
    check_polarized(state, graph.vertex_count);
}

}  // namespace

LocalCorrection find_local_correction(const EnsembleState& state, const GraphSpec& graph,
                                      double tolerance) {
    check_search_preconditions(state, graph);
    std::vector<std::optional<ModeGate>> free_modes(
        static_cast<std::size_t>(graph.vertex_count));
    std::optional<LocalCorrection> found = search_correction(state, graph, free_modes, tolerance);
    if (!found)
        throw NoCorrectionFound(
            "no per-mode Clifford correction reaches the graph-state stabilizers");
    return *found;
}

LocalCorrection FrozenClusterCorrection::expand(int mode_count,
                                                const std::vector<Letter>& outcomes) const {
    if (static_cast<int>(outcomes.size()) != boundary_mode_count)
        throw std::invalid_argument("expand: one outcome per boundary mode required");
    if (mode_count < boundary_mode_count)
        throw std::invalid_argument("expand: fewer modes than boundary gates");
    LocalCorrection correction(static_cast<std::size_t>(mode_count), identity_gate());
    for (int i = 0; i < boundary_mode_count; ++i) {
        const std::map<Letter, ModeGate>& gates = per_outcome[static_cast<std::size_t>(i)];
        const auto it = gates.find(outcomes[static_cast<std::size_t>(i)]);
        if (it == gates.end())
            throw std::invalid_argument("expand: no gate frozen for this outcome letter");
        correction[correction.size() - static_cast<std::size_t>(boundary_mode_count) +
                   static_cast<std::size_t>(i)] = it->second;
    }
    return correction;
}

FrozenClusterCorrection freeze_cluster_correction(
    const std::vector<std::pair<std::vector<Letter>, EnsembleState>>& outcome_branches,
    const GraphSpec& graph, int boundary_mode_count, double tolerance) {
    if (outcome_branches.empty())
        throw std::invalid_argument("freeze_cluster_correction: no branches");
    if (boundary_mode_count < 1 || boundary_mode_count > graph.vertex_count)
        throw std::invalid_argument("freeze_cluster_correction: boundary size out of range");
    const std::size_t boundary = static_cast<std::size_t>(boundary_mode_count);
    for (const auto& [outcomes, state] : outcome_branches) {
        if (outcomes.size() != boundary)
            throw std::invalid_argument(
                "freeze_cluster_correction: one outcome per boundary mode required");
        check_search_preconditions(state, graph);
    }

    // Reference branch: the lexicographically smallest outcome vector.
    const auto* reference = &outcome_branches.front();
    for (const auto& branch : outcome_branches)
        if (branch.first < reference->first)
            reference = &branch;

    const std::size_t interior = static_cast<std::size_t>(graph.vertex_count) - boundary;
    const LocalCorrection base =
        find_local_correction(reference->second, graph, tolerance);
    for (std::size_t k = 0; k < interior; ++k)
        if (base[k].clifford_index != 0)
            throw NoCorrectionFound(
                "correction needed away from the boundary; the protocol output is not in "
                "the expected local frame");

    FrozenClusterCorrection frozen;
    frozen.boundary_mode_count = boundary_mode_count;
    frozen.per_outcome.resize(boundary);
    for (std::size_t i = 0; i < boundary; ++i)
        frozen.per_outcome[i].emplace(reference->first[i], base[interior + i]);

    // Branches differing from the reference in a single outcome isolate
    // that outcome's boundary gate: pin everything else and search it.
    const auto differing_positions = [&](const std::vector<Letter>& outcomes) {
        std::vector<std::size_t> positions;
        for (std::size_t i = 0; i < boundary; ++i)
            if (outcomes[i] != reference->first[i])
                positions.push_back(i);
        return positions;
    };

    for (const auto& [outcomes, state] : outcome_branches) {
        const std::vector<std::size_t> positions = differing_positions(outcomes);
        if (positions.size() != 1)
            continue;
        const std::size_t pos = positions.front();
        std::vector<std::optional<ModeGate>> pinned(
            static_cast<std::size_t>(graph.vertex_count));
        for (std::size_t k = 0; k < interior; ++k)
            pinned[k] = identity_gate();
        for (std::size_t i = 0; i < boundary; ++i)
            if (i != pos)
                pinned[interior + i] = frozen.per_outcome[i].at(reference->first[i]);
        const std::optional<LocalCorrection> found =
            search_correction(state, graph, pinned, tolerance);
        if (!found)
            throw NoCorrectionFound(
                "no boundary gate explains a single-outcome deviation branch");
        if (!frozen.per_outcome[pos].emplace(outcomes[pos], (*found)[interior + pos]).second)
            throw std::invalid_argument("freeze_cluster_correction: duplicate outcome pattern");
    }

    // Every remaining branch must be explained by the per-outcome gates
    // already frozen — the joint byproduct is the product of the
    // single-measurement byproducts.
    for (const auto& [outcomes, state] : outcome_branches) {
        if (differing_positions(outcomes).size() < 2)
            continue;
        const LocalCorrection correction = frozen.expand(graph.vertex_count, outcomes);
        const std::vector<double> expectations =
            stabilizer_expectations(state, graph, correction);
        for (double value : expectations)
            if (value < 1.0 - tolerance)
                throw NoCorrectionFound(
                    "per-measurement boundary gates do not explain a joint outcome branch");
    }
    return frozen;
}

GhzReport ghz_correlation_check(const EnsembleState& state, int mode_count) {
    if (mode_count < 1 || state.mode_count() != mode_count)
        throw std::invalid_argument("ghz_correlation_check: mode count mismatch");
    GhzReport report;
    for (const auto& [config, amp] : state.amplitudes()) {
        const double weight = std::norm(amp);
        bool all_photon = true;
        bool all_vacuum = true;
        for (Letter letter : config.modes) {
            all_photon = all_photon && letter == Letter::R;
            all_vacuum = all_vacuum && letter == Letter::Vac;
        }
        if (all_photon)
            report.all_photon += weight;
        else if (all_vacuum)
            report.all_vacuum += weight;
        else
            report.mixed += weight;
    }
    return report;
}

GhzReport ghz_correlation_check(const StateEnsemble& ensemble, int mode_count) {
    GhzReport report;
    for (const auto& branch : ensemble.branches) {
        const GhzReport partial = ghz_correlation_check(branch.state, mode_count);
        report.all_photon += branch.weight * partial.all_photon;
        report.all_vacuum += branch.weight * partial.all_vacuum;
        report.mixed += branch.weight * partial.mixed;
    }
    return report;
}

}  // namespace photonic
