#pragma once

#include "isingdual/lattice_model.hpp"
#include "isingdual/log_sum.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace isingdual {

/// Full 2x2 Fourier transform of the pairwise kernel, indexed [a][b] over
/// the dual variables. Only the diagonal survives.
std::array<std::array<double, 2>, 2> kernel_dft(double coupling) noexcept;

/// Diagonal of the transformed kernel in log-magnitude form:
/// 4 cosh J for dual bit 0 and 4 sinh J for dual bit 1. The odd entry is
/// negative for J < 0 and zero at J = 0.
struct DualFactor
{
    double log_even = 0.0;
    double log_odd = neg_inf;
    int odd_sign = 0;

    [[nodiscard]] SignedLog value(int bit) const noexcept
    {
        return bit == 0 ? SignedLog{1, log_even} : SignedLog{odd_sign, log_odd};
    }
};

/// Builds the dual factor for one edge and checks the off-diagonal entries of
/// the transform vanish. Throws std::logic_error otherwise.
DualFactor dft_pair_kernel(double coupling);

/// A unit plaquette of the grid as four edge ids: top, bottom, left, right.
using Face = std::array<std::size_t, 4>;

/// Bits over faces (the free variables of the dual sampler).
using FaceAssignment = std::vector<std::uint8_t>;
/// Bits over lattice edges (one dual variable per edge).
using DualConfiguration = std::vector<std::uint8_t>;

/// The unit plaquettes of the free-boundary m x m grid, row-major.
std::vector<Face> face_cycle_basis(std::size_t m);

/// Modified dual graph of a free-boundary grid: one binary variable and one
/// unary factor per lattice edge, a parity check at every site, and the
/// plaquettes as a basis of the space of valid edge words.
class ModifiedDualModel
{
public:
    explicit ModifiedDualModel(const IsingModel& grid);

    [[nodiscard]] std::size_t side() const noexcept { return m_; }
    [[nodiscard]] std::size_t site_count() const noexcept { return m_ * m_; }
    [[nodiscard]] std::size_t edge_count() const noexcept { return factors_.size(); }
    [[nodiscard]] std::size_t face_count() const noexcept { return faces_.size(); }
    /// Dimension of the cycle space, |edges| - N + 1 = (m-1)^2.
    [[nodiscard]] std::size_t free_dimension() const noexcept { return faces_.size(); }

    [[nodiscard]] std::span<const double> couplings() const noexcept { return couplings_; }
    [[nodiscard]] std::span<const DualFactor> factors() const noexcept { return factors_; }
    [[nodiscard]] std::span<const Face> faces() const noexcept { return faces_; }
    [[nodiscard]] std::span<const Edge> edges() const noexcept { return edges_; }
    /// Faces containing each edge; the second slot is npos for boundary edges.
    [[nodiscard]] std::array<std::size_t, 2> faces_of_edge(std::size_t edge) const noexcept
    {
        return edge_faces_[edge];
    }
    [[nodiscard]] std::span<const std::size_t> site_edges(std::size_t site) const noexcept
    {
        return {site_edge_ids_.data() + site_offsets_[site],
                site_offsets_[site + 1] - site_offsets_[site]};
    }

    /// True when every dual factor is strictly positive (all J_e > 0).
    [[nodiscard]] bool all_positive() const noexcept;

    /// Sum of log_even over all edges: the log weight of the empty edge word.
    [[nodiscard]] double log_weight_empty() const noexcept { return log_empty_; }
    /// Per-edge log_odd - log_even; -inf for J = 0. Valid when all_positive().
    [[nodiscard]] std::span<const double> log_ratio() const noexcept { return log_ratio_; }

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

private:
    std::size_t m_;
    std::vector<double> couplings_;
    std::vector<DualFactor> factors_;
    std::vector<Edge> edges_;
    std::vector<Face> faces_;
    std::vector<std::array<std::size_t, 2>> edge_faces_;
    std::vector<std::size_t> site_offsets_;
    std::vector<std::size_t> site_edge_ids_;
    std::vector<double> log_ratio_;
    double log_empty_ = 0.0;
};

ModifiedDualModel build_modified_dual(const IsingModel& grid);

/// Edge bit = XOR of the bits of the faces containing the edge.
DualConfiguration expand_faces(const ModifiedDualModel& dual, std::span<const std::uint8_t> faces);

/// True when the edge bits at every site sum to 0 mod 2.
bool satisfies_parity(const ModifiedDualModel& dual, std::span<const std::uint8_t> edge_bits);

/// Signed log weight prod_e nu_e(omega_e). Parity is checked only when
/// `check_parity` is set; a violation throws std::domain_error.
SignedLog dual_signed_log_weight(const ModifiedDualModel& dual,
                                 std::span<const std::uint8_t> edge_bits,
                                 bool check_parity = false);

/// ln prod_e nu_e(omega_e) for a nonnegative weight (-inf when it is zero).
/// Throws std::domain_error when the word picks up a negative factor.
double dual_log_weight(const ModifiedDualModel& dual, std::span<const std::uint8_t> edge_bits,
                       bool check_parity = false);

/// ln Z from the log of the constrained dual sum Z_mod:
/// ln Z = ln Z_mod + N ln 2 - |edges| ln 4.
double recover_log_Z(const ModifiedDualModel& dual, double log_z_mod) noexcept;

/// Same normalization for any graph given its site and edge counts.
double recover_log_Z(std::size_t sites, std::size_t edges, double log_z_mod) noexcept;

/// Closed-form ln Z of a chain:
/// periodic: N ln 2 + ln(prod cosh J + prod sinh J); free: ln 2 + sum ln(2 cosh J).
double closed_form_ln_Z_1d(std::span<const double> couplings, Boundary boundary);

} // namespace isingdual
