#pragma once

#include "isingdual/duality.hpp"
#include "isingdual/lattice_model.hpp"

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace isingdual {

enum class ExactMethod { brute_primal, brute_dual, transfer_1d, transfer_2d, closed_form };

std::string_view to_string(ExactMethod method) noexcept;

/// Identifies the model an exact result belongs to.
struct ModelFingerprint
{
    Topology topology;
    std::size_t size;
    Boundary boundary;
    std::uint64_t coupling_hash;

    friend bool operator==(const ModelFingerprint&, const ModelFingerprint&) = default;
};

ModelFingerprint fingerprint(const IsingModel& model) noexcept;
ModelFingerprint fingerprint(const ModifiedDualModel& dual) noexcept;

struct ExactResult
{
    /// ln Z, except for brute_force_dual_ln_Zmod where it holds ln Z_mod.
    double ln_Z;
    ExactMethod method;
    ModelFingerprint model;
};

inline constexpr std::size_t default_max_brute_sites = 26;
inline constexpr std::size_t default_max_brute_faces = 24;
inline constexpr std::size_t default_max_transfer_side = 20;

/// Exhaustive sum over all 2^N configurations.
ExactResult brute_force_ln_Z(const IsingModel& model,
                             std::size_t max_sites = default_max_brute_sites);

/// Exhaustive signed sum of the dual weights over all 2^D face assignments;
/// returns ln Z_mod. Throws std::domain_error if the sum is not positive.
ExactResult brute_force_dual_ln_Zmod(const ModifiedDualModel& dual,
                                     std::size_t max_faces = default_max_brute_faces);

/// brute_force_dual_ln_Zmod followed by recover_log_Z.
ExactResult brute_force_dual_ln_Z(const IsingModel& grid,
                                  std::size_t max_faces = default_max_brute_faces);

/// Ordered product of 2x2 edge transfer matrices (trace for periodic,
/// 1^T M 1 for free boundaries).
ExactResult transfer_matrix_1d_ln_Z(const IsingModel& chain);

/// Row-by-row transfer over the 2^m row states; bit c of a row state is
/// column c.
ExactResult transfer_matrix_2d_ln_Z(const IsingModel& grid,
                                    std::size_t max_side = default_max_transfer_side);

/// Closed-form chain result, see closed_form_ln_Z_1d.
ExactResult closed_form_ln_Z(const IsingModel& chain);

} // namespace isingdual
