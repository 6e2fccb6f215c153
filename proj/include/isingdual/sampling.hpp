#pragma once

#include "isingdual/duality.hpp"
#include "isingdual/lattice_model.hpp"
#include "isingdual/log_sum.hpp"
#include "isingdual/rng.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace isingdual {

enum class Estimator { uniform, gibbs_ot };
enum class Domain { primal, dual };

std::string_view to_string(Estimator e) noexcept;
std::string_view to_string(Domain d) noexcept;

/// One Monte Carlo chain. `samples` counts estimator samples (one per uniform
/// draw, one per Gibbs sweep after burn-in); the path records the running
/// estimate every `record_stride` samples and at the last sample. `burn_in`
/// is in sweeps and only applies to gibbs_ot.
struct ChainSpec
{
    Estimator estimator = Estimator::uniform;
    Domain domain = Domain::primal;
    std::uint64_t samples = 100000;
    std::uint64_t burn_in = 1000;
    std::uint64_t seed = 0;
    std::uint64_t record_stride = 100;
    bool check_constraints = false;

    /// Throws std::invalid_argument on samples == 0 or record_stride == 0.
    void validate() const;
};

struct PathPoint
{
    std::uint64_t sample_index;
    double per_site_log2_z;
};

struct SamplePath
{
    std::size_t chain_id = 0;
    std::vector<PathPoint> points;
    /// Final estimate of ln Z and its standard error (batch means over the
    /// chain, propagated to the log domain).
    double ln_z = neg_inf;
    double std_error = 0.0;
    std::size_t site_count = 0;

    [[nodiscard]] double final_per_site() const noexcept { return per_site_log2(ln_z, site_count); }
    /// Standard error of final_per_site().
    [[nodiscard]] double per_site_std_error() const noexcept
    {
        return per_site_log2(std_error, site_count);
    }
};

/// Log-domain mean with a batch-means standard error. Consecutive samples are
/// grouped into `batches` blocks, so autocorrelation inside a block does not
/// shrink the error estimate.
class BatchedLogMean
{
public:
    BatchedLogMean(std::uint64_t expected_count, std::size_t batches = 32);

    void add(double log_value);

    [[nodiscard]] double log_mean() const noexcept { return total_.log_mean(); }
    [[nodiscard]] std::uint64_t count() const noexcept { return total_.count(); }
    /// Standard error of log_mean(), by the delta method.
    [[nodiscard]] double std_error() const;

private:
    std::uint64_t batch_size_;
    RunningLogMean total_;
    RunningLogMean current_;
    std::vector<double> batch_log_means_;
};

/// p(x_site = 1 | all other sites) under the Boltzmann distribution.
double primal_heat_bath_probability(const IsingModel& model, std::span<const std::uint8_t> x,
                                    std::size_t site);

/// One systematic heat-bath sweep over the sites, in site order.
void gibbs_sweep_primal(const IsingModel& model, Configuration& x, Rng& rng);

/// Face bits together with the edge word they generate.
struct DualState
{
    FaceAssignment faces;
    DualConfiguration edges;

    static DualState from_faces(const ModifiedDualModel& dual, FaceAssignment faces);
};

/// p(face = 1 | all other faces) under the dual distribution. Requires
/// strictly positive dual factors.
double dual_heat_bath_probability(const ModifiedDualModel& dual, const DualState& state,
                                  std::size_t face);

/// One systematic heat-bath sweep over the faces; flipping a face toggles its
/// four edges. Throws std::domain_error unless every coupling is positive.
void gibbs_sweep_dual(const ModifiedDualModel& dual, DualState& state, Rng& rng);

FaceAssignment gibbs_sweep_dual(const ModifiedDualModel& dual, FaceAssignment faces, Rng& rng);

/// Uniform sampling on {0,1}^N: ln Z ~ N ln 2 + ln mean f(x).
SamplePath estimate_uniform_primal(const IsingModel& model, std::uint64_t samples,
                                   std::uint64_t seed, std::uint64_t record_stride = 1);

/// Uniform sampling of face assignments: ln Z_mod ~ D ln 2 + ln mean nu(omega),
/// then converted to ln Z.
SamplePath estimate_uniform_dual(const ModifiedDualModel& dual, std::uint64_t samples,
                                 std::uint64_t seed, std::uint64_t record_stride = 1,
                                 bool check_constraints = false);
SamplePath estimate_uniform_dual(const IsingModel& grid, std::uint64_t samples, std::uint64_t seed,
                                 std::uint64_t record_stride = 1);

/// Gibbs sampling with the harmonic-mean (Ogata-Tanemura) estimator:
/// ln Z ~ S ln 2 - ln mean(1 / f(x)), with S = N on the primal graph.
SamplePath estimate_ot(const IsingModel& model, const ChainSpec& spec, std::size_t chain_id = 0);
/// Same on the face variables (S = D), converted to ln Z.
SamplePath estimate_ot(const ModifiedDualModel& dual, const ChainSpec& spec,
                       std::size_t chain_id = 0);

/// Runs one chain of `spec`, using the stream Rng::for_chain(spec.seed, chain_id).
SamplePath run_chain(const ChainSpec& spec, const IsingModel& model, std::size_t chain_id);

/// Runs n_chains independent chains on up to `threads` workers. Results are
/// ordered by chain id and do not depend on the worker count.
std::vector<SamplePath> run_chains(const ChainSpec& spec, const IsingModel& model,
                                   std::size_t n_chains, std::size_t threads = 1);

} // namespace isingdual
