#include "isingdual/sampling.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <thread>

namespace isingdual {

std::string_view to_string(Estimator e) noexcept
{
    return e == Estimator::uniform ? "uniform" : "gibbs-ot";
}

std::string_view to_string(Domain d) noexcept
{
    return d == Domain::primal ? "primal" : "dual";
}

void ChainSpec::validate() const
{
    if (samples == 0)
        throw std::invalid_argument("chain needs at least one sample");
    if (record_stride == 0)
        throw std::invalid_argument("record stride must be at least 1");
}

BatchedLogMean::BatchedLogMean(std::uint64_t expected_count, std::size_t batches)
{
    batches = std::max<std::size_t>(batches, 1);
    batch_size_ = std::max<std::uint64_t>(1, (expected_count + batches - 1) / batches);
    batch_log_means_.reserve(batches + 1);
}

void BatchedLogMean::add(double log_value)
{
    total_.add(log_value);
    current_.add(log_value);
    if (current_.count() == batch_size_) {
        batch_log_means_.push_back(current_.log_mean());
        current_ = RunningLogMean{};
    }
}

double BatchedLogMean::std_error() const
{
    std::vector<double> means = batch_log_means_;
    // A trailing partial batch only counts if it is at least half full.
    if (current_.count() * 2 >= batch_size_ && current_.count() > 0)
        means.push_back(current_.log_mean());
    if (means.size() < 2)
        return std::numeric_limits<double>::infinity();
    const double ref = log_mean();
    double sum = 0.0;
    double sum_sq = 0.0;
    for (double lm : means) {
        const double r = std::exp(lm - ref);
        sum += r;
        sum_sq += r * r;
    }
    const double n = static_cast<double>(means.size());
    const double mean = sum / n;
    const double var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0));
    return std::sqrt(var / n) / mean;
}

namespace {

double sigmoid(double t) noexcept
{
    return 1.0 / (1.0 + std::exp(-t));
}

void fill_random_bits(std::vector<std::uint8_t>& bits, Rng& rng)
{
    std::uint64_t word = 0;
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (i % 64 == 0)
            word = rng.next();
        bits[i] = static_cast<std::uint8_t>(word & 1U);
        word >>= 1;
    }
}

void require_positive(const ModifiedDualModel& dual)
{
    if (!dual.all_positive())
        throw std::domain_error("dual-domain sampling requires every coupling J > 0");
}

// ln of the dual weight of an edge word, for strictly positive factors.
double dual_positive_log_weight(const ModifiedDualModel& dual, std::span<const std::uint8_t> edges)
{
    const auto ratio = dual.log_ratio();
    double lw = dual.log_weight_empty();
    for (std::size_t e = 0; e < edges.size(); ++e)
        if (edges[e])
            lw += ratio[e];
    return lw;
}

void check_state(const ModifiedDualModel& dual, const DualState& state)
{
    if (!satisfies_parity(dual, state.edges) || expand_faces(dual, state.faces) != state.edges)
        throw std::logic_error("dual sampler state left the cycle space");
}

// Collects estimator samples and records the running path.
class PathRecorder
{
public:
    PathRecorder(std::size_t chain_id, std::size_t sites, std::uint64_t samples,
                 std::uint64_t stride)
        : acc_(samples), samples_(samples), stride_(stride)
    {
        path_.chain_id = chain_id;
        path_.site_count = sites;
        path_.points.reserve(static_cast<std::size_t>(samples / stride + 1));
    }

    /// `to_ln_z` maps the accumulator's log mean to the current ln Z estimate.
    template <class ToLnZ>
    void add(double log_value, ToLnZ&& to_ln_z)
    {
        acc_.add(log_value);
        const std::uint64_t k = acc_.count();
        if (k % stride_ == 0 || k == samples_)
            path_.points.push_back({k, per_site_log2(to_ln_z(acc_.log_mean()), path_.site_count)});
    }

    template <class ToLnZ>
    SamplePath finish(ToLnZ&& to_ln_z)
    {
        path_.ln_z = to_ln_z(acc_.log_mean());
        path_.std_error = acc_.std_error();
        return std::move(path_);
    }

private:
    BatchedLogMean acc_;
    std::uint64_t samples_;
    std::uint64_t stride_;
    SamplePath path_;
};

SamplePath uniform_primal(const IsingModel& model, std::uint64_t samples, std::uint64_t stride,
                          Rng& rng, std::size_t chain_id)
{
    const std::size_t n = model.site_count();
    const double log_states = static_cast<double>(n) * std::numbers::ln2;
    auto to_ln_z = [log_states](double lm) { return log_states + lm; };
    PathRecorder rec(chain_id, n, samples, stride);
    Configuration x(n);
    for (std::uint64_t k = 0; k < samples; ++k) {
        fill_random_bits(x, rng);
        rec.add(log_weight(model, x), to_ln_z);
    }
    return rec.finish(to_ln_z);
}

SamplePath uniform_dual(const ModifiedDualModel& dual, std::uint64_t samples, std::uint64_t stride,
                        bool check, Rng& rng, std::size_t chain_id)
{
    require_positive(dual);
    const double log_states = static_cast<double>(dual.free_dimension()) * std::numbers::ln2;
    auto to_ln_z = [&dual, log_states](double lm) { return recover_log_Z(dual, log_states + lm); };
    PathRecorder rec(chain_id, dual.site_count(), samples, stride);
    DualState state{FaceAssignment(dual.face_count()), DualConfiguration(dual.edge_count())};
    for (std::uint64_t k = 0; k < samples; ++k) {
        fill_random_bits(state.faces, rng);
        for (std::size_t e = 0; e < state.edges.size(); ++e) {
            const auto [f0, f1] = dual.faces_of_edge(e);
            std::uint8_t bit = state.faces[f0];
            if (f1 != ModifiedDualModel::npos)
                bit ^= state.faces[f1];
            state.edges[e] = bit;
        }
        if (check)
            check_state(dual, state);
        rec.add(dual_positive_log_weight(dual, state.edges), to_ln_z);
    }
    return rec.finish(to_ln_z);
}

SamplePath ot_primal(const IsingModel& model, const ChainSpec& spec, Rng& rng, std::size_t chain_id)
{
    const std::size_t n = model.site_count();
    const double log_states = static_cast<double>(n) * std::numbers::ln2;
    auto to_ln_z = [log_states](double lm) { return log_states - lm; };
    Configuration x(n);
    fill_random_bits(x, rng);
    for (std::uint64_t s = 0; s < spec.burn_in; ++s)
        gibbs_sweep_primal(model, x, rng);
    PathRecorder rec(chain_id, n, spec.samples, spec.record_stride);
    for (std::uint64_t k = 0; k < spec.samples; ++k) {
        gibbs_sweep_primal(model, x, rng);
        rec.add(-log_weight(model, x), to_ln_z);
    }
    return rec.finish(to_ln_z);
}

SamplePath ot_dual(const ModifiedDualModel& dual, const ChainSpec& spec, Rng& rng,
                   std::size_t chain_id)
{
    require_positive(dual);
    const double log_states = static_cast<double>(dual.free_dimension()) * std::numbers::ln2;
    auto to_ln_z = [&dual, log_states](double lm) { return recover_log_Z(dual, log_states - lm); };
    FaceAssignment faces(dual.face_count());
    fill_random_bits(faces, rng);
    DualState state = DualState::from_faces(dual, std::move(faces));
    for (std::uint64_t s = 0; s < spec.burn_in; ++s)
        gibbs_sweep_dual(dual, state, rng);
    PathRecorder rec(chain_id, dual.site_count(), spec.samples, spec.record_stride);
    for (std::uint64_t k = 0; k < spec.samples; ++k) {
        gibbs_sweep_dual(dual, state, rng);
        if (spec.check_constraints)
            check_state(dual, state);
        rec.add(-dual_positive_log_weight(dual, state.edges), to_ln_z);
    }
    return rec.finish(to_ln_z);
}

SamplePath dispatch(const ChainSpec& spec, const IsingModel& model, const ModifiedDualModel* dual,
                    std::size_t chain_id)
{
    Rng rng = Rng::for_chain(spec.seed, chain_id);
    if (spec.domain == Domain::primal) {
        if (spec.estimator == Estimator::uniform)
            return uniform_primal(model, spec.samples, spec.record_stride, rng, chain_id);
        return ot_primal(model, spec, rng, chain_id);
    }
    if (spec.estimator == Estimator::uniform)
        return uniform_dual(*dual, spec.samples, spec.record_stride, spec.check_constraints, rng,
                            chain_id);
    return ot_dual(*dual, spec, rng, chain_id);
}

} // namespace

double primal_heat_bath_probability(const IsingModel& model, std::span<const std::uint8_t> x,
                                    std::size_t site)
{
    const auto j = model.couplings();
    double field = 0.0;
    for (const auto& inc : model.incident(site))
        field += x[inc.neighbor] ? j[inc.edge] : -j[inc.edge];
    return sigmoid(2.0 * field);
}

void gibbs_sweep_primal(const IsingModel& model, Configuration& x, Rng& rng)
{
    for (std::size_t site = 0; site < x.size(); ++site) {
        const double p1 = primal_heat_bath_probability(model, x, site);
        x[site] = rng.uniform() < p1 ? 1 : 0;
    }
}

DualState DualState::from_faces(const ModifiedDualModel& dual, FaceAssignment faces)
{
    DualConfiguration edges = expand_faces(dual, faces);
    return {std::move(faces), std::move(edges)};
}

double dual_heat_bath_probability(const ModifiedDualModel& dual, const DualState& state,
                                  std::size_t face)
{
    const auto ratio = dual.log_ratio();
    const std::uint8_t current = state.faces[face];
    // With the other faces fixed, edge e carries (other_e XOR b) when this
    // face is b; log W1 - log W0 collects +-ratio_e accordingly.
    double t = 0.0;
    for (std::size_t e : dual.faces()[face]) {
        const std::uint8_t other = state.edges[e] ^ current;
        t += other ? -ratio[e] : ratio[e];
    }
    return sigmoid(t);
}

void gibbs_sweep_dual(const ModifiedDualModel& dual, DualState& state, Rng& rng)
{
    require_positive(dual);
    const auto faces = dual.faces();
    for (std::size_t f = 0; f < faces.size(); ++f) {
        const double p1 = dual_heat_bath_probability(dual, state, f);
        const std::uint8_t bit = rng.uniform() < p1 ? 1 : 0;
        if (bit != state.faces[f]) {
            state.faces[f] = bit;
            for (std::size_t e : faces[f])
                state.edges[e] ^= 1U;
        }
    }
}

FaceAssignment gibbs_sweep_dual(const ModifiedDualModel& dual, FaceAssignment faces, Rng& rng)
{
    DualState state = DualState::from_faces(dual, std::move(faces));
    gibbs_sweep_dual(dual, state, rng);
    return std::move(state.faces);
}

SamplePath estimate_uniform_primal(const IsingModel& model, std::uint64_t samples,
                                   std::uint64_t seed, std::uint64_t record_stride)
{
    ChainSpec{Estimator::uniform, Domain::primal, samples, 0, seed, record_stride}.validate();
    Rng rng = Rng::for_chain(seed, 0);
    return uniform_primal(model, samples, record_stride, rng, 0);
}

SamplePath estimate_uniform_dual(const ModifiedDualModel& dual, std::uint64_t samples,
                                 std::uint64_t seed, std::uint64_t record_stride,
                                 bool check_constraints)
{
    ChainSpec{Estimator::uniform, Domain::dual, samples, 0, seed, record_stride}.validate();
    Rng rng = Rng::for_chain(seed, 0);
    return uniform_dual(dual, samples, record_stride, check_constraints, rng, 0);
}

SamplePath estimate_uniform_dual(const IsingModel& grid, std::uint64_t samples, std::uint64_t seed,
                                 std::uint64_t record_stride)
{
    return estimate_uniform_dual(ModifiedDualModel(grid), samples, seed, record_stride);
}

SamplePath estimate_ot(const IsingModel& model, const ChainSpec& spec, std::size_t chain_id)
{
    spec.validate();
    Rng rng = Rng::for_chain(spec.seed, chain_id);
    return ot_primal(model, spec, rng, chain_id);
}

SamplePath estimate_ot(const ModifiedDualModel& dual, const ChainSpec& spec, std::size_t chain_id)
{
    spec.validate();
    Rng rng = Rng::for_chain(spec.seed, chain_id);
    return ot_dual(dual, spec, rng, chain_id);
}

SamplePath run_chain(const ChainSpec& spec, const IsingModel& model, std::size_t chain_id)
{
    spec.validate();
    std::optional<ModifiedDualModel> dual;
    if (spec.domain == Domain::dual)
        dual.emplace(model);
    return dispatch(spec, model, dual ? &*dual : nullptr, chain_id);
}

std::vector<SamplePath> run_chains(const ChainSpec& spec, const IsingModel& model,
                                   std::size_t n_chains, std::size_t threads)
{
    spec.validate();
    if (n_chains == 0)
        throw std::invalid_argument("need at least one chain");
    std::optional<ModifiedDualModel> dual;
    if (spec.domain == Domain::dual) {
        dual.emplace(model);
        require_positive(*dual);
    }
    const ModifiedDualModel* dual_ptr = dual ? &*dual : nullptr;

    std::vector<SamplePath> paths(n_chains);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t id = next++; id < n_chains; id = next++) {
            try {
                paths[id] = dispatch(spec, model, dual_ptr, id);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
            }
        }
    };
    const std::size_t workers = std::clamp<std::size_t>(threads, 1, n_chains);
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back(worker);
    }
    if (failure)
        std::rethrow_exception(failure);
    return paths;
}

} // namespace isingdual
