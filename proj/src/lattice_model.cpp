#include "isingdual/lattice_model.hpp"

#include "isingdual/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace isingdual {

std::string_view to_string(Topology t) noexcept
{
    return t == Topology::chain ? "chain" : "grid";
}

std::string_view to_string(Boundary b) noexcept
{
    switch (b) {
    case Boundary::periodic_1d: return "periodic-1d";
    case Boundary::free_1d: return "free-1d";
    case Boundary::free_2d: return "free-2d";
    }
    return "?";
}

IsingModel::IsingModel(Topology topology, Boundary boundary, std::size_t size, std::size_t sites,
                       std::vector<Edge> edges, std::vector<double> couplings)
    : topology_(topology), boundary_(boundary), size_(size), sites_(sites),
      edges_(std::move(edges)), couplings_(std::move(couplings))
{
    std::vector<std::size_t> degree(sites_, 0);
    for (const auto& e : edges_) {
        ++degree[e.a];
        ++degree[e.b];
    }
    offsets_.assign(sites_ + 1, 0);
    for (std::size_t i = 0; i < sites_; ++i)
        offsets_[i + 1] = offsets_[i] + degree[i];
    incidence_.resize(offsets_.back());
    std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
    for (std::size_t id = 0; id < edges_.size(); ++id) {
        const auto& e = edges_[id];
        incidence_[fill[e.a]++] = {id, e.b};
        incidence_[fill[e.b]++] = {id, e.a};
    }
}

IsingModel IsingModel::chain(std::size_t n, Boundary boundary, std::vector<double> couplings)
{
    if (n < 2)
        throw std::invalid_argument("chain model needs n >= 2, got " + std::to_string(n));
    if (boundary == Boundary::free_2d)
        throw std::invalid_argument("chain model needs a 1D boundary condition");
    const std::size_t expected = boundary == Boundary::periodic_1d ? n : n - 1;
    if (couplings.size() != expected)
        throw std::invalid_argument("chain of " + std::to_string(n) + " sites with " +
                                    std::string(to_string(boundary)) + " boundary needs " +
                                    std::to_string(expected) + " couplings, got " +
                                    std::to_string(couplings.size()));
    std::vector<Edge> edges;
    edges.reserve(expected);
    for (std::size_t l = 0; l + 1 < n; ++l)
        edges.push_back({l, l + 1});
    if (boundary == Boundary::periodic_1d)
        edges.push_back({n - 1, 0});
    return IsingModel(Topology::chain, boundary, n, n, std::move(edges), std::move(couplings));
}

IsingModel IsingModel::grid(std::size_t m, std::vector<double> couplings)
{
    if (m < 2)
        throw std::invalid_argument("grid model needs m >= 2, got " + std::to_string(m));
    const std::size_t expected = grid_edge_count(m);
    if (couplings.size() != expected)
        throw std::invalid_argument("grid of side " + std::to_string(m) + " needs " +
                                    std::to_string(expected) + " couplings, got " +
                                    std::to_string(couplings.size()));
    std::vector<Edge> edges;
    edges.reserve(expected);
    for (std::size_t r = 0; r < m; ++r)
        for (std::size_t c = 0; c + 1 < m; ++c)
            edges.push_back({r * m + c, r * m + c + 1});
    for (std::size_t r = 0; r + 1 < m; ++r)
        for (std::size_t c = 0; c < m; ++c)
            edges.push_back({r * m + c, (r + 1) * m + c});
    return IsingModel(Topology::grid, Boundary::free_2d, m, m * m, std::move(edges),
                      std::move(couplings));
}

bool IsingModel::all_couplings_positive() const noexcept
{
    for (double j : couplings_)
        if (!(j > 0.0))
            return false;
    return true;
}

IsingModel IsingModel::with_negated_couplings() const
{
    std::vector<double> flipped(couplings_.begin(), couplings_.end());
    for (auto& j : flipped)
        j = -j;
    return IsingModel(topology_, boundary_, size_, sites_, edges_, std::move(flipped));
}

IsingModel build_chain_model(std::size_t n, Boundary boundary, std::vector<double> couplings)
{
    return IsingModel::chain(n, boundary, std::move(couplings));
}

IsingModel build_grid_model(std::size_t m, std::vector<double> couplings)
{
    return IsingModel::grid(m, std::move(couplings));
}

std::vector<double> sample_uniform_values(std::size_t count, double lo, double hi, std::uint64_t seed)
{
    if (!(lo < hi))
        throw std::invalid_argument("coupling interval must satisfy lo < hi");
    Rng rng(seed);
    std::vector<double> out(count);
    for (auto& j : out)
        j = rng.uniform(lo, hi);
    return out;
}

std::vector<double> sample_couplings_uniform(std::size_t m, double lo, double hi, std::uint64_t seed)
{
    return sample_uniform_values(grid_edge_count(m), lo, hi, seed);
}

double kernel_value(double coupling, int a, int b) noexcept
{
    return a == b ? std::exp(coupling) : std::exp(-coupling);
}

namespace {

void check_length(const IsingModel& model, std::span<const std::uint8_t> x)
{
    if (x.size() != model.site_count())
        throw std::invalid_argument("configuration has " + std::to_string(x.size()) +
                                    " bits, model has " + std::to_string(model.site_count()) +
                                    " sites");
}

} // namespace

double log_weight(const IsingModel& model, std::span<const std::uint8_t> x)
{
    check_length(model, x);
    const auto edges = model.edges();
    const auto j = model.couplings();
    double lw = 0.0;
    for (std::size_t e = 0; e < edges.size(); ++e)
        lw += x[edges[e].a] == x[edges[e].b] ? j[e] : -j[e];
    return lw;
}

double energy(const IsingModel& model, std::span<const std::uint8_t> x)
{
    return -log_weight(model, x);
}

double per_site_log2(double ln_z, std::size_t site_count) noexcept
{
    return ln_z / (static_cast<double>(site_count) * std::numbers::ln2);
}

} // namespace isingdual
