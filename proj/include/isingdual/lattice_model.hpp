#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace isingdual {

enum class Topology { chain, grid };

enum class Boundary { periodic_1d, free_1d, free_2d };

std::string_view to_string(Topology t) noexcept;
std::string_view to_string(Boundary b) noexcept;

struct Edge
{
    std::size_t a;
    std::size_t b;
};

/// One edge seen from a site: the edge id and the site on the other end.
struct Incidence
{
    std::size_t edge;
    std::size_t neighbor;
};

/// One bit per site, values in {0, 1}.
using Configuration = std::vector<std::uint8_t>;

/// Nearest-neighbour Ising model on a chain or a free-boundary square grid,
/// with one coupling per edge (inverse temperature folded into the couplings).
///
/// Grid sites are numbered row-major, site = row * m + col. Grid edges use a
/// fixed canonical order: all horizontal edges row by row (id r*(m-1)+c joins
/// (r,c)-(r,c+1)), then all vertical edges row by row (id m(m-1) + r*m + c
/// joins (r,c)-(r+1,c)). Chain edge l joins l and l+1; the periodic closing
/// edge (n-1, 0) comes last.
///
/// Immutable after construction.
class IsingModel
{
public:
    static IsingModel chain(std::size_t n, Boundary boundary, std::vector<double> couplings);
    static IsingModel grid(std::size_t m, std::vector<double> couplings);

    [[nodiscard]] Topology topology() const noexcept { return topology_; }
    [[nodiscard]] Boundary boundary() const noexcept { return boundary_; }
    /// Chain length n, or grid side m.
    [[nodiscard]] std::size_t size() const noexcept { return size_; }
    [[nodiscard]] std::size_t site_count() const noexcept { return sites_; }
    [[nodiscard]] std::size_t edge_count() const noexcept { return edges_.size(); }

    [[nodiscard]] std::span<const Edge> edges() const noexcept { return edges_; }
    [[nodiscard]] std::span<const double> couplings() const noexcept { return couplings_; }
    [[nodiscard]] std::span<const Incidence> incident(std::size_t site) const noexcept
    {
        return {incidence_.data() + offsets_[site], offsets_[site + 1] - offsets_[site]};
    }

    [[nodiscard]] bool is_grid() const noexcept { return topology_ == Topology::grid; }
    [[nodiscard]] bool all_couplings_positive() const noexcept;

    /// Same lattice with every coupling negated.
    [[nodiscard]] IsingModel with_negated_couplings() const;

private:
    IsingModel(Topology topology, Boundary boundary, std::size_t size, std::size_t sites,
               std::vector<Edge> edges, std::vector<double> couplings);

    Topology topology_;
    Boundary boundary_;
    std::size_t size_;
    std::size_t sites_;
    std::vector<Edge> edges_;
    std::vector<double> couplings_;
    std::vector<std::size_t> offsets_;
    std::vector<Incidence> incidence_;
};

/// Number of edges of the free-boundary m x m grid, 2m(m-1).
constexpr std::size_t grid_edge_count(std::size_t m) noexcept { return 2 * m * (m - 1); }

IsingModel build_chain_model(std::size_t n, Boundary boundary, std::vector<double> couplings);
IsingModel build_grid_model(std::size_t m, std::vector<double> couplings);

/// `count` independent draws from U[lo, hi] on the stream seeded by `seed`.
std::vector<double> sample_uniform_values(std::size_t count, double lo, double hi, std::uint64_t seed);

/// 2m(m-1) independent draws from U[lo, hi], in canonical edge order.
std::vector<double> sample_couplings_uniform(std::size_t m, double lo, double hi, std::uint64_t seed);

/// Pairwise kernel: e^J if a == b, e^-J otherwise.
double kernel_value(double coupling, int a, int b) noexcept;

/// E(x) = -sum_e J_e ([x_k = x_l] - [x_k != x_l]).
double energy(const IsingModel& model, std::span<const std::uint8_t> x);

/// ln f(x) = -E(x), summed as +-J_e terms.
double log_weight(const IsingModel& model, std::span<const std::uint8_t> x);

/// Per-site log2 of Z given ln Z: ln Z / (N ln 2).
double per_site_log2(double ln_z, std::size_t site_count) noexcept;

} // namespace isingdual
