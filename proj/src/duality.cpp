#include "isingdual/duality.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace isingdual {

namespace {

// ln(2 cosh J) and ln|2 sinh J|, accurate for any magnitude of J.
double log_two_cosh(double j) noexcept
{
    const double a = std::fabs(j);
    return a + std::log1p(std::exp(-2.0 * a));
}

double log_two_abs_sinh(double j) noexcept
{
    const double a = std::fabs(j);
    return a + std::log1p(-std::exp(-2.0 * a));
}

int sign_of(double v) noexcept { return (v > 0.0) - (v < 0.0); }

// Kernel transform with every entry divided by e^{|J|}.
std::array<std::array<double, 2>, 2> scaled_dft(double j, double scale_log) noexcept
{
    std::array<std::array<double, 2>, 2> nu{};
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            double acc = 0.0;
            for (int x1 = 0; x1 < 2; ++x1)
                for (int x2 = 0; x2 < 2; ++x2) {
                    const double k = std::exp((x1 == x2 ? j : -j) - scale_log);
                    acc += ((x1 * a + x2 * b) % 2 == 0) ? k : -k;
                }
            nu[a][b] = acc;
        }
    return nu;
}

} // namespace

std::array<std::array<double, 2>, 2> kernel_dft(double coupling) noexcept
{
    return scaled_dft(coupling, 0.0);
}

DualFactor dft_pair_kernel(double coupling)
{
    const auto nu = scaled_dft(coupling, std::fabs(coupling));
    constexpr double tol = 1e-12;
    if (std::fabs(nu[0][1]) > tol || std::fabs(nu[1][0]) > tol)
        throw std::logic_error("kernel transform is not diagonal for J = " +
                               std::to_string(coupling));
    DualFactor f;
    f.log_even = std::numbers::ln2 + log_two_cosh(coupling);
    f.odd_sign = sign_of(coupling);
    f.log_odd = f.odd_sign == 0 ? neg_inf : std::numbers::ln2 + log_two_abs_sinh(coupling);
    return f;
}

std::vector<Face> face_cycle_basis(std::size_t m)
{
    if (m < 2)
        throw std::invalid_argument("face basis needs m >= 2, got " + std::to_string(m));
    const std::size_t vertical0 = m * (m - 1);
    auto horizontal = [m](std::size_t r, std::size_t c) { return r * (m - 1) + c; };
    auto vertical = [m, vertical0](std::size_t r, std::size_t c) { return vertical0 + r * m + c; };
    std::vector<Face> faces;
    faces.reserve((m - 1) * (m - 1));
    for (std::size_t r = 0; r + 1 < m; ++r)
        for (std::size_t c = 0; c + 1 < m; ++c)
            faces.push_back({horizontal(r, c), horizontal(r + 1, c), vertical(r, c), vertical(r, c + 1)});
    return faces;
}

ModifiedDualModel::ModifiedDualModel(const IsingModel& grid) : m_(grid.size())
{
    if (!grid.is_grid())
        throw std::invalid_argument("modified dual requires a free-boundary grid model");
    const auto j = grid.couplings();
    couplings_.assign(j.begin(), j.end());
    factors_.reserve(j.size());
    log_ratio_.reserve(j.size());
    for (double coupling : j) {
        factors_.push_back(dft_pair_kernel(coupling));
        const auto& f = factors_.back();
        log_empty_ += f.log_even;
        log_ratio_.push_back(f.log_odd - f.log_even);
    }
    edges_.assign(grid.edges().begin(), grid.edges().end());
    faces_ = face_cycle_basis(m_);

    edge_faces_.assign(edges_.size(), {npos, npos});
    for (std::size_t f = 0; f < faces_.size(); ++f)
        for (std::size_t e : faces_[f]) {
            auto& slot = edge_faces_[e];
            (slot[0] == npos ? slot[0] : slot[1]) = f;
        }

    const std::size_t n = site_count();
    site_offsets_.assign(n + 1, 0);
    for (std::size_t s = 0; s < n; ++s)
        site_offsets_[s + 1] = site_offsets_[s] + grid.incident(s).size();
    site_edge_ids_.reserve(site_offsets_.back());
    for (std::size_t s = 0; s < n; ++s)
        for (const auto& inc : grid.incident(s))
            site_edge_ids_.push_back(inc.edge);
}

bool ModifiedDualModel::all_positive() const noexcept
{
    for (const auto& f : factors_)
        if (f.odd_sign <= 0)
            return false;
    return true;
}

ModifiedDualModel build_modified_dual(const IsingModel& grid)
{
    return ModifiedDualModel(grid);
}

DualConfiguration expand_faces(const ModifiedDualModel& dual, std::span<const std::uint8_t> faces)
{
    if (faces.size() != dual.face_count())
        throw std::invalid_argument("face assignment has " + std::to_string(faces.size()) +
                                    " bits, dual model has " + std::to_string(dual.face_count()) +
                                    " faces");
    DualConfiguration edges(dual.edge_count(), 0);
    for (std::size_t e = 0; e < edges.size(); ++e) {
        const auto [f0, f1] = dual.faces_of_edge(e);
        std::uint8_t bit = f0 == ModifiedDualModel::npos ? 0 : faces[f0];
        if (f1 != ModifiedDualModel::npos)
            bit ^= faces[f1];
        edges[e] = bit;
    }
    return edges;
}

bool satisfies_parity(const ModifiedDualModel& dual, std::span<const std::uint8_t> edge_bits)
{
    if (edge_bits.size() != dual.edge_count())
        return false;
    for (std::size_t s = 0; s < dual.site_count(); ++s) {
        std::uint8_t parity = 0;
        for (std::size_t e : dual.site_edges(s))
            parity ^= edge_bits[e];
        if (parity != 0)
            return false;
    }
    return true;
}

SignedLog dual_signed_log_weight(const ModifiedDualModel& dual,
                                 std::span<const std::uint8_t> edge_bits, bool check_parity)
{
    if (edge_bits.size() != dual.edge_count())
        throw std::invalid_argument("dual configuration length does not match edge count");
    if (check_parity && !satisfies_parity(dual, edge_bits))
        throw std::domain_error("dual configuration violates a site parity constraint");
    const auto factors = dual.factors();
    SignedLog w{1, 0.0};
    for (std::size_t e = 0; e < edge_bits.size(); ++e) {
        const SignedLog v = factors[e].value(edge_bits[e]);
        if (v.sign == 0)
            return {};
        w.sign *= v.sign;
        w.log_abs += v.log_abs;
    }
    return w;
}

double dual_log_weight(const ModifiedDualModel& dual, std::span<const std::uint8_t> edge_bits,
                       bool check_parity)
{
    const SignedLog w = dual_signed_log_weight(dual, edge_bits, check_parity);
    if (w.sign < 0)
        throw std::domain_error("dual configuration has a negative weight");
    return w.log_abs;
}

double recover_log_Z(std::size_t sites, std::size_t edges, double log_z_mod) noexcept
{
    return log_z_mod + static_cast<double>(sites) * std::numbers::ln2 -
           2.0 * static_cast<double>(edges) * std::numbers::ln2;
}

double recover_log_Z(const ModifiedDualModel& dual, double log_z_mod) noexcept
{
    return recover_log_Z(dual.site_count(), dual.edge_count(), log_z_mod);
}

double closed_form_ln_Z_1d(std::span<const double> couplings, Boundary boundary)
{
    if (boundary == Boundary::free_1d) {
        double acc = std::numbers::ln2;
        for (double j : couplings)
            acc += log_two_cosh(j);
        return acc;
    }
    if (boundary != Boundary::periodic_1d)
        throw std::invalid_argument("closed form applies to chains only");
    // 2^N (prod cosh + prod sinh) = prod (2 cosh) + prod (2 sinh); |sinh| < cosh
    // keeps the sum positive whatever the signs.
    double log_c = 0.0;
    double log_s = 0.0;
    int sign = 1;
    for (double j : couplings) {
        log_c += log_two_cosh(j);
        log_s += log_two_abs_sinh(j);
        sign *= sign_of(j);
    }
    if (sign == 0)
        return log_c;
    return log_c + std::log1p(sign * std::exp(log_s - log_c));
}

} // namespace isingdual
