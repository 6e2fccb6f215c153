#include "isingdual/exact.hpp"

#include "isingdual/log_sum.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace isingdual {

std::string_view to_string(ExactMethod method) noexcept
{
    switch (method) {
    case ExactMethod::brute_primal: return "brute-primal";
    case ExactMethod::brute_dual: return "brute-dual";
    case ExactMethod::transfer_1d: return "transfer-1d";
    case ExactMethod::transfer_2d: return "transfer-2d";
    case ExactMethod::closed_form: return "closed-form";
    }
    return "?";
}

namespace {

// FNV-1a over the bit patterns of the couplings.
std::uint64_t hash_couplings(std::span<const double> couplings) noexcept
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (double j : couplings) {
        std::uint64_t bits;
        std::memcpy(&bits, &j, sizeof bits);
        for (int k = 0; k < 8; ++k) {
            h ^= (bits >> (8 * k)) & 0xffU;
            h *= 0x100000001b3ULL;
        }
    }
    return h;
}

void require_chain(const IsingModel& model)
{
    if (model.topology() != Topology::chain)
        throw std::invalid_argument("method applies to chain models only");
}

void require_grid(const IsingModel& model)
{
    if (!model.is_grid())
        throw std::invalid_argument("method applies to grid models only");
}

} // namespace

ModelFingerprint fingerprint(const IsingModel& model) noexcept
{
    return {model.topology(), model.size(), model.boundary(), hash_couplings(model.couplings())};
}

ModelFingerprint fingerprint(const ModifiedDualModel& dual) noexcept
{
    return {Topology::grid, dual.side(), Boundary::free_2d, hash_couplings(dual.couplings())};
}

ExactResult brute_force_ln_Z(const IsingModel& model, std::size_t max_sites)
{
    const std::size_t n = model.site_count();
    if (n > max_sites || n >= 63)
        throw std::length_error("brute force needs N <= " + std::to_string(max_sites) +
                                ", model has " + std::to_string(n) + " sites");

    // Gray-code walk: consecutive configurations differ in one site, so the
    // log weight changes by the incident terms only. Resynchronise now and
    // then to keep rounding from accumulating.
    Configuration x(n, 0);
    double lw = log_weight(model, x);
    LogSumExp acc;
    acc.add(lw);
    const std::uint64_t total = std::uint64_t{1} << n;
    const auto j = model.couplings();
    for (std::uint64_t k = 1; k < total; ++k) {
        const auto site = static_cast<std::size_t>(std::countr_zero(k));
        double delta = 0.0;
        for (const auto& inc : model.incident(site))
            delta += x[site] == x[inc.neighbor] ? -2.0 * j[inc.edge] : 2.0 * j[inc.edge];
        x[site] ^= 1U;
        lw += delta;
        if ((k & 0x3ff) == 0)
            lw = log_weight(model, x);
        acc.add(lw);
    }
    return {acc.log_sum(), ExactMethod::brute_primal, fingerprint(model)};
}

namespace {

// Signed word weight with every factor divided by 4, i.e. ln cosh J and
// ln |sinh J| per edge. At J = 0 every term is exactly zero.
SignedLog reduced_word_weight(std::span<const DualFactor> factors, const DualConfiguration& edges)
{
    constexpr double ln4 = 2.0 * std::numbers::ln2;
    int sign = 1;
    double log_abs = 0.0;
    for (std::size_t e = 0; e < edges.size(); ++e) {
        const SignedLog v = factors[e].value(edges[e]);
        if (v.sign == 0)
            return {};
        sign *= v.sign;
        log_abs += v.log_abs - ln4;
    }
    return {sign, log_abs};
}

// ln of Z_mod / 4^|E| by exhaustive enumeration of the face words.
double reduced_dual_sum(const ModifiedDualModel& dual, std::size_t max_faces)
{
    const std::size_t d = dual.face_count();
    if (d > max_faces || d >= 63)
        throw std::length_error("dual brute force needs (m-1)^2 <= " + std::to_string(max_faces) +
                                ", model has " + std::to_string(d) + " faces");
    DualConfiguration edges(dual.edge_count(), 0);
    const auto factors = dual.factors();
    SignedLogSum acc;
    acc.add(reduced_word_weight(factors, edges));
    const std::uint64_t total = std::uint64_t{1} << d;
    const auto faces = dual.faces();
    for (std::uint64_t k = 1; k < total; ++k) {
        const auto f = static_cast<std::size_t>(std::countr_zero(k));
        for (std::size_t e : faces[f])
            edges[e] ^= 1U;
        acc.add(reduced_word_weight(factors, edges));
    }
    const SignedLog z = acc.value();
    if (z.sign <= 0)
        throw std::domain_error("dual sum is not positive");
    return z.log_abs;
}

} // namespace

ExactResult brute_force_dual_ln_Zmod(const ModifiedDualModel& dual, std::size_t max_faces)
{
    const double ln4 = 2.0 * std::numbers::ln2;
    const double reduced = reduced_dual_sum(dual, max_faces);
    return {reduced + static_cast<double>(dual.edge_count()) * ln4, ExactMethod::brute_dual,
            fingerprint(dual)};
}

ExactResult brute_force_dual_ln_Z(const IsingModel& grid, std::size_t max_faces)
{
    require_grid(grid);
    const ModifiedDualModel dual(grid);
    // recover_log_Z applied to the reduced sum: the 4^|E| cancels exactly.
    const double reduced = reduced_dual_sum(dual, max_faces);
    return {reduced + static_cast<double>(dual.site_count()) * std::numbers::ln2,
            ExactMethod::brute_dual, fingerprint(grid)};
}

namespace {

// Transfer products are rescaled by powers of two only, so the rescaling is
// exact and the removed scale is an integer exponent.
int binary_exponent(double x) noexcept
{
    int e = 0;
    std::frexp(x, &e);
    return e - 1; // x / 2^(e-1) lies in [1, 2)
}

double combine_log(double log_scale, long long exponent, double mantissa_sum) noexcept
{
    const int e = binary_exponent(mantissa_sum);
    const double mantissa = std::ldexp(mantissa_sum, -e);
    return log_scale + (static_cast<double>(exponent + e) * std::numbers::ln2 + std::log(mantissa));
}

} // namespace

ExactResult transfer_matrix_1d_ln_Z(const IsingModel& chain)
{
    require_chain(chain);
    using Mat = std::array<std::array<double, 2>, 2>;
    Mat prod{{{1.0, 0.0}, {0.0, 1.0}}};
    double log_scale = 0.0;
    long long exponent = 0;
    for (double j : chain.couplings()) {
        const double a = std::fabs(j);
        const double same = std::exp(j - a);
        const double diff = std::exp(-j - a);
        const Mat k{{{same, diff}, {diff, same}}};
        Mat next{};
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c)
                next[r][c] = prod[r][0] * k[0][c] + prod[r][1] * k[1][c];
        double mx = 0.0;
        for (const auto& row : next)
            for (double v : row)
                mx = std::max(mx, std::fabs(v));
        const int e = binary_exponent(mx);
        for (auto& row : next)
            for (double& v : row)
                v = std::ldexp(v, -e);
        prod = next;
        log_scale += a;
        exponent += e;
    }
    const double reduced = chain.boundary() == Boundary::periodic_1d
                               ? prod[0][0] + prod[1][1]
                               : prod[0][0] + prod[0][1] + prod[1][0] + prod[1][1];
    return {combine_log(log_scale, exponent, reduced), ExactMethod::transfer_1d, fingerprint(chain)};
}

ExactResult transfer_matrix_2d_ln_Z(const IsingModel& grid, std::size_t max_side)
{
    require_grid(grid);
    const std::size_t m = grid.size();
    if (m > max_side)
        throw std::length_error("2D transfer matrix needs m <= " + std::to_string(max_side) +
                                ", got " + std::to_string(m));
    const auto j = grid.couplings();
    const std::size_t states = std::size_t{1} << m;
    const std::size_t vertical0 = m * (m - 1);

    std::vector<double> v(states);
    double log_scale = 0.0;
    long long exponent = 0;

    // Multiplies v by the horizontal weights of row r, divided by their
    // maximum e^{sum |J|}.
    auto absorb_row = [&](std::size_t r, bool first) {
        const double* jh = j.data() + r * (m - 1);
        double hmax = 0.0;
        for (std::size_t c = 0; c + 1 < m; ++c)
            hmax += std::fabs(jh[c]);
        for (std::size_t s = 0; s < states; ++s) {
            double h = 0.0;
            for (std::size_t c = 0; c + 1 < m; ++c)
                h += (((s >> c) ^ (s >> (c + 1))) & 1U) ? -jh[c] : jh[c];
            const double w = std::exp(h - hmax);
            v[s] = first ? w : v[s] * w;
        }
        log_scale += hmax;
    };

    absorb_row(0, true);
    for (std::size_t r = 1; r < m; ++r) {
        // Swap the row-(r-1) bit of column c for the row-r bit, one column at a time.
        for (std::size_t c = 0; c < m; ++c) {
            const double coupling = j[vertical0 + (r - 1) * m + c];
            const double a = std::fabs(coupling);
            const double same = std::exp(coupling - a);
            const double diff = std::exp(-coupling - a);
            const std::size_t bit = std::size_t{1} << c;
            for (std::size_t s = 0; s < states; ++s) {
                if (s & bit)
                    continue;
                const double v0 = v[s];
                const double v1 = v[s | bit];
                v[s] = same * v0 + diff * v1;
                v[s | bit] = diff * v0 + same * v1;
            }
            log_scale += a;
        }
        absorb_row(r, false);
        const int e = binary_exponent(*std::max_element(v.begin(), v.end()));
        for (double& x : v)
            x = std::ldexp(x, -e);
        exponent += e;
    }
    double total = 0.0;
    for (double x : v)
        total += x;
    return {combine_log(log_scale, exponent, total), ExactMethod::transfer_2d, fingerprint(grid)};
}

ExactResult closed_form_ln_Z(const IsingModel& chain)
{
    require_chain(chain);
    return {closed_form_ln_Z_1d(chain.couplings(), chain.boundary()), ExactMethod::closed_form,
            fingerprint(chain)};
}

} // namespace isingdual
