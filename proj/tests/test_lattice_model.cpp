#include "isingdual/exact.hpp"
#include "isingdual/lattice_model.hpp"
#include "isingdual/rng.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

using namespace isingdual;

namespace {

Configuration random_config(std::size_t n, Rng& rng)
{
    Configuration x(n);
    for (auto& b : x)
        b = static_cast<std::uint8_t>(rng.next() & 1U);
    return x;
}

} // namespace

TEST_CASE("chain construction")
{
    const auto ring = build_chain_model(3, Boundary::periodic_1d, {1, 1, 1});
    CHECK(ring.site_count() == 3);
    CHECK(ring.edge_count() == 3);
    CHECK(ring.edges()[2].a == 2);
    CHECK(ring.edges()[2].b == 0);

    const auto open = build_chain_model(5, Boundary::free_1d, {1, 1, 1, 1});
    CHECK(open.site_count() == 5);
    CHECK(open.edge_count() == 4);
    CHECK(open.topology() == Topology::chain);

    CHECK_THROWS_AS(build_chain_model(5, Boundary::periodic_1d, {1, 1, 1, 1}), std::invalid_argument);
    CHECK_THROWS_AS(build_chain_model(1, Boundary::free_1d, {}), std::invalid_argument);
    CHECK_THROWS_AS(build_chain_model(4, Boundary::free_2d, {1, 1, 1}), std::invalid_argument);
}

TEST_CASE("grid construction and canonical edge order")
{
    const auto g2 = build_grid_model(2, {1, 1, 1, 1});
    CHECK(g2.site_count() == 4);
    CHECK(g2.edge_count() == 4);

    const auto g5 = build_grid_model(5, std::vector<double>(40, 0.75));
    CHECK(g5.site_count() == 25);
    CHECK(g5.edge_count() == 40);
    CHECK(g5.boundary() == Boundary::free_2d);

    CHECK_THROWS_AS(build_grid_model(1, {}), std::invalid_argument);
    CHECK_THROWS_AS(build_grid_model(3, std::vector<double>(11, 1.0)), std::invalid_argument);

    for (std::size_t m = 2; m <= 6; ++m) {
        const auto g = build_grid_model(m, std::vector<double>(grid_edge_count(m), 1.0));
        const auto expected = oracle::grid_edges(m);
        REQUIRE(g.edge_count() == expected.size());
        std::set<std::pair<std::size_t, std::size_t>> seen;
        for (std::size_t e = 0; e < expected.size(); ++e) {
            const auto& edge = g.edges()[e];
            CHECK(edge.a == expected[e].first);
            CHECK(edge.b == expected[e].second);
            // nearest neighbours only
            const auto ra = edge.a / m, ca = edge.a % m, rb = edge.b / m, cb = edge.b % m;
            CHECK((ra == rb ? (cb - ca) : (rb - ra)) == 1);
            CHECK(seen.insert({edge.a, edge.b}).second);
        }
    }
}

TEST_CASE("incidence lists match the edge list")
{
    const auto g = build_grid_model(4, std::vector<double>(24, 1.0));
    std::size_t total = 0;
    for (std::size_t s = 0; s < g.site_count(); ++s) {
        for (const auto& inc : g.incident(s)) {
            const auto& e = g.edges()[inc.edge];
            CHECK(((e.a == s && e.b == inc.neighbor) || (e.b == s && e.a == inc.neighbor)));
            ++total;
        }
    }
    CHECK(total == 2 * g.edge_count());
    CHECK(g.incident(0).size() == 2);
    CHECK(g.incident(5).size() == 4);
}

TEST_CASE("sample_couplings_uniform")
{
    const auto j = sample_couplings_uniform(10, 1.0, 1.5, 7);
    CHECK(j.size() == 180);
    for (double v : j) {
        CHECK(v >= 1.0);
        CHECK(v <= 1.5);
    }
    CHECK(j == sample_couplings_uniform(10, 1.0, 1.5, 7));
    CHECK(j != sample_couplings_uniform(10, 1.0, 1.5, 8));
    CHECK_THROWS_AS(sample_couplings_uniform(3, 1.0, 1.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(sample_couplings_uniform(3, 2.0, 1.0, 1), std::invalid_argument);

    double mean = 0;
    const auto many = sample_uniform_values(100000, 0.0, 1.0, 3);
    for (double v : many)
        mean += v;
    mean /= static_cast<double>(many.size());
    CHECK(mean == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("kernel values")
{
    CHECK(kernel_value(0.0, 0, 0) == 1.0);
    CHECK(kernel_value(0.0, 0, 1) == 1.0);
    CHECK(kernel_value(0.75, 0, 0) == doctest::Approx(2.11700001661267466854).epsilon(1e-15));
    CHECK(kernel_value(0.75, 1, 1) == doctest::Approx(2.11700001661267466854).epsilon(1e-15));
    CHECK(kernel_value(0.75, 0, 1) == doctest::Approx(0.47236655274101470714).epsilon(1e-15));
    CHECK(kernel_value(0.75, 1, 0) == doctest::Approx(0.47236655274101470714).epsilon(1e-15));
}

TEST_CASE("energy and log weight examples")
{
    const auto g2 = build_grid_model(2, {1, 1, 1, 1});
    CHECK(energy(g2, Configuration{0, 0, 0, 0}) == -4.0);
    CHECK(log_weight(g2, Configuration{0, 0, 0, 0}) == 4.0);
    CHECK(energy(g2, Configuration{1, 0, 0, 0}) == 0.0);

    const auto ring = build_chain_model(3, Boundary::periodic_1d, {1, 1, 1});
    CHECK(energy(ring, Configuration{0, 1, 0}) == 1.0);

    const auto zero = build_grid_model(3, std::vector<double>(12, 0.0));
    CHECK(log_weight(zero, Configuration{1, 0, 1, 1, 0, 0, 1, 0, 1}) == 0.0);

    const auto big = build_grid_model(20, std::vector<double>(760, 1.5));
    const double lw = log_weight(big, Configuration(400, 0));
    CHECK(lw == 1140.0);
    CHECK(std::isfinite(lw));

    CHECK_THROWS_AS(log_weight(g2, Configuration{0, 0, 0}), std::invalid_argument);
    CHECK_THROWS_AS(energy(g2, Configuration{0, 0, 0, 0, 0}), std::invalid_argument);
}

TEST_CASE("log_weight is minus energy and invariant under a global spin flip")
{
    Rng rng(11);
    for (std::size_t m = 2; m <= 6; ++m) {
        const auto g = build_grid_model(m, sample_uniform_values(grid_edge_count(m), -2.0, 2.0, m));
        for (int t = 0; t < 200; ++t) {
            auto x = random_config(g.site_count(), rng);
            const double lw = log_weight(g, x);
            CHECK(lw == -energy(g, x));
            for (auto& b : x)
                b ^= 1U;
            CHECK(energy(g, x) == -lw);
        }
    }
    for (std::size_t n = 2; n <= 12; ++n) {
        for (Boundary b : {Boundary::periodic_1d, Boundary::free_1d}) {
            const std::size_t edges = b == Boundary::periodic_1d ? n : n - 1;
            const auto c = build_chain_model(n, b, sample_uniform_values(edges, -2.0, 2.0, 100 + n));
            auto x = random_config(n, rng);
            const double e = energy(c, x);
            CHECK(log_weight(c, x) == -e);
            for (auto& v : x)
                v ^= 1U;
            CHECK(energy(c, x) == e);
        }
    }
}

TEST_CASE("negating every coupling leaves Z unchanged on grids")
{
    for (std::size_t m = 2; m <= 4; ++m) {
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            const auto g = build_grid_model(m, sample_uniform_values(grid_edge_count(m), -1.5, 1.5, seed));
            const auto flipped = g.with_negated_couplings();
            for (std::size_t e = 0; e < g.edge_count(); ++e)
                CHECK(flipped.couplings()[e] == -g.couplings()[e]);
            const double a = brute_force_ln_Z(g).ln_Z;
            const double b = brute_force_ln_Z(flipped).ln_Z;
            CHECK(oracle::rel_diff(a, b) < 1e-10);
        }
    }
}

TEST_CASE("per-site log2")
{
    CHECK(per_site_log2(25 * std::numbers::ln2, 25) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(per_site_log2(4.79771374748815079517, 4) ==
          doctest::Approx(1.73040945777648989).epsilon(1e-14));
}
