#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "lfmm/diversity.hpp"
#include "oracles.hpp"

namespace {

std::vector<double> random_simplex(std::size_t r, std::mt19937_64& rng) {
    std::exponential_distribution<double> e(1.0);
    std::vector<double> v(r);
    double s = 0.0;
    for (auto& x : v)
        s += (x = e(rng));
    for (auto& x : v)
        x /= s;
    return v;
}

struct World {
    lfmm::WeightedGraph graph;
    lfmm::SpatialAttributes spatial;
    lfmm::GravityModel truth;
};

// Sets scattered in the unit square with flows exactly kappa p_x p_y / d^beta,
// including the self flows implied by the nearest-neighbour self distance.
World noiseless_world(std::size_t n, double beta, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    World w;
    w.truth = {3.0, beta};
    for (std::size_t i = 0; i < n; ++i) {
        w.spatial.x.push_back(u(rng));
        w.spatial.y.push_back(u(rng));
        w.spatial.population.push_back(10.0 + 90.0 * u(rng));
    }
    auto t = lfmm::expected_flows(w.truth, w.spatial, 0.5);
    std::vector<lfmm::Edge> edges;
    std::vector<double> diag(n);
    for (std::size_t a = 0; a < n; ++a) {
        diag[a] = 2.0 * t[a * n + a];
        for (std::size_t b = a + 1; b < n; ++b)
            edges.push_back({a, b, t[a * n + b]});
    }
    w.graph = lfmm::WeightedGraph(n, edges, diag);
    return w;
}

TEST(Gsi, Endpoints) {
    std::vector<double> pure{1, 0, 0};
    EXPECT_EQ(lfmm::gsi(pure), 0.0);
    for (std::size_t r = 1; r <= 6; ++r) {
        std::vector<double> even(r, 1.0 / static_cast<double>(r));
        EXPECT_NEAR(lfmm::gsi(even), 1.0 - 1.0 / static_cast<double>(r), 1e-15);
    }
}

TEST(Gsi, TwoThirdsOneThird) {
    std::vector<double> row{2.0 / 3.0, 1.0 / 3.0};
    EXPECT_NEAR(lfmm::gsi(row), 4.0 / 9.0, 1e-15);
}

TEST(Gsi, RescalesUnnormalizedRows) {
    std::vector<double> agg{12.0 / 7.0, 2.0 / 7.0};
    std::vector<double> unit{6.0 / 7.0, 1.0 / 7.0};
    EXPECT_NEAR(lfmm::gsi(agg), lfmm::gsi(unit), 1e-15);
    EXPECT_NEAR(lfmm::gsi(unit), 12.0 / 49.0, 1e-15);
}

TEST(Gsi, BoundsOnRandomSimplexPoints) {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 10000; ++trial) {
        const std::size_t r = 1 + static_cast<std::size_t>(trial % 10);
        auto v = random_simplex(r, rng);
        const double g = lfmm::gsi(v);
        EXPECT_GE(g, -1e-12);
        EXPECT_LE(g, 1.0 - 1.0 / static_cast<double>(r) + 1e-12);
    }
}

TEST(Gsi, TransfersTowardEvennessDoNotDecrease) {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 2000; ++trial) {
        auto v = random_simplex(5, rng);
        auto hi = static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
        auto lo = static_cast<std::size_t>(std::min_element(v.begin(), v.end()) - v.begin());
        if (hi == lo)
            continue;
        const double before = lfmm::gsi(v);
        const double moved = u(rng) * (v[hi] - v[lo]) / 2.0;
        v[hi] -= moved;
        v[lo] += moved;
        EXPECT_GE(lfmm::gsi(v), before - 1e-12);
    }
}

TEST(Gsi, ZeroRowIsMissingAndNegativeIsRejected) {
    std::vector<double> zero{0, 0};
    EXPECT_TRUE(lfmm::is_missing(lfmm::gsi(zero)));
    std::vector<double> bad{0.5, -0.1};
    EXPECT_THROW(lfmm::gsi(bad), lfmm::InputError);
}

TEST(Gsi, InvariantToWeightScale) {
    auto g = oracle::random_graph(30, 0.2, 1);
    std::vector<lfmm::Edge> scaled;
    for (auto e : g.edges())
        scaled.push_back({e.u, e.v, e.weight * 7.5});
    std::vector<double> diag(30);
    for (std::size_t i = 0; i < 30; ++i)
        diag[i] = g.diagonal(i) * 7.5;
    lfmm::WeightedGraph h(30, scaled, diag);
    lfmm::CommunityAssignment c(oracle::random_labels(30, 3, 2), 3);
    auto a = lfmm::gsi_rows(lfmm::normalize_node(lfmm::raw_membership(g, c)));
    auto b = lfmm::gsi_rows(lfmm::normalize_node(lfmm::raw_membership(h, c)));
    for (std::size_t i = 0; i < 30; ++i) {
        if (lfmm::is_missing(a[i])) {
            EXPECT_TRUE(lfmm::is_missing(b[i]));
            continue;
        }
        EXPECT_NEAR(a[i], b[i], 1e-12);
    }
}

TEST(Gravity, RecoversExponentAndScaleFromNoiselessFlows) {
    for (auto method : {lfmm::GravityFit::poisson, lfmm::GravityFit::log_ols})
        for (double beta : {1.0, 2.0, 2.7}) {
            auto w = noiseless_world(40, beta, 11);
            auto m = lfmm::fit_gravity(w.graph, w.spatial, std::nullopt, 0.5, method);
            EXPECT_NEAR(m.beta, beta, 0.05);
            EXPECT_NEAR(m.beta, beta, 1e-9);
            EXPECT_NEAR(m.kappa, w.truth.kappa, 1e-9 * w.truth.kappa);
        }
}

TEST(Gravity, PoissonFitOnSampledFlows) {
    auto w = noiseless_world(40, 2.0, 13);
    auto flows = lfmm::expected_flows({200.0, 2.0}, w.spatial, 0.5);
    lfmm::Rng rng(1);
    auto g = lfmm::sample_flow_network(flows, 40, rng);
    EXPECT_NEAR(lfmm::fit_gravity(g, w.spatial).beta, 2.0, 0.05);
}

TEST(Gravity, PopulationScaleLeavesExponentAndScoresUnchanged) {
    auto w = noiseless_world(30, 2.0, 14);
    auto flows = lfmm::expected_flows({50.0, 2.0}, w.spatial, 0.5);
    lfmm::Rng rng(2);
    auto g = lfmm::sample_flow_network(flows, 30, rng);
    std::vector<std::size_t> labels(30);
    for (std::size_t i = 0; i < 30; ++i)
        labels[i] = w.spatial.y[i] < 0.5 ? 0 : 1;
    auto c = lfmm::CommunityAssignment::compact(labels);
    lfmm::GravityConfig cfg;
    cfg.samples = 30;
    auto base = lfmm::null_diversity(g, c, w.spatial, cfg);
    for (auto method : {lfmm::GravityFit::poisson, lfmm::GravityFit::log_ols}) {
        auto scaled = w.spatial;
        for (auto& p : scaled.population)
            p *= 10.0;
        EXPECT_NEAR(lfmm::fit_gravity(g, scaled, std::nullopt, 0.5, method).beta,
                    lfmm::fit_gravity(g, w.spatial, std::nullopt, 0.5, method).beta, 1e-9);
    }
    // A power-of-two factor keeps every expected flow bit-identical, so the
    // Monte Carlo draws and scores coincide exactly.
    auto quad = w.spatial;
    for (auto& p : quad.population)
        p *= 4.0;
    auto scaled = lfmm::null_diversity(g, c, quad, cfg);
    EXPECT_NEAR(scaled.model.kappa * 16.0, base.model.kappa, 1e-12 * base.model.kappa);
    for (std::size_t x = 0; x < 30; ++x)
        EXPECT_NEAR(scaled.rows[x].z, base.rows[x].z, 1e-9);
}

TEST(Gravity, FixedExponentStillMatchesTotalMass) {
    auto w = noiseless_world(20, 2.0, 12);
    auto m = lfmm::fit_gravity(w.graph, w.spatial, 1.0);
    EXPECT_EQ(m.beta, 1.0);
    auto t = lfmm::expected_flows(m, w.spatial, 0.5);
    double expected = 0.0, observed = 0.0;
    for (std::size_t a = 0; a < 20; ++a) {
        observed += lfmm::strength(w.graph, a) / 2.0;
        for (std::size_t b = a; b < 20; ++b)
            expected += t[a * 20 + b];
    }
    EXPECT_NEAR(expected, observed, 1e-9 * observed);
}

TEST(Gravity, SelfDistanceRule) {
    lfmm::SpatialAttributes s{{0, 3, 0}, {0, 0, 4}, {1, 1, 1}, {}};
    auto d = lfmm::distance_matrix(s, 0.5);
    EXPECT_DOUBLE_EQ(d[0], 1.5);
    EXPECT_DOUBLE_EQ(d[4], 1.5);
    EXPECT_DOUBLE_EQ(d[8], 2.0);
    EXPECT_DOUBLE_EQ(d[1 * 3 + 2], 5.0);
    s.self_distance = {0.25, lfmm::missing, lfmm::missing};
    EXPECT_DOUBLE_EQ(lfmm::distance_matrix(s, 0.5)[0], 0.25);
}

TEST(Gravity, DegenerateInputs) {
    lfmm::WeightedGraph two(2, std::vector<lfmm::Edge>{{0, 1, 5.0}});
    lfmm::SpatialAttributes s2{{0, 1}, {0, 0}, {1, 1}, {}};
    EXPECT_THROW(lfmm::fit_gravity(two, s2), lfmm::DomainError);
    EXPECT_THROW(lfmm::fit_gravity(two, s2, std::nullopt, 0.5, lfmm::GravityFit::log_ols), lfmm::DomainError);
    EXPECT_NO_THROW(lfmm::fit_gravity(two, s2, 2.0));

    lfmm::WeightedGraph three(3, std::vector<lfmm::Edge>{{0, 1, 5.0}, {1, 2, 1.0}});
    lfmm::SpatialAttributes same{{0, 0, 1}, {0, 0, 1}, {1, 1, 1}, {}};
    EXPECT_THROW(lfmm::fit_gravity(three, same, 2.0), lfmm::DomainError);

    lfmm::SpatialAttributes bad_pop{{0, 1, 2}, {0, 0, 1}, {1, 0, 1}, {}};
    EXPECT_THROW(lfmm::fit_gravity(three, bad_pop, 2.0), lfmm::InputError);
}

TEST(Gravity, PoissonSamplesHaveTheExpectedMass) {
    auto w = noiseless_world(15, 2.0, 3);
    auto flows = lfmm::expected_flows(w.truth, w.spatial, 0.5);
    double expected = 0.0;
    for (std::size_t a = 0; a < 15; ++a)
        for (std::size_t b = a; b < 15; ++b)
            expected += flows[a * 15 + b];
    lfmm::Rng rng(8);
    double total = 0.0;
    const int k = 400;
    for (int s = 0; s < k; ++s) {
        auto g = lfmm::sample_flow_network(flows, 15, rng);
        for (std::size_t i = 0; i < 15; ++i)
            total += lfmm::strength(g, i) / 2.0;
    }
    // Total mass is Poisson(expected); the mean of k draws has sd sqrt(expected / k).
    EXPECT_NEAR(total / k, expected, 4.0 * std::sqrt(expected / k));
}

TEST(Gravity, ParsesFitNames) {
    EXPECT_EQ(lfmm::parse_gravity_fit("poisson"), lfmm::GravityFit::poisson);
    EXPECT_EQ(lfmm::parse_gravity_fit("ols"), lfmm::GravityFit::log_ols);
    EXPECT_THROW(lfmm::parse_gravity_fit("mle"), lfmm::InputError);
}

TEST(Spatial, LoadsByLabel) {
    lfmm::WeightedGraph g(2, std::vector<lfmm::Edge>{{0, 1, 1.0}}, {}, {"a", "b"});
    std::istringstream in("set_id\tx\ty\tpopulation\nb\t1\t2\t30\na\t0\t0\t10\n");
    auto s = lfmm::load_spatial(in, "s", g);
    EXPECT_EQ(s.x, (std::vector<double>{0, 1}));
    EXPECT_EQ(s.population, (std::vector<double>{10, 30}));
    std::istringstream bad("a\t0\t0\t10\nb\t1\t2\t0\n");
    EXPECT_THROW(lfmm::load_spatial(bad, "s", g), lfmm::FormatError);
    std::istringstream missing_row("a\t0\t0\t10\n");
    EXPECT_THROW(lfmm::load_spatial(missing_row, "s", g), lfmm::InputError);
}

class NullModel : public ::testing::Test {
protected:
    void SetUp() override {
        world = noiseless_world(12, 2.0, 21);
        // Round the flows so the observed network looks like count data.
        std::vector<lfmm::Edge> edges;
        for (auto e : world.graph.edges())
            if (std::round(e.weight) > 0)
                edges.push_back({e.u, e.v, std::round(e.weight)});
        std::vector<double> diag(12);
        for (std::size_t i = 0; i < 12; ++i)
            diag[i] = 2.0 * std::round(world.graph.diagonal(i) / 2.0);
        world.graph = lfmm::WeightedGraph(12, edges, diag);
        std::vector<std::size_t> labels(12);
        for (std::size_t i = 0; i < 12; ++i)
            labels[i] = world.spatial.x[i] < 0.5 ? 0 : 1;
        part = lfmm::CommunityAssignment::compact(labels);
        cfg.samples = 60;
        cfg.seed = 5;
    }

    World world;
    lfmm::CommunityAssignment part;
    lfmm::GravityConfig cfg;
};

TEST_F(NullModel, DeterministicAndIndependentOfJobs) {
    auto a = lfmm::null_diversity(world.graph, part, world.spatial, cfg);
    cfg.jobs = 4;
    auto b = lfmm::null_diversity(world.graph, part, world.spatial, cfg);
    ASSERT_EQ(a.rows.size(), b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        EXPECT_EQ(a.rows[i].mu, b.rows[i].mu);
        EXPECT_EQ(a.rows[i].sigma, b.rows[i].sigma);
        EXPECT_EQ(a.rows[i].z, b.rows[i].z);
    }
    cfg.seed = 6;
    auto c = lfmm::null_diversity(world.graph, part, world.spatial, cfg);
    bool differs = false;
    for (std::size_t i = 0; i < a.rows.size(); ++i)
        differs |= a.rows[i].mu != c.rows[i].mu;
    EXPECT_TRUE(differs);
}

TEST_F(NullModel, SampleMeanLiesWithinSampleRange) {
    auto res = lfmm::null_diversity(world.graph, part, world.spatial, cfg);
    for (const auto& r : res.rows) {
        ASSERT_GE(r.valid_samples, 2u);
        EXPECT_GE(r.mu, r.sample_min - 1e-15);
        EXPECT_LE(r.mu, r.sample_max + 1e-15);
        EXPECT_GE(r.sigma, 0.0);
        EXPECT_NEAR(r.z, (r.gsi - r.mu) / std::max(r.sigma, cfg.sigma_floor), 1e-12);
    }
}

TEST_F(NullModel, ConstantNullGivesZeroScore) {
    lfmm::CommunityAssignment one(std::vector<std::size_t>(12, 0), 1);
    auto res = lfmm::null_diversity(world.graph, one, world.spatial, cfg);
    for (const auto& r : res.rows) {
        EXPECT_EQ(r.gsi, 0.0);
        EXPECT_EQ(r.sigma, 0.0);
        EXPECT_EQ(r.z, 0.0);
    }
}

TEST_F(NullModel, RedetectionRuns) {
    cfg.redetect = true;
    cfg.samples = 10;
    auto a = lfmm::null_diversity(world.graph, part, world.spatial, cfg);
    auto b = lfmm::null_diversity(world.graph, part, world.spatial, cfg);
    for (std::size_t i = 0; i < a.rows.size(); ++i)
        EXPECT_EQ(a.rows[i].mu, b.rows[i].mu);
}

TEST_F(NullModel, RejectsBadConfig) {
    cfg.samples = 1;
    EXPECT_THROW(lfmm::null_diversity(world.graph, part, world.spatial, cfg), lfmm::InputError);
}

TEST(WriteDiversity, SortedRowsAndMissingValues) {
    std::vector<std::string> labels{"b", "a"};
    std::vector<lfmm::DiversityRow> rows(2);
    rows[0].gsi = 0.5;
    rows[1].gsi = lfmm::missing;
    std::ostringstream gsi_only;
    lfmm::write_diversity(gsi_only, labels, rows, false);
    EXPECT_EQ(gsi_only.str(), "set_id,gsi\na,NA\nb,0.5\n");
    rows[0].mu = 0.25;
    rows[0].sigma = 0.125;
    rows[0].z = 2;
    std::ostringstream full;
    lfmm::write_diversity(full, labels, rows, true);
    EXPECT_EQ(full.str(), "set_id,gsi,mu,sigma,z\na,NA,NA,NA,NA\nb,0.5,0.25,0.125,2\n");
}

} // namespace
