#include <sstream>

#include <gtest/gtest.h>

#include "lfmm/graph.hpp"
#include "lfmm/io.hpp"
#include "oracles.hpp"

namespace {

lfmm::WeightedGraph parse(const std::string& edges, const std::string& diag = "") {
    std::istringstream e(edges);
    if (diag.empty())
        return lfmm::load_graph(e, "edges");
    std::istringstream d(diag);
    return lfmm::load_graph(e, "edges", &d, "diag");
}

std::pair<std::string, std::string> dump(const lfmm::WeightedGraph& g) {
    std::ostringstream e, d;
    lfmm::save_graph(g, e, d);
    return {e.str(), d.str()};
}

TEST(LoadGraph, BuildsWorkedFixture) {
    auto g = parse("src\tdst\tweight\na\tb\t2\nb\tc\t1\nc\td\t3\n", "node\tdiagonal_mass\na\t4\n");
    ASSERT_EQ(g.node_count(), 4u);
    EXPECT_EQ(g.labels(), (std::vector<std::string>{"a", "b", "c", "d"}));
    EXPECT_EQ(g.weight(0, 1), 2.0);
    EXPECT_EQ(g.weight(1, 2), 1.0);
    EXPECT_EQ(g.weight(2, 3), 3.0);
    EXPECT_EQ(g.weight(0, 3), 0.0);
    EXPECT_EQ(g.diagonal(0), 4.0);
    // Same structure as the hand-built fixture, up to labels.
    auto ref = oracle::g4();
    EXPECT_EQ(g.edges().size(), ref.edges().size());
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            EXPECT_EQ(g.weight(i, j), ref.weight(i, j));
}

TEST(LoadGraph, IsolatedNodeFromDiagonalOnly) {
    auto g = parse("src\tdst\tweight\n", "node\tdiagonal_mass\na\t0\n");
    EXPECT_EQ(g.node_count(), 1u);
    EXPECT_EQ(lfmm::strength(g, 0), 0.0);
}

TEST(LoadGraph, MergesBothDirectionsBySummation) {
    auto g = parse("a\tb\t1\nb\ta\t1\n");
    EXPECT_EQ(g.pair_count(), 1u);
    EXPECT_EQ(g.weight(0, 1), 2.0);
    EXPECT_EQ(g.weight(1, 0), 2.0);
}

TEST(LoadGraph, SumsDuplicateRows) {
    auto g = parse("a\tb\t1.5\na\tb\t2.5\n");
    EXPECT_EQ(g.weight(0, 1), 4.0);
}

TEST(LoadGraph, RejectsNonPositiveWeightWithRowNumber) {
    try {
        parse("src\tdst\tweight\na\tb\t1\nb\tc\t0\n");
        FAIL() << "expected FormatError";
    } catch (const lfmm::FormatError& e) {
        EXPECT_EQ(e.row(), 3u);
    }
    EXPECT_THROW(parse("a\tb\t-1\n"), lfmm::FormatError);
}

TEST(LoadGraph, RejectsSelfPair) {
    try {
        parse("a\ta\t1\n");
        FAIL() << "expected FormatError";
    } catch (const lfmm::FormatError& e) {
        EXPECT_NE(std::string(e.what()).find("diagonal"), std::string::npos);
    }
}

TEST(LoadGraph, RejectsUnparseableRows) {
    EXPECT_THROW(parse("a\tb\tx\n"), lfmm::FormatError);
    EXPECT_THROW(parse("a\tb\n"), lfmm::FormatError);
    EXPECT_THROW(parse("a\tb\t1\tjunk\n"), lfmm::FormatError);
    EXPECT_THROW(parse("a\tb\tinf\n"), lfmm::FormatError);
}

TEST(LoadGraph, SkipsCommentsAndBlankLines) {
    auto g = parse("# comment\nsrc\tdst\tweight\n\na\tb\t1\n# more\n");
    EXPECT_EQ(g.node_count(), 2u);
}

TEST(Strength, MatchesFixtureSums) {
    auto g = oracle::g4();
    EXPECT_EQ(lfmm::strength(g, 0), 6.0);
    EXPECT_EQ(lfmm::strength(g, 2), 4.0);
    EXPECT_THROW(lfmm::strength(g, 4), std::out_of_range);
    lfmm::WeightedGraph single(1, {});
    EXPECT_EQ(lfmm::strength(single, 0), 0.0);
}

TEST(Strength, AdditivityOverRandomGraphs) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto g = oracle::random_graph(30, 0.2, seed);
        double total = 0.0, diag = 0.0, pairs = 0.0;
        for (std::size_t i = 0; i < g.node_count(); ++i) {
            total += lfmm::strength(g, i);
            diag += g.diagonal(i);
        }
        for (const auto& e : g.edges())
            pairs += e.weight;
        EXPECT_EQ(total, diag + 2.0 * pairs);
    }
}

TEST(SaveGraph, FixtureRows) {
    auto [e, d] = dump(oracle::g4());
    EXPECT_EQ(e, "src\tdst\tweight\n1\t2\t2\n2\t3\t1\n3\t4\t3\n");
    EXPECT_EQ(d, "node\tdiagonal_mass\n1\t4\n2\t0\n3\t0\n4\t0\n");
}

TEST(SaveGraph, SingleNodeHasEmptyEdgeFile) {
    auto [e, d] = dump(lfmm::WeightedGraph(1, {}, {}, {"x"}));
    EXPECT_EQ(e, "src\tdst\tweight\n");
    EXPECT_EQ(d, "node\tdiagonal_mass\nx\t0\n");
}

TEST(SaveGraph, ShortestRoundTripDecimals) {
    std::vector<lfmm::Edge> edges{{0, 1, 0.5}, {1, 2, 0.1}, {0, 2, 1.0 / 3.0}};
    lfmm::WeightedGraph g(3, edges);
    auto [e, d] = dump(g);
    EXPECT_NE(e.find("\t0.5\n"), std::string::npos);
    EXPECT_NE(e.find("\t0.1\n"), std::string::npos);
    EXPECT_EQ(parse(e, d).weight(0, 2), 1.0 / 3.0);
}

// load(save(g)) == g for arbitrary real weights, isolated nodes included.
TEST(SaveGraph, RoundTripProperty) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 25; ++trial) {
        const std::size_t n = 1 + trial % 17;
        std::vector<lfmm::Edge> edges;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (u(rng) < 0.3)
                    edges.push_back({i, j, u(rng) * 100.0 + 1e-9});
        std::vector<double> diag(n);
        std::vector<std::string> labels(n);
        for (std::size_t i = 0; i < n; ++i) {
            diag[i] = u(rng) < 0.5 ? u(rng) * 7.0 : 0.0;
            labels[i] = "n" + std::to_string(n - i);
        }
        lfmm::WeightedGraph g(n, edges, diag, labels);
        auto [e, d] = dump(g);
        EXPECT_EQ(parse(e, d), g) << "trial " << trial;
    }
}

TEST(WeightedGraph, SymmetricAccess) {
    auto g = oracle::random_graph(40, 0.3, 11);
    for (std::size_t i = 0; i < g.node_count(); ++i)
        for (std::size_t j = 0; j < g.node_count(); ++j)
            EXPECT_EQ(g.weight(i, j), g.weight(j, i));
}

TEST(WeightedGraph, RejectsInvalidConstruction) {
    std::vector<lfmm::Edge> self{{1, 1, 1.0}};
    EXPECT_THROW(lfmm::WeightedGraph(2, self), lfmm::InputError);
    std::vector<lfmm::Edge> zero{{0, 1, 0.0}};
    EXPECT_THROW(lfmm::WeightedGraph(2, zero), lfmm::InputError);
    EXPECT_THROW(lfmm::WeightedGraph(2, {}, {1.0, -1.0}), lfmm::InputError);
    EXPECT_THROW(lfmm::WeightedGraph(0, {}), lfmm::InputError);
}

TEST(CommunityAssignment, ValidatesLabels) {
    EXPECT_THROW(lfmm::CommunityAssignment({0, 2}, 2), lfmm::InputError);
    EXPECT_THROW(lfmm::CommunityAssignment({0, 0}, 2), lfmm::InputError);
    std::vector<std::size_t> raw{7, 3, 7};
    auto c = lfmm::CommunityAssignment::compact(raw);
    EXPECT_EQ(c.labels(), (std::vector<std::size_t>{0, 1, 0}));
    EXPECT_EQ(c.community_count(), 2u);
}

TEST(FormatNumber, ShortestRoundTrip) {
    EXPECT_EQ(lfmm::format_number(0.5), "0.5");
    EXPECT_EQ(lfmm::format_number(12.0), "12");
    EXPECT_EQ(lfmm::format_number(-0.0), "0");
    EXPECT_EQ(lfmm::format_number(std::nan("")), "NA");
    const double v = 2.0 / 3.0;
    EXPECT_EQ(std::stod(lfmm::format_number(v)), v);
}

} // namespace
