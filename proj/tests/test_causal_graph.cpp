#include <doctest.h>

#include "entrocausal/causal_graph.hpp"
#include "entrocausal/rational.hpp"

#include "properties.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>

using namespace entrocausal;
using Kind = StructureError::Kind;
using namespace testing_support;

namespace {

Kind error_kind(const std::function<void()>& f)
{
    try {
        f();
    } catch (const StructureError& e) {
        return e.kind();
    }
    FAIL("expected StructureError");
    return Kind::ParseError;
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("validate accepts catalog structures and rejects malformed ones")
{
    for (const auto& name : catalog_names())
        CHECK_NOTHROW(validate(catalog(name)));
    CHECK_NOTHROW(StructureBuilder().build());
    CHECK(error_kind([] {
              StructureBuilder()
                  .node("X", NodeKind::Observed)
                  .node("Y", NodeKind::Observed)
                  .edge("X", "Y")
                  .edge("Y", "X")
                  .build();
          })
          == Kind::CycleDetected);
    CHECK(error_kind([] { StructureBuilder().node("X", NodeKind::Observed).edge("X", "Q").build(); })
          == Kind::DanglingEdge);
    CHECK(error_kind([] {
              StructureBuilder().node("X", NodeKind::Observed).node("X", NodeKind::Latent).build();
          })
          == Kind::DuplicateName);
    CHECK(error_kind([] { StructureBuilder().node("9a", NodeKind::Observed).build(); })
          == Kind::InvalidName);
    CHECK(error_kind([] { StructureBuilder().node("L", NodeKind::Latent).build(); })
          == Kind::ChildlessLatent);
}

TEST_CASE("cycle errors name a node on the cycle")
{
    try {
        StructureBuilder()
            .node("S", NodeKind::Observed)
            .node("P", NodeKind::Observed)
            .node("Q", NodeKind::Observed)
            .node("R", NodeKind::Observed)
            .edge("S", "P")
            .edge("P", "Q")
            .edge("Q", "R")
            .edge("R", "P")
            .build();
        FAIL("expected cycle");
    } catch (const StructureError& e) {
        CHECK(e.kind() == Kind::CycleDetected);
        CHECK((e.element() == "P" || e.element() == "Q" || e.element() == "R"));
    }
}

TEST_CASE("ancestors")
{
    auto inst = catalog("instrumental");
    CHECK(ancestors(inst, "Y") == std::set<std::string>{"A", "X", "Z"});
    CHECK(ancestors(inst, "X").empty());
    CHECK(ancestors(inst, "A").empty());
    // A only feeds X, so it is not an ancestor of Y.
    CHECK(ancestors(catalog("bilocal"), "Y") == std::set<std::string>{"B", "L1", "L2"});
    CHECK_THROWS_AS(ancestors(inst, "Q"), StructureError);
}

TEST_CASE("subsystem descendants follow the target")
{
    auto inst = catalog("instrumental");
    CHECK(subsystem_descendants(inst, {"A", "Z"}) == std::set<std::string>{"Y", "Z"});
    CHECK(subsystem_descendants(inst, {"A", "Y"}) == std::set<std::string>{"Y"});
    auto bl = catalog("bilocal_postselected");
    CHECK(subsystem_descendants(bl, {"L1", "X"}) == std::set<std::string>{"X0", "X1"});
}

TEST_CASE("d-separation examples")
{
    auto bl = catalog("bilocal");
    CHECK(d_separated(bl, {"X"}, {"Z"}, {}));
    CHECK_FALSE(d_separated(bl, {"X"}, {"Z"}, {"Y"}));
    auto inst = catalog("instrumental");
    CHECK_FALSE(d_separated(inst, {"X"}, {"Y"}, {}));
    CHECK_FALSE(d_separated(inst, {"X"}, {"Y"}, {"Z"}));  // Z is a collider of X and A
    CHECK(d_separated(inst, {"X"}, {"A"}, {}));
    auto two = StructureBuilder().node("P", NodeKind::Observed).node("Q", NodeKind::Observed).build();
    CHECK(d_separated(two, {"P"}, {"Q"}, {}));
    CHECK(error_kind([&] { d_separated(inst, {"X"}, {"X"}, {}); }) == Kind::OverlappingSets);
    CHECK(error_kind([&] { d_separated(inst, {"X"}, {"W"}, {}); }) == Kind::UnknownNode);
}

TEST_CASE("d-separation agrees with path enumeration on random DAGs")
{
    auto report = testing_support::dseparation_suite(200);
    CHECK(report.cases == 200);
    CHECK_MESSAGE(report.ok(), report.first_failure);
}

TEST_CASE("d-separation implies exact conditional independence")
{
    std::mt19937 rng(77);
    int independent_cases = 0;
    for (int trial = 0; trial < 120; ++trial) {
        auto d = random_dag(rng);
        auto s = d.structure();
        std::set<int> x, y, z;
        while (!random_triple(rng, d.n, x, y, z)) {
        }
        if (!d_separated(s, node_names(x), node_names(y), node_names(z)))
            continue;
        ++independent_cases;

        // Random binary CPTs with rational entries, joint by enumeration.
        std::vector<std::vector<int>> parents(d.n);
        for (auto [u, v] : d.edges)
            parents[v].push_back(u);
        std::uniform_int_distribution<int> num(1, 6);
        std::vector<std::map<int, Rational>> cpt(d.n);  // parent config -> P(node = 1)
        for (int v = 0; v < d.n; ++v)
            for (int cfg = 0; cfg < (1 << parents[v].size()); ++cfg)
                cpt[v][cfg] = Rational(num(rng), 7);
        auto order = s.topological_order();
        std::vector<Rational> joint(1 << d.n);
        for (int w = 0; w < (1 << d.n); ++w) {
            Rational p = 1;
            for (int v = 0; v < d.n; ++v) {
                int cfg = 0;
                for (std::size_t k = 0; k < parents[v].size(); ++k)
                    cfg |= (w >> parents[v][k] & 1) << k;
                Rational one = cpt[v][cfg];
                p *= (w >> v & 1) ? one : Rational(1 - one);
            }
            joint[w] = p;
        }
        auto mask = [](const std::set<int>& s) {
            int m = 0;
            for (int i : s)
                m |= 1 << i;
            return m;
        };
        int mx = mask(x), my = mask(y), mz = mask(z);
        auto marginal = [&](int keep, int w) {
            Rational total = 0;
            for (int u = 0; u < (1 << d.n); ++u)
                if ((u & keep) == (w & keep))
                    total += joint[u];
            return total;
        };
        bool ok = true;
        for (int w = 0; w < (1 << d.n); ++w) {
            if (w & ~(mx | my | mz))
                continue;
            if (marginal(mx | my | mz, w) * marginal(mz, w)
                != marginal(mx | mz, w) * marginal(my | mz, w))
                ok = false;
        }
        CHECK(ok);
    }
    CHECK(independent_cases > 10);
}

TEST_CASE("post-selection")
{
    SUBCASE("information causality on R")
    {
        auto ps = post_select(catalog("ic"), "R", 2, 1);
        const auto& s = ps.structure;
        CHECK(s.names()
              == std::vector<std::string>{"A", "X1", "X2", "Y_R1", "Y_R2", "Z"});
        CHECK(ps.mapping.at("Y") == std::vector<std::string>{"Y_R1", "Y_R2"});
        CHECK(ps.mapping.at("R").empty());
        CHECK(ancestors(s, "Y_R1") == std::set<std::string>{"A", "X1", "X2", "Z"});
        CHECK(s.conflicting(s.index("Y_R1"), s.index("Y_R2")));
        CHECK_FALSE(s.conflicting(s.index("Y_R1"), s.index("Z")));
        CHECK(s.origin(s.index("Y_R2")) == "Y");
        CHECK(s == catalog("ic_postselected"));
    }
    SUBCASE("bilocal on all three inputs")
    {
        auto s = catalog("bilocal_postselected");
        CHECK(s.names()
              == std::vector<std::string>{"L1", "L2", "X0", "X1", "Y0", "Y1", "Z0", "Z1"});
        CHECK(s.edges().size() == 8);
        CHECK(s.subsystems().size() == 4);
        CHECK(d_separated(s, {"X0"}, {"Z1"}, {}));
    }
    SUBCASE("chained splits follow matching alternatives")
    {
        auto s = StructureBuilder()
                     .node("P", NodeKind::Observed)
                     .node("U", NodeKind::Observed)
                     .node("V", NodeKind::Observed)
                     .node("W", NodeKind::Observed)
                     .edge("P", "U")
                     .edge("U", "V")
                     .edge("W", "V")
                     .build();
        auto ps = post_select(s, "P", 3);
        const auto& t = ps.structure;
        CHECK(t.size() == 7);
        CHECK(ancestors(t, "V_P2") == std::set<std::string>{"U_P2", "W"});
        CHECK(t.children(t.index("W")).size() == 3);
    }
    SUBCASE("pivot without descendants")
    {
        auto s = StructureBuilder()
                     .node("P", NodeKind::Observed)
                     .node("Q", NodeKind::Observed)
                     .node("L", NodeKind::Latent)
                     .edge("L", "Q")
                     .build();
        auto ps = post_select(s, "P", 2);
        CHECK(ps.structure.names() == std::vector<std::string>{"L", "Q"});
        CHECK(ps.structure.edges() == s.edges());
    }
    SUBCASE("errors")
    {
        auto inst = catalog("instrumental");
        CHECK(error_kind([&] { post_select(inst, "Z", 2); }) == Kind::NotParentless);
        CHECK(error_kind([&] { post_select(inst, "A", 2); }) == Kind::NotObserved);
        CHECK(error_kind([&] { post_select(inst, "X", 1); }) == Kind::InvalidCardinality);
    }
}

TEST_CASE("structure text format")
{
    SUBCASE("catalog files match the built-in catalog and round-trip")
    {
        for (const auto& name : catalog_names()) {
            std::string text = read_file(std::string(ENTROCAUSAL_DATA_DIR) + "/catalog/" + name + ".cg");
            auto parsed = parse_structure(text);
            CHECK(parsed == catalog(name));
            CHECK(serialize_structure(parsed) == text);
        }
    }
    SUBCASE("non-canonical input is canonicalized")
    {
        auto s = parse_structure("# demo\nnode Z observed\nedge A -> Z  # latent cause\nnode A latent\n");
        CHECK(serialize_structure(s) == "node A latent\nnode Z observed\nedge A -> Z\n");
    }
    SUBCASE("errors")
    {
        CHECK(error_kind([] { parse_structure(""); }) == Kind::EmptyStructure);
        CHECK(error_kind([] { parse_structure("# only a comment\n"); }) == Kind::EmptyStructure);
        try {
            parse_structure("node X observed\n  vertex Y observed\n");
            FAIL("expected parse error");
        } catch (const StructureError& e) {
            CHECK(e.kind() == Kind::ParseError);
            CHECK(e.element() == "2:3");
        }
        CHECK(error_kind([] { parse_structure("node X hidden\n"); }) == Kind::ParseError);
        CHECK(error_kind([] { parse_structure("node X observed\nedge X Y\n"); }) == Kind::ParseError);
    }
    CHECK(error_kind([] { catalog("nonsense"); }) == Kind::UnknownCatalogEntry);
    CHECK(catalog_names().size() == 9);
}

TEST_CASE("catalog entries match the drawn figures")
{
    auto edges = [](const std::string& n) {
        auto e = catalog(n).edges();
        return std::set<std::pair<std::string, std::string>>(e.begin(), e.end());
    };
    using E = std::set<std::pair<std::string, std::string>>;
    CHECK(edges("instrumental") == E{{"A", "Y"}, {"A", "Z"}, {"X", "Z"}, {"Z", "Y"}});
    CHECK(edges("fig2")
          == E{{"C", "D"}, {"D", "E"}, {"E", "F"}, {"A", "E"}, {"A", "F"}, {"B", "D"}, {"B", "F"}});
    CHECK(edges("fig3b")
          == E{{"C", "F"}, {"D", "E"}, {"E", "F"}, {"A", "C"}, {"A", "F"}, {"B", "C"}, {"B", "E"}});
    auto tri = catalog("triangle");
    int latent = 0;
    for (std::size_t i = 0; i < tri.size(); ++i) {
        if (!tri.observed(i)) {
            ++latent;
            CHECK(tri.children(i).size() == 2);
        } else {
            CHECK(tri.latent_parents(i).size() == 2);
        }
    }
    CHECK(latent == 3);
}
