#include <catch_amalgamated.hpp>

#include <filesystem>

#include <flopatlas/fiberdiag.hpp>

using namespace flopatlas;

namespace {

std::vector<FiberState> walk6() { return walk_states(6, gamma_table(default_beta(6))); }

const FiberState* on_interval(const std::vector<FiberState>& states, const std::pair<std::string, std::string>& iv)
{
    for (const auto& s : states)
        if (s.interval == iv) return &s;
    return nullptr;
}

std::string fixture(const std::string& name) { return std::string(FLOPATLAS_FIXTURES) + "/" + name; }

} // namespace

TEST_CASE("class formatting round-trips")
{
    for (int n = 1; n <= 5; ++n)
        for (const auto& f : flopping_classes(n)) {
            for (int s : {1, -1}) {
                QVector v = Rational(s) * f.cls;
                CHECK(parse_class(format_class(v), n) == v);
                auto g = as_flopping_class(v);
                REQUIRE(g);
                CHECK(g->vec(n) == v);
            }
        }
    CHECK(format_class(lambda_class(3, 1, 2)) == "lambda_1_2");
    CHECK(format_class(-lambda_class(3, 2, 2)) == "-lambda_2_2");
    CHECK_FALSE(as_flopping_class(QVector{0, 1, 0}));
    CHECK_THROWS_AS(parse_class("lambda_3_1", 3), FixtureParse);
}

TEST_CASE("component ids order P before Q, lexicographically")
{
    CHECK(component_less("P_1_2", "P_1_10"));
    CHECK(component_less("P_1_6", "P_2_2"));
    CHECK(component_less("P_6_6", "Q_1"));
    CHECK_FALSE(parse_component_id("R_1"));
}

TEST_CASE("initial state is the Hilbert-Chow fibre")
{
    for (int n = 1; n <= 6; ++n) {
        auto s = initial_state(n);
        CHECK(s.components.size() == static_cast<std::size_t>(n * (n + 1) / 2 + n));
        auto p2 = p2_classes(s);
        REQUIRE(p2.size() == static_cast<std::size_t>(n));
        for (int i = 1; i <= n; ++i) CHECK(std::find(p2.begin(), p2.end(), SignedFloppingClass{-1, i, i}) != p2.end());
        for (int i = 1; i <= n; ++i) CHECK(s.find(q_id(i))->type == SurfaceType::Hirzebruch4Static);
    }
}

TEST_CASE("incidences are ordered, unique and reference real components")
{
    for (int n = 1; n <= 5; ++n)
        for (const auto& s : walk_states(n, gamma_table(default_beta(n)))) {
            std::set<std::pair<std::string, std::string>> seen;
            for (const auto& x : s.incidences) {
                CHECK(component_less(x.a, x.b));
                CHECK(s.find(x.a));
                CHECK(s.find(x.b));
                CHECK(seen.insert({x.a, x.b}).second);
                CHECK(x.kind != IncidenceKind::Any);
                CHECK((x.kind == IncidenceKind::Curve) == x.cls.has_value());
            }
        }
}

TEST_CASE("every plane carries a flopping line class")
{
    for (int n = 1; n <= 6; ++n)
        for (const auto& s : walk_states(n, gamma_table(default_beta(n)))) {
            auto p2 = p2_classes(s); // throws NotAFloppingClass otherwise
            std::set<SignedFloppingClass> distinct(p2.begin(), p2.end());
            CHECK(distinct.size() == p2.size());
        }
}

TEST_CASE("last walk state has a single plane with line +lambda_1n")
{
    for (int n = 1; n <= 6; ++n) {
        auto states = walk_states(n, gamma_table(default_beta(n)));
        CHECK(states.size() == static_cast<std::size_t>(n * (n + 1) / 2 + 1));
        auto p2 = p2_classes(states.back());
        REQUIRE(p2.size() == 1);
        CHECK(p2[0] == SignedFloppingClass{1, 1, n});
    }
}

TEST_CASE("flop is an involution along every walk")
{
    for (int n = 1; n <= 6; ++n) {
        auto cfg = gamma_table(default_beta(n));
        auto states = walk_states(n, cfg);
        for (std::size_t k = 0; k + 1 < states.size(); ++k) {
            const auto& t = cfg.thresholds[k];
            auto back = flop(states[k + 1], {-1, t.i, t.j});
            CHECK(states_equal(back, states[k]));
            CHECK(states_equal(flop(states[k], {1, t.i, t.j}), states[k + 1]));
        }
    }
}

TEST_CASE("flop preconditions")
{
    auto s = initial_state(3);
    CHECK_THROWS_AS(flop(s, {1, 1, 2}), NoFlopTarget);
    CHECK_THROWS_AS(flop(s, {-1, 1, 1}), NoFlopTarget);
    CHECK_NOTHROW(flop(s, {1, 1, 1}));
    auto pattern = load_fixture(fixture("0_g11.json"));
    CHECK_THROWS_AS(flop(pattern, {1, 1, 1}), std::invalid_argument);
}

TEST_CASE("n = 2 middle chamber has lines e0-e1, e0-e2, e1+e2-e0")
{
    auto states = walk_states(2, gamma_table(QVector{1, 2}));
    const FiberState* s = on_interval(states, {"g_2_2", "g_1_2"});
    REQUIRE(s);
    std::set<QVector> got;
    for (const auto& c : p2_classes(*s)) got.insert(c.vec(2));
    std::set<QVector> want{QVector{1, -1, 0}, QVector{1, 0, -1}, QVector{-1, 1, 1}};
    CHECK(got == want);
}

TEST_CASE("golden fixtures: all 17 intervals of the n = 6 walk")
{
    auto states = walk6();
    int count = 0;
    for (const auto& e : std::filesystem::directory_iterator(FLOPATLAS_FIXTURES)) {
        if (e.path().extension() != ".json") continue;
        ++count;
        auto p = load_fixture(e.path().string());
        INFO(e.path().filename().string());
        const FiberState* s = on_interval(states, p.interval);
        REQUIRE(s);
        auto why = explain_mismatch(*s, p);
        for (const auto& w : why) UNSCOPED_INFO(w);
        CHECK(why.empty());
        CHECK(states_equal(*s, p));
        CHECK(states_equal(p, *s));
    }
    CHECK(count == 17);
}

TEST_CASE("golden comparison rejects the wrong state")
{
    auto p = load_fixture(fixture("g11_g22.json"));
    CHECK_FALSE(states_equal(initial_state(6), p));
    auto states = walk6();
    CHECK_FALSE(states_equal(*on_interval(states, {"g_2_2", "g_1_2"}), p));
}

TEST_CASE("P_1_4 and P_2_5 meet at a point after gamma_1_5")
{
    auto states = walk6();
    const FiberState* s = on_interval(states, {"g_1_5", "g_6_6"});
    REQUIRE(s);
    const Incidence* x = s->incidence("P_2_5", "P_1_4");
    REQUIRE(x);
    CHECK(x->kind == IncidenceKind::Point);
    CHECK_FALSE(x->cls);
}

TEST_CASE("JSON dump reloads as a matching pattern")
{
    for (int n = 1; n <= 4; ++n)
        for (const auto& s : walk_states(n, gamma_table(default_beta(n)))) {
            auto p = state_from_json(to_json_value(s));
            CHECK(p.pattern);
            CHECK(explain_mismatch(s, p).empty());
            CHECK(to_json(s) == to_json(s)); // deterministic
        }
}

TEST_CASE("fixture parse errors")
{
    using nlohmann::json;
    CHECK_THROWS_AS(load_fixture(fixture("missing.json")), FixtureParse);
    json j = to_json_value(initial_state(1));
    json bad = j;
    bad["components"].erase(0);
    CHECK_THROWS_AS(state_from_json(bad), FixtureParse);
    bad = j;
    bad["incidences"] = json::array({{{"a", "P_1_1"}, {"b", "Q_1"}, {"kind", "sideways"}}});
    CHECK_THROWS_AS(state_from_json(bad), FixtureParse);
    bad = j;
    bad["scope"] = "everywhere";
    CHECK_THROWS_AS(state_from_json(bad), FixtureParse);
}

TEST_CASE("DOT output lists components in order")
{
    auto s = initial_state(2);
    std::string dot = to_dot(s);
    CHECK(dot.rfind("graph fiber {", 0) == 0);
    auto p11 = dot.find("\"P_1_1\" [");
    auto p12 = dot.find("\"P_1_2\" [");
    auto q1 = dot.find("\"Q_1\" [");
    REQUIRE(p11 != std::string::npos);
    CHECK(p11 < p12);
    CHECK(p12 < q1);
}
