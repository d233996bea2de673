// flop-atlas: command-line front end for the flopatlas headers.
// Exit codes: 0 success, 1 domain error, 2 usage error.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <flopatlas/chambers.hpp>
#include <flopatlas/fiberdiag.hpp>
#include <flopatlas/mckay.hpp>
#include <flopatlas/rootsys.hpp>
#include <flopatlas/toricfan.hpp>

using namespace flopatlas;
using nlohmann::json;

namespace {

struct RunConfig {
    int n = 2;
    std::vector<long> beta;
    std::string format = "json";
    std::string out;
    std::string fixtures;
};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

json number(const Rational& q)
{
    if (is_integer(q) && q.get_num().fits_slong_p()) return q.get_num().get_si();
    return to_string(q);
}

json vec_json(const QVector& v)
{
    json a = json::array();
    for (const auto& x : v) a.push_back(number(x));
    return a;
}

json matrix_json(const QMatrix& m)
{
    json a = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) a.push_back(vec_json(m.row(i)));
    return a;
}

void emit(const RunConfig& rc, const std::string& text)
{
    if (rc.out.empty()) {
        std::cout << text << '\n';
        return;
    }
    std::ofstream f(rc.out);
    if (!f) throw UsageError("cannot write " + rc.out);
    f << text << '\n';
}

WalkConfig walk_config(const RunConfig& rc)
{
    if (rc.beta.empty()) return gamma_table(default_beta(rc.n));
    if (static_cast<int>(rc.beta.size()) != rc.n)
        throw InvalidBeta("--beta has " + std::to_string(rc.beta.size()) + " entries, expected " + std::to_string(rc.n));
    QVector b(rc.n);
    for (int i = 0; i < rc.n; ++i) b[i] = rc.beta[i];
    return gamma_table(b);
}

void check_n(int n, int cap)
{
    if (n < 1) throw UsageError("--n must be positive");
    if (n > cap) throw ScaleLimit("n = " + std::to_string(n) + " exceeds the cap " + std::to_string(cap));
}

json fan_json(const Fan& f)
{
    json rays = json::array();
    for (const auto& r : f.rays) rays.push_back(vec_json(r));
    return {{"rays", rays}, {"maximal_cones", f.maximal_cones}, {"unimodular", fully_unimodular(f)},
            {"valid", validate_fan(f)}};
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"flop-atlas: exact chamber, flop and folding computations"};
    app.require_subcommand(1);
    RunConfig rc;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--n", rc.n, "rank parameter n");
        sub->add_option("--format", rc.format, "json or dot")->check(CLI::IsMember({"json", "dot"}));
        sub->add_option("--out", rc.out, "write output to this path");
    };

    std::string family = "A";
    bool triality = false;
    auto* fold_cmd = app.add_subcommand("fold", "fold a simply laced Cartan matrix by its standard automorphism");
    common(fold_cmd);
    fold_cmd->add_option("--type", family, "family letter (A, D or E)");
    fold_cmd->add_flag("--triality", triality, "use the order-3 automorphism of D4");

    std::vector<long> weight;
    auto* weyl_cmd = app.add_subcommand("weyl", "Weyl dimension of a dominant integral weight");
    common(weyl_cmd);
    weyl_cmd->add_option("--type", family, "family letter");
    weyl_cmd->add_option("--weight", weight, "weight coordinates")->delimiter(',');

    bool count_only = false;
    auto* chambers_cmd = app.add_subcommand("chambers", "chambers of Mov cut by the flopping walls");
    common(chambers_cmd);
    chambers_cmd->add_flag("--count-only", count_only, "print only the number of chambers");

    auto* walk_cmd = app.add_subcommand("walk", "threshold walk from the Hilbert-Chow chamber");
    common(walk_cmd);
    walk_cmd->add_option("--beta", rc.beta, "superincreasing positive integers")->delimiter(',');

    auto* diagram_cmd = app.add_subcommand("diagram", "central fibre on every interval of the walk");
    common(diagram_cmd);
    diagram_cmd->add_option("--beta", rc.beta, "superincreasing positive integers")->delimiter(',');

    auto* golden_cmd = app.add_subcommand("verify-golden", "compare walk states with fixture patterns");
    common(golden_cmd);
    golden_cmd->add_option("--beta", rc.beta, "superincreasing positive integers")->delimiter(',');
    golden_cmd->add_option("--fixtures", rc.fixtures, "fixture directory")->required();

    std::string toric_what;
    int r = 2;
    auto* toric_cmd = app.add_subcommand("toric", "toric fans: mukai or c4z3");
    common(toric_cmd);
    toric_cmd->add_option("which", toric_what, "mukai or c4z3")->required()->check(CLI::IsMember({"mukai", "c4z3"}));
    toric_cmd->add_option("--r", r, "Mukai flop rank");

    std::string mckay_what;
    int m = 2;
    auto* mckay_cmd = app.add_subcommand("mckay", "finite group utilities");
    common(mckay_cmd);
    mckay_cmd->add_option("which", mckay_what, "wreath")->required()->check(CLI::IsMember({"wreath"}));
    mckay_cmd->add_option("--m", m, "cyclic factor order");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (fold_cmd->parsed()) {
            Family f = parse_family(family);
            emit(rc, matrix_json(fold(standard_folding(f, rc.n, triality))).dump());
        } else if (weyl_cmd->parsed()) {
            RootSystem rs(parse_family(family), rc.n);
            QVector lam(rc.n);
            if (!weight.empty()) {
                if (static_cast<int>(weight.size()) != rc.n) throw DimensionMismatch("--weight needs n entries");
                for (int i = 0; i < rc.n; ++i) lam[i] = weight[i];
            }
            json j{{"system", rs.name()},
                   {"weight", vec_json(lam)},
                   {"dim", number(weyl_dim(rs, lam))},
                   {"positive_roots", rs.positive_roots().size()}};
            emit(rc, j.dump(1));
        } else if (chambers_cmd->parsed()) {
            check_n(rc.n, kMaxChamberN);
            auto cx = enumerate_chambers(ResolutionModel(rc.n));
            json j{{"n", rc.n}, {"count", cx.chambers.size()}};
            if (!count_only) {
                json cs = json::array();
                for (const auto& c : cx.chambers) {
                    json walls = json::array();
                    for (const auto& w : c.walls)
                        walls.push_back({{"neighbor", w.neighbor}, {"class", cx.classes[w.flopping_index].label()}});
                    cs.push_back({{"signs", c.signs}, {"witness", vec_json(c.witness)}, {"walls", walls}});
                }
                j["chambers"] = cs;
            }
            emit(rc, j.dump(1));
        } else if (walk_cmd->parsed()) {
            check_n(rc.n, 8);
            auto cfg = walk_config(rc);
            auto cls = flopping_classes(rc.n);
            json a = json::array();
            for (const auto& s : walk(cfg)) {
                json signs = json::object();
                for (std::size_t k = 0; k < cls.size(); ++k) signs[cls[k].label()] = s.chamber.signs[k];
                a.push_back({{"interval", {s.lower, s.upper}}, {"signs", signs}});
            }
            emit(rc, a.dump(1));
        } else if (diagram_cmd->parsed()) {
            check_n(rc.n, kMaxChamberN);
            auto states = walk_states(rc.n, walk_config(rc));
            if (rc.format == "dot") {
                std::string text;
                for (const auto& s : states) text += to_dot(s);
                emit(rc, text);
            } else {
                json a = json::array();
                for (const auto& s : states) a.push_back(to_json_value(s));
                emit(rc, a.dump(1));
            }
        } else if (golden_cmd->parsed()) {
            check_n(rc.n, kMaxChamberN);
            auto states = walk_states(rc.n, walk_config(rc));
            std::vector<std::filesystem::path> files;
            for (const auto& e : std::filesystem::directory_iterator(rc.fixtures))
                if (e.path().extension() == ".json") files.push_back(e.path());
            std::sort(files.begin(), files.end());
            int pass = 0;
            std::ostringstream os;
            for (const auto& p : files) {
                auto pattern = load_fixture(p.string());
                const FiberState* hit = nullptr;
                for (const auto& s : states)
                    if (s.interval == pattern.interval) hit = &s;
                std::vector<std::string> why;
                if (!hit) why.push_back("no walk state on this interval");
                else why = explain_mismatch(*hit, pattern);
                os << (why.empty() ? "PASS " : "FAIL ") << p.filename().string() << '\n';
                for (const auto& w : why) os << "  " << w << '\n';
                pass += why.empty();
            }
            os << pass << "/" << files.size() << " pass";
            emit(rc, os.str());
            return pass == static_cast<int>(files.size()) && !files.empty() ? 0 : 1;
        } else if (toric_cmd->parsed()) {
            if (toric_what == "mukai") {
                auto fans = mukai_flop_fans(r);
                emit(rc, json{{"r", r}, {"plus", fan_json(fans.plus)}, {"minus", fan_json(fans.minus)}}.dump(1));
            } else {
                auto d = c4z3_search();
                json j = fan_json(c4z3_fan());
                j["lattice_index"] = number(d.n.index_of(d.n0.basis()));
                j["triangulations"] = d.triangulations.size();
                emit(rc, j.dump(1));
            }
        } else if (mckay_cmd->parsed()) {
            if (m < 1) throw UsageError("--m must be positive");
            auto g = wreath_z2(m);
            emit(rc, json{{"order", g.order()}, {"conjugacy_classes", conjugacy_class_count(g)}}.dump(1));
        }
    } catch (const Error& e) {
        std::cerr << e.what() << '\n'; // what() starts with name()
        return 1;
    } catch (const UsageError& e) {
        std::cerr << "usage: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage: " << e.what() << '\n';
        return 2;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "usage: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
