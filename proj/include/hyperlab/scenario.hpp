#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "hyperlab/centralizer.hpp"
#include "hyperlab/homoclinic.hpp"
#include "hyperlab/shadowing.hpp"
#include "hyperlab/sft.hpp"
#include "hyperlab/spectral.hpp"
#include "hyperlab/subsystem.hpp"
#include "hyperlab/util.hpp"

namespace hyperlab {

using Json = nlohmann::ordered_json;

struct ScenarioParseError : std::runtime_error {
    int line = 0, column = 0;
    ScenarioParseError(int l, int c, const std::string& msg)
        : std::runtime_error("line " + std::to_string(l) + ", column " + std::to_string(c) + ": " + msg),
          line(l), column(c) {}
};

struct AnalysisSpec {
    std::string name;
    std::vector<std::string> args;
};

struct Scenario {
    std::string system_id;
    std::map<std::string, double> params;
    std::vector<int> resolutions{64};
    double epsilon = 0.0;
    std::vector<AnalysisSpec> analyses;
    std::string output_dir = "out";
    long long seed = 0;
};

namespace scenariodetail {

inline std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

inline const std::vector<std::string>& analysis_names() {
    static const std::vector<std::string> names{
        "chainrec", "spectral", "verdicts", "sft", "shadow",
        "lemma53", "centralizer", "koenigs", "resonance"};
    return names;
}

inline AnalysisSpec parse_analysis(const std::string& item, int line, int col) {
    AnalysisSpec a;
    auto paren = item.find('(');
    if (paren == std::string::npos) {
        a.name = trim(item);
    } else {
        if (item.back() != ')') throw ScenarioParseError(line, col, "unbalanced '(' in analysis: " + item);
        a.name = trim(item.substr(0, paren));
        std::stringstream ss(item.substr(paren + 1, item.size() - paren - 2));
        std::string arg;
        while (std::getline(ss, arg, ',')) a.args.push_back(trim(arg));
    }
    const auto& names = analysis_names();
    if (std::find(names.begin(), names.end(), a.name) == names.end())
        throw ScenarioParseError(line, col, "unknown analysis: " + a.name);
    return a;
}

inline double parse_number(const std::string& v, int line, int col) {
    try {
        size_t used = 0;
        double d = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument("trailing");
        return d;
    } catch (...) {
        throw ScenarioParseError(line, col, "expected a number, got: " + v);
    }
}

} // namespace scenariodetail

// Strict key=value scenario text: unknown keys and unknown analysis names
// are rejected with line/column positions.
inline Scenario parse_scenario_text(const std::string& text) {
    using scenariodetail::trim;
    Scenario sc;
    bool saw_system = false;
    std::stringstream ss(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(ss, raw)) {
        ++lineno;
        std::string line = raw;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) throw ScenarioParseError(lineno, 1, "expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        int vcol = int(raw.find('=')) + 2;
        if (val.empty()) throw ScenarioParseError(lineno, vcol, "empty value for key: " + key);

        if (key == "system") {
            sc.system_id = val;
            saw_system = true;
        } else if (key.rfind("param.", 0) == 0) {
            sc.params[key.substr(6)] = scenariodetail::parse_number(val, lineno, vcol);
        } else if (key == "resolution") {
            sc.resolutions.clear();
            std::string inner = val;
            if (!inner.empty() && inner.front() == '[') {
                if (inner.back() != ']') throw ScenarioParseError(lineno, vcol, "unbalanced '['");
                inner = inner.substr(1, inner.size() - 2);
            }
            std::stringstream rs(inner);
            std::string item;
            while (std::getline(rs, item, ',')) {
                item = trim(item);
                if (item.empty()) continue;
                sc.resolutions.push_back(int(scenariodetail::parse_number(item, lineno, vcol)));
            }
            if (sc.resolutions.empty()) throw ScenarioParseError(lineno, vcol, "empty resolution list");
        } else if (key == "epsilon") {
            sc.epsilon = scenariodetail::parse_number(val, lineno, vcol);
        } else if (key == "seed") {
            sc.seed = (long long)scenariodetail::parse_number(val, lineno, vcol);
        } else if (key == "output") {
            sc.output_dir = val;
        } else if (key == "analyses") {
            if (val.front() != '[' || val.back() != ']')
                throw ScenarioParseError(lineno, vcol, "analyses must be a [list]");
            std::string inner = val.substr(1, val.size() - 2);
            // split on commas at paren depth 0
            std::vector<std::string> items;
            std::string cur;
            int depth = 0;
            for (char c : inner) {
                if (c == '(') ++depth;
                if (c == ')') --depth;
                if (c == ',' && depth == 0) {
                    items.push_back(cur);
                    cur.clear();
                } else {
                    cur.push_back(c);
                }
            }
            if (!trim(cur).empty()) items.push_back(cur);
            for (const auto& it : items) {
                std::string t = trim(it);
                if (t.empty()) continue;
                sc.analyses.push_back(scenariodetail::parse_analysis(t, lineno, vcol));
            }
        } else {
            throw ScenarioParseError(lineno, int(raw.find(key)) + 1, "unknown key: " + key);
        }
    }
    if (!saw_system) throw ScenarioParseError(lineno, 1, "missing required key: system");
    return sc;
}

inline Scenario parse_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read scenario file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_scenario_text(buf.str());
}

namespace scenariodetail {

inline Json json_point(const Point& p) {
    if (auto* v = std::get_if<double>(&p)) return Json::array({*v});
    if (auto* v = std::get_if<Vec2>(&p)) return Json::array({v->x, v->y});
    return Json(as_sym(p).str());
}

inline Json json_sft(const Sft& s) {
    Json j;
    j["symbols"] = Json::array();
    for (const auto& p : s.symbols) j["symbols"].push_back(json_point(p));
    j["matrix"] = Json::array();
    for (const auto& row : s.a) {
        Json r = Json::array();
        for (uint8_t v : row) r.push_back(int(v));
        j["matrix"].push_back(r);
    }
    j["epsilon"] = s.epsilon;
    j["nu"] = s.nu;
    return j;
}

struct RunContext {
    Scenario sc;
    std::filesystem::path out;
    CatalogSystem sys;
    // chainrec/spectral products, keyed by resolution order
    std::vector<ChainDecomposition> decs;
    std::vector<OrderGraph> graphs;  // classified
    Json report;
    bool any_verdict_failed = false;
};

inline void ensure_decompositions(RunContext& cx) {
    if (!cx.decs.empty()) return;
    for (int res : cx.sc.resolutions)
        cx.decs.push_back(chain_classes(build_box_graph(cx.sys, res, cx.sc.epsilon)));
}

inline void ensure_order_graphs(RunContext& cx) {
    ensure_decompositions(cx);
    if (!cx.graphs.empty()) return;
    for (const auto& d : cx.decs)
        cx.graphs.push_back(classify_attractors(ll_relation(d, cx.sys), d));
}

inline void write_file(const std::filesystem::path& p, const std::string& contents) {
    std::ofstream out(p, std::ios::binary);
    out << contents;
}

inline Json run_chainrec(RunContext& cx) {
    ensure_decompositions(cx);
    Json res = Json::array();
    for (size_t k = 0; k < cx.decs.size(); ++k) {
        const auto& d = cx.decs[k];
        int r = cx.sc.resolutions[k];
        Json j;
        j["resolution"] = r;
        j["epsilon"] = cx.sc.epsilon;
        j["num_classes"] = d.classes.size();
        j["transient_boxes"] = d.transient.size();
        Json cls = Json::array();
        for (size_t ci = 0; ci < d.classes.size(); ++ci) {
            Json c;
            c["index"] = ci;
            c["boxes"] = d.classes[ci].size();
            c["first_box"] = d.classes[ci][0];
            c["certified"] = bool(d.class_certified[ci]);
            cls.push_back(c);
        }
        j["classes"] = cls;

        std::ostringstream csv, gcsv, gdot;
        write_decomposition_csv(d, csv);
        write_file(cx.out / ("chainrec_" + std::to_string(r) + ".csv"), csv.str());
        write_box_graph_csv(d.graph, gcsv);
        write_file(cx.out / ("boxgraph_" + std::to_string(r) + ".csv"), gcsv.str());
        write_box_graph_dot(d.graph, gdot);
        write_file(cx.out / ("boxgraph_" + std::to_string(r) + ".dot"), gdot.str());
        res.push_back(j);
    }
    return res;
}

inline Json run_spectral(RunContext& cx) {
    ensure_order_graphs(cx);
    Json res = Json::array();
    for (size_t k = 0; k < cx.graphs.size(); ++k) {
        const auto& og = cx.graphs[k];
        const auto& d = cx.decs[k];
        int r = cx.sc.resolutions[k];
        Json j;
        j["resolution"] = r;
        Json nodes = Json::array();
        int attractors = 0, repellers = 0;
        std::vector<char> covered(size_t(d.graph.cover.box_count()), 0);
        for (size_t i = 0; i < og.nodes.size(); ++i) {
            Json nj;
            nj["index"] = i;
            nj["boxes"] = og.nodes[i].boxes.size();
            nj["period"] = og.nodes[i].period;
            nj["mixing"] = og.nodes[i].mixing;
            nj["attractor"] = bool(og.attractor[i]);
            nj["repeller"] = bool(og.repeller[i]);
            nj["trivial"] = bool(og.trivial_node[i]);
            nj["basin_boxes"] = og.basins[i].size();
            nodes.push_back(nj);
            attractors += og.attractor[i];
            repellers += og.repeller[i];
            if (og.attractor[i])
                for (int b : og.basins[i]) covered[size_t(b)] = 1;
        }
        j["nodes"] = nodes;
        Json edges = Json::array();
        for (const auto& e : og.edges)
            edges.push_back(Json{{"from", e.from}, {"to", e.to}, {"evidence", evidence_str(e.evidence)}});
        j["edges"] = edges;
        j["attractors"] = attractors;
        j["repellers"] = repellers;
        long long cov = 0;
        for (char c : covered) cov += c;
        j["basin_coverage"] = double(cov) / double(covered.size());

        std::ostringstream dot;
        write_order_graph_dot(og, dot);
        write_file(cx.out / ("order_" + std::to_string(r) + ".dot"), dot.str());
        res.push_back(j);
    }
    return res;
}

inline Json run_verdicts(RunContext& cx) {
    ensure_order_graphs(cx);
    Json res = Json::array();
    for (size_t k = 0; k < cx.graphs.size(); ++k) {
        const auto& og = cx.graphs[k];
        const auto& d = cx.decs[k];
        Json j;
        j["resolution"] = cx.sc.resolutions[k];
        auto cycles = detect_cycles(og);
        j["k_cycles"] = cycles.size();
        Json cyc = Json::array();
        for (const auto& c : cycles) cyc.push_back(c);
        j["cycles"] = cyc;
        auto rep = shortcut_verdicts(og, d);
        j["lemma34_checked"] = rep.l34_checked;
        j["lemma34_failed"] = rep.l34_failed;
        j["lemma36_checked"] = rep.l36_checked;
        j["lemma36_failed"] = rep.l36_failed;

        Json connecting = Json::array();
        bool conn_ok = true;
        std::vector<int> attrs;
        for (size_t i = 0; i < og.nodes.size(); ++i)
            if (og.attractor[i]) attrs.push_back(int(i));
        for (size_t i = 0; i < attrs.size(); ++i) {
            for (size_t l = i + 1; l < attrs.size(); ++l) {
                auto r = connecting_repeller(og, d, attrs[i], attrs[l]);
                Json cj;
                cj["a1"] = attrs[i];
                cj["a2"] = attrs[l];
                if (r.repeller) {
                    cj["repeller"] = *r.repeller;
                    cj["to_a1"] = evidence_str(r.to_a1);
                    cj["to_a2"] = evidence_str(r.to_a2);
                } else {
                    cj["diagnostic"] = r.diagnostic;
                    if (r.diagnostic != "basin closures do not intersect") conn_ok = false;
                }
                connecting.push_back(cj);
            }
        }
        j["connecting_repellers"] = connecting;
        bool pass = cycles.empty() && rep.all_pass() && conn_ok;
        j["passed"] = pass;
        if (!pass) cx.any_verdict_failed = true;
        res.push_back(j);
    }
    return res;
}

inline Json run_sft(RunContext& cx) {
    Json j;
    if (cx.sys.id != "horseshoe" && cx.sys.id != "full_shift") {
        j["error"] = "sft analysis requires the horseshoe or full_shift system";
        cx.any_verdict_failed = true;
        return j;
    }
    std::vector<Point> marked;
    if (cx.sys.id == "horseshoe") {
        marked = {Point(Vec2{0, 0}), Point(Vec2{1, 1})};
    } else {
        marked = {Point(SymbolicPoint::periodic(Word{0})), Point(SymbolicPoint::periodic(Word{1}))};
    }
    Sft s = sft_from_points(cx.sys, marked, 1.5);
    j["sft"] = json_sft(s);
    auto [tr, mx] = check_irreducible_primitive(s);
    j["transitive"] = tr;
    j["mixing"] = mx;

    if (cx.sys.id == "horseshoe") {
        // exact conjugacy beta o shift = f o beta over seeded periodic tails
        std::mt19937_64 rng(uint64_t(cx.sc.seed) * 1000003u + 17u);
        int checked = 0, exact = 0;
        for (int t = 0; t < 200; ++t) {
            int lp = 1 + int(rng() % 6), cp = int(rng() % 6), rp = 1 + int(rng() % 6);
            Word l, c, r;
            for (int i = 0; i < lp; ++i) l.push_back(int(rng() % 2));
            for (int i = 0; i < cp; ++i) c.push_back(int(rng() % 2));
            for (int i = 0; i < rp; ++i) r.push_back(int(rng() % 2));
            SymbolicPoint x(l, c, r, -(long long)(rng() % 5));
            auto [bx, by] = beta_horseshoe_exact(s, x);
            auto [fx, fy] = horseshoe_model::eval_exact(bx, by);
            auto [sx, sy] = beta_horseshoe_exact(s, x.shifted(1));
            ++checked;
            if (fx == sx && fy == sy) ++exact;
        }
        j["conjugacy_checked"] = checked;
        j["conjugacy_exact"] = exact;
        bool pass = tr && mx && exact == checked;
        j["passed"] = pass;
        if (!pass) cx.any_verdict_failed = true;
    } else {
        j["passed"] = tr && mx;
        if (!(tr && mx)) cx.any_verdict_failed = true;
    }
    return j;
}

inline Json run_shadow(RunContext& cx) {
    Json j;
    if (cx.sys.id != "cat" && cx.sys.id != "horseshoe") {
        j["error"] = "shadow analysis requires cat or horseshoe";
        cx.any_verdict_failed = true;
        return j;
    }
    std::mt19937_64 rng(uint64_t(cx.sc.seed) * 6364136223846793005ull + 1442695040888963407ull);
    std::uniform_real_distribution<double> noise(-1e-3, 1e-3);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double worst_res = 0.0, worst_sup = 0.0, worst_err = 0.0;
    int trials = 100, length = 100;
    for (int t = 0; t < trials; ++t) {
        std::vector<Point> pseudo;
        if (cx.sys.id == "cat") {
            pseudo.push_back(Point(Vec2{unit(rng), unit(rng)}));
            for (int i = 1; i < length; ++i) {
                Vec2 v = as_2d(*cx.sys.map(pseudo.back()));
                pseudo.push_back(Point(Vec2{wrap01(v.x + noise(rng)), wrap01(v.y + noise(rng))}));
            }
        } else {
            // exact rational orbit on the invariant set (double iteration
            // diverges at rate 5^n), with noise clamped into the strips
            Word w;
            for (int i = 0; i < 6; ++i) w.push_back(int(rng() % 2));
            if (primitive_root(w).size() != w.size()) w[5] = 1 - w[5];
            auto [x, y] = horseshoe_model::point_of_itinerary(SymbolicPoint::periodic(w));
            for (int i = 0; i < 40; ++i) {
                // keep noisy points clear of the 1e-9 branch-ambiguity band
                double ylo = y <= Rat(1, 5) ? 0.0 : 0.8 + 2e-9;
                double yhi = y <= Rat(1, 5) ? 0.2 - 2e-9 : 1.0;
                pseudo.push_back(Point(Vec2{std::clamp(x.value() + noise(rng) * 0.1, 0.0, 1.0),
                                            std::clamp(y.value() + noise(rng) * 0.1, ylo, yhi)}));
                auto next = horseshoe_model::eval_exact(x, y);
                x = next.first;
                y = next.second;
            }
        }
        if (pseudo.size() < 2) continue;
        auto sh = shadow_pseudo_orbit(cx.sys, pseudo);
        worst_res = std::max(worst_res, sh.max_residual);
        worst_sup = std::max(worst_sup, sh.sup_distance);
        worst_err = std::max(worst_err, sh.max_error);
    }
    j["trials"] = trials;
    j["length"] = length;
    j["noise"] = 1e-3;
    j["max_one_step_error"] = worst_err;
    j["max_orbit_residual"] = worst_res;
    j["max_shadow_distance"] = worst_sup;
    bool pass = worst_res < 1e-12 && worst_sup <= 3e-3;
    j["passed"] = pass;
    if (!pass) cx.any_verdict_failed = true;
    return j;
}

inline Json run_lemma53(RunContext& cx) {
    Json j;
    const double nu = 1.0 / 16.0;
    auto enc = enclosing_markov_system(single_one_family(), nu, 1);
    j["nu"] = nu;
    j["subsystem"] = "single_one_closure";
    j["sft_symbols"] = enc.sft.n();
    j["negative_certificate"] = enc.locally_maximal_certificate;
    Json esc = Json::array();
    bool pass = !enc.locally_maximal_certificate && enc.escapees.size() >= 5;
    double prev = 1e300;
    for (const auto& e : enc.escapees) {
        Json ej;
        ej["n"] = e.n;
        ej["point"] = e.point.str();
        ej["dist_to_shifted_z"] = e.dist_to_shifted_z;
        ej["dist_to_limit_orbit"] = e.dist_to_limit_orbit;
        ej["member"] = e.member;
        esc.push_back(ej);
        pass = pass && !e.member && e.dist_to_shifted_z < nu * std::ldexp(1.0, -e.n);
        pass = pass && e.dist_to_limit_orbit < prev;
        prev = e.dist_to_limit_orbit;
    }
    j["escapees"] = esc;
    if (enc.limit) j["limit"] = enc.limit->str();

    for (const char* name : {"full_shift", "golden_mean"}) {
        auto spec = std::string(name) == "full_shift" ? full_shift_spec() : golden_mean_spec();
        auto neg = enclosing_markov_system(spec, nu, 1);
        j[std::string(name) + "_negative_certificate"] = neg.locally_maximal_certificate;
        pass = pass && neg.locally_maximal_certificate;
    }
    j["passed"] = pass;
    if (!pass) cx.any_verdict_failed = true;
    return j;
}

inline Json run_centralizer(RunContext& cx, const AnalysisSpec& a) {
    Json j;
    std::string partner = a.args.empty() ? "pow2" : a.args[0];
    int n = a.args.size() >= 2 ? std::stoi(a.args[1]) : 1;
    PartnerMap g;
    if (partner == "identity") g = identity_partner(cx.sys.space);
    else if (partner == "swap") g = swap_partner(cx.sys.space);
    else if (partner.rfind("pow", 0) == 0) g = power_partner(cx.sys, std::stoi(partner.substr(3)));
    else throw std::invalid_argument("unknown centralizer partner: " + partner);

    j["partner"] = g.name;
    j["n"] = n;
    auto rep = periodic_permutation_check(cx.sys, g, n);
    j["residual"] = rep.residual;
    Json pts = Json::array();
    for (size_t i = 0; i < rep.points.size(); ++i) {
        Json pj;
        pj["point"] = json_point(rep.points[i].point);
        pj["period"] = rep.points[i].period;
        pj["maps_to"] = rep.permutation[i];
        pj["similarity_ok"] = bool(rep.similarity_ok[i]);
        pj["manifold_ok"] = bool(rep.manifold_ok[i]);
        pts.push_back(pj);
    }
    j["points"] = pts;
    j["bijective"] = rep.bijective;
    bool pass = rep.bijective && rep.all_similar();
    j["passed"] = pass;
    if (!pass) cx.any_verdict_failed = true;
    return j;
}

inline Json run_koenigs(RunContext& cx) {
    Json j;
    // worked model: g(x) = x/2 + x^2/4 on [-0.1, 0.1]
    Contraction1D model{[](double x) { return x / 2 + x * x / 4; }, 0.5};
    Json sweep = Json::array();
    for (double tol : {1e-6, 1e-8, 1e-10}) {
        double worst = 0.0;
        for (int i = -10; i <= 10; ++i)
            worst = std::max(worst, koenigs_conjugacy_residual(model, 0.01 * i, tol));
        sweep.push_back(Json{{"tol", tol}, {"residual", worst}});
    }
    j["model_residual_sweep"] = sweep;
    double worst12 = 0.0;
    for (int i = -10; i <= 10; ++i)
        worst12 = std::max(worst12, koenigs_conjugacy_residual(model, 0.01 * i, 1e-12));
    j["model_residual_tol_1e12"] = worst12;

    // conjugated model is linear by construction
    std::vector<double> grid;
    for (int i = -10; i <= 10; ++i)
        if (i) grid.push_back(0.005 * i);
    auto conj = [&](double u) {
        double x = koenigs_inverse(model, u, 1e-12);
        return koenigs_linearize(model, model.eval(x), 1e-12).phi;
    };
    auto lt = linearity_test(conj, 0.5, grid, 1e-8);
    j["conjugated_linear"] = lt.status == LinearityResult::Status::linear;
    j["conjugated_sup_dev"] = lt.sup_deviation;

    bool pass = worst12 < 1e-10 && lt.status == LinearityResult::Status::linear;

    // north_south sink in local coordinates, when applicable
    if (cx.sys.id == "north_south") {
        double amp = detail::param_or(cx.sys.params, "amplitude", 0.1);
        Contraction1D sink{[amp](double u) { return u - amp * sin2pi(u); },
                           std::get<double>(*cx.sys.derivative(Point(0.5)))};
        double worst = 0.0;
        for (int i = -10; i <= 10; ++i)
            worst = std::max(worst, koenigs_conjugacy_residual(sink, 0.005 * i, 1e-12));
        j["sink_residual"] = worst;
        j["sink_multiplier"] = sink.a;
        pass = pass && worst < 1e-8;
    }

    // Theta/chi worked examples to CSV
    std::ostringstream csv;
    csv << "theta1,theta2,sign1,sign2,chi1,chi2,class\n";
    auto emit = [&](const ThetaResult& t) {
        csv << t.z.theta[0] << "," << t.z.theta[1] << "," << t.z.signs[0] << "," << t.z.signs[1]
            << "," << t.chi[0] << "," << t.chi[1] << "," << t.klass << "\n";
    };
    auto t1 = theta_embed({0.5, 3.0}, {0.5, 3.0});
    auto t2 = theta_embed({0.25, 9.0}, {0.5, 3.0});
    auto t3 = theta_embed({0.25, 3.0}, {0.5, 3.0});
    emit(t1);
    emit(t2);
    emit(t3);
    write_file(cx.out / "theta.csv", csv.str());
    j["theta_examples"] = Json::array({t1.klass, t2.klass, t3.klass});
    pass = pass && t1.klass == "identity" && t2.in_Z1 && t3.klass == "Z0minusZ1";

    j["passed"] = pass;
    if (!pass) cx.any_verdict_failed = true;
    return j;
}

inline Json run_resonance(RunContext& cx, const AnalysisSpec& a) {
    Json j;
    int j_max = a.args.empty() ? 20 : std::stoi(a.args[0]);
    j["j_max"] = j_max;

    auto describe = [&](const ResonanceReport& r) {
        Json rj;
        rj["nonresonant"] = r.nonresonant;
        rj["distinct"] = r.eigenvalues_distinct;
        rj["search_complete"] = r.search_complete;
        rj["min_gap"] = r.min_gap == 1e300 ? Json() : Json(r.min_gap);
        Json w = Json::array();
        for (const auto& wit : r.witnesses) w.push_back(Json{{"i", wit.i}, {"j", wit.powers}});
        rj["witnesses"] = w;
        rj["note"] = r.note;
        return rj;
    };
    j["example_resonant_half_quarter"] = describe(nonresonance_check({0.5, 0.25}, j_max));
    j["example_nonresonant_half_third"] = describe(nonresonance_check({0.5, 1.0 / 3.0}, j_max));

    bool pass = !nonresonance_check({0.5, 0.25}, j_max).nonresonant &&
                nonresonance_check({0.5, 1.0 / 3.0}, j_max).nonresonant;

    if (cx.sys.space.kind != SpaceKind::shiftspace && cx.sys.id != "horseshoe") {
        auto per = find_periodic_points(cx.sys, 1);
        Json sys_reports = Json::array();
        for (const auto& p : per) {
            if (!p.eigen.hyperbolic() || p.eigen.eigenvalues.empty()) continue;
            Json rj = describe(nonresonance_check(p.eigen.eigenvalues, j_max));
            rj["point"] = json_point(p.point);
            sys_reports.push_back(rj);
        }
        j["system_fixed_points"] = sys_reports;
    }
    j["passed"] = pass;
    if (!pass) cx.any_verdict_failed = true;
    return j;
}

} // namespace scenariodetail

// Executes the scenario's analyses in order and writes report.json plus DOT
// and CSV side files into the output directory. Exit codes: 0 all verdicts
// passed, 1 execution error, 2 a verdict or precondition failed.
inline int run_scenario(const Scenario& sc_in, const std::string& out_override = "",
                        std::optional<long long> seed_override = std::nullopt) {
    using namespace scenariodetail;
    RunContext cx;
    cx.sc = sc_in;
    if (!out_override.empty()) cx.sc.output_dir = out_override;
    if (seed_override) cx.sc.seed = *seed_override;

    try {
        cx.out = cx.sc.output_dir;
        std::filesystem::create_directories(cx.out);
        cx.sys = build_system(cx.sc.system_id, cx.sc.params);

        cx.report["schema"] = "hyperbolic-lab/1";
        Json scj;
        scj["system"] = cx.sc.system_id;
        scj["params"] = cx.sc.params;
        scj["resolutions"] = cx.sc.resolutions;
        scj["epsilon"] = cx.sc.epsilon;
        scj["seed"] = cx.sc.seed;
        cx.report["scenario"] = scj;
        Json results = Json::array();

        for (const auto& a : cx.sc.analyses) {
            Json r;
            r["analysis"] = a.name;
            try {
                if (a.name == "chainrec") r["result"] = run_chainrec(cx);
                else if (a.name == "spectral") r["result"] = run_spectral(cx);
                else if (a.name == "verdicts") r["result"] = run_verdicts(cx);
                else if (a.name == "sft") r["result"] = run_sft(cx);
                else if (a.name == "shadow") r["result"] = run_shadow(cx);
                else if (a.name == "lemma53") r["result"] = run_lemma53(cx);
                else if (a.name == "centralizer") r["result"] = run_centralizer(cx, a);
                else if (a.name == "koenigs") r["result"] = run_koenigs(cx);
                else if (a.name == "resonance") r["result"] = run_resonance(cx, a);
            } catch (const std::exception& e) {
                r["precondition_failure"] = e.what();
                cx.any_verdict_failed = true;
            }
            results.push_back(r);
        }
        cx.report["results"] = results;
        cx.report["all_verdicts_passed"] = !cx.any_verdict_failed;

        write_file(cx.out / "report.json", cx.report.dump(2) + "\n");
        return cx.any_verdict_failed ? 2 : 0;
    } catch (const std::exception& e) {
        std::ofstream err(cx.out.empty() ? "error.log" : (cx.out / "error.log"));
        err << e.what() << "\n";
        return 1;
    }
}

// Plot-data extraction: basin coverage vs resolution, Lemma 5.3 escapee
// decay, and the Koenigs residual-vs-tolerance sweep. Returns the files
// written; an empty analysis list yields none.
inline std::vector<std::string> emit_plotdata(const std::string& report_path) {
    std::ifstream in(report_path);
    if (!in) throw std::runtime_error("missing report: " + report_path);
    Json report = Json::parse(in);
    std::filesystem::path dir = std::filesystem::path(report_path).parent_path();
    std::vector<std::string> written;

    auto write_csv = [&](const std::string& name, const std::string& contents) {
        std::filesystem::path p = dir / name;
        std::ofstream out(p, std::ios::binary);
        out << contents;
        written.push_back(p.string());
    };

    for (const auto& r : report.value("results", Json::array())) {
        std::string name = r.value("analysis", "");
        if (name == "spectral" && r.contains("result")) {
            std::ostringstream csv;
            csv << "resolution,basin_coverage\n";
            for (const auto& row : r["result"])
                csv << row["resolution"].get<int>() << "," << row["basin_coverage"].get<double>() << "\n";
            write_csv("basin_coverage.csv", csv.str());
        } else if (name == "lemma53" && r.contains("result") && r["result"].contains("escapees")) {
            std::ostringstream csv;
            csv << "n,distance\n";
            for (const auto& e : r["result"]["escapees"])
                csv << e["n"].get<int>() << "," << e["dist_to_limit_orbit"].get<double>() << "\n";
            write_csv("lemma53_decay.csv", csv.str());
        } else if (name == "koenigs" && r.contains("result") && r["result"].contains("model_residual_sweep")) {
            std::ostringstream csv;
            csv << "tol,residual\n";
            for (const auto& row : r["result"]["model_residual_sweep"])
                csv << row["tol"].get<double>() << "," << row["residual"].get<double>() << "\n";
            write_csv("koenigs_residuals.csv", csv.str());
        }
    }
    return written;
}

} // namespace hyperlab
