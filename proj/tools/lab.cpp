#include "lab/cascade.hpp"
#include "lab/horseshoe.hpp"
#include "lab/json_io.hpp"
#include "lab/measures.hpp"
#include "lab/pseudo_physical.hpp"
#include "lab/qr_covering.hpp"
#include "lab/shadowing.hpp"
#include "lab/shrinking.hpp"
#include "lab/symbolic.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <set>
#include <sstream>

using namespace lab;

namespace {

constexpr int kOk = 0, kRefused = 1, kUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raw option strings of the leaf command, keyed by long flag name.
struct Args {
    std::map<std::string, std::string> values;
    std::set<std::string> flags;

    bool has(const std::string& k) const { return values.count(k) || flags.count(k); }
    const std::string& str(const std::string& k) const {
        auto it = values.find(k);
        if (it == values.end()) throw UsageError("missing --" + k);
        return it->second;
    }
    Rational rational(const std::string& k) const {
        try {
            return parse_rational(str(k));
        } catch (const ParseError& e) {
            throw UsageError("--" + k + ": " + e.what());
        }
    }
    long integer(const std::string& k) const {
        const std::string& s = str(k);
        try {
            std::size_t used = 0;
            long v = std::stol(s, &used);
            if (used != s.size()) throw std::invalid_argument(s);
            return v;
        } catch (const std::exception&) {
            throw UsageError("--" + k + ": expected an integer, got '" + s + "'");
        }
    }
    int integer_or(const std::string& k, int dflt) const { return values.count(k) ? static_cast<int>(integer(k)) : dflt; }
};

Json unwrap(Json j) {
    if (j.is_object() && j.contains("result")) j = j.at("result");
    return j;
}

PwaMap load_map(const Args& a, const std::string& key) {
    const std::string& src = a.str(key);
    if (src.rfind("builtin:", 0) == 0) {
        std::string name = src.substr(8);
        if (name == "tent") return PwaMap::tent();
        if (name == "identity") return PwaMap::identity();
        if (name == "double-tent") return PwaMap::double_tent();
        throw UsageError("--" + key + ": unknown builtin '" + name + "'");
    }
    try {
        Json j = unwrap(read_json_file(src));
        if (j.contains("map")) j = j.at("map");
        return pwa_from_json(j);
    } catch (const std::exception& e) {
        throw UsageError("--" + key + ": " + e.what());
    }
}

template <class F>
auto load_file(const Args& a, const std::string& key, F parse) {
    try {
        return parse(unwrap(read_json_file(a.str(key))));
    } catch (const UsageError&) {
        throw;
    } catch (const std::exception& e) {
        throw UsageError("--" + key + ": " + e.what());
    }
}

Interval interval_arg(const Args& a, const std::string& key, Interval dflt) {
    if (!a.values.count(key)) return dflt;
    const std::string& s = a.str(key);
    auto comma = s.find(',');
    if (comma == std::string::npos) throw UsageError("--" + key + ": expected 'lo,hi'");
    try {
        return Interval::open(parse_rational(s.substr(0, comma)), parse_rational(s.substr(comma + 1)));
    } catch (const ParseError& e) {
        throw UsageError("--" + key + ": " + e.what());
    }
}

// "i,j=b;i,j=b"
Cylinder cylinder_arg(const Args& a, const std::string& key) {
    std::vector<std::pair<Position, int>> entries;
    std::stringstream ss(a.str(key));
    std::string item;
    while (std::getline(ss, item, ';')) {
        if (item.empty()) continue;
        int i = 0, j = 0, b = 0;
        char c1 = 0, c2 = 0;
        std::stringstream is(item);
        if (!(is >> i >> c1 >> j >> c2 >> b) || c1 != ',' || c2 != '=')
            throw UsageError("--" + key + ": expected 'i,j=b;...', got '" + item + "'");
        entries.push_back({{i, j}, b});
    }
    try {
        return Cylinder::from(entries);
    } catch (const DomainError& e) {
        throw UsageError("--" + key + ": " + e.what());
    }
}

Json rationals(const std::vector<Rational>& v) {
    Json a = Json::array();
    for (const auto& x : v) a.push_back(to_json(x));
    return a;
}

Json intervals(const std::vector<Interval>& v) {
    Json a = Json::array();
    for (const auto& I : v) a.push_back(to_json(I));
    return a;
}

Json refusal_json(const Refusal& r) { return {{"condition", r.condition}, {"detail", r.detail}}; }

struct Outcome {
    Json result;
    int status = kOk;
};

using Handler = std::function<Outcome(const Args&)>;

Outcome map_eval(const Args& a) {
    PwaMap f = load_map(a, "map");
    Rational x = a.rational("x");
    return {{{"x", to_json(x)}, {"value", to_json(f.eval(x))}}};
}

Outcome map_iterate(const Args& a) {
    PwaMap f = load_map(a, "map");
    Rational x = a.rational("x");
    long n = a.integer("n");
    if (n < 0) throw UsageError("--n: must be >= 0");
    std::vector<Rational> orbit{x};
    for (long k = 0; k < n; ++k) orbit.push_back(f.eval(orbit.back()));
    return {{{"orbit", rationals(orbit)}}};
}

Outcome map_fixed_points(const Args& a) {
    PwaMap f = load_map(a, "map");
    int r = a.integer_or("r", 1);
    Json comps = Json::array();
    for (const auto& c : fixed_points_of_iterate(f, r))
        comps.push_back({{"set", to_json(c.set)}, {"kind", c.kind == FixedKind::point ? "point" : "segment"}});
    return {{{"r", r}, {"components", comps}}};
}

Outcome map_distance(const Args& a) {
    return {{{"sup_distance", to_json(sup_distance(load_map(a, "a"), load_map(a, "b")))}}};
}

void write_csv(const std::string& path, const std::string& body) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw UsageError("--csv: cannot write '" + path + "'");
        out << body;
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) throw UsageError("--csv: cannot rename onto '" + path + "'");
}

Outcome measure_birkhoff(const Args& a) {
    PwaMap f = load_map(a, "map");
    Rational x = a.rational("x");
    int n = static_cast<int>(a.integer("n"));
    int N = a.integer_or("N", 12);
    int step = a.integer_or("step", std::max(1, n / 20));
    if (n < 1 || N < 1 || step < 1) throw UsageError("--n, --N, --step: must be >= 1");
    AtomicMeasure mu = birkhoff_empirical(f, x, n);
    Json res = {{"empirical", to_json(mu)}};
    if (a.has("csv")) {
        AtomicMeasure ref = a.has("against") ? load_file(a, "against", measure_from_json) : mu;
        std::ostringstream csv;
        csv << "n,truncated_distance,tail_bound,truncated_distance_display_only\n";
        Json series = Json::array();
        for (int m = step; m <= n; m += step) {
            auto d = weakstar_distance(birkhoff_empirical(f, x, m), ref, N);
            csv << m << ',' << to_string(d.truncated_value) << ',' << to_string(d.tail_bound) << ','
                << d.truncated_value.get_d() << '\n';
            series.push_back({{"n", m}, {"truncated_distance", to_json(d.truncated_value)}});
        }
        write_csv(a.str("csv"), csv.str());
        res["series"] = series;
    }
    return {res};
}

Outcome measure_dist(const Args& a) {
    auto mu = load_file(a, "a", measure_from_json);
    auto nu = load_file(a, "b", measure_from_json);
    auto d = weakstar_distance(mu, nu, a.integer_or("N", 12));
    return {{{"truncated_value", to_json(d.truncated_value)}, {"tail_bound", to_json(d.tail_bound)}}};
}

Outcome perturb_shrinking(const Args& a) {
    PwaMap f = load_map(a, "map");
    auto cover = perturb_to_shrinking_cover(f, a.rational("epsilon"), a.integer("q"), a.integer("k"));
    auto v = verify_shrinking_cover(cover);
    Json certs = Json::array();
    for (const auto& c : cover.certificates) certs.push_back(to_json(c, v.ok()));
    Json res = {{"map", to_json(cover.map)},
                {"N", cover.N},
                {"delta", to_json(cover.delta)},
                {"sup_distance", to_json(sup_distance(cover.map, f))},
                {"deficiency", to_json(cover_deficiency(cover))},
                {"certificates", certs},
                {"verified", v.ok()}};
    if (!v) res["refusal"] = refusal_json(v.refusal());
    return {res, v ? kOk : kRefused};
}

Outcome perturb_fixed_cluster(const Args& a) {
    PwaMap f = load_map(a, "map");
    auto fc = perturb_to_fixed_cluster(f, a.integer("q"), a.rational("epsilon"));
    return {{{"map", to_json(fc.map)},
             {"x0", to_json(fc.x0)},
             {"delta", to_json(fc.delta)},
             {"central", to_json(fc.central)},
             {"fixed_points", rationals(fc.fixed_points)},
             {"plateaus", intervals(fc.plateaus)},
             {"eta", to_json(fc.eta)},
             {"sup_distance", to_json(sup_distance(fc.map, f))}}};
}

Outcome perturb_horseshoe(const Args& a) {
    PwaMap f = load_map(a, "map");
    auto hp = build_horseshoe_perturbation(f, a.rational("x0"), a.rational("epsilon"), a.integer_or("m", 2),
                                           a.integer("q"), a.integer_or("depth", 4));
    return {{{"map", to_json(hp.g)},
             {"J", to_json(hp.J)},
             {"nodes", rationals(hp.nodes)},
             {"horseshoe", to_json(hp.hs)},
             {"lambda", to_json(hp.cert.lambda)},
             {"max_lengths", rationals(hp.cert.max_lengths)},
             {"sup_distance", to_json(sup_distance(hp.g, f))}}};
}

Outcome perturb_qr_cover(const Args& a) {
    PwaMap f = load_map(a, "map");
    auto qc = construct_qr_covered(f, a.integer("q"), a.integer_or("r", 1), a.rational("epsilon"));
    auto check = verify_qr_covering(qc.g, qc.cover);
    Json plateaus = Json::array();
    for (const auto& p : qc.plateaus)
        plateaus.push_back({{"representative", to_json(p.representative)},
                            {"V", to_json(p.V)},
                            {"plateau", to_json(p.plateau)},
                            {"period", p.period},
                            {"step", p.step},
                            {"grid_index", p.grid_index},
                            {"pieces", p.pieces}});
    Json res = {{"map", to_json(qc.g)},
                {"steps", qc.steps},
                {"q_prime", qc.q_prime},
                {"covering", to_json(qc.cover)},
                {"plateaus", plateaus},
                {"sup_distance", to_json(qc.sup_distance)},
                {"verified", check.ok}};
    if (!check.ok) res["violation"] = check.detail;
    return {res, check.ok ? kOk : kRefused};
}

Horseshoe horseshoe_arg(const Args& a) {
    return load_file(a, "hs", [](const Json& j) { return horseshoe_from_json(j.contains("horseshoe") ? j.at("horseshoe") : j); });
}

Outcome horseshoe_verify(const Args& a) {
    PwaMap f = load_map(a, "map");
    auto v = verify_horseshoe(f, horseshoe_arg(a).intervals);
    Json res = {{"verified", v.ok()}};
    if (!v) res["refusal"] = refusal_json(v.refusal());
    return {res, v ? kOk : kRefused};
}

Outcome horseshoe_atoms(const Args& a) {
    PwaMap f = load_map(a, "map");
    auto v = verify_horseshoe(f, horseshoe_arg(a).intervals);
    if (!v) return {{{"verified", false}, {"refusal", refusal_json(v.refusal())}}, kRefused};
    int n = a.integer_or("n", 3);
    AtomTree tree = build_atoms(f, v.value(), n);
    auto check = verify_atom_tree(f, tree);
    Json weights = Json::array();
    for (int k = 1; k <= n; ++k) weights.push_back(to_json(bernoulli_weight(tree, Word(static_cast<std::size_t>(k), 1))));
    Json res = {{"atoms", to_json(tree)}, {"atom_weights", weights}, {"verified", check.ok()}};
    if (!check) res["refusal"] = refusal_json(check.refusal());
    return {res, check ? kOk : kRefused};
}

Outcome horseshoe_hyperbolic(const Args& a) {
    PwaMap f = load_map(a, "map");
    auto v = verify_horseshoe(f, horseshoe_arg(a).intervals);
    if (!v) return {{{"verified", false}, {"refusal", refusal_json(v.refusal())}}, kRefused};
    int n = a.integer_or("n", 4);
    AtomTree tree = build_atoms(f, v.value(), n);
    auto cert = verify_c0_hyperbolic(tree, a.rational("lambda"), n);
    if (!cert) return {{{"verified", false}, {"refusal", refusal_json(cert.refusal())}}, kRefused};
    return {{{"verified", true},
             {"lambda", to_json(cert.value().lambda)},
             {"max_lengths", rationals(cert.value().max_lengths)}}};
}

Outcome cascade_build(const Args& a) {
    Interval J = interval_arg(a, "J", Interval::open(rat(1, 8), rat(7, 8)));
    Interval I = interval_arg(a, "I", Interval::open(rat(1, 16), rat(15, 16)));
    Interval Ip = interval_arg(a, "Iprime", Interval::open(rat(1, 32), rat(31, 32)));
    auto ca = build_cascade_map(J, I, Ip, a.integer_or("depth", 3));
    return {to_json(ca)};
}

Json check_json(const CascadeCheck& c) {
    Json j = {{"verified", c.ok}};
    if (!c.ok)
        j["violation"] = {{"generation", c.generation}, {"matrix", c.matrix}, {"condition", c.condition}, {"detail", c.detail}};
    return j;
}

Outcome cascade_verify(const Args& a) {
    auto ca = load_file(a, "file", cascade_from_json);
    auto c = verify_cascade(ca);
    return {check_json(c), c.ok ? kOk : kRefused};
}

Outcome cascade_itinerary(const Args& a) {
    auto ca = load_file(a, "file", cascade_from_json);
    Rational x = a.rational("x");
    auto v = itinerary(ca, x, a.integer_or("n", ca.depth));
    if (!v) return {{{"x", to_json(x)}, {"refusal", refusal_json(v.refusal())}}, kRefused};
    return {{{"x", to_json(x)}, {"matrix", v.value().key()}}};
}

Outcome symbolic_entropy(const Args& a) {
    auto r = partition_entropy(static_cast<int>(a.integer("k")), static_cast<int>(a.integer("n")), a.has("oracle"));
    Json res = {{"coefficient", r.coefficient}, {"oracle_run", r.oracle_run}, {"oracle_confirmed", r.oracle_confirmed},
                {"pieces", r.pieces}};
    if (r.oracle_refusal) res["oracle_refusal"] = refusal_json(*r.oracle_refusal);
    return {res, r.oracle_run && !r.oracle_confirmed ? kRefused : kOk};
}

Outcome symbolic_mixing(const Args& a) {
    auto r = mixing_product_check(cylinder_arg(a, "ch"), cylinder_arg(a, "ck"), static_cast<int>(a.integer("n")));
    return {{{"product_holds", r.product_holds},
             {"conflict", r.conflict},
             {"intersection_measure", to_json(r.intersection_measure)},
             {"product_measure", to_json(r.product_measure)},
             {"n0", r.n0}}};
}

Outcome shadow(const Args& a) {
    PwaMap f = load_map(a, "map");
    auto po = load_file(a, "pseudo-orbit", pseudo_orbit_from_json);
    if (!verify_pseudo_orbit(f, po)) return {{{"refusal", {{"condition", "pseudo_orbit"}, {"detail", "a gap is not below delta"}}}}, kRefused};
    auto v = shadow_periodic(f, po, a.rational("epsilon"));
    if (!v) return {{{"refusal", refusal_json(v.refusal())}}, kRefused};
    return {{{"z", to_json(v.value().z)}, {"orbit", rationals(v.value().orbit)}, {"used_fallback", v.value().used_fallback}}};
}

Outcome basin(const Args& a) {
    PwaMap f = load_map(a, "map");
    auto mu = load_file(a, "measure", measure_from_json);
    auto b = basin_estimate(f, mu, a.rational("epsilon"), a.integer_or("grid", 64), a.integer_or("n", 200),
                            a.integer_or("N", 12));
    return {{{"hits", b.hits}, {"hit_fraction", to_json(b.hit_fraction)}, {"grid", b.grid_size}, {"horizon", b.horizon},
             {"truncation", b.truncation}}};
}

struct Leaf {
    CLI::App* app;
    std::string name;
    Handler run;
    std::map<std::string, std::string> store;
    std::map<std::string, bool> flag_store;
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact piecewise-affine interval map laboratory"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);

    std::vector<std::unique_ptr<Leaf>> leaves;
    auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& desc, Handler h,
                    std::vector<std::string> opts, std::vector<std::string> flags = {},
                    std::vector<std::string> required = {}) {
        auto l = std::make_unique<Leaf>();
        l->app = parent->add_subcommand(name, desc);
        l->name = (parent == &app ? "" : parent->get_name() + " ") + name;
        l->run = std::move(h);
        for (const auto& o : opts) {
            bool positional = o == "file";
            auto* opt = l->app->add_option(positional ? o : "--" + o, l->store[o]);
            if (std::find(required.begin(), required.end(), o) != required.end()) opt->required();
        }
        for (const auto& fl : flags) l->app->add_flag("--" + fl, l->flag_store[fl]);
        l->app->add_option("--out", l->store["out"], "report path (stdout when absent)");
        leaves.push_back(std::move(l));
    };

    auto* map = app.add_subcommand("map", "evaluate and inspect maps");
    map->require_subcommand(1);
    leaf(map, "eval", "f(x)", map_eval, {"map", "x"}, {}, {"map", "x"});
    leaf(map, "iterate", "orbit x, f(x), ..., f^n(x)", map_iterate, {"map", "x", "n"}, {}, {"map", "x", "n"});
    leaf(map, "fixed-points", "fixed set of f^r", map_fixed_points, {"map", "r"}, {}, {"map"});
    leaf(map, "distance", "sup distance", map_distance, {"a", "b"}, {}, {"a", "b"});

    auto* measure = app.add_subcommand("measure", "empirical measures and weak* distances");
    measure->require_subcommand(1);
    leaf(measure, "birkhoff", "empirical measure along an orbit", measure_birkhoff,
         {"map", "x", "n", "N", "step", "csv", "against"}, {}, {"map", "x", "n"});
    leaf(measure, "dist", "truncated weak* distance", measure_dist, {"a", "b", "N"}, {}, {"a", "b"});

    auto* perturb = app.add_subcommand("perturb", "certified perturbations");
    perturb->require_subcommand(1);
    leaf(perturb, "shrinking", "shrinking-interval cover", perturb_shrinking, {"map", "epsilon", "q", "k"}, {},
         {"map", "epsilon", "q", "k"});
    leaf(perturb, "fixed-cluster", "q extra plateau fixed points", perturb_fixed_cluster, {"map", "q", "epsilon"}, {},
         {"map", "q", "epsilon"});
    leaf(perturb, "horseshoe", "C0-hyperbolic m-horseshoe near a fixed point", perturb_horseshoe,
         {"map", "x0", "epsilon", "m", "q", "depth"}, {}, {"map", "x0", "epsilon", "q"});
    leaf(perturb, "qr-cover", "good q,r-covered map", perturb_qr_cover, {"map", "q", "r", "epsilon"}, {},
         {"map", "q", "epsilon"});

    auto* hs = app.add_subcommand("horseshoe", "horseshoes and their atoms");
    hs->require_subcommand(1);
    leaf(hs, "verify", "check the horseshoe conditions", horseshoe_verify, {"map", "hs"}, {}, {"map", "hs"});
    leaf(hs, "atoms", "atoms up to generation n", horseshoe_atoms, {"map", "hs", "n"}, {}, {"map", "hs"});
    leaf(hs, "hyperbolic", "atom lengths below lambda^n", horseshoe_hyperbolic, {"map", "hs", "lambda", "n"}, {},
         {"map", "hs", "lambda"});

    auto* cascade = app.add_subcommand("cascade", "atom doubling cascade");
    cascade->require_subcommand(1);
    leaf(cascade, "build", "build f_1..f_N and their atoms", cascade_build, {"depth", "J", "I", "Iprime"});
    leaf(cascade, "verify", "recheck a cascade file", cascade_verify, {"file"}, {}, {"file"});
    leaf(cascade, "itinerary", "matrix of the atoms holding x", cascade_itinerary, {"file", "x", "n"}, {},
         {"file", "x"});

    auto* symbolic = app.add_subcommand("symbolic", "symbolic model of the cascade");
    symbolic->require_subcommand(1);
    leaf(symbolic, "entropy", "entropy of the refined partition", symbolic_entropy, {"k", "n"}, {"oracle"},
         {"k", "n"});
    leaf(symbolic, "mixing", "cylinder product check", symbolic_mixing, {"ch", "ck", "n"}, {}, {"ch", "ck", "n"});

    leaf(&app, "shadow", "periodic shadow of a periodic pseudo-orbit", shadow, {"map", "pseudo-orbit", "epsilon"}, {},
         {"map", "pseudo-orbit", "epsilon"});
    leaf(&app, "basin", "grid estimate of an epsilon-basin", basin, {"map", "measure", "epsilon", "grid", "n", "N"}, {},
         {"map", "measure", "epsilon"});

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    Leaf* chosen = nullptr;
    for (auto& l : leaves)
        if (l->app->parsed()) chosen = l.get();
    if (!chosen) {
        std::cerr << "lab: no command given\n";
        return kUsage;
    }

    Args args;
    Json config = Json::object();
    for (auto* opt : chosen->app->get_options()) {
        if (opt->count() == 0) continue;
        std::string key = opt->get_single_name();
        if (key == "help" || key == "out") continue;
        if (chosen->flag_store.count(key)) {
            args.flags.insert(key);
            config[key] = true;
        } else {
            args.values[key] = chosen->store[key];
            config[key] = chosen->store[key];
        }
    }

    Outcome outcome;
    try {
        outcome = chosen->run(args);
    } catch (const UsageError& e) {
        std::cerr << "lab " << chosen->name << ": " << e.what() << '\n';
        return kUsage;
    } catch (const ResourceError& e) {
        std::cerr << "lab " << chosen->name << ": resource limit: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "lab " << chosen->name << ": " << e.what() << '\n';
        return kUsage;
    }

    Json report = {{"tool", "lab"},
                   {"version", kToolVersion},
                   {"command", chosen->name},
                   {"config", config},
                   {"result", outcome.result}};
    const std::string& out = chosen->store["out"];
    try {
        if (out.empty())
            std::cout << report.dump(2) << '\n';
        else
            write_json_file(out, report);
    } catch (const std::exception& e) {
        std::cerr << "lab " << chosen->name << ": --out: " << e.what() << '\n';
        return kUsage;
    }
    return outcome.status;
}
