#include "lab/json_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace lab {

namespace {

const Json& field(const Json& j, const std::string& name) {
    if (!j.is_object() || !j.contains(name)) throw ParseError("missing field '" + name + "'");
    return j.at(name);
}

std::vector<Rational> rationals_from_json(const Json& j, const std::string& name) {
    if (!j.is_array()) throw ParseError("field '" + name + "' must be an array");
    std::vector<Rational> out;
    for (const auto& e : j) out.push_back(rational_from_json(e, name));
    return out;
}

Json intervals_to_json(const std::vector<Interval>& v) {
    Json a = Json::array();
    for (const auto& I : v) a.push_back(to_json(I));
    return a;
}

std::vector<Interval> intervals_from_json(const Json& j, const std::string& name) {
    if (!j.is_array()) throw ParseError("field '" + name + "' must be an array");
    std::vector<Interval> out;
    for (const auto& e : j) out.push_back(interval_from_json(e));
    return out;
}

}  // namespace

Json to_json(const Rational& q) { return to_string(q); }

Rational rational_from_json(const Json& j, const std::string& name) {
    if (j.is_string()) {
        try {
            return parse_rational(j.get<std::string>());
        } catch (const ParseError& e) {
            throw ParseError("field '" + name + "': " + e.what());
        }
    }
    if (j.is_number_integer()) return Rational(j.get<long>());
    throw ParseError("field '" + name + "' must be a \"num/den\" string");
}

Json to_json(const PwaMap& f) {
    Json b = Json::array(), v = Json::array();
    for (const auto& x : f.breakpoints()) b.push_back(to_json(x));
    for (const auto& y : f.values()) v.push_back(to_json(y));
    return {{"breakpoints", b}, {"values", v}};
}

PwaMap pwa_from_json(const Json& j) {
    return PwaMap(rationals_from_json(field(j, "breakpoints"), "breakpoints"),
                  rationals_from_json(field(j, "values"), "values"));
}

Json to_json(const AtomicMeasure& mu) {
    Json a = Json::array();
    for (const auto& at : mu.atoms()) a.push_back(Json::array({to_json(at.point), to_json(at.weight)}));
    return {{"atoms", a}};
}

AtomicMeasure measure_from_json(const Json& j) {
    const Json& a = field(j, "atoms");
    if (!a.is_array()) throw ParseError("field 'atoms' must be an array");
    std::vector<AtomicMeasure::Atom> atoms;
    for (const auto& e : a) {
        if (!e.is_array() || e.size() != 2) throw ParseError("field 'atoms': each atom is [point, weight]");
        atoms.push_back({rational_from_json(e[0], "atoms"), rational_from_json(e[1], "atoms")});
    }
    return AtomicMeasure(std::move(atoms));
}

Json to_json(const Interval& I) {
    return {{"lo", to_json(I.lo)}, {"hi", to_json(I.hi)}, {"closed_lo", I.closed_lo}, {"closed_hi", I.closed_hi}};
}

Interval interval_from_json(const Json& j) {
    Interval I{rational_from_json(field(j, "lo"), "lo"), rational_from_json(field(j, "hi"), "hi"), true, true};
    if (j.contains("closed_lo")) I.closed_lo = j.at("closed_lo").get<bool>();
    if (j.contains("closed_hi")) I.closed_hi = j.at("closed_hi").get<bool>();
    require_in_unit(I, "interval");
    return I;
}

Json to_json(const ShrinkingCertificate& c, bool verified) {
    Json j = {{"interval", to_json(c.interval)},
              {"period", c.period},
              {"images", intervals_to_json(c.images)},
              {"return_image", to_json(c.return_image)},
              {"preperiod", c.preperiod},
              {"verified", verified}};
    if (c.entry) {
        j["entry"] = to_json(*c.entry);
        j["entry_images"] = intervals_to_json(c.entry_images);
    }
    return j;
}

ShrinkingCertificate certificate_from_json(const Json& j) {
    ShrinkingCertificate c;
    c.interval = interval_from_json(field(j, "interval"));
    c.period = field(j, "period").get<int>();
    c.images = intervals_from_json(field(j, "images"), "images");
    c.return_image = interval_from_json(field(j, "return_image"));
    if (j.contains("preperiod")) c.preperiod = j.at("preperiod").get<int>();
    if (j.contains("entry")) {
        c.entry = interval_from_json(j.at("entry"));
        c.entry_images = intervals_from_json(field(j, "entry_images"), "entry_images");
    }
    return c;
}

Json to_json(const Horseshoe& hs) { return {{"m", hs.m}, {"intervals", intervals_to_json(hs.intervals)}}; }

Horseshoe horseshoe_from_json(const Json& j) {
    Horseshoe hs;
    hs.intervals = intervals_from_json(field(j, "intervals"), "intervals");
    hs.m = static_cast<int>(hs.intervals.size());
    return hs;
}

Json to_json(const AtomTree& tree) {
    Json gens = Json::array();
    for (int n = 1; n <= tree.depth(); ++n) {
        Json g = Json::object();
        const auto& atoms = tree.generations[static_cast<std::size_t>(n - 1)];
        for (std::size_t k = 0; k < atoms.size(); ++k) g[word_key(index_word(k, n, tree.m))] = to_json(atoms[k]);
        gens.push_back(g);
    }
    return {{"m", tree.m}, {"generations", gens}};
}

Json to_json(const CascadeAtoms& ca) {
    Json maps = Json::array(), gens = Json::array(), bounds = Json::array();
    for (const auto& f : ca.maps) maps.push_back(to_json(f));
    for (int n = 1; n <= ca.depth; ++n) {
        Json g = Json::object();
        const auto& atoms = ca.atoms[static_cast<std::size_t>(n - 1)];
        for (std::size_t k = 0; k < atoms.size(); ++k) g[TriMatrix::from_code(n, k).key()] = to_json(atoms[k]);
        gens.push_back(g);
    }
    for (const auto& b : ca.stage_bounds) bounds.push_back(to_json(b));
    return {{"J", to_json(ca.J)},         {"I", to_json(ca.I)},     {"Iprime", to_json(ca.Iprime)},
            {"depth", ca.depth},          {"maps", maps},           {"atoms", gens},
            {"stage_bounds", bounds}};
}

CascadeAtoms cascade_from_json(const Json& j) {
    CascadeAtoms ca;
    ca.J = interval_from_json(field(j, "J"));
    ca.I = interval_from_json(field(j, "I"));
    ca.Iprime = interval_from_json(field(j, "Iprime"));
    ca.depth = field(j, "depth").get<int>();
    if (ca.depth < 1 || ca.depth > kMaxCascadeDepth) throw ParseError("field 'depth' out of range");
    for (const auto& m : field(j, "maps")) ca.maps.push_back(pwa_from_json(m));
    if (static_cast<int>(ca.maps.size()) != ca.depth) throw ParseError("field 'maps' must hold depth maps");
    const Json& gens = field(j, "atoms");
    if (!gens.is_array() || static_cast<int>(gens.size()) != ca.depth)
        throw ParseError("field 'atoms' must hold depth generations");
    for (int n = 1; n <= ca.depth; ++n) {
        std::vector<Interval> atoms(std::size_t{1} << TriMatrix::entries(n));
        std::vector<bool> seen(atoms.size(), false);
        for (const auto& [key, val] : gens[static_cast<std::size_t>(n - 1)].items()) {
            TriMatrix t = TriMatrix::parse(key);
            if (t.rows() != n) throw ParseError("field 'atoms': matrix " + key + " in generation " + std::to_string(n));
            atoms[t.code()] = interval_from_json(val);
            seen[t.code()] = true;
        }
        for (bool s : seen)
            if (!s) throw ParseError("field 'atoms': generation " + std::to_string(n) + " incomplete");
        ca.atoms.push_back(std::move(atoms));
    }
    ca.stage_bounds = rationals_from_json(field(j, "stage_bounds"), "stage_bounds");
    return ca;
}

Json to_json(const QRCovering& cov) {
    Json certs = Json::array();
    for (const auto& c : cov.certificates) certs.push_back(to_json(c, true));
    return {{"q", cov.q}, {"r", cov.r}, {"intervals", intervals_to_json(cov.intervals)}, {"certificates", certs}};
}

PseudoOrbit pseudo_orbit_from_json(const Json& j) {
    PseudoOrbit po;
    po.points = rationals_from_json(field(j, "points"), "points");
    po.delta = rational_from_json(field(j, "delta"), "delta");
    if (j.contains("periodic")) po.periodic = j.at("periodic").get<bool>();
    if (po.periodic) po.period = static_cast<int>(po.points.size());
    return po;
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ParseError("'" + path + "' is not valid JSON: " + e.what());
    }
}

void write_json_file(const std::string& path, const Json& j) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ParseError("cannot write '" + path + "'");
        out << j.dump(2) << '\n';
        if (!out) throw ParseError("write to '" + path + "' failed");
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) throw ParseError("cannot rename onto '" + path + "'");
}

}  // namespace lab
