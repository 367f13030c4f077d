#include "subgap/poly_io.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace subgap::poly {

using nlohmann::json;

namespace {

Complex parse_complex_pair(const json& j, const char* what) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw InputError(std::string(what) + ": expected [re, im] pair");
    const double re = j[0].get<double>(), im = j[1].get<double>();
    if (!std::isfinite(re) || !std::isfinite(im))
        throw InputError(std::string(what) + ": non-finite coefficient");
    return {re, im};
}

json complex_pair(Complex c) { return json::array({c.real(), c.imag()}); }

json parse_text(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw InputError("malformed JSON input");
    return j;
}

} // namespace

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write file: " + path);
    out << content;
}

PolyMap parse_map_json(const std::string& text) {
    const json j = parse_text(text);
    if (!j.is_object() || !j.contains("n") || !j.contains("components"))
        throw InputError("map JSON: expected object with \"n\" and \"components\"");
    const int n = j.at("n").get<int>();
    if (n <= 0) throw InputError("map JSON: n must be positive");
    std::optional<int> d;
    if (j.contains("homogeneous_degree") && !j.at("homogeneous_degree").is_null())
        d = j.at("homogeneous_degree").get<int>();
    const json& comps = j.at("components");
    if (!comps.is_array() || static_cast<int>(comps.size()) != n)
        throw InputError("map JSON: expected n components");
    std::vector<MultiPoly> polys;
    polys.reserve(comps.size());
    for (const json& comp : comps) {
        if (!comp.is_array()) throw InputError("map JSON: component must be a term array");
        MultiPoly p(n);
        for (const json& term : comp) {
            if (!term.is_object() || !term.contains("exp") || !term.contains("coef"))
                throw InputError("map JSON: term must have \"exp\" and \"coef\"");
            const json& je = term.at("exp");
            if (!je.is_array() || static_cast<int>(je.size()) != n)
                throw InputError("map JSON: exponent length must equal n");
            Exponents e(static_cast<size_t>(n));
            for (int i = 0; i < n; ++i) {
                const int k = je[static_cast<size_t>(i)].get<int>();
                if (k < 0) throw InputError("map JSON: exponents must be nonnegative");
                e[static_cast<size_t>(i)] = k;
            }
            p.add_term(e, parse_complex_pair(term.at("coef"), "map JSON coef"));
        }
        polys.push_back(std::move(p));
    }
    return PolyMap::make(std::move(polys), d);
}

PolyMap load_map(const std::string& path) { return parse_map_json(read_file(path)); }

std::string map_to_json(const PolyMap& map) {
    json comps = json::array();
    for (const auto& p : map.components) {
        json terms = json::array();
        for (const auto& [e, c] : p.terms()) {
            json t;
            t["exp"] = e;
            t["coef"] = complex_pair(c);
            terms.push_back(std::move(t));
        }
        comps.push_back(std::move(terms));
    }
    json j;
    j["n"] = map.n;
    if (map.homogeneous_degree)
        j["homogeneous_degree"] = *map.homogeneous_degree;
    else
        j["homogeneous_degree"] = nullptr;
    j["components"] = std::move(comps);
    return j.dump(2) + "\n";
}

void save_map(const PolyMap& map, const std::string& path) { write_file(path, map_to_json(map)); }

std::vector<Complex> parse_coeff_list(const std::string& text) {
    const json j = parse_text(text);
    if (!j.is_array() || j.empty()) throw InputError("polynomial JSON: expected nonempty array");
    std::vector<Complex> out;
    out.reserve(j.size());
    for (const json& p : j) out.push_back(parse_complex_pair(p, "polynomial coefficient"));
    return out;
}

std::vector<Complex> load_coeff_list(const std::string& path) {
    return parse_coeff_list(read_file(path));
}

std::vector<WitnessDisc> parse_witness_discs(const std::string& text, int expected_dim, int K) {
    const json j = parse_text(text);
    if (!j.is_array()) throw InputError("witness discs JSON: expected array");
    std::vector<WitnessDisc> out;
    out.reserve(j.size());
    for (const json& item : j) {
        if (!item.is_object() || !item.contains("point") || !item.contains("jet"))
            throw InputError("witness disc: expected {point, jet}");
        const json& jp = item.at("point");
        if (!jp.is_array() || static_cast<int>(jp.size()) != expected_dim)
            throw InputError("witness disc: point dimension mismatch");
        WitnessDisc w;
        w.point.resize(expected_dim);
        for (int i = 0; i < expected_dim; ++i)
            w.point(i) = parse_complex_pair(jp[static_cast<size_t>(i)], "witness point");
        const json& jj = item.at("jet");
        if (!jj.is_array() || static_cast<int>(jj.size()) != expected_dim)
            throw InputError("witness disc: jet must have one coefficient list per component");
        for (const json& comp : jj) {
            if (!comp.is_array()) throw InputError("witness disc: jet component must be an array");
            JetSeries s(K);
            int k = 0;
            for (const json& c : comp) {
                if (k > K) break;
                s[k++] = parse_complex_pair(c, "witness jet coefficient");
            }
            w.jet.push_back(std::move(s));
        }
        out.push_back(std::move(w));
    }
    return out;
}

std::vector<WitnessDisc> load_witness_discs(const std::string& path, int expected_dim, int K) {
    return parse_witness_discs(read_file(path), expected_dim, K);
}

} // namespace subgap::poly
