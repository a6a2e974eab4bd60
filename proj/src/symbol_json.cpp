#include "pairedk/symbol_json.hpp"

#include <charconv>
#include <map>

#include "pairedk/error.hpp"

namespace pairedk {

using nlohmann::json;

namespace {

cplx scalar_from_json(const json& j, const char* what) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw Error(ErrorCode::MalformedSymbol, std::string(what) + " must be [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
}

json scalar_to_json(cplx c) { return json::array({c.real(), c.imag()}); }

std::vector<Root> roots_from_json(const json& j, const char* what) {
    std::vector<Root> out;
    if (j.is_null()) return out;
    if (!j.is_array()) throw Error(ErrorCode::MalformedSymbol, std::string(what) + " must be a list");
    for (const auto& e : j) {
        if (!e.is_object() || !e.contains("z")) throw Error(ErrorCode::MalformedSymbol, std::string(what) + " entries need \"z\"");
        Root r;
        r.value = scalar_from_json(e["z"], "root");
        r.multiplicity = e.value("m", 1);
        if (r.multiplicity <= 0) throw Error(ErrorCode::MalformedSymbol, "multiplicity must be positive");
        r.loc = e.contains("loc") ? location_from_string(e["loc"].get<std::string>()) : classify(r.value);
        out.push_back(r);
    }
    return out;
}

json roots_to_json(const std::vector<Root>& roots) {
    json out = json::array();
    for (const auto& r : roots)
        out.push_back({{"z", scalar_to_json(r.value)}, {"m", r.multiplicity}, {"loc", std::string(to_string(r.loc))}});
    return out;
}

}  // namespace

Rational symbol_from_json(const json& j) {
    if (j.is_string()) {
        try {
            return symbol_from_json(json::parse(j.get<std::string>()));
        } catch (const json::parse_error& e) {
            throw Error(ErrorCode::MalformedSymbol, e.what());
        }
    }
    if (!j.is_object()) throw Error(ErrorCode::MalformedSymbol, "symbol must be a JSON object");
    try {
        if (j.contains("coeffs")) {
            const json& c = j["coeffs"];
            if (!c.is_object()) throw Error(ErrorCode::MalformedSymbol, "\"coeffs\" must be an object");
            std::map<int, cplx> m;
            for (const auto& [key, value] : c.items()) {
                int k = 0;
                const char* first = key.data();
                if (!key.empty() && key[0] == '+') ++first;
                const auto [ptr, ec] = std::from_chars(first, key.data() + key.size(), k);
                if (ec != std::errc{} || ptr != key.data() + key.size())
                    throw Error(ErrorCode::MalformedSymbol, "bad exponent \"" + key + "\"");
                m[k] += scalar_from_json(value, "coefficient");
            }
            return Rational(LaurentPoly(std::move(m)));
        }
        if (j.contains("gain") || j.contains("zeros") || j.contains("poles") || j.contains("zpow")) {
            Zpk z;
            z.gain = j.contains("gain") ? scalar_from_json(j["gain"], "gain") : cplx{1.0};
            z.zpow = j.value("zpow", 0);
            z.zeros = roots_from_json(j.value("zeros", json()), "zeros");
            z.poles = roots_from_json(j.value("poles", json()), "poles");
            return Rational::from_zpk(z);
        }
    } catch (const json::exception& e) {
        throw Error(ErrorCode::MalformedSymbol, e.what());
    }
    throw Error(ErrorCode::MalformedSymbol, "expected \"coeffs\" or zero-pole-gain keys");
}

json symbol_to_json(const Rational& f) {
    if (f.is_laurent()) {
        json c = json::object();
        for (const auto& [k, v] : f.num().coeffs()) c[std::to_string(k)] = scalar_to_json(v);
        return {{"coeffs", c}};
    }
    const Zpk z = f.zpk();
    return {{"gain", scalar_to_json(z.gain)}, {"zpow", z.zpow}, {"zeros", roots_to_json(z.zeros)}, {"poles", roots_to_json(z.poles)}};
}

}  // namespace pairedk
