#include "quadlin/equation.hpp"

#include <cmath>
#include <random>

#include <json.hpp>

namespace quadlin {

QuadEquation::QuadEquation(Expression rhs, Interval box) : rhs_(std::move(rhs)), box_(box) {
    if (rhs_.uses(Site::u11)) throw InputError("right-hand side must not reference u11");
    if (!rhs_.uses_any_site()) throw InputError("right-hand side references no site variable");
    if (!(std::isfinite(box_.lo) && std::isfinite(box_.hi) && box_.lo < box_.hi))
        throw InputError("sample box needs finite lo < hi");

    constexpr int kProbe = 200;
    std::mt19937_64 rng(0x5eedu);
    std::uniform_real_distribution<double> dist(box_.lo, box_.hi);
    int ok = 0;
    for (int i = 0; i < kProbe; ++i) {
        const std::array<double, 3> pt{dist(rng), dist(rng), dist(rng)};
        try {
            evaluate(rhs_, pt);
            ++ok;
        } catch (const DomainError&) {
        }
    }
    if (ok * 10 < kProbe * 9)
        throw InputError("right-hand side is evaluable on only " + std::to_string(ok) + " of " +
                         std::to_string(kProbe) + " sample points in the box");
}

QuadEquation QuadEquation::parse(std::string_view text, const ParamMap& params, Interval box) {
    return QuadEquation(quadlin::parse(text, params), box);
}

QuadEquation QuadEquation::from_json_text(std::string_view json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError(std::string("equation file is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw InputError("equation file must hold a JSON object");
    for (const auto& [key, _] : doc.items())
        if (key != "rhs" && key != "params" && key != "sample_box")
            throw InputError("unknown key '" + key + "' in equation file");
    if (!doc.contains("rhs") || !doc["rhs"].is_string())
        throw InputError("equation file needs a string \"rhs\"");

    ParamMap params;
    if (doc.contains("params")) {
        if (!doc["params"].is_object()) throw InputError("\"params\" must be an object");
        for (const auto& [name, value] : doc["params"].items()) {
            if (value.is_number())
                params[name] = value.get<double>();
            else if (value.is_null())
                params[name] = std::nan("");
            else
                throw InputError("parameter '" + name + "' must be a number");
        }
    }
    Interval box = kDefaultBox;
    if (doc.contains("sample_box")) {
        const auto& b = doc["sample_box"];
        if (!b.is_array() || b.size() != 2 || !b[0].is_number() || !b[1].is_number())
            throw InputError("\"sample_box\" must be [lo, hi]");
        box = {b[0].get<double>(), b[1].get<double>()};
    }
    return QuadEquation(quadlin::parse(doc["rhs"].get<std::string>(), params), box);
}

}  // namespace quadlin
