#include "quadlin/report.hpp"

#include <cmath>
#include <cstdio>

#include "quadlin/errors.hpp"

namespace quadlin {

ReportFormat parse_format(std::string_view name) {
    if (name == "json") return ReportFormat::json;
    if (name == "csv") return ReportFormat::csv;
    throw UnsupportedFormat("unsupported report format '" + std::string(name) + "'");
}

std::string format_number(double v) {
    if (!std::isfinite(v)) return "null";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

void write(const nlohmann::ordered_json& v, std::string& out) {
    using nlohmann::ordered_json;
    switch (v.type()) {
        case ordered_json::value_t::object: {
            out += '{';
            bool first = true;
            for (auto it = v.begin(); it != v.end(); ++it) {
                if (!first) out += ',';
                first = false;
                out += ordered_json(it.key()).dump();
                out += ':';
                write(it.value(), out);
            }
            out += '}';
            break;
        }
        case ordered_json::value_t::array: {
            out += '[';
            bool first = true;
            for (const auto& item : v) {
                if (!first) out += ',';
                first = false;
                write(item, out);
            }
            out += ']';
            break;
        }
        case ordered_json::value_t::number_float:
            out += format_number(v.get<double>());
            break;
        default:
            out += v.dump();
    }
}

}  // namespace

std::string to_json_bytes(const nlohmann::ordered_json& value) {
    std::string out;
    write(value, out);
    out += '\n';
    return out;
}

}  // namespace quadlin
