#include "imspe/format.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

namespace imspe {

std::string fmt17(double v) {
    if (!std::isfinite(v)) return "singular";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

namespace {

void write(std::ostringstream& os, const nlohmann::ordered_json& j, int indent) {
    const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
    const std::string close(static_cast<std::size_t>(indent), ' ');
    switch (j.type()) {
        case nlohmann::json::value_t::object: {
            if (j.empty()) {
                os << "{}";
                return;
            }
            os << "{\n";
            bool first = true;
            for (const auto& [key, value] : j.items()) {
                if (!first) os << ",\n";
                first = false;
                os << pad << nlohmann::ordered_json(key).dump() << ": ";
                write(os, value, indent + 2);
            }
            os << '\n' << close << '}';
            return;
        }
        case nlohmann::json::value_t::array: {
            if (j.empty()) {
                os << "[]";
                return;
            }
            // flat numeric arrays stay on one line
            const bool flat = std::all_of(j.begin(), j.end(), [](const auto& e) { return e.is_primitive(); });
            os << '[';
            bool first = true;
            for (const auto& e : j) {
                if (!first) os << (flat ? ", " : ",");
                first = false;
                if (!flat) os << '\n' << pad;
                write(os, e, indent + 2);
            }
            if (!flat) os << '\n' << close;
            os << ']';
            return;
        }
        case nlohmann::json::value_t::number_float: {
            const double v = j.get<double>();
            if (std::isfinite(v))
                os << fmt17(v);
            else
                os << "\"singular\"";
            return;
        }
        default:
            os << j.dump();
    }
}

}  // namespace

std::string dump_json(const nlohmann::ordered_json& j) {
    std::ostringstream os;
    write(os, j, 0);
    os << '\n';
    return os.str();
}

std::string scan_csv(const ScanTable& t) {
    std::string out = "# imspe-kit scan v1\n";
    for (const auto& c : t.columns) out += c + ",";
    out += "imspe\n";
    for (const auto& row : t.rows) {
        for (double c : row.coords) out += fmt17(c) + ",";
        out += row.value ? fmt17(*row.value) : std::string("singular");
        out += '\n';
    }
    return out;
}

}  // namespace imspe
