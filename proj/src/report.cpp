#include "scalrig/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace scalrig {

namespace {

std::string number(double v)
{
    if (!std::isfinite(v)) return "null";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    std::string s = buf;
    // keep floats recognisable as floats
    if (s.find_first_of(".eE") == std::string::npos) s += ".0";
    return s;
}

void emit(const Json& j, std::ostringstream& os, int indent, int depth)
{
    const std::string pad = indent > 0 ? "\n" + std::string(static_cast<std::size_t>(indent * (depth + 1)), ' ') : "";
    const std::string close = indent > 0 ? "\n" + std::string(static_cast<std::size_t>(indent * depth), ' ') : "";
    const char* colon = indent > 0 ? ": " : ":";
    switch (j.type()) {
    case Json::value_t::object: {
        if (j.empty()) {
            os << "{}";
            return;
        }
        os << '{';
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) {
            os << (first ? "" : ",") << pad << Json(it.key()).dump() << colon;
            emit(it.value(), os, indent, depth + 1);
            first = false;
        }
        os << close << '}';
        return;
    }
    case Json::value_t::array: {
        if (j.empty()) {
            os << "[]";
            return;
        }
        os << '[';
        bool first = true;
        for (const auto& v : j) {
            os << (first ? "" : ",") << pad;
            emit(v, os, indent, depth + 1);
            first = false;
        }
        os << close << ']';
        return;
    }
    case Json::value_t::number_float: os << number(j.get<double>()); return;
    default: os << j.dump(); return;
    }
}

}  // namespace

std::string dump_json(const Json& value, int indent)
{
    std::ostringstream os;
    emit(value, os, indent, 0);
    return os.str();
}

Json make_report(const std::string& command, Json inputs, Json results, Json residuals)
{
    Json r;
    r["command"] = command;
    r["inputs"] = std::move(inputs);
    r["results"] = std::move(results);
    r["residuals"] = std::move(residuals);
    r["version"] = kVersion;
    return r;
}

std::string csv_number(double v)
{
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace scalrig
