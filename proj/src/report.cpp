#include "quartic/report.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "quartic/errors.hpp"

namespace quartic {
namespace {

using json = nlohmann::ordered_json;

json number(double v) {
    if (!std::isfinite(v)) return nullptr;
    if (v == std::round(v) && std::abs(v) < 1e15) return static_cast<long long>(v);
    return v;
}

double read_number(const json& j) {
    if (j.is_null()) return std::numeric_limits<double>::infinity();
    return j.get<double>();
}

json named(const NamedValues& values) {
    json obj = json::object();
    for (const auto& [k, v] : values) obj[k] = number(v);
    return obj;
}

NamedValues read_named(const json& obj) {
    NamedValues out;
    for (const auto& [k, v] : obj.items()) out.emplace_back(k, read_number(v));
    return out;
}

}  // namespace

std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string report_to_json(const VerificationReport& report, int indent) {
    json doc;
    doc["identity_id"] = to_string(report.identity);
    doc["params"] = named(report.params);
    doc["j"] = report.j ? json(*report.j) : json(nullptr);
    doc["tolerance"] = report.tolerance;
    json samples = json::array();
    for (const auto& s : report.samples) {
        json row;
        row["label"] = s.label;
        row["point"] = named(s.point);
        row["lhs"] = s.lhs;
        row["rhs"] = s.rhs;
        row["rel_residual"] = std::isfinite(s.rel_residual) ? json(s.rel_residual) : json(nullptr);
        if (s.error) row["error"] = *s.error;
        samples.push_back(std::move(row));
    }
    doc["samples"] = std::move(samples);
    doc["max_rel_residual"] = std::isfinite(report.max_rel_residual) ? json(report.max_rel_residual) : json(nullptr);
    doc["passed"] = report.passed;
    return doc.dump(indent) + "\n";
}

VerificationReport report_from_json(const std::string& text) {
    try {
        const json doc = json::parse(text);
        VerificationReport r;
        r.identity = identity_from_string(doc.at("identity_id").get<std::string>());
        r.params = read_named(doc.at("params"));
        if (!doc.at("j").is_null()) r.j = doc.at("j").get<int>();
        r.tolerance = doc.at("tolerance").get<double>();
        for (const auto& row : doc.at("samples")) {
            Sample s;
            s.label = row.at("label").get<std::string>();
            s.point = read_named(row.at("point"));
            s.lhs = row.at("lhs").get<double>();
            s.rhs = row.at("rhs").get<double>();
            s.rel_residual = read_number(row.at("rel_residual"));
            if (row.contains("error")) s.error = row.at("error").get<std::string>();
            r.samples.push_back(std::move(s));
        }
        r.max_rel_residual = read_number(doc.at("max_rel_residual"));
        r.passed = doc.at("passed").get<bool>();
        return r;
    } catch (const json::exception& e) {
        throw DomainError(std::string("report: malformed JSON: ") + e.what());
    }
}

std::string summary_csv(const std::vector<VerificationReport>& reports) {
    std::ostringstream out;
    out << "identity_id,params,j,tolerance,max_rel_residual,passed\n";
    for (const auto& r : reports) {
        out << to_string(r.identity) << ',';
        for (std::size_t i = 0; i < r.params.size(); ++i) {
            if (i) out << ';';
            out << r.params[i].first << '=' << format_number(r.params[i].second);
        }
        out << ',' << (r.j ? std::to_string(*r.j) : std::string()) << ',' << format_number(r.tolerance) << ','
            << format_number(r.max_rel_residual) << ',' << (r.passed ? "true" : "false") << '\n';
    }
    return out.str();
}

}  // namespace quartic
