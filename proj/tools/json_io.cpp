#include "json_io.hpp"

#include "cstar/errors.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdint>
#include <cstdio>

namespace cstar::cli {

namespace {

void dump_value(std::string& out, const ordered_json& v) {
    switch (v.type()) {
    case nlohmann::detail::value_t::object: {
        out += '{';
        bool first = true;
        for (const auto& [key, val] : v.items()) {
            if (!first) out += ',';
            first = false;
            out += nlohmann::json(key).dump();
            out += ':';
            dump_value(out, val);
        }
        out += '}';
        break;
    }
    case nlohmann::detail::value_t::array: {
        out += '[';
        bool first = true;
        for (const auto& val : v) {
            if (!first) out += ',';
            first = false;
            dump_value(out, val);
        }
        out += ']';
        break;
    }
    case nlohmann::detail::value_t::string:
        out += nlohmann::json(v.get<std::string>()).dump();
        break;
    case nlohmann::detail::value_t::boolean:
        out += v.get<bool>() ? "true" : "false";
        break;
    case nlohmann::detail::value_t::number_integer: {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%" PRId64, v.get<std::int64_t>());
        out += buf;
        break;
    }
    case nlohmann::detail::value_t::number_unsigned: {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%" PRIu64, v.get<std::uint64_t>());
        out += buf;
        break;
    }
    case nlohmann::detail::value_t::number_float: {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v.get<double>());
        out += buf;
        break;
    }
    default:
        out += "null";
        break;
    }
}

} // namespace

std::string dump_deterministic(const ordered_json& value) {
    std::string out;
    dump_value(out, value);
    return out;
}

std::string inputs_digest(const std::string& raw) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : raw) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
    return buf;
}

ordered_json complex_to_json(const Complex& z) {
    return ordered_json::array({z.real(), z.imag()});
}

ordered_json vector_to_json(const std::vector<Complex>& v) {
    ordered_json arr = ordered_json::array();
    for (const Complex& z : v) arr.push_back(complex_to_json(z));
    return arr;
}

ordered_json matrix_to_json(const ComplexMatrix& m) {
    ordered_json j;
    j["rows"] = static_cast<std::int64_t>(m.rows());
    j["cols"] = static_cast<std::int64_t>(m.cols());
    ordered_json data = ordered_json::array();
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t k = 0; k < m.cols(); ++k) data.push_back(complex_to_json(m(i, k)));
    j["data"] = std::move(data);
    return j;
}

ordered_json function_to_json(const DiscreteDomainFunction& f) {
    ordered_json j;
    j["values"] = vector_to_json(f.values);
    return j;
}

Complex complex_from_json(const ordered_json& j, const std::string& field) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw InvalidArgument("field '" + field + "' must be a [re, im] pair");
    const double re = j[0].get<double>();
    const double im = j[1].get<double>();
    if (!std::isfinite(re) || !std::isfinite(im))
        throw InvalidArgument("field '" + field + "' must be finite");
    return {re, im};
}

std::vector<Complex> vector_from_json(const ordered_json& j, const std::string& field) {
    if (!j.is_array()) throw InvalidArgument("field '" + field + "' must be an array");
    std::vector<Complex> v;
    v.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i)
        v.push_back(complex_from_json(j[i], field + "[" + std::to_string(i) + "]"));
    return v;
}

ComplexMatrix matrix_from_json(const ordered_json& j, const std::string& field) {
    if (!j.is_object()) throw InvalidArgument("field '" + field + "' must be a matrix object");
    if (!j.contains("rows") || !j.contains("cols") || !j.contains("data"))
        throw InvalidArgument("field '" + field + "' needs rows, cols and data");
    if (!j["rows"].is_number_integer() || !j["cols"].is_number_integer())
        throw InvalidArgument("field '" + field + ".rows/cols' must be integers");
    const std::int64_t rows = j["rows"].get<std::int64_t>();
    const std::int64_t cols = j["cols"].get<std::int64_t>();
    if (rows <= 0 || cols <= 0)
        throw InvalidArgument("field '" + field + ".rows/cols' must be positive");
    if (rows > 4096 || cols > 4096)
        throw InvalidArgument("field '" + field + "' exceeds the supported size (4096)");
    const auto data = vector_from_json(j["data"], field + ".data");
    if (data.size() != static_cast<std::size_t>(rows * cols))
        throw InvalidArgument("field '" + field + ".data' has " + std::to_string(data.size()) +
                              " entries, expected " + std::to_string(rows * cols));
    return ComplexMatrix(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols), data);
}

DiscreteDomainFunction function_from_json(const ordered_json& j, const std::string& field) {
    if (!j.is_object() || !j.contains("values"))
        throw InvalidArgument("field '" + field + "' must be an object with values");
    DiscreteDomainFunction f{vector_from_json(j["values"], field + ".values")};
    if (f.values.empty()) throw InvalidArgument("field '" + field + ".values' must be nonempty");
    return f;
}

double number_from_json(const ordered_json& j, const std::string& field) {
    if (!j.is_number()) throw InvalidArgument("field '" + field + "' must be a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw InvalidArgument("field '" + field + "' must be finite");
    return v;
}

ToleranceConfig tolerances_from_json(const ordered_json& problem) {
    ToleranceConfig tol;
    if (!problem.contains("tolerances")) return tol;
    const ordered_json& t = problem["tolerances"];
    if (!t.is_object()) throw InvalidArgument("field 'tolerances' must be an object");
    for (const auto& [key, val] : t.items()) {
        if (key == "eig_offdiag")
            tol.eig_offdiag = number_from_json(val, "tolerances.eig_offdiag");
        else if (key == "cluster_rel")
            tol.cluster_rel = number_from_json(val, "tolerances.cluster_rel");
        else if (key == "feas_eps")
            tol.feas_eps = number_from_json(val, "tolerances.feas_eps");
        else if (key == "fw_gap_eps")
            tol.fw_gap_eps = number_from_json(val, "tolerances.fw_gap_eps");
        else if (key == "psd_tol")
            tol.psd_tol = number_from_json(val, "tolerances.psd_tol");
        else if (key == "grid_phi")
            tol.grid_phi = static_cast<std::size_t>(number_from_json(val, "tolerances.grid_phi"));
        else if (key == "max_iter")
            tol.max_iter = static_cast<std::size_t>(number_from_json(val, "tolerances.max_iter"));
        else if (key == "fd_steps") {
            if (!val.is_array()) throw InvalidArgument("field 'tolerances.fd_steps' must be an array");
            tol.fd_steps.clear();
            for (std::size_t i = 0; i < val.size(); ++i)
                tol.fd_steps.push_back(
                    number_from_json(val[i], "tolerances.fd_steps[" + std::to_string(i) + "]"));
        } else {
            throw InvalidArgument("unknown tolerance '" + key + "'");
        }
    }
    return tol;
}

ordered_json tolerances_to_json(const ToleranceConfig& tol) {
    ordered_json j;
    j["eig_offdiag"] = tol.eig_offdiag;
    j["cluster_rel"] = tol.cluster_rel;
    j["feas_eps"] = tol.feas_eps;
    j["fw_gap_eps"] = tol.fw_gap_eps;
    j["psd_tol"] = tol.psd_tol;
    ordered_json steps = ordered_json::array();
    for (double t : tol.fd_steps) steps.push_back(t);
    j["fd_steps"] = std::move(steps);
    j["grid_phi"] = static_cast<std::int64_t>(tol.grid_phi);
    j["max_iter"] = static_cast<std::int64_t>(tol.max_iter);
    return j;
}

} // namespace cstar::cli
