#include "cli_app.hpp"

#include "json_io.hpp"

#include "cstar/derivative.hpp"
#include "cstar/errors.hpp"
#include "cstar/function_space.hpp"
#include "cstar/oracle.hpp"
#include "cstar/orthogonality.hpp"
#include "cstar/spectral.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <sstream>

namespace cstar::cli {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNegative = 1;
constexpr int kExitInputError = 2;
constexpr int kExitIndeterminate = 3;

struct Request {
    std::string command;
    std::string problem_path;
    std::string raw;
    ordered_json problem;
    ToleranceConfig tol;
    bool check = false;
    std::string verify_path;
    std::optional<double> phi;
    std::optional<double> eps;
    std::optional<double> delta;
};

struct Response {
    ordered_json result;
    std::optional<ordered_json> certificate;
    std::optional<ordered_json> oracle;
    int exit_code = kExitOk;
};

void require_kind(const Request& req, const std::string& kind) {
    if (!req.problem.contains("kind") || !req.problem["kind"].is_string())
        throw InvalidArgument("field 'kind' must be \"matrix\" or \"function\"");
    const std::string got = req.problem["kind"].get<std::string>();
    if (got != kind)
        throw InvalidArgument("command '" + req.command + "' needs kind \"" + kind +
                              "\", problem file says \"" + got + "\"");
}

ComplexMatrix matrix_field(const Request& req, const std::string& field) {
    if (!req.problem.contains(field)) throw InvalidArgument("missing field '" + field + "'");
    return matrix_from_json(req.problem[field], field);
}

void require_shape(const ComplexMatrix& ref, const ComplexMatrix& m, const std::string& field) {
    if (m.rows() != ref.rows() || m.cols() != ref.cols())
        throw InvalidArgument("field '" + field + "' is " + std::to_string(m.rows()) + "x" +
                              std::to_string(m.cols()) + " but 'A' is " +
                              std::to_string(ref.rows()) + "x" + std::to_string(ref.cols()));
}

std::vector<ComplexMatrix> subspace_field(const Request& req) {
    if (!req.problem.contains("subspace") || !req.problem["subspace"].is_array() ||
        req.problem["subspace"].empty())
        throw InvalidArgument("field 'subspace' must be a nonempty array");
    std::vector<ComplexMatrix> gens;
    const auto& arr = req.problem["subspace"];
    for (std::size_t i = 0; i < arr.size(); ++i)
        gens.push_back(matrix_from_json(arr[i], "subspace[" + std::to_string(i) + "]"));
    return gens;
}

DiscreteDomainFunction function_field(const Request& req, const std::string& field) {
    if (!req.problem.contains(field)) throw InvalidArgument("missing field '" + field + "'");
    return function_from_json(req.problem[field], field);
}

std::vector<DiscreteDomainFunction> fn_subspace_field(const Request& req) {
    if (!req.problem.contains("subspace") || !req.problem["subspace"].is_array() ||
        req.problem["subspace"].empty())
        throw InvalidArgument("field 'subspace' must be a nonempty array");
    std::vector<DiscreteDomainFunction> gens;
    const auto& arr = req.problem["subspace"];
    for (std::size_t i = 0; i < arr.size(); ++i)
        gens.push_back(function_from_json(arr[i], "subspace[" + std::to_string(i) + "]"));
    return gens;
}

double param_field(const Request& req, const std::optional<double>& flag,
                   const std::string& field) {
    if (flag) return *flag;
    if (!req.problem.contains(field))
        throw InvalidArgument("parameter '" + field + "' missing: set it in the problem file or pass --" +
                              field);
    return number_from_json(req.problem[field], field);
}

ordered_json columns_to_json(const ComplexMatrix& mat) {
    ordered_json arr = ordered_json::array();
    for (std::size_t j = 0; j < mat.cols(); ++j) arr.push_back(vector_to_json(mat.column(j)));
    return arr;
}

ComplexMatrix columns_from_json(const ordered_json& j, std::size_t rows, const std::string& field) {
    if (!j.is_array() || j.empty()) throw InvalidArgument("field '" + field + "' must be a nonempty array");
    ComplexMatrix mat(rows, j.size());
    for (std::size_t col = 0; col < j.size(); ++col) {
        const auto v = vector_from_json(j[col], field + "[" + std::to_string(col) + "]");
        if (v.size() != rows)
            throw InvalidArgument("field '" + field + "[" + std::to_string(col) + "]' has length " +
                                  std::to_string(v.size()) + ", expected " + std::to_string(rows));
        mat.set_column(col, v);
    }
    return mat;
}

ordered_json decomposition_to_json(const MaximizerDecomposition& d) {
    ordered_json j;
    ordered_json weights = ordered_json::array();
    for (double w : d.weights) weights.push_back(w);
    j["weights"] = std::move(weights);
    j["vectors"] = columns_to_json(d.vectors);
    return j;
}

ordered_json witness_certificate(const MaximizerDecomposition& d) {
    ordered_json j;
    j["type"] = "witness";
    ordered_json weights = ordered_json::array();
    for (double w : d.weights) weights.push_back(w);
    j["weights"] = std::move(weights);
    j["vectors"] = columns_to_json(d.vectors);
    return j;
}

ordered_json violation_certificate(const Violation& v) {
    ordered_json j;
    j["type"] = "violation";
    j["phi"] = v.phi;
    j["direction_index"] = static_cast<std::int64_t>(v.direction_index);
    j["derivative"] = v.derivative;
    j["direction"] = matrix_to_json(v.direction);
    return j;
}

ordered_json separation_certificate(const std::vector<double>& c) {
    ordered_json j;
    j["type"] = "separation";
    ordered_json coeff = ordered_json::array();
    for (double x : c) coeff.push_back(x);
    j["coefficients"] = std::move(coeff);
    return j;
}

ordered_json fd_oracle_json(const OracleReport& r) {
    ordered_json j;
    j["kind"] = "finite_difference";
    j["estimate"] = r.estimate;
    j["converged"] = r.converged;
    ordered_json samples = ordered_json::array();
    for (const auto& [t, q] : r.samples) samples.push_back(ordered_json::array({t, q}));
    j["samples"] = std::move(samples);
    return j;
}

ordered_json grid_oracle_json(const GridCheck& g) {
    ordered_json j;
    j["kind"] = "perturbation_grid";
    j["orthogonal"] = g.orthogonal;
    j["min_sample"] = g.report.estimate;
    ordered_json samples = ordered_json::array();
    for (const auto& [t, v] : g.report.samples) samples.push_back(ordered_json::array({t, v}));
    j["samples"] = std::move(samples);
    return j;
}

// ---------------------------------------------------------------------------
// Certificate verification (offline; no feasibility solver, no angle search).

double frob_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    return (a - b).frobenius_norm();
}

// Least-squares membership of D in span(Bs) via the normal equations,
// solved with the Hermitian eigensolver (pseudo-inverse with cutoff).
bool in_span(const ComplexMatrix& d, const std::vector<ComplexMatrix>& bs,
             const ToleranceConfig& tol) {
    const std::size_t m = bs.size();
    ComplexMatrix g(m, m);
    std::vector<Complex> rhs(m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) g(i, j) = (bs[i].adjoint() * bs[j]).trace();
        rhs[i] = (bs[i].adjoint() * d).trace();
    }
    const SpectralData sd = hermitian_eig(hermitian_part(g), tol);
    const double cutoff = 1e-12 * std::max(1.0, sd.eigenvalues.front());
    std::vector<Complex> x(m, 0.0);
    for (std::size_t k = 0; k < m; ++k) {
        if (sd.eigenvalues[k] <= cutoff) continue;
        const auto vk = sd.eigenvectors.column(k);
        const Complex coeff = vdot(vk, rhs) / sd.eigenvalues[k];
        for (std::size_t i = 0; i < m; ++i) x[i] += coeff * vk[i];
    }
    ComplexMatrix recon(d.rows(), d.cols());
    for (std::size_t i = 0; i < m; ++i) recon = recon + x[i] * bs[i];
    return frob_diff(recon, d) <= 1e-8 * (1.0 + d.frobenius_norm());
}

struct VerifyOutcome {
    bool verified = false;
    std::string reason;
};

VerifyOutcome verify_witness(const ordered_json& cert, const ComplexMatrix& a,
                             const std::vector<ComplexMatrix>& bs, const ToleranceConfig& tol) {
    if (!cert.contains("weights") || !cert.contains("vectors"))
        return {false, "witness certificate needs weights and vectors"};
    std::vector<double> weights;
    for (const auto& w : cert["weights"]) weights.push_back(number_from_json(w, "weights"));
    const ComplexMatrix vectors = columns_from_json(cert["vectors"], a.cols(), "vectors");
    if (weights.size() != vectors.cols()) return {false, "weights and vectors disagree in count"};

    double total = 0.0;
    for (double w : weights) {
        if (w <= 0.0) return {false, "weights must be positive"};
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-10) return {false, "weights do not sum to one"};

    const ComplexMatrix overlaps = gram(vectors);
    for (std::size_t i = 0; i < vectors.cols(); ++i)
        for (std::size_t j = 0; j < vectors.cols(); ++j) {
            const Complex expect = i == j ? Complex(1.0) : Complex(0.0);
            if (std::abs(overlaps(i, j) - expect) > 1e-9)
                return {false, "vectors are not orthonormal"};
        }

    const ComplexMatrix h = gram(a);
    const double lambda_max = hermitian_eig(h, tol).eigenvalues.front();
    for (std::size_t j = 0; j < vectors.cols(); ++j) {
        const auto u = vectors.column(j);
        auto hu = mat_vec(h, u);
        for (std::size_t i = 0; i < hu.size(); ++i) hu[i] -= lambda_max * u[i];
        if (vec_norm(hu) > 1e-7 * lambda_max)
            return {false, "vector " + std::to_string(j) + " is not in the top eigenspace"};
    }

    for (std::size_t g = 0; g < bs.size(); ++g) {
        Complex pairing = 0.0;
        for (std::size_t j = 0; j < vectors.cols(); ++j) {
            const auto u = vectors.column(j);
            pairing += weights[j] * vdot(mat_vec(a, u), mat_vec(bs[g], u));
        }
        if (std::abs(pairing) > 2.0 * tol.feas_eps)
            return {false, "witness pairing against generator " + std::to_string(g) +
                               " exceeds 2*feas_eps"};
    }
    return {true, ""};
}

VerifyOutcome verify_violation(const ordered_json& cert, const ComplexMatrix& a,
                               const std::vector<ComplexMatrix>& bs, const ToleranceConfig& tol) {
    if (!cert.contains("phi") || !cert.contains("derivative") || !cert.contains("direction"))
        return {false, "violation certificate needs phi, derivative and direction"};
    const double phi = number_from_json(cert["phi"], "phi");
    const double recorded = number_from_json(cert["derivative"], "derivative");
    const ComplexMatrix direction = matrix_from_json(cert["direction"], "direction");
    if (direction.rows() != a.rows() || direction.cols() != a.cols())
        return {false, "direction shape differs from the base point"};
    if (!in_span(direction, bs, tol)) return {false, "direction is not in the queried subspace"};
    const double recomputed = phi_gateaux(a, direction, phi, tol).value;
    if (std::abs(recomputed - recorded) > 1e-8 * (1.0 + std::abs(recorded)))
        return {false, "recorded derivative does not match recomputation"};
    if (!(recomputed < -tol.feas_eps)) return {false, "direction is not a strict descent witness"};
    return {true, ""};
}

VerifyOutcome verify_separation(const ordered_json& cert, const ComplexMatrix& a,
                                const std::vector<ComplexMatrix>& bs, const ToleranceConfig& tol) {
    if (!cert.contains("coefficients")) return {false, "separation certificate needs coefficients"};
    std::vector<double> c;
    for (const auto& x : cert["coefficients"]) c.push_back(number_from_json(x, "coefficients"));
    const MaxEigenspace e = max_eigenspace(a, tol);
    const auto hs = orthogonality_constraints(a, bs, e);
    if (c.size() != hs.size())
        return {false, "coefficient count " + std::to_string(c.size()) + " does not match " +
                           std::to_string(hs.size()) + " constraints"};
    ComplexMatrix agg(e.dim_k, e.dim_k);
    for (std::size_t i = 0; i < hs.size(); ++i) agg = agg + c[i] * hs[i];
    const double lambda_min = hermitian_eig(agg, tol).eigenvalues.back();
    if (!(lambda_min > 0.0))
        return {false, "aggregate constraint is not positive definite (lambda_min = " +
                           std::to_string(lambda_min) + ")"};
    return {true, ""};
}

VerifyOutcome verify_derivative_maximizer(const ordered_json& cert, const ComplexMatrix& a,
                                          const ComplexMatrix& b, const ToleranceConfig& tol) {
    if (!cert.contains("value") || !cert.contains("maximizing_vector"))
        return {false, "derivative certificate needs value and maximizing_vector"};
    const double value = number_from_json(cert["value"], "value");
    const double phi = cert.contains("phi") ? number_from_json(cert["phi"], "phi") : 0.0;
    const auto u = vector_from_json(cert["maximizing_vector"], "maximizing_vector");
    if (u.size() != a.cols()) return {false, "maximizing_vector has the wrong dimension"};
    if (std::abs(vec_norm(u) - 1.0) > 1e-9) return {false, "maximizing_vector is not unit"};

    const ComplexMatrix h = gram(a);
    const double lambda_max = hermitian_eig(h, tol).eigenvalues.front();
    auto hu = mat_vec(h, u);
    for (std::size_t i = 0; i < hu.size(); ++i) hu[i] -= lambda_max * u[i];
    if (vec_norm(hu) > 1e-7 * lambda_max)
        return {false, "maximizing_vector is not in the top eigenspace"};

    const ComplexMatrix rotated = std::polar(1.0, phi) * b;
    const double achieved =
        vdot(mat_vec(a, u), mat_vec(rotated, u)).real() / std::sqrt(lambda_max);
    if (std::abs(achieved - value) > 1e-8 * (1.0 + std::abs(value)))
        return {false, "maximizing_vector does not achieve the recorded value"};
    return {true, ""};
}

VerifyOutcome verify_state(const ordered_json& cert, const ComplexMatrix& a,
                           const ComplexMatrix& g, const ToleranceConfig& tol) {
    if (!cert.contains("ambient")) return {false, "state certificate needs the ambient matrix"};
    const ComplexMatrix ambient = matrix_from_json(cert["ambient"], "ambient");
    const auto r = subdiff_membership(a, g, tol);
    if (!r.member) return {false, "recomputed membership check fails"};
    if (frob_diff(ambient, *r.state->ambient) > 1e-9 * (1.0 + ambient.frobenius_norm()))
        return {false, "ambient state does not match A*G/||A||"};
    return {true, ""};
}

VerifyOutcome verify_measure(const ordered_json& cert, const DiscreteDomainFunction& f,
                             const std::vector<DiscreteDomainFunction>& hs,
                             const ToleranceConfig& tol) {
    if (!cert.contains("support") || !cert.contains("weights"))
        return {false, "measure certificate needs support and weights"};
    std::vector<std::size_t> support;
    for (const auto& s : cert["support"]) {
        if (!s.is_number_integer()) return {false, "support indices must be integers"};
        support.push_back(s.get<std::size_t>());
    }
    std::vector<double> weights;
    for (const auto& w : cert["weights"]) weights.push_back(number_from_json(w, "weights"));
    if (support.size() != weights.size()) return {false, "support and weights disagree in count"};

    const MaxModulusSet m = max_modulus_set(f, tol);
    double total = 0.0;
    for (std::size_t i = 0; i < support.size(); ++i) {
        if (weights[i] <= 0.0) return {false, "weights must be positive"};
        total += weights[i];
        bool in_max_set = false;
        for (std::size_t x : m.indices) in_max_set = in_max_set || x == support[i];
        if (!in_max_set)
            return {false, "support point " + std::to_string(support[i]) +
                               " is outside the max-modulus set"};
    }
    if (std::abs(total - 1.0) > 1e-12) return {false, "weights do not sum to one"};

    for (std::size_t j = 0; j < hs.size(); ++j) {
        Complex s = 0.0;
        for (std::size_t i = 0; i < support.size(); ++i)
            s += weights[i] * std::conj(f.values[support[i]]) * hs[j].values[support[i]];
        if (std::abs(s) > 2.0 * tol.feas_eps)
            return {false, "measure pairing against generator " + std::to_string(j) +
                               " exceeds 2*feas_eps"};
    }
    return {true, ""};
}

ordered_json load_certificate(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidArgument("cannot open certificate file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    ordered_json doc = ordered_json::parse(buf.str());
    if (doc.contains("certificate")) return doc["certificate"];
    return doc;
}

Response run_verify(const Request& req) {
    const ordered_json cert = load_certificate(req.verify_path);
    if (!cert.is_object() || !cert.contains("type") || !cert["type"].is_string())
        throw InvalidArgument("certificate must be an object with a string 'type'");
    const std::string type = cert["type"].get<std::string>();

    VerifyOutcome outcome{false, "certificate type '" + type + "' does not fit command '" +
                                     req.command + "'"};
    if (req.command == "bj" || req.command == "bj-subspace") {
        require_kind(req, "matrix");
        const ComplexMatrix a = matrix_field(req, "A");
        const std::vector<ComplexMatrix> bs =
            req.command == "bj" ? std::vector<ComplexMatrix>{matrix_field(req, "B")}
                                : subspace_field(req);
        if (type == "witness")
            outcome = verify_witness(cert, a, bs, req.tol);
        else if (type == "violation")
            outcome = verify_violation(cert, a, bs, req.tol);
        else if (type == "separation")
            outcome = verify_separation(cert, a, bs, req.tol);
    } else if (req.command == "dplus" || req.command == "dphi") {
        require_kind(req, "matrix");
        if (type == "derivative_maximizer")
            outcome = verify_derivative_maximizer(cert, matrix_field(req, "A"),
                                                  matrix_field(req, "B"), req.tol);
    } else if (req.command == "subdiff") {
        require_kind(req, "matrix");
        if (type == "state")
            outcome = verify_state(cert, matrix_field(req, "A"), matrix_field(req, "G"), req.tol);
    } else if (req.command == "fn-bj") {
        require_kind(req, "function");
        if (type == "measure")
            outcome = verify_measure(cert, function_field(req, "f"), fn_subspace_field(req), req.tol);
    } else {
        throw InvalidArgument("command '" + req.command + "' has no certificates to verify");
    }

    Response resp;
    resp.result["verified"] = outcome.verified;
    if (!outcome.verified) resp.result["reason"] = outcome.reason;
    resp.exit_code = outcome.verified ? kExitOk : kExitNegative;
    return resp;
}

// ---------------------------------------------------------------------------
// Command handlers.

Response run_norm(const Request& req) {
    require_kind(req, "matrix");
    Response r;
    r.result = operator_norm(matrix_field(req, "A"), req.tol);
    return r;
}

Response run_dplus(const Request& req, bool rotated) {
    require_kind(req, "matrix");
    const ComplexMatrix a = matrix_field(req, "A");
    const ComplexMatrix b = matrix_field(req, "B");
    require_shape(a, b, "B");
    const double phi = rotated ? param_field(req, req.phi, "phi") : 0.0;
    const DerivativeResult d =
        rotated ? phi_gateaux(a, b, phi, req.tol) : gateaux_plus(a, b, req.tol);

    Response r;
    r.result = d.value;
    ordered_json cert;
    cert["type"] = "derivative_maximizer";
    if (rotated) cert["phi"] = phi;
    cert["value"] = d.value;
    cert["eigenspace_dim"] = static_cast<std::int64_t>(d.eigenspace_dim);
    cert["maximizing_vector"] = vector_to_json(d.maximizing_vector);
    r.certificate = std::move(cert);
    if (req.check) {
        const ComplexMatrix dir = rotated ? ComplexMatrix(std::polar(1.0, phi) * b) : b;
        r.oracle = fd_oracle_json(fd_derivative(a, dir, req.tol));
    }
    return r;
}

Response run_dmin(const Request& req) {
    require_kind(req, "matrix");
    const ComplexMatrix a = matrix_field(req, "A");
    const ComplexMatrix b = matrix_field(req, "B");
    require_shape(a, b, "B");
    const MinPhiResult m = min_phi_derivative(a, b, req.tol);
    Response r;
    r.result["phi_star"] = m.phi_star;
    r.result["value"] = m.value;
    return r;
}

Response run_dtwo(const Request& req) {
    require_kind(req, "matrix");
    const ComplexMatrix a = matrix_field(req, "A");
    const ComplexMatrix b = matrix_field(req, "B");
    require_shape(a, b, "B");
    const auto two = gateaux_two_sided(a, b, req.tol);
    Response r;
    r.result["differentiable"] = two.has_value();
    if (two) r.result["value"] = *two;
    if (req.check) {
        ordered_json oracle;
        oracle["kind"] = "finite_difference_two_sided";
        oracle["right"] = fd_oracle_json(fd_derivative(a, b, req.tol));
        oracle["left_negated"] = fd_oracle_json(fd_derivative(a, -1.0 * b, req.tol));
        r.oracle = std::move(oracle);
    }
    return r;
}

Response run_smooth(const Request& req) {
    require_kind(req, "matrix");
    const SmoothResult s = is_smooth(matrix_field(req, "A"), req.tol);
    Response r;
    r.result["smooth"] = s.smooth;
    if (s.witness) r.result["witness"] = vector_to_json(*s.witness);
    r.exit_code = s.smooth ? kExitOk : kExitNegative;
    return r;
}

Response run_dcutoff(const Request& req) {
    require_kind(req, "matrix");
    const ComplexMatrix a = matrix_field(req, "A");
    const ComplexMatrix b = matrix_field(req, "B");
    require_shape(a, b, "B");
    const double eps = param_field(req, req.eps, "eps");
    Response r;
    r.result = spectral_cutoff_derivative(a, b, eps, req.tol);
    if (req.check) r.oracle = fd_oracle_json(fd_derivative(a, b, req.tol));
    return r;
}

void attach_orthogonality_certificate(Response& r, const OrthogonalityVerdict& v) {
    if (v.witness)
        r.certificate = witness_certificate(*v.witness);
    else if (v.separation)
        r.certificate = separation_certificate(*v.separation);
    else if (v.violation)
        r.certificate = violation_certificate(*v.violation);
}

Response run_bj(const Request& req) {
    require_kind(req, "matrix");
    const ComplexMatrix a = matrix_field(req, "A");
    const ComplexMatrix b = matrix_field(req, "B");
    require_shape(a, b, "B");
    const OrthogonalityVerdict v = bj_orthogonal_vector(a, b, req.tol);
    Response r;
    r.result["orthogonal"] = v.orthogonal;
    attach_orthogonality_certificate(r, v);
    if (req.check) r.oracle = grid_oracle_json(bj_grid_check(a, b, req.tol));
    r.exit_code = v.orthogonal ? kExitOk : kExitNegative;
    return r;
}

Response run_bj_subspace(const Request& req) {
    require_kind(req, "matrix");
    const ComplexMatrix a = matrix_field(req, "A");
    const std::vector<ComplexMatrix> gens = subspace_field(req);
    for (std::size_t i = 0; i < gens.size(); ++i)
        require_shape(a, gens[i], "subspace[" + std::to_string(i) + "]");
    const OrthogonalityVerdict v = bj_orthogonal_subspace(a, gens, req.tol);
    Response r;
    r.result["orthogonal"] = v.orthogonal;
    attach_orthogonality_certificate(r, v);
    if (req.check) {
        // Pairwise scans are necessary conditions only; they cannot replace
        // the joint feasibility verdict.
        ordered_json oracle;
        oracle["kind"] = "perturbation_grid_per_generator";
        ordered_json checks = ordered_json::array();
        for (const ComplexMatrix& g : gens) checks.push_back(grid_oracle_json(bj_grid_check(a, g, req.tol)));
        oracle["checks"] = std::move(checks);
        r.oracle = std::move(oracle);
    }
    r.exit_code = v.orthogonal ? kExitOk : kExitNegative;
    return r;
}

Response run_subdiff(const Request& req) {
    require_kind(req, "matrix");
    const ComplexMatrix a = matrix_field(req, "A");
    const ComplexMatrix g = matrix_field(req, "G");
    require_shape(a, g, "G");
    const SubdiffResult s = subdiff_membership(a, g, req.tol);
    Response r;
    r.result["member"] = s.member;
    if (s.state) {
        ordered_json cert;
        cert["type"] = "state";
        cert["mat"] = matrix_to_json(s.state->mat);
        cert["ambient"] = matrix_to_json(*s.state->ambient);
        r.certificate = std::move(cert);
    }
    r.exit_code = s.member ? kExitOk : kExitNegative;
    return r;
}

Response run_decompose(const Request& req) {
    require_kind(req, "matrix");
    const ComplexMatrix a = matrix_field(req, "A");
    const ComplexMatrix t = matrix_field(req, "T");
    if (t.rows() != a.cols() || t.cols() != a.cols())
        throw InvalidArgument("field 'T' is " + std::to_string(t.rows()) + "x" +
                              std::to_string(t.cols()) + " but must be " +
                              std::to_string(a.cols()) + "x" + std::to_string(a.cols()));
    Response r;
    r.result = decomposition_to_json(decompose_maximizer(a, t, req.tol));
    return r;
}

Response run_fn_norm(const Request& req) {
    require_kind(req, "function");
    Response r;
    r.result = sup_norm(function_field(req, "f"));
    return r;
}

Response run_fn_dplus(const Request& req) {
    require_kind(req, "function");
    const DiscreteDomainFunction f = function_field(req, "f");
    const DiscreteDomainFunction g = function_field(req, "g");
    if (g.domain_size() != f.domain_size())
        throw InvalidArgument("field 'g' has domain size " + std::to_string(g.domain_size()) +
                              " but 'f' has " + std::to_string(f.domain_size()));
    Response r;
    r.result = fn_gateaux_plus(f, g, req.tol);
    if (req.check) r.oracle = fd_oracle_json(fn_fd_derivative(f, g, req.tol));
    return r;
}

Response run_fn_ddelta(const Request& req) {
    require_kind(req, "function");
    const DiscreteDomainFunction f = function_field(req, "f");
    const DiscreteDomainFunction g = function_field(req, "g");
    Response r;
    r.result = fn_delta_derivative(f, g, param_field(req, req.delta, "delta"), req.tol);
    return r;
}

Response run_fn_bj(const Request& req) {
    require_kind(req, "function");
    const DiscreteDomainFunction f = function_field(req, "f");
    const std::vector<DiscreteDomainFunction> gens = fn_subspace_field(req);
    const FnOrthogonalityResult o = fn_bj_orthogonal_subspace(f, gens, req.tol);
    Response r;
    r.result["orthogonal"] = o.orthogonal;
    if (o.measure) {
        ordered_json cert;
        cert["type"] = "measure";
        ordered_json support = ordered_json::array();
        for (std::size_t x : o.measure->support) support.push_back(static_cast<std::int64_t>(x));
        cert["support"] = std::move(support);
        ordered_json weights = ordered_json::array();
        for (double w : o.measure->weights) weights.push_back(w);
        cert["weights"] = std::move(weights);
        r.certificate = std::move(cert);
    }
    if (req.check) {
        ordered_json oracle;
        oracle["kind"] = "perturbation_grid_per_generator";
        ordered_json checks = ordered_json::array();
        for (const DiscreteDomainFunction& h : gens)
            checks.push_back(grid_oracle_json(fn_bj_grid_check(f, h, req.tol)));
        oracle["checks"] = std::move(checks);
        r.oracle = std::move(oracle);
    }
    r.exit_code = o.orthogonal ? kExitOk : kExitNegative;
    return r;
}

Response dispatch(const Request& req) {
    if (!req.verify_path.empty()) return run_verify(req);
    if (req.command == "norm") return run_norm(req);
    if (req.command == "dplus") return run_dplus(req, false);
    if (req.command == "dphi") return run_dplus(req, true);
    if (req.command == "dmin") return run_dmin(req);
    if (req.command == "dtwo") return run_dtwo(req);
    if (req.command == "smooth") return run_smooth(req);
    if (req.command == "dcutoff") return run_dcutoff(req);
    if (req.command == "bj") return run_bj(req);
    if (req.command == "bj-subspace") return run_bj_subspace(req);
    if (req.command == "subdiff") return run_subdiff(req);
    if (req.command == "decompose") return run_decompose(req);
    if (req.command == "fn-norm") return run_fn_norm(req);
    if (req.command == "fn-dplus") return run_fn_dplus(req);
    if (req.command == "fn-ddelta") return run_fn_ddelta(req);
    if (req.command == "fn-bj") return run_fn_bj(req);
    throw InvalidArgument("unknown command '" + req.command + "'");
}

void emit(std::ostream& out, const Request& req, const ordered_json& result,
          const std::optional<ordered_json>& certificate,
          const std::optional<ordered_json>& oracle) {
    ordered_json doc;
    doc["command"] = req.command;
    doc["inputs_digest"] = inputs_digest(req.raw);
    doc["result"] = result;
    if (certificate) doc["certificate"] = *certificate;
    if (oracle) doc["oracle"] = *oracle;
    doc["tolerances"] = tolerances_to_json(req.tol);
    out << dump_deterministic(doc) << "\n";
}

struct FlagValues {
    double eig_offdiag = 0, cluster_rel = 0, feas_eps = 0, fw_gap_eps = 0, psd_tol = 0;
    std::size_t grid_phi = 0, max_iter = 0;
    std::string fd_steps;
    double phi = 0, eps = 0, delta = 0;
    bool check = false;
    std::string verify_path;
    std::string problem_path;
};

void add_common_options(CLI::App* sub, FlagValues& f) {
    sub->add_option("problem", f.problem_path, "problem file (JSON)")->required();
    sub->add_option("--eig-offdiag", f.eig_offdiag, "eigensolver off-diagonal stop (relative)");
    sub->add_option("--cluster-rel", f.cluster_rel, "relative eigenspace clustering threshold");
    sub->add_option("--feas-eps", f.feas_eps, "feasibility tolerance for witnesses");
    sub->add_option("--fw-gap-eps", f.fw_gap_eps, "duality-gap stop for the feasibility solver");
    sub->add_option("--psd-tol", f.psd_tol, "eigenvalue floor for PSD checks");
    sub->add_option("--fd-steps", f.fd_steps, "comma-separated decreasing step sizes");
    sub->add_option("--grid-phi", f.grid_phi, "number of angle samples");
    sub->add_option("--max-iter", f.max_iter, "iteration cap");
}

bool flag_given(const CLI::App* sub, const std::string& name) {
    const CLI::Option* opt = sub->get_option_no_throw(name);
    return opt != nullptr && opt->count() > 0;
}

std::vector<double> parse_fd_steps(const std::string& text) {
    std::vector<double> steps;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            steps.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw InvalidArgument("--fd-steps entries must be numbers");
        }
    }
    return steps;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"spectral-norm directional derivatives, Birkhoff-James orthogonality "
                 "certificates, and subdifferential membership"};
    app.require_subcommand(1);

    FlagValues f;
    struct SubSpec {
        const char* name;
        const char* help;
        bool has_check;
        bool has_verify;
    };
    const SubSpec specs[] = {
        {"norm", "operator norm of A", false, false},
        {"dplus", "right directional derivative of ||A + tB|| at 0", true, true},
        {"dphi", "directional derivative in the rotated direction e^{i phi} B", true, true},
        {"dmin", "minimum of the phi-directional derivative over phi", false, false},
        {"dtwo", "two-sided derivative when it exists", true, false},
        {"smooth", "smooth-point test for A", false, false},
        {"dcutoff", "derivative restricted to the spectral cutoff subspace", true, false},
        {"bj", "Birkhoff-James orthogonality of A to B", true, true},
        {"bj-subspace", "Birkhoff-James orthogonality of A to span of generators", true, true},
        {"subdiff", "subdifferential membership of G at A", false, true},
        {"decompose", "decompose a norm-attaining state", false, false},
        {"fn-norm", "sup norm of f", false, false},
        {"fn-dplus", "right directional derivative of ||f + tg|| at 0", true, false},
        {"fn-ddelta", "level-set relaxation of the sup-norm derivative", false, false},
        {"fn-bj", "Birkhoff-James orthogonality of f to span of generators", true, true},
    };
    for (const SubSpec& spec : specs) {
        CLI::App* sub = app.add_subcommand(spec.name, spec.help);
        add_common_options(sub, f);
        if (spec.has_check) sub->add_flag("--check", f.check, "attach the brute-force oracle");
        if (spec.has_verify)
            sub->add_option("--verify-certificate", f.verify_path,
                            "validate a previously emitted certificate instead of solving");
        if (std::string(spec.name) == "dphi")
            sub->add_option("--phi", f.phi, "rotation angle (overrides the problem file)");
        if (std::string(spec.name) == "dcutoff")
            sub->add_option("--eps", f.eps, "cutoff width (overrides the problem file)");
        if (std::string(spec.name) == "fn-ddelta")
            sub->add_option("--delta", f.delta, "level-set width (overrides the problem file)");
    }

    std::vector<const char*> argv;
    argv.push_back("cstar");
    for (const std::string& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitInputError;
    }

    CLI::App* sub = app.get_subcommands().front();
    Request req;
    req.command = sub->get_name();
    req.problem_path = f.problem_path;
    req.check = f.check;
    req.verify_path = f.verify_path;

    try {
        if (req.problem_path == "-") {
            std::stringstream buf;
            buf << std::cin.rdbuf();
            req.raw = buf.str();
        } else {
            std::ifstream in(req.problem_path, std::ios::binary);
            if (!in) throw InvalidArgument("cannot open problem file '" + req.problem_path + "'");
            std::stringstream buf;
            buf << in.rdbuf();
            req.raw = buf.str();
        }
        try {
            req.problem = ordered_json::parse(req.raw);
        } catch (const nlohmann::json::parse_error& e) {
            throw InvalidArgument(std::string("malformed JSON: ") + e.what());
        }
        if (!req.problem.is_object()) throw InvalidArgument("problem file must hold a JSON object");

        req.tol = tolerances_from_json(req.problem);
        if (flag_given(sub, "--eig-offdiag")) req.tol.eig_offdiag = f.eig_offdiag;
        if (flag_given(sub, "--cluster-rel")) req.tol.cluster_rel = f.cluster_rel;
        if (flag_given(sub, "--feas-eps")) req.tol.feas_eps = f.feas_eps;
        if (flag_given(sub, "--fw-gap-eps")) req.tol.fw_gap_eps = f.fw_gap_eps;
        if (flag_given(sub, "--psd-tol")) req.tol.psd_tol = f.psd_tol;
        if (flag_given(sub, "--grid-phi")) req.tol.grid_phi = f.grid_phi;
        if (flag_given(sub, "--max-iter")) req.tol.max_iter = f.max_iter;
        if (flag_given(sub, "--fd-steps")) req.tol.fd_steps = parse_fd_steps(f.fd_steps);
        req.tol.validate();
        if (flag_given(sub, "--phi")) req.phi = f.phi;
        if (flag_given(sub, "--eps")) req.eps = f.eps;
        if (flag_given(sub, "--delta")) req.delta = f.delta;

        const Response resp = dispatch(req);
        emit(out, req, resp.result, resp.certificate, resp.oracle);
        return resp.exit_code;
    } catch (const NoConvergence& e) {
        ordered_json result;
        result["indeterminate"] = true;
        result["reason"] = std::string(e.what());
        emit(out, req, result, std::nullopt, std::nullopt);
        return kExitIndeterminate;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const nlohmann::json::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kExitInputError;
    }
}

} // namespace cstar::cli
