#ifndef TCD_IO_HPP
#define TCD_IO_HPP

// JSON schema for tuples and reports. Complex numbers are two-element
// [re, im] arrays and matrices are row-major nested arrays, so documents
// stay unambiguous across languages. Serialization is deterministic
// (sorted keys, shortest round-trip numbers), which is what makes reports
// byte-identical for identical (input, flags, seed, version).

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>

#include <json.hpp>

#include "tcd/dilation.hpp"
#include "tcd/geometry.hpp"

namespace tcd {

using Json = nlohmann::json;

inline constexpr const char* kVersion = "0.1.0";

inline Json complex_to_json(const Complex& z) {
  return Json::array({z.real(), z.imag()});
}

inline Complex complex_from_json(const Json& j, const char* what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw Error(ErrorCode::InvalidInput,
                std::string(what) + " must be a [re, im] pair of numbers");
  const Complex z(j[0].get<double>(), j[1].get<double>());
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw Error(ErrorCode::InvalidInput, std::string(what) + " must be finite");
  return z;
}

inline Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Matrix matrix_from_json(const Json& j, Index rows, Index cols, const char* what) {
  if (!j.is_array() || static_cast<Index>(j.size()) != rows)
    throw Error(ErrorCode::InvalidInput,
                std::string(what) + " must have " + std::to_string(rows) + " rows");
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const Json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Index>(row.size()) != cols)
      throw Error(ErrorCode::InvalidInput,
                  std::string(what) + " rows must have " + std::to_string(cols) + " entries");
    for (Index k = 0; k < cols; ++k)
      m(i, k) = complex_from_json(row[static_cast<std::size_t>(k)], what);
  }
  return m;
}

inline Json vector_to_json(const Vector& v) {
  Json out = Json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
  return out;
}

inline Vector vector_from_json(const Json& j, const char* what) {
  if (!j.is_array() || j.empty())
    throw Error(ErrorCode::InvalidInput, std::string(what) + " must be a nonempty array");
  Vector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i)
    v(static_cast<Index>(i)) = complex_from_json(j[i], what);
  return v;
}

// Tuple document: {"d": .., "n": .., "matrices": [...], "metadata": {...}?}
inline Json tuple_to_json(const MatrixTuple& t, Json metadata = Json::object()) {
  t.validate();
  Json doc;
  doc["d"] = t.d();
  doc["n"] = t.n();
  Json ms = Json::array();
  for (const Matrix& m : t.matrices) ms.push_back(matrix_to_json(m));
  doc["matrices"] = std::move(ms);
  if (!metadata.empty()) doc["metadata"] = std::move(metadata);
  return doc;
}

inline MatrixTuple tuple_from_json(const Json& doc) {
  if (!doc.is_object())
    throw Error(ErrorCode::InvalidInput, "tuple document must be a JSON object");
  if (!doc.contains("d") || !doc.contains("n") || !doc.contains("matrices"))
    throw Error(ErrorCode::InvalidInput, "tuple document needs d, n, matrices");
  if (!doc["d"].is_number_integer() || !doc["n"].is_number_integer())
    throw Error(ErrorCode::InvalidInput, "d and n must be integers");
  const Index d = doc["d"].get<Index>();
  const Index n = doc["n"].get<Index>();
  if (d < 1 || n < 1) throw Error(ErrorCode::InvalidInput, "d and n must be >= 1");
  const Json& ms = doc["matrices"];
  if (!ms.is_array() || static_cast<Index>(ms.size()) != d)
    throw Error(ErrorCode::InvalidInput, "matrices must be an array of d matrices");
  std::vector<Matrix> entries;
  entries.reserve(static_cast<std::size_t>(d));
  for (Index k = 0; k < d; ++k)
    entries.push_back(matrix_from_json(ms[static_cast<std::size_t>(k)], n, n, "matrix entry"));
  return make_tuple(std::move(entries));
}

// FNV-1a digest of the canonical serialization; identifies inputs in reports.
inline std::string digest(const Json& doc) {
  const std::string bytes = doc.dump();
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
  return std::string("fnv1a:") + buf;
}

inline Json tolerances_to_json(const Tolerances& tol) {
  return Json{{"eig_tol", tol.eig_tol},
              {"psd_tol", tol.psd_tol},
              {"rank_tol", tol.rank_tol},
              {"residual_tol", tol.residual_tol}};
}

inline const char* witness_kind_name(Witness::Kind kind) {
  switch (kind) {
    case Witness::Kind::BlockEigenvector: return "block-eigenvector";
    case Witness::Kind::UnitVector: return "unit-vector-xi";
    case Witness::Kind::Coefficients: return "coefficient-c";
    case Witness::Kind::SpectrumPoint: return "spectrum-point";
  }
  return "unknown";
}

inline Json witness_to_json(const Witness& w) {
  return Json{{"kind", witness_kind_name(w.kind)},
              {"vector", vector_to_json(w.vector)},
              {"achieved", w.achieved}};
}

inline Json modulus_report_to_json(const ModulusReport& r) {
  Json diag{{"restarts", r.diagnostics.restarts},
            {"best_start", r.diagnostics.best_start},
            {"iterations", r.diagnostics.iterations},
            {"converged", r.diagnostics.converged},
            {"unconverged_starts", r.diagnostics.unconverged_starts}};
  if (r.kind == ModulusKind::GelfandRadius)
    diag["spectrum_match"] = r.diagnostics.spectrum_match;
  return Json{{"value", r.value},
              {"witness", witness_to_json(r.witness)},
              {"method", r.method},
              {"diagnostics", std::move(diag)}};
}

inline Json dilation_to_json(const Dilation& dil) {
  return Json{{"r", dil.r},
              {"U", matrix_to_json(dil.u)},
              {"V", matrix_to_json(dil.v)},
              {"residuals", dil.residuals},
              {"unitarity_defect", dil.unitarity_defect},
              {"isometry_defect", dil.isometry_defect},
              {"polar_correction", dil.polar_correction}};
}

inline Json decomposition_to_json(const AtomicDecomposition& dec) {
  Json atoms = Json::array();
  for (const auto& [lambda, q] : dec.atoms)
    atoms.push_back(Json{{"lambda", complex_to_json(lambda)}, {"Q", matrix_to_json(q)}});
  return Json{{"d", dec.d},
              {"ell", dec.ell()},
              {"atoms", std::move(atoms)},
              {"partition_residual", dec.partition_residual},
              {"moment_residuals", dec.moment_residuals}};
}

inline AtomicDecomposition decomposition_from_json(const Json& doc) {
  if (!doc.is_object() || !doc.contains("d") || !doc.contains("atoms"))
    throw Error(ErrorCode::InvalidInput, "decomposition document needs d and atoms");
  AtomicDecomposition dec;
  dec.d = doc["d"].get<Index>();
  const Json& atoms = doc["atoms"];
  if (!atoms.is_array() || atoms.empty())
    throw Error(ErrorCode::InvalidInput, "atoms must be a nonempty array");
  Index n = -1;
  for (const Json& atom : atoms) {
    if (!atom.is_object() || !atom.contains("lambda") || !atom.contains("Q"))
      throw Error(ErrorCode::InvalidInput, "each atom needs lambda and Q");
    const Complex lambda = complex_from_json(atom["lambda"], "atom lambda");
    const Json& qj = atom["Q"];
    if (!qj.is_array() || qj.empty())
      throw Error(ErrorCode::InvalidInput, "atom Q must be a matrix");
    const Index rows = static_cast<Index>(qj.size());
    if (n < 0) n = rows;
    dec.atoms.emplace_back(lambda, matrix_from_json(qj, n, n, "atom Q"));
  }
  return dec;
}

inline Json membership_to_json(const MembershipReport& r) {
  Json out{{"point", vector_to_json(r.point)},
           {"nu", r.nu_value},
           {"inside", r.inside}};
  if (r.certificate) {
    Json atoms = Json::array();
    for (const auto& [lambda, q] : r.certificate->atoms)
      atoms.push_back(Json{{"lambda", complex_to_json(lambda)}, {"weight", q(0, 0).real()}});
    out["certificate"] = Json{{"atoms", std::move(atoms)},
                              {"partition_residual", r.certificate->partition_residual},
                              {"moment_residuals", r.certificate->moment_residuals}};
  }
  return out;
}

inline Json metric_to_json(const MetricReport& r) {
  return Json{{"forward", r.forward}, {"backward", r.backward}, {"value", r.value}};
}

inline Json norm_check_to_json(const NormCheckReport& r) {
  return Json{{"trials", r.trials},
              {"violations", r.violations},
              {"worst_slack", r.worst_slack}};
}

inline Json ball_report_to_json(const BallInclusionReport& r) {
  return Json{{"d", r.d},
              {"samples", r.samples},
              {"inner_violations", r.inner_violations},
              {"outer_violations", r.outer_violations},
              {"max_boundary_nu_error", r.max_boundary_nu_error}};
}

inline Json cd_report_to_json(const CdSearchReport& r) {
  return Json{{"d", r.d},
              {"n", r.n},
              {"best_tuple", tuple_to_json(r.best_tuple)},
              {"rho", r.rho_value},
              {"rho_witness", witness_to_json(r.rho_witness)},
              {"omega", r.omega_value},
              {"omega_witness", witness_to_json(r.omega_witness)},
              {"ratio", r.ratio},
              {"first_pass_ratio", r.first_pass_ratio},
              {"iterations", r.iterations},
              {"accepted_steps", r.accepted_steps},
              {"seed", r.seed},
              {"delta_bound", r.delta_bound},
              {"omega_certification", r.omega_certification}};
}

}  // namespace tcd

#endif  // TCD_IO_HPP
