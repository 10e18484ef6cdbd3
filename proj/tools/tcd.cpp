// tcd - command-line front end: Toeplitz moduli, unitary power dilations,
// atomic decompositions, hull membership, and scaling-constant searches for
// d-tuples of complex matrices. JSON in, JSON report out; deterministic
// given --seed. Exit codes: 0 ok, 2 invalid input/schema, 3 numerical
// failure, 4 precondition violation.

#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "tcd/tcd.hpp"

namespace {

using tcd::Json;

struct CommonFlags {
  std::string input;
  std::string other;
  std::string out;
  std::uint64_t seed = 0;
  double tol_override = -1.0;  // overrides psd_tol and residual_tol jointly
  std::string format = "json";
  bool timing = false;
};

tcd::Tolerances resolve_tolerances(const CommonFlags& flags) {
  tcd::Tolerances tol;
  if (flags.tol_override > 0.0) {
    tol.psd_tol = flags.tol_override;
    tol.residual_tol = flags.tol_override;
  }
  tol.validate();
  return tol;
}

Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw tcd::Error(tcd::ErrorCode::InvalidInput, "cannot open input file " + path);
  Json doc;
  try {
    in >> doc;
  } catch (const Json::exception& e) {
    throw tcd::Error(tcd::ErrorCode::InvalidInput,
                     std::string("input is not valid JSON: ") + e.what());
  }
  return doc;
}

void emit(const std::string& text, const CommonFlags& flags) {
  if (flags.out.empty()) {
    std::cout << text << "\n";
    return;
  }
  std::ofstream out(flags.out);
  if (!out)
    throw tcd::Error(tcd::ErrorCode::InvalidInput, "cannot open output file " + flags.out);
  out << text << "\n";
}

// Flat key/value table; only scalar-valued commands may use it.
std::string to_csv(const std::vector<std::pair<std::string, std::string>>& rows) {
  std::ostringstream out;
  out << "key,value";
  for (const auto& [key, value] : rows) out << "\n" << key << "," << value;
  return out.str();
}

std::string format_double(double v) {
  std::ostringstream out;
  out << std::setprecision(17) << v;
  return out.str();
}

class ReportClock {
 public:
  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(clock_type::now() - start_).count();
  }

 private:
  using clock_type = std::chrono::steady_clock;
  clock_type::time_point start_ = clock_type::now();
};

Json make_report(const std::string& command, const std::string& input_digest,
                 Json outputs, const CommonFlags& flags, const tcd::Tolerances& tol,
                 const ReportClock& clock) {
  Json report{{"command", command},
              {"input_digest", input_digest},
              {"outputs", std::move(outputs)},
              {"tolerances", tcd::tolerances_to_json(tol)},
              {"seed", flags.seed},
              {"version", tcd::kVersion}};
  if (flags.timing) report["timing"] = Json{{"wall_ms", clock.elapsed_ms()}};
  return report;
}

void add_common(CLI::App* cmd, CommonFlags& flags, bool with_input = true) {
  if (with_input)
    cmd->add_option("--input", flags.input, "tuple document (JSON)")->required();
  cmd->add_option("--out", flags.out, "write the report here instead of stdout");
  cmd->add_option("--seed", flags.seed, "RNG seed (default 0)");
  cmd->add_option("--tol", flags.tol_override,
                  "override psd and residual tolerances jointly")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--format", flags.format, "json or csv (csv only for scalar tables)")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd->add_flag("--timing", flags.timing, "include wall time in the report");
}

void require_json_format(const CommonFlags& flags) {
  if (flags.format != "json")
    throw tcd::Error(tcd::ErrorCode::InvalidInput,
                     "csv output is only available for scalar tables");
}

tcd::Vector parse_point(const std::string& text) {
  std::istringstream in(text);
  std::vector<tcd::Complex> entries;
  std::string token;
  while (in >> token) {
    const auto comma = token.find(',');
    if (comma == std::string::npos)
      throw tcd::Error(tcd::ErrorCode::InvalidInput,
                       "point entries must be re,im pairs separated by spaces");
    try {
      const double re = std::stod(token.substr(0, comma));
      const double im = std::stod(token.substr(comma + 1));
      entries.emplace_back(re, im);
    } catch (const std::exception&) {
      throw tcd::Error(tcd::ErrorCode::InvalidInput, "point entry is not numeric: " + token);
    }
  }
  if (entries.empty())
    throw tcd::Error(tcd::ErrorCode::InvalidInput, "point must have at least one entry");
  tcd::Vector w(static_cast<tcd::Index>(entries.size()));
  for (std::size_t i = 0; i < entries.size(); ++i) w(static_cast<tcd::Index>(i)) = entries[i];
  return w;
}

const char* modulus_kind_name(tcd::ModulusKind kind) {
  switch (kind) {
    case tcd::ModulusKind::Rho: return "rho";
    case tcd::ModulusKind::Omega: return "omega";
    case tcd::ModulusKind::SpectralRadius: return "r";
    case tcd::ModulusKind::GelfandRadius: return "rG";
  }
  return "unknown";
}

void emit_modulus(const std::string& command, const tcd::ModulusReport& report,
                  const std::string& input_digest, const CommonFlags& flags,
                  const tcd::Tolerances& tol, const ReportClock& clock) {
  if (flags.format == "csv") {
    emit(to_csv({{"kind", modulus_kind_name(report.kind)},
                 {"value", format_double(report.value)},
                 {"method", report.method}}),
         flags);
    return;
  }
  Json outputs = tcd::modulus_report_to_json(report);
  outputs["kind"] = modulus_kind_name(report.kind);
  emit(make_report(command, input_digest, std::move(outputs), flags, tol, clock).dump(2), flags);
}

int run(int argc, char** argv) {
  CLI::App app{"Toeplitz-contractive tuples: moduli, dilations, decompositions"};
  app.require_subcommand(1);

  CommonFlags flags;

  auto* cmd_rho = app.add_subcommand("rho", "Toeplitz modulus of a tuple");
  add_common(cmd_rho, flags);

  auto* cmd_omega = app.add_subcommand("omega", "Toeplitz numerical radius (certified lower bound)");
  add_common(cmd_omega, flags);
  int starts = 64, iters = 500;
  cmd_omega->add_option("--starts", starts, "multistart restarts (default 64)");
  cmd_omega->add_option("--iters", iters, "per-start iteration cap (default 500)");

  auto* cmd_sr = app.add_subcommand("spectral-radius", "Toeplitz spectral radius of a commuting tuple");
  add_common(cmd_sr, flags);
  bool gelfand = false;
  cmd_sr->add_flag("--gelfand", gelfand, "use the Gelfand spectrum (normal tuples)");

  auto* cmd_check = app.add_subcommand("check", "tensor-norm inequality spot check");
  add_common(cmd_check, flags);
  tcd::NormCheckOptions check_opts;
  cmd_check->add_option("--trials", check_opts.trials, "number of random coefficient sets");
  cmd_check->add_option("--m-max", check_opts.m_max, "largest coefficient size");
  cmd_check->add_option("--grid", check_opts.grid, "circle grid size (default 2048)");

  auto* cmd_dilate = app.add_subcommand("dilate", "unitary power dilation of a contractive tuple");
  add_common(cmd_dilate, flags);

  auto* cmd_decompose = app.add_subcommand("decompose", "atomic decomposition of a contractive tuple");
  add_common(cmd_decompose, flags);
  double cluster_tol = 1e-7;
  cmd_decompose->add_option("--cluster-tol", cluster_tol, "angular atom clustering tolerance");

  auto* cmd_member = app.add_subcommand("member", "membership of a point in the power-circle hull");
  add_common(cmd_member, flags, /*with_input=*/false);
  std::string point_text;
  tcd::Index member_d = 0;
  cmd_member->add_option("--point", point_text, "point as 're,im re,im ...'")->required();
  cmd_member->add_option("--d", member_d, "expected dimension (cross-checked)");

  auto* cmd_metric = app.add_subcommand("metric", "symmetrized Toeplitz-modulus distance");
  add_common(cmd_metric, flags);
  cmd_metric->add_option("--other", flags.other, "second tuple document")->required();

  auto* cmd_cd = app.add_subcommand("cd-search", "hill-climb lower bound for the scaling constant");
  add_common(cmd_cd, flags, /*with_input=*/false);
  tcd::CdSearchOptions cd_opts;
  cmd_cd->add_option("--d", cd_opts.d, "tuple length")->required();
  cmd_cd->add_option("--n", cd_opts.n, "matrix size")->required();
  cmd_cd->add_option("--iters", cd_opts.iters, "hill-climb iterations (default 5000)");
  cmd_cd->add_option("--scale", cd_opts.proposal_scale, "initial proposal scale");
  cmd_cd->add_option("--starts", cd_opts.search_starts, "omega restarts during the climb");

  auto* cmd_generate = app.add_subcommand("generate", "random Toeplitz-contractive tuple");
  add_common(cmd_generate, flags, /*with_input=*/false);
  tcd::Index gen_d = 1, gen_n = 2, gen_big_n = 0;
  cmd_generate->add_option("--d", gen_d, "tuple length")->required();
  cmd_generate->add_option("--n", gen_n, "matrix size")->required();
  cmd_generate->add_option("--N", gen_big_n, "ambient unitary size (default 2n)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // bad flags are an input error
  }

  const tcd::Tolerances tol = resolve_tolerances(flags);
  const ReportClock clock;

  if (cmd_rho->parsed()) {
    const Json doc = load_json(flags.input);
    const tcd::MatrixTuple t = tcd::tuple_from_json(doc);
    emit_modulus("rho", tcd::rho(t, tol), tcd::digest(doc), flags, tol, clock);
  } else if (cmd_omega->parsed()) {
    const Json doc = load_json(flags.input);
    const tcd::MatrixTuple t = tcd::tuple_from_json(doc);
    tcd::OmegaOptions opts;
    opts.starts = starts;
    opts.max_iters = iters;
    opts.seed = flags.seed;
    emit_modulus("omega", tcd::omega(t, opts, tol), tcd::digest(doc), flags, tol, clock);
  } else if (cmd_sr->parsed()) {
    const Json doc = load_json(flags.input);
    const tcd::MatrixTuple t = tcd::tuple_from_json(doc);
    const tcd::ModulusReport report = gelfand
                                          ? tcd::gelfand_spectral_radius(t, flags.seed, tol)
                                          : tcd::spectral_radius(t, flags.seed, tol);
    emit_modulus("spectral_radius", report, tcd::digest(doc), flags, tol, clock);
  } else if (cmd_check->parsed()) {
    require_json_format(flags);
    const Json doc = load_json(flags.input);
    const tcd::MatrixTuple t = tcd::tuple_from_json(doc);
    check_opts.seed = flags.seed;
    const tcd::NormCheckReport report = tcd::check_norm_inequality(t, check_opts, tol);
    emit(make_report("check", tcd::digest(doc), tcd::norm_check_to_json(report), flags, tol,
                     clock)
             .dump(2),
         flags);
  } else if (cmd_dilate->parsed()) {
    require_json_format(flags);
    const Json doc = load_json(flags.input);
    const tcd::MatrixTuple t = tcd::tuple_from_json(doc);
    const tcd::Dilation dil = tcd::dilate(t, tol);
    emit(make_report("dilate", tcd::digest(doc), tcd::dilation_to_json(dil), flags, tol, clock)
             .dump(2),
         flags);
  } else if (cmd_decompose->parsed()) {
    require_json_format(flags);
    const Json doc = load_json(flags.input);
    const tcd::MatrixTuple t = tcd::tuple_from_json(doc);
    const tcd::AtomicDecomposition dec = tcd::decompose(t, cluster_tol, tol);
    emit(make_report("decompose", tcd::digest(doc), tcd::decomposition_to_json(dec), flags,
                     tol, clock)
             .dump(2),
         flags);
  } else if (cmd_member->parsed()) {
    const tcd::Vector w = parse_point(point_text);
    if (member_d > 0 && member_d != w.size())
      throw tcd::Error(tcd::ErrorCode::InvalidInput,
                       "--d disagrees with the number of point entries");
    const tcd::MembershipReport report = tcd::membership(w, tol);
    if (flags.format == "csv") {
      emit(to_csv({{"nu", format_double(report.nu_value)},
                   {"inside", report.inside ? "true" : "false"}}),
           flags);
    } else {
      emit(make_report("member", tcd::digest(tcd::vector_to_json(w)),
                       tcd::membership_to_json(report), flags, tol, clock)
               .dump(2),
           flags);
    }
  } else if (cmd_metric->parsed()) {
    const Json doc_s = load_json(flags.input);
    const Json doc_t = load_json(flags.other);
    const tcd::MatrixTuple s = tcd::tuple_from_json(doc_s);
    const tcd::MatrixTuple t = tcd::tuple_from_json(doc_t);
    const tcd::MetricReport report = tcd::metric_drho(s, t, tol);
    if (flags.format == "csv") {
      emit(to_csv({{"forward", format_double(report.forward)},
                   {"backward", format_double(report.backward)},
                   {"value", format_double(report.value)}}),
           flags);
    } else {
      Json outputs = tcd::metric_to_json(report);
      outputs["other_digest"] = tcd::digest(doc_t);
      emit(make_report("metric", tcd::digest(doc_s), std::move(outputs), flags, tol, clock)
               .dump(2),
           flags);
    }
  } else if (cmd_cd->parsed()) {
    require_json_format(flags);
    cd_opts.seed = flags.seed;
    const tcd::CdSearchReport report = tcd::cd_search(cd_opts, tol);
    emit(make_report("cd_search", "none", tcd::cd_report_to_json(report), flags, tol, clock)
             .dump(2),
         flags);
  } else if (cmd_generate->parsed()) {
    require_json_format(flags);
    if (gen_big_n == 0) gen_big_n = 2 * gen_n;
    const tcd::MatrixTuple t =
        tcd::random_contractive_tuple(gen_d, gen_n, gen_big_n, flags.seed, tol);
    Json metadata{{"generator", "haar-unitary-compression"},
                  {"seed", flags.seed},
                  {"ambient", gen_big_n}};
    const Json tuple_doc = tcd::tuple_to_json(t, std::move(metadata));
    Json report = make_report("generate", tcd::digest(tuple_doc),
                              Json{{"tuple", tuple_doc}}, flags, tol, clock);
    if (!flags.out.empty()) {
      // the file gets the bare tuple document so it can feed --input directly
      std::ofstream out(flags.out);
      if (!out)
        throw tcd::Error(tcd::ErrorCode::InvalidInput,
                         "cannot open output file " + flags.out);
      out << tuple_doc.dump(2) << "\n";
      std::cout << report.dump(2) << "\n";
    } else {
      std::cout << report.dump(2) << "\n";
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const tcd::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.category()) {
      case tcd::ErrorCategory::InvalidInput: return 2;
      case tcd::ErrorCategory::Numerical: return 3;
      case tcd::ErrorCategory::Precondition: return 4;
    }
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
