// Copyright 2026 The qnsr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.h"

#include <unistd.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <system_error>

#include "CLI11.hpp"
#include "json.hpp"
#include "qnsr/dephasing_study.h"
#include "qnsr/estimation_core.h"
#include "qnsr/mc_estimation.h"

namespace qnsr::cli {

namespace {

using json = nlohmann::ordered_json;
using std::numbers::pi;

struct FamilyOptions {
  std::string family = "dephasing";
  std::string h = "number";
  std::string state;
  double alpha = 1.0;
  double r = 0.0;
  double beta = 0.0;
  int dim = 0;
  double phi_true = 0.0;
  // Mean excitation; when set, (alpha, r) is the optimal split at this beta.
  std::optional<double> n;
};

struct OutputOptions {
  std::string format = "json";
  std::string out;
};

double parse_number(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw ConfigError("cannot parse number '" + std::string(s) + "'");
  }
  return v;
}

std::pair<std::string, std::string> split_tag(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) return {text, ""};
  return {text.substr(0, colon), text.substr(colon + 1)};
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

Operator half_sigma_z() {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 0.5;
  m(1, 1) = -0.5;
  return Operator::hermitian(m);
}

// Probe state for the pure-unitary family; `dim` is 0 when not configured.
StateVector pure_probe(const FamilyOptions& o, int dim) {
  const auto [tag, arg] = split_tag(o.state);
  if (tag.empty() || tag == "gaussian") {
    double alpha = o.alpha;
    double r = o.r;
    if (!arg.empty()) {
      const auto comma = arg.find(',');
      require(comma != std::string::npos, "--state gaussian:<alpha>,<r> expected");
      alpha = parse_number(arg.substr(0, comma));
      r = parse_number(arg.substr(comma + 1));
    }
    GaussianProbeSpec spec{alpha, r, 0};
    spec.dim = dim > 0 ? dim : probe_truncation(spec.alpha, spec.r);
    return gaussian_probe(spec);
  }
  if (tag == "coherent") {
    const double alpha = parse_number(arg);
    GaussianProbeSpec spec{alpha, 0.0, 0};
    spec.dim = dim > 0 ? dim : probe_truncation(spec.alpha, spec.r);
    return gaussian_probe(spec);
  }
  if (tag == "fock") {
    const double n = parse_number(arg);
    require(n >= 0 && n == std::floor(n), "--state fock:<n> needs a non-negative integer");
    const int d = dim > 0 ? dim : std::max(16, static_cast<int>(n) + 2);
    return StateVector::basis(d, static_cast<int>(n));
  }
  if (tag == "plus") {
    const int d = dim > 0 ? dim : 2;
    Vector v = Vector::Zero(d);
    v[0] = v[1] = 1.0;
    return StateVector::normalized(v);
  }
  throw ConfigError("unknown --state '" + o.state + "' (gaussian, coherent:a, fock:n, plus)");
}

struct BuiltFamily {
  ParamFamily family;
  std::optional<PhaseFamilySpec> phase;
};

// Replaces (alpha, r) by the optimal split of --N, when given.
void resolve_probe(FamilyOptions& o) {
  if (!o.n) return;
  require(*o.n >= 0.0, "--N must be non-negative");
  require(o.beta >= 0.0, "--beta must be non-negative");
  const OptimalProbe p = optimal_probe(*o.n, o.beta);
  o.alpha = p.alpha;
  o.r = p.r;
}

BuiltFamily build_family(const FamilyOptions& o) {
  require(o.dim == 0 || o.dim >= 2, "--dim must be >= 2");
  if (o.family == "dephasing") {
    require(o.beta >= 0.0, "--beta must be non-negative");
    PhaseFamilySpec spec;
    GaussianProbeSpec probe{o.alpha, o.r, o.dim};
    if (o.dim == 0) probe.dim = probe_truncation(o.alpha, o.r);
    spec.probe = probe;
    spec.diffusion = DiffusionParams(o.beta);
    return {dephasing_family(spec), spec};
  }
  if (o.family == "pure") {
    const auto [tag, arg] = split_tag(o.h);
    std::optional<Operator> h;
    int dim = o.dim;
    if (tag == "file") {
      h = read_observable_file(arg);
      require(dim == 0 || dim == h->dim(), "--dim disagrees with the generator file");
      dim = h->dim();
    } else if (tag == "sz") {
      require(dim == 0 || dim == 2, "--h sz is a qubit generator (dim 2)");
      h = half_sigma_z();
      dim = 2;
    } else if (tag != "number") {
      throw ConfigError("unknown --h '" + o.h + "' (number, sz, file:PATH)");
    }
    const StateVector psi = pure_probe(o, dim);
    if (!h) h = number_operator(psi.dim());
    require(h->dim() == psi.dim(), "generator and state dimensions differ");
    return {pure_unitary_family(*h, psi), std::nullopt};
  }
  throw ConfigError("unknown --family '" + o.family + "' (pure, dephasing)");
}

void add_family_options(CLI::App* cmd, FamilyOptions& o) {
  // --h names the generator, so help is --help only.
  cmd->set_help_flag("--help", "Print this help message and exit");
  cmd->add_option("--family", o.family, "pure | dephasing")->capture_default_str();
  cmd->add_option("--h", o.h, "pure-family generator: number | sz | file:PATH")
      ->capture_default_str();
  cmd->add_option("--state", o.state, "pure-family probe: gaussian[:a,r] | coherent:a | fock:n | plus");
  cmd->add_option("--alpha", o.alpha, "displacement amplitude")->capture_default_str();
  cmd->add_option("--r", o.r, "squeezing parameter")->capture_default_str();
  cmd->add_option("--beta", o.beta, "phase-diffusion strength")->capture_default_str();
  CLI::Option* n_opt =
      cmd->add_option("--N", o.n, "mean excitation; picks the optimal (alpha, r) split");
  cmd->get_option("--alpha")->excludes(n_opt);
  cmd->get_option("--r")->excludes(n_opt);
  cmd->add_option("--dim", o.dim, "Fock truncation (default: smallest dim leaking < 1e-8)");
  cmd->add_option("--phi-true,--x", o.phi_true, "parameter value")->capture_default_str();
}

void add_output_options(CLI::App* cmd, OutputOptions& o, const std::string& default_format) {
  o.format = default_format;
  cmd->add_option("--format", o.format, "csv | json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  cmd->add_option("--out", o.out, "output path (default stdout)");
}

std::string csv_cell(const json& v) {
  if (v.is_number_float()) return format_double(v.get<double>());
  if (v.is_boolean()) return v.get<bool>() ? "1" : "0";
  if (v.is_null()) return "inf";
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

// Flat record -> header line + value line.
std::string record_csv(const json& record) {
  std::string header;
  std::string values;
  for (auto it = record.begin(); it != record.end(); ++it) {
    if (it.value().is_object() || it.value().is_array()) continue;
    if (!header.empty()) {
      header += ',';
      values += ',';
    }
    header += it.key();
    values += csv_cell(it.value());
  }
  return header + "\n" + values + "\n";
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

void emit(const OutputOptions& o, const std::string& content, std::ostream& out) {
  if (o.out.empty()) {
    out << content;
  } else {
    write_atomically(o.out, content);
  }
}

json sensitivity_json(const SensitivityReport& rep) {
  json j;
  j["mean"] = rep.mean;
  j["variance"] = rep.variance;
  j["slope"] = rep.slope;
  j["nsr"] = finite_or_null(rep.nsr);
  j["fisher"] = rep.fisher;
  return j;
}

int cmd_qfi(FamilyOptions fo, const OutputOptions& oo, std::ostream& out) {
  resolve_probe(fo);
  const BuiltFamily built = build_family(fo);
  const ParamFamily& fam = built.family;
  const Sld l = sld(fam, fo.phi_true);
  const double info = qfi(fam, fo.phi_true);
  Eigen::SelfAdjointEigenSolver<Matrix> es(l.op.matrix(), Eigen::EigenvaluesOnly);

  json j;
  j["command"] = "qfi";
  j["family"] = fo.family;
  j["x"] = fo.phi_true;
  j["dim"] = fam.dim();
  j["qfi"] = info;
  j["sld_min_eigenvalue"] = es.eigenvalues().minCoeff();
  j["sld_max_eigenvalue"] = es.eigenvalues().maxCoeff();
  j["sld_support_warning"] = l.support_warning;
  if (const auto& pure = fam.pure_unitary()) {
    const double four_var = pure_unitary_qfi(pure->generator, pure->probe);
    j["four_var_h"] = four_var;
    j["pure_relative_difference"] = four_var != 0.0 ? std::abs(info - four_var) / four_var : std::abs(info);
  }
  if (built.phase) {
    j["alpha"] = fo.alpha;
    j["r"] = fo.r;
    j["beta"] = fo.beta;
    j["analytic_fnsr"] = analytic_fnsr(fo.r, fo.alpha, fo.beta);
  }

  emit(oo, oo.format == "json" ? j.dump(2) + "\n" : record_csv(j), out);
  return kExitOk;
}

int cmd_nsr(FamilyOptions fo, const std::string& observable, std::optional<double> phi_exp,
            const OutputOptions& oo, std::ostream& out) {
  resolve_probe(fo);
  const BuiltFamily built = build_family(fo);
  const ParamFamily& fam = built.family;
  const double angle = phi_exp.value_or(optimal_calibration(fo.phi_true));
  const auto [tag, arg] = split_tag(observable);

  std::optional<Operator> m;
  if (tag == "quadrature") {
    m = quadrature(angle, fam.dim());
  } else if (tag == "number") {
    m = number_operator(fam.dim());
  } else if (tag == "file") {
    m = read_observable_file(arg);
    require(m->dim() == fam.dim(), "observable file dimension differs from the family");
  } else {
    throw ConfigError("unknown --observable '" + observable + "' (quadrature, number, file:PATH)");
  }

  const SensitivityReport rep = assess_observable(fam, fo.phi_true, *m);
  json j;
  j["command"] = "nsr";
  j["family"] = fo.family;
  j["observable"] = tag;
  j["x"] = fo.phi_true;
  if (tag == "quadrature") j["phi_exp"] = angle;
  j["dim"] = fam.dim();
  j.update(sensitivity_json(rep));
  if (built.phase && tag == "quadrature") j["analytic_fnsr"] = analytic_fnsr(fo.r, fo.alpha, fo.beta);

  emit(oo, oo.format == "json" ? j.dump(2) + "\n" : record_csv(j), out);
  return kExitOk;
}

int cmd_fig2(const std::string& grid_beta2, const std::string& grid_n, const std::string& out_dir,
             const std::string& format, std::ostream& out) {
  const std::vector<double> t_grid = parse_grid(grid_beta2, true);
  const std::vector<double> n_grid = parse_grid(grid_n, true);
  const EnhancementTable table = enhancement_scan(t_grid, n_grid);

  std::string left = "two_beta_sq,N,ratio,enhanced\n";
  for (const EnhancementCell& c : table.cells) {
    left += format_double(c.two_beta_sq) + ',' + format_double(c.n) + ',' + format_double(c.ratio) +
            ',' + (c.enhanced ? "1" : "0") + '\n';
  }
  std::string right = "two_beta_sq,max_ratio,argmax_N\n";
  for (const EnhancementRow& row : table.rows) {
    right += format_double(row.two_beta_sq) + ',' + format_double(row.max_ratio) + ',' +
             format_double(row.argmax_n) + '\n';
  }
  const double lo = *std::min_element(t_grid.begin(), t_grid.end());
  const double hi = *std::max_element(t_grid.begin(), t_grid.end());
  const double threshold = locate_enhancement_threshold(n_grid, lo, hi);

  const std::filesystem::path dir(out_dir);
  const std::filesystem::path left_path = dir / "fig2_left.csv";
  const std::filesystem::path right_path = dir / "fig2_right.csv";
  write_atomically(left_path, left);
  write_atomically(right_path, right);

  if (format == "json") {
    json j;
    j["command"] = "fig2";
    j["threshold_two_beta_sq"] = threshold;
    j["left"] = left_path.string();
    j["right"] = right_path.string();
    j["cells"] = table.cells.size();
    out << j.dump(2) << "\n";
  } else {
    out << "threshold_two_beta_sq\n" << format_double(threshold) << "\n";
  }
  return kExitOk;
}

struct McOptions {
  std::uint64_t nu = 100000;
  int repeats = 200;
  std::uint64_t seed = kDefaultSeed;
  std::optional<double> phi_exp;
  bool adaptive = false;
  int rounds = 8;
  std::uint64_t batch = 1000;
};

int cmd_mc(FamilyOptions fo, const McOptions& mo, const OutputOptions& oo, std::ostream& out) {
  require(mo.nu >= 1, "--nu must be positive");
  require(mo.repeats >= 2, "--repeats must be >= 2");
  fo.family = "dephasing";
  resolve_probe(fo);
  const BuiltFamily built = build_family(fo);
  const PhaseFamilySpec& spec = *built.phase;
  const double predicted_fnsr = analytic_fnsr(fo.r, fo.alpha, fo.beta);

  std::string text;
  if (oo.format == "csv") {
    if (mo.adaptive) {
      text = "round,phi_exp,fisher,estimate,out_of_range\n";
      const AdaptiveRun run = adaptive_calibrate(spec, fo.phi_true, mo.batch, mo.rounds, mo.seed);
      for (const AdaptiveRound& r : run.rounds) {
        text += std::to_string(r.round) + ',' + format_double(r.phi_exp) + ',' +
                format_double(r.fisher) + ',' + format_double(r.estimate) + ',' +
                (r.out_of_range ? "1" : "0") + '\n';
      }
    } else {
      TrialConfig cfg{mo.nu, mo.repeats, mo.seed, mo.phi_exp};
      const TrialRun run = run_trials(spec, fo.phi_true, cfg);
      text = "repeat,nu,sample_mean,estimate,out_of_range\n";
      for (const TrialReport& t : run.trials) {
        text += std::to_string(t.repeat) + ',' + std::to_string(t.nu) + ',' +
                format_double(t.sample_mean) + ',' + format_double(t.estimate) + ',' +
                (t.out_of_range ? "1" : "0") + '\n';
      }
    }
    emit(oo, text, out);
    return kExitOk;
  }

  if (mo.adaptive) {
    const AdaptiveRun run = adaptive_calibrate(spec, fo.phi_true, mo.batch, mo.rounds, mo.seed);
    for (const AdaptiveRound& r : run.rounds) {
      json j;
      j["type"] = "round";
      j["round"] = r.round;
      j["phi_exp"] = r.phi_exp;
      j["fisher"] = r.fisher;
      j["estimate"] = r.estimate;
      j["out_of_range"] = r.out_of_range;
      text += j.dump() + "\n";
    }
    json s;
    s["type"] = "adaptive_summary";
    s["batch"] = mo.batch;
    s["rounds"] = mo.rounds;
    s["seed"] = mo.seed;
    s["final_phi_exp"] = run.final_phi_exp;
    s["final_fisher"] = run.final_fisher;
    s["optimal_fisher"] = run.optimal_fisher;
    s["final_over_optimal"] = run.final_fisher / run.optimal_fisher;
    s["aborted"] = run.aborted;
    s["abort_round"] = run.abort_round;
    text += s.dump() + "\n";
    emit(oo, text, out);
    return kExitOk;
  }

  TrialConfig cfg{mo.nu, mo.repeats, mo.seed, mo.phi_exp};
  const TrialRun run = run_trials(spec, fo.phi_true, cfg);
  for (const TrialReport& t : run.trials) {
    json j;
    j["type"] = "trial";
    j["repeat"] = t.repeat;
    j["nu"] = t.nu;
    j["sample_mean"] = t.sample_mean;
    j["estimate"] = t.estimate;
    j["out_of_range"] = t.out_of_range;
    text += j.dump() + "\n";
  }
  const TrialSummary& s = run.summary;
  json j;
  j["type"] = "summary";
  j["nu"] = s.nu;
  j["repeats"] = s.repeats;
  j["seed"] = s.seed;
  j["phi_true"] = s.phi_true;
  j["phi_exp"] = s.phi_exp;
  j["mean_estimate"] = s.mean_estimate;
  j["empirical_variance"] = s.empirical_variance;
  j["predicted_variance"] = s.predicted_variance;
  j["fisher"] = s.sensitivity.fisher;
  j["analytic_fnsr"] = predicted_fnsr;
  j["nu_var_fisher"] = static_cast<double>(s.nu) * s.empirical_variance * s.sensitivity.fisher;
  j["out_of_range_count"] = s.out_of_range_count;
  j["small_noise_ratio"] = s.small_noise_ratio;
  text += j.dump() + "\n";
  emit(oo, text, out);
  return kExitOk;
}

int cmd_scan(const FamilyOptions& fo, const std::string& grid_r, bool numeric,
             const OutputOptions& oo, std::ostream& out) {
  require(fo.beta >= 0.0, "--beta must be non-negative");
  const std::vector<double> rs = parse_grid(grid_r, false);
  json rows = json::array();
  require(!fo.n || *fo.n >= 0.0, "--N must be non-negative");
  std::string csv = numeric ? "r,alpha,fnsr,fisher_numeric,qfi\n" : "r,alpha,fnsr\n";
  for (double r : rs) {
    // At fixed --N the displacement takes up the remaining excitations;
    // rows with sinh^2 r > N are skipped.
    double alpha = fo.alpha;
    if (fo.n) {
      const double rest = *fo.n - std::sinh(r) * std::sinh(r);
      if (rest < 0.0) continue;
      alpha = std::sqrt(rest);
    }
    const double f = analytic_fnsr(r, alpha, fo.beta);
    json row;
    row["r"] = r;
    row["alpha"] = alpha;
    row["fnsr"] = f;
    csv += format_double(r) + ',' + format_double(alpha) + ',' + format_double(f);
    if (numeric) {
      FamilyOptions cell = fo;
      cell.family = "dephasing";
      cell.alpha = alpha;
      cell.r = r;
      const BuiltFamily built = build_family(cell);
      const SensitivityReport rep = assess_observable(
          built.family, fo.phi_true, quadrature(optimal_calibration(fo.phi_true), built.family.dim()));
      const double info = qfi(built.family, fo.phi_true);
      row["fisher_numeric"] = rep.fisher;
      row["qfi"] = info;
      csv += ',' + format_double(rep.fisher) + ',' + format_double(info);
    }
    csv += '\n';
    rows.push_back(row);
  }
  if (oo.format == "json") {
    json j;
    j["command"] = "scan";
    if (fo.n) {
      j["N"] = *fo.n;
    } else {
      j["alpha"] = fo.alpha;
    }
    j["beta"] = fo.beta;
    j["r_max"] = finite_or_null(r_max(fo.beta));
    j["rows"] = rows;
    emit(oo, j.dump(2) + "\n", out);
  } else {
    emit(oo, csv, out);
  }
  return kExitOk;
}

}  // namespace

Complex parse_complex(std::string_view token) {
  if (token.empty()) throw ConfigError("empty complex entry");
  if (token.back() != 'j') return {parse_number(token), 0.0};
  const std::string_view body = token.substr(0, token.size() - 1);
  // Split at the last sign that is neither leading nor part of an exponent.
  std::size_t split = std::string_view::npos;
  for (std::size_t k = body.size(); k-- > 1;) {
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  const std::string_view re = split == std::string_view::npos ? std::string_view{} : body.substr(0, split);
  std::string_view im = split == std::string_view::npos ? body : body.substr(split);
  double im_value = 0.0;
  if (im == "+" || im.empty()) {
    im_value = 1.0;
  } else if (im == "-") {
    im_value = -1.0;
  } else {
    im_value = parse_number(im);
  }
  return {re.empty() ? 0.0 : parse_number(re), im_value};
}

Operator parse_observable(std::istream& in) {
  std::string keyword;
  long long n = 0;
  if (!(in >> keyword >> n) || keyword != "dim") {
    throw ConfigError("observable file must start with 'dim <n>'");
  }
  if (n < 1 || n > 4096) throw ConfigError("observable dimension out of range");
  Matrix m(n, n);
  std::string token;
  for (long long k = 0; k < n * n; ++k) {
    if (!(in >> token)) {
      throw ConfigError("observable file ended after " + std::to_string(k) + " of " +
                        std::to_string(n * n) + " entries");
    }
    m(k / n, k % n) = parse_complex(token);
  }
  if (in >> token) throw ConfigError("observable file has trailing entries");
  return Operator::hermitian(std::move(m));
}

Operator read_observable_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open observable file '" + path.string() + "'");
  return parse_observable(in);
}

std::vector<double> parse_grid(const std::string& text, bool log_spaced) {
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ':')) parts.push_back(part);
    require(parts.size() == 3, "grid '" + text + "' must be lo:hi:count");
    const double lo = parse_number(parts[0]);
    const double hi = parse_number(parts[1]);
    const double count = parse_number(parts[2]);
    require(count >= 2 && count == std::floor(count) && count <= 1e6, "grid count must be an integer >= 2");
    require(hi > lo, "grid '" + text + "' needs hi > lo");
    if (log_spaced) {
      require(lo > 0.0, "log-spaced grid needs lo > 0");
      return log_grid(lo, hi, static_cast<int>(count));
    }
    const int c = static_cast<int>(count);
    for (int k = 0; k < c; ++k) out.push_back(lo + (hi - lo) * k / (c - 1));
    out.back() = hi;
    return out;
  }
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) out.push_back(parse_number(part));
  require(!out.empty(), "empty grid");
  return out;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

void write_atomically(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw ConfigError("cannot write '" + tmp.string() + "'");
    f << content;
    f.flush();
    if (!f) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw ConfigError("failed writing '" + tmp.string() + "'");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw ConfigError("cannot rename output onto '" + path.string() + "'");
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Noise-to-sensibility ratio and quantum Fisher information toolkit", "qnsr"};
  app.require_subcommand(1);

  FamilyOptions qfi_fo, nsr_fo, mc_fo, scan_fo;
  OutputOptions qfi_oo, nsr_oo, mc_oo, scan_oo;
  std::string observable = "quadrature";
  std::optional<double> phi_exp;
  std::string grid_beta2 = "0.01:1:60";
  std::string grid_n = "0.05:1e4:200";
  std::string grid_r = "0:1.5:31";
  std::string out_dir = ".";
  std::string fig2_format = "json";
  bool numeric = false;
  McOptions mo;
  mc_fo.beta = 0.3;
  scan_fo.beta = 0.3;

  CLI::App* qfi_cmd = app.add_subcommand("qfi", "quantum Fisher information via the SLD");
  add_family_options(qfi_cmd, qfi_fo);
  add_output_options(qfi_cmd, qfi_oo, "json");

  CLI::App* nsr_cmd = app.add_subcommand("nsr", "noise-to-sensibility report of an observable");
  add_family_options(nsr_cmd, nsr_fo);
  add_output_options(nsr_cmd, nsr_oo, "json");
  nsr_cmd->add_option("--observable", observable, "quadrature | number | file:PATH")
      ->capture_default_str();
  nsr_cmd->add_option("--phi-exp", phi_exp, "quadrature angle (default phi_true - pi/2)");

  CLI::App* fig2_cmd = app.add_subcommand("fig2", "squeezing enhancement region and threshold");
  fig2_cmd->add_option("--grid-beta2", grid_beta2, "2 beta^2 grid lo:hi:count (log)")
      ->capture_default_str();
  fig2_cmd->add_option("--grid-N", grid_n, "N grid lo:hi:count (log)")->capture_default_str();
  fig2_cmd->add_option("--out", out_dir, "output directory")->capture_default_str();
  fig2_cmd->add_option("--format", fig2_format, "summary format: csv | json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();

  CLI::App* mc_cmd = app.add_subcommand("mc", "Monte Carlo mean-inversion trials");
  add_family_options(mc_cmd, mc_fo);
  add_output_options(mc_cmd, mc_oo, "json");
  mc_cmd->add_option("--nu", mo.nu, "samples per repeat")->capture_default_str();
  mc_cmd->add_option("--repeats", mo.repeats, "independent repeats")->capture_default_str();
  mc_cmd->add_option("--seed", mo.seed, "64-bit seed")->capture_default_str();
  mc_cmd->add_option("--phi-exp", mo.phi_exp, "quadrature angle (default phi_true - pi/2)");
  mc_cmd->add_flag("--adaptive", mo.adaptive, "run the adaptive calibration loop");
  mc_cmd->add_option("--rounds", mo.rounds, "adaptive rounds")->capture_default_str();
  mc_cmd->add_option("--batch", mo.batch, "samples per adaptive round")->capture_default_str();

  CLI::App* scan_cmd = app.add_subcommand("scan", "closed-form information versus squeezing");
  add_family_options(scan_cmd, scan_fo);
  add_output_options(scan_cmd, scan_oo, "csv");
  scan_cmd->add_option("--grid-r", grid_r, "r grid lo:hi:count (linear)")->capture_default_str();
  scan_cmd->add_flag("--numeric", numeric, "add numeric quadrature fisher and QFI columns");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kExitOk;
    }
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    if (qfi_cmd->parsed()) return cmd_qfi(qfi_fo, qfi_oo, out);
    if (nsr_cmd->parsed()) return cmd_nsr(nsr_fo, observable, phi_exp, nsr_oo, out);
    if (fig2_cmd->parsed()) return cmd_fig2(grid_beta2, grid_n, out_dir, fig2_format, out);
    if (mc_cmd->parsed()) return cmd_mc(mc_fo, mo, mc_oo, out);
    if (scan_cmd->parsed()) return cmd_scan(scan_fo, grid_r, numeric, scan_oo, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ContractViolation& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const TruncationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitConfig;
}

}  // namespace qnsr::cli
