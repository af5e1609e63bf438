#include "memdomain/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "memdomain/errors.hpp"
#include "memdomain/fock.hpp"
#include "memdomain/io.hpp"
#include "memdomain/lifetime.hpp"
#include "memdomain/memory_codes.hpp"
#include "memdomain/oscillator.hpp"
#include "memdomain/special_functions.hpp"

#ifndef MEMDOMAIN_VERSION
#define MEMDOMAIN_VERSION "0.0.0"
#endif

namespace memdomain::cli {
namespace {

namespace fs = std::filesystem;
using io::format_double;
using io::Json;

class ValidationError : public Error {
 public:
  using Error::Error;
};

struct Common {
  double L = 1.0;
  double c = 1.0;
  long long seed = 0;
  bool no_timestamp = false;
  std::string manifest;
};

void add_common(CLI::App* sub, Common& common) {
  sub->add_option("--L", common.L, "damping constant L (> 0)")->capture_default_str()->check(CLI::PositiveNumber);
  sub->add_option("--c", common.c, "propagation speed c (> 0)")->capture_default_str()->check(CLI::PositiveNumber);
  sub->add_option("--seed", common.seed, "seed for randomised grids")->capture_default_str();
  sub->add_flag("--no-timestamp", common.no_timestamp, "omit the creation time from manifest.json");
  sub->add_option("--manifest", common.manifest, "manifest path (default: next to the output)");
}

SystemParams system_params(const Common& common) {
  SystemParams p{common.L, common.c};
  p.validate();
  return p;
}

// Resolves the momentum of a single mode from --k and/or --omega0.
double resolve_k(const std::vector<double>& ks, const std::optional<double>& omega0, double c) {
  if (omega0) {
    const double k_from_w = *omega0 / c;
    if (ks.size() > 1) throw ValidationError("--omega0 selects a single mode; give at most one --k with it");
    if (!ks.empty() && std::abs(ks.front() - k_from_w) > 1e-12 * std::max(1.0, std::abs(k_from_w))) {
      throw ValidationError("--k and --omega0 disagree: omega0 must equal k * c");
    }
    return k_from_w;
  }
  if (ks.size() != 1) throw ValidationError("exactly one of --k or --omega0 is required");
  return ks.front();
}

Json resolved_options(const CLI::App* sub) {
  Json cfg = Json::object();
  for (const CLI::Option* opt : sub->get_options()) {
    const std::string name = opt->get_single_name();
    if (name == "help" || name.empty()) continue;
    if (opt->count() > 0) {
      const auto& results = opt->results();
      if (opt->get_items_expected_max() > 1) {
        cfg[name] = results;
      } else {
        cfg[name] = results.empty() ? std::string() : results.back();
      }
    } else {
      const std::string def = opt->get_default_str();
      cfg[name] = def.empty() && opt->get_type_size() == 0 ? std::string("false") : def;
    }
  }
  return cfg;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct RunRecord {
  std::map<std::string, std::string> inputs;  // path -> sha256
  std::vector<std::string> outputs;
};

void write_manifest(const CLI::App* sub, const Common& common, const RunRecord& rec, const fs::path& default_dir,
                    const std::optional<std::string>& config_path) {
  Json m;
  m["tool"] = "memdomain";
  m["version"] = MEMDOMAIN_VERSION;
  m["command"] = sub->get_name();
  m["config"] = resolved_options(sub);
  Json inputs = Json::object();
  if (config_path) inputs[*config_path] = "sha256:" + io::sha256_hex(io::read_file(*config_path));
  for (const auto& [path, digest] : rec.inputs) inputs[path] = "sha256:" + digest;
  m["inputs"] = inputs;
  m["outputs"] = rec.outputs;
  m["tau_proportionality"] = 1.0;
  if (!common.no_timestamp) m["created_at"] = utc_timestamp();
  const fs::path path = common.manifest.empty() ? default_dir / "manifest.json" : fs::path(common.manifest);
  io::write_file_atomic(path, m.dump(2) + "\n");
}

fs::path parent_or_cwd(const fs::path& p) { return p.has_parent_path() ? p.parent_path() : fs::path("."); }

std::string read_input(const std::string& path, RunRecord& rec) {
  if (!fs::exists(path)) throw ValidationError("input file not found: " + path);
  std::string text = io::read_file(path);
  rec.inputs[path] = io::sha256_hex(text);
  return text;
}

std::string csv_row(std::initializer_list<double> values) {
  std::string line;
  bool first = true;
  for (double v : values) {
    if (!first) line += ',';
    line += format_double(v);
    first = false;
  }
  line += '\n';
  return line;
}

std::string curve_csv(const CurveTable& table) {
  std::string csv = "curve_id,t,lambda\n";
  for (const auto& row : table.rows) {
    csv += row.curve_id + ',' + format_double(row.t) + ',' + format_double(row.lambda) + '\n';
  }
  return csv;
}

Json figure_sidecar(const FigureSpec& spec, const SystemParams& params, const CurveTable& table) {
  Json j;
  j["figure"] = to_string(spec.which);
  j["L"] = params.L;
  j["c"] = params.c;
  j["k0"] = params.k0();
  j["ks"] = spec.ks;
  j["ns"] = spec.ns;
  j["samples"] = spec.samples;
  j["ceiling"] = spec.ceiling;
  j["tau_proportionality"] = 1.0;
  Json curves = Json::array();
  for (const auto& c : table.curves) {
    curves.push_back(Json{{"curve_id", c.curve_id}, {"k", c.mode.k}, {"n", c.mode.n}, {"window_T", c.window_T}});
  }
  j["curves"] = curves;
  return j;
}

memory::Registry load_registry(const std::string& path, RunRecord& rec) {
  if (!fs::exists(path)) return {};
  return io::parse_registry(read_input(path, rec));
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Memory-domain toolkit for a dissipative oscillator model with time-dependent frequencies",
               "memdomain"};
  app.set_version_flag("--version", MEMDOMAIN_VERSION);
  app.set_config("--config", "", "configuration file ([command] sections, key = value)");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.require_subcommand(1);
  app.fallthrough();  // accept --config after the subcommand too

  Common common;

  // bessel
  auto* bessel = app.add_subcommand("bessel", "evaluate spherical Bessel functions");
  std::string kind = "j";
  int order = 0;
  std::vector<double> zs;
  bool derivative = false;
  bessel->add_option("--kind", kind, "j (first kind) or y (second kind)")->check(CLI::IsMember({"j", "y"}))->capture_default_str();
  bessel->add_option("--order", order, "order n >= 0")->check(CLI::NonNegativeNumber)->capture_default_str();
  bessel->add_option("--z", zs, "argument(s)")->required()->check(CLI::NonNegativeNumber);
  bessel->add_flag("--derivative", derivative, "print d/dz instead");
  add_common(bessel, common);

  // evolve
  auto* evolve = app.add_subcommand("evolve", "oscillator-pair trajectory (closed form and/or integrated)");
  std::vector<double> ev_k;
  std::optional<double> ev_w0;
  int ev_n = 0;
  double t_max = 0.0;
  std::size_t points = 2001;
  std::string method = "closed";
  double coef_a = 1.0, coef_b = 0.0, rel_tol = 1e-10;
  std::string ev_out;
  evolve->add_option("--k", ev_k, "momentum k (omega0 = k c)")->check(CLI::PositiveNumber)->expected(0, 1);
  evolve->add_option("--omega0", ev_w0, "reference frequency omega0")->check(CLI::PositiveNumber);
  evolve->add_option("--n", ev_n, "openness order n >= 0")->check(CLI::NonNegativeNumber)->capture_default_str();
  evolve->add_option("--t-max", t_max, "end time (0 = recording window)")->check(CLI::NonNegativeNumber)->capture_default_str();
  evolve->add_option("--points", points, "number of grid points")->check(CLI::Range(5, 10000000))->capture_default_str();
  evolve->add_option("--method", method, "closed, ode or both")->check(CLI::IsMember({"closed", "ode", "both"}))->capture_default_str();
  evolve->add_option("--a", coef_a, "coefficient of j_n")->capture_default_str();
  evolve->add_option("--b", coef_b, "coefficient of y_n")->capture_default_str();
  evolve->add_option("--rel-tol", rel_tol, "integrator tolerance")->check(CLI::Range(1e-13, 1e-3))->capture_default_str();
  evolve->add_option("--out", ev_out, "output CSV")->required();
  add_common(evolve, common);

  // lifetimes
  auto* lifetimes = app.add_subcommand("lifetimes", "Lambda_{k,n}(t) curves for chosen modes");
  std::vector<double> lt_k;
  std::optional<double> lt_w0;
  std::vector<int> lt_n{1};
  int samples = 2000;
  double ceiling = 10.0;
  std::string lt_out;
  lifetimes->add_option("--k", lt_k, "momenta")->check(CLI::PositiveNumber);
  lifetimes->add_option("--omega0", lt_w0, "reference frequency of a single mode")->check(CLI::PositiveNumber);
  lifetimes->add_option("--n", lt_n, "openness orders")->check(CLI::NonNegativeNumber)->capture_default_str();
  lifetimes->add_option("--samples", samples, "grid points per curve")->check(CLI::Range(2, 10000000))->capture_default_str();
  lifetimes->add_option("--ceiling", ceiling, "plot ceiling for Lambda")->check(CLI::PositiveNumber)->capture_default_str();
  lifetimes->add_option("--out", lt_out, "output CSV (default: stdout)");
  add_common(lifetimes, common);

  // figures
  auto* figures = app.add_subcommand("figures", "curve tables for the four life-time figures");
  std::string which = "all";
  std::string fig_out;
  std::vector<double> fig_k;
  std::vector<int> fig_n;
  int fig_samples = 2000;
  double fig_ceiling = 10.0;
  figures->add_option("--which", which, "fig1, fig2, fig3, fig4 or all")
      ->check(CLI::IsMember({"fig1", "fig2", "fig3", "fig4", "all"}))
      ->capture_default_str();
  figures->add_option("--out", fig_out, "output directory")->required();
  figures->add_option("--k", fig_k, "override the momenta")->check(CLI::PositiveNumber);
  figures->add_option("--n", fig_n, "override the openness orders")->check(CLI::NonNegativeNumber);
  figures->add_option("--samples", fig_samples, "grid points per curve")->check(CLI::Range(2, 10000000))->capture_default_str();
  figures->add_option("--ceiling", fig_ceiling, "plot ceiling for Lambda")->check(CLI::PositiveNumber)->capture_default_str();
  add_common(figures, common);

  // squeeze
  auto* squeeze = app.add_subcommand("squeeze", "two-mode squeezed vacuum |0(theta,t)>");
  double gamma = 0.5, sq_t = 0.0;
  int cutoff = 0;
  bool oracle = false;
  std::string sq_out;
  squeeze->add_option("--gamma", gamma, "Gamma (L/2 in the model)")->required();
  squeeze->add_option("--t", sq_t, "time")->required()->check(CLI::NonNegativeNumber);
  squeeze->add_option("--cutoff", cutoff, "paired occupation cutoff (0 = automatic)")->check(CLI::NonNegativeNumber)->capture_default_str();
  squeeze->add_flag("--oracle", oracle, "compare against matrix-exponential evolution");
  squeeze->add_option("--out", sq_out, "output JSON (default: stdout)");
  add_common(squeeze, common);

  // record
  auto* record_cmd = app.add_subcommand("record", "record a stimulus spectrum as a memory code");
  std::string registry_path = "registry.json";
  std::string spectrum_path;
  double rec_t = 0.0;
  std::string refresh_id;
  record_cmd->add_option("--registry", registry_path, "registry JSON file")->capture_default_str();
  record_cmd->add_option("--spectrum", spectrum_path, "stimulus spectrum JSON")->required();
  record_cmd->add_option("--t", rec_t, "recording time")->required()->check(CLI::NonNegativeNumber);
  record_cmd->add_option("--refresh", refresh_id, "re-record into an existing code id");
  add_common(record_cmd, common);

  // recall
  auto* recall_cmd = app.add_subcommand("recall", "probe the registry with a replication signal");
  std::string signal_path;
  double energy = 0.0, recall_t = 0.0;
  std::string recall_out;
  recall_cmd->add_option("--registry", registry_path, "registry JSON file")->capture_default_str();
  recall_cmd->add_option("--signal", signal_path, "signal spectrum JSON")->required();
  recall_cmd->add_option("--energy", energy, "supplied energy")->required();
  recall_cmd->add_option("--t", recall_t, "recall time")->required()->check(CLI::NonNegativeNumber);
  recall_cmd->add_option("--out", recall_out, "also write the result JSON here");
  add_common(recall_cmd, common);

  // forget-sweep
  auto* sweep = app.add_subcommand("forget-sweep", "remove dead modes from every code");
  double sweep_t = 0.0;
  sweep->add_option("--registry", registry_path, "registry JSON file")->capture_default_str();
  sweep->add_option("--t", sweep_t, "sweep time")->required()->check(CLI::NonNegativeNumber);
  add_common(sweep, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kValidationError;
  }

  std::optional<std::string> config_path;
  if (auto* cfg = app.get_config_ptr(); cfg && cfg->count() > 0) config_path = cfg->as<std::string>();

  CLI::App* sub = app.get_subcommands().front();
  RunRecord rec;
  try {
    const SystemParams params = system_params(common);

    if (sub == bessel) {
      const auto k = kind == "j" ? special::BesselKind::FirstKind : special::BesselKind::SecondKind;
      for (double z : zs) {
        const double v = derivative ? special::sph_deriv(k, order, z) : special::sph_bessel(k, order, z);
        out << format_double(v) << '\n';
      }
      write_manifest(sub, common, rec, ".", config_path);
    } else if (sub == evolve) {
      const ModeIndex mode{resolve_k(ev_k, ev_w0, params.c), ev_n};
      mode.validate();
      double end = t_max;
      if (end == 0.0) end = recording_window(params, mode);
      if (!(end > 0.0)) throw ValidationError("--t-max resolves to an empty interval");
      const auto grid = uniform_grid(0.0, end, points);
      const BesselCoeffs coeffs{coef_a, coef_b};
      auto to_csv = [&](const Trajectory& tr) {
        std::string csv = "t,u,v,r,omega,Omega\n";
        for (std::size_t i = 0; i < tr.times.size(); ++i) {
          const double t = tr.times[i];
          const double w = omega_mode(params, mode, t);
          const double sq = common_frequency_sq(params, mode, t);
          csv += csv_row({t, tr.u[i], tr.v[i], tr.r[i], w, sq >= 0.0 ? std::sqrt(sq) : std::nan("")});
        }
        return csv;
      };
      std::optional<Trajectory> closed;
      std::optional<Trajectory> integrated;
      if (method != "ode") closed = closed_form_trajectory(params, mode, coeffs, grid);
      if (method != "closed") {
        const PairState init = closed_form_state(params, mode, coeffs, 0.0);
        integrated = integrate_pair(params, mode, init, grid, rel_tol);
      }
      const fs::path out_path(ev_out);
      if (closed) {
        io::write_file_atomic(out_path, to_csv(*closed));
        rec.outputs.push_back(out_path.string());
      }
      if (integrated) {
        fs::path ode_path = out_path;
        if (closed) ode_path.replace_extension(".ode.csv");
        io::write_file_atomic(ode_path, to_csv(*integrated));
        rec.outputs.push_back(ode_path.string());
      }
      if (closed && integrated) {
        double du = 0.0, dv = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
          du = std::max(du, std::abs(closed->u[i] - integrated->u[i]));
          dv = std::max(dv, std::abs(closed->v[i] - integrated->v[i]));
        }
        out << "max|u_closed - u_ode| = " << format_double(du) << '\n'
            << "max|v_closed - v_ode| = " << format_double(dv) << '\n';
      }
      write_manifest(sub, common, rec, parent_or_cwd(out_path), config_path);
    } else if (sub == lifetimes) {
      FigureSpec spec;
      if (lt_w0) {
        spec.ks = {resolve_k(lt_k, lt_w0, params.c)};
      } else {
        if (lt_k.empty()) throw ValidationError("--k or --omega0 is required");
        spec.ks = lt_k;
      }
      spec.ns = lt_n;
      spec.samples = samples;
      spec.ceiling = ceiling;
      const CurveTable table = curve_table(params, spec);
      if (lt_out.empty()) {
        out << curve_csv(table);
        write_manifest(sub, common, rec, ".", config_path);
      } else {
        const fs::path out_path(lt_out);
        io::write_file_atomic(out_path, curve_csv(table));
        rec.outputs.push_back(out_path.string());
        write_manifest(sub, common, rec, parent_or_cwd(out_path), config_path);
      }
    } else if (sub == figures) {
      std::vector<FigureId> ids;
      if (which == "all") {
        ids = {FigureId::Fig1, FigureId::Fig2, FigureId::Fig3, FigureId::Fig4};
      } else {
        ids = {figure_from_string(which)};
      }
      const fs::path dir(fig_out);
      for (FigureId id : ids) {
        FigureSpec spec = default_figure_spec(id);
        if (!fig_k.empty()) spec.ks = fig_k;
        if (!fig_n.empty()) spec.ns = fig_n;
        spec.samples = fig_samples;
        spec.ceiling = fig_ceiling;
        const CurveTable table = curve_table(params, spec);
        const fs::path csv = dir / (to_string(id) + ".csv");
        const fs::path sidecar = dir / (to_string(id) + ".json");
        io::write_file_atomic(csv, curve_csv(table));
        io::write_file_atomic(sidecar, figure_sidecar(spec, params, table).dump(2) + "\n");
        rec.outputs.push_back(csv.string());
        rec.outputs.push_back(sidecar.string());
      }
      write_manifest(sub, common, rec, dir, config_path);
    } else if (sub == squeeze) {
      const fock::TwoModeState state = fock::squeezed_vacuum(gamma, sq_t, cutoff);
      const fock::PairNumbers numbers = fock::expected_pair_number(state);
      Json j;
      j["gamma"] = gamma;
      j["t"] = sq_t;
      j["gamma_t"] = state.gamma_t;
      j["cutoff"] = state.cutoff;
      std::vector<double> coeffs;
      for (const auto& c : state.coeffs) coeffs.push_back(c.real());
      j["coefficients"] = coeffs;
      j["nA"] = numbers.n_a;
      j["nTilde"] = numbers.n_tilde;
      j["nA_closed_form"] = std::pow(std::sinh(state.gamma_t), 2);
      j["normalization"] = state.norm_sq();
      if (oracle) {
        const int oracle_cutoff = std::max(state.cutoff, fock::default_cutoff(state.gamma_t, 18.0));
        const fock::TwoModeState vac = fock::squeezed_vacuum(0.0, 0.0, oracle_cutoff);
        const fock::TwoModeState evolved = fock::brute_force_evolve(fock::pair_generator(gamma, oracle_cutoff), sq_t, vac);
        double dev = 0.0;
        for (std::size_t m = 0; m < state.coeffs.size(); ++m) dev = std::max(dev, std::abs(state.coeffs[m] - evolved.coeffs[m]));
        j["oracle"] = Json{{"cutoff", oracle_cutoff}, {"max_deviation", dev}};
      }
      const std::string text = j.dump(2) + "\n";
      if (sq_out.empty()) {
        out << text;
        write_manifest(sub, common, rec, ".", config_path);
      } else {
        io::write_file_atomic(sq_out, text);
        rec.outputs.push_back(sq_out);
        write_manifest(sub, common, rec, parent_or_cwd(sq_out), config_path);
      }
    } else if (sub == record_cmd) {
      memory::Registry reg = load_registry(registry_path, rec);
      const memory::StimulusSpectrum stimulus = io::parse_spectrum(read_input(spectrum_path, rec));
      std::optional<std::string> refresh;
      if (!refresh_id.empty()) refresh = refresh_id;
      const memory::RecordResult res = memory::record(reg, stimulus, rec_t, params, refresh);
      Json j;
      j["code_id"] = res.code_id ? Json(*res.code_id) : Json(nullptr);
      j["refreshed"] = res.refreshed;
      if (!res.code_id) j["refusal"] = "EmptyCode";
      Json rejected = Json::array();
      for (const auto& r : res.rejected) {
        rejected.push_back(Json{{"k", r.component.k}, {"n", r.component.n}, {"intensity", r.component.intensity},
                                {"reason", memory::to_string(r.reason)}});
      }
      j["rejected"] = rejected;
      out << j.dump(2) << '\n';
      io::write_file_atomic(registry_path, io::dump_registry(reg));
      rec.outputs.push_back(registry_path);
      write_manifest(sub, common, rec, parent_or_cwd(registry_path), config_path);
    } else if (sub == recall_cmd) {
      memory::Registry reg = load_registry(registry_path, rec);
      const memory::StimulusSpectrum signal = io::parse_spectrum(read_input(signal_path, rec));
      memory::decay_codes(reg, recall_t, params);
      const memory::RecallResult res = memory::recall(reg, signal, energy, recall_t, params);
      Json j;
      j["matched"] = res.matched ? Json(*res.matched) : Json(nullptr);
      j["score"] = res.score;
      j["outcome"] = memory::to_string(res.outcome);
      j["energy_threshold"] = res.energy_threshold;
      const std::string text = j.dump(2) + "\n";
      out << text;
      fs::path manifest_dir = parent_or_cwd(registry_path);
      if (!recall_out.empty()) {
        io::write_file_atomic(recall_out, text);
        rec.outputs.push_back(recall_out);
        manifest_dir = parent_or_cwd(recall_out);
      }
      write_manifest(sub, common, rec, manifest_dir, config_path);
    } else if (sub == sweep) {
      memory::Registry reg = load_registry(registry_path, rec);
      memory::decay_codes(reg, sweep_t, params);
      Json summary = Json::array();
      for (const auto& code : reg.codes) {
        summary.push_back(Json{{"id", code.id}, {"status", memory::to_string(code.status)},
                               {"entries", code.entries.size()}});
      }
      out << summary.dump(2) << '\n';
      io::write_file_atomic(registry_path, io::dump_registry(reg));
      rec.outputs.push_back(registry_path);
      write_manifest(sub, common, rec, parent_or_cwd(registry_path), config_path);
    }
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << '\n';
    return kValidationError;
  } catch (const NeverRecordable& e) {
    err << "validation error (NeverRecordable): " << e.what() << '\n';
    return kValidationError;
  } catch (const UnsupportedBranch& e) {
    err << "validation error (UnsupportedBranch): " << e.what() << '\n';
    return kValidationError;
  } catch (const RealityViolation& e) {
    err << "validation error (RealityViolation): " << e.what() << '\n';
    return kValidationError;
  } catch (const DomainError& e) {
    err << "validation error: " << e.what() << '\n';
    return kValidationError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kComputationError;
  }
  return kOk;
}

}  // namespace memdomain::cli
