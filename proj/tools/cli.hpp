#pragma once

// The hypercover command-line tool. Kept in a header so tests can build the
// same CLI::App and drive run() in-process.

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hypercover/hypercover.hpp"

namespace hypercover::cli {

using nlohmann::json;

/// Bad input detected after parsing; reported with exit code 2.
class usage_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, v >>= 4) s[static_cast<std::size_t>(i)] = kDigits[v & 0xf];
  return s;
}

inline json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

/// Values of every flag across all subcommands.
struct Options {
  std::size_t threads = 0;
  std::string output;
  std::string manifest;
  bool as_json = false;

  // design
  std::string family;
  std::size_t d = 0;
  std::size_t n = 0;
  double delta = 1.0;
  bool header = false;

  // stochastic inputs
  std::uint64_t seed = 0;
  bool seed_given = false;
  double n_samples = 0;  // accepts 1e6 style; validated as a positive integer

  // evaluation
  std::string design_path;
  std::string box;
  double r = -1.0;
  double gamma = 0.0;
  double rmin = 0.0;
  double rmax = -1.0;
  std::size_t steps = 100;
  std::string orders = "1,2,4";
  std::size_t iters = 10;
  std::string trace_path;

  // asymptotics and figures
  double target = 0.9;
  std::string dims = "1,2,5,10,20,50";
  std::size_t replicates = 10;
  std::string deltas = "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1";
  std::string gammas = "0.001";
};

inline std::vector<double> parse_list(const std::string& text, const char* flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    double v;
    if (!parse_double(item, v)) throw usage_error(std::string(flag) + ": not a number: '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw usage_error(std::string(flag) + ": empty list");
  return out;
}

inline std::size_t as_count(double v, const char* flag) {
  if (!(v >= 1.0) || v != std::floor(v) || v > 1e15)
    throw usage_error(std::string(flag) + ": expected a positive integer");
  return static_cast<std::size_t>(v);
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw usage_error(path + ": cannot open");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Design load_design(const std::string& path) {
  try {
    return parse_design_csv(read_file(path));
  } catch (const csv_error& e) {
    throw usage_error(path + ": " + e.what());
  } catch (const parameter_error& e) {
    throw usage_error(path + ": " + e.what());
  }
}

/// `--box "lo,hi"` for the same interval on every axis, or a CSV file of per-axis rows.
inline Box load_box(const std::string& spec, std::size_t d) {
  if (std::filesystem::is_regular_file(spec)) {
    Box b = [&] {
      try {
        return parse_box_csv(read_file(spec));
      } catch (const std::exception& e) {
        throw usage_error(spec + ": " + e.what());
      }
    }();
    if (b.dimension() != d)
      throw usage_error("--box " + spec + ": has " + std::to_string(b.dimension()) + " axes, design has " +
                        std::to_string(d));
    return b;
  }
  const auto v = parse_list(spec, "--box");
  if (v.size() != 2) throw usage_error("--box: expected \"lo,hi\" or a CSV file path");
  try {
    return Box::cube(d, v[0], v[1]);
  } catch (const parameter_error& e) {
    throw usage_error(std::string("--box: ") + e.what());
  }
}

struct Outputs {
  std::vector<std::pair<std::string, std::string>> files;  // path ("-" = stdout), content
};

class Runner {
 public:
  Runner(Options& opt, std::ostream& out) : opt_(opt), out_(out) {}

  Execution exec() const { return {opt_.threads}; }

  void emit(const std::string& path, std::string content) {
    if (path.empty() || path == "-") {
      out_ << content;
      outputs_.files.emplace_back("-", std::move(content));
      return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw usage_error(path + ": cannot write");
    f << content;
    if (!f) throw usage_error(path + ": write failed");
    outputs_.files.emplace_back(path, std::move(content));
  }

  std::pair<Design, Box> design_and_box() {
    if (opt_.design_path.empty()) throw usage_error("--design is required");
    if (opt_.box.empty()) throw usage_error("--box is required");
    Design design = load_design(opt_.design_path);
    Box box = load_box(opt_.box, design.dimension());
    if (!design.inside(box)) throw usage_error(opt_.design_path + ": design has points outside --box " + opt_.box);
    design_hash_ = hex64(fnv1a64(design_to_csv(design)));
    return {std::move(design), std::move(box)};
  }

  std::size_t samples() {
    n_used_ = as_count(opt_.n_samples, "--N");
    return n_used_;
  }

  void note_design(const Design& d) { design_hash_ = hex64(fnv1a64(design_to_csv(d))); }
  void mark_stochastic() { stochastic_ = true; }

  void write_manifest(const std::string& sub, const std::vector<std::string>& argv, double wall) {
    json m;
    m["command"] = sub;
    m["argv"] = argv;
    m["version"] = kVersion;
    m["seed"] = stochastic_ ? json(opt_.seed) : json(nullptr);
    m["N"] = n_used_ ? json(n_used_) : json(nullptr);
    m["design_hash"] = design_hash_.empty() ? json(nullptr) : json(design_hash_);
    m["threads"] = opt_.threads;
    m["confidence"] = kConfidence;
    m["wall_time_s"] = wall;
    json files = json::array();
    for (const auto& [path, content] : outputs_.files)
      files.push_back({{"path", path}, {"bytes", content.size()}, {"fnv1a64", hex64(fnv1a64(content))}});
    m["outputs"] = files;
    std::string path = opt_.manifest;
    if (path.empty()) {
      const auto first = std::find_if(outputs_.files.begin(), outputs_.files.end(),
                                      [](const auto& f) { return f.first != "-"; });
      path = first != outputs_.files.end() ? first->first + ".manifest.json" : "hypercover-" + sub + ".manifest.json";
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw usage_error(path + ": cannot write manifest");
    f << m.dump(2) << '\n';
  }

 private:
  Options& opt_;
  std::ostream& out_;
  Outputs outputs_;
  std::string design_hash_;
  std::size_t n_used_ = 0;
  bool stochastic_ = false;
};

inline std::string json_text(const json& j) { return j.dump(2) + "\n"; }

inline std::string sweep_csv(const SweepResult& s, const std::vector<std::string>& cols) {
  std::ostringstream os;
  write_csv_row(os, cols);
  for (const auto& row : s.rows) {
    std::vector<std::string> f;
    for (const auto& c : cols) {
      double v = kNaN;
      if (c == "d") v = row.d;
      else if (c == "n") v = static_cast<double>(s.n);
      else if (c == "delta") v = row.delta;
      else if (c == "r") v = row.r;
      else if (c == "coverage") v = row.coverage;
      else if (c == "ci_low") v = row.ci_low;
      else if (c == "ci_high") v = row.ci_high;
      else if (c == "approx") v = row.approx;
      else if (c == "spread") v = row.spread;
      f.push_back(std::isfinite(v) ? format_double(v) : "");
    }
    write_csv_row(os, f);
  }
  return os.str();
}

inline std::string sweep_json(const SweepResult& s, const std::vector<std::string>& cols) {
  json arr = json::array();
  for (const auto& row : s.rows) {
    json o;
    for (const auto& c : cols) {
      double v = kNaN;
      if (c == "d") v = row.d;
      else if (c == "n") v = static_cast<double>(s.n);
      else if (c == "delta") v = row.delta;
      else if (c == "r") v = row.r;
      else if (c == "coverage") v = row.coverage;
      else if (c == "ci_low") v = row.ci_low;
      else if (c == "ci_high") v = row.ci_high;
      else if (c == "approx") v = row.approx;
      else if (c == "spread") v = row.spread;
      o[c] = number(v);
    }
    arr.push_back(o);
  }
  return json_text(arr);
}

inline std::size_t default_threads() {
  if (const char* env = std::getenv("HYPERCOVER_THREADS")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return v;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Register every subcommand and flag on `app`. Subcommand callbacks are not
/// attached here; run() dispatches on the parsed subcommand.
inline void build_app(CLI::App& app, Options& o) {
  app.description("Covering quality of point designs in high-dimensional boxes");
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--threads", o.threads, "Worker threads (default: $HYPERCOVER_THREADS or logical cores)")
      ->check(CLI::PositiveNumber);
  app.add_option("--manifest", o.manifest, "Run manifest path (default: <output>.manifest.json)");

  const auto add_seed = [&](CLI::App* s) { s->add_option("--seed", o.seed, "Master seed (required)")->required(); };
  const auto add_n = [&](CLI::App* s, bool required) {
    auto* opt = s->add_option("--N", o.n_samples, "Monte Carlo sample size");
    if (required) opt->required();
  };
  const auto add_out = [&](CLI::App* s, const char* what) { s->add_option("-o,--output", o.output, what); };
  const auto add_eval = [&](CLI::App* s) {
    s->add_option("--design", o.design_path, "Design CSV file")->required();
    s->add_option("--box", o.box, "Domain: \"lo,hi\" on every axis, or a CSV file of lo,hi rows")->required();
    add_n(s, true);
    add_seed(s);
  };

  auto* design = app.add_subcommand("design", "Generate a design and write it as CSV");
  design->add_option("--family", o.family, "uniform_delta | factorial | grid_midpoint_1d | paper_1d")->required();
  design->add_option("--d", o.d, "Dimension");
  design->add_option("--n", o.n, "Number of points (uniform_delta and 1-d families)");
  design->add_option("--delta", o.delta, "Half-width of the design cube for uniform_delta, in (0, 1]");
  design->add_option("--seed", o.seed, "Seed (required for uniform_delta)");
  design->add_flag("--header", o.header, "Write a x1,...,xd header row");
  add_out(design, "Output CSV (default: stdout)");

  auto* coverage = app.add_subcommand("coverage", "Estimate the covered fraction F(r) at one radius");
  add_eval(coverage);
  coverage->add_option("--r", o.r, "Radius")->required();
  add_out(coverage, "Output JSON (default: stdout)");

  auto* quant = app.add_subcommand("quantile", "Estimate the radius r_{1-gamma} covering a 1-gamma fraction");
  add_eval(quant);
  quant->add_option("--gamma", o.gamma, "Uncovered fraction gamma in (0, 1)")->required();
  add_out(quant, "Output JSON (default: stdout)");

  auto* cdf = app.add_subcommand("cdf", "Estimate F(r) on an equally spaced radius grid");
  add_eval(cdf);
  cdf->add_option("--rmin", o.rmin, "Smallest radius (default 0)");
  cdf->add_option("--rmax", o.rmax, "Largest radius")->required();
  cdf->add_option("--steps", o.steps, "Number of intervals (rows = steps + 1)");
  add_out(cdf, "Output CSV (default: stdout)");

  auto* quantize = app.add_subcommand("quantize", "Estimate quantization errors theta_p");
  add_eval(quantize);
  quantize->add_option("--p", o.orders, "Comma-separated orders p > 0");
  add_out(quantize, "Output JSON (default: stdout)");

  auto* lloyd = app.add_subcommand("lloyd", "Improve a design with Lloyd iterations on a fixed sample");
  add_eval(lloyd);
  lloyd->add_option("--iters", o.iters, "Iterations")->check(CLI::PositiveNumber);
  add_out(lloyd, "Improved design CSV (default: stdout)");
  lloyd->add_option("--trace", o.trace_path, "Objective trace CSV (default: <output>.trace.csv)");

  auto* asy = app.add_subcommand("asy", "Asymptotic radius for a target covered fraction");
  asy->add_option("--n", o.n, "Design size")->required();
  asy->add_option("--d", o.d, "Dimension")->required();
  asy->add_option("--target", o.target, "Target covered fraction in (0, 1)");
  add_out(asy, "Output JSON (default: stdout)");

  const auto add_fig_common = [&](CLI::App* s) {
    add_seed(s);
    add_out(s, "Output CSV (default: stdout)");
    s->add_flag("--json", o.as_json, "Write rows as a JSON array instead of CSV");
  };

  auto* fig1 = app.add_subcommand("fig1", "Coverage at the asymptotic radius versus dimension");
  fig1->add_option("--dims", o.dims, "Comma-separated dimensions");
  fig1->add_option("--n", o.n, "Design size")->required();
  fig1->add_option("--target", o.target, "Target covered fraction");
  add_n(fig1, true);
  fig1->add_option("--replicates", o.replicates, "Designs per dimension")->check(CLI::PositiveNumber);
  add_fig_common(fig1);

  auto* fig2 = app.add_subcommand("fig2", "Estimated F(r) next to its asymptotic approximation");
  fig2->add_option("--d", o.d, "Dimension")->required();
  fig2->add_option("--n", o.n, "Design size")->required();
  fig2->add_option("--rmin", o.rmin, "Smallest radius (default 0)");
  fig2->add_option("--rmax", o.rmax, "Largest radius")->required();
  fig2->add_option("--steps", o.steps, "Number of intervals (rows = steps + 1)");
  add_n(fig2, true);
  add_fig_common(fig2);

  auto* fig3 = app.add_subcommand("fig3", "Coverage of [-1,1]^d versus the design cube half-width delta");
  fig3->add_option("--d", o.d, "Dimension")->required();
  fig3->add_option("--n", o.n, "Design size")->required();
  fig3->add_option("--deltas", o.deltas, "Comma-separated delta grid in (0, 1]");
  fig3->add_option("--r", o.r, "Radius (default: calibrated so the best delta reaches --target)");
  fig3->add_option("--target", o.target, "Coverage target for calibration");
  add_n(fig3, true);
  add_fig_common(fig3);

  auto* fig4 = app.add_subcommand("fig4", "F(r) of the 2^(d-1) factorial design with quantiles and r_1");
  fig4->add_option("--d", o.d, "Dimension (> 2)")->required();
  fig4->add_option("--gammas", o.gammas, "Comma-separated gamma values");
  fig4->add_option("--steps", o.steps, "cdf grid intervals on [0, r_1]");
  add_n(fig4, true);
  add_fig_common(fig4);
}

inline void run_subcommand(const std::string& sub, Options& o, Runner& run) {
  if (sub == "design") {
    DesignSpec spec;
    spec.family = parse_family(o.family);
    spec.d = spec.family == DesignFamily::factorial_half ? o.d : (o.d == 0 ? 1 : o.d);
    spec.n = o.n;
    spec.delta = o.delta;
    if (spec.family == DesignFamily::uniform_delta) {
      if (o.n == 0 || o.d == 0) throw usage_error("design: uniform_delta needs --d and --n");
      if (!o.seed_given) throw usage_error("design: uniform_delta needs --seed");
      run.mark_stochastic();
      spec.seed = o.seed;
    }
    if (spec.family == DesignFamily::factorial_half && o.d == 0) throw usage_error("design: factorial needs --d");
    if ((spec.family == DesignFamily::grid_midpoint_1d || spec.family == DesignFamily::paper_1d) && o.n == 0)
      throw usage_error("design: --n is required");
    const Design design = make_design(spec);
    run.note_design(design);
    run.emit(o.output, design_to_csv(design, o.header));
    return;
  }

  if (sub == "asy") {
    const double r = asymptotic_radius(o.n, o.d, o.target);
    run.emit(o.output, json_text({{"n", o.n}, {"d", o.d}, {"target", o.target}, {"r_asy", r},
                                  {"V_d", unit_ball_volume(o.d)}}));
    return;
  }

  if (sub == "coverage" || sub == "quantile" || sub == "cdf" || sub == "quantize" || sub == "lloyd") {
    run.mark_stochastic();
    auto [design, box] = run.design_and_box();
    const std::size_t n_samples = run.samples();
    if (sub == "lloyd") {
      const auto res = lloyd_run(box, design, n_samples, o.seed, o.iters, run.exec());
      std::string trace = o.trace_path;
      if (trace.empty() && !o.output.empty() && o.output != "-") trace = o.output + ".trace.csv";
      run.emit(o.output, design_to_csv(res.design));
      if (!trace.empty()) {
        std::ostringstream os;
        os << "iteration,objective\n";
        for (std::size_t i = 0; i < res.objective_trace.size(); ++i)
          os << i << ',' << format_double(res.objective_trace[i]) << '\n';
        run.emit(trace, os.str());
      }
      return;
    }
    const auto sample = distance_sample(box, design, n_samples, o.seed, run.exec());
    if (sub == "coverage") {
      if (!(o.r >= 0.0)) throw usage_error("--r must be >= 0");
      const auto c = coverage_at(sample, o.r);
      run.emit(o.output, json_text({{"r", c.r}, {"fraction", c.fraction}, {"ci_low", c.ci_low},
                                    {"ci_high", c.ci_high}, {"N", c.n_samples}, {"seed", c.seed}}));
    } else if (sub == "quantile") {
      const auto q = quantile(sample, o.gamma);
      if (q.low_tail_count)
        std::cerr << "warning: N*gamma < 10; the r_{1-gamma} estimate rests on very few tail points\n";
      run.emit(o.output, json_text({{"gamma", q.gamma}, {"r_quantile", q.r_quantile}, {"ci_low", q.ci_low},
                                    {"ci_high", q.ci_high}, {"N", sample.size()}, {"seed", o.seed}}));
    } else if (sub == "cdf") {
      if (!(o.rmax >= o.rmin) || o.rmin < 0) throw usage_error("cdf: need 0 <= --rmin <= --rmax");
      std::ostringstream os;
      write_csv_row(os, {"r", "F_hat", "ci_low", "ci_high"});
      for (std::size_t i = 0; i <= o.steps; ++i) {
        const double r = o.steps == 0 ? o.rmin
                                      : o.rmin + (o.rmax - o.rmin) * static_cast<double>(i) / static_cast<double>(o.steps);
        const auto c = coverage_at(sample, r);
        write_csv_row(os, {format_double(r), format_double(c.fraction), format_double(c.ci_low), format_double(c.ci_high)});
      }
      run.emit(o.output, os.str());
    } else {
      std::vector<double> orders = parse_list(o.orders, "--p");
      const auto rep = quantization_error(sample, orders);
      json j;
      j["orders"] = rep.orders;
      j["theta_p"] = json::array();
      for (double v : rep.theta_p) j["theta_p"].push_back(number(v));
      j["theta_root"] = rep.theta_root;
      j["mc_se"] = json::array();
      for (double v : rep.mc_se) j["mc_se"].push_back(number(v));
      j["N"] = rep.n_samples;
      j["seed"] = rep.seed;
      run.emit(o.output, json_text(j));
    }
    return;
  }

  run.mark_stochastic();
  const std::size_t n_samples = run.samples();
  const auto emit_sweep = [&](const SweepResult& s, const std::vector<std::string>& cols) {
    run.emit(o.output, o.as_json ? sweep_json(s, cols) : sweep_csv(s, cols));
  };
  if (sub == "fig1") {
    std::vector<std::size_t> dims;
    for (double v : parse_list(o.dims, "--dims")) dims.push_back(as_count(v, "--dims"));
    const auto s = asymptotic_gap_sweep(dims, o.n, o.target, n_samples, o.seed, o.replicates, run.exec());
    emit_sweep(s, {"d", "n", "r", "coverage", "ci_low", "ci_high", "approx", "spread"});
  } else if (sub == "fig2") {
    if (!(o.rmax >= o.rmin) || o.rmin < 0) throw usage_error("fig2: need 0 <= --rmin <= --rmax");
    std::vector<double> grid;
    for (std::size_t i = 0; i <= o.steps; ++i)
      grid.push_back(o.steps == 0 ? o.rmin
                                  : o.rmin + (o.rmax - o.rmin) * static_cast<double>(i) / static_cast<double>(o.steps));
    const auto s = cdf_comparison(o.d, o.n, grid, n_samples, o.seed, run.exec());
    emit_sweep(s, {"d", "n", "r", "coverage", "ci_low", "ci_high", "approx"});
  } else if (sub == "fig3") {
    const auto grid = parse_list(o.deltas, "--deltas");
    double r = o.r;
    if (!(r > 0.0)) r = calibrate_radius_for_target(o.d, o.n, grid, o.target, n_samples, o.seed, run.exec()).r;
    const auto s = delta_sweep(o.d, o.n, r, grid, n_samples, o.seed, run.exec());
    emit_sweep(s, {"d", "n", "delta", "r", "coverage", "ci_low", "ci_high"});
  } else if (sub == "fig4") {
    const auto gammas = parse_list(o.gammas, "--gammas");
    const auto st = factorial_study(o.d, gammas, n_samples, o.seed, o.steps, run.exec());
    emit_sweep(st.cdf, {"d", "r", "coverage", "ci_low", "ci_high"});
    const std::vector<std::string> qcols = {"d", "gamma", "r_quantile", "ci_low", "ci_high", "r1_exact", "ratio"};
    std::ostringstream os;
    json arr = json::array();
    if (!o.as_json) write_csv_row(os, qcols);
    for (std::size_t i = 0; i < st.quantiles.size(); ++i) {
      const auto& q = st.quantiles[i];
      const std::vector<double> vals = {static_cast<double>(o.d), q.gamma, q.r_quantile, q.ci_low, q.ci_high,
                                        st.r1_exact, st.ratios[i]};
      if (o.as_json) {
        json row;
        for (std::size_t k = 0; k < qcols.size(); ++k) row[qcols[k]] = vals[k];
        arr.push_back(row);
      } else {
        std::vector<std::string> f;
        for (double v : vals) f.push_back(format_double(v));
        write_csv_row(os, f);
      }
    }
    const bool to_file = !o.output.empty() && o.output != "-";
    run.emit(to_file ? o.output + (o.as_json ? ".quantiles.json" : ".quantiles.csv") : "-",
             o.as_json ? json_text(arr) : os.str());
  }
}

/// Parse argv, dispatch, write outputs and the run manifest.
/// Returns 0 on success and 2 on any usage or input error.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  Options opt;
  opt.threads = default_threads();
  CLI::App app{"hypercover"};
  build_app(app, opt);
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  const std::string sub = app.get_subcommands().front()->get_name();
  if (const auto* seed = app.get_subcommands().front()->get_option_no_throw("--seed")) opt.seed_given = seed->count() > 0;
  std::vector<std::string> args(argv, argv + argc);
  const auto start = std::chrono::steady_clock::now();
  try {
    Runner runner(opt, out);
    run_subcommand(sub, opt, runner);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    runner.write_manifest(sub, args, wall);
  } catch (const std::exception& e) {
    err << "error: " << sub << ": " << e.what() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace hypercover::cli
