// Acceptance gate: one PASS/FAIL line per criterion.
//
//   acceptance            run every criterion
//   acceptance 3 5        run a subset
//
// Exit status is nonzero if any selected criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "cli.hpp"
#include "hypercover/hypercover.hpp"
#include "oracles.hpp"

using namespace hypercover;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Verdict factorial_exact() {
  const auto t0 = std::chrono::steady_clock::now();
  const double cr = covering_radius_factorial_exact(10);
  const double t = seconds_since(t0);
  const double closed = std::sqrt(18.0) / 2.0;
  const bool ok = std::abs(cr - closed) <= 1e-12 && std::round(cr * 1e4) / 1e4 == 2.1213 && t < 1e-3;
  return {ok, fmt("CR=%.13f closed=%.13f time=%.2e s", cr, closed, t)};
}

Verdict factorial_grid() {
  const auto t0 = std::chrono::steady_clock::now();
  const double grid = oracle::grid_max_nearest_3d(oracle::even_vertices(3), 200);
  const double t = seconds_since(t0);
  const double closed = std::sqrt(11.0) / 2.0;
  return {std::abs(grid - closed) <= 0.018 && t < 60.0,
          fmt("grid max=%.6f closed=%.6f |diff|=%.2e time=%.1f s", grid, closed, std::abs(grid - closed), t)};
}

Verdict weak_quantile(Execution exec) {
  // Brute-force search over the materialised 512-point design.
  const Design dsn = factorial_half_design(10);
  const auto s = distance_sample(Box::cube(10, -1, 1), dsn, 10'000'000, 1, exec);
  const auto q = quantile(s, 0.001);
  const bool ok = std::abs(q.r_quantile - 1.3465) <= 0.01 && q.ci_low <= 1.3465 && 1.3465 <= q.ci_high;
  return {ok, fmt("r_0.999=%.5f CI=[%.5f, %.5f]", q.r_quantile, q.ci_low, q.ci_high)};
}

Verdict ratio_trend(Execution exec) {
  std::vector<double> ratios;
  std::string detail;
  for (std::size_t d : {10, 20, 40}) {
    const auto st = factorial_study(d, {0.001}, 1'000'000, 1000 + d, 0, exec);
    ratios.push_back(st.ratios[0]);
    detail += fmt("d=%zu ratio=%.4f  ", d, st.ratios[0]);
  }
  bool ok = ratios[0] > ratios[1] && ratios[1] > ratios[2];
  for (double r : ratios) ok = ok && r > 0.567 && r < 0.70;
  ok = ok && std::abs(ratios[2] - 1.0 / std::sqrt(3.0)) <= 0.05;
  return {ok, detail + fmt("|d40 - 0.5774|=%.4f", std::abs(ratios[2] - 1.0 / std::sqrt(3.0)))};
}

Verdict asymptotic_gap(Execution exec) {
  const auto s = asymptotic_gap_sweep({1, 20}, 1000, 0.9, 1'000'000, 7, 1, exec);
  const auto& one = s.rows[0];
  const auto& twenty = s.rows[1];
  const auto hw = [](const SweepRow& r) { return std::max(r.coverage - r.ci_low, r.ci_high - r.coverage); };
  const bool ok = std::abs(one.coverage - 0.9) <= 0.03 && twenty.coverage < 0.5 && hw(one) <= 0.01 &&
                  hw(twenty) <= 0.01;
  return {ok, fmt("d=1 coverage=%.4f (hw %.4f)  d=20 coverage=%.4f (hw %.4f)", one.coverage, hw(one),
                  twenty.coverage, hw(twenty))};
}

Verdict delta_effect(Execution exec) {
  std::vector<double> grid;
  for (int i = 2; i <= 10; ++i) grid.push_back(i / 10.0);
  const std::size_t n_samples = 50'000;
  const auto cal = calibrate_radius_for_target(50, 1000, grid, 0.9, n_samples, 11, exec);
  const auto s = delta_sweep(50, 1000, cal.r, grid, n_samples, 11, exec);
  std::size_t best = 0;
  for (std::size_t i = 0; i < s.rows.size(); ++i)
    if (s.rows[i].coverage > s.rows[best].coverage) best = i;
  const auto& one = s.rows.back();
  const auto hw = [](const SweepRow& r) { return std::max(r.coverage - r.ci_low, r.ci_high - r.coverage); };
  const double gap = s.rows[best].coverage - one.coverage;
  const bool ok = one.delta == 1.0 && std::abs(cal.coverage - 0.9) <= kCalibrationTolerance &&
                  gap > hw(s.rows[best]) + hw(one);
  return {ok, fmt("r=%.4f best delta=%.1f coverage=%.4f; delta=1 coverage=%.4f; gap=%.4f > %.4f", cal.r,
                  s.rows[best].delta, s.rows[best].coverage, one.coverage, gap, hw(s.rows[best]) + hw(one))};
}

Verdict one_dimensional() {
  const Box unit = Box::cube(1, 0, 1);
  // The design coordinates are themselves rounded, so "exact" means equal up
  // to one rounding unit of a coordinate in [0, 1].
  double worst = 0.0;
  for (std::size_t n = 1; n <= 20; ++n) {
    worst = std::max(worst, std::abs(covering_radius_1d_exact(midpoint_design_1d(n), unit) - 1.0 / (2.0 * n)));
    worst = std::max(worst, std::abs(covering_radius_1d_exact(paper_1d_design(n), unit) - 1.0 / (2.0 * n - 1.0)));
  }
  const bool exact = worst <= std::numeric_limits<double>::epsilon();
  int inside = 0;
  for (std::uint64_t k = 0; k < 20; ++k) {
    SeededStream g(5000 + k, 0);
    const std::size_t n = 1 + g() % 20;
    const Design dsn(1, sample_uniform(unit, n, SeededStream(6000 + k, 0)));
    const double r = 0.005 + 0.2 * g.uniform01();
    const auto c = coverage_at(distance_sample(unit, dsn, 1'000'000, 7000 + k), r);
    const double truth = oracle::covered_fraction_1d({dsn.coordinates().begin(), dsn.coordinates().end()}, r, 0, 1);
    inside += c.ci_low <= truth && truth <= c.ci_high;
  }
  // At 99% a single miss in 20 is ordinary noise; two or more fail the check.
  return {exact && inside >= 19,
          fmt("closed forms max |diff|=%.1e; %d/20 union lengths inside the 99%% CI", worst, inside)};
}

Verdict quantization_forms(Execution exec) {
  const Box unit = Box::cube(1, 0, 1);
  const auto rep = quantization_error(distance_sample(unit, Design(1, {0.5}), 1'000'000, 8, exec), {1.0, 2.0});
  const double z1 = std::abs(rep.theta_p[0] - 0.25) / rep.mc_se[0];
  const double z2 = std::abs(rep.theta_p[1] - 1.0 / 12.0) / rep.mc_se[1];
  bool mono = true;
  const std::vector<double> orders = {0.5, 1, 1.5, 2, 3, 4, 6, 8, 16, 32, 64, 256, 1024};
  for (std::uint64_t k = 0; k < 10; ++k) {
    const std::size_t d = 1 + k;
    const Box box = Box::cube(d, 0, 1);
    const Design dsn(d, sample_uniform(box, 2 + 3 * k, SeededStream(900 + k, 0)));
    const auto r = quantization_error(distance_sample(box, dsn, 100'000, 950 + k, exec), orders);
    for (std::size_t i = 1; i < orders.size(); ++i) mono = mono && r.theta_root[i] >= r.theta_root[i - 1];
  }
  return {z1 <= 3 && z2 <= 3 && mono,
          fmt("theta_1=%.6f (%.2f SE)  theta_2=%.6f (%.2f SE)  power means %s", rep.theta_p[0], z1, rep.theta_p[1],
              z2, mono ? "nondecreasing" : "NOT monotone")};
}

Verdict lloyd_monotone(Execution exec) {
  double worst = -INFINITY;
  for (std::uint64_t k = 0; k < 10; ++k) {
    const std::size_t d = 1 + k % 5;
    const Box box = Box::cube(d, 0, 1);
    const Design init(d, sample_uniform(box, 4 + 2 * k, SeededStream(300 + k, 0)));
    const auto res = lloyd_run(box, init, 20'000, 400 + k, 50, exec);
    for (std::size_t i = 1; i < res.objective_trace.size(); ++i)
      worst = std::max(worst, res.objective_trace[i] - res.objective_trace[i - 1]);
  }
  return {worst <= 1e-12, fmt("largest step increase over 10 x 50 iterations: %.3e", worst)};
}

// Run every stochastic command with --threads 1 and 4 and compare the output files byte for byte.
Verdict determinism() {
  const fs::path dir = fs::temp_directory_path() / ("hypercover_accept_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  const fs::path old = fs::current_path();
  fs::current_path(dir);

  const auto invoke = [](std::vector<std::string> args, std::string& err) {
    args.insert(args.begin(), "hypercover");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, e;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, e);
    err = e.str();
    return code;
  };
  const auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };

  std::string err;
  std::string detail;
  bool ok = invoke({"design", "--family", "factorial", "--d", "6", "-o", "f6.csv"}, err) == 0;
  const std::vector<std::string> eval = {"--design", "f6.csv", "--box", "-1,1", "--N", "30000", "--seed", "17"};
  std::vector<std::vector<std::string>> cmds = {
      {"design", "--family", "uniform_delta", "--d", "5", "--n", "40", "--delta", "0.7", "--seed", "17"},
      {"coverage", "--r", "1.2"},
      {"quantile", "--gamma", "0.01"},
      {"cdf", "--rmax", "2", "--steps", "20"},
      {"quantize", "--p", "1,2,8"},
      {"lloyd", "--iters", "5"},
      {"fig1", "--dims", "1,4,8", "--n", "100", "--N", "20000", "--replicates", "2", "--seed", "17"},
      {"fig2", "--d", "8", "--n", "200", "--rmax", "1.5", "--steps", "20", "--N", "20000", "--seed", "17"},
      {"fig3", "--d", "10", "--n", "100", "--deltas", "0.4,0.7,1", "--N", "20000", "--seed", "17"},
      {"fig4", "--d", "12", "--gammas", "0.1,0.01", "--N", "20000", "--seed", "17"}};
  std::size_t compared = 0;
  for (auto& cmd : cmds) {
    const std::string sub = cmd[0];
    if (sub != "design" && sub.rfind("fig", 0) != 0) cmd.insert(cmd.end(), eval.begin(), eval.end());
    std::vector<std::string> runs;
    for (const char* threads : {"1", "4"}) {
      const std::string stem = sub + "_t" + threads;
      auto args = cmd;
      args.insert(args.begin(), {"--threads", threads});
      args.insert(args.end(), {"-o", stem + ".out"});
      if (invoke(args, err) != 0) {
        ok = false;
        detail += sub + " failed: " + err;
        continue;
      }
      // Every file the run wrote except the manifest, which records wall time and thread count.
      std::string all;
      for (const char* suffix : {".out", ".out.trace.csv", ".out.quantiles.csv"})
        if (fs::exists(stem + suffix)) all += std::string(suffix) + "\n" + slurp(stem + suffix);
      runs.push_back(all);
    }
    if (runs.size() == 2 && runs[0] == runs[1] && !runs[0].empty()) {
      ++compared;
    } else {
      ok = false;
      detail += sub + " differs; ";
    }
  }
  fs::current_path(old);
  fs::remove_all(dir);
  return {ok, fmt("%zu/%zu commands byte-identical for --threads 1 vs 4", compared, cmds.size()) +
                  (detail.empty() ? "" : "  " + detail)};
}

}  // namespace

int main(int argc, char** argv) {
  const Execution exec{std::max(1u, std::thread::hardware_concurrency())};
  const std::map<int, std::pair<const char*, std::function<Verdict()>>> criteria = {
      {1, {"factorial covering radius, closed form", factorial_exact}},
      {2, {"factorial covering radius, 201^3 grid oracle", factorial_grid}},
      {3, {"weak-covering quantile d=10, gamma=0.001", [&] { return weak_quantile(exec); }}},
      {4, {"quantile/radius ratio trend toward 1/sqrt(3)", [&] { return ratio_trend(exec); }}},
      {5, {"asymptotic gap at n=1000", [&] { return asymptotic_gap(exec); }}},
      {6, {"delta effect at d=50", [&] { return delta_effect(exec); }}},
      {7, {"one-dimensional analytic oracles", one_dimensional}},
      {8, {"quantization closed forms and power-mean order", [&] { return quantization_forms(exec); }}},
      {9, {"Lloyd objective monotonicity", [&] { return lloyd_monotone(exec); }}},
      {10, {"CLI determinism across thread counts", determinism}},
  };
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    const int c = std::atoi(argv[i]);
    if (!criteria.count(c)) {
      std::fprintf(stderr, "unknown criterion '%s' (expected 1..10)\n", argv[i]);
      return 2;
    }
    selected.push_back(c);
  }
  if (selected.empty())
    for (const auto& [c, _] : criteria) selected.push_back(c);

  int failures = 0;
  for (int c : selected) {
    const auto& [name, fn] = criteria.at(c);
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = fn();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    std::printf("[%s] %2d %s: %s (%.1f s)\n", v.pass ? "PASS" : "FAIL", c, name, v.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
    failures += !v.pass;
  }
  return failures == 0 ? 0 : 1;
}
