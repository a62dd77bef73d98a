#pragma once

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "pathint/cli/config.hpp"
#include "pathint/cli/report.hpp"
#include "pathint/core/random.hpp"
#include "pathint/core/stats.hpp"
#include "pathint/freefield/covariance.hpp"
#include "pathint/freefield/lattice.hpp"
#include "pathint/freefield/os.hpp"
#include "pathint/gaussian/measure.hpp"
#include "pathint/gaussian/pairings.hpp"
#include "pathint/quantum/kernel.hpp"
#include "pathint/quantum/oscillator.hpp"
#include "pathint/quantum/timeslice.hpp"
#include "pathint/wiener/brownian.hpp"
#include "pathint/wiener/feynman_kac.hpp"
#include "pathint/wiener/holder.hpp"

namespace pathint::cli {

enum class ParamType { integer, real, list };

inline const char* type_name(ParamType t) {
  switch (t) {
    case ParamType::integer:
      return "int";
    case ParamType::real:
      return "real";
    default:
      return "list";
  }
}

struct ParamSpec {
  std::string name;
  ParamType type;
  std::string default_value;
  std::string description;
};

/// Typed view of an experiment's parameters after defaults are merged in.
class Params {
 public:
  Params(const std::vector<ParamSpec>& schema, const std::map<std::string, std::string>& given) {
    for (const auto& entry : given)
      if (std::none_of(schema.begin(), schema.end(), [&](const ParamSpec& p) { return p.name == entry.first; }))
        throw usage_error("unknown parameter '" + entry.first + "'");
    for (const auto& p : schema) {
      const auto it = given.find(p.name);
      const std::string text = it == given.end() ? p.default_value : it->second;
      types_[p.name] = p.type;
      text_[p.name] = text;
      check(p.name, p.type, text);
    }
  }

  [[nodiscard]] long long integer(const std::string& k) const { return parse_integer(k, at(k, ParamType::integer)); }
  [[nodiscard]] int small(const std::string& k) const {
    const long long v = integer(k);
    if (v < -2147483647LL || v > 2147483647LL) throw usage_error("parameter '" + k + "' out of range");
    return static_cast<int>(v);
  }
  [[nodiscard]] double real(const std::string& k) const { return parse_real(k, at(k, ParamType::real)); }
  [[nodiscard]] std::vector<double> list(const std::string& k) const {
    std::vector<double> out;
    const std::string& s = at(k, ParamType::list);
    std::size_t pos = 0;
    while (pos <= s.size()) {
      const auto comma = s.find(',', pos);
      const std::string item = detail::trim(s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos));
      out.push_back(parse_real(k, item));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    return out;
  }
  [[nodiscard]] const std::map<std::string, std::string>& text() const noexcept { return text_; }

 private:
  std::map<std::string, ParamType> types_;
  std::map<std::string, std::string> text_;

  const std::string& at(const std::string& k, ParamType t) const {
    const auto it = types_.find(k);
    if (it == types_.end() || it->second != t) throw invalid_input("Params: no " + std::string(type_name(t)) + " '" + k + "'");
    return text_.at(k);
  }

  static long long parse_integer(const std::string& k, const std::string& s) {
    long long v = 0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || r.ec != std::errc() || r.ptr != s.data() + s.size())
      throw usage_error("parameter '" + k + "' expects an integer, got '" + s + "'");
    return v;
  }

  static double parse_real(const std::string& k, const std::string& s) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v))
      throw usage_error("parameter '" + k + "' expects a real number, got '" + s + "'");
    return v;
  }

  void check(const std::string& k, ParamType t, const std::string& s) const {
    switch (t) {
      case ParamType::integer:
        (void)parse_integer(k, s);
        break;
      case ParamType::real:
        (void)parse_real(k, s);
        break;
      default: {
        std::size_t pos = 0;
        while (true) {
          const auto comma = s.find(',', pos);
          (void)parse_real(k, detail::trim(s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos)));
          if (comma == std::string::npos) break;
          pos = comma + 1;
        }
      }
    }
  }
};

/// Output of one experiment before it is written to disk.
struct ExperimentResult {
  std::vector<Metric> metrics;
  std::vector<std::pair<std::string, CsvTable>> tables;  ///< file stem, table
};

struct ExperimentInfo {
  std::string name;
  std::vector<ParamSpec> schema;
  std::string description;
  std::function<ExperimentResult(const Params&, std::uint64_t)> body;
};

namespace experiments {

inline std::string label(const std::string& prefix, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%g", v);
  return prefix + buf;
}

inline void require_param(bool ok, const std::string& msg) {
  if (!ok) throw usage_error(msg);
}

inline ExperimentResult spectrum(const Params& p, std::uint64_t) {
  const int n = p.small("N");
  const int levels = p.small("levels");
  require_param(levels >= 1 && levels < n, "spectrum: need 1 <= levels < N");
  const quantum::OscillatorParams op{p.real("mass"), p.real("omega"), p.real("hbar")};
  const Eigen::VectorXd ev = quantum::spectrum(quantum::oscillator_hamiltonian(n, op));
  CsvTable t({"n", "eigenvalue", "exact", "abs_error"});
  double worst = 0.0;
  for (int k = 0; k < levels; ++k) {
    const double exact = op.hbar * op.omega * (k + 0.5);
    const double err = std::abs(ev(k) - exact);
    worst = std::max(worst, err);
    t.add({static_cast<double>(k), ev(k), exact, err});
  }
  return {{{"max_abs_error", worst, 0.0, p.real("tol"), Check::at_most}}, {{"spectrum", t}}};
}

inline ExperimentResult timeslice(const Params& p, std::uint64_t) {
  const double t = p.real("t"), x = p.real("x"), y = p.real("y"), m = p.real("mass"), hbar = p.real("hbar");
  const auto exact = quantum::free_kernel(t, x, y, m, hbar);
  CsvTable tab({"slices", "re", "im", "exact_re", "exact_im", "rel_error"});
  double worst = 0.0;
  for (double s : p.list("slices")) {
    require_param(s >= 1 && s == std::floor(s), "timeslice: slices must be positive integers");
    const auto k = quantum::timeslice_free_kernel(t, x, y, m, hbar, static_cast<int>(s));
    const double rel = std::abs(k - exact) / std::abs(exact);
    worst = std::max(worst, rel);
    tab.add({s, k.real(), k.imag(), exact.real(), exact.imag(), rel});
  }
  return {{{"max_rel_error", worst, 0.0, p.real("tol"), Check::at_most}}, {{"timeslice", tab}}};
}

inline ExperimentResult wiener_cov(const Params& p, std::uint64_t seed) {
  const int paths = p.small("paths"), steps = p.small("steps");
  const double T = p.real("T"), s = p.real("s"), t = p.real("t");
  require_param(paths >= 2 && steps >= 1 && T > 0.0, "wiener-cov: need paths >= 2, steps >= 1, T > 0");
  const double dt = T / steps;
  const auto si = std::lround(s / dt), ti = std::lround(t / dt);
  require_param(si >= 1 && ti >= 1 && si <= steps && ti <= steps && std::abs(si * dt - s) < 1e-9 &&
                    std::abs(ti * dt - t) < 1e-9,
                "wiener-cov: s and t must be grid times in (0, T]");
  const auto n = static_cast<std::size_t>(steps);
  std::vector<double> sum(n * n, 0.0), sumsq(n * n, 0.0);
  RngStream rng(seed);
  for (int k = 0; k < paths; ++k) {
    const auto path = wiener::sample_brownian(T, steps, rng);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) {
        const double v = path.values[i + 1] * path.values[j + 1];
        sum[i * n + j] += v;
        sumsq[i * n + j] += v * v;
      }
  }
  const double np = paths;
  auto cell = [&](std::size_t i, std::size_t j) {
    const double mean = sum[i * n + j] / np;
    const double var = std::max(0.0, (sumsq[i * n + j] / np - mean * mean) * np / (np - 1.0));
    return Estimate{mean, std::sqrt(var / np)};
  };
  CsvTable tab({"s", "t", "estimate", "std_error", "exact"});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      const auto e = cell(i, j);
      tab.add({(i + 1) * dt, (j + 1) * dt, e.value, e.std_error, (i + 1) * dt});
    }
  const auto lo = static_cast<std::size_t>(std::min(si, ti) - 1), hi = static_cast<std::size_t>(std::max(si, ti) - 1);
  const auto e = cell(lo, hi);
  return {{{label("cov_s", s) + label("_t", t), e.value, std::min(s, t), 4.0 * e.std_error}}, {{"covariance", tab}}};
}

inline ExperimentResult holder(const Params& p, std::uint64_t seed) {
  const int paths = p.small("paths"), coarse = p.small("coarse_steps"), fine = p.small("fine_steps");
  require_param(paths >= 1 && coarse >= 2 && fine >= coarse && fine % coarse == 0 && ((fine / coarse) & (fine / coarse - 1)) == 0,
                "holder: need fine_steps = coarse_steps * 2^k");
  const auto alphas = p.list("alphas");
  std::vector<int> levels;
  for (int s = coarse; s <= fine; s *= 2) levels.push_back(s);
  // stats[level][alpha] over paths
  std::vector<std::vector<std::vector<double>>> stats(levels.size(), std::vector<std::vector<double>>(alphas.size()));
  RngStream rng(seed);
  for (int i = 0; i < paths; ++i) {
    const auto f = wiener::sample_brownian(1.0, fine, rng);
    for (std::size_t l = 0; l < levels.size(); ++l) {
      const auto stride = static_cast<std::size_t>(fine / levels[l]);
      wiener::ScalarPath c;
      for (std::size_t j = 0; j < f.nodes(); j += stride) {
        c.times.push_back(f.times[j]);
        c.values.push_back(f.values[j]);
      }
      for (std::size_t a = 0; a < alphas.size(); ++a) stats[l][a].push_back(wiener::holder_statistic(c, alphas[a]));
    }
  }
  auto median = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
  };
  std::vector<std::string> header{"steps"};
  for (double a : alphas) header.push_back(label("median_alpha", a));
  CsvTable tab(header);
  std::vector<std::vector<double>> med(levels.size());
  for (std::size_t l = 0; l < levels.size(); ++l) {
    std::vector<double> row{static_cast<double>(levels[l])};
    for (std::size_t a = 0; a < alphas.size(); ++a) {
      med[l].push_back(median(stats[l][a]));
      row.push_back(med[l][a]);
    }
    tab.add(row);
  }
  // Growth fine/coarse: O(sqrt(log)) for alpha <= 1/2, about r^{alpha - 1/2}
  // for alpha > 1/2 where r is the refinement factor.
  const double r = static_cast<double>(fine) / coarse;
  std::vector<Metric> ms;
  for (std::size_t a = 0; a < alphas.size(); ++a) {
    const double g = med.back()[a] / med.front()[a];
    if (alphas[a] <= 0.5)
      ms.push_back({label("growth_alpha", alphas[a]), g, 2.0, 0.0, Check::at_most});
    else {
      const double expect = std::pow(r, alphas[a] - 0.5);
      ms.push_back({label("growth_alpha", alphas[a]), g, expect, 0.4 * expect});
    }
  }
  return {ms, {{"holder", tab}}};
}

inline ExperimentResult feynman_kac(const Params& p, std::uint64_t seed) {
  const double omega = p.real("omega"), t = p.real("t"), delta = p.real("delta");
  RngStream rng(seed);
  const auto e = wiener::feynman_kac_ground_energy([omega](double x) { return 0.5 * omega * omega * x * x; },
                                                   [](double x) { return std::exp(-0.5 * x * x); }, t, delta,
                                                   p.real("x0"), p.small("paths"), p.small("steps"), rng);
  CsvTable tab({"t", "delta", "estimate", "std_error", "exact"});
  tab.add({t, delta, e.value, e.std_error, 0.5 * omega});
  return {{{"ground_energy", e.value, 0.5 * omega, p.real("tol")}}, {{"ground_energy", tab}}};
}

inline double double_factorial(int k) {
  double r = 1.0;
  for (int j = k; j > 1; j -= 2) r *= j;
  return r;
}

inline ExperimentResult wick_moments(const Params& p, std::uint64_t seed) {
  const int k = p.small("k"), dim = p.small("dim"), samples = p.small("samples");
  require_param(k >= 1 && k <= 12, "wick-moments: k must be in [1, 12]");
  require_param(dim >= 1 && samples >= 2, "wick-moments: need dim >= 1 and samples >= 2");
  // Sigma = I; every vector is the first axis, so E<u, x>^j = (j - 1)!!.
  const gaussian::GaussianSpec spec(Eigen::MatrixXd::Identity(dim, dim));
  const Eigen::VectorXd e1 = Eigen::VectorXd::Unit(dim, 0);
  RngStream rng(seed);
  std::vector<std::vector<double>> powers(static_cast<std::size_t>(k), std::vector<double>(static_cast<std::size_t>(samples)));
  for (int i = 0; i < samples; ++i) {
    const double x = gaussian::sample(spec, rng).dot(e1);
    double v = 1.0;
    for (int j = 0; j < k; ++j) powers[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = v *= x;
  }
  CsvTable tab({"j", "pairings", "pairing_moment", "mc_estimate", "mc_std_error", "exact"});
  double pm_k = 0, count_k = 0;
  Estimate mc_k{};
  for (int j = 1; j <= k; ++j) {
    const double count = static_cast<double>(gaussian::enumerate_pairings(j).size());
    const double pm = gaussian::moment_wick(spec, std::vector<Eigen::VectorXd>(static_cast<std::size_t>(j), e1));
    const auto mc = mean_and_stderr(powers[static_cast<std::size_t>(j - 1)]);
    const double exact = j % 2 == 0 ? double_factorial(j - 1) : 0.0;
    tab.add({static_cast<double>(j), count, pm, mc.value, mc.std_error, exact});
    if (j == k) pm_k = pm, count_k = count, mc_k = mc;
  }
  const double exact = k % 2 == 0 ? double_factorial(k - 1) : 0.0;
  return {{{"pairing_count", count_k, exact, 0.0},
           {"pairing_moment", pm_k, exact, 1e-12 * std::max(1.0, exact)},
           {"mc_moment", mc_k.value, pm_k, 4.0 * mc_k.std_error}},
          {{"moments", tab}}};
}

inline ExperimentResult gff_cov(const Params& p, std::uint64_t seed) {
  const freefield::LatticeSpec s(p.small("L"), p.real("a"), p.real("m"));
  const int samples = p.small("samples"), wk = p.small("wick_k"), wd = p.small("wick_distance");
  require_param(samples >= 2 && wk >= 1 && wk <= 6 && wd >= 0 && wd < s.L, "gff-cov: bad samples, wick_k or wick_distance");
  std::vector<int> ds;
  for (double d : p.list("distances")) {
    require_param(d >= 0 && d < s.L && d == std::floor(d), "gff-cov: distances must be integers in [0, L)");
    ds.push_back(static_cast<int>(d));
  }
  const freefield::GffSampler sampler(s);
  const auto L = s.L;
  std::vector<std::vector<double>> prod(ds.size(), std::vector<double>(static_cast<std::size_t>(samples)));
  std::vector<double> wick(static_cast<std::size_t>(samples));
  RngStream rng(seed);
  const double norm = 1.0 / (2.0 * static_cast<double>(s.sites()));
  for (int i = 0; i < samples; ++i) {
    const auto f = sampler(rng);
    const auto& v = f.values;
    for (std::size_t d = 0; d < ds.size(); ++d) {
      double acc = 0.0;
      for (int t = 0; t < L; ++t)
        for (int x = 0; x < L; ++x) acc += v(t, x) * (v((t + ds[d]) % L, x) + v(t, (x + ds[d]) % L));
      prod[d][static_cast<std::size_t>(i)] = acc * norm;
    }
    const Eigen::MatrixXd w = freefield::wick_power_field(f, wk);
    double acc = 0.0;
    for (int t = 0; t < L; ++t)
      for (int x = 0; x < L; ++x) acc += w(t, x) * (w((t + wd) % L, x) + w(t, (x + wd) % L));
    wick[static_cast<std::size_t>(i)] = acc * norm;
  }
  CsvTable tab({"distance", "r", "empirical", "std_error", "lattice", "continuum"});
  std::vector<Metric> ms;
  for (std::size_t d = 0; d < ds.size(); ++d) {
    const auto e = mean_and_stderr(prod[d]);
    const double lat = freefield::lattice_covariance(s, ds[d], 0);
    const double r = ds[d] * s.a;
    const double cont = ds[d] == 0 ? std::nan("") : freefield::covariance({2, s.m}, r);
    tab.add({static_cast<double>(ds[d]), r, e.value, e.std_error, lat, cont});
    ms.push_back({label("cov_d", ds[d]), e.value, lat, 4.0 * e.std_error});
  }
  const auto e = mean_and_stderr(wick);
  double kfact = 1.0;
  for (int j = 2; j <= wk; ++j) kfact *= j;
  ms.push_back({label("wick_k", wk) + label("_d", wd), e.value, kfact * std::pow(freefield::lattice_covariance(s, wd, 0), wk),
                4.0 * e.std_error});
  return {ms, {{"covariance", tab}}};
}

inline ExperimentResult interaction(const Params& p, std::uint64_t seed) {
  const freefield::LatticeSpec s(p.small("L"), p.real("a"), p.real("m"));
  const int samples = p.small("samples");
  require_param(samples >= 2, "interaction: need samples >= 2");
  const double alpha = std::sqrt(p.real("alpha2"));
  const double lambda = p.real("lambda");
  const freefield::GffSampler sampler(s);
  const auto region = freefield::Region::full(s);
  const std::vector<double> phi4{0, 0, 0, 0, lambda};
  const Eigen::MatrixXd ones = Eigen::MatrixXd::Ones(s.L, s.L);

  // Partition function of lambda :phi^4:.
  RngStream zr(seed, 1);
  const auto z = freefield::partition_estimate(s, phi4, region, samples, zr);

  // E[S] = 0 and E[S^2] = 24 lambda^2 a^4 L^2 sum_d C(d)^4.
  RngStream vr(seed, 2);
  std::vector<double> act(static_cast<std::size_t>(samples)), act2(act.size());
  std::vector<double> ev(act.size()), ev2(act.size());
  for (std::size_t i = 0; i < act.size(); ++i) {
    const auto f = sampler(vr);
    act[i] = freefield::interaction_action(f, phi4, region);
    act2[i] = act[i] * act[i];
    ev[i] = freefield::exp_interaction(f, alpha, ones);
    ev2[i] = ev[i] * ev[i];
  }
  const Eigen::MatrixXd c = freefield::lattice_covariance_table(s);
  const double var_s = 24.0 * lambda * lambda * std::pow(s.a, 4) * static_cast<double>(s.sites()) * c.array().pow(4).sum();
  const auto ms1 = mean_and_stderr(act), ms2 = mean_and_stderr(act2);
  const auto mv1 = mean_and_stderr(ev), mv2 = mean_and_stderr(ev2);
  const double area = s.a * s.a * static_cast<double>(s.sites());
  const double second = freefield::exp_interaction_second_moment(s, alpha, ones);

  CsvTable moments({"quantity", "estimate", "std_error", "closed_form"});
  moments.add({1, ms1.value, ms1.std_error, 0.0});
  moments.add({2, ms2.value, ms2.std_error, var_s});
  moments.add({3, mv1.value, mv1.std_error, area});
  moments.add({4, mv2.value, mv2.std_error, second});
  moments.add({5, z.z, z.std_error, 1.0});

  // Second moment of the exponential at fixed physical side under refinement.
  const double side = p.real("trend_side");
  const double lo2 = p.real("alpha2_low"), hi2 = p.real("alpha2_high");
  CsvTable trend({"L", "a", "second_moment_low", "second_moment_high"});
  std::vector<double> low, high;
  for (double Ld : p.list("trend_L")) {
    require_param(Ld >= 4 && Ld == std::floor(Ld), "interaction: trend_L entries must be integers >= 4");
    const freefield::LatticeSpec t(static_cast<int>(Ld), side / Ld, s.m);
    const Eigen::MatrixXd g = Eigen::MatrixXd::Ones(t.L, t.L);
    low.push_back(freefield::exp_interaction_second_moment(t, std::sqrt(lo2), g));
    high.push_back(freefield::exp_interaction_second_moment(t, std::sqrt(hi2), g));
    trend.add({Ld, t.a, low.back(), high.back()});
  }
  require_param(low.size() >= 2, "interaction: trend_L needs at least two lattices");
  double max_low = 0.0, min_high = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < low.size(); ++i) {
    max_low = std::max(max_low, low[i] / low[i - 1]);
    min_high = std::min(min_high, high[i] / high[i - 1]);
  }
  return {{{"phi4_mean", ms1.value, 0.0, 4.0 * ms1.std_error},
           {"phi4_second_moment", ms2.value, var_s, 4.0 * ms2.std_error},
           {"exp_mean", mv1.value, area, 4.0 * mv1.std_error},
           {"exp_second_moment", mv2.value, second, 4.0 * mv2.std_error},
           {"partition_jensen", z.z, 1.0, 4.0 * z.std_error, Check::at_least},
           {"trend_low_max_ratio", max_low, p.real("ratio_bounded"), 0.0, Check::at_most},
           {"trend_high_min_ratio", min_high, p.real("ratio_growing"), 0.0, Check::at_least}},
          {{"moments", moments}, {"trend", trend}}};
}

inline ExperimentResult os_check(const Params& p, std::uint64_t seed) {
  const freefield::LatticeSpec s(p.small("L"), p.real("a"), p.real("m"));
  const int count = p.small("functions"), trials = p.small("trials");
  require_param(count >= 1 && trials >= 1, "os-check: need functions >= 1 and trials >= 1");
  const double rp_tol = p.real("rp_tol");
  RngStream rng(seed);

  CsvTable lat({"trial", "min_eigenvalue"});
  double lat_min = std::numeric_limits<double>::infinity();
  for (int tr = 0; tr < trials; ++tr) {
    std::vector<Eigen::MatrixXd> fs;
    for (int i = 0; i < count; ++i) {
      Eigen::MatrixXd f = Eigen::MatrixXd::Zero(s.L, s.L);
      for (int k = 0; k < 5; ++k) {
        const int t = 1 + static_cast<int>(rng.uniform() * (s.L / 2 - 1));
        const int x = static_cast<int>(rng.uniform() * s.L);
        f(t, x) += rng.normal();
      }
      fs.push_back(f);
    }
    const double e = freefield::reflection_positivity_check(s, fs);
    lat_min = std::min(lat_min, e);
    lat.add({static_cast<double>(tr), e});
  }

  CsvTable cont({"dim", "trial", "min_eigenvalue"});
  double cont_min = std::numeric_limits<double>::infinity();
  for (int n : {2, 3}) {
    const freefield::CovarianceKernel k(n, s.m);
    for (int tr = 0; tr < trials; ++tr) {
      std::vector<freefield::PointFunction> fs;
      for (int i = 0; i < count; ++i) {
        freefield::PointFunction f;
        for (int j = 0; j < 4; ++j) {
          Eigen::VectorXd x(n);
          x[0] = 0.05 + 2.0 * rng.uniform();
          for (int d = 1; d < n; ++d) x[d] = 2.0 * rng.normal();
          f.points.push_back(x);
          f.weights.push_back(rng.normal());
        }
        fs.push_back(f);
      }
      const double e = freefield::reflection_positivity_check(k, fs);
      cont_min = std::min(cont_min, e);
      cont.add({static_cast<double>(n), static_cast<double>(tr), e});
    }
  }

  auto bump = [](double cx, double cy, double sx, double sy, double angle, double amp) {
    Eigen::Matrix2d r;
    r << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
    const Eigen::Matrix2d d = Eigen::Vector2d(1 / (sx * sx), 1 / (sy * sy)).asDiagonal();
    return freefield::Bump{Eigen::Vector2d(cx, cy), r * d * r.transpose(), amp};
  };
  const freefield::CovarianceKernel k2(2, s.m);
  const auto f = bump(0.3, -0.1, 0.35, 0.2, 0.4, 1.0);
  const auto g = bump(-0.5, 0.6, 0.25, 0.4, -1.0, 0.7);
  CsvTable inv({"angle", "shift_t", "shift_x", "relative_defect"});
  double inv_max = 0.0;
  for (const auto& [angle, st, sx] : {std::tuple{0.0, 0.37, -0.2}, std::tuple{std::numbers::pi / 5, 0.0, 0.0},
                                      std::tuple{2.1, -1.0, 0.5}}) {
    const double d = freefield::euclidean_invariance_check(k2, f, g, {angle, Eigen::Vector2d(st, sx)});
    inv_max = std::max(inv_max, d);
    inv.add({angle, st, sx, d});
  }
  return {{{"lattice_min_eigenvalue", lat_min, 0.0, rp_tol, Check::at_least},
           {"continuum_min_eigenvalue", cont_min, 0.0, rp_tol, Check::at_least},
           {"invariance_max_defect", inv_max, 0.0, p.real("invariance_tol"), Check::at_most}},
          {{"lattice_rp", lat}, {"continuum_rp", cont}, {"invariance", inv}}};
}

}  // namespace experiments

/// Registered experiments, sorted by name.
inline const std::vector<ExperimentInfo>& registry() {
  using T = ParamType;
  static const std::vector<ExperimentInfo> all = [] {
    std::vector<ExperimentInfo> v{
        {"feynman-kac",
         {{"paths", T::integer, "200000", "Brownian paths"},
          {"steps", T::integer, "500", "time steps over [0, t + delta]"},
          {"t", T::real, "4", "first readout time"},
          {"delta", T::real, "1", "gap between readouts"},
          {"x0", T::real, "0", "starting point"},
          {"omega", T::real, "1", "oscillator frequency"},
          {"tol", T::real, "0.02", "absolute tolerance on omega/2"}},
         "ground-state energy of x^2/2 from Feynman-Kac decay",
         experiments::feynman_kac},
        {"gff-cov",
         {{"L", T::integer, "64", "lattice side"},
          {"a", T::real, "0.125", "lattice spacing"},
          {"m", T::real, "1", "mass"},
          {"samples", T::integer, "10000", "field samples"},
          {"distances", T::list, "0,1,2,4,8", "site separations"},
          {"wick_k", T::integer, "3", "Wick power"},
          {"wick_distance", T::integer, "1", "separation for the Wick-power two-point function"}},
         "lattice free-field covariance against the lattice and continuum kernels",
         experiments::gff_cov},
        {"holder",
         {{"paths", T::integer, "100", "Brownian paths"},
          {"coarse_steps", T::integer, "1024", "coarsest grid"},
          {"fine_steps", T::integer, "16384", "finest grid"},
          {"alphas", T::list, "0.4,0.6,1", "Hoelder exponents"}},
         "Hoelder statistic of Brownian paths under grid refinement",
         experiments::holder},
        {"interaction",
         {{"L", T::integer, "16", "lattice side"},
          {"a", T::real, "0.25", "lattice spacing"},
          {"m", T::real, "1", "mass"},
          {"samples", T::integer, "20000", "field samples"},
          {"lambda", T::real, "0.5", "phi^4 coupling"},
          {"alpha2", T::real, "6.2831853071795862", "alpha^2 of the exponential interaction"},
          {"trend_side", T::real, "4", "physical side for the refinement trend"},
          {"trend_L", T::list, "16,32,64,128", "lattice sides for the trend"},
          {"alpha2_low", T::real, "6.2831853071795862", "alpha^2 below the threshold"},
          {"alpha2_high", T::real, "18.849555921538759", "alpha^2 above the threshold"},
          {"ratio_bounded", T::real, "1.1", "largest refinement ratio below the threshold"},
          {"ratio_growing", T::real, "1.6", "smallest refinement ratio above the threshold"}},
         "partition estimate, interaction moments and the alpha^2 threshold trend",
         experiments::interaction},
        {"os-check",
         {{"L", T::integer, "16", "lattice side"},
          {"a", T::real, "0.25", "lattice spacing"},
          {"m", T::real, "1", "mass"},
          {"functions", T::integer, "10", "test functions per Gram matrix"},
          {"trials", T::integer, "20", "random Gram matrices"},
          {"rp_tol", T::real, "1e-10", "allowed negative eigenvalue"},
          {"invariance_tol", T::real, "1e-6", "relative invariance defect"}},
         "reflection positivity and Euclidean invariance of the free covariance",
         experiments::os_check},
        {"spectrum",
         {{"N", T::integer, "200", "truncation"},
          {"mass", T::real, "1", "mass"},
          {"omega", T::real, "1", "frequency"},
          {"hbar", T::real, "1", "Planck constant"},
          {"levels", T::integer, "10", "eigenvalues compared"},
          {"tol", T::real, "1e-8", "absolute tolerance"}},
         "oscillator eigenvalues against hbar omega (n + 1/2)",
         experiments::spectrum},
        {"timeslice",
         {{"slices", T::list, "1,2,5,10,50", "slice counts"},
          {"t", T::real, "1", "time"},
          {"x", T::real, "0", "initial point"},
          {"y", T::real, "1", "final point"},
          {"mass", T::real, "1", "mass"},
          {"hbar", T::real, "1", "Planck constant"},
          {"tol", T::real, "1e-10", "relative tolerance"}},
         "time-sliced free kernel against the closed form",
         experiments::timeslice},
        {"wick-moments",
         {{"k", T::integer, "4", "moment order"},
          {"dim", T::integer, "2", "dimension, Sigma = I"},
          {"samples", T::integer, "100000", "Monte Carlo samples"}},
         "Gaussian moments by pairing sums against Monte Carlo",
         experiments::wick_moments},
        {"wiener-cov",
         {{"paths", T::integer, "100000", "Brownian paths"},
          {"steps", T::integer, "10", "grid steps"},
          {"T", T::real, "1", "horizon"},
          {"s", T::real, "0.3", "first time"},
          {"t", T::real, "0.8", "second time"}},
         "Brownian covariance table against min(s, t)",
         experiments::wiener_cov},
    };
    std::sort(v.begin(), v.end(), [](const auto& x, const auto& y) { return x.name < y.name; });
    return v;
  }();
  return all;
}

inline const std::vector<ExperimentInfo>& list_experiments() { return registry(); }

inline const ExperimentInfo& find_experiment(const std::string& name) {
  for (const auto& e : registry())
    if (e.name == name) return e;
  throw unknown_experiment_error("unknown experiment '" + name + "'");
}

/// Runs the configured experiment and writes <name>_<table>.csv files plus
/// <name>_report.txt into the output directory.
inline ExperimentReport run(const ExperimentConfig& config) {
  if (config.experiment.empty()) throw usage_error("no experiment given");
  const auto& info = find_experiment(config.experiment);
  const Params params(info.schema, config.params);
  const auto dir = prepare_output_dir(resolve_output_dir(config));

  const auto start = std::chrono::steady_clock::now();
  auto result = info.body(params, config.seed);
  ExperimentReport rep;
  rep.name = info.name;
  rep.parameters = params.text();
  rep.seed = config.seed;
  rep.metrics = std::move(result.metrics);
  for (const auto& [stem, table] : result.tables) {
    const auto path = dir / (info.name + "_" + stem + ".csv");
    write_file(path, table.to_string());
    rep.artifacts.push_back(path.string());
  }
  const auto report_path = dir / (info.name + "_report.txt");
  rep.artifacts.push_back(report_path.string());
  rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_file(report_path, rep.to_text());
  return rep;
}

}  // namespace pathint::cli
