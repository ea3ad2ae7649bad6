#include "l1coreset/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

#include "l1coreset/coreset.hpp"
#include "l1coreset/error.hpp"
#include "l1coreset/format.hpp"
#include "l1coreset/rng.hpp"

namespace l1coreset::bench {

using nlohmann::json;

std::string_view to_string(Method m) {
  switch (m) {
    case Method::Lewis: return "lewis";
    case Method::L2s: return "l2s";
    case Method::Uniform: return "uniform";
  }
  return "unknown";
}

Method method_from_string(std::string_view name) {
  if (name == "lewis") return Method::Lewis;
  if (name == "l2s") return Method::L2s;
  if (name == "uniform") return Method::Uniform;
  if (name == "sketch")
    throw Error(ErrorCode::NotImplemented, "method 'sketch' (oblivious sketching baseline) is not implemented");
  throw Error(ErrorCode::InvalidConfig, "unknown method '" + std::string(name) + "'");
}

void ExperimentConfig::validate() const {
  if (methods.empty()) throw Error(ErrorCode::InvalidConfig, "at least one method is required");
  for (std::size_t i = 0; i < methods.size(); ++i)
    for (std::size_t j = i + 1; j < methods.size(); ++j)
      if (methods[i] == methods[j]) throw Error(ErrorCode::InvalidConfig, "duplicate method");
  if (sizes.empty()) throw Error(ErrorCode::InvalidConfig, "at least one coreset size is required");
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] < 1) throw Error(ErrorCode::InvalidConfig, "coreset sizes must be >= 1");
    if (i > 0 && sizes[i] <= sizes[i - 1])
      throw Error(ErrorCode::InvalidConfig, "coreset sizes must be strictly increasing");
  }
  if (trials < 1) throw Error(ErrorCode::InvalidConfig, "trials must be >= 1");
  if (loss != "logistic" && loss != "hinge")
    throw Error(ErrorCode::InvalidConfig, "loss must be 'logistic' or 'hinge'");
  if (mu_budget < 1) throw Error(ErrorCode::InvalidConfig, "mu_budget must be >= 1");
  if (histogram_bins < 1) throw Error(ErrorCode::InvalidConfig, "histogram_bins must be >= 1");
  if (threads < 0) throw Error(ErrorCode::InvalidConfig, "threads must be >= 0");
  lewis.validate();
  solver.validate();
}

json ExperimentConfig::to_json() const {
  json methods_json = json::array();
  for (Method m : methods) methods_json.push_back(std::string(bench::to_string(m)));
  return {
      {"dataset", dataset},
      {"loss", loss},
      {"reg", reg.to_string()},
      {"methods", methods_json},
      {"sizes", sizes},
      {"trials", trials},
      {"seed", seed},
      {"uniform_mix", uniform_mix},
      {"mu_budget", mu_budget},
      {"histogram_bins", histogram_bins},
      {"lewis", {{"max_iters", lewis.max_iters}, {"tol", lewis.tol}}},
      {"solver",
       {{"max_iters", solver.max_iters},
        {"grad_tol", solver.grad_tol},
        {"initial_step", solver.initial_step},
        {"shrink", solver.shrink},
        {"sufficient_decrease", solver.sufficient_decrease},
        {"history", solver.history}}},
  };
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  ExperimentConfig c;
  try {
    if (j.contains("dataset")) c.dataset = j.at("dataset").get<std::string>();
    if (j.contains("loss")) c.loss = j.at("loss").get<std::string>();
    if (j.contains("reg")) c.reg = Regularizer::parse(j.at("reg").get<std::string>());
    if (j.contains("methods")) {
      c.methods.clear();
      for (const auto& m : j.at("methods")) c.methods.push_back(method_from_string(m.get<std::string>()));
    }
    if (j.contains("sizes")) c.sizes = j.at("sizes").get<std::vector<Index>>();
    if (j.contains("trials")) c.trials = j.at("trials").get<int>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("uniform_mix")) c.uniform_mix = j.at("uniform_mix").get<bool>();
    if (j.contains("mu_budget")) c.mu_budget = j.at("mu_budget").get<std::size_t>();
    if (j.contains("histogram_bins")) c.histogram_bins = j.at("histogram_bins").get<std::size_t>();
    if (j.contains("lewis")) {
      const auto& l = j.at("lewis");
      c.lewis.max_iters = l.value("max_iters", c.lewis.max_iters);
      c.lewis.tol = l.value("tol", c.lewis.tol);
    }
    if (j.contains("solver")) {
      const auto& s = j.at("solver");
      c.solver.max_iters = s.value("max_iters", c.solver.max_iters);
      c.solver.grad_tol = s.value("grad_tol", c.solver.grad_tol);
      c.solver.initial_step = s.value("initial_step", c.solver.initial_step);
      c.solver.shrink = s.value("shrink", c.solver.shrink);
      c.solver.sufficient_decrease = s.value("sufficient_decrease", c.solver.sufficient_decrease);
      c.solver.history = s.value("history", c.solver.history);
    }
    if (j.contains("threads")) c.threads = j.at("threads").get<int>();
    if (j.contains("out_dir")) c.out_dir = j.at("out_dir").get<std::string>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, std::string("bad config json: ") + e.what());
  }
  return c;
}

namespace {

std::vector<std::pair<std::string, std::string>> parse_kv(std::string_view body) {
  std::vector<std::pair<std::string, std::string>> out;
  while (!body.empty()) {
    const auto comma = body.find(',');
    const std::string_view item = body.substr(0, comma);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos)
      throw Error(ErrorCode::InvalidConfig, "expected key=value in dataset spec, got '" + std::string(item) + "'");
    out.emplace_back(std::string(trim(item.substr(0, eq))), std::string(trim(item.substr(eq + 1))));
    if (comma == std::string_view::npos) break;
    body.remove_prefix(comma + 1);
  }
  return out;
}

}  // namespace

LabeledMatrix load_dataset(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string body = colon == std::string::npos ? std::string() : spec.substr(colon + 1);
  if (kind == "libsvm") return data::load_libsvm(body);
  if (kind == "csv") return data::load_csv(body);
  if (kind == "synthetic") {
    data::SyntheticSpec s;
    for (const auto& [key, value] : parse_kv(body)) {
      bool ok = true;
      if (key == "n") ok = parse_int(value, s.n);
      else if (key == "d") ok = parse_int(value, s.d);
      else if (key == "skew") ok = parse_double(value, s.skew);
      else if (key == "flip") ok = parse_double(value, s.flip_rate);
      else if (key == "seed") ok = parse_int(value, s.seed);
      else throw Error(ErrorCode::InvalidConfig, "unknown synthetic parameter '" + key + "'");
      if (!ok) throw Error(ErrorCode::InvalidConfig, "bad value for synthetic parameter '" + key + "'");
    }
    return data::gen_synthetic(s);
  }
  throw Error(ErrorCode::InvalidConfig, "dataset spec must start with synthetic:, libsvm: or csv:");
}

std::size_t Cell::failures() const {
  return static_cast<std::size_t>(std::count(status.begin(), status.end(), TrialStatus::Failed));
}

std::size_t Cell::unconverged() const {
  return static_cast<std::size_t>(std::count(status.begin(), status.end(), TrialStatus::Unconverged));
}

namespace {

bool same(double a, double b) { return (std::isnan(a) && std::isnan(b)) || a == b; }

}  // namespace

bool Cell::operator==(const Cell& o) const {
  if (m != o.m || !same(p25, o.p25) || !same(p50, o.p50) || !same(p75, o.p75)) return false;
  if (iterations != o.iterations || status != o.status || relative_loss.size() != o.relative_loss.size())
    return false;
  for (std::size_t i = 0; i < relative_loss.size(); ++i)
    if (!same(relative_loss[i], o.relative_loss[i])) return false;
  return true;
}

double nearest_rank(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return std::numeric_limits<double>::quiet_NaN();
  const double n = static_cast<double>(sorted.size());
  auto rank = static_cast<std::size_t>(std::ceil(q / 100.0 * n));
  rank = std::clamp<std::size_t>(rank, 1, sorted.size());
  return sorted[rank - 1];
}

namespace {

std::string_view status_name(TrialStatus s) {
  switch (s) {
    case TrialStatus::Ok: return "ok";
    case TrialStatus::Unconverged: return "unconverged";
    case TrialStatus::Failed: return "failed";
  }
  return "failed";
}

TrialStatus status_from_name(std::string_view s) {
  if (s == "ok") return TrialStatus::Ok;
  if (s == "unconverged") return TrialStatus::Unconverged;
  if (s == "failed") return TrialStatus::Failed;
  throw Error(ErrorCode::ParseError, "unknown trial status '" + std::string(s) + "'");
}

json number_or_null(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double number_from(const json& j) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw Error(ErrorCode::ParseError, "bad number '" + s + "'");
  }
  return j.get<double>();
}

}  // namespace

json ExperimentReport::to_json() const {
  json methods_json = json::array();
  for (const auto& mr : methods) {
    json cells = json::array();
    for (const auto& c : mr.cells) {
      json trials = json::array();
      for (std::size_t t = 0; t < c.relative_loss.size(); ++t)
        trials.push_back({{"relative_loss", number_or_null(c.relative_loss[t])},
                          {"iterations", c.iterations[t]},
                          {"status", std::string(status_name(c.status[t]))}});
      cells.push_back({{"m", c.m},
                       {"p25", number_or_null(c.p25)},
                       {"p50", number_or_null(c.p50)},
                       {"p75", number_or_null(c.p75)},
                       {"failures", c.failures()},
                       {"unconverged", c.unconverged()},
                       {"trials", trials}});
    }
    methods_json.push_back({{"method", std::string(to_string(mr.method))}, {"cells", cells}});
  }
  json hists = json::array();
  for (const auto& h : histograms)
    hists.push_back({{"p", h.p_method},
                     {"q", "lewis"},
                     {"edges", h.histogram.edges},
                     {"counts", h.histogram.counts}});
  return {
      {"config", config},
      {"n", n},
      {"d", d},
      {"beta_star", {{"objective", number_or_null(beta_star_objective)},
                     {"converged", beta_star_converged},
                     {"iterations", beta_star_iterations}}},
      {"mu_hat", number_or_null(mu_hat)},
      {"rng_algorithm", rng_algorithm},
      {"methods", methods_json},
      {"histograms", hists},
  };
}

ExperimentReport ExperimentReport::from_json(const json& j) {
  ExperimentReport r;
  try {
    r.config = j.at("config");
    r.n = j.at("n").get<Index>();
    r.d = j.at("d").get<Index>();
    const auto& bs = j.at("beta_star");
    r.beta_star_objective = number_from(bs.at("objective"));
    r.beta_star_converged = bs.at("converged").get<bool>();
    r.beta_star_iterations = bs.at("iterations").get<int>();
    r.mu_hat = number_from(j.at("mu_hat"));
    r.rng_algorithm = j.at("rng_algorithm").get<std::string>();
    for (const auto& mj : j.at("methods")) {
      MethodResult mr;
      mr.method = method_from_string(mj.at("method").get<std::string>());
      for (const auto& cj : mj.at("cells")) {
        Cell c;
        c.m = cj.at("m").get<Index>();
        c.p25 = number_from(cj.at("p25"));
        c.p50 = number_from(cj.at("p50"));
        c.p75 = number_from(cj.at("p75"));
        for (const auto& tj : cj.at("trials")) {
          c.relative_loss.push_back(number_from(tj.at("relative_loss")));
          c.iterations.push_back(tj.at("iterations").get<int>());
          c.status.push_back(status_from_name(tj.at("status").get<std::string>()));
        }
        mr.cells.push_back(std::move(c));
      }
      r.methods.push_back(std::move(mr));
    }
    for (const auto& hj : j.at("histograms")) {
      HistogramEntry h;
      h.p_method = hj.at("p").get<std::string>();
      h.histogram.edges = hj.at("edges").get<std::vector<double>>();
      h.histogram.counts = hj.at("counts").get<std::vector<std::size_t>>();
      r.histograms.push_back(std::move(h));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("bad report json: ") + e.what());
  }
  return r;
}

namespace {

WeightVector method_weights(Method m, const DenseMatrix& Z, const LewisConfig& lewis) {
  switch (m) {
    case Method::Lewis: return lewis_weights(Z, lewis).weights;
    case Method::L2s: return sqrt_leverage_distribution(Z);
    case Method::Uniform: return uniform_distribution(Z.rows());
  }
  return uniform_distribution(Z.rows());
}

// Runs body(i) for i in [0, count) on `threads` workers; each index is
// handled exactly once and writes only its own output slot.
template <class Body>
void parallel_for(std::size_t count, int threads, Body&& body) {
  std::size_t workers = threads > 0 ? static_cast<std::size_t>(threads)
                                    : std::max<std::size_t>(1, std::thread::hardware_concurrency());
  workers = std::min(workers, count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) body(i);
    });
  for (auto& t : pool) t.join();
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const LabeledMatrix data = load_dataset(cfg.dataset);
  for (Index m : cfg.sizes)
    if (m < 1) throw Error(ErrorCode::InvalidConfig, "coreset size must be >= 1");
  const NiceHinge f = NiceHinge::from_name(cfg.loss);

  ExperimentReport report;
  report.config = cfg.to_json();
  report.n = data.rows();
  report.d = data.cols();
  report.rng_algorithm = std::string(CounterRng::kAlgorithm);

  const SolveResult star = minimize(data, f, cfg.reg, nullptr, cfg.solver);
  report.beta_star_objective = star.objective;
  report.beta_star_converged = star.converged;
  report.beta_star_iterations = star.iterations;
  report.mu_hat = estimate_mu(data, cfg.mu_budget, derive_seed(cfg.seed, {hash_name("mu")})).value;

  std::vector<WeightVector> weights;
  for (Method m : cfg.methods) {
    const auto t0 = std::chrono::steady_clock::now();
    weights.push_back(method_weights(m, data.Z, cfg.lewis));
    const auto t1 = std::chrono::steady_clock::now();
    report.weight_seconds[std::string(to_string(m))] = std::chrono::duration<double>(t1 - t0).count();
  }

  const auto lewis_it = std::find(cfg.methods.begin(), cfg.methods.end(), Method::Lewis);
  if (lewis_it != cfg.methods.end()) {
    const WeightVector& q = weights[static_cast<std::size_t>(lewis_it - cfg.methods.begin())];
    for (std::size_t k = 0; k < cfg.methods.size(); ++k) {
      if (cfg.methods[k] == Method::Lewis) continue;
      HistogramEntry h{std::string(to_string(cfg.methods[k])),
                       distribution_ratio_histogram(weights[k], q, cfg.histogram_bins)};
      h.histogram.ratios.clear();
      report.histograms.push_back(std::move(h));
    }
  }

  const std::size_t n_methods = cfg.methods.size();
  const std::size_t n_sizes = cfg.sizes.size();
  const auto n_trials = static_cast<std::size_t>(cfg.trials);

  std::vector<WeightVector> probs;
  for (std::size_t k = 0; k < n_methods; ++k)
    for (Index m : cfg.sizes) probs.push_back(sampling_probabilities(weights[k], m, cfg.uniform_mix));

  struct Outcome {
    double rel = std::numeric_limits<double>::quiet_NaN();
    int iterations = 0;
    TrialStatus status = TrialStatus::Failed;
  };
  std::vector<Outcome> outcomes(n_methods * n_sizes * n_trials);

  parallel_for(outcomes.size(), cfg.threads, [&](std::size_t slot) {
    const std::size_t trial = slot % n_trials;
    const std::size_t cell = slot / n_trials;
    const std::size_t k = cell / n_sizes;
    const Index m = cfg.sizes[cell % n_sizes];
    Outcome& out = outcomes[slot];
    try {
      const std::uint64_t seed = derive_seed(
          cfg.seed, {hash_name(to_string(cfg.methods[k])), static_cast<std::uint64_t>(m), trial});
      const Coreset cs = draw_coreset(probs[cell], m, seed);
      const SolveResult sol = minimize(data, f, cfg.reg, &cs, cfg.solver);
      out.iterations = sol.iterations;
      out.rel = relative_loss(star.objective, sol.beta, data, f, cfg.reg);
      out.status = sol.converged ? TrialStatus::Ok : TrialStatus::Unconverged;
    } catch (const Error&) {
      out.status = TrialStatus::Failed;
      out.rel = std::numeric_limits<double>::quiet_NaN();
    }
  });

  for (std::size_t k = 0; k < n_methods; ++k) {
    MethodResult mr;
    mr.method = cfg.methods[k];
    for (std::size_t s = 0; s < n_sizes; ++s) {
      Cell c;
      c.m = cfg.sizes[s];
      std::vector<double> ok;
      for (std::size_t t = 0; t < n_trials; ++t) {
        const Outcome& o = outcomes[(k * n_sizes + s) * n_trials + t];
        c.relative_loss.push_back(o.rel);
        c.iterations.push_back(o.iterations);
        c.status.push_back(o.status);
        if (o.status != TrialStatus::Failed) ok.push_back(o.rel);
      }
      std::sort(ok.begin(), ok.end());
      c.p25 = nearest_rank(ok, 25.0);
      c.p50 = nearest_rank(ok, 50.0);
      c.p75 = nearest_rank(ok, 75.0);
      mr.cells.push_back(std::move(c));
    }
    report.methods.push_back(std::move(mr));
  }
  return report;
}

ReportFormat format_from_string(std::string_view name) {
  if (name == "csv") return ReportFormat::Csv;
  if (name == "json") return ReportFormat::Json;
  if (name == "svg" || name == "svg-plot") return ReportFormat::Svg;
  throw Error(ErrorCode::InvalidConfig, "unknown format '" + std::string(name) + "'");
}

std::string report_csv(const ExperimentReport& report) {
  std::ostringstream os;
  os << "method,m,percentile,relative_loss,failures,unconverged,trials\n";
  for (const auto& mr : report.methods) {
    for (const auto& c : mr.cells) {
      const std::pair<int, double> rows[] = {{25, c.p25}, {50, c.p50}, {75, c.p75}};
      for (const auto& [q, v] : rows)
        os << to_string(mr.method) << ',' << c.m << ',' << q << ',' << (std::isnan(v) ? "nan" : format_double(v))
           << ',' << c.failures() << ',' << c.unconverged() << ',' << c.relative_loss.size() << '\n';
    }
  }
  return os.str();
}

namespace {

std::string sanitize(std::string s) {
  for (char& ch : s)
    if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '.' && ch != '-') ch = '_';
  return s;
}

std::string svg_num(double v) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(2);
  os << v;
  return os.str();
}

const char* method_color(Method m) {
  switch (m) {
    case Method::Lewis: return "#d62728";
    case Method::L2s: return "#1f77b4";
    case Method::Uniform: return "#2ca02c";
  }
  return "#000000";
}

// log10 relative loss vs coreset size; median solid, quartiles dashed.
std::string relative_loss_svg(const ExperimentReport& report) {
  constexpr double W = 640, H = 420, L = 70, R = 20, T = 40, B = 50;
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  auto ylog = [](double v) { return std::log10(std::max(v, 1e-16)); };
  for (const auto& mr : report.methods)
    for (const auto& c : mr.cells) {
      xmin = std::min(xmin, static_cast<double>(c.m));
      xmax = std::max(xmax, static_cast<double>(c.m));
      for (double v : {c.p25, c.p50, c.p75}) {
        if (std::isnan(v)) continue;
        ymin = std::min(ymin, ylog(v));
        ymax = std::max(ymax, ylog(v));
      }
    }
  if (!std::isfinite(ymin)) ymin = -1, ymax = 0;
  ymin = std::floor(ymin);
  ymax = std::ceil(ymax);
  if (ymax <= ymin) ymax = ymin + 1;
  if (xmax <= xmin) xmax = xmin + 1;
  auto px = [&](double x) { return L + (x - xmin) / (xmax - xmin) * (W - L - R); };
  auto py = [&](double y) { return T + (ymax - y) / (ymax - ymin) * (H - T - B); };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
     << report.config.value("dataset", std::string()) << " | " << report.config.value("loss", std::string())
     << " | reg " << report.config.value("reg", std::string()) << "</text>\n";
  os << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B
     << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
  for (double y = ymin; y <= ymax + 1e-9; y += 1.0)
    os << "<text x=\"" << L - 8 << "\" y=\"" << svg_num(py(y) + 4) << "\" text-anchor=\"end\" font-size=\"11\">1e"
       << static_cast<int>(y) << "</text>\n";
  if (!report.methods.empty())
    for (const auto& c : report.methods.front().cells)
      os << "<text x=\"" << svg_num(px(static_cast<double>(c.m))) << "\" y=\"" << H - B + 16
         << "\" text-anchor=\"middle\" font-size=\"11\">" << c.m << "</text>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"" << H - 10 << "\" text-anchor=\"middle\" font-size=\"12\">coreset size m</text>\n";
  os << "<text x=\"15\" y=\"" << H / 2 << "\" transform=\"rotate(-90 15 " << H / 2
     << ")\" text-anchor=\"middle\" font-size=\"12\">log10 relative loss</text>\n";

  int legend = 0;
  for (const auto& mr : report.methods) {
    const char* color = method_color(mr.method);
    for (int q = 0; q < 3; ++q) {
      std::ostringstream pts;
      for (const auto& c : mr.cells) {
        const double v = q == 0 ? c.p25 : (q == 1 ? c.p50 : c.p75);
        if (std::isnan(v)) continue;
        pts << svg_num(px(static_cast<double>(c.m))) << ',' << svg_num(py(ylog(v))) << ' ';
      }
      os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"" << (q == 1 ? 2 : 1) << "\""
         << (q == 1 ? "" : " stroke-dasharray=\"4,3\"") << " points=\"" << pts.str() << "\"/>\n";
    }
    os << "<text x=\"" << W - R - 80 << "\" y=\"" << T + 14 * legend++ << "\" fill=\"" << color
       << "\" font-size=\"12\">" << to_string(mr.method) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::string histogram_svg(const HistogramEntry& h) {
  constexpr double W = 560, H = 360, L = 60, R = 20, T = 40, B = 50;
  const auto& counts = h.histogram.counts;
  std::size_t top = 1;
  for (auto c : counts) top = std::max(top, c);
  const double bw = (W - L - R) / static_cast<double>(std::max<std::size_t>(counts.size(), 1));
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">max(p/q, q/p): p = "
     << h.p_method << ", q = lewis</text>\n";
  for (std::size_t k = 0; k < counts.size(); ++k) {
    const double height = static_cast<double>(counts[k]) / static_cast<double>(top) * (H - T - B);
    os << "<rect x=\"" << svg_num(L + bw * static_cast<double>(k)) << "\" y=\"" << svg_num(H - B - height)
       << "\" width=\"" << svg_num(bw * 0.9) << "\" height=\"" << svg_num(height) << "\" fill=\"#555\"/>\n";
  }
  os << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B
     << "\" stroke=\"black\"/>\n";
  if (!h.histogram.edges.empty()) {
    os << "<text x=\"" << L << "\" y=\"" << H - B + 16 << "\" font-size=\"11\">1</text>\n";
    os << "<text x=\"" << W - R << "\" y=\"" << H - B + 16 << "\" text-anchor=\"end\" font-size=\"11\">"
       << svg_num(h.histogram.edges.back()) << "</text>\n";
  }
  os << "<text x=\"" << W / 2 << "\" y=\"" << H - 10
     << "\" text-anchor=\"middle\" font-size=\"12\">ratio (log-spaced bins)</text>\n";
  os << "<text x=\"" << L - 8 << "\" y=\"" << T + 4 << "\" text-anchor=\"end\" font-size=\"11\">" << top
     << "</text>\n";
  os << "</svg>\n";
  return os.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path.string() + "'");
}

}  // namespace

std::vector<std::filesystem::path> emit_report(const ExperimentReport& report, ReportFormat format,
                                               const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create '" + dir.string() + "': " + ec.message());

  std::vector<std::filesystem::path> written;
  switch (format) {
    case ReportFormat::Csv:
      written.push_back(dir / "report.csv");
      write_file(written.back(), report_csv(report));
      break;
    case ReportFormat::Json: {
      written.push_back(dir / "report.json");
      write_file(written.back(), report.to_json().dump(2) + "\n");
      json timing = json::object();
      for (const auto& [method, secs] : report.weight_seconds) timing[method] = secs;
      written.push_back(dir / "timing.json");
      write_file(written.back(), json{{"weight_seconds", timing}}.dump(2) + "\n");
      break;
    }
    case ReportFormat::Svg: {
      const std::string tag = sanitize(report.config.value("dataset", std::string("data")) + "_" +
                                       report.config.value("loss", std::string()) + "_" +
                                       report.config.value("reg", std::string()));
      written.push_back(dir / ("relative_loss_" + tag + ".svg"));
      write_file(written.back(), relative_loss_svg(report));
      for (const auto& h : report.histograms) {
        written.push_back(dir / ("hist_" + sanitize(h.p_method) + "_vs_lewis.svg"));
        write_file(written.back(), histogram_svg(h));
      }
      break;
    }
  }
  return written;
}

}  // namespace l1coreset::bench
