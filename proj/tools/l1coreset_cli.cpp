// Command-line front end: weights, coreset, mu, bench, hardinstance.

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "l1coreset/coreset.hpp"
#include "l1coreset/data.hpp"
#include "l1coreset/error.hpp"
#include "l1coreset/experiment.hpp"
#include "l1coreset/format.hpp"
#include "l1coreset/losses.hpp"
#include "l1coreset/weights.hpp"

namespace {

using namespace l1coreset;
using nlohmann::json;

constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

template <class T>
std::vector<T> split_list(const std::string& s, T (*convert)(const std::string&)) {
  std::vector<T> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!trim(item).empty()) out.push_back(convert(std::string(trim(item))));
  return out;
}

Index to_index(const std::string& s) {
  Index v = 0;
  if (!parse_int(s, v)) throw Error(ErrorCode::InvalidConfig, "bad integer '" + s + "'");
  return v;
}

bench::Method to_method(const std::string& s) { return bench::method_from_string(s); }

// Writes to `path`, or stdout when path is empty or "-".
template <class Fn>
void with_output(const std::string& path, Fn&& fn) {
  if (path.empty() || path == "-") {
    fn(std::cout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot open '" + path + "' for writing");
  fn(out);
}

WeightVector compute_weights(bench::Method method, const LabeledMatrix& data, json& meta) {
  switch (method) {
    case bench::Method::Lewis: {
      const LewisResult r = lewis_weights(data.Z);
      meta["iterations"] = r.iterations;
      meta["residual"] = r.residual;
      return r.weights;
    }
    case bench::Method::L2s: return sqrt_leverage_distribution(data.Z);
    case bench::Method::Uniform: return uniform_distribution(data.rows());
  }
  return uniform_distribution(data.rows());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"l1 Lewis-weight coresets for linear classification"};
  app.require_subcommand(1);

  std::string dataset = "synthetic:n=10000,d=10,skew=3,seed=1";
  std::string loss = "logistic";
  std::string reg = "none";
  std::string methods = "lewis";
  std::string sizes;
  int trials = 100;
  std::uint64_t seed = 0;
  std::string out;
  std::string format = "all";
  std::string config_path;
  int threads = 0;
  bool uniform_mix = true;
  bool merge = false;
  std::size_t budget = 1000;
  std::size_t n0 = 4;
  double kappa = 0.5;
  std::string bits = "1011";
  std::size_t b = 1;

  auto* weights_cmd = app.add_subcommand("weights", "compute a weight vector and dump it as CSV");
  weights_cmd->add_option("--dataset", dataset, "synthetic:..., libsvm:PATH or csv:PATH");
  weights_cmd->add_option("--methods", methods, "lewis, l2s or uniform");
  weights_cmd->add_option("--sizes", sizes, "if given, emit sampling probabilities for this m");
  weights_cmd->add_flag("--uniform-mix,!--no-uniform-mix", uniform_mix, "use max(w_i, 1/n)");
  weights_cmd->add_option("--out", out, "output file (default stdout)");

  auto* coreset_cmd = app.add_subcommand("coreset", "draw one coreset and serialize it");
  coreset_cmd->add_option("--dataset", dataset);
  coreset_cmd->add_option("--methods", methods, "lewis, l2s or uniform");
  coreset_cmd->add_option("--sizes", sizes, "coreset size m")->required();
  coreset_cmd->add_option("--seed", seed);
  coreset_cmd->add_flag("--uniform-mix,!--no-uniform-mix", uniform_mix);
  coreset_cmd->add_flag("--merge", merge, "merge repeated indices");
  coreset_cmd->add_option("--out", out);

  auto* mu_cmd = app.add_subcommand("mu", "estimate the complexity measure mu (lower bound)");
  mu_cmd->add_option("--dataset", dataset);
  mu_cmd->add_option("--budget", budget, "random directions");
  mu_cmd->add_option("--seed", seed);

  auto* bench_cmd = app.add_subcommand("bench", "run the relative-loss experiment");
  auto* o_config = bench_cmd->add_option("--config", config_path, "JSON config; flags override it");
  auto* o_dataset = bench_cmd->add_option("--dataset", dataset);
  auto* o_loss = bench_cmd->add_option("--loss", loss, "logistic or hinge");
  auto* o_reg = bench_cmd->add_option("--reg", reg, "none, l2sq:S, l2:S, l1:S");
  auto* o_methods = bench_cmd->add_option("--methods", methods, "comma list of lewis,l2s,uniform");
  auto* o_sizes = bench_cmd->add_option("--sizes", sizes, "comma list, strictly increasing");
  auto* o_trials = bench_cmd->add_option("--trials", trials);
  auto* o_seed = bench_cmd->add_option("--seed", seed);
  auto* o_out = bench_cmd->add_option("--out", out, "output directory");
  auto* o_threads = bench_cmd->add_option("--threads", threads, "0 = hardware concurrency");
  bench_cmd->add_option("--format", format, "csv, json, svg or all");
  (void)o_config;

  auto* hard_cmd = app.add_subcommand("hardinstance", "build an INDEX hard instance and check its loss gap");
  hard_cmd->add_option("--n0", n0);
  hard_cmd->add_option("--kappa", kappa);
  hard_cmd->add_option("--a", bits, "bit string of length n0");
  hard_cmd->add_option("--b", b, "1-based query index");
  hard_cmd->add_option("--out", out, "write Z in libsvm format");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (*weights_cmd) {
      const LabeledMatrix data = bench::load_dataset(dataset);
      const auto method = bench::method_from_string(methods);
      json meta = {{"method", std::string(bench::to_string(method))}, {"n", data.rows()}, {"d", data.cols()}};
      WeightVector w = compute_weights(method, data, meta);
      if (!sizes.empty()) {
        w = sampling_probabilities(w, to_index(sizes), uniform_mix);
        meta["m"] = to_index(sizes);
        meta["uniform_mix"] = uniform_mix;
      }
      meta["kind"] = std::string(to_string(w.kind));
      with_output(out, [&](std::ostream& os) {
        os << "# " << meta.dump() << "\nindex,weight\n";
        for (Index i = 0; i < w.size(); ++i) os << i << ',' << format_double(w.values(i)) << '\n';
      });
    } else if (*coreset_cmd) {
      const LabeledMatrix data = bench::load_dataset(dataset);
      const auto method = bench::method_from_string(methods);
      json meta;
      const Index m = to_index(sizes);
      const WeightVector p = sampling_probabilities(compute_weights(method, data, meta), m, uniform_mix);
      Coreset c = draw_coreset(p, m, seed);
      if (merge) c = merge_duplicates(c);
      with_output(out, [&](std::ostream& os) { write_coreset_csv(os, c, data.rows(), data.cols()); });
    } else if (*mu_cmd) {
      const LabeledMatrix data = bench::load_dataset(dataset);
      const MuEstimate est = estimate_mu(data, budget, seed);
      json j = {{"budget", budget}, {"seed", seed}, {"witness", std::vector<double>(est.witness.begin(), est.witness.end())}};
      if (std::isinf(est.value)) j["mu_hat"] = "inf";
      else if (std::isnan(est.value)) j["mu_hat"] = nullptr;
      else j["mu_hat"] = est.value;
      std::cout << j.dump(2) << '\n';
    } else if (*bench_cmd) {
      bench::ExperimentConfig cfg;
      if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) throw Error(ErrorCode::InvalidConfig, "cannot open config '" + config_path + "'");
        json j;
        try {
          in >> j;
        } catch (const json::exception& e) {
          throw Error(ErrorCode::InvalidConfig, std::string("config is not valid JSON: ") + e.what());
        }
        cfg = bench::ExperimentConfig::from_json(j);
      }
      if (o_dataset->count()) cfg.dataset = dataset;
      if (o_loss->count()) cfg.loss = loss;
      if (o_reg->count()) cfg.reg = Regularizer::parse(reg);
      if (o_methods->count()) cfg.methods = split_list<bench::Method>(methods, &to_method);
      if (o_sizes->count()) cfg.sizes = split_list<Index>(sizes, &to_index);
      if (o_trials->count()) cfg.trials = trials;
      if (o_seed->count()) cfg.seed = seed;
      if (o_out->count()) cfg.out_dir = out;
      if (o_threads->count()) cfg.threads = threads;
      cfg.validate();

      std::vector<bench::ReportFormat> formats;
      if (format == "all") formats = {bench::ReportFormat::Csv, bench::ReportFormat::Json, bench::ReportFormat::Svg};
      else formats = {bench::format_from_string(format)};

      const bench::ExperimentReport report = bench::run_experiment(cfg);
      for (auto fmt : formats)
        for (const auto& path : bench::emit_report(report, fmt, cfg.out_dir)) std::cout << path.string() << '\n';
      std::cout << bench::report_csv(report);
    } else if (*hard_cmd) {
      std::vector<bool> a;
      for (char ch : bits) {
        if (ch != '0' && ch != '1') throw Error(ErrorCode::InvalidConfig, "--a must be a 0/1 string");
        a.push_back(ch == '1');
      }
      if (a.size() != n0) throw Error(ErrorCode::InvalidConfig, "--a must have length n0");
      const data::IndexInstance inst = data::gen_index_instance(n0, kappa, a, b);
      const double computed =
          total_loss(inst.Z, inst.beta_probe, NiceHinge::hinge(), Regularizer::l2_squared(inst.n_kappa));
      const double expected = inst.expected_objective();
      const bool ok = std::abs(computed - expected) <= 1e-9 * expected;
      json j = {{"n0", n0},           {"kappa", kappa},     {"b", b},
                {"a_b", a[b - 1] ? 1 : 0},
                {"n", inst.n},        {"d", inst.d},        {"n_kappa", inst.n_kappa},
                {"copies", inst.copies}, {"rows", inst.Z.rows()},
                {"expected_objective", expected}, {"objective", computed}, {"ok", ok}};
      std::cout << j.dump(2) << '\n';
      if (!out.empty()) with_output(out, [&](std::ostream& os) { data::write_libsvm(os, inst.Z); });
      if (!ok) return kExitRuntime;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    const bool validation = e.code() == ErrorCode::InvalidConfig || e.code() == ErrorCode::NotImplemented;
    return validation ? kExitValidation : kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
