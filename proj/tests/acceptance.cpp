// Acceptance checks. Prints one PASS/FAIL/SKIP line per criterion and exits
// nonzero if any criterion fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "l1coreset/coreset.hpp"
#include "l1coreset/data.hpp"
#include "l1coreset/experiment.hpp"
#include "l1coreset/format.hpp"
#include "l1coreset/linalg.hpp"
#include "l1coreset/losses.hpp"
#include "l1coreset/weights.hpp"
#include "test_util.hpp"

using namespace l1coreset;
using l1coreset::testing::gaussian;
using l1coreset::testing::gaussian_vector;

namespace {

enum class Verdict { Pass, Fail, Skip };

struct Outcome {
  Verdict verdict;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string num(double v) { return format_double(v); }

Outcome verdict(bool ok, std::string detail) { return {ok ? Verdict::Pass : Verdict::Fail, std::move(detail)}; }

double percentile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  return bench::nearest_rank(v, q);
}

Outcome lewis_fixed_point() {
  const auto t0 = Clock::now();
  double worst_residual = 0.0, worst_sum = 0.0;
  for (std::uint64_t s = 0; s < 50; ++s) {
    const LewisResult r = lewis_weights(gaussian(2000, 20, 10000 + s));
    worst_residual = std::max(worst_residual, r.residual);
    worst_sum = std::max(worst_sum, std::abs(r.weights.values.sum() - 20.0));
  }
  const double secs = seconds_since(t0);
  return verdict(worst_residual < 1e-5 && worst_sum <= 0.002 && secs < 30.0,
                 "max residual " + num(worst_residual) + ", max |sum - 20| " + num(worst_sum) + ", " + num(secs) + " s");
}

Outcome structured_exactness() {
  double worst = 0.0;
  for (Index d = 1; d <= 12; ++d) {
    const DenseMatrix I = DenseMatrix::Identity(d, d);
    worst = std::max(worst, (lewis_weights(I).weights.values.array() - 1.0).abs().maxCoeff());
    DenseMatrix S(2 * d, d);
    S << I, I;
    worst = std::max(worst, (lewis_weights(S).weights.values.array() - 0.5).abs().maxCoeff());
  }
  for (std::uint64_t s = 0; s < 20; ++s) {
    const Index r = 1 + static_cast<Index>(s % 6);
    const DenseMatrix A = gaussian(80, r, 500 + s) * gaussian(r, 8, 600 + s);
    worst = std::max(worst, std::abs(linalg::leverage_scores(A).sum() - static_cast<double>(r)));
    const DenseMatrix B = gaussian(60, 7, 700 + s);
    worst = std::max(worst, std::abs(linalg::leverage_scores(B).sum() - 7.0));
  }
  return verdict(worst <= 1e-9, "max deviation " + num(worst));
}

Outcome index_loss_gap() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  std::size_t instances = 0;
  for (std::size_t n0 : {4u, 8u})
    for (double kappa : {0.25, 0.5})
      for (std::uint32_t bits = 0; bits < (1u << n0); ++bits) {
        std::vector<bool> a(n0);
        for (std::size_t i = 0; i < n0; ++i) a[i] = (bits >> i) & 1u;
        for (std::size_t b = 1; b <= n0; ++b) {
          const data::IndexInstance inst = data::gen_index_instance(n0, kappa, a, b);
          const double dd = inst.d;
          const double base = inst.n_kappa * dd * (dd + 1) * (dd + 1);
          const double expected = a[b - 1] ? 2.0 * base : base;
          const double got = total_loss(inst.Z, inst.beta_probe, NiceHinge::hinge(),
                                        Regularizer::l2_squared(inst.n_kappa));
          worst = std::max(worst, std::abs(got - expected) / expected);
          ++instances;
        }
      }
  const double secs = seconds_since(t0);
  return verdict(worst <= 1e-9 && secs < 10.0,
                 std::to_string(instances) + " instances, max relative error " + num(worst) + ", " + num(secs) + " s");
}

Outcome relu_additive() {
  const auto t0 = Clock::now();
  const LabeledMatrix Z = data::gen_synthetic(10000, 10, 3.0, 1);
  const WeightVector lw = lewis_weights(Z.Z).weights;
  DenseMatrix B(10, 200);
  for (Index k = 0; k < 200; ++k) B.col(k) = gaussian_vector(10, 90000 + static_cast<std::uint64_t>(k)).normalized();
  const Eigen::MatrixXd M = Z.Z * B;  // n x 200 margins
  Eigen::VectorXd full(200), mass(200);
  for (Index k = 0; k < 200; ++k) {
    full(k) = M.col(k).cwiseMax(0.0).sum();
    mass(k) = M.col(k).lpNorm<1>();
  }
  auto p95 = [&](Index m) {
    const WeightVector p = sampling_probabilities(lw, m, false);
    std::vector<double> errs;
    for (std::uint64_t s = 0; s < 50; ++s) {
      const Coreset c = draw_coreset(p, m, derive_seed(77, {static_cast<std::uint64_t>(m), s}));
      Eigen::RowVectorXd est = Eigen::RowVectorXd::Zero(200);
      for (std::size_t j = 0; j < c.size(); ++j) est += c.weights[j] * M.row(c.indices[j]).cwiseMax(0.0);
      for (Index k = 0; k < 200; ++k) errs.push_back(std::abs(est(k) - full(k)) / mass(k));
    }
    return percentile(errs, 95.0);
  };
  const double e1000 = p95(1000), e4000 = p95(4000);
  const double secs = seconds_since(t0);
  return verdict(e4000 < 0.1 && e1000 >= 1.5 * e4000 && secs < 300.0,
                 "p95 at m=1000 " + num(e1000) + ", at m=4000 " + num(e4000) + ", ratio " + num(e1000 / e4000) + ", " +
                     num(secs) + " s");
}

Outcome method_ordering() {
  const auto t0 = Clock::now();
  std::ostringstream detail;
  bool ok = true;
  for (const char* loss : {"logistic", "hinge"}) {
    bench::ExperimentConfig cfg;
    cfg.dataset = "synthetic:n=10000,d=10,skew=3,seed=1";
    cfg.loss = loss;
    cfg.methods = {bench::Method::Lewis, bench::Method::Uniform};
    cfg.trials = 100;
    cfg.seed = 2024;
    const bench::ExperimentReport r = bench::run_experiment(cfg);
    ok = ok && r.mu_hat >= 10.0;
    detail << loss << ": mu_hat " << num(r.mu_hat) << ";";
    for (std::size_t s = 0; s < cfg.sizes.size(); ++s) {
      const double l = r.methods[0].cells[s].p50, u = r.methods[1].cells[s].p50;
      ok = ok && l < u;
      detail << " m=" << cfg.sizes[s] << " " << num(l) << "<" << num(u);
    }
    detail << "; ";
  }
  bench::ExperimentConfig reg;
  reg.dataset = "synthetic:n=10000,d=10,skew=0,seed=1";
  reg.loss = "logistic";
  reg.reg = Regularizer::l2_squared(0.5);
  reg.methods = {bench::Method::Lewis, bench::Method::Uniform};
  reg.sizes = {500};
  reg.trials = 100;
  reg.seed = 2024;
  const bench::ExperimentReport r = bench::run_experiment(reg);
  const double l = r.methods[0].cells[0].p50, u = r.methods[1].cells[0].p50;
  ok = ok && u <= 2.0 * l;
  const double secs = seconds_since(t0);
  ok = ok && secs < 1200.0;
  detail << "skew 0 l2sq:0.5 m=500 uniform " << num(u) << " vs lewis " << num(l) << "; " << num(secs) << " s";
  return verdict(ok, detail.str());
}

Outcome unbiasedness() {
  const LabeledMatrix Z = data::gen_synthetic(500, 5, 1.0, 3);
  const WeightVector p = sampling_probabilities(lewis_weights(Z.Z).weights, 50, true);
  const Vector b = gaussian_vector(5, 4);
  const NiceHinge f = NiceHinge::logistic();
  const double truth = total_loss(Z, b, f);
  const int seeds = 1000;
  std::vector<double> v;
  for (int s = 0; s < seeds; ++s) v.push_back(weighted_loss(draw_coreset(p, 50, static_cast<std::uint64_t>(s)), Z, b, f));
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= seeds;
  double var = 0.0;
  for (double x : v) var += (x - mean) * (x - mean);
  const double se = std::sqrt(var / (seeds - 1) / seeds);
  const double z = std::abs(mean - truth) / se;
  return verdict(z <= 4.0, "mean " + num(mean) + " vs " + num(truth) + ", " + num(z) + " standard errors");
}

double grid_mu(const DenseMatrix& Z) {
  double best = 0.0;
  const int points = 100000;
  for (int k = 0; k < points; ++k) {
    const double t = 2.0 * std::numbers::pi * k / points;
    const Vector z = Z * (Vector(2) << std::cos(t), std::sin(t)).finished();
    double pos = 0.0, neg = 0.0;
    for (Index i = 0; i < z.size(); ++i) (z(i) > 0 ? pos : neg) += std::abs(z(i));
    if (neg <= 1e-12 * pos && pos > 0.0) return std::numeric_limits<double>::infinity();
    best = std::max(best, pos / neg);
  }
  return best;
}

Outcome mu_oracle() {
  double worst = 0.0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    const LabeledMatrix Z = data::gen_synthetic(data::SyntheticSpec{50, 2, 1.0, 0.2, 300 + s});
    const double est = estimate_mu(Z, 10000, s).value;
    const double grid = grid_mu(Z.Z);
    if (std::isinf(grid) && std::isinf(est)) continue;
    worst = std::max(worst, std::abs(est - grid) / grid);
  }
  const double one = estimate_mu(LabeledMatrix{(DenseMatrix(2, 1) << 1, -1).finished(), "a"}, 100, 1).value;
  const double two = estimate_mu(LabeledMatrix{(DenseMatrix(2, 1) << 2, -1).finished(), "b"}, 100, 1).value;
  return verdict(worst <= 0.02 && one == 1.0 && two == 2.0,
                 "max relative gap " + num(worst) + ", d=1 cases " + num(one) + " and " + num(two));
}

Outcome gradient_check() {
  const LabeledMatrix Z = data::gen_synthetic(200, 6, 1.0, 5);
  const NiceHinge f = NiceHinge::logistic();
  double worst = 0.0;
  for (const Regularizer& reg :
       {Regularizer::none(), Regularizer::l2_squared(0.5), Regularizer::l2(1.0), Regularizer::l1(1.0)})
    for (std::uint64_t s = 0; s < 100; ++s) {
      const Vector b = gaussian_vector(6, 40000 + s);
      const Vector g = loss_gradient(Z, b, f, reg);
      for (Index k = 0; k < 6; ++k) {
        const double h = 1e-6 * (1.0 + std::abs(b(k)));
        Vector bp = b, bm = b;
        bp(k) += h;
        bm(k) -= h;
        const double fd = (total_loss(Z, bp, f, reg) - total_loss(Z, bm, f, reg)) / (2.0 * h);
        worst = std::max(worst, std::abs(fd - g(k)) / std::max(1.0, std::abs(fd)));
      }
    }
  return verdict(worst <= 1e-4, "max relative error " + num(worst));
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Outcome determinism() {
  const auto root = std::filesystem::temp_directory_path() / "l1coreset_acceptance_determinism";
  std::filesystem::remove_all(root);
  std::vector<std::filesystem::path> dirs = {root / "a", root / "b"};
  for (const auto& dir : dirs) {
    const std::string cmd = std::string("\"") + L1CORESET_CLI +
                            "\" bench --dataset synthetic:n=2000,d=6,skew=2,seed=9 --loss hinge --methods "
                            "lewis,l2s,uniform --sizes 100,200 --trials 5 --seed 3 --threads 2 --format all --out \"" +
                            dir.string() + "\" > /dev/null";
    if (std::system(cmd.c_str()) != 0) return {Verdict::Fail, "bench command failed"};
  }
  bool ok = true;
  for (const char* name : {"report.csv", "report.json"}) {
    const std::string a = slurp(dirs[0] / name), b = slurp(dirs[1] / name);
    ok = ok && !a.empty() && a == b;
  }
  std::filesystem::remove_all(root);
  return verdict(ok, ok ? "report.csv and report.json byte-identical" : "outputs differ");
}

Outcome real_datasets() {
  const char* dir = std::getenv("L1CORESET_DATA_DIR");
  if (!dir) return {Verdict::Skip, "set L1CORESET_DATA_DIR to a directory holding the real datasets"};
  const std::filesystem::path root(dir);
  const std::vector<std::string> names = {"webspam.libsvm", "covtype.libsvm", "kddcup99.libsvm"};
  std::vector<std::string> present;
  for (const auto& n : names)
    if (std::filesystem::exists(root / n)) present.push_back(n);
  if (std::find(present.begin(), present.end(), "kddcup99.libsvm") == present.end())
    return {Verdict::Skip, "kddcup99.libsvm not found in " + root.string()};
  bool ok = true;
  std::ostringstream detail;
  for (const auto& n : present)
    for (const char* loss : {"logistic", "hinge"}) {
      bench::ExperimentConfig cfg;
      cfg.dataset = "libsvm:" + (root / n).string();
      cfg.loss = loss;
      const bench::ExperimentReport r = bench::run_experiment(cfg);
      if (n != "kddcup99.libsvm") continue;
      for (std::size_t s = 0; s < cfg.sizes.size(); ++s) {
        const double l = r.methods[0].cells[s].p50;
        const bool best = l <= r.methods[1].cells[s].p50 && l <= r.methods[2].cells[s].p50;
        ok = ok && best;
      }
      detail << loss << (ok ? " lewis best; " : " lewis not best; ");
    }
  return verdict(ok, detail.str() + std::to_string(present.size()) + " datasets run");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"lewis_fixed_point", lewis_fixed_point},
      {"structured_exactness", structured_exactness},
      {"index_loss_gap", index_loss_gap},
      {"relu_additive_error", relu_additive},
      {"method_ordering", method_ordering},
      {"unbiasedness", unbiasedness},
      {"mu_oracle", mu_oracle},
      {"gradient_check", gradient_check},
      {"cli_determinism", determinism},
      {"real_datasets", real_datasets},
  };
  int failures = 0;
  int index = 0;
  for (const auto& [name, run] : criteria) {
    ++index;
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {Verdict::Fail, std::string("exception: ") + e.what()};
    }
    const char* tag = o.verdict == Verdict::Pass ? "PASS" : (o.verdict == Verdict::Fail ? "FAIL" : "SKIP");
    if (o.verdict == Verdict::Fail) ++failures;
    std::printf("%s %d %s: %s\n", tag, index, name.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
