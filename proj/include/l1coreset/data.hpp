#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "l1coreset/types.hpp"

namespace l1coreset::data {

/// Multiplies row i of X by y_i (each +/-1).
LabeledMatrix fold_labels(const DenseMatrix& X, const std::vector<int>& y,
                          std::string provenance = {});

/// libsvm text: "label idx:val idx:val ...", 1-based feature indices. The
/// larger of the two raw labels maps to +1.
LabeledMatrix read_libsvm(std::istream& in, std::string provenance = "libsvm");
LabeledMatrix load_libsvm(const std::string& path);

/// CSV with a header row; first column is the label.
LabeledMatrix read_csv(std::istream& in, std::string provenance = "csv");
LabeledMatrix load_csv(const std::string& path);

/// Writes Z back out with every label +1 (labels are already folded in), so
/// reading the output reproduces Z exactly.
void write_libsvm(std::ostream& out, const LabeledMatrix& data);
void write_csv(std::ostream& out, const LabeledMatrix& data);

struct SyntheticSpec {
  Index n = 10000;
  Index d = 10;
  double skew = 0.0;
  double flip_rate = 0.1;
  std::uint64_t seed = 0;
};

/// Gaussian rows scaled by exp(skew * N(0,1)), labelled by a planted
/// direction with a `flip_rate` fraction of labels flipped at random.
LabeledMatrix gen_synthetic(const SyntheticSpec& spec);
LabeledMatrix gen_synthetic(Index n, Index d, double skew, std::uint64_t seed);

/// Hard instance built from an INDEX problem (bit string a, query b).
struct IndexInstance {
  std::vector<bool> a;
  std::size_t b = 1;  // 1-based
  double kappa = 0.5;
  std::uint64_t n = 0;  // nominal n, with n^(1-kappa) = 2^d
  int d = 0;
  double n_kappa = 0.0;      // n^kappa, the regularizer scale
  std::uint64_t copies = 0;  // n^kappa * d * (d+1)^2
  double gamma = 0.0;        // 1 / sqrt(d^2 + d)
  DenseMatrix base;          // X0, n0 x (d+1)
  LabeledMatrix Z;           // `copies` stacked copies of X0
  Vector beta_probe;         // (+/-1 bits of b, -1) / gamma

  std::size_t n0() const { return a.size(); }
  /// copies * (1 + a(b)): the regularized hinge objective at beta_probe.
  double expected_objective() const;
};

IndexInstance gen_index_instance(std::size_t n0, double kappa, const std::vector<bool>& a,
                                 std::size_t b);

}  // namespace l1coreset::data
