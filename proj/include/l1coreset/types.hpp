#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace l1coreset {

using DenseMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Data matrix with every row already multiplied by its +/-1 label, so that a
/// classification loss reads sum_i f((Z beta)_i).
struct LabeledMatrix {
  DenseMatrix Z;
  std::string provenance;
  // Set when every original row satisfies ||x_i||_2 <= 1.
  bool row_norms_bounded = false;

  Index rows() const { return Z.rows(); }
  Index cols() const { return Z.cols(); }
};

enum class WeightKind { LewisWeights, SqrtLeverage, Uniform, SamplingProb };

std::string_view to_string(WeightKind kind);
WeightKind weight_kind_from_string(std::string_view name);

/// Per-row nonnegative scores. For SamplingProb the values sum to the target
/// sample count m; `source` remembers which score vector they came from.
struct WeightVector {
  Vector values;
  WeightKind kind = WeightKind::Uniform;
  WeightKind source = WeightKind::Uniform;
  double declared_sum = 0.0;
  bool uniform_mix = false;
  // Recorded only: at a fixed m the oversampling factor cancels.
  double mu_oversample = 1.0;

  Index size() const { return values.size(); }
};

/// Row indices drawn with replacement together with their 1/p_i weights.
struct Coreset {
  std::vector<Index> indices;
  std::vector<double> weights;
  WeightKind source_kind = WeightKind::Uniform;
  std::uint64_t seed = 0;

  std::size_t size() const { return indices.size(); }
};

}  // namespace l1coreset
