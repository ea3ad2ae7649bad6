#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "l1coreset/losses.hpp"
#include "l1coreset/types.hpp"

namespace l1coreset {

/// m i.i.d. draws with P(row i) = p_i / m, each weighted 1/p_i. `p` must be a
/// SamplingProb vector summing to m (within 1e-6 m).
Coreset draw_coreset(const WeightVector& p, Index m, std::uint64_t seed);

/// Merges repeated indices by adding their weights; output sorted by index.
Coreset merge_duplicates(const Coreset& coreset);

struct CoresetError {
  double max_additive = 0.0;
  double max_relative = 0.0;
  // |delta| / (||Z beta||_1 + n), one per beta.
  std::vector<double> normalized_additive;
};

/// Worst additive and relative error of the unregularized weighted loss over
/// the supplied parameter vectors.
CoresetError coreset_error(const Coreset& coreset, const LabeledMatrix& data,
                           const NiceHinge& f, const std::vector<Vector>& betas);

struct CoresetFileHeader {
  WeightKind source_kind = WeightKind::Uniform;
  std::uint64_t seed = 0;
  std::size_t m = 0;
  Index n = 0;
  Index d = 0;
};

/// First line "# {json header}", then "index,weight", then one row per draw.
void write_coreset_csv(std::ostream& out, const Coreset& coreset, Index n, Index d);
Coreset read_coreset_csv(std::istream& in, CoresetFileHeader* header = nullptr);

}  // namespace l1coreset
