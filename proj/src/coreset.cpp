#include "l1coreset/coreset.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>

#include "json.hpp"
#include "l1coreset/error.hpp"
#include "l1coreset/format.hpp"
#include "l1coreset/linalg.hpp"
#include "l1coreset/rng.hpp"

namespace l1coreset {

Coreset draw_coreset(const WeightVector& p, Index m, std::uint64_t seed) {
  if (m < 1) throw Error(ErrorCode::InvalidConfig, "coreset size must be >= 1");
  linalg::require_finite(p.values, "sampling probabilities");
  if ((p.values.array() < 0.0).any())
    throw Error(ErrorCode::InvalidConfig, "sampling probabilities must be nonnegative");

  std::vector<double> cdf(static_cast<std::size_t>(p.size()));
  double total = 0.0;
  for (Index i = 0; i < p.size(); ++i) {
    total += p.values(i);
    cdf[static_cast<std::size_t>(i)] = total;
  }
  if (!(total > 0.0)) throw Error(ErrorCode::ZeroMass, "sampling probabilities sum to zero");
  const double md = static_cast<double>(m);
  if (std::abs(total - md) > 1e-6 * md)
    throw Error(ErrorCode::InvalidConfig, "sampling probabilities sum to " + format_double(total) +
                                              ", expected m = " + std::to_string(m));

  CounterRng rng(seed);
  Coreset c;
  c.source_kind = p.kind == WeightKind::SamplingProb ? p.source : p.kind;
  c.seed = seed;
  c.indices.reserve(static_cast<std::size_t>(m));
  c.weights.reserve(static_cast<std::size_t>(m));
  for (Index j = 0; j < m; ++j) {
    const double u = rng.uniform() * total;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    if (it == cdf.end()) --it;
    auto i = static_cast<Index>(it - cdf.begin());
    // Rounding can land on a zero-probability row sharing a cdf value.
    while (p.values(i) == 0.0 && i + 1 < p.size()) ++i;
    c.indices.push_back(i);
    c.weights.push_back(1.0 / p.values(i));
  }
  return c;
}

Coreset merge_duplicates(const Coreset& coreset) {
  std::map<Index, double> merged;
  for (std::size_t j = 0; j < coreset.size(); ++j) merged[coreset.indices[j]] += coreset.weights[j];
  Coreset out;
  out.source_kind = coreset.source_kind;
  out.seed = coreset.seed;
  for (const auto& [i, w] : merged) {
    out.indices.push_back(i);
    out.weights.push_back(w);
  }
  return out;
}

CoresetError coreset_error(const Coreset& coreset, const LabeledMatrix& data,
                           const NiceHinge& f, const std::vector<Vector>& betas) {
  if (betas.empty()) throw Error(ErrorCode::InvalidConfig, "coreset_error needs at least one beta");
  CoresetError err;
  err.normalized_additive.reserve(betas.size());
  const double n = static_cast<double>(data.rows());
  for (const Vector& beta : betas) {
    const double full = total_loss(data, beta, f);
    const double approx = weighted_loss(coreset, data, beta, f);
    const double delta = std::abs(approx - full);
    err.max_additive = std::max(err.max_additive, delta);
    const double rel = full > 0.0 ? delta / full : (delta > 0.0 ? HUGE_VAL : 0.0);
    err.max_relative = std::max(err.max_relative, rel);
    err.normalized_additive.push_back(delta / ((data.Z * beta).lpNorm<1>() + n));
  }
  return err;
}

void write_coreset_csv(std::ostream& out, const Coreset& coreset, Index n, Index d) {
  nlohmann::json header = {
      {"source_kind", std::string(to_string(coreset.source_kind))},
      {"seed", coreset.seed},
      {"m", coreset.size()},
      {"n", n},
      {"d", d},
  };
  out << "# " << header.dump() << "\n";
  out << "index,weight\n";
  for (std::size_t j = 0; j < coreset.size(); ++j)
    out << coreset.indices[j] << ',' << format_double(coreset.weights[j]) << '\n';
  if (!out) throw Error(ErrorCode::IoError, "failed writing coreset csv");
}

Coreset read_coreset_csv(std::istream& in, CoresetFileHeader* header) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line) || line.rfind("# ", 0) != 0) throw ParseError(line_no, "missing '# {json}' header");
  CoresetFileHeader h;
  try {
    const auto j = nlohmann::json::parse(line.substr(2));
    h.source_kind = weight_kind_from_string(j.at("source_kind").get<std::string>());
    h.seed = j.at("seed").get<std::uint64_t>();
    h.m = j.at("m").get<std::size_t>();
    h.n = j.at("n").get<Index>();
    h.d = j.at("d").get<Index>();
  } catch (const std::exception& e) {
    throw ParseError(line_no, std::string("bad header: ") + e.what());
  }
  ++line_no;
  if (!std::getline(in, line) || trim(line) != "index,weight") throw ParseError(line_no, "expected 'index,weight'");

  Coreset c;
  c.source_kind = h.source_kind;
  c.seed = h.seed;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view row = trim(line);
    if (row.empty()) continue;
    const auto comma = row.find(',');
    Index idx = 0;
    double w = 0.0;
    if (comma == std::string_view::npos || !parse_int(row.substr(0, comma), idx) ||
        !parse_double(row.substr(comma + 1), w))
      throw ParseError(line_no, "expected 'index,weight'");
    if (idx < 0 || idx >= h.n) throw ParseError(line_no, "index out of range");
    if (!(w > 0.0) || !std::isfinite(w)) throw ParseError(line_no, "weight must be positive");
    c.indices.push_back(idx);
    c.weights.push_back(w);
  }
  if (c.size() != h.m) throw ParseError(line_no, "header m does not match row count");
  if (header) *header = h;
  return c;
}

}  // namespace l1coreset
