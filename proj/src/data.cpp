#include "l1coreset/data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "l1coreset/error.hpp"
#include "l1coreset/format.hpp"
#include "l1coreset/rng.hpp"

namespace l1coreset::data {

LabeledMatrix fold_labels(const DenseMatrix& X, const std::vector<int>& y, std::string provenance) {
  if (static_cast<Index>(y.size()) != X.rows())
    throw Error(ErrorCode::LengthMismatch, "label count does not match row count");
  LabeledMatrix out{X, std::move(provenance)};
  for (Index i = 0; i < X.rows(); ++i) {
    const int label = y[static_cast<std::size_t>(i)];
    if (label != 1 && label != -1) throw Error(ErrorCode::InvalidConfig, "labels must be +1 or -1");
    if (label < 0) out.Z.row(i) *= -1.0;
  }
  if (!out.Z.allFinite()) throw Error(ErrorCode::NonFinite, "data contains NaN/Inf");
  return out;
}

namespace {

struct RawRow {
  double label;
  std::vector<std::pair<Index, double>> entries;  // 0-based column
};

// Maps two raw labels to +/-1 (larger -> +1) and folds them into the rows.
LabeledMatrix assemble(const std::vector<RawRow>& rows, const std::vector<std::size_t>& line_of,
                       Index cols, std::string provenance) {
  std::vector<double> classes;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const double l = rows[r].label;
    if (std::find(classes.begin(), classes.end(), l) != classes.end()) continue;
    if (classes.size() == 2)
      throw Error(ErrorCode::MoreThanTwoClasses,
                  "line " + std::to_string(line_of[r]) + ": third label " + format_double(l));
    classes.push_back(l);
  }
  const double positive = *std::max_element(classes.begin(), classes.end());

  DenseMatrix X = DenseMatrix::Zero(static_cast<Index>(rows.size()), cols);
  std::vector<int> y(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (const auto& [c, v] : rows[r].entries) X(static_cast<Index>(r), c) = v;
    y[r] = rows[r].label == positive ? 1 : -1;
  }
  return fold_labels(X, y, std::move(provenance));
}

}  // namespace

LabeledMatrix read_libsvm(std::istream& in, std::string provenance) {
  std::vector<RawRow> rows;
  std::vector<std::size_t> line_of;
  Index cols = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view rest = trim(line);
    if (rest.empty()) continue;
    RawRow row;
    std::istringstream tokens{std::string(rest)};
    std::string tok;
    tokens >> tok;
    if (!parse_double(tok, row.label) || !std::isfinite(row.label))
      throw ParseError(line_no, "bad label '" + tok + "'");
    Index prev = 0;
    while (tokens >> tok) {
      const auto colon = tok.find(':');
      Index idx = 0;
      double v = 0.0;
      if (colon == std::string::npos ||
          !parse_int(std::string_view(tok).substr(0, colon), idx) ||
          !parse_double(std::string_view(tok).substr(colon + 1), v))
        throw ParseError(line_no, "bad feature '" + tok + "'");
      if (idx < 1) throw ParseError(line_no, "feature index must be >= 1");
      if (idx <= prev) throw ParseError(line_no, "feature indices must increase");
      if (!std::isfinite(v)) throw ParseError(line_no, "non-finite feature value");
      prev = idx;
      cols = std::max(cols, idx);
      row.entries.emplace_back(idx - 1, v);
    }
    rows.push_back(std::move(row));
    line_of.push_back(line_no);
  }
  if (rows.empty()) throw ParseError(line_no == 0 ? 1 : line_no, "no data rows");
  if (cols == 0) throw ParseError(line_no, "no features");
  return assemble(rows, line_of, cols, std::move(provenance));
}

LabeledMatrix load_libsvm(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
  return read_libsvm(in, "libsvm:" + path);
}

namespace {

std::vector<std::string_view> split_commas(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = s.find(',', start);
    out.push_back(trim(s.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

LabeledMatrix read_csv(std::istream& in, std::string provenance) {
  std::string line;
  std::size_t line_no = 0;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) {
      width = split_commas(line).size();
      break;
    }
  }
  if (width == 0) throw ParseError(1, "missing header row");
  if (width < 2) throw ParseError(line_no, "need a label column and at least one feature");

  std::vector<RawRow> rows;
  std::vector<std::size_t> line_of;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_commas(line);
    if (fields.size() != width)
      throw ParseError(line_no, "expected " + std::to_string(width) + " fields, got " + std::to_string(fields.size()));
    RawRow row;
    if (!parse_double(fields[0], row.label) || !std::isfinite(row.label))
      throw ParseError(line_no, "bad label");
    for (std::size_t c = 1; c < width; ++c) {
      double v = 0.0;
      if (!parse_double(fields[c], v) || !std::isfinite(v))
        throw ParseError(line_no, "bad value in column " + std::to_string(c + 1));
      if (v != 0.0) row.entries.emplace_back(static_cast<Index>(c - 1), v);
    }
    rows.push_back(std::move(row));
    line_of.push_back(line_no);
  }
  if (rows.empty()) throw ParseError(line_no, "no data rows");
  return assemble(rows, line_of, static_cast<Index>(width - 1), std::move(provenance));
}

LabeledMatrix load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
  return read_csv(in, "csv:" + path);
}

void write_libsvm(std::ostream& out, const LabeledMatrix& data) {
  const Index d = data.cols();
  bool last_written = false;
  for (Index i = 0; i < data.rows(); ++i) {
    out << "+1";
    for (Index j = 0; j < d; ++j) {
      const double v = data.Z(i, j);
      // The last column is always spelled out once so the width survives.
      if (v != 0.0 || (j == d - 1 && !last_written)) {
        out << ' ' << (j + 1) << ':' << format_double(v);
        if (j == d - 1) last_written = true;
      }
    }
    out << '\n';
  }
  if (!out) throw Error(ErrorCode::IoError, "failed writing libsvm data");
}

void write_csv(std::ostream& out, const LabeledMatrix& data) {
  out << "label";
  for (Index j = 0; j < data.cols(); ++j) out << ",x" << (j + 1);
  out << '\n';
  for (Index i = 0; i < data.rows(); ++i) {
    out << '1';
    for (Index j = 0; j < data.cols(); ++j) out << ',' << format_double(data.Z(i, j));
    out << '\n';
  }
  if (!out) throw Error(ErrorCode::IoError, "failed writing csv data");
}

LabeledMatrix gen_synthetic(const SyntheticSpec& spec) {
  if (spec.d < 1 || spec.n < spec.d) throw Error(ErrorCode::InvalidConfig, "gen_synthetic needs n >= d >= 1");
  if (!(spec.skew >= 0.0)) throw Error(ErrorCode::InvalidConfig, "skew must be >= 0");
  if (!(spec.flip_rate >= 0.0 && spec.flip_rate <= 1.0))
    throw Error(ErrorCode::InvalidConfig, "flip_rate must be in [0, 1]");

  CounterRng rng(derive_seed(spec.seed, {0x5e}));
  Vector planted(spec.d);
  for (Index k = 0; k < spec.d; ++k) planted(k) = rng.normal();
  planted.normalize();

  DenseMatrix X(spec.n, spec.d);
  std::vector<int> y(static_cast<std::size_t>(spec.n));
  for (Index i = 0; i < spec.n; ++i) {
    const double scale = std::exp(spec.skew * rng.normal());
    for (Index k = 0; k < spec.d; ++k) X(i, k) = scale * rng.normal();
    int label = X.row(i).dot(planted) >= 0.0 ? 1 : -1;
    if (rng.uniform() < spec.flip_rate) label = -label;
    y[static_cast<std::size_t>(i)] = label;
  }
  std::ostringstream prov;
  prov << "synthetic:n=" << spec.n << ",d=" << spec.d << ",skew=" << format_double(spec.skew)
       << ",flip=" << format_double(spec.flip_rate) << ",seed=" << spec.seed;
  return fold_labels(X, y, prov.str());
}

LabeledMatrix gen_synthetic(Index n, Index d, double skew, std::uint64_t seed) {
  return gen_synthetic(SyntheticSpec{n, d, skew, 0.1, seed});
}

double IndexInstance::expected_objective() const {
  return static_cast<double>(copies) * (a[b - 1] ? 2.0 : 1.0);
}

IndexInstance gen_index_instance(std::size_t n0, double kappa, const std::vector<bool>& a, std::size_t b) {
  if (n0 < 1 || a.size() != n0) throw Error(ErrorCode::InvalidShape, "bit string length must equal n0 >= 1");
  if (b < 1 || b > n0) throw Error(ErrorCode::InvalidShape, "query index b must lie in [1, n0]");
  if (!(kappa > 0.0 && kappa < 1.0)) throw Error(ErrorCode::InvalidShape, "kappa must lie in (0, 1)");

  // Smallest d with 2^d > n0 (so 1..n0 have distinct d-bit codes) for which
  // log2 n = d / (1 - kappa) is an integer; n^kappa = 2^(log2 n - d) then
  // makes the copy count integral too.
  int d_min = 1;
  while ((std::uint64_t{1} << d_min) <= n0) ++d_min;
  int d = 0;
  int log2n = 0;
  for (int cand = d_min; cand <= 40; ++cand) {
    const double e = cand / (1.0 - kappa);
    const double r = std::round(e);
    if (std::abs(e - r) < 1e-9 && r <= 62.0) {
      d = cand;
      log2n = static_cast<int>(r);
      break;
    }
  }
  if (d == 0) throw Error(ErrorCode::InvalidShape, "no n with n^(1-kappa) a power of two for this kappa");

  IndexInstance inst;
  inst.a = a;
  inst.b = b;
  inst.kappa = kappa;
  inst.d = d;
  inst.n = std::uint64_t{1} << log2n;
  const std::uint64_t n_kappa = std::uint64_t{1} << (log2n - d);
  inst.n_kappa = static_cast<double>(n_kappa);
  const auto du = static_cast<std::uint64_t>(d);
  inst.copies = n_kappa * du * (du + 1) * (du + 1);
  if (inst.copies * n0 * (du + 1) > (std::uint64_t{1} << 28))
    throw Error(ErrorCode::InvalidShape, "instance too large to materialize");
  inst.gamma = 1.0 / std::sqrt(static_cast<double>(d) * d + d);

  const Index cols = d + 1;
  auto code = [d](std::size_t value, Index bit) {
    // Most significant bit first, 0 -> -1 and 1 -> +1.
    return ((value >> (d - 1 - bit)) & 1U) ? 1.0 : -1.0;
  };
  inst.base = DenseMatrix::Zero(static_cast<Index>(n0), cols);
  for (std::size_t i = 1; i <= n0; ++i) {
    const auto r = static_cast<Index>(i - 1);
    if (a[i - 1])
      for (Index k = 0; k < d; ++k) inst.base(r, k) = code(i, k);
    inst.base(r, d) = d;
  }
  inst.base *= inst.gamma;

  inst.Z.Z.resize(static_cast<Index>(inst.copies * n0), cols);
  for (std::uint64_t c = 0; c < inst.copies; ++c)
    inst.Z.Z.middleRows(static_cast<Index>(c * n0), static_cast<Index>(n0)) = inst.base;
  inst.Z.row_norms_bounded = true;
  std::ostringstream prov;
  prov << "index:n0=" << n0 << ",kappa=" << format_double(kappa) << ",b=" << b;
  inst.Z.provenance = prov.str();

  inst.beta_probe.resize(cols);
  for (Index k = 0; k < d; ++k) inst.beta_probe(k) = code(b, k);
  inst.beta_probe(d) = -1.0;
  inst.beta_probe /= inst.gamma;
  return inst;
}

}  // namespace l1coreset::data
