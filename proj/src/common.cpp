#include <cmath>
#include <numbers>

#include "l1coreset/error.hpp"
#include "l1coreset/rng.hpp"
#include "l1coreset/types.hpp"

namespace l1coreset {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::DimMismatch: return "DimMismatch";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::ZeroMass: return "ZeroMass";
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::MoreThanTwoClasses: return "MoreThanTwoClasses";
    case ErrorCode::InvalidShape: return "InvalidShape";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::NotImplemented: return "NotImplemented";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

std::string_view to_string(WeightKind kind) {
  switch (kind) {
    case WeightKind::LewisWeights: return "lewis";
    case WeightKind::SqrtLeverage: return "l2s";
    case WeightKind::Uniform: return "uniform";
    case WeightKind::SamplingProb: return "sampling_prob";
  }
  return "unknown";
}

WeightKind weight_kind_from_string(std::string_view name) {
  if (name == "lewis") return WeightKind::LewisWeights;
  if (name == "l2s") return WeightKind::SqrtLeverage;
  if (name == "uniform") return WeightKind::Uniform;
  if (name == "sampling_prob") return WeightKind::SamplingProb;
  throw Error(ErrorCode::InvalidConfig, "unknown weight kind '" + std::string(name) + "'");
}

double CounterRng::normal() {
  const double u1 = uniform_open();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = CounterRng::mix(base ^ 0x6a09e667f3bcc909ULL);
  for (auto p : parts) h = CounterRng::mix(h ^ (p + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)));
  return h;
}

std::uint64_t hash_name(std::string_view name) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : name) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace l1coreset
