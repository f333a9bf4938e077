#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sscx/boundary.hpp"
#include "sscx/complex.hpp"

namespace sscx {

/// Group-dependent constants shared by every report.
struct Calibration {
  int hsigma = 0;
  int hsigma_min_rule = 0;
  bool hsigma_estimated = true;
  bool hsigma_stabilized = false;
  int hsigma_levels = 0;
  int magic = 0;  // m(HΣ)
  double delta = 0.0;
  double epsilon = 0.1;
  bool epsilon_default = true;
};

/// Estimates HΣ (exhaustively over every level within the matrix budget),
/// δ (four-point scan), m(HΣ) and the default ε unless overridden.
Calibration calibrate(Complex& complex, std::optional<int> hsigma = std::nullopt,
                      std::optional<double> epsilon = std::nullopt, std::uint64_t seed = 1);

VisualParams visual_params(const Calibration& cal, int depth = 24);

/// Distances in the complex truncated at `max_level` from the vertices
/// satisfying `source`. Indexed by offset(level) + word_index; -1 if unreachable.
struct TruncatedDistances {
  int alphabet = 2;
  int max_level = 0;
  std::vector<int> dist;
  int at(const Word& w) const;
};
TruncatedDistances truncated_distances(Complex& complex, int max_level, const std::function<bool(const Word&)>& source);

struct CheckResult {
  std::string module;
  std::string name;
  bool pass = true;
  std::string detail;
};

struct VerifyOptions {
  std::uint64_t seed = 7;
  int distance_level = 5;  // all-pairs oracle comparison up to this level
  int product_level = 5;   // products-comparable check up to this level
  int triangle_samples = 10000;
  int ultrametric_triples = 1000;
};

struct VerifyReport {
  Calibration calibration;
  std::vector<CheckResult> checks;
  bool all_pass() const;
};

/// Runs the invariant suite of every module on one group.
VerifyReport run_verify(Complex& complex, const Calibration& cal, const VerifyOptions& options = {});

}  // namespace sscx
