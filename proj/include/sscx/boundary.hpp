#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sscx/complex.hpp"

namespace sscx {

/// Eventually periodic vertical ray: the letter sequence x_1 x_2 ... is
/// `preperiod` followed by `period` forever, and R(t) = x_t ... x_1.
struct Ray {
  Word preperiod;
  Word period;

  /// "pre;per" over digit letters, e.g. "1;0" or ";01".
  static Ray parse(std::string_view text, int alphabet);
  std::string str() const;

  /// x_t for t >= 1.
  Letter letter(std::size_t t) const;
  Word vertex(std::size_t t) const;
  /// Index into preperiod+period of x_{t+1}; determines the future.
  std::size_t phase(std::size_t t) const;
  /// The ray (y, x_1, x_2, ...).
  Ray prepend(Letter y) const;
  /// The ray (x_2, x_3, ...), image under the boundary map.
  Ray shifted() const;
};

enum class Verdict { Inequivalent, Equivalent, Unknown };

struct EquivalenceVerdict {
  Verdict kind = Verdict::Unknown;
  int level = 0;  // Inequivalent: first t with |R1(t)-R2(t)| > 1; Equivalent: t where a state repeated
};

const char* to_string(Verdict v);

/// Exact decision by the (phase1, phase2, H_t) state machine, H_t ⊆ S ∪ {e}.
EquivalenceVerdict rays_equivalent(const Complex& complex, const Ray& r1, const Ray& r2, int max_depth = 100000);

/// max{t : |R1(t)-R2(t)| <= 1}; nullopt when the rays are equivalent.
/// Throws UndecidedEquivalence when max_depth is exhausted.
std::optional<int> divergence_product(const Complex& complex, const Ray& r1, const Ray& r2, int max_depth = 100000);

struct VisualParams {
  double epsilon = 0.1;
  int depth = 24;
  double delta = 0.0;
  int magic = 0;  // m(HΣ)
  double C0() const { return 100.0 * (delta + magic); }
  /// Quasi-ultrametric constant exp(ε(δ + C0)).
  double K() const;
  /// min(0.1, 1/(4(1 + m(HΣ)))).
  static double default_epsilon(int magic);
};

/// exp(-ε·level_product(R1(T), R2(T))) with T = depth, or 0 for equivalent rays.
double visual_distance(Complex& complex, const Ray& r1, const Ray& r2, const VisualParams& params);

struct LocalDegree {
  int first_n = 0;
  std::vector<int> under;  // Σ(·)_n approximated by B_hor(R(n), 1)
  std::vector<int> exact;  // unit neighborhood of the vertices of all equivalent rays
  std::vector<int> over;   // B_hor(R(n), 2)
  bool stabilized = false; // exact constant over the last 3 values of n
  bool sandwich_agrees = false;  // under == over over the last 3 values of n
  int value = 0;
};

/// δ_n for the boundary point of R: the largest number of F-preimages of a
/// vertex of Σ(F(ξ))_n lying in Σ(ξ)_{n+1}.
LocalDegree local_degree(Complex& complex, const Ray& ray, int first_n, int last_n);

/// Vertices R'(n) over all rays R' equivalent to R (sorted indices).
std::vector<VertexIndex> equivalent_vertices(const Complex& complex, const Ray& ray, int n);

struct PreimageClass {
  std::vector<Letter> letters;  // y of the candidate rays (y, x_1, x_2, ...)
  LocalDegree degree;
};

struct PreimageReport {
  Ray ray;
  std::vector<PreimageClass> classes;
  int degree_sum = 0;
  bool relation_consistent = true;  // verdicts transitive on the candidates
};

/// Partitions the d candidate preimage rays into equivalence classes with local degrees.
/// Throws UndecidedEquivalence or NotStabilized.
PreimageReport boundary_preimage_classes(Complex& complex, const Ray& ray, int first_n, int last_n,
                                         int max_depth = 100000);

struct DiameterRow {
  int t = 0;
  std::size_t samples = 0;
  double shadow_diameter = 0.0;
  double umbra_diameter = 0.0;
  double ratio = 0.0;  // shadow_diameter * exp(εt)
  bool inclusion = true;  // S(R, t+c) ⊆ U(R, t) at the checked depths
};

struct DiameterReport {
  Ray ray;
  VisualParams params;
  int c = 0;
  std::vector<DiameterRow> rows;
  double band_min = 0.0, band_max = 0.0;
  double band_ratio() const { return band_min > 0 ? band_max / band_min : 0.0; }
};

/// Boundary points sampled in ∂S(R,t) as periodic extensions of shadow vertices.
std::vector<Ray> shadow_boundary_sample(const Complex& complex, const Ray& ray, int t, int extra_depth,
                                        std::size_t count, std::uint64_t seed);

DiameterReport diameter_report(Complex& complex, const Ray& ray, int t_first, int t_last, const VisualParams& params,
                               std::size_t samples = 12, int inclusion_depth = 2, std::uint64_t seed = 1);

/// Round(A, a) = L/ℓ: L = max distance from a to A, ℓ = min distance from a to
/// points outside A (clamped to L, or L when no outside point is given).
/// Throws ZeroInradius when ℓ = 0.
double roundness(const std::vector<double>& inside, const std::vector<double>& outside);

}  // namespace sscx
