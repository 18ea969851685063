#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "xconvex/fn.hpp"
#include "xconvex/geometry.hpp"

namespace xconvex {

// Floating-point realization of the class inequalities.
//   eps_ineq:   slack when testing "lhs <= rhs"; violation needs gap > eps_ineq
//   eps_strict: margin demanded by strict "<"; violation when gap > -eps_strict
//   eps_val_eq: threshold for "phi(r) != phi(t)" in the semi-strict class
struct Tolerances {
  double eps_ineq = 1e-9;
  double eps_strict = 1e-9;
  double eps_val_eq = 1e-12;
};

enum class VerdictStatus { NoCounterexampleFound, Falsified, DomainEscape };
enum class WitnessKind { InequalityViolation, DomainEscape };

enum class ConvexClass {
  XConvex,
  StrictlyXConvex,
  QuasiXConvex,
  StrictlyQuasiXConvex,
  SemistrictlyQuasiXConvex,
  XConcave,
  StrictlyXConcave,
  QuasiXConcave,
  StrictlyQuasiXConcave,
  SemistrictlyQuasiXConcave,
};
inline constexpr int kClassCount = 10;
const char* class_name(ConvexClass c);
bool is_strict_class(ConvexClass c);    // interior deltas, r != t
bool is_concave_class(ConvexClass c);
bool is_quasi_class(ConvexClass c);     // right side is max (min for concave)

// A concrete triple demonstrating a violation. For inequality violations the
// payload is phi values; for domain escapes lhs and gap hold the Euclidean
// distance from combo to the domain and rhs is 0.
struct Witness {
  Point r;
  Point t;
  double delta = 0.0;
  Point combo;
  double lhs = 0.0;
  double rhs = 0.0;
  double gap = 0.0;
  WitnessKind kind = WitnessKind::InequalityViolation;
};

struct ClassVerdict {
  std::string class_name;
  VerdictStatus status = VerdictStatus::NoCounterexampleFound;
  std::optional<Witness> witness;
  std::uint64_t triples_checked = 0;
  std::uint64_t combos_escaped = 0;   // quantified triples skipped: combo left M
  std::optional<double> worst_gap;    // largest gap over evaluated triples
  std::vector<std::string> notes;
};

struct CheckOptions {
  // When set, a Falsified inequality witness is sharpened by a bounded
  // bisection on delta (at most 32 steps) around the winning grid value.
  bool refine = false;
};

// Componentwise delta*(r - t) + g(t). Computed as
// clamped-lerp(t_i -> r_i, delta) + (g_i(t) - t_i), which keeps the identity
// map bit-equal to the classical combination and never leaves [min,max] by
// rounding alone.
Point combination_point(const Point& r, const Point& t, double delta, const GMap& g);

// Closure of M under the combination operation, scanned over all ordered
// sampled pairs and the whole delta grid. A combo outside M yields Falsified
// with a domain-escape witness (maximal distance, ties broken lexicographically
// by (r, t, delta)).
ClassVerdict check_x_convex_set(const DomainSet& M, const GMap& g,
                                const SamplePlan& plan);

// Class checks. Non-strict classes quantify over all ordered pairs and the
// closed delta grid; strict classes demand r != t and interior delta; the
// semi-strict class additionally demands |phi(r) - phi(t)| > eps_val_eq.
// Combos that leave M are skipped (and counted); if every quantified triple
// escapes, the verdict is DomainEscape.
ClassVerdict check_x_convex(const ScalarFn& phi, const GMap& g, const DomainSet& M,
                            const SamplePlan& plan, const Tolerances& tol,
                            const CheckOptions& opt = {});
ClassVerdict check_strictly_x_convex(const ScalarFn& phi, const GMap& g,
                                     const DomainSet& M, const SamplePlan& plan,
                                     const Tolerances& tol,
                                     const CheckOptions& opt = {});
ClassVerdict check_quasi_x_convex(const ScalarFn& phi, const GMap& g,
                                  const DomainSet& M, const SamplePlan& plan,
                                  const Tolerances& tol,
                                  const CheckOptions& opt = {});
ClassVerdict check_strictly_quasi_x_convex(const ScalarFn& phi, const GMap& g,
                                           const DomainSet& M,
                                           const SamplePlan& plan,
                                           const Tolerances& tol,
                                           const CheckOptions& opt = {});
ClassVerdict check_semistrictly_quasi_x_convex(const ScalarFn& phi, const GMap& g,
                                               const DomainSet& M,
                                               const SamplePlan& plan,
                                               const Tolerances& tol,
                                               const CheckOptions& opt = {});

// Runs the matching convex check on -phi.
ClassVerdict check_concave_variants(const ScalarFn& phi, const GMap& g,
                                    const DomainSet& M, const SamplePlan& plan,
                                    const Tolerances& tol, ConvexClass cls,
                                    const CheckOptions& opt = {});

ClassVerdict check_class(const ScalarFn& phi, const GMap& g, const DomainSet& M,
                         const SamplePlan& plan, const Tolerances& tol,
                         ConvexClass cls, const CheckOptions& opt = {});

struct ClassifyResult {
  ClassVerdict set_check;
  std::array<ClassVerdict, kClassCount> classes;
  bool consistent = true;           // implication-chain cross-check
  std::vector<std::string> notes;
};

// All ten class checks plus the set check in one fused scan; also asserts the
// implication chain (x_convex no-counterexample forces quasi the same, strict
// forces non-strict on interior triples) and flags any breach.
ClassifyResult classify(const ScalarFn& phi, const GMap& g, const DomainSet& M,
                        const SamplePlan& plan, const Tolerances& tol,
                        const CheckOptions& opt = {});

// Re-derives combo/lhs/rhs/gap for a stored witness and checks it still
// demonstrates the claimed violation at the stored tolerances.
struct WitnessCheck {
  bool combo_matches = false;   // recomputed combo within 1 ulp per axis
  bool gap_matches = false;     // recomputed gap within 4 ulps
  bool violates = false;        // recomputed triple still violates the class
  double recomputed_gap = 0.0;
  Point recomputed_combo;
  std::string detail;
};
WitnessCheck verify_witness(const ScalarFn& phi, const GMap& g, const DomainSet& M,
                            const Tolerances& tol, ConvexClass cls,
                            const Witness& w);

// Evaluates one triple for a class: returns lhs, rhs, gap and whether the
// combo stays in M. Shared by checks, witness verification, and reports.
struct TripleEval {
  Point combo;
  bool in_domain = false;
  double lhs = 0.0;
  double rhs = 0.0;
  double gap = 0.0;
};
TripleEval eval_triple(const ScalarFn& phi, const GMap& g, const DomainSet& M,
                       ConvexClass cls, const Point& r, const Point& t,
                       double delta);

}  // namespace xconvex
