#pragma once

#include "cantorpack/base_sequence.hpp"
#include "cantorpack/digit_set.hpp"
#include "cantorpack/measure.hpp"
#include "cantorpack/packing.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cantorpack {

enum class Verdict { FaithfulTrend, NonFaithfulTrend };
std::string to_string(Verdict v);

struct RatioEntry {
    std::size_t k;
    double ratio;                  // ln n_k / L(k-1)
    std::optional<Rational> exact; // when n_k and n_1...n_{k-1} are powers of a common integer
};

struct FaithfulnessReport {
    std::vector<RatioEntry> ratios;  // k = 2..K
    std::vector<double> running_sup;
    double C = 0.0;                  // tail-window max
    std::optional<Rational> C_exact;
    std::size_t window_start = 2;
    std::size_t prefix = 0;
    double tolerance = 0.05;
    Verdict verdict = Verdict::FaithfulTrend;
    double lower_bound = 0.0;        // C/(C+2): packing dimension of the counterexample set
    double family_upper_bound = 0.0; // C/(2C+2): its dimension w.r.t. cylinders
    std::optional<Rational> lower_bound_exact;
    std::optional<Rational> family_upper_bound_exact;
};

struct RatioOptions {
    double tolerance = 0.05;
    double window = 0.5;
};

FaithfulnessReport condition_ratios(const BaseSequence& base, std::size_t K, const RatioOptions& options = {});

struct Bounds {
    double lower;            // C/(C+2)
    double upper_for_family; // C/(2C+2)
};
Bounds theoretical_bounds(double C);

struct ExactBounds {
    Rational lower;
    Rational upper_for_family;
};
ExactBounds theoretical_bounds_exact(const Rational& C);

struct QVPoint {
    std::size_t s;
    std::size_t k;
    double log_Q;          // ln Q_s
    double log_V;          // ln V_s
    double threshold;      // alpha with Q_s V_s^alpha = 1
    double L_prev;         // L(k_s - 1)
    std::optional<Rational> threshold_exact;
};

struct CounterexampleOptions {
    SparsityPolicy policy;
    std::optional<std::vector<std::size_t>> indices;  // explicit k_1 < k_2 < ... (skips selection)
    std::size_t prefix = 0;  // rank prefix scanned for the subsequence (0: deepest stage)
    std::size_t stages = 3;  // number of selected indices used as stages
    RatioOptions ratios;
    double tolerance = 0.08; // slack on the theoretical bounds
    ExponentOptions exponent;
};

struct CounterexampleReport {
    FaithfulnessReport faithfulness;
    SubsequenceSelection selection;
    std::vector<std::size_t> stage_depths;
    CriticalExponent cylinder_family;
    CriticalExponent interval_family;
    std::vector<QVPoint> qv_curve;
    Bounds bounds{};
    bool cylinder_within_bound = false;
    bool interval_within_bound = false;
    bool strict_gap = false;
    std::vector<std::string> notes;
};

// Builds the subsequence, the counterexample set and its measure for a
// non-faithful base, then estimates the cylinder-family and interval-family
// critical exponents per stage. Stage s uses depth k_s and eps = |rank-(k_s - 1)
// cylinder|, the coarsest scale at which the rank-k_s lattice is resolved.
CounterexampleReport run_counterexample_experiment(const BaseSequence& base,
                                                   const CounterexampleOptions& options = {});

// ln(Q_s V_s^alpha) along the selected indices.
std::vector<QVPoint> qv_curve(const BaseSequence& base, const std::vector<std::size_t>& A);

}  // namespace cantorpack
