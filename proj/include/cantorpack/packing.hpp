#pragma once

#include "cantorpack/base_sequence.hpp"
#include "cantorpack/cylinder.hpp"
#include "cantorpack/digit_set.hpp"
#include "cantorpack/measure.hpp"
#include "cantorpack/numeric.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace cantorpack {

enum class Family { CylindersOnly, AllIntervals };

// How AllIntervals queries are solved.
//  Grid:  exact weighted-interval scheduling over intervals with endpoints on
//         the rank-R cylinder grid (needs n_1...n_R <= grid_budget).
//  Cells: for each rank k, every set-meeting rank-k cylinder is stretched to
//         the gap before the next one (capped at eps); best rank wins,
//         combined with the cylinder optimum. Scales to huge bases.
//  Auto:  Grid when the grid fits the budget, else Cells.
enum class IntervalBackend { Auto, Grid, Cells };

std::string to_string(Family f);
std::string to_string(IntervalBackend b);

// Packing weight: interval length (diameter) or the mass of a measure.
class Weight {
public:
    static Weight length() { return Weight{}; }
    static Weight of(DigitProductMeasure mu) { return Weight{std::move(mu)}; }

    // Lebesgue-measure weights count as length weights.
    bool is_length() const { return !measure_ || measure_->is_lebesgue(); }
    const std::optional<DigitProductMeasure>& measure() const { return measure_; }
    std::string describe() const { return is_length() ? "length" : measure_->describe(); }

private:
    Weight() = default;
    explicit Weight(DigitProductMeasure mu) : measure_(std::move(mu)) {}
    std::optional<DigitProductMeasure> measure_;
};

// Diameter cap eps, either an exact rational or tied to a rank
// (eps = |rank-r cylinder| = 1/(n_1...n_r)).
class Scale {
public:
    static Scale of_rank(const BaseSequence& base, std::size_t r);
    static Scale exact(Rational eps);

    const std::optional<std::size_t>& rank() const { return rank_; }
    // Exact value; throws ResolutionExceeded if tied to a rank beyond the budget.
    Rational value() const;
    double log() const { return log_; }

    // True iff |rank-k cylinder| <= eps.
    bool admits_rank(const BaseSequence& base, std::size_t k) const;
    // min(len, eps) for an exact length.
    Rational cap(const Rational& len) const;
    std::string describe() const;

private:
    std::optional<std::size_t> rank_;
    std::optional<Rational> value_ = Rational(1);
    double log_ = 0.0;
};

struct PackingQuery {
    DigitRestrictedSet set;
    Family family = Family::CylindersOnly;
    Scale eps;
    double alpha = 1.0;
    Weight weight = Weight::length();
    std::size_t depth = 1;       // deepest cylinder rank considered
    std::size_t resolution = 0;  // grid rank for AllIntervals (0: use depth)
    IntervalBackend backend = IntervalBackend::Auto;
    std::size_t grid_budget = 1024;
    std::size_t witness_limit = 4096;
};

struct WitnessElement {
    Rational left;
    Rational right;
    double log_weight;  // ln of the unpowered weight (length or mass)
    std::optional<DigitWord> word;  // set for cylinder elements
};

struct PackingValue {
    LogValue value;  // sum of weight^alpha; zero for the empty packing
    std::vector<WitnessElement> witness;
    bool witness_complete = true;
    // Cylinder optimum: all set-meeting cylinders of this rank (when nonempty).
    std::optional<std::size_t> witness_rank;
    double witness_log_count = 0.0;
    std::size_t depth = 0;
    bool lower_bound = true;
    std::string method;
};

// Exact optimum over packings by set-meeting cylinders of rank <= depth
// and length <= eps, computed by dynamic programming on the cylinder tree.
// Rules depend only on the rank, so every node of a rank takes the same
// decision and the tree is evaluated one rank at a time.
PackingValue optimal_cylinder_packing(const PackingQuery& q);

// Optimum over open intervals meeting the set (see IntervalBackend).
PackingValue optimal_interval_packing(const PackingQuery& q);

// Dispatches on q.family.
PackingValue optimal_packing(const PackingQuery& q);

// Minimum of sum |C_j|^alpha over covers of the set by cylinders of length
// <= eps and rank <= depth. Throws PreconditionError when rank-depth
// cylinders are longer than eps.
LogValue covering_value(const DigitRestrictedSet& set, const Scale& eps, double alpha, std::size_t depth);

// Weighted interval scheduling over arbitrary integer-endpoint intervals:
// maximize the log-domain sum of weights over pairwise disjoint (shared
// endpoints allowed) intervals. Returns the chosen indices in left-to-right
// order together with the optimum.
struct ScheduleCandidate {
    long long left;
    long long right;
    LogValue weight;
};
std::pair<LogValue, std::vector<std::size_t>> schedule_intervals(const std::vector<ScheduleCandidate>& candidates);

// ---------------------------------------------------------------------------
// Centering of uncentered packings.

struct CenteringParams {
    double t = 0.4;
    double s = 0.5;
    int space_constant = 8;  // disjoint open intervals of diameter |I|/8 inside an interval I
};

struct CenteringResult {
    std::vector<IntervalBall> balls;  // pairwise disjoint, centers in the set
    std::vector<DigitWord> center_words;
    std::size_t k0 = 0;
    std::size_t class_size = 0;   // number of input balls in the chosen class
    Rational radius;              // 2^{-k0-1}
    double log_t_volume = 0.0;    // ln sum |ball|^t
    double bound = 0.0;           // (1 - 2^{t-s}) / C
};

// Turns an uncentered packing (pairwise disjoint open intervals, each
// meeting the set) with s-volume > 1 into a centered packing of equal-radius
// balls whose t-volume is at least (1 - 2^{t-s}) / C. Centers are points of
// the set resolved to rank `point_depth`.
CenteringResult center_packing(const std::vector<IntervalBall>& packing, const DigitRestrictedSet& set,
                               const CenteringParams& params, std::size_t point_depth = 24);

// A set-meeting cylinder strictly inside the open ball, if one exists up to max_rank.
std::optional<Cylinder> find_set_cylinder_inside(const IntervalBall& ball, const DigitRestrictedSet& set,
                                                 std::size_t max_rank = 48);

// ---------------------------------------------------------------------------
// Critical exponents.

struct Stage {
    std::size_t depth;
    Scale eps;
    std::size_t resolution = 0;
};

// Stages K in `depths` with eps = |rank-(K - eps_offset) cylinder|.
std::vector<Stage> rank_tied_stages(const BaseSequence& base, const std::vector<std::size_t>& depths,
                                    std::size_t eps_offset = 0);

struct ThresholdRow {
    std::size_t depth;
    double log_eps;
    double threshold;  // alpha where the log value crosses 0
    bool degenerate;   // value < 1 already at alpha = 0
    int iterations;
};

struct CriticalExponent {
    std::vector<ThresholdRow> rows;
    double last = 0.0;
    double trend = 0.0;          // last - previous
    double windowed_limsup = 0.0;
    double windowed_liminf = 0.0;
    bool nonincreasing = true;
    bool nondecreasing = true;
    bool degenerate = false;
};

struct ExponentOptions {
    double tolerance = 1e-3;   // bisection width on alpha
    double window = 0.5;       // tail fraction for limsup/liminf
    IntervalBackend backend = IntervalBackend::Auto;
    std::size_t grid_budget = 1024;
    unsigned threads = 0;      // 0: CANTORPACK_THREADS or hardware concurrency
};

CriticalExponent critical_exponent(const DigitRestrictedSet& set, Family family, const Weight& weight,
                                   const std::vector<Stage>& stages, const ExponentOptions& options = {});

// Worker-thread cap: CANTORPACK_THREADS if set, else hardware concurrency.
unsigned thread_cap();

}  // namespace cantorpack
