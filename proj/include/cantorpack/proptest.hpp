#pragma once

// Randomized invariant suite over small bases. Deterministic for a given
// seed; failures are shrunk by halving the depth and the base entries.

#include "cantorpack/digit_set.hpp"
#include "cantorpack/numeric.hpp"

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

namespace cantorpack {

struct PropCase {
    std::vector<unsigned> base;                  // n_1..n_depth
    std::vector<std::vector<unsigned>> allowed;  // allowed digits per rank
    std::vector<std::vector<unsigned>> subset;   // pointwise subset of allowed
    std::size_t depth = 1;
    Rational eps;
    Rational eps_larger;
    double alpha = 1.0;
    double alpha_step = 0.1;

    DigitRestrictedSet set() const;
    DigitRestrictedSet subset_set() const;
    std::string describe() const;
};

struct PropFailure {
    std::string invariant;
    std::string detail;
    std::size_t case_index;
    PropCase original;
    PropCase minimized;
};

struct PropOptions {
    std::size_t cases = 200;
    std::size_t max_depth = 5;
    unsigned max_base = 4;
    std::size_t grid_budget = 1024;
};

struct PropReport {
    std::uint64_t seed = 0;
    std::size_t cases = 0;
    std::map<std::string, std::size_t> checked;  // invariant -> number of checks
    std::vector<PropFailure> failures;
};

// mt19937_64 output is fixed by the standard, so cases are portable.
PropCase random_case(std::mt19937_64& rng, const PropOptions& options);

// Invariant names in evaluation order.
const std::vector<std::string>& invariant_names();

// Empty string when the invariant holds on the case, else a diagnostic.
std::string check_invariant(const std::string& name, const PropCase& c, const PropOptions& options);

// Smallest case (by halving depth and base) on which the invariant still fails.
PropCase shrink(const std::string& name, const PropCase& c, const PropOptions& options);

PropReport run_property_suite(std::uint64_t seed, const PropOptions& options = {});

}  // namespace cantorpack
