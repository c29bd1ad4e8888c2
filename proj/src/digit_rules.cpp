#include "cantorpack/digit_rules.hpp"

#include "cantorpack/errors.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace cantorpack {

namespace {

std::vector<BigInt> sorted_unique(std::vector<BigInt> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

bool contains_sorted(const std::vector<BigInt>& v, const BigInt& d) {
    return std::binary_search(v.begin(), v.end(), d);
}

std::string join(const std::vector<BigInt>& v) {
    std::ostringstream out;
    for (std::size_t i = 0; i < v.size(); ++i) out << (i ? "," : "") << v[i];
    return out.str();
}

}  // namespace

bool in_sqrt_lattice(const BigInt& d, const BigInt& n) {
    const BigInt m = isqrt(n);
    if (m < 1 || d < 0) return false;
    return d % m == 0 && d / m < m;
}

DigitRule DigitRule::explicit_digits(std::vector<BigInt> digits) {
    return {Kind::Explicit, sorted_unique(std::move(digits))};
}

void DigitRule::validate(const BigInt& n) const {
    switch (kind) {
        case Kind::All:
            return;
        case Kind::Explicit:
            if (digits.empty()) throw ValidationError("explicit digit rule allows no digit");
            if (digits.front() < 0 || digits.back() >= n)
                throw ValidationError("explicit digit rule {" + join(digits) + "} outside [0, " + (n - 1).str() +
                                      "]");
            return;
        case Kind::SqrtLattice:
            if (n < 4) throw ValidationError("sqrt-lattice rule needs n >= 4, got n = " + n.str());
            return;
    }
}

bool DigitRule::allows(const BigInt& d, const BigInt& n) const {
    if (d < 0 || d >= n) return false;
    switch (kind) {
        case Kind::All:
            return true;
        case Kind::Explicit:
            return contains_sorted(digits, d);
        case Kind::SqrtLattice:
            return in_sqrt_lattice(d, n);
    }
    return false;
}

BigInt DigitRule::count(const BigInt& n) const {
    switch (kind) {
        case Kind::All:
            return n;
        case Kind::Explicit:
            return BigInt(digits.size());
        case Kind::SqrtLattice:
            return isqrt(n);
    }
    return 0;
}

std::vector<BigInt> DigitRule::enumerate(const BigInt& n, std::size_t limit) const {
    if (count(n) > limit) throw ResolutionExceeded("digit rule too large to enumerate", 0);
    std::vector<BigInt> out;
    switch (kind) {
        case Kind::All:
            for (BigInt d = 0; d < n; ++d) out.push_back(d);
            break;
        case Kind::Explicit:
            out = digits;
            break;
        case Kind::SqrtLattice: {
            const BigInt m = isqrt(n);
            for (BigInt j = 0; j < m; ++j) out.push_back(j * m);
            break;
        }
    }
    return out;
}

BigInt DigitRule::min_digit(const BigInt&) const {
    return kind == Kind::Explicit ? digits.front() : BigInt(0);
}

BigInt DigitRule::max_digit(const BigInt& n) const {
    switch (kind) {
        case Kind::All:
            return n - 1;
        case Kind::Explicit:
            return digits.back();
        case Kind::SqrtLattice: {
            const BigInt m = isqrt(n);
            return (m - 1) * m;
        }
    }
    return 0;
}

std::string DigitRule::describe() const {
    switch (kind) {
        case Kind::All:
            return "all";
        case Kind::Explicit:
            return "{" + join(digits) + "}";
        case Kind::SqrtLattice:
            return "sqrt_lattice";
    }
    return "?";
}

DigitLaw DigitLaw::uniform_on_subset(std::vector<BigInt> digits) {
    return {Kind::UniformOnSubset, sorted_unique(std::move(digits)), {}};
}

void DigitLaw::validate(const BigInt& n) const {
    switch (kind) {
        case Kind::Uniform:
            return;
        case Kind::UniformOnLattice:
            if (n < 4) throw ValidationError("lattice-uniform law needs n >= 4, got n = " + n.str());
            return;
        case Kind::UniformOnSubset:
            if (digits.empty()) throw ValidationError("uniform law on an empty digit subset");
            if (digits.front() < 0 || digits.back() >= n)
                throw ValidationError("uniform-law digits {" + join(digits) + "} outside [0, " + (n - 1).str() + "]");
            return;
        case Kind::Dirac:
            if (digits.size() != 1 || digits[0] < 0 || digits[0] >= n)
                throw ValidationError("Dirac law digit outside [0, " + (n - 1).str() + "]");
            return;
        case Kind::Explicit: {
            if (BigInt(probs.size()) != n)
                throw ValidationError("explicit law has " + std::to_string(probs.size()) + " entries for n = " +
                                      n.str());
            Rational total = 0;
            for (const auto& p : probs) {
                if (p < 0) throw ValidationError("negative digit probability");
                total += p;
            }
            if (total != 1) throw ValidationError("digit probabilities sum to " + to_string(total) + ", not 1");
            return;
        }
    }
}

Rational DigitLaw::prob(const BigInt& d, const BigInt& n) const {
    if (d < 0 || d >= n) return 0;
    switch (kind) {
        case Kind::Uniform:
            return Rational(BigInt(1), n);
        case Kind::UniformOnLattice:
            return in_sqrt_lattice(d, n) ? Rational(BigInt(1), isqrt(n)) : Rational(0);
        case Kind::UniformOnSubset:
            return contains_sorted(digits, d) ? Rational(BigInt(1), BigInt(digits.size())) : Rational(0);
        case Kind::Dirac:
            return d == digits[0] ? Rational(1) : Rational(0);
        case Kind::Explicit:
            return probs[static_cast<std::size_t>(d)];
    }
    return 0;
}

Rational DigitLaw::max_prob(const BigInt& n) const {
    switch (kind) {
        case Kind::Uniform:
            return Rational(BigInt(1), n);
        case Kind::UniformOnLattice:
            return Rational(BigInt(1), isqrt(n));
        case Kind::UniformOnSubset:
            return Rational(BigInt(1), BigInt(digits.size()));
        case Kind::Dirac:
            return 1;
        case Kind::Explicit:
            return *std::max_element(probs.begin(), probs.end());
    }
    return 0;
}

std::string DigitLaw::describe() const {
    switch (kind) {
        case Kind::Uniform:
            return "uniform";
        case Kind::UniformOnLattice:
            return "uniform_lattice";
        case Kind::UniformOnSubset:
            return "uniform{" + join(digits) + "}";
        case Kind::Dirac:
            return "dirac(" + digits[0].str() + ")";
        case Kind::Explicit: {
            std::string s = "probs[";
            for (std::size_t i = 0; i < probs.size(); ++i) s += (i ? "," : "") + to_string(probs[i]);
            return s + "]";
        }
    }
    return "?";
}

std::vector<DigitClass> digit_classes(const BigInt& n, const std::vector<const DigitRule*>& rules,
                                      const std::vector<const DigitLaw*>& laws, double log_n) {
    std::set<BigInt> special;
    bool lattice = false;
    for (const auto* r : rules) {
        if (r->kind == DigitRule::Kind::Explicit) special.insert(r->digits.begin(), r->digits.end());
        if (r->kind == DigitRule::Kind::SqrtLattice) lattice = true;
    }
    for (const auto* l : laws) {
        switch (l->kind) {
            case DigitLaw::Kind::UniformOnSubset:
            case DigitLaw::Kind::Dirac:
                special.insert(l->digits.begin(), l->digits.end());
                break;
            case DigitLaw::Kind::Explicit:
                for (BigInt d = 0; d < n; ++d) special.insert(d);
                break;
            case DigitLaw::Kind::UniformOnLattice:
                lattice = true;
                break;
            case DigitLaw::Kind::Uniform:
                break;
        }
    }
    std::vector<DigitClass> out;
    std::size_t special_in_lattice = 0;
    for (const auto& d : special) {
        if (d < 0 || d >= n) continue;
        out.push_back({d, BigInt(1), 0.0});
        if (lattice && in_sqrt_lattice(d, n)) ++special_in_lattice;
    }
    const std::size_t singles = out.size();
    BigInt lattice_rest = 0;
    if (lattice) {
        const BigInt m = isqrt(n);
        lattice_rest = m - special_in_lattice;
        if (lattice_rest > 0) {
            BigInt j = 0;
            while (special.count(j * m)) ++j;
            out.push_back({j * m, lattice_rest, log_big(lattice_rest)});
        }
    }
    const BigInt rest = n - BigInt(singles) - lattice_rest;
    if (rest > 0) {
        BigInt d = 0;
        while (special.count(d) || (lattice && in_sqrt_lattice(d, n))) ++d;
        const double lc = rest == n ? log_n : log_big(rest);
        out.push_back({d, rest, lc});
    }
    return out;
}

}  // namespace cantorpack
