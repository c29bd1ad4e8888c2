#include "cantorpack/base_sequence.hpp"

#include "cantorpack/errors.hpp"

#include <mutex>
#include <sstream>

namespace cantorpack {

namespace mp = boost::multiprecision;

struct BaseSequence::Impl {
    Kind kind;
    std::vector<BigInt> params;
    std::size_t bit_budget;

    // Log-size of n_k for the generated kinds; cached for lists.
    std::vector<double> list_log_n;
    std::vector<double> list_log_size;

    mutable std::mutex mutex;
    mutable std::vector<BigInt> products{BigInt(1)};  // products[k] = n_1...n_k
};

BaseSequence::BaseSequence(std::shared_ptr<Impl> impl) : impl_(std::move(impl)) {}

namespace {

void require_at_least_two(const BigInt& v, const char* what) {
    if (v < 2) throw ValidationError(std::string(what) + " must be >= 2, got " + v.str());
}

}  // namespace

BaseSequence BaseSequence::constant(BigInt s, std::size_t bit_budget) {
    require_at_least_two(s, "constant base");
    auto impl = std::make_shared<Impl>();
    impl->kind = Kind::Constant;
    impl->params = {std::move(s)};
    impl->bit_budget = bit_budget;
    return BaseSequence(std::move(impl));
}

BaseSequence BaseSequence::list(std::vector<BigInt> values, std::size_t bit_budget) {
    for (const auto& v : values) require_at_least_two(v, "base entry");
    auto impl = std::make_shared<Impl>();
    impl->kind = Kind::List;
    impl->bit_budget = bit_budget;
    impl->list_log_size.push_back(0.0);
    for (const auto& v : values) {
        impl->list_log_n.push_back(log_big(v));
        impl->list_log_size.push_back(impl->list_log_size.back() + impl->list_log_n.back());
    }
    impl->params = std::move(values);
    return BaseSequence(std::move(impl));
}

BaseSequence BaseSequence::product_recursive(std::vector<BigInt> seed, std::size_t bit_budget) {
    if (seed.empty()) throw ValidationError("product-recursive base needs a nonempty seed");
    for (const auto& v : seed) require_at_least_two(v, "seed entry");
    auto impl = std::make_shared<Impl>();
    impl->kind = Kind::ProductRecursive;
    impl->bit_budget = bit_budget;
    impl->list_log_size.push_back(0.0);
    for (const auto& v : seed) {
        impl->list_log_n.push_back(log_big(v));
        impl->list_log_size.push_back(impl->list_log_size.back() + impl->list_log_n.back());
    }
    impl->params = std::move(seed);
    return BaseSequence(std::move(impl));
}

BaseSequence BaseSequence::power(BigInt b, std::size_t bit_budget) {
    require_at_least_two(b, "power base");
    auto impl = std::make_shared<Impl>();
    impl->kind = Kind::Power;
    impl->params = {std::move(b)};
    impl->bit_budget = bit_budget;
    return BaseSequence(std::move(impl));
}

BaseSequence::Kind BaseSequence::kind() const { return impl_->kind; }

std::size_t BaseSequence::available() const {
    return impl_->kind == Kind::List ? impl_->params.size() : kUnbounded;
}

std::size_t BaseSequence::bit_budget() const { return impl_->bit_budget; }

const std::vector<BigInt>& BaseSequence::parameters() const { return impl_->params; }

void BaseSequence::check_rank(std::size_t k) const {
    if (k == 0) throw DomainError("base ranks start at 1");
    if (k > available())
        throw ResolutionExceeded("rank " + std::to_string(k) + " is beyond the base prefix of length " +
                                     std::to_string(available()),
                                 available());
}

double BaseSequence::log_n(std::size_t k) const {
    check_rank(k);
    const auto& p = impl_->params;
    switch (impl_->kind) {
        case Kind::Constant:
            return log_big(p[0]);
        case Kind::List:
            return impl_->list_log_n[k - 1];
        case Kind::ProductRecursive:
            return k <= p.size() ? impl_->list_log_n[k - 1] : log_size(k - 1);
        case Kind::Power:
            return static_cast<double>(k) * log_big(p[0]);
    }
    return 0.0;
}

double BaseSequence::log_size(std::size_t k) const {
    if (k == 0) return 0.0;
    check_rank(k);
    const auto& p = impl_->params;
    switch (impl_->kind) {
        case Kind::Constant:
            return static_cast<double>(k) * log_big(p[0]);
        case Kind::List:
            return impl_->list_log_size[k];
        case Kind::ProductRecursive: {
            const std::size_t m = p.size();
            if (k <= m) return impl_->list_log_size[k];
            // L(k) = 2 L(k-1) past the seed
            return std::ldexp(impl_->list_log_size[m], static_cast<int>(k - m));
        }
        case Kind::Power: {
            const double kk = static_cast<double>(k);
            return kk * (kk + 1.0) / 2.0 * log_big(p[0]);
        }
    }
    return 0.0;
}

BigInt BaseSequence::n(std::size_t k) const {
    check_rank(k);
    const auto& p = impl_->params;
    switch (impl_->kind) {
        case Kind::Constant:
            return p[0];
        case Kind::List:
            return p[k - 1];
        case Kind::ProductRecursive:
            return k <= p.size() ? p[k - 1] : product(k - 1);
        case Kind::Power: {
            const double bits = log_n(k) / 0.6931471805599453;
            if (bits > static_cast<double>(impl_->bit_budget))
                throw ResolutionExceeded("n_" + std::to_string(k) + " exceeds the bit budget", k - 1);
            return mp::pow(p[0], static_cast<unsigned>(k));
        }
    }
    return 0;
}

bool BaseSequence::exact_available(std::size_t k) const {
    if (k > available()) return false;
    return log_size(k) / 0.6931471805599453 + 2.0 <= static_cast<double>(impl_->bit_budget);
}

BigInt BaseSequence::product(std::size_t k) const {
    if (k == 0) return 1;
    check_rank(k);
    if (!exact_available(k))
        throw ResolutionExceeded("n_1...n_" + std::to_string(k) + " exceeds the exact bit budget of " +
                                     std::to_string(impl_->bit_budget) + " bits",
                                 k);
    {
        std::lock_guard<std::mutex> lock(impl_->mutex);
        if (k < impl_->products.size()) return impl_->products[k];
    }
    // Compute outside the lock from the last cached prefix; n(i) may recurse into product().
    std::size_t start;
    BigInt acc;
    {
        std::lock_guard<std::mutex> lock(impl_->mutex);
        start = impl_->products.size() - 1;
        acc = impl_->products.back();
    }
    std::vector<BigInt> fresh;
    for (std::size_t i = start + 1; i <= k; ++i) {
        const auto& p = impl_->params;
        if (impl_->kind == Kind::ProductRecursive && i > p.size())
            acc = acc * acc;
        else
            acc *= n(i);
        fresh.push_back(acc);
    }
    std::lock_guard<std::mutex> lock(impl_->mutex);
    for (std::size_t i = 0; i < fresh.size(); ++i) {
        const std::size_t rank = start + 1 + i;
        if (rank == impl_->products.size()) impl_->products.push_back(fresh[i]);
    }
    return fresh.empty() ? impl_->products[k] : fresh.back();
}

std::size_t BaseSequence::rank_for_length(const Rational& len, std::size_t max_rank) const {
    if (len <= 0) throw DomainError("length must be positive");
    if (len >= 1) return 0;
    // log search first, then exact confirmation around the estimate
    const double target = -log_rational(len);
    std::size_t k = 0;
    while (k < max_rank && k < available() && log_size(k) < target - 1e-9) ++k;
    auto fits = [&](std::size_t r) {
        if (exact_available(r)) return Rational(1, product(r)) <= len;
        return -log_size(r) <= -target + 1e-12 * std::max(1.0, target);
    };
    while (k > 0 && fits(k - 1)) --k;
    while (!fits(k)) {
        if (k >= max_rank || k >= available())
            throw ResolutionExceeded("no rank up to " + std::to_string(k) + " reaches the requested length", k);
        ++k;
    }
    return k;
}

std::string BaseSequence::describe() const {
    std::ostringstream out;
    const auto& p = impl_->params;
    auto join = [&] {
        for (std::size_t i = 0; i < p.size(); ++i) out << (i ? "," : "") << p[i];
    };
    switch (impl_->kind) {
        case Kind::Constant:
            out << "constant(" << p[0] << ")";
            break;
        case Kind::List:
            out << "list(";
            join();
            out << ")";
            break;
        case Kind::ProductRecursive:
            out << "product_recursive(";
            join();
            out << ")";
            break;
        case Kind::Power:
            out << "power(" << p[0] << ")";
            break;
    }
    return out.str();
}

bool operator==(const BaseSequence& a, const BaseSequence& b) {
    if (a.impl_ == b.impl_) return true;
    return a.impl_->kind == b.impl_->kind && a.impl_->params == b.impl_->params;
}

}  // namespace cantorpack
