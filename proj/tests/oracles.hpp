#pragma once

// Brute-force reference computations. Nothing here uses the packing engine;
// cylinders are enumerated from their digit formula and families are
// enumerated exhaustively.

#include "cantorpack/cylinder.hpp"
#include "cantorpack/digit_set.hpp"
#include "cantorpack/measure.hpp"

#include <cmath>
#include <functional>
#include <optional>
#include <vector>

namespace oracle {

using cantorpack::BigInt;
using cantorpack::Rational;

struct Piece {
    Rational left;
    Rational right;
    long double weight;  // unpowered weight
};

inline Rational product(const std::vector<unsigned>& ns, std::size_t k) {
    Rational p = 1;
    for (std::size_t i = 0; i < k; ++i) p *= ns[i];
    return p;
}

// All words of rank k with their left endpoints, straight from the series formula.
inline void words(const std::vector<unsigned>& ns, std::size_t k,
                  const std::function<void(const std::vector<unsigned>&, const Rational&)>& fn) {
    std::vector<unsigned> w(k, 0);
    while (true) {
        Rational left = 0;
        Rational scale = 1;
        for (std::size_t i = 0; i < k; ++i) {
            scale /= ns[i];
            left += w[i] * scale;
        }
        fn(w, left);
        std::size_t i = k;
        while (i > 0 && ++w[i - 1] == ns[i - 1]) w[--i] = 0;
        if (i == 0) return;
    }
}

inline bool allowed(const std::vector<std::vector<unsigned>>& digits, const std::vector<unsigned>& w) {
    for (std::size_t i = 0; i < w.size(); ++i) {
        bool ok = false;
        for (unsigned d : digits[i]) ok = ok || d == w[i];
        if (!ok) return false;
    }
    return true;
}

inline long double to_ld(const Rational& r) { return static_cast<long double>(r.convert_to<double>()); }

// Set-meeting cylinders of rank <= K with length <= eps; weight = length or
// the product of `probs` along the word when given.
inline std::vector<Piece> eligible_cylinders(const std::vector<unsigned>& ns,
                                             const std::vector<std::vector<unsigned>>& digits, std::size_t K,
                                             const Rational& eps,
                                             const std::vector<std::vector<Rational>>* probs = nullptr) {
    std::vector<Piece> out;
    for (std::size_t k = 0; k <= K; ++k) {
        const Rational len = 1 / product(ns, k);
        if (len > eps) continue;
        words(ns, k, [&](const std::vector<unsigned>& w, const Rational& left) {
            if (!allowed(digits, w)) return;
            Rational weight = len;
            if (probs) {
                weight = 1;
                for (std::size_t i = 0; i < w.size(); ++i) weight *= (*probs)[i][w[i]];
            }
            out.push_back({left, left + len, to_ld(weight)});
        });
    }
    return out;
}

// max over pairwise disjoint (open interiors) subfamilies of sum weight^alpha,
// by exhaustive subset enumeration. Returns ln of the optimum (nullopt: 0).
inline std::optional<long double> best_family(const std::vector<Piece>& pieces, double alpha) {
    const std::size_t m = pieces.size();
    std::vector<std::vector<bool>> clash(m, std::vector<bool>(m));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            clash[i][j] = i != j && pieces[i].left < pieces[j].right && pieces[j].left < pieces[i].right;
    std::vector<long double> w(m);
    for (std::size_t i = 0; i < m; ++i) w[i] = std::pow(pieces[i].weight, static_cast<long double>(alpha));
    long double best = 0;
    std::vector<std::size_t> chosen;
    std::function<void(std::size_t, long double)> go = [&](std::size_t i, long double acc) {
        if (i == m) {
            best = std::max(best, acc);
            return;
        }
        go(i + 1, acc);
        for (std::size_t c : chosen)
            if (clash[c][i]) return;
        chosen.push_back(i);
        go(i + 1, acc + w[i]);
        chosen.pop_back();
    };
    go(0, 0);
    if (best == 0) return std::nullopt;
    return std::log(best);
}

// Grid points of rank R (left endpoints of rank-R cylinders, plus 1).
inline std::vector<Rational> grid(const std::vector<unsigned>& ns, std::size_t R) {
    std::vector<Rational> g;
    words(ns, R, [&](const std::vector<unsigned>&, const Rational& left) { g.push_back(left); });
    g.push_back(1);
    return g;
}

// Optimum over families of pairwise disjoint open intervals with endpoints on
// the rank-R grid, diameter <= eps, each containing a set-meeting rank-R
// cylinder. Search over left-to-right chains, memoized on the chain's
// right end (the best continuation from a grid point does not depend on
// how the chain got there).
inline std::optional<long double> best_grid_packing(const std::vector<unsigned>& ns,
                                                    const std::vector<std::vector<unsigned>>& digits, std::size_t R,
                                                    const Rational& eps, double alpha) {
    const auto g = grid(ns, R);
    std::vector<bool> meets(g.size() - 1);
    std::size_t idx = 0;
    words(ns, R, [&](const std::vector<unsigned>& w, const Rational&) { meets[idx++] = allowed(digits, w); });
    const std::size_t P = g.size();
    std::vector<std::optional<long double>> memo(P);
    std::function<long double(std::size_t)> go = [&](std::size_t from) -> long double {
        if (memo[from]) return *memo[from];
        long double best = 0;
        for (std::size_t a = from; a < P; ++a)
            for (std::size_t b = a + 1; b < P; ++b) {
                if (g[b] - g[a] > eps) break;
                bool hit = false;
                for (std::size_t c = a; c < b && !hit; ++c) hit = meets[c];
                if (!hit) continue;
                best = std::max(best, std::pow(to_ld(g[b] - g[a]), static_cast<long double>(alpha)) + go(b));
            }
        memo[from] = best;
        return best;
    };
    const long double best = go(0);
    if (best == 0) return std::nullopt;
    return std::log(best);
}

// Minimal-rank cylinder whose half-open span holds c and that lies strictly
// inside the open interval (lo, hi), by scanning every cylinder of each rank.
inline std::optional<std::pair<Rational, Rational>> scan_inscribe(const std::vector<unsigned>& ns, const Rational& lo,
                                                                  const Rational& hi, const Rational& c,
                                                                  std::size_t max_rank) {
    for (std::size_t k = 0; k <= max_rank; ++k) {
        const Rational len = 1 / product(ns, k);
        std::optional<std::pair<Rational, Rational>> hit;
        words(ns, k, [&](const std::vector<unsigned>&, const Rational& left) {
            if (left <= c && c < left + len && lo < left && left + len < hi) hit = {{left, left + len}};
        });
        if (hit) return hit;
    }
    return std::nullopt;
}

}  // namespace oracle
