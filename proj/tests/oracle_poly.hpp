#pragma once

// Brute-force polynomial arithmetic used as an independent oracle in tests.
// Deliberately naive: a sorted map from exponent vectors to scalars, with
// substitution done by full expansion and re-truncation. Keep this free of
// any Jet internals.

#include <map>
#include <vector>

#include "germcalc/scalar.hpp"

namespace oracle {

using germcalc::Scalar;

using Poly = std::map<std::vector<int>, Scalar>;

inline int total_degree(const std::vector<int>& e) {
    int d = 0;
    for (int v : e) d += v;
    return d;
}

inline void add_term(Poly& p, const std::vector<int>& e, const Scalar& c) {
    auto it = p.find(e);
    if (it == p.end()) {
        if (!c.is_zero()) p.emplace(e, c);
    } else {
        it->second = it->second + c;
        if (it->second.is_zero()) p.erase(it);
    }
}

inline Poly add(const Poly& a, const Poly& b) {
    Poly r = a;
    for (const auto& [e, c] : b) add_term(r, e, c);
    return r;
}

inline Poly mul(const Poly& a, const Poly& b, int truncate_at) {
    Poly r;
    for (const auto& [ea, ca] : a)
        for (const auto& [eb, cb] : b) {
            std::vector<int> e(ea.size());
            for (size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
            if (total_degree(e) > truncate_at) continue;
            add_term(r, e, ca * cb);
        }
    return r;
}

inline Poly truncate(const Poly& a, int order) {
    Poly r;
    for (const auto& [e, c] : a)
        if (total_degree(e) <= order) r.emplace(e, c);
    return r;
}

// full expansion of f(map_1,...,map_n), re-truncated
inline Poly substitute(const Poly& f, const std::vector<Poly>& map, int out_vars, int order) {
    Poly acc;
    for (const auto& [e, c] : f) {
        Poly term;
        term.emplace(std::vector<int>(out_vars, 0), c);
        for (size_t i = 0; i < map.size(); ++i)
            for (int k = 0; k < e[i]; ++k) term = mul(term, map[i], order);
        acc = add(acc, term);
    }
    return truncate(acc, order);
}

} // namespace oracle
